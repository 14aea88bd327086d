//! Small numerical helpers: angle wrapping, least squares, root bracketing.

use std::f64::consts::PI;

/// Wrap an angle into [-π, π]. Values already inside (including both
/// endpoints) are returned untouched, so the map is idempotent and the
/// endpoints ±π stay distinct.
pub fn wrap_angle(x: f64) -> f64 {
    if (-PI..=PI).contains(&x) {
        return x;
    }
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    // rem_euclid puts us in [-π, π); nothing else to fix up.
    y
}

/// Principal value of an angle difference, in (-π, π].
pub fn principal(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Ordinary least squares y = a + b x.
///
/// Returns (intercept, slope, r_squared, slope_stderr).
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64, f64) {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(u, v)| (u - mx) * (v - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(u, v)| {
            let e = v - (a + b * u);
            e * e
        })
        .sum();
    let ss_tot: f64 = y.iter().map(|v| (v - my) * (v - my)).sum();
    let r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    let dof = (x.len().max(3) - 2) as f64;
    let se = (ss_res / dof / sxx).sqrt();
    (a, b, r2, se)
}

/// Least squares for y = a + b x + c x^2 via the 3x3 normal equations.
///
/// Returns (a, b, c, r_squared).
pub fn quadratic_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64, f64) {
    assert_eq!(x.len(), y.len());
    let mut s = [0.0f64; 5];
    let mut t = [0.0f64; 3];
    for (&xi, &yi) in x.iter().zip(y) {
        let mut p = 1.0;
        for (j, sj) in s.iter_mut().enumerate() {
            *sj += p;
            if j < 3 {
                t[j] += p * yi;
            }
            p *= xi;
        }
    }
    let m = [
        [s[0], s[1], s[2]],
        [s[1], s[2], s[3]],
        [s[2], s[3], s[4]],
    ];
    let coef = solve3(m, t);
    let my = y.iter().sum::<f64>() / y.len() as f64;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        let f = coef[0] + coef[1] * xi + coef[2] * xi * xi;
        ss_res += (yi - f) * (yi - f);
        ss_tot += (yi - my) * (yi - my);
    }
    let r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    (coef[0], coef[1], coef[2], r2)
}

/// Solve a 3x3 linear system by Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
fn solve3(mut m: [[f64; 3]; 3], mut b: [f64; 3]) -> [f64; 3] {
    for col in 0..3 {
        let piv = (col..3)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        m.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for c in col..3 {
                m[row][c] -= f * m[col][c];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut acc = b[row];
        for c in row + 1..3 {
            acc -= m[row][c] * x[c];
        }
        x[row] = acc / m[row][row];
    }
    x
}

/// Log-log slope fit; returns (slope, r_squared, slope_stderr).
pub fn log_log_slope(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let (_, slope, r2, se) = linear_fit(&lx, &ly);
    (slope, r2, se)
}

/// Bisection on a sign change of `f` over [lo, hi]; requires f(lo)*f(hi) <= 0.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if fmid == 0.0 || hi - lo < tol {
            return Some(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Golden-section minimization of `f` on [lo, hi].
pub fn golden_min<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INVPHI * (hi - lo);
    let mut x2 = lo + INVPHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INVPHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INVPHI * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_is_idempotent_and_keeps_endpoints() {
        for &x in &[-PI, PI, 0.0, 2.5, -2.5, 4.0, -4.0, 7.5, 100.0] {
            let w = wrap_angle(x);
            assert!((-PI..=PI).contains(&w), "{x} -> {w}");
            assert_eq!(wrap_angle(w), w);
        }
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), -PI);
        assert!((wrap_angle(3.0 * PI).abs() - PI).abs() < 2e-15);
    }

    #[test]
    fn linear_fit_recovers_exact_line() {
        let x: Vec<f64> = (0..40).map(|i| i as f64 * 0.1).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 - 3.0 * v).collect();
        let (a, b, r2, se) = linear_fit(&x, &y);
        assert!((a - 2.0).abs() < 1e-12);
        assert!((b + 3.0).abs() < 1e-12);
        assert!((r2 - 1.0).abs() < 1e-12);
        assert!(se < 1e-10);
    }

    #[test]
    fn quadratic_fit_recovers_exact_parabola() {
        let x: Vec<f64> = (0..50).map(|i| -1.0 + i as f64 * 0.04).collect();
        let y: Vec<f64> = x.iter().map(|v| 0.5 + 1.5 * v - 2.0 * v * v).collect();
        let (a, b, c, r2) = quadratic_fit(&x, &y);
        assert!((a - 0.5).abs() < 1e-10);
        assert!((b - 1.5).abs() < 1e-10);
        assert!((c + 2.0).abs() < 1e-10);
        assert!((r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bisect_finds_cosine_root() {
        let r = bisect(|x| x.cos(), 0.0, 3.0, 1e-14).unwrap();
        assert!((r - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn golden_finds_parabola_minimum() {
        let m = golden_min(|x| (x - 0.7) * (x - 0.7), -1.0, 2.0, 1e-12);
        assert!((m - 0.7).abs() < 1e-9);
    }
}
