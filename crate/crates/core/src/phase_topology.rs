//! Winding numbers, the gapped phase diagram, critical lines and
//! multicritical points.
//!
//! The winding number w = (1/2π) ∮ dθ_k with θ_k = atan2(d₃, d₂) counts the
//! loops of the winding vector around the origin as k crosses the Brillouin
//! zone. It is accumulated from branch-safe principal-value increments, so
//! θ_k branch cuts cannot corrupt it.
//!
//! Gap closings organize into eight straight critical lines in the (θ₁, θ₂)
//! plane: three "red" and two "blue" high-symmetry families (closings pinned
//! to k₀ ∈ {0, ±π}) and three "orange/purple" families whose closings sit at
//! non-high-symmetry momenta cos k₀ = ±1/(2cosθ₁). Pairwise intersections of
//! the lines give thirteen multicritical points, eight with quadratic and
//! five with linear dispersion.

use rayon::prelude::*;
use std::f64::consts::PI;

use crate::numerics::{bisect, golden_min, linear_fit};
use crate::walk_core::{bloch_derivative, bloch_vector, gap_at, CoinAngles, Momentum};
use crate::{Error, Result};

/// Minimum gap required before a phase counts as gapped.
pub const GAPPED_MIN_GAP: f64 = 1e-6;

/// Critical-line family, named by the gap-closing momenta it carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LineFamily {
    /// E = 0 closes at k₀ = 0 and E = ±π at k₀ = ±π.
    RedHs,
    /// E = 0 closes at k₀ = ±π and E = ±π at k₀ = 0.
    BlueHs,
    /// Closings at non-high-symmetry momenta (within the gapless sub-domain).
    OrangePurpleNhs,
}

impl LineFamily {
    pub fn label(&self) -> &'static str {
        match self {
            LineFamily::RedHs => "red",
            LineFamily::BlueHs => "blue",
            LineFamily::OrangePurpleNhs => "orange-purple",
        }
    }
}

/// One critical line θ₂ = a·θ₁ + b on its θ₁ domain.
#[derive(Debug, Clone, Copy)]
pub struct CriticalLine {
    pub family: LineFamily,
    pub branch_id: usize,
    pub slope: f64,
    pub intercept: f64,
    pub theta1_domain: (f64, f64),
    /// Short name used by the command-line driver.
    pub name: &'static str,
}

impl CriticalLine {
    /// θ₂ on the line at the given θ₁.
    pub fn map(&self, theta1: f64) -> f64 {
        self.slope * theta1 + self.intercept
    }

    pub fn contains_theta1(&self, theta1: f64) -> bool {
        theta1 >= self.theta1_domain.0 - 1e-12 && theta1 <= self.theta1_domain.1 + 1e-12
    }

    pub fn angles_at(&self, theta1: f64) -> CoinAngles {
        CoinAngles::new(theta1, self.map(theta1))
    }

    /// For the orange/purple families the line is gapless only where
    /// |cosθ₁| ≥ 1/2; red and blue lines are gapless on their whole domain.
    pub fn in_gapless_subdomain(&self, theta1: f64) -> bool {
        if !self.contains_theta1(theta1) {
            return false;
        }
        match self.family {
            LineFamily::OrangePurpleNhs => theta1.cos().abs() >= 0.5 - 1e-12,
            _ => true,
        }
    }
}

/// The eight critical lines, in the fixed order
/// red1, red2, red3, blue1, blue2, op1, op2, op3.
pub fn critical_lines() -> Vec<CriticalLine> {
    vec![
        CriticalLine {
            family: LineFamily::RedHs,
            branch_id: 0,
            slope: -0.5,
            intercept: PI,
            theta1_domain: (0.0, PI),
            name: "red1",
        },
        CriticalLine {
            family: LineFamily::RedHs,
            branch_id: 1,
            slope: -0.5,
            intercept: 0.0,
            theta1_domain: (-PI, PI),
            name: "red2",
        },
        CriticalLine {
            family: LineFamily::RedHs,
            branch_id: 2,
            slope: -0.5,
            intercept: -PI,
            theta1_domain: (-PI, 0.0),
            name: "red3",
        },
        CriticalLine {
            family: LineFamily::BlueHs,
            branch_id: 0,
            slope: -0.5,
            intercept: PI / 2.0,
            theta1_domain: (-PI, PI),
            name: "blue1",
        },
        CriticalLine {
            family: LineFamily::BlueHs,
            branch_id: 1,
            slope: -0.5,
            intercept: -PI / 2.0,
            theta1_domain: (-PI, PI),
            name: "blue2",
        },
        CriticalLine {
            family: LineFamily::OrangePurpleNhs,
            branch_id: 0,
            slope: 1.0,
            intercept: 0.0,
            theta1_domain: (-PI, PI),
            name: "op1",
        },
        CriticalLine {
            family: LineFamily::OrangePurpleNhs,
            branch_id: 1,
            slope: 1.0,
            intercept: PI,
            theta1_domain: (-PI, 0.0),
            name: "op2",
        },
        CriticalLine {
            family: LineFamily::OrangePurpleNhs,
            branch_id: 2,
            slope: 1.0,
            intercept: -PI,
            theta1_domain: (0.0, PI),
        name: "op3",
        },
    ]
}

/// Look a line up by its driver name (red1..red3, blue1, blue2, op1..op3).
pub fn line_by_name(name: &str) -> Option<CriticalLine> {
    critical_lines().into_iter().find(|l| l.name == name)
}

/// Winding-number evaluation on a closed k loop.
#[derive(Debug, Clone, Copy)]
pub struct WindingResult {
    pub w_raw: f64,
    pub w: i32,
    pub residual: f64,
    pub grid_size: usize,
}

/// Accumulate the total angle swept by (d₂, d₃) over a closed loop of
/// `n_grid` segments. Each increment is the principal-value angle between
/// consecutive samples, so no branch of θ_k is ever needed.
fn winding_raw(angles: CoinAngles, n_grid: usize) -> f64 {
    let mut total = 0.0;
    let mut prev = bloch_vector(angles, Momentum::new(-PI));
    for i in 1..=n_grid {
        let k = -PI + 2.0 * PI * i as f64 / n_grid as f64;
        let cur = bloch_vector(angles, Momentum::new(k));
        // angle between (d2, d3)_prev and (d2, d3)_cur via atan2(cross, dot)
        let cross = prev.d2 * cur.d3 - prev.d3 * cur.d2;
        let dot = prev.d2 * cur.d2 + prev.d3 * cur.d3;
        total += cross.atan2(dot);
        prev = cur;
    }
    total / (2.0 * PI)
}

/// Winding number of a gapped phase.
///
/// Fails with [`Error::GaplessInput`] when the refined minimum gap over the
/// Brillouin zone is below `GAPPED_MIN_GAP`; critical phases need the
/// excluded-neighborhood winding in the observables module instead.
pub fn winding_number(angles: CoinAngles, n_grid: usize) -> Result<WindingResult> {
    let (min_gap, k0) = min_gap_over_k(angles, 1024);
    if min_gap < GAPPED_MIN_GAP {
        return Err(Error::GaplessInput { min_gap, k0 });
    }
    let w_raw = winding_raw(angles, n_grid);
    let w = w_raw.round() as i32;
    Ok(WindingResult {
        w_raw,
        w,
        residual: (w_raw - w as f64).abs(),
        grid_size: n_grid,
    })
}

/// Refined minimum of gap_at over the Brillouin zone: coarse scan of |d₀|
/// followed by golden-section polish around the best bracket.
///
/// Returns (gap, argmin momentum).
pub fn min_gap_over_k(angles: CoinAngles, n_coarse: usize) -> (f64, f64) {
    let mut best = f64::INFINITY;
    let mut best_i = 0usize;
    for i in 0..n_coarse {
        let k = -PI + 2.0 * PI * i as f64 / n_coarse as f64;
        let v = -bloch_vector(angles, Momentum::new(k)).d0.abs();
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let h = 2.0 * PI / n_coarse as f64;
    let k_best = -PI + best_i as f64 * h;
    let f = |k: f64| -bloch_vector(angles, Momentum::new(k)).d0.abs();
    let k_min = golden_min(f, k_best - h, k_best + h, 1e-13);
    (gap_at(angles, Momentum::new(k_min)), k_min)
}

/// High-symmetry vs non-high-symmetry momentum label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentumClass {
    HighSymmetry,
    NonHighSymmetry,
}

/// Which quasi-energy the bands touch at a closing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapBranch {
    /// d₀ = +1, bands touch at E = 0.
    Zero,
    /// d₀ = -1, bands touch at E = ±π.
    Pi,
}

/// One gap-closing momentum on a critical line.
#[derive(Debug, Clone, Copy)]
pub struct GapClosing {
    pub k0: f64,
    pub class: MomentumClass,
    pub branch: GapBranch,
}

const HS_MOMENTA: [f64; 3] = [-PI, 0.0, PI];

fn classify_momentum(k0: f64) -> MomentumClass {
    if HS_MOMENTA.iter().any(|&h| (k0 - h).abs() < 1e-6) {
        MomentumClass::HighSymmetry
    } else {
        MomentumClass::NonHighSymmetry
    }
}

/// All gap closings of the walk at fixed coin angles.
///
/// |d₀| ≤ 1 makes every closing a tangential zero of 1 - |d₀|, so closings
/// are located as extrema of d₀: the derivative’s sign changes are bisected
/// and an extremum is accepted when its refined gap is below `tol`.
pub fn gap_closings_at(angles: CoinAngles, tol: f64) -> Vec<GapClosing> {
    let n = 4096usize;
    let dp = |k: f64| bloch_derivative(angles, Momentum::new(k)).d0;
    let mut candidates: Vec<f64> = Vec::new();
    // HS momenta are always extrema of d₀ (it is even in k around them).
    candidates.extend_from_slice(&[0.0, PI]);
    let mut prev_k = -PI;
    let mut prev = dp(prev_k);
    for i in 1..=n {
        let k = -PI + 2.0 * PI * i as f64 / n as f64;
        let cur = dp(k);
        if prev == 0.0 {
            candidates.push(prev_k);
        } else if prev.signum() != cur.signum() {
            if let Some(root) = bisect(dp, prev_k, k, 1e-13) {
                candidates.push(root);
            }
        }
        prev_k = k;
        prev = cur;
    }
    let mut out: Vec<GapClosing> = Vec::new();
    for k0 in candidates {
        let g = gap_at(angles, Momentum::new(k0));
        if g > tol {
            continue;
        }
        let k0 = if (k0 - PI).abs() < 1e-9 {
            PI
        } else if (k0 + PI).abs() < 1e-9 {
            -PI
        } else {
            k0
        };
        let d0 = bloch_vector(angles, Momentum::new(k0)).d0;
        let closing = GapClosing {
            k0,
            class: classify_momentum(k0),
            branch: if d0 > 0.0 {
                GapBranch::Zero
            } else {
                GapBranch::Pi
            },
        };
        if !out.iter().any(|c| (c.k0 - closing.k0).abs() < 1e-7) {
            out.push(closing);
        }
    }
    // k = π is the same BZ point as -π; keep both labels only if π present.
    if out.iter().any(|c| (c.k0 - PI).abs() < 1e-9) && !out.iter().any(|c| (c.k0 + PI).abs() < 1e-9)
    {
        let pi_closing = *out.iter().find(|c| (c.k0 - PI).abs() < 1e-9).unwrap();
        out.push(GapClosing {
            k0: -PI,
            ..pi_closing
        });
    }
    out.sort_by(|a, b| a.k0.total_cmp(&b.k0));
    out
}

/// Gap-closing momenta on a critical line at parameter θ₁ᶜ.
///
/// An empty result signals the gapped sub-domain of the orange/purple lines.
pub fn gap_closing_momenta(line: &CriticalLine, theta1c: f64, tol: f64) -> Result<Vec<GapClosing>> {
    if !line.contains_theta1(theta1c) {
        return Err(Error::InvalidParameter(format!(
            "theta1 = {theta1c} outside domain of line {}",
            line.name
        )));
    }
    Ok(gap_closings_at(line.angles_at(theta1c), tol))
}

/// Dispersion kind at a multicritical point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DispersionKind {
    /// E ∝ |δk|, dynamical exponent z = 1.
    Linear,
    /// E ∝ δk², dynamical exponent z = 2.
    Quadratic,
}

/// Intersection point of two critical lines.
#[derive(Debug, Clone)]
pub struct MulticriticalPoint {
    pub angles: CoinAngles,
    pub kind: DispersionKind,
    /// Indices of the parent lines in the [`critical_lines`] ordering.
    pub parent_lines: (usize, usize),
    pub gap_closing_momenta: Vec<GapClosing>,
    /// Fitted dynamical exponent used for the kind assignment.
    pub z: f64,
}

/// Log-log dispersion exponent z (E ∝ δk^z) around one closing momentum.
///
/// Fits 50 log-spaced offsets in [window/100, window]; rejects fits with
/// r² < 0.99.
pub fn dispersion_exponent_at(angles: CoinAngles, k0: f64, fit_window: f64) -> Result<f64> {
    if !(0.0 < fit_window && fit_window <= 0.1) {
        return Err(Error::InvalidParameter(format!(
            "fit window {fit_window} outside (0, 0.1]"
        )));
    }
    let e0 = {
        let d0 = bloch_vector(angles, Momentum::new(k0)).d0;
        d0.clamp(-1.0, 1.0).acos()
    };
    let n = 50;
    let lo = (fit_window / 100.0).ln();
    let hi = fit_window.ln();
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for i in 0..n {
        let dk = (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp();
        let d0 = bloch_vector(angles, Momentum::new(k0 + dk)).d0;
        let e = d0.clamp(-1.0, 1.0).acos();
        let de = (e - e0).abs();
        if de > 0.0 {
            xs.push(dk.ln());
            ys.push(de.ln());
        }
    }
    let (_, z, r2, _) = linear_fit(&xs, &ys);
    if r2 < 0.99 {
        return Err(Error::FitRejected {
            reason: "dispersion fit not a clean power law".into(),
            r_squared: r2,
        });
    }
    Ok(z)
}

/// Dynamical exponent of a multicritical point (first closing momentum,
/// default window 0.05 when `fit_window` is not given by the caller).
pub fn dynamical_exponent(mc: &MulticriticalPoint, fit_window: f64) -> Result<f64> {
    let k0 = mc
        .gap_closing_momenta
        .first()
        .map(|c| c.k0)
        .ok_or_else(|| Error::InvalidParameter("multicritical point without closings".into()))?;
    dispersion_exponent_at(mc.angles, k0, fit_window)
}

/// All multicritical points, generated from pairwise line intersections.
///
/// Red/blue lines share slope -1/2 and never intersect each other; the
/// thirteen points all come from {red, blue} × {orange/purple} pairs whose
/// solution lands inside both θ₁ domains.
pub fn multicritical_points() -> Vec<MulticriticalPoint> {
    let lines = critical_lines();
    let mut points: Vec<(f64, f64, usize, usize)> = Vec::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (a, b) = (&lines[i], &lines[j]);
            if (a.slope - b.slope).abs() < 1e-12 {
                continue;
            }
            let theta1 = (b.intercept - a.intercept) / (a.slope - b.slope);
            if !a.contains_theta1(theta1) || !b.contains_theta1(theta1) {
                continue;
            }
            let theta2 = a.map(theta1);
            if points
                .iter()
                .any(|p| (p.0 - theta1).abs() < 1e-9 && (p.1 - theta2).abs() < 1e-9)
            {
                continue;
            }
            points.push((theta1, theta2, i, j));
        }
    }
    points.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
    points
        .into_iter()
        .map(|(t1, t2, i, j)| {
            let angles = CoinAngles::new(t1, t2);
            let closings = gap_closings_at(angles, 1e-6);
            let z = closings
                .first()
                .and_then(|c| dispersion_exponent_at(angles, c.k0, 0.05).ok())
                .unwrap_or(f64::NAN);
            let kind = if (z - 1.0).abs() < (z - 2.0).abs() {
                DispersionKind::Linear
            } else {
                DispersionKind::Quadratic
            };
            MulticriticalPoint {
                angles,
                kind,
                parent_lines: (i, j),
                gap_closing_momenta: closings,
                z,
            }
        })
        .collect()
}

/// One cell of the phase diagram.
#[derive(Debug, Clone, Copy)]
pub struct PhaseCell {
    pub theta1: f64,
    pub theta2: f64,
    /// None on gapless cells.
    pub w: Option<i32>,
    pub w_raw: Option<f64>,
    pub min_gap: f64,
    /// Index of the nearest critical line and the distance to it.
    pub nearest_line: usize,
    pub line_distance: f64,
}

/// Phase diagram over the (θ₁, θ₂) torus.
#[derive(Debug, Clone)]
pub struct PhaseDiagram {
    pub resolution: usize,
    pub k_grid: usize,
    /// Grid spacing.
    pub h: f64,
    pub cells: Vec<PhaseCell>,
}

impl PhaseDiagram {
    pub fn theta(&self, i: usize) -> f64 {
        -PI + 2.0 * PI * i as f64 / (self.resolution - 1) as f64
    }

    pub fn cell(&self, i1: usize, i2: usize) -> &PhaseCell {
        &self.cells[i1 * self.resolution + i2]
    }

    /// A cell is gapless when it hugs a critical line (within one grid
    /// spacing) and its spectrum confirms a small gap.
    pub fn is_gapless(&self, cell: &PhaseCell) -> bool {
        cell.w.is_none()
    }
}

/// Perpendicular distance from (θ₁, θ₂) to the nearest critical-line
/// segment; returns (line index, distance).
pub fn distance_to_lines(lines: &[CriticalLine], theta1: f64, theta2: f64) -> (usize, f64) {
    let mut best = (0usize, f64::INFINITY);
    for (idx, line) in lines.iter().enumerate() {
        // clamp the foot of the perpendicular into the θ₁ domain
        let denom = 1.0 + line.slope * line.slope;
        let foot = (theta1 + line.slope * (theta2 - line.intercept)) / denom;
        let t1 = foot.clamp(line.theta1_domain.0, line.theta1_domain.1);
        let d = ((theta1 - t1).powi(2) + (theta2 - line.map(t1)).powi(2)).sqrt();
        if d < best.1 {
            best = (idx, d);
        }
    }
    best
}

/// Compute the phase diagram on a `resolution`² grid with `k_grid` winding
/// points per cell. Cells are evaluated in parallel and merged by index.
pub fn phase_diagram(resolution: usize, k_grid: usize) -> Result<PhaseDiagram> {
    if resolution < 64 {
        return Err(Error::InvalidParameter(format!(
            "resolution {resolution} below minimum 64"
        )));
    }
    let lines = critical_lines();
    let h = 2.0 * PI / (resolution - 1) as f64;
    let gap_veto = 10.0 * h;
    let cells: Vec<PhaseCell> = (0..resolution * resolution)
        .into_par_iter()
        .map(|idx| {
            let i1 = idx / resolution;
            let i2 = idx % resolution;
            let theta1 = -PI + i1 as f64 * h;
            let theta2 = -PI + i2 as f64 * h;
            let angles = CoinAngles::new(theta1, theta2);
            let (min_gap, _) = min_gap_over_k(angles, 1024);
            let (nearest_line, line_distance) = distance_to_lines(&lines, theta1, theta2);
            let gapless = line_distance < h && min_gap < gap_veto;
            let (w, w_raw) = if gapless {
                (None, None)
            } else {
                let raw = winding_raw(angles, k_grid);
                (Some(raw.round() as i32), Some(raw))
            };
            PhaseCell {
                theta1,
                theta2,
                w,
                w_raw,
                min_gap,
                nearest_line,
                line_distance,
            }
        })
        .collect();
    Ok(PhaseDiagram {
        resolution,
        k_grid,
        h,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn line_catalog_examples() {
        let lines = critical_lines();
        assert_eq!(lines.len(), 8);
        let red2 = line_by_name("red2").unwrap();
        assert_abs_diff_eq!(red2.map(PI / 2.0), -PI / 4.0, epsilon = 1e-15);
        let op1 = line_by_name("op1").unwrap();
        assert_abs_diff_eq!(op1.map(PI / 4.0), PI / 4.0, epsilon = 1e-15);
        let red1 = line_by_name("red1").unwrap();
        assert_abs_diff_eq!(red1.map(0.0), PI, epsilon = 1e-15);
        assert_abs_diff_eq!(red1.map(PI), PI / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn lines_are_gapless_on_their_gapless_subdomains() {
        let mut r = ChaCha8Rng::seed_from_u64(11);
        for line in critical_lines() {
            let mut worst: f64 = 0.0;
            let mut tested = 0;
            while tested < 100 {
                let t1 = r.gen_range(line.theta1_domain.0..line.theta1_domain.1);
                if !line.in_gapless_subdomain(t1) {
                    continue;
                }
                let (gap, _) = min_gap_over_k(line.angles_at(t1), 2048);
                worst = worst.max(gap);
                tested += 1;
            }
            assert!(worst < 1e-6, "line {} worst min-gap {worst:e}", line.name);
        }
    }

    #[test]
    fn off_line_samples_are_gapped() {
        let mut r = ChaCha8Rng::seed_from_u64(12);
        let lines = critical_lines();
        let mut tested = 0;
        while tested < 200 {
            let t1 = r.gen_range(-PI..PI);
            let t2 = r.gen_range(-PI..PI);
            let (_, dist) = distance_to_lines(&lines, t1, t2);
            if dist < 0.05 {
                continue;
            }
            let (gap, _) = min_gap_over_k(CoinAngles::new(t1, t2), 1024);
            assert!(gap > 1e-3, "({t1}, {t2}) dist {dist} gap {gap:e}");
            tested += 1;
        }
    }

    #[test]
    fn winding_single_loop_example() {
        let w = winding_number(CoinAngles::new(PI / 2.0, PI / 2.0), 4096).unwrap();
        assert_eq!(w.w, -1);
        assert!(w.residual < 1e-3);
    }

    #[test]
    fn winding_matches_dense_oracle() {
        // Oracle: the same accumulation on a 10^6-point loop.
        let angles = CoinAngles::new(0.7, -0.3);
        let coarse = winding_number(angles, 4096).unwrap();
        let dense = winding_raw(angles, 1_000_000);
        assert_eq!(coarse.w, dense.round() as i32);
        assert!((dense - dense.round()).abs() < 1e-6);
    }

    #[test]
    fn winding_values_and_parity_symmetry() {
        let mut r = ChaCha8Rng::seed_from_u64(13);
        let lines = critical_lines();
        let mut tested = 0;
        while tested < 60 {
            let t1 = r.gen_range(-PI..PI);
            let t2 = r.gen_range(-PI..PI);
            if distance_to_lines(&lines, t1, t2).1 < 0.1 {
                continue;
            }
            let w = match winding_number(CoinAngles::new(t1, t2), 4096) {
                Ok(w) => w,
                Err(_) => continue,
            };
            assert!(
                [-3, -1, 1, 3].contains(&w.w),
                "unexpected w = {} at ({t1}, {t2})",
                w.w
            );
            assert!(w.residual < 1e-3);
            let wm = winding_number(CoinAngles::new(-t1, -t2), 4096).unwrap();
            assert_eq!(wm.w, -w.w);
            tested += 1;
        }
    }

    #[test]
    fn winding_rejects_gapless_input() {
        // On a red line the spectrum is gapless.
        let red2 = line_by_name("red2").unwrap();
        let err = winding_number(red2.angles_at(1.0), 4096).unwrap_err();
        assert!(matches!(err, Error::GaplessInput { .. }));
    }

    #[test]
    fn multicritical_catalog() {
        let points = multicritical_points();
        assert_eq!(points.len(), 13);
        let quad: Vec<_> = points
            .iter()
            .filter(|p| p.kind == DispersionKind::Quadratic)
            .collect();
        let lin: Vec<_> = points
            .iter()
            .filter(|p| p.kind == DispersionKind::Linear)
            .collect();
        assert_eq!(quad.len(), 8);
        assert_eq!(lin.len(), 5);
        let has = |list: &[&MulticriticalPoint], t1: f64, t2: f64| {
            list.iter().any(|p| {
                (p.angles.theta1() - t1).abs() < 1e-9 && (p.angles.theta2() - t2).abs() < 1e-9
            })
        };
        // the eight quadratic intersections
        for (t1, t2) in [
            (-2.0 * PI / 3.0, -2.0 * PI / 3.0),
            (-2.0 * PI / 3.0, PI / 3.0),
            (-PI / 3.0, -PI / 3.0),
            (-PI / 3.0, 2.0 * PI / 3.0),
            (PI / 3.0, -2.0 * PI / 3.0),
            (PI / 3.0, PI / 3.0),
            (2.0 * PI / 3.0, -PI / 3.0),
            (2.0 * PI / 3.0, 2.0 * PI / 3.0),
        ] {
            assert!(has(&quad, t1, t2), "missing quadratic point ({t1}, {t2})");
        }
        // the five linear intersections
        for (t1, t2) in [(0.0, 0.0), (PI, 0.0), (-PI, 0.0), (0.0, PI), (0.0, -PI)] {
            assert!(has(&lin, t1, t2), "missing linear point ({t1}, {t2})");
        }
    }

    #[test]
    fn multicritical_points_sit_on_two_lines() {
        let lines = critical_lines();
        for p in multicritical_points() {
            let n_on = lines
                .iter()
                .filter(|l| {
                    l.contains_theta1(p.angles.theta1())
                        && (l.map(p.angles.theta1()) - p.angles.theta2()).abs() < 1e-9
                })
                .count();
            assert!(n_on >= 2, "point {:?} lies on {} lines", p.angles, n_on);
        }
    }

    #[test]
    fn dispersion_exponents() {
        // linear point: z = 1, and E(k0 + 1e-4) = 3e-4 by direct evaluation
        let z = dispersion_exponent_at(CoinAngles::new(0.0, 0.0), 0.0, 0.05).unwrap();
        assert!((z - 1.0).abs() < 0.05, "z = {z}");
        let e = gap_at(CoinAngles::new(0.0, 0.0), Momentum::new(1e-4));
        assert_abs_diff_eq!(e, 3e-4, epsilon = 1e-9);
        // quadratic point on a red line: z = 2
        let z = dispersion_exponent_at(
            CoinAngles::new(2.0 * PI / 3.0, -PI / 3.0),
            0.0,
            0.05,
        )
        .unwrap();
        assert!((z - 2.0).abs() < 0.1, "z = {z}");
    }

    #[test]
    fn closings_on_red_line() {
        let red2 = line_by_name("red2").unwrap();
        let closings = gap_closing_momenta(&red2, PI / 2.0, 1e-8).unwrap();
        let k0s: Vec<f64> = closings.iter().map(|c| c.k0).collect();
        assert_eq!(closings.len(), 3, "{k0s:?}");
        assert!(k0s.iter().any(|&k| k.abs() < 1e-9));
        assert!(k0s.iter().any(|&k| (k - PI).abs() < 1e-9));
        assert!(k0s.iter().any(|&k| (k + PI).abs() < 1e-9));
        // E = 0 at k0 = 0 and E = ±π at k0 = ±π
        for c in &closings {
            if c.k0.abs() < 1e-9 {
                assert_eq!(c.branch, GapBranch::Zero);
            } else {
                assert_eq!(c.branch, GapBranch::Pi);
            }
            assert_eq!(c.class, MomentumClass::HighSymmetry);
        }
    }

    #[test]
    fn closings_on_blue_line_swap_branches() {
        let blue1 = line_by_name("blue1").unwrap();
        let closings = gap_closing_momenta(&blue1, 0.9, 1e-8).unwrap();
        for c in &closings {
            if c.k0.abs() < 1e-9 {
                assert_eq!(c.branch, GapBranch::Pi);
            } else {
                assert_eq!(c.branch, GapBranch::Zero);
            }
        }
    }

    #[test]
    fn closings_on_orange_line() {
        let op1 = line_by_name("op1").unwrap();
        // flat-band point: gapped sub-domain, no closings
        let closings = gap_closing_momenta(&op1, PI / 2.0, 1e-8).unwrap();
        assert!(closings.is_empty());
        // θ₁ = π/4: symmetric non-high-symmetry closings at cos k₀ = ±1/√2
        let closings = gap_closing_momenta(&op1, PI / 4.0, 1e-8).unwrap();
        assert_eq!(closings.len(), 4);
        for c in &closings {
            assert_eq!(c.class, MomentumClass::NonHighSymmetry);
            let expect = 1.0 / (2.0f64.sqrt());
            assert!(
                (c.k0.cos().abs() - expect).abs() < 1e-9,
                "k0 = {} not at cos k0 = ±1/√2",
                c.k0
            );
        }
        // symmetric pairs ±k₀
        assert!(closings
            .iter()
            .all(|c| closings.iter().any(|d| (d.k0 + c.k0).abs() < 1e-9)));
    }

    #[test]
    fn nhs_closings_merge_into_hs_at_quadratic_points() {
        // on op1 the symmetric ±k₀ pair collides with k = 0 as θ₁ → π/3
        let op1 = line_by_name("op1").unwrap();
        let mut prev = f64::INFINITY;
        for d in [0.2, 0.1, 0.05, 0.02] {
            let closings = gap_closing_momenta(&op1, PI / 3.0 - d, 1e-6).unwrap();
            let nearest = closings
                .iter()
                .map(|c| c.k0.abs())
                .fold(f64::INFINITY, f64::min);
            assert!(nearest < prev, "pair not collapsing: {nearest} at d = {d}");
            prev = nearest;
        }
        assert!(prev < 0.3);
        // every multicritical point joins a high-symmetry line with a
        // non-high-symmetry one
        for p in multicritical_points() {
            let lines = critical_lines();
            let (i, j) = p.parent_lines;
            let fams = [lines[i].family, lines[j].family];
            assert!(fams.contains(&LineFamily::OrangePurpleNhs));
            assert!(
                fams.contains(&LineFamily::RedHs) || fams.contains(&LineFamily::BlueHs),
                "{fams:?}"
            );
        }
    }

    #[test]
    fn phase_diagram_small_grid() {
        let pd = phase_diagram(65, 2048).unwrap();
        assert_eq!(pd.cells.len(), 65 * 65);
        let mut seen = std::collections::BTreeSet::new();
        for c in &pd.cells {
            if let Some(w) = c.w {
                assert!([-3, -1, 1, 3].contains(&w), "w = {w} at ({}, {})", c.theta1, c.theta2);
                seen.insert(w);
            } else {
                assert!(c.line_distance < pd.h + 1e-12);
            }
        }
        assert_eq!(seen.len(), 4, "all four gapped phases present: {seen:?}");
    }

    #[test]
    fn phase_diagram_rejects_low_resolution() {
        assert!(matches!(
            phase_diagram(10, 256),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn coarse_and_fine_diagrams_agree_on_common_cells() {
        // 76-point grid is a sub-grid of the 301-point grid (75 | 300).
        let coarse = phase_diagram(76, 1024).unwrap();
        let fine = phase_diagram(301, 1024).unwrap();
        // common points: indices i*4 in the fine grid equal coarse index i
        let mut checked = 0;
        for i1 in 0..76 {
            for i2 in 0..76 {
                let cc = coarse.cell(i1, i2);
                let fc = fine.cell(i1 * 4, i2 * 4);
                if let (Some(wa), Some(wb)) = (cc.w, fc.w) {
                    assert_eq!(wa, wb, "w mismatch at ({}, {})", cc.theta1, cc.theta2);
                    checked += 1;
                }
            }
        }
        assert!(checked > 1000, "only {checked} common gapped cells");
    }
}
