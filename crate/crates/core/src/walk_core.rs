//! The three-step walk unitary in momentum space.
//!
//! One Floquet period, written in the symmetric time frame, is
//!
//! ```text
//! U(k) = C[θ₁/2] · S(k) · C[θ₂] · S(k) · C[θ₂] · S(k) · C[θ₁/2]
//! ```
//!
//! with the coin C[θ] a real rotation and the shift S(k) = diag(e^{ik}, e^{-ik})
//! in the internal basis (L, R). Expanding in Pauli matrices,
//! U = d₀·I + d₁·σ₁ + i·d₂·σ₂ + i·d₃·σ₃, gives real coefficients
//!
//! ```text
//! d₀ = -(cosθ₁ sin²θ₂ + sinθ₁ sin2θ₂) cos k + cosθ₁ cos²θ₂ cos 3k
//! d₁ = 0
//! d₂ = (sinθ₁ sin²θ₂ - cosθ₁ sin2θ₂) cos k - sinθ₁ cos²θ₂ cos 3k
//! d₃ = -sin²θ₂ sin k + cos²θ₂ sin 3k
//! ```
//!
//! Unitarity forces d₀² + d₂² + d₃² = 1. The quasi-energy bands are
//! E = ±arccos(d₀); because d₁ vanishes identically the effective Hamiltonian
//! H(k) = E n·σ anticommutes with σ₁ (chiral symmetry), the spectrum is
//! symmetric, and gaps can close at both E = 0 and E = ±π.

use num_complex::Complex64;

use crate::numerics::wrap_angle;
use crate::{Error, Result};

/// Tolerance on the unitarity sum rule d₀² + d₂² + d₃² = 1.
pub const UNITARITY_TOL: f64 = 1e-12;
/// Slack allowed on |d₀| before arccos clamping is considered a bug.
pub const ARCCOS_CLAMP_TOL: f64 = 1e-12;
/// Gap below which the effective Hamiltonian direction is ill-conditioned.
pub const DEGENERACY_GAP: f64 = 1e-9;

/// Coin parameters (θ₁, θ₂), the phase-diagram coordinates on the torus.
///
/// Construction wraps both angles into [-π, π]; wrapping is idempotent and
/// leaves the endpoints ±π distinct.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinAngles {
    theta1: f64,
    theta2: f64,
}

impl CoinAngles {
    pub fn new(theta1: f64, theta2: f64) -> Self {
        Self {
            theta1: wrap_angle(theta1),
            theta2: wrap_angle(theta2),
        }
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    pub fn theta2(&self) -> f64 {
        self.theta2
    }
}

/// Crystal momentum in the Brillouin zone [-π, π], k ≡ k + 2π.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Momentum(f64);

impl Momentum {
    pub fn new(k: f64) -> Self {
        Self(wrap_angle(k))
    }

    pub fn k(&self) -> f64 {
        self.0
    }
}

/// Pauli coefficients of the walk unitary at one momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub d0: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl BlochVector {
    /// |d₀² + d₂² + d₃² - 1|, zero for a unitary one-period operator.
    pub fn norm_defect(&self) -> f64 {
        (self.d0 * self.d0 + self.d2 * self.d2 + self.d3 * self.d3 - 1.0).abs()
    }
}

/// First k-derivatives of the Bloch coefficients.
#[derive(Debug, Clone, Copy)]
pub struct BlochDerivative {
    pub d0: f64,
    pub d2: f64,
    pub d3: f64,
}

/// 2×2 real rotation acting on the coin space.
#[derive(Debug, Clone, Copy)]
pub struct CoinMatrix(pub [[f64; 2]; 2]);

/// The one-period momentum-space unitary (dense 2×2, basis order L, R).
#[derive(Debug, Clone, Copy)]
pub struct WalkUnitary(pub [[Complex64; 2]; 2]);

/// Quasi-energy pair; chiral symmetry pins e_minus = -e_plus.
#[derive(Debug, Clone, Copy)]
pub struct QuasiEnergy {
    pub e_plus: f64,
    pub e_minus: f64,
}

/// Normalized winding-vector sample (n₁ = 0 structurally).
#[derive(Debug, Clone, Copy)]
pub struct UnitVectorSample {
    pub k: f64,
    pub n2: f64,
    pub n3: f64,
}

/// Coin rotation C[θ] = [[cosθ, -sinθ], [sinθ, cosθ]].
pub fn coin_matrix(theta: f64) -> CoinMatrix {
    let (s, c) = theta.sin_cos();
    CoinMatrix([[c, -s], [s, c]])
}

/// Bloch coefficients (d₀, 0, d₂, d₃) at momentum k.
pub fn bloch_vector(angles: CoinAngles, k: Momentum) -> BlochVector {
    let (t1, t2, k) = (angles.theta1, angles.theta2, k.k());
    let (s1, c1) = t1.sin_cos();
    let st2 = t2.sin();
    let ct2 = t2.cos();
    let (s2sq, c2sq, s2d) = (st2 * st2, ct2 * ct2, (2.0 * t2).sin());
    let (ck, c3k) = (k.cos(), (3.0 * k).cos());
    let (sk, s3k) = (k.sin(), (3.0 * k).sin());
    BlochVector {
        d0: -(c1 * s2sq + s1 * s2d) * ck + c1 * c2sq * c3k,
        d1: 0.0,
        d2: (s1 * s2sq - c1 * s2d) * ck - s1 * c2sq * c3k,
        d3: -s2sq * sk + c2sq * s3k,
    }
}

/// Closed-form ∂k of (d₀, d₂, d₃).
pub fn bloch_derivative(angles: CoinAngles, k: Momentum) -> BlochDerivative {
    let (t1, t2, k) = (angles.theta1, angles.theta2, k.k());
    let (s1, c1) = t1.sin_cos();
    let st2 = t2.sin();
    let ct2 = t2.cos();
    let (s2sq, c2sq, s2d) = (st2 * st2, ct2 * ct2, (2.0 * t2).sin());
    let (ck, c3k) = (k.cos(), (3.0 * k).cos());
    let (sk, s3k) = (k.sin(), (3.0 * k).sin());
    BlochDerivative {
        d0: (c1 * s2sq + s1 * s2d) * sk - 3.0 * c1 * c2sq * s3k,
        d2: -(s1 * s2sq - c1 * s2d) * sk + 3.0 * s1 * c2sq * s3k,
        d3: -s2sq * ck + 3.0 * c2sq * c3k,
    }
}

/// Closed-form ∂²k of (d₀, d₂, d₃); cos nk terms pick up -n².
pub fn bloch_second_derivative(angles: CoinAngles, k: Momentum) -> BlochDerivative {
    let (t1, t2, k) = (angles.theta1, angles.theta2, k.k());
    let (s1, c1) = t1.sin_cos();
    let st2 = t2.sin();
    let ct2 = t2.cos();
    let (s2sq, c2sq, s2d) = (st2 * st2, ct2 * ct2, (2.0 * t2).sin());
    let (ck, c3k) = (k.cos(), (3.0 * k).cos());
    let (sk, s3k) = (k.sin(), (3.0 * k).sin());
    BlochDerivative {
        d0: (c1 * s2sq + s1 * s2d) * ck - 9.0 * c1 * c2sq * c3k,
        d2: -(s1 * s2sq - c1 * s2d) * ck + 9.0 * s1 * c2sq * c3k,
        d3: s2sq * sk - 9.0 * c2sq * s3k,
    }
}

fn mat_mul(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Dense product C[θ₁/2]·S·C[θ₂]·S·C[θ₂]·S·C[θ₁/2] at momentum k.
pub fn walk_unitary(angles: CoinAngles, k: Momentum) -> WalkUnitary {
    let coin = |theta: f64| -> [[Complex64; 2]; 2] {
        let m = coin_matrix(theta).0;
        [
            [Complex64::new(m[0][0], 0.0), Complex64::new(m[0][1], 0.0)],
            [Complex64::new(m[1][0], 0.0), Complex64::new(m[1][1], 0.0)],
        ]
    };
    let shift = [
        [Complex64::from_polar(1.0, k.k()), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::from_polar(1.0, -k.k())],
    ];
    let half = coin(angles.theta1 / 2.0);
    let c2 = coin(angles.theta2);
    let mut u = mat_mul(&shift, &half);
    u = mat_mul(&c2, &u);
    u = mat_mul(&shift, &u);
    u = mat_mul(&c2, &u);
    u = mat_mul(&shift, &u);
    u = mat_mul(&half, &u);
    WalkUnitary(u)
}

impl WalkUnitary {
    /// Max-abs entry of U†U - I.
    pub fn unitarity_defect(&self) -> f64 {
        let u = &self.0;
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = Complex64::new(0.0, 0.0);
                for (l, row) in u.iter().enumerate() {
                    acc += row[i].conj() * u[l][j];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((acc - target).norm());
            }
        }
        worst
    }

    /// Invert U = d₀I + d₁σ₁ + i d₂σ₂ + i d₃σ₃.
    ///
    /// Returns the coefficients and the residual imaginary weight that the
    /// decomposition cannot represent (zero for a genuine walk unitary).
    pub fn pauli_decomposition(&self) -> (BlochVector, f64) {
        let u = &self.0;
        let d0 = 0.5 * (u[0][0] + u[1][1]).re;
        let d3 = 0.5 * (u[0][0] - u[1][1]).im;
        let d1 = 0.5 * (u[0][1] + u[1][0]).re;
        let d2 = 0.5 * (u[0][1] - u[1][0]).re;
        let residual = 0.5
            * ((u[0][0] + u[1][1]).im.abs()
                + (u[0][0] - u[1][1]).re.abs()
                + (u[0][1] + u[1][0]).im.abs()
                + (u[0][1] - u[1][0]).im.abs());
        (BlochVector { d0, d1, d2, d3 }, residual)
    }

    /// Eigenvalues d₀ ± i√(1-d₀²) computed from the decomposition.
    pub fn eigenvalues(&self) -> [Complex64; 2] {
        let (b, _) = self.pauli_decomposition();
        let s = (1.0 - b.d0 * b.d0).max(0.0).sqrt();
        [Complex64::new(b.d0, s), Complex64::new(b.d0, -s)]
    }
}

/// Quasi-energy E = ±arccos(d₀), branch e_plus ∈ [0, π].
///
/// Arguments within `ARCCOS_CLAMP_TOL` of ±1 are clamped; anything farther
/// out signals a bug upstream rather than rounding and is an error.
pub fn quasi_energy(angles: CoinAngles, k: Momentum) -> Result<QuasiEnergy> {
    let d0 = bloch_vector(angles, k).d0;
    if d0.abs() > 1.0 + ARCCOS_CLAMP_TOL {
        return Err(Error::ArccosOutOfRange { value: d0 });
    }
    let e_plus = d0.clamp(-1.0, 1.0).acos();
    Ok(QuasiEnergy {
        e_plus,
        e_minus: -e_plus,
    })
}

/// Distance of the band pair from the nearest gap-closing energy (0 or ±π).
///
/// Equals min(E, π - E) for E = arccos(d₀); zero exactly when |d₀| = 1.
pub fn gap_at(angles: CoinAngles, k: Momentum) -> f64 {
    let d0 = bloch_vector(angles, k).d0;
    d0.abs().clamp(0.0, 1.0).acos()
}

/// Normalized winding vector (n₂, n₃) at momentum k.
pub fn unit_vector(angles: CoinAngles, k: Momentum) -> Result<UnitVectorSample> {
    let b = bloch_vector(angles, k);
    let norm = (b.d2 * b.d2 + b.d3 * b.d3).sqrt();
    if norm < 1e-14 {
        return Err(Error::GapClosingEvaluation { k: k.k() });
    }
    Ok(UnitVectorSample {
        k: k.k(),
        n2: b.d2 / norm,
        n3: b.d3 / norm,
    })
}

/// Chiral-symmetry defect ‖σ₁ H(k) σ₁ + H(k)‖ (Frobenius norm).
///
/// H(k) = E·(n·σ) is assembled directly from the quasi-energy and the unit
/// winding vector, so no matrix logarithm or branch choice is involved.
pub fn chiral_check(angles: CoinAngles, k: Momentum) -> Result<f64> {
    let gap = gap_at(angles, k);
    if gap < DEGENERACY_GAP {
        return Err(Error::DegenerateInput { gap, k: k.k() });
    }
    let e = quasi_energy(angles, k)?.e_plus;
    let n = unit_vector(angles, k)?;
    // H = E (n2 σ2 + n3 σ3) = E [[n3, -i n2], [i n2, -n3]]
    let h = [
        [
            Complex64::new(e * n.n3, 0.0),
            Complex64::new(0.0, -e * n.n2),
        ],
        [
            Complex64::new(0.0, e * n.n2),
            Complex64::new(-e * n.n3, 0.0),
        ],
    ];
    // σ1 H σ1 swaps both indices.
    let mut acc = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let d = h[1 - i][1 - j] + h[i][j];
            acc += d.norm_sqr();
        }
    }
    Ok(acc.sqrt())
}

/// The dispersion coefficient α written as in the eigenvalue analysis.
///
/// Algebraically identical to d₀; kept as an independent expression so the
/// identity α ≡ d₀ can be checked rather than assumed.
pub fn alpha(angles: CoinAngles, k: Momentum) -> f64 {
    let (t1, t2, k) = (angles.theta1, angles.theta2, k.k());
    (3.0 * k).cos() * t1.cos() * t2.cos() * t2.cos()
        - k.cos() * t2.sin() * (2.0 * t2.cos() * t1.sin() + t1.cos() * t2.sin())
}

/// The β₁, β₂, β₃ combination entering the radical-form eigenvalue
/// expression. Retained purely as a cross-check: for the expression to
/// reproduce λ = d₀ ± i√(1-d₀²) the radicand would have to equal
/// -16(1-α²), and [`beta_radicand_defect`] measures how far it is from
/// that. The d₀-form is authoritative everywhere else.
pub fn beta_coefficients(angles: CoinAngles, k: Momentum) -> (f64, f64, f64) {
    let (t1, t2, k) = (angles.theta1, angles.theta2, k.k());
    let b1 = (9.0 + 4.0 * (2.0 * k).cos() + 3.0 * (4.0 * k).cos()) * k.sin().powi(2)
        * (2.0 * t1).cos();
    let b2 = 2.0 * (2.0 * k).cos() * t1.cos().powi(2) * (2.0 * t2).cos()
        + (2.0 * t1).sin() * (2.0 * t2).sin();
    let b3 = 9.0
        + 3.0 * (4.0 * k).cos()
        + (2.0 * (4.0 * k).cos() * t1.cos().powi(2) - 5.0 * (2.0 * t1).cos() - 1.0)
            * (4.0 * t2).cos()
        + 4.0 * (2.0 * k).cos() * ((2.0 * t1).sin() * (4.0 * t2).sin() - 2.0);
    (b1, b2, b3)
}

/// |radicand - (-16)(1-α²)| for the β-form eigenvalue expression.
pub fn beta_radicand_defect(angles: CoinAngles, k: Momentum) -> f64 {
    let (b1, b2, b3) = beta_coefficients(angles, k);
    let radicand =
        -2.0 * b1 - 8.0 * (2.0 * k.k()).sin().powi(2) * b2 + 2.0 * k.k().cos().powi(2) * b3;
    let a = alpha(angles, k);
    (radicand + 16.0 * (1.0 - a * a)).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0x3517)
    }

    #[test]
    fn coin_matrix_examples() {
        let id = coin_matrix(0.0).0;
        assert_eq!(id, [[1.0, 0.0], [0.0, 1.0]]);
        let q = coin_matrix(PI / 2.0).0;
        assert_abs_diff_eq!(q[0][0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q[0][1], -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q[1][0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q[1][1], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn coin_matrix_is_special_orthogonal() {
        let mut r = rng();
        for _ in 0..100 {
            let m = coin_matrix(r.gen_range(-PI..PI)).0;
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            assert_abs_diff_eq!(det, 1.0, epsilon = 1e-15);
            // C^T C = I
            assert_abs_diff_eq!(m[0][0] * m[0][1] + m[1][0] * m[1][1], 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(m[0][0] * m[0][0] + m[1][0] * m[1][0], 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn bloch_vector_trivial_coins() {
        // Identity coins leave the pure triple shift: d0 = cos3k, d3 = sin3k.
        let b = bloch_vector(CoinAngles::new(0.0, 0.0), Momentum::new(PI / 6.0));
        assert_abs_diff_eq!(b.d0, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.d2, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.d3, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn bloch_vector_quarter_coins() {
        // cosθ2 = 0 kills the cos3k / sin3k terms.
        let mut r = rng();
        for _ in 0..50 {
            let k = r.gen_range(-PI..PI);
            let b = bloch_vector(CoinAngles::new(PI / 2.0, PI / 2.0), Momentum::new(k));
            assert_abs_diff_eq!(b.d0, 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(b.d2, k.cos(), epsilon = 1e-15);
            assert_abs_diff_eq!(b.d3, -k.sin(), epsilon = 1e-15);
        }
    }

    #[test]
    fn bloch_vector_matches_matrix_product() {
        // Oracle: the dense matrix product, Pauli-decomposed.
        let u = walk_unitary(CoinAngles::new(0.7, -0.3), Momentum::new(1.1));
        let (bm, residual) = u.pauli_decomposition();
        let b = bloch_vector(CoinAngles::new(0.7, -0.3), Momentum::new(1.1));
        assert!(residual < 1e-14);
        assert_abs_diff_eq!(bm.d0, b.d0, epsilon = 1e-14);
        assert_abs_diff_eq!(bm.d1, b.d1, epsilon = 1e-14);
        assert_abs_diff_eq!(bm.d2, b.d2, epsilon = 1e-14);
        assert_abs_diff_eq!(bm.d3, b.d3, epsilon = 1e-14);
    }

    #[test]
    fn matrix_vs_formula_random_sweep() {
        let mut r = rng();
        let mut worst: f64 = 0.0;
        for _ in 0..2000 {
            let a = CoinAngles::new(r.gen_range(-PI..PI), r.gen_range(-PI..PI));
            let k = Momentum::new(r.gen_range(-PI..PI));
            let (bm, residual) = walk_unitary(a, k).pauli_decomposition();
            let b = bloch_vector(a, k);
            worst = worst
                .max(residual)
                .max((bm.d0 - b.d0).abs())
                .max((bm.d1 - b.d1).abs())
                .max((bm.d2 - b.d2).abs())
                .max((bm.d3 - b.d3).abs());
        }
        assert!(worst < 1e-12, "worst deviation {worst:e}");
    }

    #[test]
    fn unitarity_sum_rule() {
        let mut r = rng();
        let mut worst: f64 = 0.0;
        for _ in 0..10_000 {
            let a = CoinAngles::new(r.gen_range(-PI..PI), r.gen_range(-PI..PI));
            let k = Momentum::new(r.gen_range(-PI..PI));
            worst = worst.max(bloch_vector(a, k).norm_defect());
        }
        assert!(worst < UNITARITY_TOL, "worst defect {worst:e}");
    }

    #[test]
    fn walk_unitary_is_unitary_and_triple_shift_at_zero_coins() {
        let mut r = rng();
        for _ in 0..200 {
            let a = CoinAngles::new(r.gen_range(-PI..PI), r.gen_range(-PI..PI));
            let k = Momentum::new(r.gen_range(-PI..PI));
            assert!(walk_unitary(a, k).unitarity_defect() < 1e-12);
        }
        let k = 0.9;
        let u = walk_unitary(CoinAngles::new(0.0, 0.0), Momentum::new(k)).0;
        assert!((u[0][0] - Complex64::from_polar(1.0, 3.0 * k)).norm() < 1e-14);
        assert!((u[1][1] - Complex64::from_polar(1.0, -3.0 * k)).norm() < 1e-14);
        assert!(u[0][1].norm() < 1e-15 && u[1][0].norm() < 1e-15);
    }

    #[test]
    fn eigenvalue_phases_match_quasi_energy() {
        let a = CoinAngles::new(0.7, -0.3);
        let k = Momentum::new(1.1);
        let ev = walk_unitary(a, k).eigenvalues();
        let e = quasi_energy(a, k).unwrap();
        let phases = [ev[0].arg(), ev[1].arg()];
        assert_abs_diff_eq!(phases[0], e.e_plus, epsilon = 1e-10);
        assert_abs_diff_eq!(phases[1], e.e_minus, epsilon = 1e-10);
    }

    #[test]
    fn quasi_energy_examples() {
        let e = quasi_energy(CoinAngles::new(0.0, 0.0), Momentum::new(0.0)).unwrap();
        assert_abs_diff_eq!(e.e_plus, 0.0, epsilon = 1e-15);
        let e = quasi_energy(CoinAngles::new(PI / 2.0, PI / 2.0), Momentum::new(0.37)).unwrap();
        assert_abs_diff_eq!(e.e_plus, PI / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e.e_minus, -PI / 2.0, epsilon = 1e-15);
        let e = quasi_energy(CoinAngles::new(PI, 0.0), Momentum::new(0.0)).unwrap();
        assert_abs_diff_eq!(e.e_plus, PI, epsilon = 1e-15);
    }

    #[test]
    fn alpha_equals_d0() {
        let mut r = rng();
        let mut worst: f64 = 0.0;
        for _ in 0..10_000 {
            let a = CoinAngles::new(r.gen_range(-PI..PI), r.gen_range(-PI..PI));
            let k = Momentum::new(r.gen_range(-PI..PI));
            worst = worst.max((alpha(a, k) - bloch_vector(a, k).d0).abs());
        }
        assert!(worst < 1e-12, "worst |alpha - d0| = {worst:e}");
    }

    #[test]
    fn gap_examples() {
        assert_abs_diff_eq!(
            gap_at(CoinAngles::new(0.0, 0.0), Momentum::new(0.0)),
            0.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            gap_at(CoinAngles::new(PI / 2.0, PI / 2.0), Momentum::new(1.23)),
            PI / 2.0,
            epsilon = 1e-15
        );
        // d0(pi) = (1/8)cos3π - (9/8)cosπ = 1 exactly.
        assert!(gap_at(CoinAngles::new(PI / 3.0, PI / 3.0), Momentum::new(PI)) < 1e-7);
        let d0 = bloch_vector(CoinAngles::new(PI / 3.0, PI / 3.0), Momentum::new(PI)).d0;
        assert_abs_diff_eq!(d0, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn chiral_defect_vanishes_on_gapped_samples() {
        let mut r = rng();
        let mut worst: f64 = 0.0;
        let mut tested = 0;
        while tested < 1000 {
            let a = CoinAngles::new(r.gen_range(-PI..PI), r.gen_range(-PI..PI));
            let k = Momentum::new(r.gen_range(-PI..PI));
            match chiral_check(a, k) {
                Ok(defect) => {
                    worst = worst.max(defect);
                    tested += 1;
                }
                Err(Error::DegenerateInput { .. }) => continue,
                Err(e) => panic!("unexpected error {e}"),
            }
        }
        assert!(worst < 1e-10, "worst chiral defect {worst:e}");
        let d = chiral_check(CoinAngles::new(PI / 2.0, PI / 2.0), Momentum::new(0.3)).unwrap();
        assert!(d < 1e-10);
    }

    #[test]
    fn chiral_check_rejects_degenerate_momentum() {
        let err = chiral_check(CoinAngles::new(0.0, 0.0), Momentum::new(0.0)).unwrap_err();
        assert!(matches!(err, Error::DegenerateInput { .. }));
    }

    #[test]
    fn unit_vector_normalized_on_gapped_inputs() {
        let mut r = rng();
        for _ in 0..500 {
            let a = CoinAngles::new(r.gen_range(-PI..PI), r.gen_range(-PI..PI));
            let k = Momentum::new(r.gen_range(-PI..PI));
            if gap_at(a, k) < 1e-3 {
                continue;
            }
            let n = unit_vector(a, k).unwrap();
            assert_abs_diff_eq!(n.n2 * n.n2 + n.n3 * n.n3, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn periodicity_in_momentum_and_angles() {
        let mut r = rng();
        for _ in 0..200 {
            let (t1, t2, k) = (
                r.gen_range(-PI..PI),
                r.gen_range(-PI..PI),
                r.gen_range(-PI..PI),
            );
            let b = bloch_vector(CoinAngles::new(t1, t2), Momentum::new(k));
            let bk = bloch_vector(CoinAngles::new(t1, t2), Momentum::new(k + 2.0 * PI));
            let bt = bloch_vector(
                CoinAngles::new(t1 + 2.0 * PI, t2 - 2.0 * PI),
                Momentum::new(k),
            );
            for (x, y) in [(b.d0, bk.d0), (b.d2, bk.d2), (b.d3, bk.d3)] {
                assert_abs_diff_eq!(x, y, epsilon = 1e-12);
            }
            for (x, y) in [(b.d0, bt.d0), (b.d2, bt.d2), (b.d3, bt.d3)] {
                assert_abs_diff_eq!(x, y, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn bloch_derivatives_match_finite_differences() {
        let mut r = rng();
        let h = 1e-6;
        for _ in 0..200 {
            let a = CoinAngles::new(r.gen_range(-PI..PI), r.gen_range(-PI..PI));
            let k = r.gen_range(-3.0..3.0);
            let d = bloch_derivative(a, Momentum::new(k));
            let bp = bloch_vector(a, Momentum::new(k + h));
            let bm = bloch_vector(a, Momentum::new(k - h));
            assert_abs_diff_eq!(d.d0, (bp.d0 - bm.d0) / (2.0 * h), epsilon = 1e-8);
            assert_abs_diff_eq!(d.d2, (bp.d2 - bm.d2) / (2.0 * h), epsilon = 1e-8);
            assert_abs_diff_eq!(d.d3, (bp.d3 - bm.d3) / (2.0 * h), epsilon = 1e-8);
            let h2 = 1e-4;
            let d2 = bloch_second_derivative(a, Momentum::new(k));
            let b0 = bloch_vector(a, Momentum::new(k));
            let bp2 = bloch_vector(a, Momentum::new(k + h2));
            let bm2 = bloch_vector(a, Momentum::new(k - h2));
            assert_abs_diff_eq!(
                d2.d2,
                (bp2.d2 - 2.0 * b0.d2 + bm2.d2) / (h2 * h2),
                epsilon = 1e-6
            );
        }
    }

    /// The radical-form eigenvalue expression does not reduce to the
    /// d₀-form: the measured radicand defect is O(10), not rounding. This
    /// pins the cross-check result so the discrepancy stays visible.
    #[test]
    fn beta_form_disagrees_with_d0_form() {
        let mut r = rng();
        let mut worst: f64 = 0.0;
        for _ in 0..2000 {
            let a = CoinAngles::new(r.gen_range(-PI..PI), r.gen_range(-PI..PI));
            let k = Momentum::new(r.gen_range(-PI..PI));
            worst = worst.max(beta_radicand_defect(a, k));
        }
        println!("max beta-form radicand defect over sweep: {worst:.6}");
        assert!(worst > 1.0, "defect unexpectedly small: {worst:e}");
        assert!(worst < 64.0, "defect unexpectedly large: {worst:e}");
        // At identity coins the two forms do coincide.
        assert!(
            beta_radicand_defect(CoinAngles::new(0.0, 0.0), Momentum::new(0.8)) < 1e-12
        );
    }

    #[test]
    fn angle_normalization_idempotent() {
        let a = CoinAngles::new(5.0 * PI / 2.0, -7.0);
        assert!((-PI..=PI).contains(&a.theta1()));
        assert!((-PI..=PI).contains(&a.theta2()));
        let b = CoinAngles::new(a.theta1(), a.theta2());
        assert_eq!(a, b);
    }
}
