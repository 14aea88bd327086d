//! Wannier-state correlations, group velocity and the gapless winding
//! number w_c.
//!
//! The Wannier correlation at distance R is the Brillouin-zone Fourier
//! transform of the curvature function; near a transition it reduces to the
//! Ornstein–Zernike image λ_c(R) = e^{ik₀R} (F_peak/2ξ_c) e^{-R/ξ_c}. Every
//! critical line carries equal curvature peaks at k₀ = 0 and k₀ = ±π (the
//! on-line curvature is π-periodic in k), so the full-zone transform
//! vanishes at odd R and doubles the single-peak form at even R.
//!
//! The group velocity v = dE/dk of the upper band is -d₀'/√(1-d₀²); the
//! lower band is its negative. Its span over the zone reaches [-3, 3] at
//! linear multicritical points and [-1.5, 1.5] at quadratic ones, and v is
//! piecewise constant between closings at the flow fixed points.
//!
//! The gapless winding number w_c accumulates the same angle increments as
//! the gapped winding number but skips δ-neighborhoods of every gap-closing
//! momentum; the δ → 0 limit is taken by Richardson extrapolation.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::criticality::{
    analytic_oz_coefficients, analytic_oz_orange_purple, curvature_function, oz_fit_at,
};
use crate::phase_topology::{gap_closing_momenta, CriticalLine, GapClosing, LineFamily};
use crate::walk_core::{
    bloch_derivative, bloch_vector, CoinAngles, Momentum, UnitVectorSample,
};
use crate::{Error, Result};

/// Band selector for velocity quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    Plus,
    Minus,
}

/// Group velocity dE/dk of the chosen band.
pub fn group_velocity(angles: CoinAngles, k: Momentum, band: Band) -> Result<f64> {
    let d0 = bloch_vector(angles, k).d0;
    let radicand = 1.0 - d0 * d0;
    if radicand <= 1e-14 {
        return Err(Error::GapClosingEvaluation { k: k.k() });
    }
    let d0p = bloch_derivative(angles, k).d0;
    let v_plus = -d0p / radicand.sqrt();
    Ok(match band {
        Band::Plus => v_plus,
        Band::Minus => -v_plus,
    })
}

/// Sampled velocity profile of the upper band over the Brillouin zone.
#[derive(Debug, Clone)]
pub struct VelocityProfile {
    /// (k, v) samples where the bands are non-degenerate.
    pub samples: Vec<(f64, f64)>,
    /// Velocity span over both bands.
    pub span: (f64, f64),
    /// Midpoints of abrupt sign changes (gap-closing momenta).
    pub discontinuities: Vec<f64>,
}

/// Sample v(k) on `n_grid` points, recording the span over both bands and
/// the locations of abrupt jumps.
pub fn velocity_profile(angles: CoinAngles, n_grid: usize) -> Result<VelocityProfile> {
    if n_grid < 1024 {
        return Err(Error::InvalidParameter(format!(
            "n_grid {n_grid} below 1024"
        )));
    }
    let mut samples = Vec::with_capacity(n_grid);
    for i in 0..n_grid {
        let k = -PI + 2.0 * PI * (i as f64 + 0.5) / n_grid as f64;
        if let Ok(v) = group_velocity(angles, Momentum::new(k), Band::Plus) {
            samples.push((k, v));
        }
    }
    if samples.is_empty() {
        return Err(Error::InvalidParameter(
            "velocity undefined everywhere (fully degenerate spectrum)".into(),
        ));
    }
    let vmax = samples.iter().map(|s| s.1).fold(f64::MIN, f64::max);
    let vmin = samples.iter().map(|s| s.1).fold(f64::MAX, f64::min);
    let span = (vmin.min(-vmax), vmax.max(-vmin));
    let mut discontinuities = Vec::new();
    for w in samples.windows(2) {
        let ((k1, v1), (k2, v2)) = (w[0], w[1]);
        if (v2 - v1).abs() > 0.5 && (k2 - k1) < 4.0 * PI / n_grid as f64 {
            discontinuities.push(0.5 * (k1 + k2));
        }
    }
    Ok(VelocityProfile {
        samples,
        span,
        discontinuities,
    })
}

/// Where the Ornstein–Zernike parameters of a correlation series came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OzSource {
    /// Adaptive fit of the sampled curvature peak.
    Fitted,
    /// Analytic leading-order coefficients (used at suppressed momenta,
    /// where no Lorentzian peak exists to fit).
    AnalyticLeading,
}

/// Wannier-state correlation series λ_c(R).
#[derive(Debug, Clone)]
pub struct CorrelationSeries {
    pub r_values: Vec<u32>,
    pub lambda: Vec<Complex64>,
    pub f_peak: f64,
    pub xi_c: f64,
    pub k0: f64,
    pub source: OzSource,
}

/// Closed-form correlation λ_c(R) = e^{ik₀R} (F_peak/2ξ_c) e^{-R/ξ_c}.
///
/// Peak parameters come from the adaptive Ornstein–Zernike fit; at
/// suppressed momenta (no peak to fit) the analytic leading-order values
/// F_peak = -ζ₁/ζ₂, ξ_c = |ζ₁/ζ₂| take over, which is what makes the decay
/// length collapse toward linear multicritical points on red/blue lines.
pub fn wannier_correlation(
    line: &CriticalLine,
    theta1c: f64,
    k0: f64,
    r_max: u32,
) -> Result<CorrelationSeries> {
    let (f_peak, xi_c, source) = match oz_fit_at(line, theta1c, k0) {
        Ok(fit) => (fit.f_peak, fit.xi_c, OzSource::Fitted),
        Err(Error::FitRejected { .. }) => match line.family {
            LineFamily::OrangePurpleNhs => {
                let (f, xi) = analytic_oz_orange_purple(theta1c);
                (f, xi, OzSource::AnalyticLeading)
            }
            _ => {
                let z = analytic_oz_coefficients(line, theta1c, k0)?;
                (z.f_peak(), z.xi_leading(), OzSource::AnalyticLeading)
            }
        },
        Err(e) => return Err(e),
    };
    if xi_c.is_nan() || xi_c <= 0.0 {
        return Err(Error::FitRejected {
            reason: "non-positive correlation length".into(),
            r_squared: 0.0,
        });
    }
    let r_values: Vec<u32> = (0..=r_max).collect();
    let lambda = r_values
        .iter()
        .map(|&r| {
            Complex64::from_polar(1.0, k0 * r as f64)
                * (f_peak / (2.0 * xi_c))
                * (-(r as f64) / xi_c).exp()
        })
        .collect();
    Ok(CorrelationSeries {
        r_values,
        lambda,
        f_peak,
        xi_c,
        k0,
        source,
    })
}

/// Brillouin-zone Fourier transform (1/2π)∫ F(θ₁ᶜ,k) e^{ikR} dk on a
/// midpoint grid (which never lands on a closing momentum exactly); grid
/// points within 1e-6 of a closing are skipped.
pub fn wannier_correlation_numeric(
    line: &CriticalLine,
    theta1c: f64,
    r: u32,
    n_grid: usize,
) -> Result<Complex64> {
    if n_grid < 4096 {
        return Err(Error::InvalidParameter(format!(
            "n_grid {n_grid} below 4096"
        )));
    }
    let closings = gap_closing_momenta(line, theta1c, 1e-6)?;
    let h = 2.0 * PI / n_grid as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n_grid {
        let k = -PI + (i as f64 + 0.5) * h;
        if closings.iter().any(|c| (k - c.k0).abs() < 1e-6) {
            continue;
        }
        if let Ok(f) = curvature_function(line, theta1c, k) {
            acc += Complex64::from_polar(1.0, k * r as f64) * f;
        }
    }
    Ok(acc * h / (2.0 * PI))
}

/// Gapless winding number with δ-neighborhoods of the closings excluded.
#[derive(Debug, Clone)]
pub struct CriticalWinding {
    /// Raw accumulated winding at the requested δ.
    pub w_c_raw: f64,
    /// Nearest integer of the δ → 0 extrapolation.
    pub w_c: i32,
    /// Richardson extrapolation over δ, δ/2, δ/4.
    pub w_c_extrapolated: f64,
    pub delta: f64,
    pub excluded: Vec<f64>,
    /// |w(δ) - w(δ/2)|, the stability drift reported alongside the value.
    pub drift: f64,
}

fn winding_excluding(
    line: &CriticalLine,
    theta1c: f64,
    closings: &[GapClosing],
    delta: f64,
    n_grid: usize,
) -> f64 {
    let angles = line.angles_at(theta1c);
    let mut total = 0.0;
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=n_grid {
        let k = -PI + 2.0 * PI * i as f64 / n_grid as f64;
        let near_closing = closings.iter().any(|c| {
            let mut d = (k - c.k0).abs();
            d = d.min((k - c.k0 - 2.0 * PI).abs());
            d = d.min((k - c.k0 + 2.0 * PI).abs());
            d <= delta
        });
        if near_closing {
            prev = None;
            continue;
        }
        let b = bloch_vector(angles, Momentum::new(k));
        if let Some((p2, p3)) = prev {
            let cross = p2 * b.d3 - p3 * b.d2;
            let dot = p2 * b.d2 + p3 * b.d3;
            total += cross.atan2(dot);
        }
        prev = Some((b.d2, b.d3));
    }
    total / (2.0 * PI)
}

/// Winding number of a gapless phase at line parameter θ₁ᶜ.
///
/// Evaluates the excluded-arc winding at δ, δ/2 and δ/4 and Richardson
/// extrapolates the linear-in-δ endpoint error; fails with
/// [`Error::GappedSubdomain`] when the line carries no closings there (use
/// the plain gapped winding number instead).
pub fn critical_winding(
    line: &CriticalLine,
    theta1c: f64,
    delta: f64,
    n_grid: usize,
) -> Result<CriticalWinding> {
    if !(1e-4..=1e-1).contains(&delta) {
        return Err(Error::InvalidParameter(format!(
            "delta {delta} outside [1e-4, 1e-1]"
        )));
    }
    let closings = gap_closing_momenta(line, theta1c, 1e-6)?;
    if closings.is_empty() {
        return Err(Error::GappedSubdomain);
    }
    let w1 = winding_excluding(line, theta1c, &closings, delta, n_grid);
    let w2 = winding_excluding(line, theta1c, &closings, delta / 2.0, n_grid);
    let w4 = winding_excluding(line, theta1c, &closings, delta / 4.0, n_grid);
    // two Richardson levels for the O(δ) endpoint error
    let e1 = 2.0 * w2 - w1;
    let e2 = 2.0 * w4 - w2;
    let extrapolated = (4.0 * e2 - e1) / 3.0;
    Ok(CriticalWinding {
        w_c_raw: w1,
        w_c: extrapolated.round() as i32,
        w_c_extrapolated: extrapolated,
        delta,
        excluded: closings.iter().map(|c| c.k0).collect(),
        drift: (w1 - w2).abs(),
    })
}

/// Normalized winding-vector trace of a gapped walk.
pub fn winding_vector_trace(angles: CoinAngles, n_grid: usize) -> Vec<UnitVectorSample> {
    (0..=n_grid)
        .filter_map(|i| {
            let k = -PI + 2.0 * PI * i as f64 / n_grid as f64;
            crate::walk_core::unit_vector(angles, Momentum::new(k)).ok()
        })
        .collect()
}

/// Winding-vector trace on a critical line, skipping δ-neighborhoods of the
/// gap closings.
pub fn critical_winding_vector_trace(
    line: &CriticalLine,
    theta1c: f64,
    delta: f64,
    n_grid: usize,
) -> Result<Vec<UnitVectorSample>> {
    let closings = gap_closing_momenta(line, theta1c, 1e-6)?;
    let angles = line.angles_at(theta1c);
    Ok((0..=n_grid)
        .filter_map(|i| {
            let k = -PI + 2.0 * PI * i as f64 / n_grid as f64;
            let near = closings.iter().any(|c| {
                let mut d = (k - c.k0).abs();
                d = d.min((k - c.k0 - 2.0 * PI).abs());
                d = d.min((k - c.k0 + 2.0 * PI).abs());
                d <= delta
            });
            if near {
                return None;
            }
            crate::walk_core::unit_vector(angles, Momentum::new(k)).ok()
        })
        .collect())
}

/// Total signed loops of a winding-vector trace (accumulated angle / 2π).
///
/// Sample pairs that straddle an excluded closing arc (recognized by a k
/// step much larger than the trace resolution) are not bridged; the vector
/// flips by ~π across a closing and its sign there is not meaningful.
pub fn loop_count(trace: &[UnitVectorSample]) -> f64 {
    if trace.len() < 2 {
        return 0.0;
    }
    let mut steps: Vec<f64> = trace.windows(2).map(|w| w[1].k - w[0].k).collect();
    steps.sort_by(|a, b| a.total_cmp(b));
    let typical = steps[steps.len() / 2];
    let mut total = 0.0;
    for w in trace.windows(2) {
        if w[1].k - w[0].k > 3.0 * typical {
            continue;
        }
        let cross = w[0].n2 * w[1].n3 - w[0].n3 * w[1].n2;
        let dot = w[0].n2 * w[1].n2 + w[0].n3 * w[1].n3;
        total += cross.atan2(dot);
    }
    total / (2.0 * PI)
}
