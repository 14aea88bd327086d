//! Curvature renormalization-group flow on the critical lines.
//!
//! The flow equation moves the line parameter so that the curvature peak is
//! iteratively flattened without changing the topology:
//!
//! ```text
//! dθ₁ᶜ/dl = (1/2) ∂²k F(θ₁ᶜ, k)|_{k=k₀} / ∂_{θ₁ᶜ} F(θ₁ᶜ, k₀)
//! ```
//!
//! with scaling parameters δk² = dl. Transition-hosting multicritical angles
//! are poles of the flow (|dθ/dl| → ∞); fixed points attract it. The
//! closed forms below evaluate the right-hand side exactly for each line
//! family, with c = cosθ₁ᶜ:
//!
//! ```text
//! red:           sin2θ (2c³ + 4c² + 2c + 1) / ((2c + 1)(2c² + 1))
//! blue:          sin2θ (2c³ - 4c² + 2c - 1) / ((2c - 1)(2c² + 1))
//! orange/purple: cosθ / sinθ
//! ```
//!
//! so the red flow diverges at θ = ±2π/3, the blue at ±π/3, and the
//! orange/purple at 0, ±π; the zeros sit at {0, ±π/2, ±π} (red/blue) and
//! {±π/2} (orange/purple).

use std::f64::consts::PI;

use crate::criticality::{curvature_function, curvature_or_limit};
use crate::numerics::bisect;
use crate::phase_topology::{CriticalLine, LineFamily};
use crate::{Error, Result};

/// Trig shorthands entering the flow equations.
#[derive(Debug, Clone, Copy)]
pub struct FlowCoefficients {
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa3: f64,
    pub kappa_r: f64,
    pub kappa_b: f64,
}

impl FlowCoefficients {
    pub fn new(theta1c: f64) -> Self {
        Self {
            kappa1: theta1c.sin(),
            kappa2: theta1c.cos(),
            kappa3: (2.0 * theta1c).sin(),
            kappa_r: (2.0 * theta1c).cos(),
            kappa_b: 4.0 * theta1c.cos() - (2.0 * theta1c).cos(),
        }
    }
}

/// Closed-form flow right-hand side for a line family.
pub fn rg_rhs_closed(family: LineFamily, theta1c: f64) -> Result<f64> {
    let c = theta1c.cos();
    let s2 = (2.0 * theta1c).sin();
    match family {
        LineFamily::RedHs => {
            let den = (2.0 * c + 1.0) * (2.0 * c * c + 1.0);
            if den.abs() < 1e-14 {
                return Err(Error::SingularPoint { theta1: theta1c });
            }
            Ok(s2 * (2.0 * c * c * c + 4.0 * c * c + 2.0 * c + 1.0) / den)
        }
        LineFamily::BlueHs => {
            let den = (2.0 * c - 1.0) * (2.0 * c * c + 1.0);
            if den.abs() < 1e-14 {
                return Err(Error::SingularPoint { theta1: theta1c });
            }
            Ok(s2 * (2.0 * c * c * c - 4.0 * c * c + 2.0 * c - 1.0) / den)
        }
        LineFamily::OrangePurpleNhs => {
            let s = theta1c.sin();
            if s.abs() < 1e-14 {
                return Err(Error::SingularPoint { theta1: theta1c });
            }
            Ok(c / s)
        }
    }
}

/// Flow right-hand side by finite differences of the curvature function.
///
/// The second k-derivative at k₀ uses a Richardson pair (h, h/2) of central
/// differences; on red/blue lines k₀ is a closing momentum and the center
/// value is the exact removable-singularity limit. The θ-derivative is a
/// central difference with step `h_theta`.
pub fn rg_rhs_numeric(
    line: &CriticalLine,
    theta1c: f64,
    k0: f64,
    h_k: f64,
    h_theta: f64,
) -> Result<f64> {
    let f_center = |t: f64| curvature_or_limit(line, t, k0);
    let f0 = f_center(theta1c)?;
    if f0.abs() > 1e12 {
        return Ok(f64::INFINITY.copysign(f0));
    }
    let d2k = |h: f64| -> Result<f64> {
        let fp = curvature_function(line, theta1c, k0 + h)?;
        let fm = curvature_function(line, theta1c, k0 - h)?;
        Ok((fp - 2.0 * f0 + fm) / (h * h))
    };
    let coarse = d2k(h_k)?;
    let fine = d2k(h_k / 2.0)?;
    let d2f = (4.0 * fine - coarse) / 3.0;
    let dtheta = (f_center(theta1c + h_theta)? - f_center(theta1c - h_theta)?) / (2.0 * h_theta);
    if dtheta.abs() < 1e-12 {
        return Err(Error::VanishingDenominator { theta1: theta1c });
    }
    Ok(0.5 * d2f / dtheta)
}

/// Default finite-difference steps for [`rg_rhs_numeric`].
pub const DEFAULT_H_K: f64 = 0.01;
pub const DEFAULT_H_THETA: f64 = 1e-5;

/// Why a flow trajectory stopped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Terminal {
    FixedPoint(f64),
    Diverged(f64),
    MaxSteps,
}

/// Euler-integrated flow trajectory.
#[derive(Debug, Clone)]
pub struct RgTrajectory {
    pub path: Vec<f64>,
    pub dl: f64,
    pub terminal: Terminal,
}

const FIXED_POINT_RHS: f64 = 1e-6;
const DIVERGED_RHS: f64 = 1e6;
/// Per-step parameter motion is capped so trajectories cannot jump across a
/// flow pole (poles are transition points, physical boundaries).
const MAX_STEP: f64 = 1e-2;

/// Integrate dθ₁ᶜ/dl with explicit first-order steps.
pub fn integrate_flow(
    family: LineFamily,
    theta1_start: f64,
    dl: f64,
    max_steps: usize,
) -> Result<RgTrajectory> {
    if !(dl > 0.0 && dl <= 1e-2) {
        return Err(Error::InvalidParameter(format!(
            "dl = {dl} outside (0, 1e-2]"
        )));
    }
    let mut theta = theta1_start;
    let mut path = vec![theta];
    rg_rhs_closed(family, theta)?; // reject a start exactly on a pole
    for _ in 0..max_steps {
        let rhs = match rg_rhs_closed(family, theta) {
            Ok(v) => v,
            Err(Error::SingularPoint { .. }) => {
                return Ok(RgTrajectory {
                    path,
                    dl,
                    terminal: Terminal::Diverged(theta),
                })
            }
            Err(e) => return Err(e),
        };
        if rhs.abs() < FIXED_POINT_RHS {
            return Ok(RgTrajectory {
                path,
                dl,
                terminal: Terminal::FixedPoint(theta),
            });
        }
        if rhs.abs() > DIVERGED_RHS {
            return Ok(RgTrajectory {
                path,
                dl,
                terminal: Terminal::Diverged(theta),
            });
        }
        let step = (rhs * dl).clamp(-MAX_STEP, MAX_STEP);
        theta += step;
        path.push(theta);
    }
    Ok(RgTrajectory {
        path,
        dl,
        terminal: Terminal::MaxSteps,
    })
}

/// Zeros (fixed points) and poles (transition points) of the flow.
#[derive(Debug, Clone)]
pub struct FlowPoints {
    pub fixed: Vec<f64>,
    pub unstable: Vec<f64>,
}

/// Scan the closed-form right-hand side over [-π, π] and refine every sign
/// change by bisection: small-magnitude crossings are fixed points, large
/// ones are poles (refined on the inverse).
pub fn classify_flow_points(family: LineFamily, resolution: usize) -> Result<FlowPoints> {
    if resolution < 1000 {
        return Err(Error::InvalidParameter(format!(
            "resolution {resolution} below 1000"
        )));
    }
    let rhs = |t: f64| rg_rhs_closed(family, t).unwrap_or(f64::INFINITY);
    let mut fixed = Vec::new();
    let mut unstable = Vec::new();
    let push = |list: &mut Vec<f64>, v: f64| {
        if !list.iter().any(|&x: &f64| (x - v).abs() < 1e-6) {
            list.push(v);
        }
    };
    // endpoints: zeros or poles can sit exactly at ±π
    for t in [-PI, PI] {
        match rg_rhs_closed(family, t) {
            Ok(v) if v.abs() < 1e-9 => push(&mut fixed, t),
            Err(Error::SingularPoint { .. }) => push(&mut unstable, t),
            _ => {}
        }
    }
    let h = 2.0 * PI / resolution as f64;
    for i in 0..resolution {
        let a = -PI + i as f64 * h;
        let b = -PI + (i + 1) as f64 * h;
        // a pole sitting exactly on a grid point shows up as a singular
        // closed-form evaluation there
        for t in [a, b] {
            if matches!(rg_rhs_closed(family, t), Err(Error::SingularPoint { .. })) {
                push(&mut unstable, t);
            }
        }
        let (fa, fb) = (rhs(a), rhs(b));
        if !fa.is_finite() || !fb.is_finite() || fa.signum() == fb.signum() {
            continue;
        }
        if fa.abs().min(fb.abs()) > 10.0 {
            // pole: refine on the reciprocal, which crosses zero there
            if let Some(p) = bisect(|t| 1.0 / rhs(t), a, b, 1e-12) {
                push(&mut unstable, p);
            }
        } else if let Some(z) = bisect(rhs, a, b, 1e-12) {
            push(&mut fixed, z);
        }
    }
    fixed.sort_by(|x, y| x.total_cmp(y));
    unstable.sort_by(|x, y| x.total_cmp(y));
    Ok(FlowPoints { fixed, unstable })
}
