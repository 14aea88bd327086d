//! Cross-module consistency: quantities computed through independent routes
//! have to agree.

use std::f64::consts::PI;

use triwalk_core::criticality::critical_bloch;
use triwalk_core::observables::{
    critical_winding, group_velocity, wannier_correlation_numeric, Band,
};
use triwalk_core::phase_topology::{critical_lines, line_by_name, winding_number, LineFamily};
use triwalk_core::walk_core::{gap_at, walk_unitary, CoinAngles, Momentum};

/// Winding jumps across the critical lines: ±2 across the high-symmetry
/// (red/blue) families, ±4 across the orange/purple ones.
#[test]
fn winding_jumps_across_lines() {
    let offset = 0.08;
    for line in critical_lines() {
        // sample interior, gapless-subdomain parameters away from the
        // multicritical intersections
        let probes: Vec<f64> = match line.name {
            "red1" => vec![1.0, 2.9],
            "red2" => vec![-1.0, 1.0, 2.9],
            "red3" => vec![-2.9, -1.0],
            "blue1" | "blue2" => vec![-2.0, 2.0],
            "op1" => vec![0.6, 2.8, -0.6],
            "op2" => vec![-0.2, -2.9],
            "op3" => vec![0.2, 2.9],
            _ => unreachable!(),
        };
        let expected_jump = match line.family {
            LineFamily::OrangePurpleNhs => 4,
            _ => 2,
        };
        for t1 in probes {
            let t2 = line.map(t1);
            let below = winding_number(CoinAngles::new(t1, t2 - offset), 4096).unwrap();
            let above = winding_number(CoinAngles::new(t1, t2 + offset), 4096).unwrap();
            let jump = (above.w - below.w).abs();
            assert_eq!(
                jump, expected_jump,
                "{} at theta1 = {t1}: w {} -> {}",
                line.name, below.w, above.w
            );
        }
    }
}

/// The R = 0 zone transform is the winding integrand average, so it matches
/// the excluded-arc gapless winding in the δ → 0 limit.
#[test]
fn zone_integral_matches_gapless_winding() {
    for (name, t1) in [("red2", 1.0), ("red2", -1.3), ("blue1", 2.0), ("op1", 0.5)] {
        let line = line_by_name(name).unwrap();
        let integral = wannier_correlation_numeric(&line, t1, 0, 1 << 15).unwrap();
        let wc = critical_winding(&line, t1, 1e-2, 1 << 15).unwrap();
        assert!(integral.im.abs() < 1e-10);
        assert!(
            (integral.re - wc.w_c_extrapolated).abs() < 2e-2,
            "{name}@{t1}: integral {} vs w_c {}",
            integral.re,
            wc.w_c_extrapolated
        );
        assert_eq!(integral.re.round() as i32, wc.w_c);
    }
}

/// Group velocity equals the finite-difference derivative of the
/// quasi-energy.
#[test]
fn velocity_matches_dispersion_slope() {
    let h = 1e-6;
    for (t1, t2) in [(0.7, -0.3), (1.9, 0.4), (-2.2, 1.1), (0.3, -2.8)] {
        let angles = CoinAngles::new(t1, t2);
        for i in 0..40 {
            let k = -3.0 + 6.0 * i as f64 / 39.0;
            if gap_at(angles, Momentum::new(k)) < 1e-3 {
                continue;
            }
            let v = group_velocity(angles, Momentum::new(k), Band::Plus).unwrap();
            let ep = gap_quasi(angles, k + h);
            let em = gap_quasi(angles, k - h);
            let fd = (ep - em) / (2.0 * h);
            assert!(
                (v - fd).abs() < 1e-6,
                "({t1}, {t2}) at k = {k}: v = {v} vs dE/dk = {fd}"
            );
        }
    }
}

fn gap_quasi(angles: CoinAngles, k: f64) -> f64 {
    triwalk_core::walk_core::quasi_energy(angles, Momentum::new(k))
        .unwrap()
        .e_plus
}

/// Critical-line Bloch components agree with the dense matrix route
/// composed through the line map.
#[test]
fn critical_bloch_matches_matrix_route() {
    for line in critical_lines() {
        for i in 0..20 {
            let t1 = line.theta1_domain.0
                + (line.theta1_domain.1 - line.theta1_domain.0) * (i as f64 + 0.5) / 20.0;
            let k = -PI + 2.0 * PI * (i as f64 + 0.3) / 20.0;
            let cb = critical_bloch(&line, t1, k).unwrap();
            let u = walk_unitary(line.angles_at(t1), Momentum::new(k));
            let (b, residual) = u.pauli_decomposition();
            assert!(residual < 1e-12);
            assert!((cb.d2c - b.d2).abs() < 1e-12, "{}: d2 mismatch", line.name);
            assert!((cb.d3c - b.d3).abs() < 1e-12, "{}: d3 mismatch", line.name);
        }
    }
}
