//! Named test functions: smooth periodic functions on [0,1]² with analytic
//! norm data, and bandlimited sphere signals with assorted spectral decay.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::sphere::SphericalSignal;
use crate::torus::{SmoothFunctionSpec, TorusNorms};

const TAU: f64 = 2.0 * PI;

pub const TORUS_NAMES: [&str; 9] =
    ["const1", "cos_a01", "cc_a002", "sum_a005", "mix_a01", "trig_a002", "vm_bump", "cc_half", "sin1"];

pub const SPHERE_NAMES: [&str; 8] =
    ["y00", "decay_e", "y00_y30", "y00_y21", "zonal_cubic", "sectoral", "mixed_decay", "five_coef"];

fn analytic(
    spec: SmoothFunctionSpec,
    l2_sq: f64,
    c2: f64,
    mean: f64,
    sup: f64,
    grad: [f64; 2],
) -> SmoothFunctionSpec {
    spec.with_analytic(TorusNorms::analytic(l2_sq.sqrt(), c2, mean, sup, grad))
        .expect("battery norm data is consistent")
}

/// Torus battery entry by name.
pub fn torus_function(name: &str) -> Result<SmoothFunctionSpec> {
    let four_pi_sq = 4.0 * PI * PI;
    let f = match name {
        "const1" => analytic(SmoothFunctionSpec::new(name, |_, _| 1.0), 1.0, 1.0, 1.0, 1.0, [0.0, 0.0]),
        "cos_a01" => analytic(
            SmoothFunctionSpec::new(name, |u, _| 1.0 + 0.01 * (TAU * u).cos()),
            1.0 + 0.5 * 0.01 * 0.01,
            1.01,
            1.0,
            1.01,
            [0.01 * TAU, 0.0],
        ),
        "cc_a002" => analytic(
            SmoothFunctionSpec::new(name, |u, v| 1.0 + 0.02 * (TAU * u).cos() * (TAU * v).cos()),
            1.0 + 0.25 * 0.02 * 0.02,
            1.02,
            1.0,
            1.02,
            [0.02 * TAU, 0.02 * TAU],
        ),
        "sum_a005" => analytic(
            SmoothFunctionSpec::new(name, |u, v| 1.0 + 0.05 * ((TAU * u).sin() + (TAU * v).cos())),
            1.0 + 0.05 * 0.05,
            0.05 * four_pi_sq,
            1.0,
            1.1,
            [0.05 * TAU, 0.05 * TAU],
        ),
        "mix_a01" => analytic(
            SmoothFunctionSpec::new(name, |u, v| 2.0 + 0.1 * (TAU * (u + v)).cos()),
            4.0 + 0.5 * 0.01,
            0.1 * four_pi_sq,
            2.0,
            2.1,
            [0.1 * TAU, 0.1 * TAU],
        ),
        "trig_a002" => analytic(
            SmoothFunctionSpec::new(name, |u, v| 1.0 + 0.02 * (TAU * (2.0 * u - v)).cos()),
            1.0 + 0.5 * 0.02 * 0.02,
            0.02 * 4.0 * four_pi_sq,
            1.0,
            1.02,
            [0.02 * 2.0 * TAU, 0.02 * TAU],
        ),
        // exp(κ(cos 2πu + cos 2πv)); norms estimated numerically.
        "vm_bump" => SmoothFunctionSpec::new(name, |u, v| (0.1 * ((TAU * u).cos() + (TAU * v).cos())).exp()),
        "cc_half" => analytic(
            SmoothFunctionSpec::new(name, |u, v| 1.0 + 0.5 * (TAU * u).cos() * (TAU * v).cos()),
            1.0 + 1.0 / 16.0,
            0.5 * four_pi_sq,
            1.0,
            1.5,
            [PI, PI],
        ),
        "sin1" => analytic(
            SmoothFunctionSpec::new(name, |u, _| (TAU * u).sin()),
            0.5,
            four_pi_sq,
            0.0,
            1.0,
            [TAU, 0.0],
        ),
        other => {
            return Err(Error::Config(format!(
                "unknown torus function {other:?}; known: {}",
                TORUS_NAMES.join(", ")
            )))
        }
    };
    Ok(f)
}

/// Sphere battery entry by name, expanded in V_L.
pub fn sphere_signal(name: &str, bandwidth: usize) -> Result<SphericalSignal> {
    let needs = |degree: usize| {
        if bandwidth < degree {
            Err(Error::Domain(format!("{name} needs bandwidth ≥ {degree}, got {bandwidth}")))
        } else {
            Ok(())
        }
    };
    let zonal = |weight: &dyn Fn(usize) -> f64| {
        let terms: Vec<(usize, i64, f64)> = (0..=bandwidth).map(|l| (l, 0, weight(l))).collect();
        SphericalSignal::from_terms(bandwidth, &terms)
    };
    match name {
        "y00" => SphericalSignal::from_terms(bandwidth, &[(0, 0, 1.0)]),
        "decay_e" => zonal(&|l| (-(l as f64)).exp()),
        "y00_y30" => {
            needs(3)?;
            SphericalSignal::from_terms(bandwidth, &[(0, 0, 1.0), (3, 0, 0.1)])
        }
        "y00_y21" => {
            needs(2)?;
            SphericalSignal::from_terms(bandwidth, &[(0, 0, 1.0), (2, 1, 0.2)])
        }
        "zonal_cubic" => zonal(&|l| ((l + 1) as f64).powi(-3)),
        "sectoral" => {
            let terms: Vec<(usize, i64, f64)> =
                (0..=bandwidth).map(|l| (l, l as i64, 0.5f64.powi(l as i32))).collect();
            SphericalSignal::from_terms(bandwidth, &terms)
        }
        "mixed_decay" => {
            let mut terms = Vec::new();
            for l in 0..=bandwidth {
                for m in -(l as i64)..=(l as i64) {
                    let w = (-(l as f64)).exp() / (2 * l + 1) as f64 * ((l as i64 + m) as f64).cos();
                    terms.push((l, m, w));
                }
            }
            SphericalSignal::from_terms(bandwidth, &terms)
        }
        "five_coef" => {
            needs(4)?;
            SphericalSignal::from_terms(
                bandwidth,
                &[(0, 0, 1.0), (1, 1, 0.3), (2, 0, -0.2), (3, -2, 0.1), (4, 3, 0.05)],
            )
        }
        other => Err(Error::Config(format!(
            "unknown sphere signal {other:?}; known: {}",
            SPHERE_NAMES.join(", ")
        ))),
    }
}

/// Flat spectrum over V_L; FR equals L + 1.
pub fn flat_signal(bandwidth: usize) -> SphericalSignal {
    let d = (bandwidth + 1) * (bandwidth + 1);
    SphericalSignal::new(bandwidth, vec![1.0; d]).expect("length matches")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::estimate_norms_numerically;

    #[test]
    fn analytic_norms_match_estimates() {
        for name in TORUS_NAMES {
            let f = torus_function(name).unwrap();
            let Some(exact) = f.analytic().copied() else { continue };
            let est = estimate_norms_numerically(&f, 256).unwrap();
            let close = |a: f64, b: f64| (a - b).abs() <= 0.02 * a.abs().max(b.abs()).max(1e-12);
            assert!(close(exact.l2, est.l2), "{name} l2 {} vs {}", exact.l2, est.l2);
            assert!(close(exact.c2, est.c2), "{name} c2 {} vs {}", exact.c2, est.c2);
            assert!((exact.mean - est.mean).abs() <= 0.02 * exact.mean.abs().max(1e-3), "{name} mean");
            assert!(close(exact.sup, est.sup), "{name} sup");
        }
    }

    #[test]
    fn battery_is_periodic() {
        for name in TORUS_NAMES {
            let err = torus_function(name).unwrap().check_periodicity().unwrap();
            assert!(err < 1e-9, "{name}");
        }
    }

    #[test]
    fn certification_thresholds() {
        let threshold = |name: &str| torus_function(name).unwrap().analytic().unwrap().certification_threshold();
        assert_eq!(threshold("const1"), 8);
        assert_eq!(threshold("cos_a01"), 9);
        assert_eq!(threshold("sum_a005"), 32);
        assert_eq!(threshold("cc_half"), 2934);
        assert!(threshold("sin1") > 4096);
    }

    #[test]
    fn sphere_battery_builds() {
        for name in SPHERE_NAMES {
            for l in [4, 8, 16] {
                let s = sphere_signal(name, l).unwrap();
                assert!(s.l2_norm() > 0.0);
            }
        }
        assert!(sphere_signal("five_coef", 3).is_err());
        assert!(sphere_signal("nope", 3).is_err());
        assert!(torus_function("nope").is_err());
        assert!((flat_signal(5).fourier_ratio().unwrap() - 6.0).abs() < 1e-12);
    }
}
