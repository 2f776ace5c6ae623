//! A quick pass over the invariants of every module, with fixed seeds.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::char2::{even_zero_count, Characteristic2, QuadraticFormF2};
use crate::covering::CoverContext;
use crate::genus1::{curve_from_k, k_of_tau, lambda_of_tau, tau_from_lambda};
use crate::hyperjac::HyperellipticCurve;
use crate::prym_recon::{round_trip, RoundTripConfig};
use crate::theta_num::{theta_eval, PeriodMatrix, RationalCharacteristic};
use crate::Result;

const SEED: u64 = 0x5eed;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelfTestReport {
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

fn check(name: &'static str, f: impl FnOnce() -> Result<bool>) -> CheckResult {
    match f() {
        Ok(passed) => CheckResult {
            name,
            passed,
            error: None,
        },
        Err(e) => CheckResult {
            name,
            passed: false,
            error: Some(e.to_string()),
        },
    }
}

fn random_tau<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(0.3..3.0))
}

fn parity_law(eps: f64) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for g in 1..=2usize {
        for _ in 0..3 {
            let x: Vec<Complex64> = (0..g)
                .map(|_| Complex64::new(rng.gen_range(-0.3..0.3), rng.gen_range(0.4..1.2)))
                .collect();
            let mut rows = vec![Complex64::new(0.0, 0.0); g * g];
            for i in 0..g {
                for j in 0..g {
                    rows[i * g + j] = if i == j {
                        x[i]
                    } else {
                        Complex64::new(0.1, 0.05)
                    };
                }
            }
            let tau = PeriodMatrix::from_rows(g, &rows)?;
            let z: Vec<Complex64> = (0..g)
                .map(|_| Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.2..0.2)))
                .collect();
            let minus_z: Vec<Complex64> = z.iter().map(|w| -w).collect();
            for c in crate::char2::enumerate_torsion(g)? {
                let rc = RationalCharacteristic::from(c);
                let sign = if rc.parity() == 0 { 1.0 } else { -1.0 };
                let lhs = theta_eval(&rc, &minus_z, &tau, eps)?;
                let rhs = theta_eval(&rc, &z, &tau, eps)? * sign;
                if (lhs - rhs).norm() >= 1e-9 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn genus_one_invariances(eps: f64) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let i = Complex64::new(0.0, 1.0);
    if (k_of_tau(i, eps)? - Complex64::new(-2.0, 0.0)).norm() >= 1e-9 {
        return Ok(false);
    }
    for _ in 0..10 {
        let tau = random_tau(&mut rng);
        let k = k_of_tau(tau, eps)?;
        let s = k_of_tau(-1.0 / tau, eps)?;
        let t2 = k_of_tau(tau + 2.0, eps)?;
        let l = lambda_of_tau(tau, eps)?;
        let ls = lambda_of_tau(-1.0 / tau, eps)?;
        let ok = (s - k).norm() < 1e-9
            && (t2 - k).norm() < 1e-9
            && (ls * l - 1.0).norm() < 1e-9
            && (l + 1.0 / l - k).norm() < 1e-9;
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

fn inverse_round_trip(eps: f64) -> Result<bool> {
    for k in [-2.5, -3.0, -5.0, -10.0] {
        let k = Complex64::new(k, 0.0);
        let curve = curve_from_k(k)?;
        let tau = tau_from_lambda(curve.lambda())?;
        if (k_of_tau(tau, eps)? - k).norm() >= 1e-6 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn cantor_axioms() -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for (p, gamma) in [(101u64, 2usize), (10007, 3)] {
        let xs: Vec<u64> = (1..=(2 * gamma as u64 + 1)).collect();
        let c = HyperellipticCurve::new(p, &xs)?;
        for _ in 0..10 {
            let a = c.random_divisor(&mut rng);
            let b = c.random_divisor(&mut rng);
            let d = c.random_divisor(&mut rng);
            let ok = c.add(&c.add(&a, &b), &d) == c.add(&a, &c.add(&b, &d))
                && c.add(&a, &b) == c.add(&b, &a)
                && c.add(&a, &c.neg(&a)).is_identity()
                && c.add(&a, &crate::hyperjac::MumfordDivisor::identity()) == a;
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Runs every check; never stops at the first failure.
pub fn run(eps: f64) -> SelfTestReport {
    let checks = vec![
        check("even_zero_count", || {
            for g in 1..=4 {
                if QuadraticFormF2::standard(g).zero_count()? != even_zero_count(g) {
                    return Ok(false);
                }
            }
            Ok(true)
        }),
        check("vanishing_orbits", || {
            for g in [2, 3] {
                let orbits = CoverContext::new(g)?.classify_vanishing_orbits()?;
                let size = 1usize << (2 * (g - 1));
                if orbits.solution_count != 3 * size
                    || orbits.orbits().iter().any(|o| o.len() != size)
                {
                    return Ok(false);
                }
            }
            Ok(true)
        }),
        check("kernel_of_norm", || {
            for g in 2..=4 {
                if !CoverContext::new(g)?.kernel_norm_structure()?.matches {
                    return Ok(false);
                }
            }
            Ok(true)
        }),
        check("weyl_pairing_nondegenerate", || {
            let all = crate::char2::enumerate_torsion(3)?;
            Ok(all.iter().filter(|c| !c.is_zero()).all(|c| {
                all.iter()
                    .any(|d| crate::char2::weyl_pairing(c, d).ok() == Some(1))
            }))
        }),
        check("theta_parity_law", || parity_law(eps)),
        check("genus_one_invariances", || genus_one_invariances(eps)),
        check("genus_one_inverse_round_trip", || inverse_round_trip(eps)),
        check("cantor_group_axioms", cantor_axioms),
        check("two_torsion_count", || {
            let c = HyperellipticCurve::new(101, &[1, 2, 3, 4, 5])?;
            let classes = c.two_torsion_classes();
            let divisors: std::collections::BTreeSet<_> = classes
                .iter()
                .map(|t| c.two_torsion_from_subset(t))
                .collect::<Result<_>>()?;
            Ok(classes.len() == 16
                && divisors.len() == 16
                && divisors.iter().all(|d| c.double(d).is_identity()))
        }),
        check("reconstruction_genus_3", || {
            let report = round_trip(&RoundTripConfig {
                genus: 3,
                seed: SEED,
                runs: 3,
                ..Default::default()
            })?;
            Ok(report.summary.matches == 3 && report.summary.all_unique)
        }),
        check("reconstruction_genus_2", || {
            let report = round_trip(&RoundTripConfig {
                genus: 2,
                seed: SEED,
                runs: 3,
                ..Default::default()
            })?;
            Ok(report.summary.matches == 3)
        }),
        check("characteristic_string_form", || {
            let c: Characteristic2 = "3:010/110".parse()?;
            Ok(c.to_string() == "3:010/110")
        }),
    ];
    SelfTestReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selftest_passes() {
        let report = run(crate::theta_num::DEFAULT_EPS);
        for c in &report.checks {
            assert!(c.passed, "{} failed: {:?}", c.name, c.error);
        }
        assert!(report.passed);
    }
}
