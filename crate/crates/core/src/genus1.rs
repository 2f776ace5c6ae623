//! Genus one: the invariant `k(τ) = λ(τ) + 1/λ(τ)` of a torus with a marked
//! point of order two, and its explicit inverse.
//!
//! Here `λ(τ) = −θ₀₁(0,τ)⁴ / θ₁₀(0,τ)⁴`. In terms of the classical modular
//! function `m(τ) = θ₁₀⁴/θ₀₀⁴` this is `λ = 1 − 1/m`, which is what
//! [`tau_from_lambda`] inverts through the AGM.

use num_complex::Complex64;
use serde::Serialize;

use crate::theta_num::theta_constants_g1;
use crate::{Error, Result};

/// Iteration cap for the AGM.
pub const AGM_MAX_ITERATIONS: usize = 64;

/// Relative convergence threshold for the AGM.
pub const AGM_TOLERANCE: f64 = 1e-14;

const DEGENERATE_TOL: f64 = 1e-12;

/// `λ(τ) = −θ₀₁⁴/θ₁₀⁴`.
pub fn lambda_of_tau(tau: Complex64, eps: f64) -> Result<Complex64> {
    let (_, t01, t10) = theta_constants_g1(tau, eps)?;
    Ok(-t01.powi(4) / t10.powi(4))
}

/// `k(τ) = −(θ₁₀⁸ + θ₀₁⁸)/(θ₁₀⁴ θ₀₁⁴)`.
pub fn k_of_tau(tau: Complex64, eps: f64) -> Result<Complex64> {
    let (_, t01, t10) = theta_constants_g1(tau, eps)?;
    let a = t01.powi(4);
    let b = t10.powi(4);
    Ok(-(a * a + b * b) / (a * b))
}

/// `y² = x(x−1)(x−λ)` with the ordered pair `p₁ = (0,0)`, `p₂ = (1,0)`;
/// the marked point of order two is the class of `p₁ − p₂`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LegendreCurveWithMarking {
    #[serde(serialize_with = "ser_complex")]
    lambda: Complex64,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

impl LegendreCurveWithMarking {
    pub fn new(lambda: Complex64) -> Result<Self> {
        if lambda.norm() < DEGENERATE_TOL || (lambda - 1.0).norm() < DEGENERATE_TOL {
            return Err(Error::Degenerate(format!(
                "Legendre parameter {lambda} makes the cubic singular"
            )));
        }
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn p1(&self) -> (Complex64, Complex64) {
        (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn p2(&self) -> (Complex64, Complex64) {
        (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    /// Coefficients of `x³ + c₂x² + c₁x + c₀`, low degree first.
    pub fn cubic_coefficients(&self) -> [Complex64; 4] {
        let l = self.lambda;
        [
            Complex64::new(0.0, 0.0),
            l,
            -(l + 1.0),
            Complex64::new(1.0, 0.0),
        ]
    }
}

/// Picks the root of `x² − kx + 1` with `|λ| ≥ 1`; when both roots have the
/// same modulus the one with larger real part wins, then larger imaginary
/// part.
pub fn curve_from_k(k: Complex64) -> Result<LegendreCurveWithMarking> {
    if !(k.re.is_finite() && k.im.is_finite()) {
        return Err(Error::InvalidArgument(format!("k = {k} is not finite")));
    }
    if k.norm() < DEGENERATE_TOL || (k - 2.0).norm() < DEGENERATE_TOL {
        return Err(Error::Degenerate(format!("k = {k} lies in {{0, 2}}")));
    }
    let disc = (k * k - 4.0).sqrt();
    let r1 = (k + disc) * 0.5;
    let r2 = (k - disc) * 0.5;
    let key = |z: Complex64| (z.norm(), z.re, z.im);
    let (a, b) = (key(r1), key(r2));
    let tie = |x: f64, y: f64| (x - y).abs() <= DEGENERATE_TOL * x.abs().max(y.abs()).max(1.0);
    let pick_first = if !tie(a.0, b.0) {
        a.0 > b.0
    } else if !tie(a.1, b.1) {
        a.1 > b.1
    } else {
        a.2 >= b.2
    };
    LegendreCurveWithMarking::new(if pick_first { r1 } else { r2 })
}

/// Arithmetic-geometric mean with the "right" choice of square root at each
/// step (`|a′ − b′| ≤ |a′ + b′|`).
pub fn agm(a0: Complex64, b0: Complex64) -> Result<Complex64> {
    let (mut a, mut b) = (a0, b0);
    for _ in 0..AGM_MAX_ITERATIONS {
        if (a - b).norm() <= AGM_TOLERANCE * a.norm() {
            return Ok(a);
        }
        let next_a = (a + b) * 0.5;
        let mut next_b = (a * b).sqrt();
        if (next_a - next_b).norm() > (next_a + next_b).norm() {
            next_b = -next_b;
        }
        a = next_a;
        b = next_b;
    }
    if (a - b).norm() <= AGM_TOLERANCE * a.norm() {
        Ok(a)
    } else {
        Err(Error::AgmNonConvergence {
            iterations: AGM_MAX_ITERATIONS,
        })
    }
}

/// A period ratio `τ` of `y² = x(x−1)(x−λ)`, from
/// `τ = i·K(1−m)/K(m) = i·M(1, √(1−m))/M(1, √m)` with `m = 1/(1−λ)`.
///
/// Only `{λ, 1/λ}` is determined by the orbit of `τ`, so the contract is
/// `k_of_tau(τ) ≈ λ + 1/λ`. Validated on `λ < 0` and on a neighbourhood of
/// that half-line with `|arg(−λ)| ≤ π/4`.
pub fn tau_from_lambda(lambda: Complex64) -> Result<Complex64> {
    if lambda.norm() < DEGENERATE_TOL || (lambda - 1.0).norm() < DEGENERATE_TOL {
        return Err(Error::Degenerate(format!("lambda = {lambda} lies in {{0, 1}}")));
    }
    let one = Complex64::new(1.0, 0.0);
    let m = one / (one - lambda);
    let k = m.sqrt();
    let kp = (one - m).sqrt();
    let tau = Complex64::new(0.0, 1.0) * agm(one, kp)? / agm(one, k)?;
    if !(tau.im > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "lambda = {lambda} is outside the validated region (period ratio {tau})"
        )));
    }
    Ok(tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    const EPS: f64 = 1e-12;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_tau(rng: &mut ChaCha8Rng) -> Complex64 {
        c64(rng.gen_range(-1.0..1.0), rng.gen_range(0.3..3.0))
    }

    #[test]
    fn lambda_at_i_is_minus_one() {
        let l = lambda_of_tau(c64(0.0, 1.0), EPS).unwrap();
        assert!((l + 1.0).norm() < 1e-12);
        let k = k_of_tau(c64(0.0, 1.0), EPS).unwrap();
        assert!((k + 2.0).norm() < 1e-9);
    }

    #[test]
    fn modular_behaviour_of_lambda() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let tau = random_tau(&mut rng);
            let l = lambda_of_tau(tau, EPS).unwrap();
            let ls = lambda_of_tau(-1.0 / tau, EPS).unwrap();
            let lt = lambda_of_tau(tau + 2.0, EPS).unwrap();
            assert!((ls * l - 1.0).norm() < 1e-9);
            assert!((lt - l).norm() < 1e-9 * l.norm().max(1.0));
        }
    }

    #[test]
    fn k_is_lambda_plus_inverse_and_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let tau = random_tau(&mut rng);
            let k = k_of_tau(tau, EPS).unwrap();
            let l = lambda_of_tau(tau, EPS).unwrap();
            assert!((k - (l + 1.0 / l)).norm() < 10.0 * EPS * k.norm().max(1.0));
            assert!((k_of_tau(-1.0 / tau, EPS).unwrap() - k).norm() < 1e-9);
            assert!((k_of_tau(tau + 2.0, EPS).unwrap() - k).norm() < 1e-9);
            assert!(k.norm() > 1e-6 && (k - 2.0).norm() > 1e-6);
        }
    }

    #[test]
    fn t_alone_is_not_a_symmetry() {
        // T = (1 1; 0 1) has ab = 1, so it is outside the theta group
        let tau = c64(0.1, 1.1);
        let k = k_of_tau(tau, EPS).unwrap();
        assert!((k_of_tau(tau + 1.0, EPS).unwrap() - k).norm() > 1e-3);
    }

    #[test]
    fn curve_from_k_examples() {
        let c = curve_from_k(c64(-2.0, 0.0)).unwrap();
        assert!((c.lambda() + 1.0).norm() < 1e-7);
        let c = curve_from_k(c64(2.5, 0.0)).unwrap();
        assert!((c.lambda() - 2.0).norm() < 1e-12);
        assert_eq!(c.p1(), (c64(0.0, 0.0), c64(0.0, 0.0)));
        assert_eq!(c.p2(), (c64(1.0, 0.0), c64(0.0, 0.0)));
        let coeffs = c.cubic_coefficients();
        // x(x−1)(x−2) = x³ − 3x² + 2x
        assert!((coeffs[1] - 2.0).norm() < 1e-12 && (coeffs[2] + 3.0).norm() < 1e-12);

        assert!(matches!(curve_from_k(c64(0.0, 0.0)), Err(Error::Degenerate(_))));
        assert!(matches!(curve_from_k(c64(2.0, 0.0)), Err(Error::Degenerate(_))));
    }

    #[test]
    fn curve_from_k_branch_is_deterministic_on_the_unit_circle() {
        // k ∈ (−2, 2) gives conjugate roots on |λ| = 1: pick positive imaginary part
        let c = curve_from_k(c64(1.0, 0.0)).unwrap();
        let expected = (Complex64::new(0.0, PI / 3.0)).exp();
        assert!((c.lambda() - expected).norm() < 1e-12);
        let c = curve_from_k(c64(-1.0, 0.0)).unwrap();
        assert!((c.lambda() - (Complex64::new(0.0, 2.0 * PI / 3.0)).exp()).norm() < 1e-12);
    }

    #[test]
    fn vieta_roots_multiply_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let k = c64(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
            let l = curve_from_k(k).unwrap().lambda();
            assert!(l.norm() >= 1.0 - 1e-12);
            assert!((l + 1.0 / l - k).norm() < 1e-9 * k.norm().max(1.0));
        }
    }

    #[test]
    fn agm_known_value() {
        // M(1, √2) = 1.19814023473559220744 (Gauss's constant inverse times √2)
        let m = agm(c64(1.0, 0.0), c64(2f64.sqrt(), 0.0)).unwrap();
        assert!((m.re - 1.198_140_234_735_592_2).abs() < 1e-14);
    }

    #[test]
    fn tau_from_lambda_examples() {
        let tau = tau_from_lambda(c64(-1.0, 0.0)).unwrap();
        assert!((tau - c64(0.0, 1.0)).norm() < 1e-12);
        assert!((k_of_tau(tau, EPS).unwrap() + 2.0).norm() < 1e-6);

        let tau = tau_from_lambda(c64(-3.0, 0.0)).unwrap();
        let k = k_of_tau(tau, EPS).unwrap();
        assert!((k - c64(-3.0 - 1.0 / 3.0, 0.0)).norm() < 1e-6);

        assert!(tau_from_lambda(c64(0.0, 0.0)).is_err());
        assert!(tau_from_lambda(c64(1.0, 0.0)).is_err());
    }

    #[test]
    fn round_trip_on_the_real_slice() {
        for k in [-2.5, -3.0, -5.0, -10.0] {
            let curve = curve_from_k(c64(k, 0.0)).unwrap();
            let tau = tau_from_lambda(curve.lambda()).unwrap();
            let back = k_of_tau(tau, EPS).unwrap();
            assert!((back - k).norm() < 1e-6, "k={k} back={back}");
        }
    }

    #[test]
    fn round_trip_in_a_complex_neighbourhood() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..30 {
            let r = rng.gen_range(0.2..8.0);
            let arg = rng.gen_range(-PI / 4.0..PI / 4.0);
            let lambda = -Complex64::from_polar(r, arg);
            if (lambda - 1.0).norm() < 1e-3 {
                continue;
            }
            let tau = tau_from_lambda(lambda).unwrap();
            let k = k_of_tau(tau, EPS).unwrap();
            let want = lambda + 1.0 / lambda;
            assert!((k - want).norm() < 1e-6 * want.norm().max(1.0), "lambda={lambda}");
        }
    }
}
