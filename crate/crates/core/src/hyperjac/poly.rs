//! Dense univariate polynomials over a prime field, lowest degree first.

use super::field::PrimeField;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly(Vec<u64>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly(vec![1])
    }

    pub fn constant(c: u64) -> Self {
        Poly(vec![c]).trimmed()
    }

    /// `x − a`.
    pub fn linear_root(field: &PrimeField, a: u64) -> Self {
        Poly(vec![field.neg(a), 1])
    }

    /// Reduces every coefficient and strips leading zeros.
    pub fn from_coeffs(field: &PrimeField, coeffs: &[u64]) -> Self {
        Poly(coeffs.iter().map(|c| c % field.modulus()).collect()).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.0.last().copied().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn eval(&self, field: &PrimeField, x: u64) -> u64 {
        self.0
            .iter()
            .rev()
            .fold(0, |acc, &c| field.add(field.mul(acc, x), c))
    }

    pub fn add(&self, other: &Poly, field: &PrimeField) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly((0..n).map(|i| field.add(self.coeff(i), other.coeff(i))).collect()).trimmed()
    }

    pub fn sub(&self, other: &Poly, field: &PrimeField) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly((0..n).map(|i| field.sub(self.coeff(i), other.coeff(i))).collect()).trimmed()
    }

    pub fn neg(&self, field: &PrimeField) -> Poly {
        Poly(self.0.iter().map(|&c| field.neg(c)).collect())
    }

    pub fn scale(&self, k: u64, field: &PrimeField) -> Poly {
        Poly(self.0.iter().map(|&c| field.mul(c, k)).collect()).trimmed()
    }

    pub fn mul(&self, other: &Poly, field: &PrimeField) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u64; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(a, b));
            }
        }
        Poly(out).trimmed()
    }

    /// Euclidean division; panics when dividing by zero.
    pub fn div_rem(&self, divisor: &Poly, field: &PrimeField) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let inv_lead = field.inv(divisor.leading());
        let mut rem = self.0.clone();
        let Some(nd) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if nd < dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![0u64; nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = field.mul(rem[k + dd], inv_lead);
            quot[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in divisor.0.iter().enumerate() {
                rem[k + j] = field.sub(rem[k + j], field.mul(c, b));
            }
        }
        rem.truncate(dd);
        (Poly(quot).trimmed(), Poly(rem).trimmed())
    }

    pub fn rem(&self, divisor: &Poly, field: &PrimeField) -> Poly {
        self.div_rem(divisor, field).1
    }

    pub fn monic(&self, field: &PrimeField) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(field.inv(self.leading()), field)
    }

    /// Extended gcd: `(d, s, t)` with `d = s·a + t·b` and `d` monic (or zero
    /// when both inputs are zero).
    pub fn xgcd(a: &Poly, b: &Poly, field: &PrimeField) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1, field);
            let s2 = s0.sub(&q.mul(&s1, field), field);
            let t2 = t0.sub(&q.mul(&t1, field), field);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let k = field.inv(r0.leading());
        (r0.scale(k, field), s0.scale(k, field), t0.scale(k, field))
    }
}
