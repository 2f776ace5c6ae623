//! Hyperelliptic curves `y² = f(x)` over a prime field and their Jacobians.
//!
//! Every curve is kept in an odd-degree model with one branch point at
//! infinity. When the branch set has even size, the last branch value is
//! sent to infinity by `x ↦ 1/(K(x − pivot))` with
//! `K = ∏_{b ≠ pivot}(pivot − b)`, which keeps the model monic; `y` becomes
//! `y·X^{γ+1}`. The change is recorded so that x-coordinates can be mapped
//! back.
//!
//! Divisor classes are reduced Mumford pairs `(u, v)` relative to the point
//! at infinity, and the group law is Cantor's composition and reduction.

pub mod field;
pub mod poly;

use std::fmt;

use rand::Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

pub use field::{is_prime, PrimeField};
pub use poly::Poly;

use crate::{Error, Result};

/// A point of the projective line over `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum P1 {
    Finite(u64),
    Infinity,
}

impl fmt::Display for P1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1::Finite(x) => write!(f, "{x}"),
            P1::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for P1 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The coordinate change `X = 1/(scale·(x − pivot))` into the odd model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MobiusChange {
    pub pivot: u64,
    pub scale: u64,
}

/// A point of the odd model; `Infinity` is the branch point at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurvePoint {
    Infinity,
    Affine { x: u64, y: u64 },
}

impl CurvePoint {
    pub fn x(&self) -> P1 {
        match self {
            CurvePoint::Infinity => P1::Infinity,
            CurvePoint::Affine { x, .. } => P1::Finite(*x),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperellipticCurve {
    field: PrimeField,
    branch_xs: Vec<u64>,
    model_roots: Vec<u64>,
    f: Poly,
    genus: usize,
    change: Option<MobiusChange>,
}

impl HyperellipticCurve {
    /// Curve branched over `branch_xs` (reduced mod `p`). An odd count gives
    /// `y² = ∏(x − b)` directly; an even count moves the last value to
    /// infinity.
    pub fn new(p: u64, branch_xs: &[u64]) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let xs: Vec<u64> = branch_xs.iter().map(|b| b % p).collect();
        let mut sorted = xs.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidCurve(format!(
                "repeated branch point modulo {p}"
            )));
        }
        let n = xs.len();
        let genus = if n % 2 == 1 { (n - 1) / 2 } else { n.saturating_sub(2) / 2 };
        if genus == 0 {
            return Err(Error::InvalidCurve(format!(
                "{n} branch points give genus 0; Jacobian operations need genus at least 1"
            )));
        }
        let (model_roots, change) = if n % 2 == 1 {
            (xs.clone(), None)
        } else {
            let pivot = xs[n - 1];
            let scale = xs[..n - 1]
                .iter()
                .fold(1, |acc, &b| field.mul(acc, field.sub(pivot, b)));
            let change = MobiusChange { pivot, scale };
            let roots = xs[..n - 1]
                .iter()
                .map(|&b| field.inv(field.mul(scale, field.sub(b, pivot))))
                .collect();
            (roots, Some(change))
        };
        let f = model_roots
            .iter()
            .fold(Poly::one(), |acc, &r| acc.mul(&Poly::linear_root(&field, r), &field));
        Ok(Self {
            field,
            branch_xs: xs,
            model_roots,
            f,
            genus,
            change,
        })
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.modulus()
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Branch values as given, in original coordinates.
    pub fn branch_xs(&self) -> &[u64] {
        &self.branch_xs
    }

    /// Finite branch values of the odd model.
    pub fn model_roots(&self) -> &[u64] {
        &self.model_roots
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn change(&self) -> Option<MobiusChange> {
        self.change
    }

    /// Original x-coordinate to model x-coordinate.
    pub fn to_model_x(&self, x: P1) -> P1 {
        let Some(MobiusChange { pivot, scale }) = self.change else {
            return x;
        };
        let fd = &self.field;
        match x {
            P1::Infinity => P1::Finite(0),
            P1::Finite(v) if v == pivot => P1::Infinity,
            P1::Finite(v) => P1::Finite(fd.inv(fd.mul(scale, fd.sub(v, pivot)))),
        }
    }

    /// Model x-coordinate to original x-coordinate.
    pub fn to_original_x(&self, x: P1) -> P1 {
        let Some(MobiusChange { pivot, scale }) = self.change else {
            return x;
        };
        let fd = &self.field;
        match x {
            P1::Infinity => P1::Finite(pivot),
            P1::Finite(0) => P1::Infinity,
            P1::Finite(v) => P1::Finite(fd.add(pivot, fd.inv(fd.mul(scale, v)))),
        }
    }

    pub fn is_on_curve(&self, pt: &CurvePoint) -> bool {
        match *pt {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => {
                x < self.p() && y < self.p() && self.field.mul(y, y) == self.f.eval(&self.field, x)
            }
        }
    }

    /// The hyperelliptic involution `(x, y) ↦ (x, −y)`.
    pub fn conjugate(&self, pt: &CurvePoint) -> CurvePoint {
        match *pt {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine {
                x,
                y: self.field.neg(y),
            },
        }
    }

    /// The `2γ + 2` ramification points: the finite model roots, then `∞`.
    pub fn weierstrass_points(&self) -> Vec<CurvePoint> {
        self.model_roots
            .iter()
            .map(|&x| CurvePoint::Affine { x, y: 0 })
            .chain(std::iter::once(CurvePoint::Infinity))
            .collect()
    }

    /// Points of the model over the given model x-coordinate (zero, one or two).
    pub fn points_over(&self, x: u64) -> Vec<CurvePoint> {
        let fx = self.f.eval(&self.field, x);
        match self.field.sqrt(fx) {
            None => Vec::new(),
            Some(0) => vec![CurvePoint::Affine { x, y: 0 }],
            Some(y) => vec![
                CurvePoint::Affine { x, y },
                CurvePoint::Affine {
                    x,
                    y: self.field.neg(y),
                },
            ],
        }
    }

    /// All affine points of the model; intended for small `p`.
    pub fn affine_points(&self) -> Vec<CurvePoint> {
        (0..self.p()).flat_map(|x| self.points_over(x)).collect()
    }

    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> CurvePoint {
        loop {
            let x = rng.gen_range(0..self.p());
            let pts = self.points_over(x);
            if !pts.is_empty() {
                return pts[rng.gen_range(0..pts.len())];
            }
        }
    }

    /// Sum of `γ` random points: generically a class with `deg u = γ`.
    pub fn random_divisor<R: Rng + ?Sized>(&self, rng: &mut R) -> MumfordDivisor {
        (0..self.genus).fold(MumfordDivisor::identity(), |acc, _| {
            let pt = self.random_point(rng);
            let d = self.divisor_of_point(&pt).expect("sampled point lies on the curve");
            self.add(&acc, &d)
        })
    }

    /// Validates a Mumford pair.
    pub fn divisor(&self, u: Poly, v: Poly) -> Result<MumfordDivisor> {
        let fd = &self.field;
        let du = u
            .degree()
            .ok_or_else(|| Error::MalformedDivisor("u is zero".into()))?;
        if !u.is_monic() {
            return Err(Error::MalformedDivisor("u is not monic".into()));
        }
        if du > self.genus {
            return Err(Error::MalformedDivisor(format!(
                "deg u = {du} exceeds the genus {}",
                self.genus
            )));
        }
        if v.degree().is_some_and(|dv| dv >= du) {
            return Err(Error::MalformedDivisor("deg v must be below deg u".into()));
        }
        if !v.mul(&v, fd).sub(&self.f, fd).rem(&u, fd).is_zero() {
            return Err(Error::MalformedDivisor("u does not divide v² − f".into()));
        }
        Ok(MumfordDivisor { u, v })
    }

    /// The class of `P − ∞`.
    pub fn divisor_of_point(&self, pt: &CurvePoint) -> Result<MumfordDivisor> {
        match *pt {
            CurvePoint::Infinity => Ok(MumfordDivisor::identity()),
            CurvePoint::Affine { x, y } => {
                if !self.is_on_curve(pt) {
                    return Err(Error::NotOnCurve);
                }
                Ok(MumfordDivisor {
                    u: Poly::linear_root(&self.field, x),
                    v: Poly::constant(y),
                })
            }
        }
    }

    /// Inverse of the Abel map on its image: the point `P` with
    /// `D = cl(P − ∞)`, when `deg u ≤ 1`.
    pub fn lift_to_point(&self, d: &MumfordDivisor) -> Option<CurvePoint> {
        match d.u.degree() {
            Some(0) => Some(CurvePoint::Infinity),
            Some(1) => Some(CurvePoint::Affine {
                x: self.field.neg(d.u.coeff(0)),
                y: d.v.coeff(0),
            }),
            _ => None,
        }
    }

    pub fn neg(&self, d: &MumfordDivisor) -> MumfordDivisor {
        MumfordDivisor {
            u: d.u.clone(),
            v: d.v.neg(&self.field),
        }
    }

    /// Cantor composition followed by reduction.
    pub fn add(&self, d1: &MumfordDivisor, d2: &MumfordDivisor) -> MumfordDivisor {
        let fd = &self.field;
        let (d1g, e1, e2) = Poly::xgcd(&d1.u, &d2.u, fd);
        let vsum = d1.v.add(&d2.v, fd);
        let (d, c1, c2) = Poly::xgcd(&d1g, &vsum, fd);
        let s1 = c1.mul(&e1, fd);
        let s2 = c1.mul(&e2, fd);
        let s3 = c2;

        let d_sq = d.mul(&d, fd);
        let (u, r) = d1.u.mul(&d2.u, fd).div_rem(&d_sq, fd);
        debug_assert!(r.is_zero());
        let num = s1
            .mul(&d1.u, fd)
            .mul(&d2.v, fd)
            .add(&s2.mul(&d2.u, fd).mul(&d1.v, fd), fd)
            .add(&s3.mul(&d1.v.mul(&d2.v, fd).add(&self.f, fd), fd), fd);
        let (vq, r) = num.div_rem(&d, fd);
        debug_assert!(r.is_zero());
        let v = vq.rem(&u, fd);
        self.reduce(u, v)
    }

    fn reduce(&self, mut u: Poly, mut v: Poly) -> MumfordDivisor {
        let fd = &self.field;
        while u.degree().unwrap_or(0) > self.genus {
            let (u_next, r) = self.f.sub(&v.mul(&v, fd), fd).div_rem(&u, fd);
            debug_assert!(r.is_zero());
            v = v.neg(fd).rem(&u_next, fd);
            u = u_next;
        }
        let u = u.monic(fd);
        let v = v.rem(&u, fd);
        MumfordDivisor { u, v }
    }

    pub fn sub(&self, d1: &MumfordDivisor, d2: &MumfordDivisor) -> MumfordDivisor {
        self.add(d1, &self.neg(d2))
    }

    pub fn double(&self, d: &MumfordDivisor) -> MumfordDivisor {
        self.add(d, d)
    }

    pub fn scalar_mul(&self, d: &MumfordDivisor, mut n: u64) -> MumfordDivisor {
        let mut acc = MumfordDivisor::identity();
        let mut base = d.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.double(&base);
            n >>= 1;
        }
        acc
    }

    /// True iff the class is `cl(x − ∞)` for a point `x`, i.e. `deg u ≤ 1`.
    pub fn is_on_abel_image(&self, d: &MumfordDivisor) -> bool {
        d.u.degree().is_some_and(|k| k <= 1)
    }

    pub fn two_torsion_from_subset(&self, s: &TwoTorsionClass) -> Result<MumfordDivisor> {
        if s.root_count != self.model_roots.len() {
            return Err(Error::InvalidArgument(format!(
                "subset over {} roots used on a curve with {}",
                s.root_count,
                self.model_roots.len()
            )));
        }
        let u = self
            .model_roots
            .iter()
            .enumerate()
            .filter(|(i, _)| s.mask >> i & 1 == 1)
            .fold(Poly::one(), |acc, (_, &r)| {
                acc.mul(&Poly::linear_root(&self.field, r), &self.field)
            });
        Ok(MumfordDivisor { u, v: Poly::zero() })
    }

    /// All `2^{2γ}` classes of `J₂` in canonical subset form.
    pub fn two_torsion_classes(&self) -> Vec<TwoTorsionClass> {
        let n = self.model_roots.len();
        (0u64..1 << n)
            .filter(|m| m.count_ones() as usize <= self.genus)
            .map(|mask| TwoTorsionClass { root_count: n, mask })
            .collect()
    }
}

impl Serialize for HyperellipticCurve {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("HyperellipticCurve", 4)?;
        st.serialize_field("p", &self.p().to_string())?;
        st.serialize_field("genus", &self.genus)?;
        st.serialize_field(
            "branch_xs",
            &self.branch_xs.iter().map(u64::to_string).collect::<Vec<_>>(),
        )?;
        st.serialize_field(
            "change",
            &self.change.map(|c| [c.pivot.to_string(), c.scale.to_string()]),
        )?;
        st.end()
    }
}

/// A reduced divisor class `(u, v)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MumfordDivisor {
    u: Poly,
    v: Poly,
}

impl MumfordDivisor {
    pub fn identity() -> Self {
        Self {
            u: Poly::one(),
            v: Poly::zero(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.u == Poly::one()
    }

    pub fn u(&self) -> &Poly {
        &self.u
    }

    pub fn v(&self) -> &Poly {
        &self.v
    }

    pub fn degree(&self) -> usize {
        self.u.degree().unwrap_or(0)
    }
}

impl Serialize for MumfordDivisor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let digits = |p: &Poly| p.coeffs().iter().map(u64::to_string).collect::<Vec<_>>();
        let mut st = s.serialize_struct("MumfordDivisor", 2)?;
        st.serialize_field("u", &digits(&self.u))?;
        st.serialize_field("v", &digits(&self.v))?;
        st.end()
    }
}

/// A class of `J₂` written as `Σ_{b ∈ T} (b − ∞)` for a set `T` of finite
/// model roots, taken modulo complementation.
///
/// The canonical representative has `|T| ≤ γ`. As an even subset of the full
/// branch set it is `T` when `|T|` is even and `T ∪ {∞}` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoTorsionClass {
    root_count: usize,
    mask: u64,
}

impl TwoTorsionClass {
    /// `root_count` is the number of finite model roots (`2γ + 1`).
    pub fn new(root_count: usize, mask: u64) -> Result<Self> {
        if root_count % 2 == 0 || root_count >= 64 {
            return Err(Error::InvalidArgument(format!(
                "root count {root_count} is not of the form 2γ + 1"
            )));
        }
        let full = (1u64 << root_count) - 1;
        if mask & !full != 0 {
            return Err(Error::InvalidArgument("subset mask exceeds the root count".into()));
        }
        let gamma = (root_count - 1) / 2;
        let mask = if mask.count_ones() as usize > gamma {
            !mask & full
        } else {
            mask
        };
        Ok(Self { root_count, mask })
    }

    /// From a subset of the full branch set given as root indices plus a flag
    /// for `∞`. The subset must have even size.
    pub fn from_branch_subset(root_count: usize, roots: &[usize], with_infinity: bool) -> Result<Self> {
        if (roots.len() + with_infinity as usize) % 2 == 1 {
            return Err(Error::InvalidArgument("branch subset must have even size".into()));
        }
        let mut mask = 0u64;
        for &i in roots {
            if i >= root_count || mask >> i & 1 == 1 {
                return Err(Error::InvalidArgument(format!("bad root index {i}")));
            }
            mask |= 1 << i;
        }
        Self::new(root_count, mask)
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn root_indices(&self) -> Vec<usize> {
        (0..self.root_count).filter(|i| self.mask >> i & 1 == 1).collect()
    }

    /// Whether the even-size representative contains `∞`.
    pub fn contains_infinity(&self) -> bool {
        self.mask.count_ones() % 2 == 1
    }

    /// Complement within the full branch set; the same class.
    pub fn complement(&self) -> Self {
        let full = (1u64 << self.root_count) - 1;
        Self::new(self.root_count, !self.mask & full).expect("complement stays in range")
    }

    /// Symmetric difference, the group law of `J₂`.
    pub fn symmetric_difference(&self, other: &Self) -> Result<Self> {
        if self.root_count != other.root_count {
            return Err(Error::InvalidArgument("subsets over different branch sets".into()));
        }
        Self::new(self.root_count, self.mask ^ other.mask)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn sample_curve(p: u64, genus: usize, rng: &mut ChaCha8Rng) -> HyperellipticCurve {
        let mut xs = BTreeSet::new();
        while xs.len() < 2 * genus + 1 {
            xs.insert(rng.gen_range(0..p));
        }
        HyperellipticCurve::new(p, &xs.into_iter().collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn curve_construction() {
        let c = HyperellipticCurve::new(11, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(c.genus(), 2);
        assert_eq!(c.f().degree(), Some(5));
        for b in 0..5 {
            assert_eq!(c.f().eval(c.field(), b), 0);
        }
        assert!(c.change().is_none());
        assert!(HyperellipticCurve::new(11, &[0, 1]).is_err());
        assert!(HyperellipticCurve::new(11, &[0, 1, 12]).is_err());
        assert!(HyperellipticCurve::new(9, &[0, 1, 2]).is_err());
    }

    #[test]
    fn even_model_moves_the_pivot_to_infinity() {
        let c = HyperellipticCurve::new(101, &[3, 8, 20, 41, 57, 90]).unwrap();
        assert_eq!(c.genus(), 2);
        assert_eq!(c.f().degree(), Some(5));
        assert!(c.f().is_monic());
        assert_eq!(c.to_model_x(P1::Finite(90)), P1::Infinity);
        for &b in &[3, 8, 20, 41, 57] {
            let P1::Finite(m) = c.to_model_x(P1::Finite(b)) else { panic!() };
            assert_eq!(c.f().eval(c.field(), m), 0);
            assert_eq!(c.to_original_x(P1::Finite(m)), P1::Finite(b));
        }
        assert_eq!(c.to_original_x(P1::Finite(0)), P1::Infinity);
        assert_eq!(c.to_original_x(P1::Infinity), P1::Finite(90));

        // squareness over a non-branch value agrees between the two models
        let fd = *c.field();
        for x in 0..101u64 {
            if [3, 8, 20, 41, 57, 90].contains(&x) {
                continue;
            }
            let orig = [3u64, 8, 20, 41, 57, 90]
                .iter()
                .fold(1, |acc, &b| fd.mul(acc, fd.sub(x, b)));
            let P1::Finite(m) = c.to_model_x(P1::Finite(x)) else { panic!() };
            assert_eq!(fd.is_square(orig), fd.is_square(c.f().eval(&fd, m)));
        }
    }

    #[test]
    fn identity_and_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = sample_curve(101, 2, &mut rng);
        for _ in 0..50 {
            let d = c.random_divisor(&mut rng);
            assert_eq!(c.add(&d, &MumfordDivisor::identity()), d);
            assert!(c.add(&d, &c.neg(&d)).is_identity());
            assert!(c.divisor(d.u().clone(), d.v().clone()).is_ok());
        }
    }

    #[test]
    fn associativity_and_commutativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (p, genus) in [(101, 2), (101, 3), (10007, 2)] {
            let c = sample_curve(p, genus, &mut rng);
            for _ in 0..100 {
                let a = c.random_divisor(&mut rng);
                let b = c.random_divisor(&mut rng);
                let d = c.random_divisor(&mut rng);
                assert_eq!(c.add(&c.add(&a, &b), &d), c.add(&a, &c.add(&b, &d)));
                assert_eq!(c.add(&a, &b), c.add(&b, &a));
            }
        }
    }

    #[test]
    fn elliptic_case_matches_chord_and_tangent() {
        // γ = 1: Cantor on y² = x³ + ax + b agrees with the affine group law
        let c = HyperellipticCurve::new(103, &[2, 17, 84]).unwrap();
        let fd = *c.field();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) =
                (c.random_point(&mut rng), c.random_point(&mut rng))
            else {
                unreachable!()
            };
            if x1 == x2 {
                continue;
            }
            let slope = fd.mul(fd.sub(y2, y1), fd.inv(fd.sub(x2, x1)));
            // x³ + c₂x² + …: x₃ = s² − c₂ − x₁ − x₂
            let c2 = c.f().coeff(2);
            let x3 = fd.sub(fd.sub(fd.sub(fd.mul(slope, slope), c2), x1), x2);
            let y3 = fd.neg(fd.add(y1, fd.mul(slope, fd.sub(x3, x1))));
            let sum = c.add(
                &c.divisor_of_point(&CurvePoint::Affine { x: x1, y: y1 }).unwrap(),
                &c.divisor_of_point(&CurvePoint::Affine { x: x2, y: y2 }).unwrap(),
            );
            assert_eq!(c.lift_to_point(&sum), Some(CurvePoint::Affine { x: x3, y: y3 }));
        }
    }

    #[test]
    fn divisor_of_point_cases() {
        let c = HyperellipticCurve::new(11, &[0, 1, 2, 3, 4]).unwrap();
        assert!(c.divisor_of_point(&CurvePoint::Infinity).unwrap().is_identity());
        for w in c.weierstrass_points() {
            let d = c.divisor_of_point(&w).unwrap();
            assert!(c.double(&d).is_identity());
            assert!(c.is_on_abel_image(&d));
        }
        let pt = c.affine_points().into_iter().find(|p| matches!(p, CurvePoint::Affine { y, .. } if *y != 0)).unwrap();
        let CurvePoint::Affine { x, y } = pt else { unreachable!() };
        let d = c.divisor_of_point(&pt).unwrap();
        assert_eq!(d.u(), &Poly::linear_root(c.field(), x));
        assert_eq!(d.v(), &Poly::constant(y));
        assert_eq!(c.lift_to_point(&d), Some(pt));
        let off = CurvePoint::Affine { x, y: (y + 1) % 11 };
        if !c.is_on_curve(&off) {
            assert_eq!(c.divisor_of_point(&off), Err(Error::NotOnCurve));
        }
    }

    #[test]
    fn weierstrass_points_of_a_small_curve() {
        let c = HyperellipticCurve::new(11, &[0, 1, 2, 3, 4]).unwrap();
        let w = c.weierstrass_points();
        assert_eq!(w.len(), 6);
        let xs: Vec<P1> = w.iter().map(|p| p.x()).collect();
        assert_eq!(
            xs,
            vec![P1::Finite(0), P1::Finite(1), P1::Finite(2), P1::Finite(3), P1::Finite(4), P1::Infinity]
        );
        assert!(w.iter().all(|p| matches!(p, CurvePoint::Infinity | CurvePoint::Affine { y: 0, .. })));
    }

    #[test]
    fn malformed_divisors_are_rejected() {
        let c = HyperellipticCurve::new(11, &[0, 1, 2, 3, 4]).unwrap();
        let fd = *c.field();
        assert!(c.divisor(Poly::zero(), Poly::zero()).is_err());
        assert!(c.divisor(Poly::from_coeffs(&fd, &[1, 2]), Poly::zero()).is_err());
        assert!(c.divisor(Poly::from_coeffs(&fd, &[0, 0, 0, 1]), Poly::zero()).is_err());
        assert!(c.divisor(Poly::linear_root(&fd, 5), Poly::from_coeffs(&fd, &[1, 1])).is_err());
        assert!(c.divisor(Poly::linear_root(&fd, 5), Poly::zero()).is_err());
        assert!(c.divisor(Poly::linear_root(&fd, 4), Poly::zero()).is_ok());
    }

    #[test]
    fn generic_divisors_are_off_the_abel_image() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let c = sample_curve(10007, 2, &mut rng);
        let generic = (0..50)
            .filter(|_| !c.is_on_abel_image(&c.random_divisor(&mut rng)))
            .count();
        assert!(generic >= 45);
        assert!(c.is_on_abel_image(&MumfordDivisor::identity()));
    }

    #[test]
    fn subset_model_is_all_of_j2() {
        // brute force: every monic u of degree ≤ 2 with v = 0 and 2D = 0
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = sample_curve(101, 2, &mut rng);
        let fd = *c.field();
        let mut brute = BTreeSet::new();
        for deg in 0..=2usize {
            let count = 101u64.pow(deg as u32);
            for idx in 0..count {
                let mut coeffs: Vec<u64> = (0..deg).map(|k| idx / 101u64.pow(k as u32) % 101).collect();
                coeffs.push(1);
                if let Ok(d) = c.divisor(Poly::from_coeffs(&fd, &coeffs), Poly::zero()) {
                    if c.double(&d).is_identity() {
                        brute.insert(d);
                    }
                }
            }
        }
        let model: BTreeSet<_> = c
            .two_torsion_classes()
            .iter()
            .map(|s| c.two_torsion_from_subset(s).unwrap())
            .collect();
        assert_eq!(model.len(), 16);
        assert_eq!(model, brute);
        assert!(c
            .two_torsion_from_subset(&TwoTorsionClass::new(5, 0).unwrap())
            .unwrap()
            .is_identity());
    }

    #[test]
    fn subset_model_is_a_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for genus in [2usize, 3] {
            let c = sample_curve(10007, genus, &mut rng);
            let n = 2 * genus + 1;
            let classes = c.two_torsion_classes();
            assert_eq!(classes.len(), 1 << (2 * genus));
            for _ in 0..50 {
                let s1 = TwoTorsionClass::new(n, rng.gen_range(0..1u64 << n)).unwrap();
                let s2 = TwoTorsionClass::new(n, rng.gen_range(0..1u64 << n)).unwrap();
                let d1 = c.two_torsion_from_subset(&s1).unwrap();
                let d2 = c.two_torsion_from_subset(&s2).unwrap();
                let sum = c.two_torsion_from_subset(&s1.symmetric_difference(&s2).unwrap()).unwrap();
                assert_eq!(c.add(&d1, &d2), sum);
                assert!(c.double(&d1).is_identity());
                assert_eq!(c.two_torsion_from_subset(&s1.complement()).unwrap(), d1);
            }
        }
    }

    #[test]
    fn branch_subset_form() {
        let s = TwoTorsionClass::from_branch_subset(5, &[0], true).unwrap();
        assert!(s.contains_infinity());
        assert_eq!(s.root_indices(), vec![0]);
        // {b0, b1, b2, ∞} is the complement of {b3, b4}
        let t = TwoTorsionClass::from_branch_subset(5, &[0, 1, 2], true).unwrap();
        assert_eq!(t, TwoTorsionClass::from_branch_subset(5, &[3, 4], false).unwrap());
        assert!(TwoTorsionClass::from_branch_subset(5, &[0], false).is_err());
        assert!(TwoTorsionClass::new(4, 0).is_err());
    }

    #[test]
    fn scalar_multiplication_matches_repeated_addition() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let c = sample_curve(101, 2, &mut rng);
        let d = c.random_divisor(&mut rng);
        let mut acc = MumfordDivisor::identity();
        for n in 0..20u64 {
            assert_eq!(c.scalar_mul(&d, n), acc);
            acc = c.add(&acc, &d);
        }
    }
}
