//! Theta characteristics of a principally polarized abelian variety as
//! points of order two, stored in doubled form over F₂.
//!
//! A half-integer characteristic `[λ′; λ″]` with entries in `{0, ½}` is kept
//! as the pair of bit vectors `(2λ′, 2λ″) mod 2`. Coordinate `i` of a row is
//! stored in bit `g − 1 − i`, so numeric order of the masks coincides with
//! lexicographic order of the row strings.
//!
//! Basis convention: the half period `½aᵢ` is `(top 0, bottom eᵢ)` and `½bᵢ`
//! is `(top eᵢ, bottom 0)`.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::{Error, Result};

/// Largest genus a row can hold.
pub const MAX_GENUS: usize = 32;

/// Largest genus for which [`enumerate_torsion`] materializes all `4^g`
/// points.
pub const MAX_ENUMERATION_GENUS: usize = 8;

#[inline]
fn row_mask(g: usize) -> u64 {
    if g == 0 {
        0
    } else {
        u64::MAX >> (64 - g)
    }
}

/// A point of order dividing two, i.e. a half-integer characteristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Characteristic2 {
    genus: usize,
    top: u64,
    bottom: u64,
}

impl Characteristic2 {
    /// Builds a characteristic from row masks (coordinate 0 is the most
    /// significant of the `g` bits).
    pub fn from_masks(genus: usize, top: u64, bottom: u64) -> Result<Self> {
        if genus == 0 || genus > MAX_GENUS {
            return Err(Error::InvalidArgument(format!(
                "genus must be in 1..={MAX_GENUS}, got {genus}"
            )));
        }
        let m = row_mask(genus);
        if top & !m != 0 || bottom & !m != 0 {
            return Err(Error::InvalidArgument(format!(
                "row mask wider than genus {genus}"
            )));
        }
        Ok(Self { genus, top, bottom })
    }

    pub(crate) fn from_masks_unchecked(genus: usize, top: u64, bottom: u64) -> Self {
        debug_assert!((1..=MAX_GENUS).contains(&genus));
        let m = row_mask(genus);
        Self {
            genus,
            top: top & m,
            bottom: bottom & m,
        }
    }

    /// Builds a characteristic from explicit 0/1 rows.
    pub fn from_bits(top: &[u8], bottom: &[u8]) -> Result<Self> {
        if top.len() != bottom.len() {
            return Err(Error::InvalidArgument(format!(
                "rows have different lengths {} and {}",
                top.len(),
                bottom.len()
            )));
        }
        let pack = |row: &[u8]| -> Result<u64> {
            row.iter().try_fold(0u64, |acc, &b| match b {
                0 | 1 => Ok((acc << 1) | b as u64),
                _ => Err(Error::InvalidArgument(format!("entry {b} is not a bit"))),
            })
        };
        Self::from_masks(top.len(), pack(top)?, pack(bottom)?)
    }

    pub fn zero(genus: usize) -> Self {
        Self::from_masks_unchecked(genus, 0, 0)
    }

    /// The unit vector `eᵢ` (0-based) placed in the top row.
    pub fn top_unit(genus: usize, i: usize) -> Self {
        assert!(i < genus);
        Self::from_masks_unchecked(genus, 1 << (genus - 1 - i), 0)
    }

    /// The unit vector `eᵢ` (0-based) placed in the bottom row.
    pub fn bottom_unit(genus: usize, i: usize) -> Self {
        assert!(i < genus);
        Self::from_masks_unchecked(genus, 0, 1 << (genus - 1 - i))
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn top(&self) -> u64 {
        self.top
    }

    pub fn bottom(&self) -> u64 {
        self.bottom
    }

    pub fn top_bit(&self, i: usize) -> u8 {
        ((self.top >> (self.genus - 1 - i)) & 1) as u8
    }

    pub fn bottom_bit(&self, i: usize) -> u8 {
        ((self.bottom >> (self.genus - 1 - i)) & 1) as u8
    }

    pub fn top_bits(&self) -> Vec<u8> {
        (0..self.genus).map(|i| self.top_bit(i)).collect()
    }

    pub fn bottom_bits(&self) -> Vec<u8> {
        (0..self.genus).map(|i| self.bottom_bit(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.top == 0 && self.bottom == 0
    }

    /// Group law on the 2-torsion.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        check_genus(self.genus, other.genus)?;
        Ok(Self::from_masks_unchecked(
            self.genus,
            self.top ^ other.top,
            self.bottom ^ other.bottom,
        ))
    }

    /// `(−1)^{4λ′ᵗλ″}` as a bit: 0 for even characteristics, 1 for odd.
    pub fn parity(&self) -> u8 {
        q_std(self)
    }
}

impl Add for Characteristic2 {
    type Output = Characteristic2;

    /// Panics on a genus mismatch; use [`Characteristic2::try_add`] for the
    /// fallible form.
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("genus mismatch in characteristic sum")
    }
}

fn write_row(f: &mut fmt::Formatter<'_>, genus: usize, row: u64) -> fmt::Result {
    for i in 0..genus {
        write!(f, "{}", (row >> (genus - 1 - i)) & 1)?;
    }
    Ok(())
}

impl fmt::Display for Characteristic2 {
    /// Compact form `g:top/bottom`, e.g. `3:010/110`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.genus)?;
        write_row(f, self.genus, self.top)?;
        f.write_str("/")?;
        write_row(f, self.genus, self.bottom)
    }
}

fn parse_row(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::Parse(format!("unexpected character {other:?} in row"))),
        })
        .collect()
}

impl FromStr for Characteristic2 {
    type Err = Error;

    /// Accepts `g:top/bottom` or the bare `top/bottom`.
    fn from_str(s: &str) -> Result<Self> {
        let (declared, rows) = match s.split_once(':') {
            Some((g, rest)) => (
                Some(
                    g.trim()
                        .parse::<usize>()
                        .map_err(|e| Error::Parse(format!("bad genus {g:?}: {e}")))?,
                ),
                rest,
            ),
            None => (None, s),
        };
        let (top, bottom) = rows
            .split_once('/')
            .ok_or_else(|| Error::Parse(format!("expected top/bottom, got {s:?}")))?;
        let c = Self::from_bits(&parse_row(top.trim())?, &parse_row(bottom.trim())?)?;
        if let Some(g) = declared {
            check_genus(g, c.genus)?;
        }
        Ok(c)
    }
}

impl Serialize for Characteristic2 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub(crate) fn check_genus(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::GenusMismatch { expected, found })
    }
}

/// The Weyl pairing `e₂(a, b) = a.top·b.bottom + b.top·a.bottom (mod 2)`.
pub fn weyl_pairing(a: &Characteristic2, b: &Characteristic2) -> Result<u8> {
    check_genus(a.genus, b.genus)?;
    Ok(weyl_pairing_unchecked(a, b))
}

#[inline]
pub(crate) fn weyl_pairing_unchecked(a: &Characteristic2, b: &Characteristic2) -> u8 {
    (((a.top & b.bottom).count_ones() + (b.top & a.bottom).count_ones()) & 1) as u8
}

/// The form attached to the divisor of `θ[0;0]`: `top·bottom (mod 2)`.
pub fn q_std(c: &Characteristic2) -> u8 {
    ((c.top & c.bottom).count_ones() & 1) as u8
}

/// A quadratic form on the 2-torsion whose polar form is the Weyl pairing,
/// realized as `λ ↦ q_std(λ + shift) + constant`.
///
/// The shift is the characteristic of the symmetric theta divisor the form
/// belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticFormF2 {
    shift: Characteristic2,
    constant: u8,
}

impl QuadraticFormF2 {
    pub fn standard(genus: usize) -> Self {
        Self {
            shift: Characteristic2::zero(genus),
            constant: 0,
        }
    }

    /// The form of the theta divisor translated by `shift` from the divisor
    /// of `θ[0;0]`.
    pub fn with_shift(shift: Characteristic2) -> Self {
        Self { shift, constant: 0 }
    }

    pub fn new(shift: Characteristic2, constant: u8) -> Self {
        Self {
            shift,
            constant: constant & 1,
        }
    }

    pub fn genus(&self) -> usize {
        self.shift.genus
    }

    pub fn shift(&self) -> Characteristic2 {
        self.shift
    }

    pub fn constant(&self) -> u8 {
        self.constant
    }

    /// Number of zeros over all `4^g` points.
    pub fn zero_count(&self) -> Result<usize> {
        Ok(enumerate_torsion(self.genus())?
            .iter()
            .filter(|c| self.eval_unchecked(c) == 0)
            .count())
    }

    /// The form minus its value at the origin, i.e. normalized so that it
    /// vanishes at zero. Its zero count distinguishes even from odd shifts.
    pub fn centered(&self) -> Self {
        let at_zero = self.eval_unchecked(&Characteristic2::zero(self.genus()));
        Self {
            shift: self.shift,
            constant: self.constant ^ at_zero,
        }
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, c: &Characteristic2) -> u8 {
        q_std(&Characteristic2::from_masks_unchecked(
            c.genus,
            c.top ^ self.shift.top,
            c.bottom ^ self.shift.bottom,
        )) ^ self.constant
    }
}

/// Evaluates `q(c) = q_std(c + shift) + constant`.
pub fn form_eval(q: &QuadraticFormF2, c: &Characteristic2) -> Result<u8> {
    check_genus(q.genus(), c.genus)?;
    Ok(q.eval_unchecked(c))
}

/// The form `λ ↦ q(λ + a)`, attached to the theta divisor translated by `a`.
pub fn form_translate(q: &QuadraticFormF2, a: &Characteristic2) -> Result<QuadraticFormF2> {
    Ok(QuadraticFormF2 {
        shift: q.shift.try_add(a)?,
        constant: q.constant,
    })
}

/// All `4^g` points of order dividing two, lexicographic in `(top, bottom)`.
pub fn enumerate_torsion(genus: usize) -> Result<Vec<Characteristic2>> {
    if genus == 0 {
        return Err(Error::InvalidArgument("genus must be positive".into()));
    }
    if genus > MAX_ENUMERATION_GENUS {
        return Err(Error::EnumerationBound {
            genus,
            bound: MAX_ENUMERATION_GENUS,
        });
    }
    let n = 1u64 << genus;
    Ok((0..n)
        .flat_map(|top| (0..n).map(move |bottom| Characteristic2::from_masks_unchecked(genus, top, bottom)))
        .collect())
}

/// `2^{g−1}(2^g + 1)`, the number of zeros of an even form.
pub fn even_zero_count(genus: usize) -> usize {
    (1usize << (genus - 1)) * ((1usize << genus) + 1)
}

/// `2^{g−1}(2^g − 1)`, the number of zeros of an odd centered form.
pub fn odd_zero_count(genus: usize) -> usize {
    (1usize << (genus - 1)) * ((1usize << genus) - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ch(s: &str) -> Characteristic2 {
        s.parse().unwrap()
    }

    #[test]
    fn weyl_pairing_hand_values() {
        assert_eq!(weyl_pairing(&ch("1/0"), &ch("0/1")).unwrap(), 1);
        assert_eq!(weyl_pairing(&ch("10/00"), &ch("00/10")).unwrap(), 1);
        assert_eq!(weyl_pairing(&ch("10/00"), &ch("00/01")).unwrap(), 0);
        for c in enumerate_torsion(3).unwrap() {
            assert_eq!(weyl_pairing(&c, &c).unwrap(), 0);
        }
    }

    #[test]
    fn weyl_pairing_rejects_genus_mismatch() {
        assert_eq!(
            weyl_pairing(&ch("1/0"), &ch("10/00")),
            Err(Error::GenusMismatch { expected: 1, found: 2 })
        );
    }

    #[test]
    fn weyl_pairing_is_nondegenerate() {
        for g in 1..=3 {
            let all = enumerate_torsion(g).unwrap();
            for a in all.iter().filter(|c| !c.is_zero()) {
                let partners = all
                    .iter()
                    .filter(|b| weyl_pairing(a, b).unwrap() == 1)
                    .count();
                assert_eq!(partners, all.len() / 2, "g={g} a={a}");
            }
        }
    }

    #[test]
    fn q_std_hand_values() {
        assert_eq!(q_std(&Characteristic2::zero(4)), 0);
        assert_eq!(q_std(&ch("1/1")), 1);
        let odd: Vec<_> = enumerate_torsion(1)
            .unwrap()
            .into_iter()
            .filter(|c| q_std(c) == 1)
            .collect();
        assert_eq!(odd, vec![ch("1/1")]);
    }

    #[test]
    fn q_std_zero_counts() {
        let expected = [3, 10, 36, 136];
        for (g, &want) in (1..=4).zip(expected.iter()) {
            assert_eq!(QuadraticFormF2::standard(g).zero_count().unwrap(), want);
            assert_eq!(even_zero_count(g), want);
        }
    }

    #[test]
    fn form_eval_with_theta0_shift() {
        let q0 = QuadraticFormF2::with_shift(Characteristic2::bottom_unit(3, 0));
        assert_eq!(form_eval(&q0, &Characteristic2::bottom_unit(3, 0)).unwrap(), 0);
        assert_eq!(form_eval(&q0, &Characteristic2::top_unit(3, 0)).unwrap(), 1);
        assert!(form_eval(&q0, &Characteristic2::zero(2)).is_err());
    }

    #[test]
    fn identity_shift_agrees_with_q_std() {
        let q = QuadraticFormF2::standard(3);
        for c in enumerate_torsion(3).unwrap() {
            assert_eq!(form_eval(&q, &c).unwrap(), q_std(&c));
        }
    }

    #[test]
    fn polar_form_is_weyl_pairing_at_every_base_point() {
        for g in 1..=3 {
            let all = enumerate_torsion(g).unwrap();
            // every shift for g ≤ 2, a sample of even and odd shifts for g = 3
            let shifts: Vec<_> = if g < 3 {
                all.clone()
            } else {
                vec![all[0], all[9], all[27], all[63]]
            };
            for shift in shifts {
                for constant in 0..2 {
                    let q = QuadraticFormF2::new(shift, constant);
                    for l in &all {
                        for m in &all {
                            let e = weyl_pairing(l, m).unwrap();
                            for xi in &all {
                                let d = q.eval_unchecked(&(*xi + *l + *m))
                                    ^ q.eval_unchecked(&(*xi + *l))
                                    ^ q.eval_unchecked(&(*xi + *m))
                                    ^ q.eval_unchecked(xi);
                                assert_eq!(d, e);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn translate_by_odd_point_flips_centered_parity() {
        let q = QuadraticFormF2::standard(2);
        for a in enumerate_torsion(2).unwrap() {
            let r = form_translate(&q, &a).unwrap();
            for l in enumerate_torsion(2).unwrap() {
                assert_eq!(form_eval(&r, &l).unwrap(), form_eval(&q, &(l + a)).unwrap());
            }
            // translation is a bijection of the points, so the raw count is kept
            assert_eq!(r.zero_count().unwrap(), 10);
            let centered = r.centered().zero_count().unwrap();
            if q_std(&a) == 1 {
                assert_eq!(centered, odd_zero_count(2));
                assert_eq!(centered, 6);
            } else {
                assert_eq!(centered, even_zero_count(2));
            }
        }
    }

    #[test]
    fn enumeration_sizes_and_order() {
        assert_eq!(enumerate_torsion(1).unwrap().len(), 4);
        assert_eq!(enumerate_torsion(2).unwrap().len(), 16);
        let three = enumerate_torsion(3).unwrap();
        assert_eq!(three.len(), 64);
        let strings: Vec<String> = three.iter().map(|c| c.to_string()).collect();
        let mut sorted = strings.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(strings, sorted);
        assert!(matches!(
            enumerate_torsion(MAX_ENUMERATION_GENUS + 1),
            Err(Error::EnumerationBound { .. })
        ));
    }

    #[test]
    fn compact_string_form() {
        let c = Characteristic2::from_bits(&[0, 1, 0], &[1, 1, 0]).unwrap();
        assert_eq!(c.to_string(), "3:010/110");
        assert_eq!(ch("3:010/110"), c);
        assert!("2:010/110".parse::<Characteristic2>().is_err());
        assert!("01/1".parse::<Characteristic2>().is_err());
        assert!("0x/10".parse::<Characteristic2>().is_err());
    }

    fn arb_char(g: usize) -> impl Strategy<Value = Characteristic2> {
        let n = 1u64 << g;
        (0..n, 0..n).prop_map(move |(t, b)| Characteristic2::from_masks(g, t, b).unwrap())
    }

    proptest! {
        #[test]
        fn double_translation_is_identity(
            (s, a) in (1usize..=6).prop_flat_map(|g| (arb_char(g), arb_char(g))),
            constant in 0u8..2,
        ) {
            let q = QuadraticFormF2::new(s, constant);
            let back = form_translate(&form_translate(&q, &a).unwrap(), &a).unwrap();
            prop_assert_eq!(back, q);
        }

        #[test]
        fn pairing_is_bilinear(
            (a, b, c) in (1usize..=8).prop_flat_map(|g| (arb_char(g), arb_char(g), arb_char(g)))
        ) {
            let lhs = weyl_pairing(&(a + b), &c).unwrap();
            let rhs = weyl_pairing(&a, &c).unwrap() ^ weyl_pairing(&b, &c).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(weyl_pairing(&a, &b).unwrap(), weyl_pairing(&b, &a).unwrap());
        }

        #[test]
        fn string_form_round_trips(c in (1usize..=8).prop_flat_map(arb_char)) {
            prop_assert_eq!(c.to_string().parse::<Characteristic2>().unwrap(), c);
        }
    }
}
