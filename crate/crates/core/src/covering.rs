//! Torsion-level geometry of an unramified double cover `π : C̃ → C`.
//!
//! With `g = g(C)` and `g̃ = 2g − 1`, characteristics of `J(C̃)` are split as
//! `[α₀ α α′; β₀ β β′]` with `α, α′, β, β′` of length `g − 1`. The induced
//! maps on doubled characteristics are
//!
//! * pullback: `[α₀ α; β₀ β] ↦ [α₀ α α; 0 β β]`,
//! * norm: `[α₀ α α′; β₀ β β′] ↦ [0 α+α′; β₀ β+β′]`,
//! * Prym embedding: `[α; β] ↦ [0 α α; 0 β β]`.
//!
//! `B₂` is the 2-torsion of the abelian subvariety `π*J(C)`. It contains the
//! pullback of `J(C)₂` with index two (the other coset is `λ₁ + π*J(C)₂`,
//! the pullback of a point `x` with `2x = η`), so `|B₂| = 4^g`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::char2::{
    check_genus, enumerate_torsion, Characteristic2, QuadraticFormF2,
};
use crate::{Error, Result};

/// Largest genus of `C` for which the exhaustive checks run.
pub const MAX_COVER_ENUMERATION_GENUS: usize = 4;

/// Largest genus of `C` for which a context materializes its subgroups.
pub const MAX_COVER_GENUS: usize = 8;

#[derive(Clone, Debug)]
pub struct CoverContext {
    g: usize,
    b2: BTreeSet<Characteristic2>,
    p2: BTreeSet<Characteristic2>,
}

#[inline]
fn low_mask(bits: usize) -> u64 {
    if bits == 0 {
        0
    } else {
        u64::MAX >> (64 - bits)
    }
}

/// Splits a genus-`g` row into `(x₀, x)`.
#[inline]
fn split_base(row: u64, g: usize) -> (u64, u64) {
    (row >> (g - 1), row & low_mask(g - 1))
}

/// Splits a genus-`2g − 1` row into `(x₀, x, x′)`.
#[inline]
fn split_cover(row: u64, g: usize) -> (u64, u64, u64) {
    let h = g - 1;
    (row >> (2 * h), (row >> h) & low_mask(h), row & low_mask(h))
}

#[inline]
fn join_cover(x0: u64, x: u64, xp: u64, g: usize) -> u64 {
    let h = g - 1;
    (x0 << (2 * h)) | (x << h) | xp
}

impl CoverContext {
    pub fn new(g: usize) -> Result<Self> {
        if g < 2 {
            return Err(Error::InvalidArgument(format!(
                "genus of the base curve must be at least 2, got {g}"
            )));
        }
        if g > MAX_COVER_GENUS {
            return Err(Error::EnumerationBound {
                genus: g,
                bound: MAX_COVER_GENUS,
            });
        }
        let mut ctx = Self {
            g,
            b2: BTreeSet::new(),
            p2: BTreeSet::new(),
        };
        let base = enumerate_torsion(g)?;
        let lambda1 = ctx.distinguished_points().lambda1;
        let pulled: Vec<_> = base
            .iter()
            .map(|c| ctx.pullback_unchecked(c))
            .collect();
        ctx.b2 = pulled
            .iter()
            .flat_map(|c| [*c, *c + lambda1])
            .collect();
        ctx.p2 = enumerate_torsion(g - 1)?
            .iter()
            .map(|c| ctx.prym_embed_unchecked(c))
            .collect();
        Ok(ctx)
    }

    /// Genus of `C`.
    pub fn g(&self) -> usize {
        self.g
    }

    /// Genus of `C̃`.
    pub fn g_tilde(&self) -> usize {
        2 * self.g - 1
    }

    pub fn b2(&self) -> &BTreeSet<Characteristic2> {
        &self.b2
    }

    pub fn p2(&self) -> &BTreeSet<Characteristic2> {
        &self.p2
    }

    /// `η = ½a₀`, the point of `J(C)₂` defining the cover.
    pub fn eta(&self) -> Characteristic2 {
        Characteristic2::bottom_unit(self.g, 0)
    }

    /// Shift of `Θ₀`, the divisor of `θ[0 0 0; ½ 0 0]`.
    pub fn theta0_shift(&self) -> Characteristic2 {
        Characteristic2::bottom_unit(self.g_tilde(), 0)
    }

    /// The form `q₀ = q_{Θ₀}`, i.e. `4αᵗβ + 2α₀ (mod 2)`.
    pub fn q0(&self) -> QuadraticFormF2 {
        QuadraticFormF2::with_shift(self.theta0_shift())
    }

    fn pullback_unchecked(&self, c: &Characteristic2) -> Characteristic2 {
        let g = self.g;
        let (a0, a) = split_base(c.top(), g);
        let (_, b) = split_base(c.bottom(), g);
        Characteristic2::from_masks_unchecked(
            self.g_tilde(),
            join_cover(a0, a, a, g),
            join_cover(0, b, b, g),
        )
    }

    fn prym_embed_unchecked(&self, c: &Characteristic2) -> Characteristic2 {
        let g = self.g;
        Characteristic2::from_masks_unchecked(
            self.g_tilde(),
            join_cover(0, c.top(), c.top(), g),
            join_cover(0, c.bottom(), c.bottom(), g),
        )
    }

    fn norm_unchecked(&self, c: &Characteristic2) -> Characteristic2 {
        let g = self.g;
        let (_, a, ap) = split_cover(c.top(), g);
        let (b0, b, bp) = split_cover(c.bottom(), g);
        Characteristic2::from_masks_unchecked(g, a ^ ap, (b0 << (g - 1)) | (b ^ bp))
    }

    /// `(π*)_*` on characteristics of `J(C)₂`.
    pub fn pullback_char(&self, c: &Characteristic2) -> Result<Characteristic2> {
        check_genus(self.g, c.genus())?;
        Ok(self.pullback_unchecked(c))
    }

    /// `Nm_*` on characteristics of `J(C̃)₂`.
    pub fn norm_char(&self, c: &Characteristic2) -> Result<Characteristic2> {
        check_genus(self.g_tilde(), c.genus())?;
        Ok(self.norm_unchecked(c))
    }

    /// `j_*` from characteristics of `P₂` (genus `g − 1`).
    pub fn prym_embed_char(&self, c: &Characteristic2) -> Result<Characteristic2> {
        check_genus(self.g - 1, c.genus())?;
        Ok(self.prym_embed_unchecked(c))
    }

    /// `μ = ½b̃₀`, `λ₁ = ½ã₀` and `λ₂ = ½ã₀ + ½b̃₀`.
    pub fn distinguished_points(&self) -> DistinguishedPoints {
        let gt = self.g_tilde();
        let mu = Characteristic2::top_unit(gt, 0);
        let lambda1 = Characteristic2::bottom_unit(gt, 0);
        DistinguishedPoints {
            mu,
            lambda1,
            lambda2: mu + lambda1,
        }
    }

    fn check_enumeration_bound(&self) -> Result<()> {
        if self.g > MAX_COVER_ENUMERATION_GENUS {
            Err(Error::EnumerationBound {
                genus: self.g,
                bound: MAX_COVER_ENUMERATION_GENUS,
            })
        } else {
            Ok(())
        }
    }

    fn coset(&self, rep: &Characteristic2) -> BTreeSet<Characteristic2> {
        self.p2.iter().map(|r| *r + *rep).collect()
    }

    /// Enumerates `{α ∈ B₂ : q₀(α) = 0}` over all of `J(C̃)₂` and splits it
    /// into `P₂`-cosets, labelled by whether they contain `0`, `λ₁` or `λ₂`.
    pub fn classify_vanishing_orbits(&self) -> Result<VanishingOrbits> {
        self.check_enumeration_bound()?;
        let q0 = self.q0();
        let solutions: BTreeSet<_> = enumerate_torsion(self.g_tilde())?
            .into_iter()
            .filter(|c| self.b2.contains(c) && q0.eval_unchecked(c) == 0)
            .collect();

        // partition into cosets keyed by their smallest element
        let mut cosets: Vec<BTreeSet<Characteristic2>> = Vec::new();
        let mut seen = BTreeSet::new();
        for c in &solutions {
            if seen.contains(c) {
                continue;
            }
            let coset = self.coset(c);
            if !coset.is_subset(&solutions) {
                return Err(Error::DataCorruption(format!(
                    "zero set of q0 is not a union of P2-cosets (at {c})"
                )));
            }
            seen.extend(coset.iter().copied());
            cosets.push(coset);
        }

        let pts = self.distinguished_points();
        let mut labelled: [Option<Vec<Characteristic2>>; 3] = [None, None, None];
        for coset in cosets {
            let slot = if coset.contains(&Characteristic2::zero(self.g_tilde())) {
                0
            } else if coset.contains(&pts.lambda1) {
                1
            } else if coset.contains(&pts.lambda2) {
                2
            } else {
                return Err(Error::DataCorruption(format!(
                    "unexpected P2-coset in the zero set of q0: {:?}",
                    coset.iter().next()
                )));
            };
            labelled[slot] = Some(coset.into_iter().collect());
        }
        let [o0, o1, o2] = labelled;
        match (o0, o1, o2) {
            (Some(wirtinger), Some(first), Some(second)) => Ok(VanishingOrbits {
                genus: self.g,
                solution_count: solutions.len(),
                wirtinger,
                first,
                second,
            }),
            _ => Err(Error::DataCorruption(
                "zero set of q0 does not contain all three expected cosets".into(),
            )),
        }
    }

    /// Computes `{c ∈ B₂ : Nm_*(c) = 0}` and compares it with
    /// `P₂ ∪ (μ + P₂)`.
    pub fn kernel_norm_structure(&self) -> Result<KernelNormRecord> {
        self.check_enumeration_bound()?;
        let zero = Characteristic2::zero(self.g);
        let kernel: BTreeSet<_> = self
            .b2
            .iter()
            .filter(|c| self.norm_unchecked(c) == zero)
            .copied()
            .collect();
        let mu_coset = self.coset(&self.distinguished_points().mu);
        let disjoint = self.p2.is_disjoint(&mu_coset);
        let expected: BTreeSet<_> = self.p2.union(&mu_coset).copied().collect();
        Ok(KernelNormRecord {
            genus: self.g,
            kernel_size: kernel.len(),
            p2_size: self.p2.len(),
            mu_coset_size: mu_coset.len(),
            cosets_disjoint: disjoint,
            matches: kernel == expected,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DistinguishedPoints {
    pub mu: Characteristic2,
    pub lambda1: Characteristic2,
    pub lambda2: Characteristic2,
}

/// The three `P₂`-cosets making up the zeros of `q₀` on `B₂`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingOrbits {
    pub genus: usize,
    pub solution_count: usize,
    /// `P₂` itself: the orbit of `Θ₀`.
    pub wirtinger: Vec<Characteristic2>,
    /// `λ₁ + P₂`.
    pub first: Vec<Characteristic2>,
    /// `λ₂ + P₂`.
    pub second: Vec<Characteristic2>,
}

impl VanishingOrbits {
    pub fn orbits(&self) -> [&[Characteristic2]; 3] {
        [&self.wirtinger, &self.first, &self.second]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KernelNormRecord {
    pub genus: usize,
    pub kernel_size: usize,
    pub p2_size: usize,
    pub mu_coset_size: usize,
    pub cosets_disjoint: bool,
    pub matches: bool,
}
