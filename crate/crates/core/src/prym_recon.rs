//! The hyperelliptic double cover: from a branch partition `(B₁, B₂)` to the
//! orbit of split quadruples in `J(C₂)`, and back.
//!
//! `C` is branched over `B₁ ∪ B₂` and `η` corresponds to the partition. The
//! curve `C₂` is branched over `B₂` alone and its Jacobian is identified with
//! the Prym variety. Over each `b ∈ B₁` the curve `C₂` has two points
//! `q′, q″`, and with `q_j` a Weierstrass point of `C₂` the orbit is
//!
//! ```text
//! Q = { {cl(q′₁ − q_j) + ρ, cl(q″₁ − q_j) + ρ} ∪ {cl(q′₂ − q_j) + ρ, cl(q″₂ − q_j) + ρ} : ρ ∈ J(C₂)₂ }
//! ```
//!
//! For `g ≥ 3` exactly one quadruple lies on the Abel curve `x ↦ cl(x − q)`;
//! its x-coordinates are `B₁`. For `g = 2` every quadruple gives a candidate
//! `B₁` and the candidates are related by projectivities preserving `B₂`.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::hyperjac::{
    is_prime, CurvePoint, HyperellipticCurve, MumfordDivisor, PrimeField, P1,
};
use crate::{Error, Result};

/// Resampling cap for branch data meeting the rationality conditions.
pub const RESAMPLE_CAP: usize = 1000;

/// Genera supported by [`round_trip`].
pub const SUPPORTED_GENERA: [usize; 3] = [2, 3, 4];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchData {
    #[serde(serialize_with = "ser_u64")]
    p: u64,
    #[serde(serialize_with = "ser_u64s")]
    b1: [u64; 2],
    #[serde(serialize_with = "ser_u64s")]
    b2: Vec<u64>,
    g: usize,
}

fn ser_u64<S: serde::Serializer>(v: &u64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn ser_u64s<S: serde::Serializer>(v: &[u64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(u64::to_string))
}

impl BranchData {
    pub fn new(p: u64, b1: [u64; 2], b2: Vec<u64>) -> Result<Self> {
        PrimeField::new(p)?;
        if b2.len() < 4 || b2.len() % 2 == 1 {
            return Err(Error::InvalidArgument(format!(
                "B2 must have 2g ≥ 4 elements, got {}",
                b2.len()
            )));
        }
        let all: BTreeSet<u64> = b1.iter().chain(&b2).copied().collect();
        if all.len() != b2.len() + 2 || all.iter().any(|&x| x >= p) {
            return Err(Error::InvalidArgument(
                "branch values must be distinct field elements".into(),
            ));
        }
        let g = b2.len() / 2;
        Ok(Self { p, b1, b2, g })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn b1(&self) -> [u64; 2] {
        self.b1
    }

    pub fn b2(&self) -> &[u64] {
        &self.b2
    }

    /// Genus of `C`.
    pub fn g(&self) -> usize {
        self.g
    }

    /// `∏_{b ∈ B₂}(x − b)`, whose squareness makes the points of `C₂` over
    /// `x` rational.
    pub fn fiber_value(&self, x: u64) -> u64 {
        let fd = PrimeField::new(self.p).expect("validated at construction");
        self.b2.iter().fold(1, |acc, &b| fd.mul(acc, fd.sub(x, b)))
    }

    pub fn fibers_are_rational(&self) -> bool {
        let fd = PrimeField::new(self.p).expect("validated at construction");
        self.b1.iter().all(|&x| fd.is_square(self.fiber_value(x)))
    }

    /// The partition as sorted sets on the projective line.
    pub fn partition(&self) -> Partition {
        let mut b1 = [P1::Finite(self.b1[0]), P1::Finite(self.b1[1])];
        b1.sort();
        let mut b2 = self.b2.clone();
        b2.sort_unstable();
        Partition { b1, b2 }
    }
}

/// A branch partition in original coordinates, normalized for comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub b1: [P1; 2],
    #[serde(serialize_with = "ser_u64s")]
    pub b2: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct PrymScenario {
    branch: BranchData,
    c: HyperellipticCurve,
    c2: HyperellipticCurve,
    q1p: CurvePoint,
    q1pp: CurvePoint,
    q2p: CurvePoint,
    q2pp: CurvePoint,
    qj: CurvePoint,
}

impl PrymScenario {
    pub fn branch(&self) -> &BranchData {
        &self.branch
    }

    /// The base curve, genus `g`.
    pub fn c(&self) -> &HyperellipticCurve {
        &self.c
    }

    /// The curve branched over `B₂`, genus `g − 1`.
    pub fn c2(&self) -> &HyperellipticCurve {
        &self.c2
    }

    /// `(q′₁, q″₁, q′₂, q″₂)` in model coordinates of `C₂`.
    pub fn marked_points(&self) -> [CurvePoint; 4] {
        [self.q1p, self.q1pp, self.q2p, self.q2pp]
    }

    /// The Weierstrass point `q_j`; it lies over the last value of `B₂`,
    /// which the model of `C₂` places at infinity.
    pub fn qj(&self) -> CurvePoint {
        self.qj
    }
}

/// Builds `C`, `C₂` and the marked points from branch data.
pub fn forward_build(branch: &BranchData) -> Result<PrymScenario> {
    if !branch.fibers_are_rational() {
        return Err(Error::Precondition(
            "the points of C2 over B1 are not rational; resample".into(),
        ));
    }
    let all: Vec<u64> = branch.b1.iter().chain(&branch.b2).copied().collect();
    let c = HyperellipticCurve::new(branch.p, &all)?;
    let c2 = HyperellipticCurve::new(branch.p, &branch.b2)?;

    let pair_over = |b: u64| -> Result<(CurvePoint, CurvePoint)> {
        let P1::Finite(x) = c2.to_model_x(P1::Finite(b)) else {
            return Err(Error::Degenerate(format!("{b} is the pivot of C2")));
        };
        match c2.points_over(x).as_slice() {
            [a, b] => Ok((*a, *b)),
            _ => Err(Error::Degenerate(format!(
                "fiber of C2 over {b} does not consist of two rational points"
            ))),
        }
    };
    let (q1p, q1pp) = pair_over(branch.b1[0])?;
    let (q2p, q2pp) = pair_over(branch.b1[1])?;
    Ok(PrymScenario {
        branch: branch.clone(),
        c,
        c2,
        q1p,
        q1pp,
        q2p,
        q2pp,
        qj: CurvePoint::Infinity,
    })
}

/// One element of the orbit: two pairs of classes in `J(C₂)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Quadruple {
    /// The translation `ρ` this quadruple was generated with. Reconstruction
    /// never reads it.
    pub rho: MumfordDivisor,
    pub first: [MumfordDivisor; 2],
    pub second: [MumfordDivisor; 2],
}

impl Quadruple {
    pub fn members(&self) -> [&MumfordDivisor; 4] {
        [&self.first[0], &self.first[1], &self.second[0], &self.second[1]]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadrupleOrbit {
    pub quadruples: Vec<Quadruple>,
}

impl QuadrupleOrbit {
    pub fn len(&self) -> usize {
        self.quadruples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quadruples.is_empty()
    }

    /// Index of the quadruple generated with `ρ = 0`.
    pub fn canonical_index(&self) -> Option<usize> {
        self.quadruples.iter().position(|q| q.rho.is_identity())
    }

    pub fn shuffle<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        self.quadruples.shuffle(rng);
    }
}

/// The `2^{2(g−1)}` quadruples, one per `ρ ∈ J(C₂)₂`.
pub fn quadruple_orbit(s: &PrymScenario) -> Result<QuadrupleOrbit> {
    let c2 = &s.c2;
    let base = c2.divisor_of_point(&s.qj)?;
    let class = |pt: &CurvePoint| -> Result<MumfordDivisor> {
        Ok(c2.sub(&c2.divisor_of_point(pt)?, &base))
    };
    let a = class(&s.q1p)?;
    let a2 = class(&s.q1pp)?;
    let b = class(&s.q2p)?;
    let b2 = class(&s.q2pp)?;
    let quadruples = c2
        .two_torsion_classes()
        .iter()
        .map(|t| {
            let rho = c2.two_torsion_from_subset(t)?;
            Ok(Quadruple {
                first: [c2.add(&a, &rho), c2.add(&a2, &rho)],
                second: [c2.add(&b, &rho), c2.add(&b2, &rho)],
                rho,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QuadrupleOrbit { quadruples })
}

/// Outcome of the `g ≥ 3` reconstruction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reconstruction {
    pub partition: Partition,
    /// Quadruples lying entirely on the Abel image.
    pub uniqueness_count: usize,
    /// Abel-image points found in all other quadruples together.
    pub stray_image_points: usize,
    pub quadruple_index: usize,
}

fn branch_set(c2: &HyperellipticCurve) -> Vec<u64> {
    let mut b2 = c2.branch_xs().to_vec();
    b2.sort_unstable();
    b2
}

/// Recovers `(B₁, B₂)` from `C₂` and the orbit, for `g ≥ 3`.
pub fn reconstruct(c2: &HyperellipticCurve, q: &QuadrupleOrbit) -> Result<Reconstruction> {
    if c2.genus() < 2 {
        return Err(Error::Precondition(
            "the Abel-image test needs genus(C2) ≥ 2; use reconstruct_g2".into(),
        ));
    }
    let counts: Vec<usize> = q
        .quadruples
        .iter()
        .map(|quad| quad.members().iter().filter(|d| c2.is_on_abel_image(d)).count())
        .collect();
    let full: Vec<usize> = (0..counts.len()).filter(|&i| counts[i] == 4).collect();
    let stray = counts.iter().filter(|&&k| k < 4).sum();
    let [index] = full.as_slice() else {
        return Err(Error::DataCorruption(format!(
            "{} quadruples lie on the Abel image, expected exactly one",
            full.len()
        )));
    };
    let xs: BTreeSet<P1> = q.quadruples[*index]
        .members()
        .iter()
        .map(|d| {
            c2.lift_to_point(d)
                .map(|pt| c2.to_original_x(pt.x()))
                .ok_or_else(|| Error::DataCorruption("class on the image failed to lift".into()))
        })
        .collect::<Result<_>>()?;
    let b1: Vec<P1> = xs.into_iter().collect();
    let [x1, x2] = b1.as_slice() else {
        return Err(Error::DataCorruption(format!(
            "the distinguished quadruple maps to {} x-values, expected 2",
            b1.len()
        )));
    };
    Ok(Reconstruction {
        partition: Partition {
            b1: [*x1, *x2],
            b2: branch_set(c2),
        },
        uniqueness_count: full.len(),
        stray_image_points: stray,
        quadruple_index: *index,
    })
}

/// A projectivity `x ↦ (ax + b)/(cx + d)` over `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Mobius {
    #[serde(serialize_with = "ser_u64s")]
    pub matrix: [u64; 4],
}

impl Mobius {
    pub fn apply(&self, fd: &PrimeField, x: P1) -> P1 {
        let [a, b, c, d] = self.matrix;
        let (num, den) = match x {
            P1::Infinity => (a, c),
            P1::Finite(v) => (fd.add(fd.mul(a, v), b), fd.add(fd.mul(c, v), d)),
        };
        if den == 0 {
            P1::Infinity
        } else {
            P1::Finite(fd.mul(num, fd.inv(den)))
        }
    }

    /// The map sending `s₀ ↦ 0`, `s₁ ↦ ∞`, `s₂ ↦ 1` (finite, distinct).
    fn normalizing(fd: &PrimeField, s: [u64; 3]) -> Self {
        let d21 = fd.sub(s[2], s[1]);
        let d20 = fd.sub(s[2], s[0]);
        Self {
            matrix: [
                d21,
                fd.neg(fd.mul(s[0], d21)),
                d20,
                fd.neg(fd.mul(s[1], d20)),
            ],
        }
    }

    /// The unique map sending the source triple to the target triple.
    pub fn from_triples(fd: &PrimeField, source: [u64; 3], target: [u64; 3]) -> Self {
        let a = Self::normalizing(fd, source).matrix;
        let [p, q, r, s] = Self::normalizing(fd, target).matrix;
        let inv = [s, fd.neg(q), fd.neg(r), p];
        let m = [
            fd.add(fd.mul(inv[0], a[0]), fd.mul(inv[1], a[2])),
            fd.add(fd.mul(inv[0], a[1]), fd.mul(inv[1], a[3])),
            fd.add(fd.mul(inv[2], a[0]), fd.mul(inv[3], a[2])),
            fd.add(fd.mul(inv[2], a[1]), fd.mul(inv[3], a[3])),
        ];
        let lead = m.iter().copied().find(|&e| e != 0).expect("invertible matrix");
        let k = fd.inv(lead);
        Self {
            matrix: m.map(|e| fd.mul(e, k)),
        }
    }
}

/// Witness that two candidate `B₁` sets are related by a projectivity that
/// preserves `B₂`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MobiusCertificate {
    pub quadruple_index: usize,
    pub image: [P1; 2],
    pub psi: Mobius,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct G2Reconstruction {
    pub partition: Partition,
    pub quadruple_index: usize,
    /// One certificate for every other quadruple of the orbit.
    pub certificates: Vec<MobiusCertificate>,
}

fn pair_image(c2: &HyperellipticCurve, pair: &[MumfordDivisor; 2]) -> Result<P1> {
    let stable = {
        let mut orig = pair.to_vec();
        let mut negated: Vec<_> = pair.iter().map(|d| c2.neg(d)).collect();
        orig.sort();
        negated.sort();
        orig == negated
    };
    if !stable {
        return Err(Error::DataCorruption("pair is not stable under negation".into()));
    }
    let xs: BTreeSet<P1> = pair
        .iter()
        .map(|d| {
            c2.lift_to_point(d)
                .map(|pt| c2.to_original_x(pt.x()))
                .ok_or_else(|| Error::DataCorruption("class does not lift to the curve".into()))
        })
        .collect::<Result<_>>()?;
    match xs.into_iter().collect::<Vec<_>>().as_slice() {
        [x] => Ok(*x),
        _ => Err(Error::DataCorruption("pair maps to more than one x-value".into())),
    }
}

fn quadruple_image(c2: &HyperellipticCurve, quad: &Quadruple) -> Result<[P1; 2]> {
    let mut img = [pair_image(c2, &quad.first)?, pair_image(c2, &quad.second)?];
    img.sort();
    Ok(img)
}

/// Searches maps fixed by `B₂[0..3] ↦` an ordered triple of `B₂`.
fn find_certificate(fd: &PrimeField, b2: &[u64], from: [P1; 2], to: [P1; 2]) -> Option<Mobius> {
    let source = [b2[0], b2[1], b2[2]];
    let b2_set: BTreeSet<P1> = b2.iter().map(|&x| P1::Finite(x)).collect();
    let to_set: BTreeSet<P1> = to.into_iter().collect();
    let n = b2.len();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            for k in (0..n).filter(|&k| k != i && k != j) {
                let psi = Mobius::from_triples(fd, source, [b2[i], b2[j], b2[k]]);
                let moved: BTreeSet<P1> = b2_set.iter().map(|&x| psi.apply(fd, x)).collect();
                let moved_b1: BTreeSet<P1> = from.iter().map(|&x| psi.apply(fd, x)).collect();
                if moved == b2_set && moved_b1 == to_set {
                    return Some(psi);
                }
            }
        }
    }
    None
}

/// `g = 2`: `B₁` from the chosen quadruple, with a projectivity certificate
/// for each other quadruple.
pub fn reconstruct_g2(
    c2: &HyperellipticCurve,
    q: &QuadrupleOrbit,
    pick: usize,
) -> Result<G2Reconstruction> {
    if c2.genus() != 1 {
        return Err(Error::Precondition(format!(
            "expected an elliptic C2, got genus {}",
            c2.genus()
        )));
    }
    let chosen = q
        .quadruples
        .get(pick)
        .ok_or_else(|| Error::InvalidArgument(format!("no quadruple at index {pick}")))?;
    let b1 = quadruple_image(c2, chosen)?;
    let b2 = branch_set(c2);
    let fd = c2.field();
    let mut certificates = Vec::with_capacity(q.len().saturating_sub(1));
    for (idx, quad) in q.quadruples.iter().enumerate() {
        let image = quadruple_image(c2, quad)?;
        if idx == pick {
            continue;
        }
        let psi = find_certificate(fd, c2.branch_xs(), b1, image).ok_or_else(|| {
            Error::DataCorruption(format!("no projectivity certificate for quadruple {idx}"))
        })?;
        certificates.push(MobiusCertificate {
            quadruple_index: idx,
            image,
            psi,
        });
    }
    Ok(G2Reconstruction {
        partition: Partition { b1, b2 },
        quadruple_index: pick,
        certificates,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RoundTripConfig {
    pub genus: usize,
    pub prime_bound: u64,
    pub seed: u64,
    pub runs: usize,
    /// Include wall-clock timings (makes the report non-reproducible).
    pub timings: bool,
}

impl Default for RoundTripConfig {
    fn default() -> Self {
        Self {
            genus: 3,
            prime_bound: 10_000,
            seed: 0,
            runs: 1,
            timings: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub seed: u64,
    pub attempts: usize,
    pub branch: BranchData,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uniqueness_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stray_image_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificates: Option<usize>,
    pub recovered: Partition,
    #[serde(rename = "match")]
    pub matched: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportSummary {
    pub runs: usize,
    pub matches: usize,
    pub all_unique: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReconstructionReport {
    pub genus: usize,
    pub prime_bound: u64,
    pub runs: Vec<RunRecord>,
    pub summary: ReportSummary,
}

fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| n > 2 && is_prime(n)).collect()
}

/// Draws branch data for a genus-`g` cover whose `C₂` fibers over `B₁` are
/// rational. Returns the data and the number of attempts used.
pub fn sample_branch_data<R: Rng + ?Sized>(
    genus: usize,
    prime_bound: u64,
    rng: &mut R,
) -> Result<(BranchData, usize)> {
    let n = 2 * genus + 2;
    // enough room for distinct values and for the fibers to be rational
    let lo = (prime_bound / 2).max(4 * n as u64);
    let primes = primes_in(lo, prime_bound);
    if primes.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "no prime in [{lo}, {prime_bound}] for genus {genus}"
        )));
    }
    for attempt in 1..=RESAMPLE_CAP {
        let p = *primes.choose(rng).expect("non-empty");
        let mut seen = BTreeSet::new();
        let mut values = Vec::with_capacity(n);
        while values.len() < n {
            let x = rng.gen_range(0..p);
            if seen.insert(x) {
                values.push(x);
            }
        }
        let branch = BranchData::new(p, [values[0], values[1]], values[2..].to_vec())?;
        if branch.fibers_are_rational() {
            return Ok((branch, attempt));
        }
    }
    Err(Error::ResampleCapExceeded {
        attempts: RESAMPLE_CAP,
    })
}

fn single_run(config: &RoundTripConfig, seed: u64) -> Result<RunRecord> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (branch, attempts) = sample_branch_data(config.genus, config.prime_bound, &mut rng)?;
    let scenario = forward_build(&branch)?;
    let mut orbit = quadruple_orbit(&scenario)?;
    orbit.shuffle(&mut rng);

    let (recovered, uniqueness, stray, certificates) = if config.genus == 2 {
        let pick = orbit
            .canonical_index()
            .ok_or_else(|| Error::DataCorruption("orbit has no ρ = 0 quadruple".into()))?;
        let rec = reconstruct_g2(scenario.c2(), &orbit, pick)?;
        (rec.partition, None, None, Some(rec.certificates.len()))
    } else {
        let rec = reconstruct(scenario.c2(), &orbit)?;
        (
            rec.partition,
            Some(rec.uniqueness_count),
            Some(rec.stray_image_points),
            None,
        )
    };
    let matched = recovered == branch.partition();
    Ok(RunRecord {
        seed,
        attempts,
        branch,
        uniqueness_count: uniqueness,
        stray_image_points: stray,
        certificates,
        recovered,
        matched,
        elapsed_ms: config
            .timings
            .then(|| start.elapsed().as_secs_f64() * 1e3),
    })
}

/// Samples branch data, builds the orbit, reconstructs and compares, once per
/// run with seeds `seed, seed + 1, …`.
pub fn round_trip(config: &RoundTripConfig) -> Result<ReconstructionReport> {
    if !SUPPORTED_GENERA.contains(&config.genus) {
        return Err(Error::InvalidArgument(format!(
            "genus must be one of {SUPPORTED_GENERA:?}, got {}",
            config.genus
        )));
    }
    let runs = (0..config.runs as u64)
        .map(|i| single_run(config, config.seed.wrapping_add(i)))
        .collect::<Result<Vec<_>>>()?;
    let summary = ReportSummary {
        runs: runs.len(),
        matches: runs.iter().filter(|r| r.matched).count(),
        all_unique: runs
            .iter()
            .all(|r| r.uniqueness_count.map_or(true, |u| u == 1)),
    };
    Ok(ReconstructionReport {
        genus: config.genus,
        prime_bound: config.prime_bound,
        runs,
        summary,
    })
}
