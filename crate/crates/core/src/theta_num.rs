//! Riemann theta functions with half-integer characteristics.
//!
//! ```text
//! θ[λ′; λ″](z, τ) = Σ_{n ∈ Zᵍ} exp(πi (n+λ′)ᵗ τ (n+λ′) + 2πi (n+λ′)ᵗ (z+λ″))
//! ```
//!
//! The lattice sum is truncated to the box `‖n‖∞ ≤ R`, with `R` chosen from
//! a tail bound that only uses the smallest eigenvalue of `Im τ` and the
//! Euclidean norm of `Im z`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::char2::Characteristic2;
use crate::{Error, Result};

/// Requested tolerances below this are raised to it.
pub const EPS_FLOOR: f64 = 1e-13;

/// Tolerance used when none is given.
pub const DEFAULT_EPS: f64 = 1e-12;

const SYMMETRY_TOL: f64 = 1e-12;
const MAX_RADIUS: usize = 10_000;

/// A point of the Siegel upper half space.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodMatrix {
    entries: DMatrix<Complex64>,
    min_imag_eigenvalue: f64,
}

impl PeriodMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        let g = entries.nrows();
        if g == 0 || entries.ncols() != g {
            return Err(Error::InvalidPeriodMatrix(format!(
                "expected a non-empty square matrix, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidPeriodMatrix("non-finite entry".into()));
        }
        for i in 0..g {
            for j in 0..i {
                if (entries[(i, j)] - entries[(j, i)]).norm() > SYMMETRY_TOL {
                    return Err(Error::InvalidPeriodMatrix(format!(
                        "not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        let imag = entries.map(|z| z.im);
        let imag = (&imag + imag.transpose()) * 0.5;
        let min_imag_eigenvalue = SymmetricEigen::new(imag).eigenvalues.min();
        if !(min_imag_eigenvalue > 0.0) {
            return Err(Error::InvalidPeriodMatrix(format!(
                "imaginary part is not positive definite (smallest eigenvalue {min_imag_eigenvalue})"
            )));
        }
        Ok(Self {
            entries,
            min_imag_eigenvalue,
        })
    }

    /// A genus-one period `τ` with `Im τ > 0`.
    pub fn scalar(tau: Complex64) -> Result<Self> {
        Self::new(DMatrix::from_element(1, 1, tau))
    }

    /// Builds a matrix from row-major entries.
    pub fn from_rows(g: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != g * g {
            return Err(Error::DimensionMismatch {
                expected: g * g,
                found: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(g, g, entries))
    }

    pub fn genus(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn min_imag_eigenvalue(&self) -> f64 {
        self.min_imag_eigenvalue
    }
}

/// A characteristic `[λ′; λ″]` with entries in `{0, ½}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RationalCharacteristic(Characteristic2);

impl RationalCharacteristic {
    pub fn genus(&self) -> usize {
        self.0.genus()
    }

    pub fn top_values(&self) -> Vec<f64> {
        self.0.top_bits().iter().map(|&b| 0.5 * b as f64).collect()
    }

    pub fn bottom_values(&self) -> Vec<f64> {
        self.0.bottom_bits().iter().map(|&b| 0.5 * b as f64).collect()
    }

    /// The doubled form.
    pub fn doubled(&self) -> Characteristic2 {
        self.0
    }

    /// `4λ′ᵗλ″ mod 2`.
    pub fn parity(&self) -> u8 {
        self.0.parity()
    }

    /// Builds from half-integer rows, rejecting entries outside `{0, ½}`.
    pub fn from_values(top: &[f64], bottom: &[f64]) -> Result<Self> {
        let halve = |row: &[f64]| -> Result<Vec<u8>> {
            row.iter()
                .map(|&v| {
                    if v == 0.0 {
                        Ok(0)
                    } else if v == 0.5 {
                        Ok(1)
                    } else {
                        Err(Error::InvalidArgument(format!(
                            "characteristic entry {v} is not 0 or 1/2"
                        )))
                    }
                })
                .collect()
        };
        Ok(Self(Characteristic2::from_bits(&halve(top)?, &halve(bottom)?)?))
    }
}

impl From<Characteristic2> for RationalCharacteristic {
    fn from(c: Characteristic2) -> Self {
        Self(c)
    }
}

impl From<RationalCharacteristic> for Characteristic2 {
    fn from(c: RationalCharacteristic) -> Self {
        c.0
    }
}

impl fmt::Display for RationalCharacteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |v: Vec<f64>| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{}/{}", row(self.top_values()), row(self.bottom_values()))
    }
}

impl FromStr for RationalCharacteristic {
    type Err = Error;

    /// Accepts doubled bit rows (`1/0`, `10/01`) or comma-separated halves
    /// (`0.5/0`, `0.5,0/0,0.5`).
    fn from_str(s: &str) -> Result<Self> {
        if s.contains('.') || s.contains(',') {
            let (top, bottom) = s
                .split_once('/')
                .ok_or_else(|| Error::Parse(format!("expected top/bottom, got {s:?}")))?;
            let parse_row = |r: &str| -> Result<Vec<f64>> {
                r.split(',')
                    .map(|v| {
                        v.trim()
                            .parse::<f64>()
                            .map_err(|e| Error::Parse(format!("bad entry {v:?}: {e}")))
                    })
                    .collect()
            };
            Self::from_values(&parse_row(top)?, &parse_row(bottom)?)
        } else {
            Ok(Self(s.parse()?))
        }
    }
}

/// Order in which lattice points of the truncation box are visited.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeOrder {
    Forward,
    Reverse,
}

fn effective_eps(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "eps must lie in (0, 1), got {eps}"
        )));
    }
    Ok(eps.max(EPS_FLOOR))
}

/// Upper bound on `Σ_{‖n‖∞ > R} |term(n)|`.
///
/// Shell `k` holds `(2k+1)ᵍ − (2k−1)ᵍ` points, each with
/// `|n + λ′| ≥ k − ½`, hence with modulus at most
/// `exp(−π λ_min (k−½)² + 2π c (k−½))` once `k − ½ ≥ c / λ_min`.
fn tail_bound(g: usize, lambda_min: f64, im_z_norm: f64, radius: usize) -> f64 {
    let shell = |k: f64| (2.0 * k + 1.0).powi(g as i32) - (2.0 * k - 1.0).powi(g as i32);
    let mut total = 0.0;
    let mut k = radius + 1;
    loop {
        let r = k as f64 - 0.5;
        let log_term = shell(k as f64).ln() - PI * lambda_min * r * r + 2.0 * PI * im_z_norm * r;
        let term = log_term.exp();
        total += term;
        // terms decay faster than geometrically past the first few shells
        if term < total * 1e-17 || log_term < -745.0 {
            break;
        }
        k += 1;
        if k > radius + MAX_RADIUS {
            return f64::INFINITY;
        }
    }
    total
}

/// Smallest box radius whose tail is certified below `eps`.
pub fn truncation_radius(tau: &PeriodMatrix, z: &[Complex64], eps: f64) -> Result<usize> {
    let eps = effective_eps(eps)?;
    if z.len() != tau.genus() {
        return Err(Error::DimensionMismatch {
            expected: tau.genus(),
            found: z.len(),
        });
    }
    let lambda_min = tau.min_imag_eigenvalue();
    let im_z_norm = z.iter().map(|w| w.im * w.im).sum::<f64>().sqrt();
    // monotonicity of the per-shell bound needs k − ½ ≥ c / λ_min
    let start = (im_z_norm / lambda_min - 0.5).ceil().max(0.0) as usize;
    (start..start + MAX_RADIUS)
        .find(|&r| tail_bound(tau.genus(), lambda_min, im_z_norm, r) < eps)
        .ok_or_else(|| {
            Error::InvalidPeriodMatrix(format!(
                "no truncation radius below {} certifies eps = {eps}",
                start + MAX_RADIUS
            ))
        })
}

/// `θ[c](z, τ)` to within `eps` of the full lattice sum.
pub fn theta_eval(
    c: &RationalCharacteristic,
    z: &[Complex64],
    tau: &PeriodMatrix,
    eps: f64,
) -> Result<Complex64> {
    theta_eval_ordered(c, z, tau, eps, LatticeOrder::Forward)
}

/// As [`theta_eval`], visiting lattice points in the given order.
pub fn theta_eval_ordered(
    c: &RationalCharacteristic,
    z: &[Complex64],
    tau: &PeriodMatrix,
    eps: f64,
    order: LatticeOrder,
) -> Result<Complex64> {
    let g = tau.genus();
    if c.genus() != g {
        return Err(Error::DimensionMismatch {
            expected: g,
            found: c.genus(),
        });
    }
    let radius = truncation_radius(tau, z, eps)?;
    Ok(lattice_sum(c, z, tau, radius, order))
}

fn lattice_sum(
    c: &RationalCharacteristic,
    z: &[Complex64],
    tau: &PeriodMatrix,
    radius: usize,
    order: LatticeOrder,
) -> Complex64 {
    let g = tau.genus();
    let lp = c.top_values();
    let shifted_z: Vec<Complex64> = z
        .iter()
        .zip(c.bottom_values())
        .map(|(zi, li)| zi + li)
        .collect();
    let t = tau.entries();
    let r = radius as i64;
    let side = (2 * r + 1) as usize;
    let count = side.pow(g as u32);

    let i_pi = Complex64::new(0.0, PI);
    let mut m = vec![0.0f64; g];
    let mut sum = Complex64::new(0.0, 0.0);
    for idx in 0..count {
        let mut rest = match order {
            LatticeOrder::Forward => idx,
            LatticeOrder::Reverse => count - 1 - idx,
        };
        for mi in m.iter_mut().zip(&lp) {
            let n = (rest % side) as i64 - r;
            rest /= side;
            *mi.0 = n as f64 + mi.1;
        }
        let mut quad = Complex64::new(0.0, 0.0);
        for i in 0..g {
            let mut row = Complex64::new(0.0, 0.0);
            for j in 0..g {
                row += t[(i, j)] * m[j];
            }
            quad += row * m[i];
        }
        let lin: Complex64 = m.iter().zip(&shifted_z).map(|(mi, zi)| zi * *mi).sum();
        sum += (i_pi * (quad + 2.0 * lin)).exp();
    }
    sum
}

/// The even theta constants `(θ₀₀, θ₀₁, θ₁₀)` at `z = 0`, with
/// characteristics `[0;0]`, `[0;½]` and `[½;0]`.
pub fn theta_constants_g1(tau: Complex64, eps: f64) -> Result<(Complex64, Complex64, Complex64)> {
    if !(tau.im > 0.0) {
        return Err(Error::InvalidPeriodMatrix(format!(
            "Im(tau) must be positive, got {}",
            tau.im
        )));
    }
    let period = PeriodMatrix::scalar(tau)?;
    let z = [Complex64::new(0.0, 0.0)];
    let at = |top: u64, bottom: u64| -> Result<Complex64> {
        let c = Characteristic2::from_masks(1, top, bottom)?;
        theta_eval(&c.into(), &z, &period, eps)
    };
    Ok((at(0, 0)?, at(0, 1)?, at(1, 0)?))
}
