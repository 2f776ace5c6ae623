//! Computational core of extended Prym data for unramified double covers.
//!
//! The crate is organised bottom-up:
//!
//! * [`char2`]: theta characteristics as 2-torsion points, the Weyl pairing
//!   and quadratic forms over F₂.
//! * [`covering`]: maps induced on characteristics by a double cover, the
//!   subgroups `B₂ ⊃ P₂` and the three vanishing orbits of theta divisors.
//! * [`theta_num`]: Riemann theta functions with half-integer
//!   characteristics and certified truncation.
//! * [`genus1`]: the invariant `k(τ)`, its explicit inverse to a Legendre
//!   curve, and an AGM-based period ratio for round trips.
//! * [`hyperjac`]: hyperelliptic Jacobians over prime fields (Mumford form,
//!   Cantor's algorithm, 2-torsion as branch-point subsets).
//! * [`prym_recon`]: forward construction of the quadruple orbit for a
//!   hyperelliptic double cover and reconstruction of the branch partition.
//! * [`cli`]: the JSON command-line front end.

pub mod char2;
pub mod cli;
pub mod covering;
mod error;
pub mod genus1;
pub mod hyperjac;
pub mod prym_recon;
pub mod selftest;
pub mod theta_num;

pub use error::{Error, Result};
