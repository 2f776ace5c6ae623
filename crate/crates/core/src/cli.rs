//! Command-line front end. Every command prints one JSON document on
//! standard output.
//!
//! Exit codes: 0 on success, 1 for an error raised by the library (the
//! document then has an `"error"` field), 2 for a usage error.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::covering::CoverContext;
use crate::genus1::{curve_from_k, k_of_tau};
use crate::prym_recon::{round_trip, RoundTripConfig};
use crate::selftest;
use crate::theta_num::{
    theta_eval, truncation_radius, PeriodMatrix, RationalCharacteristic, DEFAULT_EPS,
};
use crate::{Error, Result};

/// Environment variable overriding the default numerical eps.
pub const EPS_ENV: &str = "PRYM_LAB_EPS";

#[derive(Debug, Parser)]
#[command(name = "prym-lab", version, about = "Extended Prym data toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Split the zeros of q0 on B2 into P2-cosets.
    ClassifyOrbits {
        #[arg(long)]
        genus: usize,
    },
    /// Evaluate a theta function with half-integer characteristic.
    ThetaEval {
        /// Characteristic as bit rows (`10/01`) or halves (`0.5,0/0,0.5`).
        #[arg(long = "char")]
        characteristic: String,
        /// Period matrix entries, row-major, `re,im;re,im;…`.
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        /// Argument vector, `re,im;…`; zero when omitted.
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Evaluate k(τ).
    KOfTau {
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
    },
    /// Legendre curve with marked point of order two for a value of k.
    CurveFromK {
        #[arg(long, allow_hyphen_values = true)]
        k: String,
    },
    /// Forward-build and reconstruct hyperelliptic double covers.
    RoundtripHyperelliptic {
        #[arg(long, default_value_t = 3)]
        genus: usize,
        #[arg(long, default_value_t = 10_000)]
        prime_bound: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        runs: usize,
        /// Add wall-clock times per run.
        #[arg(long)]
        timings: bool,
    },
    /// Run the invariant suite.
    Selftest,
}

fn parse_complex(s: &str) -> Result<Complex64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| {
        t.parse::<f64>()
            .map_err(|e| Error::Parse(format!("bad number {t:?}: {e}")))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(Error::Parse(format!("expected re,im, got {s:?}"))),
    }
}

fn parse_complex_list(s: &str) -> Result<Vec<Complex64>> {
    s.split(';').map(parse_complex).collect()
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn eps_from_env(env: Option<&str>) -> Result<f64> {
    match env {
        None => Ok(DEFAULT_EPS),
        Some(v) => v
            .trim()
            .parse::<f64>()
            .map_err(|e| Error::Parse(format!("{EPS_ENV}={v:?}: {e}"))),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

enum Outcome {
    Success(Value),
    /// Completed but reporting a failed check; exits 1.
    Failure(Value),
}

fn execute(command: Command, env_eps: Option<&str>) -> Result<Outcome> {
    let eps = eps_from_env(env_eps)?;
    let value = match command {
        Command::ClassifyOrbits { genus } => {
            let ctx = CoverContext::new(genus)?;
            let orbits = ctx.classify_vanishing_orbits()?;
            json!({
                "genus": genus,
                "cover_genus": ctx.g_tilde(),
                "solution_count": orbits.solution_count,
                "distinguished_points": to_value(&ctx.distinguished_points()),
                "cosets": {
                    "P2": to_value(&orbits.wirtinger),
                    "lambda1+P2": to_value(&orbits.first),
                    "lambda2+P2": to_value(&orbits.second),
                },
            })
        }
        Command::ThetaEval {
            characteristic,
            tau,
            z,
            eps: flag_eps,
        } => {
            let eps = flag_eps.unwrap_or(eps);
            let c: RationalCharacteristic = characteristic.parse()?;
            let entries = parse_complex_list(&tau)?;
            let g = (entries.len() as f64).sqrt().round() as usize;
            if g * g != entries.len() {
                return Err(Error::InvalidPeriodMatrix(format!(
                    "{} entries do not form a square matrix",
                    entries.len()
                )));
            }
            let tau = PeriodMatrix::from_rows(g, &entries)?;
            let z = match z {
                Some(s) => parse_complex_list(&s)?,
                None => vec![Complex64::new(0.0, 0.0); g],
            };
            let value = theta_eval(&c, &z, &tau, eps)?;
            json!({
                "char": c.to_string(),
                "value": pair(value),
                "radius": truncation_radius(&tau, &z, eps)?,
                "eps": eps,
            })
        }
        Command::KOfTau { tau } => {
            let tau = parse_complex(&tau)?;
            json!({ "tau": pair(tau), "k": pair(k_of_tau(tau, eps)?) })
        }
        Command::CurveFromK { k } => {
            let k = parse_complex(&k)?;
            let curve = curve_from_k(k)?;
            let point = |(x, y): (Complex64, Complex64)| [pair(x), pair(y)];
            json!({
                "k": pair(k),
                "lambda": pair(curve.lambda()),
                "curve": "y^2 = x(x-1)(x-lambda)",
                "cubic_coefficients": curve.cubic_coefficients().map(pair),
                "p1": point(curve.p1()),
                "p2": point(curve.p2()),
                "mu": "cl(p1 - p2)",
            })
        }
        Command::RoundtripHyperelliptic {
            genus,
            prime_bound,
            seed,
            runs,
            timings,
        } => to_value(&round_trip(&RoundTripConfig {
            genus,
            prime_bound,
            seed,
            runs,
            timings,
        })?),
        Command::Selftest => {
            let report = selftest::run(eps);
            let value = to_value(&report);
            if !report.passed {
                let failed: Vec<&str> = report
                    .checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(|c| c.name)
                    .collect();
                return Ok(Outcome::Failure(json!({
                    "error": {
                        "kind": "selftest_failed",
                        "message": format!("failed checks: {}", failed.join(", ")),
                    },
                    "report": value,
                })));
            }
            value
        }
    };
    Ok(Outcome::Success(value))
}

fn emit(out: &mut impl Write, value: &Value) {
    let text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    // a closed pipe is not worth a panic
    let _ = writeln!(out, "{text}");
}

fn error_value(kind: &str, message: &str) -> Value {
    json!({ "error": { "kind": kind, "message": message } })
}

/// Runs one command with an explicit value for the eps environment variable.
pub fn dispatch_with_env<I, T>(
    argv: I,
    env_eps: Option<&str>,
    out: &mut impl Write,
    err: &mut impl Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let _ = write!(err, "{}", e.render());
            let first_line = e.to_string().lines().next().unwrap_or_default().to_string();
            emit(out, &error_value("usage", &first_line));
            return 2;
        }
    };
    match execute(cli.command, env_eps) {
        Ok(Outcome::Success(v)) => {
            emit(out, &v);
            0
        }
        Ok(Outcome::Failure(v)) => {
            emit(out, &v);
            1
        }
        Err(e) => {
            emit(out, &error_value(e.kind(), &e.to_string()));
            1
        }
    }
}

/// Runs one command, reading the eps override from the environment.
pub fn dispatch<I, T>(argv: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env = std::env::var(EPS_ENV).ok();
    dispatch_with_env(argv, env.as_deref(), out, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str], env: Option<&str>) -> (i32, Value) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("prym-lab").chain(args.iter().copied());
        let code = dispatch_with_env(argv, env, &mut out, &mut err);
        let v = serde_json::from_slice(&out).unwrap_or(Value::Null);
        (code, v)
    }

    #[test]
    fn parses_complex_values() {
        assert_eq!(parse_complex("0,1").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(parse_complex("-2.5").unwrap(), Complex64::new(-2.5, 0.0));
        assert!(parse_complex("1,2,3").is_err());
        assert_eq!(parse_complex_list("1,0;0,1").unwrap().len(), 2);
    }

    #[test]
    fn k_of_tau_at_i() {
        let (code, v) = run(&["k-of-tau", "--tau", "0,1"], None);
        assert_eq!(code, 0);
        let k = v["k"].as_array().unwrap();
        assert!((k[0].as_f64().unwrap() + 2.0).abs() < 1e-9);
        assert!(k[1].as_f64().unwrap().abs() < 1e-9);
    }

    #[test]
    fn curve_from_k_output() {
        let (code, v) = run(&["curve-from-k", "--k", "2.5,0"], None);
        assert_eq!(code, 0);
        assert!((v["lambda"][0].as_f64().unwrap() - 2.0).abs() < 1e-12);
        let (code, v) = run(&["curve-from-k", "--k", "2,0"], None);
        assert_eq!(code, 1);
        assert_eq!(v["error"]["kind"], "degenerate");
    }

    #[test]
    fn theta_eval_genus_two() {
        let (code, v) = run(
            &["theta-eval", "--char", "10/01", "--tau", "0,1;0,0.2;0,0.2;0,1.5"],
            None,
        );
        assert_eq!(code, 0);
        assert!(v["value"].is_array());
        let (code, v) = run(&["theta-eval", "--char", "1/1", "--tau", "0,1;0,0"], None);
        assert_eq!(code, 1);
        assert_eq!(v["error"]["kind"], "invalid_period_matrix");
    }

    #[test]
    fn eps_override() {
        let (code, v) = run(&["k-of-tau", "--tau", "0,1"], Some("nonsense"));
        assert_eq!(code, 1);
        assert_eq!(v["error"]["kind"], "parse");
        let (code, v) = run(&["k-of-tau", "--tau", "0,1"], Some("2.0"));
        assert_eq!(code, 1);
        assert_eq!(v["error"]["kind"], "invalid_argument");
        let (code, _) = run(&["k-of-tau", "--tau", "0,1"], Some("1e-6"));
        assert_eq!(code, 0);
    }

    #[test]
    fn usage_errors_exit_2() {
        let (code, v) = run(&["frobnicate"], None);
        assert_eq!(code, 2);
        assert_eq!(v["error"]["kind"], "usage");
        let (code, _) = run(&["classify-orbits"], None);
        assert_eq!(code, 2);
    }

    #[test]
    fn classify_orbits_bounds() {
        let (code, v) = run(&["classify-orbits", "--genus", "1"], None);
        assert_eq!(code, 1);
        assert!(v["error"]["kind"].is_string());
        let (code, v) = run(&["classify-orbits", "--genus", "5"], None);
        assert_eq!(code, 1);
        assert_eq!(v["error"]["kind"], "enumeration_bound");
    }
}
