use thiserror::Error;

use crate::exactmath::{MathError, Nat};

/// A hypothesis an operation requires of its arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    /// Both `s > 1` and `t > 1`.
    Thick,
    /// `s > t`.
    SGreaterThanT,
    /// `s + 1` is prime.
    SPlusOnePrime,
    /// The modulus or automorphism order is prime.
    PrimeOrder(Nat),
    /// `1 <= t' < t` and `s t' <= t` for a proper subquadrangle of order `(s, t')`.
    ProperSubquadrangle { s: Nat, t_sub: Nat, t: Nat },
    /// Set sizes in the Payne bound are positive and the relevant side is thick.
    PayneArguments,
    /// Orbit census sums match the point and line counts.
    CensusSums,
}

impl std::fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Hypothesis::Thick => f.write_str("order must be thick (s > 1 and t > 1)"),
            Hypothesis::SGreaterThanT => f.write_str("s must exceed t"),
            Hypothesis::SPlusOnePrime => f.write_str("s + 1 must be prime"),
            Hypothesis::PrimeOrder(p) => write!(f, "{p} is not prime"),
            Hypothesis::ProperSubquadrangle { s, t_sub, t } => {
                write!(
                    f,
                    "t' = {t_sub} must satisfy 1 <= t' < t = {t} and {s} t' <= {t}"
                )
            }
            Hypothesis::PayneArguments => f.write_str(
                "m and n must be positive and the bounded side of the order must exceed 1",
            ),
            Hypothesis::CensusSums => {
                f.write_str("orbit census does not sum to the point and line counts")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Math(#[from] MathError),
    #[error("invalid order ({s}, {t}): s and t must both be at least 1")]
    InvalidOrder { s: Nat, t: Nat },
    #[error("precondition failed: {0}")]
    Precondition(Hypothesis),
    #[error("golden file line {line}: {message}")]
    GoldenParse { line: usize, message: String },
    #[error("scan output line {line}: {message}")]
    RowParse { line: usize, message: String },
    #[error(transparent)]
    Witness(#[from] crate::witness::WitnessError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn require(cond: bool, h: Hypothesis) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(h))
    }
}
