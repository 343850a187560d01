//! The ceiling inequality forced by an automorphism of order `s + 1`, and
//! the transitivity obstructions that follow when it fails.
//!
//! For a thick quadrangle of order `(s, t)` with `s > t` and `s + 1` prime,
//! an automorphism of order `s + 1` requires
//!
//! ```text
//! s * ceil( ceil(t^2 / (s+1)) * (s+1) / t ) <= t * (s + t)
//! ```
//!
//! When this fails no such automorphism exists, and since `s + 1` divides
//! the number of points, the group cannot be point-transitive. The dual
//! statement handles lines.

use serde::{Deserialize, Serialize};

use crate::error::{require, Hypothesis, Result};
use crate::exactmath::{ceil_div_wide, is_prime, narrow, Nat};
use crate::params::GqOrder;

/// Both sides of the ceiling inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalitySides {
    pub lhs: Nat,
    pub rhs: Nat,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    NoConstraint,
    /// No automorphism of order `s + 1`; not point-transitive.
    NotPointTransitive,
    /// No automorphism of order `t + 1`; not line-transitive.
    NotLineTransitive,
}

impl Verdict {
    pub fn describe(self) -> &'static str {
        match self {
            Verdict::NoConstraint => "no constraint",
            Verdict::NotPointTransitive => {
                "no automorphism of order s+1; automorphism group not point-transitive"
            }
            Verdict::NotLineTransitive => {
                "no automorphism of order t+1; automorphism group not line-transitive"
            }
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::NoConstraint => "NoConstraint",
            Verdict::NotPointTransitive => "NotPointTransitive",
            Verdict::NotLineTransitive => "NotLineTransitive",
        })
    }
}

/// `s = q^2 - n q` with `2n < q` and `s + 1` prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Family {
    pub q: Nat,
    pub n: Nat,
}

/// Result of a point- or line-transitivity check.
///
/// For a line check every quantity is computed on the dual order; `order`
/// is always the order that was asked about.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub order: GqOrder,
    /// Whether thickness, `s > t` and primality of `s + 1` all hold (on the
    /// dual order for a line check).
    pub applicable: bool,
    pub inequality: Option<InequalitySides>,
    pub beta0_min: Option<Nat>,
    pub corollary_n: Option<Nat>,
    pub family: Option<Family>,
    pub verdict: Verdict,
}

impl ObstructionReport {
    pub fn lhs(&self) -> Option<Nat> {
        self.inequality.map(|i| i.lhs)
    }

    pub fn rhs(&self) -> Option<Nat> {
        self.inequality.map(|i| i.rhs)
    }

    pub fn inequality_holds(&self) -> Option<bool> {
        self.inequality.map(|i| i.holds)
    }
}

fn hypotheses(o: GqOrder) -> Result<()> {
    o.require_thick()?;
    require(o.s() > o.t(), Hypothesis::SGreaterThanT)?;
    require(s_plus_one_prime(o), Hypothesis::SPlusOnePrime)
}

fn s_plus_one_prime(o: GqOrder) -> bool {
    o.s().checked_add(1).is_some_and(is_prime)
}

fn applies(o: GqOrder) -> bool {
    hypotheses(o).is_ok()
}

// ceil(t^2 / (s+1)) * (s+1), the smallest multiple of s+1 that is >= t^2
fn padded_square(o: GqOrder) -> Result<u128> {
    let (s, t) = (o.s() as u128, o.t() as u128);
    Ok(ceil_div_wide(t * t, s + 1)? * (s + 1))
}

/// Evaluates both sides of the ceiling inequality.
pub fn main_inequality(o: GqOrder) -> Result<InequalitySides> {
    hypotheses(o)?;
    let (s, t) = (o.s() as u128, o.t() as u128);
    let lhs = s * ceil_div_wide(padded_square(o)?, t)?;
    let rhs = t * (s + t);
    Ok(InequalitySides {
        lhs: narrow(lhs)?,
        rhs: narrow(rhs)?,
        holds: lhs <= rhs,
    })
}

/// Least number of lines an automorphism of order `s + 1` can fix:
/// `ceil(t^2/(s+1)) (s+1) - (t^2 - 1)`.
pub fn beta0_lower_bound(o: GqOrder) -> Result<Nat> {
    hypotheses(o)?;
    let t = o.t() as u128;
    Ok(narrow(padded_square(o)? + 1 - t * t)?)
}

/// The inequality in the form it is first derived, before simplification:
/// `s * ceil((beta0_min - 1) / t) <= t^2`. Always agrees with
/// [`main_inequality`].
pub fn payne_form_holds(o: GqOrder) -> Result<bool> {
    let beta0 = beta0_lower_bound(o)? as u128;
    let (s, t) = (o.s() as u128, o.t() as u128);
    Ok(s * ceil_div_wide(beta0 - 1, t)? <= t * t)
}

/// The `n` with `t^2/(n+1) + t <= s + 1 < t^2/n`, if any.
///
/// Requires a thick order with `s + 1` prime. Candidates are tried in
/// increasing order; the right-hand condition fails for every `n` once
/// `(s+1) n >= t^2`, which ends the search.
pub fn interval_criterion_n(o: GqOrder) -> Result<Option<Nat>> {
    o.require_thick()?;
    require(s_plus_one_prime(o), Hypothesis::SPlusOnePrime)?;
    let s1 = o.s() as u128 + 1;
    let t = o.t() as u128;
    let t2 = t * t;
    let mut n: u128 = 1;
    while n <= t2 && s1 * n < t2 {
        // t^2/(n+1) + t <= s+1  <=>  t^2 + t(n+1) <= (s+1)(n+1)
        if t2 + t * (n + 1) <= s1 * (n + 1) {
            return Ok(Some(narrow(n)?));
        }
        n += 1;
    }
    Ok(None)
}

/// Tags orders of the form `(q^2 - nq, q)` with `2n < q` and
/// `q^2 - nq + 1` prime, taking `q = t`.
pub fn family_tag(o: GqOrder) -> Option<Family> {
    let (s, q) = (o.s() as u128, o.t() as u128);
    let q2 = q * q;
    if s >= q2 || (q2 - s) % q != 0 {
        return None;
    }
    let n = (q2 - s) / q;
    (n >= 1 && 2 * n < q && s_plus_one_prime(o)).then(|| Family {
        q: o.t(),
        n: n as Nat,
    })
}

/// Point-transitivity obstruction for `o`.
pub fn check_point_transitivity(o: GqOrder) -> Result<ObstructionReport> {
    let family = family_tag(o);
    if !applies(o) {
        return Ok(ObstructionReport {
            order: o,
            applicable: false,
            inequality: None,
            beta0_min: None,
            corollary_n: None,
            family,
            verdict: Verdict::NoConstraint,
        });
    }
    let inequality = main_inequality(o)?;
    Ok(ObstructionReport {
        order: o,
        applicable: true,
        inequality: Some(inequality),
        beta0_min: Some(beta0_lower_bound(o)?),
        corollary_n: interval_criterion_n(o)?,
        family,
        verdict: if inequality.holds {
            Verdict::NoConstraint
        } else {
            Verdict::NotPointTransitive
        },
    })
}

/// Line-transitivity obstruction for `o`, obtained from the point check on
/// the dual order.
pub fn check_line_transitivity(o: GqOrder) -> Result<ObstructionReport> {
    let mut report = check_point_transitivity(o.dual())?;
    report.order = o;
    if report.verdict == Verdict::NotPointTransitive {
        report.verdict = Verdict::NotLineTransitive;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: Nat, t: Nat) -> GqOrder {
        GqOrder::new(s, t).unwrap()
    }

    fn sides(s: Nat, t: Nat) -> (Nat, Nat, bool) {
        let i = main_inequality(o(s, t)).unwrap();
        (i.lhs, i.rhs, i.holds)
    }

    #[test]
    fn inequality_examples() {
        assert_eq!(sides(12, 4), (84, 64, false));
        assert_eq!(sides(16, 4), (80, 80, true));
        assert_eq!(sides(22, 6), (176, 168, false));
    }

    #[test]
    fn inequality_preconditions() {
        assert!(main_inequality(o(4, 12)).is_err()); // s < t
        assert!(main_inequality(o(11, 4)).is_err()); // 12 not prime
        assert!(main_inequality(o(12, 1)).is_err()); // not thick
        let err = main_inequality(o(6, 6)).unwrap_err().to_string();
        assert!(err.contains("s must exceed t"), "{err}");
    }

    #[test]
    fn beta0_examples() {
        assert_eq!(beta0_lower_bound(o(12, 4)).unwrap(), 11);
        assert_eq!(beta0_lower_bound(o(22, 6)).unwrap(), 11);
        assert_eq!(beta0_lower_bound(o(16, 4)).unwrap(), 2);
        assert!(beta0_lower_bound(o(4, 12)).is_err());
    }

    #[test]
    fn point_transitivity_examples() {
        let r = check_point_transitivity(o(12, 4)).unwrap();
        assert_eq!(r.verdict, Verdict::NotPointTransitive);
        assert_eq!((r.lhs(), r.rhs()), (Some(84), Some(64)));
        assert_eq!(r.beta0_min, Some(11));
        assert_eq!(r.family, Some(Family { q: 4, n: 1 }));

        assert_eq!(
            check_point_transitivity(o(16, 4)).unwrap().verdict,
            Verdict::NoConstraint
        );
        let r = check_point_transitivity(o(6, 6)).unwrap();
        assert_eq!(r.verdict, Verdict::NoConstraint);
        assert!(!r.applicable && r.inequality.is_none());
    }

    #[test]
    fn line_transitivity_examples() {
        let r = check_line_transitivity(o(4, 12)).unwrap();
        assert_eq!(r.verdict, Verdict::NotLineTransitive);
        assert_eq!((r.lhs(), r.rhs()), (Some(84), Some(64)));
        assert_eq!(r.order, o(4, 12));
        assert_eq!(
            check_line_transitivity(o(4, 16)).unwrap().verdict,
            Verdict::NoConstraint
        );
        assert_eq!(
            check_line_transitivity(o(2, 2)).unwrap().verdict,
            Verdict::NoConstraint
        );
    }

    #[test]
    fn interval_examples() {
        assert_eq!(interval_criterion_n(o(12, 4)).unwrap(), Some(1));
        assert_eq!(interval_criterion_n(o(22, 6)).unwrap(), None);
        assert_eq!(interval_criterion_n(o(30, 6)).unwrap(), Some(1));
        assert!(interval_criterion_n(o(11, 4)).is_err());
        assert!(interval_criterion_n(o(12, 1)).is_err());
    }

    #[test]
    fn family_examples() {
        assert_eq!(family_tag(o(12, 4)), Some(Family { q: 4, n: 1 }));
        assert_eq!(family_tag(o(22, 6)), None);
        assert_eq!(family_tag(o(240, 16)), Some(Family { q: 16, n: 1 }));
        // 1900 = 100^2 - 81 * 100, but 2 * 81 > 100
        assert_eq!(family_tag(o(1900, 100)), None);
        assert_eq!(family_tag(o(9900, 100)), Some(Family { q: 100, n: 1 }));
        // 19 is prime but 2n = 6 is not below q = 6
        assert_eq!(family_tag(o(18, 6)), None);
    }

    #[test]
    fn verdict_implies_failed_inequality() {
        for t in 2..=40 {
            for s in 2..=t * t {
                for r in [
                    check_point_transitivity(o(s, t)).unwrap(),
                    check_line_transitivity(o(t, s)).unwrap(),
                ] {
                    if r.verdict != Verdict::NoConstraint {
                        assert_eq!(r.inequality_holds(), Some(false));
                    }
                }
            }
        }
    }
}
