//! Parameter laws every generalized quadrangle order must obey.

use serde::{Deserialize, Serialize};

use crate::error::{require, Error, Hypothesis, Result};
use crate::exactmath::{self, Nat};

/// The order `(s, t)`: `s + 1` points on every line, `t + 1` lines through
/// every point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawOrder")]
pub struct GqOrder {
    s: Nat,
    t: Nat,
}

#[derive(Deserialize)]
struct RawOrder {
    s: Nat,
    t: Nat,
}

impl TryFrom<RawOrder> for GqOrder {
    type Error = Error;
    fn try_from(raw: RawOrder) -> Result<Self> {
        GqOrder::new(raw.s, raw.t)
    }
}

impl GqOrder {
    pub fn new(s: Nat, t: Nat) -> Result<Self> {
        if s == 0 || t == 0 {
            return Err(Error::InvalidOrder { s, t });
        }
        Ok(GqOrder { s, t })
    }

    pub fn s(&self) -> Nat {
        self.s
    }

    pub fn t(&self) -> Nat {
        self.t
    }

    pub fn thick(&self) -> bool {
        self.s > 1 && self.t > 1
    }

    /// The order of the point-line dual, `(t, s)`.
    pub fn dual(&self) -> GqOrder {
        GqOrder {
            s: self.t,
            t: self.s,
        }
    }

    /// `st + 1`.
    pub fn st_plus_one(&self) -> Result<Nat> {
        Ok(exactmath::checked_add(
            exactmath::checked_mul(self.s, self.t)?,
            1,
        )?)
    }

    /// Number of points, `(s+1)(st+1)`.
    pub fn point_count(&self) -> Result<Nat> {
        Ok(exactmath::product(&[
            exactmath::checked_add(self.s, 1)?,
            self.st_plus_one()?,
        ])?)
    }

    /// Number of lines, `(t+1)(st+1)`.
    pub fn line_count(&self) -> Result<Nat> {
        self.dual().point_count()
    }

    pub(crate) fn require_thick(&self) -> Result<()> {
        require(self.thick(), Hypothesis::Thick)
    }
}

impl std::fmt::Display for GqOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.s, self.t)
    }
}

/// Outcome of the basic parameter laws for one order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasicLawReport {
    pub point_count: Nat,
    pub line_count: Nat,
    /// `s + t` divides `st(s+1)(t+1)`.
    pub divisibility_ok: bool,
    /// `t <= s^2` and `s <= t^2` (thick orders only).
    pub higman_ok: bool,
    /// `1 < s < t^2` forces `s <= t^2 - t`, and dually (thick orders only).
    pub interval_ok: bool,
    pub feasible: bool,
}

pub fn point_count(o: GqOrder) -> Result<Nat> {
    o.point_count()
}

pub fn line_count(o: GqOrder) -> Result<Nat> {
    o.line_count()
}

fn divisibility_ok(o: GqOrder) -> bool {
    let (s, t) = (o.s as u128, o.t as u128);
    let m = s + t;
    // reduce factor by factor so the product never leaves u128
    [s, t, s + 1, t + 1]
        .iter()
        .fold(1u128 % m, |acc, &f| (acc * (f % m)) % m)
        == 0
}

fn higman_ok(o: GqOrder) -> bool {
    let (s, t) = (o.s as u128, o.t as u128);
    t <= s * s && s <= t * t
}

fn interval_ok(o: GqOrder) -> bool {
    let side = |a: u128, b: u128| !(1 < a && a < b * b) || a <= b * b - b;
    let (s, t) = (o.s as u128, o.t as u128);
    side(s, t) && side(t, s)
}

/// Evaluates the divisibility, Higman and interval laws.
///
/// Non-thick orders (grids and dual grids) skip the two inequality laws,
/// which are then reported as satisfied.
pub fn basic_laws(o: GqOrder) -> Result<BasicLawReport> {
    let divisibility_ok = divisibility_ok(o);
    let (higman_ok, interval_ok) = if o.thick() {
        (higman_ok(o), interval_ok(o))
    } else {
        (true, true)
    };
    Ok(BasicLawReport {
        point_count: o.point_count()?,
        line_count: o.line_count()?,
        divisibility_ok,
        higman_ok,
        interval_ok,
        feasible: divisibility_ok && higman_ok && interval_ok,
    })
}

/// Payne's bound for disjoint sets `X ⊆ Y^⊥` of pairwise noncollinear points
/// with `|X| = m`, `|Y| = n`: `(m-1)(n-1) <= s^2`. With `dual` set the sets
/// are pairwise nonconcurrent lines and the bound is `t^2`.
pub fn payne_bound_ok(m: Nat, n: Nat, o: GqOrder, dual: bool) -> Result<bool> {
    let side = if dual { o.t } else { o.s };
    require(m >= 1 && n >= 1 && side > 1, Hypothesis::PayneArguments)?;
    let lhs = (m as u128 - 1) * (n as u128 - 1);
    Ok(lhs <= side as u128 * side as u128)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn o(s: Nat, t: Nat) -> GqOrder {
        GqOrder::new(s, t).unwrap()
    }

    #[test]
    fn rejects_zero_parameters() {
        assert!(matches!(
            GqOrder::new(0, 4),
            Err(Error::InvalidOrder { .. })
        ));
        assert!(GqOrder::new(4, 0).is_err());
        assert!(!o(1, 5).thick());
        assert!(o(2, 2).thick());
    }

    #[test]
    fn counts() {
        assert_eq!(point_count(o(4, 12)).unwrap(), 245);
        assert_eq!(point_count(o(2, 2)).unwrap(), 15);
        assert_eq!(point_count(o(1, 1)).unwrap(), 4);
        assert_eq!(line_count(o(4, 12)).unwrap(), 637);
        assert_eq!(line_count(o(2, 2)).unwrap(), 15);
        assert_eq!(line_count(o(12, 4)).unwrap(), 245);
        assert!(point_count(o(u64::MAX, 2)).is_err());
    }

    #[test]
    fn basic_law_examples() {
        let r = basic_laws(o(12, 4)).unwrap();
        assert!(r.divisibility_ok && r.higman_ok && r.interval_ok && r.feasible);

        let r = basic_laws(o(3, 4)).unwrap();
        assert!(!r.divisibility_ok);
        assert!(!r.feasible);

        // 18 > t^2 = 16, so the Higman law fails; the interval law only
        // constrains s < t^2 and therefore holds.
        let r = basic_laws(o(18, 4)).unwrap();
        assert!(!r.higman_ok);
        assert!(r.interval_ok);
        assert!(!r.feasible);

        // s = t^2 is allowed by the interval law
        let r = basic_laws(o(16, 4)).unwrap();
        assert!(r.higman_ok && r.interval_ok);

        // 13 < 16 but 13 > 16 - 4
        let r = basic_laws(o(13, 4)).unwrap();
        assert!(!r.interval_ok);
    }

    #[test]
    fn non_thick_orders_skip_inequality_laws() {
        for s in 1..20 {
            let r = basic_laws(o(s, 1)).unwrap();
            assert!(r.higman_ok && r.interval_ok);
            assert!(r.feasible, "grid ({s},1) must be feasible");
            let r = basic_laws(o(1, s)).unwrap();
            assert!(r.feasible);
        }
    }

    #[test]
    fn payne_examples() {
        assert!(payne_bound_ok(3, 6, o(12, 4), true).unwrap());
        assert!(payne_bound_ok(1, 999, o(2, 2), false).unwrap());
        assert!(!payne_bound_ok(4, 7, o(12, 4), true).unwrap());
        assert!(payne_bound_ok(0, 3, o(12, 4), true).is_err());
        assert!(payne_bound_ok(2, 3, o(1, 4), false).is_err());
        assert!(payne_bound_ok(2, 3, o(4, 1), true).is_err());
    }

    #[test]
    fn divisibility_matches_direct_modulus() {
        for s in 1..=30u64 {
            for t in 1..=30u64 {
                let direct = (s * t * (s + 1) * (t + 1)) % (s + t) == 0;
                assert_eq!(
                    basic_laws(o(s, t)).unwrap().divisibility_ok,
                    direct,
                    "({s},{t})"
                );
            }
        }
    }

    #[test]
    fn square_orders_satisfy_interval_law() {
        for s in 2..=100 {
            assert!(basic_laws(o(s, s)).unwrap().interval_ok);
        }
    }

    proptest! {
        #[test]
        fn dual_swaps_counts(s in 1u64..1_000_000, t in 1u64..1_000_000) {
            let ord = o(s, t);
            prop_assert_eq!(ord.dual().point_count().unwrap(), ord.line_count().unwrap());
            prop_assert_eq!(ord.dual().line_count().unwrap(), ord.point_count().unwrap());
        }

        #[test]
        fn feasibility_is_conjunction(s in 1u64..5_000, t in 1u64..5_000) {
            let r = basic_laws(o(s, t)).unwrap();
            prop_assert_eq!(r.feasible, r.divisibility_ok && r.higman_ok && r.interval_ok);
            prop_assert_eq!(r, {
                let d = basic_laws(o(t, s)).unwrap();
                BasicLawReport { point_count: d.line_count, line_count: d.point_count, ..d }
            });
        }
    }
}
