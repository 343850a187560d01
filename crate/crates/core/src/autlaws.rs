//! Arithmetic laws satisfied by an automorphism of prime order.
//!
//! Everything here is a necessary condition: an order `(s, t)` and prime `p`
//! that pass a check may still admit no automorphism, but one that fails
//! certainly admits none of the described kind.

use serde::{Deserialize, Serialize};

use crate::error::{require, Error, Hypothesis, Result};
use crate::exactmath::{self, is_prime, Nat};
use crate::params::GqOrder;

/// Orbit census of an automorphism `x`.
///
/// `alpha0` counts fixed points, `alpha1` points moved to a distinct
/// collinear point, `alpha2` points moved to a noncollinear point. The
/// `beta` counts are the line analogues, with concurrency in place of
/// collinearity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct AutStats {
    pub alpha0: Nat,
    pub alpha1: Nat,
    pub alpha2: Nat,
    pub beta0: Nat,
    pub beta1: Nat,
    pub beta2: Nat,
}

impl AutStats {
    /// Whether the point and line counts add up to those of `o`.
    pub fn sums_match(&self, o: GqOrder) -> Result<bool> {
        let points = self.alpha0 as u128 + self.alpha1 as u128 + self.alpha2 as u128;
        let lines = self.beta0 as u128 + self.beta1 as u128 + self.beta2 as u128;
        Ok(points == o.point_count()? as u128 && lines == o.line_count()? as u128)
    }

    /// Census of the same automorphism acting on the dual quadrangle.
    pub fn dual(&self) -> AutStats {
        AutStats {
            alpha0: self.beta0,
            alpha1: self.beta1,
            alpha2: self.beta2,
            beta0: self.alpha0,
            beta1: self.alpha1,
            beta2: self.alpha2,
        }
    }
}

/// The eight shapes a fixed substructure can take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TypeTag {
    /// Nothing fixed.
    T0,
    /// Pairwise noncollinear fixed points, no fixed line.
    T1,
    /// Pairwise nonconcurrent fixed lines, no fixed point.
    T1d,
    /// A fixed point collinear with every fixed point and on every fixed line.
    T2,
    /// A fixed line concurrent with every fixed line and through every fixed point.
    T2d,
    /// A grid with unequal sides.
    T3,
    /// A dual grid with unequal sides.
    T3d,
    /// A subquadrangle.
    T4,
}

impl TypeTag {
    pub const ALL: [TypeTag; 8] = [
        TypeTag::T0,
        TypeTag::T1,
        TypeTag::T1d,
        TypeTag::T2,
        TypeTag::T2d,
        TypeTag::T3,
        TypeTag::T3d,
        TypeTag::T4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TypeTag::T0 => "T0",
            TypeTag::T1 => "T1",
            TypeTag::T1d => "T1d",
            TypeTag::T2 => "T2",
            TypeTag::T2d => "T2d",
            TypeTag::T3 => "T3",
            TypeTag::T3d => "T3d",
            TypeTag::T4 => "T4",
        }
    }

    /// Bit used by the compact mask encoding (`T0` is bit 0, `T4` bit 7).
    pub fn bit(self) -> u32 {
        1 << TypeTag::ALL.iter().position(|&t| t == self).unwrap()
    }
}

impl std::fmt::Display for TypeTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A fixed-substructure type together with its shape parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FixedType {
    T0,
    T1,
    T1d,
    T2,
    T2d,
    T3 { s1: Nat, s2: Nat },
    T3d { t1: Nat, t2: Nat },
    T4 { s_sub: Nat, t_sub: Nat },
}

impl FixedType {
    pub fn tag(&self) -> TypeTag {
        match self {
            FixedType::T0 => TypeTag::T0,
            FixedType::T1 => TypeTag::T1,
            FixedType::T1d => TypeTag::T1d,
            FixedType::T2 => TypeTag::T2,
            FixedType::T2d => TypeTag::T2d,
            FixedType::T3 { .. } => TypeTag::T3,
            FixedType::T3d { .. } => TypeTag::T3d,
            FixedType::T4 { .. } => TypeTag::T4,
        }
    }

    /// Checks the shape invariants against the ambient order.
    pub fn fits(&self, o: GqOrder) -> bool {
        match *self {
            FixedType::T3 { s1, s2 } => 1 <= s1 && s1 < s2 && s2 <= o.s(),
            FixedType::T3d { t1, t2 } => 1 <= t1 && t1 < t2 && t2 <= o.t(),
            FixedType::T4 { s_sub, t_sub } => {
                (1..=o.s()).contains(&s_sub) && (1..=o.t()).contains(&t_sub)
            }
            _ => true,
        }
    }
}

impl std::fmt::Display for FixedType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FixedType::T3 { s1, s2 } => write!(f, "T3 (s1={s1}, s2={s2})"),
            FixedType::T3d { t1, t2 } => write!(f, "T3d (t1={t1}, t2={t2})"),
            FixedType::T4 { s_sub, t_sub } => write!(f, "T4 (s'={s_sub}, t'={t_sub})"),
            other => f.write_str(other.tag().name()),
        }
    }
}

/// The single necessary condition that rules a type out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Elimination {
    /// Nothing fixed requires `p | st+1`, or `p | s+1` and `p | t+1`.
    NothingFixedCongruence,
    /// Fixed points but no fixed line requires `p | t+1`.
    PointsOnlyCongruence,
    /// Fixed lines but no fixed point requires `p | s+1`.
    LinesOnlyCongruence,
    /// A fixed star or pencil requires `p | s` or `p | t`.
    StarCongruence,
    /// A fixed grid requires `p | t-1`.
    GridCongruence,
    /// A fixed dual grid requires `p | s-1`.
    DualGridCongruence,
    /// A fixed grid or dual grid in a thick quadrangle requires `p < min(s, t)`.
    GridPrimeBound,
    /// No proper `(s', t')` with `s' ≡ s` and `t' ≡ t (mod p)`.
    SubquadrangleCongruence,
    /// For `p >= s`: no `t' < t` with `t' ≡ t (mod p)` and `s+t | s t' (st+1)`.
    LargePrimeSubquadrangle,
}

impl std::fmt::Display for Elimination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Elimination::NothingFixedCongruence => {
                "nothing fixed needs p | st+1 or p dividing both s+1 and t+1"
            }
            Elimination::PointsOnlyCongruence => "fixed points without fixed lines need p | t+1",
            Elimination::LinesOnlyCongruence => "fixed lines without fixed points need p | s+1",
            Elimination::StarCongruence => "a fixed star needs p | s or p | t",
            Elimination::GridCongruence => "a fixed grid needs p | t-1",
            Elimination::DualGridCongruence => "a fixed dual grid needs p | s-1",
            Elimination::GridPrimeBound => "a fixed grid in a thick quadrangle needs p < min(s, t)",
            Elimination::SubquadrangleCongruence => {
                "no proper subquadrangle order (s', t') with s' = s and t' = t mod p"
            }
            Elimination::LargePrimeSubquadrangle => {
                "p >= s but no t' < t with t' = t mod p and s+t | s t'(st+1)"
            }
        })
    }
}

/// Verdict for one type tag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TagVerdict {
    pub tag: TypeTag,
    pub admissible: bool,
    pub reason: Option<Elimination>,
    /// Surviving subquadrangle orders `(s', t')`; only populated for `T4`.
    pub candidates: Vec<(Nat, Nat)>,
}

impl TagVerdict {
    fn from_check(tag: TypeTag, failed: Option<Elimination>) -> Self {
        TagVerdict {
            tag,
            admissible: failed.is_none(),
            reason: failed,
            candidates: Vec::new(),
        }
    }
}

/// Per-type admissibility of an automorphism of order `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeAdmissibility {
    pub order: GqOrder,
    pub p: Nat,
    pub verdicts: Vec<TagVerdict>,
}

impl TypeAdmissibility {
    pub fn admissible_tags(&self) -> Vec<TypeTag> {
        self.verdicts
            .iter()
            .filter(|v| v.admissible)
            .map(|v| v.tag)
            .collect()
    }

    pub fn is_admissible(&self, tag: TypeTag) -> bool {
        self.verdict(tag).admissible
    }

    pub fn verdict(&self, tag: TypeTag) -> &TagVerdict {
        self.verdicts.iter().find(|v| v.tag == tag).unwrap()
    }

    /// No automorphism of order `p` can exist.
    pub fn none_admissible(&self) -> bool {
        self.verdicts.iter().all(|v| !v.admissible)
    }

    /// Every admissible type fixes no point.
    pub fn forces_no_fixed_points(&self) -> bool {
        self.admissible_tags()
            .iter()
            .all(|t| matches!(t, TypeTag::T0 | TypeTag::T1d))
    }

    /// Every admissible type fixes no line.
    pub fn forces_no_fixed_lines(&self) -> bool {
        self.admissible_tags()
            .iter()
            .all(|t| matches!(t, TypeTag::T0 | TypeTag::T1))
    }

    pub fn mask(&self) -> u32 {
        self.admissible_tags().iter().fold(0, |m, t| m | t.bit())
    }
}

fn require_prime(p: Nat) -> Result<()> {
    require(is_prime(p), Hypothesis::PrimeOrder(p))
}

fn modp(v: u128, p: Nat) -> u128 {
    v % p as u128
}

/// Benson's congruence `(t+1) alpha0 + alpha1 ≡ st+1 (mod s+t)`, valid for
/// every automorphism of every finite generalized quadrangle.
pub fn benson_residue(o: GqOrder, alpha0: Nat, alpha1: Nat) -> bool {
    let (s, t) = (o.s() as u128, o.t() as u128);
    let m = s + t;
    let lhs = ((t + 1) % m * (alpha0 as u128 % m) + alpha1 as u128) % m;
    let rhs = ((s % m) * (t % m) + 1) % m;
    lhs == rhs
}

/// `(1+t) alpha0 + alpha1 = (1+s) beta0 + beta1`.
pub fn count_relation(o: GqOrder, st: &AutStats) -> Result<bool> {
    require(st.sums_match(o)?, Hypothesis::CensusSums)?;
    let (s, t) = (o.s() as u128, o.t() as u128);
    let points_side = (1 + t) * st.alpha0 as u128 + st.alpha1 as u128;
    let lines_side = (1 + s) * st.beta0 as u128 + st.beta1 as u128;
    Ok(points_side == lines_side)
}

/// Orbit-size congruences of an automorphism of prime order `p`: every
/// non-fixed class is a union of `p`-cycles, so
/// `alpha1 ≡ alpha2 ≡ beta1 ≡ beta2 ≡ 0` and the fixed counts are congruent
/// to the totals.
pub fn orbit_census_congruences(o: GqOrder, p: Nat, st: &AutStats) -> Result<bool> {
    require_prime(p)?;
    let moved_ok = [st.alpha1, st.alpha2, st.beta1, st.beta2]
        .iter()
        .all(|&v| v % p == 0);
    let points = o.point_count()? as u128;
    let lines = o.line_count()? as u128;
    Ok(moved_ok
        && modp(st.alpha0 as u128, p) == modp(points, p)
        && modp(st.beta0 as u128, p) == modp(lines, p))
}

/// Relation between fixed point and fixed line counts for a type-2
/// substructure: `alpha0 ≡ 1 + s beta0 (mod p)`, or for type 2'
/// (`dual = true`) `beta0 ≡ 1 + t alpha0 (mod p)`.
pub fn type2_fixed_relation(
    o: GqOrder,
    p: Nat,
    alpha0: Nat,
    beta0: Nat,
    dual: bool,
) -> Result<bool> {
    require_prime(p)?;
    let (fixed, other, side) = if dual {
        (beta0, alpha0, o.t())
    } else {
        (alpha0, beta0, o.s())
    };
    Ok(modp(fixed as u128, p) == modp(1 + side as u128 * other as u128, p))
}

/// The branch of the star congruence selected by a known fixed count:
/// for `T2` with `alpha0 == 1` need `p | s`, with `alpha0 >= 2` need `p | t`;
/// for `T2d` with `beta0 == 1` need `p | t`, with `beta0 >= 2` need `p | s`.
pub fn type2_branch_admissible(o: GqOrder, p: Nat, tag: TypeTag, fixed_count: Nat) -> Result<bool> {
    require_prime(p)?;
    let (near, far) = match tag {
        TypeTag::T2 => (o.s(), o.t()),
        TypeTag::T2d => (o.t(), o.s()),
        _ => return Ok(false),
    };
    Ok(match fixed_count {
        0 => false,
        1 => near % p == 0,
        _ => far % p == 0,
    })
}

/// Proper subquadrangle orders `(s', t') != (s, t)` compatible with a
/// prime `p`, as used for the `T4` verdict.
///
/// For `p >= s` the subquadrangle must have `s' = s`, `t' < t`,
/// `t' ≡ t (mod p)` and `s + t | s t' (st+1)`. For `p < s` only the two
/// congruences `s' ≡ s`, `t' ≡ t (mod p)` are imposed.
pub fn type4_candidates(o: GqOrder, p: Nat) -> Result<Vec<(Nat, Nat)>> {
    require_prime(p)?;
    let (s, t) = (o.s(), o.t());
    let residues = |top: Nat| {
        let first = top % p;
        let start = if first == 0 { p } else { first };
        (start..=top).step_by(p as usize)
    };
    if p >= s {
        let st1 = o.st_plus_one()? as u128;
        let m = s as u128 + t as u128;
        Ok(residues(t)
            .filter(|&t_sub| t_sub < t)
            .filter(|&t_sub| (s as u128 * t_sub as u128 % m) * (st1 % m) % m == 0)
            .map(|t_sub| (s, t_sub))
            .collect())
    } else {
        let mut out = Vec::new();
        for s_sub in residues(s) {
            for t_sub in residues(t) {
                if (s_sub, t_sub) != (s, t) {
                    out.push((s_sub, t_sub));
                }
            }
        }
        Ok(out)
    }
}

/// Decides, for each of the eight fixed-substructure types, whether an
/// automorphism of prime order `p` of a thick quadrangle of order `o` could
/// have that type.
pub fn type_admissible(o: GqOrder, p: Nat) -> Result<TypeAdmissibility> {
    require_prime(p)?;
    o.require_thick()?;
    let (s, t) = (o.s(), o.t());
    let divides = |v: u128| v % p as u128 == 0;
    let (s1, t1) = (s as u128 + 1, t as u128 + 1);
    let st1 = s as u128 * t as u128 + 1;

    let check = |ok: bool, why: Elimination| if ok { None } else { Some(why) };
    let grid = |congruence: bool, why: Elimination| {
        check(congruence, why).or(check(p < s.min(t), Elimination::GridPrimeBound))
    };

    let mut verdicts = vec![
        TagVerdict::from_check(
            TypeTag::T0,
            check(
                divides(st1) || (divides(s1) && divides(t1)),
                Elimination::NothingFixedCongruence,
            ),
        ),
        TagVerdict::from_check(
            TypeTag::T1,
            check(divides(t1), Elimination::PointsOnlyCongruence),
        ),
        TagVerdict::from_check(
            TypeTag::T1d,
            check(divides(s1), Elimination::LinesOnlyCongruence),
        ),
        TagVerdict::from_check(
            TypeTag::T2,
            check(
                divides(s as u128) || divides(t as u128),
                Elimination::StarCongruence,
            ),
        ),
        TagVerdict::from_check(
            TypeTag::T2d,
            check(
                divides(t as u128) || divides(s as u128),
                Elimination::StarCongruence,
            ),
        ),
        TagVerdict::from_check(
            TypeTag::T3,
            grid(divides(t as u128 - 1), Elimination::GridCongruence),
        ),
        TagVerdict::from_check(
            TypeTag::T3d,
            grid(divides(s as u128 - 1), Elimination::DualGridCongruence),
        ),
    ];

    let candidates = type4_candidates(o, p)?;
    let reason = if p >= s {
        Elimination::LargePrimeSubquadrangle
    } else {
        Elimination::SubquadrangleCongruence
    };
    let mut t4 = TagVerdict::from_check(TypeTag::T4, check(!candidates.is_empty(), reason));
    t4.candidates = candidates;
    verdicts.push(t4);

    Ok(TypeAdmissibility {
        order: o,
        p,
        verdicts,
    })
}

/// Orbit census forced on an automorphism whose fixed substructure is a
/// proper subquadrangle of order `(s, t')`.
///
/// A proper subquadrangle of order `(s, t')` needs `s t' <= t`; beyond that
/// bound the line count `beta2` of the displayed census is negative, and
/// the call is rejected.
pub fn type4_stats(o: GqOrder, t_sub: Nat) -> Result<AutStats> {
    let (s, t) = (o.s() as u128, o.t() as u128);
    let hyp = Hypothesis::ProperSubquadrangle {
        s: o.s(),
        t_sub,
        t: o.t(),
    };
    require(
        t_sub >= 1 && (t_sub as u128) < t && s * t_sub as u128 <= t,
        hyp,
    )?;
    let ts = t_sub as u128;
    let sub_lines = s * ts + 1;
    let narrow = exactmath::narrow;
    let alpha0 = narrow((s + 1) * sub_lines)?;
    let alpha2 = narrow(s * (s + 1) * (t - ts))?;
    let beta0 = narrow((ts + 1) * sub_lines)?;
    let beta1 = narrow((t - ts) * (s + 1) * sub_lines)?;
    let total_lines = (t + 1) * (s * t + 1);
    let removed = (t * (s + 1) - s * ts + 1) * sub_lines;
    let beta2 = narrow(
        total_lines
            .checked_sub(removed)
            .ok_or(Error::Precondition(hyp))?,
    )?;
    Ok(AutStats {
        alpha0,
        alpha1: 0,
        alpha2,
        beta0,
        beta1,
        beta2,
    })
}

/// Every prime that could divide the order of the automorphism group of a
/// quadrangle of order `o`: primes up to `max(s+1, t+1)` and the prime
/// divisors of `st + 1`. Sorted ascending.
pub fn prime_order_bound(o: GqOrder) -> Result<Vec<Nat>> {
    let bound = o.s().max(o.t()) + 1;
    let mut primes = exactmath::primes_up_to(bound);
    primes.extend(exactmath::prime_divisors(o.st_plus_one()?));
    primes.sort_unstable();
    primes.dedup();
    Ok(primes)
}
