//! The deduction that a quadrangle of order (4, 12) has an automorphism
//! group transitive on neither points nor lines.
//!
//! Each numeric step recomputes its evidence from the laws in
//! [`crate::autlaws`] and [`crate::obstruction`]. Three group-theoretic
//! inputs are not computed and appear as axiom steps.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::autlaws::{prime_order_bound, type_admissible, TypeTag};
use crate::error::Result;
use crate::exactmath::{crt_pair, prime_divisors, Nat};
use crate::obstruction::{check_line_transitivity, check_point_transitivity, Verdict};
use crate::params::GqOrder;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepStatus {
    Verified,
    Failed,
    Axiom,
}

impl std::fmt::Display for StepStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StepStatus::Verified => "verified",
            StepStatus::Failed => "failed",
            StepStatus::Axiom => "axiom",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Evidence {
    Int(Nat),
    Flag(bool),
    List(Vec<Nat>),
    Pairs(Vec<(Nat, Nat)>),
    Text(String),
}

impl std::fmt::Display for Evidence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Evidence::Int(v) => write!(f, "{v}"),
            Evidence::Flag(v) => write!(f, "{v}"),
            Evidence::List(v) => {
                let items: Vec<String> = v.iter().map(Nat::to_string).collect();
                write!(f, "{{{}}}", items.join(", "))
            }
            Evidence::Pairs(v) => {
                let items: Vec<String> = v.iter().map(|(a, b)| format!("({a}, {b})")).collect();
                f.write_str(&items.join(", "))
            }
            Evidence::Text(v) => f.write_str(v),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeductionStep {
    pub name: String,
    pub claim: String,
    pub status: StepStatus,
    pub evidence: BTreeMap<String, Evidence>,
    /// Source of an axiom step.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub citation: Option<String>,
}

impl DeductionStep {
    fn computed(name: &str, claim: &str, ok: bool, evidence: Vec<(&str, Evidence)>) -> Self {
        DeductionStep {
            name: name.to_string(),
            claim: claim.to_string(),
            status: if ok {
                StepStatus::Verified
            } else {
                StepStatus::Failed
            },
            evidence: evidence
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            citation: None,
        }
    }

    fn axiom(name: &str, claim: &str, citation: &str) -> Self {
        DeductionStep {
            name: name.to_string(),
            claim: claim.to_string(),
            status: StepStatus::Axiom,
            evidence: BTreeMap::new(),
            citation: Some(citation.to_string()),
        }
    }

    pub fn verified(&self) -> bool {
        self.status == StepStatus::Verified
    }
}

/// Fault injection for the chain.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChainConfig {
    /// Primes put back into the allowed set after the eliminations.
    pub readmit: BTreeSet<Nat>,
}

fn order_412() -> GqOrder {
    GqOrder::new(4, 12).expect("nonzero order")
}

/// How one prime was removed from the candidate set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrimeRemoval {
    /// `p = s + 1` (or `t + 1` for lines) and the ceiling inequality fails.
    Inequality { p: Nat, lhs: Nat, rhs: Nat },
    /// No fixed-substructure type is admissible for `p`.
    NoAdmissibleType { p: Nat },
}

impl PrimeRemoval {
    pub fn prime(&self) -> Nat {
        match *self {
            PrimeRemoval::Inequality { p, .. } | PrimeRemoval::NoAdmissibleType { p } => p,
        }
    }
}

/// Candidate primes for `|Aut|` together with the reason each eliminated
/// prime was dropped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeSieve {
    pub bound: Vec<Nat>,
    pub removed: Vec<PrimeRemoval>,
    pub allowed: Vec<Nat>,
}

/// Removes from [`prime_order_bound`] every prime ruled out by the ceiling
/// inequality (as `s + 1` or `t + 1`) or by having no admissible type.
pub fn prime_sieve(o: GqOrder) -> Result<PrimeSieve> {
    let bound = prime_order_bound(o)?;
    let point = check_point_transitivity(o)?;
    let line = check_line_transitivity(o)?;
    let mut removed = Vec::new();
    let mut allowed = Vec::new();
    for &p in &bound {
        let by_inequality = [
            (o.s() + 1, &point, Verdict::NotPointTransitive),
            (o.t() + 1, &line, Verdict::NotLineTransitive),
        ]
        .into_iter()
        .find(|(q, r, v)| *q == p && r.verdict == *v);
        if let Some((_, r, _)) = by_inequality {
            removed.push(PrimeRemoval::Inequality {
                p,
                lhs: r.lhs().unwrap_or(0),
                rhs: r.rhs().unwrap_or(0),
            });
        } else if o.thick() && type_admissible(o, p)?.none_admissible() {
            removed.push(PrimeRemoval::NoAdmissibleType { p });
        } else {
            allowed.push(p);
        }
    }
    Ok(PrimeSieve {
        bound,
        removed,
        allowed,
    })
}

/// Primes that can divide the automorphism group order of a quadrangle of
/// order (4, 12).
pub fn allowed_primes_412() -> Result<BTreeSet<Nat>> {
    Ok(prime_sieve(order_412())?.allowed.into_iter().collect())
}

fn p_part(n: Nat, p: Nat) -> Nat {
    let mut part = 1;
    let mut m = n;
    while m % p == 0 {
        m /= p;
        part *= p;
    }
    part
}

/// Largest possible orders of a Sylow 7-subgroup and a Sylow 5-subgroup.
///
/// Elements of order 7 and 5 fix no point, so both Sylow subgroups act
/// semiregularly on the 245 points and their orders divide 245.
pub fn semiregular_sylow_bounds() -> Result<(Nat, Nat)> {
    let o = order_412();
    let points = o.point_count()?;
    Ok((p_part(points, 7), p_part(points, 5)))
}

/// Pairs `(orbit_count, orbit_size)` with `orbit_count * orbit_size = 245`
/// and both factors greater than 1.
pub fn orbit_case_analysis() -> Result<Vec<(Nat, Nat)>> {
    let n = order_412().point_count()?;
    Ok((2..n).filter(|k| n % k == 0).map(|k| (k, n / k)).collect())
}

fn semiregular_primes(o: GqOrder, primes: &[Nat]) -> Result<Vec<(Nat, bool)>> {
    primes
        .iter()
        .map(|&p| Ok((p, type_admissible(o, p)?.forces_no_fixed_points())))
        .collect()
}

/// An element of order 35 fixes no point, so `alpha1 ≡ 0 (mod 35)`;
/// Benson's congruence with `alpha0 = 0` gives `alpha1 ≡ st+1 (mod 16)`.
/// The combined residue modulo 560 exceeds the number of points.
pub fn order35_contradiction() -> Result<DeductionStep> {
    let o = order_412();
    let points = o.point_count()?;
    let modulus_sum = o.s() + o.t();
    let benson_residue = o.st_plus_one()? % modulus_sum;
    let semiregular = semiregular_primes(o, &[5, 7])?;
    let both_free = semiregular.iter().all(|&(_, free)| free);
    let residue = crt_pair(0, 35, benson_residue, modulus_sum)?;
    let modulus = 35 * modulus_sum;
    // the smallest admissible alpha1 is the residue itself
    let ok = both_free && residue > points;
    Ok(DeductionStep::computed(
        "order-35 contradiction",
        "no element of order 35 exists",
        ok,
        vec![
            ("alpha1_mod_35", Evidence::Int(0)),
            ("alpha1_mod_16", Evidence::Int(benson_residue)),
            ("st_plus_one", Evidence::Int(o.st_plus_one()?)),
            ("crt_residue", Evidence::Int(residue)),
            ("crt_modulus", Evidence::Int(modulus)),
            ("point_count", Evidence::Int(points)),
            ("powers_fixed_point_free", Evidence::Flag(both_free)),
        ],
    ))
}

fn admissible_step(o: GqOrder, p: Nat, expected: &[TypeTag], name: &str) -> Result<DeductionStep> {
    let adm = type_admissible(o, p)?;
    let tags = adm.admissible_tags();
    let names: Vec<&str> = tags.iter().map(|t| t.name()).collect();
    let free = adm.forces_no_fixed_points();
    Ok(DeductionStep::computed(
        name,
        &format!("an element of order {p} fixes no point"),
        free && tags == expected,
        vec![
            ("p", Evidence::Int(p)),
            ("admissible_types", Evidence::Text(names.join(", "))),
            ("alpha0_forced_zero", Evidence::Flag(free)),
        ],
    ))
}

fn sylow_step(p: Nat, bound: Nat, freeness: &DeductionStep, points: Nat) -> DeductionStep {
    DeductionStep::computed(
        &format!("sylow-{p} bound"),
        &format!("a Sylow {p}-subgroup has order at most {bound}"),
        freeness.verified() && points % bound == 0 && (points / bound) % p != 0,
        vec![
            ("point_count", Evidence::Int(points)),
            (
                "point_count_factors",
                Evidence::List(prime_divisors(points)),
            ),
            ("bound", Evidence::Int(bound)),
        ],
    )
}

/// All steps of the deduction, in order. The last step is verified iff
/// every computed step before it is.
pub fn run_412_chain_with(config: &ChainConfig) -> Result<Vec<DeductionStep>> {
    let o = order_412();
    let points = o.point_count()?;
    let lines = o.line_count()?;
    let mut steps = Vec::new();

    let sieve = prime_sieve(o)?;
    let mut allowed: BTreeSet<Nat> = sieve.allowed.iter().copied().collect();
    allowed.extend(&config.readmit);
    let mut evidence = vec![
        ("prime_bound", Evidence::List(sieve.bound.clone())),
        ("allowed", Evidence::List(allowed.iter().copied().collect())),
    ];
    let mut removal_notes = Vec::new();
    for r in &sieve.removed {
        match *r {
            PrimeRemoval::Inequality { p, lhs, rhs } => {
                removal_notes.push(format!("{p}: ceiling inequality {lhs} > {rhs}"))
            }
            PrimeRemoval::NoAdmissibleType { p } => {
                removal_notes.push(format!("{p}: all eight types inadmissible"))
            }
        }
    }
    evidence.push(("removed", Evidence::Text(removal_notes.join("; "))));
    steps.push(DeductionStep::computed(
        "prime reduction",
        "every prime dividing |G| is at most 7",
        allowed.iter().all(|&p| p <= 7),
        evidence,
    ));

    let seven = admissible_step(o, 7, &[TypeTag::T0], "order-7 fixed points")?;
    let five = admissible_step(o, 5, &[TypeTag::T1d], "order-5 fixed points")?;
    let (bound7, bound5) = semiregular_sylow_bounds()?;
    let syl7 = sylow_step(7, bound7, &seven, points);
    let syl5 = sylow_step(5, bound5, &five, points);
    steps.extend([seven, syl7, five, syl5]);

    steps.push(DeductionStep::axiom(
        "quasiprimitive reduction",
        "a quasiprimitive point action of degree 245 has a transitive minimal normal \
         subgroup T^k with T nonabelian simple; the Sylow bounds force k = 1",
        "C. E. Praeger, An O'Nan-Scott theorem for finite quasiprimitive permutation groups, \
         J. London Math. Soc. 47 (1993), Theorem 1",
    ));
    steps.push(DeductionStep::axiom(
        "simple-group orders",
        "no nonabelian simple group has order 2^a 3^b 5 7^c with 1 <= c <= 2",
        "B. Huppert and W. Lempken, Simple groups of order divisible by at most four primes, \
         Theorem II",
    ));

    let cases = orbit_case_analysis()?;
    let expected_cases = cases.len() == 4 && cases.iter().all(|&(k, m)| k * m == points);
    steps.push(DeductionStep::computed(
        "orbit cases",
        "an intransitive normal subgroup has equal orbits of size 5, 7, 35 or 49",
        expected_cases,
        vec![
            ("point_count", Evidence::Int(points)),
            ("orbit_count_and_size", Evidence::Pairs(cases)),
        ],
    ));
    steps.push(DeductionStep::axiom(
        "frattini argument",
        "in each orbit case a Sylow normaliser supplies an element of order 35",
        "Frattini argument, G = N_G(P) N for P a Sylow subgroup of a normal subgroup N",
    ));

    steps.push(order35_contradiction()?);

    let line_check = check_line_transitivity(o)?;
    let line_primes = prime_divisors(lines);
    let missing: Vec<Nat> = line_primes
        .iter()
        .copied()
        .filter(|p| !allowed.contains(p))
        .collect();
    steps.push(DeductionStep::computed(
        "line transitivity",
        "some prime dividing |L| cannot divide |G|",
        !missing.is_empty(),
        vec![
            ("line_count", Evidence::Int(lines)),
            ("line_count_primes", Evidence::List(line_primes)),
            ("excluded", Evidence::List(missing)),
            ("dual_lhs", Evidence::Int(line_check.lhs().unwrap_or(0))),
            ("dual_rhs", Evidence::Int(line_check.rhs().unwrap_or(0))),
        ],
    ));

    let all_ok = steps.iter().all(|s| s.status != StepStatus::Failed);
    let axioms = steps
        .iter()
        .filter(|s| s.status == StepStatus::Axiom)
        .count() as Nat;
    steps.push(DeductionStep::computed(
        "verdict",
        "not transitive on points; not transitive on lines",
        all_ok,
        vec![("axiom_steps", Evidence::Int(axioms))],
    ));
    Ok(steps)
}

pub fn run_412_chain() -> Result<Vec<DeductionStep>> {
    run_412_chain_with(&ChainConfig::default())
}

pub fn axiom_count(steps: &[DeductionStep]) -> usize {
    steps
        .iter()
        .filter(|s| s.status == StepStatus::Axiom)
        .count()
}

pub fn verdict_line(steps: &[DeductionStep]) -> String {
    let axioms = axiom_count(steps);
    match steps.last() {
        Some(last) if last.verified() => {
            format!("VERDICT: not point-transitive; not line-transitive ({axioms} axiom steps)")
        }
        _ => {
            let failed = steps
                .iter()
                .filter(|s| s.status == StepStatus::Failed)
                .count();
            format!("VERDICT: inconclusive ({failed} failed steps)")
        }
    }
}

pub fn render_text(steps: &[DeductionStep]) -> String {
    let mut out = String::new();
    for (i, s) in steps.iter().enumerate() {
        let _ = writeln!(out, "{:>2}. [{}] {}: {}", i + 1, s.status, s.name, s.claim);
        for (k, v) in &s.evidence {
            let _ = writeln!(out, "      {k} = {v}");
        }
        if let Some(c) = &s.citation {
            let _ = writeln!(out, "      cite: {c}");
        }
    }
    out.push_str(&verdict_line(steps));
    out.push('\n');
    out
}

#[derive(Serialize)]
struct ChainJson<'a> {
    steps: &'a [DeductionStep],
    axiom_steps: usize,
    verdict: String,
}

pub fn render_json(steps: &[DeductionStep]) -> Result<String> {
    let doc = ChainJson {
        steps,
        axiom_steps: axiom_count(steps),
        verdict: verdict_line(steps),
    };
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

/// Outcome of the generic transitivity test for one side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SideVerdict {
    /// The listed prime divides the count but cannot divide `|Aut|`.
    Excluded {
        prime: Nat,
    },
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitivityReport {
    pub order: GqOrder,
    pub sieve: PrimeSieve,
    pub points: SideVerdict,
    pub lines: SideVerdict,
}

/// The computable part of the deduction for any order: a group transitive
/// on points has order divisible by every prime dividing `|P|`, so an
/// eliminated such prime excludes point-transitivity, and dually. Anything
/// further needs group theory and is reported as inconclusive.
pub fn transitivity_chain(o: GqOrder) -> Result<TransitivityReport> {
    let sieve = prime_sieve(o)?;
    let side = |count: Nat| {
        prime_divisors(count)
            .into_iter()
            .find(|p| !sieve.allowed.contains(p))
            .map_or(SideVerdict::Inconclusive, |prime| SideVerdict::Excluded {
                prime,
            })
    };
    let points = side(o.point_count()?);
    let lines = side(o.line_count()?);
    Ok(TransitivityReport {
        order: o,
        sieve,
        points,
        lines,
    })
}
