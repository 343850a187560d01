//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use qsieve::autlaws::{type_admissible, TypeTag};
use qsieve::case412::{axiom_count, run_412_chain, verdict_line, Evidence, StepStatus};
use qsieve::exactmath::is_prime;
use qsieve::obstruction::{
    check_point_transitivity, family_tag, interval_criterion_n, main_inequality, Verdict,
};
use qsieve::scan::{compare_to_golden, scan, GoldenTable};
use qsieve::witness::{build_doily, verify_all};
use qsieve::GqOrder;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, elapsed: Duration) -> Result<(), String> {
    ensure(elapsed <= limit, || {
        format!("took {elapsed:?}, limit {limit:?}")
    })
}

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/excluded_orders.csv")
}

fn table_reproduction() -> Outcome {
    let started = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_qsieve"))
        .args(["scan", "--t-max", "100", "--golden"])
        .arg(golden_path())
        .arg("--normalize")
        .env("QSIEVE_THREADS", "1")
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    if out.status.code() != Some(0) {
        let stderr = String::from_utf8_lossy(&out.stderr);
        let summary: Vec<&str> = stderr.lines().collect();
        return Err(format!(
            "exit {:?}; {}",
            out.status.code(),
            summary.join(" | ")
        ));
    }
    within(Duration::from_secs(10), elapsed)?;

    // Cross-check with the library path and a direct set comparison.
    let golden = GoldenTable::from_path(&golden_path())
        .map_err(|e| e.to_string())?
        .normalized();
    let rows = scan(100).map_err(|e| e.to_string())?;
    let diff = compare_to_golden(&rows, &golden);
    ensure(diff.is_empty(), || diff.render())?;
    Ok(format!("{} rows, empty diff, {elapsed:?}", rows.len()))
}

fn order(s: u64, t: u64) -> Result<GqOrder, String> {
    GqOrder::new(s, t).map_err(|e| e.to_string())
}

fn spot_values() -> Outcome {
    let rows = scan(6).map_err(|e| e.to_string())?;
    let find = |s, t| rows.iter().find(|r| (r.s, r.t) == (s, t));

    let r = find(12, 4).ok_or("(12,4) not excluded")?;
    ensure(r.family == Some(1), || {
        format!("(12,4) family {:?}", r.family)
    })?;
    let r = find(22, 6).ok_or("(22,6) not excluded")?;
    ensure(r.family.is_none(), || {
        format!("(22,6) family {:?}", r.family)
    })?;
    let r = find(30, 6).ok_or("(30,6) not excluded")?;
    ensure(r.family.is_some(), || "(30,6) untagged".to_string())?;

    ensure(find(16, 4).is_none(), || "(16,4) excluded".to_string())?;
    let ineq = main_inequality(order(16, 4)?).map_err(|e| e.to_string())?;
    ensure(ineq.holds && ineq.lhs == 80 && ineq.rhs == 80, || {
        format!("(16,4) sides {} vs {}", ineq.lhs, ineq.rhs)
    })?;
    let rep = check_point_transitivity(order(12, 4)?).map_err(|e| e.to_string())?;
    ensure(rep.verdict == Verdict::NotPointTransitive, || {
        format!("(12,4) verdict {}", rep.verdict)
    })?;
    Ok("(12,4) n=1, (22,6) untagged, (30,6) tagged, (16,4) 80 = 80".to_string())
}

fn int(steps: &[qsieve::case412::DeductionStep], name: &str, key: &str) -> Result<u64, String> {
    let step = steps
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| format!("no step {name:?}"))?;
    match step.evidence.get(key) {
        Some(Evidence::Int(v)) => Ok(*v),
        other => Err(format!("{name}.{key} = {other:?}")),
    }
}

fn chain_412() -> Outcome {
    let started = Instant::now();
    let steps = run_412_chain().map_err(|e| e.to_string())?;
    let allowed = qsieve::case412::allowed_primes_412().map_err(|e| e.to_string())?;
    let sylow = qsieve::case412::semiregular_sylow_bounds().map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();

    ensure(allowed.iter().copied().eq([2, 3, 5, 7]), || {
        format!("allowed primes {allowed:?}")
    })?;
    ensure(sylow == (49, 5), || format!("sylow bounds {sylow:?}"))?;
    let (lhs, rhs) = (
        int(&steps, "line transitivity", "dual_lhs")?,
        int(&steps, "line transitivity", "dual_rhs")?,
    );
    ensure((lhs, rhs) == (84, 64), || {
        format!("dual sides {lhs} vs {rhs}")
    })?;
    let residue = int(&steps, "order-35 contradiction", "crt_residue")?;
    let modulus = int(&steps, "order-35 contradiction", "crt_modulus")?;
    let points = int(&steps, "order-35 contradiction", "point_count")?;
    ensure((residue, modulus, points) == (385, 560, 245), || {
        format!("crt {residue} mod {modulus}, |P| = {points}")
    })?;
    ensure(residue > points, || "residue below |P|".to_string())?;
    ensure(axiom_count(&steps) == 3, || {
        format!("{} axiom steps", axiom_count(&steps))
    })?;
    ensure(steps.iter().all(|s| s.status != StepStatus::Failed), || {
        "a computed step failed".to_string()
    })?;
    let verdict = verdict_line(&steps);
    ensure(
        verdict == "VERDICT: not point-transitive; not line-transitive (3 axiom steps)",
        || verdict.clone(),
    )?;
    within(Duration::from_secs(1), elapsed)?;
    Ok(format!(
        "{} steps, 385 mod 560 > 245, {elapsed:?}",
        steps.len()
    ))
}

fn witness_suite() -> Outcome {
    let started = Instant::now();
    let doily = build_doily().map_err(|e| e.to_string())?;
    let summary = verify_all(&doily);
    let corrupted = doily
        .with_flipped_incidence(0, 0)
        .map_err(|e| e.to_string())?;
    let negative = verify_all(&corrupted);
    let elapsed = started.elapsed();

    ensure(summary.exhaustive && summary.total == 720, || {
        format!(
            "{} elements, exhaustive {}",
            summary.total, summary.exhaustive
        )
    })?;
    ensure(summary.all_pass(), || summary.render())?;
    ensure(!negative.failures.is_empty(), || {
        "corrupted model passed every law".to_string()
    })?;
    within(Duration::from_secs(5), elapsed)?;
    Ok(format!(
        "720/720 pass, corrupted model {} failure(s), {elapsed:?}",
        negative.failures.len()
    ))
}

// Remainder-based ceiling, independent of the production helpers.
fn naive_ceil(a: u128, b: u128) -> u128 {
    a / b + u128::from(a % b != 0)
}

fn naive_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn oracle_equivalence() -> Outcome {
    let mismatches: Vec<String> = (1..=100u64)
        .into_par_iter()
        .flat_map_iter(|t| (1..=t * t).map(move |s| (s, t)))
        .filter_map(|(s, t)| {
            let applicable = s > 1 && t > 1 && s > t && naive_prime(s + 1);
            let o = GqOrder::new(s, t).ok()?;
            let production = main_inequality(o).ok();
            match (applicable, production) {
                (false, None) => None,
                (false, Some(_)) => Some(format!("({s},{t}) evaluated outside hypotheses")),
                (true, None) => Some(format!("({s},{t}) rejected")),
                (true, Some(p)) => {
                    let (s, t) = (s as u128, t as u128);
                    let lhs = s * naive_ceil(naive_ceil(t * t, s + 1) * (s + 1), t);
                    let rhs = t * (s + t);
                    let same =
                        p.lhs as u128 == lhs && p.rhs as u128 == rhs && p.holds == (lhs <= rhs);
                    (!same).then(|| format!("({s},{t}) {p:?} vs {lhs},{rhs}"))
                }
            }
        })
        .collect();
    ensure(mismatches.is_empty(), || {
        format!("{} mismatch(es), first {}", mismatches.len(), mismatches[0])
    })?;
    Ok("all (s,t) with t <= 100, s <= t^2 agree".to_string())
}

fn property_sweeps() -> Outcome {
    let counterexamples: Vec<String> = (2..=100u64)
        .into_par_iter()
        .flat_map_iter(|t| (t + 1..=t * t).map(move |s| (s, t)))
        .filter(|&(s, _)| is_prime(s + 1))
        .filter_map(|(s, t)| {
            let o = GqOrder::new(s, t).ok()?;
            let holds = main_inequality(o).ok()?.holds;
            let interval = interval_criterion_n(o).ok().flatten();
            let family = family_tag(o);
            if holds && interval.is_some() {
                Some(format!(
                    "({s},{t}) interval n={interval:?} but inequality holds"
                ))
            } else if holds && family.is_some() {
                Some(format!("({s},{t}) family {family:?} but inequality holds"))
            } else {
                None
            }
        })
        .collect();
    ensure(counterexamples.is_empty(), || counterexamples.join("; "))?;

    let type_failures: Vec<String> = (3..=10_000u64)
        .into_par_iter()
        .filter(|&s| is_prime(s + 1))
        .flat_map_iter(|s| (2..s).map(move |t| (s, t)))
        .filter_map(|(s, t)| {
            let o = GqOrder::new(s, t).ok()?;
            match type_admissible(o, s + 1) {
                Ok(adm) if adm.admissible_tags() == [TypeTag::T1d] => None,
                Ok(adm) => Some(format!("({s},{t}) {:?}", adm.admissible_tags())),
                Err(e) => Some(format!("({s},{t}) {e}")),
            }
        })
        .collect();
    ensure(type_failures.is_empty(), || {
        format!(
            "{} failure(s), first {}",
            type_failures.len(),
            type_failures[0]
        )
    })?;
    Ok("no counterexample in either sweep".to_string())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        ("table reproduction", table_reproduction),
        ("spot values", spot_values),
        ("(4,12) chain", chain_412),
        ("witness law suite", witness_suite),
        ("oracle equivalence", oracle_equivalence),
        ("property sweeps", property_sweeps),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
