//! Command-line surface. Every command returns its output and exit code
//! instead of printing, so the binary and the tests share one code path.
//!
//! Exit codes: 0 success, 1 semantic failure (nonempty diff, violated law,
//! failed deduction), 2 usage or I/O error.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::autlaws::type_admissible;
use crate::case412::{self, ChainConfig};
use crate::error::{Error, Result};
use crate::exactmath::Nat;
use crate::obstruction::{check_line_transitivity, check_point_transitivity, ObstructionReport};
use crate::params::{basic_laws, BasicLawReport, GqOrder};
use crate::scan::{self, GoldenTable};
use crate::witness::{self, IncidenceModel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping the worker threads of parallel commands.
pub const THREADS_ENV: &str = "QSIEVE_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Doily,
    Grid,
    DualGrid,
}

#[derive(Debug, Parser)]
#[command(
    name = "qsieve",
    version,
    about = "Obstructions to transitive generalized quadrangles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parameter laws and transitivity obstructions for one order.
    Check {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        s: Nat,
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        t: Nat,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Every order with t <= t-max excluded from point-transitivity.
    Scan {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        t_max: Nat,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
        /// Reference table of `s,t,stars` rows to compare against.
        #[arg(long)]
        golden: Option<PathBuf>,
        /// Drop repeated reference rows and read partial tags as full tags.
        #[arg(long, requires = "golden")]
        normalize: bool,
    },
    /// Admissible fixed-substructure types for an automorphism of prime order p.
    Types {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        s: Nat,
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        t: Nat,
        p: Nat,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// The deduction for order (4, 12).
    Case412 {
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
        /// Put a prime back into the allowed set (fault injection).
        #[arg(long)]
        readmit: Vec<Nat>,
    },
    /// Explicit small quadrangles and their automorphisms.
    Witness {
        #[arg(long, value_enum)]
        model: ModelKind,
        /// Side parameter for grid models.
        #[arg(long, default_value_t = 2)]
        size: Nat,
        /// Check every law on every iterated automorphism.
        #[arg(long)]
        verify_all: bool,
        /// Print the model as JSON.
        #[arg(long)]
        dump: bool,
        /// Toggle the incidence of point P and line L before anything else.
        #[arg(long, value_name = "P:L", value_parser = parse_flip)]
        flip: Option<(usize, usize)>,
        /// Exhaustive check of Payne's bound on the model.
        #[arg(long)]
        payne: bool,
    },
}

fn parse_flip(arg: &str) -> std::result::Result<(usize, usize), String> {
    let (p, l) = arg
        .split_once(':')
        .ok_or_else(|| format!("expected P:L, found {arg:?}"))?;
    let num = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("{v:?}: {e}"));
    Ok((num(p)?, num(l)?))
}

/// Captured result of one command.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(err: &Error) -> Self {
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            }
        }
    }
}

pub fn run(cli: Cli) -> Outcome {
    let result = match cli.command {
        Command::Check { s, t, format } => cmd_check(s, t, format),
        Command::Scan {
            t_max,
            format,
            golden,
            normalize,
        } => with_thread_cap(|| cmd_scan(t_max, format, golden.as_deref(), normalize)),
        Command::Types { s, t, p, format } => cmd_types(s, t, p, format),
        Command::Case412 { format, readmit } => cmd_case412(format, readmit),
        Command::Witness {
            model,
            size,
            verify_all,
            dump,
            flip,
            payne,
        } => with_thread_cap(|| cmd_witness(model, size, verify_all, dump, flip, payne)),
    };
    result.unwrap_or_else(|e| Outcome::usage(&e))
}

/// Runs `f` on a rayon pool capped by [`THREADS_ENV`] when it is set to a
/// positive integer, otherwise on the global pool.
fn with_thread_cap<F>(f: F) -> Result<Outcome>
where
    F: FnOnce() -> Result<Outcome> + Send,
{
    let cap = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0);
    match cap {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}

#[derive(Serialize)]
struct CheckJson {
    order: GqOrder,
    basic_laws: BasicLawReport,
    point_transitivity: ObstructionReport,
    line_transitivity: ObstructionReport,
}

fn yes_no(v: bool) -> &'static str {
    if v {
        "ok"
    } else {
        "fails"
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn obstruction_text(out: &mut String, label: &str, r: &ObstructionReport) {
    let _ = write!(out, "{label}: {}", r.verdict);
    match r.inequality {
        Some(i) => {
            let _ = write!(out, " lhs={} rhs={}", i.lhs, i.rhs);
            if let Some(b) = r.beta0_min {
                let _ = write!(out, " beta0_min={b}");
            }
            if let Some(n) = r.corollary_n {
                let _ = write!(out, " interval_n={n}");
            }
        }
        None => out.push_str(" (hypotheses not met)"),
    }
    if let Some(f) = r.family {
        let _ = write!(out, " family n={}", f.n);
    }
    out.push('\n');
}

pub fn cmd_check(s: Nat, t: Nat, format: OutputFormat) -> Result<Outcome> {
    let o = GqOrder::new(s, t)?;
    let laws = basic_laws(o)?;
    let point = check_point_transitivity(o)?;
    let line = check_line_transitivity(o)?;
    let text = match format {
        OutputFormat::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "order: {o}");
            let _ = writeln!(out, "points: {}", laws.point_count);
            let _ = writeln!(out, "lines: {}", laws.line_count);
            let _ = writeln!(out, "thick: {}", o.thick());
            let _ = writeln!(out, "divisibility: {}", yes_no(laws.divisibility_ok));
            let _ = writeln!(out, "higman: {}", yes_no(laws.higman_ok));
            let _ = writeln!(out, "interval: {}", yes_no(laws.interval_ok));
            let _ = writeln!(out, "feasible: {}", laws.feasible);
            obstruction_text(&mut out, "points", &point);
            obstruction_text(&mut out, "lines", &line);
            out
        }
        OutputFormat::Csv => {
            let mut out = String::from(
                "s,t,feasible,point_verdict,point_lhs,point_rhs,line_verdict,line_lhs,line_rhs\n",
            );
            let _ = writeln!(
                out,
                "{s},{t},{},{},{},{},{},{},{}",
                laws.feasible,
                point.verdict,
                opt(point.lhs()),
                opt(point.rhs()),
                line.verdict,
                opt(line.lhs()),
                opt(line.rhs())
            );
            out
        }
        OutputFormat::Json => {
            let doc = CheckJson {
                order: o,
                basic_laws: laws,
                point_transitivity: point,
                line_transitivity: line,
            };
            serde_json::to_string_pretty(&doc)? + "\n"
        }
    };
    Ok(Outcome::ok(text))
}

pub fn cmd_scan(
    t_max: Nat,
    format: OutputFormat,
    golden: Option<&std::path::Path>,
    normalize: bool,
) -> Result<Outcome> {
    let rows = scan::scan(t_max)?;
    let stdout = match format {
        OutputFormat::Text => scan::to_text(&rows),
        OutputFormat::Csv => scan::to_csv(&rows),
        OutputFormat::Json => scan::to_json(&rows)?,
    };
    let Some(path) = golden else {
        return Ok(Outcome::ok(stdout));
    };
    let mut table = GoldenTable::from_path(path)?;
    if normalize {
        table = table.normalized();
    }
    // only reference rows within the scanned range take part
    table.entries.retain(|e| e.t <= t_max);
    let diff = scan::compare_to_golden(&rows, &table);
    Ok(Outcome {
        code: if diff.is_empty() {
            EXIT_OK
        } else {
            EXIT_FAILURE
        },
        stdout,
        stderr: diff.render(),
    })
}

pub fn cmd_types(s: Nat, t: Nat, p: Nat, format: OutputFormat) -> Result<Outcome> {
    let adm = type_admissible(GqOrder::new(s, t)?, p)?;
    if format == OutputFormat::Json {
        return Ok(Outcome::ok(serde_json::to_string_pretty(&adm)? + "\n"));
    }
    let mut out = String::new();
    let _ = writeln!(out, "order: {}  p = {p}", adm.order);
    for v in &adm.verdicts {
        match &v.reason {
            None => {
                let _ = write!(out, "  {:<3} admissible", v.tag.name());
                if !v.candidates.is_empty() {
                    let c: Vec<String> = v
                        .candidates
                        .iter()
                        .map(|(a, b)| format!("({a}, {b})"))
                        .collect();
                    let _ = write!(out, "  subquadrangles {}", c.join(" "));
                }
                out.push('\n');
            }
            Some(why) => {
                let _ = writeln!(out, "  {:<3} eliminated: {why}", v.tag.name());
            }
        }
    }
    let tags: Vec<&str> = adm.admissible_tags().iter().map(|t| t.name()).collect();
    if tags.is_empty() {
        let _ = writeln!(out, "admissible: none (no automorphism of order {p})");
    } else {
        let _ = write!(out, "admissible: {}", tags.join(", "));
        if adm.forces_no_fixed_points() {
            out.push_str(" (alpha0=0 forced)");
        }
        out.push('\n');
        if adm.forces_no_fixed_lines() {
            out.push_str("fixed lines: beta0=0 forced\n");
        }
    }
    Ok(Outcome::ok(out))
}

pub fn cmd_case412(format: OutputFormat, readmit: Vec<Nat>) -> Result<Outcome> {
    let config = ChainConfig {
        readmit: readmit.into_iter().collect::<BTreeSet<_>>(),
    };
    let steps = case412::run_412_chain_with(&config)?;
    let ok = steps.last().is_some_and(|s| s.verified());
    let stdout = match format {
        OutputFormat::Json => case412::render_json(&steps)?,
        _ => case412::render_text(&steps),
    };
    Ok(Outcome {
        code: if ok { EXIT_OK } else { EXIT_FAILURE },
        stdout,
        stderr: String::new(),
    })
}

fn build_model(kind: ModelKind, size: Nat) -> Result<IncidenceModel> {
    match kind {
        ModelKind::Doily => witness::build_doily(),
        ModelKind::Grid => witness::build_grid(size),
        ModelKind::DualGrid => witness::build_dual_grid(size),
    }
}

pub fn cmd_witness(
    kind: ModelKind,
    size: Nat,
    verify_all: bool,
    dump: bool,
    flip: Option<(usize, usize)>,
    payne: bool,
) -> Result<Outcome> {
    let mut model = build_model(kind, size)?;
    if let Some((p, l)) = flip {
        model = model.with_flipped_incidence(p, l)?;
    }
    let mut out = String::new();
    let mut code = EXIT_OK;
    if dump {
        out.push_str(&model.to_json()?);
    }
    let violations = model.axiom_violations();
    if !dump {
        let _ = writeln!(
            out,
            "{}: order {}, {} points, {} lines, axioms {}",
            model.name(),
            model.order(),
            model.point_count(),
            model.line_count(),
            if violations.is_empty() {
                "ok"
            } else {
                "violated"
            }
        );
        for v in violations.iter().take(10) {
            let _ = writeln!(out, "  axiom: {v}");
        }
    }
    if payne {
        let check = witness::payne_exhaustive(&model)?;
        let _ = writeln!(
            out,
            "payne: {} sets checked, max (|X|-1)(|Y|-1) = {}, bound {}",
            check.sets_checked,
            check.max_product,
            if check.holds { "holds" } else { "violated" }
        );
        if !check.holds {
            code = EXIT_FAILURE;
        }
    }
    if verify_all {
        let summary = witness::verify_all(&model);
        out.push_str(&summary.render());
        if !summary.all_pass() {
            code = EXIT_FAILURE;
        }
    }
    Ok(Outcome {
        code,
        stdout: out,
        stderr: String::new(),
    })
}
