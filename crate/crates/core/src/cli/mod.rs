//! The `covtrans` command line.
//!
//! Exit codes: 0 success, 1 I/O or internal failure, 2 usage or parse error,
//! 3 infeasible parameters, failed precondition or inadmissible tower,
//! 4 attempts exhausted, 5 verification budget exceeded, 6 integrity error in
//! an input document, 7 a verification or reproduction check failed.

mod certificate;
mod descriptor;
mod run;
mod table;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::covering::{
    cov_bounds, covering_condition, covering_condition_lhs, exact_cov_witness, EXACT_COV_MAX_ORDER, feasibility, greedy_shrink_intersection,
    sample_probability, size_threshold,
};
use crate::error::{Error, Result};
use crate::group::Element;
use crate::round::sig12;
use crate::subset::GroupSubset;

pub use certificate::{
    verify_document, CertificateDocument, VerificationDocument, VerifyReport, COVERING_KIND, FAMILY_KIND,
};
pub use descriptor::{parse_elements, parse_group, parse_mode, parse_range, parse_tower, ModeArg};
pub use run::{
    construct_precheck, dimension_report, execute, rerun, translation_report, DimensionReport, NestingSummary, Output,
    RunConfig, TableOutput, TowerOutput, TranslationEntry, TranslationReport,
};
pub use table::{cov_table, family_groups, table_row, to_csv, TableRow, FAMILIES, TABLE_MAX_ORDER};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_ATTEMPTS: i32 = 4;
pub const EXIT_BUDGET: i32 = 5;
pub const EXIT_INTEGRITY: i32 = 6;
pub const EXIT_UNVERIFIED: i32 = 7;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::InvalidGroup(_) => EXIT_USAGE,
        Error::Infeasible(_)
        | Error::Precondition(_)
        | Error::Inadmissible { .. }
        | Error::NotDivisible { .. }
        | Error::OrderOverflow => EXIT_INFEASIBLE,
        Error::AttemptsExhausted { .. } => EXIT_ATTEMPTS,
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::Integrity(_) | Error::Json(_) => EXIT_INTEGRITY,
        Error::Soundness(_) => EXIT_UNVERIFIED,
        Error::Io(_) => EXIT_FAILURE,
    }
}

#[derive(Parser, Debug)]
#[command(name = "covtrans", version, about = "Covering sets by translates in finite groups and quotient towers")]
struct Cli {
    /// Worker threads for verification loops.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Intersecting families and k-covering sets in one group.
    Covering {
        #[command(subcommand)]
        command: CoveringCommand,
    },
    /// Bounds, exact values and constructed sizes of minimal covering sets.
    CovTable(CovTableArgs),
    /// Covering sets along a chain of cyclic quotients.
    Tower {
        #[command(subcommand)]
        command: TowerCommand,
    },
    /// Regenerate a document from its embedded run configuration.
    Rerun(RerunArgs),
}

#[derive(Subcommand, Debug)]
enum CoveringCommand {
    /// Build a verified k-covering set (or, with --family or --l, an intersecting family).
    Construct(ConstructArgs),
    /// Re-verify a certificate from its listed elements.
    Verify(VerifyArgs),
    /// Minimum size of a k-covering set by exhaustive search (order <= 16).
    ExactCov(GroupKArgs),
    /// Closed-form bounds and parameters.
    Bounds(GroupKArgs),
    /// Greedy intersection of right translates of one set.
    Shrink(ShrinkArgs),
}

#[derive(Subcommand, Debug)]
enum TowerCommand {
    /// Build all stage sets and emit the tower document.
    Build(TowerBuildArgs),
    /// Translate thin sets into the top stage set.
    Translate(TranslateArgs),
    /// Finite-depth dimension estimates of thin or given sets.
    Dim(DimArgs),
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<String>,
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(long)]
    group: String,
    #[arg(long)]
    k: u32,
    /// Enlarge every member of the intersecting family to this size.
    #[arg(long)]
    l: Option<u64>,
    /// Emit the intersecting family instead of the covering set.
    #[arg(long)]
    family: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = crate::covering::DEFAULT_MAX_ATTEMPTS)]
    max_attempts: u32,
    /// exhaustive or sampled:<m>; chosen by cost when absent.
    #[arg(long)]
    mode: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Certificate to check.
    #[arg(long)]
    input: String,
    #[arg(long)]
    mode: Option<String>,
    /// Seed for sampled verification; defaults to the certificate seed.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct GroupKArgs {
    #[arg(long)]
    group: String,
    #[arg(long)]
    k: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct ShrinkArgs {
    #[arg(long)]
    group: String,
    #[arg(long)]
    k: u32,
    /// Size of a random starting set.
    #[arg(long, conflicts_with = "set")]
    size: Option<u64>,
    /// Explicit starting set, comma separated.
    #[arg(long)]
    set: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct CovTableArgs {
    /// Comma-separated families: cyclic, dihedral, symmetric, elementary, product.
    #[arg(long, default_value = "cyclic")]
    families: String,
    /// Orders, as a..b or a comma list.
    #[arg(long, default_value = "3..16")]
    n: String,
    /// Covering degrees, as a..b or a comma list.
    #[arg(long, default_value = "1..2")]
    k: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = crate::covering::DEFAULT_MAX_ATTEMPTS)]
    max_attempts: u32,
    #[arg(long)]
    out: Option<String>,
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args, Debug)]
struct TowerBuildArgs {
    /// tower:n0,n1,...
    #[arg(long)]
    spec: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = crate::covering::DEFAULT_MAX_ATTEMPTS)]
    max_attempts: u32,
    #[arg(long)]
    mode: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct ThinArgs {
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random thin sets.
    #[arg(long, default_value_t = 1000)]
    samples: u64,
    /// Depth of the thin sets; the tower depth when absent.
    #[arg(long)]
    depth: Option<usize>,
    /// Probability of keeping each top-level element of a sampled thin set.
    #[arg(long, default_value_t = 1.0)]
    fullness: f64,
    /// An explicit set of top-level elements instead of samples.
    #[arg(long)]
    set: Option<String>,
}

#[derive(Args, Debug)]
struct TranslateArgs {
    #[arg(long, required_unless_present = "tower")]
    spec: Option<String>,
    /// A tower document written by `tower build`.
    #[arg(long, conflicts_with = "spec")]
    tower: Option<String>,
    #[command(flatten)]
    thin: ThinArgs,
    #[arg(long, default_value_t = crate::covering::DEFAULT_MAX_ATTEMPTS)]
    max_attempts: u32,
    #[arg(long)]
    mode: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct DimArgs {
    #[arg(long)]
    spec: String,
    #[command(flatten)]
    thin: ThinArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct RerunArgs {
    #[arg(long)]
    input: String,
    /// Where to write the regenerated document; standard output when absent.
    #[arg(long)]
    out: Option<String>,
    /// Compare with the input byte for byte instead of writing.
    #[arg(long)]
    check: bool,
}

fn require_seed(seed: Option<u64>) -> Result<u64> {
    seed.ok_or_else(|| Error::parse("--seed", "randomized commands need an explicit master seed"))
}

fn check_mode(mode: &Option<String>) -> Result<()> {
    if let Some(m) = mode {
        parse_mode(m)?;
    }
    Ok(())
}

fn emit(bytes: &[u8], out: Option<&str>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn emit_json<T: Serialize>(value: &T, output: &OutputArgs) -> Result<()> {
    if output.format != "json" {
        return Err(Error::parse(&output.format, "this command writes json only"));
    }
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    emit(&bytes, output.out.as_deref())
}

fn run_config(cfg: RunConfig) -> Result<i32> {
    let out = execute(&cfg)?;
    emit(&out.bytes, cfg.out())?;
    Ok(if out.passed { EXIT_OK } else { EXIT_UNVERIFIED })
}

fn optional_list(s: &Option<String>) -> Result<Option<Vec<Element>>> {
    s.as_deref().map(parse_elements).transpose()
}

#[derive(Serialize)]
struct ExactCovOutput {
    kind: &'static str,
    group: String,
    k: u32,
    exact: usize,
    witness: Vec<Element>,
}

#[derive(Serialize)]
struct BoundsOutput {
    kind: &'static str,
    group: String,
    n: u64,
    k: u32,
    feasible: bool,
    p: Option<f64>,
    size_cap: Option<f64>,
    lower: f64,
    upper: f64,
    covering_condition_lhs: f64,
    covering_condition: bool,
}

#[derive(Serialize)]
struct ShrinkOutput {
    kind: &'static str,
    group: String,
    k: u32,
    seed: Option<u64>,
    set: Vec<Element>,
    tuple: Vec<Element>,
    sizes: Vec<usize>,
    bound: u128,
    stepwise_ok: bool,
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Covering { command } => match command {
            CoveringCommand::Construct(a) => {
                construct_precheck(&a.group, a.k, a.l, a.family)?;
                check_mode(&a.mode)?;
                let seed = require_seed(a.seed)?;
                run_config(RunConfig::CoveringConstruct {
                    group: a.group,
                    k: a.k,
                    l: a.l,
                    family: a.family,
                    seed,
                    max_attempts: a.max_attempts,
                    mode: a.mode,
                    out: a.output.out,
                    format: a.output.format,
                })
            }
            CoveringCommand::Verify(a) => {
                let mode = a.mode.as_deref().map(parse_mode).transpose()?;
                let text = std::fs::read_to_string(&a.input)?;
                let doc: CertificateDocument =
                    serde_json::from_str(&text).map_err(|e| Error::Integrity(format!("{}: {e}", a.input)))?;
                let report = verify_document(&doc, mode, a.seed)?;
                emit_json(&report, &a.output)?;
                if report.passed() {
                    Ok(EXIT_OK)
                } else {
                    if let Some(w) = &report.verification.witness {
                        eprintln!("verification failed, witness {w:?}");
                    } else {
                        eprintln!("verification failed: sizes exceed their caps");
                    }
                    Ok(EXIT_UNVERIFIED)
                }
            }
            CoveringCommand::ExactCov(a) => {
                let g = parse_group(&a.group)?;
                let n = g.order();
                if n > EXACT_COV_MAX_ORDER || a.k == 0 || a.k as u64 > n {
                    return Err(Error::Precondition(format!(
                        "exact search needs |G| <= {EXACT_COV_MAX_ORDER} and 1 <= k <= |G|"
                    )));
                }
                let x = exact_cov_witness(&g, a.k)?;
                emit_json(
                    &ExactCovOutput {
                        kind: "exact-cov",
                        group: g.descriptor(),
                        k: a.k,
                        exact: x.len(),
                        witness: x.to_vec(),
                    },
                    &a.output,
                )?;
                Ok(EXIT_OK)
            }
            CoveringCommand::Bounds(a) => {
                let g = parse_group(&a.group)?;
                let n = g.order();
                let (lower, upper) = cov_bounds(n, a.k)?;
                let feasible = feasibility(n, a.k)?;
                let p = feasible.then(|| sample_probability(n, a.k)).transpose()?;
                emit_json(
                    &BoundsOutput {
                        kind: "bounds",
                        group: g.descriptor(),
                        n,
                        k: a.k,
                        feasible,
                        p: p.map(sig12),
                        size_cap: feasible.then(|| sig12(size_threshold(n, a.k))),
                        lower: sig12(lower),
                        upper: sig12(upper),
                        covering_condition_lhs: sig12(covering_condition_lhs(n, a.k)),
                        covering_condition: covering_condition(n, a.k),
                    },
                    &a.output,
                )?;
                Ok(EXIT_OK)
            }
            CoveringCommand::Shrink(a) => {
                let g = parse_group(&a.group)?;
                let n = g.order();
                let set = match (&a.set, a.size) {
                    (Some(s), None) => {
                        let xs = parse_elements(s)?;
                        if let Some(&x) = xs.iter().find(|&&x| x >= n) {
                            return Err(Error::parse(s, format!("element {x} outside {g}")));
                        }
                        GroupSubset::from_elements(&g, xs)?
                    }
                    (None, Some(size)) => {
                        if size > n {
                            return Err(Error::Precondition(format!("set size {size} exceeds |G| = {n}")));
                        }
                        let seed = require_seed(a.seed)?;
                        let mut rng = crate::covering::attempt_rng(seed, 0);
                        let picked = rand::seq::index::sample(&mut rng, n as usize, size as usize);
                        GroupSubset::from_elements(&g, picked.into_iter().map(|i| i as Element))?
                    }
                    _ => return Err(Error::parse("--set/--size", "give exactly one of --set and --size")),
                };
                let r = greedy_shrink_intersection(&set, a.k)?;
                let m = set.len() as u128;
                let bound = if a.k == 0 {
                    m
                } else {
                    m.pow(a.k) / (n as u128).pow(a.k - 1)
                };
                let stepwise_ok = r.sizes.windows(2).all(|w| w[1] as u128 <= w[0] as u128 * m / n as u128);
                emit_json(
                    &ShrinkOutput {
                        kind: "greedy-shrink",
                        group: g.descriptor(),
                        k: a.k,
                        seed: a.seed,
                        set: set.to_vec(),
                        tuple: r.tuple.clone(),
                        bound,
                        stepwise_ok,
                        sizes: r.sizes,
                    },
                    &a.output,
                )?;
                Ok(if stepwise_ok { EXIT_OK } else { EXIT_UNVERIFIED })
            }
        },
        Command::CovTable(a) => {
            let families: Vec<String> = a.families.split(',').map(|s| s.trim().to_string()).collect();
            for f in &families {
                family_groups(f, 1)?;
            }
            let n = parse_range(&a.n)?;
            let k = parse_range(&a.k)?
                .into_iter()
                .map(|k| u32::try_from(k).map_err(|_| Error::parse(&a.k, "k out of range")))
                .collect::<Result<Vec<u32>>>()?;
            if a.format != "csv" && a.format != "json" {
                return Err(Error::parse(&a.format, "expected csv or json"));
            }
            let seed = require_seed(a.seed)?;
            run_config(RunConfig::CovTable {
                families,
                n,
                k,
                seed,
                max_attempts: a.max_attempts,
                out: a.out,
                format: a.format,
            })
        }
        Command::Tower { command } => match command {
            TowerCommand::Build(a) => {
                parse_tower(&a.spec)?.check_admissible()?;
                check_mode(&a.mode)?;
                let seed = require_seed(a.seed)?;
                run_config(RunConfig::TowerBuild {
                    spec: a.spec,
                    seed,
                    max_attempts: a.max_attempts,
                    mode: a.mode,
                    out: a.output.out,
                    format: a.output.format,
                })
            }
            TowerCommand::Translate(a) => {
                if let Some(s) = &a.spec {
                    parse_tower(s)?.check_admissible()?;
                }
                check_mode(&a.mode)?;
                let seed = require_seed(a.thin.seed)?;
                run_config(RunConfig::TowerTranslate {
                    spec: a.spec,
                    tower: a.tower,
                    seed,
                    samples: a.thin.samples,
                    depth: a.thin.depth,
                    fullness: a.thin.fullness,
                    set: optional_list(&a.thin.set)?,
                    max_attempts: a.max_attempts,
                    mode: a.mode,
                    out: a.output.out,
                    format: a.output.format,
                })
            }
            TowerCommand::Dim(a) => {
                parse_tower(&a.spec)?;
                let set = optional_list(&a.thin.set)?;
                let seed = match (&set, a.thin.seed) {
                    (Some(_), s) => s.unwrap_or(0),
                    (None, s) => require_seed(s)?,
                };
                run_config(RunConfig::TowerDim {
                    spec: a.spec,
                    seed,
                    samples: a.thin.samples,
                    depth: a.thin.depth,
                    fullness: a.thin.fullness,
                    set,
                    out: a.output.out,
                    format: a.output.format,
                })
            }
        },
        Command::Rerun(a) => {
            let original = std::fs::read(&a.input)?;
            let text = String::from_utf8(original.clone())
                .map_err(|_| Error::Integrity(format!("{} is not UTF-8", a.input)))?;
            let (_, out) = rerun(&text)?;
            if a.check {
                if out.bytes == original {
                    eprintln!("identical: {} bytes", original.len());
                    Ok(EXIT_OK)
                } else {
                    eprintln!("regenerated document differs from {}", a.input);
                    Ok(EXIT_UNVERIFIED)
                }
            } else {
                emit(&out.bytes, a.out.as_deref())?;
                Ok(if out.passed { EXIT_OK } else { EXIT_UNVERIFIED })
            }
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return EXIT_USAGE;
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return EXIT_FAILURE;
        }
    }
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
