//! The `circfam` command-line front end.
//!
//! Exit codes: 0 success or PASS, 1 FAIL or nonexistent, 2 usage or range
//! error, 3 inconclusive within budget.

use std::collections::HashSet;
use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{
    all_one_submatrix_check, audit_decomposition, check_theorem2, max_isolation_lower_bound,
    AuditReport, ALL_ONE_ORDER_CAP,
};
use crate::boolmat::{circulant, BoolMatrix, CirculantSpec};
use crate::constructions::{construct, search_recursive_q2_base, Method};
use crate::error::{Error, Result};
use crate::families::{Certificate, Verdict};
use crate::io::write_atomic;
use crate::search::{
    decide_embedding, sweep, SearchLimits, SearchProblem, Status, SweepOptions, SweepRecord,
    Symmetry, WORKERS_ENV,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "circfam",
    version,
    about = "Circulant almost cross intersecting families"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a certificate with one of the explicit constructions.
    Construct(ConstructArgs),
    /// Check a certificate against its declared circulant.
    Verify(VerifyArgs),
    /// Decide whether C_{p,q} embeds in A_{k,t}.
    Search(SearchArgs),
    /// Run the search over a grid of parameters, streaming JSON lines.
    Sweep(SweepArgs),
    /// Isolation bound, decomposition audit and upper-bound checks.
    Analyze(AnalyzeArgs),
    /// Write a certificate's intersection matrix, or a circulant, as text, PBM or JSON.
    Export(ExportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    SmallP,
    MidP,
    Blowup,
    RecursiveQ2,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::SmallP => Method::SmallP,
            MethodArg::MidP => Method::MidP,
            MethodArg::Blowup => Method::Blowup,
            MethodArg::RecursiveQ2 => Method::RecursiveQ2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MatrixFormat {
    Text,
    Pbm,
    Json,
}

#[derive(Debug, Args)]
pub struct SearchFlags {
    /// Stop after this many search nodes and report inconclusive.
    #[arg(long)]
    pub budget_nodes: Option<u64>,
    /// Stop after this many seconds and report inconclusive.
    #[arg(long)]
    pub budget_seconds: Option<f64>,
    /// Worker threads (defaults to the environment, then to the core count).
    #[arg(long, env = WORKERS_ENV)]
    pub workers: Option<usize>,
    /// Explore branches serially so the witness is reproducible.
    #[arg(long)]
    pub deterministic: bool,
    /// Disable relabeling and rotation symmetry breaking.
    #[arg(long)]
    pub no_symmetry: bool,
}

impl SearchFlags {
    fn limits(&self) -> Result<SearchLimits> {
        let max_time = match self.budget_seconds {
            Some(s) if !(s.is_finite() && s >= 0.0) => {
                return Err(Error::InvalidArgument(format!("--budget-seconds {s}")))
            }
            Some(s) => Some(Duration::from_secs_f64(s)),
            None => None,
        };
        Ok(SearchLimits {
            max_nodes: self.budget_nodes,
            max_time,
        })
    }

    fn symmetry(&self) -> Symmetry {
        if self.no_symmetry {
            Symmetry::NONE
        } else {
            Symmetry::ALL
        }
    }
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub method: MethodArg,
    #[arg(short)]
    pub t: usize,
    #[arg(short)]
    pub p: Option<usize>,
    #[arg(short)]
    pub q: Option<usize>,
    #[arg(short)]
    pub k: Option<usize>,
    /// Certificate path; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub certificate: PathBuf,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(short, required_unless_present = "recursive_q2_base")]
    pub t: Option<usize>,
    #[arg(short, required_unless_present = "recursive_q2_base")]
    pub p: Option<usize>,
    #[arg(short, required_unless_present = "recursive_q2_base")]
    pub q: Option<usize>,
    /// Ground set size. Nonexistence at k also rules out every smaller k.
    #[arg(short, required_unless_present = "recursive_q2_base")]
    pub k: Option<usize>,
    /// Try every k from 2t up to -k and report the smallest with a witness.
    #[arg(long)]
    pub smallest: bool,
    /// Regenerate the base case of the recursive q = 2 construction.
    #[arg(long, conflicts_with_all = ["t", "p", "q", "k", "smallest"])]
    pub recursive_q2_base: bool,
    /// Witness certificate path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub flags: SearchFlags,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(short)]
    pub t: usize,
    /// Inclusive range such as `5`, `1..3` or `1..=3`.
    #[arg(short, value_parser = parse_range)]
    pub p: RangeInclusive<usize>,
    #[arg(short, value_parser = parse_range)]
    pub q: RangeInclusive<usize>,
    #[arg(short, value_parser = parse_range)]
    pub k: RangeInclusive<usize>,
    /// JSON-lines output; existing cells in it are skipped and new ones appended.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory receiving one certificate per witness.
    #[arg(long)]
    pub witness_dir: Option<PathBuf>,
    #[command(flatten)]
    pub flags: SearchFlags,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Certificate to analyze; without it the circulant itself is analyzed.
    #[arg(required_unless_present_all = ["p", "q"], conflicts_with_all = ["p", "q"])]
    pub certificate: Option<PathBuf>,
    #[arg(short)]
    pub p: Option<usize>,
    #[arg(short)]
    pub q: Option<usize>,
    /// Node budget for the isolation search.
    #[arg(long)]
    pub budget_nodes: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// Certificate whose intersection matrix is exported.
    #[arg(required_unless_present_all = ["p", "q"], conflicts_with_all = ["p", "q"])]
    pub certificate: Option<PathBuf>,
    #[arg(short)]
    pub p: Option<usize>,
    #[arg(short)]
    pub q: Option<usize>,
    /// Rotate the circulant's rows by this amount.
    #[arg(long, default_value_t = 0, requires = "p")]
    pub shift: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: MatrixFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `a`, `a..b` or `a..=b` as an inclusive range.
pub fn parse_range(text: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let num = |s: &str| s.trim().parse::<usize>().map_err(|e| format!("{s:?}: {e}"));
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => (num(lo)?, num(hi.strip_prefix('=').unwrap_or(hi))?),
        None => {
            let v = num(text)?;
            (v, v)
        }
    };
    Ok(lo..=hi)
}

fn exit_for_error(e: &Error) -> u8 {
    match e {
        Error::Unverified(_) => EXIT_FAIL,
        _ => EXIT_USAGE,
    }
}

pub fn run(cli: Cli) -> ExitCode {
    let result = match cli.command {
        Command::Construct(a) => cmd_construct(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Search(a) => cmd_search(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Export(a) => cmd_export(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for_error(&e))
        }
    }
}

/// Entry point for the binary: clap usage errors exit with code 2.
pub fn main() -> ExitCode {
    run(Cli::parse())
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_construct(a: ConstructArgs) -> Result<u8> {
    let report = construct(a.method.into(), a.t, a.p, a.q, a.k)?;
    if !report.verify() {
        return Err(Error::Unverified(format!(
            "{} construction failed its own check",
            report.method
        )));
    }
    let mut cert = report.certificate();
    if let Some(k) = a.k {
        cert.k = cert.k.max(k);
    }
    let summary = format!(
        "{} C_({},{}): order {}, k_used {}, shift {}",
        report.method,
        report.spec.p,
        report.spec.q,
        report.order(),
        report.k_used,
        report.shift
    );
    match &a.out {
        Some(path) => {
            cert.write(path)?;
            println!("{summary}");
            for line in &report.trace {
                println!("  {line}");
            }
            println!("wrote {}", path.display());
        }
        None => {
            print!("{}", cert.to_json_string());
            eprintln!("{summary}");
        }
    }
    Ok(EXIT_OK)
}

fn cmd_verify(a: VerifyArgs) -> Result<u8> {
    let cert = Certificate::read(&a.certificate)?;
    Ok(match cert.verify()? {
        Verdict::Pass { p, q, shift } => {
            println!("PASS p={p} q={q} shift={shift}");
            EXIT_OK
        }
        Verdict::CellMismatch { row, col, expected } => {
            println!(
                "FAIL at ({row}, {col}): expected {}, found {}",
                u8::from(expected),
                u8::from(!expected)
            );
            EXIT_FAIL
        }
        Verdict::Malformed(why) => {
            println!("FAIL: {why}");
            EXIT_FAIL
        }
    })
}

fn cmd_search(a: SearchArgs) -> Result<u8> {
    let limits = a.flags.limits()?;
    if a.recursive_q2_base {
        return match search_recursive_q2_base(limits)? {
            Some(base) => {
                let text = base.to_json_string();
                emit(a.out.as_deref(), &text)?;
                eprintln!("base found at k = {}", base.certificate.k);
                Ok(EXIT_OK)
            }
            None => {
                eprintln!("no base case found");
                Ok(EXIT_INCONCLUSIVE)
            }
        };
    }
    let (t, p, q, k_max) = (a.t.unwrap(), a.p.unwrap(), a.q.unwrap(), a.k.unwrap());
    let ks: Vec<usize> = if a.smallest {
        (2 * t..=k_max).collect()
    } else {
        vec![k_max]
    };
    if ks.is_empty() {
        return Err(Error::range("k ≥ 2t", format!("k = {k_max}, t = {t}")));
    }
    let mut exhausted_up_to = None;
    for k in ks {
        let mut problem = SearchProblem::new(k, t, p, q)?;
        problem.symmetry = a.flags.symmetry();
        problem.limits = limits;
        problem.workers = a.flags.workers;
        problem.deterministic = a.flags.deterministic;
        let outcome = decide_embedding(&problem)?;
        match outcome.status {
            Status::Witness => {
                let cert = problem.certificate(outcome.witness.as_ref().expect("witness present"));
                println!("witness at k = {k} ({} nodes)", outcome.nodes);
                match &a.out {
                    Some(path) => cert.write(path)?,
                    None => print!("{}", cert.to_json_string()),
                }
                return Ok(EXIT_OK);
            }
            Status::Nonexistent => exhausted_up_to = Some(k),
            Status::Inconclusive => {
                match exhausted_up_to {
                    Some(kk) => println!(
                        "no embedding for k ≤ {kk}; inconclusive at k = {k} after {} nodes",
                        outcome.nodes
                    ),
                    None => println!("inconclusive at k = {k} after {} nodes", outcome.nodes),
                }
                return Ok(EXIT_INCONCLUSIVE);
            }
        }
    }
    println!(
        "no embedding for k ≤ {}",
        exhausted_up_to.expect("at least one k searched")
    );
    Ok(EXIT_FAIL)
}

fn read_done(path: &Path) -> Result<HashSet<(usize, usize, usize, usize)>> {
    let mut done = HashSet::new();
    if !path.exists() {
        return Ok(done);
    }
    let reader = BufReader::new(fs::File::open(path)?);
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        // a torn final line from an interrupted run is rerun, not trusted
        match serde_json::from_str::<SweepRecord>(&line) {
            Ok(rec) if rec.status != "error" && rec.status != "inconclusive" => {
                done.insert(rec.key());
            }
            Ok(_) => {}
            Err(e) => eprintln!(
                "skipping unreadable line {} of {}: {e}",
                idx + 1,
                path.display()
            ),
        }
    }
    Ok(done)
}

/// Witness file name for one sweep cell.
pub fn witness_file_name(t: usize, p: usize, q: usize, k: usize) -> String {
    format!("witness_t{t}_p{p}_q{q}_k{k}.json")
}

fn cmd_sweep(a: SweepArgs) -> Result<u8> {
    let options = SweepOptions {
        symmetry: Some(a.flags.symmetry()),
        limits: a.flags.limits()?,
        workers: a.flags.workers,
        deterministic: a.flags.deterministic,
    };
    let done = match &a.out {
        Some(path) => read_done(path)?,
        None => HashSet::new(),
    };
    if let Some(dir) = &a.witness_dir {
        fs::create_dir_all(dir)?;
    }
    let mut sink: Box<dyn Write> = match &a.out {
        Some(path) => {
            // a torn last line must not swallow the next record
            let needs_newline = fs::read(path)
                .map(|b| b.last().is_some_and(|&c| c != b'\n'))
                .unwrap_or(false);
            let mut f = OpenOptions::new().create(true).append(true).open(path)?;
            if needs_newline {
                f.write_all(b"\n")?;
            }
            Box::new(f)
        }
        None => Box::new(std::io::stdout()),
    };
    let t = a.t;
    let mut failure: Option<Error> = None;
    let mut inconclusive = false;
    sweep(
        t,
        a.p.clone(),
        a.q.clone(),
        a.k.clone(),
        &options,
        |p, q, k| done.contains(&(k, t, p, q)),
        |rec| {
            if failure.is_some() {
                return;
            }
            inconclusive |= rec.status == "inconclusive";
            let written = (|| -> Result<()> {
                if let (Some(dir), Some(cert)) = (&a.witness_dir, &rec.witness) {
                    cert.write(&dir.join(witness_file_name(rec.t, rec.p, rec.q, rec.k)))?;
                }
                let line = serde_json::to_string(rec)? + "\n";
                sink.write_all(line.as_bytes())?;
                sink.flush()?;
                Ok(())
            })();
            if let Err(e) = written {
                failure = Some(e);
            }
        },
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(if inconclusive {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    })
}

fn cmd_analyze(a: AnalyzeArgs) -> Result<u8> {
    let (spec, x, y, cert) = match &a.certificate {
        Some(path) => {
            let cert = Certificate::read(path)?;
            let pair = cert.to_pair()?;
            let (x, y) = pair.factors();
            (cert.spec()?, x, y, Some(cert))
        }
        None => {
            let spec = CirculantSpec::new(a.p.unwrap(), a.q.unwrap())?;
            // the trivial factorization C * I
            (spec, circulant(spec)?, BoolMatrix::identity(spec.n()), None)
        }
    };
    let audit = audit_decomposition(&x, &y, spec)?;
    let product = x.bool_product(&y)?;
    let isolation = max_isolation_lower_bound(&product, a.budget_nodes);
    let all_one_ok = if spec.n() <= ALL_ONE_ORDER_CAP {
        Some(all_one_submatrix_check(spec)?)
    } else {
        None
    };
    let theorem2 = match &cert {
        Some(c) if c.p >= 1 && c.p < 2 * c.t && c.q + 1 >= c.p => Some(check_theorem2(c)?),
        _ => None,
    };
    let report = AuditReport {
        r: audit.r,
        total_ones: audit.total_ones,
        violations: audit.violations,
        exhausted: isolation.exhausted,
        isolation: isolation.size,
        all_one_ok,
        theorem2,
    };
    emit(
        a.out.as_deref(),
        &(serde_json::to_string_pretty(&report)? + "\n"),
    )?;
    let clean =
        report.violations.is_empty() && all_one_ok != Some(false) && theorem2 != Some(false);
    Ok(if clean { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_export(a: ExportArgs) -> Result<u8> {
    let matrix = match &a.certificate {
        Some(path) => {
            let cert = Certificate::read(path)?;
            crate::families::intersection_matrix(&cert.to_pair()?)
        }
        None => {
            let spec = CirculantSpec::new(a.p.unwrap(), a.q.unwrap())?;
            circulant(spec)?.rotate_rows(a.shift as i64)?
        }
    };
    let text = match a.format {
        MatrixFormat::Text => matrix.to_text(),
        MatrixFormat::Pbm => matrix.to_pbm(),
        MatrixFormat::Json => serde_json::to_string_pretty(&matrix.to_json_doc())? + "\n",
    };
    emit(a.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}
