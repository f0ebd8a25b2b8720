//! Argument parsing and dispatch for the `kummer3` binary.
//!
//! Exit codes: 0 success, 1 invalid input or configuration, 2 ingest or
//! consistency violation.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use kummer3_core::emit::{emit_csv, emit_json, render_text, Format};
use kummer3_core::pftype::check_record_standalone;
use kummer3_core::{
    classify, cubic_symbol_rational, enumerate_companions, read_class_records, run_census,
    split_prime, CensusConfig, ClassifyRecord, Conductor, EisensteinInt, Error, TableId,
    Violation,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "kummer3", version, about = "Classify pure cubic fields and their Kummer closures")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Classify Q(∛d): conductor, multiplicity, rank, item, types.
    Classify {
        d: u64,
        /// Emit JSON (the default).
        #[arg(long, conflicts_with = "pretty")]
        json: bool,
        /// Emit aligned text instead of JSON.
        #[arg(long)]
        pretty: bool,
    },
    /// List all normalized radicands sharing conductor f.
    Multiplet { f: u64 },
    /// Sweep all normalized radicands below --max.
    Census(CensusArgs),
    /// Cubic residue symbol (c/p)₃ for a prime p ≡ 1 (mod 3).
    Symbol {
        #[arg(allow_negative_numbers = true)]
        c: i64,
        p: u64,
    },
    /// Split p ≡ 1 (mod 3) into conjugate primary primes.
    Split { p: u64 },
    /// Eisenstein integer utilities.
    Eisenstein {
        #[command(subcommand)]
        op: EisensteinOp,
    },
    /// Validate a class-data CSV without running a census.
    CheckIngest { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum EisensteinOp {
    /// Split p ≡ 1 (mod 3) into conjugate primary primes.
    Split { p: u64 },
}

#[derive(Debug, clap::Args)]
struct CensusArgs {
    /// Exclusive bound on normalized radicands (2..=10⁸; the sieve needs
    /// about 4 bytes per integer).
    #[arg(long = "max")]
    max_d: u64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, env = "KUMMER3_JOBS")]
    jobs: Option<usize>,
    #[arg(long, default_value = "json")]
    format: String,
    /// Write files into this directory instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Class-data CSV with header d,pf_type,w,h_L,ck3[,h_k].
    #[arg(long)]
    ingest: Option<PathBuf>,
    /// Comma-separated subset of species,honda,ismaili1,ismaili2,typesplit.
    #[arg(long)]
    tables: Option<String>,
    /// Render tables as text on standard output.
    #[arg(long)]
    pretty: bool,
}

enum Failure {
    Lib(Error),
    Io(String),
    Violations,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<(), Failure>;

/// Runs one invocation; `args[0]` is the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                EXIT_INVALID
            } else {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    match dispatch(cli.verb, out, err) {
        Ok(()) => EXIT_OK,
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Inconsistent(_) => EXIT_VIOLATION,
                _ => EXIT_INVALID,
            }
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INVALID
        }
        Err(Failure::Violations) => EXIT_VIOLATION,
    }
}

fn dispatch(verb: Verb, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match verb {
        Verb::Classify { d, pretty, .. } => {
            let rec = classify(d)?.record();
            let text = if pretty { classify_text(&rec) } else { to_json(&rec) };
            emit(out, &text)
        }
        Verb::Multiplet { f } => multiplet(f, out),
        Verb::Census(args) => census(args, out, err),
        Verb::Symbol { c, p } => {
            let sym = cubic_symbol_rational(c, p)?;
            let body = SymbolOut { c, p, exponent: sym.exponent, trivial: sym.trivial() };
            emit(out, &to_json(&body))
        }
        Verb::Split { p } | Verb::Eisenstein { op: EisensteinOp::Split { p } } => {
            let s = split_prime(p)?;
            let body = SplitOut {
                p,
                pi1: s.pi1,
                pi2: s.pi2,
                pi1_text: s.pi1.to_string(),
                pi2_text: s.pi2.to_string(),
            };
            emit(out, &to_json(&body))
        }
        Verb::CheckIngest { file } => check_ingest(&file, out, err),
    }
}

#[derive(Serialize)]
struct SymbolOut {
    c: i64,
    p: u64,
    exponent: u8,
    trivial: bool,
}

#[derive(Serialize)]
struct SplitOut {
    p: u64,
    pi1: EisensteinInt,
    pi2: EisensteinInt,
    pi1_text: String,
    pi2_text: String,
}

#[derive(Serialize)]
struct MultipletOut {
    f: u64,
    m: u64,
    companions: Vec<u64>,
}

#[derive(Serialize)]
struct IngestSummary {
    records: usize,
    hard_violations: usize,
    soft_findings: usize,
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

fn emit(out: &mut dyn Write, text: &str) -> Outcome {
    writeln!(out, "{text}").map_err(|e| Failure::Io(e.to_string()))
}

fn classify_text(r: &ClassifyRecord) -> String {
    let types: Vec<&str> = r.possible_types.iter().map(|t| t.name()).collect();
    let mut s = String::new();
    let _ = writeln!(s, "d          {} = {}·{}²", r.d, r.d1, r.d2);
    let _ = writeln!(s, "species    {}", r.species);
    let _ = writeln!(s, "conductor  {}", r.f);
    let _ = writeln!(s, "m(f)       {}", r.m);
    let _ = writeln!(s, "t, s, q*   {}, {}, {}", r.t, r.s, r.qstar);
    let _ = writeln!(s, "rank       {}", r.rank);
    let _ = writeln!(s, "bounds     [{}, {}]", r.bwb.lower, r.bwb.upper);
    let _ = writeln!(s, "item       {}", r.item);
    let _ = writeln!(s, "possible   {}", types.join(", "));
    let resolved = r.resolved_type.map_or("unresolved", |t| t.name());
    let flag = if r.conjectural { " (conjectural)" } else { "" };
    let _ = write!(s, "type       {resolved}{flag}");
    s
}

fn multiplet(f: u64, out: &mut dyn Write) -> Outcome {
    let c = Conductor::from_value(f)?;
    let mult = enumerate_companions(&c)?;
    let body = MultipletOut {
        f,
        m: mult.m,
        companions: mult.companions.iter().map(|r| r.d).collect(),
    };
    emit(out, &to_json(&body))
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn census(args: CensusArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let format: Format = args.format.parse()?;
    let mut cfg = CensusConfig::new(args.max_d);
    cfg.jobs = args.jobs.unwrap_or_else(default_jobs);
    if let Some(list) = &args.tables {
        cfg.tables = TableId::parse_list(list)?;
    }
    cfg.ingest = args.ingest;
    cfg.validate()?;
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)
            .map_err(|e| Failure::Io(format!("cannot create {}: {e}", dir.display())))?;
    }
    let tables = run_census(&cfg)?;
    report_findings(&tables.findings, err)?;

    if args.pretty {
        emit(out, render_text(&tables).trim_end())?;
    }
    match (format, &args.out) {
        (Format::Json, Some(dir)) => write_file(dir, "census.json", emit_json(&tables, true).as_bytes())?,
        (Format::Json, None) if !args.pretty => emit(out, &emit_json(&tables, false))?,
        (Format::Csv, Some(dir)) => {
            for (name, bytes) in emit_csv(&tables)? {
                write_file(dir, &name, &bytes)?;
            }
        }
        (Format::Csv, None) if !args.pretty => {
            let files = emit_csv(&tables)?;
            for (i, (_, bytes)) in files.iter().enumerate() {
                if i > 0 {
                    out.write_all(b"\n").map_err(|e| Failure::Io(e.to_string()))?;
                }
                out.write_all(bytes).map_err(|e| Failure::Io(e.to_string()))?;
            }
        }
        _ => {}
    }
    if tables.has_hard_findings() {
        return Err(Failure::Violations);
    }
    Ok(())
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Outcome {
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn report_findings(findings: &[Violation], err: &mut dyn Write) -> Outcome {
    for v in findings {
        let grade = if v.kind.is_hard() { "violation" } else { "finding" };
        writeln!(err, "{grade}: d={} {:?}: {}", v.d, v.kind, v.message)
            .map_err(|e| Failure::Io(e.to_string()))?;
    }
    Ok(())
}

fn check_ingest(file: &Path, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let reader = fs::File::open(file)
        .map_err(|e| Failure::Io(format!("cannot open {}: {e}", file.display())))?;
    let records = read_class_records(reader)?;
    let mut findings = Vec::new();
    for rec in &records {
        findings.extend(check_record_standalone(rec)?);
    }
    report_findings(&findings, err)?;
    let hard = findings.iter().filter(|v| v.kind.is_hard()).count();
    let summary = IngestSummary {
        records: records.len(),
        hard_violations: hard,
        soft_findings: findings.len() - hard,
    };
    emit(out, &to_json(&summary))?;
    if hard > 0 {
        return Err(Failure::Violations);
    }
    Ok(())
}
