//! `ordstat`: verify comparison results on scenario files, emit curves, reproduce figures.
//!
//! Exit codes: 0 success or consistent, 1 usage or input error, 2 inconsistency detected.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use ordstat_core::majorize::{check as major_check, MajorKind};
use ordstat_core::orderstat::SF_FLOOR;
use ordstat_core::scenario::{figure, first_sign_change, fixture, FigureOutcome, Scenario, BASELINES, GENERATORS};
use ordstat_core::stochorder::{check_st, mc_sf_second_many, ST_SLACK};
use ordstat_core::theorems::{list_theorems, lookup, verify, TheoremReport};
use ordstat_core::{ElsBatch, Grid, OrderRelation, Status};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] ordstat_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn is_broken_pipe(&self) -> bool {
        match self {
            CliError::Io { source, .. } => source.kind() == io::ErrorKind::BrokenPipe,
            CliError::Csv(e) => matches!(e.kind(), csv::ErrorKind::Io(io) if io.kind() == io::ErrorKind::BrokenPipe),
            _ => false,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// `println!` that reports a closed stdout as an error instead of panicking.
macro_rules! out {
    ($($t:tt)*) => {
        writeln!(io::stdout(), $($t)*).map_err(|e| io_err("stdout", e))?
    };
}

const EXIT_INCONSISTENT: u8 = 2;

#[derive(Parser)]
#[command(name = "ordstat", version, about = "Second-order statistics of ELS batches: orders, curves, theorem checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a theorem's hypotheses and conclusion on a scenario file.
    Verify {
        scenario: PathBuf,
        /// Theorem id; defaults to the scenario's own.
        #[arg(long)]
        theorem: Option<String>,
        /// Grid `lo:hi:n` overriding the scenario and default grids.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Write survival or hazard curves of both batches as CSV.
    Curves {
        scenario: PathBuf,
        #[arg(long, value_enum, default_value_t = What::Sf)]
        what: What,
        #[arg(long)]
        grid: Option<String>,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce a shipped figure: curve CSV plus JSON verdict.
    Reproduce {
        #[arg(value_parser = ["1a", "1b", "2a", "2b"])]
        figure: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Test `x ⪯ y` for one of the majorization-type orders.
    CheckMajor {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        y: Option<Vec<f64>>,
        /// JSON file with `{"x": [...], "y": [...]}`.
        #[arg(long, conflicts_with_all = ["x", "y"])]
        file: Option<PathBuf>,
        #[arg(long, value_parser = ["m", "w_sub", "w_sup", "rm"])]
        relation: String,
    },
    /// List the theorem registry.
    ListTheorems {
        #[arg(long)]
        json: bool,
    },
    /// List baseline families and generators with their parameters.
    ListBaselines,
    /// Monte-Carlo survival of the second smallest for an independent batch.
    Mc {
        scenario: PathBuf,
        #[arg(long, value_enum, default_value_t = Side::A)]
        batch: Side,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        x: Vec<f64>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// Overridden by `ORDSTAT_SEED`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum What {
    Sf,
    Hazard,
    Diff,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Side {
    A,
    B,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) if e.is_broken_pipe() => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Verify { scenario, theorem, grid, json, csv } => cmd_verify(&scenario, theorem, grid, json, csv),
        Command::Curves { scenario, what, grid, out } => {
            let s = load(&scenario)?;
            let (a, b) = s.batches()?;
            let xs = s.grid_points(parse_grid(grid)?.as_ref(), OrderRelation::St)?;
            let rows = curve_rows(&a, &b, &xs, what)?;
            match out {
                Some(p) => write_csv(create(&p)?, &rows)?,
                None => write_csv(io::stdout().lock(), &rows)?,
            }
            Ok(0)
        }
        Command::Reproduce { figure, out } => cmd_reproduce(&figure, &out),
        Command::CheckMajor { x, y, file, relation } => cmd_check_major(x, y, file, &relation),
        Command::ListTheorems { json } => {
            if json {
                out!("{}", serde_json::to_string_pretty(list_theorems())?);
            } else {
                for t in list_theorems() {
                    out!("{:<8} {}", t.id, t.digest());
                }
            }
            Ok(0)
        }
        Command::ListBaselines => {
            out!("baselines:");
            for b in BASELINES.iter() {
                out!("  {:<13} params [{}]  F(w) = {}  ({})", b.tag, b.params.join(", "), b.formula, b.support);
            }
            out!("generators:");
            for g in GENERATORS.iter() {
                out!("  {:<16} params [{}]  psi(x) = {}", g.tag, g.params.join(", "), g.formula);
            }
            Ok(0)
        }
        Command::Mc { scenario, batch, x, samples, seed } => {
            let seed = match std::env::var("ORDSTAT_SEED") {
                Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("ORDSTAT_SEED '{v}' is not an integer")))?,
                Err(_) => seed,
            };
            let (a, b) = load(&scenario)?.batches()?;
            let target = if batch == Side::A { a } else { b };
            let mut xs = x;
            xs.sort_by(f64::total_cmp);
            let est = mc_sf_second_many(&target, &xs, samples, seed)?;
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(io::stdout().lock());
            w.write_record(["x", "estimate", "stderr", "exact", "samples", "seed"])?;
            for e in est {
                let exact = target.sf_second(e.x)?;
                w.write_record([
                    fmt(e.x),
                    fmt(e.estimate),
                    fmt(e.stderr),
                    fmt(exact),
                    e.samples.to_string(),
                    e.seed.to_string(),
                ])?;
            }
            w.flush().map_err(|e| io_err("stdout", e))?;
            Ok(0)
        }
    }
}

fn io_err(path: impl AsRef<Path>, source: io::Error) -> CliError {
    CliError::Io { path: path.as_ref().display().to_string(), source }
}

fn load(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    Ok(Scenario::from_json(&text)?)
}

fn create(path: &Path) -> Result<fs::File> {
    fs::File::create(path).map_err(|e| io_err(path, e))
}

fn parse_grid(g: Option<String>) -> Result<Option<Grid>> {
    g.map(|s| Grid::parse(&s)).transpose().map_err(Into::into)
}

/// Shortest round-trip decimal; `-0` prints as `0`.
fn fmt(v: f64) -> String {
    format!("{}", if v == 0.0 { 0.0 } else { v })
}

struct CurveRow {
    x: f64,
    a: f64,
    b: f64,
}

fn curve_rows(a: &ElsBatch, b: &ElsBatch, xs: &[f64], what: What) -> Result<Vec<CurveRow>> {
    let mut rows = Vec::with_capacity(xs.len());
    let mut skipped = 0;
    for &x in xs {
        let (va, vb) = match what {
            What::Sf | What::Diff => (a.sf_second(x)?, b.sf_second(x)?),
            What::Hazard => {
                if a.sf_second(x)? <= SF_FLOOR || b.sf_second(x)? <= SF_FLOOR {
                    skipped += 1;
                    continue;
                }
                (a.hazard_second(x)?, b.hazard_second(x)?)
            }
        };
        rows.push(CurveRow { x, a: va, b: vb });
    }
    if skipped > 0 {
        eprintln!("note: {skipped} points skipped where a survival function is below {SF_FLOOR:e}");
    }
    Ok(rows)
}

fn write_csv<W: Write>(w: W, rows: &[CurveRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    w.write_record(["x", "value_A", "value_B", "diff"])?;
    for r in rows {
        w.write_record([fmt(r.x), fmt(r.a), fmt(r.b), fmt(r.a - r.b)])?;
    }
    w.flush().map_err(|e| io_err("csv output", e))?;
    Ok(())
}

fn cmd_verify(path: &Path, theorem: Option<String>, grid: Option<String>, json: bool, csv_out: bool) -> Result<u8> {
    let s = load(path)?;
    let id = theorem
        .or_else(|| s.theorem.clone())
        .ok_or_else(|| CliError::Usage("no --theorem given and the scenario names none".into()))?;
    let spec = lookup(&id)?;
    let (a, b) = s.batches()?;
    let grid = parse_grid(grid)?.or(s.grid);
    let points = grid.map(|g| g.points());
    let report = verify(spec, &a, &b, points.as_deref())?;
    if json {
        out!("{}", serde_json::to_string_pretty(&report)?);
    } else if csv_out {
        write_report_csv(&report)?;
    } else {
        print_report(&report)?;
    }
    Ok(if report.consistent { 0 } else { EXIT_INCONSISTENT })
}

fn verdict_line(report: &TheoremReport) -> String {
    let v = &report.conclusion_verdict;
    let mut s = format!(
        "{} {} {:?} on {} points [{}, {}]",
        v.relation.as_str(),
        v.direction.as_str(),
        v.status,
        v.grid.n,
        v.grid.lo,
        v.grid.hi
    );
    if let Some(w) = v.witness {
        s.push_str(&format!(", witness x = {} (A {}, B {})", w.x, w.value_a, w.value_b));
    }
    s
}

fn print_report(report: &TheoremReport) -> Result<()> {
    out!("theorem {}", report.id);
    for c in &report.hypothesis_results {
        let mut line = format!("  [{}] {}", if c.passed { "pass" } else { "fail" }, c.clause);
        if let Some(w) = &c.witness {
            line.push_str(&format!(" ({w})"));
        }
        if let Some(n) = &c.note {
            line.push_str(&format!(" [{n}]"));
        }
        out!("{line}");
    }
    out!("hypotheses: {}", if report.hypotheses_all_pass { "all pass" } else { "not all pass" });
    out!("conclusion: {}", verdict_line(report));
    out!("consistent: {}", report.consistent);
    Ok(())
}

fn write_report_csv(report: &TheoremReport) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(io::stdout().lock());
    w.write_record(["item", "passed", "detail"])?;
    for c in &report.hypothesis_results {
        let detail = [c.witness.as_deref(), c.note.as_deref()].into_iter().flatten().collect::<Vec<_>>().join("; ");
        w.write_record([c.clause.as_str(), if c.passed { "true" } else { "false" }, detail.as_str()])?;
    }
    let holds = report.conclusion_verdict.status == Status::Holds;
    w.write_record(["conclusion", if holds { "true" } else { "false" }, verdict_line(report).as_str()])?;
    w.write_record(["consistent", if report.consistent { "true" } else { "false" }, report.id.as_str()])?;
    w.flush().map_err(|e| io_err("stdout", e))?;
    Ok(())
}

fn cmd_reproduce(id: &str, out: &Path) -> Result<u8> {
    let f = figure(id)?;
    let (a, b) = fixture(f.fixture)?.batches()?;
    let xs = f.grid.points();
    let rows = curve_rows(&a, &b, &xs, What::Diff)?;
    fs::create_dir_all(out).map_err(|e| io_err(out, e))?;
    let csv_path = out.join(format!("figure_{id}.csv"));
    write_csv(create(&csv_path)?, &rows)?;

    let d: Vec<f64> = rows.iter().map(|r| r.a - r.b).collect();
    let verdict = check_st(&a, &b, &xs)?;
    let crossing = first_sign_change(&d, ST_SLACK).map(|i| xs[i]);
    let matches = match f.expected {
        FigureOutcome::Dominance(dir) => verdict.status == Status::Holds && verdict.direction == dir,
        FigureOutcome::Crossing => crossing.is_some() && verdict.status == Status::Fails,
    };
    let min = d.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let summary = json!({
        "figure": id,
        "scenario": f.fixture,
        "grid": f.grid,
        "expected": f.expected,
        "verdict": verdict,
        "crossing_x": crossing,
        "min_diff": min,
        "max_diff": max,
        "matches_expected": matches,
    });
    let json_path = out.join(format!("figure_{id}.json"));
    let text = serde_json::to_string_pretty(&summary)? + "\n";
    fs::write(&json_path, text).map_err(|e| io_err(&json_path, e))?;

    let outcome = match crossing {
        Some(x) => format!("crossing near x = {x}"),
        None => format!("st {} {:?}", verdict.direction.as_str(), verdict.status),
    };
    out!(
        "figure {id} ({}): {outcome}; matches expected: {matches}; wrote {} and {}",
        f.fixture,
        csv_path.display(),
        json_path.display()
    );
    Ok(if matches { 0 } else { EXIT_INCONSISTENT })
}

fn cmd_check_major(x: Option<Vec<f64>>, y: Option<Vec<f64>>, file: Option<PathBuf>, relation: &str) -> Result<u8> {
    let (x, y) = match (file, x, y) {
        (Some(p), _, _) => {
            let text = fs::read_to_string(&p).map_err(|e| io_err(&p, e))?;
            let v: serde_json::Value = serde_json::from_str(&text)?;
            let get = |k: &str| -> Result<Vec<f64>> {
                serde_json::from_value(v.get(k).cloned().unwrap_or_default())
                    .map_err(|_| CliError::Usage(format!("{}: '{k}' must be a list of numbers", p.display())))
            };
            (get("x")?, get("y")?)
        }
        (None, Some(x), Some(y)) => (x, y),
        _ => return Err(CliError::Usage("give --x and --y, or --file".into())),
    };
    if x.iter().chain(&y).any(|v| !v.is_finite()) {
        return Err(CliError::Usage("vectors must have finite entries".into()));
    }
    let kind = MajorKind::parse(relation)?;
    let c = major_check(kind, &y, &x)?;
    match c.first_violation {
        None => out!("true"),
        Some(i) => out!("false {i}"),
    }
    Ok(0)
}
