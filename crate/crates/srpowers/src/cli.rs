//! Command-line front end. All subcommands funnel through `run`,
//! which writes to the supplied streams and returns the process exit
//! code, so the whole surface is testable in-process.
//!
//! Exit codes: 0 success or agreement, 1 disagreement or property
//! failure, 2 usage or input errors.

use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::catalog::catalog;
use crate::classify::{classify, explain, Classification};
use crate::graph::Graph;
use crate::harness::{
    cross_check, property_suite, regression_rows, OddWalkOutcome, ProfileKind, SuiteConfig,
};
use crate::search::{a0_oracle, A0Result, A0Value, SearchMode};

#[derive(Parser)]
#[command(
    name = "srpowers",
    about = "Exact a0-invariants of powers of Stanley-Reisner ideals of one-dimensional complexes",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the a0 value of one complex at one power
    Compute(ComputeArgs),
    /// Tabulate values over a power range
    Table(TableArgs),
    /// Emit a named catalog graph
    Catalog(CatalogArgs),
    /// Run the fixed regression table
    Check(FormatArg),
    /// Run the randomized property suite
    Fuzz(FuzzArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Oracle,
    Formula,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scan {
    Safe,
    Pruned,
}

#[derive(Args)]
struct SourceArgs {
    /// Catalog name, e.g. K4, C5, G1, E_3, F_2, K3uK3, or co:NAME for
    /// a complement
    #[arg(long, conflicts_with = "graph")]
    catalog: Option<String>,
    /// Graph file, JSON {"s":..,"edges":[[i,j],..]} or text (first
    /// line s, then one edge per line)
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Args)]
struct FormatArg {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Power of the ideal
    #[arg(long)]
    n: u32,
    #[arg(long, value_enum, default_value = "both")]
    mode: Mode,
    #[arg(long, value_enum, default_value = "safe")]
    search: Scan,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Power or inclusive power range, e.g. 3 or 2..4
    #[arg(long)]
    n: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct CatalogArgs {
    /// Catalog name
    name: String,
    /// Allow pattern-only graphs (isolated vertices)
    #[arg(long)]
    pattern: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct FuzzArgs {
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    s_min: usize,
    #[arg(long, default_value_t = 8)]
    s_max: usize,
    /// Highest power checked (powers 2..=n-max each run)
    #[arg(long, default_value_t = 4)]
    n_max: u32,
    /// Directory for reproducer bundles of failing cases
    #[arg(long)]
    repro_dir: Option<PathBuf>,
    /// Also sample the odd-walk lemma this many times per graph size
    #[arg(long, default_value_t = 40)]
    odd_walk_samples: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let help = matches!(
                e.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            );
            let stream: &mut dyn Write = if help { out } else { err };
            let _ = write!(stream, "{e}");
            return if help { 0 } else { 2 };
        }
    };
    let result = match cli.command {
        Command::Compute(a) => cmd_compute(a, out),
        Command::Table(a) => cmd_table(a, out),
        Command::Catalog(a) => cmd_catalog(a, out),
        Command::Check(a) => cmd_check(a, out),
        Command::Fuzz(a) => cmd_fuzz(a, out),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn load_graph(source: &SourceArgs) -> Result<Graph, String> {
    match (&source.catalog, &source.graph) {
        (Some(name), None) => {
            if let Some(base) = name.strip_prefix("co:") {
                let g = catalog(base, true).map_err(|e| e.to_string())?;
                let delta = g.complement();
                delta.validate_complex().map_err(|e| {
                    format!("complement of {base} is not a valid complex: {e}")
                })?;
                Ok(delta)
            } else {
                catalog(name, false).map_err(|e| e.to_string())
            }
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let parsed = if text.trim_start().starts_with('{') {
                Graph::from_json(&text)
            } else {
                Graph::from_text(&text)
            };
            let g = parsed.map_err(|e| e.to_string())?;
            g.validate_complex().map_err(|e| e.to_string())?;
            Ok(g)
        }
        _ => Err("exactly one of --catalog or --graph is required".to_string()),
    }
}

fn parse_n_range(text: &str) -> Result<(u32, u32), String> {
    let bad = || format!("invalid power range {text:?}; expected N or LO..HI");
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: u32 = lo.parse().map_err(|_| bad())?;
        let hi: u32 = hi.parse().map_err(|_| bad())?;
        if lo == 0 || hi < lo {
            return Err(bad());
        }
        Ok((lo, hi))
    } else {
        let n: u32 = text.parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        Ok((n, n))
    }
}

#[derive(Serialize)]
struct ComputeOutput {
    graph: Graph,
    n: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<A0Result>,
    #[serde(skip_serializing_if = "Option::is_none")]
    formula: Option<Classification>,
    #[serde(skip_serializing_if = "Option::is_none")]
    agree: Option<bool>,
}

fn cmd_compute(args: ComputeArgs, out: &mut dyn Write) -> Result<i32, String> {
    let delta = load_graph(&args.source)?;
    let mode = match args.search {
        Scan::Safe => SearchMode::Safe,
        Scan::Pruned => SearchMode::Pruned,
    };
    let oracle = match args.mode {
        Mode::Formula => None,
        _ => Some(a0_oracle(&delta, args.n, mode).map_err(|e| e.to_string())?),
    };
    let formula = match args.mode {
        Mode::Oracle => None,
        _ => Some(classify(&delta, args.n).map_err(|e| e.to_string())?),
    };
    let agree = match (&oracle, &formula) {
        (Some(o), Some(f)) => Some(f.value.agrees_with(o.value)),
        _ => None,
    };
    let disagreement = agree == Some(false);
    let output = ComputeOutput {
        graph: delta,
        n: args.n,
        oracle,
        formula,
        agree,
    };
    match args.format {
        Format::Json => emit_json(out, &output),
        Format::Text => {
            if let Some(o) = &output.oracle {
                let w = match &o.witness {
                    Some(w) => format!(" witness {}", w.monomial),
                    None => String::new(),
                };
                writeln!(out, "oracle: {}{w}", o.value).map_err(io_err)?;
            }
            if let Some(f) = &output.formula {
                write!(out, "{}", explain(f)).map_err(io_err)?;
            }
            if let Some(a) = output.agree {
                writeln!(out, "agree: {a}").map_err(io_err)?;
            }
            Ok(())
        }
    }?;
    Ok(if disagreement { 1 } else { 0 })
}

#[derive(Serialize)]
struct TableRow {
    n: u32,
    oracle: A0Value,
    formula: Classification,
    agree: bool,
}

fn cmd_table(args: TableArgs, out: &mut dyn Write) -> Result<i32, String> {
    let delta = load_graph(&args.source)?;
    let (lo, hi) = parse_n_range(&args.n)?;
    let mut rows = Vec::new();
    let mut all_agree = true;
    for n in lo..=hi {
        let oracle = a0_oracle(&delta, n, SearchMode::Safe).map_err(|e| e.to_string())?;
        let formula = classify(&delta, n).map_err(|e| e.to_string())?;
        let agree = formula.value.agrees_with(oracle.value);
        all_agree &= agree;
        rows.push(TableRow {
            n,
            oracle: oracle.value,
            formula,
            agree,
        });
    }
    match args.format {
        Format::Json => emit_json(out, &rows)?,
        Format::Text => {
            writeln!(out, "{:>3}  {:>8}  {:>8}  {:<5}  rule", "n", "oracle", "formula", "agree")
                .map_err(io_err)?;
            for row in &rows {
                let rule = match row.formula.rule {
                    Some(r) => format!("{r:?}"),
                    None => "-".to_string(),
                };
                writeln!(
                    out,
                    "{:>3}  {:>8}  {:>8}  {:<5}  {rule}",
                    row.n,
                    row.oracle.to_string(),
                    row.formula.value.to_string(),
                    row.agree
                )
                .map_err(io_err)?;
            }
        }
    }
    Ok(if all_agree { 0 } else { 1 })
}

fn cmd_catalog(args: CatalogArgs, out: &mut dyn Write) -> Result<i32, String> {
    let g = if let Some(base) = args.name.strip_prefix("co:") {
        let g = catalog(base, true).map_err(|e| e.to_string())?.complement();
        if !args.pattern {
            g.validate_complex().map_err(|e| e.to_string())?;
        }
        g
    } else {
        catalog(&args.name, args.pattern).map_err(|e| e.to_string())?
    };
    match args.format {
        Format::Json => writeln!(out, "{}", g.to_json()).map_err(io_err)?,
        Format::Text => write!(out, "{}", g.to_text()).map_err(io_err)?,
    }
    Ok(0)
}

#[derive(Serialize)]
struct CheckRow {
    label: String,
    n: u32,
    expected: A0Value,
    safe: A0Value,
    pruned: A0Value,
    formula: String,
    pass: bool,
}

fn cmd_check(args: FormatArg, out: &mut dyn Write) -> Result<i32, String> {
    let mut rows = Vec::new();
    let mut all_pass = true;
    for reg in regression_rows() {
        let cross = cross_check(&reg.delta, reg.n.max(2));
        // cross_check starts at the square; the lone first-power row
        // is still verified through the oracle directly
        let (safe, pruned, formula_value, row_ok) = match cross.iter().find(|r| r.n == reg.n) {
            Some(r) => (r.safe, r.pruned, r.formula.value.to_string(), r.ok),
            None => {
                let o = a0_oracle(&reg.delta, reg.n, SearchMode::Safe)
                    .map_err(|e| e.to_string())?;
                let f = classify(&reg.delta, reg.n).map_err(|e| e.to_string())?;
                (o.value, o.value, f.value.to_string(), true)
            }
        };
        let pass = row_ok && safe == reg.expected && pruned == reg.expected;
        all_pass &= pass;
        rows.push(CheckRow {
            label: reg.label,
            n: reg.n,
            expected: reg.expected,
            safe,
            pruned,
            formula: formula_value,
            pass,
        });
    }
    match args.format {
        Format::Json => emit_json(out, &rows)?,
        Format::Text => {
            for row in &rows {
                writeln!(
                    out,
                    "{} {:<24} n={}  expected {:>4}  got {:>4}  formula {:>7}",
                    if row.pass { "pass" } else { "FAIL" },
                    row.label,
                    row.n,
                    row.expected.to_string(),
                    row.safe.to_string(),
                    row.formula
                )
                .map_err(io_err)?;
            }
        }
    }
    Ok(if all_pass { 0 } else { 1 })
}

fn cmd_fuzz(args: FuzzArgs, out: &mut dyn Write) -> Result<i32, String> {
    if args.s_min < 2 || args.s_max > crate::graph::MAX_VERTICES || args.s_min > args.s_max {
        return Err(format!(
            "vertex range {}..{} outside 2..{}",
            args.s_min,
            args.s_max,
            crate::graph::MAX_VERTICES
        ));
    }
    if args.n_max < 2 {
        return Err("n-max must be at least 2".to_string());
    }
    let config = SuiteConfig {
        trials_per_profile: args.trials,
        s_range: (args.s_min, args.s_max),
        n_values: (2..=args.n_max).collect(),
        seed: args.seed,
        include_catalog: true,
        repro_dir: args.repro_dir.clone(),
    };
    let report = property_suite(&config);

    let mut walk_holds = 0u64;
    let mut walk_skipped = 0u64;
    let mut walk_violations = Vec::new();
    for s in args.s_min..=args.s_max.min(6) {
        for t in 0..args.odd_walk_samples {
            let seed = args.seed.wrapping_add(xw_seed(s, t));
            let profile = crate::harness::FuzzProfile::new(
                ProfileKind::Girth3Complex,
                (s, s),
                seed,
            );
            let g = match crate::harness::random_graph(&profile) {
                Ok(g) => g,
                Err(_) => continue,
            };
            match crate::harness::odd_walk_check(&g, (t % 5).min(4), seed) {
                OddWalkOutcome::Holds => walk_holds += 1,
                OddWalkOutcome::Skipped => walk_skipped += 1,
                OddWalkOutcome::Violated => {
                    walk_violations.push(format!("odd walk violated: s={s} seed={seed}"))
                }
            }
        }
    }

    let failed = !report.failures.is_empty() || !walk_violations.is_empty();
    match args.format {
        Format::Json => {
            #[derive(Serialize)]
            struct FuzzOutput<'a> {
                suite: &'a crate::harness::SuiteReport,
                odd_walk_holds: u64,
                odd_walk_skipped: u64,
                odd_walk_violations: &'a [String],
            }
            emit_json(
                out,
                &FuzzOutput {
                    suite: &report,
                    odd_walk_holds: walk_holds,
                    odd_walk_skipped: walk_skipped,
                    odd_walk_violations: &walk_violations,
                },
            )?;
        }
        Format::Text => {
            writeln!(
                out,
                "graphs {}  checks {}  agreements {}  abstentions {}  generation failures {}",
                report.graphs,
                report.checks,
                report.agreements,
                report.abstentions,
                report.generation_failures
            )
            .map_err(io_err)?;
            for (rule, count) in &report.rule_counts {
                writeln!(out, "  rule {rule}: {count}").map_err(io_err)?;
            }
            writeln!(
                out,
                "odd walk: {walk_holds} hold, {walk_skipped} skipped, {} violated",
                walk_violations.len()
            )
            .map_err(io_err)?;
            for f in report.failures.iter().chain(&walk_violations) {
                writeln!(out, "FAIL {f}").map_err(io_err)?;
            }
        }
    }
    Ok(if failed { 1 } else { 0 })
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), String> {
    let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    writeln!(out, "{text}").map_err(io_err)
}

fn io_err(e: std::io::Error) -> String {
    format!("write failed: {e}")
}

// mixes the odd-walk loop indices into per-sample seeds
fn xw_seed(s: usize, t: usize) -> u64 {
    (s as u64) << 24 | (t as u64) << 8 | 0x51
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cli(args: &[&str]) -> (i32, String, String) {
        let argv: Vec<String> = std::iter::once("srpowers".to_string())
            .chain(args.iter().map(|s| s.to_string()))
            .collect();
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(&argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn compute_catalog_both_modes() {
        let (code, out, _) = run_cli(&["compute", "--catalog", "K4", "--n", "3"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["oracle"]["value"], 8);
        assert_eq!(v["formula"]["value"], 8);
        assert_eq!(v["formula"]["rule"], "R5");
        assert_eq!(v["agree"], true);
    }

    #[test]
    fn compute_reports_minus_infinity_sentinel() {
        let (code, out, _) = run_cli(&["compute", "--catalog", "G1", "--n", "3"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["oracle"]["value"], "-inf");
        assert_eq!(v["formula"]["value"], "unknown");
    }

    #[test]
    fn compute_output_is_byte_stable() {
        let a = run_cli(&["compute", "--catalog", "G6", "--n", "3"]);
        let b = run_cli(&["compute", "--catalog", "G6", "--n", "3"]);
        assert_eq!(a.1, b.1);
        assert!(!a.1.contains("elapsed"), "timing must not leak into JSON");
    }

    #[test]
    fn table_over_range() {
        let (code, out, _) = run_cli(&["table", "--catalog", "G6", "--n", "2..4", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let rows = v.as_array().unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[1]["oracle"], 6);
        assert_eq!(rows[2]["oracle"], 9);
        assert_eq!(rows[0]["formula"]["value"], "unknown");
    }

    #[test]
    fn catalog_emission_and_complements() {
        let (code, out, _) = run_cli(&["catalog", "G1"]);
        assert_eq!(code, 0);
        let g = Graph::from_json(&out).unwrap();
        assert_eq!(g.edge_count(), 4);

        let (code, out, _) = run_cli(&["catalog", "co:G3"]);
        assert_eq!(code, 0);
        let g = Graph::from_json(&out).unwrap();
        assert_eq!(g.edge_count(), 21 - 10);

        let (code, _, err) = run_cli(&["catalog", "G1'"]);
        assert_eq!(code, 2);
        assert!(err.contains("pattern"), "{err}");
        let (code, _, _) = run_cli(&["catalog", "G1'", "--pattern"]);
        assert_eq!(code, 0);
    }

    #[test]
    fn graph_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.json");
        std::fs::write(&path, r#"{"s":4,"edges":[[1,2],[2,3],[1,3],[3,4]]}"#).unwrap();
        let (code, out, _) = run_cli(&[
            "compute",
            "--graph",
            path.to_str().unwrap(),
            "--n",
            "2",
            "--mode",
            "oracle",
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["oracle"]["value"], "-inf");

        let text_path = dir.path().join("g.txt");
        std::fs::write(&text_path, "4\n1 2\n2 3\n1 3\n3 4\n").unwrap();
        let (code2, out2, _) = run_cli(&[
            "compute",
            "--graph",
            text_path.to_str().unwrap(),
            "--n",
            "2",
            "--mode",
            "oracle",
        ]);
        assert_eq!(code2, 0);
        assert_eq!(out, out2);
    }

    #[test]
    fn usage_errors_exit_two() {
        let (code, _, _) = run_cli(&["compute", "--graph", "missing.json", "--n", "2"]);
        assert_eq!(code, 2);
        let (code, _, _) = run_cli(&["compute", "--catalog", "K4", "--n", "0"]);
        assert_eq!(code, 2);
        let (code, _, _) = run_cli(&["table", "--catalog", "K4", "--n", "4..2"]);
        assert_eq!(code, 2);
        let (code, _, _) = run_cli(&["compute", "--n", "2"]);
        assert_eq!(code, 2);
        let (code, _, err) = run_cli(&["bogus"]);
        assert_eq!(code, 2);
        assert!(!err.is_empty());
    }

    #[test]
    fn check_passes() {
        let (code, out, _) = run_cli(&["check"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.lines().all(|l| l.starts_with("pass")), "{out}");
    }

    #[test]
    fn fuzz_small_run() {
        let (code, out, _) = run_cli(&[
            "fuzz",
            "--trials",
            "6",
            "--seed",
            "5",
            "--s-max",
            "6",
            "--n-max",
            "3",
            "--odd-walk-samples",
            "10",
            "--format",
            "json",
        ]);
        assert_eq!(code, 0, "{out}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["suite"]["failures"].as_array().unwrap().len(), 0);
        assert_eq!(v["odd_walk_violations"].as_array().unwrap().len(), 0);
    }
}
