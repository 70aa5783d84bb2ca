//! Command-line front end. Exit codes: 0 success, 1 verification mismatch,
//! 2 usage or internal error.

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::arith::ADMISSIBLE_D;
use crate::curves::{enumerate_mordell_curves, enumerate_p7_curves, enumerate_quartic_curves, P7Family, SearchBounds};
use crate::error::{Error, Result};
use crate::fib_lucas::{cohn_classify, CohnKind};
use crate::lehmer::{lehmer_number_any, LehmerInstance};
use crate::oracle::{brute_force_search, verify_raw, SearchBox};
use crate::quad_class::class_number;
use crate::solver::{
    solve_master, solve_multiple_of_4, solve_p3, solve_p5, solve_p7, solve_p_gt7, CaseTag,
    Conclusion, EliminationReport, ReportDetails, SolverConfig, DEFAULT_P5_KMAX,
};
use crate::tables::{corrected_golden_set, golden_rows};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "lrn", version, about = "Solve x^2 + 5^a 13^b 17^c = 2^m y^n")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Line-delimited JSON output.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every row of the embedded solution tables.
    VerifyTables {
        /// Treat known errata as failures.
        #[arg(long)]
        strict: bool,
    },
    /// Run the case analysis.
    Solve(SolveArgs),
    /// Exhaustive search over a bounded box.
    Brute(BruteArgs),
    /// Diagnostics for the building blocks.
    Diag {
        #[command(subcommand)]
        subject: DiagSubject,
    },
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(3..))]
    pub nmax: u32,
    /// Run a single branch: quartic, p3, p5, p7 or pgt7.
    #[arg(long)]
    pub case: Option<CaseTag>,
    #[arg(long, default_value_t = 2)]
    pub denom_bound: u32,
    #[arg(long, default_value_t = 10_000)]
    pub numer_bound: u64,
    /// Largest prime for the p > 7 certificates (default: max(nmax, 11)).
    #[arg(long)]
    pub pmax: Option<u64>,
    /// Skip checking the table rows against their predicted curve points.
    #[arg(long)]
    pub no_verify: bool,
}

#[derive(Debug, Args)]
pub struct BruteArgs {
    /// Exponents to search (repeatable).
    #[arg(long = "n", required = true, value_parser = clap::value_parser!(u32).range(3..))]
    pub n: Vec<u32>,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub ymax: u64,
    #[arg(long, default_value_t = 10)]
    pub amax: u32,
    #[arg(long, default_value_t = 4)]
    pub bmax: u32,
    #[arg(long, default_value_t = 3)]
    pub cmax: u32,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(0..=126))]
    pub mmax: u32,
}

#[derive(Debug, Subcommand)]
pub enum DiagSubject {
    /// h(-d) for the eight d values that occur.
    ClassNumber,
    /// One Lehmer number.
    Lehmer {
        #[arg(long)]
        u: u64,
        #[arg(long)]
        v: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
    },
    /// Fibonacci and Lucas squares and twice-squares.
    Cohn {
        #[arg(long, default_value_t = 60)]
        limit: u32,
    },
    /// Sizes of the curve families.
    Curves,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = if code == EXIT_OK { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match run(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    if let Some(n) = cli.threads {
        // a pool can only be installed once per process; later calls keep the first
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let io = |e: std::io::Error| Error::InvalidArgument(format!("output: {e}"));
    match &cli.command {
        Command::VerifyTables { strict } => verify_tables(cli.json, *strict, out).map_err(io),
        Command::Solve(a) => solve(cli.json, a, out),
        Command::Brute(a) => brute(cli.json, a, out),
        Command::Diag { subject } => diag(cli.json, subject, out),
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, rec: &T) -> std::io::Result<()> {
    let line = serde_json::to_string(rec).expect("records serialize");
    writeln!(out, "{line}")
}

fn verify_tables(json: bool, strict: bool, out: &mut dyn Write) -> std::io::Result<i32> {
    let (mut pass, mut errata, mut fail) = (0, 0, 0);
    for r in golden_rows() {
        let v = verify_raw(r.row);
        let status = match (v.valid, r.correction) {
            (true, _) => "PASS",
            (false, Some(c)) if verify_raw(c).valid => "ERRATUM",
            _ => "FAIL",
        };
        match status {
            "PASS" => pass += 1,
            "ERRATUM" => errata += 1,
            _ => fail += 1,
        }
        let (x, y, a, b, c, m, n) = r.row;
        if json {
            let mut rec = json!({
                "table": r.table.name(), "row": r.index, "status": status,
                "x": x, "y": y, "a": a, "b": b, "c": c, "m": m, "n": n,
            });
            if let Some(d) = v.diagnostic {
                rec["diagnostic"] = json!(d.to_string());
            }
            if r.is_erratum() {
                rec["corrected"] = json!(r.corrected());
            }
            emit(out, &rec)?;
        } else {
            write!(out, "{status:<8} {:>3} #{:<2} ({x}, {y}, {a}, {b}, {c}, {m}, {n})", r.table.name(), r.index)?;
            if status != "PASS" {
                if let Some(d) = v.diagnostic {
                    write!(out, "  {d}")?;
                }
                if r.correction.is_some() {
                    write!(out, "  corrected: {}", r.corrected())?;
                }
            }
            writeln!(out)?;
        }
    }
    if !json {
        writeln!(out, "{pass} PASS, {errata} ERRATUM, {fail} FAIL")?;
    }
    let bad = fail > 0 || (strict && errata > 0);
    Ok(if bad { EXIT_MISMATCH } else { EXIT_OK })
}

#[derive(Serialize)]
struct ReportSummary<'a> {
    case: &'a str,
    conclusion: &'a str,
    solutions: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    detail: Vec<String>,
}

fn summarize(r: &EliminationReport) -> ReportSummary<'_> {
    let conclusion = match r.conclusion {
        Conclusion::Solutions(_) => "solutions",
        Conclusion::NoSolutions => "no solutions",
        Conclusion::Contradiction(_) => "contradiction",
    };
    let mut detail = Vec::new();
    match &r.details {
        ReportDetails::CurveSweep { curves, bounds, hits, verified } => {
            detail.push(format!(
                "{curves} curves, denominator exponents <= {}, numerators <= {}",
                bounds.denom_bound, bounds.numer_bound
            ));
            detail.push(format!("{} points found", hits.len()));
            if !verified.is_empty() {
                let ok = verified.iter().filter(|v| v.ok()).count();
                detail.push(format!("{ok}/{} expected points verified", verified.len()));
            }
        }
        ReportDetails::FibonacciLucas { analysis, rejected_equations } => {
            detail.push(format!("{} parameter matches", analysis.entries.len()));
            for e in rejected_equations {
                detail.push(format!("rejected: {e}"));
            }
        }
        ReportDetails::Cubic { defective_checks, d_restriction, families, .. } => {
            let unrealizable = defective_checks.iter().filter(|c| !c.realizable).count();
            detail.push(format!("defective pairs unrealizable: {unrealizable}/{}", defective_checks.len()));
            detail.push(format!("d restricted to {d_restriction:?}"));
            for f in families {
                detail.push(format!("{}: {} curves, {} points", f.family.name(), f.curves, f.hits.len()));
            }
        }
        ReportDetails::Certificates(certs) => {
            let ok = certs.iter().filter(|c| c.verify()).count();
            let top = certs.last().map_or(0, |c| c.p);
            detail.push(format!("{ok}/{} certificates verified, primes 11..={top}", certs.len()));
        }
    }
    detail.extend(r.notes.iter().cloned());
    ReportSummary { case: r.case.name(), conclusion, solutions: r.solutions().len(), detail }
}

fn solve(json: bool, a: &SolveArgs, out: &mut dyn Write) -> Result<i32> {
    let bounds = SearchBounds { denom_bound: a.denom_bound, numer_bound: a.numer_bound };
    let verify = if a.no_verify { Vec::new() } else { corrected_golden_set() };
    let pmax = a.pmax.unwrap_or(a.nmax as u64).max(11);
    let (solutions, reports) = match a.case {
        None => {
            let cfg = SolverConfig { nmax: a.nmax, bounds, pmax, p5_kmax: DEFAULT_P5_KMAX, verify };
            let res = solve_master(&cfg)?;
            (res.solutions, res.reports)
        }
        Some(case) => {
            let r = match case {
                CaseTag::Quartic => solve_multiple_of_4(bounds, a.nmax / 4, &verify),
                CaseTag::P3 => solve_p3(bounds, &verify),
                CaseTag::P5 => solve_p5(DEFAULT_P5_KMAX),
                CaseTag::P7 => solve_p7(bounds),
                CaseTag::PGt7 => solve_p_gt7(pmax)?,
            };
            (r.solutions().to_vec(), vec![r])
        }
    };
    let io = |e: std::io::Error| Error::InvalidArgument(format!("output: {e}"));
    for s in &solutions {
        if json {
            emit(out, s).map_err(io)?;
        } else {
            writeln!(out, "{s}").map_err(io)?;
        }
    }
    let mut contradiction = false;
    for r in &reports {
        contradiction |= matches!(r.conclusion, Conclusion::Contradiction(_));
        let s = summarize(r);
        if json {
            emit(out, &json!({ "report": s })).map_err(io)?;
        } else {
            writeln!(out, "[{}] {} ({} solutions)", s.case, s.conclusion, s.solutions).map_err(io)?;
            for d in &s.detail {
                writeln!(out, "    {d}").map_err(io)?;
            }
        }
    }
    Ok(if contradiction { EXIT_MISMATCH } else { EXIT_OK })
}

fn brute(json: bool, a: &BruteArgs, out: &mut dyn Write) -> Result<i32> {
    let b = SearchBox::new(a.amax, a.bmax, a.cmax, a.mmax, a.n.iter().copied(), a.ymax)?;
    let found = brute_force_search(&b)?;
    let io = |e: std::io::Error| Error::InvalidArgument(format!("output: {e}"));
    for t in &found {
        if json {
            emit(out, t).map_err(io)?;
        } else {
            writeln!(out, "{t}").map_err(io)?;
        }
    }
    if !json {
        writeln!(out, "{} tuples", found.len()).map_err(io)?;
    }
    Ok(EXIT_OK)
}

fn diag(json: bool, subject: &DiagSubject, out: &mut dyn Write) -> Result<i32> {
    let io = |e: std::io::Error| Error::InvalidArgument(format!("output: {e}"));
    let mut line = |rec: serde_json::Value, text: String| -> Result<()> {
        if json {
            emit(out, &rec).map_err(io)
        } else {
            writeln!(out, "{text}").map_err(io)
        }
    };
    match subject {
        DiagSubject::ClassNumber => {
            for d in ADMISSIBLE_D {
                let h = class_number(d)?;
                line(json!({ "d": d, "h": h }), format!("h(-{d}) = {h}"))?;
            }
        }
        DiagSubject::Lehmer { u, v, d, m, n } => {
            let inst = LehmerInstance::new(*u, *v, *d, *m)?;
            let l = lehmer_number_any(&inst, *n)?;
            line(json!({ "n": n, "value": l.to_string() }), l.to_string())?;
        }
        DiagSubject::Cohn { limit } => {
            for kind in CohnKind::ALL {
                let idx: Vec<u32> = cohn_classify(kind, *limit).into_iter().map(|(k, _)| k).collect();
                line(json!({ "kind": kind.to_string(), "indices": idx }), format!("{kind}: {idx:?}"))?;
            }
        }
        DiagSubject::Curves => {
            let mut counts = vec![
                ("quartic".to_string(), enumerate_quartic_curves().len()),
                ("mordell".to_string(), enumerate_mordell_curves().len()),
            ];
            for f in P7Family::ALL {
                counts.push((format!("p7 {}", f.name()), enumerate_p7_curves(f).len()));
            }
            for (name, c) in counts {
                line(json!({ "family": name, "curves": c }), format!("{name}: {c}"))?;
            }
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["lrn"];
        full.extend_from_slice(args);
        let code = run_from(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap() + &String::from_utf8(err).unwrap())
    }

    #[test]
    fn verify_tables_reports_the_erratum() {
        let (code, text) = run_args(&["verify-tables"]);
        assert_eq!(code, EXIT_OK);
        assert!(text.contains("27 PASS, 1 ERRATUM, 0 FAIL"));
        assert!(text.contains("corrected: (7, 33, 2, 2, 1, 1, 3)"));
        assert_eq!(run_args(&["verify-tables", "--strict"]).0, EXIT_MISMATCH);
    }

    #[test]
    fn verify_tables_json_is_one_record_per_row() {
        let (_, text) = run_args(&["verify-tables", "--json"]);
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 28);
        for l in lines {
            let v: serde_json::Value = serde_json::from_str(l).unwrap();
            assert!(v["status"] == "PASS" || v["status"] == "ERRATUM");
        }
    }

    #[test]
    fn brute_examples() {
        let (code, text) = run_args(&["brute", "--n", "4", "--ymax", "30"]);
        assert_eq!(code, EXIT_OK);
        assert!(text.contains("(8, 3, 0, 0, 1, 0, 4)"));
        let (_, text) = run_args(&["brute", "--n", "3", "--ymax", "200", "--json"]);
        let first = text.lines().next().unwrap();
        assert_eq!(first, r#"{"x":1,"y":1,"a":0,"b":0,"c":0,"m":1,"n":3}"#);
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_args(&["brute", "--n", "2"]).0, EXIT_ERROR);
        assert_eq!(run_args(&["solve", "--case", "p9"]).0, EXIT_ERROR);
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_ERROR);
        assert_eq!(run_args(&["diag", "lehmer", "--u", "2", "--v", "1", "--d", "1", "--m", "2", "--n", "3"]).0, EXIT_ERROR);
    }

    #[test]
    fn diag_examples() {
        let (_, text) = run_args(&["diag", "lehmer", "--u", "3", "--v", "1", "--d", "1", "--m", "1", "--n", "3"]);
        assert_eq!(text.trim(), "13");
        let (_, text) = run_args(&["diag", "curves"]);
        assert!(text.contains("quartic: 128") && text.contains("mordell: 432"));
        let (_, text) = run_args(&["diag", "class-number", "--json"]);
        assert_eq!(text.lines().count(), 8);
    }

    #[test]
    fn solve_p5_prints_rejections() {
        let (code, text) = run_args(&["solve", "--case", "p5"]);
        assert!(text.contains("rejected: x^2 + 9 = 2*5^5"));
        assert!(text.contains("contradiction"));
        assert_eq!(code, EXIT_MISMATCH);
    }
}
