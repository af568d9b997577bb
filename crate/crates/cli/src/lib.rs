//! Command-line front end: root combinatorics, symbolic decompositions,
//! counting polynomials, cached character tables and verification suites.

pub mod cache;
pub mod parse;
pub mod report;
pub mod seeds;
pub mod suites;

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};
use unitri_core::charoracle::{degree_histogram, TABLE_CAP};
use unitri_core::ffgroup::{Ambient, GroupError};
use unitri_core::polycount::{n_second, n_third, n_top, Basis, CountExpr, PolyDoc, SecondMode, ThirdVariant};
use unitri_core::rootsys::{all_basic_sets, arm, base_of_set, hook, leg, mu, positive_roots, Root};
use unitri_core::superalg::{constituent_stats, expr_total_degree, BasicSymbol, Normalizer, SuperExpr};

use cache::{default_dir, TableCache, CACHE_ENV};
use seeds::{SeedRecord, SeedsDoc};
use suites::{run_suite, SuiteArgs, SuiteError, Tables, SUITES};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "unitri", version, about = "Exact character combinatorics of unitriangular groups U_n(q)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Top,
    Second,
    Third,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    Q,
    Qm1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    /// Case-(ii) coefficient q(q-1)^2.
    Prose,
    /// Case-(ii) coefficient q(q-1).
    Theorem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Closed,
    Recursion,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalize a product of elementary characters into basic characters.
    Decompose {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        /// Factor list "(i,j):t,...".
        #[arg(long)]
        factors: String,
        /// Add constituent statistics for the configurations where they are known.
        #[arg(long)]
        stats: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Emit a counting polynomial for the top, second or third highest degree.
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, value_enum, default_value = "q")]
        basis: BasisArg,
        #[arg(long, value_enum, default_value = "prose")]
        variant: VariantArg,
        #[arg(long, value_enum, default_value = "closed")]
        mode: ModeArg,
        /// Seeds document produced by the `seeds` command.
        #[arg(long)]
        seeds: Option<PathBuf>,
        /// Evaluate at this field size.
        #[arg(long)]
        eval: Option<u64>,
    },
    /// Run a named verification suite and emit its report.
    Verify {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, env = CACHE_ENV)]
        cache_dir: Option<PathBuf>,
        /// Treat checks skipped for exceeding a cap as a distinct exit status.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Inspect positive roots, hooks and basic sets.
    Roots {
        #[arg(long)]
        n: usize,
        /// Root "i,j" to describe.
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Build (or load from cache) the character table of U_n(q) and print its degree histogram.
    Table {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, env = CACHE_ENV)]
        cache_dir: Option<PathBuf>,
        #[arg(long, default_value_t = TABLE_CAP)]
        cap: u64,
        /// Print the histogram as CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Record the degree counts N_{n,e}(q) of U_n(q) into a seeds document.
    Seeds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, env = CACHE_ENV)]
        cache_dir: Option<PathBuf>,
        #[arg(long, default_value_t = TABLE_CAP)]
        cap: u64,
        /// Seeds document to create or update.
        #[arg(long)]
        output: PathBuf,
    },
}

/// What a command produced: text for stdout and the process exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub msg: String,
}

impl CliError {
    fn usage(msg: impl ToString) -> Self {
        CliError { code: EXIT_USAGE, msg: msg.to_string() }
    }

    fn failure(msg: impl ToString) -> Self {
        CliError { code: EXIT_FAIL, msg: msg.to_string() }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    if let Some(p) = path {
        fs::write(p, text).map_err(|e| CliError::failure(format!("writing {}: {e}", p.display())))?;
    }
    Ok(())
}

fn open_cache(dir: Option<PathBuf>) -> Result<TableCache, CliError> {
    let dir = dir.unwrap_or_else(default_dir);
    TableCache::open(&dir).map_err(CliError::failure)
}

fn parse_root(s: &str) -> Result<Root, CliError> {
    let (i, j) = s.trim().trim_start_matches('(').trim_end_matches(')').split_once(',').ok_or_else(|| CliError::usage("root must be \"i,j\""))?;
    let i = i.trim().parse().map_err(|_| CliError::usage("bad row index"))?;
    let j = j.trim().parse().map_err(|_| CliError::usage("bad column index"))?;
    Ok(Root::new(i, j))
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Decompose { n, q, factors, stats, output } => decompose(n, q, &factors, stats, &output),
        Command::Count { n, which, basis, variant, mode, seeds, eval } => count(n, which, basis, variant, mode, seeds, eval),
        Command::Verify { suite, n, q, cache_dir, strict, output } => verify(&suite, n, q, cache_dir, strict, &output),
        Command::Roots { n, alpha } => roots(n, alpha),
        Command::Table { n, q, cache_dir, cap, csv } => table(n, q, cache_dir, cap, csv),
        Command::Seeds { n, q, cache_dir, cap, output } => seeds(n, q, cache_dir, cap, &output),
    }
}

fn decompose(n: usize, q: u64, text: &str, stats: bool, output: &Option<PathBuf>) -> Result<Outcome, CliError> {
    let factors = parse::parse_factors(text).map_err(|e| CliError::usage(format!("--factors {e}")))?;
    for f in &factors {
        BasicSymbol::new(n, q, vec![*f]).map_err(CliError::usage)?;
    }
    let mut norm = Normalizer::new(n, q).map_err(CliError::usage)?;
    let expr = factors.iter().try_fold(SuperExpr::one(n, q), |acc, f| {
        norm.tensor(&acc, &SuperExpr::from_symbol(&BasicSymbol::new(n, q, vec![*f])?))
    });
    let expr = expr.map_err(CliError::failure)?;
    let input_exp: usize = factors.iter().map(|f| f.root.height()).sum();
    let input_degree = BigInt::from(q).pow(input_exp as u32);
    let output_degree = expr_total_degree(&expr).eval_u64(q);
    let mut doc = json!({
        "schema": 1,
        "n": n,
        "q": q,
        "factors": text,
        "terms": expr.terms().map(|(s, c)| json!({ "symbol": s.to_string(), "coeff": c.to_string() })).collect::<Vec<_>>(),
        "expr": expr.to_doc(),
        "degree_check": {
            "input": input_degree.to_string(),
            "output": output_degree.to_string(),
            "ok": input_degree == output_degree,
        },
    });
    if stats {
        let per_term: Vec<Value> = expr
            .terms()
            .map(|(s, _)| match constituent_stats(&s) {
                Ok(st) => json!({ "symbol": s.to_string(), "constituents": st.entries.iter().map(|e| json!({
                    "exponent": e.exponent,
                    "count": e.count.to_string(),
                    "multiplicity": e.multiplicity.to_string(),
                })).collect::<Vec<_>>() }),
                Err(e) => json!({ "symbol": s.to_string(), "unsupported": e.to_string() }),
            })
            .collect();
        doc["stats"] = Value::Array(per_term);
    }
    let text = pretty(&doc);
    write_output(output, &text)?;
    let code = if input_degree == output_degree { EXIT_PASS } else { EXIT_FAIL };
    Ok(Outcome { stdout: text, code })
}

fn count_doc(e: &CountExpr, basis: Basis) -> Value {
    json!({
        "constant": PolyDoc::new(&e.constant, basis),
        "seeds": e.seeds.iter().map(|(&(k, ex), c)| json!({ "n": k, "e": ex, "coeff": PolyDoc::new(c, basis) })).collect::<Vec<_>>(),
        "display": e.to_string(),
    })
}

fn count(
    n: usize,
    which: Which,
    basis: BasisArg,
    variant: VariantArg,
    mode: ModeArg,
    seeds: Option<PathBuf>,
    eval: Option<u64>,
) -> Result<Outcome, CliError> {
    let basis = match basis {
        BasisArg::Q => Basis::Q,
        BasisArg::Qm1 => Basis::QMinus1,
    };
    let variant = match variant {
        VariantArg::Prose => ThirdVariant::Prose,
        VariantArg::Theorem => ThirdVariant::Theorem,
    };
    let mode = match mode {
        ModeArg::Closed => SecondMode::Closed,
        ModeArg::Recursion => SecondMode::Recursion,
    };
    let table = match &seeds {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::usage(format!("reading {}: {e}", p.display())))?;
            let doc: SeedsDoc = serde_json::from_str(&text).map_err(|e| CliError::usage(format!("seeds document: {e}")))?;
            doc.to_table().map_err(CliError::usage)?
        }
        None => Default::default(),
    };
    if n == 0 {
        return Err(CliError::usage("n must be positive"));
    }
    let expr = match which {
        Which::Top => CountExpr::poly(n_top(n)),
        Which::Second => CountExpr::poly(n_second(n, mode).map_err(CliError::usage)?),
        Which::Third => n_third(n, &table, variant).map_err(CliError::usage)?,
    };
    let mut doc = json!({
        "schema": 1,
        "n": n,
        "which": format!("{which:?}").to_lowercase(),
        "exponent": mu(n) as i64 - match which { Which::Top => 0, Which::Second => 1, Which::Third => 2 },
        "count": count_doc(&expr, basis),
    });
    if let Some(q0) = eval {
        Ambient::new(2, q0).map_err(CliError::usage)?;
        let v = expr.eval(q0, &table).map_err(CliError::usage)?;
        doc["eval"] = json!({ "q": q0, "value": v.to_string() });
    }
    Ok(Outcome { stdout: pretty(&doc), code: EXIT_PASS })
}

fn verify(
    suite: &str,
    n: usize,
    q: u64,
    cache_dir: Option<PathBuf>,
    strict: bool,
    output: &Option<PathBuf>,
) -> Result<Outcome, CliError> {
    let cache = open_cache(cache_dir)?;
    let tables = Tables::cached(&cache, TABLE_CAP);
    let report = match run_suite(suite, SuiteArgs { n, q }, &tables) {
        Ok(r) => r,
        Err(e @ (SuiteError::UnknownSuite(_) | SuiteError::Rank { .. } | SuiteError::Group(GroupError::UnsupportedField(_)))) => {
            return Err(CliError::usage(e))
        }
        Err(e) => return Err(CliError::failure(e)),
    };
    let text = serde_json::to_string_pretty(&report).expect("reports serialize") + "\n";
    write_output(output, &text)?;
    let code = if report.failed() {
        EXIT_FAIL
    } else if strict && report.skipped() {
        EXIT_CAP
    } else {
        EXIT_PASS
    };
    Ok(Outcome { stdout: text, code })
}

fn roots(n: usize, alpha: Option<String>) -> Result<Outcome, CliError> {
    if !(2..=unitri_core::ffgroup::MAX_N).contains(&n) {
        return Err(CliError::usage(format!("n must lie in 2..={}", unitri_core::ffgroup::MAX_N)));
    }
    let pos = positive_roots(n);
    let mut doc = json!({
        "schema": 1,
        "n": n,
        "positive_roots": pos.iter().map(Root::to_string).collect::<Vec<_>>(),
        "basic_sets": all_basic_sets(n).len() + 1,
        "mu": mu(n),
    });
    if let Some(a) = alpha {
        let a = parse_root(&a)?;
        let names = |s: unitri_core::rootsys::RootSet| s.iter().map(Root::to_string).collect::<Vec<_>>();
        let desc = (|| -> Result<Value, unitri_core::rootsys::RootError> {
            Ok(json!({
                "root": a.to_string(),
                "height": a.height(),
                "arm": names(arm(n, a)?),
                "leg": names(leg(n, a)?),
                "hook": names(hook(n, a)?),
                "base": names(base_of_set(n, [&a])?),
            }))
        })()
        .map_err(CliError::usage)?;
        doc["alpha"] = desc;
    }
    Ok(Outcome { stdout: pretty(&doc), code: EXIT_PASS })
}

fn cap_or_fail(e: impl ToString, capped: bool) -> CliError {
    CliError { code: if capped { EXIT_CAP } else { EXIT_FAIL }, msg: e.to_string() }
}

fn full_table(
    n: usize,
    q: u64,
    cache_dir: Option<PathBuf>,
    cap: u64,
) -> Result<unitri_core::charoracle::CharTable, CliError> {
    let g = Ambient::new(n, q).map_err(CliError::usage)?.full_group();
    if let Err(e) = g.check_cap(cap) {
        return Err(cap_or_fail(e, true));
    }
    let cache = open_cache(cache_dir)?;
    cache.table(&g, cap).map(|(t, _)| t).map_err(CliError::failure)
}

fn table(n: usize, q: u64, cache_dir: Option<PathBuf>, cap: u64, csv: bool) -> Result<Outcome, CliError> {
    let t = full_table(n, q, cache_dir, cap)?;
    let h = degree_histogram(&t, q).map_err(CliError::failure)?;
    let stdout = if csv {
        let mut s = String::from("e,count\n");
        for (e, c) in &h {
            s.push_str(&format!("{e},{c}\n"));
        }
        s
    } else {
        pretty(&json!({
            "schema": 1,
            "n": n,
            "q": q,
            "classes": t.len(),
            "histogram": h.iter().map(|(e, c)| (e.to_string(), json!(c))).collect::<serde_json::Map<_, _>>(),
        }))
    };
    Ok(Outcome { stdout, code: EXIT_PASS })
}

fn seeds(n: usize, q: u64, cache_dir: Option<PathBuf>, cap: u64, output: &PathBuf) -> Result<Outcome, CliError> {
    let t = full_table(n, q, cache_dir, cap)?;
    let h = degree_histogram(&t, q).map_err(CliError::failure)?;
    let mut doc = match fs::read_to_string(output) {
        Ok(text) => serde_json::from_str(&text).map_err(|e| CliError::usage(format!("existing seeds document: {e}")))?,
        Err(_) => SeedsDoc::default(),
    };
    for e in 0..=mu(n) {
        doc.record(SeedRecord {
            n,
            e,
            q,
            value: h.get(&(e as u32)).copied().unwrap_or(0).to_string(),
            source: format!("character table of U_{n}({q})"),
        });
    }
    doc.to_table().map_err(CliError::failure)?;
    let text = serde_json::to_string_pretty(&doc).expect("seeds serialize") + "\n";
    fs::write(output, &text).map_err(|e| CliError::failure(format!("writing {}: {e}", output.display())))?;
    Ok(Outcome { stdout: text, code: EXIT_PASS })
}
