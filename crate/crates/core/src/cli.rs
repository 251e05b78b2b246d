//! The `qhopf` command line: argument definitions, dispatch and the JSON
//! report. Exit codes: 0 when every check passes, 1 on a failed check, 2 on
//! usage or input errors.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::builders::{
    cocycle_abelian, dpr_double, function_algebra, group_algebra, sweedler, Cocycle3, FiniteAbelianGroup,
};
use crate::datum::{QuasiHopf, QuasiHopfDatum};
use crate::derived::{big_f, check_f_compat, random_invertible};
use crate::dsl::{self, Env, Value};
use crate::error::{Error, Result};
use crate::quasitriangular::{check_drinfeld_props, check_u_tilde, drinfeld_u};
use crate::report::{Check, CheckReport, Status, Witness};
use crate::ribbon::{self, rtwist_elements, Provenance, Strategy};
use crate::scalar::Field;
use crate::tensor::{SparseTensor, TensorJson};
use crate::twisting::{self, random_twist};
use crate::verify::{verify, Level};

/// Seed used when neither a flag nor `QHOPF_SEED` gives one.
pub const DEFAULT_SEED: u64 = 0;

/// The identity corpus shipped with the crate.
pub const SHIPPED_CORPUS: &str = include_str!("../corpus/identities.txt");

#[derive(Parser, Debug)]
#[command(name = "qhopf", version, about = "Exact checks for finite-dimensional quasi-Hopf algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for independent checks. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify the axioms up to a layer (default: the highest the file has).
    Verify {
        file: PathBuf,
        #[arg(long)]
        level: Option<Level>,
    },
    /// Print a derived element as a JSON tensor.
    Derive {
        file: PathBuf,
        #[arg(long, value_enum)]
        element: Element,
    },
    /// Twist by a seeded random twist and verify the result.
    Twist {
        file: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Write the twisted datum here.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Search for or check ribbon elements.
    #[command(subcommand)]
    Ribbon(RibbonCmd),
    /// Build an example datum.
    Example(ExampleArgs),
    /// Identity checks.
    #[command(subcommand)]
    Check(CheckCmd),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Element {
    Gamma,
    Delta,
    #[value(name = "F")]
    F,
    #[value(name = "Finv")]
    Finv,
    U,
    Uhat,
    Ucheck,
    Utilde,
}

#[derive(Subcommand, Debug)]
pub enum RibbonCmd {
    /// Exhaustive search for ribbon elements.
    Find {
        file: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
    },
    /// Check the file's `v` against the ribbon axioms, the lemma and the theorem.
    Check { file: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Auto,
    Blocks,
    Enumerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Dpr,
    Function,
    Group,
    Sweedler,
}

#[derive(Args, Debug)]
pub struct ExampleArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    /// Finite abelian group such as Z2, Z3, Z2xZ2.
    #[arg(long, default_value = "Z2")]
    pub group: String,
    /// Cocycle exponent, one per invariant factor or a single value for all.
    #[arg(long, default_value = "0")]
    pub q: String,
    /// `p:<prime>` or `Q`.
    #[arg(long, default_value = "p:7")]
    pub field: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum CheckCmd {
    /// Evaluate one DSL statement.
    Expr {
        file: PathBuf,
        #[arg(long)]
        expr: String,
        /// Bind `T` to the random twist with this seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run an identity corpus (default: the shipped one).
    Corpus {
        file: PathBuf,
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Twist identities for a range of seeds `A..B` (exclusive end).
    TwistProps {
        file: PathBuf,
        #[arg(long, default_value = "0..10")]
        seeds: String,
    },
    /// The ribbon lemma and main theorem for the file's `v`.
    RibbonTheorem { file: PathBuf },
}

/// The machine-readable report.
#[derive(Debug, Serialize)]
pub struct Report {
    pub datum: String,
    pub level: String,
    pub checks: Vec<Check>,
    pub elapsed_ms: u128,
}

impl Report {
    fn new(q: &QuasiHopf, level: Level, rep: CheckReport, start: Instant) -> Report {
        Report {
            datum: q.content_hash().to_string(),
            level: level.to_string(),
            checks: rep.checks,
            elapsed_ms: start.elapsed().as_millis(),
        }
    }
}

/// The seed from a flag, else `QHOPF_SEED`, else [`DEFAULT_SEED`].
pub fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("QHOPF_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Precondition(format!("QHOPF_SEED={v:?} is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// `p:7`, `F7`, `7` or `Q`.
pub fn parse_field(s: &str) -> Result<Field> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("q") {
        return Ok(Field::Rational);
    }
    let digits = t.strip_prefix("p:").or_else(|| t.strip_prefix('F')).unwrap_or(t);
    let p = digits
        .parse::<u64>()
        .map_err(|_| Error::Precondition(format!("cannot parse field {s:?}")))?;
    Field::prime(p)
}

/// `A..B` with exclusive end.
pub fn parse_seed_range(s: &str) -> Result<std::ops::Range<u64>> {
    let bad = || Error::Precondition(format!("seed range {s:?} is not of the form A..B"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let (a, b) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a > b {
        return Err(bad());
    }
    Ok(a..b)
}

/// Builds the datum an `example` invocation describes.
pub fn build_example(args: &ExampleArgs) -> Result<QuasiHopfDatum> {
    if args.kind == Kind::Sweedler {
        return sweedler();
    }
    let field = parse_field(&args.field)?;
    let group = FiniteAbelianGroup::parse(&args.group)?;
    let qs = args
        .q
        .split(',')
        .map(|x| x.trim().parse::<u64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::Precondition(format!("cannot parse --q {:?}", args.q)))?;
    let qs = match qs.len() {
        1 => vec![qs[0]; group.factors().len()],
        _ => qs,
    };
    let omega = if qs.iter().all(|q| *q == 0) {
        Cocycle3::trivial(group.clone(), field)
    } else {
        cocycle_abelian(&group, &qs, field)?
    };
    match args.kind {
        Kind::Dpr => dpr_double(&omega),
        Kind::Function => function_algebra(&omega),
        Kind::Group => {
            let mut d = group_algebra(&group.to_group(), field)?;
            d.meta.name = Some(format!("K[{}]", group.name()));
            Ok(d)
        }
        Kind::Sweedler => unreachable!(),
    }
}

fn load(path: &Path) -> Result<QuasiHopf> {
    QuasiHopf::new(QuasiHopfDatum::load_file(path)?)
}

fn tensor_json(t: &SparseTensor) -> String {
    serde_json::to_string_pretty(&TensorJson::from_tensor(t)).expect("tensor serializes")
}

/// What a command produced: a check report, or plain output.
enum Outcome {
    Report(Report),
    Text(String),
    /// Pre-rendered JSON with its pass/fail state.
    Doc { text: String, failed: bool },
}

fn emit(out: &mut dyn std::io::Write, format: Format, outcome: &Outcome) -> std::io::Result<()> {
    match outcome {
        Outcome::Text(s) | Outcome::Doc { text: s, .. } => writeln!(out, "{s}"),
        Outcome::Report(r) => match format {
            Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(r).expect("report serializes")),
            Format::Text => {
                writeln!(out, "datum {}  level {}  {} ms", r.datum, r.level, r.elapsed_ms)?;
                let rep = CheckReport { checks: r.checks.clone() };
                write!(out, "{}", rep.render_text())
            }
        },
    }
}

/// Spreads `items` over `jobs` scoped threads, keeping input order.
fn parallel_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let jobs = jobs.clamp(1, items.len().max(1));
    let chunk = items.len().div_ceil(jobs).max(1);
    let f = &f;
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|c| s.spawn(move || c.iter().map(f).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

fn run_command(cli: &Cli) -> Result<Outcome> {
    let start = Instant::now();
    Ok(match &cli.command {
        Command::Verify { file, level } => {
            let q = load(file)?;
            let level = level.unwrap_or_else(|| Level::highest(&q));
            let rep = verify(&q, level);
            Outcome::Report(Report::new(&q, level, rep, start))
        }
        Command::Derive { file, element } => {
            let q = load(file)?;
            let t = match element {
                Element::Gamma => big_f(&q)?.gamma.clone(),
                Element::Delta => big_f(&q)?.delta.clone(),
                Element::F => big_f(&q)?.f.clone(),
                Element::Finv => big_f(&q)?.f_inv.clone(),
                Element::U => drinfeld_u(&q)?.u.clone(),
                Element::Utilde => drinfeld_u(&q)?
                    .u_tilde
                    .clone()
                    .ok_or_else(|| Error::InternalInconsistency("ũ missing".into()))?,
                Element::Uhat => rtwist_elements(&q)?.u_hat.clone(),
                Element::Ucheck => rtwist_elements(&q)?.u_check.clone(),
            };
            Outcome::Text(tensor_json(&t))
        }
        Command::Twist { file, seed, emit } => {
            let q = load(file)?;
            let tw = random_twist(&q, resolve_seed(*seed)?)?;
            let qt = twisting::twist(&q, &tw)?;
            let level = Level::highest(&q).min(Level::Qt);
            let mut rep = verify(&qt, level);
            rep.extend(twisting::check_twist_elements(&q, &tw));
            if q.datum().r.is_some() {
                rep.extend(twisting::check_u_twist_invariance(&q, &tw));
            }
            if let Some(path) = emit {
                let mut d = qt.datum().clone();
                d.v = None;
                std::fs::write(path, d.save()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            }
            Outcome::Report(Report::new(&qt, level, rep, start))
        }
        Command::Ribbon(RibbonCmd::Find { file, budget, strategy }) => {
            let q = load(file)?;
            let strategy = match strategy {
                StrategyArg::Auto => Strategy::Auto,
                StrategyArg::Blocks => Strategy::Blocks,
                StrategyArg::Enumerate => Strategy::Enumerate,
            };
            let found = ribbon::find_ribbon(&q, *budget, strategy)?;
            let mut rep = CheckReport::new();
            rep.bool("ribbon.search", !found.candidates.is_empty(), || {
                Witness::note(format!("no ribbon element in {}", found.region))
            });
            for (k, c) in found.candidates.iter().enumerate() {
                let mut r = ribbon::is_ribbon(&q, &c.v);
                r.extend(ribbon::check_ribbon_lemma(&q, &c.v));
                r.extend(ribbon::check_main_theorem(&q, &c.v));
                rep.extend(r.prefixed(&format!("candidate{k}.")));
            }
            let report = Report::new(&q, Level::Ribbon, rep, start);
            if cli.format == Format::Text {
                return Ok(Outcome::Report(report));
            }
            #[derive(Serialize)]
            struct Cand {
                provenance: Provenance,
                v: TensorJson,
            }
            #[derive(Serialize)]
            struct Found<'a> {
                #[serde(flatten)]
                report: &'a Report,
                region: &'a str,
                candidates: Vec<Cand>,
            }
            let doc = Found {
                report: &report,
                region: &found.region,
                candidates: found
                    .candidates
                    .iter()
                    .map(|c| Cand {
                        provenance: c.provenance,
                        v: TensorJson::from_tensor(&c.v),
                    })
                    .collect(),
            };
            Outcome::Doc {
                text: serde_json::to_string_pretty(&doc).expect("report serializes"),
                failed: report.checks.iter().any(|c| c.status == Status::Fail),
            }
        }
        Command::Ribbon(RibbonCmd::Check { file }) => {
            let q = load(file)?;
            Outcome::Report(Report::new(&q, Level::Ribbon, verify(&q, Level::Ribbon), start))
        }
        Command::Example(args) => {
            let d = build_example(args)?;
            let text = d.save();
            match &args.out {
                Some(path) => {
                    std::fs::write(path, &text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                    Outcome::Text(format!("wrote {} ({})", path.display(), d.content_hash()))
                }
                None => Outcome::Text(text),
            }
        }
        Command::Check(CheckCmd::Expr { file, expr, seed }) => {
            let q = load(file)?;
            let stmt = dsl::parse(expr)?;
            let names = stmt.names();
            let uses = |base: [&str; 2], suffix: &str| names.iter().any(|n| base.contains(&n.as_str()) || dsl::split_suffix(n).1 == suffix);
            let seed = resolve_seed(*seed)?;
            let mut env = Env::new(&q);
            if uses(["T", "Tinv"], "_T") {
                env = env.with_twist(random_twist(&q, seed)?);
            }
            if uses(["x", "xinv"], "_x") {
                env = env.with_modifier(random_invertible(&q, seed)?.0)?;
            }
            match dsl::evaluate_stmt(&env, &stmt)? {
                Value::Tensor(t) => Outcome::Text(tensor_json(&t)),
                Value::Verdict { holds, witness } => {
                    let mut rep = CheckReport::new();
                    match witness {
                        Some(w) if !holds => rep.fail(stmt.to_string(), w),
                        _ => rep.pass(stmt.to_string()),
                    }
                    Outcome::Report(Report::new(&q, Level::highest(&q), rep, start))
                }
            }
        }
        Command::Check(CheckCmd::Corpus { file, corpus, seed }) => {
            let q = load(file)?;
            let text = match corpus {
                Some(p) => std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?,
                None => SHIPPED_CORPUS.to_string(),
            };
            // Lines naming T or x are skipped when no twist or modifier can
            // be drawn for this seed.
            let seed = resolve_seed(*seed)?;
            let mut env = Env::new(&q);
            if let Ok(tw) = random_twist(&q, seed) {
                env = env.with_twist(tw);
            }
            if let Ok((x, _)) = random_invertible(&q, seed) {
                env = env.with_modifier(x)?;
            }
            let lines = dsl::run_corpus(&env, &text, cli.jobs)?;
            Outcome::Report(Report::new(&q, Level::highest(&q), dsl::corpus_report(&lines), start))
        }
        Command::Check(CheckCmd::TwistProps { file, seeds }) => {
            let q = load(file)?;
            let seeds: Vec<u64> = parse_seed_range(seeds)?.collect();
            let reports = parallel_map(&seeds, cli.jobs, |&s| {
                let mut rep = CheckReport::new();
                match random_twist(&q, s) {
                    Ok(tw) => {
                        rep.extend(twisting::check_twist_elements(&q, &tw));
                        if q.datum().r.is_some() {
                            rep.extend(twisting::check_u_twist_invariance(&q, &tw));
                        }
                    }
                    Err(e) => rep.fail("twist", Witness::note(e.to_string())),
                }
                rep.prefixed(&format!("seed{s}."))
            });
            let mut rep = CheckReport::new();
            for r in reports {
                rep.extend(r);
            }
            Outcome::Report(Report::new(&q, Level::highest(&q).min(Level::Qt), rep, start))
        }
        Command::Check(CheckCmd::RibbonTheorem { file }) => {
            let q = load(file)?;
            let v = q.v()?.clone();
            let mut rep = check_f_compat(&q);
            rep.extend(check_drinfeld_props(&q));
            rep.extend(check_u_tilde(&q));
            rep.extend(ribbon::check_rtwist_relations(&q));
            rep.extend(ribbon::check_opcop_table(&q));
            rep.extend(ribbon::check_ribbon_lemma(&q, &v));
            rep.extend(ribbon::check_main_theorem(&q, &v));
            Outcome::Report(Report::new(&q, Level::Ribbon, rep, start))
        }
    })
}

/// Runs a parsed command line, writing to the given streams; returns the
/// exit code.
pub fn run(cli: &Cli, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32 {
    match run_command(cli) {
        Ok(outcome) => {
            let code = match &outcome {
                Outcome::Report(r) if r.checks.iter().any(|c| c.status == Status::Fail) => 1,
                Outcome::Doc { failed: true, .. } => 1,
                _ => 0,
            };
            if let Err(e) = emit(out, cli.format, &outcome) {
                let _ = writeln!(err, "qhopf: {e}");
                return 2;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "qhopf: {e}");
            2
        }
    }
}

/// Entry point for the binary: parses `argv`, usage errors exit with 2.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, &mut std::io::stdout(), &mut std::io::stderr()),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fields_and_ranges() {
        assert_eq!(parse_field("p:7").unwrap(), Field::prime(7).unwrap());
        assert_eq!(parse_field("Q").unwrap(), Field::Rational);
        assert!(parse_field("p:8").is_err());
        assert_eq!(parse_seed_range("3..7").unwrap(), 3..7);
        assert!(parse_seed_range("7..3").is_err());
        assert!(parse_seed_range("7").is_err());
    }

    #[test]
    fn seed_flag_wins() {
        assert_eq!(resolve_seed(Some(9)).unwrap(), 9);
    }

    #[test]
    fn level_is_a_value() {
        let cli = Cli::try_parse_from(["qhopf", "verify", "d.json", "--level", "qt"]).unwrap();
        match cli.command {
            Command::Verify { level, .. } => assert_eq!(level, Some(Level::Qt)),
            other => panic!("{other:?}"),
        }
        assert!(Cli::try_parse_from(["qhopf", "verify", "d.json", "--level", "nope"]).is_err());
    }
}
