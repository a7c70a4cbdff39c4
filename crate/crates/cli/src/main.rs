//! `operad`: Gröbner bases, dimension tables, property suites and order
//! traces for shuffle operads.
//!
//! Exit status: 0 on success, 1 when a computation finished with a negative
//! verdict (surviving S-polynomials, dimension mismatch, failed law), 2 on
//! parse or configuration errors.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use operad_core::monoid::{
    check_ordered_monoid, sample_free_word, sample_qm, FreeMonoid, OrderedMonoid,
};
use operad_core::word::check_ordered_operad;
use operad_core::{
    buchberger, builtin, check_admissible, check_morphism_laws, check_path_injectivity,
    count_normal_forms, ideal_dimension_oracle, parse_polynomial, parse_tree, reduce,
    resolve_order, Generator, GeneratorAssignment, GroebnerReport, LawReport, MonomialOrder,
    OperadPresentation, Qm, QmElement, QmOrder, PATHLEX_ORDER, POISSON_ORDER,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const DEFAULT_SEED: u64 = 7;

#[derive(Parser)]
#[command(name = "operad", version, about = "Gröbner bases for shuffle operads")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run bounded Buchberger completion on a presentation.
    Gb {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        common: Common,
        /// Largest overlap arity examined.
        #[arg(long, default_value_t = 4)]
        max_arity: usize,
    },
    /// Normal-form counts next to the linear-algebra oracle, per arity.
    Dims {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 6)]
        max_arity: usize,
    },
    /// Randomized property suites.
    Check {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Monoid for the qm and word-operad suites: qm, qm-reversed-y,
        /// qm-reversed-q, qm-q-first or free.
        #[arg(long, default_value = "qm")]
        monoid: String,
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        /// Largest arity of sampled trees and contexts.
        #[arg(long, default_value_t = 5)]
        max_arity: usize,
    },
    /// Compare two trees and show the images at every stage.
    Compare {
        t1: String,
        t2: String,
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        common: Common,
    },
    /// Reduce a polynomial to normal form modulo the completed basis.
    Normalize {
        polynomial: String,
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        max_arity: usize,
    },
}

#[derive(Args)]
struct Source {
    /// Built-in presentation: com, ass, lie or pois. Default pois.
    #[arg(long, conflicts_with = "file")]
    preset: Option<String>,
    /// Presentation file with `generators:` and `relations:` sections.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct Common {
    /// `poisson-qm`, `pathlex` or an order spec. Default: poisson-qm for
    /// presentations over mu and lam, pathlex otherwise.
    #[arg(long)]
    order: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Qm,
    WordOperad,
    Admissible,
    Morphism,
    All,
}

enum Failure {
    /// Bad input or configuration; exit 2.
    Config(String),
    /// The computation ran and the verdict is negative; exit 1.
    Negative,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Config(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = run(cli.command, &mut out);
    print!("{out}");
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Negative) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, out: &mut String) -> Outcome {
    match command {
        Command::Gb {
            source,
            common,
            max_arity,
        } => cmd_gb(&source, &common, max_arity, out),
        Command::Dims {
            source,
            common,
            max_arity,
        } => cmd_dims(&source, &common, max_arity, out),
        Command::Check {
            suite,
            monoid,
            source,
            common,
            trials,
            max_arity,
        } => cmd_check(suite, &monoid, &source, &common, trials, max_arity, out),
        Command::Compare {
            t1,
            t2,
            source,
            common,
        } => cmd_compare(&t1, &t2, &source, &common, out),
        Command::Normalize {
            polynomial,
            source,
            common,
            max_arity,
        } => cmd_normalize(&polynomial, &source, &common, max_arity, out),
    }
}

fn load(source: &Source) -> Result<OperadPresentation, Failure> {
    match (&source.preset, &source.file) {
        (_, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
            let name = path
                .file_stem()
                .map_or("file".into(), |s| s.to_string_lossy().into_owned());
            Ok(OperadPresentation::parse(&name, &text)?)
        }
        (Some(name), None) => Ok(builtin(name)?),
        (None, None) => Ok(builtin("pois")?),
    }
}

fn order_for(pres: &OperadPresentation, requested: Option<&str>) -> Result<MonomialOrder, Failure> {
    let over_mu_lam = pres
        .generators
        .iter()
        .all(|g| matches!(g.name(), "mu" | "lam") && g.arity() == 2);
    let name = requested.unwrap_or(if over_mu_lam {
        POISSON_ORDER
    } else {
        PATHLEX_ORDER
    });
    let order = resolve_order(name, &pres.generators)?;
    order.covers_all(&pres.generators)?;
    Ok(order)
}

fn check_arity(max_arity: usize, top: Option<usize>) -> Outcome {
    if max_arity < 2 {
        return Err(Failure::Config(format!(
            "--max-arity must be at least 2, got {max_arity}"
        )));
    }
    match top {
        Some(top) if max_arity > top => Err(Failure::Config(format!(
            "--max-arity must be at most {top}, got {max_arity}"
        ))),
        _ => Ok(()),
    }
}

fn emit_json(v: &Value, out: &mut String) {
    out.push_str(&serde_json::to_string_pretty(v).expect("json serializes"));
    out.push('\n');
}

fn cmd_gb(source: &Source, common: &Common, max_arity: usize, out: &mut String) -> Outcome {
    check_arity(max_arity, None)?;
    let pres = load(source)?;
    let order = order_for(&pres, common.order.as_deref())?;
    let mut report = buchberger(&pres.shuffle_relations, &order, max_arity)?;
    // count over the declared generators, which may include unused ones
    report.normal_form_counts = (1..=max_arity)
        .map(|n| count_normal_forms(&report.leading_terms, &pres.generators, n).map(|c| (n, c)))
        .collect::<Result<_, _>>()?;
    match common.format {
        Format::Json => {
            let mut doc = report.to_json(&pres.name);
            doc["seed"] = json!(common.seed);
            emit_json(&doc, out);
        }
        Format::Text => write_gb_text(&pres, &order, &report, out),
    }
    if report.is_groebner_within_bound() {
        Ok(())
    } else {
        Err(Failure::Negative)
    }
}

fn write_gb_text(
    pres: &OperadPresentation,
    order: &MonomialOrder,
    report: &GroebnerReport,
    out: &mut String,
) {
    let _ = writeln!(out, "presentation: {}", pres.name);
    let _ = writeln!(out, "order: {} = {}", order.name(), order.spec());
    let _ = writeln!(
        out,
        "inputs: {} ({} dependent), overlaps processed: {}, above bound: {}",
        report.input_relations.len(),
        report.dependent_inputs,
        report.processed_overlaps,
        report.unchecked_overlaps
    );
    if !report.survivors.is_empty() {
        let _ = writeln!(out, "surviving S-polynomials:");
        for s in &report.survivors {
            let _ = writeln!(out, "  {}", s.display_ordered(order));
        }
    }
    let _ = writeln!(out, "reduced basis ({}):", report.basis.len());
    for g in &report.basis {
        let _ = writeln!(out, "  {}", g.display_ordered(order));
    }
    let counts: Vec<String> = report
        .normal_form_counts
        .iter()
        .map(|(_, c)| c.to_string())
        .collect();
    let _ = writeln!(out, "normal forms by arity: {}", counts.join(", "));
    let _ = writeln!(out, "verdict: {}", report.verdict());
}

fn cmd_dims(source: &Source, common: &Common, max_arity: usize, out: &mut String) -> Outcome {
    check_arity(max_arity, Some(7))?;
    let pres = load(source)?;
    let order = order_for(&pres, common.order.as_deref())?;
    let bound = pres
        .shuffle_relations
        .iter()
        .map(|r| r.arity())
        .fold(max_arity, usize::max);
    let report = buchberger(&pres.shuffle_relations, &order, bound)?;
    let mut rows = Vec::new();
    for n in 1..=max_arity {
        let nf = count_normal_forms(&report.leading_terms, &pres.generators, n)?;
        let oracle = ideal_dimension_oracle(&pres.shuffle_relations, &pres.generators, n)?;
        rows.push((n, nf, oracle));
    }
    let agree = rows.iter().all(|&(_, a, b)| a == b);
    match common.format {
        Format::Json => {
            let doc = json!({
                "schema": 1,
                "presentation": pres.name,
                "order": {"name": order.name(), "spec": order.spec()},
                "max_arity": max_arity,
                "status": report.status,
                "rows": rows.iter().map(|&(arity, nf, oracle)| json!({
                    "arity": arity, "normal_forms": nf, "oracle": oracle, "agree": nf == oracle,
                })).collect::<Vec<_>>(),
                "agree": agree,
            });
            emit_json(&doc, out);
        }
        Format::Text => {
            let _ = writeln!(out, "presentation: {}, order: {}", pres.name, order.name());
            let _ = writeln!(
                out,
                "{:>5}  {:>12}  {:>8}",
                "arity", "normal-forms", "oracle"
            );
            for &(n, nf, oracle) in &rows {
                let flag = if nf == oracle { "" } else { "  MISMATCH" };
                let _ = writeln!(out, "{n:>5}  {nf:>12}  {oracle:>8}{flag}");
            }
            let _ = writeln!(
                out,
                "{}",
                if agree {
                    "all arities agree"
                } else {
                    "mismatch found"
                }
            );
        }
    }
    if agree {
        Ok(())
    } else {
        Err(Failure::Negative)
    }
}

struct SuiteResult {
    name: &'static str,
    detail: String,
    report: LawReport,
}

fn monoid_suites(
    monoid_name: &str,
    trials: usize,
    max_arity: usize,
    want_monoid: bool,
    want_operad: bool,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<SuiteResult>, Failure> {
    fn both<M: OrderedMonoid>(
        m: &M,
        sample: &dyn Fn(&mut ChaCha8Rng) -> M::Element,
        name: &str,
        trials: usize,
        max_arity: usize,
        flags: (bool, bool),
        rng: &mut ChaCha8Rng,
    ) -> Vec<SuiteResult> {
        let mut out = Vec::new();
        if flags.0 {
            out.push(SuiteResult {
                name: "qm",
                detail: format!("ordered monoid {name}"),
                report: check_ordered_monoid(m, sample, trials, rng),
            });
        }
        if flags.1 {
            out.push(SuiteResult {
                name: "word-operad",
                detail: format!("ordered word operad over {name}, arity <= {max_arity}"),
                report: check_ordered_operad(m, sample, trials, max_arity, rng),
            });
        }
        out
    }
    let flags = (want_monoid, want_operad);
    if monoid_name == "free" {
        let free = FreeMonoid::new(&["x", "y"]);
        let sample = |r: &mut ChaCha8Rng| sample_free_word(&free, r, 6);
        return Ok(both(
            &free,
            &sample,
            "free{x,y}",
            trials,
            max_arity,
            flags,
            rng,
        ));
    }
    let variant = QmOrder::from_name(monoid_name)
        .ok_or_else(|| Failure::Config(format!("unknown monoid '{monoid_name}'")))?;
    let qm = Qm::with_order(variant);
    Ok(both(
        &qm,
        &|r| sample_qm(r, 8),
        monoid_name,
        trials,
        max_arity,
        flags,
        rng,
    ))
}

/// ψ for mu/lam, otherwise a seeded random assignment into QM.
fn assignment_for(
    generators: &[Generator],
    rng: &mut ChaCha8Rng,
) -> Result<GeneratorAssignment<QmElement>, Failure> {
    let mut asgn = GeneratorAssignment::new();
    for g in generators {
        let image = match g.name() {
            "mu" if g.arity() == 2 => vec![QmElement::x(); 2],
            "lam" if g.arity() == 2 => vec![QmElement::y(); 2],
            _ => (0..g.arity()).map(|_| sample_qm(rng, 3)).collect(),
        };
        asgn.insert(g, image)?;
    }
    Ok(asgn)
}

fn cmd_check(
    suite: Suite,
    monoid: &str,
    source: &Source,
    common: &Common,
    trials: usize,
    max_arity: usize,
    out: &mut String,
) -> Outcome {
    check_arity(max_arity, Some(7))?;
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let all = suite == Suite::All;
    let mut results = monoid_suites(
        monoid,
        trials,
        max_arity,
        all || suite == Suite::Qm,
        all || suite == Suite::WordOperad,
        &mut rng,
    )?;
    if all || suite == Suite::Admissible || suite == Suite::Morphism {
        let pres = load(source)?;
        if all || suite == Suite::Admissible {
            let order = order_for(&pres, common.order.as_deref())?;
            let report =
                check_admissible(&order, &pres.generators, trials, max_arity.max(3), &mut rng)?;
            results.push(SuiteResult {
                name: "admissible",
                detail: format!("{} on {}", order.spec(), pres.name),
                report,
            });
        }
        if all || suite == Suite::Morphism {
            let asgn = assignment_for(&pres.generators, &mut rng)?;
            let report = check_morphism_laws(
                &Qm::default(),
                &asgn,
                &pres.generators,
                trials,
                max_arity,
                &mut rng,
            )?;
            results.push(SuiteResult {
                name: "morphism",
                detail: format!("path, permutation and qm evaluation on {}", pres.name),
                report,
            });
            results.push(SuiteResult {
                name: "injectivity",
                detail: format!(
                    "(path, permutation) on {} up to arity {max_arity}",
                    pres.name
                ),
                report: check_path_injectivity(&pres.generators, max_arity)?,
            });
        }
    }
    let passed = results.iter().all(|r| r.report.passed());
    match common.format {
        Format::Json => {
            let doc = json!({
                "schema": 1,
                "seed": common.seed,
                "suites": results.iter().map(|r| json!({
                    "suite": r.name,
                    "detail": r.detail,
                    "trials": r.report.trials,
                    "exercised": r.report.exercised,
                    "counterexamples": r.report.counterexamples,
                    "passed": r.report.passed(),
                })).collect::<Vec<_>>(),
                "passed": passed,
            });
            emit_json(&doc, out);
        }
        Format::Text => {
            for r in &results {
                let verdict = if r.report.passed() { "pass" } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "{}: {verdict} ({}; {} trials, {} exercised, {} counterexamples)",
                    r.name,
                    r.detail,
                    r.report.trials,
                    r.report.exercised,
                    r.report.counterexamples.len()
                );
                for c in r.report.counterexamples.iter().take(5) {
                    let _ = writeln!(out, "  {c}");
                }
            }
        }
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Negative)
    }
}

fn verdict_word(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "less",
        Ordering::Equal => "equal",
        Ordering::Greater => "greater",
    }
}

fn cmd_compare(t1: &str, t2: &str, source: &Source, common: &Common, out: &mut String) -> Outcome {
    let pres = load(source)?;
    let order = order_for(&pres, common.order.as_deref())?;
    let (a, b) = (
        parse_tree(t1, &pres.generators)?,
        parse_tree(t2, &pres.generators)?,
    );
    let trace = order.trace(&a, &b)?;
    let verdict = order.compare(&a, &b)?;
    let decided = trace
        .iter()
        .find(|s| s.verdict != Ordering::Equal)
        .map(|s| s.label.clone());
    match common.format {
        Format::Json => {
            let doc = json!({
                "schema": 1,
                "left": a.to_string(),
                "right": b.to_string(),
                "order": {"name": order.name(), "spec": order.spec()},
                "stages": trace.iter().map(|s| json!({
                    "stage": s.label, "left": s.left, "right": s.right, "verdict": verdict_word(s.verdict),
                })).collect::<Vec<_>>(),
                "verdict": verdict_word(verdict),
                "decided_by": decided,
            });
            emit_json(&doc, out);
        }
        Format::Text => {
            let _ = writeln!(out, "{a} vs {b}");
            for s in &trace {
                let _ = writeln!(
                    out,
                    "  {}: {} vs {} -> {}",
                    s.label,
                    s.left,
                    s.right,
                    verdict_word(s.verdict)
                );
            }
            let _ = writeln!(out, "verdict: {}", verdict_word(verdict));
            if let Some(label) = decided {
                let _ = writeln!(out, "decided by: {label}");
            }
        }
    }
    Ok(())
}

fn cmd_normalize(
    poly: &str,
    source: &Source,
    common: &Common,
    max_arity: usize,
    out: &mut String,
) -> Outcome {
    check_arity(max_arity, None)?;
    let pres = load(source)?;
    let order = order_for(&pres, common.order.as_deref())?;
    let p = parse_polynomial(poly, &pres.generators)?;
    let report = buchberger(&pres.shuffle_relations, &order, max_arity)?;
    let nf = reduce(&p, &report.basis, &order)?;
    let complete = report.survivors.is_empty() && report.unchecked_overlaps == 0;
    match common.format {
        Format::Json => {
            let terms: Vec<Value> = nf
                .sorted_terms(&order)
                .into_iter()
                .map(|(t, c)| json!({"tree": t.to_string(), "coeff": operad_core::groebner::coeff_string(c)}))
                .collect();
            let doc = json!({
                "schema": 1,
                "input": p.display_ordered(&order),
                "normal_form": terms,
                "basis_complete": complete,
            });
            emit_json(&doc, out);
        }
        Format::Text => {
            let _ = writeln!(out, "{}", nf.display_ordered(&order));
            if !complete {
                eprintln!("warning: the basis is not complete up to arity {max_arity}; the result may not be canonical");
            }
        }
    }
    Ok(())
}
