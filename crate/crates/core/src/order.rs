//! Monomial orders on shuffle tree monomials.
//!
//! An order is a chain of stages compared lexicographically: the first
//! stage that distinguishes two trees decides. Each stage is a total
//! preorder compatible with shuffle composition, so the chain is too.
//!
//! Stages:
//! - [`WordStage`]: compare images in a word operad `W_M` under a generator
//!   assignment, lexicographically with the order of `M`.
//! - [`PathLexStage`]: compare path sequences, words by length then letters.
//! - [`PermutationStage`]: compare planar leaf readings lexicographically.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::monoid::{FreeMonoid, FreeWord, LawReport, OrderedMonoid, Qm, QmElement, QmOrder};
use crate::tree::{compose, enumerate_trees, Generator, Relabeling, ShuffleTree};
use crate::word::{evaluate_tree, lex_compare, path_sequence, permutation_of, GeneratorAssignment};

pub trait OrderStage: Send + Sync + fmt::Debug {
    /// Stage in order-spec syntax.
    fn label(&self) -> String;
    fn covers(&self, generator: &Generator) -> bool;
    /// Preorder comparison of two trees of equal arity whose generators
    /// are covered.
    fn compare(&self, a: &ShuffleTree, b: &ShuffleTree) -> Ordering;
    /// The image the stage compares, for traces.
    fn image(&self, t: &ShuffleTree) -> String;
}

#[derive(Debug)]
pub struct WordStage<M: OrderedMonoid> {
    monoid: M,
    monoid_name: String,
    assignment: GeneratorAssignment<M::Element>,
}

impl<M: OrderedMonoid> WordStage<M> {
    pub fn new(monoid: M, monoid_name: &str, assignment: GeneratorAssignment<M::Element>) -> Self {
        WordStage {
            monoid,
            monoid_name: monoid_name.to_string(),
            assignment,
        }
    }

    pub fn assignment(&self) -> &GeneratorAssignment<M::Element> {
        &self.assignment
    }
}

impl<M> OrderStage for WordStage<M>
where
    M: OrderedMonoid + Send + Sync + fmt::Debug,
{
    fn label(&self) -> String {
        let parts: Vec<String> = self
            .assignment
            .iter()
            .map(|(name, image)| {
                let entries: Vec<String> = image.iter().map(|e| e.to_string()).collect();
                format!("{name}=({})", entries.join(","))
            })
            .collect();
        format!("word({}; {})", self.monoid_name, parts.join(", "))
    }

    fn covers(&self, generator: &Generator) -> bool {
        self.assignment
            .get(generator.name())
            .is_some_and(|img| img.len() == generator.arity())
    }

    /// Incomparable entries count as a tie.
    fn compare(&self, a: &ShuffleTree, b: &ShuffleTree) -> Ordering {
        let ia = evaluate_tree(&self.monoid, a, &self.assignment).expect("stage covers the tree");
        let ib = evaluate_tree(&self.monoid, b, &self.assignment).expect("stage covers the tree");
        lex_compare(&self.monoid, &ia, &ib).unwrap_or(Ordering::Equal)
    }

    fn image(&self, t: &ShuffleTree) -> String {
        match evaluate_tree(&self.monoid, t, &self.assignment) {
            Ok(img) => img.to_string(),
            Err(e) => format!("<{e}>"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PathLexStage {
    alphabet: FreeMonoid,
}

impl PathLexStage {
    pub fn new<S: AsRef<str>>(alphabet: &[S]) -> Self {
        PathLexStage {
            alphabet: FreeMonoid::new(alphabet),
        }
    }
}

impl OrderStage for PathLexStage {
    fn label(&self) -> String {
        format!("pathlex({})", self.alphabet.alphabet().join("<"))
    }

    fn covers(&self, generator: &Generator) -> bool {
        self.alphabet
            .alphabet()
            .iter()
            .any(|a| a == generator.name())
    }

    fn compare(&self, a: &ShuffleTree, b: &ShuffleTree) -> Ordering {
        lex_compare(&self.alphabet, &path_sequence(a), &path_sequence(b)).unwrap_or(Ordering::Equal)
    }

    fn image(&self, t: &ShuffleTree) -> String {
        path_sequence(t).to_string()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct PermutationStage;

impl OrderStage for PermutationStage {
    fn label(&self) -> String {
        "perm".to_string()
    }

    fn covers(&self, _: &Generator) -> bool {
        true
    }

    fn compare(&self, a: &ShuffleTree, b: &ShuffleTree) -> Ordering {
        a.leaves().cmp(&b.leaves())
    }

    fn image(&self, t: &ShuffleTree) -> String {
        permutation_of(t).to_string()
    }
}

#[derive(Clone, Debug)]
pub struct StageTrace {
    pub label: String,
    pub left: String,
    pub right: String,
    pub verdict: Ordering,
}

#[derive(Clone, Debug)]
pub struct MonomialOrder {
    name: String,
    stages: Vec<Arc<dyn OrderStage>>,
    total: bool,
}

impl MonomialOrder {
    /// `total` declares that the chain separates distinct trees.
    pub fn new(name: &str, stages: Vec<Arc<dyn OrderStage>>, total: bool) -> Self {
        MonomialOrder {
            name: name.to_string(),
            stages,
            total,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_total(&self) -> bool {
        self.total
    }

    pub fn stages(&self) -> &[Arc<dyn OrderStage>] {
        &self.stages
    }

    /// Order-spec string, e.g. `word(qm; lam=(y,y), mu=(x,x)) > pathlex(mu<lam) > perm`.
    pub fn spec(&self) -> String {
        self.stages
            .iter()
            .map(|s| s.label())
            .collect::<Vec<_>>()
            .join(" > ")
    }

    /// Whether every stage can evaluate trees built from `generator`.
    pub fn covers(&self, generator: &Generator) -> bool {
        self.stages.iter().all(|s| s.covers(generator))
    }

    pub fn covers_all<'a>(
        &self,
        generators: impl IntoIterator<Item = &'a Generator>,
    ) -> Result<()> {
        for g in generators {
            if !self.covers(g) {
                return Err(Error::MissingGenerator(g.name().to_string()));
            }
        }
        Ok(())
    }

    pub fn compare(&self, a: &ShuffleTree, b: &ShuffleTree) -> Result<Ordering> {
        if a.arity() != b.arity() {
            return Err(Error::ArityMismatch(a.arity(), b.arity()));
        }
        self.covers_all(a.generators().iter().chain(b.generators().iter()))?;
        Ok(self.cmp(a, b))
    }

    /// Unchecked comparison; the caller guarantees equal arity and coverage.
    pub fn cmp(&self, a: &ShuffleTree, b: &ShuffleTree) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        for stage in &self.stages {
            match stage.compare(a, b) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    }

    /// Per-stage images and verdicts; the deciding stage is the first
    /// entry whose verdict is not `Equal`.
    pub fn trace(&self, a: &ShuffleTree, b: &ShuffleTree) -> Result<Vec<StageTrace>> {
        self.compare(a, b)?;
        Ok(self
            .stages
            .iter()
            .map(|s| StageTrace {
                label: s.label(),
                left: s.image(a),
                right: s.image(b),
                verdict: s.compare(a, b),
            })
            .collect())
    }
}

pub const POISSON_ORDER: &str = "poisson-qm";
pub const PATHLEX_ORDER: &str = "pathlex";

/// Word stage over QM with `mu ↦ (x, x)`, `lam ↦ (y, y)`, then path-lex with
/// `mu < lam`, then permutations.
pub fn build_poisson_order(generators: &[Generator]) -> Result<MonomialOrder> {
    let mut names: Vec<&str> = generators.iter().map(Generator::name).collect();
    names.sort_unstable();
    if names != ["lam", "mu"] || generators.iter().any(|g| g.arity() != 2) {
        return Err(Error::WrongSignature(format!(
            "the Poisson order needs binary generators mu and lam, got [{}]",
            names.join(", ")
        )));
    }
    let mu = generators.iter().find(|g| g.name() == "mu").unwrap();
    let lam = generators.iter().find(|g| g.name() == "lam").unwrap();
    let psi = GeneratorAssignment::new()
        .with(mu, vec![QmElement::x(), QmElement::x()])?
        .with(lam, vec![QmElement::y(), QmElement::y()])?;
    Ok(MonomialOrder::new(
        POISSON_ORDER,
        vec![
            Arc::new(WordStage::new(Qm::default(), "qm", psi)),
            Arc::new(PathLexStage::new(&["mu", "lam"])),
            Arc::new(PermutationStage),
        ],
        true,
    ))
}

/// Path-lexicographic order with the alphabet in the given order, then
/// permutations.
pub fn pathlex_order(generators: &[Generator]) -> MonomialOrder {
    let names: Vec<&str> = generators.iter().map(Generator::name).collect();
    MonomialOrder::new(
        PATHLEX_ORDER,
        vec![
            Arc::new(PathLexStage::new(&names)),
            Arc::new(PermutationStage),
        ],
        true,
    )
}

/// Resolves a named order (`poisson-qm`, `pathlex`) or an order spec.
/// `generators` supplies the alphabet for `pathlex`.
pub fn resolve_order(name_or_spec: &str, generators: &[Generator]) -> Result<MonomialOrder> {
    match name_or_spec.trim() {
        POISSON_ORDER => build_poisson_order(&[
            Generator::binary("mu", crate::tree::SignSymmetry::Symmetric),
            Generator::binary("lam", crate::tree::SignSymmetry::Skew),
        ]),
        PATHLEX_ORDER => Ok(pathlex_order(generators)),
        spec if spec.contains('(') || spec == "perm" => parse_order_spec(spec),
        other => Err(Error::UnknownName(other.to_string())),
    }
}

fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn spec_err(msg: impl Into<String>) -> Error {
    Error::Parse {
        pos: 0,
        msg: msg.into(),
    }
}

fn call_args<'a>(stage: &'a str, head: &str) -> Option<&'a str> {
    stage
        .strip_prefix(head)?
        .trim()
        .strip_prefix('(')?
        .strip_suffix(')')
}

/// Parses `name=(e1,…,ek), …` into name / entry-string pairs.
fn parse_images(s: &str) -> Result<Vec<(String, Vec<String>)>> {
    let mut out = Vec::new();
    for part in split_top_level(s, ',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (name, tuple) = part
            .split_once('=')
            .ok_or_else(|| spec_err(format!("expected name=(...) in '{part}'")))?;
        let inner = tuple
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| spec_err(format!("expected a tuple in '{part}'")))?;
        let entries = inner.split(',').map(|e| e.trim().to_string()).collect();
        out.push((name.trim().to_string(), entries));
    }
    Ok(out)
}

fn qm_variant(name: &str) -> Option<QmOrder> {
    QmOrder::from_name(name)
}

fn parse_free_word(s: &str) -> FreeWord {
    if s == "1" || s.is_empty() {
        return FreeWord::default();
    }
    FreeWord(s.split('.').map(|l| l.trim().to_string()).collect())
}

fn parse_stage(stage: &str) -> Result<Arc<dyn OrderStage>> {
    let stage = stage.trim();
    if stage == "perm" {
        return Ok(Arc::new(PermutationStage));
    }
    if let Some(args) = call_args(stage, "pathlex") {
        let letters: Vec<&str> = args.split('<').map(str::trim).collect();
        if letters.iter().any(|l| !crate::tree::is_identifier(l)) {
            return Err(spec_err(format!("bad alphabet in '{stage}'")));
        }
        return Ok(Arc::new(PathLexStage::new(&letters)));
    }
    if let Some(args) = call_args(stage, "word") {
        let (monoid, images) = args
            .split_once(';')
            .ok_or_else(|| spec_err("word stage needs 'monoid; assignments'"))?;
        let monoid = monoid.trim();
        let images = parse_images(images)?;
        let generator =
            |name: &str, arity: usize| Generator::new(name, arity, crate::tree::SignSymmetry::None);
        if let Some(variant) = qm_variant(monoid) {
            let mut asgn = GeneratorAssignment::new();
            for (name, entries) in images {
                let parsed = entries
                    .iter()
                    .map(|e| e.parse::<QmElement>())
                    .collect::<Result<Vec<_>>>()?;
                asgn.insert(&generator(&name, parsed.len())?, parsed)?;
            }
            return Ok(Arc::new(WordStage::new(
                Qm::with_order(variant),
                monoid,
                asgn,
            )));
        }
        if monoid == "free" {
            let mut asgn = GeneratorAssignment::new();
            let mut letters: Vec<String> = Vec::new();
            for (name, entries) in images {
                let words: Vec<FreeWord> = entries.iter().map(|e| parse_free_word(e)).collect();
                for w in &words {
                    for l in &w.0 {
                        if !letters.contains(l) {
                            letters.push(l.clone());
                        }
                    }
                }
                asgn.insert(&generator(&name, words.len())?, words)?;
            }
            letters.sort();
            return Ok(Arc::new(WordStage::new(
                FreeMonoid::new(&letters),
                "free",
                asgn,
            )));
        }
        return Err(Error::UnknownName(monoid.to_string()));
    }
    Err(spec_err(format!("unknown stage '{stage}'")))
}

/// Parses an order spec such as
/// `word(qm; mu=(x,x), lam=(y,y)) > pathlex(mu<lam) > perm`.
/// Orders ending in a `pathlex` or `perm` stage after `pathlex` are
/// declared total.
pub fn parse_order_spec(spec: &str) -> Result<MonomialOrder> {
    let stages = split_top_level(spec, '>')
        .into_iter()
        .map(parse_stage)
        .collect::<Result<Vec<_>>>()?;
    let labels: Vec<String> = stages.iter().map(|s| s.label()).collect();
    let total = labels
        .windows(2)
        .any(|w| w[0].starts_with("pathlex") && w[1] == "perm");
    Ok(MonomialOrder::new(spec.trim(), stages, total))
}

/// Randomized admissibility check: for sampled pairs `t ≠ t'` of equal
/// arity and sampled shuffle compositions, substituting `t` and `t'` into
/// the same position (either as the inner or the outer argument) must not
/// change their relative order.
pub fn check_admissible<R: Rng>(
    order: &MonomialOrder,
    generators: &[Generator],
    trials: usize,
    max_arity: usize,
    rng: &mut R,
) -> Result<LawReport> {
    order.covers_all(generators)?;
    if max_arity < 3 {
        return Err(Error::UnsupportedArity(max_arity));
    }
    let mut by_arity: Vec<Vec<ShuffleTree>> = vec![Vec::new()];
    for n in 1..max_arity {
        by_arity.push(enumerate_trees(generators, n)?);
    }
    let mut report = LawReport {
        trials,
        ..Default::default()
    };
    for _ in 0..trials {
        // varying argument of arity k, fixed argument of arity m
        let k = rng.gen_range(2..max_arity);
        let m = rng.gen_range(2..=max_arity + 1 - k);
        let (Some(t1), Some(t2)) = (by_arity[k].choose(rng), by_arity[k].choose(rng)) else {
            continue;
        };
        if t1 == t2 {
            continue;
        }
        let fixed = by_arity[m].choose(rng).expect("nonempty component");
        let vary_inner = rng.gen_bool(0.5);
        let (outer_arity, inner_arity) = if vary_inner { (m, k) } else { (k, m) };
        let slot = rng.gen_range(1..=outer_arity);
        let shuffles = Relabeling::all_shuffles(outer_arity, slot, inner_arity);
        let relabeling = shuffles.choose(rng).expect("at least one shuffle");
        let place = |t: &ShuffleTree| {
            if vary_inner {
                compose(fixed, slot, t, relabeling)
            } else {
                compose(t, slot, fixed, relabeling)
            }
        };
        let (c1, c2) = (place(t1)?, place(t2)?);
        let before = order.cmp(t1, t2);
        let after = order.cmp(&c1, &c2);
        report.exercised += 1;
        if before != after {
            report.fail(format!(
                "{t1} vs {t2} is {before:?}, but {c1} vs {c2} is {after:?}"
            ));
        }
    }
    Ok(report)
}
