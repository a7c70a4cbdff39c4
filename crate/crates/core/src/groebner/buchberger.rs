use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::normal_forms::count_normal_forms;
use super::poly::{coeff_string, TreePolynomial};
use super::reduce::{s_polynomial, Reducer};
use crate::error::{Error, Result};
use crate::order::MonomialOrder;
use crate::tree::{enumerate_overlaps, Generator, Overlap, ShuffleTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompletionStatus {
    /// Every overlap within the bound reduced to zero.
    Stable,
    /// Some S-polynomials survived and were adjoined; all overlaps of the
    /// enlarged basis lie within the bound and reduce to zero.
    Augmented,
    /// Overlaps above the arity bound exist and were not checked.
    BoundExceeded,
}

#[derive(Clone, Debug)]
pub struct GroebnerReport {
    pub order_name: String,
    pub order_spec: String,
    pub max_arity: usize,
    pub input_relations: Vec<TreePolynomial>,
    /// Inputs that reduced to zero modulo the earlier ones.
    pub dependent_inputs: usize,
    pub processed_overlaps: usize,
    /// Overlaps whose arity exceeds `max_arity`.
    pub unchecked_overlaps: usize,
    /// Nonzero remainders of S-polynomials; empty for a Gröbner basis.
    pub survivors: Vec<TreePolynomial>,
    /// Reduced basis, monic, sorted by leading term.
    pub basis: Vec<TreePolynomial>,
    pub leading_terms: Vec<ShuffleTree>,
    /// `(arity, number of normal forms)` for arities `1..=max_arity`.
    pub normal_form_counts: Vec<(usize, usize)>,
    pub status: CompletionStatus,
}

impl GroebnerReport {
    pub fn is_groebner_within_bound(&self) -> bool {
        self.survivors.is_empty()
    }

    /// Documented verdict string; the check is bounded by the overlap arity.
    pub fn verdict(&self) -> String {
        if !self.survivors.is_empty() {
            return format!(
                "not a Groebner basis: {} S-polynomial(s) survived at arity <= {}",
                self.survivors.len(),
                self.max_arity
            );
        }
        match self.status {
            CompletionStatus::BoundExceeded => format!(
                "no survivors at arity <= {}, but {} overlap(s) above the bound were not checked",
                self.max_arity, self.unchecked_overlaps
            ),
            _ => format!(
                "Groebner basis: all {} overlap(s) up to arity {} reduce to zero",
                self.processed_overlaps, self.max_arity
            ),
        }
    }

    pub fn to_json(&self, presentation: &str) -> serde_json::Value {
        let dims: Vec<DimensionRow> = self
            .normal_form_counts
            .iter()
            .map(|&(arity, normal_forms)| DimensionRow {
                arity,
                normal_forms,
            })
            .collect();
        let doc = ReportDoc {
            schema: 1,
            presentation: presentation.to_string(),
            order: OrderDoc {
                name: self.order_name.clone(),
                spec: self.order_spec.clone(),
            },
            max_arity: self.max_arity,
            input_relations: self.input_relations.iter().map(poly_doc).collect(),
            dependent_inputs: self.dependent_inputs,
            processed_overlaps: self.processed_overlaps,
            unchecked_overlaps: self.unchecked_overlaps,
            survivors: self.survivors.iter().map(poly_doc).collect(),
            basis: self.basis.iter().map(poly_doc).collect(),
            leading_terms: self.leading_terms.iter().map(ToString::to_string).collect(),
            dimensions: dims,
            status: self.status,
            verdict: self.verdict(),
        };
        serde_json::to_value(doc).expect("report serializes")
    }
}

#[derive(Serialize)]
struct ReportDoc {
    schema: u32,
    presentation: String,
    order: OrderDoc,
    max_arity: usize,
    input_relations: Vec<Vec<TermDoc>>,
    dependent_inputs: usize,
    processed_overlaps: usize,
    unchecked_overlaps: usize,
    survivors: Vec<Vec<TermDoc>>,
    basis: Vec<Vec<TermDoc>>,
    leading_terms: Vec<String>,
    dimensions: Vec<DimensionRow>,
    status: CompletionStatus,
    verdict: String,
}

#[derive(Serialize)]
struct OrderDoc {
    name: String,
    spec: String,
}

#[derive(Serialize)]
struct TermDoc {
    tree: String,
    coeff: String,
}

#[derive(Serialize)]
struct DimensionRow {
    arity: usize,
    normal_forms: usize,
}

fn poly_doc(p: &TreePolynomial) -> Vec<TermDoc> {
    p.terms()
        .map(|(t, c)| TermDoc {
            tree: t.to_string(),
            coeff: coeff_string(c),
        })
        .collect()
}

/// Largest arity an overlap of two leading terms can have.
fn overlap_arity_bound(a: &ShuffleTree, b: &ShuffleTree) -> usize {
    a.arity() + b.arity() - 2
}

struct Completion<'a> {
    order: &'a MonomialOrder,
    max_arity: usize,
    basis: Vec<TreePolynomial>,
    leads: Vec<ShuffleTree>,
    reducer: Reducer<'a>,
    queue: BTreeMap<(usize, String, usize, usize), Overlap>,
    unchecked: usize,
}

impl<'a> Completion<'a> {
    fn adjoin(&mut self, g: TreePolynomial) -> Result<()> {
        let g = g.monic(self.order)?;
        let lead = g.leading(self.order)?.0.clone();
        self.reducer.push(&g)?;
        self.basis.push(g);
        self.leads.push(lead);
        let n = self.leads.len() - 1;
        for i in 0..=n {
            let (a, b) = (&self.leads[i], &self.leads[n]);
            let bound = overlap_arity_bound(a, b).max(self.max_arity);
            for ov in enumerate_overlaps(a, b, bound) {
                if ov.arity() > self.max_arity {
                    self.unchecked += 1;
                    continue;
                }
                self.queue.insert((ov.arity(), ov.key(), i, n), ov);
            }
        }
        Ok(())
    }
}

/// Buchberger completion bounded by arity.
///
/// Relations are first reduced against each other (dependent ones are
/// dropped). Overlaps are processed in increasing arity, then by canonical
/// key; every nonzero remainder is recorded as a survivor and adjoined.
/// The final basis is interreduced and monic.
pub fn buchberger(
    relations: &[TreePolynomial],
    order: &MonomialOrder,
    max_arity: usize,
) -> Result<GroebnerReport> {
    let generators: BTreeSet<Generator> = relations
        .iter()
        .flat_map(TreePolynomial::generators)
        .collect();
    order.covers_all(&generators)?;
    if let Some(r) = relations.iter().find(|r| r.arity() > max_arity) {
        return Err(Error::UnsupportedArity(r.arity()));
    }
    let mut run = Completion {
        order,
        max_arity,
        basis: Vec::new(),
        leads: Vec::new(),
        reducer: Reducer::new(&[], order)?,
        queue: BTreeMap::new(),
        unchecked: 0,
    };
    let mut dependent = 0;
    for r in relations {
        let reduced = run.reducer.reduce(r)?;
        if reduced.is_zero() {
            dependent += 1;
        } else {
            run.adjoin(reduced)?;
        }
    }

    let mut processed = 0;
    let mut survivors = Vec::new();
    while let Some(((_, _, i, j), ov)) = run.queue.pop_first() {
        processed += 1;
        let s = s_polynomial(&run.basis[i], &run.basis[j], &ov, order)?;
        let remainder = run.reducer.reduce(&s)?;
        if !remainder.is_zero() {
            survivors.push(remainder.clone());
            run.adjoin(remainder)?;
        }
    }

    let basis = interreduce(&run.basis, order)?;
    let leading_terms: Vec<ShuffleTree> = basis
        .iter()
        .map(|g| g.leading(order).map(|(t, _)| t.clone()))
        .collect::<Result<_>>()?;
    let generators: Vec<Generator> = generators.into_iter().collect();
    let normal_form_counts = if generators.is_empty() {
        Vec::new()
    } else {
        (1..=max_arity)
            .map(|n| count_normal_forms(&leading_terms, &generators, n).map(|c| (n, c)))
            .collect::<Result<_>>()?
    };
    let status = if run.unchecked > 0 {
        CompletionStatus::BoundExceeded
    } else if survivors.is_empty() {
        CompletionStatus::Stable
    } else {
        CompletionStatus::Augmented
    };
    Ok(GroebnerReport {
        order_name: order.name().to_string(),
        order_spec: order.spec(),
        max_arity,
        input_relations: relations.to_vec(),
        dependent_inputs: dependent,
        processed_overlaps: processed,
        unchecked_overlaps: run.unchecked,
        survivors,
        basis,
        leading_terms,
        normal_form_counts,
        status,
    })
}

/// Reduces every element by the others until nothing changes; zero
/// elements are dropped, the rest made monic and sorted by leading term.
pub fn interreduce(basis: &[TreePolynomial], order: &MonomialOrder) -> Result<Vec<TreePolynomial>> {
    let mut current: Vec<TreePolynomial> = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.monic(order))
        .collect::<Result<_>>()?;
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < current.len() {
            let others: Vec<TreePolynomial> = current
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, g)| g.clone())
                .collect();
            let reduced = Reducer::new(&others, order)?.reduce(&current[i])?;
            if reduced.is_zero() {
                current.remove(i);
                changed = true;
                continue;
            }
            let reduced = reduced.monic(order)?;
            if reduced != current[i] {
                current[i] = reduced;
                changed = true;
            }
            i += 1;
        }
        if !changed {
            break;
        }
    }
    current.sort_by_cached_key(|g| {
        let lt = g.leading(order).expect("nonzero").0;
        (lt.arity(), lt.to_string())
    });
    Ok(current)
}
