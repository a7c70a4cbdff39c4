use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Zero};

use super::poly::{Coeff, TreePolynomial};
use crate::error::Result;
use crate::tree::{
    divides, enumerate_trees, for_each_product, set_partitions, Generator, ShuffleTree,
    SignSymmetry,
};

/// Number of tree monomials of the given arity divisible by none of
/// `leading_terms`. The arity-1 component is the unit and counts 1.
pub fn count_normal_forms(
    leading_terms: &[ShuffleTree],
    generators: &[Generator],
    arity: usize,
) -> Result<usize> {
    let trees = enumerate_trees(generators, arity)?;
    Ok(trees
        .iter()
        .filter(|t| {
            !leading_terms
                .iter()
                .any(|lt| lt.arity() <= arity && divides(t, lt))
        })
        .count())
}

/// Incremental reduced row echelon form over the rationals. Rows are
/// sparse and sorted by column. Every stored row has coefficient 1 at its
/// pivot and no other pivot column, so a new row is reduced in a single
/// pass over its entries.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone> {
    pivots: BTreeMap<K, Vec<(K, Coeff)>>,
    /// Non-pivot column -> pivots whose rows mention it.
    users: BTreeMap<K, BTreeSet<K>>,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Echelon {
            pivots: BTreeMap::new(),
            users: BTreeMap::new(),
        }
    }
}

/// `row - factor * other`, both sorted by column.
fn sub_scaled<K: Ord + Clone>(
    row: &[(K, Coeff)],
    other: &[(K, Coeff)],
    factor: &Coeff,
) -> Vec<(K, Coeff)> {
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        if j == other.len() || (i < row.len() && row[i].0 < other[j].0) {
            out.push(row[i].clone());
            i += 1;
        } else if i == row.len() || other[j].0 < row[i].0 {
            out.push((other[j].0.clone(), -(factor * &other[j].1)));
            j += 1;
        } else {
            let c = &row[i].1 - factor * &other[j].1;
            if !c.is_zero() {
                out.push((row[i].0.clone(), c));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds a row; returns whether it was independent of the earlier ones.
    pub fn insert(&mut self, row: BTreeMap<K, Coeff>) -> bool {
        let mut row: Vec<(K, Coeff)> = row.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        // pivot rows only mention non-pivot columns, so subtracting one
        // never reintroduces another pivot column
        let hits: Vec<(K, Coeff)> = row
            .iter()
            .filter(|(k, _)| self.pivots.contains_key(k))
            .cloned()
            .collect();
        for (k, c) in hits {
            row = sub_scaled(&row, &self.pivots[&k], &c);
        }
        let Some((col, lead)) = row.last().cloned() else {
            return false;
        };
        let inv = lead.recip();
        if !inv.is_one() {
            for (_, c) in row.iter_mut() {
                *c *= &inv;
            }
        }
        // clear the new pivot column from the older rows
        for p in self.users.remove(&col).unwrap_or_default() {
            let old = self.pivots.remove(&p).expect("indexed pivot exists");
            let factor = old
                .iter()
                .find(|(k, _)| *k == col)
                .expect("indexed entry")
                .1
                .clone();
            let new = sub_scaled(&old, &row, &factor);
            for (k, _) in &old {
                if *k != p {
                    if let Some(set) = self.users.get_mut(k) {
                        set.remove(&p);
                    }
                }
            }
            for (k, _) in &new {
                if *k != p {
                    self.users.entry(k.clone()).or_default().insert(p.clone());
                }
            }
            self.pivots.insert(p, new);
        }
        for (k, _) in &row {
            if *k != col {
                self.users.entry(k.clone()).or_default().insert(col.clone());
            }
        }
        self.pivots.insert(col, row);
        true
    }
}

/// Rank of a family of polynomials, terms keyed by tree.
pub fn polynomial_rank(polys: &[TreePolynomial]) -> usize {
    let mut ech = Echelon::new();
    for p in polys {
        ech.insert(p.terms().map(|(t, c)| (t.clone(), c.clone())).collect());
    }
    ech.rank()
}

const HOLE: &str = "__hole__";

/// Trees of arity `n` over `generators` plus exactly one vertex labelled by
/// the hole generator.
fn one_hole_contexts(
    generators: &[Generator],
    hole: &Generator,
    n: usize,
) -> Result<Vec<ShuffleTree>> {
    let plain: Vec<Vec<ShuffleTree>> = std::iter::once(Ok(Vec::new()))
        .chain((1..=n).map(|s| enumerate_trees(generators, s)))
        .collect::<Result<_>>()?;
    let relabel = |t: &ShuffleTree, block: &[u32]| t.map_leaves(&|l| block[l as usize - 1]);
    let mut holed: Vec<Vec<ShuffleTree>> = vec![Vec::new(), Vec::new()];
    for s in 2..=n {
        let mut out = Vec::new();
        for root in generators.iter().chain(std::iter::once(hole)) {
            if root.arity() > s {
                continue;
            }
            for blocks in set_partitions(s, root.arity()) {
                let plain_options: Vec<Vec<ShuffleTree>> = blocks
                    .iter()
                    .map(|b| plain[b.len()].iter().map(|t| relabel(t, b)).collect())
                    .collect();
                if root == hole {
                    for_each_product(&plain_options, &mut |c| {
                        out.push(ShuffleTree::Node(root.clone(), c.to_vec()))
                    });
                    continue;
                }
                for carrier in 0..blocks.len() {
                    let mut options = plain_options.clone();
                    let b = &blocks[carrier];
                    options[carrier] = holed[b.len()].iter().map(|t| relabel(t, b)).collect();
                    for_each_product(&options, &mut |c| {
                        out.push(ShuffleTree::Node(root.clone(), c.to_vec()))
                    });
                }
            }
        }
        holed.push(out);
    }
    Ok(holed.swap_remove(n))
}

/// Replaces the hole vertex of `context` by `t`, feeding the hole's
/// children into the leaves of `t` in order.
fn plug(context: &ShuffleTree, t: &ShuffleTree) -> ShuffleTree {
    match context {
        ShuffleTree::Leaf(l) => ShuffleTree::Leaf(*l),
        ShuffleTree::Node(g, children) if g.name() == HOLE => {
            let subs: Vec<&ShuffleTree> = children.iter().collect();
            t.graft_leaves(&subs)
        }
        ShuffleTree::Node(g, children) => {
            ShuffleTree::Node(g.clone(), children.iter().map(|c| plug(c, t)).collect())
        }
    }
}

/// Dimension of the arity-`n` component of the quotient by the operadic
/// ideal generated by `relations`, computed by exact linear algebra: the
/// ideal component is spanned by all relations placed into all one-hole
/// contexts, and its rank is subtracted from the number of tree monomials.
/// Independent of any monomial order.
pub fn ideal_dimension_oracle(
    relations: &[TreePolynomial],
    generators: &[Generator],
    arity: usize,
) -> Result<usize> {
    let trees = enumerate_trees(generators, arity)?;
    let index: HashMap<&ShuffleTree, usize> =
        trees.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut ech: Echelon<usize> = Echelon::new();
    let mut contexts_by_arity: BTreeMap<usize, Vec<ShuffleTree>> = BTreeMap::new();
    for rel in relations {
        if rel.is_zero() || rel.arity() > arity || rel.arity() < 2 {
            continue;
        }
        let r = rel.arity();
        if let Entry::Vacant(slot) = contexts_by_arity.entry(r) {
            let hole = Generator::new(HOLE, r, SignSymmetry::None)?;
            slot.insert(one_hole_contexts(generators, &hole, arity)?);
        }
        for ctx in &contexts_by_arity[&r] {
            let mut row: BTreeMap<usize, Coeff> = BTreeMap::new();
            for (t, c) in rel.terms() {
                let plugged = plug(ctx, t);
                let col = index[&plugged];
                *row.entry(col).or_insert_with(Coeff::zero) += c;
            }
            ech.insert(row);
        }
    }
    Ok(trees.len() - ech.rank())
}
