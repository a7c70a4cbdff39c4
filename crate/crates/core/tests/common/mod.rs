#![allow(dead_code)]

use std::collections::HashMap;

use operad_core::tree::{
    compose, enumerate_trees, Generator, Relabeling, ShuffleTree, SignSymmetry,
};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn mu() -> Generator {
    Generator::binary("mu", SignSymmetry::Symmetric)
}

pub fn lam() -> Generator {
    Generator::binary("lam", SignSymmetry::Skew)
}

pub fn pois_gens() -> Vec<Generator> {
    vec![mu(), lam()]
}

pub fn leaf(l: u32) -> ShuffleTree {
    ShuffleTree::Leaf(l)
}

pub fn node(g: &Generator, children: Vec<ShuffleTree>) -> ShuffleTree {
    ShuffleTree::node(g.clone(), children).expect("valid test tree")
}

/// Trees by arity, built once per generator list.
pub struct TreeCache {
    gens: Vec<Generator>,
    by_arity: HashMap<usize, Vec<ShuffleTree>>,
}

impl TreeCache {
    pub fn new(gens: Vec<Generator>) -> Self {
        TreeCache {
            gens,
            by_arity: HashMap::new(),
        }
    }

    pub fn get(&mut self, n: usize) -> &[ShuffleTree] {
        let gens = &self.gens;
        self.by_arity
            .entry(n)
            .or_insert_with(|| enumerate_trees(gens, n).unwrap())
    }

    pub fn random<R: Rng>(&mut self, rng: &mut R, n: usize) -> ShuffleTree {
        self.get(n).choose(rng).unwrap().clone()
    }
}

/// A random shuffle composition `outer ∘_slot inner` with total arity at
/// most `max_arity`.
pub struct Composition {
    pub outer: ShuffleTree,
    pub slot: usize,
    pub inner: ShuffleTree,
    pub relabeling: Relabeling,
    pub result: ShuffleTree,
}

pub fn random_composition<R: Rng>(
    rng: &mut R,
    cache: &mut TreeCache,
    max_arity: usize,
) -> Composition {
    let a = rng.gen_range(1..max_arity);
    let b = rng.gen_range(1..=max_arity + 1 - a);
    let outer = cache.random(rng, a);
    let inner = cache.random(rng, b);
    let slot = rng.gen_range(1..=a);
    let relabeling = Relabeling::all_shuffles(a, slot, b)
        .choose(rng)
        .unwrap()
        .clone();
    let result = compose(&outer, slot, &inner, &relabeling).unwrap();
    Composition {
        outer,
        slot,
        inner,
        relabeling,
        result,
    }
}
