//! The word operad of a monoid and evaluations of tree monomials in it.
//!
//! An element of arity `n` is a tuple of `n` monoid elements indexed by leaf
//! label. Composition along `f: I → {1..n}` multiplies the outer entry on
//! the left: `γ_f(a; b_1, …, b_n)(i) = a(f(i)) ⋆ b_{f(i)}(i)`, where each
//! `b_j` is indexed by the fibre `f⁻¹(j)` in increasing order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::monoid::{FreeMonoid, FreeWord, LawReport, Monoid, OrderedMonoid};
use crate::tree::{compose, enumerate_trees, Generator, Relabeling, ShuffleTree};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WordSequence<E>(pub Vec<E>);

impl<E> WordSequence<E> {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[E] {
        &self.0
    }
}

impl<E: fmt::Display> fmt::Display for WordSequence<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// Images of generators in a word operad, keyed by generator name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorAssignment<E> {
    images: BTreeMap<String, Vec<E>>,
}

impl<E: Clone> GeneratorAssignment<E> {
    pub fn new() -> Self {
        GeneratorAssignment {
            images: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, generator: &Generator, image: Vec<E>) -> Result<()> {
        if image.len() != generator.arity() {
            return Err(Error::LengthMismatch {
                expected: generator.arity(),
                found: image.len(),
            });
        }
        self.images.insert(generator.name().to_string(), image);
        Ok(())
    }

    pub fn with(mut self, generator: &Generator, image: Vec<E>) -> Result<Self> {
        self.insert(generator, image)?;
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<&[E]> {
        self.images.get(name).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[E])> {
        self.images.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }
}

impl<E: Clone> Default for GeneratorAssignment<E> {
    fn default() -> Self {
        Self::new()
    }
}

impl GeneratorAssignment<FreeWord> {
    /// Every generator `g` goes to `(g, …, g)`.
    pub fn diagonal<'a>(generators: impl IntoIterator<Item = &'a Generator>) -> Self {
        let mut asgn = GeneratorAssignment::new();
        for g in generators {
            asgn.images.insert(
                g.name().to_string(),
                vec![FreeWord::letter(g.name()); g.arity()],
            );
        }
        asgn
    }
}

/// Composition `γ_f(a; b_1, …, b_n)`. `f[i - 1] ∈ 1..=n` is the image of
/// label `i`.
pub fn word_compose<M: Monoid>(
    monoid: &M,
    f: &[usize],
    a: &WordSequence<M::Element>,
    bs: &[WordSequence<M::Element>],
) -> Result<WordSequence<M::Element>> {
    let n = a.len();
    if bs.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: bs.len(),
        });
    }
    let mut fibres = vec![0usize; n];
    for &j in f {
        if j == 0 || j > n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: j,
            });
        }
        fibres[j - 1] += 1;
    }
    for (b, &size) in bs.iter().zip(&fibres) {
        if b.len() != size {
            return Err(Error::LengthMismatch {
                expected: size,
                found: b.len(),
            });
        }
    }
    let mut seen = vec![0usize; n];
    let entries = f
        .iter()
        .map(|&j| {
            let rank = seen[j - 1];
            seen[j - 1] += 1;
            monoid.mul(&a.0[j - 1], &bs[j - 1].0[rank])
        })
        .collect();
    Ok(WordSequence(entries))
}

/// The image of `t` under the morphism of shuffle operads determined by
/// `asgn`: the entry at leaf `i` is the product, root to leaf, of the
/// assignment entries for the child slots the path passes through.
pub fn evaluate_tree<M: Monoid>(
    monoid: &M,
    t: &ShuffleTree,
    asgn: &GeneratorAssignment<M::Element>,
) -> Result<WordSequence<M::Element>> {
    fn go<M: Monoid>(
        monoid: &M,
        t: &ShuffleTree,
        asgn: &GeneratorAssignment<M::Element>,
        prefix: M::Element,
        out: &mut [Option<M::Element>],
    ) -> Result<()> {
        match t {
            ShuffleTree::Leaf(l) => {
                let slot = out
                    .get_mut(*l as usize - 1)
                    .ok_or_else(|| Error::InvalidTree(format!("leaf {l} out of range")))?;
                *slot = Some(prefix);
                Ok(())
            }
            ShuffleTree::Node(g, children) => {
                let image = asgn
                    .get(g.name())
                    .ok_or_else(|| Error::MissingGenerator(g.name().to_string()))?;
                if image.len() != children.len() {
                    return Err(Error::LengthMismatch {
                        expected: children.len(),
                        found: image.len(),
                    });
                }
                for (c, e) in children.iter().zip(image) {
                    go(monoid, c, asgn, monoid.mul(&prefix, e), out)?;
                }
                Ok(())
            }
        }
    }
    let mut out = vec![None; t.arity()];
    go(monoid, t, asgn, monoid.identity(), &mut out)?;
    let entries = out
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::InvalidTree(format!("{t} does not use every leaf label")))?;
    Ok(WordSequence(entries))
}

/// The path sequence: entry `i` is the word of generators met on the way
/// from the root to leaf `i`.
pub fn path_sequence(t: &ShuffleTree) -> WordSequence<FreeWord> {
    let gens = t.generators();
    let names: Vec<&str> = gens.iter().map(Generator::name).collect();
    let monoid = FreeMonoid::new(&names);
    evaluate_tree(&monoid, t, &GeneratorAssignment::diagonal(&gens))
        .expect("diagonal assignment covers the tree")
}

/// Leaf labels in planar order, read as the permutation `position ↦ label`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(pub Vec<u32>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as u32).collect())
    }

    /// Composition in the shuffle associative operad: the slot entry is
    /// replaced by the relabeled inner reading, other entries are relabeled.
    pub fn shuffle_compose(
        &self,
        slot: usize,
        inner: &Permutation,
        relabeling: &Relabeling,
    ) -> Permutation {
        let phi = relabeling.outer_map(slot);
        let mut out = Vec::with_capacity(self.0.len() + inner.0.len() - 1);
        for &p in &self.0 {
            if p as usize == slot {
                out.extend(inner.0.iter().map(|&x| relabeling.inner[x as usize - 1]));
            } else {
                out.push(phi[p as usize - 1]);
            }
        }
        Permutation(out)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn permutation_of(t: &ShuffleTree) -> Permutation {
    Permutation(t.leaves())
}

/// Lexicographic comparison in leaf-label order. `None` when some deciding
/// entry pair is incomparable or the lengths differ.
pub fn lex_compare<M: OrderedMonoid>(
    monoid: &M,
    a: &WordSequence<M::Element>,
    b: &WordSequence<M::Element>,
) -> Option<Ordering> {
    if a.len() != b.len() {
        return None;
    }
    for (x, y) in a.0.iter().zip(&b.0) {
        match monoid.compare(x, y)? {
            Ordering::Equal => continue,
            other => return Some(other),
        }
    }
    Some(Ordering::Equal)
}

/// A random shuffle surjection `{1..total} → {1..n}`: fibres are nonempty
/// and their minima increase with the fibre index.
pub fn random_shuffle_map<R: Rng>(rng: &mut R, total: usize, n: usize) -> Vec<usize> {
    assert!(1 <= n && n <= total);
    loop {
        let raw: Vec<usize> = (0..total).map(|_| rng.gen_range(0..n)).collect();
        let mut rename = vec![usize::MAX; n];
        let mut next = 1;
        for &r in &raw {
            if rename[r] == usize::MAX {
                rename[r] = next;
                next += 1;
            }
        }
        if next == n + 1 {
            return raw.into_iter().map(|r| rename[r]).collect();
        }
    }
}

/// Randomized check that composition in the shuffle word operad is strictly
/// increasing in each argument for the lexicographic order.
///
/// Each trial draws a shuffle map `f` onto `n ≤ 3` fibres with total arity
/// at most `max_arity`, a full set of arguments, and a second candidate for
/// one argument position; whenever the two candidates compare, the two
/// composites must compare the same way.
pub fn check_ordered_operad<M, R, S>(
    monoid: &M,
    mut sampler: S,
    trials: usize,
    max_arity: usize,
    rng: &mut R,
) -> LawReport
where
    M: OrderedMonoid,
    R: Rng,
    S: FnMut(&mut R) -> M::Element,
{
    let mut report = LawReport {
        trials,
        ..Default::default()
    };
    let mut seq =
        |rng: &mut R, len: usize| WordSequence((0..len).map(|_| sampler(rng)).collect::<Vec<_>>());
    for _ in 0..trials {
        let total = rng.gen_range(1..=max_arity);
        let n = rng.gen_range(1..=total.min(3));
        let f = random_shuffle_map(rng, total, n);
        let sizes: Vec<usize> = (1..=n)
            .map(|j| f.iter().filter(|&&x| x == j).count())
            .collect();
        let a = seq(rng, n);
        let bs: Vec<_> = sizes.iter().map(|&s| seq(rng, s)).collect();
        let position = rng.gen_range(0..=n);
        let (a2, bs2) = if position == 0 {
            (seq(rng, n), bs.clone())
        } else {
            let mut bs2 = bs.clone();
            bs2[position - 1] = seq(rng, sizes[position - 1]);
            (a.clone(), bs2)
        };
        let before = if position == 0 {
            lex_compare(monoid, &a, &a2)
        } else {
            lex_compare(monoid, &bs[position - 1], &bs2[position - 1])
        };
        let Some(before) = before else { continue };
        if before == Ordering::Equal {
            continue;
        }
        report.exercised += 1;
        let lhs = word_compose(monoid, &f, &a, &bs).expect("fibre sizes match");
        let rhs = word_compose(monoid, &f, &a2, &bs2).expect("fibre sizes match");
        if lex_compare(monoid, &lhs, &rhs) != Some(before) {
            report.fail(format!(
                "f = {f:?}, argument {position}: {before:?} before composing, {:?} after ({lhs} vs {rhs})",
                lex_compare(monoid, &lhs, &rhs)
            ));
        }
    }
    report
}

/// Randomized check that θ (path sequence), σ (planar permutation) and the
/// evaluation under `assignment` turn shuffle compositions of trees into
/// compositions of their images. One trial draws a random composable pair
/// of total arity at most `max_arity` and checks all three maps.
pub fn check_morphism_laws<M: Monoid, R: Rng>(
    monoid: &M,
    assignment: &GeneratorAssignment<M::Element>,
    generators: &[Generator],
    trials: usize,
    max_arity: usize,
    rng: &mut R,
) -> Result<LawReport> {
    if max_arity < 2 {
        return Err(Error::UnsupportedArity(max_arity));
    }
    let names: Vec<&str> = generators.iter().map(Generator::name).collect();
    let free = FreeMonoid::new(&names);
    let by_arity: Vec<Vec<ShuffleTree>> = (0..=max_arity)
        .map(|n| {
            if n == 0 {
                Ok(Vec::new())
            } else {
                enumerate_trees(generators, n)
            }
        })
        .collect::<Result<_>>()?;
    let mut report = LawReport {
        trials,
        ..Default::default()
    };
    for _ in 0..trials {
        let a = rng.gen_range(1..max_arity);
        let b = rng.gen_range(1..=max_arity + 1 - a);
        let (Some(outer), Some(inner)) = (by_arity[a].choose(rng), by_arity[b].choose(rng)) else {
            continue;
        };
        let slot = rng.gen_range(1..=a);
        let shuffles = Relabeling::all_shuffles(a, slot, b);
        let relabeling = shuffles.choose(rng).expect("at least one shuffle");
        let composite = compose(outer, slot, inner, relabeling)?;
        let f = relabeling.fiber_map(slot);
        report.exercised += 1;

        // the inner image sits in the slot, other outer leaves get the unit
        fn images<N: Monoid>(
            n: &N,
            slot: usize,
            a: usize,
            inner: WordSequence<N::Element>,
        ) -> Vec<WordSequence<N::Element>> {
            let mut inner = Some(inner);
            (1..=a)
                .map(|j| {
                    if j == slot {
                        inner.take().expect("one slot")
                    } else {
                        WordSequence(vec![n.identity()])
                    }
                })
                .collect()
        }
        let theta = word_compose(
            &free,
            &f,
            &path_sequence(outer),
            &images(&free, slot, a, path_sequence(inner)),
        )?;
        if theta != path_sequence(&composite) {
            report.fail(format!("path sequence of {composite} is not {theta}"));
        }
        let sigma = permutation_of(outer).shuffle_compose(slot, &permutation_of(inner), relabeling);
        if sigma != permutation_of(&composite) {
            report.fail(format!("permutation of {composite} is not {sigma}"));
        }
        let eval = |t: &ShuffleTree| evaluate_tree(monoid, t, assignment);
        let psi = word_compose(
            monoid,
            &f,
            &eval(outer)?,
            &images(monoid, slot, a, eval(inner)?),
        )?;
        let direct = eval(&composite)?;
        if psi != direct {
            report.fail(format!(
                "evaluation of {composite} is {direct}, composing images gives {psi}"
            ));
        }
    }
    Ok(report)
}

/// Checks that trees of every arity up to `max_arity` are determined by
/// their path sequence and permutation together. `exercised` counts trees.
pub fn check_path_injectivity(generators: &[Generator], max_arity: usize) -> Result<LawReport> {
    let mut report = LawReport::default();
    for n in 1..=max_arity {
        let mut seen: HashMap<(String, Permutation), ShuffleTree> = HashMap::new();
        for t in enumerate_trees(generators, n)? {
            report.trials += 1;
            report.exercised += 1;
            let key = (path_sequence(&t).to_string(), permutation_of(&t));
            if let Some(other) = seen.get(&key) {
                report.fail(format!(
                    "{t} and {other} share path sequence {} and permutation {}",
                    key.0, key.1
                ));
            } else {
                seen.insert(key, t);
            }
        }
    }
    Ok(report)
}
