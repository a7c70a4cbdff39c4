//! Tree monomials of the free shuffle operad.
//!
//! A [`ShuffleTree`] is a planar rooted tree whose internal vertices carry
//! generators and whose leaves carry the labels `1..=n` bijectively. At every
//! vertex the minimal leaf labels of the children increase from left to right.
//! Vertices are addressed by [`VertexPath`]s: the sequence of child indices
//! (0-based) leading from the root.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Behaviour of a binary generator under swapping its two arguments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SignSymmetry {
    None,
    Symmetric,
    Skew,
}

impl SignSymmetry {
    /// Sign picked up by a swap, if the generator has one.
    pub fn swap_sign(self) -> Option<i64> {
        match self {
            SignSymmetry::None => None,
            SignSymmetry::Symmetric => Some(1),
            SignSymmetry::Skew => Some(-1),
        }
    }
}

impl fmt::Display for SignSymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignSymmetry::None => "none",
            SignSymmetry::Symmetric => "symmetric",
            SignSymmetry::Skew => "skew",
        })
    }
}

impl FromStr for SignSymmetry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(SignSymmetry::None),
            "symmetric" => Ok(SignSymmetry::Symmetric),
            "skew" => Ok(SignSymmetry::Skew),
            other => Err(Error::UnknownName(other.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    name: Arc<str>,
    arity: usize,
    symmetry: SignSymmetry,
}

impl Generator {
    pub fn new(name: &str, arity: usize, symmetry: SignSymmetry) -> Result<Self> {
        if arity == 0 {
            return Err(Error::UnsupportedArity(0));
        }
        if !is_identifier(name) {
            return Err(Error::UnknownName(name.to_string()));
        }
        Ok(Generator {
            name: Arc::from(name),
            arity,
            symmetry,
        })
    }

    /// A binary generator. Panics if `name` is not an identifier.
    pub fn binary(name: &str, symmetry: SignSymmetry) -> Self {
        Generator::new(name, 2, symmetry).expect("generator name must be an identifier")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn symmetry(&self) -> SignSymmetry {
        self.symmetry
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub type VertexPath = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ShuffleTree {
    Leaf(u32),
    Node(Generator, Vec<ShuffleTree>),
}

impl ShuffleTree {
    pub fn leaf(label: u32) -> Self {
        ShuffleTree::Leaf(label)
    }

    /// Builds a vertex, rejecting a wrong child count or children that are
    /// not sorted by minimal leaf. Children are never reordered.
    pub fn node(generator: Generator, children: Vec<ShuffleTree>) -> Result<Self> {
        if children.len() != generator.arity() {
            return Err(Error::InvalidTree(format!(
                "generator {} expects {} children, got {}",
                generator,
                generator.arity(),
                children.len()
            )));
        }
        for pair in children.windows(2) {
            if pair[0].min_leaf() >= pair[1].min_leaf() {
                return Err(Error::InvalidTree(format!(
                    "children of {} are not ordered by minimal leaf",
                    generator
                )));
            }
        }
        Ok(ShuffleTree::Node(generator, children))
    }

    /// The generator applied to the leaves `1..=arity` in order.
    pub fn corolla(generator: &Generator) -> Self {
        let children = (1..=generator.arity() as u32)
            .map(ShuffleTree::Leaf)
            .collect();
        ShuffleTree::Node(generator.clone(), children)
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, ShuffleTree::Leaf(_))
    }

    /// Number of leaves.
    pub fn arity(&self) -> usize {
        match self {
            ShuffleTree::Leaf(_) => 1,
            ShuffleTree::Node(_, children) => children.iter().map(ShuffleTree::arity).sum(),
        }
    }

    /// Number of internal vertices.
    pub fn weight(&self) -> usize {
        match self {
            ShuffleTree::Leaf(_) => 0,
            ShuffleTree::Node(_, children) => {
                1 + children.iter().map(ShuffleTree::weight).sum::<usize>()
            }
        }
    }

    pub fn min_leaf(&self) -> u32 {
        match self {
            ShuffleTree::Leaf(l) => *l,
            ShuffleTree::Node(_, children) => children
                .iter()
                .map(ShuffleTree::min_leaf)
                .min()
                .unwrap_or(u32::MAX),
        }
    }

    /// Leaf labels in planar left-to-right order.
    pub fn leaves(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<u32>) {
        match self {
            ShuffleTree::Leaf(l) => out.push(*l),
            ShuffleTree::Node(_, children) => children.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    pub fn subtree(&self, path: &[usize]) -> Option<&ShuffleTree> {
        let mut cur = self;
        for &i in path {
            match cur {
                ShuffleTree::Node(_, children) => cur = children.get(i)?,
                ShuffleTree::Leaf(_) => return None,
            }
        }
        Some(cur)
    }

    /// Paths of the internal vertices in preorder.
    pub fn vertex_paths(&self) -> Vec<VertexPath> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.collect_paths(&mut path, &mut out);
        out
    }

    fn collect_paths(&self, path: &mut VertexPath, out: &mut Vec<VertexPath>) {
        if let ShuffleTree::Node(_, children) = self {
            out.push(path.clone());
            for (i, c) in children.iter().enumerate() {
                path.push(i);
                c.collect_paths(path, out);
                path.pop();
            }
        }
    }

    /// Distinct generators occurring in the tree.
    pub fn generators(&self) -> BTreeSet<Generator> {
        let mut out = BTreeSet::new();
        self.collect_generators(&mut out);
        out
    }

    fn collect_generators(&self, out: &mut BTreeSet<Generator>) {
        if let ShuffleTree::Node(g, children) = self {
            out.insert(g.clone());
            children.iter().for_each(|c| c.collect_generators(out));
        }
    }

    /// Multidegree: how often each generator name occurs.
    pub fn generator_counts(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        self.count_generators(&mut out);
        out
    }

    fn count_generators(&self, out: &mut BTreeMap<String, usize>) {
        if let ShuffleTree::Node(g, children) = self {
            *out.entry(g.name().to_string()).or_insert(0) += 1;
            children.iter().for_each(|c| c.count_generators(out));
        }
    }

    /// Applies `f` to every leaf label. The result is not revalidated.
    pub fn map_leaves(&self, f: &impl Fn(u32) -> u32) -> ShuffleTree {
        match self {
            ShuffleTree::Leaf(l) => ShuffleTree::Leaf(f(*l)),
            ShuffleTree::Node(g, children) => ShuffleTree::Node(
                g.clone(),
                children.iter().map(|c| c.map_leaves(f)).collect(),
            ),
        }
    }

    /// Replaces every leaf `j` by `substitutes[j - 1]`.
    pub(crate) fn graft_leaves(&self, substitutes: &[&ShuffleTree]) -> ShuffleTree {
        match self {
            ShuffleTree::Leaf(l) => substitutes[*l as usize - 1].clone(),
            ShuffleTree::Node(g, children) => ShuffleTree::Node(
                g.clone(),
                children
                    .iter()
                    .map(|c| c.graft_leaves(substitutes))
                    .collect(),
            ),
        }
    }

    /// Copy of `self` with the subtree at `path` replaced.
    pub fn replace_at(&self, path: &[usize], replacement: ShuffleTree) -> ShuffleTree {
        match path.split_first() {
            None => replacement,
            Some((&i, rest)) => match self {
                ShuffleTree::Node(g, children) => {
                    let mut children = children.clone();
                    children[i] = children[i].replace_at(rest, replacement);
                    ShuffleTree::Node(g.clone(), children)
                }
                ShuffleTree::Leaf(_) => panic!("path runs through a leaf"),
            },
        }
    }
}

impl fmt::Display for ShuffleTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShuffleTree::Leaf(l) => write!(f, "{l}"),
            ShuffleTree::Node(g, children) => {
                write!(f, "{}(", g.name())?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// True iff every leaf label `1..=n` occurs exactly once, every vertex has
/// as many children as its generator's arity, and children are sorted by
/// minimal leaf.
pub fn validate_tree(t: &ShuffleTree) -> bool {
    fn local(t: &ShuffleTree) -> bool {
        match t {
            ShuffleTree::Leaf(l) => *l >= 1,
            ShuffleTree::Node(g, children) => {
                g.arity() >= 1
                    && children.len() == g.arity()
                    && children
                        .windows(2)
                        .all(|p| p[0].min_leaf() < p[1].min_leaf())
                    && children.iter().all(local)
            }
        }
    }
    if !local(t) {
        return false;
    }
    let mut labels = t.leaves();
    labels.sort_unstable();
    labels.iter().enumerate().all(|(i, &l)| l as usize == i + 1)
}

/// New leaf labels for a shuffle composition `outer ∘_slot inner`.
///
/// `inner[j]` is the new label of inner leaf `j + 1`; `outer` lists the new
/// labels of the outer leaves other than `slot`, in increasing order of their
/// old labels. Both must be increasing, and the outer slot is treated as
/// carrying `inner[0]`; the full outer relabeling must then be increasing too.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relabeling {
    pub inner: Vec<u32>,
    pub outer: Vec<u32>,
}

impl Relabeling {
    /// The shuffle relabeling in which outer leaves `1..slot` keep their
    /// labels, the inner minimum lands on `slot`, and the remaining inner
    /// leaves receive `inner_rest` (a subset of `slot+1..=n`).
    pub fn shuffle(
        outer_arity: usize,
        slot: usize,
        inner_arity: usize,
        inner_rest: &[u32],
    ) -> Result<Self> {
        if slot == 0 || slot > outer_arity {
            return Err(Error::SlotOutOfRange {
                slot,
                arity: outer_arity,
            });
        }
        let total = (outer_arity + inner_arity - 1) as u32;
        let slot = slot as u32;
        if inner_rest.len() + 1 != inner_arity
            || inner_rest.windows(2).any(|p| p[0] >= p[1])
            || inner_rest.iter().any(|&l| l <= slot || l > total)
        {
            return Err(Error::InvalidComposition(format!(
                "{inner_rest:?} is not a {}-subset of {}..={}",
                inner_arity - 1,
                slot + 1,
                total
            )));
        }
        let mut inner = vec![slot];
        inner.extend_from_slice(inner_rest);
        let mut outer: Vec<u32> = (1..slot).collect();
        outer.extend((slot + 1..=total).filter(|l| !inner_rest.contains(l)));
        Ok(Relabeling { inner, outer })
    }

    /// Inner leaves take `slot..slot+inner_arity`, later outer leaves shift up.
    pub fn identity(outer_arity: usize, slot: usize, inner_arity: usize) -> Result<Self> {
        let rest: Vec<u32> = (slot as u32 + 1..(slot + inner_arity) as u32).collect();
        Relabeling::shuffle(outer_arity, slot, inner_arity, &rest)
    }

    /// Every shuffle relabeling for the given arities and slot.
    pub fn all_shuffles(outer_arity: usize, slot: usize, inner_arity: usize) -> Vec<Relabeling> {
        let total = (outer_arity + inner_arity - 1) as u32;
        let pool: Vec<u32> = (slot as u32 + 1..=total).collect();
        subsets(&pool, inner_arity - 1)
            .into_iter()
            .filter_map(|rest| Relabeling::shuffle(outer_arity, slot, inner_arity, &rest).ok())
            .collect()
    }

    /// Full relabeling of the outer leaves, the slot mapped to the inner minimum.
    pub fn outer_map(&self, slot: usize) -> Vec<u32> {
        let mut phi = self.outer.clone();
        if let Some(&first) = self.inner.first() {
            phi.insert(slot - 1, first);
        }
        phi
    }

    /// The map `f` from new labels to outer leaves: `f[i - 1]` is the outer
    /// leaf that new leaf `i` descends from.
    pub fn fiber_map(&self, slot: usize) -> Vec<usize> {
        let total = self.inner.len() + self.outer.len();
        let mut f = vec![0; total];
        for &l in &self.inner {
            f[l as usize - 1] = slot;
        }
        for (j, &l) in self.outer.iter().enumerate() {
            let old = if j + 1 < slot { j + 1 } else { j + 2 };
            f[l as usize - 1] = old;
        }
        f
    }
}

pub(crate) fn subsets(pool: &[u32], size: usize) -> Vec<Vec<u32>> {
    fn go(pool: &[u32], size: usize, start: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..pool.len() {
            if pool.len() - i < size - cur.len() {
                break;
            }
            cur.push(pool[i]);
            go(pool, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(pool, size, 0, &mut Vec::new(), &mut out);
    out
}

/// Shuffle composition: grafts `inner` onto the leaf of `outer` labelled
/// `slot` and relabels all leaves per `relabeling`.
pub fn compose(
    outer: &ShuffleTree,
    slot: usize,
    inner: &ShuffleTree,
    relabeling: &Relabeling,
) -> Result<ShuffleTree> {
    let m = outer.arity();
    let k = inner.arity();
    if slot == 0 || slot > m {
        return Err(Error::SlotOutOfRange { slot, arity: m });
    }
    if relabeling.inner.len() != k || relabeling.outer.len() != m - 1 {
        return Err(Error::InvalidComposition(format!(
            "relabeling sizes ({}, {}) do not match arities ({k}, {m})",
            relabeling.inner.len(),
            relabeling.outer.len()
        )));
    }
    let phi = relabeling.outer_map(slot);
    if relabeling.inner.windows(2).any(|p| p[0] >= p[1]) || phi.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::InvalidComposition(
            "relabeling is not a shuffle".into(),
        ));
    }
    let mut all: Vec<u32> = relabeling
        .inner
        .iter()
        .chain(&relabeling.outer)
        .copied()
        .collect();
    all.sort_unstable();
    if all.iter().enumerate().any(|(i, &l)| l as usize != i + 1) {
        return Err(Error::InvalidComposition("new labels are not 1..=n".into()));
    }
    let grafted = inner.map_leaves(&|l| relabeling.inner[l as usize - 1]);
    let result = graft_at_label(outer, slot as u32, &grafted, &phi);
    if !validate_tree(&result) {
        return Err(Error::InvalidComposition(format!(
            "{result} violates the shuffle condition"
        )));
    }
    Ok(result)
}

fn graft_at_label(t: &ShuffleTree, slot: u32, grafted: &ShuffleTree, phi: &[u32]) -> ShuffleTree {
    match t {
        ShuffleTree::Leaf(l) if *l == slot => grafted.clone(),
        ShuffleTree::Leaf(l) => ShuffleTree::Leaf(phi[*l as usize - 1]),
        ShuffleTree::Node(g, children) => ShuffleTree::Node(
            g.clone(),
            children
                .iter()
                .map(|c| graft_at_label(c, slot, grafted, phi))
                .collect(),
        ),
    }
}

/// An embedding of `pattern` as a divisor of `host`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Occurrence {
    host: ShuffleTree,
    pattern: ShuffleTree,
    vertex_map: Vec<VertexPath>,
    inputs: Vec<VertexPath>,
}

impl Occurrence {
    pub fn host(&self) -> &ShuffleTree {
        &self.host
    }

    pub fn pattern(&self) -> &ShuffleTree {
        &self.pattern
    }

    /// Host vertex receiving the pattern root.
    pub fn anchor(&self) -> &VertexPath {
        &self.vertex_map[0]
    }

    /// Host paths of the pattern's internal vertices, in pattern preorder.
    pub fn vertex_map(&self) -> &[VertexPath] {
        &self.vertex_map
    }

    /// `inputs()[j - 1]` is the host subtree plugged into pattern leaf `j`.
    pub fn inputs(&self) -> &[VertexPath] {
        &self.inputs
    }

    /// Replaces the matched region by `replacement`, feeding the matched
    /// input subtrees into its leaves.
    pub fn substitute(&self, replacement: &ShuffleTree) -> Result<ShuffleTree> {
        if replacement.arity() != self.pattern.arity() {
            return Err(Error::ArityMismatch(
                replacement.arity(),
                self.pattern.arity(),
            ));
        }
        let subs: Vec<&ShuffleTree> = self
            .inputs
            .iter()
            .map(|p| {
                self.host
                    .subtree(p)
                    .expect("occurrence inputs lie in the host")
            })
            .collect();
        let region = replacement.graft_leaves(&subs);
        Ok(self.host.replace_at(self.anchor(), region))
    }
}

fn match_region(
    host: &ShuffleTree,
    pattern: &ShuffleTree,
    path: &mut VertexPath,
    vertex_map: &mut Vec<VertexPath>,
    inputs: &mut [Option<(VertexPath, u32)>],
) -> bool {
    match pattern {
        ShuffleTree::Leaf(j) => {
            inputs[*j as usize - 1] = Some((path.clone(), host.min_leaf()));
            true
        }
        ShuffleTree::Node(pg, pc) => match host {
            ShuffleTree::Node(hg, hc) if hg == pg && hc.len() == pc.len() => {
                vertex_map.push(path.clone());
                for (i, (h, p)) in hc.iter().zip(pc).enumerate() {
                    path.push(i);
                    let ok = match_region(h, p, path, vertex_map, inputs);
                    path.pop();
                    if !ok {
                        return false;
                    }
                }
                true
            }
            _ => false,
        },
    }
}

/// The occurrence of `pattern` anchored at the host vertex `path`, if any.
/// Matching is structural, so there is at most one per vertex.
pub fn occurrence_at(
    host: &ShuffleTree,
    path: &[usize],
    pattern: &ShuffleTree,
) -> Option<Occurrence> {
    if pattern.is_leaf() {
        return None;
    }
    let sub = host.subtree(path)?;
    let mut vertex_map = Vec::new();
    let mut inputs = vec![None; pattern.arity()];
    let mut cur = path.to_vec();
    if !match_region(sub, pattern, &mut cur, &mut vertex_map, &mut inputs) {
        return None;
    }
    let inputs: Vec<(VertexPath, u32)> = inputs.into_iter().collect::<Option<_>>()?;
    if inputs.windows(2).any(|p| p[0].1 >= p[1].1) {
        return None;
    }
    Some(Occurrence {
        host: host.clone(),
        pattern: pattern.clone(),
        vertex_map,
        inputs: inputs.into_iter().map(|(p, _)| p).collect(),
    })
}

/// All occurrences of `pattern` in `host`, ordered by anchor in preorder.
pub fn find_occurrences(host: &ShuffleTree, pattern: &ShuffleTree) -> Vec<Occurrence> {
    host.vertex_paths()
        .iter()
        .filter_map(|p| occurrence_at(host, p, pattern))
        .collect()
}

/// Allocation-light divisibility test. Returns the minimal leaf of the
/// matched tree when `pattern` matches at the root of `host`.
fn matches_at_root(host: &ShuffleTree, pattern: &ShuffleTree, mins: &mut [u32]) -> bool {
    match pattern {
        ShuffleTree::Leaf(j) => {
            mins[*j as usize - 1] = host.min_leaf();
            true
        }
        ShuffleTree::Node(pg, pc) => match host {
            ShuffleTree::Node(hg, hc) if hg == pg => {
                hc.iter().zip(pc).all(|(h, p)| matches_at_root(h, p, mins))
            }
            _ => false,
        },
    }
}

pub fn divides(host: &ShuffleTree, pattern: &ShuffleTree) -> bool {
    fn go(host: &ShuffleTree, pattern: &ShuffleTree, mins: &mut [u32]) -> bool {
        match host {
            ShuffleTree::Leaf(_) => false,
            ShuffleTree::Node(_, children) => {
                (matches_at_root(host, pattern, mins) && mins.windows(2).all(|p| p[0] < p[1]))
                    || children.iter().any(|c| go(c, pattern, mins))
            }
        }
    }
    if pattern.is_leaf() {
        return false;
    }
    let mut mins = vec![0; pattern.arity()];
    go(host, pattern, &mut mins)
}

/// A small common multiple of two tree monomials: `tree` is the union of
/// the two occurrences, which share at least one internal vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Overlap {
    pub tree: ShuffleTree,
    pub first: Occurrence,
    pub second: Occurrence,
}

impl Overlap {
    /// Canonical serialization used for ordering and deduplication.
    pub fn key(&self) -> String {
        format!(
            "{}|{}|{}",
            self.tree,
            path_string(self.first.anchor()),
            path_string(self.second.anchor())
        )
    }

    pub fn arity(&self) -> usize {
        self.tree.arity()
    }
}

pub fn path_string(path: &[usize]) -> String {
    if path.is_empty() {
        return "r".to_string();
    }
    path.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(".")
}

#[derive(Clone, Debug)]
enum Shape {
    Input,
    Node(Generator, Vec<Shape>),
}

impl Shape {
    fn of(t: &ShuffleTree) -> Shape {
        match t {
            ShuffleTree::Leaf(_) => Shape::Input,
            ShuffleTree::Node(g, c) => Shape::Node(g.clone(), c.iter().map(Shape::of).collect()),
        }
    }

    fn inputs(&self) -> usize {
        match self {
            Shape::Input => 1,
            Shape::Node(_, c) => c.iter().map(Shape::inputs).sum(),
        }
    }

    /// Lays `pattern` over `self`, extending it below its inputs.
    fn merge(&self, pattern: &ShuffleTree) -> Option<Shape> {
        match (self, pattern) {
            (_, ShuffleTree::Leaf(_)) => Some(self.clone()),
            (Shape::Input, _) => Some(Shape::of(pattern)),
            (Shape::Node(g, c), ShuffleTree::Node(pg, pc)) => {
                if g != pg || c.len() != pc.len() {
                    return None;
                }
                let merged = c
                    .iter()
                    .zip(pc)
                    .map(|(s, p)| s.merge(p))
                    .collect::<Option<Vec<_>>>()?;
                Some(Shape::Node(g.clone(), merged))
            }
        }
    }

    fn merge_at(&self, path: &[usize], pattern: &ShuffleTree) -> Option<Shape> {
        match path.split_first() {
            None => match self {
                Shape::Node(..) => self.merge(pattern),
                Shape::Input => None,
            },
            Some((&i, rest)) => match self {
                Shape::Node(g, c) => {
                    let mut c = c.clone();
                    c[i] = c[i].merge_at(rest, pattern)?;
                    Some(Shape::Node(g.clone(), c))
                }
                Shape::Input => None,
            },
        }
    }

    fn label(&self, labels: &[u32], next: &mut usize) -> ShuffleTree {
        match self {
            Shape::Input => {
                *next += 1;
                ShuffleTree::Leaf(labels[*next - 1])
            }
            Shape::Node(g, c) => {
                ShuffleTree::Node(g.clone(), c.iter().map(|s| s.label(labels, next)).collect())
            }
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<u32>> {
    fn go(rest: &mut Vec<u32>, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            go(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    go(&mut (1..=n as u32).collect(), &mut Vec::new(), &mut out);
    out
}

/// All small common multiples of `p1` and `p2` of arity at most `max_arity`,
/// sorted by (arity, canonical key). The trivial self-overlap of a pattern
/// with itself at the same anchor is excluded.
pub fn enumerate_overlaps(p1: &ShuffleTree, p2: &ShuffleTree, max_arity: usize) -> Vec<Overlap> {
    let mut found: BTreeMap<(usize, String), Overlap> = BTreeMap::new();
    if p1.is_leaf() || p2.is_leaf() {
        return Vec::new();
    }
    // (base, grafted, base_is_first): the grafted pattern's root sits on a
    // vertex of the base pattern.
    let placements = [(p1, p2, true), (p2, p1, false)];
    for (base, other, base_is_first) in placements {
        let base_shape = Shape::of(base);
        for path in base.vertex_paths() {
            if !base_is_first && path.is_empty() {
                continue;
            }
            let Some(shape) = base_shape.merge_at(&path, other) else {
                continue;
            };
            let n = shape.inputs();
            if n > max_arity {
                continue;
            }
            for labels in permutations(n) {
                let tree = shape.label(&labels, &mut 0);
                if !validate_tree(&tree) {
                    continue;
                }
                let (Some(ob), Some(oo)) = (
                    occurrence_at(&tree, &[], base),
                    occurrence_at(&tree, &path, other),
                ) else {
                    continue;
                };
                let (first, second) = if base_is_first { (ob, oo) } else { (oo, ob) };
                if p1 == p2 && first.anchor() == second.anchor() {
                    continue;
                }
                let overlap = Overlap {
                    tree,
                    first,
                    second,
                };
                found
                    .entry((overlap.arity(), overlap.key()))
                    .or_insert(overlap);
            }
        }
    }
    found.into_values().collect()
}

/// Every tree monomial of the given arity, each once, in a deterministic
/// order. Arity 1 yields the bare leaf.
pub fn enumerate_trees(generators: &[Generator], arity: usize) -> Result<Vec<ShuffleTree>> {
    if arity == 0 {
        return Err(Error::UnsupportedArity(0));
    }
    if let Some(g) = generators.iter().find(|g| g.arity() < 2) {
        return Err(Error::UnsupportedArity(g.arity()));
    }
    let mut memo: Vec<Vec<ShuffleTree>> = vec![Vec::new(), vec![ShuffleTree::Leaf(1)]];
    for n in 2..=arity {
        let mut trees = Vec::new();
        for g in generators {
            if g.arity() > n {
                continue;
            }
            for blocks in set_partitions(n, g.arity()) {
                let options: Vec<Vec<ShuffleTree>> = blocks
                    .iter()
                    .map(|b| {
                        memo[b.len()]
                            .iter()
                            .map(|t| t.map_leaves(&|l| b[l as usize - 1]))
                            .collect()
                    })
                    .collect();
                for_each_product(&options, &mut |children| {
                    trees.push(ShuffleTree::Node(g.clone(), children.to_vec()));
                });
            }
        }
        memo.push(trees);
    }
    Ok(memo.swap_remove(arity))
}

/// Set partitions of `1..=n` into exactly `k` blocks, blocks sorted by
/// their minima.
pub(crate) fn set_partitions(n: usize, k: usize) -> Vec<Vec<Vec<u32>>> {
    fn go(i: u32, n: u32, k: usize, blocks: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<Vec<u32>>>) {
        if i > n {
            if blocks.len() == k {
                out.push(blocks.clone());
            }
            return;
        }
        if blocks.len() + ((n - i + 1) as usize) < k {
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            go(i + 1, n, k, blocks, out);
            blocks[b].pop();
        }
        if blocks.len() < k {
            blocks.push(vec![i]);
            go(i + 1, n, k, blocks, out);
            blocks.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n as u32, k, &mut Vec::new(), &mut out);
    out
}

pub(crate) fn for_each_product<T: Clone>(options: &[Vec<T>], f: &mut impl FnMut(&[T])) {
    fn go<T: Clone>(options: &[Vec<T>], cur: &mut Vec<T>, f: &mut impl FnMut(&[T])) {
        if cur.len() == options.len() {
            f(cur);
            return;
        }
        for x in &options[cur.len()] {
            cur.push(x.clone());
            go(options, cur, f);
            cur.pop();
        }
    }
    go(options, &mut Vec::with_capacity(options.len()), f);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(name: &str) -> Generator {
        Generator::binary(name, SignSymmetry::None)
    }

    fn n(gen: &str, children: Vec<ShuffleTree>) -> ShuffleTree {
        ShuffleTree::Node(g(gen), children)
    }

    fn l(x: u32) -> ShuffleTree {
        ShuffleTree::Leaf(x)
    }

    #[test]
    fn validate_examples() {
        assert!(validate_tree(&n("mu", vec![l(1), l(2)])));
        assert!(!validate_tree(&n("mu", vec![l(2), l(1)])));
        assert!(validate_tree(&n("a", vec![n("b", vec![l(1), l(3)]), l(2)])));
        assert!(!validate_tree(&n("a", vec![l(1), l(3)])));
        assert!(!validate_tree(&ShuffleTree::Node(g("mu"), vec![l(1)])));
        assert!(ShuffleTree::node(g("mu"), vec![l(2), l(1)]).is_err());
    }

    #[test]
    fn compose_examples() {
        let outer = ShuffleTree::corolla(&g("a"));
        let inner = ShuffleTree::corolla(&g("b"));
        let r = Relabeling {
            inner: vec![1, 3],
            outer: vec![2],
        };
        assert_eq!(
            compose(&outer, 1, &inner, &r).unwrap(),
            n("a", vec![n("b", vec![l(1), l(3)]), l(2)])
        );

        let unit = compose(&l(1), 1, &inner, &Relabeling::identity(1, 1, 2).unwrap()).unwrap();
        assert_eq!(unit, inner);

        let t = compose(
            &ShuffleTree::corolla(&g("mu")),
            2,
            &ShuffleTree::corolla(&g("lam")),
            &Relabeling::identity(2, 2, 2).unwrap(),
        )
        .unwrap();
        assert_eq!(t, n("mu", vec![l(1), n("lam", vec![l(2), l(3)])]));
        assert!(validate_tree(&t));
        assert_eq!(t.leaves(), vec![1, 2, 3]);
    }

    #[test]
    fn compose_errors() {
        let c = ShuffleTree::corolla(&g("mu"));
        assert!(matches!(
            compose(&c, 3, &c, &Relabeling::identity(2, 2, 2).unwrap()),
            Err(Error::SlotOutOfRange { .. })
        ));
        // slot 2 carrying label 1 while the outer leaf 1 carries 2
        let bad = Relabeling {
            inner: vec![1, 3],
            outer: vec![2],
        };
        assert!(matches!(
            compose(&c, 2, &c, &bad),
            Err(Error::InvalidComposition(_))
        ));
        let not_monotone = Relabeling {
            inner: vec![3, 2],
            outer: vec![1],
        };
        assert!(compose(&c, 2, &c, &not_monotone).is_err());
    }

    #[test]
    fn occurrences() {
        let host = n("mu", vec![l(1), n("lam", vec![l(2), l(3)])]);
        let pat = ShuffleTree::corolla(&g("lam"));
        let occ = find_occurrences(&host, &pat);
        assert_eq!(occ.len(), 1);
        assert_eq!(occ[0].anchor(), &vec![1]);
        assert!(find_occurrences(&ShuffleTree::corolla(&g("mu")), &pat).is_empty());
        assert_eq!(find_occurrences(&host, &host).len(), 1);
        assert!(divides(&host, &pat));
        assert!(!divides(&ShuffleTree::corolla(&g("mu")), &pat));
    }

    #[test]
    fn occurrence_respects_leaf_order() {
        // lam(mu(1, 3), 2) contains mu(1, 2) at the lam-child but
        // lam(1, 2) only at the root
        let host = n("lam", vec![n("mu", vec![l(1), l(3)]), l(2)]);
        let pat = n("lam", vec![n("mu", vec![l(1), l(2)]), l(3)]);
        assert!(find_occurrences(&host, &pat).is_empty());
        let pat = n("lam", vec![n("mu", vec![l(1), l(3)]), l(2)]);
        assert_eq!(find_occurrences(&host, &pat).len(), 1);
    }

    #[test]
    fn enumerate_counts() {
        let mu = g("mu");
        let trees = enumerate_trees(std::slice::from_ref(&mu), 3).unwrap();
        assert_eq!(trees.len(), 3);
        assert!(trees.contains(&n("mu", vec![l(1), n("mu", vec![l(2), l(3)])])));
        assert!(trees.contains(&n("mu", vec![n("mu", vec![l(1), l(2)]), l(3)])));
        assert!(trees.contains(&n("mu", vec![n("mu", vec![l(1), l(3)]), l(2)])));
        let two = [mu, g("lam")];
        assert_eq!(enumerate_trees(&two, 2).unwrap().len(), 2);
        assert_eq!(enumerate_trees(&two, 3).unwrap().len(), 12);
        assert!(
            enumerate_trees(&[Generator::new("u", 1, SignSymmetry::None).unwrap()], 2).is_err()
        );
    }

    #[test]
    fn relabeling_fibers() {
        let r = Relabeling {
            inner: vec![1, 3],
            outer: vec![2],
        };
        assert_eq!(r.fiber_map(1), vec![1, 2, 1]);
        assert_eq!(Relabeling::all_shuffles(2, 1, 2).len(), 2);
    }
}
