//! Operad presentations: built-in Com, Ass, Lie and Poisson, expansion of
//! symmetric relations into shuffle relations, and a small text format.
//!
//! ```text
//! # Poisson
//! generators:
//!   mu 2 symmetric
//!   lam 2 skew
//! relations:
//!   symmetric: mu(mu(a1, a2), a3) = mu(a1, mu(a2, a3))
//!   lam(1, mu(2, 3)) = mu(lam(1, 2), 3) + mu(lam(1, 3), 2)
//! ```

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::groebner::{Coeff, Echelon, TreePolynomial};
use crate::syntax::{parse_polynomial, parse_raw_relation, raw_to_planar};
use crate::tree::{Generator, ShuffleTree, SignSymmetry};

/// A relation between composites written with placeholders `a1, …, an` in
/// any order. Terms are planar trees that need not satisfy the shuffle
/// condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricRelation {
    text: String,
    arity: usize,
    terms: Vec<(Coeff, ShuffleTree)>,
}

impl SymmetricRelation {
    pub fn parse(s: &str, generators: &[Generator]) -> Result<Self> {
        let raw = parse_raw_relation(s)?;
        if raw.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        let mut terms = Vec::with_capacity(raw.len());
        let mut arity = None;
        for (c, r) in raw {
            let t = raw_to_planar(&r, generators)?;
            let mut leaves = t.leaves();
            leaves.sort_unstable();
            let n = leaves.len();
            if leaves != (1..=n as u32).collect::<Vec<_>>() {
                return Err(Error::InvalidTree(format!(
                    "{t}: placeholders must be a1..a{n}, each used once"
                )));
            }
            match arity {
                None => arity = Some(n),
                Some(a) if a != n => return Err(Error::ArityMismatch(a, n)),
                _ => {}
            }
            terms.push((c, t));
        }
        Ok(SymmetricRelation {
            text: s.trim().to_string(),
            arity: arity.expect("nonempty"),
            terms,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn terms(&self) -> &[(Coeff, ShuffleTree)] {
        &self.terms
    }
}

impl fmt::Display for SymmetricRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// What became of one leaf relabeling of a symmetric relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpandedRelation {
    /// Image of placeholder `a_i` is leaf `relabeling[i - 1]`.
    pub relabeling: Vec<u32>,
    pub relation: TreePolynomial,
    pub kept: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub source: String,
    pub expansions: Vec<ExpandedRelation>,
}

impl Provenance {
    pub fn kept(&self) -> impl Iterator<Item = &TreePolynomial> {
        self.expansions
            .iter()
            .filter(|e| e.kept)
            .map(|e| &e.relation)
    }

    pub fn discarded(&self) -> impl Iterator<Item = &ExpandedRelation> {
        self.expansions.iter().filter(|e| !e.kept)
    }
}

/// How a binary generator behaves when its two arguments are swapped:
/// the generator to use instead and the sign picked up.
type Opposite<'a> = dyn Fn(&Generator) -> Result<(Generator, i64)> + 'a;

fn sign_opposite(g: &Generator) -> Result<(Generator, i64)> {
    match g.symmetry().swap_sign() {
        Some(s) => Ok((g.clone(), s)),
        None => Err(Error::UnknownSymmetry(g.name().to_string())),
    }
}

/// Brings a planar tree into shuffle form by swapping the arguments of
/// binary vertices. Returns the accumulated sign.
fn normalize(t: &ShuffleTree, opposite: &Opposite<'_>) -> Result<(i64, ShuffleTree)> {
    match t {
        ShuffleTree::Leaf(l) => Ok((1, ShuffleTree::Leaf(*l))),
        ShuffleTree::Node(g, children) => {
            if g.arity() != 2 {
                return Err(Error::UnsupportedArity(g.arity()));
            }
            let (s0, c0) = normalize(&children[0], opposite)?;
            let (s1, c1) = normalize(&children[1], opposite)?;
            let sign = s0 * s1;
            if c0.min_leaf() < c1.min_leaf() {
                Ok((sign, ShuffleTree::Node(g.clone(), vec![c0, c1])))
            } else {
                let (h, s) = opposite(g)?;
                Ok((sign * s, ShuffleTree::Node(h, vec![c1, c0])))
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

fn expand_with(rel: &SymmetricRelation, opposite: &Opposite<'_>) -> Result<Provenance> {
    let mut ech: Echelon<ShuffleTree> = Echelon::new();
    let mut expansions = Vec::new();
    for perm in permutations(rel.arity) {
        let mut p = TreePolynomial::zero(rel.arity);
        for (c, t) in &rel.terms {
            let relabeled = t.map_leaves(&|l| perm[l as usize - 1]);
            let (sign, tree) = normalize(&relabeled, opposite)?;
            p.add_term(tree, c * Coeff::from_integer(sign.into()));
        }
        let row: BTreeMap<ShuffleTree, Coeff> =
            p.terms().map(|(t, c)| (t.clone(), c.clone())).collect();
        let kept = !p.is_zero() && ech.insert(row);
        expansions.push(ExpandedRelation {
            relabeling: perm,
            relation: p,
            kept,
        });
    }
    Ok(Provenance {
        source: rel.text.clone(),
        expansions,
    })
}

/// Expansion with the full record of every leaf relabeling.
pub fn expand_symmetric_traced(rel: &SymmetricRelation) -> Result<Provenance> {
    expand_with(rel, &sign_opposite)
}

/// Shuffle relations generated by a symmetric relation on binary
/// generators with sign symmetry. Relabelings are tried in lexicographic
/// order and a relation is kept when it is independent of those already
/// kept, so the result is a basis of the span of all relabelings.
pub fn expand_symmetric(rel: &SymmetricRelation) -> Result<Vec<TreePolynomial>> {
    Ok(expand_symmetric_traced(rel)?.kept().cloned().collect())
}

#[derive(Clone, Debug)]
pub struct OperadPresentation {
    pub name: String,
    pub generators: Vec<Generator>,
    pub shuffle_relations: Vec<TreePolynomial>,
    pub provenance: Vec<Provenance>,
}

impl OperadPresentation {
    pub fn new(name: &str, generators: Vec<Generator>) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if g.arity() < 2 {
                return Err(Error::UnsupportedArity(g.arity()));
            }
            if generators[..i].iter().any(|h| h.name() == g.name()) {
                return Err(Error::WrongSignature(format!(
                    "generator '{}' declared twice",
                    g.name()
                )));
            }
        }
        Ok(OperadPresentation {
            name: name.to_string(),
            generators,
            shuffle_relations: Vec::new(),
            provenance: Vec::new(),
        })
    }

    pub fn add_shuffle_relation(&mut self, p: TreePolynomial) -> Result<()> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if let Some(g) = p
            .generators()
            .into_iter()
            .find(|g| !self.generators.contains(g))
        {
            return Err(Error::UnknownName(g.name().to_string()));
        }
        self.shuffle_relations.push(p);
        Ok(())
    }

    pub fn add_symmetric(&mut self, text: &str) -> Result<()> {
        let rel = SymmetricRelation::parse(text, &self.generators)?;
        let prov = expand_symmetric_traced(&rel)?;
        self.shuffle_relations.extend(prov.kept().cloned());
        self.provenance.push(prov);
        Ok(())
    }

    /// Sub-presentation keeping the named generators and the relations
    /// that only involve them.
    pub fn restrict(&self, name: &str, keep: &[&str]) -> OperadPresentation {
        let generators: Vec<Generator> = self
            .generators
            .iter()
            .filter(|g| keep.contains(&g.name()))
            .cloned()
            .collect();
        let uses_only_kept =
            |p: &TreePolynomial| p.generators().iter().all(|g| keep.contains(&g.name()));
        OperadPresentation {
            name: name.to_string(),
            shuffle_relations: self
                .shuffle_relations
                .iter()
                .filter(|p| uses_only_kept(p))
                .cloned()
                .collect(),
            provenance: self
                .provenance
                .iter()
                .filter(|pr| pr.kept().all(uses_only_kept))
                .cloned()
                .collect(),
            generators,
        }
    }

    /// Parses the line-oriented presentation format.
    pub fn parse(name: &str, text: &str) -> Result<Self> {
        enum Section {
            Top,
            Generators,
            Relations,
        }
        let mut section = Section::Top;
        let mut generators = Vec::new();
        let mut pres: Option<OperadPresentation> = None;
        let mut offset = 0;
        for line in text.lines() {
            let pos = offset;
            offset += line.len() + 1;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let at = |e: Error| match e {
                Error::Parse { pos: p, msg } => Error::Parse { pos: pos + p, msg },
                other => other,
            };
            match body {
                "generators:" => {
                    if pres.is_some() {
                        return Err(Error::Parse {
                            pos,
                            msg: "generators must come before relations".into(),
                        });
                    }
                    section = Section::Generators;
                    continue;
                }
                "relations:" => {
                    pres = Some(
                        OperadPresentation::new(name, std::mem::take(&mut generators))
                            .map_err(at)?,
                    );
                    section = Section::Relations;
                    continue;
                }
                _ => {}
            }
            match section {
                Section::Top => {
                    return Err(Error::Parse {
                        pos,
                        msg: format!("expected 'generators:' or 'relations:', found '{body}'"),
                    })
                }
                Section::Generators => {
                    generators.push(parse_generator(body).map_err(|msg| Error::Parse { pos, msg })?)
                }
                Section::Relations => {
                    let p = pres.as_mut().expect("relations section opened");
                    if let Some(rest) = body.strip_prefix("symmetric:") {
                        p.add_symmetric(rest).map_err(at)?;
                    } else {
                        let poly = parse_polynomial(body, &p.generators).map_err(at)?;
                        if !poly.is_zero() {
                            p.add_shuffle_relation(poly).map_err(at)?;
                        }
                    }
                }
            }
        }
        match pres {
            Some(p) => Ok(p),
            None => OperadPresentation::new(name, generators),
        }
    }
}

fn parse_generator(line: &str) -> std::result::Result<Generator, String> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    let (name, arity, symmetry) = match fields.as_slice() {
        [n, a] => (*n, *a, "none"),
        [n, a, s] => (*n, *a, *s),
        _ => return Err(format!("expected 'name arity [symmetry]', found '{line}'")),
    };
    let arity: usize = arity.parse().map_err(|_| format!("bad arity '{arity}'"))?;
    if arity < 2 {
        return Err(format!(
            "generator '{name}' has arity {arity}; only arity >= 2 is supported"
        ));
    }
    let symmetry: SignSymmetry = symmetry.parse().map_err(|e: Error| e.to_string())?;
    if symmetry != SignSymmetry::None && arity != 2 {
        return Err(format!(
            "sign symmetry needs a binary generator, '{name}' has arity {arity}"
        ));
    }
    Generator::new(name, arity, symmetry).map_err(|e| e.to_string())
}

const ASSOCIATIVITY: &str = "mu(mu(a1, a2), a3) = mu(a1, mu(a2, a3))";
const JACOBI: &str = "lam(a1, lam(a2, a3)) = lam(lam(a1, a2), a3) - lam(lam(a1, a3), a2)";
const LEIBNIZ: &str = "lam(a1, mu(a2, a3)) = mu(lam(a1, a2), a3) + mu(lam(a1, a3), a2)";

pub const BUILTIN_NAMES: [&str; 4] = ["com", "ass", "lie", "pois"];

pub fn mu() -> Generator {
    Generator::binary("mu", SignSymmetry::Symmetric)
}

pub fn lam() -> Generator {
    Generator::binary("lam", SignSymmetry::Skew)
}

fn builtin_ass() -> Result<OperadPresentation> {
    let m = Generator::binary("m", SignSymmetry::None);
    let m_op = Generator::binary("m_op", SignSymmetry::None);
    let mut pres = OperadPresentation::new("ass", vec![m.clone(), m_op.clone()])?;
    let rel = SymmetricRelation::parse("m(m(a1, a2), a3) = m(a1, m(a2, a3))", &pres.generators)?;
    let opposite = |g: &Generator| -> Result<(Generator, i64)> {
        Ok((if *g == m { m_op.clone() } else { m.clone() }, 1))
    };
    let prov = expand_with(&rel, &opposite)?;
    pres.shuffle_relations.extend(prov.kept().cloned());
    pres.provenance.push(prov);
    Ok(pres)
}

/// Built-in presentations. `ass` uses a generator `m` without symmetry,
/// whose opposite `m(a2, a1)` becomes the second shuffle generator `m_op`.
pub fn builtin(name: &str) -> Result<OperadPresentation> {
    match name {
        "com" => {
            let mut p = OperadPresentation::new("com", vec![mu()])?;
            p.add_symmetric(ASSOCIATIVITY)?;
            Ok(p)
        }
        "lie" => {
            let mut p = OperadPresentation::new("lie", vec![lam()])?;
            p.add_symmetric(JACOBI)?;
            Ok(p)
        }
        "pois" => {
            let mut p = OperadPresentation::new("pois", vec![mu(), lam()])?;
            p.add_symmetric(ASSOCIATIVITY)?;
            p.add_symmetric(JACOBI)?;
            p.add_symmetric(LEIBNIZ)?;
            Ok(p)
        }
        "ass" => builtin_ass(),
        other => Err(Error::UnknownName(other.to_string())),
    }
}

/// Rank of the span of `polys`.
pub fn span_rank(polys: &[TreePolynomial]) -> usize {
    crate::groebner::polynomial_rank(polys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_polynomial;

    fn pois_gens() -> Vec<Generator> {
        vec![mu(), lam()]
    }

    #[test]
    fn leibniz_expands_to_the_three_displayed_relations() {
        let rel = SymmetricRelation::parse(LEIBNIZ, &pois_gens()).unwrap();
        let got = expand_symmetric(&rel).unwrap();
        let expected = [
            "lam(1, mu(2, 3)) = mu(lam(1, 2), 3) + mu(lam(1, 3), 2)",
            "-lam(mu(1, 3), 2) = -mu(lam(1, 2), 3) + mu(1, lam(2, 3))",
            "-lam(mu(1, 2), 3) = -mu(1, lam(2, 3)) - mu(lam(1, 3), 2)",
        ];
        assert_eq!(got.len(), 3);
        for (g, e) in got.iter().zip(expected) {
            assert_eq!(g, &parse_polynomial(e, &pois_gens()).unwrap());
        }
    }

    #[test]
    fn commutativity_is_absorbed() {
        let rel = SymmetricRelation::parse("mu(a1, a2) - mu(a2, a1)", &pois_gens()).unwrap();
        assert!(expand_symmetric(&rel).unwrap().is_empty());
    }

    #[test]
    fn jacobi_gives_one_relation() {
        let rel = SymmetricRelation::parse(JACOBI, &pois_gens()).unwrap();
        let prov = expand_symmetric_traced(&rel).unwrap();
        assert_eq!(prov.kept().count(), 1);
        assert_eq!(prov.discarded().count(), 5);
    }

    #[test]
    fn builtins() {
        assert_eq!(builtin("pois").unwrap().shuffle_relations.len(), 6);
        assert_eq!(builtin("com").unwrap().shuffle_relations.len(), 2);
        assert_eq!(builtin("lie").unwrap().generators, vec![lam()]);
        assert_eq!(builtin("ass").unwrap().shuffle_relations.len(), 6);
        assert!(matches!(builtin("foo"), Err(Error::UnknownName(_))));
        assert!(builtin("pois")
            .unwrap()
            .shuffle_relations
            .iter()
            .all(|p| p.arity() == 3));
    }

    #[test]
    fn errors() {
        let none = vec![Generator::binary("m", SignSymmetry::None)];
        let rel = SymmetricRelation::parse("m(m(a1, a2), a3) - m(a1, m(a2, a3))", &none).unwrap();
        assert!(matches!(
            expand_symmetric(&rel),
            Err(Error::UnknownSymmetry(_))
        ));
        let ternary = vec![Generator::new("t", 3, SignSymmetry::None).unwrap()];
        let rel = SymmetricRelation::parse("t(a1, a2, a3)", &ternary).unwrap();
        assert!(matches!(
            expand_symmetric(&rel),
            Err(Error::UnsupportedArity(3))
        ));
        assert!(SymmetricRelation::parse("mu(a1, a1)", &pois_gens()).is_err());
    }

    #[test]
    fn file_format() {
        let text = "# Poisson, written out\ngenerators:\n  mu 2 symmetric\n  lam 2 skew\nrelations:\n  symmetric: mu(mu(a1, a2), a3) = mu(a1, mu(a2, a3))\n  symmetric: lam(a1, lam(a2, a3)) = lam(lam(a1, a2), a3) - lam(lam(a1, a3), a2)   # Jacobi\n  lam(1, mu(2, 3)) = mu(lam(1, 2), 3) + mu(lam(1, 3), 2)\n";
        let p = OperadPresentation::parse("custom", text).unwrap();
        assert_eq!(p.generators, pois_gens());
        assert_eq!(p.shuffle_relations.len(), 4);
        let empty =
            OperadPresentation::parse("e", "generators:\n mu 2 symmetric\nrelations:\n").unwrap();
        assert!(empty.shuffle_relations.is_empty());
        assert!(OperadPresentation::parse("bad", "generators:\n u 1\n").is_err());
        assert!(OperadPresentation::parse("bad", "generators:\n mu 2 sym\n").is_err());
        assert!(OperadPresentation::parse(
            "bad",
            "generators:\n mu 2 symmetric\nrelations:\n nu(1, 2)\n"
        )
        .is_err());
    }
}
