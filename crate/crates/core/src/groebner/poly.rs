use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::order::MonomialOrder;
use crate::tree::{Generator, Occurrence, ShuffleTree};

pub type Coeff = BigRational;

/// A finite linear combination of tree monomials of one arity with exact
/// rational coefficients. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TreePolynomial {
    arity: usize,
    terms: BTreeMap<ShuffleTree, Coeff>,
}

impl TreePolynomial {
    pub fn zero(arity: usize) -> Self {
        TreePolynomial {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(t: ShuffleTree) -> Self {
        let mut p = TreePolynomial::zero(t.arity());
        p.terms.insert(t, Coeff::one());
        p
    }

    /// Sums the given terms; fails on an empty list or mixed arities.
    pub fn from_terms(terms: impl IntoIterator<Item = (ShuffleTree, Coeff)>) -> Result<Self> {
        let mut iter = terms.into_iter().peekable();
        let arity = iter.peek().ok_or(Error::ZeroPolynomial)?.0.arity();
        let mut p = TreePolynomial::zero(arity);
        for (t, c) in iter {
            if t.arity() != arity {
                return Err(Error::ArityMismatch(arity, t.arity()));
            }
            p.add_term(t, c);
        }
        Ok(p)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Same as [`TreePolynomial::is_zero`].
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ShuffleTree, &Coeff)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, t: &ShuffleTree) -> Coeff {
        self.terms.get(t).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn generators(&self) -> BTreeSet<Generator> {
        self.terms.keys().flat_map(|t| t.generators()).collect()
    }

    pub fn add_term(&mut self, t: ShuffleTree, c: Coeff) {
        debug_assert_eq!(t.arity(), self.arity);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(t) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &TreePolynomial, factor: &Coeff) {
        for (t, c) in &other.terms {
            self.add_term(t.clone(), c * factor);
        }
    }

    pub fn scaled(&self, factor: &Coeff) -> TreePolynomial {
        let mut p = TreePolynomial::zero(self.arity);
        p.add_scaled(self, factor);
        p
    }

    pub fn minus(&self, other: &TreePolynomial) -> TreePolynomial {
        let mut p = self.clone();
        p.add_scaled(other, &-Coeff::one());
        p
    }

    pub(crate) fn remove(&mut self, t: &ShuffleTree) -> Option<Coeff> {
        self.terms.remove(t)
    }

    /// Maximal term under `order` together with its coefficient.
    pub fn leading(&self, order: &MonomialOrder) -> Result<(&ShuffleTree, &Coeff)> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(a.0, b.0))
            .ok_or(Error::ZeroPolynomial)
    }

    /// Scaled so that the leading coefficient is 1.
    pub fn monic(&self, order: &MonomialOrder) -> Result<TreePolynomial> {
        let (_, c) = self.leading(order)?;
        Ok(self.scaled(&c.recip()))
    }

    /// The polynomial obtained by substituting every term of `self` for the
    /// pattern matched by `occurrence`.
    pub fn lift(&self, occurrence: &Occurrence) -> Result<TreePolynomial> {
        let mut p = TreePolynomial::zero(occurrence.host().arity());
        for (t, c) in &self.terms {
            p.add_term(occurrence.substitute(t)?, c.clone());
        }
        Ok(p)
    }

    /// Terms from largest to smallest under `order`.
    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<(&ShuffleTree, &Coeff)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| order.cmp(b.0, a.0));
        v
    }

    pub fn display_ordered(&self, order: &MonomialOrder) -> String {
        format_terms(self.sorted_terms(order))
    }
}

/// Rational in `p/q` form (integers print without a denominator).
pub fn coeff_string(c: &Coeff) -> String {
    c.to_string()
}

fn format_terms<'a>(terms: impl IntoIterator<Item = (&'a ShuffleTree, &'a Coeff)>) -> String {
    let mut out = String::new();
    for (i, (t, c)) in terms.into_iter().enumerate() {
        let negative = c.is_negative();
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let magnitude = c.abs();
        if !magnitude.is_one() {
            out.push_str(&format!("{magnitude}*"));
        }
        out.push_str(&t.to_string());
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for TreePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_terms(self.terms.iter()))
    }
}

/// The maximal term of `p` under `order`.
pub fn leading_monomial(p: &TreePolynomial, order: &MonomialOrder) -> Result<ShuffleTree> {
    Ok(p.leading(order)?.0.clone())
}
