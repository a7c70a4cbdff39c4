use num_traits::Zero;

use super::poly::TreePolynomial;
use crate::error::{Error, Result};
use crate::order::MonomialOrder;
use crate::tree::{divides, find_occurrences, Overlap, ShuffleTree};

/// Basis elements prepared for division: monic, with cached leading terms.
#[derive(Clone, Debug)]
pub struct Reducer<'a> {
    order: &'a MonomialOrder,
    basis: Vec<(TreePolynomial, ShuffleTree)>,
}

impl<'a> Reducer<'a> {
    pub fn new(basis: &[TreePolynomial], order: &'a MonomialOrder) -> Result<Self> {
        let basis = basis
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| {
                let monic = g.monic(order)?;
                let lead = monic.leading(order)?.0.clone();
                Ok((monic, lead))
            })
            .collect::<Result<_>>()?;
        Ok(Reducer { order, basis })
    }

    pub fn push(&mut self, g: &TreePolynomial) -> Result<()> {
        let monic = g.monic(self.order)?;
        let lead = monic.leading(self.order)?.0.clone();
        self.basis.push((monic, lead));
        Ok(())
    }

    pub fn leading_terms(&self) -> impl Iterator<Item = &ShuffleTree> {
        self.basis.iter().map(|(_, lt)| lt)
    }

    fn divisor_of(&self, t: &ShuffleTree) -> Option<usize> {
        self.basis
            .iter()
            .position(|(_, lt)| lt.arity() <= t.arity() && divides(t, lt))
    }

    /// Full reduction: the result has no term divisible by a basis leading
    /// term and differs from `p` by an element of the generated ideal.
    pub fn reduce(&self, p: &TreePolynomial) -> Result<TreePolynomial> {
        let mut rest = p.clone();
        let mut out = TreePolynomial::zero(p.arity());
        while !rest.is_zero() {
            let (lt, c) = {
                let (t, c) = rest.leading(self.order)?;
                (t.clone(), c.clone())
            };
            match self.divisor_of(&lt) {
                Some(i) => {
                    let (g, pattern) = &self.basis[i];
                    let occ = find_occurrences(&lt, pattern)
                        .into_iter()
                        .next()
                        .expect("divides() found an occurrence");
                    let lifted = g.lift(&occ)?;
                    rest.add_scaled(&lifted, &-c);
                    debug_assert!(rest.coefficient(&lt).is_zero());
                }
                None => {
                    rest.remove(&lt);
                    out.add_term(lt, c);
                }
            }
        }
        Ok(out)
    }
}

pub fn reduce(
    p: &TreePolynomial,
    basis: &[TreePolynomial],
    order: &MonomialOrder,
) -> Result<TreePolynomial> {
    Reducer::new(basis, order)?.reduce(p)
}

/// Difference of the liftings of `p1` and `p2` to the overlap tree, each
/// divided by its leading coefficient so the common leading term cancels.
pub fn s_polynomial(
    p1: &TreePolynomial,
    p2: &TreePolynomial,
    overlap: &Overlap,
    order: &MonomialOrder,
) -> Result<TreePolynomial> {
    let (lt1, c1) = p1.leading(order)?;
    let (lt2, c2) = p2.leading(order)?;
    if overlap.first.pattern() != lt1 || overlap.second.pattern() != lt2 {
        return Err(Error::NotAnOverlap(format!(
            "overlap patterns {} / {} are not the leading terms {lt1} / {lt2}",
            overlap.first.pattern(),
            overlap.second.pattern()
        )));
    }
    if overlap.first.host() != &overlap.tree || overlap.second.host() != &overlap.tree {
        return Err(Error::NotAnOverlap(format!(
            "occurrences do not live in {}",
            overlap.tree
        )));
    }
    let mut s = p1.lift(&overlap.first)?.scaled(&c1.recip());
    s.add_scaled(&p2.lift(&overlap.second)?, &-c2.recip());
    Ok(s)
}
