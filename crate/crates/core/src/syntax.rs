//! Textual forms of trees and polynomials.
//!
//! Trees are written `mu(1, lam(2, 3))`: generator names are identifiers,
//! leaves are positive integers (or placeholders `a1`, `a2`, … inside
//! symmetric relations). Polynomials are sums of optionally scaled trees,
//! `lam(1, mu(2, 3)) - 1/2*mu(lam(1, 2), 3)`, and relations may be written
//! as equations `lhs = rhs`, meaning `lhs - rhs`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::groebner::TreePolynomial;
use crate::tree::{validate_tree, Generator, ShuffleTree};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Eq,
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '=' => Tok::Eq,
            c if c.is_ascii_digit() => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(s[start..i].to_string())));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(s[start..i].to_string())));
                continue;
            }
            other => {
                return Err(Error::Parse {
                    pos: start,
                    msg: format!("unexpected character '{other}'"),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

/// A parsed term before any generator lookup or validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum RawTerm {
    Leaf(u32),
    Node(String, Vec<RawTerm>),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(s: &str) -> Result<Self> {
        Ok(Parser {
            toks: lex(s)?,
            pos: 0,
            end: s.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {tok:?}"))
        }
    }

    fn done(&self) -> Result<()> {
        if self.pos < self.toks.len() {
            return self.err("trailing input");
        }
        Ok(())
    }

    fn term(&mut self) -> Result<RawTerm> {
        match self.bump() {
            Some(Tok::Int(digits)) => match digits.parse::<u32>() {
                Ok(l) if l >= 1 => Ok(RawTerm::Leaf(l)),
                _ => {
                    self.pos -= 1;
                    self.err("leaf labels are positive integers")
                }
            },
            Some(Tok::Ident(name)) => {
                if self.peek() != Some(&Tok::LParen) {
                    if let Some(l) = placeholder(&name) {
                        return Ok(RawTerm::Leaf(l));
                    }
                    self.pos -= 1;
                    return self.err(format!("'{name}' needs arguments"));
                }
                self.expect(Tok::LParen)?;
                let mut children = vec![self.term()?];
                while self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    children.push(self.term()?);
                }
                self.expect(Tok::RParen)?;
                Ok(RawTerm::Node(name, children))
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                self.err("expected a tree")
            }
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        match self.bump() {
            Some(Tok::Int(d)) => Ok(d.parse().expect("lexer yields digits")),
            _ => {
                self.pos -= 1;
                self.err("expected an integer")
            }
        }
    }

    /// `[coeff '*'] tree`, or a bare coefficient when followed by `/` or `*`.
    fn scaled_term(&mut self) -> Result<(BigRational, RawTerm)> {
        let coefficient_follows = matches!(self.peek(), Some(Tok::Int(_)))
            && matches!(self.peek2(), Some(Tok::Star) | Some(Tok::Slash));
        if !coefficient_follows {
            return Ok((BigRational::one(), self.term()?));
        }
        let num = self.integer()?;
        let den = if self.peek() == Some(&Tok::Slash) {
            self.pos += 1;
            self.integer()?
        } else {
            BigInt::one()
        };
        if den.is_zero() {
            return self.err("zero denominator");
        }
        self.expect(Tok::Star)?;
        Ok((BigRational::new(num, den), self.term()?))
    }

    fn sum(&mut self) -> Result<Vec<(BigRational, RawTerm)>> {
        let mut out = Vec::new();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    BigRational::one()
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    -BigRational::one()
                }
                _ if first => BigRational::one(),
                _ => break,
            };
            first = false;
            let (c, t) = self.scaled_term()?;
            out.push((sign * c, t));
        }
        Ok(out)
    }

    /// `sum` or `sum = sum`; a literal `0` side is allowed.
    fn relation(&mut self) -> Result<Vec<(BigRational, RawTerm)>> {
        let mut lhs = self.side()?;
        if self.peek() == Some(&Tok::Eq) {
            self.pos += 1;
            let rhs = self.side()?;
            lhs.extend(rhs.into_iter().map(|(c, t)| (-c, t)));
        }
        self.done()?;
        Ok(lhs)
    }

    fn side(&mut self) -> Result<Vec<(BigRational, RawTerm)>> {
        if self.peek() == Some(&Tok::Int("0".into()))
            && matches!(self.peek2(), None | Some(Tok::Eq))
        {
            self.pos += 1;
            return Ok(Vec::new());
        }
        self.sum()
    }
}

fn placeholder(name: &str) -> Option<u32> {
    name.strip_prefix('a')?.parse().ok().filter(|&l| l >= 1)
}

pub(crate) fn parse_raw_relation(s: &str) -> Result<Vec<(BigRational, RawTerm)>> {
    Parser::new(s)?.relation()
}

fn lookup<'a>(name: &str, arity: usize, generators: &'a [Generator]) -> Result<&'a Generator> {
    let g = generators
        .iter()
        .find(|g| g.name() == name)
        .ok_or_else(|| Error::UnknownName(name.to_string()))?;
    if g.arity() != arity {
        return Err(Error::InvalidTree(format!(
            "{name} has arity {}, used with {arity} arguments",
            g.arity()
        )));
    }
    Ok(g)
}

pub(crate) fn raw_to_planar(raw: &RawTerm, generators: &[Generator]) -> Result<ShuffleTree> {
    Ok(match raw {
        RawTerm::Leaf(l) => ShuffleTree::Leaf(*l),
        RawTerm::Node(name, children) => ShuffleTree::Node(
            lookup(name, children.len(), generators)?.clone(),
            children
                .iter()
                .map(|c| raw_to_planar(c, generators))
                .collect::<Result<_>>()?,
        ),
    })
}

fn raw_to_tree(raw: &RawTerm, generators: &[Generator]) -> Result<ShuffleTree> {
    let t = raw_to_planar(raw, generators)?;
    if !validate_tree(&t) {
        return Err(Error::InvalidTree(format!("{t} is not a shuffle tree")));
    }
    Ok(t)
}

/// Parses and validates a tree over the given generators.
pub fn parse_tree(s: &str, generators: &[Generator]) -> Result<ShuffleTree> {
    let mut p = Parser::new(s)?;
    let raw = p.term()?;
    p.done()?;
    raw_to_tree(&raw, generators)
}

/// Parses a shuffle relation or polynomial; `lhs = rhs` becomes `lhs - rhs`.
pub fn parse_polynomial(s: &str, generators: &[Generator]) -> Result<TreePolynomial> {
    let terms = parse_raw_relation(s)?;
    if terms.is_empty() {
        return Err(Error::Parse {
            pos: 0,
            msg: "a polynomial needs at least one term (the zero polynomial has no arity)".into(),
        });
    }
    let terms = terms
        .into_iter()
        .map(|(c, raw)| Ok((raw_to_tree(&raw, generators)?, c)))
        .collect::<Result<Vec<_>>>()?;
    TreePolynomial::from_terms(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::SignSymmetry;

    fn gens() -> Vec<Generator> {
        vec![
            Generator::binary("mu", SignSymmetry::Symmetric),
            Generator::binary("lam", SignSymmetry::Skew),
        ]
    }

    #[test]
    fn tree_round_trip() {
        for s in [
            "mu(1, lam(2, 3))",
            "lam(mu(1, 3), 2)",
            "1",
            "mu(lam(1, 3), lam(2, 4))",
        ] {
            assert_eq!(parse_tree(s, &gens()).unwrap().to_string(), s);
        }
        assert_eq!(
            parse_tree("mu( 1,lam(2 ,3) )", &gens())
                .unwrap()
                .to_string(),
            "mu(1, lam(2, 3))"
        );
    }

    #[test]
    fn tree_errors() {
        assert!(matches!(
            parse_tree("mu(2, 1)", &gens()),
            Err(Error::InvalidTree(_))
        ));
        assert!(matches!(
            parse_tree("nu(1, 2)", &gens()),
            Err(Error::UnknownName(_))
        ));
        assert!(matches!(
            parse_tree("mu(1, 2", &gens()),
            Err(Error::Parse { .. })
        ));
        assert!(parse_tree("mu(1, 2, 3)", &gens()).is_err());
        assert!(parse_tree("mu(0, 1)", &gens()).is_err());
        assert!(parse_tree("mu(1, 2) x", &gens()).is_err());
    }

    #[test]
    fn polynomials() {
        let p = parse_polynomial(
            "lam(1, mu(2, 3)) = mu(lam(1, 2), 3) + mu(lam(1, 3), 2)",
            &gens(),
        )
        .unwrap();
        assert_eq!(p.len(), 3);
        let q = parse_polynomial(
            "lam(1, mu(2, 3)) - mu(lam(1, 2), 3) - mu(lam(1, 3), 2)",
            &gens(),
        )
        .unwrap();
        assert_eq!(p, q);
        let r = parse_polynomial("-3/2*mu(1, 2) + 2*lam(1, 2)", &gens()).unwrap();
        assert_eq!(r.len(), 2);
        assert!(parse_polynomial("mu(1, 2) - mu(1, 2)", &gens())
            .unwrap()
            .is_zero());
        assert!(parse_polynomial("mu(1, 2) + mu(1, mu(2, 3))", &gens()).is_err());
        assert!(parse_polynomial("1/0*mu(1, 2)", &gens()).is_err());
    }
}
