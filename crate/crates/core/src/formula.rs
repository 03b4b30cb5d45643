//! De Bruijn formulae over a single membership predicate.

use std::fmt;

use crate::error::{Error, Result};
use crate::signature::Signature;

/// A first-order formula whose variables are De Bruijn indices.
///
/// Index `k` is bound by the `(k+1)`-st quantifier above it; when there is
/// no such quantifier the occurrence is free. The derived ordering (atoms,
/// then `forall`, then `exists`, then connectives, children compared
/// lexicographically) is the order in which the enumerator reports formulae.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom { lhs: usize, rhs: usize },
    Forall(Box<Formula>),
    Exists(Box<Formula>),
    Conn { name: String, args: Vec<Formula> },
}

impl Formula {
    pub fn atom(lhs: usize, rhs: usize) -> Self {
        Formula::Atom { lhs, rhs }
    }

    pub fn forall(body: Formula) -> Self {
        Formula::Forall(Box::new(body))
    }

    pub fn exists(body: Formula) -> Self {
        Formula::Exists(Box::new(body))
    }

    pub fn conn(name: &str, args: Vec<Formula>) -> Self {
        Formula::Conn {
            name: name.to_string(),
            args,
        }
    }

    pub fn parse(text: &str, sig: &Signature) -> Result<Self> {
        crate::syntax::parse_formula(text, sig)
    }

    /// Checks every connective against the signature.
    pub fn validate(&self, sig: &Signature) -> Result<()> {
        match self {
            Formula::Atom { .. } => Ok(()),
            Formula::Forall(body) | Formula::Exists(body) => body.validate(sig),
            Formula::Conn { name, args } => {
                let c = sig
                    .connective(name)
                    .ok_or_else(|| Error::UnknownConnective(name.clone()))?;
                if c.arity != args.len() {
                    return Err(Error::ArityMismatch {
                        name: name.clone(),
                        expected: c.arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.validate(sig))
            }
        }
    }

    /// Total constructor weight.
    ///
    /// Panics if the formula uses a connective the signature does not know;
    /// formulae obtained from the parser or the enumerator never do.
    pub fn size(&self, sig: &Signature) -> usize {
        match self {
            Formula::Atom { lhs, rhs } => {
                sig.membership_weight() + sig.index_weight(*lhs) + sig.index_weight(*rhs)
            }
            Formula::Forall(body) | Formula::Exists(body) => {
                sig.quantifier_weight() + body.size(sig)
            }
            Formula::Conn { name, args } => {
                let c = sig
                    .connective(name)
                    .unwrap_or_else(|| panic!("connective `{name}` not in signature"));
                c.weight + args.iter().map(|a| a.size(sig)).sum::<usize>()
            }
        }
    }

    /// Least `m` such that prefixing `m` quantifiers yields a sentence.
    pub fn openness(&self) -> usize {
        match self {
            Formula::Atom { lhs, rhs } => lhs.max(rhs) + 1,
            Formula::Forall(body) | Formula::Exists(body) => body.openness().saturating_sub(1),
            Formula::Conn { args, .. } => args.iter().map(Formula::openness).max().unwrap_or(0),
        }
    }

    pub fn is_m_open(&self, m: usize) -> bool {
        self.openness() <= m
    }

    pub fn is_sentence(&self) -> bool {
        self.openness() == 0
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom { lhs, rhs } => write!(f, "(in {lhs} {rhs})"),
            Formula::Forall(body) => write!(f, "(forall {body})"),
            Formula::Exists(body) => write!(f, "(exists {body})"),
            Formula::Conn { name, args } => {
                write!(f, "({name}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Textual form accepted back by [`Formula::parse`].
pub fn render_formula(formula: &Formula) -> String {
    formula.to_string()
}
