//! Formulae with a single hole.

use std::fmt;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::signature::Signature;

/// Formula tree that may contain holes `_` in formula positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Skeleton {
    Hole,
    Atom { lhs: usize, rhs: usize },
    Forall(Box<Skeleton>),
    Exists(Box<Skeleton>),
    Conn { name: String, args: Vec<Skeleton> },
}

impl Skeleton {
    pub fn forall(body: Skeleton) -> Self {
        Skeleton::Forall(Box::new(body))
    }

    pub fn exists(body: Skeleton) -> Self {
        Skeleton::Exists(Box::new(body))
    }

    pub fn conn(name: &str, args: Vec<Skeleton>) -> Self {
        Skeleton::Conn {
            name: name.to_string(),
            args,
        }
    }

    pub fn hole_count(&self) -> usize {
        match self {
            Skeleton::Hole => 1,
            Skeleton::Atom { .. } => 0,
            Skeleton::Forall(b) | Skeleton::Exists(b) => b.hole_count(),
            Skeleton::Conn { args, .. } => args.iter().map(Skeleton::hole_count).sum(),
        }
    }

    /// The formula this skeleton denotes, if it has no holes.
    pub fn into_formula(self) -> Option<Formula> {
        Some(match self {
            Skeleton::Hole => return None,
            Skeleton::Atom { lhs, rhs } => Formula::Atom { lhs, rhs },
            Skeleton::Forall(b) => Formula::Forall(Box::new(b.into_formula()?)),
            Skeleton::Exists(b) => Formula::Exists(Box::new(b.into_formula()?)),
            Skeleton::Conn { name, args } => Formula::Conn {
                name,
                args: args
                    .into_iter()
                    .map(Skeleton::into_formula)
                    .collect::<Option<_>>()?,
            },
        })
    }

    fn validate(&self, sig: &Signature) -> Result<()> {
        match self {
            Skeleton::Hole | Skeleton::Atom { .. } => Ok(()),
            Skeleton::Forall(b) | Skeleton::Exists(b) => b.validate(sig),
            Skeleton::Conn { name, args } => {
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

    fn size(&self, sig: &Signature) -> usize {
        match self {
            Skeleton::Hole => 0,
            Skeleton::Atom { lhs, rhs } => {
                sig.membership_weight() + sig.index_weight(*lhs) + sig.index_weight(*rhs)
            }
            Skeleton::Forall(b) | Skeleton::Exists(b) => sig.quantifier_weight() + b.size(sig),
            Skeleton::Conn { name, args } => {
                sig.connective(name).map_or(0, |c| c.weight)
                    + args.iter().map(|a| a.size(sig)).sum::<usize>()
            }
        }
    }

    /// Quantifiers strictly above the first hole.
    fn hole_depth(&self) -> Option<usize> {
        match self {
            Skeleton::Hole => Some(0),
            Skeleton::Atom { .. } => None,
            Skeleton::Forall(b) | Skeleton::Exists(b) => b.hole_depth().map(|d| d + 1),
            Skeleton::Conn { args, .. } => args.iter().find_map(Skeleton::hole_depth),
        }
    }

    /// Openness with the hole treated as a sentence.
    fn openness(&self) -> usize {
        match self {
            Skeleton::Hole => 0,
            Skeleton::Atom { lhs, rhs } => lhs.max(rhs) + 1,
            Skeleton::Forall(b) | Skeleton::Exists(b) => b.openness().saturating_sub(1),
            Skeleton::Conn { args, .. } => args.iter().map(Skeleton::openness).max().unwrap_or(0),
        }
    }

    fn fill(&self, plug: &Formula) -> Formula {
        match self {
            Skeleton::Hole => plug.clone(),
            Skeleton::Atom { lhs, rhs } => Formula::atom(*lhs, *rhs),
            Skeleton::Forall(b) => Formula::forall(b.fill(plug)),
            Skeleton::Exists(b) => Formula::exists(b.fill(plug)),
            Skeleton::Conn { name, args } => Formula::Conn {
                name: name.clone(),
                args: args.iter().map(|a| a.fill(plug)).collect(),
            },
        }
    }

    /// Subformula of `formula` sitting at the hole, if `formula` agrees with
    /// the skeleton everywhere else.
    fn hole_match<'f>(&self, formula: &'f Formula) -> Option<&'f Formula> {
        match (self, formula) {
            (Skeleton::Hole, f) => Some(f),
            (Skeleton::Forall(b), Formula::Forall(fb))
            | (Skeleton::Exists(b), Formula::Exists(fb)) => b.hole_match(fb),
            (Skeleton::Conn { name, args }, Formula::Conn { name: n, args: fa })
                if name == n && args.len() == fa.len() =>
            {
                let mut found = None;
                for (s, f) in args.iter().zip(fa) {
                    if s.hole_count() == 0 {
                        if !s.equals_formula(f) {
                            return None;
                        }
                    } else {
                        found = s.hole_match(f);
                        found?;
                    }
                }
                found
            }
            _ => None,
        }
    }

    fn equals_formula(&self, formula: &Formula) -> bool {
        match (self, formula) {
            (Skeleton::Atom { lhs, rhs }, Formula::Atom { lhs: l, rhs: r }) => lhs == l && rhs == r,
            (Skeleton::Forall(b), Formula::Forall(fb))
            | (Skeleton::Exists(b), Formula::Exists(fb)) => b.equals_formula(fb),
            (Skeleton::Conn { name, args }, Formula::Conn { name: n, args: fa }) => {
                name == n
                    && args.len() == fa.len()
                    && args.iter().zip(fa).all(|(s, f)| s.equals_formula(f))
            }
            _ => false,
        }
    }
}

impl From<&Formula> for Skeleton {
    fn from(f: &Formula) -> Self {
        match f {
            Formula::Atom { lhs, rhs } => Skeleton::Atom {
                lhs: *lhs,
                rhs: *rhs,
            },
            Formula::Forall(b) => Skeleton::forall(b.as_ref().into()),
            Formula::Exists(b) => Skeleton::exists(b.as_ref().into()),
            Formula::Conn { name, args } => Skeleton::Conn {
                name: name.clone(),
                args: args.iter().map(Skeleton::from).collect(),
            },
        }
    }
}

impl fmt::Display for Skeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Skeleton::Hole => write!(f, "_"),
            Skeleton::Atom { lhs, rhs } => write!(f, "(in {lhs} {rhs})"),
            Skeleton::Forall(b) => write!(f, "(forall {b})"),
            Skeleton::Exists(b) => write!(f, "(exists {b})"),
            Skeleton::Conn { name, args } => {
                write!(f, "({name}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A formula with exactly one hole, together with its hole depth and its
/// size (the hole weighs nothing).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Template {
    skeleton: Skeleton,
    hole_depth: usize,
    size: usize,
}

impl Template {
    pub fn new(skeleton: Skeleton, sig: &Signature) -> Result<Self> {
        let holes = skeleton.hole_count();
        if holes != 1 {
            return Err(Error::InvalidTemplate(format!(
                "expected exactly one hole, found {holes}"
            )));
        }
        skeleton.validate(sig)?;
        let hole_depth = skeleton.hole_depth().expect("one hole present");
        let size = skeleton.size(sig);
        Ok(Template {
            skeleton,
            hole_depth,
            size,
        })
    }

    pub fn parse(text: &str, sig: &Signature) -> Result<Self> {
        crate::syntax::parse_template(text, sig)
    }

    /// The identity template `_`.
    pub fn hole() -> Self {
        Template {
            skeleton: Skeleton::Hole,
            hole_depth: 0,
            size: 0,
        }
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    pub fn hole_depth(&self) -> usize {
        self.hole_depth
    }

    /// Template size `d`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Largest `m` for which every `m`-open plug yields a sentence.
    ///
    /// Fails when the skeleton itself has free indices, since then no plug
    /// closes the result.
    pub fn permissiveness(&self) -> Result<usize> {
        match self.skeleton.openness() {
            0 => Ok(self.hole_depth),
            k => Err(Error::InvalidTemplate(format!(
                "skeleton `{}` is {k}-open outside its hole",
                self.skeleton
            ))),
        }
    }

    pub fn substitute(&self, plug: &Formula) -> Formula {
        self.skeleton.fill(plug)
    }

    /// True iff `formula` is `C[φ]` for some `m`-open `φ`, where `m` is the
    /// permissiveness of `C`. Invalid templates match nothing.
    pub fn matches(&self, formula: &Formula) -> bool {
        let Ok(m) = self.permissiveness() else {
            return false;
        };
        self.skeleton
            .hole_match(formula)
            .is_some_and(|plug| plug.is_m_open(m))
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.skeleton.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::standard()
    }

    #[test]
    fn permissiveness_examples() {
        let c = Template::parse("(exists (forall _))", &sig()).unwrap();
        assert_eq!(c.permissiveness().unwrap(), 2);
        assert_eq!(c.size(), 2);
        assert_eq!(
            Template::parse("_", &sig())
                .unwrap()
                .permissiveness()
                .unwrap(),
            0
        );
        let bad = Template::parse("(and _ (in 0 0))", &sig()).unwrap();
        assert!(matches!(
            bad.permissiveness(),
            Err(Error::InvalidTemplate(_))
        ));
    }

    #[test]
    fn bound_side_formula_is_fine() {
        let c = Template::parse("(exists (and _ (in 0 0)))", &sig()).unwrap();
        assert_eq!(c.permissiveness().unwrap(), 1);
        assert_eq!(c.size(), 5);
    }

    #[test]
    fn hole_count_enforced() {
        assert!(matches!(
            Template::parse("(and _ _)", &sig()),
            Err(Error::InvalidTemplate(_))
        ));
        assert!(matches!(
            Template::parse("(in 0 0)", &sig()),
            Err(Error::InvalidTemplate(_))
        ));
    }

    #[test]
    fn substitute_builds_the_axiom() {
        let s = sig();
        let c = Template::parse("(exists (forall _))", &s).unwrap();
        let phi = Formula::parse("(not (in 0 1))", &s).unwrap();
        let out = c.substitute(&phi);
        assert_eq!(out.to_string(), "(exists (forall (not (in 0 1))))");
        assert_eq!(out.size(&s), c.size() + phi.size(&s));
        assert_eq!(out.size(&s), 7);
        assert_eq!(Template::hole().substitute(&phi), phi);
    }

    #[test]
    fn matching() {
        let s = sig();
        let axiom = Formula::parse("(exists (forall (not (in 0 1))))", &s).unwrap();
        assert!(Template::parse("(exists (forall _))", &s)
            .unwrap()
            .matches(&axiom));
        assert!(Template::hole().matches(&axiom));
        assert!(!Template::parse("(exists _)", &s)
            .unwrap()
            .matches(&Formula::parse("(forall (in 0 0))", &s).unwrap()));
        // the plug at the hole must be 1-open
        let c = Template::parse("(exists _)", &s).unwrap();
        assert!(!c.matches(&Formula::parse("(exists (in 0 1))", &s).unwrap()));
        assert!(!c.matches(&Formula::parse("(exists (exists (in 2 0)))", &s).unwrap()));
        assert!(c.matches(&Formula::parse("(exists (exists (in 1 0)))", &s).unwrap()));
        // side formulae must agree exactly
        let side = Template::parse("(or _ (forall (in 0 0)))", &s).unwrap();
        assert!(
            side.matches(&Formula::parse("(or (forall (in 0 0)) (forall (in 0 0)))", &s).unwrap())
        );
        assert!(
            !side.matches(&Formula::parse("(or (forall (in 0 0)) (exists (in 0 0)))", &s).unwrap())
        );
    }
}
