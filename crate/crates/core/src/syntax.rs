//! S-expression syntax for formulae and templates.
//!
//! ```text
//! formula := atom | "(" "forall" formula ")" | "(" "exists" formula ")"
//!          | "(" name formula+ ")" | "_"          (holes: templates only)
//! atom    := "(" "in" nat nat ")"
//! ```
//!
//! Indices are written in decimal but weigh as unary `S^v 0`.

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::signature::Signature;
use crate::template::{Skeleton, Template};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok<'a> {
    Open,
    Close,
    Word(&'a str),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok<'_>)>> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b'(' => {
                out.push((i, Tok::Open));
                i += 1;
            }
            b')' => {
                out.push((i, Tok::Close));
                i += 1;
            }
            c if c.is_ascii_whitespace() => i += 1,
            c if c.is_ascii_alphanumeric() || c == b'_' || c == b'-' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'-')
                {
                    i += 1;
                }
                out.push((start, Tok::Word(&text[start..i])));
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(Error::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{ch}`"),
                });
            }
        }
    }
    Ok(out)
}

struct Parser<'a, 's> {
    toks: Vec<(usize, Tok<'a>)>,
    pos: usize,
    end: usize,
    sig: &'s Signature,
}

impl<'a> Parser<'a, '_> {
    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.here(),
            msg: msg.into(),
        })
    }

    fn next(&mut self) -> Option<Tok<'a>> {
        let t = self.toks.get(self.pos).map(|t| t.1.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn peek(&self) -> Option<&Tok<'a>> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn expect_close(&mut self) -> Result<()> {
        match self.peek() {
            Some(Tok::Close) => {
                self.pos += 1;
                Ok(())
            }
            Some(_) => self.err("expected `)`"),
            None => self.err("unexpected end of input, expected `)`"),
        }
    }

    fn nat(&mut self) -> Result<usize> {
        match self.peek() {
            Some(Tok::Word(w)) if w.bytes().all(|b| b.is_ascii_digit()) => {
                let w = *w;
                let v = w.parse().or_else(|_| self.err("index too large"))?;
                self.pos += 1;
                Ok(v)
            }
            Some(_) => self.err("expected a natural number"),
            None => self.err("unexpected end of input, expected a natural number"),
        }
    }

    fn node(&mut self) -> Result<Skeleton> {
        let start = self.here();
        match self.next() {
            Some(Tok::Word("_")) => return Ok(Skeleton::Hole),
            Some(Tok::Open) => {}
            Some(Tok::Close) => {
                self.pos -= 1;
                return self.err("unexpected `)`");
            }
            Some(Tok::Word(w)) => {
                self.pos -= 1;
                return self.err(format!("unexpected `{w}`, formulae start with `(`"));
            }
            None => return self.err("unexpected end of input"),
        }
        let head = match self.next() {
            Some(Tok::Word(w)) => w,
            _ => {
                self.pos -= 1;
                return self.err("expected `in`, `forall`, `exists` or a connective");
            }
        };
        let node = match head {
            "in" => {
                let lhs = self.nat()?;
                let rhs = self.nat()?;
                Skeleton::Atom { lhs, rhs }
            }
            "forall" => Skeleton::forall(self.node()?),
            "exists" => Skeleton::exists(self.node()?),
            name => {
                let Some(c) = self.sig.connective(name) else {
                    return Err(Error::UnknownConnective(name.to_string()));
                };
                let arity = c.arity;
                let mut args = Vec::new();
                while !matches!(self.peek(), Some(Tok::Close) | None) {
                    args.push(self.node()?);
                }
                if args.len() != arity {
                    return Err(Error::ArityMismatch {
                        name: name.to_string(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                Skeleton::conn(name, args)
            }
        };
        self.expect_close().map_err(|e| match e {
            Error::Syntax { pos, msg } => Error::Syntax {
                pos,
                msg: format!("{msg} (closing the node opened at byte {start})"),
            },
            e => e,
        })?;
        Ok(node)
    }
}

fn parse_skeleton(text: &str, sig: &Signature) -> Result<Skeleton> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        end: text.len(),
        sig,
    };
    let node = p.node()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input after formula");
    }
    Ok(node)
}

pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula> {
    let skel = parse_skeleton(text, sig)?;
    if skel.hole_count() > 0 {
        let pos = text.find('_').unwrap_or(0);
        return Err(Error::Syntax {
            pos,
            msg: "hole `_` is only allowed in templates".into(),
        });
    }
    Ok(skel.into_formula().expect("no holes"))
}

pub fn parse_template(text: &str, sig: &Signature) -> Result<Template> {
    Template::new(parse_skeleton(text, sig)?, sig)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::standard()
    }

    #[test]
    fn parses_the_empty_set_axiom() {
        let f = parse_formula("(exists (forall (not (in 0 1))))", &sig()).unwrap();
        let expected = Formula::exists(Formula::forall(Formula::conn(
            "not",
            vec![Formula::atom(0, 1)],
        )));
        assert_eq!(f, expected);
    }

    #[test]
    fn whitespace_is_insignificant() {
        let f = parse_formula("  ( and(in 0 0)\n\t(in 12 3) ) ", &sig()).unwrap();
        assert_eq!(
            f,
            Formula::conn("and", vec![Formula::atom(0, 0), Formula::atom(12, 3)])
        );
    }

    #[test]
    fn errors() {
        let s = sig();
        assert_eq!(parse_formula("(in 0 0)", &s).unwrap(), Formula::atom(0, 0));
        assert_eq!(
            parse_formula("(and (in 0 0))", &s),
            Err(Error::ArityMismatch {
                name: "and".into(),
                expected: 2,
                found: 1
            })
        );
        assert_eq!(
            parse_formula("(xor (in 0 0) (in 0 0))", &s),
            Err(Error::UnknownConnective("xor".into()))
        );
        for bad in [
            "",
            "(in 0)",
            "(in 0 0",
            "(in 0 0))",
            "(in a 0)",
            "(forall)",
            "(forall (in 0 0) (in 0 0))",
            "in 0 0",
            "(in 0 0) (in 0 0)",
            "(in 0 0 0)",
            "(in 0 -1)",
            "(in 0 0) ;",
            "_",
        ] {
            let e = parse_formula(bad, &s);
            assert!(matches!(e, Err(Error::Syntax { .. })), "{bad:?} gave {e:?}");
        }
    }

    #[test]
    fn syntax_error_positions() {
        let s = sig();
        match parse_formula("(forall (in 0 x))", &s) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 14),
            other => panic!("{other:?}"),
        }
        match parse_formula("(in 0 0", &s) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 7),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn templates() {
        let s = sig();
        let t = parse_template("(exists (forall _))", &s).unwrap();
        assert_eq!(t.hole_depth(), 2);
        assert_eq!(t.to_string(), "(exists (forall _))");
        assert_eq!(parse_template("_", &s).unwrap().size(), 0);
    }
}
