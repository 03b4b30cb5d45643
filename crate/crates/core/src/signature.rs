//! Connective sets and constructor weights.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connective {
    pub name: String,
    pub arity: usize,
    #[serde(default = "one")]
    pub weight: usize,
}

impl Connective {
    pub fn new(name: &str, arity: usize, weight: usize) -> Self {
        Connective {
            name: name.to_string(),
            arity,
            weight,
        }
    }
}

/// A finite connective set together with the weight of every constructor.
///
/// An index of value `v` is `S^v 0` and weighs `zero_weight + v * succ_weight`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSignature", into = "RawSignature")]
pub struct Signature {
    connectives: Vec<Connective>,
    quantifier_weight: usize,
    membership_weight: usize,
    zero_weight: usize,
    succ_weight: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSignature {
    connectives: Vec<Connective>,
    #[serde(default = "one")]
    quantifier_weight: usize,
    #[serde(default = "one")]
    membership_weight: usize,
    #[serde(default = "one")]
    zero_weight: usize,
    #[serde(default = "one")]
    succ_weight: usize,
}

impl TryFrom<RawSignature> for Signature {
    type Error = Error;

    fn try_from(raw: RawSignature) -> Result<Self> {
        Signature::with_weights(
            raw.connectives,
            raw.quantifier_weight,
            raw.membership_weight,
            raw.zero_weight,
            raw.succ_weight,
        )
    }
}

impl From<Signature> for RawSignature {
    fn from(sig: Signature) -> Self {
        RawSignature {
            connectives: sig.connectives,
            quantifier_weight: sig.quantifier_weight,
            membership_weight: sig.membership_weight,
            zero_weight: sig.zero_weight,
            succ_weight: sig.succ_weight,
        }
    }
}

const RESERVED: [&str; 4] = ["in", "forall", "exists", "_"];

impl Signature {
    /// Unit-weight signature over the given connectives.
    pub fn new(connectives: Vec<Connective>) -> Result<Self> {
        Self::with_weights(connectives, 1, 1, 1, 1)
    }

    pub fn with_weights(
        connectives: Vec<Connective>,
        quantifier_weight: usize,
        membership_weight: usize,
        zero_weight: usize,
        succ_weight: usize,
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        for c in &connectives {
            if c.name.is_empty()
                || !c
                    .name
                    .chars()
                    .all(|ch| ch.is_ascii_alphanumeric() || ch == '-' || ch == '_')
                || c.name.chars().all(|ch| ch.is_ascii_digit())
            {
                return Err(Error::InvalidSignature(format!(
                    "`{}` is not a valid connective name",
                    c.name
                )));
            }
            if RESERVED.contains(&c.name.as_str()) {
                return Err(Error::InvalidSignature(format!(
                    "`{}` is a reserved word",
                    c.name
                )));
            }
            if !seen.insert(c.name.as_str()) {
                return Err(Error::InvalidSignature(format!(
                    "duplicate connective `{}`",
                    c.name
                )));
            }
            if c.arity == 0 {
                return Err(Error::InvalidSignature(format!(
                    "connective `{}` has arity 0",
                    c.name
                )));
            }
            if c.weight == 0 {
                return Err(Error::InvalidSignature(format!(
                    "connective `{}` has weight 0",
                    c.name
                )));
            }
        }
        for (what, w) in [
            ("quantifier_weight", quantifier_weight),
            ("membership_weight", membership_weight),
            ("zero_weight", zero_weight),
            ("succ_weight", succ_weight),
        ] {
            if w == 0 {
                return Err(Error::InvalidSignature(format!("{what} must be positive")));
            }
        }
        Ok(Signature {
            connectives,
            quantifier_weight,
            membership_weight,
            zero_weight,
            succ_weight,
        })
    }

    /// `{and/2, or/2, not/1}` with unit weights.
    pub fn standard() -> Self {
        Self::new(vec![
            Connective::new("and", 2, 1),
            Connective::new("or", 2, 1),
            Connective::new("not", 1, 1),
        ])
        .expect("standard signature is valid")
    }

    /// The single binary connective `nand`.
    pub fn nand() -> Self {
        Self::new(vec![Connective::new("nand", 2, 1)]).expect("nand signature is valid")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSignature(e.to_string()))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidSignature(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("signature serializes")
    }

    /// Short hex digest of the canonical JSON form.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.to_json().as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn connectives(&self) -> &[Connective] {
        &self.connectives
    }

    pub fn connective(&self, name: &str) -> Option<&Connective> {
        self.connectives.iter().find(|c| c.name == name)
    }

    pub fn quantifier_weight(&self) -> usize {
        self.quantifier_weight
    }

    pub fn membership_weight(&self) -> usize {
        self.membership_weight
    }

    pub fn zero_weight(&self) -> usize {
        self.zero_weight
    }

    pub fn succ_weight(&self) -> usize {
        self.succ_weight
    }

    pub fn index_weight(&self, value: usize) -> usize {
        self.zero_weight + value * self.succ_weight
    }

    /// Weight of the lightest atom `(0 ∈ 0)`.
    pub fn min_atom_size(&self) -> usize {
        self.membership_weight + 2 * self.zero_weight
    }

    pub fn max_arity(&self) -> usize {
        self.connectives.iter().map(|c| c.arity).max().unwrap_or(0)
    }

    /// True when some connective has arity at least two, which makes the
    /// defining equation non-linear.
    pub fn admissible_for_asymptotics(&self) -> bool {
        self.max_arity() >= 2
    }
}

impl Default for Signature {
    fn default() -> Self {
        Self::standard()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_is_admissible() {
        let sig = Signature::standard();
        assert!(sig.admissible_for_asymptotics());
        assert_eq!(sig.min_atom_size(), 3);
        assert_eq!(sig.index_weight(1), 2);
    }

    #[test]
    fn unary_only_is_not_admissible() {
        let sig = Signature::new(vec![Connective::new("not", 1, 1)]).unwrap();
        assert!(!sig.admissible_for_asymptotics());
    }

    #[test]
    fn rejects_bad_connectives() {
        let dup = Signature::new(vec![
            Connective::new("and", 2, 1),
            Connective::new("and", 1, 1),
        ]);
        assert!(matches!(dup, Err(Error::InvalidSignature(_))));
        assert!(Signature::new(vec![Connective::new("k", 0, 1)]).is_err());
        assert!(Signature::new(vec![Connective::new("k", 2, 0)]).is_err());
        assert!(Signature::new(vec![Connective::new("in", 2, 1)]).is_err());
        assert!(Signature::new(vec![Connective::new("12", 2, 1)]).is_err());
        assert!(Signature::with_weights(vec![], 0, 1, 1, 1).is_err());
    }

    #[test]
    fn json_defaults_and_overrides() {
        let sig =
            Signature::from_json(r#"{"connectives":[{"name":"nand","arity":2}],"succ_weight":2}"#)
                .unwrap();
        assert_eq!(sig.connectives()[0].weight, 1);
        assert_eq!(sig.succ_weight(), 2);
        assert_eq!(sig.quantifier_weight(), 1);
        let back = Signature::from_json(&sig.to_json()).unwrap();
        assert_eq!(back, sig);

        let bad = Signature::from_json(r#"{"connectives":[{"name":"a","arity":2,"weight":0}]}"#);
        assert!(matches!(bad, Err(Error::InvalidSignature(_))));
    }

    #[test]
    fn fingerprint_is_stable_per_signature() {
        assert_eq!(
            Signature::standard().fingerprint(),
            Signature::standard().fingerprint()
        );
        assert_ne!(
            Signature::standard().fingerprint(),
            Signature::nand().fingerprint()
        );
    }
}
