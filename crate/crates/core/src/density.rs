//! Densities of template classes among sentences.
//!
//! For a template `C` of size `d` and permissiveness `m`, the class
//! `L(C) = { C[φ] : φ m-open }` has `c[m][n-d]` members of size `n`, so its
//! density among sentences of size `n` is `c[m][n-d] / c[0][n]`, tending to
//! `C_m ρ^d / C_0`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::asymptotics::SingularityData;
use crate::counting::{CountTable, Openness};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::numeric::{decimal, fraction, ln_big, round6};
use crate::signature::Signature;
use crate::template::{Skeleton, Template};

/// Exact density of `L(C)` among sentences of size `n`.
pub fn template_density_exact(
    template: &Template,
    n: usize,
    table: &CountTable,
) -> Result<BigRational> {
    let m = template.permissiveness()?;
    let d = template.size();
    let sentences = table.count(Openness::AtMost(0), n)?;
    if sentences.is_zero() {
        return Err(Error::EmptyClass {
            size: n,
            bound: "0-open".into(),
        });
    }
    let members = match n.checked_sub(d) {
        Some(k) => table.count(Openness::AtMost(m), k)?.clone(),
        None => Zero::zero(),
    };
    Ok(BigRational::new(
        BigInt::from(members),
        BigInt::from(sentences.clone()),
    ))
}

/// Limiting density `C_m ρ^d / C_0` of `L(C)`.
pub fn template_density_limit(template: &Template, sd: &SingularityData) -> Result<f64> {
    let m = template.permissiveness()?;
    let scale = sd.rho.powi(template.size() as i32);
    if m == 0 {
        return Ok(scale);
    }
    Ok(sd.c_ratio(m, 0)? * scale)
}

/// Exact densities at several sizes plus, optionally, the limit.
#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub template: String,
    pub d: usize,
    pub m: usize,
    pub exact: Vec<ExactDensity>,
    pub limit: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactDensity {
    pub n: usize,
    #[serde(serialize_with = "ser_fraction")]
    pub value: BigRational,
    /// `|value - limit|`, when the limit is known.
    pub residual: Option<f64>,
}

fn ser_fraction<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fraction(r))
}

impl DensityReport {
    pub fn build(
        template: &Template,
        sizes: &[usize],
        table: &CountTable,
        sd: Option<&SingularityData>,
    ) -> Result<Self> {
        let m = template.permissiveness()?;
        let limit = sd
            .map(|sd| template_density_limit(template, sd))
            .transpose()?;
        let exact = sizes
            .iter()
            .map(|&n| {
                let value = template_density_exact(template, n, table)?;
                let residual = limit.map(|l| (ratio_to_f64(&value) - l).abs());
                Ok(ExactDensity { n, value, residual })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DensityReport {
            template: template.to_string(),
            d: template.size(),
            m,
            exact,
            limit,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "template": self.template,
            "d": self.d,
            "m": self.m,
            "limit": self.limit.map(round6),
            "exact": self.exact.iter().map(|e| serde_json::json!({
                "n": e.n,
                "fraction": fraction(&e.value),
                "decimal": decimal(&e.value, 12),
                "residual": e.residual.map(round6),
            })).collect::<Vec<_>>(),
        })
    }

    /// `n\texact_density` rows for plotting.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("n\texact_density\n");
        for e in &self.exact {
            out.push_str(&format!("{}\t{}\n", e.n, decimal(&e.value, 12)));
        }
        out
    }
}

/// Ratio of two big integers as `f64`, through logarithms so that neither
/// side needs to fit.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.numer().is_zero() {
        return 0.0;
    }
    let (num, den) = (r.numer().magnitude(), r.denom().magnitude());
    (ln_big(num) - ln_big(den)).exp()
}

/// Names of the connectives the bound constructions need.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectiveNames {
    pub or: String,
    pub and: String,
    pub not: String,
    pub implies: String,
}

impl Default for ConnectiveNames {
    fn default() -> Self {
        ConnectiveNames {
            or: "or".into(),
            and: "and".into(),
            not: "not".into(),
            implies: "implies".into(),
        }
    }
}

fn require(sig: &Signature, name: &str, arity: usize) -> Result<()> {
    match sig.connective(name) {
        Some(c) if c.arity == arity => Ok(()),
        _ => Err(Error::MissingConnective {
            name: name.to_string(),
            arity,
        }),
    }
}

fn require_sentence(f: &Formula, sig: &Signature) -> Result<()> {
    f.validate(sig)?;
    match f.openness() {
        0 => Ok(()),
        k => Err(Error::NotSentence(k)),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TautologyBounds {
    /// Density of `(_ ∨ τ)`: all of it is provable in any theory.
    pub lower: f64,
    /// One minus the density of `(_ ∧ ¬τ)`: none of it is provable in a
    /// consistent theory.
    pub upper: f64,
    pub lower_template: String,
    pub upper_template: String,
    pub tautology_size: usize,
}

/// Bounds `0 < μ⁻ <= μ⁺ < 1` on the theorem density of any consistent
/// theory, from a fixed sentence `τ`.
///
/// `τ` is assumed to be logically valid; only its syntax is checked.
pub fn tautology_bounds(
    tau: &Formula,
    sig: &Signature,
    sd: &SingularityData,
    names: &ConnectiveNames,
) -> Result<TautologyBounds> {
    require_sentence(tau, sig)?;
    require(sig, &names.or, 2)?;
    require(sig, &names.and, 2)?;
    require(sig, &names.not, 1)?;

    let t = Skeleton::from(tau);
    let lower_t = Template::new(
        Skeleton::conn(&names.or, vec![Skeleton::Hole, t.clone()]),
        sig,
    )?;
    let upper_t = Template::new(
        Skeleton::conn(
            &names.and,
            vec![Skeleton::Hole, Skeleton::conn(&names.not, vec![t])],
        ),
        sig,
    )?;
    Ok(TautologyBounds {
        lower: template_density_limit(&lower_t, sd)?,
        upper: 1.0 - template_density_limit(&upper_t, sd)?,
        lower_template: lower_t.to_string(),
        upper_template: upper_t.to_string(),
        tautology_size: tau.size(sig),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImplicationMode {
    /// Use the signature's implication, or `¬(x ∧ ¬y)` if it has none.
    DesugarIfMissing,
    /// Fail unless the signature has an implication connective.
    RequireNative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Implication {
    Native,
    Desugared,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndependenceBound {
    pub density: f64,
    pub d: usize,
    pub template: String,
    pub implication: Implication,
}

/// Density of `L((τ ∨ _) → φ)`, a class of sentences provable from `T + φ`
/// and not from `T` whenever `φ` is independent of `T`.
pub fn independence_density_bound(
    phi: &Formula,
    tau: &Formula,
    sig: &Signature,
    sd: &SingularityData,
    names: &ConnectiveNames,
    mode: ImplicationMode,
) -> Result<IndependenceBound> {
    require_sentence(phi, sig)?;
    require_sentence(tau, sig)?;
    require(sig, &names.or, 2)?;

    let premise = Skeleton::conn(&names.or, vec![Skeleton::from(tau), Skeleton::Hole]);
    let (skeleton, implication) = if require(sig, &names.implies, 2).is_ok() {
        (
            Skeleton::conn(&names.implies, vec![premise, Skeleton::from(phi)]),
            Implication::Native,
        )
    } else {
        if mode == ImplicationMode::RequireNative {
            return Err(Error::MissingConnective {
                name: names.implies.clone(),
                arity: 2,
            });
        }
        require(sig, &names.and, 2)?;
        require(sig, &names.not, 1)?;
        let neg_phi = Skeleton::conn(&names.not, vec![Skeleton::from(phi)]);
        (
            Skeleton::conn(
                &names.not,
                vec![Skeleton::conn(&names.and, vec![premise, neg_phi])],
            ),
            Implication::Desugared,
        )
    };
    let template = Template::new(skeleton, sig)?;
    Ok(IndependenceBound {
        density: template_density_limit(&template, sd)?,
        d: template.size(),
        template: template.to_string(),
        implication,
    })
}
