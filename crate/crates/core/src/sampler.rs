//! Uniform exact-size sampling by the recursive method.
//!
//! A production is chosen with probability proportional to the number of
//! formulae it yields, read off the [`CountTable`], and subsizes of connective
//! arguments are chosen by inverting cumulative big-integer weights. No
//! floating point is involved, so the distribution is exactly uniform.

use std::collections::HashMap;

use num_bigint::{BigUint, RandBigInt};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::counting::{atom_count, CountTable, Openness};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::template::Template;

/// Identifier of the generator, recorded in sample dumps.
pub const RNG_ALGORITHM: &str = "chacha8";

/// True iff `formula` lies in the class `L(template)`.
pub fn matches_template(formula: &Formula, template: &Template) -> bool {
    template.matches(formula)
}

pub struct Sampler<'t> {
    table: &'t CountTable,
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
    // (row, j) -> coefficients of row^j
    powers: HashMap<(Openness, usize), Vec<BigUint>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub hits: u64,
    pub trials: u64,
    pub fraction: f64,
    pub stderr: f64,
}

impl<'t> Sampler<'t> {
    pub fn new(table: &'t CountTable, seed: u64) -> Self {
        Self::with_stream(table, seed, 0)
    }

    /// An independent stream for the same seed, for parallel use.
    pub fn with_stream(table: &'t CountTable, seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Sampler {
            table,
            seed,
            stream,
            rng,
            powers: HashMap::new(),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    pub fn table(&self) -> &'t CountTable {
        self.table
    }

    /// A uniformly random `m`-open formula of size `n`.
    pub fn sample_uniform(&mut self, n: usize, m: usize) -> Result<Formula> {
        self.sample(n, Openness::AtMost(m))
    }

    /// A uniformly random formula of size `n` admitted by `bound`.
    pub fn sample(&mut self, n: usize, bound: Openness) -> Result<Formula> {
        let bound = self.normalize(bound);
        let total = self.table.count(bound, n)?.clone();
        if total.is_zero() {
            return Err(Error::EmptyClass {
                size: n,
                bound: match bound {
                    Openness::AtMost(m) => format!("{m}-open"),
                    Openness::Any => "unrestricted".into(),
                },
            });
        }
        self.draw(n, bound)
    }

    fn normalize(&self, bound: Openness) -> Openness {
        match bound {
            Openness::AtMost(m) if m >= self.table.max_size() => Openness::Any,
            b => b,
        }
    }

    fn below(&mut self, bound: &BigUint) -> BigUint {
        self.rng.gen_biguint_below(bound)
    }

    fn draw(&mut self, n: usize, bound: Openness) -> Result<Formula> {
        let sig = self.table.signature();
        let total = self.table.count(bound, n)?.clone();
        let mut r = self.below(&total);

        let atoms = atom_count(n, bound, sig);
        if r < atoms {
            return Ok(self.pick_atom(n, bound, &r));
        }
        r -= atoms;

        let wq = sig.quantifier_weight();
        if n >= wq {
            let inner = self.normalize(match bound {
                Openness::AtMost(m) => Openness::AtMost(m + 1),
                Openness::Any => Openness::Any,
            });
            let q = self.table.count(inner, n - wq)?.clone();
            if r < q {
                return Ok(Formula::forall(self.draw(n - wq, inner)?));
            }
            r -= &q;
            if r < q {
                return Ok(Formula::exists(self.draw(n - wq, inner)?));
            }
            r -= q;
        }

        for c in sig.connectives() {
            if n < c.weight {
                continue;
            }
            let s = n - c.weight;
            let ways = self.power(bound, c.arity, s)?[s].clone();
            if r < ways {
                let sizes = self.split(bound, c.arity, s)?;
                let args = sizes
                    .into_iter()
                    .map(|k| self.draw(k, bound))
                    .collect::<Result<Vec<_>>>()?;
                return Ok(Formula::Conn {
                    name: c.name.clone(),
                    args,
                });
            }
            r -= ways;
        }
        unreachable!("productions exhaust c[{bound}][{n}]")
    }

    /// The `r`-th atom of size `n`, ordered by left index.
    fn pick_atom(&self, n: usize, bound: Openness, r: &BigUint) -> Formula {
        let sig = self.table.signature();
        let total = (n - sig.min_atom_size()) / sig.succ_weight();
        let lo = match bound {
            Openness::AtMost(m) => total.saturating_sub(m - 1),
            Openness::Any => 0,
        };
        let i = lo + usize::try_from(r).expect("atom rank fits");
        Formula::atom(i, total - i)
    }

    /// Random argument sizes summing to `s`, weighted by the number of
    /// argument tuples with those sizes.
    fn split(&mut self, bound: Openness, arity: usize, s: usize) -> Result<Vec<usize>> {
        let mut sizes = Vec::with_capacity(arity);
        let mut rest = s;
        for left in (2..=arity).rev() {
            let row = self.power(bound, 1, rest)?.to_vec();
            let tail = self.power(bound, left - 1, rest)?.to_vec();
            let mut cumulative = Vec::with_capacity(rest + 1);
            let mut acc = BigUint::zero();
            for k in 0..=rest {
                acc += &row[k] * &tail[rest - k];
                cumulative.push(acc.clone());
            }
            let r = self.below(&acc);
            let k = cumulative.partition_point(|c| c <= &r);
            sizes.push(k);
            rest -= k;
        }
        sizes.push(rest);
        Ok(sizes)
    }

    /// Coefficients `0..=len` of `row(bound)^j`.
    fn power(&mut self, bound: Openness, j: usize, len: usize) -> Result<&[BigUint]> {
        let fresh = self.powers.get(&(bound, j)).is_none_or(|p| p.len() <= len);
        if fresh {
            let row = (0..=len)
                .map(|k| self.table.count(bound, k).cloned())
                .collect::<Result<Vec<_>>>()?;
            let mut p = row.clone();
            for _ in 1..j {
                p = (0..=len)
                    .map(|k| (0..=k).map(|i| &p[i] * &row[k - i]).sum())
                    .collect();
            }
            self.powers.insert((bound, j), p);
        }
        Ok(&self.powers[&(bound, j)])
    }

    /// Fraction of uniform sentences of size `n` lying in `L(template)`.
    pub fn estimate_density_mc(
        &mut self,
        template: &Template,
        n: usize,
        trials: u64,
    ) -> Result<McEstimate> {
        template.permissiveness()?;
        if trials == 0 {
            return Err(Error::InsufficientData(
                "at least one trial is needed".into(),
            ));
        }
        let mut hits = 0;
        for _ in 0..trials {
            if template.matches(&self.sample_uniform(n, 0)?) {
                hits += 1;
            }
        }
        let p = hits as f64 / trials as f64;
        Ok(McEstimate {
            hits,
            trials,
            fraction: p,
            stderr: (p * (1.0 - p) / trials as f64).sqrt(),
        })
    }

    /// Header line for a sample dump.
    pub fn dump_header(&self, n: usize, bound: Openness) -> String {
        format!(
            "# seed={} stream={} rng={RNG_ALGORITHM} n={n} m={bound} sig={}",
            self.seed,
            self.stream,
            self.table.signature().fingerprint()
        )
    }

    /// Header plus `count` samples, one per line.
    pub fn dump(&mut self, n: usize, bound: Openness, count: usize) -> Result<String> {
        let mut out = self.dump_header(n, bound);
        out.push('\n');
        for _ in 0..count {
            out.push_str(&self.sample(n, bound)?.to_string());
            out.push('\n');
        }
        Ok(out)
    }
}
