//! Reference implementations used only by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use fodensity::{Formula, Signature};
use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Openness recomputed from scratch: the largest `i + 1 - depth` over index
/// occurrences, where `depth` counts enclosing quantifiers.
pub fn free_excess(f: &Formula) -> usize {
    fn go(f: &Formula, depth: usize) -> usize {
        match f {
            Formula::Atom { lhs, rhs } => (lhs.max(rhs) + 1).saturating_sub(depth),
            Formula::Forall(b) | Formula::Exists(b) => go(b, depth + 1),
            Formula::Conn { args, .. } => args.iter().map(|a| go(a, depth)).max().unwrap_or(0),
        }
    }
    go(f, 0)
}

/// Counts by the plain recurrence, with no truncation shortcut: every
/// `(m, n)` is computed from its own productions.
pub struct NaiveCounts<'s> {
    sig: &'s Signature,
    memo: HashMap<(Option<usize>, usize), BigUint>,
    tuples: HashMap<(usize, usize, Option<usize>), BigUint>,
}

impl<'s> NaiveCounts<'s> {
    pub fn new(sig: &'s Signature) -> Self {
        NaiveCounts {
            sig,
            memo: HashMap::new(),
            tuples: HashMap::new(),
        }
    }

    fn atoms(&self, n: usize, m: Option<usize>) -> BigUint {
        let s = self.sig;
        let mut k = 0u64;
        for i in 0..=n {
            for j in 0..=n {
                let size = s.membership_weight() + s.index_weight(i) + s.index_weight(j);
                let ok = m.is_none_or(|m| i < m && j < m);
                if size == n && ok {
                    k += 1;
                }
            }
        }
        BigUint::from(k)
    }

    /// `m = None` is the unrestricted class.
    pub fn count(&mut self, n: usize, m: Option<usize>) -> BigUint {
        if let Some(v) = self.memo.get(&(m, n)) {
            return v.clone();
        }
        let mut total = self.atoms(n, m);
        let wq = self.sig.quantifier_weight();
        if n >= wq {
            total += self.count(n - wq, m.map(|m| m + 1)) * 2u32;
        }
        let conns: Vec<(usize, usize)> = self
            .sig
            .connectives()
            .iter()
            .map(|c| (c.arity, c.weight))
            .collect();
        for (arity, w) in conns {
            if n >= w {
                total += self.tuple_count(arity, n - w, m);
            }
        }
        self.memo.insert((m, n), total.clone());
        total
    }

    /// Ordered `parts`-tuples of formulae with sizes summing to `total`.
    fn tuple_count(&mut self, parts: usize, total: usize, m: Option<usize>) -> BigUint {
        if parts == 0 {
            return if total == 0 {
                BigUint::one()
            } else {
                BigUint::zero()
            };
        }
        if let Some(v) = self.tuples.get(&(parts, total, m)) {
            return v.clone();
        }
        let mut acc = BigUint::zero();
        for k in 0..=total {
            let head = self.count(k, m);
            if !head.is_zero() {
                acc += head * self.tuple_count(parts - 1, total - k, m);
            }
        }
        self.tuples.insert((parts, total, m), acc.clone());
        acc
    }
}

/// Atoms of size `n` using an index of value at least `m`, by brute force.
pub fn kernel_gap_brute(n: usize, m: usize, sig: &Signature) -> usize {
    let mut k = 0;
    for i in 0..=n {
        for j in 0..=n {
            let size = sig.membership_weight() + sig.index_weight(i) + sig.index_weight(j);
            if size == n && (i >= m || j >= m) {
                k += 1;
            }
        }
    }
    k
}

/// Pearson statistic for observed counts against a uniform expectation.
pub fn chi_square_uniform(observed: &[u64]) -> f64 {
    let total: u64 = observed.iter().sum();
    let e = total as f64 / observed.len() as f64;
    observed.iter().map(|&o| (o as f64 - e).powi(2) / e).sum()
}

/// Upper tail `P(X > x)` of a chi-square variable with `df` degrees of
/// freedom, from the series for the lower regularized gamma function.
pub fn chi_square_sf(x: f64, df: usize) -> f64 {
    let a = df as f64 / 2.0;
    let h = x / 2.0;
    // Γ(a + 1) for integer or half-integer a
    let mut gamma = if df.is_multiple_of(2) {
        1.0
    } else {
        std::f64::consts::PI.sqrt()
    };
    let mut t = if df.is_multiple_of(2) { 1.0 } else { 0.5 };
    while t <= a + 0.5 {
        gamma *= t;
        t += 1.0;
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while term > 1e-17 * sum {
        term *= h / (a + k);
        sum += term;
        k += 1.0;
    }
    1.0 - (a * h.ln() - h).exp() * sum / gamma
}
