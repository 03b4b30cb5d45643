//! Exhaustive enumeration of formulae by size.
//!
//! Deliberately naive: it materialises every formula of every size up to
//! the target and filters by openness, so it shares nothing with the
//! generating-function recurrences it is used to check.

use crate::counting::Openness;
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::signature::Signature;

pub const DEFAULT_SIZE_LIMIT: usize = 16;

/// All formulae of size exactly `n` within `bound`, sorted.
pub fn enumerate(n: usize, bound: Openness, sig: &Signature) -> Result<Vec<Formula>> {
    enumerate_with_limit(n, bound, sig, DEFAULT_SIZE_LIMIT)
}

pub fn enumerate_with_limit(
    n: usize,
    bound: Openness,
    sig: &Signature,
    limit: usize,
) -> Result<Vec<Formula>> {
    if n > limit {
        return Err(Error::SizeLimit {
            requested: n,
            limit,
        });
    }
    let by_size = all_up_to(n, sig);
    let mut out: Vec<Formula> = by_size
        .into_iter()
        .nth(n)
        .unwrap_or_default()
        .into_iter()
        .filter(|f| bound.admits(f.openness()))
        .collect();
    out.sort();
    Ok(out)
}

/// `table[s]` holds every formula of size `s`, for `s <= n`.
fn all_up_to(n: usize, sig: &Signature) -> Vec<Vec<Formula>> {
    let mut table: Vec<Vec<Formula>> = Vec::with_capacity(n + 1);
    for s in 0..=n {
        let mut here = Vec::new();

        if s >= sig.membership_weight() {
            let rest = s - sig.membership_weight();
            let mut i = 0;
            while sig.index_weight(i) <= rest {
                let left = rest - sig.index_weight(i);
                let mut j = 0;
                while sig.index_weight(j) <= left {
                    if sig.index_weight(j) == left {
                        here.push(Formula::atom(i, j));
                    }
                    j += 1;
                }
                i += 1;
            }
        }

        if s >= sig.quantifier_weight() {
            for f in &table[s - sig.quantifier_weight()] {
                here.push(Formula::forall(f.clone()));
            }
            for f in &table[s - sig.quantifier_weight()] {
                here.push(Formula::exists(f.clone()));
            }
        }

        for c in sig.connectives() {
            if s < c.weight {
                continue;
            }
            for parts in compositions(s - c.weight, c.arity) {
                let mut tuples: Vec<Vec<Formula>> = vec![Vec::new()];
                for &p in &parts {
                    let mut next = Vec::new();
                    for t in &tuples {
                        for f in &table[p] {
                            let mut t2 = t.clone();
                            t2.push(f.clone());
                            next.push(t2);
                        }
                    }
                    tuples = next;
                }
                here.extend(tuples.into_iter().map(|args| Formula::conn(&c.name, args)));
            }
        }

        table.push(here);
    }
    table
}

/// Ordered ways to write `total` as `k` positive parts.
fn compositions(total: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 1 {
        return if total >= 1 {
            vec![vec![total]]
        } else {
            vec![]
        };
    }
    let mut out = Vec::new();
    for first in 1..total {
        for mut rest in compositions(total - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}
