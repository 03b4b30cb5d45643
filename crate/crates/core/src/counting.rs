//! Exact coefficient tables.
//!
//! For all formulae the generating function satisfies
//!
//! ```text
//! Φ∞ = A∞(z) + 2 z^{w_q} Φ∞ + Σ_∘ z^{w_∘} Φ∞^{ar(∘)}
//! ```
//!
//! and for `m`-open formulae the forward system
//!
//! ```text
//! Φm = Am(z) + 2 z^{w_q} Φ(m+1) + Σ_∘ z^{w_∘} Φm^{ar(∘)}
//! ```
//!
//! where `Am` counts atoms whose two indices are both below `m`. A formula of
//! size `n` has openness below `n`, so row `m >= n` agrees with `Φ∞` at `n`;
//! the recursion is therefore started from the `Φ∞` row and run downwards.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::signature::Signature;

/// Upper bound on the openness of a class of formulae.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Openness {
    /// `m`-open formulae; `AtMost(0)` are the sentences.
    AtMost(usize),
    /// No constraint.
    Any,
}

impl Openness {
    pub fn admits(self, openness: usize) -> bool {
        match self {
            Openness::AtMost(m) => openness <= m,
            Openness::Any => true,
        }
    }
}

impl fmt::Display for Openness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Openness::AtMost(m) => write!(f, "{m}"),
            Openness::Any => write!(f, "inf"),
        }
    }
}

/// Number of atoms `(i ∈ j)` of size `n` with `i, j` admitted by `bound`
/// (for `AtMost(m)`: both indices have value `< m`).
pub fn atom_count(n: usize, bound: Openness, sig: &Signature) -> BigUint {
    BigUint::from(atom_count_small(n, bound, sig))
}

fn atom_count_small(n: usize, bound: Openness, sig: &Signature) -> u64 {
    if n < sig.min_atom_size() {
        return 0;
    }
    // successors shared between the two indices
    let rest = n - sig.min_atom_size();
    if !rest.is_multiple_of(sig.succ_weight()) {
        return 0;
    }
    let total = (rest / sig.succ_weight()) as u64;
    match bound {
        Openness::Any => total + 1,
        Openness::AtMost(0) => 0,
        Openness::AtMost(m) => {
            let top = m as u64 - 1;
            // pairs (i, j) with i + j = total and 0 <= i, j <= top
            if total > 2 * top {
                0
            } else {
                let lo = total.saturating_sub(top);
                let hi = total.min(top);
                hi - lo + 1
            }
        }
    }
}

/// `atom_count(n, Any) - atom_count(n, AtMost(m))`: the atoms of size `n`
/// using some index of value at least `m`.
pub fn atom_kernel_gap(n: usize, m: usize, sig: &Signature) -> BigUint {
    let all = atom_count_small(n, Openness::Any, sig);
    let bounded = atom_count_small(n, Openness::AtMost(m), sig);
    BigUint::from(all - bounded)
}

/// `[z^n] Φ∞` for `0 <= n <= max_size`.
pub fn count_infinity(max_size: usize, sig: &Signature) -> Vec<BigUint> {
    fill_row(sig, max_size, Openness::Any, Quantified::SelfRow, None)
}

/// Full table of `m`-open counts up to `max_size`.
pub fn count_m_open(max_size: usize, sig: &Signature) -> CountTable {
    CountTable::build(max_size, sig)
}

enum Quantified<'a> {
    /// The quantifier body comes from the row being built (`Φ∞`).
    SelfRow,
    /// The quantifier body comes from the row `m + 1`.
    Row(&'a [BigUint]),
}

const PAR_THRESHOLD: usize = 96;

fn dot(a: &[BigUint], b: &[BigUint], n: usize, lo: usize, hi: usize) -> BigUint {
    // Σ_{lo <= i <= hi} a[i] b[n-i]
    let term = |i: usize| -> BigUint {
        if a[i].is_zero() || b[n - i].is_zero() {
            BigUint::zero()
        } else {
            &a[i] * &b[n - i]
        }
    };
    if hi < lo {
        BigUint::zero()
    } else if hi - lo < PAR_THRESHOLD {
        (lo..=hi).map(term).sum()
    } else {
        (lo..=hi).into_par_iter().map(term).sum()
    }
}

/// `Σ_i a[i] a[n-i]` using the symmetry of the square.
fn square_coeff(a: &[BigUint], n: usize, lo: usize) -> BigUint {
    if n < 2 * lo {
        return BigUint::zero();
    }
    // pairs i < n - i, counted twice, plus the middle term
    let mut s = if n >= 1 && (n - 1) / 2 >= lo {
        dot(a, a, n, lo, (n - 1) / 2) << 1
    } else {
        BigUint::zero()
    };
    if n.is_multiple_of(2) {
        s += &a[n / 2] * &a[n / 2];
    }
    s
}

/// Builds one row of the system for sizes `0..=len`.
///
/// With a finite bound `m`, entries at sizes `n <= m` are copied from
/// `infinity`, which must then cover `0..=min(m, len)`.
fn fill_row(
    sig: &Signature,
    len: usize,
    bound: Openness,
    quantified: Quantified<'_>,
    infinity: Option<&[BigUint]>,
) -> Vec<BigUint> {
    let max_arity = sig.max_arity();
    let min_atom = sig.min_atom_size();
    let wq = sig.quantifier_weight();
    let two = BigUint::from(2u32);

    let mut row: Vec<BigUint> = Vec::with_capacity(len + 1);
    // powers[j] = coefficients of row^j, for 2 <= j <= max_arity
    let mut powers: Vec<Vec<BigUint>> = vec![Vec::new(); max_arity + 1];

    for n in 0..=len {
        let copy = match bound {
            Openness::AtMost(m) if n <= m => infinity.map(|inf| inf[n].clone()),
            _ => None,
        };
        let value = match copy {
            Some(v) => v,
            None => {
                let mut v = atom_count(n, bound, sig);
                if n >= wq {
                    let body = match quantified {
                        Quantified::SelfRow => &row[n - wq],
                        Quantified::Row(above) => &above[n - wq],
                    };
                    if !body.is_zero() {
                        v += body * &two;
                    }
                }
                for c in sig.connectives() {
                    if n < c.weight {
                        continue;
                    }
                    let s = n - c.weight;
                    let term = if c.arity == 1 {
                        &row[s]
                    } else {
                        &powers[c.arity][s]
                    };
                    if !term.is_zero() {
                        v += term;
                    }
                }
                v
            }
        };
        row.push(value);

        for j in 2..=max_arity {
            let c = if j == 2 {
                square_coeff(&row, n, min_atom)
            } else {
                let lower = &powers[j - 1];
                let lo = min_atom;
                let hi = n.saturating_sub((j - 1) * min_atom);
                dot(&row, lower, n, lo, hi)
            };
            powers[j].push(c);
        }
    }
    row
}

/// Coefficients `c[m][n]` of the `m`-open classes and of `Φ∞`.
///
/// Rows `0..=retained` are stored densely; any row `m >= max_size` aliases
/// the `Φ∞` row. Rows strictly between are computed only as far as needed
/// and then dropped.
#[derive(Debug, Clone)]
pub struct CountTable {
    sig: Signature,
    max_size: usize,
    infinity: Vec<BigUint>,
    rows: Vec<Vec<BigUint>>,
}

impl CountTable {
    /// Every row `0 <= m < max_size`.
    pub fn build(max_size: usize, sig: &Signature) -> Self {
        Self::with_rows(max_size, max_size, sig)
    }

    /// Rows `0..=max_row` (and the aliased rows `m >= max_size`).
    pub fn with_rows(max_size: usize, max_row: usize, sig: &Signature) -> Self {
        let infinity = count_infinity(max_size, sig);
        let stored = if max_size == 0 {
            0
        } else {
            max_row.min(max_size - 1) + 1
        };

        let wq = sig.quantifier_weight();
        // Row k > stored-1 is needed up to size max_size - (k - stored + 1) * wq,
        // and only its entries at sizes > k differ from Φ∞.
        let needed_len = |k: usize| -> Option<usize> {
            let steps = (k + 1).checked_sub(stored)?;
            max_size.checked_sub(steps * wq)
        };
        let mut scratch: Option<Vec<BigUint>> = None;
        if stored > 0 {
            let mut top = stored;
            while needed_len(top).is_some_and(|l| l > top) {
                top += 1;
            }
            for k in (stored..top).rev() {
                let len = needed_len(k).expect("within triangle");
                let above: &[BigUint] = scratch.as_deref().unwrap_or(&infinity);
                let row = fill_row(
                    sig,
                    len,
                    Openness::AtMost(k),
                    Quantified::Row(above),
                    Some(&infinity),
                );
                scratch = Some(row);
            }
        }

        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(stored);
        for k in (0..stored).rev() {
            let above: &[BigUint] = rows
                .last()
                .map(Vec::as_slice)
                .or(scratch.as_deref())
                .unwrap_or(&infinity);
            let row = fill_row(
                sig,
                max_size,
                Openness::AtMost(k),
                Quantified::Row(above),
                Some(&infinity),
            );
            scratch = None;
            rows.push(row);
        }
        rows.reverse();

        CountTable {
            sig: sig.clone(),
            max_size,
            infinity,
            rows,
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    /// Largest `m` whose row is available at every size, short of the
    /// aliased rows `m >= max_size`.
    pub fn retained_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn infinity(&self) -> &[BigUint] {
        &self.infinity
    }

    /// The whole row for `bound`, if available.
    pub fn row(&self, bound: Openness) -> Option<&[BigUint]> {
        match bound {
            Openness::Any => Some(&self.infinity),
            Openness::AtMost(m) if m >= self.max_size => Some(&self.infinity),
            Openness::AtMost(m) => self.rows.get(m).map(Vec::as_slice),
        }
    }

    pub fn get(&self, bound: Openness, n: usize) -> Option<&BigUint> {
        if n > self.max_size {
            return None;
        }
        match bound {
            Openness::AtMost(m) if m < n => self.rows.get(m).map(|r| &r[n]),
            _ => Some(&self.infinity[n]),
        }
    }

    pub fn count(&self, bound: Openness, n: usize) -> Result<&BigUint> {
        if n > self.max_size {
            return Err(Error::TableTooSmall {
                available: self.max_size,
                needed: n,
            });
        }
        self.get(bound, n).ok_or_else(|| match bound {
            Openness::AtMost(m) => Error::RowNotRetained(m),
            Openness::Any => unreachable!("Φ∞ row is always present"),
        })
    }

    /// TSV with header `m\tn\tcount`, rows in the order given.
    pub fn to_tsv(&self, bounds: &[Openness]) -> Result<String> {
        let mut out = String::from("m\tn\tcount\n");
        for &b in bounds {
            for n in 0..=self.max_size {
                let c = self.count(b, n)?;
                out.push_str(&format!("{b}\t{n}\t{c}\n"));
            }
        }
        Ok(out)
    }
}
