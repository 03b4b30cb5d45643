//! Dominant singularity and coefficient asymptotics.
//!
//! The counting series `y = Φ∞(z)` solves `y = F(z, y)` with
//!
//! ```text
//! F(z, y) = z^{w_∈} (z^{w_0} / (1 - z^{w_S}))^2 + 2 z^{w_q} y + Σ_∘ z^{w_∘} y^{ar(∘)}
//! ```
//!
//! Its dominant singularity `ρ` is a square-root branch point: together with
//! `τ = Φ∞(ρ)` it solves `τ = F(ρ, τ)`, `1 = F_y(ρ, τ)`. Near `ρ`,
//! `Φ∞(z) = a - b sqrt(1 - z/ρ) + O(1 - z/ρ)` with `a = τ` and
//! `b = sqrt(2ρ F_z / F_yy)`, so `[z^n] Φ∞ ~ C γ^n n^{-3/2}` with
//! `C = b / (2 sqrt π)` and growth rate `γ = 1/ρ`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::Serialize;

use crate::counting::{count_infinity, CountTable, Openness};
use crate::error::{Error, Result};
use crate::numeric::ln_big;
use crate::signature::Signature;

pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// `F(z, y)` and its partial derivatives for a signature.
#[derive(Debug, Clone)]
pub struct GfSystem {
    membership: i32,
    zero: i32,
    succ: i32,
    quantifier: i32,
    /// `(weight, arity)` per connective.
    terms: Vec<(i32, i32)>,
}

fn powi(x: f64, k: i32) -> f64 {
    x.powi(k)
}

impl GfSystem {
    pub fn new(sig: &Signature) -> Self {
        GfSystem {
            membership: sig.membership_weight() as i32,
            zero: sig.zero_weight() as i32,
            succ: sig.succ_weight() as i32,
            quantifier: sig.quantifier_weight() as i32,
            terms: sig
                .connectives()
                .iter()
                .map(|c| (c.weight as i32, c.arity as i32))
                .collect(),
        }
    }

    /// Atom series `A(z)` and `A'(z)`; requires `0 <= z < 1`.
    fn atoms(&self, z: f64) -> (f64, f64) {
        let (w_in, w0, ws) = (self.membership, self.zero, self.succ);
        let denom = 1.0 - powi(z, ws);
        let u = powi(z, w0) / denom;
        let du = if z == 0.0 {
            if w0 == 1 {
                1.0
            } else {
                0.0
            }
        } else {
            (w0 as f64 * powi(z, w0 - 1) * denom + powi(z, w0) * ws as f64 * powi(z, ws - 1))
                / (denom * denom)
        };
        let zin = powi(z, w_in);
        let dzin = if w_in == 1 {
            1.0
        } else {
            w_in as f64 * powi(z, w_in - 1)
        };
        (zin * u * u, dzin * u * u + zin * 2.0 * u * du)
    }

    fn dpow(z: f64, w: i32) -> f64 {
        if w == 1 {
            1.0
        } else {
            w as f64 * powi(z, w - 1)
        }
    }

    pub fn f(&self, z: f64, y: f64) -> f64 {
        let (a, _) = self.atoms(z);
        a + 2.0 * powi(z, self.quantifier) * y
            + self
                .terms
                .iter()
                .map(|&(w, k)| powi(z, w) * powi(y, k))
                .sum::<f64>()
    }

    pub fn f_y(&self, z: f64, y: f64) -> f64 {
        2.0 * powi(z, self.quantifier)
            + self
                .terms
                .iter()
                .map(|&(w, k)| k as f64 * powi(z, w) * powi(y, k - 1))
                .sum::<f64>()
    }

    pub fn f_yy(&self, z: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .filter(|&&(_, k)| k >= 2)
            .map(|&(w, k)| (k * (k - 1)) as f64 * powi(z, w) * powi(y, k - 2))
            .sum()
    }

    pub fn f_z(&self, z: f64, y: f64) -> f64 {
        let (_, da) = self.atoms(z);
        da + 2.0 * Self::dpow(z, self.quantifier) * y
            + self
                .terms
                .iter()
                .map(|&(w, k)| Self::dpow(z, w) * powi(y, k))
                .sum::<f64>()
    }

    pub fn f_yz(&self, z: f64, y: f64) -> f64 {
        2.0 * Self::dpow(z, self.quantifier)
            + self
                .terms
                .iter()
                .map(|&(w, k)| k as f64 * Self::dpow(z, w) * powi(y, k - 1))
                .sum::<f64>()
    }

    /// Residuals `(|y - F(z,y)|, |1 - F_y(z,y)|)` of the branch-point system.
    pub fn residuals(&self, z: f64, y: f64) -> (f64, f64) {
        ((y - self.f(z, y)).abs(), (1.0 - self.f_y(z, y)).abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residuals {
    /// `|τ - F(ρ, τ)|`
    pub value: f64,
    /// `|1 - F_y(ρ, τ)|`
    pub branch: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    Newton,
    BisectionThenNewton,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchPoint {
    pub rho: f64,
    pub tau: f64,
    pub residuals: Residuals,
    pub method: SolveMethod,
}

/// Solves for the dominant singularity `ρ` and branch value `τ`.
pub fn solve_singularity(sig: &Signature, tol: f64) -> Result<BranchPoint> {
    if !sig.admissible_for_asymptotics() {
        return Err(Error::NotAdmissible);
    }
    let sys = GfSystem::new(sig);
    let (z0, y0) = initial_guess(sig);

    let ok = |z: f64, y: f64| {
        let (r1, r2) = sys.residuals(z, y);
        z > 0.0 && z < 1.0 && y > 0.0 && r1 < tol && r2 < tol
    };

    if let Some((z, y)) = newton(&sys, z0, y0) {
        if ok(z, y) {
            return Ok(finish(&sys, z, y, SolveMethod::Newton));
        }
    }

    let (zb, yb) = bisect(&sys)?;
    let (z, y) = newton(&sys, zb, yb).unwrap_or((zb, yb));
    if ok(z, y) {
        return Ok(finish(&sys, z, y, SolveMethod::BisectionThenNewton));
    }
    if ok(zb, yb) {
        return Ok(finish(&sys, zb, yb, SolveMethod::BisectionThenNewton));
    }
    let (r1, r2) = sys.residuals(zb, yb);
    Err(Error::NoConvergence(format!(
        "bisection bracket ended at z = {zb:.15}, y = {yb:.15}, residuals ({r1:e}, {r2:e})"
    )))
}

fn finish(sys: &GfSystem, rho: f64, tau: f64, method: SolveMethod) -> BranchPoint {
    let (value, branch) = sys.residuals(rho, tau);
    BranchPoint {
        rho,
        tau,
        residuals: Residuals { value, branch },
        method,
    }
}

/// `z0` from the growth of the last nonzero coefficients, `y0` from the
/// truncated series at `z0`.
fn initial_guess(sig: &Signature) -> (f64, f64) {
    const TERMS: usize = 64;
    let a = count_infinity(TERMS, sig);
    let nz: Vec<usize> = (0..=TERMS).filter(|&n| a[n].bits() > 0).collect();
    let z0 = match nz.as_slice() {
        [.., p, q] => (-(ln_big(&a[*q]) - ln_big(&a[*p])) / (*q - *p) as f64).exp(),
        _ => 0.5,
    };
    let z0 = z0.clamp(1e-6, 0.999);
    let y0 = nz
        .iter()
        .map(|&n| (ln_big(&a[n]) + n as f64 * z0.ln()).exp())
        .sum::<f64>();
    (z0, y0)
}

fn newton(sys: &GfSystem, mut z: f64, mut y: f64) -> Option<(f64, f64)> {
    for _ in 0..100 {
        if !(z > 0.0 && z < 1.0 && y.is_finite()) {
            return None;
        }
        let g1 = sys.f(z, y) - y;
        let g2 = sys.f_y(z, y) - 1.0;
        let (j11, j12) = (sys.f_z(z, y), sys.f_y(z, y) - 1.0);
        let (j21, j22) = (sys.f_yz(z, y), sys.f_yy(z, y));
        let det = j11 * j22 - j12 * j21;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let dz = (g1 * j22 - g2 * j12) / det;
        let dy = (j11 * g2 - j21 * g1) / det;
        z -= dz;
        y -= dy;
        if dz.abs() <= 1e-16 * z.abs().max(1e-300) && dy.abs() <= 1e-16 * y.abs().max(1.0) {
            break;
        }
    }
    (z > 0.0 && z < 1.0 && y.is_finite()).then_some((z, y))
}

/// For fixed `z`, the `y >= 0` minimising `F(z,y) - y` (where `F_y = 1`).
fn argmin_y(sys: &GfSystem, z: f64) -> f64 {
    if sys.f_y(z, 0.0) >= 1.0 {
        return 0.0;
    }
    let mut hi = 1.0;
    while sys.f_y(z, hi) < 1.0 {
        hi *= 2.0;
        if hi > 1e300 {
            return hi;
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sys.f_y(z, mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-17 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// `ρ` is the largest `z` at which `min_y (F(z,y) - y) <= 0`, i.e. at which
/// the fixed-point equation still has a real solution.
fn bisect(sys: &GfSystem) -> Result<(f64, f64)> {
    let gap = |z: f64| {
        let y = argmin_y(sys, z);
        (sys.f(z, y) - y, y)
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64 - 1e-12);
    if gap(hi).0 <= 0.0 {
        return Err(Error::NoConvergence(format!(
            "no sign change of the discriminant on (0, 1): bracket [{lo}, {hi}]"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gap(mid).0 <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }
    Ok((lo, gap(lo).1))
}

/// Constants `(a, b)` of `Φ∞(z) = a - b sqrt(1 - z/ρ) + O(1 - z/ρ)`.
pub fn puiseux_constants(sys: &GfSystem, rho: f64, tau: f64, tol: f64) -> Result<(f64, f64)> {
    let fyy = sys.f_yy(rho, tau);
    if fyy.is_nan() || fyy < tol {
        return Err(Error::DegenerateBranch(fyy));
    }
    let fz = sys.f_z(rho, tau);
    Ok((tau, (2.0 * rho * fz / fyy).sqrt()))
}

/// How `C_m` is extrapolated from a count table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CmOptions {
    /// Smallest acceptable table size.
    pub min_size: usize,
    /// Window start as a fraction of the table size; the window ends at the
    /// table size.
    pub window_start: f64,
}

impl Default for CmOptions {
    fn default() -> Self {
        CmOptions {
            min_size: 500,
            window_start: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CmEstimate {
    pub m: usize,
    /// Extrapolated `C_m`.
    pub value: f64,
    /// Extrapolated `1 - C_m / C∞`, computed from the exact differences
    /// `c[∞][n] - c[m][n]` so that it keeps full relative precision when tiny.
    pub deficit: f64,
    /// Largest disagreement between Richardson steps over sub-windows.
    pub spread: f64,
    pub window: (usize, usize),
}

/// Leading constants and the square-root expansion at `ρ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularityData {
    pub rho: f64,
    pub tau: f64,
    pub a: f64,
    pub b: f64,
    /// Growth rate `1/ρ`.
    pub gamma: f64,
    /// `b / (2 sqrt π)`.
    pub c: f64,
    pub residuals: Residuals,
    pub cm: BTreeMap<usize, CmEstimate>,
}

impl SingularityData {
    pub fn compute(sig: &Signature, tol: f64) -> Result<Self> {
        let bp = solve_singularity(sig, tol)?;
        let sys = GfSystem::new(sig);
        let (a, b) = puiseux_constants(&sys, bp.rho, bp.tau, tol)?;
        Ok(SingularityData {
            rho: bp.rho,
            tau: bp.tau,
            a,
            b,
            gamma: 1.0 / bp.rho,
            c: b / (2.0 * std::f64::consts::PI.sqrt()),
            residuals: bp.residuals,
            cm: BTreeMap::new(),
        })
    }

    /// Estimates and records `C_m` for every `m` in `ms`.
    pub fn estimate_constants(
        &mut self,
        table: &CountTable,
        ms: impl IntoIterator<Item = usize>,
        opts: &CmOptions,
    ) -> Result<()> {
        for m in ms {
            let e = estimate_cm(m, table, self, opts)?;
            self.cm.insert(m, e);
        }
        Ok(())
    }

    pub fn c_m(&self, m: usize) -> Option<f64> {
        self.cm.get(&m).map(|e| e.value)
    }

    /// `C_m / C_0` from the recorded deficits.
    pub fn c_ratio(&self, m: usize, base: usize) -> Result<f64> {
        let num = self.cm.get(&m).ok_or(Error::MissingConstant(m))?;
        let den = self.cm.get(&base).ok_or(Error::MissingConstant(base))?;
        Ok((1.0 - num.deficit) / (1.0 - den.deficit))
    }

    fn scaled(&self, ln_count: f64, n: usize) -> f64 {
        (ln_count + n as f64 * self.rho.ln() + 1.5 * (n as f64).ln()).exp()
    }
}

/// Natural log of `C_eff γ^n n^{-3/2}`.
pub fn asymptotic_count_ln(n: usize, sd: &SingularityData, bound: Openness) -> Result<f64> {
    let c = match bound {
        Openness::Any => sd.c,
        Openness::AtMost(m) => sd.c_m(m).ok_or(Error::MissingConstant(m))?,
    };
    let n = n as f64;
    Ok(c.ln() + n * sd.gamma.ln() - 1.5 * n.ln())
}

/// `C_eff γ^n n^{-3/2}`; overflows to `inf` past roughly `n = 500` for the
/// standard signature, use [`asymptotic_count_ln`] or [`count_ratio`] there.
pub fn asymptotic_count(n: usize, sd: &SingularityData, bound: Openness) -> Result<f64> {
    asymptotic_count_ln(n, sd, bound).map(f64::exp)
}

/// `exact / (C_eff γ^n n^{-3/2})`.
pub fn count_ratio(
    exact: &BigUint,
    n: usize,
    sd: &SingularityData,
    bound: Openness,
) -> Result<f64> {
    Ok((ln_big(exact) - asymptotic_count_ln(n, sd, bound)?).exp())
}

/// Two-point Richardson step assuming `f(n) = L (1 + c/n + O(1/n^2))`.
fn richardson(n1: usize, f1: f64, n2: usize, f2: f64) -> f64 {
    let (n1, n2) = (n1 as f64, n2 as f64);
    (n2 * f2 - n1 * f1) / (n2 - n1)
}

/// Extrapolates `C_m = lim c[m][n] ρ^n n^{3/2}` over the window
/// `[window_start * N, N]`.
pub fn estimate_cm(
    m: usize,
    table: &CountTable,
    sd: &SingularityData,
    opts: &CmOptions,
) -> Result<CmEstimate> {
    let big_n = table.max_size();
    if big_n < opts.min_size {
        return Err(Error::InsufficientData(format!(
            "table size {big_n} is below the required {}",
            opts.min_size
        )));
    }
    let lo = ((big_n as f64) * opts.window_start).round() as usize;
    let mid = (lo + big_n) / 2;
    if lo < 1 || mid <= lo || big_n <= mid {
        return Err(Error::InsufficientData(format!(
            "window [{lo}, {big_n}] is too narrow"
        )));
    }
    let row = table
        .row(Openness::AtMost(m))
        .ok_or(Error::RowNotRetained(m))?;
    let inf = table.infinity();
    let points = [lo, mid, big_n];
    for &n in &points {
        if row[n].bits() == 0 {
            return Err(Error::InsufficientData(format!(
                "c[{m}][{n}] = 0; the class is periodic or empty at this size"
            )));
        }
    }

    let f = |n: usize| sd.scaled(ln_big(&row[n]), n);
    let g = |n: usize| sd.scaled(ln_big(&inf[n]), n);
    let d = |n: usize| {
        let diff = &inf[n] - &row[n];
        sd.scaled(ln_big(&diff), n)
    };

    let est = |h: &dyn Fn(usize) -> f64, a: usize, b: usize| richardson(a, h(a), b, h(b));

    let candidates = [est(&f, lo, big_n), est(&f, lo, mid), est(&f, mid, big_n)];
    let spread = candidates.iter().cloned().fold(f64::MIN, f64::max)
        - candidates.iter().cloned().fold(f64::MAX, f64::min);

    // Richardson is linear, so R(c_m) = R(c_inf) - R(c_inf - c_m); the
    // right-hand side keeps the tiny difference exact until the last step.
    let limit_all = est(&g, lo, big_n);
    let missing = if (lo..=big_n).all(|n| row[n] == inf[n]) {
        0.0
    } else {
        est(&d, lo, big_n)
    };
    let value = limit_all - missing;
    let deficit = missing / limit_all;

    Ok(CmEstimate {
        m,
        value,
        deficit,
        spread,
        window: (lo, big_n),
    })
}

/// Richardson estimate of the constant for the `Φ∞` row.
pub fn estimate_c_infinity(
    table: &CountTable,
    sd: &SingularityData,
    opts: &CmOptions,
) -> Result<f64> {
    let big_n = table.max_size();
    if big_n < opts.min_size {
        return Err(Error::InsufficientData(format!(
            "table size {big_n} is below the required {}",
            opts.min_size
        )));
    }
    let lo = ((big_n as f64) * opts.window_start).round() as usize;
    let inf = table.infinity();
    let g = |n: usize| sd.scaled(ln_big(&inf[n]), n);
    Ok(richardson(lo, g(lo), big_n, g(big_n)))
}

/// `(a - Φ(ρ(1-h))) / (b sqrt h)`, which tends to 1 as `h -> 0+`.
///
/// `Φ` is the series truncated at the coefficients given, plus its tail
/// beyond them approximated by `C γ^n n^{-3/2}`.
pub fn puiseux_ratio(coeffs: &[BigUint], sd: &SingularityData, h: f64) -> f64 {
    let x = 1.0 - h;
    let ln_z = (sd.rho * x).ln();
    let head: f64 = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.bits() > 0)
        .map(|(n, c)| (ln_big(c) + n as f64 * ln_z).exp())
        .sum();
    let mut tail = 0.0;
    let mut n = coeffs.len();
    loop {
        let t = sd.c * (n as f64 * x.ln()).exp() * (n as f64).powf(-1.5);
        tail += t;
        if t < 1e-18 * (head + tail) {
            break;
        }
        n += 1;
    }
    (sd.a - head - tail) / (sd.b * h.sqrt())
}
