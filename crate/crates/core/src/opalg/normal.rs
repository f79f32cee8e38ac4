//! Normal-ordered polynomials in the mode operators `a`, `a†` and the
//! expression trees they are built from.
//!
//! A [`NormalPoly`] stores `Σ c_{k,l} a†^k a^l` as a sparse map keyed by the
//! exponent pair. Products are reordered with the single-swap rule
//! `a a† = a†a + 1`, memoizing the expansion of `a^l a†^k`.

use num_complex::Complex64;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};
use thiserror::Error;

/// Default bound on `k + l` for any retained monomial.
pub const DEFAULT_MAX_DEGREE: u32 = 16;

/// Coefficients with magnitude at or below this are treated as exact zeros
/// when a polynomial is pruned. Transcendental inputs (cosh r, sin δ, …) are
/// evaluated in floating point, so identities cancel only to rounding error.
pub const ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum OpAlgError {
    #[error("monomial degree {degree} exceeds the configured bound {max}")]
    DegreeOverflow { degree: u32, max: u32 },
    #[error("operator expansion requires a polynomial nonlinearity")]
    NotPolynomial,
    #[error("not canonical: {0}")]
    NotCanonical(String),
    #[error("not reducible to the quadrature template: {0}")]
    NotReducible(String),
}

/// `Σ c_{k,l} a†^k a^l` with complex coefficients; exact-zero entries are
/// never retained.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NormalPoly {
    terms: BTreeMap<(u32, u32), Complex64>,
}

impl NormalPoly {
    pub fn zero() -> Self {
        NormalPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        let mut p = NormalPoly::default();
        p.add_term(0, 0, c);
        p
    }

    /// The monomial `c · a†^raise a^lower`.
    pub fn monomial(raise: u32, lower: u32, c: Complex64) -> Self {
        let mut p = NormalPoly::default();
        p.add_term(raise, lower, c);
        p
    }

    pub fn annihilator() -> Self {
        Self::monomial(0, 1, Complex64::new(1.0, 0.0))
    }

    pub fn creator() -> Self {
        Self::monomial(1, 0, Complex64::new(1.0, 0.0))
    }

    /// `X₁ = (a + a†)/2`.
    pub fn x1() -> Self {
        let half = Complex64::new(0.5, 0.0);
        let mut p = NormalPoly::default();
        p.add_term(0, 1, half);
        p.add_term(1, 0, half);
        p
    }

    /// `X₂ = (a − a†)/2i`.
    pub fn x2() -> Self {
        let mut p = NormalPoly::default();
        p.add_term(0, 1, Complex64::new(0.0, -0.5));
        p.add_term(1, 0, Complex64::new(0.0, 0.5));
        p
    }

    fn add_term(&mut self, k: u32, l: u32, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        let e = self.terms.entry((k, l)).or_insert(Complex64::new(0.0, 0.0));
        *e += c;
        if *e == Complex64::new(0.0, 0.0) {
            self.terms.remove(&(k, l));
        }
    }

    pub fn coeff(&self, raise: u32, lower: u32) -> Complex64 {
        self.terms
            .get(&(raise, lower))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Terms in deterministic `(k, l)` order.
    pub fn iter(&self) -> impl Iterator<Item = (&(u32, u32), &Complex64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest `k + l` over retained monomials.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|&(k, l)| k + l).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(k, l), &c) in other.terms.iter() {
            out.add_term(k, l, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(k, l), &c) in other.terms.iter() {
            out.add_term(k, l, -c);
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = NormalPoly::default();
        for (&(k, l), &v) in self.terms.iter() {
            out.add_term(k, l, c * v);
        }
        out
    }

    /// Adjoint: `(k, l, c) → (l, k, conj c)`.
    pub fn adjoint(&self) -> Self {
        let mut out = NormalPoly::default();
        for (&(k, l), &c) in self.terms.iter() {
            out.add_term(l, k, c.conj());
        }
        out
    }

    /// Normal-ordered product. Every cross term `a^{l₁} a†^{k₂}` is rewritten
    /// with the memoized swap expansion before coefficients are merged.
    pub fn mul(&self, other: &Self, max_degree: u32) -> Result<Self, OpAlgError> {
        let mut out = NormalPoly::default();
        for (&(k1, l1), &c1) in self.terms.iter() {
            for (&(k2, l2), &c2) in other.terms.iter() {
                let c = c1 * c2;
                for (j, count) in swap_counts(l1, k2).iter().enumerate() {
                    let j = j as u32;
                    if *count == 0.0 {
                        continue;
                    }
                    let k = k1 + (k2 - j);
                    let l = (l1 - j) + l2;
                    if k + l > max_degree {
                        return Err(OpAlgError::DegreeOverflow {
                            degree: k + l,
                            max: max_degree,
                        });
                    }
                    out.add_term(k, l, c * *count);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32, max_degree: u32) -> Result<Self, OpAlgError> {
        let mut out = NormalPoly::one();
        for _ in 0..n {
            out = out.mul(self, max_degree)?;
        }
        Ok(out)
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self, max_degree: u32) -> Result<Self, OpAlgError> {
        Ok(self.mul(other, max_degree)?.sub(&other.mul(self, max_degree)?))
    }

    /// Drops coefficients with `|c| ≤ tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        let mut out = NormalPoly::default();
        for (&(k, l), &c) in self.terms.iter() {
            if c.norm() > tol {
                out.add_term(k, l, c);
            }
        }
        out
    }

    /// True when every coefficient is at most `tol` in magnitude.
    pub fn is_zero(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.norm() <= tol)
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient-magnitude difference against `other`, over the
    /// union of their monomials.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut keys: Vec<(u32, u32)> = self.terms.keys().copied().collect();
        keys.extend(other.terms.keys().copied());
        keys.sort_unstable();
        keys.dedup();
        keys.iter()
            .map(|&(k, l)| (self.coeff(k, l) - other.coeff(k, l)).norm())
            .fold(0.0, f64::max)
    }

    /// Human-readable normal-ordered form, `c·ad^k a^l` terms in `(k, l)`
    /// order.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(&(k, l), c)| {
                let mut s = format!("({:+.12e}{:+.12e}i)", c.re, c.im);
                if k > 0 {
                    s.push_str(&format!("·ad^{k}"));
                }
                if l > 0 {
                    s.push_str(&format!("·a^{l}"));
                }
                s
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Machine-readable rows `(k, l, re, im)` in deterministic order.
    pub fn to_rows(&self) -> Vec<(u32, u32, f64, f64)> {
        self.terms
            .iter()
            .map(|(&(k, l), c)| (k, l, c.re, c.im))
            .collect()
    }
}

/// Expansion counts for `a^l a†^k = Σ_j n_j · a†^{k−j} a^{l−j}`, memoized.
///
/// Derived by repeated single swaps: `a a†^k = a†^k a + k a†^{k−1}` gives the
/// recursion `n(l,k)[j] = n(l−1,k)[j] + k·n(l−1,k−1)[j−1]`. Counts stay exact
/// in f64 for the supported degrees.
fn swap_counts(l: u32, k: u32) -> &'static [f64] {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), &'static [f64]>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    {
        let guard = cache.lock().unwrap();
        if let Some(v) = guard.get(&(l, k)) {
            return v;
        }
    }
    let result = compute_swap_counts(l, k);
    let leaked: &'static [f64] = Box::leak(result.into_boxed_slice());
    let mut guard = cache.lock().unwrap();
    guard.entry((l, k)).or_insert(leaked)
}

fn compute_swap_counts(l: u32, k: u32) -> Vec<f64> {
    if l == 0 || k == 0 {
        return vec![1.0];
    }
    let prev_same = compute_swap_counts(l - 1, k);
    let prev_swap = compute_swap_counts(l - 1, k - 1);
    let jmax = l.min(k) as usize;
    let mut out = vec![0.0; jmax + 1];
    for (j, v) in prev_same.iter().enumerate() {
        out[j] += v;
    }
    for (j, v) in prev_swap.iter().enumerate() {
        out[j + 1] += k as f64 * v;
    }
    out
}

/// Operator expression tree over `a`, `a†`, complex scalars, sums, products,
/// powers and adjoints.
#[derive(Debug, Clone)]
pub enum Expr {
    Annihilator,
    Creator,
    Scalar(Complex64),
    Sum(Vec<Expr>),
    Prod(Vec<Expr>),
    Pow(Box<Expr>, u32),
    Adjoint(Box<Expr>),
}

impl Expr {
    pub fn x1() -> Expr {
        Expr::Prod(vec![
            Expr::Scalar(Complex64::new(0.5, 0.0)),
            Expr::Sum(vec![Expr::Annihilator, Expr::Creator]),
        ])
    }

    pub fn x2() -> Expr {
        Expr::Prod(vec![
            Expr::Scalar(Complex64::new(0.0, -0.5)),
            Expr::Sum(vec![
                Expr::Annihilator,
                Expr::Prod(vec![Expr::Scalar(Complex64::new(-1.0, 0.0)), Expr::Creator]),
            ]),
        ])
    }
}

/// Exact normal-ordered form of an expression, with the default degree bound.
pub fn normal_form(expr: &Expr) -> Result<NormalPoly, OpAlgError> {
    normal_form_capped(expr, DEFAULT_MAX_DEGREE)
}

pub fn normal_form_capped(expr: &Expr, max_degree: u32) -> Result<NormalPoly, OpAlgError> {
    match expr {
        Expr::Annihilator => Ok(NormalPoly::annihilator()),
        Expr::Creator => Ok(NormalPoly::creator()),
        Expr::Scalar(c) => Ok(NormalPoly::constant(*c)),
        Expr::Sum(parts) => {
            let mut acc = NormalPoly::zero();
            for p in parts {
                acc = acc.add(&normal_form_capped(p, max_degree)?);
            }
            Ok(acc)
        }
        Expr::Prod(parts) => {
            let mut acc = NormalPoly::one();
            for p in parts {
                acc = acc.mul(&normal_form_capped(p, max_degree)?, max_degree)?;
            }
            Ok(acc)
        }
        Expr::Pow(base, n) => normal_form_capped(base, max_degree)?.pow(*n, max_degree),
        Expr::Adjoint(inner) => Ok(normal_form_capped(inner, max_degree)?.adjoint()),
    }
}
