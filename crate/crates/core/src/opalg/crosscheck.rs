//! Reference coefficient tables for the expanded Hamiltonian, kept for
//! cross-checking.
//!
//! These are the closed forms commonly quoted for `H = b†b`: the linear case
//! (γ = 0) and the quadratic nonlinearity `F(X₁) = X₁²`. The engine's exact
//! reordering is authoritative; [`compare_quartic_reference`] and
//! [`compare_linear_reference`] report every per-monomial difference instead
//! of adopting either side, so a disagreement with the quoted table is
//! surfaced as data rather than silently passed or patched.

use super::normal::NormalPoly;
use crate::params::TransformSpec;
use num_complex::Complex64;

/// One monomial compared between the exact expansion and a reference table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffDelta {
    /// `(k, l)` for `a†^k a^l`.
    pub monomial: (u32, u32),
    pub computed: Complex64,
    pub reference: Complex64,
    /// `|computed − reference|`.
    pub abs_diff: f64,
}

/// Reference table for the linear case (γ = 0):
/// `(|μ|²+|ν|²) a†a + μ*ν a†² + μν* a² + |ν|² + ½`.
///
/// The quoted constant carries a `+½` that a plain product `b†b` does not
/// produce; it corresponds to the symmetrized combination `(b†b + bb†)/2`.
/// It is kept verbatim here so the comparison records that offset.
pub fn linear_reference(spec: &TransformSpec) -> NormalPoly {
    let (mu, nu) = (spec.mu, spec.nu);
    let mut p = NormalPoly::zero();
    p = p.add(&NormalPoly::monomial(
        1,
        1,
        Complex64::new(mu.norm_sqr() + nu.norm_sqr(), 0.0),
    ));
    p = p.add(&NormalPoly::monomial(2, 0, mu.conj() * nu));
    p = p.add(&NormalPoly::monomial(0, 2, mu * nu.conj()));
    p = p.add(&NormalPoly::constant(Complex64::new(
        nu.norm_sqr() + 0.5,
        0.0,
    )));
    p
}

/// Reference table for the quadratic nonlinearity `F(X₁) = X₁²`, verbatim
/// from the commonly quoted closed form.
pub fn quartic_reference(spec: &TransformSpec) -> NormalPoly {
    let (mu, nu, g) = (spec.mu, spec.nu, spec.gamma);
    let g2 = g.norm_sqr();
    let c = Complex64::new;
    let mut p = NormalPoly::zero();
    let mut add = |k: u32, l: u32, v: Complex64| {
        p = p.add(&NormalPoly::monomial(k, l, v));
    };
    add(4, 0, c(g2 / 4.0, 0.0));
    add(0, 4, c(g2 / 4.0, 0.0));
    add(3, 1, c(g2, 0.0));
    add(1, 3, c(g2, 0.0));
    add(2, 2, c(g2 / 4.0, 0.0));
    add(3, 0, 0.5 * (mu.conj() * g + nu * g.conj()));
    add(0, 3, 0.5 * (mu * g.conj() + nu.conj() * g));
    let re_mn_g = ((mu + nu) * g.conj()).re;
    add(2, 1, c(re_mn_g, 0.0));
    add(1, 2, c(re_mn_g, 0.0));
    add(2, 0, c(g2 / 2.0, 0.0) + mu.conj() * nu);
    add(0, 2, c(g2 / 2.0, 0.0) + mu * nu.conj());
    add(1, 1, c(mu.norm_sqr() + nu.norm_sqr() + 2.0 * g2, 0.0));
    add(1, 0, 0.5 * (mu.conj() * g + 3.0 * nu * g.conj() + 2.0 * nu.conj() * g));
    add(0, 1, 0.5 * (mu * g.conj() + 2.0 * nu * g.conj() + 3.0 * nu.conj() * g));
    add(0, 0, c(g2 / 4.0 + nu.norm_sqr() + 0.5, 0.0));
    p
}

/// Per-monomial comparison of an exact expansion against a reference table,
/// over the union of their monomials. `tol` decides which rows count as
/// mismatches.
pub fn compare(computed: &NormalPoly, reference: &NormalPoly, tol: f64) -> Vec<CoeffDelta> {
    let mut keys: Vec<(u32, u32)> = computed.iter().map(|(&k, _)| k).collect();
    keys.extend(reference.iter().map(|(&k, _)| k));
    keys.sort_unstable();
    keys.dedup();
    keys.iter()
        .map(|&(k, l)| {
            let a = computed.coeff(k, l);
            let b = reference.coeff(k, l);
            CoeffDelta {
                monomial: (k, l),
                computed: a,
                reference: b,
                abs_diff: (a - b).norm(),
            }
        })
        .filter(|d| d.abs_diff > tol)
        .collect()
}
