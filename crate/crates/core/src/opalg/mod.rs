//! Exact symbolic algebra over the mode operators: normal ordering,
//! commutator verification, Hamiltonian expansion and its quadrature form.

mod crosscheck;
mod normal;
mod quad;

pub use crosscheck::{compare, linear_reference, quartic_reference, CoeffDelta};
pub use normal::{
    normal_form, normal_form_capped, Expr, NormalPoly, OpAlgError, DEFAULT_MAX_DEGREE, ZERO_TOL,
};
pub use quad::{complete_square, QuadPoly, QuadTerm, SquaredForm};

use crate::nonlinear::NonlinearSpec;
use crate::params::TransformSpec;
use num_complex::Complex64;

/// `F(X₁)` as a normal-ordered polynomial. Only polynomial nonlinearities
/// have a finite operator expansion.
pub fn nonlinear_operator(f: &NonlinearSpec) -> Result<NormalPoly, OpAlgError> {
    let coeffs = match f {
        NonlinearSpec::Polynomial(c) => c,
        NonlinearSpec::Sine { .. } => return Err(OpAlgError::NotPolynomial),
    };
    let x1 = NormalPoly::x1();
    let mut out = NormalPoly::zero();
    let mut xpow = NormalPoly::one();
    for (j, &cj) in coeffs.iter().enumerate() {
        if j > 0 {
            xpow = xpow.mul(&x1, DEFAULT_MAX_DEGREE)?;
        }
        if cj != 0.0 {
            out = out.add(&xpow.scale(Complex64::new(cj, 0.0)));
        }
    }
    Ok(out)
}

/// Normal form of the transformed mode `b = μa + νa† + γF(X₁)`.
/// The nonlinearity is ignored when `γ = 0`.
pub fn expand_b(spec: &TransformSpec, f: &NonlinearSpec) -> Result<NormalPoly, OpAlgError> {
    let mut b = NormalPoly::annihilator()
        .scale(spec.mu)
        .add(&NormalPoly::creator().scale(spec.nu));
    if spec.gamma != Complex64::new(0.0, 0.0) {
        b = b.add(&nonlinear_operator(f)?.scale(spec.gamma));
    }
    Ok(b)
}

/// Normal form of `[b, b†] − 1`, pruned at [`ZERO_TOL`]. Canonical
/// coefficients give the empty (zero) polynomial for every polynomial `F`;
/// the residual is `(|μ|²−|ν|²−1) + Re(μγ*−ν*γ)·F'(X₁)` otherwise.
pub fn commutator_check(spec: &TransformSpec, f: &NonlinearSpec) -> Result<NormalPoly, OpAlgError> {
    let b = expand_b(spec, f)?;
    let bd = b.adjoint();
    Ok(b.commutator(&bd, DEFAULT_MAX_DEGREE)?
        .sub(&NormalPoly::one())
        .pruned(ZERO_TOL))
}

/// Exact normal form of `H = b†b`.
pub fn expand_hamiltonian(
    spec: &TransformSpec,
    f: &NonlinearSpec,
) -> Result<NormalPoly, OpAlgError> {
    let b = expand_b(spec, f)?;
    let bd = b.adjoint();
    Ok(bd.mul(&b, DEFAULT_MAX_DEGREE)?.pruned(1e-14))
}

/// `H = b†b` in the Hermitian quadrature basis `{X₁^m, X₂², {X₁^m, X₂}}`.
/// Requires a canonical spec: non-canonical coefficients generate monomials
/// outside the basis template.
pub fn quadrature_form(spec: &TransformSpec, f: &NonlinearSpec) -> Result<QuadPoly, OpAlgError> {
    if !spec.canonical {
        let rep = spec.canonicity(crate::params::CANONICITY_TOL);
        return Err(OpAlgError::NotCanonical(format!(
            "residuals ({:.3e}, {:.3e})",
            rep.cond1_residual, rep.cond2_residual
        )));
    }
    QuadPoly::from_normal(&expand_hamiltonian(spec, f)?)
}
