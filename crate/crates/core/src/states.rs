//! Closed-form eigenstates of the transformed annihilation operator.
//!
//! In the `X₁` representation (`[X₁, X₂] = i/2`, `X₂ = −(i/2) d/dx`) the
//! transformed mode acts as the first-order operator
//! `b = (μ+ν)x + ((μ−ν)/2) d/dx + γF(x)`, so `bΨ = βΨ` solves exactly to
//!
//! `Ψ(x) = N · exp[ quad·x² + lin·x + phase·∫F ]`
//!
//! with `quad = −(μ+ν)/(μ−ν)`, `lin = 2β/(μ−ν)` and `phase = −2γ/(μ−ν)`.
//! Canonicity makes `phase` purely imaginary: the nonlinearity enters only
//! through the phase and the density stays Gaussian for every `F`.

use crate::nonlinear::NonlinearSpec;
use crate::numerics::{self, GridSpec, NumericsError};
use crate::params::TransformSpec;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StateError {
    #[error("transformation must be canonical (residuals {cond1:.3e}, {cond2:.3e})")]
    NotCanonical { cond1: f64, cond2: f64 },
    #[error("representation degenerates: |mu - nu| = {0:.3e}")]
    Degenerate(f64),
    #[error("non-normalizable: Re((mu+nu)/(mu-nu)) = {0:.6e} <= 0")]
    NonNormalizable(f64),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// A multiphoton squeezed state in closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpec {
    pub transform: TransformSpec,
    pub beta: Complex64,
    pub nonlinearity: NonlinearSpec,
    /// Coefficient of `x²` in the exponent; `Re < 0`.
    pub quad_coeff: Complex64,
    /// Coefficient of `x` in the exponent.
    pub lin_coeff: Complex64,
    /// Coefficient of `∫F` in the exponent; purely imaginary for canonical
    /// transformations (pure phase).
    pub phase_coeff: Complex64,
    /// Real normalization constant: `∫|Ψ|² = 1`.
    pub norm: f64,
}

/// Solves `bΨ = βΨ` in closed form. The vacuum is the `β = 0` instance.
pub fn solve_eigenstate(
    transform: &TransformSpec,
    beta: Complex64,
    f: &NonlinearSpec,
) -> Result<StateSpec, StateError> {
    if !transform.canonical {
        let rep = transform.canonicity(crate::params::CANONICITY_TOL);
        return Err(StateError::NotCanonical {
            cond1: rep.cond1_residual,
            cond2: rep.cond2_residual,
        });
    }
    let diff = transform.mu - transform.nu;
    if diff.norm() < 1e-12 {
        return Err(StateError::Degenerate(diff.norm()));
    }
    let quad = -(transform.mu + transform.nu) / diff;
    if quad.re >= 0.0 {
        return Err(StateError::NonNormalizable(-quad.re));
    }
    let lin = 2.0 * beta / diff;
    let phase = -2.0 * transform.gamma / diff;
    // Exact Gaussian normalization of |Ψ|² = N² exp(2Re(quad)x² + 2Re(lin)x).
    let a2 = -2.0 * quad.re;
    let integral = (std::f64::consts::PI / a2).sqrt() * (lin.re * lin.re / a2).exp();
    Ok(StateSpec {
        transform: *transform,
        beta,
        nonlinearity: f.clone(),
        quad_coeff: quad,
        lin_coeff: lin,
        phase_coeff: phase,
        norm: 1.0 / integral.sqrt(),
    })
}

impl StateSpec {
    /// `Ψ(x)`.
    pub fn eval(&self, x: f64) -> Complex64 {
        let expo = self.quad_coeff * (x * x)
            + self.lin_coeff * x
            + self.phase_coeff * self.nonlinearity.antiderivative(x);
        self.norm * expo.exp()
    }

    /// `|Ψ(x)|²` — exactly Gaussian, independent of the nonlinearity.
    pub fn density(&self, x: f64) -> f64 {
        let e = 2.0 * (self.quad_coeff.re * x * x + self.lin_coeff.re * x);
        self.norm * self.norm * e.exp()
    }

    /// Center of the Gaussian density.
    pub fn density_center(&self) -> f64 {
        self.lin_coeff.re / (-2.0 * self.quad_coeff.re)
    }

    /// Variance of the Gaussian density, `Δ²X₁`.
    pub fn density_variance(&self) -> f64 {
        -1.0 / (4.0 * self.quad_coeff.re)
    }

    /// `Ψ'(x)`, from the analytic derivative of the exponent.
    pub fn eval_derivative(&self, x: f64) -> Complex64 {
        self.exponent_derivative(x) * self.eval(x)
    }

    /// `d/dx` of the exponent: `2·quad·x + lin + phase·F(x)`.
    pub fn exponent_derivative(&self, x: f64) -> Complex64 {
        2.0 * self.quad_coeff * x + self.lin_coeff + self.phase_coeff * self.nonlinearity.eval(x)
    }

    /// Default integration grid: `n_sigmas` density standard deviations
    /// around the center (9.5 puts the Gaussian tail below 1e−19).
    pub fn grid(&self, n_sigmas: f64, points: usize) -> GridSpec {
        let s = self.density_variance().sqrt();
        GridSpec {
            center: self.density_center(),
            half_width: n_sigmas * s,
            points,
        }
    }

    /// `(bΨ − βΨ)(x)` recombined from the raw transformation coefficients;
    /// identically zero when the solved exponent is consistent with them.
    pub fn eigen_deviation(&self, x: f64) -> Complex64 {
        let t = &self.transform;
        let bracket = (t.mu + t.nu) * x
            + (t.mu - t.nu) * 0.5 * self.exponent_derivative(x)
            + t.gamma * self.nonlinearity.eval(x)
            - self.beta;
        bracket * self.eval(x)
    }

    /// Relative eigen-residual `‖bΨ − βΨ‖₂ / ‖Ψ‖₂` on the given grid.
    pub fn eigen_residual(&self, grid: &GridSpec) -> Result<f64, StateError> {
        let (dev, _) = numerics::integrate_re(|x| self.eigen_deviation(x).norm_sqr(), grid, 1e-12)?;
        let (nrm, _) = numerics::integrate_re(|x| self.density(x), grid, 1e-12)?;
        Ok((dev.max(0.0) / nrm).sqrt())
    }

    /// Rows `(x, Re Ψ, Im Ψ, |Ψ|², arg Ψ)` over a uniform grid.
    pub fn dump_rows(&self, grid: &GridSpec) -> Vec<(f64, f64, f64, f64, f64)> {
        let h = grid.step();
        (0..grid.points)
            .map(|i| {
                let x = grid.center - grid.half_width + i as f64 * h;
                let v = self.eval(x);
                (x, v.re, v.im, v.norm_sqr(), v.arg())
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn canonical(r: f64, ga: f64) -> TransformSpec {
        TransformSpec::from_polar(r, 0.0, 0.0, ga, FRAC_PI_2).unwrap()
    }

    #[test]
    fn untransformed_vacuum() {
        let t = TransformSpec::from_polar(0.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        let f = NonlinearSpec::monomial(2).unwrap();
        let s = solve_eigenstate(&t, c(0.0, 0.0), &f).unwrap();
        assert!((s.eval(0.0).re - (2.0 / std::f64::consts::PI).powf(0.25)).abs() < 1e-14);
        assert!((s.density_variance() - 0.25).abs() < 1e-14);
        assert!((s.density_center()).abs() < 1e-14);
    }

    #[test]
    fn squeezed_vacuum_width_and_phase() {
        let t = canonical(0.8, 0.1);
        let f = NonlinearSpec::monomial(2).unwrap();
        let s = solve_eigenstate(&t, c(0.0, 0.0), &f).unwrap();
        assert!((s.density_variance() - (-1.6f64).exp() / 4.0).abs() < 1e-14);
        assert!(s.density_center().abs() < 1e-14);
        // cubic pure phase: coefficient of x^3/3 is Im(-2 gamma / (mu - nu))
        assert!(s.phase_coeff.re.abs() < 1e-14);
        assert!((s.phase_coeff.im + 0.2 * 0.8f64.exp()).abs() < 1e-14);
    }

    #[test]
    fn displaced_state_center() {
        let t = canonical(0.8, 0.1);
        let f = NonlinearSpec::monomial(2).unwrap();
        let s = solve_eigenstate(&t, c(3.0, 0.0), &f).unwrap();
        assert!((s.density_center() - 3.0 * (-0.8f64).exp()).abs() < 1e-12);
        assert!((s.density_center() - 1.3479868923516648).abs() < 1e-12);
        let grid = s.grid(9.5, 513);
        assert!(s.eigen_residual(&grid).unwrap() < 1e-8);
    }

    #[test]
    fn normalization_holds_numerically() {
        for (deg, beta) in [(1usize, c(0.5, 0.2)), (3, c(3.0, 0.0)), (4, c(-1.0, 0.7))] {
            let t = canonical(0.6, 0.08);
            let f = NonlinearSpec::monomial(deg).unwrap();
            let s = solve_eigenstate(&t, beta, &f).unwrap();
            let grid = s.grid(9.5, 513);
            let (nrm, _) = numerics::integrate_re(|x| s.density(x), &grid, 1e-12).unwrap();
            assert!((nrm - 1.0).abs() < 1e-10, "deg {deg}: norm {nrm}");
        }
    }

    #[test]
    fn phase_only_theorem() {
        // canonical: Re(phase_coeff) = 0 to rounding; a 0.1 violation of the
        // second condition makes it decidedly nonzero.
        for (r, phi, ga) in [(0.3, 0.2, 0.15), (0.9, -0.7, 0.05), (1.4, 1.0, 0.3)] {
            let t = TransformSpec::from_polar(r, phi, phi, ga, phi + FRAC_PI_2).unwrap();
            let s = solve_eigenstate(&t, c(1.0, 0.5), &NonlinearSpec::monomial(3).unwrap()).unwrap();
            assert!(s.phase_coeff.re.abs() < 1e-14 * s.phase_coeff.norm().max(1.0));
        }
        let broken = TransformSpec::from_polar_unchecked(0.8, 0.0, 0.0, 0.1, FRAC_PI_2 - 0.96);
        let diff = broken.mu - broken.nu;
        let phase = -2.0 * broken.gamma / diff;
        assert!(phase.re.abs() > 1e-2);
    }

    #[test]
    fn density_ignores_the_nonlinearity() {
        let t = canonical(0.8, 0.1);
        let states: Vec<StateSpec> = [1usize, 2, 3, 4]
            .iter()
            .map(|&d| solve_eigenstate(&t, c(3.0, 0.0), &NonlinearSpec::monomial(d).unwrap()).unwrap())
            .collect();
        for s in &states[1..] {
            assert_eq!(s.density_center(), states[0].density_center());
            assert_eq!(s.density_variance(), states[0].density_variance());
        }
        // log-density is exactly quadratic in x
        let s = &states[2];
        let grid = s.grid(5.0, 101);
        let h = grid.step();
        let xc = s.density_center();
        let var = s.density_variance();
        let log_norm = 2.0 * s.norm.ln();
        for i in 0..grid.points {
            let x = grid.center - grid.half_width + i as f64 * h;
            let model = log_norm - x * x / (2.0 * var) + xc * x / var;
            let actual = s.density(x).ln();
            assert!((actual - model).abs() < 1e-10, "x={x}");
        }
    }

    #[test]
    fn phase_structure_by_nonlinearity() {
        // gamma = 0, beta real: no nonlinear phase, and the linear phase
        // coefficient is real, so the wavefunction is real up to sign.
        let lin = TransformSpec::from_polar(0.6, 0.0, 0.0, 0.0, 0.0).unwrap();
        let s = solve_eigenstate(&lin, c(2.0, 0.0), &NonlinearSpec::monomial(2).unwrap()).unwrap();
        assert_eq!(s.phase_coeff, c(0.0, 0.0));
        for &x in &[-0.5, 0.3, 1.7] {
            assert!(s.eval(x).im.abs() < 1e-15);
        }
        // cubic nonlinearity: the phase carries x^4/4 times the coefficient
        let t = canonical(0.8, 0.1);
        let s = solve_eigenstate(&t, c(3.0, 0.0), &NonlinearSpec::monomial(3).unwrap()).unwrap();
        let x = 1.3_f64;
        let quartic = s.phase_coeff.im * x.powi(4) / 4.0;
        let expected = (s.quad_coeff.im * x * x + s.lin_coeff.im * x + quartic)
            .rem_euclid(2.0 * std::f64::consts::PI);
        let got = (s.eval(x).arg()).rem_euclid(2.0 * std::f64::consts::PI);
        assert!((expected - got).abs() < 1e-12, "{expected} vs {got}");
    }

    #[test]
    fn residual_detects_a_perturbed_exponent() {
        let t = canonical(0.8, 0.1);
        let f = NonlinearSpec::monomial(2).unwrap();
        let mut s = solve_eigenstate(&t, c(3.0, 0.0), &f).unwrap();
        let grid = s.grid(9.5, 513);
        assert!(s.eigen_residual(&grid).unwrap() < 1e-10);
        s.quad_coeff *= 1.01;
        assert!(s.eigen_residual(&grid).unwrap() > 1e-3);
    }

    #[test]
    fn degenerate_and_noncanonical_are_rejected() {
        let f = NonlinearSpec::monomial(2).unwrap();
        let bad = TransformSpec::from_polar_unchecked(0.8, 0.0, 0.0, 0.1, 0.0);
        assert!(matches!(
            solve_eigenstate(&bad, c(0.0, 0.0), &f),
            Err(StateError::NotCanonical { .. })
        ));
        // |mu - nu| >= 1/(|mu|+|nu|) for canonical coefficients, so true
        // degeneracy needs |mu| ~ 1e12 and cannot be reached in f64 without
        // also breaking the first condition; exercise the guard directly.
        let near = TransformSpec {
            canonical: true,
            ..TransformSpec::from_raw_unchecked(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0))
        };
        assert!(matches!(
            solve_eigenstate(&near, c(0.0, 0.0), &f),
            Err(StateError::Degenerate(_))
        ));
    }

    #[test]
    fn sine_nonlinearity_solves_and_normalizes() {
        let t = canonical(0.5, 0.1);
        let f = NonlinearSpec::sine(1.0, 2.0).unwrap();
        let s = solve_eigenstate(&t, c(2.0, 0.0), &f).unwrap();
        let grid = s.grid(9.5, 513);
        assert!(s.eigen_residual(&grid).unwrap() < 1e-10);
    }
}
