//! Quadrature uncertainties, photon number distributions, photon moments and
//! the second-order coherence `g²(0)`.

use crate::nonlinear::NonlinearSpec;
use crate::numerics::{self, GridSpec, NumericsError, HERMITE_MAX_N};
use crate::params::TransformSpec;
use crate::states::{solve_eigenstate, StateError, StateSpec};
use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ObsError {
    /// The Fock tail beyond `n_max` holds too much probability; raise `n_max`.
    #[error("Fock tail mass {tail_mass:.3e} exceeds 1e-6 at n_max = {n_max}")]
    TailTooHeavy { tail_mass: f64, n_max: usize },
    #[error("outside the closed-form domain: {0}")]
    Domain(String),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Decomposition of the quadrature uncertainties.
///
/// `dx2` splits as `dx2_linear + dx2_nonlinear + cross_term`, where the
/// linear part is the exact operator value `|μ+ν|²/4`, the nonlinear part is
/// `Im²(μγ*−ν*γ)·Δ²F` and the cross term carries the correlation between the
/// linear and nonlinear parts of `X₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyReport {
    /// `Δ²X₁`, from the exact Gaussian density.
    pub dx1: f64,
    /// `Δ²X₂`, from derivative integrals.
    pub dx2: f64,
    pub dx2_linear: f64,
    pub dx2_nonlinear: f64,
    pub cross_term: f64,
    /// `Δ²X₁ · Δ²X₂`.
    pub product: f64,
}

impl UncertaintyReport {
    /// `dx2 − (dx2_linear + dx2_nonlinear + cross_term)`.
    pub fn closure_gap(&self) -> f64 {
        self.dx2 - (self.dx2_linear + self.dx2_nonlinear + self.cross_term)
    }
}

const INT_TOL: f64 = 1e-12;

/// Evaluates `Δ²X₁`, `Δ²X₂` and the three-way decomposition of `Δ²X₂`.
pub fn uncertainties(state: &StateSpec) -> Result<UncertaintyReport, ObsError> {
    let grid = state.grid(9.5, 513);
    let f = &state.nonlinearity;

    // <X2> and <X2^2> from X2 Ψ = -(i/2) Ψ'.
    let (x2_mean_c, _) = numerics::integrate(
        |x| {
            let psi = state.eval(x);
            psi.conj() * Complex64::new(0.0, -0.5) * state.exponent_derivative(x) * psi
        },
        &grid,
        INT_TOL,
    )?;
    let x2_mean = x2_mean_c.re;
    let (x2_sq, _) = numerics::integrate_re(
        |x| 0.25 * state.eval_derivative(x).norm_sqr(),
        &grid,
        INT_TOL,
    )?;
    let dx2 = x2_sq - x2_mean * x2_mean;

    // F-moments over the Gaussian density.
    let (f_mean, _) = numerics::integrate_re(|x| f.eval(x) * state.density(x), &grid, INT_TOL)?;
    let (f_sq, _) =
        numerics::integrate_re(|x| f.eval(x) * f.eval(x) * state.density(x), &grid, INT_TOL)?;
    let var_f = f_sq - f_mean * f_mean;

    // <{X2, F}> via {X2,F}Ψ = -(i/2)(F'Ψ + 2FΨ').
    let (acom_c, _) = numerics::integrate(
        |x| {
            let psi = state.eval(x);
            let fx = f.eval(x);
            psi.conj()
                * Complex64::new(0.0, -0.5)
                * (f.derivative(x) * psi + 2.0 * fx * state.eval_derivative(x))
        },
        &grid,
        INT_TOL,
    )?;
    let acom_x2f = acom_c.re;

    let m = state.transform.x2_nonlinear_coeff();
    let t = &state.transform;
    let dx2_linear = (t.mu + t.nu).norm_sqr() / 4.0;
    let dx2_nonlinear = m * m * var_f;
    // <{X2l, F}>_T = <{X2, F}>_T - 2 m Var F, with <{X2,F}>_T the
    // mean-subtracted anticommutator.
    let acom_t = acom_x2f - 2.0 * x2_mean * f_mean;
    let cross_term = m * (acom_t - 2.0 * m * var_f);

    let dx1 = state.density_variance();
    Ok(UncertaintyReport {
        dx1,
        dx2,
        dx2_linear,
        dx2_nonlinear,
        cross_term,
        product: dx1 * dx2,
    })
}

/// Photon number distribution with moments and `g²(0) = 1 + (Δ²n − n̄)/n̄²`.
#[derive(Debug, Clone, PartialEq)]
pub struct PNDResult {
    /// `P(0..=n_max)`.
    pub probabilities: Vec<f64>,
    /// `1 − Σ P(n)` (rounding can make this slightly negative).
    pub tail_mass: f64,
    pub n_mean: f64,
    pub n_var: f64,
    /// NaN for the vacuum (`n̄ = 0`).
    pub g2: f64,
}

/// Largest tolerated Fock-tail mass.
pub const TAIL_TOL: f64 = 1e-6;

/// `P(n) = |⟨h_n|Ψ⟩|²` for `n ≤ n_max`, by ladder accumulation on a refined
/// grid. Fails with [`ObsError::TailTooHeavy`] when the missing tail exceeds
/// [`TAIL_TOL`].
pub fn pnd(state: &StateSpec, n_max: usize) -> Result<PNDResult, ObsError> {
    if n_max > HERMITE_MAX_N {
        return Err(ObsError::Numerics(NumericsError::IndexTooLarge(n_max)));
    }
    let mut grid = initial_overlap_grid(state, n_max);
    let mut prev = fock_overlaps(state, n_max, &grid);
    let mut converged = None;
    for _ in 0..8 {
        grid = grid.doubled();
        let cur = fock_overlaps(state, n_max, &grid);
        let change = prev
            .iter()
            .zip(cur.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if change <= 1e-11 {
            converged = Some(cur);
            break;
        }
        prev = cur;
    }
    let overlaps = converged.ok_or(NumericsError::NoConvergence {
        change: f64::NAN,
        points: grid.points,
    })?;

    let probabilities: Vec<f64> = overlaps.iter().map(|c| c.norm_sqr()).collect();
    let total: f64 = probabilities.iter().sum();
    let tail_mass = 1.0 - total;
    if tail_mass > TAIL_TOL {
        return Err(ObsError::TailTooHeavy { tail_mass, n_max });
    }
    let n_mean: f64 = probabilities
        .iter()
        .enumerate()
        .map(|(n, p)| n as f64 * p)
        .sum();
    let n_sq: f64 = probabilities
        .iter()
        .enumerate()
        .map(|(n, p)| (n as f64) * (n as f64) * p)
        .sum();
    let n_var = n_sq - n_mean * n_mean;
    let g2 = if n_mean > 1e-12 {
        1.0 + (n_var - n_mean) / (n_mean * n_mean)
    } else {
        f64::NAN
    };
    Ok(PNDResult {
        probabilities,
        tail_mass,
        n_mean,
        n_var,
        g2,
    })
}

/// Doubles `n_max` (from 128) until the tail fits, up to the ladder limit.
pub fn pnd_adaptive(state: &StateSpec, start_n_max: usize) -> Result<PNDResult, ObsError> {
    let mut n_max = start_n_max.max(16);
    loop {
        match pnd(state, n_max) {
            Err(ObsError::TailTooHeavy { tail_mass, .. }) if n_max < HERMITE_MAX_N => {
                let _ = tail_mass;
                n_max = (2 * n_max).min(HERMITE_MAX_N);
            }
            other => return other,
        }
    }
}

fn initial_overlap_grid(state: &StateSpec, n_max: usize) -> GridSpec {
    // Resolve both the state's own phase oscillation and the fastest
    // number-state oscillation, wavenumber √2·√(2n+1) in x.
    let g = state.grid(9.5, 0);
    let k_hermite = std::f64::consts::SQRT_2 * ((2 * n_max + 1) as f64).sqrt();
    let k_state = state
        .exponent_derivative(g.center - g.half_width)
        .im
        .abs()
        .max(state.exponent_derivative(g.center + g.half_width).im.abs());
    let k = k_hermite + k_state;
    let min_points = ((k * g.half_width) as usize).max(256);
    GridSpec {
        points: min_points.next_power_of_two() + 1,
        ..g
    }
}

/// Overlaps `⟨h_n|Ψ⟩` for all `n ≤ n_max` in one ladder pass per grid point.
fn fock_overlaps(state: &StateSpec, n_max: usize, grid: &GridSpec) -> Vec<Complex64> {
    let h = grid.step();
    let mut acc = vec![Complex64::new(0.0, 0.0); n_max + 1];
    let mut ladder = vec![0.0f64; n_max + 1];
    for i in 0..grid.points {
        let x = grid.center - grid.half_width + i as f64 * h;
        let w = if i == 0 || i == grid.points - 1 {
            0.5
        } else {
            1.0
        };
        let psi = state.eval(x) * w;
        numerics::hermite_ladder(x, &mut ladder).expect("n_max checked against HERMITE_MAX_N");
        for (a, hn) in acc.iter_mut().zip(ladder.iter()) {
            *a += psi * *hn;
        }
    }
    for a in acc.iter_mut() {
        *a *= h;
    }
    acc
}

/// Closed-form photon moments for the quadratic nonlinearity at equal zero
/// phases (`δ = ±π/2`) and real eigenvalue, kept verbatim as a reference:
///
/// `n̄ = [(2+3γ²)cosh 2r − 3γ²sinh 2r − 2]/4 + β₁²e^{−2r}(1+6γ²+4γ²β₁²)`
///
/// with the matching mean-square deviation. At `γ = 0` both reduce to the
/// two-photon coherent state values, which the numerical moments reproduce;
/// at `γ ≠ 0` the quoted forms sit in a different coupling normalization
/// than the operator definition, so [`compare_moments`] reports deltas
/// instead of asserting agreement.
pub fn closed_moments(transform: &TransformSpec, beta1: f64) -> Result<(f64, f64), ObsError> {
    let tol = 1e-9;
    let phase_ok = transform.phi1.abs() < tol && transform.phi2.abs() < tol;
    if !phase_ok {
        return Err(ObsError::Domain(format!(
            "requires phi1 = phi2 = 0 (got {}, {})",
            transform.phi1, transform.phi2
        )));
    }
    if transform.gamma_abs > 0.0 {
        let d = transform.delta.rem_euclid(std::f64::consts::PI) - std::f64::consts::FRAC_PI_2;
        if d.abs() > tol {
            return Err(ObsError::Domain(format!(
                "requires delta = ±pi/2 for a nonzero coupling (got {})",
                transform.delta
            )));
        }
    }
    let r = transform.r;
    let g = transform.gamma_abs;
    let g2 = g * g;
    let b2 = beta1 * beta1;
    let (ch2, sh2) = ((2.0 * r).cosh(), (2.0 * r).sinh());
    let n_mean = ((2.0 + 3.0 * g2) * ch2 - 3.0 * g2 * sh2 - 2.0) / 4.0
        + b2 * (ch2 - sh2) * (1.0 + 6.0 * g2 + 4.0 * g2 * b2);
    let e4 = (4.0 * r).exp();
    let n_var = (-4.0 * r).exp() / 8.0
        * (1.0
            + (8.0 * r).exp()
            + 12.0 * g2
            + 48.0 * g2 * g2
            + 2.0 * e4 * (g2 - 1.0)
            + 8.0 * b2
                * (1.0
                    + (18.0 + 4.0 * e4) * g2
                    + 4.0 * b2 * g2 * (4.0 + e4 + 42.0 * g2 + 16.0 * b2 * g2)
                    + 96.0 * g2 * g2));
    Ok((n_mean, n_var))
}

/// Side-by-side closed-form vs numerical moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentComparison {
    pub closed_n_mean: f64,
    pub closed_n_var: f64,
    pub numeric_n_mean: f64,
    pub numeric_n_var: f64,
}

impl MomentComparison {
    pub fn delta_n_mean(&self) -> f64 {
        self.numeric_n_mean - self.closed_n_mean
    }
    pub fn delta_n_var(&self) -> f64 {
        self.numeric_n_var - self.closed_n_var
    }
}

/// Evaluates the reference closed forms and the numerical moments for the
/// quadratic nonlinearity; the numerical side is authoritative.
pub fn compare_moments(
    transform: &TransformSpec,
    beta1: f64,
    n_max: usize,
) -> Result<MomentComparison, ObsError> {
    let (cm, cv) = closed_moments(transform, beta1)?;
    let f = NonlinearSpec::monomial(2).expect("degree 2 is valid");
    let state = solve_eigenstate(transform, Complex64::new(beta1, 0.0), &f)?;
    let p = pnd_adaptive(&state, n_max)?;
    Ok(MomentComparison {
        closed_n_mean: cm,
        closed_n_var: cv,
        numeric_n_mean: p.n_mean,
        numeric_n_var: p.n_var,
    })
}

/// Scan axis for [`G2Scan`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanParam {
    Squeezing,
    Coupling,
}

/// One point of a `g²` scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPoint {
    pub param: f64,
    pub g2: f64,
    pub n_mean: f64,
    pub n_var: f64,
}

/// A `g²(0)` scan over the squeezing parameter or the coupling, everything
/// else fixed (`φ₁ = φ₂ = 0`, `δ = π/2`, real eigenvalue).
#[derive(Debug, Clone)]
pub struct G2Scan {
    pub over: ScanParam,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    /// Fixed squeezing when scanning the coupling.
    pub r: f64,
    /// Fixed coupling when scanning the squeezing.
    pub gamma_abs: f64,
    pub beta1: f64,
    pub f: NonlinearSpec,
    pub n_max: usize,
}

impl G2Scan {
    fn point(&self, value: f64) -> Result<ScanPoint, ObsError> {
        let (r, ga) = match self.over {
            ScanParam::Squeezing => (value, self.gamma_abs),
            ScanParam::Coupling => (self.r, value),
        };
        let t = TransformSpec::from_polar(r, 0.0, 0.0, ga, std::f64::consts::FRAC_PI_2)
            .map_err(|e| ObsError::Domain(e.to_string()))?;
        let state = solve_eigenstate(&t, Complex64::new(self.beta1, 0.0), &self.f)?;
        let p = pnd_adaptive(&state, self.n_max)?;
        Ok(ScanPoint {
            param: value,
            g2: p.g2,
            n_mean: p.n_mean,
            n_var: p.n_var,
        })
    }

    /// Runs the scan; points are independent and evaluated in parallel with
    /// a deterministic assembly order.
    pub fn run(&self) -> Result<Vec<ScanPoint>, ObsError> {
        let n = ((self.stop - self.start) / self.step).round() as usize;
        let values: Vec<f64> = (0..=n).map(|i| self.start + i as f64 * self.step).collect();
        values.par_iter().map(|&v| self.point(v)).collect()
    }

    /// Locates every `g² = 1` crossing of a completed scan by bisection to
    /// `1e−3` in the parameter.
    pub fn crossings(&self, points: &[ScanPoint]) -> Result<Vec<f64>, ObsError> {
        let mut out = Vec::new();
        for w in points.windows(2) {
            let (a, b) = (w[0], w[1]);
            if (a.g2 - 1.0) == 0.0 {
                out.push(a.param);
                continue;
            }
            if (a.g2 - 1.0) * (b.g2 - 1.0) < 0.0 {
                let (mut lo, mut hi) = (a.param, b.param);
                let mut f_lo = a.g2 - 1.0;
                while hi - lo > 1e-3 {
                    let mid = 0.5 * (lo + hi);
                    let fm = self.point(mid)?.g2 - 1.0;
                    if f_lo * fm <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                        f_lo = fm;
                    }
                }
                out.push(0.5 * (lo + hi));
            }
        }
        Ok(out)
    }
}
