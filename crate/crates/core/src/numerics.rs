//! Number-state wavefunctions and quadrature over Gaussian-decay integrands.
//!
//! Everything here is pinned to the convention `[X₁, X₂] = i/2`: the number
//! states are `h_n(x) = (2/π)^{1/4} (2ⁿ n!)^{−1/2} H_n(√2 x) e^{−x²}`, so the
//! vacuum density has variance 1/4.

use num_complex::Complex64;
use thiserror::Error;

/// Largest Fock index the ladder evaluation supports.
pub const HERMITE_MAX_N: usize = 4096;

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("integral did not converge: last change {change:.3e} at {points} points")]
    NoConvergence { change: f64, points: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("Fock index {0} exceeds the supported maximum {HERMITE_MAX_N}")]
    IndexTooLarge(usize),
}

/// Uniform evaluation grid with Gaussian-tail placement left to the caller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub center: f64,
    pub half_width: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn new(center: f64, half_width: f64, points: usize) -> Result<Self, NumericsError> {
        if !(half_width > 0.0) {
            return Err(NumericsError::InvalidGrid(format!(
                "half_width = {half_width}"
            )));
        }
        if points < 16 {
            return Err(NumericsError::InvalidGrid(format!(
                "points = {points} < 16"
            )));
        }
        Ok(GridSpec {
            center,
            half_width,
            points,
        })
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width / (self.points as f64 - 1.0)
    }

    /// Same interval, twice the panel count.
    pub fn doubled(&self) -> GridSpec {
        GridSpec {
            center: self.center,
            half_width: self.half_width,
            points: 2 * (self.points - 1) + 1,
        }
    }
}

/// Normalized Hermite-function ladder: fills `out[n] = h_n(x)` for
/// `n ≤ out.len() − 1` with the stable three-term recurrence on the
/// normalized functions (no raw factorials). Underflow of the ground state
/// at very large |x| propagates zeros, which is the correct limit.
pub fn hermite_ladder(x: f64, out: &mut [f64]) -> Result<(), NumericsError> {
    if out.is_empty() {
        return Ok(());
    }
    if out.len() - 1 > HERMITE_MAX_N {
        return Err(NumericsError::IndexTooLarge(out.len() - 1));
    }
    let u = std::f64::consts::SQRT_2 * x;
    let scale = 2f64.powf(0.25); // h_n(x) = 2^{1/4} ψ_n(√2 x)
    let psi0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * u * u).exp();
    out[0] = scale * psi0;
    if out.len() == 1 {
        return Ok(());
    }
    let mut pm1 = psi0;
    let mut p = std::f64::consts::SQRT_2 * u * psi0;
    out[1] = scale * p;
    for n in 2..out.len() {
        let nf = n as f64;
        let next = (2.0 / nf).sqrt() * u * p - ((nf - 1.0) / nf).sqrt() * pm1;
        pm1 = p;
        p = next;
        out[n] = scale * p;
    }
    Ok(())
}

/// Single number-state wavefunction value `h_n(x)`.
pub fn hermite_psi(n: usize, x: f64) -> Result<f64, NumericsError> {
    let mut buf = vec![0.0; n + 1];
    hermite_ladder(x, &mut buf)?;
    Ok(buf[n])
}

/// Orthonormal number-state basis marker for the locked convention.
#[derive(Debug, Clone, Copy)]
pub struct HermiteBasis {
    pub max_n: usize,
}

impl HermiteBasis {
    pub fn new(max_n: usize) -> Result<Self, NumericsError> {
        if max_n > HERMITE_MAX_N {
            return Err(NumericsError::IndexTooLarge(max_n));
        }
        Ok(HermiteBasis { max_n })
    }

    pub fn value(&self, n: usize, x: f64) -> Result<f64, NumericsError> {
        if n > self.max_n {
            return Err(NumericsError::IndexTooLarge(n));
        }
        hermite_psi(n, x)
    }
}

/// Trapezoid sum of a complex integrand on a uniform grid. Spectrally
/// accurate for smooth integrands that decay below rounding at the ends;
/// summation order is fixed for determinism.
pub fn trapezoid<F: Fn(f64) -> Complex64>(f: &F, grid: &GridSpec) -> Complex64 {
    let h = grid.step();
    let a = grid.center - grid.half_width;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..grid.points {
        let w = if i == 0 || i == grid.points - 1 {
            0.5
        } else {
            1.0
        };
        acc += f(a + i as f64 * h) * w;
    }
    acc * h
}

/// Default number of refinement doublings for [`integrate`].
pub const MAX_DOUBLINGS: usize = 8;

/// Refined quadrature: trapezoid sums with grid doubling until the change is
/// below `tol·max(1, |I|)`. Returns the converged value and the last change
/// as the error estimate.
pub fn integrate<F: Fn(f64) -> Complex64>(
    f: F,
    grid: &GridSpec,
    tol: f64,
) -> Result<(Complex64, f64), NumericsError> {
    let mut g = *grid;
    let mut prev = trapezoid(&f, &g);
    for _ in 0..MAX_DOUBLINGS {
        g = g.doubled();
        let cur = trapezoid(&f, &g);
        let change = (cur - prev).norm();
        if change <= tol * cur.norm().max(1.0) {
            return Ok((cur, change));
        }
        prev = cur;
    }
    Err(NumericsError::NoConvergence {
        change: f64::NAN,
        points: g.points,
    })
}

/// Real-integrand convenience wrapper around [`integrate`].
pub fn integrate_re<F: Fn(f64) -> f64>(
    f: F,
    grid: &GridSpec,
    tol: f64,
) -> Result<(f64, f64), NumericsError> {
    let (v, e) = integrate(|x| Complex64::new(f(x), 0.0), grid, tol)?;
    Ok((v.re, e))
}
