//! The real nonlinear function `F(X₁)` entering the transformation, together
//! with its exact antiderivative and derivative.

use thiserror::Error;

/// Highest monomial degree accepted for polynomial nonlinearities.
pub const MAX_POLY_DEGREE: usize = 6;

#[derive(Debug, Error)]
pub enum NonlinearError {
    #[error("polynomial degree {0} exceeds the supported maximum {MAX_POLY_DEGREE}")]
    DegreeTooHigh(usize),
    #[error("coefficients must be finite")]
    NotFinite,
    #[error("sine frequency must be nonzero")]
    ZeroFrequency,
}

/// A real-valued nonlinearity: either a polynomial `Σ cⱼ xʲ` (degree ≤ 6) or
/// `A·sin(kx)`. Real-valuedness keeps `F(X₁)` Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub enum NonlinearSpec {
    /// Monomial coefficients `c₀, c₁, …` (constant term first).
    Polynomial(Vec<f64>),
    Sine { amplitude: f64, frequency: f64 },
}

impl NonlinearSpec {
    /// Polynomial from monomial coefficients, trailing zeros trimmed.
    pub fn polynomial(coeffs: &[f64]) -> Result<Self, NonlinearError> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(NonlinearError::NotFinite);
        }
        let mut c: Vec<f64> = coeffs.to_vec();
        while c.len() > 1 && *c.last().unwrap() == 0.0 {
            c.pop();
        }
        if c.is_empty() {
            c.push(0.0);
        }
        if c.len() - 1 > MAX_POLY_DEGREE {
            return Err(NonlinearError::DegreeTooHigh(c.len() - 1));
        }
        Ok(NonlinearSpec::Polynomial(c))
    }

    /// The monomial `x^power`.
    pub fn monomial(power: usize) -> Result<Self, NonlinearError> {
        if power > MAX_POLY_DEGREE {
            return Err(NonlinearError::DegreeTooHigh(power));
        }
        let mut c = vec![0.0; power + 1];
        c[power] = 1.0;
        Ok(NonlinearSpec::Polynomial(c))
    }

    pub fn sine(amplitude: f64, frequency: f64) -> Result<Self, NonlinearError> {
        if !amplitude.is_finite() || !frequency.is_finite() {
            return Err(NonlinearError::NotFinite);
        }
        if frequency == 0.0 {
            return Err(NonlinearError::ZeroFrequency);
        }
        Ok(NonlinearSpec::Sine {
            amplitude,
            frequency,
        })
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(self, NonlinearSpec::Polynomial(_))
    }

    /// Monomial degree; `None` for the sine form.
    pub fn degree(&self) -> Option<usize> {
        match self {
            NonlinearSpec::Polynomial(c) => Some(c.len() - 1),
            NonlinearSpec::Sine { .. } => None,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            NonlinearSpec::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck),
            NonlinearSpec::Sine {
                amplitude,
                frequency,
            } => amplitude * (frequency * x).sin(),
        }
    }

    /// Exact antiderivative `∫F`; for polynomials the constant is fixed by
    /// `∫F(0) = 0`. Any constant shift only changes a global phase of the
    /// eigenstates.
    pub fn antiderivative(&self, x: f64) -> f64 {
        match self {
            NonlinearSpec::Polynomial(c) => {
                let mut acc = 0.0;
                for (j, &cj) in c.iter().enumerate().rev() {
                    acc = acc * x + cj / (j as f64 + 1.0);
                }
                acc * x
            }
            NonlinearSpec::Sine {
                amplitude,
                frequency,
            } => -amplitude / frequency * (frequency * x).cos(),
        }
    }

    /// Exact derivative `F'`.
    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            NonlinearSpec::Polynomial(c) => {
                let mut acc = 0.0;
                for (j, &cj) in c.iter().enumerate().skip(1).rev() {
                    acc = acc * x + j as f64 * cj;
                }
                acc
            }
            NonlinearSpec::Sine {
                amplitude,
                frequency,
            } => amplitude * frequency * (frequency * x).cos(),
        }
    }
}

impl std::fmt::Display for NonlinearSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NonlinearSpec::Polynomial(c) => {
                let list = c
                    .iter()
                    .map(|v| format!("{v}"))
                    .collect::<Vec<_>>()
                    .join(",");
                write!(f, "poly:{list}")
            }
            NonlinearSpec::Sine {
                amplitude,
                frequency,
            } => write!(f, "sine:{amplitude},{frequency}"),
        }
    }
}
