//! Transformation coefficients (μ, ν, γ), the canonicity conditions and the
//! derived wavefunction constants.
//!
//! The raw complex coefficients are the source of truth; the polar view
//! `μ = cosh r·e^{iφ₁}`, `ν = sinh r·e^{iφ₂}`, `γ = |γ|e^{iδ}` is derived
//! with the convention `r ≥ 0`.

use num_complex::Complex64;
use thiserror::Error;

/// Default tolerance on both canonicity residuals. Inputs are closed-form
/// values, so only rounding error is expected.
pub const CANONICITY_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum ParamsError {
    /// The coefficient choice breaks `[b, b†] = 1`.
    #[error("not canonical: | |mu|^2-|nu|^2-1 | = {cond1:.3e}, |Re(mu*conj(gamma)-conj(nu)*gamma)| = {cond2:.3e}")]
    NotCanonical { cond1: f64, cond2: f64 },
    /// Parameter region where the Gaussian density profile does not decay.
    #[error("non-normalizable: width parameter sigma = {sigma:.6e} is not positive")]
    NonNormalizable { sigma: f64 },
    #[error("parse error: {0}")]
    Parse(String),
}

/// Canonicity residuals of a coefficient triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonReport {
    /// `| |μ|² − |ν|² − 1 |`
    pub cond1_residual: f64,
    /// `| Re(μγ* − ν*γ) |`
    pub cond2_residual: f64,
    pub ok: bool,
}

/// Evaluates both canonicity conditions for raw coefficients.
pub fn check_canonical(mu: Complex64, nu: Complex64, gamma: Complex64, tol: f64) -> CanonReport {
    let cond1 = (mu.norm_sqr() - nu.norm_sqr() - 1.0).abs();
    let cond2 = (mu * gamma.conj() - nu.conj() * gamma).re.abs();
    CanonReport {
        cond1_residual: cond1,
        cond2_residual: cond2,
        ok: cond1 < tol && cond2 < tol,
    }
}

/// Coefficients of the transformation `b = μa + νa† + γF(X₁)`, carrying both
/// the raw and the polar view.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformSpec {
    pub mu: Complex64,
    pub nu: Complex64,
    pub gamma: Complex64,
    /// Squeezing parameter, `r ≥ 0`.
    pub r: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub gamma_abs: f64,
    pub delta: f64,
    /// Whether both canonicity residuals were below [`CANONICITY_TOL`]
    /// at construction.
    pub canonical: bool,
}

impl TransformSpec {
    /// Builds a spec from the polar parametrization. The first canonicity
    /// condition holds by construction; the second is evaluated and the
    /// construction fails if it is violated.
    pub fn from_polar(
        r: f64,
        phi1: f64,
        phi2: f64,
        gamma_abs: f64,
        delta: f64,
    ) -> Result<Self, ParamsError> {
        let spec = Self::from_polar_unchecked(r, phi1, phi2, gamma_abs, delta);
        if !spec.canonical {
            let rep = spec.canonicity(CANONICITY_TOL);
            return Err(ParamsError::NotCanonical {
                cond1: rep.cond1_residual,
                cond2: rep.cond2_residual,
            });
        }
        Ok(spec)
    }

    /// Same as [`from_polar`](Self::from_polar) but keeps non-canonical
    /// coefficient choices, with the status recorded in `canonical`.
    pub fn from_polar_unchecked(r: f64, phi1: f64, phi2: f64, gamma_abs: f64, delta: f64) -> Self {
        let mu = Complex64::from_polar(r.cosh(), phi1);
        let nu = Complex64::from_polar(r.sinh(), phi2);
        let gamma = Complex64::from_polar(gamma_abs, delta);
        let canonical = check_canonical(mu, nu, gamma, CANONICITY_TOL).ok;
        TransformSpec {
            mu,
            nu,
            gamma,
            r,
            phi1,
            phi2,
            gamma_abs,
            delta,
            canonical,
        }
    }

    /// Builds a spec from raw coefficients, deriving the polar view.
    /// Fails if either canonicity condition is violated.
    pub fn from_raw(mu: Complex64, nu: Complex64, gamma: Complex64) -> Result<Self, ParamsError> {
        let spec = Self::from_raw_unchecked(mu, nu, gamma);
        if !spec.canonical {
            let rep = spec.canonicity(CANONICITY_TOL);
            return Err(ParamsError::NotCanonical {
                cond1: rep.cond1_residual,
                cond2: rep.cond2_residual,
            });
        }
        Ok(spec)
    }

    /// Raw-coefficient constructor that records rather than enforces
    /// canonicity. The polar view uses `r = arcosh |μ|` (clamped to `|μ| ≥ 1`)
    /// and `r ≥ 0`.
    pub fn from_raw_unchecked(mu: Complex64, nu: Complex64, gamma: Complex64) -> Self {
        let r = mu.norm().max(1.0).acosh();
        let phi1 = if mu.norm() > 0.0 { mu.arg() } else { 0.0 };
        let phi2 = if nu.norm() > 0.0 { nu.arg() } else { 0.0 };
        let delta = if gamma.norm() > 0.0 { gamma.arg() } else { 0.0 };
        let canonical = check_canonical(mu, nu, gamma, CANONICITY_TOL).ok;
        TransformSpec {
            mu,
            nu,
            gamma,
            r,
            phi1,
            phi2,
            gamma_abs: gamma.norm(),
            delta,
            canonical,
        }
    }

    pub fn canonicity(&self, tol: f64) -> CanonReport {
        check_canonical(self.mu, self.nu, self.gamma, tol)
    }

    /// `Im(μγ* − ν*γ)` — the coefficient of `F(X₁)` in the nonlinear part of
    /// the second quadrature.
    pub fn x2_nonlinear_coeff(&self) -> f64 {
        (self.mu * self.gamma.conj() - self.nu.conj() * self.gamma).im
    }

    /// Serializes to a plain-text key/value document (both views).
    pub fn to_kv_string(&self) -> String {
        let mut s = String::new();
        for (k, v) in [
            ("r", self.r),
            ("phi1", self.phi1),
            ("phi2", self.phi2),
            ("gamma_abs", self.gamma_abs),
            ("delta", self.delta),
            ("mu_re", self.mu.re),
            ("mu_im", self.mu.im),
            ("nu_re", self.nu.re),
            ("nu_im", self.nu.im),
            ("gamma_re", self.gamma.re),
            ("gamma_im", self.gamma.im),
        ] {
            s.push_str(&format!("{k} = {v:.17e}\n"));
        }
        s.push_str(&format!("canonical = {}\n", self.canonical));
        s
    }

    /// Parses a key/value document holding either the polar keys
    /// (`r`, `phi1`, `phi2`, `gamma_abs`, `delta`) or the raw keys
    /// (`mu_re`, `mu_im`, `nu_re`, `nu_im`, `gamma_re`, `gamma_im`).
    /// Polar keys win when both sets are present.
    pub fn from_kv_str(text: &str) -> Result<Self, ParamsError> {
        let mut kv = std::collections::BTreeMap::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ParamsError::Parse(format!("expected `key = value`, got {line:?}")))?;
            let key = k.trim().to_string();
            if key == "canonical" {
                continue;
            }
            let val: f64 = v
                .trim()
                .parse()
                .map_err(|e| ParamsError::Parse(format!("bad value for {key}: {e}")))?;
            kv.insert(key, val);
        }
        let get = |k: &str| kv.get(k).copied();
        if let (Some(r), Some(phi1), Some(phi2), Some(ga), Some(delta)) = (
            get("r"),
            get("phi1"),
            get("phi2"),
            get("gamma_abs"),
            get("delta"),
        ) {
            return Ok(Self::from_polar_unchecked(r, phi1, phi2, ga, delta));
        }
        if let (Some(mr), Some(mi), Some(nr), Some(ni), Some(gr), Some(gi)) = (
            get("mu_re"),
            get("mu_im"),
            get("nu_re"),
            get("nu_im"),
            get("gamma_re"),
            get("gamma_im"),
        ) {
            return Ok(Self::from_raw_unchecked(
                Complex64::new(mr, mi),
                Complex64::new(nr, ni),
                Complex64::new(gr, gi),
            ));
        }
        Err(ParamsError::Parse(
            "need either keys {r, phi1, phi2, gamma_abs, delta} or {mu_re, mu_im, nu_re, nu_im, gamma_re, gamma_im}"
                .into(),
        ))
    }
}

/// Constants of the Gaussian density profile for a given transformation and
/// eigenvalue.
///
/// `c_plus`/`c_minus` follow
/// `C± = cosh r·sin(φ₁−δ) ± sinh r·sin(φ₂−δ)`, sign-normalized so that the
/// pair is positive (the pair is only defined up to a joint sign, and the
/// width `σ = C₋/C₊` is invariant under it). `x0 = (|β|/C₊)·sin(ξ−δ)` with
/// `ξ = arg β` is the center in this sign convention; the eigenstate solver's
/// own density center is the authoritative value and can differ from `x0` in
/// sign depending on the branch of `δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    pub c_plus: f64,
    pub c_minus: f64,
    /// Gaussian width parameter `σ = C₋/C₊ > 0`.
    pub sigma: f64,
    pub x0: f64,
}

/// Computes `C±`, `σ` and the density-center estimate for eigenvalue `beta`.
pub fn derived_constants(
    spec: &TransformSpec,
    beta: Complex64,
) -> Result<DerivedConstants, ParamsError> {
    let (ch, sh) = (spec.r.cosh(), spec.r.sinh());
    let mut c_plus = ch * (spec.phi1 - spec.delta).sin() + sh * (spec.phi2 - spec.delta).sin();
    let mut c_minus = ch * (spec.phi1 - spec.delta).sin() - sh * (spec.phi2 - spec.delta).sin();
    let sigma = c_minus / c_plus;
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(ParamsError::NonNormalizable { sigma });
    }
    if c_plus < 0.0 {
        c_plus = -c_plus;
        c_minus = -c_minus;
    }
    let xi = if beta.norm() > 0.0 { beta.arg() } else { 0.0 };
    let x0 = beta.norm() / c_plus * (xi - spec.delta).sin();
    Ok(DerivedConstants {
        c_plus,
        c_minus,
        sigma,
        x0,
    })
}
