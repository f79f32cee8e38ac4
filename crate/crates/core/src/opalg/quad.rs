//! Hermitian quadrature-basis form of normal-ordered polynomials.
//!
//! The target basis is `{X₁^m, X₂², {X₁^m, X₂}}` with real coefficients
//! (`{·,·}` the anticommutator). A normal-ordered polynomial is converted by
//! substituting `a = X₁ + iX₂`, `a† = X₁ − iX₂`, ordering every monomial as
//! `X₁^m X₂^n` with the swap `X₂ X₁ = X₁ X₂ − i/2`, and projecting onto the
//! Hermitian basis. Operators quadratic in `X₂` without `X₁` factors reduce;
//! anything else is an obstruction.

use super::normal::{NormalPoly, OpAlgError};
use num_complex::Complex64;
use std::collections::BTreeMap;

const IM_TOL: f64 = 1e-12;

/// Basis element of the Hermitian quadrature form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum QuadTerm {
    /// `X₁^m` (`m = 0` is the ordering constant).
    X1Pow(u32),
    /// `X₂²`.
    X2Sq,
    /// `{X₁^m, X₂}` (`m = 0` gives `2X₂`).
    SymX1X2(u32),
}

/// Real-coefficient polynomial over [`QuadTerm`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QuadPoly {
    terms: BTreeMap<QuadTerm, f64>,
}

impl QuadPoly {
    pub fn coeff(&self, t: QuadTerm) -> f64 {
        self.terms.get(&t).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&QuadTerm, &f64)> {
        self.terms.iter()
    }

    fn add(&mut self, t: QuadTerm, v: f64) {
        if v == 0.0 {
            return;
        }
        let e = self.terms.entry(t).or_insert(0.0);
        *e += v;
        if *e == 0.0 {
            self.terms.remove(&t);
        }
    }

    /// Coefficients of the `X₁`-only part as a dense monomial list.
    pub fn x1_poly(&self) -> Vec<f64> {
        let deg = self
            .terms
            .keys()
            .filter_map(|t| match t {
                QuadTerm::X1Pow(m) => Some(*m),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        let mut out = vec![0.0; deg as usize + 1];
        for (t, &v) in self.terms.iter() {
            if let QuadTerm::X1Pow(m) = t {
                out[*m as usize] = v;
            }
        }
        out
    }

    /// Coefficients of the `{X₁^m, X₂}` part as a dense list indexed by `m`.
    pub fn sym_poly(&self) -> Vec<f64> {
        let deg = self
            .terms
            .keys()
            .filter_map(|t| match t {
                QuadTerm::SymX1X2(m) => Some(*m),
                _ => None,
            })
            .max();
        match deg {
            None => vec![],
            Some(d) => {
                let mut out = vec![0.0; d as usize + 1];
                for (t, &v) in self.terms.iter() {
                    if let QuadTerm::SymX1X2(m) = t {
                        out[*m as usize] = v;
                    }
                }
                out
            }
        }
    }

    /// Converts a normal-ordered polynomial. Fails when a monomial carries
    /// `X₂` to a power above two, mixes `X₁` with `X₂²`, or when a basis
    /// coefficient comes out non-real (a Hermiticity obstruction).
    pub fn from_normal(p: &NormalPoly) -> Result<Self, OpAlgError> {
        // Ordered complex polynomial in (X1, X2): key (m, n) = X1^m X2^n.
        let mut ordered: BTreeMap<(u32, u32), Complex64> = BTreeMap::new();
        let half_i = Complex64::new(0.0, 0.5);
        for (&(k, l), &c) in p.iter() {
            // (X1 - i X2)^k (X1 + i X2)^l, multiplied out left to right.
            let mut acc: BTreeMap<(u32, u32), Complex64> = BTreeMap::new();
            acc.insert((0, 0), c);
            for step in 0..(k + l) {
                let x2_coef = if step < k { -2.0 * half_i } else { 2.0 * half_i };
                // times (X1 + s X2) where s = ∓i
                let mut next: BTreeMap<(u32, u32), Complex64> = BTreeMap::new();
                for (&(m, n), &v) in acc.iter() {
                    // X1^m X2^n · X1 = X1^{m+1} X2^n + n·(−i/2)·X1^m X2^{n−1}
                    // from X2^n X1 = X1 X2^n − (i/2) n X2^{n−1}.
                    add_c(&mut next, (m + 1, n), v);
                    if n > 0 {
                        add_c(
                            &mut next,
                            (m, n - 1),
                            v * Complex64::new(0.0, -0.5) * n as f64,
                        );
                    }
                    // X1^m X2^n · X2 = X1^m X2^{n+1}
                    add_c(&mut next, (m, n + 1), v * x2_coef);
                }
                acc = next;
            }
            for ((m, n), v) in acc {
                add_c(&mut ordered, (m, n), v);
            }
        }

        // Project onto the Hermitian basis.
        let mut complex_out: BTreeMap<QuadTerm, Complex64> = BTreeMap::new();
        let mut push = |t: QuadTerm, v: Complex64| {
            let e = complex_out.entry(t).or_insert(Complex64::new(0.0, 0.0));
            *e += v;
        };
        for (&(m, n), &v) in ordered.iter() {
            if v.norm() <= IM_TOL {
                continue;
            }
            match n {
                0 => push(QuadTerm::X1Pow(m), v),
                1 => {
                    // X1^m X2 = (1/2){X1^m, X2} + (i m / 4) X1^{m-1}
                    push(QuadTerm::SymX1X2(m), v * 0.5);
                    if m > 0 {
                        push(
                            QuadTerm::X1Pow(m - 1),
                            v * Complex64::new(0.0, 0.25) * m as f64,
                        );
                    }
                }
                2 if m == 0 => push(QuadTerm::X2Sq, v),
                _ => {
                    return Err(OpAlgError::NotReducible(format!(
                        "monomial X1^{m} X2^{n} with coefficient {v} is outside the basis"
                    )));
                }
            }
        }

        let mut out = QuadPoly::default();
        for (t, v) in complex_out {
            if v.im.abs() > IM_TOL {
                return Err(OpAlgError::NotReducible(format!(
                    "non-real coefficient {v} on {t:?}; operator is not Hermitian in this basis"
                )));
            }
            if v.re.abs() > IM_TOL {
                out.add(t, v.re);
            }
        }
        Ok(out)
    }

    pub fn to_rows(&self) -> Vec<(String, f64)> {
        self.terms
            .iter()
            .map(|(t, &v)| {
                let name = match t {
                    QuadTerm::X1Pow(0) => "1".to_string(),
                    QuadTerm::X1Pow(m) => format!("X1^{m}"),
                    QuadTerm::X2Sq => "X2^2".to_string(),
                    QuadTerm::SymX1X2(m) => format!("{{X1^{m},X2}}"),
                };
                (name, v)
            })
            .collect()
    }
}

fn add_c(map: &mut BTreeMap<(u32, u32), Complex64>, key: (u32, u32), v: Complex64) {
    let e = map.entry(key).or_insert(Complex64::new(0.0, 0.0));
    *e += v;
    if *e == Complex64::new(0.0, 0.0) {
        map.remove(&key);
    }
}

/// `H = residual_x1_sq·X₁² + (Σ l_m X₁^m + x2_coeff·X₂)² + constant`: the
/// completed-square template every canonical quadrature form admits.
#[derive(Debug, Clone, PartialEq)]
pub struct SquaredForm {
    pub residual_x1_sq: f64,
    /// Monomial coefficients of the inner `X₁`-polynomial `Σ l_m X₁^m`.
    pub inner_x1: Vec<f64>,
    pub x2_coeff: f64,
    pub constant: f64,
}

/// Completes the square in `X₂`. The `X₂²` coefficient must be positive; the
/// residual after removing the square must be `const + c·X₁²`, otherwise the
/// obstruction is reported.
pub fn complete_square(q: &QuadPoly) -> Result<SquaredForm, OpAlgError> {
    let lam = q.coeff(QuadTerm::X2Sq);
    if lam <= 0.0 {
        return Err(OpAlgError::NotReducible(format!(
            "X2^2 coefficient {lam} is not positive"
        )));
    }
    let c = lam.sqrt();
    let sym = q.sym_poly();
    let inner: Vec<f64> = sym.iter().map(|s| s / c).collect();
    // (L + cX2)^2 = L^2 + c^2 X2^2 + c {L, X2}; subtract L^2 from the X1 part.
    let x1 = q.x1_poly();
    let mut resid = vec![0.0; x1.len().max(2 * inner.len().max(1)).max(3)];
    resid[..x1.len()].copy_from_slice(&x1);
    for (i, &a) in inner.iter().enumerate() {
        for (j, &b) in inner.iter().enumerate() {
            resid[i + j] -= a * b;
        }
    }
    for (m, &v) in resid.iter().enumerate() {
        if m != 0 && m != 2 && v.abs() > 1e-10 {
            return Err(OpAlgError::NotReducible(format!(
                "residual X1^{m} coefficient {v:.3e} after square completion"
            )));
        }
    }
    Ok(SquaredForm {
        residual_x1_sq: resid[2],
        inner_x1: inner,
        x2_coeff: c,
        constant: resid[0],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::normal::DEFAULT_MAX_DEGREE;

    #[test]
    fn number_operator_quadrature_form() {
        // ad a = X1^2 + X2^2 - 1/2
        let n = NormalPoly::monomial(1, 1, Complex64::new(1.0, 0.0));
        let q = QuadPoly::from_normal(&n).unwrap();
        assert!((q.coeff(QuadTerm::X1Pow(2)) - 1.0).abs() < 1e-14);
        assert!((q.coeff(QuadTerm::X2Sq) - 1.0).abs() < 1e-14);
        assert!((q.coeff(QuadTerm::X1Pow(0)) + 0.5).abs() < 1e-14);
        assert_eq!(q.sym_poly().len(), 0);
    }

    #[test]
    fn anticommutator_term_from_two_photon_parts() {
        // ad^2 + a^2 = 2 X1^2 - 2 X2^2 (no sym term);
        // i(ad^2 - a^2) = ... carries {X1, X2}.
        let two = NormalPoly::monomial(2, 0, Complex64::new(0.0, 1.0))
            .add(&NormalPoly::monomial(0, 2, Complex64::new(0.0, -1.0)));
        let q = QuadPoly::from_normal(&two).unwrap();
        assert!((q.coeff(QuadTerm::SymX1X2(1)) - 2.0).abs() < 1e-14);
        assert!(q.coeff(QuadTerm::X1Pow(2)).abs() < 1e-14);
        assert!(q.coeff(QuadTerm::X2Sq).abs() < 1e-14);
    }

    #[test]
    fn cubic_x2_is_an_obstruction() {
        let x2 = NormalPoly::x2();
        let cube = x2.pow(3, DEFAULT_MAX_DEGREE).unwrap();
        assert!(matches!(
            QuadPoly::from_normal(&cube),
            Err(OpAlgError::NotReducible(_))
        ));
    }

    #[test]
    fn fock_matrix_round_trip() {
        // X1^3 + {X1, X2} + 2 X2^2 + 1 reconstructed from its normal form.
        let x1 = NormalPoly::x1();
        let x2 = NormalPoly::x2();
        let sym = x1
            .mul(&x2, DEFAULT_MAX_DEGREE)
            .unwrap()
            .add(&x2.mul(&x1, DEFAULT_MAX_DEGREE).unwrap());
        let p = x1
            .pow(3, DEFAULT_MAX_DEGREE)
            .unwrap()
            .add(&sym)
            .add(&x2.pow(2, DEFAULT_MAX_DEGREE).unwrap().scale(Complex64::new(2.0, 0.0)))
            .add(&NormalPoly::one());
        let q = QuadPoly::from_normal(&p).unwrap();
        assert!((q.coeff(QuadTerm::X1Pow(3)) - 1.0).abs() < 1e-13);
        assert!((q.coeff(QuadTerm::SymX1X2(1)) - 1.0).abs() < 1e-13);
        assert!((q.coeff(QuadTerm::X2Sq) - 2.0).abs() < 1e-13);
        assert!((q.coeff(QuadTerm::X1Pow(0)) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn square_completion_of_plain_oscillator() {
        // X1^2 + X2^2: completes with empty inner polynomial.
        let p = NormalPoly::x1()
            .pow(2, DEFAULT_MAX_DEGREE)
            .unwrap()
            .add(&NormalPoly::x2().pow(2, DEFAULT_MAX_DEGREE).unwrap());
        let q = QuadPoly::from_normal(&p).unwrap();
        let sq = complete_square(&q).unwrap();
        assert!((sq.x2_coeff - 1.0).abs() < 1e-14);
        assert!((sq.residual_x1_sq - 1.0).abs() < 1e-14);
        assert!(sq.inner_x1.iter().all(|v| v.abs() < 1e-14));
    }
}
