//! Independent oracle for the photon statistics pipeline: build the
//! transformed mode as a dense truncated Fock matrix, extract the eigenstate
//! as the null vector of `b − β`, and compare its probabilities against the
//! position-representation route. The two constructions share no code.

use mpss_core::nonlinear::NonlinearSpec;
use mpss_core::observables::pnd;
use mpss_core::params::TransformSpec;
use mpss_core::states::solve_eigenstate;
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dense Fock matrices for `a`, then `b = μa + νa† + γ X₁^deg`.
fn b_matrix(t: &TransformSpec, deg: usize, dim: usize) -> Vec<Complex64> {
    let mut a = vec![c(0.0, 0.0); dim * dim];
    for n in 1..dim {
        a[(n - 1) * dim + n] = c((n as f64).sqrt(), 0.0);
    }
    let mut x1 = vec![c(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            x1[i * dim + j] = 0.5 * (a[i * dim + j] + a[j * dim + i].conj());
        }
    }
    let mut f = identity(dim);
    for _ in 0..deg {
        f = mat_mul(&f, &x1, dim);
    }
    let mut b = vec![c(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            b[i * dim + j] =
                t.mu * a[i * dim + j] + t.nu * a[j * dim + i].conj() + t.gamma * f[i * dim + j];
        }
    }
    b
}

fn identity(dim: usize) -> Vec<Complex64> {
    let mut m = vec![c(0.0, 0.0); dim * dim];
    for i in 0..dim {
        m[i * dim + i] = c(1.0, 0.0);
    }
    m
}

fn mat_mul(a: &[Complex64], b: &[Complex64], dim: usize) -> Vec<Complex64> {
    let mut out = vec![c(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            let v = a[i * dim + k];
            if v == c(0.0, 0.0) {
                continue;
            }
            for j in 0..dim {
                out[i * dim + j] += v * b[k * dim + j];
            }
        }
    }
    out
}

/// Solve `M x = rhs` in place by Gaussian elimination with partial pivoting.
fn solve_dense(m: &mut [Complex64], rhs: &mut [Complex64], dim: usize) {
    for col in 0..dim {
        let mut piv = col;
        let mut best = m[col * dim + col].norm();
        for row in (col + 1)..dim {
            let v = m[row * dim + col].norm();
            if v > best {
                best = v;
                piv = row;
            }
        }
        assert!(best > 0.0, "singular system");
        if piv != col {
            for j in 0..dim {
                m.swap(col * dim + j, piv * dim + j);
            }
            rhs.swap(col, piv);
        }
        let d = m[col * dim + col];
        for row in (col + 1)..dim {
            let factor = m[row * dim + col] / d;
            if factor == c(0.0, 0.0) {
                continue;
            }
            for j in col..dim {
                let v = m[col * dim + j];
                m[row * dim + j] -= factor * v;
            }
            let r = rhs[col];
            rhs[row] -= factor * r;
        }
    }
    for col in (0..dim).rev() {
        let mut v = rhs[col];
        for j in (col + 1)..dim {
            v -= m[col * dim + j] * rhs[j];
        }
        rhs[col] = v / m[col * dim + col];
    }
}

/// Null vector of `b − β` by inverse iteration on `(b−β)†(b−β) + εI`.
fn fock_eigenstate(t: &TransformSpec, deg: usize, beta: Complex64, dim: usize) -> Vec<Complex64> {
    let b = b_matrix(t, deg, dim);
    let mut m = vec![c(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            m[i * dim + j] = b[i * dim + j] - if i == j { beta } else { c(0.0, 0.0) };
        }
    }
    // H = M† M + eps I
    let mut h = vec![c(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = c(0.0, 0.0);
            for k in 0..dim {
                acc += m[k * dim + i].conj() * m[k * dim + j];
            }
            h[i * dim + j] = acc + if i == j { c(1e-14, 0.0) } else { c(0.0, 0.0) };
        }
    }
    let mut psi: Vec<Complex64> = (0..dim)
        .map(|n| c((-((n as f64) - 3.0).powi(2) / 8.0).exp(), 0.0))
        .collect();
    for _ in 0..4 {
        let mut sys = h.clone();
        solve_dense(&mut sys, &mut psi, dim);
        let norm: f64 = psi.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        for v in psi.iter_mut() {
            *v /= norm;
        }
    }
    psi
}

#[test]
fn fock_basis_reproduces_the_distribution() {
    let dim = 160;
    for (deg, ga) in [(2usize, 0.1), (3, 0.1), (2, 0.0)] {
        let t = TransformSpec::from_polar(0.8, 0.0, 0.0, ga, FRAC_PI_2).unwrap();
        let psi = fock_eigenstate(&t, deg, c(3.0, 0.0), dim);
        // residual of the eigen relation in the truncated basis
        let b = b_matrix(&t, deg, dim);
        let mut resid = 0.0f64;
        for i in 0..dim - 20 {
            let mut acc = -c(3.0, 0.0) * psi[i];
            for j in 0..dim {
                acc += b[i * dim + j] * psi[j];
            }
            resid += acc.norm_sqr();
        }
        assert!(resid.sqrt() < 1e-9, "deg {deg}: Fock residual {}", resid.sqrt());

        let f = NonlinearSpec::monomial(deg).unwrap();
        let state = solve_eigenstate(&t, c(3.0, 0.0), &f).unwrap();
        let p = pnd(&state, 96).unwrap();
        let mut max_diff = 0.0f64;
        for n in 0..=96 {
            max_diff = max_diff.max((p.probabilities[n] - psi[n].norm_sqr()).abs());
        }
        assert!(
            max_diff < 1e-9,
            "deg {deg} gamma {ga}: max |P(n)| difference {max_diff:.2e}"
        );
    }
}

#[test]
fn fock_basis_reproduces_g2() {
    let dim = 160;
    let t = TransformSpec::from_polar(0.5, 0.0, 0.0, 0.1, FRAC_PI_2).unwrap();
    let psi = fock_eigenstate(&t, 2, c(3.0, 0.0), dim);
    let pn: Vec<f64> = psi.iter().map(|v| v.norm_sqr()).collect();
    let nbar: f64 = pn.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
    let nsq: f64 = pn
        .iter()
        .enumerate()
        .map(|(n, p)| (n as f64) * (n as f64) * p)
        .sum();
    let g2_fock = 1.0 + ((nsq - nbar * nbar) - nbar) / (nbar * nbar);

    let f = NonlinearSpec::monomial(2).unwrap();
    let state = solve_eigenstate(&t, c(3.0, 0.0), &f).unwrap();
    let p = pnd(&state, 128).unwrap();
    assert!(
        (p.g2 - g2_fock).abs() < 1e-8,
        "position route {} vs Fock route {}",
        p.g2,
        g2_fock
    );
}
