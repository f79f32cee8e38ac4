//! Full-pipeline checks at unequal phases (φ₁ ≠ φ₂), where the quadratic
//! exponent coefficient is genuinely complex and the quadrature form picks
//! up the `{X₁, X₂}` cross term. The coupling phase δ is fixed by the second
//! canonicity condition:
//! `tan δ = (cosh r·cos φ₁ − sinh r·cos φ₂)/(sinh r·sin φ₂ − cosh r·sin φ₁)`.

use mpss_core::nonlinear::NonlinearSpec;
use mpss_core::observables::{pnd, uncertainties};
use mpss_core::opalg::{complete_square, quadrature_form, QuadTerm};
use mpss_core::params::TransformSpec;
use mpss_core::states::solve_eigenstate;
use mpss_core::wigner::{wigner, WignerOptions};
use num_complex::Complex64;

fn canonical_unequal(r: f64, phi1: f64, phi2: f64, gamma_abs: f64) -> TransformSpec {
    let (ch, sh) = (r.cosh(), r.sinh());
    let delta = (ch * phi1.cos() - sh * phi2.cos()).atan2(sh * phi2.sin() - ch * phi1.sin());
    TransformSpec::from_polar(r, phi1, phi2, gamma_abs, delta).unwrap()
}

#[test]
fn coupling_phase_solves_the_second_condition() {
    for (r, p1, p2, ga) in [
        (0.7, 0.9, -0.4, 0.15),
        (1.2, -1.3, 0.6, 0.08),
        (0.4, 2.0, 2.9, 0.3),
    ] {
        let s = canonical_unequal(r, p1, p2, ga);
        let rep = s.canonicity(1e-12);
        assert!(rep.ok, "residuals ({}, {})", rep.cond1_residual, rep.cond2_residual);
    }
}

#[test]
fn solver_handles_complex_quadratic_coefficient() {
    let t = canonical_unequal(0.7, 0.9, -0.4, 0.15);
    let f = NonlinearSpec::monomial(3).unwrap();
    let s = solve_eigenstate(&t, Complex64::new(1.5, 0.0), &f).unwrap();
    assert!(s.quad_coeff.im.abs() > 0.5, "ImA = {}", s.quad_coeff.im);
    assert!(s.quad_coeff.re < 0.0);
    // still pure phase for the nonlinearity
    assert!(s.phase_coeff.re.abs() < 1e-14);
    // Re(A) = -1/|mu - nu|^2 under canonicity
    let expect = -1.0 / (t.mu - t.nu).norm_sqr();
    assert!((s.quad_coeff.re - expect).abs() < 1e-13);
    let grid = s.grid(9.5, 513);
    assert!(s.eigen_residual(&grid).unwrap() < 1e-10);
    let (nrm, _) =
        mpss_core::numerics::integrate_re(|x| s.density(x), &grid, 1e-12).unwrap();
    assert!((nrm - 1.0).abs() < 1e-10);
}

#[test]
fn uncertainties_keep_their_operator_anchors() {
    let t = canonical_unequal(0.7, 0.9, -0.4, 0.15);
    for deg in [2usize, 3] {
        let f = NonlinearSpec::monomial(deg).unwrap();
        let s = solve_eigenstate(&t, Complex64::new(1.5, -0.8), &f).unwrap();
        let u = uncertainties(&s).unwrap();
        assert!((u.dx1 - (t.mu - t.nu).norm_sqr() / 4.0).abs() < 1e-12);
        assert!((u.dx2_linear - (t.mu + t.nu).norm_sqr() / 4.0).abs() < 1e-12);
        assert!(u.closure_gap().abs() < 1e-6, "gap {}", u.closure_gap());
        assert!(u.product >= 0.0625 - 1e-10);
    }
}

#[test]
fn photon_moments_are_consistent_across_routes() {
    let t = canonical_unequal(0.7, 0.9, -0.4, 0.15);
    let f = NonlinearSpec::monomial(2).unwrap();
    let s = solve_eigenstate(&t, Complex64::new(1.5, 0.0), &f).unwrap();
    let p = pnd(&s, 128).unwrap();
    assert!(p.tail_mass.abs() < 1e-8);
    let x1_sq = s.density_variance() + s.density_center().powi(2);
    let grid = s.grid(9.5, 513);
    let (x2_sq, _) = mpss_core::numerics::integrate_re(
        |x| 0.25 * s.eval_derivative(x).norm_sqr(),
        &grid,
        1e-12,
    )
    .unwrap();
    let n_quad = x1_sq + x2_sq - 0.5;
    assert!((p.n_mean - n_quad).abs() < 1e-6, "{} vs {n_quad}", p.n_mean);
}

#[test]
fn quadrature_form_still_completes_the_square() {
    let t = canonical_unequal(0.7, 0.9, -0.4, 0.15);
    let f = NonlinearSpec::monomial(2).unwrap();
    let q = quadrature_form(&t, &f).unwrap();
    // unequal phases generate the {X1, X2} cross term: 2 Im(mu* nu)
    let expect_sym1 = 2.0 * (t.mu.conj() * t.nu).im;
    let sym = q.sym_poly();
    assert!(sym.len() >= 2 && (sym[1] - expect_sym1).abs() < 1e-11 * expect_sym1.abs().max(1.0));
    let sq = complete_square(&q).unwrap();
    assert!((sq.x2_coeff - (t.mu - t.nu).norm()).abs() < 1e-12);
    // reconstruct every non-constant coefficient
    for (term, &v) in q.iter() {
        let rebuilt = match term {
            QuadTerm::X1Pow(0) => continue,
            QuadTerm::X1Pow(m) => {
                let mut acc = if *m == 2 { sq.residual_x1_sq } else { 0.0 };
                for (i, &a) in sq.inner_x1.iter().enumerate() {
                    for (j, &b) in sq.inner_x1.iter().enumerate() {
                        if i + j == *m as usize {
                            acc += a * b;
                        }
                    }
                }
                acc
            }
            QuadTerm::X2Sq => sq.x2_coeff * sq.x2_coeff,
            QuadTerm::SymX1X2(m) => {
                sq.x2_coeff * sq.inner_x1.get(*m as usize).copied().unwrap_or(0.0)
            }
        };
        assert!((rebuilt - v).abs() < 1e-11, "{term:?}: {rebuilt} vs {v}");
    }
}

#[test]
fn wigner_marginal_survives_the_rotated_state() {
    let t = canonical_unequal(0.7, 0.9, -0.4, 0.15);
    let f = NonlinearSpec::monomial(2).unwrap();
    let s = solve_eigenstate(&t, Complex64::new(1.5, 0.0), &f).unwrap();
    let g = wigner(&s, &WignerOptions::default()).unwrap();
    assert!((g.norm - 1.0).abs() < 1e-4);
    assert!(g.marginal_defect(&s) < 1e-6);
    assert!(g.max_abs() <= 2.0 / std::f64::consts::PI + 1e-9);
}

#[test]
fn sixth_power_nonlinearity_full_pipeline() {
    // the maximum supported degree: operator expansion reaches degree 12,
    // and the phase stiffness forces the overlap grids to refine hard
    let t = TransformSpec::from_polar(0.8, 0.0, 0.0, 0.1, std::f64::consts::FRAC_PI_2).unwrap();
    let f = NonlinearSpec::monomial(6).unwrap();
    let com = mpss_core::opalg::commutator_check(&t, &f).unwrap();
    assert!(com.is_empty());
    let h = mpss_core::opalg::expand_hamiltonian(&t, &f).unwrap();
    assert_eq!(h.degree(), 12);
    let s = solve_eigenstate(&t, Complex64::new(3.0, 0.0), &f).unwrap();
    assert!(s.eigen_residual(&s.grid(9.5, 513)).unwrap() < 1e-8);
    let u = uncertainties(&s).unwrap();
    assert!(u.closure_gap().abs() < 1e-6);
    assert!(u.product >= 0.0625 - 1e-10);
    let p = mpss_core::observables::pnd_adaptive(&s, 128).unwrap();
    assert!(p.tail_mass < 1e-6);
    assert!(p.n_mean > u.dx1); // photon number dominated by the nonlinear part
}

#[test]
fn sine_nonlinearity_full_pipeline() {
    let t = TransformSpec::from_polar(0.5, 0.0, 0.0, 0.1, std::f64::consts::FRAC_PI_2).unwrap();
    let f = NonlinearSpec::sine(1.0, 2.0).unwrap();
    let s = solve_eigenstate(&t, Complex64::new(2.0, 0.0), &f).unwrap();
    let u = uncertainties(&s).unwrap();
    assert!(u.closure_gap().abs() < 1e-6);
    assert!(u.product >= 0.0625 - 1e-10);
    let p = pnd(&s, 128).unwrap();
    assert!(p.tail_mass.abs() < 1e-8);
    assert!(p.n_mean > 0.0);
    let g = wigner(&s, &WignerOptions::default()).unwrap();
    assert!((g.norm - 1.0).abs() < 1e-4);
    assert!(g.marginal_defect(&s) < 1e-6);
}
