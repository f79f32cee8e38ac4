//! `mpss` — multiphoton squeezed state toolkit.
//!
//! Subcommands map onto the engine: `canon-check`, `expand-h`, `state`,
//! `uncert`, `pnd`, `moments`, `g2-scan`, `wigner`, and `figure N` presets.
//! Every run writes CSV (and a JSON mirror) plus a `manifest.txt` that is
//! sufficient to reproduce the outputs. Exit codes: 0 ok, 2 usage,
//! 3 not-canonical, 4 numeric failure.

mod io;
mod parse;

use clap::{Args, Parser, Subcommand};
use io::{fmt_g17, Csv, Manifest, OutDir};
use mpss_core::nonlinear::NonlinearSpec;
use mpss_core::observables::{
    self, closed_moments, pnd, uncertainties, G2Scan, ObsError, PNDResult, ScanParam,
};
use mpss_core::opalg::{self, OpAlgError};
use mpss_core::params::{ParamsError, TransformSpec, CANONICITY_TOL};
use mpss_core::states::{solve_eigenstate, StateError, StateSpec};
use mpss_core::wigner::{negativity, section, wigner, WignerError, WignerGrid, WignerOptions};
use num_complex::Complex64;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "mpss", version, about = "Multiphoton squeezed states: operator algebra, eigenstates, photon statistics and Wigner functions")]
struct Cli {
    /// Output directory for CSV/JSON and the manifest.
    #[arg(long, default_value = "out", global = true)]
    out: PathBuf,
    /// Proceed with non-canonical coefficients (only `canon-check` and
    /// `expand-h` accept them).
    #[arg(long, global = true)]
    allow_noncanonical: bool,
    /// Canonicity tolerance for command-line inputs. Looser than the
    /// engine default because flag values are decimal approximations.
    #[arg(long, global = true, default_value_t = 1e-8)]
    canon_tol: f64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct TransformArgs {
    /// Load the coefficients from a key/value document (polar keys
    /// r/phi1/phi2/gamma_abs/delta or raw keys mu_re/.../gamma_im);
    /// overrides the individual flags.
    #[arg(long)]
    transform_file: Option<PathBuf>,
    /// Squeezing parameter r >= 0.
    #[arg(long, default_value_t = 0.0)]
    r: f64,
    /// Phase of mu (radians; accepts pi-shorthand like `pi/2`).
    #[arg(long, default_value = "0", value_parser = parse::parse_angle)]
    phi1: f64,
    /// Phase of nu.
    #[arg(long, default_value = "0", value_parser = parse::parse_angle)]
    phi2: f64,
    /// Coupling magnitude |gamma|.
    #[arg(long, default_value_t = 0.0)]
    gamma_abs: f64,
    /// Phase of gamma.
    #[arg(long, default_value = "pi/2", value_parser = parse::parse_angle)]
    delta: f64,
}

impl TransformArgs {
    /// Builds the spec, admitting it as canonical at the given tolerance
    /// (flag values are decimal approximations of exact angles).
    fn spec_with_tol(&self, tol: f64) -> Result<TransformSpec, CliError> {
        let mut s = match &self.transform_file {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                TransformSpec::from_kv_str(&text)?
            }
            None => TransformSpec::from_polar_unchecked(
                self.r, self.phi1, self.phi2, self.gamma_abs, self.delta,
            ),
        };
        s.canonical = s.canonicity(tol).ok;
        Ok(s)
    }

    fn record(&self, m: &mut Manifest) {
        if let Some(path) = &self.transform_file {
            m.put("transform_file", path.display());
        }
        m.put_f("r", self.r);
        m.put_f("phi1", self.phi1);
        m.put_f("phi2", self.phi2);
        m.put_f("gamma_abs", self.gamma_abs);
        m.put_f("delta", self.delta);
    }
}

#[derive(Args, Clone)]
struct FArgs {
    /// Polynomial nonlinearity: monomial coefficients `c0,c1,c2,...`.
    #[arg(long = "f-poly", value_parser = parse::parse_poly, conflicts_with = "f_sin")]
    f_poly: Option<NonlinearSpec>,
    /// Sine nonlinearity: `amplitude,frequency`.
    #[arg(long = "f-sin", value_parser = parse::parse_sine)]
    f_sin: Option<NonlinearSpec>,
}

impl FArgs {
    /// Chosen nonlinearity; defaults to the lowest nonlinear power x².
    fn get(&self) -> NonlinearSpec {
        self.f_poly
            .clone()
            .or_else(|| self.f_sin.clone())
            .unwrap_or_else(|| NonlinearSpec::monomial(2).expect("x^2 is valid"))
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate both canonicity residuals for a coefficient choice.
    CanonCheck {
        #[command(flatten)]
        t: TransformArgs,
    },
    /// Expand H = b†b in normal order, its quadrature form, and the
    /// comparison against the quoted reference coefficients.
    ExpandH {
        #[command(flatten)]
        t: TransformArgs,
        #[command(flatten)]
        f: FArgs,
    },
    /// Solve the eigenstate and dump the wavefunction on a grid.
    State {
        #[command(flatten)]
        t: TransformArgs,
        #[command(flatten)]
        f: FArgs,
        #[arg(long, default_value_t = 0.0)]
        beta1: f64,
        #[arg(long, default_value_t = 0.0)]
        beta2: f64,
        /// Grid points for the dump.
        #[arg(long, default_value_t = 801)]
        points: usize,
        /// Half-width of the dump grid in density standard deviations.
        #[arg(long, default_value_t = 6.0)]
        sigmas: f64,
    },
    /// Quadrature uncertainties and the decomposition of Δ²X₂.
    Uncert {
        #[command(flatten)]
        t: TransformArgs,
        #[command(flatten)]
        f: FArgs,
        #[arg(long, default_value_t = 0.0)]
        beta1: f64,
        #[arg(long, default_value_t = 0.0)]
        beta2: f64,
    },
    /// Photon number distribution with a gamma = 0 reference column.
    Pnd {
        #[command(flatten)]
        t: TransformArgs,
        #[command(flatten)]
        f: FArgs,
        #[arg(long, default_value_t = 0.0)]
        beta1: f64,
        #[arg(long, default_value_t = 0.0)]
        beta2: f64,
        #[arg(long, default_value_t = 128)]
        n_max: usize,
    },
    /// Closed-form photon moments (quadratic nonlinearity) against the
    /// numerical moments.
    Moments {
        #[command(flatten)]
        t: TransformArgs,
        #[arg(long, default_value_t = 0.0)]
        beta1: f64,
        #[arg(long, default_value_t = 128)]
        n_max: usize,
    },
    /// g²(0) scan over the squeezing parameter or the coupling.
    G2Scan {
        /// Scan axis: `r` or `gamma`.
        #[arg(long)]
        over: String,
        #[arg(long, default_value_t = 0.0)]
        start: f64,
        #[arg(long)]
        stop: f64,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        /// Fixed squeezing when scanning the coupling.
        #[arg(long, default_value_t = 0.0)]
        r: f64,
        /// Fixed coupling when scanning the squeezing.
        #[arg(long, default_value_t = 0.0)]
        gamma_abs: f64,
        #[arg(long, default_value_t = 3.0)]
        beta1: f64,
        #[command(flatten)]
        f: FArgs,
        #[arg(long, default_value_t = 128)]
        n_max: usize,
    },
    /// Wigner function on a phase-space grid, with negativity metadata and
    /// an optional planar section.
    Wigner {
        #[command(flatten)]
        t: TransformArgs,
        #[command(flatten)]
        f: FArgs,
        #[arg(long, default_value_t = 0.0)]
        beta1: f64,
        #[arg(long, default_value_t = 0.0)]
        beta2: f64,
        #[arg(long)]
        x_min: Option<f64>,
        #[arg(long)]
        x_max: Option<f64>,
        #[arg(long)]
        p_min: Option<f64>,
        #[arg(long)]
        p_max: Option<f64>,
        #[arg(long, default_value_t = 256)]
        x_points: usize,
        #[arg(long, default_value_t = 256)]
        p_points: usize,
        /// Also emit iso-contours at this fraction of max |W|.
        #[arg(long)]
        section_level: Option<f64>,
    },
    /// Reproduce a preset figure bundle (N in 1..=15).
    Figure {
        n: u32,
    },
}

enum CliError {
    Usage(String),
    NotCanonical(String),
    Numeric(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<ParamsError> for CliError {
    fn from(e: ParamsError) -> Self {
        match e {
            ParamsError::NotCanonical { .. } => CliError::NotCanonical(e.to_string()),
            ParamsError::Parse(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<StateError> for CliError {
    fn from(e: StateError) -> Self {
        match e {
            StateError::NotCanonical { .. } => CliError::NotCanonical(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<OpAlgError> for CliError {
    fn from(e: OpAlgError) -> Self {
        match e {
            OpAlgError::NotCanonical(_) => CliError::NotCanonical(e.to_string()),
            OpAlgError::NotPolynomial => CliError::Usage(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<ObsError> for CliError {
    fn from(e: ObsError) -> Self {
        match e {
            ObsError::State(s) => s.into(),
            ObsError::Domain(d) => CliError::Usage(d),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<WignerError> for CliError {
    fn from(e: WignerError) -> Self {
        match e {
            WignerError::Invalid(m) => CliError::Usage(m),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::NotCanonical(m)) => {
            eprintln!("not canonical: {m}");
            ExitCode::from(3)
        }
        Err(CliError::Numeric(m)) => {
            eprintln!("numeric failure: {m}");
            ExitCode::from(4)
        }
        Err(CliError::Io(e)) => {
            eprintln!("io error: {e}");
            ExitCode::from(1)
        }
    }
}

/// Canonicity gate: non-canonical coefficients pass only for the two
/// algebra subcommands and only under `--allow-noncanonical`.
fn gate(spec: &TransformSpec, allow: bool, algebra_cmd: bool) -> Result<(), CliError> {
    if spec.canonical || (allow && algebra_cmd) {
        return Ok(());
    }
    let rep = spec.canonicity(CANONICITY_TOL);
    Err(CliError::NotCanonical(format!(
        "residuals ({:.3e}, {:.3e}){}",
        rep.cond1_residual,
        rep.cond2_residual,
        if algebra_cmd {
            "; pass --allow-noncanonical to proceed"
        } else {
            ""
        }
    )))
}

fn solve(t: &TransformSpec, beta1: f64, beta2: f64, f: &NonlinearSpec) -> Result<StateSpec, CliError> {
    Ok(solve_eigenstate(t, Complex64::new(beta1, beta2), f)?)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let out = OutDir::create(&cli.out)?;
    match &cli.cmd {
        Cmd::CanonCheck { t } => canon_check(&out, t, cli.allow_noncanonical, cli.canon_tol),
        Cmd::ExpandH { t, f } => expand_h(&out, t, f, cli.allow_noncanonical, cli.canon_tol),
        Cmd::State {
            t,
            f,
            beta1,
            beta2,
            points,
            sigmas,
        } => state_cmd(&out, t, f, *beta1, *beta2, *points, *sigmas, cli.allow_noncanonical, cli.canon_tol),
        Cmd::Uncert { t, f, beta1, beta2 } => {
            uncert_cmd(&out, t, f, *beta1, *beta2, cli.allow_noncanonical, cli.canon_tol)
        }
        Cmd::Pnd {
            t,
            f,
            beta1,
            beta2,
            n_max,
        } => pnd_cmd(&out, t, f, *beta1, *beta2, *n_max, cli.allow_noncanonical, cli.canon_tol),
        Cmd::Moments { t, beta1, n_max } => {
            moments_cmd(&out, t, *beta1, *n_max, cli.allow_noncanonical, cli.canon_tol)
        }
        Cmd::G2Scan {
            over,
            start,
            stop,
            step,
            r,
            gamma_abs,
            beta1,
            f,
            n_max,
        } => g2_scan_cmd(
            &out, over, *start, *stop, *step, *r, *gamma_abs, *beta1, &f.get(), *n_max,
        ),
        Cmd::Wigner {
            t,
            f,
            beta1,
            beta2,
            x_min,
            x_max,
            p_min,
            p_max,
            x_points,
            p_points,
            section_level,
        } => {
            let opts = WignerOptions {
                x_range: match (x_min, x_max) {
                    (Some(a), Some(b)) => Some((*a, *b)),
                    (None, None) => None,
                    _ => {
                        return Err(CliError::Usage(
                            "x range needs both --x-min and --x-max".into(),
                        ))
                    }
                },
                p_range: match (p_min, p_max) {
                    (Some(a), Some(b)) => Some((*a, *b)),
                    (None, None) => None,
                    _ => {
                        return Err(CliError::Usage(
                            "p range needs both --p-min and --p-max".into(),
                        ))
                    }
                },
                x_points: *x_points,
                p_points: *p_points,
            };
            wigner_cmd(
                &out,
                t,
                f,
                *beta1,
                *beta2,
                &opts,
                *section_level,
                "wigner",
                cli.allow_noncanonical,
                cli.canon_tol,
            )
        }
        Cmd::Figure { n } => figure_cmd(&out, *n),
    }
}

fn canon_check(out: &OutDir, t: &TransformArgs, allow: bool, tol: f64) -> Result<(), CliError> {
    let spec = t.spec_with_tol(tol)?;
    let rep = spec.canonicity(tol);
    let mut m = Manifest::new("canon-check");
    t.record(&mut m);
    m.put_f("canonicity_tol", tol);
    m.put_f("engine_canonicity_tol", CANONICITY_TOL);
    let mut csv = Csv::new(&["key", "value"]);
    csv.row_mixed("cond1_residual", &[rep.cond1_residual]);
    csv.row_mixed("cond2_residual", &[rep.cond2_residual]);
    csv.row_mixed("ok", &[if rep.ok { 1.0 } else { 0.0 }]);
    out.write_csv("canon_check.csv", csv, &mut m)?;
    out.write_json(
        "canon_check.json",
        &json!({
            "cond1_residual": rep.cond1_residual,
            "cond2_residual": rep.cond2_residual,
            "ok": rep.ok,
        }),
        &mut m,
    )?;
    out.write_text("transform.kv", &spec.to_kv_string(), &mut m)?;
    m.write(&out.dir)?;
    println!(
        "canonicity residuals: ({:.3e}, {:.3e}) -> {}",
        rep.cond1_residual,
        rep.cond2_residual,
        if rep.ok { "ok" } else { "NOT canonical" }
    );
    if !rep.ok && !allow {
        return Err(CliError::NotCanonical(format!(
            "residuals ({:.3e}, {:.3e})",
            rep.cond1_residual, rep.cond2_residual
        )));
    }
    Ok(())
}

fn expand_h(out: &OutDir, t: &TransformArgs, f: &FArgs, allow: bool, tol: f64) -> Result<(), CliError> {
    let spec = t.spec_with_tol(tol)?;
    gate(&spec, allow, true)?;
    let f = f.get();
    let h = opalg::expand_hamiltonian(&spec, &f)?;
    let mut m = Manifest::new("expand-h");
    t.record(&mut m);
    m.put("f", &f);
    m.put("max_degree", opalg::DEFAULT_MAX_DEGREE);
    m.put_f("zero_tol", opalg::ZERO_TOL);

    let mut csv = Csv::new(&["k", "l", "re", "im"]);
    for (k, l, re, im) in h.to_rows() {
        csv.row_indexed(&[k as usize, l as usize], &[re, im]);
    }
    out.write_csv("expand_h.csv", csv, &mut m)?;
    out.write_text("expand_h.txt", &format!("{}\n", h.to_text()), &mut m)?;

    let commutator = opalg::commutator_check(&spec, &f)?;
    let mut csv = Csv::new(&["k", "l", "re", "im"]);
    for (k, l, re, im) in commutator.to_rows() {
        csv.row_indexed(&[k as usize, l as usize], &[re, im]);
    }
    out.write_csv("commutator_residual.csv", csv, &mut m)?;

    // reference-form comparison: the quadratic-nonlinearity table plus the
    // linear-case table; each delta row is a documented disagreement
    let reference = if f == NonlinearSpec::monomial(2).expect("valid") {
        Some(opalg::quartic_reference(&spec))
    } else if spec.gamma_abs == 0.0 {
        Some(opalg::linear_reference(&spec))
    } else {
        None
    };
    if let Some(reference) = reference {
        let deltas = opalg::compare(&h, &reference, 1e-12);
        let mut csv = Csv::new(&[
            "k",
            "l",
            "exact_re",
            "exact_im",
            "quoted_re",
            "quoted_im",
            "abs_diff",
        ]);
        for d in &deltas {
            csv.row_indexed(
                &[d.monomial.0 as usize, d.monomial.1 as usize],
                &[
                    d.computed.re,
                    d.computed.im,
                    d.reference.re,
                    d.reference.im,
                    d.abs_diff,
                ],
            );
        }
        m.put("reference_delta_rows", deltas.len());
        out.write_csv("reference_comparison.csv", csv, &mut m)?;
    }

    if spec.canonical {
        let q = opalg::quadrature_form(&spec, &f)?;
        let mut text = String::new();
        let mut csvq = Csv::new(&["term", "coeff"]);
        for (name, v) in q.to_rows() {
            csvq.row_mixed(&name, &[v]);
            text.push_str(&format!("{name}: {}\n", fmt_g17(v)));
        }
        out.write_csv("quadrature_form.csv", csvq, &mut m)?;
        let sq = opalg::complete_square(&q)?;
        out.write_json(
            "quadrature_square.json",
            &json!({
                "x1_sq_residual": sq.residual_x1_sq,
                "x2_coeff": sq.x2_coeff,
                "inner_x1_poly": sq.inner_x1,
                "constant": sq.constant,
            }),
            &mut m,
        )?;
        let _ = text;
    }

    out.write_json(
        "expand_h.json",
        &json!({
            "terms": h.to_rows().iter().map(|&(k, l, re, im)| json!([k, l, re, im])).collect::<Vec<_>>(),
            "commutator_residual_terms": commutator.num_terms(),
        }),
        &mut m,
    )?;
    m.write(&out.dir)?;
    println!(
        "H = b†b: {} normal-ordered terms; [b,b†]-1 residual terms: {}",
        h.num_terms(),
        commutator.num_terms()
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn state_cmd(
    out: &OutDir,
    t: &TransformArgs,
    f: &FArgs,
    beta1: f64,
    beta2: f64,
    points: usize,
    sigmas: f64,
    allow: bool,
    tol: f64,
) -> Result<(), CliError> {
    let spec = t.spec_with_tol(tol)?;
    gate(&spec, allow, false)?;
    let f = f.get();
    let state = solve(&spec, beta1, beta2, &f)?;
    let grid = state.grid(sigmas, points);
    let mut m = Manifest::new("state");
    t.record(&mut m);
    m.put("f", &f);
    m.put_f("beta1", beta1);
    m.put_f("beta2", beta2);
    m.put("points", points);
    m.put_f("sigmas", sigmas);

    let mut csv = Csv::new(&["x", "re_psi", "im_psi", "density", "phase"]);
    for (x, re, im, d, ph) in state.dump_rows(&grid) {
        csv.row(&[x, re, im, d, ph]);
    }
    out.write_csv("state.csv", csv, &mut m)?;
    let residual = state.eigen_residual(&state.grid(9.5, 513))?;
    out.write_json(
        "state.json",
        &json!({
            "beta": [beta1, beta2],
            "quad_coeff": [state.quad_coeff.re, state.quad_coeff.im],
            "lin_coeff": [state.lin_coeff.re, state.lin_coeff.im],
            "phase_coeff": [state.phase_coeff.re, state.phase_coeff.im],
            "norm": state.norm,
            "density_center": state.density_center(),
            "density_variance": state.density_variance(),
            "eigen_residual": residual,
        }),
        &mut m,
    )?;
    m.put_f("eigen_residual", residual);
    m.write(&out.dir)?;
    println!(
        "state: center {:.6}, variance {:.6}, eigen-residual {:.2e}",
        state.density_center(),
        state.density_variance(),
        residual
    );
    Ok(())
}

fn uncert_cmd(
    out: &OutDir,
    t: &TransformArgs,
    f: &FArgs,
    beta1: f64,
    beta2: f64,
    allow: bool,
    tol: f64,
) -> Result<(), CliError> {
    let spec = t.spec_with_tol(tol)?;
    gate(&spec, allow, false)?;
    let f = f.get();
    let state = solve(&spec, beta1, beta2, &f)?;
    let u = uncertainties(&state)?;
    let mut m = Manifest::new("uncert");
    t.record(&mut m);
    m.put("f", &f);
    m.put_f("beta1", beta1);
    m.put_f("beta2", beta2);
    let rows = [
        ("dx1", u.dx1),
        ("dx2", u.dx2),
        ("dx2_linear", u.dx2_linear),
        ("dx2_nonlinear", u.dx2_nonlinear),
        ("cross_term", u.cross_term),
        ("product", u.product),
        ("closure_gap", u.closure_gap()),
    ];
    let mut csv = Csv::new(&["key", "value"]);
    for (k, v) in rows {
        csv.row_mixed(k, &[v]);
    }
    out.write_csv("uncert.csv", csv, &mut m)?;
    out.write_json(
        "uncert.json",
        &json!({
            "dx1": u.dx1, "dx2": u.dx2, "dx2_linear": u.dx2_linear,
            "dx2_nonlinear": u.dx2_nonlinear, "cross_term": u.cross_term,
            "product": u.product, "closure_gap": u.closure_gap(),
        }),
        &mut m,
    )?;
    m.write(&out.dir)?;
    println!(
        "dx1 = {:.8}, dx2 = {:.8}, product = {:.10}",
        u.dx1, u.dx2, u.product
    );
    Ok(())
}

fn pnd_pair(
    spec: &TransformSpec,
    f: &NonlinearSpec,
    beta1: f64,
    beta2: f64,
    n_max: usize,
) -> Result<(PNDResult, PNDResult), CliError> {
    let state = solve(spec, beta1, beta2, f)?;
    let p = pnd(&state, n_max)?;
    let reference_spec =
        TransformSpec::from_polar(spec.r, spec.phi1, spec.phi2, 0.0, spec.delta)
            .map_err(|e| CliError::Numeric(e.to_string()))?;
    let reference = pnd(&solve(&reference_spec, beta1, beta2, f)?, n_max)?;
    Ok((p, reference))
}

fn write_pnd_outputs(
    out: &OutDir,
    m: &mut Manifest,
    stem: &str,
    p: &PNDResult,
    reference: &PNDResult,
) -> Result<(), CliError> {
    let mut csv = Csv::new(&["n", "p_nonlinear", "p_linear_reference"]);
    for (n, (a, b)) in p
        .probabilities
        .iter()
        .zip(reference.probabilities.iter())
        .enumerate()
    {
        csv.row_indexed(&[n], &[*a, *b]);
    }
    out.write_csv(&format!("{stem}.csv"), csv, m)?;
    out.write_json(
        &format!("{stem}.json"),
        &json!({
            "tail_mass": p.tail_mass,
            "n_mean": p.n_mean,
            "n_var": p.n_var,
            "g2": if p.g2.is_nan() { serde_json::Value::Null } else { json!(p.g2) },
            "reference": {
                "tail_mass": reference.tail_mass,
                "n_mean": reference.n_mean,
                "n_var": reference.n_var,
            },
        }),
        m,
    )?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn pnd_cmd(
    out: &OutDir,
    t: &TransformArgs,
    f: &FArgs,
    beta1: f64,
    beta2: f64,
    n_max: usize,
    allow: bool,
    tol: f64,
) -> Result<(), CliError> {
    let spec = t.spec_with_tol(tol)?;
    gate(&spec, allow, false)?;
    let f = f.get();
    let (p, reference) = pnd_pair(&spec, &f, beta1, beta2, n_max)?;
    let mut m = Manifest::new("pnd");
    t.record(&mut m);
    m.put("f", &f);
    m.put_f("beta1", beta1);
    m.put_f("beta2", beta2);
    m.put("n_max", n_max);
    m.put_f("tail_tol", observables::TAIL_TOL);
    write_pnd_outputs(out, &mut m, "pnd", &p, &reference)?;
    m.write(&out.dir)?;
    println!(
        "pnd: n̄ = {:.6}, Δ²n = {:.6}, g2 = {:.6}, tail {:.2e}",
        p.n_mean, p.n_var, p.g2, p.tail_mass
    );
    Ok(())
}

fn moments_cmd(
    out: &OutDir,
    t: &TransformArgs,
    beta1: f64,
    n_max: usize,
    allow: bool,
    tol: f64,
) -> Result<(), CliError> {
    let spec = t.spec_with_tol(tol)?;
    gate(&spec, allow, false)?;
    let (cn, cv) = closed_moments(&spec, beta1)?;
    let cmp = observables::compare_moments(&spec, beta1, n_max)?;
    let mut m = Manifest::new("moments");
    t.record(&mut m);
    m.put_f("beta1", beta1);
    m.put("n_max", n_max);
    let rows = [
        ("closed_n_mean", cn),
        ("closed_n_var", cv),
        ("numeric_n_mean", cmp.numeric_n_mean),
        ("numeric_n_var", cmp.numeric_n_var),
        ("delta_n_mean", cmp.delta_n_mean()),
        ("delta_n_var", cmp.delta_n_var()),
    ];
    let mut csv = Csv::new(&["key", "value"]);
    for (k, v) in rows {
        csv.row_mixed(k, &[v]);
    }
    out.write_csv("moments.csv", csv, &mut m)?;
    out.write_json(
        "moments.json",
        &json!({
            "closed": [cn, cv],
            "numeric": [cmp.numeric_n_mean, cmp.numeric_n_var],
            "delta": [cmp.delta_n_mean(), cmp.delta_n_var()],
        }),
        &mut m,
    )?;
    m.write(&out.dir)?;
    println!(
        "moments: closed ({cn:.6}, {cv:.6}) vs numeric ({:.6}, {:.6})",
        cmp.numeric_n_mean, cmp.numeric_n_var
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn g2_scan_cmd(
    out: &OutDir,
    over: &str,
    start: f64,
    stop: f64,
    step: f64,
    r: f64,
    gamma_abs: f64,
    beta1: f64,
    f: &NonlinearSpec,
    n_max: usize,
) -> Result<(), CliError> {
    let over = match over {
        "r" => ScanParam::Squeezing,
        "gamma" => ScanParam::Coupling,
        other => {
            return Err(CliError::Usage(format!(
                "--over must be `r` or `gamma`, got {other:?}"
            )))
        }
    };
    if !(step > 0.0) || stop < start {
        return Err(CliError::Usage("need step > 0 and stop >= start".into()));
    }
    let scan = G2Scan {
        over,
        start,
        stop,
        step,
        r,
        gamma_abs,
        beta1,
        f: f.clone(),
        n_max,
    };
    let mut m = Manifest::new("g2-scan");
    m.put("over", if over == ScanParam::Squeezing { "r" } else { "gamma" });
    m.put_f("start", start);
    m.put_f("stop", stop);
    m.put_f("step", step);
    m.put_f("r", r);
    m.put_f("gamma_abs", gamma_abs);
    m.put_f("beta1", beta1);
    m.put("f", f);
    m.put("n_max", n_max);
    let (points, crossings) = run_scan(&scan)?;
    write_scan_outputs(out, &mut m, "g2_scan", &points, &crossings)?;
    m.write(&out.dir)?;
    println!(
        "g2 scan: {} points, crossings at {crossings:?}",
        points.len()
    );
    Ok(())
}

fn run_scan(scan: &G2Scan) -> Result<(Vec<observables::ScanPoint>, Vec<f64>), CliError> {
    let points = scan.run()?;
    let crossings = scan.crossings(&points)?;
    Ok((points, crossings))
}

fn write_scan_outputs(
    out: &OutDir,
    m: &mut Manifest,
    stem: &str,
    points: &[observables::ScanPoint],
    crossings: &[f64],
) -> Result<(), CliError> {
    let mut csv = Csv::new(&["param", "g2", "n_mean", "n_var"]);
    for p in points {
        csv.row(&[p.param, p.g2, p.n_mean, p.n_var]);
    }
    out.write_csv(&format!("{stem}.csv"), csv, m)?;
    let mut csv = Csv::new(&["crossing"]);
    for c in crossings {
        csv.row(&[*c]);
    }
    out.write_csv(&format!("{stem}_crossings.csv"), csv, m)?;
    out.write_json(
        &format!("{stem}.json"),
        &json!({
            "points": points
                .iter()
                .map(|p| json!({"param": p.param, "g2": p.g2, "n_mean": p.n_mean, "n_var": p.n_var}))
                .collect::<Vec<_>>(),
            "crossings": crossings,
        }),
        m,
    )?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn wigner_cmd(
    out: &OutDir,
    t: &TransformArgs,
    f: &FArgs,
    beta1: f64,
    beta2: f64,
    opts: &WignerOptions,
    section_level: Option<f64>,
    stem: &str,
    allow: bool,
    tol: f64,
) -> Result<(), CliError> {
    let spec = t.spec_with_tol(tol)?;
    gate(&spec, allow, false)?;
    let f = f.get();
    let state = solve(&spec, beta1, beta2, &f)?;
    let mut m = Manifest::new(stem);
    t.record(&mut m);
    m.put("f", &f);
    m.put_f("beta1", beta1);
    m.put_f("beta2", beta2);
    m.put("x_points", opts.x_points);
    m.put("p_points", opts.p_points);
    let grid = wigner(&state, opts)?;
    write_wigner_outputs(out, &mut m, stem, &state, &grid)?;
    if let Some(level) = section_level {
        write_section_outputs(out, &mut m, &format!("{stem}_section"), &grid, level)?;
    }
    m.write(&out.dir)?;
    let neg = negativity(&grid);
    println!(
        "wigner: norm {:.6}, min {:.3e} at ({:.3}, {:.3}), negative mass {:.3e}",
        grid.norm, neg.min_value, neg.min_location.0, neg.min_location.1, neg.negative_mass
    );
    Ok(())
}

fn write_wigner_outputs(
    out: &OutDir,
    m: &mut Manifest,
    stem: &str,
    state: &StateSpec,
    grid: &WignerGrid,
) -> Result<(), CliError> {
    let mut csv = Csv::new(&["x", "p", "w"]);
    for (ix, &x) in grid.x_axis.iter().enumerate() {
        for (ip, &p) in grid.p_axis.iter().enumerate() {
            csv.row(&[x, p, grid.value(ix, ip)]);
        }
    }
    out.write_csv(&format!("{stem}.csv"), csv, m)?;

    // compact text matrix: first line the p axis, then one line per x
    let mut text = String::new();
    text.push_str("# rows: x value then W(x, p) over the p axis\n# p:");
    for p in &grid.p_axis {
        text.push_str(&format!(" {p:.9e}"));
    }
    text.push('\n');
    for (ix, &x) in grid.x_axis.iter().enumerate() {
        text.push_str(&format!("{x:.9e}"));
        for ip in 0..grid.np() {
            text.push_str(&format!(" {:.9e}", grid.value(ix, ip)));
        }
        text.push('\n');
    }
    out.write_text(&format!("{stem}_matrix.txt"), &text, m)?;

    let neg = negativity(grid);
    m.put_f("norm", grid.norm);
    m.put_f("min_value", neg.min_value);
    m.put_f("negative_mass", neg.negative_mass);
    m.put_f("marginal_defect", grid.marginal_defect(state));
    out.write_json(
        &format!("{stem}_negativity.json"),
        &json!({
            "min_value": neg.min_value,
            "min_location": [neg.min_location.0, neg.min_location.1],
            "negative_region": neg.negative_region.map(|(a, b, c, d)| vec![a, b, c, d]),
            "negative_mass": neg.negative_mass,
            "norm": grid.norm,
        }),
        m,
    )?;
    Ok(())
}

fn write_section_outputs(
    out: &OutDir,
    m: &mut Manifest,
    stem: &str,
    grid: &WignerGrid,
    level: f64,
) -> Result<(), CliError> {
    let loops = section(grid, level)?;
    let mut csv = Csv::new(&["contour", "x", "p"]);
    for (id, polyline) in loops.iter().enumerate() {
        for &(x, p) in polyline {
            csv.row_indexed(&[id], &[x, p]);
        }
    }
    m.put("section_level", level);
    m.put("section_contours", loops.len());
    out.write_csv(&format!("{stem}.csv"), csv, m)?;
    Ok(())
}

/// Preset parameter bundles reproducing the survey figures: the displaced
/// squeezed point (beta1 = 3, r = 0.8, coupling 0.1) for the distribution
/// and phase-space plots, and the g2 sweeps.
fn figure_cmd(out: &OutDir, n: u32) -> Result<(), CliError> {
    let poly = |deg: usize| NonlinearSpec::monomial(deg).expect("small degree");
    let targs = |r: f64, ga: f64| TransformArgs {
        transform_file: None,
        r,
        phi1: 0.0,
        phi2: 0.0,
        gamma_abs: ga,
        delta: std::f64::consts::FRAC_PI_2,
    };
    let scan_r = |ga: f64, stop: f64| G2Scan {
        over: ScanParam::Squeezing,
        start: 0.0,
        stop,
        step: 0.05,
        r: 0.0,
        gamma_abs: ga,
        beta1: 3.0,
        f: poly(2),
        n_max: 128,
    };
    let scan_gamma = |r: f64| G2Scan {
        over: ScanParam::Coupling,
        start: 0.0,
        stop: 0.15,
        step: 0.005,
        r,
        gamma_abs: 0.0,
        beta1: 3.0,
        f: poly(2),
        n_max: 128,
    };

    match n {
        1 | 2 => {
            let deg = if n == 1 { 2 } else { 3 };
            let spec = targs(0.8, 0.1).spec_with_tol(CANONICITY_TOL)?;
            let (p, reference) = pnd_pair(&spec, &poly(deg), 3.0, 0.0, 128)?;
            let mut m = Manifest::new(&format!("figure {n}"));
            targs(0.8, 0.1).record(&mut m);
            m.put("f", poly(deg));
            m.put_f("beta1", 3.0);
            m.put("n_max", 128usize);
            write_pnd_outputs(out, &mut m, &format!("fig{n}_pnd"), &p, &reference)?;
            m.write(&out.dir)?;
        }
        3 | 4 | 5 => {
            let (ga, stop) = match n {
                3 => (0.0, 3.0),
                4 => (0.05, 3.0),
                _ => (0.1, 2.0),
            };
            let scan = scan_r(ga, stop);
            let mut m = Manifest::new(&format!("figure {n}"));
            m.put("over", "r");
            m.put_f("gamma_abs", ga);
            m.put_f("beta1", 3.0);
            m.put("f", poly(2));
            let (points, crossings) = run_scan(&scan)?;
            write_scan_outputs(out, &mut m, &format!("fig{n}_g2"), &points, &crossings)?;
            m.write(&out.dir)?;
        }
        6 | 7 => {
            let r = if n == 6 { 0.5 } else { 0.8 };
            let scan = scan_gamma(r);
            let mut m = Manifest::new(&format!("figure {n}"));
            m.put("over", "gamma");
            m.put_f("r", r);
            m.put_f("beta1", 3.0);
            m.put("f", poly(2));
            let (points, crossings) = run_scan(&scan)?;
            write_scan_outputs(out, &mut m, &format!("fig{n}_g2"), &points, &crossings)?;
            m.write(&out.dir)?;
        }
        8..=15 => {
            let (deg, ga, with_section) = match n {
                8 => (2, 0.0, false),
                9 => (2, 0.0, true),
                10 => (2, 0.1, false),
                11 => (2, 0.1, true),
                12 => (3, 0.1, false),
                13 => (3, 0.1, true),
                14 => (4, 0.1, false),
                _ => (4, 0.1, true),
            };
            let t = targs(0.8, ga);
            let spec = t.spec_with_tol(CANONICITY_TOL)?;
            let state = solve(&spec, 3.0, 0.0, &poly(deg))?;
            let opts = WignerOptions::default();
            let mut m = Manifest::new(&format!("figure {n}"));
            t.record(&mut m);
            m.put("f", poly(deg));
            m.put_f("beta1", 3.0);
            m.put("x_points", opts.x_points);
            m.put("p_points", opts.p_points);
            let grid = wigner(&state, &opts)?;
            if with_section {
                write_section_outputs(out, &mut m, &format!("fig{n}_section"), &grid, 0.05)?;
            } else {
                write_wigner_outputs(out, &mut m, &format!("fig{n}_wigner"), &state, &grid)?;
            }
            m.write(&out.dir)?;
        }
        _ => {
            return Err(CliError::Usage(format!(
                "figure number {n} outside 1..=15"
            )))
        }
    }
    println!("figure {n} written to {}", out.dir.display());
    Ok(())
}
