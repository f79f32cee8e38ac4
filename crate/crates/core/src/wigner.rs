//! Wigner quasiprobability distribution on a rectangular phase-space grid,
//! with planar sections and negativity metadata.
//!
//! Convention (fixed by `∬W = 1`, marginal `= |Ψ|²` and vacuum variances
//! 1/4): `W(x, p) = (2/π) ∫ Ψ*(x+y) Ψ(x−y) e^{4ipy} dy`, which bounds
//! `|W| ≤ 2/π`.

use crate::states::StateSpec;
use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WignerError {
    #[error("range too small: Gaussian boundary mass {mass:.3e} exceeds 1e-12")]
    RangeTooSmall { mass: f64 },
    #[error("transform integral did not converge (row {row}, last change {change:.3e})")]
    NoConvergence { row: usize, change: f64 },
    #[error("imaginary residue {0:.3e} exceeds 1e-10; grid is inconsistent")]
    ImagResidue(f64),
    #[error("contour level {level:.3e} exceeds the grid maximum {max:.3e}")]
    EmptyContour { level: f64, max: f64 },
    #[error("invalid argument: {0}")]
    Invalid(String),
}

/// Requested ranges and resolution; `None` ranges are chosen from the state
/// (x: ±7.5 density widths, p: the phase-gradient support padded by the
/// momentum spread).
#[derive(Debug, Clone, Copy)]
pub struct WignerOptions {
    pub x_range: Option<(f64, f64)>,
    pub p_range: Option<(f64, f64)>,
    pub x_points: usize,
    pub p_points: usize,
}

impl Default for WignerOptions {
    fn default() -> Self {
        WignerOptions {
            x_range: None,
            p_range: None,
            x_points: 256,
            p_points: 256,
        }
    }
}

/// Sampled `W(x, p)` with normalization and negativity metadata.
#[derive(Debug, Clone)]
pub struct WignerGrid {
    pub x_axis: Vec<f64>,
    pub p_axis: Vec<f64>,
    /// Row-major: `values[ix * p_axis.len() + ip]`.
    pub values: Vec<f64>,
    pub min_value: f64,
    pub min_location: (f64, f64),
    /// Bounding box `(x_lo, x_hi, p_lo, p_hi)` of cells below −1e−12.
    pub negative_region: Option<(f64, f64, f64, f64)>,
    /// `∬ W dx dp`.
    pub norm: f64,
}

/// Cells count as negative for the bounding box below this value; keeps
/// rounding-level noise out of the region metadata.
const NEG_FLOOR: f64 = -1e-12;

/// Standard-normal tail mass beyond `z` standard deviations (upper bound).
fn gauss_tail(z: f64) -> f64 {
    if z <= 0.0 {
        return 1.0;
    }
    (-0.5 * z * z).exp() / (z * (2.0 * std::f64::consts::PI).sqrt())
}

/// Computes the Wigner grid of a normalized state.
pub fn wigner(state: &StateSpec, opts: &WignerOptions) -> Result<WignerGrid, WignerError> {
    if opts.x_points < 16 || opts.p_points < 16 {
        return Err(WignerError::Invalid("need at least 16 points per axis".into()));
    }
    let xc = state.density_center();
    let s = state.density_variance().sqrt();

    let (x_lo, x_hi) = opts.x_range.unwrap_or((xc - 7.5 * s, xc + 7.5 * s));
    let mass = gauss_tail((x_hi - xc) / s) + gauss_tail((xc - x_lo) / s);
    if mass >= 1e-12 {
        return Err(WignerError::RangeTooSmall { mass });
    }

    let (p_lo, p_hi) = opts.p_range.unwrap_or_else(|| auto_p_range(state, x_lo, x_hi));
    if !(x_hi > x_lo) || !(p_hi > p_lo) {
        return Err(WignerError::Invalid("empty range".into()));
    }

    let nx = opts.x_points;
    let np = opts.p_points;
    let x_axis: Vec<f64> = (0..nx)
        .map(|i| x_lo + (x_hi - x_lo) * i as f64 / (nx - 1) as f64)
        .collect();
    let p_axis: Vec<f64> = (0..np)
        .map(|j| p_lo + (p_hi - p_lo) * j as f64 / (np - 1) as f64)
        .collect();

    // y-support: the overlap envelope in y is the density Gaussian centered
    // at 0 regardless of x, so the x half-width also covers y.
    let y_hw = (x_hi - x_lo) / 2.0;
    let p_max_abs = p_lo.abs().max(p_hi.abs());
    let k_state = state
        .exponent_derivative(x_lo)
        .im
        .abs()
        .max(state.exponent_derivative(x_hi).im.abs());
    let k_total = 4.0 * p_max_abs + 2.0 * k_state;
    let base_ny = (((k_total * y_hw / std::f64::consts::PI) as usize).max(256) + 1)
        .next_power_of_two();

    let rows: Result<Vec<(Vec<f64>, f64)>, WignerError> = x_axis
        .par_iter()
        .enumerate()
        .map(|(ix, &x)| wigner_row(state, x, &p_axis, y_hw, base_ny).map_err(|e| match e {
            WignerError::NoConvergence { change, .. } => {
                WignerError::NoConvergence { row: ix, change }
            }
            other => other,
        }))
        .collect();
    let rows = rows?;

    let mut values = Vec::with_capacity(nx * np);
    let mut max_imag = 0.0f64;
    for (row, imag) in rows {
        values.extend_from_slice(&row);
        max_imag = max_imag.max(imag);
    }
    if max_imag > 1e-10 {
        return Err(WignerError::ImagResidue(max_imag));
    }

    // norm, minimum, negative bounding box (trapezoid weights on both axes)
    let dx = x_axis[1] - x_axis[0];
    let dp = p_axis[1] - p_axis[0];
    let mut norm = 0.0;
    let mut min_value = f64::INFINITY;
    let mut min_location = (x_axis[0], p_axis[0]);
    let mut bbox: Option<(f64, f64, f64, f64)> = None;
    for ix in 0..nx {
        let wx = if ix == 0 || ix == nx - 1 { 0.5 } else { 1.0 };
        for ip in 0..np {
            let wp = if ip == 0 || ip == np - 1 { 0.5 } else { 1.0 };
            let v = values[ix * np + ip];
            norm += wx * wp * v;
            if v < min_value {
                min_value = v;
                min_location = (x_axis[ix], p_axis[ip]);
            }
            if v < NEG_FLOOR {
                let b = bbox.get_or_insert((x_axis[ix], x_axis[ix], p_axis[ip], p_axis[ip]));
                b.0 = b.0.min(x_axis[ix]);
                b.1 = b.1.max(x_axis[ix]);
                b.2 = b.2.min(p_axis[ip]);
                b.3 = b.3.max(p_axis[ip]);
            }
        }
    }
    norm *= dx * dp;

    Ok(WignerGrid {
        x_axis,
        p_axis,
        values,
        min_value,
        min_location,
        negative_region: bbox,
        norm,
    })
}

/// p-range from the local phase gradient `p(x) = φ'(x)/2` over the x-support,
/// padded by the total momentum spread.
fn auto_p_range(state: &StateSpec, x_lo: f64, x_hi: f64) -> (f64, f64) {
    let mut p_min = f64::INFINITY;
    let mut p_max = f64::NEG_INFINITY;
    for i in 0..=512 {
        let x = x_lo + (x_hi - x_lo) * i as f64 / 512.0;
        let p = 0.5 * state.exponent_derivative(x).im;
        p_min = p_min.min(p);
        p_max = p_max.max(p);
    }
    let t = &state.transform;
    let sigma_lin_sq = (t.mu + t.nu).norm_sqr() / 4.0;
    // nonlinear spread m^2 Var F over the Gaussian density, by moments
    let m = t.x2_nonlinear_coeff();
    let (xc, s) = (state.density_center(), state.density_variance().sqrt());
    let mut f_mean = 0.0;
    let mut f_sq = 0.0;
    let n = 801;
    for i in 0..n {
        let z = -6.0 + 12.0 * i as f64 / (n - 1) as f64;
        let w = (-0.5 * z * z).exp();
        let fx = state.nonlinearity.eval(xc + s * z);
        f_mean += w * fx;
        f_sq += w * fx * fx;
    }
    let wsum: f64 = (0..n)
        .map(|i| {
            let z = -6.0 + 12.0 * i as f64 / (n - 1) as f64;
            (-0.5 * z * z).exp()
        })
        .sum();
    f_mean /= wsum;
    f_sq /= wsum;
    let sigma_p = (sigma_lin_sq + m * m * (f_sq - f_mean * f_mean).max(0.0)).sqrt();
    let pad = 8.0 * sigma_p + 2.0;
    (p_min - pad, p_max + pad)
}

/// One x-row of the transform, refined in the y-grid until stable. Returns
/// the real row and its largest imaginary residue.
fn wigner_row(
    state: &StateSpec,
    x: f64,
    p_axis: &[f64],
    y_hw: f64,
    base_ny: usize,
) -> Result<(Vec<f64>, f64), WignerError> {
    let mut ny = base_ny;
    let mut prev = row_pass(state, x, p_axis, y_hw, ny);
    for _ in 0..6 {
        ny *= 2;
        let cur = row_pass(state, x, p_axis, y_hw, ny);
        let change = prev
            .iter()
            .zip(cur.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if change <= 1e-10 {
            let max_imag = cur.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
            let row = cur.iter().map(|c| c.re).collect();
            return Ok((row, max_imag));
        }
        prev = cur;
    }
    Err(WignerError::NoConvergence {
        row: 0,
        change: f64::NAN,
    })
}

fn row_pass(state: &StateSpec, x: f64, p_axis: &[f64], y_hw: f64, ny: usize) -> Vec<Complex64> {
    let n = ny + 1;
    let dy = 2.0 * y_hw / ny as f64;
    // overlap g(y) = conj(Ψ(x+y)) Ψ(x−y), trapezoid-weighted
    let mut g = Vec::with_capacity(n);
    for k in 0..n {
        let y = -y_hw + k as f64 * dy;
        let w = if k == 0 || k == ny { 0.5 } else { 1.0 };
        g.push(state.eval(x + y).conj() * state.eval(x - y) * w);
    }
    let scale = 2.0 / std::f64::consts::PI * dy;
    p_axis
        .iter()
        .map(|&p| {
            // e^{4ipy} advanced by a fixed rotor; rounding drift stays far
            // below the refinement tolerance for these grid sizes.
            let step = Complex64::from_polar(1.0, 4.0 * p * dy);
            let mut rot = Complex64::from_polar(1.0, 4.0 * p * (-y_hw));
            let mut acc = Complex64::new(0.0, 0.0);
            for gk in &g {
                acc += *gk * rot;
                rot *= step;
            }
            acc * scale
        })
        .collect()
}

impl WignerGrid {
    pub fn nx(&self) -> usize {
        self.x_axis.len()
    }

    pub fn np(&self) -> usize {
        self.p_axis.len()
    }

    pub fn value(&self, ix: usize, ip: usize) -> f64 {
        self.values[ix * self.np() + ip]
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// `∫W dp` for each x (trapezoid): the position marginal.
    pub fn marginal_x(&self) -> Vec<f64> {
        let np = self.np();
        let dp = self.p_axis[1] - self.p_axis[0];
        (0..self.nx())
            .map(|ix| {
                let mut acc = 0.0;
                for ip in 0..np {
                    let w = if ip == 0 || ip == np - 1 { 0.5 } else { 1.0 };
                    acc += w * self.value(ix, ip);
                }
                acc * dp
            })
            .collect()
    }

    /// `∫W dx` for each p (trapezoid): the momentum marginal.
    pub fn marginal_p(&self) -> Vec<f64> {
        let nx = self.nx();
        let dx = self.x_axis[1] - self.x_axis[0];
        (0..self.np())
            .map(|ip| {
                let mut acc = 0.0;
                for ix in 0..nx {
                    let w = if ix == 0 || ix == nx - 1 { 0.5 } else { 1.0 };
                    acc += w * self.value(ix, ip);
                }
                acc * dx
            })
            .collect()
    }

    /// Largest deviation of the position marginal from the state's density.
    pub fn marginal_defect(&self, state: &StateSpec) -> f64 {
        self.marginal_x()
            .iter()
            .zip(self.x_axis.iter())
            .map(|(&m, &x)| (m - state.density(x)).abs())
            .fold(0.0, f64::max)
    }
}

/// Negativity metadata of a computed grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativityReport {
    pub min_value: f64,
    pub min_location: (f64, f64),
    pub negative_region: Option<(f64, f64, f64, f64)>,
    /// `∬ max(−W, 0) dx dp`.
    pub negative_mass: f64,
}

/// Scans the grid for negative cells and integrates the negative part.
pub fn negativity(grid: &WignerGrid) -> NegativityReport {
    let dx = grid.x_axis[1] - grid.x_axis[0];
    let dp = grid.p_axis[1] - grid.p_axis[0];
    let mut mass = 0.0;
    for ix in 0..grid.nx() {
        let wx = if ix == 0 || ix == grid.nx() - 1 { 0.5 } else { 1.0 };
        for ip in 0..grid.np() {
            let wp = if ip == 0 || ip == grid.np() - 1 { 0.5 } else { 1.0 };
            let v = grid.value(ix, ip);
            if v < 0.0 {
                mass += wx * wp * (-v);
            }
        }
    }
    NegativityReport {
        min_value: grid.min_value,
        min_location: grid.min_location,
        negative_region: grid.negative_region,
        negative_mass: mass * dx * dp,
    }
}

/// Iso-contours of `W` at `level_fraction · max|W|`, as ordered polylines
/// from marching squares with linear interpolation.
pub fn section(
    grid: &WignerGrid,
    level_fraction: f64,
) -> Result<Vec<Vec<(f64, f64)>>, WignerError> {
    if !(level_fraction > 0.0 && level_fraction < 1.0) {
        return Err(WignerError::Invalid(format!(
            "level_fraction {level_fraction} outside (0, 1)"
        )));
    }
    let level = level_fraction * grid.max_abs();
    if level >= grid.max_value() {
        return Err(WignerError::EmptyContour {
            level,
            max: grid.max_value(),
        });
    }

    // Crossing points live on grid edges; identify them by edge id so
    // segment chaining is exact.
    #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
    enum Edge {
        H(usize, usize), // from (ix, ip) to (ix+1, ip)
        V(usize, usize), // from (ix, ip) to (ix, ip+1)
    }

    let interp = |a: f64, b: f64| (level - a) / (b - a);
    let point_on = |e: Edge| -> (f64, f64) {
        match e {
            Edge::H(ix, ip) => {
                let t = interp(grid.value(ix, ip), grid.value(ix + 1, ip));
                (
                    grid.x_axis[ix] + t * (grid.x_axis[ix + 1] - grid.x_axis[ix]),
                    grid.p_axis[ip],
                )
            }
            Edge::V(ix, ip) => {
                let t = interp(grid.value(ix, ip), grid.value(ix, ip + 1));
                (
                    grid.x_axis[ix],
                    grid.p_axis[ip] + t * (grid.p_axis[ip + 1] - grid.p_axis[ip]),
                )
            }
        }
    };

    let mut segments: Vec<(Edge, Edge)> = Vec::new();
    for ix in 0..grid.nx() - 1 {
        for ip in 0..grid.np() - 1 {
            let c00 = grid.value(ix, ip) >= level;
            let c10 = grid.value(ix + 1, ip) >= level;
            let c01 = grid.value(ix, ip + 1) >= level;
            let c11 = grid.value(ix + 1, ip + 1) >= level;
            let bottom = Edge::H(ix, ip);
            let top = Edge::H(ix, ip + 1);
            let left = Edge::V(ix, ip);
            let right = Edge::V(ix + 1, ip);
            let code = (c00 as u8) | (c10 as u8) << 1 | (c11 as u8) << 2 | (c01 as u8) << 3;
            match code {
                0 | 15 => {}
                1 | 14 => segments.push((left, bottom)),
                2 | 13 => segments.push((bottom, right)),
                3 | 12 => segments.push((left, right)),
                4 | 11 => segments.push((right, top)),
                6 | 9 => segments.push((bottom, top)),
                7 | 8 => segments.push((left, top)),
                5 | 10 => {
                    // saddle: split by the cell-center value
                    let center = 0.25
                        * (grid.value(ix, ip)
                            + grid.value(ix + 1, ip)
                            + grid.value(ix, ip + 1)
                            + grid.value(ix + 1, ip + 1));
                    let inside = center >= level;
                    if (code == 5) == inside {
                        segments.push((left, top));
                        segments.push((bottom, right));
                    } else {
                        segments.push((left, bottom));
                        segments.push((right, top));
                    }
                }
                _ => unreachable!(),
            }
        }
    }
    if segments.is_empty() {
        return Err(WignerError::EmptyContour {
            level,
            max: grid.max_value(),
        });
    }

    // Chain segments that share an edge endpoint.
    let mut by_edge: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
    for (i, &(a, b)) in segments.iter().enumerate() {
        by_edge.entry(a).or_default().push(i);
        by_edge.entry(b).or_default().push(i);
    }
    let mut used = vec![false; segments.len()];
    let mut polylines = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (a0, b0) = segments[start];
        let mut chain = vec![a0, b0];
        // extend forward from the tail, then backward from the head
        for dir in 0..2 {
            loop {
                let tip = if dir == 0 { *chain.last().unwrap() } else { chain[0] };
                let next = by_edge
                    .get(&tip)
                    .and_then(|ids| ids.iter().find(|&&i| !used[i]).copied());
                match next {
                    None => break,
                    Some(i) => {
                        used[i] = true;
                        let (a, b) = segments[i];
                        let other = if a == tip { b } else { a };
                        if dir == 0 {
                            chain.push(other);
                        } else {
                            chain.insert(0, other);
                        }
                    }
                }
            }
        }
        polylines.push(chain.iter().map(|&e| point_on(e)).collect());
    }
    Ok(polylines)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonlinear::NonlinearSpec;
    use crate::params::TransformSpec;
    use crate::states::solve_eigenstate;
    use num_complex::Complex64;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn state(r: f64, ga: f64, beta1: f64, deg: usize) -> crate::states::StateSpec {
        let t = TransformSpec::from_polar(r, 0.0, 0.0, ga, FRAC_PI_2).unwrap();
        solve_eigenstate(
            &t,
            Complex64::new(beta1, 0.0),
            &NonlinearSpec::monomial(deg).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn vacuum_matches_the_gaussian_transform() {
        let s = state(0.0, 0.0, 0.0, 2);
        let g = wigner(&s, &WignerOptions::default()).unwrap();
        assert!((g.norm - 1.0).abs() < 1e-6);
        for (k, &x) in g.x_axis.iter().enumerate().step_by(37) {
            for (l, &p) in g.p_axis.iter().enumerate().step_by(41) {
                let expect = 2.0 / PI * (-2.0 * x * x - 2.0 * p * p).exp();
                assert!(
                    (g.value(k, l) - expect).abs() < 1e-9,
                    "x={x} p={p}: {} vs {expect}",
                    g.value(k, l)
                );
            }
        }
        assert!(g.min_value > -1e-12);
        // second moments recover the vacuum variances
        let dx = g.x_axis[1] - g.x_axis[0];
        let mx = g.marginal_x();
        let var_x: f64 = g
            .x_axis
            .iter()
            .zip(mx.iter())
            .map(|(&x, &m)| x * x * m * dx)
            .sum();
        assert!((var_x - 0.25).abs() < 1e-6);
        let dp = g.p_axis[1] - g.p_axis[0];
        let mp = g.marginal_p();
        let var_p: f64 = g
            .p_axis
            .iter()
            .zip(mp.iter())
            .map(|(&p, &m)| p * p * m * dp)
            .sum();
        assert!((var_p - 0.25).abs() < 1e-6);
    }

    #[test]
    fn squeezed_state_is_positive_and_bounded() {
        let s = state(0.8, 0.0, 3.0, 2);
        let g = wigner(&s, &WignerOptions::default()).unwrap();
        assert!((g.norm - 1.0).abs() < 1e-4);
        assert!(g.min_value > -1e-9);
        assert!(g.max_abs() <= 2.0 / PI + 1e-9);
        assert!(g.marginal_defect(&s) < 1e-6);
        assert_eq!(negativity(&g).negative_region, None);
    }

    #[test]
    fn quadratic_nonlinearity_stays_positive() {
        let s = state(0.8, 0.1, 3.0, 2);
        let g = wigner(&s, &WignerOptions::default()).unwrap();
        let neg = negativity(&g);
        assert!(neg.negative_mass < 1e-9);
        assert!(g.min_value > -1e-9);
        // displaced toward negative p
        let mp = g.marginal_p();
        let dp = g.p_axis[1] - g.p_axis[0];
        let p_mean: f64 = g
            .p_axis
            .iter()
            .zip(mp.iter())
            .map(|(&p, &m)| p * m * dp)
            .sum();
        assert!(p_mean < -0.1, "p_mean = {p_mean}");
    }

    #[test]
    fn quartic_nonlinearity_goes_negative_at_negative_p() {
        let s = state(0.8, 0.1, 3.0, 4);
        let g = wigner(
            &s,
            &WignerOptions {
                x_points: 320,
                p_points: 384,
                ..WignerOptions::default()
            },
        )
        .unwrap();
        let neg = negativity(&g);
        assert!(neg.min_value < -1e-4, "min {}", neg.min_value);
        assert!(neg.min_location.1 < 0.0);
        let (_, _, _, p_hi) = neg.negative_region.unwrap();
        assert!(p_hi < 0.0);
        assert!(neg.negative_mass > 1e-6);
        assert!(g.max_abs() <= 2.0 / PI + 1e-9);
    }

    #[test]
    fn cubic_nonlinearity_negativity_is_tiny_but_real() {
        // The Airy-type fringes of the cubic phase survive the Gaussian
        // envelope only at the 1e-11 level at these parameters.
        let s = state(0.8, 0.1, 3.0, 3);
        let g = wigner(
            &s,
            &WignerOptions {
                x_points: 320,
                p_points: 384,
                ..WignerOptions::default()
            },
        )
        .unwrap();
        assert!(g.min_value < -1e-11, "min {}", g.min_value);
        assert!(g.min_location.1 < 0.0);
    }

    #[test]
    fn marginal_reproduces_density() {
        for deg in [2usize, 3] {
            let s = state(0.8, 0.1, 3.0, deg);
            let g = wigner(&s, &WignerOptions::default()).unwrap();
            assert!(g.marginal_defect(&s) < 1e-6, "deg {deg}");
            // the momentum marginal is a valid probability density
            let mp = g.marginal_p();
            assert!(mp.iter().all(|&v| v > -1e-8), "deg {deg}");
            let dp = g.p_axis[1] - g.p_axis[0];
            let total: f64 = mp.iter().sum::<f64>() * dp;
            assert!((total - 1.0).abs() < 1e-4, "deg {deg}: {total}");
        }
    }

    #[test]
    fn refinement_stability_of_the_minimum() {
        let s = state(0.8, 0.1, 3.0, 4);
        let coarse = wigner(&s, &WignerOptions::default()).unwrap();
        let fine = wigner(
            &s,
            &WignerOptions {
                x_points: 512,
                p_points: 512,
                ..WignerOptions::default()
            },
        )
        .unwrap();
        assert!((coarse.min_value - fine.min_value).abs() < 1e-4);
    }

    #[test]
    fn range_too_small_is_reported() {
        let s = state(0.8, 0.0, 3.0, 2);
        let opts = WignerOptions {
            x_range: Some((s.density_center() - 1.0, s.density_center() + 1.0)),
            ..WignerOptions::default()
        };
        assert!(matches!(
            wigner(&s, &opts),
            Err(WignerError::RangeTooSmall { .. })
        ));
    }

    #[test]
    fn vacuum_section_is_a_single_closed_loop() {
        let s = state(0.0, 0.0, 0.0, 2);
        let g = wigner(&s, &WignerOptions::default()).unwrap();
        let loops = section(&g, 0.5).unwrap();
        assert_eq!(loops.len(), 1);
        let loop0 = &loops[0];
        assert!(loop0.len() > 8);
        // closed: first and last points coincide (same starting edge)
        let (fx, fp) = loop0[0];
        let (lx, lp) = *loop0.last().unwrap();
        assert!((fx - lx).abs() < 1e-9 && (fp - lp).abs() < 1e-9);
        // near-circular: radius spread small at half maximum
        let radii: Vec<f64> = loop0.iter().map(|&(x, p)| (x * x + p * p).sqrt()).collect();
        let rmin = radii.iter().copied().fold(f64::INFINITY, f64::min);
        let rmax = radii.iter().copied().fold(0.0, f64::max);
        assert!((rmax - rmin) / rmax < 0.05, "rmin {rmin} rmax {rmax}");
    }

    #[test]
    fn quadratic_section_is_displaced_to_negative_p() {
        let s = state(0.8, 0.1, 3.0, 2);
        let g = wigner(&s, &WignerOptions::default()).unwrap();
        let loops = section(&g, 0.5).unwrap();
        assert_eq!(loops.len(), 1);
        let centroid_p: f64 =
            loops[0].iter().map(|&(_, p)| p).sum::<f64>() / loops[0].len() as f64;
        assert!(centroid_p < 0.0, "centroid p = {centroid_p}");
    }

    #[test]
    fn quartic_section_has_side_ripples() {
        // At gamma = 0.1 the fringes stay attached to the main body; a
        // stronger coupling detaches the lateral ripples into separate
        // contour lines.
        let s = state(0.8, 0.3, 3.0, 4);
        let g = wigner(
            &s,
            &WignerOptions {
                x_points: 320,
                p_points: 512,
                ..WignerOptions::default()
            },
        )
        .unwrap();
        let loops = section(&g, 0.01).unwrap();
        assert!(loops.len() >= 2, "contours: {}", loops.len());
    }

    #[test]
    fn section_rejects_bad_levels() {
        let s = state(0.0, 0.0, 0.0, 2);
        let g = wigner(&s, &WignerOptions::default()).unwrap();
        assert!(section(&g, 0.0).is_err());
        assert!(section(&g, 1.0).is_err());
    }
}
