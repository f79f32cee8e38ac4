//! Flag-value parsers: angles with fractional-π shorthand and nonlinearity
//! specifications.

use mpss_core::nonlinear::NonlinearSpec;

/// Parses radians, accepting `pi`-shorthand: `pi/2`, `-3pi/4`, `0.5pi`,
/// `2pi/3`, or a plain decimal.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let lower = t.to_ascii_lowercase();
    let Some(idx) = lower.find("pi") else {
        return Err(format!("cannot parse angle {s:?}"));
    };
    let (pre, post) = (&lower[..idx], &lower[idx + 2..]);
    let mut mult = match pre {
        "" | "+" => 1.0,
        "-" => -1.0,
        p => p
            .parse::<f64>()
            .map_err(|_| format!("cannot parse angle prefix {p:?} in {s:?}"))?,
    };
    if let Some(divs) = post.strip_prefix('/') {
        let d: f64 = divs
            .parse()
            .map_err(|_| format!("cannot parse angle divisor {divs:?} in {s:?}"))?;
        if d == 0.0 {
            return Err("angle divisor is zero".into());
        }
        mult /= d;
    } else if !post.is_empty() {
        return Err(format!("trailing characters {post:?} in angle {s:?}"));
    }
    Ok(mult * std::f64::consts::PI)
}

/// Comma-separated monomial coefficients, constant term first.
pub fn parse_poly(s: &str) -> Result<NonlinearSpec, String> {
    let coeffs: Result<Vec<f64>, _> = s.split(',').map(|v| v.trim().parse::<f64>()).collect();
    let coeffs = coeffs.map_err(|e| format!("bad polynomial coefficients {s:?}: {e}"))?;
    NonlinearSpec::polynomial(&coeffs).map_err(|e| e.to_string())
}

/// `amplitude,frequency` pair for the sine form.
pub fn parse_sine(s: &str) -> Result<NonlinearSpec, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected `amplitude,frequency`, got {s:?}"));
    }
    let a: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|e| format!("bad amplitude: {e}"))?;
    let k: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|e| format!("bad frequency: {e}"))?;
    NonlinearSpec::sine(a, k).map_err(|e| e.to_string())
}
