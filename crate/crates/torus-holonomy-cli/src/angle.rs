//! Angle literals with `pi` sugar, e.g. `0.5`, `pi`, `2pi`, `pi/2`,
//! `2pi/3`, `-3pi/4`, `0.5pi`.
//!
//! Exactness matters at special angles: `2pi/3` parses to
//! `2.0 * PI / 3.0` rather than going through a decimal detour, so
//! divergence markers land where they should.

use std::f64::consts::PI;

pub fn parse_angle(text: &str) -> Result<f64, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty angle".into());
    }
    let (sign, rest) = match s.strip_prefix('-') {
        Some(r) => (-1.0, r),
        None => (1.0, s.strip_prefix('+').unwrap_or(s)),
    };

    let Some(pi_pos) = rest.find("pi") else {
        return rest
            .parse::<f64>()
            .map(|v| sign * v)
            .map_err(|_| format!("invalid angle literal `{text}`"));
    };

    let coeff_str = &rest[..pi_pos];
    let tail = &rest[pi_pos + 2..];

    let coeff = if coeff_str.is_empty() {
        1.0
    } else {
        coeff_str
            .parse::<f64>()
            .map_err(|_| format!("invalid coefficient in `{text}`"))?
    };

    let denom = if tail.is_empty() {
        1.0
    } else if let Some(d) = tail.strip_prefix('/') {
        let d: f64 = d
            .parse()
            .map_err(|_| format!("invalid divisor in `{text}`"))?;
        if d == 0.0 {
            return Err(format!("zero divisor in `{text}`"));
        }
        d
    } else {
        return Err(format!("unexpected trailing `{tail}` in `{text}`"));
    };

    Ok(sign * coeff * PI / denom)
}
