//! Data series behind the ZetaTail0 overdispersion, zero-ratio and hazard
//! plots.

use crate::dist::{zt0_relative_overdispersion, zt0_zero_ratio, DistributionSpec};
use crate::error::{domain, Result};
use crate::optim::golden_section;

/// `a` values of the hazard curves.
pub const HAZARD_A: [f64; 3] = [0.25, 1.0, 4.0];

/// `0, step, 2·step, ...` up to and including `max` (within rounding).
pub fn grid(max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !step.is_finite() {
        return domain(format!("grid step must be positive, got {step}"));
    }
    if !(max >= 0.0) || !max.is_finite() {
        return domain(format!("grid maximum must be finite and >= 0, got {max}"));
    }
    let n = (max / step + 1e-9).floor() as usize;
    if n > 10_000_000 {
        return domain(format!("grid of {n} points is too large"));
    }
    Ok((0..=n).map(|i| i as f64 * step).collect())
}

/// `(a, Var/E - 1 divided by E)` for ZetaTail0(a).
pub fn relative_overdispersion_series(max: f64, step: f64) -> Result<Vec<(f64, f64)>> {
    grid(max, step)?
        .into_iter()
        .map(|a| Ok((a, zt0_relative_overdispersion(a)?)))
        .collect()
}

/// `(a, P_ZT0(0) / P_Geom0(0))` with the Geometric matched on tail decay.
pub fn zero_ratio_series(max: f64, step: f64) -> Result<Vec<(f64, f64)>> {
    grid(max, step)?
        .into_iter()
        .map(|a| Ok((a, zt0_zero_ratio(a)?)))
        .collect()
}

/// `(a, x, hazard)` rows for ZetaTail0(a), `x = 0..=x_max`.
pub fn hazard_series(a_values: &[f64], x_max: i64) -> Result<Vec<(f64, i64, f64)>> {
    if x_max < 0 {
        return domain(format!("x_max must be >= 0, got {x_max}"));
    }
    let mut rows = Vec::with_capacity(a_values.len() * (x_max as usize + 1));
    for &a in a_values {
        let spec = DistributionSpec::ZetaTail0 { a };
        for x in 0..=x_max {
            rows.push((a, x, spec.hazard(x)?));
        }
    }
    Ok(rows)
}

/// Location and height of the interior maximum of the relative
/// overdispersion curve.
pub fn relative_overdispersion_peak() -> Result<(f64, f64)> {
    let m = golden_section(|a| -zt0_relative_overdispersion(a).unwrap_or(f64::NAN), 0.0, 5.0, 1e-8)?;
    let a = m.x[0];
    Ok((a, zt0_relative_overdispersion(a)?))
}
