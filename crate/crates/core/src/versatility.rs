//! Fisher information of one-parameter families and the versatility measure
//! `𝒱 = sqrt(E[I(θ)])` under a standard lognormal prior on `θ`.

use std::fmt;

use gauss_quad::GaussHermite;

use crate::dist::DistributionSpec;
use crate::error::{domain, Error, Result};
use crate::specfun::{hurwitz_zeta, log_weighted_zeta};

/// One-parameter families scored by [`versatility_measure`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VersatilityFamily {
    /// Geometric0 with `p = m/(m+1)`.
    GeometricOdds,
    /// Geometric0 with `p = 1/(m+1)`, so that `m` is the mean.
    GeometricMean,
    /// ZetaTail0(a).
    ZetaTail0,
    /// Zeta0(b).
    Zeta0,
    /// Quadratic0(c).
    Quadratic0,
}

impl VersatilityFamily {
    pub const ALL: [VersatilityFamily; 5] = [
        VersatilityFamily::GeometricOdds,
        VersatilityFamily::GeometricMean,
        VersatilityFamily::ZetaTail0,
        VersatilityFamily::Zeta0,
        VersatilityFamily::Quadratic0,
    ];

    pub fn label(self) -> &'static str {
        match self {
            VersatilityFamily::GeometricOdds | VersatilityFamily::GeometricMean => "Geometric0",
            VersatilityFamily::ZetaTail0 => "ZetaTail0",
            VersatilityFamily::Zeta0 => "Zeta0",
            VersatilityFamily::Quadratic0 => "Quadratic0",
        }
    }

    pub fn parameterization(self) -> &'static str {
        match self {
            VersatilityFamily::GeometricOdds => "p=m/(m+1)",
            VersatilityFamily::GeometricMean => "p=1/(m+1)",
            VersatilityFamily::ZetaTail0 => "a",
            VersatilityFamily::Zeta0 => "b",
            VersatilityFamily::Quadratic0 => "c",
        }
    }

    /// The distribution indexed by `theta`.
    pub fn spec(self, theta: f64) -> Result<DistributionSpec> {
        check_theta(theta)?;
        let spec = match self {
            VersatilityFamily::GeometricOdds => DistributionSpec::Geometric0 { p: theta / (theta + 1.0) },
            VersatilityFamily::GeometricMean => DistributionSpec::Geometric0 { p: 1.0 / (theta + 1.0) },
            VersatilityFamily::ZetaTail0 => DistributionSpec::ZetaTail0 { a: theta },
            VersatilityFamily::Zeta0 => DistributionSpec::Zeta0 { b: theta },
            VersatilityFamily::Quadratic0 => DistributionSpec::Quadratic0 { c: theta },
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for VersatilityFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.label(), self.parameterization())
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta.is_finite() {
        Ok(())
    } else {
        domain(format!("parameter must be finite and > 0, got {theta}"))
    }
}

/// `∂ ln f(x | θ) / ∂θ`.
pub fn score(family: VersatilityFamily, theta: f64, x: i64) -> Result<f64> {
    check_theta(theta)?;
    if x < 0 {
        return domain(format!("score requested at x = {x}, outside the support"));
    }
    let xf = x as f64;
    Ok(match family {
        VersatilityFamily::GeometricOdds => {
            // p = m/(m+1): d/dm [ln p + x ln(1-p)] = 1/m - (x+1)/(m+1)
            1.0 / theta - (xf + 1.0) / (theta + 1.0)
        }
        VersatilityFamily::GeometricMean => {
            // p = 1/(m+1): d/dm [-ln(m+1) + x ln(m/(m+1))] = x/m - (x+1)/(m+1)
            xf / theta - (xf + 1.0) / (theta + 1.0)
        }
        VersatilityFamily::ZetaTail0 => {
            let t = theta + 2.0;
            1.0 / (theta + 1.0) - (xf + 2.0) * hurwitz_zeta(xf + 3.0, t)? / hurwitz_zeta(xf + 2.0, t)?
        }
        VersatilityFamily::Zeta0 => {
            let s = theta + 1.0;
            log_weighted_zeta(s, 1.0, 1)? / log_weighted_zeta(s, 1.0, 0)? - (xf + 1.0).ln()
        }
        VersatilityFamily::Quadratic0 => {
            let u = xf + theta;
            1.0 / theta - 1.0 / u - 1.0 / (u + 1.0)
        }
    })
}

/// A Fisher information value with its evaluation metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherInfo {
    pub value: f64,
    /// Number of support points summed explicitly (0 for closed forms).
    pub terms: usize,
    /// Set when the explicit sum hit its term cap before the stopping rule.
    pub capped: bool,
}

/// Fisher information `E[score²]`.
///
/// The Geometric and Quadratic forms are closed. ZetaTail0 sums
/// `score² · pmf` until the remaining mass is below `1e-15`. Zeta0 uses
/// `Var[ln(X+1)]`, written through log-weighted zeta sums.
pub fn fisher_information(family: VersatilityFamily, theta: f64) -> Result<FisherInfo> {
    check_theta(theta)?;
    let closed = |value| Ok(FisherInfo { value, terms: 0, capped: false });
    match family {
        VersatilityFamily::GeometricOdds => closed(1.0 / (theta * theta * (theta + 1.0))),
        VersatilityFamily::GeometricMean => closed(1.0 / (theta * (theta + 1.0))),
        VersatilityFamily::Quadratic0 => closed(quadratic0_information(theta)?),
        VersatilityFamily::Zeta0 => {
            let s = theta + 1.0;
            let l0 = log_weighted_zeta(s, 1.0, 0)?;
            let mu = log_weighted_zeta(s, 1.0, 1)? / l0;
            let m2 = log_weighted_zeta(s, 1.0, 2)? / l0;
            closed(m2 - mu * mu)
        }
        VersatilityFamily::ZetaTail0 => light_tail_score_sum(family, theta, 1_000_000),
    }
}

/// `I(c) = 2c ζ(2,c) - 2 - 1/c`, switching to its asymptotic series
/// `2 Σ B_{2k} c^{-2k}` for large `c` where the direct form cancels.
fn quadratic0_information(c: f64) -> Result<f64> {
    if c < 10.0 {
        return Ok(2.0 * c * hurwitz_zeta(2.0, c)? - 2.0 - 1.0 / c);
    }
    const BERNOULLI: [f64; 7] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
    ];
    let w = 1.0 / (c * c);
    let mut pow = w;
    let mut total = 0.0;
    for b in BERNOULLI {
        total += b * pow;
        pow *= w;
    }
    Ok(2.0 * total)
}

/// `Σ score(x)² f(x)` for a family with geometric tails, stopping once the
/// remaining mass is below `1e-15` and the last term is negligible.
fn light_tail_score_sum(family: VersatilityFamily, theta: f64, cap: usize) -> Result<FisherInfo> {
    let spec = family.spec(theta)?;
    let mut total = 0.0;
    let mut mass = 0.0;
    for x in 0..cap {
        let f = spec.pmf(x as i64)?;
        if f == 0.0 {
            // mass underflowed; the score ratio would be 0/0
            return Ok(FisherInfo { value: total, terms: x, capped: false });
        }
        let term = score(family, theta, x as i64)?.powi(2) * f;
        total += term;
        mass += f;
        if 1.0 - mass < 1e-15 && term <= 1e-18 * total {
            let tail = spec.survival(x as i64)?;
            if tail < 1e-15 {
                return Ok(FisherInfo { value: total, terms: x + 1, capped: false });
            }
        }
    }
    Ok(FisherInfo { value: total, terms: cap, capped: true })
}

/// `Σ score(x)^k f(x)` for `k ∈ {1, 2}`: the first `head` support points
/// explicitly, the rest in closed form (Zeta0, Quadratic0) or until the
/// remaining mass is negligible (the geometric-tailed families).
///
/// This is the direct definition that [`fisher_information`] short-cuts; it
/// serves as a cross-check and as the score-mean regularity test.
pub fn score_moment(family: VersatilityFamily, theta: f64, k: u32, head: usize) -> Result<FisherInfo> {
    check_theta(theta)?;
    if !(k == 1 || k == 2) {
        return domain(format!("score moment order must be 1 or 2, got {k}"));
    }
    match family {
        VersatilityFamily::GeometricOdds | VersatilityFamily::GeometricMean | VersatilityFamily::ZetaTail0 => {
            if k == 2 {
                return light_tail_score_sum(family, theta, head);
            }
            let spec = family.spec(theta)?;
            let mut total = 0.0;
            let mut mass = 0.0;
            for x in 0..head {
                let f = spec.pmf(x as i64)?;
                if f == 0.0 {
                    return Ok(FisherInfo { value: total, terms: x, capped: false });
                }
                total += score(family, theta, x as i64)? * f;
                mass += f;
                if 1.0 - mass < 1e-15 && spec.survival(x as i64)? < 1e-17 {
                    return Ok(FisherInfo { value: total, terms: x + 1, capped: false });
                }
            }
            Ok(FisherInfo { value: total, terms: head, capped: true })
        }
        VersatilityFamily::Zeta0 => {
            let s = theta + 1.0;
            let l0 = log_weighted_zeta(s, 1.0, 0)?;
            let mu = log_weighted_zeta(s, 1.0, 1)? / l0;
            let mut total = 0.0;
            for x in 0..head {
                let u = x as f64 + 1.0;
                let f = u.powf(-s) / l0;
                total += (mu - u.ln()).powi(k as i32) * f;
            }
            // remainder Σ_{u > head} (μ - ln u)^k u^{-s} / L0
            let t = head as f64 + 1.0;
            let r0 = log_weighted_zeta(s, t, 0)?;
            let r1 = log_weighted_zeta(s, t, 1)?;
            let tail = if k == 1 {
                mu * r0 - r1
            } else {
                mu * mu * r0 - 2.0 * mu * r1 + log_weighted_zeta(s, t, 2)?
            };
            Ok(FisherInfo { value: total + tail / l0, terms: head, capped: false })
        }
        VersatilityFamily::Quadratic0 => {
            let c = theta;
            let mut total = 0.0;
            for x in 0..head {
                let u = x as f64 + c;
                let f = c / (u * (u + 1.0));
                total += (1.0 / c - 1.0 / u - 1.0 / (u + 1.0)).powi(k as i32) * f;
            }
            // telescoping remainders from U = head + c onward:
            // Σ 1/(u(u+1)) = 1/U, Σ (2u+1)/(u²(u+1)²) = 1/U²,
            // Σ (2u+1)²/(u³(u+1)³) = 4/(3U³) - (1/3) Σ 1/(u³(u+1)³)
            let big_u = head as f64 + c;
            let tail = if k == 1 {
                1.0 / big_u - c / (big_u * big_u)
            } else {
                let sixth = 1.0 / (5.0 * big_u.powi(5));
                1.0 / (c * big_u) - 2.0 / (big_u * big_u) + c * (4.0 / (3.0 * big_u.powi(3)) - sixth / 3.0)
            };
            Ok(FisherInfo { value: total + tail, terms: head, capped: false })
        }
    }
}

/// `E[score]`, which must vanish for a regular family.
pub fn score_mean(family: VersatilityFamily, theta: f64) -> Result<f64> {
    Ok(score_moment(family, theta, 1, 100_000)?.value)
}

/// Number of Gauss–Hermite nodes used for the reported value.
pub const NODES: usize = 64;
/// Node count of the confirming re-run.
pub const GUARD_NODES: usize = 128;
/// Largest relative change tolerated between the two rules.
pub const GUARD_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct VersatilityReport {
    pub family: VersatilityFamily,
    /// `E[I(θ)]` under the lognormal prior.
    pub fisher_integral: f64,
    /// `sqrt(fisher_integral)`.
    pub v: f64,
    pub node_count: usize,
    /// The same measure from the guard rule.
    pub guard_v: f64,
    pub guard_node_count: usize,
}

/// `E[I(θ)]` for `θ = e^{√2 y}` under `n`-node Gauss–Hermite quadrature.
pub fn prior_mean_information(family: VersatilityFamily, n: usize) -> Result<f64> {
    let rule = GaussHermite::new(n).map_err(|e| Error::Domain(format!("Gauss-Hermite rule of degree {n}: {e}")))?;
    let mut failure = None;
    let integral = rule.integrate(|y| {
        let theta = (std::f64::consts::SQRT_2 * y).exp();
        match fisher_information(family, theta) {
            Ok(info) => info.value,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(integral / std::f64::consts::PI.sqrt())
}

/// The versatility measure of `family`, checked against a finer rule.
pub fn versatility_measure(family: VersatilityFamily) -> Result<VersatilityReport> {
    let coarse = prior_mean_information(family, NODES)?;
    let fine = prior_mean_information(family, GUARD_NODES)?;
    let (v, guard_v) = (coarse.sqrt(), fine.sqrt());
    if !((guard_v - v).abs() < GUARD_TOL * v) {
        return Err(Error::QuadratureUnstable {
            coarse: v,
            fine: guard_v,
            coarse_nodes: NODES,
            fine_nodes: GUARD_NODES,
        });
    }
    Ok(VersatilityReport {
        family,
        fisher_integral: coarse,
        v,
        node_count: NODES,
        guard_v,
        guard_node_count: GUARD_NODES,
    })
}

/// All five measures plus the average of the two Geometric0 values.
#[derive(Debug, Clone, PartialEq)]
pub struct VersatilityTable {
    pub reports: Vec<VersatilityReport>,
    pub geometric_average: f64,
}

impl VersatilityTable {
    pub fn get(&self, family: VersatilityFamily) -> Option<&VersatilityReport> {
        self.reports.iter().find(|r| r.family == family)
    }
}

pub fn versatility_table() -> Result<VersatilityTable> {
    let reports = VersatilityFamily::ALL
        .iter()
        .map(|&f| versatility_measure(f))
        .collect::<Result<Vec<_>>>()?;
    let geometric_average = 0.5 * (reports[0].v + reports[1].v);
    Ok(VersatilityTable { reports, geometric_average })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn closed_forms_against_score_sums() {
        for m in [0.25, 1.0, 4.0] {
            for family in [VersatilityFamily::GeometricOdds, VersatilityFamily::GeometricMean] {
                let closed = fisher_information(family, m).unwrap().value;
                let summed = score_moment(family, m, 2, 10_000_000).unwrap();
                assert!(!summed.capped);
                assert_relative_eq!(summed.value, closed, max_relative = 1e-8);
            }
        }
        assert_relative_eq!(fisher_information(VersatilityFamily::GeometricOdds, 1.0).unwrap().value, 0.5);
    }

    #[test]
    fn quadratic_closed_form_against_score_sum() {
        for c in [0.3, 1.0, 9.9, 10.0, 50.0] {
            let closed = fisher_information(VersatilityFamily::Quadratic0, c).unwrap().value;
            let summed = score_moment(VersatilityFamily::Quadratic0, c, 2, 20_000).unwrap().value;
            assert_relative_eq!(summed, closed, max_relative = 1e-9);
        }
        let q1 = fisher_information(VersatilityFamily::Quadratic0, 1.0).unwrap().value;
        assert!(q1 > 0.0 && q1.is_finite());
    }

    #[test]
    fn zeta0_closed_form_against_score_sum() {
        for b in [0.5, 2.0, 6.0] {
            let closed = fisher_information(VersatilityFamily::Zeta0, b).unwrap().value;
            let summed = score_moment(VersatilityFamily::Zeta0, b, 2, 5_000).unwrap().value;
            assert_relative_eq!(summed, closed, max_relative = 1e-9);
        }
    }

    #[test]
    fn zeta_tail0_score_against_finite_difference() {
        let h = 1e-6;
        for a in [0.1, 1.0, 5.0] {
            for x in [0, 1, 4, 12] {
                let lp = |a: f64| DistributionSpec::ZetaTail0 { a }.log_pmf(x).unwrap();
                let fd = (lp(a + h) - lp(a - h)) / (2.0 * h);
                let s = score(VersatilityFamily::ZetaTail0, a, x).unwrap();
                assert!((s - fd).abs() < 1e-6, "a={a} x={x}: {s} vs {fd}");
            }
        }
    }

    #[test]
    fn scores_have_zero_mean() {
        for family in VersatilityFamily::ALL {
            for theta in [0.5, 1.0, 3.0] {
                let m = score_mean(family, theta).unwrap();
                assert!(m.abs() <= 1e-8, "{family} θ={theta}: {m}");
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(fisher_information(VersatilityFamily::Zeta0, 0.0).is_err());
        assert!(fisher_information(VersatilityFamily::Quadratic0, f64::INFINITY).is_err());
        assert!(score(VersatilityFamily::ZetaTail0, 1.0, -1).is_err());
    }
}
