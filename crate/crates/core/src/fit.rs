//! Maximum-likelihood fitting of count histograms, the 5-bin χ² test, AIC
//! and the empirical hazard.

use std::fmt;
use std::str::FromStr;

use statrs::function::gamma::gamma_ur;

use crate::data::Region;
use crate::dist::DistributionSpec;
use crate::error::{domain, Error, Result};
use crate::optim::{brent_bounded, nelder_mead, NelderMeadOptions};

/// Observed frequencies of event counts `x = 0, 1, 2, ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountHistogram {
    freqs: Vec<u64>,
}

impl CountHistogram {
    /// `freqs[x]` is the number of observations equal to `x`.
    pub fn from_frequencies(freqs: &[u64]) -> Result<Self> {
        let mut freqs = freqs.to_vec();
        while freqs.last() == Some(&0) {
            freqs.pop();
        }
        if freqs.is_empty() {
            return Err(Error::InvalidHistogram("histogram has no observations".into()));
        }
        Ok(CountHistogram { freqs })
    }

    /// Builds a histogram from `(count, frequency)` pairs; a count may appear
    /// only once.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        let mut freqs: Vec<u64> = Vec::new();
        let mut seen: Vec<bool> = Vec::new();
        for (x, f) in pairs {
            let x = usize::try_from(x).map_err(|_| Error::InvalidHistogram(format!("count {x} too large")))?;
            if x > 10_000_000 {
                return Err(Error::InvalidHistogram(format!("count {x} too large")));
            }
            if x >= freqs.len() {
                freqs.resize(x + 1, 0);
                seen.resize(x + 1, false);
            }
            if seen[x] {
                return Err(Error::InvalidHistogram(format!("count {x} listed twice")));
            }
            seen[x] = true;
            freqs[x] = f;
        }
        Self::from_frequencies(&freqs)
    }

    /// Tallies raw observations.
    pub fn from_samples(samples: &[i64]) -> Result<Self> {
        let mut freqs: Vec<u64> = Vec::new();
        for &x in samples {
            if x < 0 {
                return Err(Error::InvalidHistogram(format!("negative count {x}")));
            }
            let x = x as usize;
            if x >= freqs.len() {
                freqs.resize(x + 1, 0);
            }
            freqs[x] += 1;
        }
        Self::from_frequencies(&freqs)
    }

    pub fn from_region(region: &Region) -> Self {
        Self::from_frequencies(&region.counts).expect("embedded rows are non-empty")
    }

    pub fn frequency(&self, x: u64) -> u64 {
        self.freqs.get(x as usize).copied().unwrap_or(0)
    }

    /// `(count, frequency)` for every count with positive frequency.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.freqs.iter().enumerate().filter(|(_, &f)| f > 0).map(|(x, &f)| (x as u64, f))
    }

    /// Number of observations `N`.
    pub fn total(&self) -> u64 {
        self.freqs.iter().sum()
    }

    pub fn max_count(&self) -> u64 {
        (self.freqs.len() - 1) as u64
    }

    /// `Σ x · freq(x)`.
    pub fn sum(&self) -> u64 {
        self.iter().map(|(x, f)| x * f).sum()
    }

    pub fn mean(&self) -> f64 {
        self.sum() as f64 / self.total() as f64
    }

    pub fn merge(&self, other: &CountHistogram) -> CountHistogram {
        let len = self.freqs.len().max(other.freqs.len());
        let freqs = (0..len as u64).map(|x| self.frequency(x) + other.frequency(x)).collect();
        CountHistogram { freqs }
    }
}

/// The four models compared on count data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FitFamily {
    Geometric0,
    ZeroInflatedGeometric0,
    NegativeBinomial0,
    ZetaTail0,
}

impl FitFamily {
    pub const ALL: [FitFamily; 4] = [
        FitFamily::Geometric0,
        FitFamily::ZeroInflatedGeometric0,
        FitFamily::NegativeBinomial0,
        FitFamily::ZetaTail0,
    ];

    pub fn param_count(self) -> usize {
        match self {
            FitFamily::Geometric0 | FitFamily::ZetaTail0 => 1,
            _ => 2,
        }
    }

    pub fn slug(self) -> &'static str {
        match self {
            FitFamily::Geometric0 => "geometric0",
            FitFamily::ZeroInflatedGeometric0 => "zig0",
            FitFamily::NegativeBinomial0 => "negbin0",
            FitFamily::ZetaTail0 => "zeta-tail0",
        }
    }
}

impl fmt::Display for FitFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for FitFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        match key.as_str() {
            "geometric0" | "geom0" | "geometric" => Ok(FitFamily::Geometric0),
            "zig0" | "zig" | "zeroinflatedgeometric0" | "zigeom0" => Ok(FitFamily::ZeroInflatedGeometric0),
            "negbin0" | "nb0" | "negativebinomial0" | "negbin" => Ok(FitFamily::NegativeBinomial0),
            "zetatail0" | "zt0" => Ok(FitFamily::ZetaTail0),
            _ => domain(format!(
                "unknown fit family '{s}' (expected geometric0, zig0, negbin0 or zeta-tail0)"
            )),
        }
    }
}

/// A fitted model.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub spec: DistributionSpec,
    pub loglik: f64,
    pub aic: f64,
    /// Objective evaluations used by the optimizer.
    pub iterations: usize,
    pub converged: bool,
}

/// One χ² bin.
#[derive(Debug, Clone, PartialEq)]
pub struct GofBin {
    pub label: String,
    pub observed: u64,
    pub expected: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GofReport {
    pub chi2: f64,
    pub df: u32,
    pub p_value: f64,
    pub bins: Vec<GofBin>,
    /// Set when some expected count is below 1.
    pub low_expected: bool,
}

/// `Σ_x freq(x) · ln f(x)`; `-inf` if any observation has zero probability.
pub fn log_likelihood(spec: &DistributionSpec, hist: &CountHistogram) -> Result<f64> {
    let mut total = 0.0;
    for (x, f) in hist.iter() {
        let lp = spec.log_pmf(x as i64)?;
        if lp == f64::NEG_INFINITY {
            return Ok(f64::NEG_INFINITY);
        }
        total += f as f64 * lp;
    }
    Ok(total)
}

/// `p̂ = N / (N + Σ x·freq(x))`.
pub fn geometric0_closed_form(hist: &CountHistogram) -> Result<f64> {
    if hist.sum() == 0 {
        return Err(Error::DegenerateData("all observations are zero, so p-hat = 1".into()));
    }
    let n = hist.total() as f64;
    Ok(n / (n + hist.sum() as f64))
}

fn logistic(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

const LOGIT_BOUND: f64 = 40.0;
const LOG_R_BOUND: f64 = 25.0;
/// Upper end of the `a` search range.
const A_MAX: f64 = 1e6;
const XATOL: f64 = 1e-10;
const SCALAR_MAX_EVALS: usize = 500;

/// Fits `family` to `hist` by maximum likelihood on a transformed scale:
/// logit for probabilities, log for `r`, `ln(1+a)` for `a`.
pub fn mle_fit(family: FitFamily, hist: &CountHistogram) -> Result<FitResult> {
    if hist.sum() == 0 {
        return Err(Error::DegenerateData(format!(
            "all {} observations are zero; the {family} MLE lies on the parameter boundary",
            hist.total()
        )));
    }
    let nll = |spec: DistributionSpec| match log_likelihood(&spec, hist) {
        Ok(v) if v.is_finite() => -v,
        _ => f64::INFINITY,
    };
    let p_start = geometric0_closed_form(hist)?;
    let k = family.param_count();

    let (spec, iterations, converged) = match family {
        FitFamily::Geometric0 => {
            let m = brent_bounded(
                |u| nll(DistributionSpec::Geometric0 { p: logistic(u) }),
                -LOGIT_BOUND,
                LOGIT_BOUND,
                XATOL,
                SCALAR_MAX_EVALS,
            )?;
            // Near the optimum the log-likelihood is flat below its rounding
            // noise. Refine on the exact difference from the first-pass point.
            let (n, total) = (hist.total() as f64, hist.sum() as f64);
            let (u0, p0) = (m.x[0], logistic(m.x[0]));
            // Searching over the offset keeps Brent's relative tolerance negligible.
            let rel_nll = |du: f64| {
                let dp = logistic(u0 + du) - p0;
                -(n * (dp / p0).ln_1p() + total * (-dp / (1.0 - p0)).ln_1p())
            };
            let width = 1e-4 * (1.0 + u0.abs());
            let r = brent_bounded(rel_nll, -width, width, XATOL, SCALAR_MAX_EVALS)?;
            let u = if rel_nll(r.x[0]) <= 0.0 { u0 + r.x[0] } else { u0 };
            (DistributionSpec::Geometric0 { p: logistic(u) }, m.evaluations + r.evaluations, m.converged && r.converged)
        }
        FitFamily::ZetaTail0 => {
            let m = brent_bounded(
                |u| nll(DistributionSpec::ZetaTail0 { a: u.exp_m1() }),
                0.0,
                A_MAX.ln_1p(),
                XATOL,
                SCALAR_MAX_EVALS,
            )?;
            (DistributionSpec::ZetaTail0 { a: m.x[0].exp_m1() }, m.evaluations, m.converged)
        }
        FitFamily::ZeroInflatedGeometric0 => {
            let to_spec = |u: &[f64]| DistributionSpec::ZeroInflatedGeometric0 { p: logistic(u[0]), pi0: logistic(u[1]) };
            let m = nelder_mead(
                |u| nll(to_spec(u)),
                &[logit(p_start), logit(0.1)],
                &[-LOGIT_BOUND, -LOGIT_BOUND],
                &[LOGIT_BOUND, LOGIT_BOUND],
                &NelderMeadOptions::default(),
            )?;
            (to_spec(&m.x), m.evaluations, m.converged)
        }
        FitFamily::NegativeBinomial0 => {
            let to_spec = |u: &[f64]| DistributionSpec::NegativeBinomial0 { r: u[0].exp(), p: logistic(u[1]) };
            let m = nelder_mead(
                |u| nll(to_spec(u)),
                &[0.0, logit(p_start)],
                &[-LOG_R_BOUND, -LOGIT_BOUND],
                &[LOG_R_BOUND, LOGIT_BOUND],
                &NelderMeadOptions::default(),
            )?;
            (to_spec(&m.x), m.evaluations, m.converged)
        }
    };
    let loglik = log_likelihood(&spec, hist)?;
    Ok(FitResult { spec, loglik, aic: aic(k, loglik), iterations, converged })
}

/// `2k - 2·loglik`.
pub fn aic(k: usize, loglik: f64) -> f64 {
    2.0 * k as f64 - 2.0 * loglik
}

/// χ² test on five bins: the first four support points and everything above.
/// Degrees of freedom are `4 - k` with `k` the parameter count of `spec`.
pub fn chi_square_gof(spec: &DistributionSpec, hist: &CountHistogram) -> Result<GofReport> {
    let origin = spec.origin();
    let below: u64 = hist.iter().filter(|&(x, _)| (x as i64) < origin).map(|(_, f)| f).sum();
    if below > 0 {
        return Err(Error::InvalidHistogram(format!(
            "{below} observations fall below the support origin {origin} of {spec}"
        )));
    }
    let k = spec.param_count() as u32;
    if k >= 4 {
        return domain(format!("{spec} has too many parameters for a 5-bin test"));
    }
    let df = 4 - k;
    let n = hist.total() as f64;
    let mut bins = Vec::with_capacity(5);
    for j in 0..4 {
        let x = origin + j;
        bins.push(GofBin {
            label: x.to_string(),
            observed: hist.frequency(x as u64),
            expected: n * spec.pmf(x)?,
        });
    }
    let top = origin + 4;
    bins.push(GofBin {
        label: format!("{top}+"),
        observed: hist.iter().filter(|&(x, _)| x as i64 >= top).map(|(_, f)| f).sum(),
        expected: n * spec.survival(top - 1)?,
    });
    let chi2: f64 = bins
        .iter()
        .map(|b| {
            let d = b.observed as f64 - b.expected;
            d * d / b.expected
        })
        .sum();
    let low_expected = bins.iter().any(|b| b.expected < 1.0);
    Ok(GofReport { chi2, df, p_value: chi2_sf(chi2, df)?, bins, low_expected })
}

/// Upper tail of the χ² law, `Q(df/2, x/2)`.
pub fn chi2_sf(x: f64, df: u32) -> Result<f64> {
    if df == 0 {
        return domain("chi-square degrees of freedom must be positive");
    }
    if !(x >= 0.0) {
        return domain(format!("chi-square statistic must be >= 0, got {x}"));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(gamma_ur(df as f64 / 2.0, x / 2.0))
}

/// `#{X = x} / #{X > x}`.
pub fn empirical_hazard(hist: &CountHistogram, x: u64) -> Result<f64> {
    let above: u64 = hist.iter().filter(|&(y, _)| y > x).map(|(_, f)| f).sum();
    if above == 0 {
        return Err(Error::UndefinedHazard(x));
    }
    Ok(hist.frequency(x) as f64 / above as f64)
}

/// One row of a model comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelFit {
    pub family: FitFamily,
    pub fit: FitResult,
    pub gof: GofReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    /// In [`FitFamily::ALL`] order.
    pub models: Vec<ModelFit>,
    /// Index of the highest χ² p-value.
    pub best_p: usize,
    /// Index of the lowest AIC.
    pub best_aic: usize,
}

/// Fits the given families and marks the best by p-value and by AIC.
pub fn compare_families(hist: &CountHistogram, families: &[FitFamily]) -> Result<Comparison> {
    if families.is_empty() {
        return domain("no families to compare");
    }
    let models = families
        .iter()
        .map(|&family| {
            let fit = mle_fit(family, hist)?;
            let gof = chi_square_gof(&fit.spec, hist)?;
            Ok(ModelFit { family, fit, gof })
        })
        .collect::<Result<Vec<_>>>()?;
    let best_p = (0..models.len())
        .max_by(|&i, &j| models[i].gof.p_value.total_cmp(&models[j].gof.p_value))
        .unwrap();
    let best_aic = (0..models.len())
        .min_by(|&i, &j| models[i].fit.aic.total_cmp(&models[j].fit.aic))
        .unwrap();
    Ok(Comparison { models, best_p, best_aic })
}

/// [`compare_families`] over all four families.
pub fn compare_models(hist: &CountHistogram) -> Result<Comparison> {
    compare_families(hist, &FitFamily::ALL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::find_region;
    use approx::assert_relative_eq;

    fn yeongcheon() -> CountHistogram {
        CountHistogram::from_region(find_region("yeongcheon").unwrap())
    }

    #[test]
    fn histogram_construction() {
        let h = CountHistogram::from_pairs([(2, 5), (0, 3)]).unwrap();
        assert_eq!(h.total(), 8);
        assert_eq!(h.frequency(1), 0);
        assert_eq!(h.sum(), 10);
        assert!(CountHistogram::from_pairs([(1, 2), (1, 3)]).is_err());
        assert!(CountHistogram::from_frequencies(&[0, 0]).is_err());
        assert!(CountHistogram::from_samples(&[1, -1]).is_err());
        assert_eq!(CountHistogram::from_samples(&[0, 2, 2]).unwrap(), CountHistogram::from_pairs([(0, 1), (2, 2)]).unwrap());
    }

    #[test]
    fn geometric_loglik_by_hand() {
        let spec = DistributionSpec::Geometric0 { p: 6.0 / 7.0 };
        let ll = log_likelihood(&spec, &yeongcheon()).unwrap();
        let expected = 384.0 * (6.0f64 / 7.0).ln() + 64.0 * (1.0f64 / 7.0).ln();
        assert_relative_eq!(ll, expected, max_relative = 1e-13);
        assert!((ll + 183.73).abs() < 0.01);
    }

    #[test]
    fn zero_probability_gives_negative_infinity() {
        let h = CountHistogram::from_frequencies(&[3, 1]).unwrap();
        let spec = DistributionSpec::ZetaTail { a: 1.0 };
        assert_eq!(log_likelihood(&spec, &h).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn loglik_is_additive() {
        let a = CountHistogram::from_frequencies(&[10, 4, 1]).unwrap();
        let b = CountHistogram::from_frequencies(&[7, 0, 2, 1]).unwrap();
        let spec = DistributionSpec::ZetaTail0 { a: 0.8 };
        let sum = log_likelihood(&spec, &a).unwrap() + log_likelihood(&spec, &b).unwrap();
        assert_relative_eq!(log_likelihood(&spec, &a.merge(&b)).unwrap(), sum, max_relative = 1e-14);
    }

    #[test]
    fn geometric_fit_matches_closed_form() {
        let h = yeongcheon();
        assert_relative_eq!(geometric0_closed_form(&h).unwrap(), 6.0 / 7.0, max_relative = 1e-15);
        let fit = mle_fit(FitFamily::Geometric0, &h).unwrap();
        let DistributionSpec::Geometric0 { p } = fit.spec else { panic!() };
        assert!((p - 6.0 / 7.0).abs() < 1e-9, "{p}");
        assert!((fit.aic - 369.46).abs() < 0.005);
    }

    #[test]
    fn all_zero_data_is_degenerate() {
        let h = CountHistogram::from_frequencies(&[12]).unwrap();
        for family in FitFamily::ALL {
            assert!(matches!(mle_fit(family, &h), Err(Error::DegenerateData(_))));
        }
    }

    #[test]
    fn chi2_tail_closed_forms() {
        for x in [0.0, 0.3, 2.0, 9.5] {
            assert_relative_eq!(chi2_sf(x, 2).unwrap(), (-x / 2.0).exp(), max_relative = 1e-13);
            assert_relative_eq!(chi2_sf(x, 4).unwrap(), (-x / 2.0).exp() * (1.0 + x / 2.0), max_relative = 1e-13);
        }
        assert!(chi2_sf(1.0, 0).is_err());
        assert!(chi2_sf(-1.0, 3).is_err());
    }

    #[test]
    fn chi2_tail_against_quadrature() {
        // ∫_x^∞ of the χ²₃ density sqrt(t) e^{-t/2} / (sqrt(2π)), by Simpson on a long range
        let x: f64 = 7.8147;
        let density = |t: f64| t.sqrt() * (-t / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let (hi, n) = (x + 80.0, 200_000);
        let h = (hi - x) / n as f64;
        let mut s = density(x) + density(hi);
        for i in 1..n {
            s += density(x + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        let oracle = s * h / 3.0;
        assert!((chi2_sf(x, 3).unwrap() - oracle).abs() < 1e-9);
        assert!((oracle - 0.05).abs() < 1e-4);
    }

    #[test]
    fn gof_bins_cover_everything() {
        let h = yeongcheon();
        let report = chi_square_gof(&DistributionSpec::Geometric0 { p: 6.0 / 7.0 }, &h).unwrap();
        assert_eq!(report.df, 3);
        assert_eq!(report.bins.len(), 5);
        assert_eq!(report.bins.iter().map(|b| b.observed).sum::<u64>(), 384);
        let expected: f64 = report.bins.iter().map(|b| b.expected).sum();
        assert!((expected - 384.0).abs() < 1e-9 * 384.0);
        assert!(report.low_expected);
        assert!((report.p_value - 0.9552).abs() < 1e-4);
    }

    #[test]
    fn empirical_hazard_examples() {
        let h = yeongcheon();
        assert_relative_eq!(empirical_hazard(&h, 0).unwrap(), 328.0 / 56.0, max_relative = 1e-15);
        assert_eq!(empirical_hazard(&h, 3), Err(Error::UndefinedHazard(3)));
    }

    #[test]
    fn family_names_parse() {
        for f in FitFamily::ALL {
            assert_eq!(f.slug().parse::<FitFamily>().unwrap(), f);
        }
        assert_eq!("ZetaTail0".parse::<FitFamily>().unwrap(), FitFamily::ZetaTail0);
        assert!("poisson".parse::<FitFamily>().is_err());
    }
}
