//! The distribution catalog.
//!
//! Every operation dispatches on a [`DistributionSpec`]. The Zeta Tail
//! families are evaluated through Hurwitz zeta; the comparator families use
//! their closed forms where they exist and truncated expectation sums where
//! they do not.

use std::fmt;

use statrs::function::beta::beta_reg;
use statrs::function::gamma::ln_gamma;

use crate::error::{domain, Error, Result};
use crate::specfun::{binomial, digamma, factorial, hurwitz_zeta, riemann_zeta, stirling2};

/// Lower end of the sample space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Support {
    /// `{1, 2, 3, ...}`
    OneBased,
    /// `{0, 1, 2, ...}`
    ZeroBased,
}

impl Support {
    pub fn origin(self) -> i64 {
        match self {
            Support::OneBased => 1,
            Support::ZeroBased => 0,
        }
    }
}

/// A distribution family together with its parameter values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistributionSpec {
    /// `f(x) = (a+1) ζ(x+1, a+2)` on `ℤ⁺`.
    ZetaTail { a: f64 },
    /// `f(x) = (a+1) ζ(x+2, a+2)` on `ℤ₀⁺`.
    ZetaTail0 { a: f64 },
    /// `f(x) = p (1-p)^x` on `ℤ₀⁺`.
    Geometric0 { p: f64 },
    /// Geometric0 with an extra point mass `pi0` at zero.
    ZeroInflatedGeometric0 { p: f64, pi0: f64 },
    /// `f(x) = Γ(x+r)/(Γ(r) x!) p^r (1-p)^x` on `ℤ₀⁺`.
    NegativeBinomial0 { r: f64, p: f64 },
    /// `f(x) = (x+1)^{-(b+1)} / ζ(b+1)` on `ℤ₀⁺`.
    Zeta0 { b: f64 },
    /// `f(x) = c / ((x+c)(x+c+1))` on `ℤ₀⁺`.
    Quadratic0 { c: f64 },
    /// Sum of `r_count` independent Zeta Tail(a) variables.
    GeneralizedZetaTail { r_count: u32, a: f64 },
}

/// Relative tolerance used to stop forward tail sums.
const TAIL_REL_TOL: f64 = 1e-17;
/// Largest number of terms any truncated expectation sum may use.
const SUM_CAP: usize = 10_000_000;

fn check_unit_open(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        domain(format!("{name} must lie in (0, 1), got {v}"))
    }
}

fn check_a(a: f64) -> Result<()> {
    if a >= 0.0 && a.is_finite() {
        Ok(())
    } else {
        domain(format!("a must be finite and >= 0, got {a}"))
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        domain(format!("{name} must be finite and > 0, got {v}"))
    }
}

impl DistributionSpec {
    pub fn validate(&self) -> Result<()> {
        use DistributionSpec::*;
        match *self {
            ZetaTail { a } | ZetaTail0 { a } => check_a(a),
            Geometric0 { p } => check_unit_open("p", p),
            ZeroInflatedGeometric0 { p, pi0 } => {
                check_unit_open("p", p)?;
                check_unit_open("pi0", pi0)
            }
            NegativeBinomial0 { r, p } => {
                check_positive("r", r)?;
                check_unit_open("p", p)
            }
            Zeta0 { b } => check_positive("b", b),
            Quadratic0 { c } => check_positive("c", c),
            GeneralizedZetaTail { r_count, a } => {
                if r_count == 0 {
                    return domain("r_count must be at least 1");
                }
                check_a(a)
            }
        }
    }

    pub fn name(&self) -> &'static str {
        use DistributionSpec::*;
        match self {
            ZetaTail { .. } => "ZetaTail",
            ZetaTail0 { .. } => "ZetaTail0",
            Geometric0 { .. } => "Geometric0",
            ZeroInflatedGeometric0 { .. } => "ZeroInflatedGeometric0",
            NegativeBinomial0 { .. } => "NegativeBinomial0",
            Zeta0 { .. } => "Zeta0",
            Quadratic0 { .. } => "Quadratic0",
            GeneralizedZetaTail { .. } => "GeneralizedZetaTail",
        }
    }

    /// Number of free parameters (used for AIC and χ² degrees of freedom).
    pub fn param_count(&self) -> usize {
        use DistributionSpec::*;
        match self {
            ZeroInflatedGeometric0 { .. } | NegativeBinomial0 { .. } | GeneralizedZetaTail { .. } => 2,
            _ => 1,
        }
    }

    /// Named parameter values in display order.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        use DistributionSpec::*;
        match *self {
            ZetaTail { a } | ZetaTail0 { a } => vec![("a", a)],
            Geometric0 { p } => vec![("p", p)],
            ZeroInflatedGeometric0 { p, pi0 } => vec![("p", p), ("pi0", pi0)],
            NegativeBinomial0 { r, p } => vec![("r", r), ("p", p)],
            Zeta0 { b } => vec![("b", b)],
            Quadratic0 { c } => vec![("c", c)],
            GeneralizedZetaTail { r_count, a } => vec![("r", r_count as f64), ("a", a)],
        }
    }

    pub fn support(&self) -> Support {
        use DistributionSpec::*;
        match self {
            ZetaTail { .. } | GeneralizedZetaTail { .. } => Support::OneBased,
            _ => Support::ZeroBased,
        }
    }

    /// Smallest value with positive mass.
    pub fn origin(&self) -> i64 {
        match *self {
            DistributionSpec::GeneralizedZetaTail { r_count, .. } => r_count as i64,
            _ => self.support().origin(),
        }
    }

    /// Returns a closure evaluating the pmf with normalizers precomputed.
    /// Parameters must already be validated.
    fn kernel(&self) -> Result<Box<dyn Fn(i64) -> f64>> {
        use DistributionSpec::*;
        self.validate()?;
        let origin = self.origin();
        Ok(match *self {
            ZetaTail { a } => Box::new(move |x| {
                if x < origin {
                    0.0
                } else {
                    (a + 1.0) * hurwitz_zeta(x as f64 + 1.0, a + 2.0).unwrap_or(f64::NAN)
                }
            }),
            ZetaTail0 { a } => Box::new(move |x| {
                if x < 0 {
                    0.0
                } else {
                    (a + 1.0) * hurwitz_zeta(x as f64 + 2.0, a + 2.0).unwrap_or(f64::NAN)
                }
            }),
            Zeta0 { b } => {
                let norm = riemann_zeta(b + 1.0)?;
                Box::new(move |x| {
                    if x < 0 {
                        0.0
                    } else {
                        (x as f64 + 1.0).powf(-(b + 1.0)) / norm
                    }
                })
            }
            GeneralizedZetaTail { r_count, a } => {
                let spec = *self;
                let _ = (r_count, a);
                Box::new(move |x| spec.gzt_pmf(x).unwrap_or(f64::NAN))
            }
            _ => {
                let spec = *self;
                Box::new(move |x| spec.log_pmf_closed(x).exp())
            }
        })
    }

    /// Closed-form log-pmf for the families that have one.
    fn log_pmf_closed(&self, x: i64) -> f64 {
        use DistributionSpec::*;
        if x < self.origin() {
            return f64::NEG_INFINITY;
        }
        let xf = x as f64;
        match *self {
            Geometric0 { p } => p.ln() + xf * (-p).ln_1p(),
            ZeroInflatedGeometric0 { p, pi0 } => {
                if x == 0 {
                    (pi0 + (1.0 - pi0) * p).ln()
                } else {
                    (-pi0).ln_1p() + p.ln() + xf * (-p).ln_1p()
                }
            }
            NegativeBinomial0 { r, p } => {
                ln_gamma(xf + r) - ln_gamma(r) - ln_gamma(xf + 1.0) + r * p.ln() + xf * (-p).ln_1p()
            }
            Quadratic0 { c } => c.ln() - (xf + c).ln() - (xf + c + 1.0).ln(),
            _ => unreachable!("no closed-form log pmf for {}", self.name()),
        }
    }

    /// Probability mass at `x`; exactly zero outside the support.
    pub fn pmf(&self, x: i64) -> Result<f64> {
        use DistributionSpec::*;
        self.validate()?;
        match *self {
            ZetaTail { a } => {
                if x < 1 {
                    return Ok(0.0);
                }
                Ok((a + 1.0) * hurwitz_zeta(x as f64 + 1.0, a + 2.0)?)
            }
            ZetaTail0 { a } => {
                if x < 0 {
                    return Ok(0.0);
                }
                Ok((a + 1.0) * hurwitz_zeta(x as f64 + 2.0, a + 2.0)?)
            }
            Zeta0 { b } => {
                if x < 0 {
                    return Ok(0.0);
                }
                Ok((x as f64 + 1.0).powf(-(b + 1.0)) / riemann_zeta(b + 1.0)?)
            }
            GeneralizedZetaTail { .. } => self.gzt_pmf(x),
            _ => Ok(self.log_pmf_closed(x).exp()),
        }
    }

    /// Natural log of the pmf; `-inf` outside the support.
    pub fn log_pmf(&self, x: i64) -> Result<f64> {
        use DistributionSpec::*;
        self.validate()?;
        match *self {
            Geometric0 { .. } | ZeroInflatedGeometric0 { .. } | NegativeBinomial0 { .. } | Quadratic0 { .. } => {
                Ok(self.log_pmf_closed(x))
            }
            Zeta0 { b } => {
                if x < 0 {
                    return Ok(f64::NEG_INFINITY);
                }
                Ok(-(b + 1.0) * (x as f64 + 1.0).ln() - riemann_zeta(b + 1.0)?.ln())
            }
            _ => Ok(self.pmf(x)?.ln()),
        }
    }

    /// `P(X ≤ x)`.
    pub fn cdf(&self, x: i64) -> Result<f64> {
        use DistributionSpec::*;
        self.validate()?;
        if x < self.origin() {
            return Ok(0.0);
        }
        let xf = x as f64;
        match *self {
            Geometric0 { p } => Ok(-((xf + 1.0) * (-p).ln_1p()).exp_m1()),
            Quadratic0 { c } => Ok((xf + 1.0) / (xf + 1.0 + c)),
            ZeroInflatedGeometric0 { .. } | NegativeBinomial0 { .. } | Zeta0 { .. } => {
                Ok(1.0 - self.survival(x)?)
            }
            _ => {
                // running sum of the pmf, smallest terms first
                let f = self.kernel()?;
                let mut terms: Vec<f64> = (self.origin()..=x).map(&f).collect();
                terms.reverse();
                Ok(terms.iter().sum::<f64>().min(1.0))
            }
        }
    }

    /// `P(X > x)`, evaluated as a forward tail sum (or closed form) rather
    /// than `1 - cdf` so that it stays accurate deep in the tail.
    pub fn survival(&self, x: i64) -> Result<f64> {
        use DistributionSpec::*;
        self.validate()?;
        if x < self.origin() {
            return Ok(1.0);
        }
        let xf = x as f64;
        match *self {
            Geometric0 { p } => Ok(((xf + 1.0) * (-p).ln_1p()).exp()),
            ZeroInflatedGeometric0 { p, pi0 } => Ok((1.0 - pi0) * ((xf + 1.0) * (-p).ln_1p()).exp()),
            NegativeBinomial0 { r, p } => Ok(beta_reg(xf + 1.0, r, 1.0 - p)),
            Zeta0 { b } => Ok(hurwitz_zeta(b + 1.0, xf + 2.0)? / riemann_zeta(b + 1.0)?),
            Quadratic0 { c } => Ok(c / (xf + 1.0 + c)),
            ZetaTail { .. } | ZetaTail0 { .. } => {
                let f = self.kernel()?;
                let mut acc = 0.0;
                let mut k = x + 1;
                loop {
                    let term = f(k);
                    acc += term;
                    if term <= TAIL_REL_TOL * acc || term == 0.0 {
                        return Ok(acc);
                    }
                    k += 1;
                    if (k - x) as usize > SUM_CAP {
                        return Err(Error::NonConvergence { terms: SUM_CAP });
                    }
                }
            }
            GeneralizedZetaTail { r_count, a } => {
                let mut len = (x as usize + 1) + 64;
                loop {
                    let table = gzt_table(r_count, a, len)?;
                    let tail: f64 = table[x as usize + 1..].iter().rev().sum();
                    let last = *table.last().unwrap();
                    if last <= TAIL_REL_TOL * tail || tail == 0.0 {
                        return Ok(tail);
                    }
                    len *= 2;
                    if len > 1 << 16 {
                        return Err(Error::NonConvergence { terms: len });
                    }
                }
            }
        }
    }

    /// Discrete hazard `f(x) / (1 - F(x))`.
    pub fn hazard(&self, x: i64) -> Result<f64> {
        if x < self.origin() {
            return domain(format!("hazard requested at x = {x}, below the support origin {}", self.origin()));
        }
        if let DistributionSpec::Geometric0 { p } = *self {
            self.validate()?;
            return Ok(p / (1.0 - p));
        }
        let s = self.survival(x)?;
        if s <= 0.0 {
            return Err(Error::SurvivalUnderflow(x));
        }
        Ok(self.pmf(x)? / s)
    }

    /// `E[(X)_ν]`, the ν-th factorial moment.
    pub fn factorial_moment(&self, nu: u32) -> Result<f64> {
        self.validate()?;
        if nu == 0 || nu > 20 {
            return domain(format!("factorial moment order must be in 1..=20, got {nu}"));
        }
        match *self {
            DistributionSpec::ZetaTail { a } => {
                Ok((a + 1.0) * factorial(nu) * hurwitz_zeta(nu as f64 + 1.0, a + 1.0)?)
            }
            _ => {
                if nu > MAX_RAW_MOMENT {
                    return domain(format!("factorial moment order {nu} needs raw moments above {MAX_RAW_MOMENT}"));
                }
                // (X)_ν as a polynomial in X, then expectation term by term
                let coeffs = falling_factorial_poly(nu, 0.0);
                let mut total = 0.0;
                for (j, c) in coeffs.iter().enumerate() {
                    if *c != 0.0 {
                        total += c * self.raw_moment(j as u32)?;
                    }
                }
                Ok(total)
            }
        }
    }

    /// `E[X^κ]` for `κ ≤ 6`.
    pub fn raw_moment(&self, kappa: u32) -> Result<f64> {
        use DistributionSpec::*;
        self.validate()?;
        if kappa > MAX_RAW_MOMENT {
            return domain(format!("raw moment order must be <= {MAX_RAW_MOMENT}, got {kappa}"));
        }
        if kappa == 0 {
            return Ok(1.0);
        }
        match *self {
            ZetaTail { a } => zeta_tail_raw_moment(a, kappa),
            ZetaTail0 { a } => {
                // E[(X-1)^κ] by binomial expansion of the one-based moments
                let mut total = 0.0;
                for j in 0..=kappa {
                    let sign = if (kappa - j).is_multiple_of(2) { 1.0 } else { -1.0 };
                    let m = if j == 0 { 1.0 } else { zeta_tail_raw_moment(a, j)? };
                    total += sign * binomial(kappa, j) * m;
                }
                Ok(total)
            }
            Geometric0 { p } => Ok(negbin_raw_moment(1.0, p, kappa)),
            ZeroInflatedGeometric0 { p, pi0 } => Ok((1.0 - pi0) * negbin_raw_moment(1.0, p, kappa)),
            NegativeBinomial0 { r, p } => Ok(negbin_raw_moment(r, p, kappa)),
            Zeta0 { b } => {
                let s = b + 1.0;
                if s - kappa as f64 <= 1.0 {
                    return Err(Error::Divergent(format!(
                        "Zeta0 moment of order {kappa} needs b > {kappa}, got b = {b}"
                    )));
                }
                // X = Y - 1 with E[Y^j] = ζ(s - j) / ζ(s)
                let norm = riemann_zeta(s)?;
                let mut total = 0.0;
                for j in 0..=kappa {
                    let sign = if (kappa - j).is_multiple_of(2) { 1.0 } else { -1.0 };
                    let m = if j == 0 { 1.0 } else { riemann_zeta(s - j as f64)? / norm };
                    total += sign * binomial(kappa, j) * m;
                }
                Ok(total)
            }
            Quadratic0 { c } => Err(Error::Divergent(format!(
                "Quadratic0(c = {c}) has no finite moments of order >= 1"
            ))),
            GeneralizedZetaTail { r_count, a } => {
                // moments of a sum of independent copies by repeated binomial convolution
                let base: Vec<f64> = (0..=kappa)
                    .map(|j| if j == 0 { Ok(1.0) } else { zeta_tail_raw_moment(a, j) })
                    .collect::<Result<_>>()?;
                let mut acc = base.clone();
                for _ in 1..r_count {
                    acc = (0..=kappa)
                        .map(|n| (0..=n).map(|j| binomial(n, j) * acc[j as usize] * base[(n - j) as usize]).sum())
                        .collect();
                }
                Ok(acc[kappa as usize])
            }
        }
    }

    pub fn mean(&self) -> Result<f64> {
        use DistributionSpec::*;
        self.validate()?;
        match *self {
            ZetaTail { a } => Ok((a + 1.0) * hurwitz_zeta(2.0, a + 1.0)?),
            ZetaTail0 { a } => Ok((a + 1.0) * hurwitz_zeta(2.0, a + 1.0)? - 1.0),
            Geometric0 { p } => Ok((1.0 - p) / p),
            NegativeBinomial0 { r, p } => Ok(r * (1.0 - p) / p),
            GeneralizedZetaTail { r_count, a } => {
                Ok(r_count as f64 * (a + 1.0) * hurwitz_zeta(2.0, a + 1.0)?)
            }
            _ => self.raw_moment(1),
        }
    }

    pub fn variance(&self) -> Result<f64> {
        use DistributionSpec::*;
        self.validate()?;
        match *self {
            ZetaTail { a } | ZetaTail0 { a } => zeta_tail_variance(a),
            GeneralizedZetaTail { r_count, a } => Ok(r_count as f64 * zeta_tail_variance(a)?),
            Geometric0 { p } => Ok((1.0 - p) / (p * p)),
            NegativeBinomial0 { r, p } => Ok(r * (1.0 - p) / (p * p)),
            _ => {
                let m1 = self.raw_moment(1)?;
                let m2 = self.raw_moment(2)?;
                Ok(m2 - m1 * m1)
            }
        }
    }

    /// `Var[X]/E[X] - 1`.
    pub fn overdispersion_index(&self) -> Result<f64> {
        let mean = self.mean()?;
        if !(mean > 0.0) || !mean.is_finite() {
            return domain(format!("overdispersion index needs a positive finite mean, got {mean}"));
        }
        Ok(self.variance()? / mean - 1.0)
    }

    /// Probability generating function `E[z^X]` for `|z| < 1`.
    pub fn pgf(&self, z: f64) -> Result<f64> {
        use DistributionSpec::*;
        self.validate()?;
        if !(z.abs() < 1.0) {
            return domain(format!("pgf requires |z| < 1, got z = {z}"));
        }
        match *self {
            ZetaTail { a } => zeta_tail_pgf(a, z),
            ZetaTail0 { a } => {
                if z.abs() < 1e-3 {
                    self.truncated_expectation(|x| z.powi(x as i32))
                } else {
                    Ok(zeta_tail_pgf(a, z)? / z)
                }
            }
            GeneralizedZetaTail { r_count, a } => Ok(zeta_tail_pgf(a, z)?.powi(r_count as i32)),
            Geometric0 { p } => Ok(p / (1.0 - (1.0 - p) * z)),
            ZeroInflatedGeometric0 { p, pi0 } => Ok(pi0 + (1.0 - pi0) * p / (1.0 - (1.0 - p) * z)),
            NegativeBinomial0 { r, p } => Ok((p / (1.0 - (1.0 - p) * z)).powf(r)),
            Zeta0 { .. } | Quadratic0 { .. } => self.truncated_expectation(|x| z.powi(x as i32)),
        }
    }

    /// Moment generating function `E[e^{tX}]`.
    ///
    /// The Laplace transform at `s` is `mgf(-s)`.
    pub fn mgf(&self, t: f64) -> Result<f64> {
        use DistributionSpec::*;
        self.validate()?;
        if !t.is_finite() {
            return domain(format!("mgf requires finite t, got {t}"));
        }
        let z = t.exp();
        match *self {
            ZetaTail { a } | ZetaTail0 { a } | GeneralizedZetaTail { a, .. } => {
                let abscissa = (a + 2.0).ln();
                if t >= abscissa - 1e-12 {
                    return domain(format!("mgf requires t < ln(a+2) = {abscissa}, got t = {t}"));
                }
                let m = (a + 1.0) * (digamma(a + 2.0)? - digamma(a + 2.0 - z)?);
                Ok(match *self {
                    ZetaTail0 { .. } => m / z,
                    GeneralizedZetaTail { r_count, .. } => m.powi(r_count as i32),
                    _ => m,
                })
            }
            Geometric0 { p } | ZeroInflatedGeometric0 { p, .. } | NegativeBinomial0 { p, .. } => {
                let q = (1.0 - p) * z;
                if q >= 1.0 {
                    return domain(format!("mgf requires t < -ln(1-p) = {}, got t = {t}", -(-p).ln_1p()));
                }
                let g = p / (1.0 - q);
                Ok(match *self {
                    ZeroInflatedGeometric0 { pi0, .. } => pi0 + (1.0 - pi0) * g,
                    NegativeBinomial0 { r, .. } => g.powf(r),
                    _ => g,
                })
            }
            Zeta0 { .. } | Quadratic0 { .. } => {
                if t > 0.0 {
                    return domain(format!("mgf of {} is infinite for t > 0", self.name()));
                }
                if t == 0.0 {
                    return Ok(1.0);
                }
                self.pgf(z)
            }
        }
    }

    /// Characteristic function `E[e^{iωX}]` as `(real, imaginary)` parts,
    /// evaluated as a truncated expectation.
    pub fn cf(&self, omega: f64) -> Result<(f64, f64)> {
        if !omega.is_finite() {
            return domain(format!("cf requires finite omega, got {omega}"));
        }
        let re = self.truncated_expectation(|x| (omega * x as f64).cos())?;
        let im = self.truncated_expectation(|x| (omega * x as f64).sin())?;
        Ok((re, im))
    }

    /// Mode of the pmf (the smaller one when two values tie).
    pub fn mode(&self) -> Result<i64> {
        use DistributionSpec::*;
        self.validate()?;
        match *self {
            NegativeBinomial0 { r, p } if r > 1.0 => Ok(((r - 1.0) * (1.0 - p) / p).floor() as i64),
            GeneralizedZetaTail { .. } => {
                let f = self.kernel()?;
                let mut best = self.origin();
                let mut best_val = f(best);
                let mut x = best + 1;
                loop {
                    let v = f(x);
                    if v > best_val {
                        best = x;
                        best_val = v;
                    } else if x > best + 2 {
                        return Ok(best);
                    }
                    x += 1;
                }
            }
            _ => Ok(self.origin()),
        }
    }

    /// `Σ_x g(x) f(x)` summed from the origin until the remaining mass is
    /// below `1e-15` or the term cap is reached.
    pub(crate) fn truncated_expectation(&self, g: impl Fn(i64) -> f64) -> Result<f64> {
        let f = self.kernel()?;
        let mut total = 0.0;
        let mut mass = 0.0;
        let mut x = self.origin();
        for n in 0..SUM_CAP {
            let fx = f(x);
            total += g(x) * fx;
            mass += fx;
            if n % 64 == 63 && 1.0 - mass < 1e-15 {
                // confirm against an independently computed tail
                if self.survival(x)? < 1e-15 {
                    break;
                }
            }
            x += 1;
        }
        Ok(total)
    }

    fn gzt_pmf(&self, x: i64) -> Result<f64> {
        let DistributionSpec::GeneralizedZetaTail { r_count, a } = *self else {
            unreachable!()
        };
        if x < r_count as i64 {
            return Ok(0.0);
        }
        let table = gzt_table(r_count, a, x as usize + 1)?;
        Ok(table[x as usize])
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name())?;
        for (i, (k, v)) in self.params().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        write!(f, ")")
    }
}

/// Largest raw moment order served by [`DistributionSpec::raw_moment`].
pub const MAX_RAW_MOMENT: u32 = 6;

/// Coefficients of `(X - shift)(X - shift - 1)...(X - shift - ν + 1)` in
/// ascending powers of `X`.
fn falling_factorial_poly(nu: u32, shift: f64) -> Vec<f64> {
    let mut poly = vec![1.0];
    for j in 0..nu {
        let root = shift + j as f64;
        let mut next = vec![0.0; poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= root * c;
        }
        poly = next;
    }
    poly
}

fn zeta_tail_raw_moment(a: f64, kappa: u32) -> Result<f64> {
    let mut total = 0.0;
    for nu in 1..=kappa {
        let s = stirling2(kappa, nu)? as f64;
        total += s * factorial(nu) * hurwitz_zeta(nu as f64 + 1.0, a + 1.0)?;
    }
    Ok((a + 1.0) * total)
}

fn zeta_tail_variance(a: f64) -> Result<f64> {
    let z2 = hurwitz_zeta(2.0, a + 1.0)?;
    let z3 = hurwitz_zeta(3.0, a + 1.0)?;
    Ok((a + 1.0) * (z2 + 2.0 * z3 - (a + 1.0) * z2 * z2))
}

/// `Σ_ν S(κ,ν) Γ(r+ν)/Γ(r) ((1-p)/p)^ν`.
fn negbin_raw_moment(r: f64, p: f64, kappa: u32) -> f64 {
    let q = (1.0 - p) / p;
    let mut rising = 1.0;
    let mut total = 0.0;
    for nu in 1..=kappa {
        rising *= r + (nu - 1) as f64;
        // kappa <= MAX_RAW_MOMENT so stirling2 cannot fail
        let s = stirling2(kappa, nu).expect("kappa within range") as f64;
        total += s * rising * q.powi(nu as i32);
    }
    total
}

fn zeta_tail_pgf(a: f64, z: f64) -> Result<f64> {
    Ok((a + 1.0) * (digamma(a + 2.0)? - digamma(a + 2.0 - z)?))
}

/// `P(Y = y)` for `y < len`, where `Y` is a sum of `r_count` Zeta Tail(a)
/// variables. Exact up to `len - 1` because every summand is at least 1.
fn gzt_table(r_count: u32, a: f64, len: usize) -> Result<Vec<f64>> {
    let base_spec = DistributionSpec::ZetaTail { a };
    let mut base = vec![0.0; len];
    for (x, slot) in base.iter_mut().enumerate().skip(1) {
        *slot = base_spec.pmf(x as i64)?;
    }
    let mut acc = base.clone();
    for _ in 1..r_count {
        let mut next = vec![0.0; len];
        for (i, &ai) in acc.iter().enumerate() {
            if ai == 0.0 {
                continue;
            }
            for j in 1..len - i {
                next[i + j] += ai * base[j];
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// Relative overdispersion `𝒪[X]/E[X]` of Zeta Tail 0(a), in closed form.
pub fn zt0_relative_overdispersion(a: f64) -> Result<f64> {
    check_a(a)?;
    let a1 = a + 1.0;
    let z2 = hurwitz_zeta(2.0, a1)?;
    let z3 = hurwitz_zeta(3.0, a1)?;
    let denom = a1 * z2 - 1.0;
    Ok((2.0 * a1 * z3 - a1 * a1 * z2 * z2 + 1.0) / (denom * denom))
}

/// Ratio of zero-count probabilities, Zeta Tail 0(a) against Geometric 0
/// with the same tail decay `p = (a+1)/(a+2)`: `(a+2) ζ(2, a+2)`.
pub fn zt0_zero_ratio(a: f64) -> Result<f64> {
    check_a(a)?;
    Ok((a + 2.0) * hurwitz_zeta(2.0, a + 2.0)?)
}
