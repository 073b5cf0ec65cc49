//! Random variates for every catalog family.
//!
//! Zeta Tail draws use the Geometric mixture: a mixing index `m` from the
//! Quadratic law on `ℤ⁺`, then a one-based Geometric with success
//! probability `(m+a)/(m+a+1)`. Each Zeta Tail variate consumes exactly two
//! uniforms, in that order.

use rand::{RngCore, SeedableRng};
use rand_pcg::Pcg64;

use crate::dist::{DistributionSpec, Support};
use crate::error::{domain, Error, Result};

/// A stream of uniforms strictly inside `(0, 1)`.
pub trait UniformSource {
    fn next_uniform(&mut self) -> f64;
}

/// The default source: PCG-XSL-RR 128/64 (`rand_pcg::Pcg64`) seeded through
/// `seed_from_u64`, with `u = ((bits >> 11) + 0.5) / 2^53`.
#[derive(Debug, Clone)]
pub struct PcgUniform {
    seed: u64,
    rng: Pcg64,
}

impl PcgUniform {
    pub fn new(seed: u64) -> Self {
        PcgUniform { seed, rng: Pcg64::seed_from_u64(seed) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl UniformSource for PcgUniform {
    fn next_uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) / (1u64 << 53) as f64
    }
}

fn check_u(u: f64) -> Result<()> {
    if u > 0.0 && u < 1.0 {
        Ok(())
    } else {
        domain(format!("uniform must lie in (0, 1), got {u}"))
    }
}

/// Inverse-CDF draw from the Quadratic(c = a+1) law on `ℤ⁺`, whose CDF is
/// `m / (m+a+1)`. Saturates at `u64::MAX`.
pub fn sample_quadratic_mixing(a: f64, u: f64) -> Result<u64> {
    if !(a >= 0.0 && a.is_finite()) {
        return domain(format!("a must be finite and >= 0, got {a}"));
    }
    check_u(u)?;
    let m = (u * (a + 1.0) / (1.0 - u)).ceil();
    Ok((m as u64).max(1))
}

/// Inverse-transform Geometric draw with success probability `p`.
pub fn sample_geometric(p: f64, u: f64, origin: Support) -> Result<u64> {
    if !(p > 0.0 && p < 1.0) {
        return domain(format!("p must lie in (0, 1), got {p}"));
    }
    check_u(u)?;
    Ok(geometric_from_q(1.0 - p, u, origin))
}

/// Geometric draw given the failure probability `q = 1 - p` directly, which
/// keeps precision when `p` is close to 1.
fn geometric_from_q(q: f64, u: f64, origin: Support) -> u64 {
    let x = ((-u).ln_1p() / q.ln()).ceil();
    let one_based = (x as u64).max(1);
    match origin {
        Support::OneBased => one_based,
        Support::ZeroBased => one_based - 1,
    }
}

/// Two-stage mixture draw of a Zeta Tail(a) variate.
pub fn sample_zeta_tail(a: f64, src: &mut impl UniformSource, origin: Support) -> Result<u64> {
    let m = sample_quadratic_mixing(a, src.next_uniform())?;
    let q = 1.0 / (m as f64 + a + 1.0);
    Ok(geometric_from_q(q, src.next_uniform(), origin))
}

/// One variate from any catalog family. Values beyond `i64::MAX` saturate.
pub fn sample_family(spec: &DistributionSpec, src: &mut impl UniformSource) -> Result<i64> {
    use DistributionSpec::*;
    spec.validate()?;
    let x = match *spec {
        ZetaTail { a } => sample_zeta_tail(a, src, Support::OneBased)?,
        ZetaTail0 { a } => sample_zeta_tail(a, src, Support::ZeroBased)?,
        GeneralizedZetaTail { r_count, a } => {
            let mut total: u64 = 0;
            for _ in 0..r_count {
                total = total.saturating_add(sample_zeta_tail(a, src, Support::OneBased)?);
            }
            total
        }
        Geometric0 { p } => geometric_from_q(1.0 - p, src.next_uniform(), Support::ZeroBased),
        ZeroInflatedGeometric0 { p, pi0 } => {
            let gate = src.next_uniform();
            let g = geometric_from_q(1.0 - p, src.next_uniform(), Support::ZeroBased);
            if gate < pi0 {
                0
            } else {
                g
            }
        }
        NegativeBinomial0 { r, p } => sample_negative_binomial(r, p, src.next_uniform())?,
        Zeta0 { b } => sample_zipf(b + 1.0, src) - 1,
        Quadratic0 { c } => {
            let u = src.next_uniform();
            let m = (u * c / (1.0 - u)).ceil() - 1.0;
            m.max(0.0) as u64
        }
    };
    Ok(x.min(i64::MAX as u64) as i64)
}

/// `n` variates from a fresh [`PcgUniform`] seeded with `seed`.
pub fn sample_n(spec: &DistributionSpec, n: usize, seed: u64) -> Result<Vec<i64>> {
    let mut src = PcgUniform::new(seed);
    (0..n).map(|_| sample_family(spec, &mut src)).collect()
}

/// Sequential inverse-CDF search using `f(x+1) = f(x) (x+r)/(x+1) (1-p)`.
fn sample_negative_binomial(r: f64, p: f64, u: f64) -> Result<u64> {
    let mut f = (r * p.ln()).exp();
    if f == 0.0 {
        return Err(Error::Domain(format!(
            "NegativeBinomial0(r={r}, p={p}) mass at zero underflows; sequential search unavailable"
        )));
    }
    let q = 1.0 - p;
    let mut cdf = f;
    let mut x: u64 = 0;
    while u > cdf {
        f *= (x as f64 + r) / (x as f64 + 1.0) * q;
        x += 1;
        let next = cdf + f;
        if next == cdf {
            // remaining mass is below rounding; u sits in the last representable gap
            break;
        }
        cdf = next;
    }
    Ok(x)
}

/// Zipf variate on `ℤ⁺` with `P(X = k) ∝ k^{-s}`, `s > 1`, by rejection from
/// the continuous Pareto envelope.
fn sample_zipf(s: f64, src: &mut impl UniformSource) -> u64 {
    let b = 2f64.powf(s - 1.0);
    loop {
        let u = src.next_uniform();
        let v = src.next_uniform();
        let x = u.powf(-1.0 / (s - 1.0)).floor();
        if !x.is_finite() || x >= u64::MAX as f64 {
            // tail beyond u64: the acceptance ratio tends to 1 there
            return u64::MAX;
        }
        let t = (1.0 + 1.0 / x).powf(s - 1.0);
        if v * x * (t - 1.0) / (b - 1.0) <= t / b {
            return x as u64;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Fixed(Vec<f64>, usize);

    impl UniformSource for Fixed {
        fn next_uniform(&mut self) -> f64 {
            let u = self.0[self.1];
            self.1 += 1;
            u
        }
    }

    #[test]
    fn quadratic_mixing_examples() {
        assert_eq!(sample_quadratic_mixing(0.0, 0.4).unwrap(), 1);
        assert_eq!(sample_quadratic_mixing(0.0, 0.5).unwrap(), 1);
        assert_eq!(sample_quadratic_mixing(0.0, 0.51).unwrap(), 2);
        // CDF(m) = m/(m+a+1); with a = 1, CDF(2) = 1/2
        assert_eq!(sample_quadratic_mixing(1.0, 0.5).unwrap(), 2);
        assert!(sample_quadratic_mixing(0.0, 1.0 - 1e-12).unwrap() > 100_000_000_000);
        assert!(sample_quadratic_mixing(0.0, 1.0).is_err());
    }

    #[test]
    fn geometric_examples() {
        assert_eq!(sample_geometric(0.5, 0.3, Support::OneBased).unwrap(), 1);
        assert_eq!(sample_geometric(0.5, 0.3, Support::ZeroBased).unwrap(), 0);
        assert_eq!(sample_geometric(0.5, 0.8, Support::OneBased).unwrap(), 3);
        assert_eq!(sample_geometric(1.0 - 1e-12, 0.999, Support::OneBased).unwrap(), 1);
    }

    #[test]
    fn zeta_tail_uses_two_uniforms() {
        let mut src = Fixed(vec![0.4, 0.3, 0.9, 0.99], 0);
        // m = 1, q = 1/2: ceil(ln 0.7 / ln 0.5) = 1
        assert_eq!(sample_zeta_tail(0.0, &mut src, Support::OneBased).unwrap(), 1);
        assert_eq!(src.1, 2);
        // m = 9, q = 1/10: ceil(ln 0.01 / ln 0.1) = 2
        assert_eq!(sample_zeta_tail(0.0, &mut src, Support::OneBased).unwrap(), 2);
    }

    #[test]
    fn same_seed_same_stream() {
        let spec = DistributionSpec::ZetaTail0 { a: 0.3 };
        assert_eq!(sample_n(&spec, 500, 7).unwrap(), sample_n(&spec, 500, 7).unwrap());
        assert_ne!(sample_n(&spec, 500, 7).unwrap(), sample_n(&spec, 500, 8).unwrap());
    }

    #[test]
    fn uniforms_stay_inside_unit_interval() {
        let mut src = PcgUniform::new(0);
        for _ in 0..100_000 {
            let u = src.next_uniform();
            assert!(u > 0.0 && u < 1.0);
        }
    }

    #[test]
    fn gate_dominates_zero_inflation() {
        let spec = DistributionSpec::ZeroInflatedGeometric0 { p: 0.2, pi0: 1.0 - 1e-9 };
        let draws = sample_n(&spec, 10_000, 3).unwrap();
        assert!(draws.iter().all(|&x| x == 0));
    }

    #[test]
    fn negative_binomial_search_matches_cdf() {
        let spec = DistributionSpec::NegativeBinomial0 { r: 2.5, p: 0.3 };
        for u in [0.01, 0.2, 0.5, 0.9, 0.999] {
            let x = sample_negative_binomial(2.5, 0.3, u).unwrap() as i64;
            assert!(spec.cdf(x).unwrap() >= u - 1e-12);
            if x > 0 {
                assert!(spec.cdf(x - 1).unwrap() < u + 1e-12);
            }
        }
    }
}
