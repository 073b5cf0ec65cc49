//! Special functions: Hurwitz and Riemann zeta, the t-derivative of Hurwitz
//! zeta, log-weighted zeta sums, digamma and Stirling numbers of the second
//! kind.
//!
//! The zeta family is evaluated by direct summation with an integral
//! remainder bound as the stopping rule. Once the summation index passes
//! `max(10, s)` the remaining tail is closed with an Euler-Maclaurin
//! correction (integral remainder, half-term and Bernoulli terms), which keeps
//! the cost bounded for `s` close to 1 where the raw series barely converges.

use crate::error::{domain, Error, Result};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Truncation control for the infinite series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPolicy {
    /// Absolute bound the remainder must satisfy before direct summation stops.
    pub abs_tol: f64,
    /// Relative bound (against the partial sum) the remainder must also satisfy.
    pub rel_tol: f64,
    /// Hard cap on directly summed terms.
    pub max_terms: usize,
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            rel_tol: 1e-16,
            max_terms: 10_000_000,
        }
    }
}

impl SeriesPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return domain("series tolerances must be positive");
        }
        if self.max_terms == 0 {
            return domain("max_terms must be at least 1");
        }
        Ok(())
    }
}

/// `B_{2j} / (2j)!` for j = 1..=12.
const EM_COEFFS: [f64; 12] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -1.0 / 1.892_437_580_318_379_2e9,
    1.0 / 7.472_424_96e10,
    -1.0 / 2.950_130_727_918_164_2e12,
    1.0 / 1.164_678_281_435_006_7e14,
    -1.0 / 4.597_978_722_407_472_6e15,
    1.0 / 1.815_210_540_194_354_7e17,
    -1.0 / 7.166_165_256_175_667e18,
];

/// Index at which direct summation hands over to the Euler-Maclaurin tail.
const EM_START: f64 = 10.0;

/// Hurwitz zeta `ζ(s, t) = Σ_{i≥0} (i + t)^{-s}` with the default policy.
pub fn hurwitz_zeta(s: f64, t: f64) -> Result<f64> {
    hurwitz_zeta_with(s, t, &SeriesPolicy::default())
}

/// Hurwitz zeta under an explicit truncation policy.
pub fn hurwitz_zeta_with(s: f64, t: f64, policy: &SeriesPolicy) -> Result<f64> {
    log_weighted_zeta_with(s, t, 0, policy)
}

/// Riemann zeta `ζ(s) = ζ(s, 1)`.
pub fn riemann_zeta(s: f64) -> Result<f64> {
    hurwitz_zeta(s, 1.0)
}

pub fn riemann_zeta_with(s: f64, policy: &SeriesPolicy) -> Result<f64> {
    hurwitz_zeta_with(s, 1.0, policy)
}

/// `∂ζ(s, t)/∂t = -s ζ(s + 1, t)`.
pub fn hurwitz_zeta_dt(s: f64, t: f64) -> Result<f64> {
    hurwitz_zeta_dt_with(s, t, &SeriesPolicy::default())
}

pub fn hurwitz_zeta_dt_with(s: f64, t: f64, policy: &SeriesPolicy) -> Result<f64> {
    check_zeta_args(s, t)?;
    Ok(-s * hurwitz_zeta_with(s + 1.0, t, policy)?)
}

/// `Σ_{i≥0} ln^k(i + t) (i + t)^{-s}`, so that `k = 0` is Hurwitz zeta and
/// `(-1)^k ∂^k ζ(s, t)/∂s^k` for general `k`.
pub fn log_weighted_zeta(s: f64, t: f64, k: u32) -> Result<f64> {
    log_weighted_zeta_with(s, t, k, &SeriesPolicy::default())
}

fn check_zeta_args(s: f64, t: f64) -> Result<()> {
    if !(s > 1.0) || !s.is_finite() {
        return domain(format!("zeta requires s > 1, got s = {s}"));
    }
    if !(t > 0.0) || !t.is_finite() {
        return domain(format!("zeta requires t > 0, got t = {t}"));
    }
    Ok(())
}

pub fn log_weighted_zeta_with(s: f64, t: f64, k: u32, policy: &SeriesPolicy) -> Result<f64> {
    check_zeta_args(s, t)?;
    policy.validate()?;
    if k > 4 {
        return domain("log weight power above 4 is not supported");
    }
    let switch = EM_START.max(s);
    let mut sum = 0.0;
    let mut i = 0usize;
    loop {
        let w = i as f64 + t;
        if w >= switch {
            return Ok(sum + euler_maclaurin_tail(s, w, k, sum, policy));
        }
        if i >= policy.max_terms {
            return Err(Error::NonConvergence { terms: i });
        }
        let lw = w.ln();
        sum += lw.powi(k as i32) * (-s * lw).exp();
        i += 1;

        // once ln^k(u) u^{-s} is decreasing (s ln u > k, ln u ≥ 1 when k > 0)
        // the remainder is at most f(w') + ∫_{w'}^∞ f(u) du
        let next = i as f64 + t;
        let ln_next = next.ln();
        if k == 0 || (ln_next >= 1.0 && s * ln_next > k as f64) {
            let bound = ln_next.powi(k as i32) * (-s * ln_next).exp() + log_power_integral(s, next, k);
            if bound <= policy.abs_tol && bound <= policy.rel_tol * sum {
                return Ok(sum);
            }
        }
    }
}

/// `∫_w^∞ ln^k(u) u^{-s} du = w^{1-s} Σ_j k!/j! ln^j(w) / (s-1)^{k-j+1}`.
fn log_power_integral(s: f64, w: f64, k: u32) -> f64 {
    let lw = w.ln();
    let sm1 = s - 1.0;
    let mut total = 0.0;
    let mut k_over_j = 1.0; // k!/j!
    for j in (0..=k).rev() {
        total += k_over_j * lw.powi(j as i32) / sm1.powi((k - j + 1) as i32);
        k_over_j *= j as f64;
    }
    total * (-sm1 * lw).exp()
}

/// Euler-Maclaurin estimate of `Σ_{j≥0} f(w + j)` with `f(u) = ln^k(u) u^{-s}`.
fn euler_maclaurin_tail(s: f64, w: f64, k: u32, head: f64, policy: &SeriesPolicy) -> f64 {
    let lw = w.ln();
    let base = (-s * lw).exp(); // w^{-s}
    let k = k as usize;

    let integral = log_power_integral(s, w, k as u32);

    // f^{(m)}(u) = u^{-s-m} P_m(ln u) with P_0 = L^k and
    // P_{m+1}(L) = P_m'(L) - (s+m) P_m(L).
    let mut poly = [0.0f64; 5];
    poly[k] = 1.0;
    let eval = |p: &[f64; 5]| p.iter().rev().fold(0.0, |acc, &c| acc * lw + c);

    let mut total = integral + 0.5 * base * lw.powi(k as i32);
    let mut upow = base; // w^{-s-m}
    let mut m = 0usize;
    for coeff in EM_COEFFS {
        // advance poly to derivative order 2j-1
        let target = m + if m == 0 { 1 } else { 2 };
        while m < target {
            let mut next = [0.0f64; 5];
            for d in 0..5 {
                let deriv = if d + 1 < 5 { (d + 1) as f64 * poly[d + 1] } else { 0.0 };
                next[d] = deriv - (s + m as f64) * poly[d];
            }
            poly = next;
            upow /= w;
            m += 1;
        }
        let term = -coeff * upow * eval(&poly);
        total += term;
        if term.abs() <= policy.rel_tol * (head + total).abs() {
            break;
        }
    }
    total
}

/// Digamma `ψ(z)` for `z > 0`: upward recurrence to `z ≥ 10`, then the
/// asymptotic expansion in `1/z²`.
pub fn digamma(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return domain(format!("digamma requires z > 0, got z = {z}"));
    }
    let mut shift = 0.0;
    let mut x = z;
    while x < 10.0 {
        shift += 1.0 / x;
        x += 1.0;
    }
    // B_{2k} / (2k) for k = 1..=6
    const C: [f64; 6] = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32_760.0,
    ];
    let inv2 = 1.0 / (x * x);
    let mut series = 0.0;
    let mut p = inv2;
    for c in C {
        series += c * p;
        p *= inv2;
    }
    Ok(x.ln() - 0.5 / x - series - shift)
}

/// Largest `κ` accepted by [`stirling2`].
pub const STIRLING_MAX: u32 = 30;

/// Stirling number of the second kind `S(κ, ν)` in exact integer arithmetic.
pub fn stirling2(kappa: u32, nu: u32) -> Result<u128> {
    if kappa > STIRLING_MAX {
        return domain(format!("stirling2 supports kappa <= {STIRLING_MAX}, got {kappa}"));
    }
    if nu > kappa {
        return domain(format!("stirling2 requires nu <= kappa, got nu = {nu}, kappa = {kappa}"));
    }
    let (kappa, nu) = (kappa as usize, nu as usize);
    let mut row = vec![0u128; nu + 1];
    row[0] = 1;
    for _ in 0..kappa {
        for j in (1..=nu).rev() {
            row[j] = j as u128 * row[j] + row[j - 1];
        }
        row[0] = 0;
    }
    Ok(row[nu])
}

/// `n!` as a float, exact for `n ≤ 20`.
pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Binomial coefficient as a float.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}
