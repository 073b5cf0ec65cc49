//! Derivative-free minimizers used by the fitting and figure code.

use crate::error::{domain, Result};
use crate::sampling::{PcgUniform, UniformSource};

/// Outcome of a minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Bounded scalar minimization by Brent's method (parabolic steps with a
/// golden-section fallback), stopping once the bracket half-width falls below
/// `xatol` plus a relative term.
pub fn brent_bounded(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, xatol: f64, max_evals: usize) -> Result<Minimum> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return domain(format!("invalid bracket [{lo}, {hi}]"));
    }
    let sqrt_eps = f64::EPSILON.sqrt();
    let golden = 0.5 * (3.0 - 5f64.sqrt());
    let (mut a, mut b) = (lo, hi);
    let mut fulc = a + golden * (b - a);
    let (mut nfc, mut xf) = (fulc, fulc);
    let (mut rat, mut e): (f64, f64) = (0.0, 0.0);
    let mut fx = f(xf);
    let mut evals = 1;
    let (mut ffulc, mut fnfc) = (fx, fx);
    let mut xm = 0.5 * (a + b);
    let mut tol1 = sqrt_eps * xf.abs() + xatol / 3.0;
    let mut tol2 = 2.0 * tol1;
    let mut converged = true;

    while (xf - xm).abs() > tol2 - 0.5 * (b - a) {
        let mut take_golden = true;
        if e.abs() > tol1 {
            take_golden = false;
            let mut r = (xf - nfc) * (fx - ffulc);
            let mut q = (xf - fulc) * (fx - fnfc);
            let mut p = (xf - fulc) * q - (xf - nfc) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            r = e;
            e = rat;
            if p.abs() < (0.5 * q * r).abs() && p > q * (a - xf) && p < q * (b - xf) {
                rat = p / q;
                let x = xf + rat;
                if (x - a) < tol2 || (b - x) < tol2 {
                    rat = if xm >= xf { tol1 } else { -tol1 };
                }
            } else {
                take_golden = true;
            }
        }
        if take_golden {
            e = if xf >= xm { a - xf } else { b - xf };
            rat = golden * e;
        }
        let step = if rat >= 0.0 { 1.0 } else { -1.0 } * rat.abs().max(tol1);
        let x = xf + step;
        let fu = f(x);
        evals += 1;

        if fu <= fx {
            if x >= xf {
                a = xf;
            } else {
                b = xf;
            }
            fulc = nfc;
            ffulc = fnfc;
            nfc = xf;
            fnfc = fx;
            xf = x;
            fx = fu;
        } else {
            if x < xf {
                a = x;
            } else {
                b = x;
            }
            if fu <= fnfc || nfc == xf {
                fulc = nfc;
                ffulc = fnfc;
                nfc = x;
                fnfc = fu;
            } else if fu <= ffulc || fulc == xf || fulc == nfc {
                fulc = x;
                ffulc = fu;
            }
        }
        xm = 0.5 * (a + b);
        tol1 = sqrt_eps * xf.abs() + xatol / 3.0;
        tol2 = 2.0 * tol1;
        if evals >= max_evals {
            converged = false;
            break;
        }
    }
    Ok(Minimum { x: vec![xf], value: fx, evaluations: evals, converged })
}

/// Settings for [`nelder_mead`].
#[derive(Debug, Clone)]
pub struct NelderMeadOptions {
    /// Stop once every vertex lies within this distance of the best one.
    pub diameter_tol: f64,
    /// Total evaluation budget across all restarts.
    pub max_evals: usize,
    /// Edge length of the initial simplex.
    pub initial_step: f64,
    /// Extra runs started from the incumbent plus uniform jitter.
    pub restarts: usize,
    /// Half-width of the restart jitter.
    pub jitter: f64,
    pub seed: u64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            diameter_tol: 1e-9,
            max_evals: 100_000,
            initial_step: 0.5,
            restarts: 5,
            jitter: 0.5,
            seed: 0x5eed,
        }
    }
}

/// Nelder–Mead on the box `[lower, upper]`. Every trial point is clamped into
/// the box, so a minimum on the boundary is approached by a collapsing
/// simplex rather than by leaving the domain.
pub fn nelder_mead(
    mut f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    lower: &[f64],
    upper: &[f64],
    opts: &NelderMeadOptions,
) -> Result<Minimum> {
    let n = x0.len();
    if n == 0 || lower.len() != n || upper.len() != n {
        return domain("nelder_mead: dimension mismatch");
    }
    if lower.iter().zip(upper).any(|(l, u)| !(l < u)) {
        return domain("nelder_mead: empty box");
    }
    let mut rng = PcgUniform::new(opts.seed);
    let mut evals = 0;
    let clamp = |x: &mut [f64]| {
        for i in 0..x.len() {
            x[i] = x[i].clamp(lower[i], upper[i]);
        }
    };

    let mut start = x0.to_vec();
    clamp(&mut start);
    let mut best: Option<Minimum> = None;
    for run in 0..=opts.restarts {
        if run > 0 {
            start = best.as_ref().unwrap().x.clone();
            for v in start.iter_mut() {
                *v += opts.jitter * (2.0 * rng.next_uniform() - 1.0);
            }
            clamp(&mut start);
        }
        let budget = opts.max_evals.saturating_sub(evals);
        if budget == 0 {
            break;
        }
        let res = nelder_mead_once(&mut f, &start, &clamp, opts, budget);
        evals += res.evaluations;
        if best.as_ref().is_none_or(|b| res.value < b.value) {
            best = Some(res);
        }
    }
    let mut best = best.expect("at least one run");
    best.evaluations = evals;
    Ok(best)
}

fn nelder_mead_once(
    f: &mut impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    clamp: &impl Fn(&mut [f64]),
    opts: &NelderMeadOptions,
    budget: usize,
) -> Minimum {
    let n = x0.len();
    let mut evals = 0;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += opts.initial_step;
        clamp(&mut v);
        if v[i] == x0[i] {
            v[i] -= opts.initial_step;
            clamp(&mut v);
        }
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v, &mut evals)).collect();

    let mut converged = false;
    loop {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let diameter = simplex[1..]
            .iter()
            .map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if diameter < opts.diameter_tol {
            converged = true;
            break;
        }
        if evals >= budget {
            break;
        }

        let mut centroid = vec![0.0; n];
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            let mut p: Vec<f64> = centroid.iter().zip(&simplex[n]).map(|(c, w)| c + t * (c - w)).collect();
            clamp(&mut p);
            p
        };

        let xr = along(1.0);
        let fr = eval(&xr, &mut evals);
        if fr < values[0] {
            let xe = along(2.0);
            let fe = eval(&xe, &mut evals);
            if fe < fr {
                simplex[n] = xe;
                values[n] = fe;
            } else {
                simplex[n] = xr;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n] = xr;
            values[n] = fr;
            continue;
        }
        let (xc, fc) = if fr < values[n] {
            let xc = along(0.5);
            let fc = eval(&xc, &mut evals);
            (xc, fc)
        } else {
            let xc = along(-0.5);
            let fc = eval(&xc, &mut evals);
            (xc, fc)
        };
        if fc < values[n].min(fr) {
            simplex[n] = xc;
            values[n] = fc;
            continue;
        }
        // shrink toward the best vertex
        for i in 1..=n {
            let mut v: Vec<f64> = simplex[i].iter().zip(&simplex[0]).map(|(x, b)| b + 0.5 * (x - b)).collect();
            clamp(&mut v);
            values[i] = eval(&v, &mut evals);
            simplex[i] = v;
        }
    }
    Minimum { x: simplex[0].clone(), value: values[0], evaluations: evals, converged }
}

/// Golden-section search for the minimum of a unimodal function on `[lo, hi]`.
pub fn golden_section(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, xtol: f64) -> Result<Minimum> {
    if !(lo < hi) || !(xtol > 0.0) {
        return domain(format!("invalid golden-section bracket [{lo}, {hi}] or tolerance {xtol}"));
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut evals = 2;
    while b - a > xtol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        evals += 1;
    }
    let x = 0.5 * (a + b);
    Ok(Minimum { x: vec![x], value: f(x), evaluations: evals + 1, converged: true })
}
