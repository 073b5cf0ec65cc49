//! `zeta-tail`: evaluate, sample and fit count distributions, and emit the
//! figure and table series as tab-separated text.

mod input;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use zeta_tail::data::{find_region, Region, REGIONS};
use zeta_tail::fit::{compare_families, CountHistogram, FitFamily};
use zeta_tail::figures::{self, HAZARD_A};
use zeta_tail::sampling::{sample_family, PcgUniform};
use zeta_tail::versatility::versatility_table;
use zeta_tail::{DistributionSpec, Error};

#[derive(Parser)]
#[command(name = "zeta-tail", version, about = "Zeta Tail count distributions and their comparators")]
struct Cli {
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// pmf, cdf, hazard, mean and variance over a range of counts.
    Eval {
        #[command(flatten)]
        dist: DistArgs,
        /// Counts to evaluate: `5`, `1..5` (inclusive).
        #[arg(long)]
        x: Option<String>,
    },
    /// Maximum-likelihood fits with χ² goodness of fit and AIC.
    Fit(FitArgs),
    /// Data series for figure 1 (relative overdispersion), 2 (zero ratio) or 3 (hazard).
    Figures {
        which: u8,
        #[arg(long, default_value_t = 20.0)]
        grid_max: f64,
        #[arg(long, default_value_t = 0.05)]
        grid_step: f64,
        /// Largest count for figure 3.
        #[arg(long, default_value_t = 20)]
        x_max: i64,
        /// Hazard curve parameters for figure 3 (repeatable).
        #[arg(long = "a")]
        a: Vec<f64>,
    },
    /// Draws variates and summarizes them.
    Sample {
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Print only the summary, not the variates.
        #[arg(long)]
        summary_only: bool,
    },
    /// Versatility measures of the five one-parameter families.
    Versatility,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    ZetaTail,
    ZetaTail0,
    Geometric0,
    Zig0,
    Negbin0,
    Zeta0,
    Quadratic0,
    GeneralizedZetaTail,
}

#[derive(Args)]
struct DistArgs {
    #[arg(value_enum, required_unless_present = "family_flag", conflicts_with = "family_flag")]
    family: Option<Family>,
    #[arg(long = "family", value_enum)]
    family_flag: Option<Family>,
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    p: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pi0: Option<f64>,
    /// Negative binomial shape, or the number of summands for the generalized family.
    #[arg(long, allow_negative_numbers = true)]
    r: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
}

#[derive(Args)]
struct FitArgs {
    /// Embedded region, by slug or name.
    #[arg(long, conflicts_with_all = ["csv", "all_regions"])]
    region: Option<String>,
    /// Histogram file with header `count,frequency`.
    #[arg(long, conflicts_with = "all_regions")]
    csv: Option<PathBuf>,
    /// Fit every embedded region.
    #[arg(long)]
    all_regions: bool,
    /// Families to fit (repeatable); all four when omitted.
    #[arg(long, conflicts_with = "all_families")]
    family: Vec<String>,
    #[arg(long)]
    all_families: bool,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn data(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain(_) => 2,
            Error::DegenerateData(_) | Error::InvalidHistogram(_) | Error::UndefinedHazard(_) => 3,
            _ => 4,
        };
        Failure { code, message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli.command).and_then(|text| match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::data(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("zeta-tail: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> CliResult<String> {
    match command {
        Command::Eval { dist, x } => cmd_eval(&dist, x.as_deref()),
        Command::Fit(args) => cmd_fit(&args),
        Command::Figures { which, grid_max, grid_step, x_max, a } => cmd_figures(which, grid_max, grid_step, x_max, &a),
        Command::Sample { dist, n, seed, summary_only } => cmd_sample(&dist, n, seed, summary_only),
        Command::Versatility => cmd_versatility(),
    }
}

fn need(value: Option<f64>, flag: &str, family: &str) -> CliResult<f64> {
    value.ok_or_else(|| Failure::usage(format!("{family} requires --{flag}")))
}

fn build_spec(args: &DistArgs) -> CliResult<DistributionSpec> {
    let family = args.family.or(args.family_flag).ok_or_else(|| Failure::usage("no family given"))?;
    let name = family.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let n = name.as_str();
    let spec = match family {
        Family::ZetaTail => DistributionSpec::ZetaTail { a: need(args.a, "a", n)? },
        Family::ZetaTail0 => DistributionSpec::ZetaTail0 { a: need(args.a, "a", n)? },
        Family::Geometric0 => DistributionSpec::Geometric0 { p: need(args.p, "p", n)? },
        Family::Zig0 => DistributionSpec::ZeroInflatedGeometric0 { p: need(args.p, "p", n)?, pi0: need(args.pi0, "pi0", n)? },
        Family::Negbin0 => DistributionSpec::NegativeBinomial0 { r: need(args.r, "r", n)?, p: need(args.p, "p", n)? },
        Family::Zeta0 => DistributionSpec::Zeta0 { b: need(args.b, "b", n)? },
        Family::Quadratic0 => DistributionSpec::Quadratic0 { c: need(args.c, "c", n)? },
        Family::GeneralizedZetaTail => {
            let r = need(args.r, "r", n)?;
            if !(r >= 1.0 && r.fract() == 0.0 && r <= u32::MAX as f64) {
                return Err(Failure::usage(format!("{n} requires a positive integer --r, got {r}")));
            }
            DistributionSpec::GeneralizedZetaTail { r_count: r as u32, a: need(args.a, "a", n)? }
        }
    };
    spec.validate()?;
    Ok(spec)
}

fn parse_range(text: &str) -> CliResult<(i64, i64)> {
    let bad = || Failure::usage(format!("invalid --x '{text}' (expected N or LO..HI)"));
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => (lo.trim(), hi.trim().trim_start_matches('=')),
        None => (text.trim(), text.trim()),
    };
    let lo: i64 = lo.parse().map_err(|_| bad())?;
    let hi: i64 = hi.parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    if hi - lo > 10_000_000 {
        return Err(Failure::usage(format!("--x range '{text}' is too long")));
    }
    Ok((lo, hi))
}

/// Moments that do not exist are reported as `inf`.
fn moment(value: zeta_tail::Result<f64>) -> CliResult<String> {
    match value {
        Ok(v) => Ok(v.to_string()),
        Err(Error::Divergent(_)) => Ok("inf".into()),
        Err(e) => Err(e.into()),
    }
}

fn metadata(out: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "# {key}\t{value}");
}

fn cmd_eval(args: &DistArgs, x: Option<&str>) -> CliResult<String> {
    let spec = build_spec(args)?;
    let (lo, hi) = match x {
        Some(text) => parse_range(text)?,
        None => (spec.origin(), spec.origin() + 10),
    };
    let mean = moment(spec.mean())?;
    let variance = moment(spec.variance())?;
    let mut out = String::new();
    metadata(&mut out, "family", spec);
    out.push_str("x\tpmf\tcdf\thazard\tmean\tvariance\n");
    for x in lo..=hi {
        let hazard = if x < spec.origin() {
            "nan".to_string()
        } else {
            match spec.hazard(x) {
                Ok(h) => h.to_string(),
                Err(Error::SurvivalUnderflow(_)) => "nan".to_string(),
                Err(e) => return Err(e.into()),
            }
        };
        let _ = writeln!(out, "{x}\t{}\t{}\t{hazard}\t{mean}\t{variance}", spec.pmf(x)?, spec.cdf(x)?);
    }
    Ok(out)
}

enum Source {
    Region(&'static Region),
    Csv(PathBuf, CountHistogram),
}

impl Source {
    fn label(&self) -> String {
        match self {
            Source::Region(r) => r.slug.to_string(),
            Source::Csv(path, _) => path.display().to_string(),
        }
    }

    fn histogram(&self) -> CountHistogram {
        match self {
            Source::Region(r) => CountHistogram::from_region(r),
            Source::Csv(_, h) => h.clone(),
        }
    }
}

fn cmd_fit(args: &FitArgs) -> CliResult<String> {
    let families = if args.family.is_empty() || args.all_families {
        FitFamily::ALL.to_vec()
    } else {
        args.family
            .iter()
            .map(|s| s.parse::<FitFamily>())
            .collect::<zeta_tail::Result<Vec<_>>>()?
    };
    let sources = if args.all_regions {
        REGIONS.iter().map(Source::Region).collect()
    } else if let Some(key) = &args.region {
        let region = find_region(key).ok_or_else(|| {
            let known: Vec<_> = REGIONS.iter().map(|r| r.slug).collect();
            Failure::usage(format!("unknown region '{key}' (known: {})", known.join(", ")))
        })?;
        vec![Source::Region(region)]
    } else if let Some(path) = &args.csv {
        let hist = input::read_histogram_csv(path).map_err(Failure::data)?;
        vec![Source::Csv(path.clone(), hist)]
    } else {
        return Err(Failure::usage("fit needs --region, --csv or --all-regions"));
    };

    // rayon keeps the input order when collecting
    let comparisons = sources
        .par_iter()
        .map(|s| compare_families(&s.histogram(), &families))
        .collect::<zeta_tail::Result<Vec<_>>>()?;

    let mut out = String::new();
    metadata(&mut out, "families", families.iter().map(|f| f.slug()).collect::<Vec<_>>().join(","));
    let starred = families.len() > 1;
    out.push_str("source\tfamily\tparameters\tloglik\taic\taic_best\tchi2\tdf\tp_value\tp_best\tconverged\n");
    for (source, cmp) in sources.iter().zip(&comparisons) {
        for (i, m) in cmp.models.iter().enumerate() {
            let params: Vec<String> = m.fit.spec.params().iter().map(|(k, v)| format!("{k}={v}")).collect();
            let star = |best: usize| if starred && best == i { "*" } else { "" };
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                source.label(),
                m.family,
                params.join(","),
                m.fit.loglik,
                m.fit.aic,
                star(cmp.best_aic),
                m.gof.chi2,
                m.gof.df,
                m.gof.p_value,
                star(cmp.best_p),
                m.fit.converged,
            );
            if m.gof.low_expected {
                metadata(&mut out, "note", format!("{} {}: some expected bin count is below 1", source.label(), m.family));
            }
        }
    }
    Ok(out)
}

fn cmd_figures(which: u8, grid_max: f64, grid_step: f64, x_max: i64, a: &[f64]) -> CliResult<String> {
    let mut out = String::new();
    match which {
        1 => {
            let (peak_a, peak) = figures::relative_overdispersion_peak()?;
            metadata(&mut out, "figure", "relative overdispersion of ZetaTail0(a)");
            metadata(&mut out, "peak", format!("a={peak_a}\t{peak}"));
            out.push_str("a\trelative_overdispersion\n");
            for (a, v) in figures::relative_overdispersion_series(grid_max, grid_step)? {
                let _ = writeln!(out, "{a}\t{v}");
            }
        }
        2 => {
            metadata(&mut out, "figure", "P(X=0) of ZetaTail0(a) over Geometric0 with matched tail decay");
            out.push_str("a\tzero_ratio\n");
            for (a, v) in figures::zero_ratio_series(grid_max, grid_step)? {
                let _ = writeln!(out, "{a}\t{v}");
            }
        }
        3 => {
            let a_values = if a.is_empty() { HAZARD_A.to_vec() } else { a.to_vec() };
            metadata(&mut out, "figure", "hazard of ZetaTail0(a)");
            out.push_str("a\tx\thazard\n");
            for (a, x, h) in figures::hazard_series(&a_values, x_max)? {
                let _ = writeln!(out, "{a}\t{x}\t{h}");
            }
        }
        _ => return Err(Failure::usage(format!("unknown figure {which} (expected 1, 2 or 3)"))),
    }
    Ok(out)
}

fn cmd_sample(args: &DistArgs, n: usize, seed: u64, summary_only: bool) -> CliResult<String> {
    let spec = build_spec(args)?;
    let mut src = PcgUniform::new(seed);
    let mut draws = Vec::with_capacity(n);
    for _ in 0..n {
        draws.push(sample_family(&spec, &mut src)?);
    }
    let mut out = String::new();
    metadata(&mut out, "family", spec);
    metadata(&mut out, "seed", seed);
    metadata(&mut out, "n", n);
    if !summary_only {
        out.push_str("value\n");
        for x in &draws {
            let _ = writeln!(out, "{x}");
        }
    }
    if n > 0 {
        let mean = draws.iter().map(|&x| x as f64).sum::<f64>() / n as f64;
        let var = draws.iter().map(|&x| (x as f64 - mean).powi(2)).sum::<f64>() / n as f64;
        metadata(&mut out, "sample_mean", mean);
        metadata(&mut out, "sample_variance", var);
    }
    let _ = writeln!(out, "# count\tfrequency");
    // heavy-tailed draws can be astronomically large, so tally sparsely
    let mut freqs = std::collections::BTreeMap::new();
    for &x in &draws {
        *freqs.entry(x).or_insert(0u64) += 1;
    }
    for (x, f) in freqs {
        let _ = writeln!(out, "# {x}\t{f}");
    }
    Ok(out)
}

fn cmd_versatility() -> CliResult<String> {
    let table = versatility_table()?;
    let mut out = String::new();
    metadata(&mut out, "prior", "ln theta ~ N(0, 1)");
    out.push_str("family\tparameterization\tversatility\tnodes\tguard_versatility\tguard_nodes\n");
    for r in &table.reports {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            r.family.label(),
            r.family.parameterization(),
            r.v,
            r.node_count,
            r.guard_v,
            r.guard_node_count
        );
    }
    metadata(&mut out, "geometric0_average", table.geometric_average);
    Ok(out)
}
