use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Rational;
use serde_json::{json, Value};

use sepprob::exactmath::{
    chi_catalog, factorize, factorize_rational, master_chi, milz_strunz_profile_exact, milz_strunz_v0,
    p_2quaterbits, p_2qubits, p_2rebits, u_closed, volume_hs, volume_lebesgue, DivisionRing, PiRational,
    SurdValue,
};
use sepprob::harness::{
    conjecture_search, estimate_chi_empirical, run_experiment, ChiFitConfig, ExperimentConfig,
};
use sepprob::linalg::Field;
use sepprob::quadrature::{
    chi_numeric_with, sep_prob_general_with, u_eta_with, ChiFunction, ChiMethod, DEFAULT_CHI_NODES, DEFAULT_NODES,
    DEFAULT_QMC_POINTS,
};
use sepprob::sampling::{Family, SamplerSpec};

type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

#[derive(Parser)]
#[command(name = "sepprob", version, about = "Separability and PPT probabilities of random bipartite states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a closed-form formula exactly.
    Exact(ExactArgs),
    /// Deterministic quadrature of χ̃, u(η) or the general separability integral.
    Quadrature(QuadratureArgs),
    /// Monte Carlo PPT-probability estimate.
    Estimate(EstimateArgs),
    /// Smooth rationals inside an interval.
    Conjecture(ConjectureArgs),
    /// Binned empirical χ̃(ε) for 2×2 states, with residuals.
    ChiFit(ChiFitArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Formula {
    P2qubits,
    P2rebits,
    P2quaterbits,
    U,
    Chi,
    Master,
    Volume,
    Mz,
}

#[derive(Args)]
struct ExactArgs {
    #[arg(long, value_enum)]
    formula: Formula,
    /// `key=value` pairs, comma separated or repeated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    params: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Gl,
    Qmc,
}

#[derive(Args)]
struct QuadratureArgs {
    #[arg(long)]
    d: u32,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    k: f64,
    /// Evaluate u(η) with χ̃_{d,k} instead of χ̃ itself.
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["epsilon", "eps_grid", "sep_prob"])]
    eta: Option<f64>,
    /// Evaluate the general (d, k) separability probability.
    #[arg(long, conflicts_with_all = ["epsilon", "eps_grid"])]
    sep_prob: bool,
    #[arg(long, conflicts_with = "eps_grid")]
    epsilon: Option<f64>,
    /// `lo:hi:step`
    #[arg(long)]
    eps_grid: Option<String>,
    #[arg(long, value_enum, default_value = "gl")]
    method: Method,
    /// Gauss-Legendre nodes per axis, or quasi-random points for `qmc`.
    #[arg(long)]
    nodes: Option<usize>,
}

#[derive(Args)]
struct EstimateArgs {
    /// `2x2`, `2x3`, `2x4`, `2x5` or `3x3`.
    #[arg(long)]
    system: String,
    #[arg(long, default_value = "C")]
    field: Field,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0)]
    k: i64,
    #[arg(long, default_value = "full")]
    family: Family,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    streams: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0.95)]
    ci_level: f64,
}

#[derive(Args)]
struct ConjectureArgs {
    #[arg(long)]
    lo: f64,
    #[arg(long)]
    hi: f64,
    #[arg(long, value_delimiter = ',', default_value = "2,3,5,7")]
    primes: Vec<u64>,
    #[arg(long, default_value_t = 1_000_000)]
    max_den: u64,
    #[arg(long, default_value_t = 40)]
    max_exp: u32,
    /// Number of candidates printed.
    #[arg(long, default_value_t = 20)]
    top: usize,
}

#[derive(Args)]
struct ChiFitArgs {
    #[arg(long, default_value = "C")]
    field: Field,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0)]
    k: i64,
    #[arg(long, default_value_t = 50)]
    bins: usize,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    streams: u64,
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn output(path: Option<&PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn print_json(v: &Value) -> CliResult<()> {
    let mut w = io::stdout().lock();
    writeln!(w, "{}", serde_json::to_string_pretty(v)?)?;
    w.flush()?;
    Ok(())
}

fn parse_params(raw: &[String]) -> CliResult<BTreeMap<String, String>> {
    raw.iter()
        .filter(|s| !s.is_empty())
        .map(|s| match s.split_once('=') {
            Some((k, v)) => Ok((k.trim().to_string(), v.trim().to_string())),
            None => Err(format!("parameter `{s}` is not key=value").into()),
        })
        .collect()
}

fn param<T: std::str::FromStr>(p: &BTreeMap<String, String>, key: &str) -> CliResult<T>
where
    T::Err: std::fmt::Display,
{
    let raw = p.get(key).ok_or_else(|| format!("missing parameter `{key}`"))?;
    raw.parse().map_err(|e: T::Err| format!("parameter `{key}`: {e}").into())
}

fn param_or<T: std::str::FromStr>(p: &BTreeMap<String, String>, key: &str, default: T) -> CliResult<T>
where
    T::Err: std::fmt::Display,
{
    if p.contains_key(key) {
        param(p, key)
    } else {
        Ok(default)
    }
}

/// Accepts `p/q`, integers and decimals (the latter converted exactly).
fn parse_rational(s: &str) -> CliResult<Rational> {
    if let Ok(r) = s.parse::<Rational>() {
        return Ok(r);
    }
    let x: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    Rational::from_f64(x).ok_or_else(|| format!("`{s}` is not finite").into())
}

fn rational_json(formula: &str, params: Value, r: &Rational) -> CliResult<Value> {
    let exact = PiRational::rational(r.clone());
    pi_rational_json(formula, params, &exact)
}

fn pi_rational_json(formula: &str, params: Value, x: &PiRational) -> CliResult<Value> {
    let factorization = if x.is_zero() {
        Value::Null
    } else {
        let (num, den, _) = factorize(x)?;
        json!({"num": num.to_string(), "den": den.to_string()})
    };
    Ok(json!({
        "formula": formula,
        "params": params,
        "exact": x.to_string(),
        "decimal": x.to_f64(),
        "factorization": factorization,
    }))
}

fn surd_json(formula: &str, params: Value, x: &SurdValue) -> CliResult<Value> {
    let f = factorize_rational(x.coefficient())?;
    let (num, den): (Vec<_>, Vec<_>) = f.factors().iter().partition(|(_, e)| *e > 0);
    let show = |v: Vec<&(rug::Integer, i32)>| {
        sepprob::exactmath::PrimeFactorization::from_pairs(v.into_iter().map(|(p, e)| (p.clone(), e.abs())))
            .to_string()
    };
    Ok(json!({
        "formula": formula,
        "params": params,
        "exact": x.to_string(),
        "decimal": x.to_f64(),
        "factorization": {"num": show(num), "den": show(den)},
    }))
}

fn decimal_json(formula: &str, params: Value, value: String) -> Value {
    json!({"formula": formula, "params": params, "exact": value, "factorization": Value::Null})
}

fn cmd_exact(a: &ExactArgs) -> CliResult<()> {
    let p = parse_params(&a.params)?;
    let params = json!(p);
    let out = match a.formula {
        Formula::P2qubits => rational_json("p2qubits", params, &p_2qubits(param_or(&p, "k", 0)?)?)?,
        Formula::P2rebits => rational_json("p2rebits", params, &p_2rebits(param_or(&p, "k", 0)?)?)?,
        Formula::P2quaterbits => rational_json("p2quaterbits", params, &p_2quaterbits(param_or(&p, "k", 0)?)?)?,
        Formula::U => {
            let u = u_closed(param(&p, "eta")?)?;
            let digits = param_or(&p, "digits", 40usize)?;
            decimal_json("u", params, sepprob::exactmath::highprec::to_decimal(&u, digits))
        }
        Formula::Chi => {
            let v = chi_catalog(param(&p, "d")?, param_or(&p, "k", 0.0)?, param(&p, "eps")?)?;
            decimal_json("chi", params, format!("{v:.17}"))
        }
        Formula::Master => {
            let v = master_chi(param(&p, "d")?, param(&p, "eps")?)?;
            decimal_json("master", params, format!("{v:.17}"))
        }
        Formula::Volume => {
            let ring: DivisionRing = param(&p, "field")?;
            let n: i64 = param(&p, "n")?;
            match param_or(&p, "measure", "lebesgue".to_string())?.as_str() {
                "lebesgue" => pi_rational_json("volume", params, &volume_lebesgue(ring, n)?)?,
                "hs" => surd_json("volume", params, &volume_hs(ring, n)?)?,
                other => return Err(format!("unknown measure `{other}` (lebesgue|hs)").into()),
            }
        }
        Formula::Mz => {
            let m: u32 = param(&p, "m")?;
            let r = parse_rational(p.get("r").map_or("0", String::as_str))?;
            let profile = milz_strunz_profile_exact(m, &r)?;
            let v = &milz_strunz_v0(m)? * &SurdValue::rational(profile);
            surd_json("mz", params, &v)?
        }
    };
    print_json(&out)?;
    Ok(())
}

fn parse_grid(s: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<f64> = s.split(':').map(str::parse).collect::<Result<_, _>>().map_err(|_| format!("bad grid `{s}`"))?;
    let [lo, hi, step] = parts[..] else {
        return Err(format!("grid `{s}` must be lo:hi:step").into());
    };
    if !(step > 0.0) || hi < lo {
        return Err(format!("grid `{s}` needs step > 0 and hi >= lo").into());
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    // rounded to 12 decimals so 0.1:1:0.1 prints as typed
    Ok((0..=n).map(|i| ((lo + i as f64 * step) * 1e12).round() / 1e12).collect())
}

fn chi_for(d: u32, k: f64) -> CliResult<ChiFunction> {
    if let Ok(c) = ChiFunction::catalog(d, k) {
        return Ok(c);
    }
    if k == 0.0 {
        return Ok(ChiFunction::master(d));
    }
    if k > 0.0 && k.fract() == 0.0 {
        return Ok(ChiFunction::numeric(d, k as u32, DEFAULT_CHI_NODES));
    }
    Err(format!("no χ̃ available for d = {d}, k = {k}").into())
}

fn cmd_quadrature(a: &QuadratureArgs) -> CliResult<()> {
    let mut w = output(None)?;
    let row = |w: &mut Box<dyn Write>, x: f64, v: f64, r: Option<f64>| -> io::Result<()> {
        match r {
            Some(r) => writeln!(w, "{x},{v},{r},{}", (v - r).abs()),
            None => writeln!(w, "{x},{v},,"),
        }
    };
    let nodes = a.nodes;
    if let Some(eta) = a.eta {
        let chi = chi_for(a.d, a.k)?;
        let v = u_eta_with(eta, &chi, nodes.unwrap_or(DEFAULT_NODES))?;
        let reference = (a.d == 2 && a.k == 0.0).then(|| u_closed(eta).map(|u| u.to_f64())).transpose()?;
        writeln!(w, "eta,value,reference_value,abs_err")?;
        row(&mut w, eta, v, reference)?;
    } else if a.sep_prob {
        let chi = chi_for(a.d, a.k)?;
        let v = sep_prob_general_with(a.d, a.k, &chi, nodes.unwrap_or(DEFAULT_NODES))?;
        let reference = if a.k.fract() == 0.0 {
            let k = a.k as i64;
            match a.d {
                1 => p_2rebits(k).ok(),
                2 => p_2qubits(k).ok(),
                4 => p_2quaterbits(k).ok(),
                _ => None,
            }
            .map(|r| r.to_f64())
        } else {
            None
        };
        writeln!(w, "k,value,reference_value,abs_err")?;
        row(&mut w, a.k, v, reference)?;
    } else {
        if a.k < 0.0 || a.k.fract() != 0.0 {
            return Err("constrained-cube quadrature needs integer k >= 0".into());
        }
        let grid = match (&a.epsilon, &a.eps_grid) {
            (Some(e), _) => vec![*e],
            (None, Some(g)) => parse_grid(g)?,
            (None, None) => parse_grid("0.1:1:0.1")?,
        };
        let method = match a.method {
            Method::Gl => ChiMethod::GaussLegendre { nodes: nodes.unwrap_or(DEFAULT_CHI_NODES) },
            Method::Qmc => ChiMethod::QuasiMonteCarlo { points: nodes.unwrap_or(DEFAULT_QMC_POINTS) },
        };
        writeln!(w, "epsilon,value,reference_value,abs_err")?;
        for eps in grid {
            let v = chi_numeric_with(a.d, a.k as u32, eps, method)?;
            row(&mut w, eps, v, chi_catalog(a.d, a.k, eps).ok())?;
        }
    }
    w.flush()?;
    Ok(())
}

fn parse_system(s: &str) -> CliResult<(usize, usize)> {
    let split = s
        .split_once(['x', 'X', '×'])
        .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
        .ok_or_else(|| format!("system `{s}` must look like 2x3"))?;
    if !matches!(split, (2, 2) | (2, 3) | (2, 4) | (2, 5) | (3, 3)) {
        return Err(format!("unsupported system `{s}` (2x2, 2x3, 2x4, 2x5, 3x3)").into());
    }
    Ok(split)
}

fn cmd_estimate(a: &EstimateArgs) -> CliResult<()> {
    let spec = SamplerSpec::new(a.field, parse_system(&a.system)?, a.k, a.family)?;
    let mut cfg = ExperimentConfig::new(spec, a.samples, a.seed);
    cfg.streams = a.streams;
    cfg.threads = a.threads;
    cfg.checkpoint = a.checkpoint.clone();
    cfg.ci_level = a.ci_level;
    let out = run_experiment(&cfg)?;
    let mut w = output(a.out.as_ref())?;
    serde_json::to_writer_pretty(&mut w, &out.report)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn cmd_conjecture(a: &ConjectureArgs) -> CliResult<()> {
    let found = conjecture_search(a.lo, a.hi, &a.primes, a.max_den, a.max_exp)?;
    let top: Vec<_> = found.iter().take(a.top).collect();
    let out = json!({"interval": [a.lo, a.hi], "total": found.len(), "candidates": top});
    print_json(&out)?;
    Ok(())
}

fn cmd_chi_fit(a: &ChiFitArgs) -> CliResult<()> {
    let mut cfg = ChiFitConfig::new(a.field, a.k, a.bins, a.samples, a.seed);
    cfg.streams = a.streams;
    cfg.threads = a.threads;
    let table = estimate_chi_empirical(&cfg)?;
    let mut w = output(a.out.as_ref())?;
    table.write_csv(&mut w)?;
    w.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Exact(a) => cmd_exact(a),
        Command::Quadrature(a) => cmd_quadrature(a),
        Command::Estimate(a) => cmd_estimate(a),
        Command::Conjecture(a) => cmd_conjecture(a),
        Command::ChiFit(a) => cmd_chi_fit(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        // reader went away, e.g. piped into `head`
        Err(e) if e.downcast_ref::<io::Error>().is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
