//! Empirical `χ̃(ε)` for two-qubit (or two-rebit) states: PPT frequency
//! conditioned on the singular-value ratio `ε`, binned on `[0, 1]`.

use std::io::Write;

use serde::Serialize;

use super::runner::{execute, plan, DEFAULT_CHUNK_SAMPLES};
use super::stats::wald_ci;
use super::HarnessError;
use crate::criteria::Classifier;
use crate::linalg::{EpsilonWorkspace, Field};
use crate::quadrature::{ChiFunction, QuadratureError};
use crate::sampling::{Family, RandomStream, Sampler, SamplerSpec};

pub const MIN_BINS: usize = 10;

/// Quadrature nodes for the reference function when no closed form exists.
const REFERENCE_NODES: usize = 48;

#[derive(Clone, Debug)]
pub struct ChiFitConfig {
    pub field: Field,
    pub k: i64,
    pub bins: usize,
    pub samples: u64,
    pub seed: u64,
    pub streams: u64,
    pub threads: usize,
    pub ci_level: f64,
}

impl ChiFitConfig {
    pub fn new(field: Field, k: i64, bins: usize, samples: u64, seed: u64) -> Self {
        ChiFitConfig { field, k, bins, samples, seed, streams: 8, threads: 0, ci_level: 0.95 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChiBin {
    pub bin_lo: f64,
    pub bin_hi: f64,
    pub n: u64,
    pub hits: u64,
    pub rate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// Mean `ε` of the samples in the bin (midpoint when empty).
    pub eps_mean: f64,
    /// Reference `χ̃` at `eps_mean`.
    pub chi_ref: f64,
    pub residual: f64,
    pub empty: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChiFitTable {
    pub field: Field,
    pub k: i64,
    pub samples: u64,
    pub reference: String,
    pub rows: Vec<ChiBin>,
}

impl ChiFitTable {
    /// Largest `|residual|` over bins holding at least `min_n` samples.
    pub fn max_abs_residual(&self, min_n: u64) -> f64 {
        self.rows.iter().filter(|b| b.n >= min_n).map(|b| b.residual.abs()).fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "bin_lo,bin_hi,n,rate,ci_lo,ci_hi,chi_ref,residual")?;
        for b in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                b.bin_lo, b.bin_hi, b.n, b.rate, b.ci_lo, b.ci_hi, b.chi_ref, b.residual
            )?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
struct BinCounts {
    n: Vec<u64>,
    hits: Vec<u64>,
    eps_sum: Vec<f64>,
}

/// `χ̃_{d,k}` for the field's `d`: closed form where catalogued, the master
/// formula at `k = 0`, constrained-cube quadrature otherwise.
pub fn reference_chi(field: Field, k: i64) -> Result<ChiFunction, QuadratureError> {
    let d = match field {
        Field::Real => 1,
        Field::Complex => 2,
    };
    if let Ok(c) = ChiFunction::catalog(d, k as f64) {
        return Ok(c);
    }
    match k {
        0 => Ok(ChiFunction::master(d)),
        k if k > 0 => Ok(ChiFunction::numeric(d, k as u32, REFERENCE_NODES)),
        k => Err(QuadratureError::OutOfDomain(format!("no reference χ̃ for d = {d}, k = {k}"))),
    }
}

pub fn estimate_chi_empirical(cfg: &ChiFitConfig) -> Result<ChiFitTable, HarnessError> {
    if cfg.bins < MIN_BINS {
        return Err(HarnessError::Config(format!("need at least {MIN_BINS} bins, got {}", cfg.bins)));
    }
    if cfg.samples < 1 || cfg.streams < 1 {
        return Err(HarnessError::Config("samples and streams must be at least 1".into()));
    }
    let spec = SamplerSpec::new(cfg.field, (2, 2), cfg.k, Family::Full)?;
    let chi = reference_chi(cfg.field, cfg.k)?;
    let bins = cfg.bins;
    let units = plan(cfg.samples, cfg.streams, DEFAULT_CHUNK_SAMPLES);
    let parts = execute(&units, cfg.threads, |u| {
        let mut sampler = Sampler::new(spec)?;
        let mut classifier = Classifier::new();
        let mut ws = EpsilonWorkspace::default();
        let mut stream = RandomStream::at_chunk(cfg.seed, u.stream, u.chunk);
        let mut c = BinCounts { n: vec![0; bins], hits: vec![0; bins], eps_sum: vec![0.0; bins] };
        for _ in 0..u.count {
            let rho = sampler.sample_into(&mut stream);
            let eps = ws.epsilon(rho, 2)?.value();
            let v = classifier.classify_entries(rho, 2, 2)?;
            let b = ((eps * bins as f64) as usize).min(bins - 1);
            c.n[b] += 1;
            c.hits[b] += u64::from(v.is_ppt);
            c.eps_sum[b] += eps;
        }
        Ok(c)
    })?;
    let mut total = BinCounts { n: vec![0; bins], hits: vec![0; bins], eps_sum: vec![0.0; bins] };
    for p in &parts {
        for b in 0..bins {
            total.n[b] += p.n[b];
            total.hits[b] += p.hits[b];
            total.eps_sum[b] += p.eps_sum[b];
        }
    }
    let mut rows = Vec::with_capacity(bins);
    for b in 0..bins {
        let (lo, hi) = (b as f64 / bins as f64, (b + 1) as f64 / bins as f64);
        let n = total.n[b];
        let eps_mean = if n > 0 { total.eps_sum[b] / n as f64 } else { 0.5 * (lo + hi) };
        let chi_ref = chi.eval(eps_mean)?;
        let (rate, ci_lo, ci_hi) = if n > 0 {
            let ci = wald_ci(n, total.hits[b], cfg.ci_level)?;
            (total.hits[b] as f64 / n as f64, ci.lo, ci.hi)
        } else {
            (f64::NAN, f64::NAN, f64::NAN)
        };
        rows.push(ChiBin {
            bin_lo: lo,
            bin_hi: hi,
            n,
            hits: total.hits[b],
            rate,
            ci_lo,
            ci_hi,
            eps_mean,
            chi_ref,
            residual: rate - chi_ref,
            empty: n == 0,
        });
    }
    Ok(ChiFitTable { field: cfg.field, k: cfg.k, samples: cfg.samples, reference: chi.label().to_string(), rows })
}
