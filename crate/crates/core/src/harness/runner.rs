//! Parallel experiment execution.
//!
//! `samples` are split round-robin over `streams`: stream `s` draws
//! `⌊N/T⌋ + [s < N mod T]` samples. Each stream is cut into chunks of
//! `chunk_samples`; chunk `c` of stream `s` starts its generator at
//! [`RandomStream::at_chunk`]`(seed, s, c)`. Chunks are the unit of work
//! and of checkpointing, and results are merged in `(stream, chunk)` order,
//! so the tally depends only on `(seed, streams, samples, chunk_samples)`.

use std::collections::HashMap;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::{wald_ci, CiMethod};
use super::{HarnessError, TrialTally};
use crate::criteria::{Classifier, PPT_TOL};
use crate::linalg::Field;
use crate::sampling::{Family, RandomStream, Sampler, SamplerSpec};

pub const DEFAULT_CHUNK_SAMPLES: u64 = 1 << 16;

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub spec: SamplerSpec,
    pub target_samples: u64,
    pub seed: u64,
    pub streams: u64,
    /// Worker threads; `0` uses the rayon default.
    pub threads: usize,
    /// JSONL file of completed chunks, appended as they finish.
    pub checkpoint: Option<PathBuf>,
    pub ci_level: f64,
    pub chunk_samples: u64,
}

impl ExperimentConfig {
    pub fn new(spec: SamplerSpec, target_samples: u64, seed: u64) -> Self {
        ExperimentConfig {
            spec,
            target_samples,
            seed,
            streams: 8,
            threads: 0,
            checkpoint: None,
            ci_level: 0.95,
            chunk_samples: DEFAULT_CHUNK_SAMPLES,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        self.spec.validate()?;
        if self.target_samples < 1 {
            return Err(HarnessError::Config("target_samples must be at least 1".into()));
        }
        if self.streams < 1 || self.chunk_samples < 1 {
            return Err(HarnessError::Config("streams and chunk_samples must be at least 1".into()));
        }
        if !(self.ci_level > 0.0 && self.ci_level < 1.0) {
            return Err(HarnessError::Config(format!("ci_level {} outside (0, 1)", self.ci_level)));
        }
        Ok(())
    }
}

/// One chunk of one stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct WorkUnit {
    pub stream: u64,
    pub chunk: u64,
    pub count: u64,
}

pub(crate) fn plan(samples: u64, streams: u64, chunk_samples: u64) -> Vec<WorkUnit> {
    let mut units = Vec::new();
    for stream in 0..streams {
        let mut left = samples / streams + u64::from(stream < samples % streams);
        let mut chunk = 0;
        while left > 0 {
            let count = left.min(chunk_samples);
            units.push(WorkUnit { stream, chunk, count });
            left -= count;
            chunk += 1;
        }
    }
    units
}

/// Runs `f` over `units` on a pool of `threads` workers and returns the
/// results in `units` order.
pub(crate) fn execute<T, F>(units: &[WorkUnit], threads: usize, f: F) -> Result<Vec<T>, HarnessError>
where
    T: Send,
    F: Fn(&WorkUnit) -> Result<T, HarnessError> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| HarnessError::Config(e.to_string()))?;
    pool.install(|| units.par_iter().map(&f).collect())
}

fn run_unit(spec: &SamplerSpec, seed: u64, unit: &WorkUnit) -> Result<TrialTally, HarnessError> {
    let start = Instant::now();
    let (da, db) = spec.split;
    let mut sampler = Sampler::new(*spec)?;
    let mut classifier = Classifier::new();
    let mut stream = RandomStream::at_chunk(seed, unit.stream, unit.chunk);
    let mut tally = TrialTally::empty(seed);
    tally.stream_ids.insert(unit.stream);
    tally.neg_eig_histogram = vec![0; spec.n() + 1];
    for _ in 0..unit.count {
        let rho = sampler.sample_into(&mut stream);
        let v = classifier.classify_entries(rho, da, db)?;
        tally.record(&v);
    }
    tally.wall_time_s = start.elapsed().as_secs_f64();
    Ok(tally)
}

#[derive(Debug, Serialize, Deserialize)]
struct CheckpointRecord {
    spec: SamplerSpec,
    samples: u64,
    streams: u64,
    chunk_samples: u64,
    stream: u64,
    chunk: u64,
    tally: TrialTally,
}

fn checkpoint_error(path: &Path, reason: impl Into<String>) -> HarnessError {
    HarnessError::Checkpoint { path: path.display().to_string(), reason: reason.into() }
}

/// Reads completed chunks. A torn final line (interrupted write) is cut off
/// the file so later appends start on a fresh line.
fn load_checkpoint(path: &Path, cfg: &ExperimentConfig) -> Result<HashMap<(u64, u64), TrialTally>, HarnessError> {
    let mut done = HashMap::new();
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(done),
        Err(e) => return Err(e.into()),
    };
    let mut good_len = 0;
    let mut lines = text.split_inclusive('\n').enumerate().peekable();
    while let Some((i, line)) = lines.next() {
        let is_last = lines.peek().is_none();
        if line.trim().is_empty() {
            good_len += line.len();
            continue;
        }
        let rec: CheckpointRecord = match serde_json::from_str(line) {
            Ok(r) if line.ends_with('\n') => r,
            Ok(_) => break,
            Err(_) if is_last => break,
            Err(e) => return Err(checkpoint_error(path, format!("line {}: {e}", i + 1))),
        };
        if rec.spec != cfg.spec
            || rec.samples != cfg.target_samples
            || rec.streams != cfg.streams
            || rec.chunk_samples != cfg.chunk_samples
            || rec.tally.seed != cfg.seed
        {
            return Err(checkpoint_error(path, "written by a different experiment configuration"));
        }
        done.insert((rec.stream, rec.chunk), rec.tally);
        good_len += line.len();
    }
    if good_len < text.len() {
        OpenOptions::new().write(true).open(path)?.set_len(good_len as u64)?;
    }
    Ok(done)
}

/// Result of [`run_experiment`].
#[derive(Clone, Debug)]
pub struct ExperimentOutcome {
    pub tally: TrialTally,
    pub report: ExperimentReport,
    /// Chunks taken from the checkpoint instead of being recomputed.
    pub resumed_chunks: usize,
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome, HarnessError> {
    cfg.validate()?;
    let start = Instant::now();
    let units = plan(cfg.target_samples, cfg.streams, cfg.chunk_samples);
    let done = match &cfg.checkpoint {
        Some(p) => load_checkpoint(p, cfg)?,
        None => HashMap::new(),
    };
    let writer = match &cfg.checkpoint {
        Some(p) => Some((p.as_path(), Mutex::new(OpenOptions::new().create(true).append(true).open(p)?))),
        None => None,
    };
    let resumed_chunks = units.iter().filter(|u| done.contains_key(&(u.stream, u.chunk))).count();
    let tallies = execute(&units, cfg.threads, |u| {
        if let Some(t) = done.get(&(u.stream, u.chunk)) {
            return Ok(t.clone());
        }
        let tally = run_unit(&cfg.spec, cfg.seed, u)?;
        if let Some((path, file)) = &writer {
            let rec = CheckpointRecord {
                spec: cfg.spec,
                samples: cfg.target_samples,
                streams: cfg.streams,
                chunk_samples: cfg.chunk_samples,
                stream: u.stream,
                chunk: u.chunk,
                tally: tally.clone(),
            };
            let mut line = serde_json::to_string(&rec)?;
            line.push('\n');
            let mut f = file.lock().map_err(|_| checkpoint_error(path, "writer poisoned"))?;
            f.write_all(line.as_bytes())?;
            f.flush()?;
        }
        Ok(tally)
    })?;
    let mut tally = TrialTally::empty(cfg.seed);
    tally.neg_eig_histogram = vec![0; cfg.spec.n() + 1];
    for t in &tallies {
        tally.merge(t)?;
    }
    let report = ExperimentReport::new(cfg, &tally, start.elapsed().as_secs_f64())?;
    Ok(ExperimentOutcome { tally, report, resumed_chunks })
}

#[derive(Clone, Debug, Serialize)]
pub struct RateReport {
    pub hits: u64,
    /// Fraction of PPT samples.
    pub rate: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BuildInfo {
    pub version: &'static str,
    pub profile: &'static str,
    pub float: &'static str,
    pub rng: &'static str,
    pub ppt_tol: f64,
    pub chunk_samples: u64,
}

impl BuildInfo {
    pub fn current(chunk_samples: u64) -> Self {
        BuildInfo {
            version: env!("CARGO_PKG_VERSION"),
            profile: if cfg!(debug_assertions) { "debug" } else { "release" },
            float: "f64",
            rng: "ChaCha8, key = seed, nonce = stream id",
            ppt_tol: PPT_TOL,
            chunk_samples,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub system: String,
    pub field: Field,
    pub k: i64,
    pub family: Family,
    pub samples: u64,
    pub ppt_hits: u64,
    pub estimate: f64,
    pub ci: [f64; 2],
    pub ci_level: f64,
    pub ci_method: CiMethod,
    pub johnston: RateReport,
    pub det_gt: RateReport,
    pub neg_eig_histogram: Vec<u64>,
    pub seed: u64,
    pub streams: u64,
    pub wall_time_s: f64,
    pub build_info: BuildInfo,
}

impl ExperimentReport {
    pub fn new(cfg: &ExperimentConfig, tally: &TrialTally, wall_time_s: f64) -> Result<Self, HarnessError> {
        let ci = wald_ci(tally.samples, tally.ppt_hits, cfg.ci_level)?;
        Ok(ExperimentReport {
            system: format!("{}x{}", cfg.spec.split.0, cfg.spec.split.1),
            field: cfg.spec.field,
            k: cfg.spec.k,
            family: cfg.spec.family,
            samples: tally.samples,
            ppt_hits: tally.ppt_hits,
            estimate: tally.ppt_rate(),
            ci: [ci.lo, ci.hi],
            ci_level: cfg.ci_level,
            ci_method: ci.method,
            johnston: RateReport { hits: tally.johnston_hits, rate: tally.johnston_rate() },
            det_gt: RateReport { hits: tally.det_gt_hits_given_ppt, rate: tally.det_gt_rate() },
            neg_eig_histogram: tally.neg_eig_histogram.clone(),
            seed: cfg.seed,
            streams: cfg.streams,
            wall_time_s,
            build_info: BuildInfo::current(cfg.chunk_samples),
        })
    }
}

/// Fraction of PPT samples with `det ρ^PT > det ρ`.
#[derive(Clone, Debug, Serialize)]
pub struct EquipartitionReport {
    pub ppt_samples: u64,
    pub det_gt_hits: u64,
    pub fraction: f64,
    pub ci: [f64; 2],
    /// Binomial standard error of `fraction`.
    pub sigma: f64,
}

pub fn equipartition_from_tally(tally: &TrialTally, level: f64) -> Result<EquipartitionReport, HarnessError> {
    let n = tally.ppt_hits;
    let ci = wald_ci(n, tally.det_gt_hits_given_ppt, level)?;
    let p = tally.det_gt_rate();
    Ok(EquipartitionReport {
        ppt_samples: n,
        det_gt_hits: tally.det_gt_hits_given_ppt,
        fraction: p,
        ci: [ci.lo, ci.hi],
        sigma: (p * (1.0 - p) / n as f64).sqrt(),
    })
}

pub fn equipartition_report(cfg: &ExperimentConfig) -> Result<EquipartitionReport, HarnessError> {
    let out = run_experiment(cfg)?;
    equipartition_from_tally(&out.tally, cfg.ci_level)
}
