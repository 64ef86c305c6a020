use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::criteria::SampleVerdict;

/// Counts accumulated over a set of samples drawn with one seed.
///
/// Merging is a field-wise sum (stream ids are a set union), so it is
/// associative and commutative on the counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialTally {
    pub samples: u64,
    pub ppt_hits: u64,
    /// PPT samples that also pass the Johnston spectral test.
    pub johnston_hits: u64,
    /// PPT samples with `det ρ^PT > det ρ`.
    pub det_gt_hits_given_ppt: u64,
    /// `neg_eig_histogram[j]` counts samples whose partial transpose has
    /// `j` negative eigenvalues.
    pub neg_eig_histogram: Vec<u64>,
    pub seed: u64,
    pub stream_ids: BTreeSet<u64>,
    /// Summed worker time, not elapsed time.
    pub wall_time_s: f64,
}

impl TrialTally {
    pub fn empty(seed: u64) -> Self {
        TrialTally {
            samples: 0,
            ppt_hits: 0,
            johnston_hits: 0,
            det_gt_hits_given_ppt: 0,
            neg_eig_histogram: Vec::new(),
            seed,
            stream_ids: BTreeSet::new(),
            wall_time_s: 0.0,
        }
    }

    pub fn record(&mut self, v: &SampleVerdict) {
        self.samples += 1;
        let j = v.neg_pt_eigs as usize;
        if self.neg_eig_histogram.len() <= j {
            self.neg_eig_histogram.resize(j + 1, 0);
        }
        self.neg_eig_histogram[j] += 1;
        if v.is_ppt {
            self.ppt_hits += 1;
            if v.johnston_separable == Some(true) {
                self.johnston_hits += 1;
            }
            if v.det_pt_gt_det {
                self.det_gt_hits_given_ppt += 1;
            }
        }
    }

    pub fn merge(&mut self, other: &TrialTally) -> Result<(), HarnessError> {
        if self.seed != other.seed {
            return Err(HarnessError::SeedMismatch(self.seed, other.seed));
        }
        self.samples += other.samples;
        self.ppt_hits += other.ppt_hits;
        self.johnston_hits += other.johnston_hits;
        self.det_gt_hits_given_ppt += other.det_gt_hits_given_ppt;
        if self.neg_eig_histogram.len() < other.neg_eig_histogram.len() {
            self.neg_eig_histogram.resize(other.neg_eig_histogram.len(), 0);
        }
        for (a, b) in self.neg_eig_histogram.iter_mut().zip(&other.neg_eig_histogram) {
            *a += b;
        }
        self.stream_ids.extend(other.stream_ids.iter().copied());
        self.wall_time_s += other.wall_time_s;
        Ok(())
    }

    pub fn merged(mut self, other: &TrialTally) -> Result<Self, HarnessError> {
        self.merge(other)?;
        Ok(self)
    }

    /// Copy with the timing field cleared, for bitwise comparison of counts.
    pub fn without_timing(&self) -> Self {
        TrialTally { wall_time_s: 0.0, ..self.clone() }
    }

    pub fn ppt_rate(&self) -> f64 {
        ratio(self.ppt_hits, self.samples)
    }

    pub fn johnston_rate(&self) -> f64 {
        ratio(self.johnston_hits, self.ppt_hits)
    }

    pub fn det_gt_rate(&self) -> f64 {
        ratio(self.det_gt_hits_given_ppt, self.ppt_hits)
    }

    pub fn is_consistent(&self) -> bool {
        self.ppt_hits <= self.samples
            && self.johnston_hits <= self.ppt_hits
            && self.det_gt_hits_given_ppt <= self.ppt_hits
            && self.neg_eig_histogram.iter().sum::<u64>() == self.samples
            && self.neg_eig_histogram.first().copied().unwrap_or(0) == self.ppt_hits
    }
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        f64::NAN
    } else {
        a as f64 / b as f64
    }
}
