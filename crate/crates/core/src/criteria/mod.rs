//! Per-sample classification: PPT test, negative partial-transpose
//! eigenvalue count, the determinantal inequality `det ρ^PT > det ρ`, and
//! the Johnston separability-from-spectrum test for `2×m` systems.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{partial_transpose_into, DensityMatrix, EigenWorkspace, LinalgError, Side, Spectrum};

/// Eigenvalues of `ρ^PT` above `-PPT_TOL · tr ρ` count as nonnegative.
pub const PPT_TOL: f64 = 1e-13;

#[derive(Debug, Error)]
pub enum CriteriaError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("Johnston test needs a 2m-entry spectrum, got {len} entries for m = {m}")]
    JohnstonShape { len: usize, m: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SampleVerdict {
    pub is_ppt: bool,
    pub neg_pt_eigs: u8,
    pub det_pt_gt_det: bool,
    /// Evaluated only for PPT samples of `2×m` systems.
    pub johnston_separable: Option<bool>,
}

/// `λ₁ < λ_{2m-1} + 2√(λ_{2m-2} λ_{2m})` on a descending spectrum; negative
/// round-off in the smallest eigenvalues is clamped to zero. Ties are false.
pub fn johnston_from_spectrum(s: &Spectrum, m: usize) -> Result<bool, CriteriaError> {
    johnston(s.values(), m)
}

fn johnston(v: &[f64], m: usize) -> Result<bool, CriteriaError> {
    if m < 2 || v.len() != 2 * m {
        return Err(CriteriaError::JohnstonShape { len: v.len(), m });
    }
    let n = 2 * m;
    let l = |i: usize| v[i - 1].max(0.0);
    Ok(l(1) < l(n - 1) + 2.0 * (l(n - 2) * l(n)).sqrt())
}

/// Reusable buffers for classifying many samples of one shape.
#[derive(Clone, Debug, Default)]
pub struct Classifier {
    pt: Vec<Complex64>,
    pt_spec: Vec<f64>,
    rho_spec: Vec<f64>,
    eig: EigenWorkspace,
}

impl Classifier {
    pub fn new() -> Self {
        Self::default()
    }

    /// Classifies the row-major state `rho` with split `da × db`; the
    /// partial transpose is taken over `B`.
    pub fn classify_entries(&mut self, rho: &[Complex64], da: usize, db: usize) -> Result<SampleVerdict, CriteriaError> {
        let n = da * db;
        self.pt.resize(n * n, Complex64::new(0.0, 0.0));
        partial_transpose_into(rho, da, db, Side::B, &mut self.pt);
        self.eig.eigenvalues_into(&self.pt, n, &mut self.pt_spec)?;
        let trace: f64 = (0..n).map(|i| rho[i * n + i].re).sum();
        let tol = PPT_TOL * trace;
        let neg = self.pt_spec.iter().filter(|&&x| x < -tol).count();
        let is_ppt = neg == 0;
        let need_rho = is_ppt || neg % 2 == 0;
        let (det_pt_gt_det, johnston_separable) = if need_rho {
            self.eig.eigenvalues_into(rho, n, &mut self.rho_spec)?;
            let det_pt: f64 = self.pt_spec.iter().product();
            let det: f64 = self.rho_spec.iter().product();
            let j = if is_ppt && da == 2 { Some(johnston(&self.rho_spec, db)?) } else { None };
            (det_pt > det, j)
        } else {
            // an odd number of negative eigenvalues makes det ρ^PT < 0 ≤ det ρ
            (false, None)
        };
        Ok(SampleVerdict {
            is_ppt,
            neg_pt_eigs: neg as u8,
            det_pt_gt_det,
            johnston_separable,
        })
    }

    /// Spectrum of `ρ^PT` from the last classification.
    pub fn last_pt_spectrum(&self) -> &[f64] {
        &self.pt_spec
    }
}

pub fn classify(rho: &DensityMatrix) -> Result<SampleVerdict, CriteriaError> {
    let (da, db) = rho.split().ok_or(LinalgError::Unsplit)?;
    Classifier::new().classify_entries(rho.matrix().as_slice(), da, db)
}

/// `det ρ^PT > det ρ`, strictly.
pub fn det_inequality(rho: &DensityMatrix) -> Result<bool, CriteriaError> {
    let pt = crate::linalg::partial_transpose(rho, Side::B)?;
    Ok(crate::linalg::determinant(&pt)? > crate::linalg::determinant(rho.matrix())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{Field, HermitianMatrix};
    use crate::sampling::{Family, RandomStream, Sampler, SamplerSpec};

    #[test]
    fn bell_state() {
        let v = classify(&DensityMatrix::bell()).unwrap();
        assert!(!v.is_ppt);
        assert_eq!(v.neg_pt_eigs, 1);
        assert_eq!(v.johnston_separable, None);
        assert!(!v.det_pt_gt_det);
    }

    #[test]
    fn maximally_mixed_and_product() {
        let rho = DensityMatrix::maximally_mixed(Field::Complex, 2, 3);
        let v = classify(&rho).unwrap();
        assert!(v.is_ppt && !v.det_pt_gt_det);
        assert_eq!(v.johnston_separable, Some(true));
        assert!(!det_inequality(&rho).unwrap());
        let a = DensityMatrix::new(
            Field::Complex,
            None,
            HermitianMatrix::from_fn(2, |i, j| match (i, j) {
                (0, 0) => Complex64::new(0.7, 0.0),
                (1, 1) => Complex64::new(0.3, 0.0),
                (0, 1) => Complex64::new(0.1, 0.4),
                _ => Complex64::new(0.1, -0.4),
            }),
        )
        .unwrap();
        let b = DensityMatrix::maximally_mixed(Field::Real, 1, 3);
        assert!(classify(&DensityMatrix::product(&a, &b)).unwrap().is_ppt);
    }

    #[test]
    fn johnston_examples() {
        let uniform = Spectrum::new(vec![1.0 / 6.0; 6]);
        assert!(johnston_from_spectrum(&uniform, 3).unwrap());
        let pure = Spectrum::new(vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(!johnston_from_spectrum(&pure, 3).unwrap());
        let s = Spectrum::new(vec![0.3, 0.2, 0.15, 0.15, 0.1, 0.1]);
        assert!(johnston_from_spectrum(&s, 3).unwrap());
        // equality is not separable-from-spectrum
        let tie = Spectrum::new(vec![0.5, 0.25, 0.25, 0.0]);
        assert!(!johnston_from_spectrum(&tie, 2).unwrap());
        assert!(johnston_from_spectrum(&uniform, 2).is_err());
    }

    #[test]
    fn verdict_invariants_on_random_states() {
        let mut classifier = Classifier::new();
        for (split, k) in [((2, 2), 0), ((2, 3), 0), ((2, 3), 1), ((2, 3), -1)] {
            let spec = SamplerSpec::new(Field::Complex, split, k, Family::Full).unwrap();
            let mut sampler = Sampler::new(spec).unwrap();
            let mut stream = RandomStream::new(3, 0);
            for _ in 0..20_000 {
                let rho = sampler.sample_into(&mut stream).to_vec();
                let v = classifier.classify_entries(&rho, split.0, split.1).unwrap();
                assert_eq!(v.is_ppt, v.neg_pt_eigs == 0);
                if v.johnston_separable == Some(true) {
                    assert!(v.is_ppt);
                }
                assert_eq!(v.johnston_separable.is_some(), v.is_ppt);
                let max_neg = if split.1 == 2 { 1 } else { 2 };
                assert!(v.neg_pt_eigs <= max_neg);
                // transposing A instead of B leaves the determinant unchanged
                let m = HermitianMatrix::from_rows(split.0 * split.1, rho).unwrap();
                let dm = DensityMatrix::new(Field::Complex, Some(split), m).unwrap();
                let det_a = crate::linalg::determinant(&crate::linalg::partial_transpose(&dm, Side::A).unwrap()).unwrap();
                let det_b = crate::linalg::determinant(&crate::linalg::partial_transpose(&dm, Side::B).unwrap()).unwrap();
                let det = crate::linalg::determinant(dm.matrix()).unwrap();
                assert!((det_a - det_b).abs() <= 1e-9 * det_b.abs() + 1e-30);
                if (det_b - det).abs() > 1e-9 * det.abs() {
                    assert_eq!(v.det_pt_gt_det, det_b > det);
                }
            }
        }
    }
}
