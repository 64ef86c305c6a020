//! Seeded random density matrices: induced measures via the Ginibre
//! construction `ρ = GG†/tr(GG†)`, and X-states.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{DensityMatrix, Field, HermitianMatrix};

#[derive(Debug, Error)]
pub enum SamplingError {
    #[error("environment dimension K = {0} must be at least 1")]
    EmptyEnvironment(i64),
    #[error("X-states are supported for n in {{4, 6, 9}}, got n = {0}")]
    XStateDimension(usize),
    #[error("X-state weighting needs k >= 0, got {0}")]
    XStateOrder(i64),
    #[error("unknown sampler family `{0}`")]
    UnknownFamily(String),
    #[error("invalid split {0}x{1}")]
    Split(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Full,
    #[serde(rename = "xstate")]
    XState,
}

impl FromStr for Family {
    type Err = SamplingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(Family::Full),
            "xstate" | "x_state" | "x" => Ok(Family::XState),
            other => Err(SamplingError::UnknownFamily(other.to_string())),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Full => "full",
            Family::XState => "xstate",
        })
    }
}

/// What to sample: field, bipartition, induced order `k` and family.
///
/// `k` is the exponent of the `det(ρ)^k` weight relative to the
/// Hilbert-Schmidt measure. A Wishart matrix `GG†` with `K` columns has
/// density `∝ det^{K-n}` over ℂ and `∝ det^{(K-n-1)/2}` over ℝ, so the
/// environment dimension is `K = n + k` over ℂ and `K = n + 1 + 2k` over ℝ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerSpec {
    pub field: Field,
    pub split: (usize, usize),
    pub k: i64,
    pub family: Family,
}

impl SamplerSpec {
    pub fn new(field: Field, split: (usize, usize), k: i64, family: Family) -> Result<Self, SamplingError> {
        let spec = SamplerSpec { field, split, k, family };
        spec.validate()?;
        Ok(spec)
    }

    pub fn n(&self) -> usize {
        self.split.0 * self.split.1
    }

    /// Columns of the Ginibre matrix `G`.
    pub fn environment_dim(&self) -> i64 {
        let n = self.n() as i64;
        match self.field {
            Field::Complex => n + self.k,
            Field::Real => n + 1 + 2 * self.k,
        }
    }

    pub fn validate(&self) -> Result<(), SamplingError> {
        let (a, b) = self.split;
        if a < 1 || b < 1 || a * b < 2 {
            return Err(SamplingError::Split(a, b));
        }
        if self.environment_dim() < 1 {
            return Err(SamplingError::EmptyEnvironment(self.environment_dim()));
        }
        if self.family == Family::XState {
            if ![4, 6, 9].contains(&self.n()) {
                return Err(SamplingError::XStateDimension(self.n()));
            }
            if self.k < 0 {
                return Err(SamplingError::XStateOrder(self.k));
            }
        }
        Ok(())
    }
}

/// Independent random stream keyed by `(seed, stream_id)`.
///
/// ChaCha8 with the seed as key and the stream id as the 64-bit nonce;
/// [`RandomStream::at_chunk`] jumps the block counter so every chunk of a
/// stream starts at a fixed, thread-independent position.
#[derive(Clone, Debug)]
pub struct RandomStream {
    rng: ChaCha8Rng,
}

/// Words reserved per chunk (2⁴⁰ 32-bit words).
const CHUNK_WORDS_LOG2: u32 = 40;

impl RandomStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RandomStream { rng }
    }

    pub fn at_chunk(seed: u64, stream_id: u64, chunk: u64) -> Self {
        let mut s = Self::new(seed, stream_id);
        s.rng.set_word_pos((chunk as u128) << CHUNK_WORDS_LOG2);
        s
    }

    #[inline]
    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// Reusable sampler for one [`SamplerSpec`].
#[derive(Clone, Debug)]
pub struct Sampler {
    spec: SamplerSpec,
    n: usize,
    cols: usize,
    g: Vec<Complex64>,
    rho: Vec<Complex64>,
    x: Option<XStateLaw>,
}

impl Sampler {
    pub fn new(spec: SamplerSpec) -> Result<Self, SamplingError> {
        spec.validate()?;
        let n = spec.n();
        let cols = spec.environment_dim() as usize;
        let x = match spec.family {
            Family::XState => Some(XStateLaw::new(spec.field, n, spec.k)),
            Family::Full => None,
        };
        Ok(Sampler {
            spec,
            n,
            cols,
            g: vec![Complex64::new(0.0, 0.0); n * cols],
            rho: vec![Complex64::new(0.0, 0.0); n * n],
            x,
        })
    }

    pub fn spec(&self) -> &SamplerSpec {
        &self.spec
    }

    /// Draws one state and returns its row-major entries (valid until the
    /// next call).
    pub fn sample_into(&mut self, stream: &mut RandomStream) -> &[Complex64] {
        match &self.x {
            Some(law) => law.sample(stream, &mut self.rho),
            None => self.sample_ginibre(stream),
        }
        &self.rho
    }

    pub fn sample(&mut self, stream: &mut RandomStream) -> DensityMatrix {
        let n = self.n;
        let entries = self.sample_into(stream).to_vec();
        let m = HermitianMatrix::from_rows(n, entries).expect("sampler buffer is n×n");
        DensityMatrix::from_parts(self.spec.field, Some(self.spec.split), m)
    }

    fn sample_ginibre(&mut self, stream: &mut RandomStream) {
        let (n, cols) = (self.n, self.cols);
        loop {
            match self.spec.field {
                Field::Real => {
                    for z in self.g.iter_mut() {
                        *z = Complex64::new(stream.normal(), 0.0);
                    }
                }
                Field::Complex => {
                    let s = std::f64::consts::FRAC_1_SQRT_2;
                    for z in self.g.iter_mut() {
                        let re = stream.normal();
                        let im = stream.normal();
                        *z = Complex64::new(re * s, im * s);
                    }
                }
            }
            let mut tr = 0.0;
            for i in 0..n {
                let gi = &self.g[i * cols..(i + 1) * cols];
                for j in i..n {
                    let gj = &self.g[j * cols..(j + 1) * cols];
                    let mut s = Complex64::new(0.0, 0.0);
                    for (a, b) in gi.iter().zip(gj) {
                        s += a * b.conj();
                    }
                    self.rho[i * n + j] = s;
                }
                self.rho[i * n + i].im = 0.0;
                tr += self.rho[i * n + i].re;
            }
            if tr > 0.0 {
                let inv = 1.0 / tr;
                for i in 0..n {
                    for j in i..n {
                        let v = self.rho[i * n + j] * inv;
                        self.rho[i * n + j] = v;
                        self.rho[j * n + i] = v.conj();
                    }
                }
                return;
            }
        }
    }
}

/// Exact X-state law: flat measure on the X-slice weighted by `det(ρ)^k`.
///
/// With diagonal `(a_i)` and anti-diagonal couplings `x_i` between `i` and
/// `n-1-i`, the slice is `|x_i|² ≤ a_i a_{n-1-i}`. Integrating out the
/// couplings leaves a Dirichlet law on the diagonal with exponents
/// `1 + k + s` on paired entries (`s = 1/2` real, `1` complex) and `1 + k`
/// on the unpaired centre; given the diagonal, `|x|²/(a b)` is
/// `Beta(s, k+1)` with uniform phase (complex) or random sign (real).
#[derive(Clone, Debug)]
struct XStateLaw {
    field: Field,
    n: usize,
    diag: Vec<Gamma<f64>>,
    coupling: Beta<f64>,
}

impl XStateLaw {
    fn new(field: Field, n: usize, k: i64) -> Self {
        let s = match field {
            Field::Real => 0.5,
            Field::Complex => 1.0,
        };
        let k = k as f64;
        let diag = (0..n)
            .map(|i| {
                let paired = i != n - 1 - i;
                let alpha = 1.0 + k + if paired { s } else { 0.0 };
                Gamma::new(alpha, 1.0).expect("positive shape")
            })
            .collect();
        let coupling = Beta::new(s, k + 1.0).expect("positive parameters");
        XStateLaw { field, n, diag, coupling }
    }

    fn sample(&self, stream: &mut RandomStream, rho: &mut [Complex64]) {
        let n = self.n;
        for z in rho.iter_mut() {
            *z = Complex64::new(0.0, 0.0);
        }
        let rng = stream.rng();
        let mut diag = [0.0f64; 9];
        let total = loop {
            let mut t = 0.0;
            for (d, g) in diag.iter_mut().zip(&self.diag) {
                *d = g.sample(rng);
                t += *d;
            }
            if t > 0.0 {
                break t;
            }
        };
        for (i, d) in diag.iter().take(n).enumerate() {
            rho[i * n + i] = Complex64::new(d / total, 0.0);
        }
        for i in 0..n / 2 {
            let j = n - 1 - i;
            let ab = rho[i * n + i].re * rho[j * n + j].re;
            let t: f64 = self.coupling.sample(rng);
            let r = (t * ab).sqrt();
            let x = match self.field {
                Field::Real => {
                    if rng.random::<bool>() {
                        Complex64::new(r, 0.0)
                    } else {
                        Complex64::new(-r, 0.0)
                    }
                }
                Field::Complex => {
                    let phi = rng.random::<f64>() * std::f64::consts::TAU;
                    Complex64::from_polar(r, phi)
                }
            };
            rho[i * n + j] = x;
            rho[j * n + i] = x.conj();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigenvalues;
    use statrs::distribution::{Beta as BetaDist, ContinuousCDF};

    fn spec(field: Field, split: (usize, usize), k: i64, family: Family) -> SamplerSpec {
        SamplerSpec::new(field, split, k, family).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(SamplerSpec::new(Field::Complex, (2, 3), -6, Family::Full).is_err());
        assert!(SamplerSpec::new(Field::Complex, (2, 3), -5, Family::Full).is_ok());
        assert!(SamplerSpec::new(Field::Real, (2, 3), -3, Family::Full).is_ok());
        assert!(SamplerSpec::new(Field::Real, (2, 3), -4, Family::Full).is_err());
        assert_eq!(SamplerSpec::new(Field::Real, (2, 2), 1, Family::Full).unwrap().environment_dim(), 7);
        assert!(SamplerSpec::new(Field::Real, (2, 4), 0, Family::XState).is_err());
        assert!(SamplerSpec::new(Field::Real, (2, 2), -1, Family::XState).is_err());
        assert!(SamplerSpec::new(Field::Real, (3, 3), 0, Family::XState).is_ok());
    }

    #[test]
    fn deterministic_per_stream() {
        let s = spec(Field::Complex, (2, 2), 0, Family::Full);
        let a = Sampler::new(s).unwrap().sample(&mut RandomStream::new(7, 3));
        let b = Sampler::new(s).unwrap().sample(&mut RandomStream::new(7, 3));
        let c = Sampler::new(s).unwrap().sample(&mut RandomStream::new(7, 4));
        assert_eq!(a.matrix(), b.matrix());
        assert_ne!(a.matrix(), c.matrix());
        let d = Sampler::new(s).unwrap().sample(&mut RandomStream::at_chunk(7, 3, 1));
        assert_ne!(a.matrix(), d.matrix());
    }

    #[test]
    fn samples_are_states() {
        for (field, split, k, family) in [
            (Field::Complex, (2, 3), 0, Family::Full),
            (Field::Real, (2, 4), 1, Family::Full),
            (Field::Complex, (2, 2), 2, Family::XState),
            (Field::Real, (3, 3), 0, Family::XState),
            (Field::Real, (2, 3), 0, Family::XState),
        ] {
            let mut sampler = Sampler::new(spec(field, split, k, family)).unwrap();
            let mut stream = RandomStream::new(11, 0);
            for _ in 0..2000 {
                let rho = sampler.sample(&mut stream);
                let checked = DensityMatrix::new(field, Some(split), rho.matrix().clone()).unwrap();
                let s = eigenvalues(checked.matrix()).unwrap();
                assert!(s.min() > -1e-12);
                assert!((s.sum() - 1.0).abs() < 1e-10);
                if field == Field::Real {
                    assert!(rho.matrix().as_slice().iter().all(|z| z.im == 0.0));
                }
            }
        }
    }

    #[test]
    fn rank_deficient_for_negative_k() {
        let mut sampler = Sampler::new(spec(Field::Complex, (2, 3), -2, Family::Full)).unwrap();
        let mut stream = RandomStream::new(5, 0);
        for _ in 0..200 {
            let s = eigenvalues(sampler.sample(&mut stream).matrix()).unwrap();
            assert!(s.values()[4].abs() < 1e-12 && s.values()[5].abs() < 1e-12);
        }
    }

    #[test]
    fn xstate_support_is_diagonal_and_antidiagonal() {
        for split in [(2, 2), (2, 3), (3, 3)] {
            let mut sampler = Sampler::new(spec(Field::Complex, split, 1, Family::XState)).unwrap();
            let rho = sampler.sample(&mut RandomStream::new(1, 1));
            let n = rho.n();
            for i in 0..n {
                for j in 0..n {
                    if i != j && i + j != n - 1 {
                        assert_eq!(rho.matrix()[(i, j)], Complex64::new(0.0, 0.0));
                    }
                }
            }
        }
    }

    /// Kolmogorov-Smirnov distance of a sample against a continuous CDF.
    fn ks_distance(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
        xs.sort_by(f64::total_cmp);
        let n = xs.len() as f64;
        xs.iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = cdf(x);
                (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn xstate_diagonal_marginal() {
        // flat slice measure: each diagonal entry is Beta(α_i, Σα - α_i) with
        // α = 1 + s on paired entries
        let samples = 100_000;
        for (field, s) in [(Field::Complex, 1.0), (Field::Real, 0.5)] {
            let mut sampler = Sampler::new(spec(field, (2, 2), 0, Family::XState)).unwrap();
            let mut stream = RandomStream::new(2024, 0);
            let xs: Vec<f64> = (0..samples).map(|_| sampler.sample_into(&mut stream)[0].re).collect();
            let alpha = 1.0 + s;
            let beta = BetaDist::new(alpha, 3.0 * alpha).unwrap();
            let d = ks_distance(xs, |x| beta.cdf(x));
            // critical value at the 1e-3 level: 1.95/√n
            assert!(d < 1.95 / (samples as f64).sqrt(), "{field}: D = {d}");
        }
    }

    #[test]
    fn hilbert_schmidt_eigenvalue_moments() {
        // mean ordered spectrum of 4×4 HS states, against an independent
        // Box-Muller Ginibre construction
        let samples = 40_000;
        let mut sampler = Sampler::new(spec(Field::Complex, (2, 2), 0, Family::Full)).unwrap();
        let mut stream = RandomStream::new(99, 0);
        let mut mean = [0.0; 4];
        for _ in 0..samples {
            let s = eigenvalues(sampler.sample(&mut stream).matrix()).unwrap();
            for (m, v) in mean.iter_mut().zip(s.values()) {
                *m += v / samples as f64;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(12345);
        let mut box_muller = || {
            let u1: f64 = 1.0 - rng.random::<f64>();
            let u2: f64 = rng.random();
            (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
        };
        let mut reference = [0.0; 4];
        for _ in 0..samples {
            let g: Vec<Complex64> = (0..16).map(|_| Complex64::new(box_muller(), box_muller())).collect();
            let m = HermitianMatrix::from_fn(4, |i, j| (0..4).map(|k| g[i * 4 + k] * g[j * 4 + k].conj()).sum());
            let tr = m.trace();
            let s = eigenvalues(&m).unwrap();
            for (r, v) in reference.iter_mut().zip(s.values()) {
                *r += v / tr / samples as f64;
            }
        }
        for (m, r) in mean.iter().zip(&reference) {
            assert!((m - r).abs() < 0.004, "{mean:?} vs {reference:?}");
        }
        assert!((mean.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
