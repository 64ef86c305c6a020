//! Hermitian eigenvalues: Householder reduction to a real symmetric
//! tridiagonal matrix followed by implicit-shift QL.

use num_complex::Complex64;

use super::matrix::HermitianMatrix;
use super::{LinalgError, Spectrum, HERMITIAN_TOL};

const MAX_QL_SWEEPS: usize = 60;

/// Scratch buffers reused across calls in hot loops.
#[derive(Clone, Debug, Default)]
pub struct EigenWorkspace {
    a: Vec<Complex64>,
    v: Vec<Complex64>,
    p: Vec<Complex64>,
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl EigenWorkspace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Eigenvalues in descending order, written into `out`.
    ///
    /// Only the upper triangle of `m` (row-major, `n×n`) is read; the caller
    /// guarantees Hermiticity.
    pub fn eigenvalues_into(&mut self, m: &[Complex64], n: usize, out: &mut Vec<f64>) -> Result<(), LinalgError> {
        self.tridiagonalize(m, n);
        tql(&mut self.diag, &mut self.off)?;
        out.clear();
        out.extend_from_slice(&self.diag);
        out.sort_unstable_by(|a, b| b.total_cmp(a));
        Ok(())
    }

    fn tridiagonalize(&mut self, m: &[Complex64], n: usize) {
        let zero = Complex64::new(0.0, 0.0);
        self.a.clear();
        self.a.resize(n * n, zero);
        for i in 0..n {
            for j in i..n {
                let x = m[i * n + j];
                self.a[i * n + j] = x;
                self.a[j * n + i] = x.conj();
            }
            self.a[i * n + i].im = 0.0;
        }
        self.v.clear();
        self.v.resize(n, zero);
        self.p.clear();
        self.p.resize(n, zero);
        self.diag.clear();
        self.diag.resize(n, 0.0);
        self.off.clear();
        self.off.resize(n, 0.0);
        let a = &mut self.a;
        let v = &mut self.v;
        let p = &mut self.p;
        for k in 0..n.saturating_sub(2) {
            let lo = k + 1;
            let norm2: f64 = (lo..n).map(|i| a[i * n + k].norm_sqr()).sum();
            let norm = norm2.sqrt();
            let x0 = a[lo * n + k];
            if norm == 0.0 {
                continue;
            }
            let tail2 = norm2 - x0.norm_sqr();
            if tail2 <= f64::MIN_POSITIVE {
                continue;
            }
            let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
            let alpha = -phase * norm;
            // v = x - αe₁, normalised
            for i in lo..n {
                v[i] = a[i * n + k];
            }
            v[lo] -= alpha;
            let vnorm = (lo..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
            for vi in v[lo..n].iter_mut() {
                *vi /= vnorm;
            }
            // p = A v on the trailing block, γ = v†p
            let mut gamma = 0.0;
            for i in lo..n {
                let mut s = zero;
                for j in lo..n {
                    s += a[i * n + j] * v[j];
                }
                p[i] = s;
                gamma += (v[i].conj() * s).re;
            }
            // w = p - γv ; A ← A - 2vw† - 2wv†
            for i in lo..n {
                p[i] -= v[i] * gamma;
            }
            for i in lo..n {
                for j in lo..n {
                    a[i * n + j] -= (v[i] * p[j].conj() + p[i] * v[j].conj()) * 2.0;
                }
            }
            a[lo * n + k] = alpha;
            a[k * n + lo] = alpha.conj();
            for i in lo + 1..n {
                a[i * n + k] = zero;
                a[k * n + i] = zero;
            }
        }
        for i in 0..n {
            self.diag[i] = a[i * n + i].re;
            if i + 1 < n {
                // a diagonal unitary makes the off-diagonal real and nonnegative
                self.off[i] = a[(i + 1) * n + i].norm();
            }
        }
    }
}

/// Implicit-shift QL on a symmetric tridiagonal matrix (`off[i]` couples
/// `i` and `i+1`). Eigenvalues overwrite `diag`.
fn tql(diag: &mut [f64], off: &mut [f64]) -> Result<(), LinalgError> {
    let n = diag.len();
    if n == 0 {
        return Ok(());
    }
    off[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_SWEEPS {
                return Err(LinalgError::NoConvergence);
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

/// Descending spectrum of a Hermitian matrix.
pub fn eigenvalues(m: &HermitianMatrix) -> Result<Spectrum, LinalgError> {
    let asym = m.asymmetry();
    if asym > HERMITIAN_TOL {
        return Err(LinalgError::NotHermitian(asym));
    }
    let mut out = Vec::with_capacity(m.n());
    EigenWorkspace::new().eigenvalues_into(m.as_slice(), m.n(), &mut out)?;
    Ok(Spectrum::from_descending(out))
}
