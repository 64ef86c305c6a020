use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::LinalgError;

/// Scalar field of a sampled state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    #[serde(rename = "R")]
    Real,
    #[serde(rename = "C")]
    Complex,
}

impl FromStr for Field {
    type Err = LinalgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "R" | "r" | "real" => Ok(Field::Real),
            "C" | "c" | "complex" => Ok(Field::Complex),
            other => Err(LinalgError::UnknownField(other.to_string())),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Real => "R",
            Field::Complex => "C",
        })
    }
}

/// Dense square complex matrix, row-major, intended to hold Hermitian data.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn zeros(n: usize) -> Self {
        HermitianMatrix { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        HermitianMatrix { n, data }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Row-major entries; fails unless `data.len() == n²`.
    pub fn from_rows(n: usize, data: Vec<Complex64>) -> Result<Self, LinalgError> {
        if data.len() != n * n {
            return Err(LinalgError::Shape(format!("expected {} entries, got {}", n * n, data.len())));
        }
        Ok(HermitianMatrix { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    /// `max |m_ij − conj(m_ji)|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)].re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&mut self, s: f64) {
        for z in &mut self.data {
            *z *= s;
        }
    }

    /// Kronecker product `a ⊗ b`.
    pub fn kron(a: &HermitianMatrix, b: &HermitianMatrix) -> HermitianMatrix {
        let (na, nb) = (a.n, b.n);
        HermitianMatrix::from_fn(na * nb, |i, j| a[(i / nb, j / nb)] * b[(i % nb, j % nb)])
    }

    /// Projector `|ψ⟩⟨ψ|`.
    pub fn projector(psi: &[Complex64]) -> HermitianMatrix {
        HermitianMatrix::from_fn(psi.len(), |i, j| psi[i] * psi[j].conj())
    }

    /// Principal `m×m` block starting at row/column `offset`.
    pub fn block(&self, offset: usize, m: usize) -> HermitianMatrix {
        HermitianMatrix::from_fn(m, |i, j| self[(offset + i, offset + j)])
    }

    pub fn max_abs_diff(&self, other: &HermitianMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for HermitianMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for HermitianMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Hermitian, unit-trace state with an optional `dA × dB` bipartition.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    field: Field,
    split: Option<(usize, usize)>,
    matrix: HermitianMatrix,
}

/// Trace tolerance accepted by [`DensityMatrix::new`].
pub const TRACE_TOL: f64 = 1e-12;

impl DensityMatrix {
    /// Wraps `matrix`, checking Hermiticity, unit trace and the split shape.
    pub fn new(field: Field, split: Option<(usize, usize)>, matrix: HermitianMatrix) -> Result<Self, LinalgError> {
        let n = matrix.n();
        if let Some((a, b)) = split {
            if a * b != n {
                return Err(LinalgError::Shape(format!("split {a}x{b} does not match n={n}")));
            }
        }
        let asym = matrix.asymmetry();
        if asym > super::HERMITIAN_TOL {
            return Err(LinalgError::NotHermitian(asym));
        }
        let tr = matrix.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(LinalgError::Trace(tr));
        }
        Ok(DensityMatrix { field, split, matrix })
    }

    /// Skips validation; for samplers that guarantee the invariants.
    pub(crate) fn from_parts(field: Field, split: Option<(usize, usize)>, matrix: HermitianMatrix) -> Self {
        DensityMatrix { field, split, matrix }
    }

    /// `I/n`.
    pub fn maximally_mixed(field: Field, da: usize, db: usize) -> Self {
        let n = da * db;
        let mut m = HermitianMatrix::identity(n);
        m.scale(1.0 / n as f64);
        DensityMatrix { field, split: Some((da, db)), matrix: m }
    }

    /// `ρ_A ⊗ ρ_B`.
    pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> Self {
        let field = if a.field == Field::Complex || b.field == Field::Complex {
            Field::Complex
        } else {
            Field::Real
        };
        DensityMatrix {
            field,
            split: Some((a.n(), b.n())),
            matrix: HermitianMatrix::kron(&a.matrix, &b.matrix),
        }
    }

    /// Two-qubit Bell state `|Φ⁺⟩⟨Φ⁺|`.
    pub fn bell() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let z = Complex64::new(0.0, 0.0);
        let psi = [Complex64::new(s, 0.0), z, z, Complex64::new(s, 0.0)];
        DensityMatrix { field: Field::Real, split: Some((2, 2)), matrix: HermitianMatrix::projector(&psi) }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn split(&self) -> Option<(usize, usize)> {
        self.split
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> HermitianMatrix {
        self.matrix
    }
}
