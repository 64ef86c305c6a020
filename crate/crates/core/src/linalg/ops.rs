use num_complex::Complex64;

use super::eigen::{eigenvalues, EigenWorkspace};
use super::matrix::{DensityMatrix, HermitianMatrix};
use super::LinalgError;

/// Subsystem whose indices are transposed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// Writes the partial transpose of the row-major `n×n` matrix `m`
/// (split `da × db`, index `a·db + b`) into `out`.
pub fn partial_transpose_into(m: &[Complex64], da: usize, db: usize, side: Side, out: &mut [Complex64]) {
    let n = da * db;
    for a in 0..da {
        for b in 0..db {
            let row = a * db + b;
            for a2 in 0..da {
                for b2 in 0..db {
                    let (r, c) = match side {
                        Side::B => (a * db + b2, a2 * db + b),
                        Side::A => (a2 * db + b, a * db + b2),
                    };
                    out[row * n + a2 * db + b2] = m[r * n + c];
                }
            }
        }
    }
}

pub fn partial_transpose(rho: &DensityMatrix, side: Side) -> Result<HermitianMatrix, LinalgError> {
    let (da, db) = rho.split().ok_or(LinalgError::Unsplit)?;
    let mut out = HermitianMatrix::zeros(rho.n());
    partial_transpose_into(rho.matrix().as_slice(), da, db, side, out.as_mut_slice());
    Ok(out)
}

/// Product of the eigenvalues; keeps the sign for indefinite input.
pub fn determinant(m: &HermitianMatrix) -> Result<f64, LinalgError> {
    Ok(eigenvalues(m)?.product())
}

/// In-place lower Cholesky factor of the row-major Hermitian `n×n` matrix
/// (upper triangle left untouched). Fails unless positive definite.
pub fn cholesky_in_place(m: &mut [Complex64], n: usize) -> Result<(), LinalgError> {
    for j in 0..n {
        let mut d = m[j * n + j].re;
        for k in 0..j {
            d -= m[j * n + k].norm_sqr();
        }
        if d.is_nan() || d <= 0.0 {
            return Err(LinalgError::SingularBlock);
        }
        let d = d.sqrt();
        m[j * n + j] = Complex64::new(d, 0.0);
        for i in j + 1..n {
            let mut s = m[i * n + j];
            for k in 0..j {
                s -= m[i * n + k] * m[j * n + k].conj();
            }
            m[i * n + j] = s / d;
        }
    }
    Ok(())
}

/// Singular-value ratio `σ_min/σ_max ∈ (0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct EpsilonRatio(f64);

impl EpsilonRatio {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// `ε = σ_min/σ_max` of `D₂^{1/2} D₁^{-1/2}` for a `2×m` state with diagonal
/// blocks `D₁` (upper left) and `D₂` (lower right).
///
/// The squared singular values are the eigenvalues of
/// `D₁^{-1/2} D₂ D₁^{-1/2}`, which is similar to `L⁻¹ D₂ L⁻†` for the
/// Cholesky factor `D₁ = LL†`.
pub fn epsilon_ratio(rho: &DensityMatrix) -> Result<EpsilonRatio, LinalgError> {
    let (da, m) = rho.split().ok_or(LinalgError::Unsplit)?;
    if da != 2 {
        return Err(LinalgError::Shape(format!("ε needs a 2×m split, got {da}×{m}")));
    }
    let mut ws = EpsilonWorkspace::default();
    ws.epsilon(rho.matrix().as_slice(), m)
}

/// Buffers for repeated [`epsilon_ratio`] evaluation.
#[derive(Clone, Debug, Default)]
pub struct EpsilonWorkspace {
    l: Vec<Complex64>,
    x: Vec<Complex64>,
    spec: Vec<f64>,
    eig: EigenWorkspace,
}

impl EpsilonWorkspace {
    /// `rho` is the row-major `2m×2m` matrix.
    pub fn epsilon(&mut self, rho: &[Complex64], m: usize) -> Result<EpsilonRatio, LinalgError> {
        let n = 2 * m;
        let zero = Complex64::new(0.0, 0.0);
        self.l.clear();
        self.l.extend((0..m * m).map(|idx| rho[(idx / m) * n + idx % m]));
        cholesky_in_place(&mut self.l, m)?;
        // X = L⁻¹ D₂ by forward substitution on each column, then L⁻¹ X†
        self.x.clear();
        self.x.resize(m * m, zero);
        let d2 = |i: usize, j: usize| rho[(m + i) * n + m + j];
        let l = &self.l;
        let x = &mut self.x;
        for col in 0..m {
            for i in 0..m {
                let mut s = d2(i, col);
                for k in 0..i {
                    s -= l[i * m + k] * x[k * m + col];
                }
                x[i * m + col] = s / l[i * m + i].re;
            }
        }
        // Y = L⁻¹ X†, Hermitian
        let xh: Vec<Complex64> = (0..m * m).map(|idx| x[(idx % m) * m + idx / m].conj()).collect();
        let mut y = vec![zero; m * m];
        for col in 0..m {
            for i in 0..m {
                let mut s = xh[i * m + col];
                for k in 0..i {
                    s -= l[i * m + k] * y[k * m + col];
                }
                y[i * m + col] = s / l[i * m + i].re;
            }
        }
        self.eig.eigenvalues_into(&y, m, &mut self.spec)?;
        let hi = self.spec[0];
        let lo = self.spec[m - 1];
        if !(lo > 0.0 && hi > 0.0) {
            return Err(LinalgError::SingularBlock);
        }
        Ok(EpsilonRatio((lo / hi).sqrt().min(1.0)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Field;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    /// Random full-rank state from a seeded Gram matrix.
    fn random_state(seed: &[f64], da: usize, db: usize) -> DensityMatrix {
        let n = da * db;
        let g: Vec<Complex64> = (0..n * n)
            .map(|i| Complex64::new(seed[(2 * i) % seed.len()], seed[(2 * i + 1) % seed.len()] + 0.01 * i as f64))
            .collect();
        let mut m = HermitianMatrix::from_fn(n, |i, j| (0..n).map(|k| g[i * n + k] * g[j * n + k].conj()).sum());
        for i in 0..n {
            m[(i, i)] += 0.05;
        }
        let tr = m.trace();
        m.scale(1.0 / tr);
        DensityMatrix::new(Field::Complex, Some((da, db)), m).unwrap()
    }

    #[test]
    fn bell_state_partial_transpose() {
        let pt = partial_transpose(&DensityMatrix::bell(), Side::B).unwrap();
        let s = eigenvalues(&pt).unwrap();
        assert!((s.min() + 0.5).abs() < 1e-14);
        assert!((determinant(&pt).unwrap() + 1.0 / 16.0).abs() < 1e-14);
    }

    #[test]
    fn maximally_mixed_determinant() {
        let rho = DensityMatrix::maximally_mixed(Field::Complex, 2, 2);
        assert!((determinant(rho.matrix()).unwrap() - 1.0 / 256.0).abs() < 1e-15);
        assert!((epsilon_ratio(&rho).unwrap().value() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn product_state_stays_psd() {
        let a = DensityMatrix::new(
            Field::Complex,
            None,
            HermitianMatrix::from_fn(2, |i, j| if i == j { c(0.5) } else { Complex64::new(0.2, 0.3 * (i as f64 - j as f64)) }),
        )
        .unwrap();
        let b = DensityMatrix::maximally_mixed(Field::Real, 1, 3);
        let rho = DensityMatrix::product(&a, &b);
        let pt = partial_transpose(&rho, Side::B).unwrap();
        assert!(eigenvalues(&pt).unwrap().min() > -1e-14);
    }

    #[test]
    fn epsilon_of_diagonal_state() {
        let m = HermitianMatrix::from_real_diagonal(&[0.5, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0]);
        let rho = DensityMatrix::new(Field::Real, Some((2, 2)), m).unwrap();
        let e = epsilon_ratio(&rho).unwrap().value();
        assert!((e - 1.0 / 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn epsilon_requires_definite_blocks_and_split() {
        let m = HermitianMatrix::from_real_diagonal(&[0.5, 0.0, 0.25, 0.25]);
        let rho = DensityMatrix::new(Field::Real, Some((2, 2)), m.clone()).unwrap();
        assert!(matches!(epsilon_ratio(&rho), Err(LinalgError::SingularBlock)));
        let unsplit = DensityMatrix::new(Field::Real, None, m).unwrap();
        assert!(matches!(epsilon_ratio(&unsplit), Err(LinalgError::Unsplit)));
    }

    proptest! {
        #[test]
        fn partial_transpose_invariants(seed in proptest::collection::vec(-1.0f64..1.0, 40), m in 2usize..=4) {
            let rho = random_state(&seed, 2, m);
            let pa = partial_transpose(&rho, Side::A).unwrap();
            let pb = partial_transpose(&rho, Side::B).unwrap();
            prop_assert!((pb.trace() - 1.0).abs() < 1e-12);
            prop_assert!((pb.frobenius_norm() - rho.matrix().frobenius_norm()).abs() < 1e-12);
            prop_assert!(pb.asymmetry() < 1e-15);
            let back = DensityMatrix::new(Field::Complex, Some((2, m)), pb.clone()).unwrap();
            prop_assert!(partial_transpose(&back, Side::B).unwrap().max_abs_diff(rho.matrix()) == 0.0);
            let sa = eigenvalues(&pa).unwrap();
            let sb = eigenvalues(&pb).unwrap();
            for (x, y) in sa.values().iter().zip(sb.values()) {
                prop_assert!((x - y).abs() < 1e-10);
            }
            let (da, db) = (determinant(&pa).unwrap(), determinant(&pb).unwrap());
            prop_assert!((da - db).abs() <= 1e-10 * da.abs().max(1e-300));
        }

        #[test]
        fn epsilon_swap_invariance(seed in proptest::collection::vec(-1.0f64..1.0, 40), m in 2usize..=4) {
            let rho = random_state(&seed, 2, m);
            let n = 2 * m;
            // swapping the qubit basis exchanges D₁ and D₂
            let perm = |i: usize| (i + m) % n;
            let swapped = HermitianMatrix::from_fn(n, |i, j| rho.matrix()[(perm(i), perm(j))]);
            let swapped = DensityMatrix::new(Field::Complex, Some((2, m)), swapped).unwrap();
            let e1 = epsilon_ratio(&rho).unwrap().value();
            let e2 = epsilon_ratio(&swapped).unwrap().value();
            prop_assert!(e1 > 0.0 && e1 <= 1.0);
            prop_assert!((e1 - e2).abs() < 1e-10);
        }
    }
}
