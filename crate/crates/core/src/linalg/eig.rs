use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex;

use super::matrix::HermitianMatrix;
use crate::error::{Error, Result};
use crate::scalar::{creal, Real};

/// Eigen-decomposition of a Hermitian matrix, values sorted descending.
#[derive(Clone, Debug)]
pub struct EigenPairs<T: Real> {
    pub values: DVector<T>,
    /// Orthonormal eigenvectors, one per column, aligned with `values`.
    pub vectors: DMatrix<Complex<T>>,
}

impl<T: Real> EigenPairs<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// First `r` eigenvector columns.
    pub fn leading(&self, r: usize) -> DMatrix<Complex<T>> {
        self.vectors.columns(0, r).into_owned()
    }

    /// `Σ_{i∈idx} λ_i u_i u_i^H`.
    pub fn reconstruct_from(&self, idx: impl IntoIterator<Item = usize>) -> DMatrix<Complex<T>> {
        let n = self.vectors.nrows();
        let mut out = DMatrix::zeros(n, n);
        for i in idx {
            let u = self.vectors.column(i);
            let lam = self.values[i];
            if lam == T::zero() {
                continue;
            }
            out.ger(creal(lam), &u, &u.conjugate(), creal(T::one()));
        }
        out
    }

    pub fn reconstruct(&self) -> DMatrix<Complex<T>> {
        self.reconstruct_from(0..self.len())
    }
}

/// Hermitian eigen-decomposition; eigenvalues descending.
pub fn hermitian_eig<T: Real>(m: &HermitianMatrix<T>) -> EigenPairs<T> {
    eig_dense(m.as_matrix().clone())
}

/// Same as [`hermitian_eig`] for raw storage that is Hermitian by construction.
pub(crate) fn eig_dense<T: Real>(m: DMatrix<Complex<T>>) -> EigenPairs<T> {
    let n = m.nrows();
    if n == 0 {
        return EigenPairs {
            values: DVector::zeros(0),
            vectors: DMatrix::zeros(0, 0),
        };
    }
    let se = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[b].partial_cmp(&se.eigenvalues[a]).expect("finite eigenvalues"));
    let values = DVector::from_iterator(n, order.iter().map(|&i| se.eigenvalues[i]));
    let vectors = DMatrix::from_fn(n, n, |r, c| se.eigenvectors[(r, order[c])]);
    EigenPairs { values, vectors }
}

/// Best rank-`r` Hermitian approximation: keeps the `r` eigenvalues of largest magnitude.
pub fn eig_truncate<T: Real>(m: &HermitianMatrix<T>, r: usize) -> Result<HermitianMatrix<T>> {
    if r > m.dim() {
        return Err(Error::arg(format!("truncation rank {r} exceeds dimension {}", m.dim())));
    }
    let eig = hermitian_eig(m);
    let mut idx: Vec<usize> = (0..eig.len()).collect();
    idx.sort_by(|&a, &b| {
        eig.values[b]
            .abs()
            .partial_cmp(&eig.values[a].abs())
            .expect("finite eigenvalues")
    });
    idx.truncate(r);
    Ok(HermitianMatrix::from_hermitian_part(eig.reconstruct_from(idx), m.is_psd()))
}

/// Psd rank truncation used inside LR-Kron.
///
/// Eigenvalues below `PSD_TOL·λ₁` are clipped to zero before keeping the top `r`.
/// Returns the truncated matrix and its effective rank.
pub(crate) fn psd_truncate<T: Real>(m: DMatrix<Complex<T>>, r: usize) -> (DMatrix<Complex<T>>, usize) {
    let eig = eig_dense(m);
    let top = if eig.is_empty() { T::zero() } else { eig.values[0] };
    let floor = T::tol(super::matrix::PSD_TOL) * top;
    let kept: Vec<usize> = (0..r.min(eig.len()))
        .filter(|&i| top > T::zero() && eig.values[i] > floor)
        .collect();
    let rank = kept.len();
    (super::matrix::symmetrize(eig.reconstruct_from(kept)), rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;
    use proptest::prelude::*;

    fn herm(rows: &[&[Complex<f64>]]) -> HermitianMatrix<f64> {
        let n = rows.len();
        HermitianMatrix::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]), false).unwrap()
    }

    /// Eigenvalues of a 2x2 Hermitian matrix from its characteristic polynomial.
    fn charpoly2(m: &DMatrix<Complex<f64>>) -> [f64; 2] {
        let (a, d) = (m[(0, 0)].re, m[(1, 1)].re);
        let b2 = m[(0, 1)].norm_sqr();
        let tr = a + d;
        let disc = ((a - d).powi(2) + 4.0 * b2).sqrt();
        [(tr + disc) / 2.0, (tr - disc) / 2.0]
    }

    /// Roots of λ³ − c2 λ² + c1 λ − c0 by the trigonometric method (all roots real).
    fn charpoly3(m: &DMatrix<Complex<f64>>) -> [f64; 3] {
        let c2 = (0..3).map(|i| m[(i, i)].re).sum::<f64>();
        let mut c1 = 0.0;
        for i in 0..3 {
            for j in i + 1..3 {
                c1 += m[(i, i)].re * m[(j, j)].re - m[(i, j)].norm_sqr();
            }
        }
        let c0 = m.determinant().re;
        let shift = c2 / 3.0;
        let pp = c1 - c2 * c2 / 3.0;
        let qq = -2.0 * c2.powi(3) / 27.0 + c2 * c1 / 3.0 - c0;
        if pp.abs() < 1e-300 {
            return [shift; 3];
        }
        let k = 2.0 * (-pp / 3.0).sqrt();
        let arg = (3.0 * qq / (pp * k)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        let mut r: Vec<f64> = (0..3)
            .map(|j| shift + k * (phi - 2.0 * std::f64::consts::PI * j as f64 / 3.0).cos())
            .collect();
        r.sort_by(|a, b| b.partial_cmp(a).unwrap());
        [r[0], r[1], r[2]]
    }

    #[test]
    fn diagonal_sorted_with_permuted_basis() {
        let z = creal(0.0);
        let m = herm(&[&[creal(3.0), z, z], &[z, creal(1.0), z], &[z, z, creal(2.0)]]);
        let e = hermitian_eig(&m);
        assert_eq!(e.values.as_slice(), &[3.0, 2.0, 1.0]);
        for (col, basis) in [0usize, 2, 1].iter().enumerate() {
            assert!((e.vectors[(*basis, col)].norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_by_two_complex() {
        let m = herm(&[&[creal(2.0), cplx(0.0, 1.0)], &[cplx(0.0, -1.0), creal(2.0)]]);
        let e = hermitian_eig(&m);
        assert!((e.values[0] - 3.0).abs() < 1e-12);
        assert!((e.values[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rank_one_outer() {
        let h = DVector::from_vec(vec![cplx(0.6f64, 0.0), cplx(0.0, 0.8)]);
        let e = hermitian_eig(&HermitianMatrix::outer(&h));
        assert!((e.values[0] - 1.0).abs() < 1e-12);
        assert!(e.values[1].abs() < 1e-12);
        let overlap = (e.vectors.column(0).adjoint() * &h)[(0, 0)].norm();
        assert!((overlap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn truncate_diagonal() {
        let m = HermitianMatrix::<f64>::from_diagonal(&[3.0, 2.0, 1.0]);
        let t = eig_truncate(&m, 2).unwrap();
        // Brute force over diagonal rank-2 candidates: drop exactly one entry.
        let best = (0..3)
            .map(|drop| {
                let mut d = [3.0f64, 2.0, 1.0];
                d[drop] = 0.0;
                let err: f64 = (0..3).map(|i| ([3.0f64, 2.0, 1.0][i] - d[i]).powi(2)).sum();
                (err, d)
            })
            .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
            .unwrap()
            .1;
        let want = HermitianMatrix::from_diagonal(&best);
        assert!((t.as_matrix() - want.as_matrix()).norm() < 1e-12);
        assert!(eig_truncate(&m, 4).is_err());
    }

    #[test]
    fn truncate_keeps_largest_magnitude() {
        let m = HermitianMatrix::<f64>::from_diagonal(&[1.0, -5.0, 2.0]);
        let t = eig_truncate(&m, 1).unwrap();
        assert!((t[(1, 1)].re + 5.0).abs() < 1e-12);
        assert!(t[(0, 0)].norm() < 1e-12 && t[(2, 2)].norm() < 1e-12);
    }

    #[test]
    fn psd_truncate_clips_negative() {
        let d = HermitianMatrix::<f64>::from_diagonal(&[4.0, -1e-3, 1.0]);
        let (t, rank) = psd_truncate(d.into_inner(), 3);
        assert_eq!(rank, 2);
        assert_eq!(t[(1, 1)].re, 0.0);
    }

    #[test]
    fn f32_instantiation() {
        let m = HermitianMatrix::<f32>::from_diagonal(&[1.0, 4.0]);
        let e = hermitian_eig(&m);
        assert!((e.values[0] - 4.0).abs() < 1e-6);
    }

    fn arb_hermitian(n: usize) -> impl Strategy<Value = HermitianMatrix<f64>> {
        prop::collection::vec(-1.0f64..1.0, 2 * n * n).prop_map(move |v| {
            let g = DMatrix::from_fn(n, n, |i, j| cplx(v[2 * (i * n + j)], v[2 * (i * n + j) + 1]));
            HermitianMatrix::from_hermitian_part(&g + g.adjoint(), false)
        })
    }

    fn arb_psd(n: usize, rank: usize) -> impl Strategy<Value = HermitianMatrix<f64>> {
        prop::collection::vec(-1.0f64..1.0, 2 * n * rank).prop_map(move |v| {
            let g = DMatrix::from_fn(n, rank, |i, j| cplx(v[2 * (i * rank + j)], v[2 * (i * rank + j) + 1]));
            HermitianMatrix::from_hermitian_part(&g * g.adjoint(), true)
        })
    }

    proptest! {
        #[test]
        fn matches_charpoly_2x2(m in arb_hermitian(2)) {
            let e = hermitian_eig(&m);
            let want = charpoly2(&m);
            for k in 0..2 {
                prop_assert!((e.values[k] - want[k]).abs() < 1e-8);
            }
        }

        #[test]
        fn matches_charpoly_3x3(m in arb_hermitian(3)) {
            let e = hermitian_eig(&m);
            let want = charpoly3(&m);
            for k in 0..3 {
                prop_assert!((e.values[k] - want[k]).abs() < 1e-8, "{} vs {}", e.values[k], want[k]);
            }
        }

        #[test]
        fn orthonormal_and_reconstructs(m in arb_hermitian(6)) {
            let e = hermitian_eig(&m);
            let gram = e.vectors.adjoint() * &e.vectors;
            prop_assert!((gram - DMatrix::identity(6, 6)).norm() < 1e-10);
            let rel = (e.reconstruct() - m.as_matrix()).norm() / m.frobenius_norm().max(1e-300);
            prop_assert!(rel < 1e-9);
            for k in 1..6 {
                prop_assert!(e.values[k - 1] >= e.values[k]);
            }
        }

        #[test]
        fn truncate_full_rank_is_identity(m in arb_hermitian(5)) {
            let t = eig_truncate(&m, 5).unwrap();
            prop_assert!((t.as_matrix() - m.as_matrix()).norm() < 1e-10);
        }

        #[test]
        fn truncate_exact_low_rank(m in arb_psd(6, 2)) {
            let t = eig_truncate(&m, 2).unwrap();
            prop_assert!((t.as_matrix() - m.as_matrix()).norm() < 1e-10 * m.frobenius_norm().max(1.0));
        }

        #[test]
        fn truncate_preserves_psd(m in arb_psd(5, 4), r in 0usize..=5) {
            let t = eig_truncate(&m, r).unwrap();
            prop_assert!(t.is_psd());
            prop_assert!(t.check_psd().is_ok());
        }
    }
}
