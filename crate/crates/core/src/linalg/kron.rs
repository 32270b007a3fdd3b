use nalgebra::DMatrix;
use num_complex::Complex;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest number of entries `kron` will materialise (2^28 complex values, 4 GiB at f64).
pub const KRON_MAX_ENTRIES: usize = 1 << 28;

/// Kronecker product. Entry `[i·q + m, j·s + n] = left[i,j]·right[m,n]` for a `q×s` right factor.
pub fn kron<T: Real>(left: &DMatrix<Complex<T>>, right: &DMatrix<Complex<T>>) -> Result<ComplexMatrix<T>> {
    if left.is_empty() || right.is_empty() {
        return Err(Error::arg("kron operands must be non-empty"));
    }
    let rows = left.nrows().checked_mul(right.nrows());
    let cols = left.ncols().checked_mul(right.ncols());
    match (rows, cols) {
        (Some(r), Some(c)) if r.checked_mul(c).is_some_and(|e| e <= KRON_MAX_ENTRIES) => {
            Ok(ComplexMatrix::from_dmatrix(left.kronecker(right)))
        }
        _ => Err(Error::Sizing(format!(
            "kron of {}x{} and {}x{} exceeds {KRON_MAX_ENTRIES} entries",
            left.nrows(),
            left.ncols(),
            right.nrows(),
            right.ncols()
        ))),
    }
}

fn check_square<T: Real>(m: &DMatrix<Complex<T>>, p: usize, q: usize) -> Result<()> {
    if p == 0 || q == 0 || m.nrows() != p * q || m.ncols() != p * q {
        return Err(Error::arg(format!(
            "expected a {n}x{n} matrix for p={p}, q={q}, got {}x{}",
            m.nrows(),
            m.ncols(),
            n = p * q
        )));
    }
    Ok(())
}

/// Rearrangement operator. Row `i·p + j` of the `p²×q²` output is `vec(block(m,i,j))ᵀ`
/// with `vec` stacking columns.
pub fn rearrange<T: Real>(m: &DMatrix<Complex<T>>, p: usize, q: usize) -> Result<ComplexMatrix<T>> {
    check_square(m, p, q)?;
    Ok(ComplexMatrix::from_dmatrix(DMatrix::from_fn(p * p, q * q, |r, c| {
        let (i, j) = (r / p, r % p);
        let (mm, n) = (c % q, c / q);
        m[(i * q + mm, j * q + n)]
    })))
}

/// Literal inverse of [`rearrange`].
pub fn rearrange_inv<T: Real>(m: &DMatrix<Complex<T>>, p: usize, q: usize) -> Result<ComplexMatrix<T>> {
    if p == 0 || q == 0 || m.nrows() != p * p || m.ncols() != q * q {
        return Err(Error::arg(format!(
            "expected a {}x{} matrix for p={p}, q={q}, got {}x{}",
            p * p,
            q * q,
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(ComplexMatrix::from_dmatrix(DMatrix::from_fn(p * q, p * q, |r, c| {
        let (i, mm) = (r / q, r % q);
        let (j, n) = (c / q, c % q);
        m[(i * p + j, mm + n * q)]
    })))
}

/// The `q×q` block at block position `(i, j)` (0-based).
pub fn block<T: Real>(m: &DMatrix<Complex<T>>, i: usize, j: usize, p: usize, q: usize) -> Result<ComplexMatrix<T>> {
    check_square(m, p, q)?;
    if i >= p || j >= p {
        return Err(Error::arg(format!("block index ({i}, {j}) out of range for p={p}")));
    }
    Ok(ComplexMatrix::from_dmatrix(m.view((i * q, j * q), (q, q)).into_owned()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cplx, creal};
    use proptest::prelude::*;

    fn real(rows: usize, cols: usize, v: &[f64]) -> DMatrix<Complex<f64>> {
        ComplexMatrix::<f64>::from_real_rows(rows, cols, v).into_inner()
    }

    fn arb_matrix(r: usize, c: usize) -> impl Strategy<Value = DMatrix<Complex<f64>>> {
        prop::collection::vec(-1.0f64..1.0, 2 * r * c)
            .prop_map(move |v| DMatrix::from_fn(r, c, |i, j| cplx(v[2 * (i * c + j)], v[2 * (i * c + j) + 1])))
    }

    #[test]
    fn kron_identities() {
        let k = kron(&DMatrix::<Complex<f64>>::identity(2, 2), &DMatrix::identity(3, 3)).unwrap();
        assert_eq!(k.as_matrix(), &DMatrix::identity(6, 6));
    }

    #[test]
    fn kron_index_formula() {
        let a = real(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let b = real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let k = kron(&a, &b).unwrap();
        assert_eq!((k.rows(), k.cols()), (4, 4));
        for i in 0..2 {
            for j in 0..2 {
                for m in 0..2 {
                    for n in 0..2 {
                        assert_eq!(k[(i * 2 + m, j * 2 + n)], a[(i, j)] * b[(m, n)]);
                    }
                }
            }
        }
    }

    #[test]
    fn kron_rejects_empty_and_huge() {
        let e = DMatrix::<Complex<f64>>::zeros(0, 3);
        assert!(matches!(kron(&e, &DMatrix::identity(2, 2)), Err(Error::Argument(_))));
        // 2^15 x 2^14 output entries exceed the cap; checked before any allocation.
        let tall = DMatrix::<Complex<f64>>::zeros(1 << 15, 1);
        let wide = DMatrix::<Complex<f64>>::zeros(1, 1 << 14);
        assert!(matches!(kron(&tall, &wide), Err(Error::Sizing(_))));
    }

    #[test]
    fn rearrange_identity_pattern() {
        let r = rearrange(&DMatrix::<Complex<f64>>::identity(4, 4), 2, 2).unwrap();
        // Block-diagonal blocks (rows 0 and 3) are I₂, whose column-stacked vec is [1,0,0,1].
        let want = real(4, 4, &[1., 0., 0., 1., 0., 0., 0., 0., 0., 0., 0., 0., 1., 0., 0., 1.]);
        assert_eq!(r.as_matrix(), &want);
    }

    #[test]
    fn block_of_identity() {
        let i6 = DMatrix::<Complex<f64>>::identity(6, 6);
        assert_eq!(block(&i6, 0, 0, 2, 3).unwrap().as_matrix(), &DMatrix::identity(3, 3));
        assert_eq!(block(&i6, 0, 1, 2, 3).unwrap().as_matrix(), &DMatrix::zeros(3, 3));
        assert!(block(&i6, 2, 0, 2, 3).is_err());
        assert!(rearrange(&i6, 2, 2).is_err());
    }

    #[test]
    fn rearrange_inv_of_zeros() {
        let z = DMatrix::<Complex<f64>>::zeros(4, 9);
        assert_eq!(rearrange_inv(&z, 2, 3).unwrap().as_matrix(), &DMatrix::zeros(6, 6));
    }

    proptest! {
        #[test]
        fn kron_is_bilinear(m in arb_matrix(2, 2), n in arb_matrix(2, 2), a in -2.0f64..2.0, b in -2.0f64..2.0) {
            let s = cplx(a, b);
            let lhs = kron(&(&m * s), &n).unwrap();
            let rhs = kron(&m, &n).unwrap().scale(s);
            prop_assert!((lhs.as_matrix() - rhs.as_matrix()).norm() < 1e-12);
        }

        #[test]
        fn rearrange_of_kron_is_outer(a in arb_matrix(2, 2), b in arb_matrix(3, 3)) {
            let r = rearrange(kron(&a, &b).unwrap().as_matrix(), 2, 3).unwrap();
            // rowvec(A): entries ordered by i·p + j; vec(B): column stacking.
            let rowvec_a: Vec<_> = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|ij| a[ij]).collect();
            let vec_b: Vec<_> = (0..3).flat_map(|n| (0..3).map(move |m| (m, n))).map(|mn| b[mn]).collect();
            for (row, x) in rowvec_a.iter().enumerate() {
                for (col, y) in vec_b.iter().enumerate() {
                    prop_assert!((r[(row, col)] - x * y).norm() < 1e-14);
                }
            }
        }

        #[test]
        fn rearrange_round_trips(m in arb_matrix(6, 6)) {
            let r = rearrange(&m, 2, 3).unwrap();
            let back = rearrange_inv(r.as_matrix(), 2, 3).unwrap();
            prop_assert_eq!(back.as_matrix(), &m);
            prop_assert!((r.frobenius_norm() - m.norm()).abs() < 1e-12);
        }

        #[test]
        fn rearrange_is_linear(m in arb_matrix(6, 6), n in arb_matrix(6, 6), a in -2.0f64..2.0, b in -2.0f64..2.0) {
            let lhs = rearrange(&(&m * creal(a) + &n * creal(b)), 3, 2).unwrap();
            let rhs = rearrange(&m, 3, 2).unwrap().as_matrix() * creal(a) + rearrange(&n, 3, 2).unwrap().as_matrix() * creal(b);
            prop_assert!((lhs.as_matrix() - rhs).norm() < 1e-12);
        }

        #[test]
        fn rearrange_inv_builds_kron(a in arb_matrix(3, 3), b in arb_matrix(2, 2)) {
            let outer = DMatrix::from_fn(9, 4, |r, c| a[(r / 3, r % 3)] * b[(c % 2, c / 2)]);
            let k = rearrange_inv(&outer, 3, 2).unwrap();
            prop_assert!((k.as_matrix() - a.kronecker(&b)).norm() < 1e-14);
        }

        #[test]
        fn block_matches_slice(m in arb_matrix(6, 6), i in 0usize..2, j in 0usize..2) {
            let b = block(&m, i, j, 2, 3).unwrap();
            for r in 0..3 {
                for c in 0..3 {
                    prop_assert_eq!(b[(r, c)], m[(3 * i + r, 3 * j + c)]);
                }
            }
        }

        #[test]
        fn block_of_kron(a in arb_matrix(2, 2), b in arb_matrix(2, 2)) {
            let k = kron(&a, &b).unwrap();
            let blk = block(k.as_matrix(), 0, 1, 2, 2).unwrap();
            prop_assert!((blk.as_matrix() - &b * a[(0, 1)]).norm() < 1e-14);
        }
    }
}
