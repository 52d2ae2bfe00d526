//! Einstein products and the order-(2k+1) t-Einstein algebra.

use crate::error::{arg_err, dim_err, Result};
use crate::hypermatrix::{tubal_shape, Hypermatrix, Shape, TubalTensor};
use crate::linalg::matrix_power;
use crate::matricization::{dematricize, matricize};
use crate::scalar::{cone, CMatrix, Real};

/// Contracts the trailing `k` modes of `a` with the leading `k` modes of `b`.
pub fn einstein_product<T: Real>(a: &Hypermatrix<T>, b: &Hypermatrix<T>, k: usize) -> Result<Hypermatrix<T>> {
    if k > a.order() || k > b.order() {
        return arg_err(format!(
            "cannot contract {k} modes of shapes {} and {}",
            a.shape(),
            b.shape()
        ));
    }
    let split = a.order() - k;
    if a.dims()[split..] != b.dims()[..k] {
        return dim_err(format!(
            "contracted modes of {} and {} differ",
            a.shape(),
            b.shape()
        ));
    }
    let m = Shape::new(a.dims()[..split].to_vec())?;
    let n = Shape::new(b.dims()[k..].to_vec())?;
    let prod = matricize(a, split)? * matricize(b, k)?;
    dematricize(&prod, &m, &n)
}

/// The cubically balanced matricizations `M_l` of the frequency slices.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceMatrixFamily<T: Real> {
    pub matrices: Vec<CMatrix<T>>,
}

impl<T: Real> SliceMatrixFamily<T> {
    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }
}

/// `A -> (M_1, ..., M_p)`.
pub fn phi<T: Real>(a: &TubalTensor<T>) -> SliceMatrixFamily<T> {
    SliceMatrixFamily { matrices: a.freq_matrices() }
}

/// Inverse of [`phi`].
pub fn phi_inv<T: Real>(family: &SliceMatrixFamily<T>, n: usize, k: usize) -> Result<TubalTensor<T>> {
    tensor_from_freq_matrices(&family.matrices, n, k)
}

pub(crate) fn tensor_from_freq_matrices<T: Real>(mats: &[CMatrix<T>], n: usize, k: usize) -> Result<TubalTensor<T>> {
    if mats.is_empty() {
        return arg_err("empty slice family");
    }
    let side = n.pow(k as u32);
    let mut data = Vec::with_capacity(side * side * mats.len());
    for (l, m) in mats.iter().enumerate() {
        if m.shape() != (side, side) {
            return dim_err(format!("slice matrix {l} is {:?}, expected {side}x{side}", m.shape()));
        }
        data.extend_from_slice(m.as_slice());
    }
    TubalTensor::from_frequency(Hypermatrix::from_vec(tubal_shape(n, k, mats.len())?, data)?)
}

/// t-Einstein product: slicewise Einstein products in the frequency domain.
pub fn t_einstein<T: Real>(a: &TubalTensor<T>, b: &TubalTensor<T>) -> Result<TubalTensor<T>> {
    a.same_structure(b)?;
    let mats: Vec<CMatrix<T>> = a
        .freq_matrices()
        .iter()
        .zip(b.freq_matrices())
        .map(|(x, y)| x * y)
        .collect();
    tensor_from_freq_matrices(&mats, a.n(), a.k())
}

/// Generalized t-conjugate transpose: every slice has its two index groups
/// swapped and conjugated, and slices `1..p` are reversed.
pub fn gen_t_conj_transpose<T: Real>(a: &TubalTensor<T>) -> Result<TubalTensor<T>> {
    let base = a.as_hypermatrix();
    let p = a.p();
    let slices = (0..p)
        .map(|l| base.frontal_slice((p - l) % p)?.group_swap_conj())
        .collect::<Result<Vec<_>>>()?;
    TubalTensor::new(Hypermatrix::from_frontal_slices(&slices)?)
}

/// Unit of the t-Einstein product.
pub fn t_identity_k<T: Real>(n: usize, p: usize, k: usize) -> Result<TubalTensor<T>> {
    let side = n.pow(k as u32);
    let mut a = Hypermatrix::zeros(tubal_shape(n, k, p)?);
    for i in 0..side {
        a.data_mut()[i + side * i] = cone();
    }
    TubalTensor::new(a)
}

/// `A ⊠_t ... ⊠_t A` with `e` factors, computed with slicewise matrix powers.
pub fn t_power_integer<T: Real>(a: &TubalTensor<T>, e: u32) -> Result<TubalTensor<T>> {
    if e == 0 {
        return arg_err("exponent must be at least 1");
    }
    let mats: Vec<CMatrix<T>> = a.freq_matrices().iter().map(|m| matrix_power(m, e)).collect();
    tensor_from_freq_matrices(&mats, a.n(), a.k())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypermatrix::for_each_index;
    use crate::tprod::{t_conj_transpose, t_identity, tprod_fft};
    use num_complex::Complex;

    fn sample(shape: Shape, seed: f64) -> Hypermatrix<f64> {
        let mut s = seed;
        Hypermatrix::from_fn(shape, |_| {
            s = (s * 7.77 + 0.123).fract();
            Complex::new(s - 0.5, (s * 3.1).fract() - 0.5)
        })
    }

    fn tubal(n: usize, k: usize, p: usize, seed: f64) -> TubalTensor<f64> {
        TubalTensor::new(sample(tubal_shape(n, k, p).unwrap(), seed)).unwrap()
    }

    #[test]
    fn matrices_multiply_as_matrices() {
        let a = sample(Shape::new(vec![2, 2]).unwrap(), 0.1);
        let b = sample(Shape::new(vec![2, 2]).unwrap(), 0.2);
        let want = CMatrix::from_column_slice(2, 2, a.data()) * CMatrix::from_column_slice(2, 2, b.data());
        let got = einstein_product(&a, &b, 1).unwrap();
        assert_eq!(got.data(), want.as_slice());
    }

    #[test]
    fn einstein_matches_nested_sum() {
        let s = Shape::new(vec![2, 2, 2, 2]).unwrap();
        let a = sample(s.clone(), 0.3);
        let b = sample(s.clone(), 0.6);
        let c = einstein_product(&a, &b, 2).unwrap();
        for_each_index(&[2, 2, 2, 2], |idx| {
            let mut want = Complex::new(0.0, 0.0);
            for_each_index(&[2, 2], |kk| {
                want += a[&[idx[0], idx[1], kk[0], kk[1]][..]] * b[&[kk[0], kk[1], idx[2], idx[3]][..]];
            });
            assert!((c[idx] - want).norm() < 1e-13);
        });
        let bad = sample(Shape::new(vec![3, 2]).unwrap(), 0.1);
        assert!(einstein_product(&a, &bad, 2).is_err());
    }

    #[test]
    fn order_three_reduces_to_tprod() {
        let a = tubal(3, 1, 4, 0.11);
        let b = tubal(3, 1, 4, 0.77);
        let c = t_einstein(&a, &b).unwrap();
        let want = tprod_fft(a.as_hypermatrix(), b.as_hypermatrix()).unwrap();
        assert!(c.as_hypermatrix().distance(&want).unwrap() < 1e-12 * want.frobenius_norm());
        let ah = gen_t_conj_transpose(&a).unwrap();
        assert_eq!(ah.as_hypermatrix(), &t_conj_transpose(a.as_hypermatrix()).unwrap());
        assert_eq!(t_identity_k::<f64>(3, 4, 1).unwrap(), t_identity(3, 4).unwrap());
    }

    #[test]
    fn unit_and_powers() {
        let a = tubal(2, 2, 3, 0.42);
        let i = t_identity_k::<f64>(2, 3, 2).unwrap();
        let ai = t_einstein(&a, &i).unwrap();
        assert!(ai.as_hypermatrix().distance(a.as_hypermatrix()).unwrap() < 1e-13);
        for m in phi(&i).matrices {
            assert_eq!(m, CMatrix::identity(4, 4));
        }
        let sq = t_power_integer(&a, 2).unwrap();
        let want = t_einstein(&a, &a).unwrap();
        assert!(sq.as_hypermatrix().distance(want.as_hypermatrix()).unwrap() < 1e-12);
        let one = t_power_integer(&a, 1).unwrap();
        assert!(one.as_hypermatrix().distance(a.as_hypermatrix()).unwrap() < 1e-14);
        assert!(t_power_integer(&a, 0).is_err());
    }

    #[test]
    fn gen_conj_transpose_is_slicewise_adjoint() {
        let a = tubal(2, 2, 3, 0.9);
        let ah = gen_t_conj_transpose(&a).unwrap();
        assert_eq!(gen_t_conj_transpose(&ah).unwrap(), a);
        for (x, y) in phi(&a).matrices.iter().zip(phi(&ah).matrices) {
            assert!((x.adjoint() - y).norm() < 1e-13);
        }
    }
}
