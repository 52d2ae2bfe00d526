//! Index maps and reshapes between hypermatrices, matrices and vectors.
//!
//! `psi`/`psi_inv` follow the mathematical one-based convention so that
//! `psi(&[2, 3], [2, 4]) == 6`. Everything else in the crate indexes from zero.

use num_complex::Complex;

use crate::error::{arg_err, dim_err, Error, Result};
use crate::hypermatrix::{Hypermatrix, Shape};
use crate::scalar::{CMatrix, CVector, Real};

/// One-based mixed-radix linear index of a one-based multi-index.
pub fn psi(i: &[usize], m: &Shape) -> Result<usize> {
    if i.len() != m.order() {
        return dim_err(format!("multi-index of length {} for shape {m}", i.len()));
    }
    let mut off = 0;
    let mut stride = 1;
    for (mode, (&ik, &mk)) in i.iter().zip(m.dims()).enumerate() {
        if ik == 0 || ik > mk {
            return Err(Error::OutOfRange { mode, index: ik, size: mk });
        }
        off += (ik - 1) * stride;
        stride *= mk;
    }
    Ok(off + 1)
}

/// Inverse of [`psi`]: the one-based multi-index with linear index `idx`.
pub fn psi_inv(idx: usize, m: &Shape) -> Result<Vec<usize>> {
    if idx == 0 || idx > m.size() {
        return Err(Error::OutOfRange { mode: 0, index: idx, size: m.size() });
    }
    Ok(m.unravel(idx - 1)?.into_iter().map(|i| i + 1).collect())
}

fn split_shapes(shape: &Shape, split: usize) -> Result<(Shape, Shape)> {
    if split > shape.order() {
        return arg_err(format!("split {split} exceeds order {}", shape.order()));
    }
    let (a, b) = shape.dims().split_at(split);
    Ok((Shape::new(a.to_vec())?, Shape::new(b.to_vec())?))
}

/// The `(m, n)`-matricization where `m` is the first `split` modes and `n` the rest.
///
/// Entry `(psi(i, m), psi(j, n))` is `A[i, j]`; with the column-major layout
/// this is a plain reshape of the buffer.
pub fn matricize<T: Real>(a: &Hypermatrix<T>, split: usize) -> Result<CMatrix<T>> {
    let (m, n) = split_shapes(a.shape(), split)?;
    Ok(CMatrix::from_column_slice(m.size(), n.size(), a.data()))
}

/// Inverse of [`matricize`].
pub fn dematricize<T: Real>(mat: &CMatrix<T>, m: &Shape, n: &Shape) -> Result<Hypermatrix<T>> {
    if mat.nrows() != m.size() || mat.ncols() != n.size() {
        return dim_err(format!(
            "{}x{} matrix cannot be reshaped to {m} x {n}",
            mat.nrows(),
            mat.ncols()
        ));
    }
    Hypermatrix::from_vec(m.concat(n), mat.as_slice().to_vec())
}

/// Hypermatrix vectorization.
pub fn hvec<T: Real>(a: &Hypermatrix<T>) -> CVector<T> {
    CVector::from_column_slice(a.data())
}

pub fn hvec_inv<T: Real>(v: &CVector<T>, shape: &Shape) -> Result<Hypermatrix<T>> {
    Hypermatrix::from_vec(shape.clone(), v.as_slice().to_vec())
}

/// Checks that `a` has even order `2k` with every mode equal; returns `(n, k)`.
pub fn cubical_params<T: Real>(a: &Hypermatrix<T>) -> Result<(usize, usize)> {
    let d = a.order();
    if d == 0 || !d.is_multiple_of(2) {
        return arg_err(format!("expected a cubical hypermatrix of even order, got order {d}"));
    }
    let n = a.dims()[0];
    if a.dims().iter().any(|&m| m != n) {
        return arg_err(format!("shape {} is not cubical", a.shape()));
    }
    Ok((n, d / 2))
}

/// The `n^k x n^k` matricization of a cubical order-`2k` hypermatrix.
pub fn cubically_balanced<T: Real>(a: &Hypermatrix<T>) -> Result<CMatrix<T>> {
    let (_, k) = cubical_params(a)?;
    matricize(a, k)
}

/// Inverse of [`cubically_balanced`].
pub fn cubically_balanced_inv<T: Real>(mat: &CMatrix<T>, n: usize, k: usize) -> Result<Hypermatrix<T>> {
    let half = Shape::cubical(n, k)?;
    dematricize(mat, &half, &half)
}

/// `A = sum_a sigma_a U_a o conj(V_a)` with orthonormal factor families.
#[derive(Clone, Debug)]
pub struct TensorSVD<T: Real> {
    pub sigmas: Vec<T>,
    pub left: Vec<Hypermatrix<T>>,
    pub right: Vec<Hypermatrix<T>>,
}

impl<T: Real> TensorSVD<T> {
    pub fn rank(&self) -> usize {
        self.sigmas.len()
    }

    /// `sum_a sigma_a U_a o conj(V_a)`; `None` for an empty decomposition.
    pub fn reconstruct(&self) -> Option<Hypermatrix<T>> {
        let first_u = self.left.first()?;
        let first_v = self.right.first()?;
        let mut acc = CMatrix::zeros(first_u.len(), first_v.len());
        for ((s, u), v) in self.sigmas.iter().zip(&self.left).zip(&self.right) {
            let uv = hvec(u) * hvec(v).adjoint();
            acc += uv * Complex::new(*s, T::zero());
        }
        dematricize(&acc, first_u.shape(), first_v.shape()).ok()
    }
}

/// SVD of the matricization with `split` leading modes, mapped back to tensors.
/// Singular values at or below `1e-12 * sigma_1` are dropped.
pub fn tensor_svd<T: Real>(a: &Hypermatrix<T>, split: usize) -> Result<TensorSVD<T>> {
    let (m, n) = split_shapes(a.shape(), split)?;
    let mat = matricize(a, split)?;
    let svd = mat.svd(true, true);
    let u = svd.u.ok_or_else(|| Error::Numerical("SVD did not return U".into()))?;
    let v_t = svd.v_t.ok_or_else(|| Error::Numerical("SVD did not return V".into()))?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&x, &y| {
        svd.singular_values[y]
            .partial_cmp(&svd.singular_values[x])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let s1 = order.first().map(|&i| svd.singular_values[i]).unwrap_or_else(T::zero);
    let cutoff = s1 * T::lit(1e-12);
    let mut out = TensorSVD { sigmas: Vec::new(), left: Vec::new(), right: Vec::new() };
    if s1 <= T::zero() {
        return Ok(out);
    }
    for i in order {
        let s = svd.singular_values[i];
        if s <= cutoff {
            break;
        }
        out.sigmas.push(s);
        out.left.push(hvec_inv(&u.column(i).into_owned(), &m)?);
        out.right.push(hvec_inv(&v_t.row(i).adjoint(), &n)?);
    }
    Ok(out)
}

fn order3_dims<T: Real>(a: &Hypermatrix<T>) -> Result<(usize, usize, usize)> {
    match *a.dims() {
        [m, n, p] => Ok((m, n, p)),
        _ => arg_err(format!("expected an order-3 hypermatrix, got shape {}", a.shape())),
    }
}

/// Stacks the frontal slices of an `m x n x p` hypermatrix into an `mp x n` matrix.
pub fn unfold3<T: Real>(a: &Hypermatrix<T>) -> Result<CMatrix<T>> {
    let (m, n, p) = order3_dims(a)?;
    let mut out = CMatrix::zeros(m * p, n);
    for l in 0..p {
        let slice = CMatrix::from_column_slice(m, n, &a.data()[l * m * n..(l + 1) * m * n]);
        out.rows_mut(l * m, m).copy_from(&slice);
    }
    Ok(out)
}

/// Inverse of [`unfold3`].
pub fn fold3<T: Real>(mat: &CMatrix<T>, m: usize, n: usize, p: usize) -> Result<Hypermatrix<T>> {
    if mat.nrows() != m * p || mat.ncols() != n {
        return dim_err(format!(
            "{}x{} matrix cannot be folded to {m}x{n}x{p}",
            mat.nrows(),
            mat.ncols()
        ));
    }
    let mut data = Vec::with_capacity(m * n * p);
    for l in 0..p {
        data.extend(mat.rows(l * m, m).iter().copied());
    }
    Hypermatrix::from_vec(Shape::new(vec![m, n, p])?, data)
}

/// Block-circulant matrix: block `(r, c)` is frontal slice `(r - c) mod p`.
pub fn bcirc<T: Real>(a: &Hypermatrix<T>) -> Result<CMatrix<T>> {
    let (m, n, p) = order3_dims(a)?;
    let slices: Vec<CMatrix<T>> = (0..p)
        .map(|l| CMatrix::from_column_slice(m, n, &a.data()[l * m * n..(l + 1) * m * n]))
        .collect();
    let mut out = CMatrix::zeros(m * p, n * p);
    for r in 0..p {
        for c in 0..p {
            out.view_mut((r * m, c * n), (m, n))
                .copy_from(&slices[(r + p - c) % p]);
        }
    }
    Ok(out)
}
