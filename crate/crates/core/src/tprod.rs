//! The order-3 t-product algebra.

use num_complex::Complex;

use crate::error::{arg_err, dim_err, Error, Result};
use crate::fourier::{fft_tubal, ifft_tubal};
use crate::hypermatrix::{Hypermatrix, Shape, TubalTensor};
use crate::matricization::{bcirc, fold3, unfold3};
use crate::scalar::{cone, CMatrix, Real};

fn dims3<T: Real>(a: &Hypermatrix<T>) -> Result<(usize, usize, usize)> {
    match *a.dims() {
        [m, n, p] => Ok((m, n, p)),
        _ => arg_err(format!("expected an order-3 hypermatrix, got shape {}", a.shape())),
    }
}

fn conformable<T: Real>(a: &Hypermatrix<T>, b: &Hypermatrix<T>) -> Result<(usize, usize, usize, usize)> {
    let (m, n, p) = dims3(a)?;
    let (n2, q, p2) = dims3(b)?;
    if n != n2 || p != p2 {
        return dim_err(format!("cannot t-multiply {} by {}", a.shape(), b.shape()));
    }
    Ok((m, n, q, p))
}

/// Frontal slice `l` of an order-3 hypermatrix as a matrix.
pub fn slice_matrix<T: Real>(a: &Hypermatrix<T>, l: usize) -> Result<CMatrix<T>> {
    let (m, n, p) = dims3(a)?;
    if l >= p {
        return Err(Error::OutOfRange { mode: 2, index: l, size: p });
    }
    Ok(CMatrix::from_column_slice(m, n, &a.data()[l * m * n..(l + 1) * m * n]))
}

/// Stacks matrices of equal size as the frontal slices of an order-3 hypermatrix.
pub fn from_slice_matrices<T: Real>(slices: &[CMatrix<T>]) -> Result<Hypermatrix<T>> {
    let first = slices
        .first()
        .ok_or_else(|| Error::Argument("no slices supplied".into()))?;
    let (m, n) = first.shape();
    let mut data = Vec::with_capacity(m * n * slices.len());
    for (l, s) in slices.iter().enumerate() {
        if s.shape() != (m, n) {
            return dim_err(format!("slice {l} is {:?}, expected {:?}", s.shape(), (m, n)));
        }
        data.extend_from_slice(s.as_slice());
    }
    Hypermatrix::from_vec(Shape::new(vec![m, n, slices.len()])?, data)
}

/// `fold(bcirc(A) unfold(B))`, materializing the block-circulant matrix.
pub fn tprod_naive<T: Real>(a: &Hypermatrix<T>, b: &Hypermatrix<T>) -> Result<Hypermatrix<T>> {
    let (m, _, q, p) = conformable(a, b)?;
    let prod = bcirc(a)? * unfold3(b)?;
    fold3(&prod, m, q, p)
}

/// t-product through the tubal FFT: slicewise products in the frequency domain.
pub fn tprod_fft<T: Real>(a: &Hypermatrix<T>, b: &Hypermatrix<T>) -> Result<Hypermatrix<T>> {
    let (m, n, q, p) = conformable(a, b)?;
    let (ah, bh) = (fft_tubal(a), fft_tubal(b));
    let mut data = Vec::with_capacity(m * q * p);
    for l in 0..p {
        let al = CMatrix::from_column_slice(m, n, &ah.data()[l * m * n..(l + 1) * m * n]);
        let bl = CMatrix::from_column_slice(n, q, &bh.data()[l * n * q..(l + 1) * n * q]);
        data.extend_from_slice((al * bl).as_slice());
    }
    Ok(ifft_tubal(&Hypermatrix::from_vec(Shape::new(vec![m, q, p])?, data)?))
}

/// `A^H`: conjugate-transpose every slice, keep slice 0, reverse slices `1..p`.
pub fn t_conj_transpose<T: Real>(a: &Hypermatrix<T>) -> Result<Hypermatrix<T>> {
    let (_, _, p) = dims3(a)?;
    let slices = (0..p)
        .map(|l| Ok(slice_matrix(a, (p - l) % p)?.adjoint()))
        .collect::<Result<Vec<_>>>()?;
    from_slice_matrices(&slices)
}

/// `J(A)`: slice `l` is `conj(A_{-l mod p})`. Its tubal FFT is `conj(fft(A))`.
pub fn fourier_conjugation<T: Real>(a: &Hypermatrix<T>) -> Result<Hypermatrix<T>> {
    if a.order() == 0 {
        return Ok(a.conj());
    }
    let p = a.tubal_len();
    let slices = (0..p)
        .map(|l| Ok(a.frontal_slice((p - l) % p)?.conj()))
        .collect::<Result<Vec<_>>>()?;
    Hypermatrix::from_frontal_slices(&slices)
}

/// Identity of the t-product: `I_n` in slice 0, zeros elsewhere.
pub fn t_identity<T: Real>(n: usize, p: usize) -> Result<TubalTensor<T>> {
    let mut a = Hypermatrix::zeros(Shape::new(vec![n, n, p])?);
    for i in 0..n {
        a.set(&[i, i, 0], cone())?;
    }
    TubalTensor::new(a)
}

fn square_dims<T: Real>(a: &Hypermatrix<T>) -> Result<(usize, usize)> {
    let (m, n, p) = dims3(a)?;
    if m != n {
        return arg_err(format!("slices of {} are not square", a.shape()));
    }
    Ok((n, p))
}

/// `||A - A^H||_F <= tol ||A||_F`.
pub fn is_t_hermitian<T: Real>(a: &Hypermatrix<T>, tol: T) -> Result<bool> {
    square_dims(a)?;
    let ah = t_conj_transpose(a)?;
    Ok(a.distance(&ah)? <= tol * a.frobenius_norm())
}

/// Frequency slices `(A_hat_1, ..., A_hat_p)` of a square order-3 hypermatrix.
pub fn phi_k1<T: Real>(a: &Hypermatrix<T>) -> Result<Vec<CMatrix<T>>> {
    let (_, p) = square_dims(a)?;
    let ah = fft_tubal(a);
    (0..p).map(|l| slice_matrix(&ah, l)).collect()
}

/// Product of the determinants of the frequency slices.
pub fn t_det<T: Real>(a: &Hypermatrix<T>) -> Result<Complex<T>> {
    Ok(phi_k1(a)?
        .into_iter()
        .fold(cone(), |acc, m| acc * m.determinant()))
}

/// Inverts every frequency slice. A slice whose smallest singular value is at
/// most `1e-12` times its largest is reported as singular.
pub fn t_inverse<T: Real>(a: &Hypermatrix<T>) -> Result<Hypermatrix<T>> {
    let (n, _) = square_dims(a)?;
    let mut inv = Vec::new();
    for (l, m) in phi_k1(a)?.into_iter().enumerate() {
        let sv = m.singular_values();
        let (mut lo, mut hi) = (sv[0], sv[0]);
        for &s in sv.iter() {
            if s < lo { lo = s; }
            if s > hi { hi = s; }
        }
        let ratio = if hi > T::zero() { lo / hi } else { T::zero() };
        if ratio <= T::lit(1e-12) {
            return Err(Error::Singular { slice: l, ratio: ratio.to_f64_lossy() });
        }
        let mi = m
            .try_inverse()
            .ok_or(Error::Singular { slice: l, ratio: ratio.to_f64_lossy() })?;
        debug_assert_eq!(mi.nrows(), n);
        inv.push(mi);
    }
    Ok(ifft_tubal(&from_slice_matrices(&inv)?))
}
