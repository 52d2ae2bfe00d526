//! Seedable random instances used by the test suites, the benchmark harness
//! and the sampler.

use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::einstein::tensor_from_freq_matrices;
use crate::error::Result;
use crate::forms::psym_slice;
use crate::hypermatrix::{tubal_shape, Hypermatrix, Shape, TubalTensor};
use crate::matricization::cubically_balanced_inv;
use crate::scalar::{CMatrix, CVector, Real};

/// Standard complex Gaussian (independent real and imaginary parts).
pub fn complex_normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex::new(T::lit(re), T::lit(im))
}

pub fn hypermatrix<T: Real, R: Rng + ?Sized>(shape: Shape, rng: &mut R) -> Hypermatrix<T> {
    Hypermatrix::from_fn(shape, |_| complex_normal(rng))
}

pub fn matrix<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix<T> {
    CMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

pub fn hermitian<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix<T> {
    let g = matrix::<T, R>(n, n, rng);
    (&g + g.adjoint()) * Complex::new(T::lit(0.5), T::zero())
}

/// Haar-distributed unitary: QR of a Gaussian matrix with the phases of `R` removed.
pub fn unitary<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix<T> {
    let qr = matrix::<T, R>(n, n, rng).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let mag = d.norm_sqr().sqrt();
        if mag > T::zero() {
            let phase = d / mag;
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// Unit vector in `C^n`, uniform on the sphere.
pub fn sphere_point<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex<T>> {
    let v: Vec<Complex<T>> = (0..n).map(|_| complex_normal(rng)).collect();
    let nrm = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
    v.into_iter().map(|z| z / nrm).collect()
}

pub fn tubal<T: Real, R: Rng + ?Sized>(n: usize, k: usize, p: usize, rng: &mut R) -> Result<TubalTensor<T>> {
    TubalTensor::new(hypermatrix(tubal_shape(n, k, p)?, rng))
}

/// Tensor whose frequency slice matrices are independent random Hermitian matrices.
pub fn t_hermitian<T: Real, R: Rng + ?Sized>(n: usize, k: usize, p: usize, rng: &mut R) -> Result<TubalTensor<T>> {
    let side = n.pow(k as u32);
    let mats: Vec<CMatrix<T>> = (0..p).map(|_| hermitian(side, rng)).collect();
    tensor_from_freq_matrices(&mats, n, k)
}

/// Random Hermitian partially symmetric frequency slices.
pub fn hps_slices<T: Real, R: Rng + ?Sized>(n: usize, k: usize, p: usize, rng: &mut R) -> Result<Vec<Hypermatrix<T>>> {
    let side = n.pow(k as u32);
    (0..p)
        .map(|_| psym_slice(&cubically_balanced_inv(&hermitian(side, rng), n, k)?))
        .collect()
}

/// Random t-Hermitian partially symmetric tensor.
pub fn t_hps<T: Real, R: Rng + ?Sized>(n: usize, k: usize, p: usize, rng: &mut R) -> Result<TubalTensor<T>> {
    TubalTensor::from_frequency_slices(&hps_slices(n, k, p, rng)?)
}

/// A commuting Hermitian family `M_l = Q diag(lambdas[.][l]) Q^H` with a random unitary `Q`.
#[derive(Clone, Debug)]
pub struct CommutantInstance<T: Real> {
    pub tensor: TubalTensor<T>,
    pub q: CMatrix<T>,
    /// `lambdas[i][l]`, eigenvalue on column `i` of `Q` in slice `l`.
    pub lambdas: Vec<Vec<T>>,
}

/// Builds a commutant instance with eigenvalues drawn by `eig(i, l, rng)`.
pub fn commutant<T: Real, R: Rng + ?Sized>(
    n: usize,
    k: usize,
    p: usize,
    rng: &mut R,
    mut eig: impl FnMut(usize, usize, &mut R) -> T,
) -> Result<CommutantInstance<T>> {
    let side = n.pow(k as u32);
    let q = unitary::<T, R>(side, rng);
    let lambdas: Vec<Vec<T>> = (0..side)
        .map(|i| (0..p).map(|l| eig(i, l, rng)).collect())
        .collect();
    let mats: Vec<CMatrix<T>> = (0..p)
        .map(|l| {
            let d = CVector::from_iterator(side, lambdas.iter().map(|lam| Complex::new(lam[l], T::zero())));
            &q * CMatrix::from_diagonal(&d) * q.adjoint()
        })
        .collect();
    Ok(CommutantInstance { tensor: tensor_from_freq_matrices(&mats, n, k)?, q, lambdas })
}
