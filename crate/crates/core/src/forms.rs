//! Slice-level Hermitian forms: multilinear matrix multiplication, the
//! Hermitian / partial-symmetry predicates, form evaluation, the partial
//! symmetrizer and the permutation projectors.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{arg_err, dim_err, Error, Result};
use crate::hypermatrix::{Hypermatrix, Shape, TubalTensor};
use crate::linalg::is_hermitian_matrix;
use crate::matricization::{cubical_params, matricize};
use crate::scalar::{czero, frob_norm, CMatrix, Real};

/// Largest degree for which the symmetric group is enumerated.
pub const MAX_SYMMETRIC_DEGREE: usize = 5;

/// Contracts mode `mode` of `a` with the rows of `x`: the new mode has size `x.ncols()`.
pub fn mode_product<T: Real>(a: &Hypermatrix<T>, mode: usize, x: &CMatrix<T>) -> Result<Hypermatrix<T>> {
    if mode >= a.order() {
        return arg_err(format!("mode {mode} out of range for shape {}", a.shape()));
    }
    let dims = a.dims();
    if x.nrows() != dims[mode] {
        return dim_err(format!(
            "factor for mode {mode} has {} rows, mode size is {}",
            x.nrows(),
            dims[mode]
        ));
    }
    let left: usize = dims[..mode].iter().product();
    let right: usize = dims[mode + 1..].iter().product();
    let (dk, dj) = (dims[mode], x.ncols());
    let src = a.data();
    let mut out = vec![czero(); left * dj * right];
    for r in 0..right {
        for j in 0..dj {
            let dst = &mut out[left * (j + dj * r)..left * (j + dj * r + 1)];
            for kk in 0..dk {
                let w = x[(kk, j)];
                if w == czero() {
                    continue;
                }
                let s = &src[left * (kk + dk * r)..left * (kk + dk * r + 1)];
                for (d, v) in dst.iter_mut().zip(s) {
                    *d += *v * w;
                }
            }
        }
    }
    let mut new_dims = dims.to_vec();
    new_dims[mode] = dj;
    Hypermatrix::from_vec(Shape::new(new_dims)?, out)
}

/// `A * (X_1, ..., X_d)`: `a'_j = sum_k a_k prod_l X_l[k_l, j_l]`.
pub fn multilinear_matmul<T: Real>(a: &Hypermatrix<T>, factors: &[CMatrix<T>]) -> Result<Hypermatrix<T>> {
    if factors.len() != a.order() {
        return dim_err(format!(
            "{} factors supplied for an order-{} hypermatrix",
            factors.len(),
            a.order()
        ));
    }
    let mut out = a.clone();
    for (mode, x) in factors.iter().enumerate() {
        out = mode_product(&out, mode, x)?;
    }
    Ok(out)
}

/// Segre outer product of the given hypermatrices.
pub fn outer_product<T: Real>(tensors: &[Hypermatrix<T>]) -> Hypermatrix<T> {
    let mut dims = Vec::new();
    let mut data = vec![Complex::new(T::one(), T::zero())];
    for t in tensors {
        dims.extend_from_slice(t.dims());
        let mut next = Vec::with_capacity(data.len() * t.len());
        for &b in t.data() {
            next.extend(data.iter().map(|&a| a * b));
        }
        data = next;
    }
    Hypermatrix::from_vec(Shape::new(dims).expect("factor dims are positive"), data)
        .expect("outer product size is consistent")
}

fn balanced_k<T: Real>(a: &Hypermatrix<T>) -> Result<usize> {
    let d = a.order();
    if d == 0 || !d.is_multiple_of(2) {
        return arg_err(format!("expected an even-order hypermatrix, got order {d}"));
    }
    let k = d / 2;
    if a.dims()[..k] != a.dims()[k..] {
        return arg_err(format!("index groups of shape {} differ", a.shape()));
    }
    Ok(k)
}

/// `a_{i,j} = conj(a_{j,i})` under the swap of the two index groups, to a
/// relative Frobenius tolerance.
pub fn is_hermitian_tensor<T: Real>(a: &Hypermatrix<T>, tol: T) -> Result<bool> {
    let k = balanced_k(a)?;
    Ok(is_hermitian_matrix(&matricize(a, k)?, tol))
}

/// Invariance under independent permutations of the two index groups.
///
/// Checked on the adjacent transpositions, which generate each symmetric group.
pub fn is_partially_symmetric<T: Real>(a: &Hypermatrix<T>, tol: T) -> Result<bool> {
    let (_, k) = cubical_params(a)?;
    let bound = tol * a.frobenius_norm();
    for group in 0..2 {
        for m in 0..k.saturating_sub(1) {
            let mut perm: Vec<usize> = (0..2 * k).collect();
            perm.swap(group * k + m, group * k + m + 1);
            if a.distance(&a.permute_modes(&perm)?)? > bound {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Coefficient hypermatrix of a degree-`k` Hermitian form in `n` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianFormCoeffs<T: Real> {
    coeffs: Hypermatrix<T>,
    n: usize,
    k: usize,
}

impl<T: Real> HermitianFormCoeffs<T> {
    /// Requires a Hermitian, partially symmetric cubical hypermatrix.
    pub fn new(coeffs: Hypermatrix<T>) -> Result<Self> {
        let form = HermitianFormCoeffs::hermitian(coeffs)?;
        if !is_partially_symmetric(&form.coeffs, T::default_tol())? {
            return arg_err("coefficient hypermatrix is not partially symmetric");
        }
        Ok(form)
    }

    /// Requires only Hermiticity; the form `v^H M v` with `v = z^{⊗k}` is
    /// still real-valued.
    pub fn hermitian(coeffs: Hypermatrix<T>) -> Result<Self> {
        let (n, k) = cubical_params(&coeffs)?;
        if !is_hermitian_tensor(&coeffs, T::default_tol())? {
            return arg_err("coefficient hypermatrix is not Hermitian");
        }
        Ok(HermitianFormCoeffs { coeffs, n, k })
    }

    pub fn coeffs(&self) -> &Hypermatrix<T> {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Hypermatrix<T> {
        self.coeffs
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Cubically balanced `n^k x n^k` matrix of the coefficients.
    pub fn matrix(&self) -> CMatrix<T> {
        let s = self.n.pow(self.k as u32);
        CMatrix::from_column_slice(s, s, self.coeffs.data())
    }
}

/// Contracts the trailing mode of `buf` (viewed with `rows * len` entries) with `x`.
fn contract_last<T: Real>(buf: &[Complex<T>], x: &[Complex<T>]) -> Vec<Complex<T>> {
    let rows = buf.len() / x.len();
    let mut out = vec![czero(); rows];
    for (j, &w) in x.iter().enumerate() {
        for (o, v) in out.iter_mut().zip(&buf[j * rows..(j + 1) * rows]) {
            *o += *v * w;
        }
    }
    out
}

/// `A * (conj z, ..., conj z, z, ..., z)` without the realness check.
pub(crate) fn form_value_complex<T: Real>(a: &Hypermatrix<T>, k: usize, z: &[Complex<T>]) -> Complex<T> {
    let zc: Vec<Complex<T>> = z.iter().map(|w| w.conj()).collect();
    let mut buf = a.data().to_vec();
    for _ in 0..k {
        buf = contract_last(&buf, z);
    }
    for _ in 0..k {
        buf = contract_last(&buf, &zc);
    }
    buf[0]
}

/// Checks that the imaginary part of a form value is negligible and drops it.
pub(crate) fn realize<T: Real>(value: Complex<T>, scale: T) -> Result<T> {
    let bound = T::default_tol() * (T::one() + scale + value.re.abs());
    if value.im.abs() > bound {
        return Err(Error::Numerical(format!(
            "form value has imaginary part {:.3e} (real part {:.3e})",
            value.im.to_f64_lossy(),
            value.re.to_f64_lossy()
        )));
    }
    Ok(value.re)
}

/// `h(z) = A * (conj z, ..., conj z, z, ..., z)`.
pub fn eval_hermitian_form<T: Real>(h: &HermitianFormCoeffs<T>, z: &[Complex<T>]) -> Result<T> {
    if z.len() != h.n {
        return dim_err(format!("point has length {}, form has {} variables", z.len(), h.n));
    }
    let value = form_value_complex(&h.coeffs, h.k, z);
    let zn2 = z.iter().fold(T::zero(), |acc, w| acc + w.norm_sqr());
    realize(value, h.coeffs.frobenius_norm() * zn2.powi(h.k as i32))
}

/// All permutations of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Result<Vec<Vec<usize>>> {
    if k > MAX_SYMMETRIC_DEGREE {
        return arg_err(format!(
            "degree {k} exceeds the supported maximum {MAX_SYMMETRIC_DEGREE} for symmetric-group enumeration"
        ));
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    Ok(out)
}

/// Average of `a` over all permutations of the modes `offset..offset + k`.
fn average_group<T: Real>(a: &Hypermatrix<T>, offset: usize, k: usize) -> Result<Hypermatrix<T>> {
    let perms = permutations(k)?;
    let mut acc = Hypermatrix::zeros(a.shape().clone());
    let d = a.order();
    for pi in &perms {
        let mut full: Vec<usize> = (0..d).collect();
        for (m, &pm) in pi.iter().enumerate() {
            full[offset + m] = offset + pm;
        }
        acc = &acc + &a.permute_modes(&full)?;
    }
    let w = T::one() / T::from_usize(perms.len()).expect("k! fits");
    Ok(acc.scale(Complex::new(w, T::zero())))
}

/// Partial symmetrization of one cubical order-`2k` slice.
pub fn psym_slice<T: Real>(a: &Hypermatrix<T>) -> Result<Hypermatrix<T>> {
    let (_, k) = cubical_params(a)?;
    average_group(&average_group(a, 0, k)?, k, k)
}

/// Slicewise average over `S_k x S_k` acting on the two index groups.
pub fn psym<T: Real>(a: &TubalTensor<T>) -> Result<TubalTensor<T>> {
    let slices = a
        .as_hypermatrix()
        .frontal_slices()
        .iter()
        .map(psym_slice)
        .collect::<Result<Vec<_>>>()?;
    TubalTensor::new(Hypermatrix::from_frontal_slices(&slices)?)
}

fn validate_permutation(pi: &[usize]) -> Result<()> {
    let mut seen = vec![false; pi.len()];
    for &m in pi {
        if m >= pi.len() || std::mem::replace(&mut seen[m], true) {
            return arg_err(format!("{pi:?} is not a permutation of 0..{}", pi.len()));
        }
    }
    Ok(())
}

/// `P_pi e_{psi(i)} = e_{psi(pi . i)}` with `(pi . i)_m = i_{pi(m)}` (zero-based `pi`).
pub fn perm_matrix<T: Real>(pi: &[usize], n: usize) -> Result<DMatrix<T>> {
    validate_permutation(pi)?;
    let k = pi.len();
    let shape = Shape::cubical(n, k)?;
    let size = shape.size();
    let mut p = DMatrix::zeros(size, size);
    let mut moved = vec![0usize; k];
    for col in 0..size {
        let idx = shape.unravel(col)?;
        for (m, &pm) in pi.iter().enumerate() {
            moved[m] = idx[pm];
        }
        p[(shape.offset(&moved)?, col)] = T::one();
    }
    Ok(p)
}

/// The symmetrizing projector `P_sym = (1/k!) sum_pi P_pi` on `(C^n)^{⊗k}`.
#[derive(Clone, Debug)]
pub struct SymmetryProjector<T: Real> {
    pub k: usize,
    pub n: usize,
    pub psym: DMatrix<T>,
}

impl<T: Real> SymmetryProjector<T> {
    pub fn perm(&self, pi: &[usize]) -> Result<DMatrix<T>> {
        if pi.len() != self.k {
            return arg_err(format!("permutation of length {} for degree {}", pi.len(), self.k));
        }
        perm_matrix(pi, self.n)
    }

    /// `P_sym` as a complex matrix.
    pub fn complex(&self) -> CMatrix<T> {
        self.psym.map(|x| Complex::new(x, T::zero()))
    }
}

pub fn p_sym<T: Real>(n: usize, k: usize) -> Result<SymmetryProjector<T>> {
    let perms = permutations(k)?;
    let size = n.pow(k as u32);
    let mut acc = DMatrix::<T>::zeros(size, size);
    for pi in &perms {
        acc += perm_matrix::<T>(pi, n)?;
    }
    acc /= T::from_usize(perms.len()).expect("k! fits");
    Ok(SymmetryProjector { k, n, psym: acc })
}

/// Hermitian and fixed by the sandwich `P_sym M P_sym`.
pub fn is_hpsym_matrix<T: Real>(m: &CMatrix<T>, proj: &SymmetryProjector<T>, tol: T) -> Result<bool> {
    let size = proj.psym.nrows();
    if m.shape() != (size, size) {
        return dim_err(format!("{:?} matrix for a projector of size {size}", m.shape()));
    }
    if !is_hermitian_matrix(m, tol) {
        return Ok(false);
    }
    let p = proj.complex();
    let sandwiched = &p * m * &p;
    Ok(frob_norm(&(sandwiched - m)) <= tol * frob_norm(m))
}
