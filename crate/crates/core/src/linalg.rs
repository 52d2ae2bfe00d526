//! Small dense kernels on top of nalgebra.

use num_complex::Complex;

use crate::scalar::{cabs, czero, frob_norm, CMatrix, Real};

/// `||M - M^H||_F <= tol ||M||_F`.
pub(crate) fn is_hermitian_matrix<T: Real>(m: &CMatrix<T>, tol: T) -> bool {
    if m.nrows() != m.ncols() {
        return false;
    }
    let mut diff = T::zero();
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            diff += (m[(i, j)] - m[(j, i)].conj()).norm_sqr();
        }
    }
    diff.sqrt() <= tol * frob_norm(m)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub(crate) fn herm_eig<T: Real>(m: &CMatrix<T>) -> (Vec<T>, CMatrix<T>) {
    let h = (m + m.adjoint()) * Complex::new(T::lit(0.5), T::zero());
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = CMatrix::zeros(m.nrows(), m.ncols());
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &eig.eigenvectors.column(src));
    }
    (vals, vecs)
}

/// Eigenvalues of a Hermitian matrix, descending.
pub(crate) fn herm_eigvals_desc<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    let h = (m + m.adjoint()) * Complex::new(T::lit(0.5), T::zero());
    let mut vals: Vec<T> = h.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    vals
}

/// Pivot at which a Cholesky factorization broke down.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct PivotFailure<T> {
    pub index: usize,
    pub value: T,
}

/// Cholesky factor `L` with `M = L L^H`, without regularization.
///
/// A pivot counts as failed when it is not above `4 n eps max|M_ii|`, so an
/// exactly singular matrix is rejected even after rounding.
pub(crate) fn cholesky_strict<T: Real>(m: &CMatrix<T>) -> Result<CMatrix<T>, PivotFailure<T>> {
    let n = m.nrows();
    let scale = (0..n).fold(T::zero(), |acc, i| {
        let d = cabs(m[(i, i)]);
        if d > acc { d } else { acc }
    });
    let floor = T::lit(4.0) * T::from_usize(n.max(1)).unwrap() * T::default_epsilon() * scale;
    let mut l = CMatrix::<T>::zeros(n, n);
    for j in 0..n {
        let mut d = m[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if d.partial_cmp(&floor) != Some(std::cmp::Ordering::Greater) {
            return Err(PivotFailure { index: j, value: d });
        }
        let ljj = d.sqrt();
        l[(j, j)] = Complex::new(ljj, T::zero());
        for i in j + 1..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(l)
}

/// Off-diagonal Frobenius mass of a square matrix.
pub(crate) fn off_diagonal_norm<T: Real>(m: &CMatrix<T>) -> T {
    let mut s = T::zero();
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// `M^e` by repeated squaring (`e >= 1`).
pub(crate) fn matrix_power<T: Real>(m: &CMatrix<T>, mut e: u32) -> CMatrix<T> {
    let mut base = m.clone();
    let mut acc: Option<CMatrix<T>> = None;
    while e > 0 {
        if e & 1 == 1 {
            acc = Some(match acc {
                Some(a) => &a * &base,
                None => base.clone(),
            });
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc.unwrap_or_else(|| CMatrix::from_element(m.nrows(), m.ncols(), czero()))
}
