//! Dense complex hypermatrices stored in generalized column-major order.
//!
//! Element `(i_1, ..., i_M)` (zero-based) lives at offset
//! `i_1 + m_1 (i_2 + m_2 (i_3 + ...))`, i.e. the first index varies fastest.
//! This is the same linearization as the one-based mixed-radix map
//! [`crate::matricization::psi`], shifted by one, so every contiguous
//! matricization of a hypermatrix is a reshape of its buffer.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_complex::Complex;

use crate::error::{dim_err, Error, Result};
use crate::fourier::{fft_tubal, ifft_tubal};
use crate::scalar::{cabs, czero, CMatrix, Real};

/// Mode sizes of a hypermatrix. An empty shape is a scalar.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Shape(Vec<usize>);

impl Shape {
    pub fn new(dims: impl Into<Vec<usize>>) -> Result<Self> {
        let dims = dims.into();
        if let Some(mode) = dims.iter().position(|&d| d == 0) {
            return Err(Error::Argument(format!("mode {mode} has size 0")));
        }
        Ok(Shape(dims))
    }

    /// `n` repeated `times` times.
    pub fn cubical(n: usize, times: usize) -> Result<Self> {
        Shape::new(vec![n; times])
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    /// Number of elements (product of the mode sizes).
    pub fn size(&self) -> usize {
        self.0.iter().product()
    }

    /// Zero-based linear offset of a zero-based multi-index.
    pub fn offset(&self, idx: &[usize]) -> Result<usize> {
        if idx.len() != self.0.len() {
            return dim_err(format!(
                "multi-index of length {} for a shape of order {}",
                idx.len(),
                self.0.len()
            ));
        }
        let mut off = 0;
        let mut stride = 1;
        for (mode, (&i, &d)) in idx.iter().zip(&self.0).enumerate() {
            if i >= d {
                return Err(Error::OutOfRange { mode, index: i, size: d });
            }
            off += i * stride;
            stride *= d;
        }
        Ok(off)
    }

    /// Zero-based multi-index of a zero-based linear offset.
    pub fn unravel(&self, mut off: usize) -> Result<Vec<usize>> {
        let size = self.size();
        if off >= size {
            return Err(Error::OutOfRange { mode: 0, index: off, size });
        }
        let mut idx = Vec::with_capacity(self.0.len());
        for &d in &self.0 {
            idx.push(off % d);
            off /= d;
        }
        Ok(idx)
    }

    /// Shape with the listed trailing mode dropped.
    pub(crate) fn without_last(&self) -> Shape {
        Shape(self.0[..self.0.len().saturating_sub(1)].to_vec())
    }

    pub(crate) fn concat(&self, other: &Shape) -> Shape {
        let mut dims = self.0.clone();
        dims.extend_from_slice(&other.0);
        Shape(dims)
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "[{}]", parts.join("x"))
    }
}

/// Iterates over every zero-based multi-index of `dims` in storage order.
pub(crate) fn for_each_index(dims: &[usize], mut f: impl FnMut(&[usize])) {
    let total: usize = dims.iter().product();
    let mut idx = vec![0usize; dims.len()];
    for _ in 0..total {
        f(&idx);
        for (i, &d) in idx.iter_mut().zip(dims) {
            *i += 1;
            if *i < d {
                break;
            }
            *i = 0;
        }
    }
}

/// A dense complex hypermatrix of arbitrary order.
#[derive(Clone, Debug, PartialEq)]
pub struct Hypermatrix<T: Real> {
    shape: Shape,
    data: Vec<Complex<T>>,
}

impl<T: Real> Hypermatrix<T> {
    pub fn zeros(shape: Shape) -> Self {
        let data = vec![czero(); shape.size()];
        Hypermatrix { shape, data }
    }

    pub fn from_vec(shape: Shape, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != shape.size() {
            return dim_err(format!(
                "{} elements supplied for shape {shape} ({} expected)",
                data.len(),
                shape.size()
            ));
        }
        Ok(Hypermatrix { shape, data })
    }

    /// Builds a hypermatrix by evaluating `f` at every zero-based multi-index.
    pub fn from_fn(shape: Shape, mut f: impl FnMut(&[usize]) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(shape.size());
        for_each_index(shape.dims(), |idx| data.push(f(idx)));
        Hypermatrix { shape, data }
    }

    /// Order-1 hypermatrix from a vector.
    pub fn from_vector(v: &[Complex<T>]) -> Self {
        Hypermatrix {
            shape: Shape(vec![v.len()]),
            data: v.to_vec(),
        }
    }

    /// Order-2 hypermatrix holding the entries of `m`.
    pub fn from_matrix(m: &CMatrix<T>) -> Self {
        Hypermatrix {
            shape: Shape(vec![m.nrows(), m.ncols()]),
            data: m.as_slice().to_vec(),
        }
    }

    /// Order-0 hypermatrix.
    pub fn scalar(z: Complex<T>) -> Self {
        Hypermatrix { shape: Shape(Vec::new()), data: vec![z] }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn dims(&self) -> &[usize] {
        self.shape.dims()
    }

    pub fn order(&self) -> usize {
        self.shape.order()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<Complex<T>> {
        self.data
    }

    pub fn get(&self, idx: &[usize]) -> Result<Complex<T>> {
        Ok(self.data[self.shape.offset(idx)?])
    }

    pub fn set(&mut self, idx: &[usize], value: Complex<T>) -> Result<()> {
        let off = self.shape.offset(idx)?;
        self.data[off] = value;
        Ok(())
    }

    /// Same buffer, new shape of equal size.
    pub fn reshape(self, shape: Shape) -> Result<Self> {
        Hypermatrix::from_vec(shape, self.data)
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Hypermatrix {
            shape: self.shape.clone(),
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, alpha: Complex<T>) -> Self {
        self.map(|z| z * alpha)
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }

    /// `<self, other>_F = sum conj(other) * self` (conjugate on the second argument).
    pub fn frobenius_inner(&self, other: &Hypermatrix<T>) -> Result<Complex<T>> {
        self.check_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(czero(), |acc, (a, b)| acc + *a * b.conj()))
    }

    /// `||self - other||_F`.
    pub fn distance(&self, other: &Hypermatrix<T>) -> Result<T> {
        self.check_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (a, b)| acc + (*a - *b).norm_sqr())
            .sqrt())
    }

    /// `||self - other||_F / ||other||_F`, or the absolute distance when `other` is zero.
    pub fn relative_distance(&self, other: &Hypermatrix<T>) -> Result<T> {
        let d = self.distance(other)?;
        let scale = other.frobenius_norm();
        Ok(if scale > T::zero() { d / scale } else { d })
    }

    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, z| if cabs(*z) > acc { cabs(*z) } else { acc })
    }

    pub(crate) fn check_same_shape(&self, other: &Hypermatrix<T>) -> Result<()> {
        if self.shape != other.shape {
            return dim_err(format!("shapes {} and {} differ", self.shape, other.shape));
        }
        Ok(())
    }

    /// Size of the last (tubal) mode; 1 for a scalar.
    pub fn tubal_len(&self) -> usize {
        self.dims().last().copied().unwrap_or(1)
    }

    /// The `l`-th (zero-based) frontal slice: the last index fixed at `l`.
    pub fn frontal_slice(&self, l: usize) -> Result<Hypermatrix<T>> {
        if self.order() == 0 {
            return dim_err("a scalar has no frontal slices");
        }
        let p = self.tubal_len();
        if l >= p {
            return Err(Error::OutOfRange { mode: self.order() - 1, index: l, size: p });
        }
        let block = self.len() / p;
        Ok(Hypermatrix {
            shape: self.shape.without_last(),
            data: self.data[l * block..(l + 1) * block].to_vec(),
        })
    }

    /// All frontal slices in order.
    pub fn frontal_slices(&self) -> Vec<Hypermatrix<T>> {
        (0..self.tubal_len())
            .map(|l| self.frontal_slice(l).expect("slice index in range"))
            .collect()
    }

    /// Stacks equally shaped hypermatrices along a new trailing mode.
    pub fn from_frontal_slices(slices: &[Hypermatrix<T>]) -> Result<Hypermatrix<T>> {
        let first = slices
            .first()
            .ok_or_else(|| Error::Argument("no frontal slices supplied".into()))?;
        let mut data = Vec::with_capacity(first.len() * slices.len());
        for (l, s) in slices.iter().enumerate() {
            if s.shape != first.shape {
                return dim_err(format!(
                    "frontal slice {l} has shape {}, expected {}",
                    s.shape, first.shape
                ));
            }
            data.extend_from_slice(&s.data);
        }
        let mut dims = first.dims().to_vec();
        dims.push(slices.len());
        Ok(Hypermatrix { shape: Shape(dims), data })
    }

    /// The tube `A[idx, :]` along the last mode.
    pub fn tube(&self, idx: &[usize]) -> Result<Vec<Complex<T>>> {
        if self.order() == 0 {
            return dim_err("a scalar has no tubes");
        }
        let lead = self.shape.without_last();
        let base = lead.offset(idx)?;
        let block = lead.size();
        Ok((0..self.tubal_len()).map(|l| self.data[base + l * block]).collect())
    }

    /// Swaps the leading `k` modes with the trailing `k` modes of an order-`2k`
    /// hypermatrix and conjugates: the generalized conjugate transpose.
    pub fn group_swap_conj(&self) -> Result<Hypermatrix<T>> {
        let d = self.order();
        if !d.is_multiple_of(2) {
            return Err(Error::Argument(format!("order {d} is not even")));
        }
        let k = d / 2;
        let (rows, cols) = self.dims().split_at(k);
        if rows != cols {
            return dim_err(format!("mode groups {rows:?} and {cols:?} differ"));
        }
        let r: usize = rows.iter().product();
        let mut out = Hypermatrix::zeros(self.shape.clone());
        for j in 0..r {
            for i in 0..r {
                out.data[i + r * j] = self.data[j + r * i].conj();
            }
        }
        Ok(out)
    }

    /// Applies a mode permutation: output mode `m` is input mode `perm[m]`.
    pub fn permute_modes(&self, perm: &[usize]) -> Result<Hypermatrix<T>> {
        let d = self.order();
        let mut seen = vec![false; d];
        if perm.len() != d || perm.iter().any(|&m| m >= d || std::mem::replace(&mut seen[m], true)) {
            return Err(Error::Argument(format!("{perm:?} is not a permutation of the {d} modes")));
        }
        let dims: Vec<usize> = perm.iter().map(|&m| self.dims()[m]).collect();
        let mut src = vec![0usize; d];
        Ok(Hypermatrix::from_fn(Shape(dims), |idx| {
            for (m, &pm) in perm.iter().enumerate() {
                src[pm] = idx[m];
            }
            self.data[self.shape.offset(&src).expect("permuted index in range")]
        }))
    }
}

impl<T: Real> Index<&[usize]> for Hypermatrix<T> {
    type Output = Complex<T>;

    fn index(&self, idx: &[usize]) -> &Complex<T> {
        let off = self.shape.offset(idx).unwrap_or_else(|e| panic!("{e}"));
        &self.data[off]
    }
}

impl<T: Real> IndexMut<&[usize]> for Hypermatrix<T> {
    fn index_mut(&mut self, idx: &[usize]) -> &mut Complex<T> {
        let off = self.shape.offset(idx).unwrap_or_else(|e| panic!("{e}"));
        &mut self.data[off]
    }
}

macro_rules! elementwise_op {
    ($trait:ident, $method:ident, $op:tt) => {
        impl<'a, T: Real> $trait<&'a Hypermatrix<T>> for &'a Hypermatrix<T> {
            type Output = Hypermatrix<T>;

            /// Panics when the shapes differ.
            fn $method(self, rhs: &'a Hypermatrix<T>) -> Hypermatrix<T> {
                assert_eq!(self.shape, rhs.shape, "elementwise op on mismatched shapes");
                Hypermatrix {
                    shape: self.shape.clone(),
                    data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a $op *b).collect(),
                }
            }
        }
    };
}

elementwise_op!(Add, add, +);
elementwise_op!(Sub, sub, -);

impl<T: Real> Mul<Complex<T>> for &Hypermatrix<T> {
    type Output = Hypermatrix<T>;

    fn mul(self, rhs: Complex<T>) -> Hypermatrix<T> {
        self.scale(rhs)
    }
}

impl<T: Real> Neg for &Hypermatrix<T> {
    type Output = Hypermatrix<T>;

    fn neg(self) -> Hypermatrix<T> {
        self.map(|z| -z)
    }
}

/// An order-`2k+1` hypermatrix whose first `2k` modes all have size `n` and
/// whose last (tubal) mode has length `p`.
///
/// The tubal FFT is computed lazily and cached.
#[derive(Clone, Debug)]
pub struct TubalTensor<T: Real> {
    base: Hypermatrix<T>,
    k: usize,
    n: usize,
    freq: OnceLock<Hypermatrix<T>>,
}

impl<T: Real> PartialEq for TubalTensor<T> {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
    }
}

impl<T: Real> TubalTensor<T> {
    /// Wraps a hypermatrix, inferring `k` from its order.
    pub fn new(base: Hypermatrix<T>) -> Result<Self> {
        let d = base.order();
        if d < 3 || d.is_multiple_of(2) {
            return Err(Error::Argument(format!(
                "a tubal tensor has odd order 2k+1 >= 3, got order {d}"
            )));
        }
        let k = (d - 1) / 2;
        let n = base.dims()[0];
        if base.dims()[..2 * k].iter().any(|&m| m != n) {
            return dim_err(format!("leading modes of {} are not all equal", base.shape()));
        }
        Ok(TubalTensor { base, k, n, freq: OnceLock::new() })
    }

    /// Builds the tensor whose tubal FFT is `freq`.
    pub fn from_frequency(freq: Hypermatrix<T>) -> Result<Self> {
        let t = TubalTensor::new(ifft_tubal(&freq))?;
        let _ = t.freq.set(freq);
        Ok(t)
    }

    /// Builds the tensor whose frequency slices are `slices` (each of order `2k`).
    pub fn from_frequency_slices(slices: &[Hypermatrix<T>]) -> Result<Self> {
        TubalTensor::from_frequency(Hypermatrix::from_frontal_slices(slices)?)
    }

    pub fn zeros(n: usize, k: usize, p: usize) -> Result<Self> {
        TubalTensor::new(Hypermatrix::zeros(tubal_shape(n, k, p)?))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.base.tubal_len()
    }

    /// `n^k`, the side of each cubically balanced slice matrix.
    pub fn side(&self) -> usize {
        self.n.pow(self.k as u32)
    }

    pub fn as_hypermatrix(&self) -> &Hypermatrix<T> {
        &self.base
    }

    pub fn into_hypermatrix(self) -> Hypermatrix<T> {
        self.base
    }

    /// Tubal FFT of the tensor (cached).
    pub fn freq(&self) -> &Hypermatrix<T> {
        self.freq.get_or_init(|| fft_tubal(&self.base))
    }

    /// Frequency slice `l` as an order-`2k` hypermatrix.
    pub fn freq_slice(&self, l: usize) -> Result<Hypermatrix<T>> {
        self.freq().frontal_slice(l)
    }

    /// Cubically balanced matricization (`n^k x n^k`) of frequency slice `l`.
    pub fn freq_matrix(&self, l: usize) -> Result<CMatrix<T>> {
        let p = self.p();
        if l >= p {
            return Err(Error::OutOfRange { mode: 2 * self.k, index: l, size: p });
        }
        let s = self.side();
        let block = s * s;
        Ok(CMatrix::from_column_slice(s, s, &self.freq().data()[l * block..(l + 1) * block]))
    }

    /// Every frequency slice matrix, in slice order.
    pub fn freq_matrices(&self) -> Vec<CMatrix<T>> {
        (0..self.p())
            .map(|l| self.freq_matrix(l).expect("slice index in range"))
            .collect()
    }

    pub(crate) fn same_structure(&self, other: &TubalTensor<T>) -> Result<()> {
        if self.k != other.k || self.n != other.n || self.p() != other.p() {
            return dim_err(format!(
                "tubal tensors of shapes {} and {} are not conformable",
                self.base.shape(),
                other.base.shape()
            ));
        }
        Ok(())
    }
}

/// Shape `(n, ..., n, p)` with `2k` leading modes.
pub fn tubal_shape(n: usize, k: usize, p: usize) -> Result<Shape> {
    let mut dims = vec![n; 2 * k];
    dims.push(p);
    Shape::new(dims)
}
