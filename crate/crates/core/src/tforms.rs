//! Degree-k t-Hermitian forms evaluated at points of `(C^n)^p`.
//!
//! A tubal vector of indeterminates is never stored symbolically; it only
//! exists through its evaluation, whose frequency slice `l` is the point `z^(l)`.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::einstein::gen_t_conj_transpose;
use crate::error::{arg_err, dim_err, Error, Result};
use crate::forms::{form_value_complex, is_hermitian_tensor, is_partially_symmetric, multilinear_matmul, realize, HermitianFormCoeffs};
use crate::fourier::{fft_tubal, ifft_tubal, ifft_vec};
use crate::hypermatrix::{Hypermatrix, Shape, TubalTensor};
use crate::scalar::{CMatrix, Real};

/// One complex `n`-vector per frequency slice.
#[derive(Clone, Debug, PartialEq)]
pub struct EvaluationPoint<T: Real> {
    slices: Vec<Vec<Complex<T>>>,
}

impl<T: Real> EvaluationPoint<T> {
    pub fn new(slices: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let n = slices
            .first()
            .ok_or_else(|| Error::Argument("an evaluation point needs at least one slice".into()))?
            .len();
        if let Some(l) = slices.iter().position(|z| z.len() != n) {
            return dim_err(format!("slice {l} has length {}, expected {n}", slices[l].len()));
        }
        Ok(EvaluationPoint { slices })
    }

    /// The same vector in each of `p` slices.
    pub fn constant(z: Vec<Complex<T>>, p: usize) -> Result<Self> {
        EvaluationPoint::new(vec![z; p])
    }

    pub fn slices(&self) -> &[Vec<Complex<T>>] {
        &self.slices
    }

    pub fn n(&self) -> usize {
        self.slices[0].len()
    }

    pub fn p(&self) -> usize {
        self.slices.len()
    }

    fn check_against(&self, a: &TubalTensor<T>) -> Result<()> {
        if self.n() != a.n() || self.p() != a.p() {
            return dim_err(format!(
                "point in (C^{})^{} does not match a tensor with n = {}, p = {}",
                self.n(),
                self.p(),
                a.n(),
                a.p()
            ));
        }
        Ok(())
    }
}

/// An evaluated tubal vector `X` (`n x 1 x p`) in both domains, stored as `n x p` matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct TubalVectorValue<T: Real> {
    pub spatial: CMatrix<T>,
    pub freq: CMatrix<T>,
}

impl<T: Real> TubalVectorValue<T> {
    /// The spatial value as an `n x 1 x p` hypermatrix.
    pub fn as_hypermatrix(&self) -> Hypermatrix<T> {
        let (n, p) = self.spatial.shape();
        Hypermatrix::from_vec(Shape::new(vec![n, 1, p]).expect("positive dims"), self.spatial.as_slice().to_vec())
            .expect("sizes agree")
    }
}

/// Evaluates the tubal vector of indeterminates at `z`: frequency slice `l` is `z^(l)`.
pub fn tubal_eval<T: Real>(z: &EvaluationPoint<T>) -> TubalVectorValue<T> {
    let (n, p) = (z.n(), z.p());
    let freq = CMatrix::from_fn(n, p, |i, l| z.slices[l][i]);
    let shape = Shape::new(vec![n, 1, p]).expect("positive dims");
    let spatial_h = ifft_tubal(&Hypermatrix::from_vec(shape, freq.as_slice().to_vec()).expect("sizes agree"));
    TubalVectorValue { spatial: CMatrix::from_column_slice(n, p, spatial_h.data()), freq }
}

/// Value of a t-Hermitian form: `p` real frequency values and their inverse transform.
#[derive(Clone, Debug, PartialEq)]
pub struct FormValues<T: Real> {
    pub freq_values: Vec<T>,
    pub spatial_tube: Vec<Complex<T>>,
}

impl<T: Real> FormValues<T> {
    pub(crate) fn from_freq(freq_values: Vec<T>) -> Self {
        let as_complex: Vec<Complex<T>> = freq_values.iter().map(|&x| Complex::new(x, T::zero())).collect();
        FormValues { spatial_tube: ifft_vec(&as_complex), freq_values }
    }
}

/// `A *_t (X_1, ..., X_d)` for an order-`d+1` hypermatrix and `d` order-3
/// factors `X_j` of shape `m_j x r_j x p`: frequency slice `l` of the result is
/// the multilinear product of the frequency slices.
pub fn t_multilinear_product<T: Real>(a: &Hypermatrix<T>, factors: &[Hypermatrix<T>]) -> Result<Hypermatrix<T>> {
    if a.order() == 0 || factors.len() + 1 != a.order() {
        return dim_err(format!(
            "{} factors supplied for a hypermatrix of shape {}",
            factors.len(),
            a.shape()
        ));
    }
    let p = a.tubal_len();
    let ah = fft_tubal(a);
    let mut fh = Vec::with_capacity(factors.len());
    for (j, x) in factors.iter().enumerate() {
        match *x.dims() {
            [_, _, q] if q == p => fh.push(fft_tubal(x)),
            _ => return dim_err(format!("factor {j} has shape {}, expected m x r x {p}", x.shape())),
        }
    }
    let mut slices = Vec::with_capacity(p);
    for l in 0..p {
        let mats = fh
            .iter()
            .map(|x| {
                let (m, r) = (x.dims()[0], x.dims()[1]);
                CMatrix::from_column_slice(m, r, &x.data()[l * m * r..(l + 1) * m * r])
            })
            .collect::<Vec<_>>();
        slices.push(multilinear_matmul(&ah.frontal_slice(l)?, &mats)?);
    }
    Ok(ifft_tubal(&Hypermatrix::from_frontal_slices(&slices)?))
}

/// Membership in the generalized t-Hermitian set: `A` equals its generalized
/// t-conjugate transpose, i.e. every frequency slice is Hermitian.
pub fn is_t_hermitian_k<T: Real>(a: &TubalTensor<T>, tol: T) -> Result<bool> {
    let ah = gen_t_conj_transpose(a)?;
    let base = a.as_hypermatrix();
    Ok(base.distance(ah.as_hypermatrix())? <= tol * base.frobenius_norm())
}

/// Hermitian partially symmetric in the tubal sense: every frequency slice is
/// Hermitian and every slice is partially symmetric.
pub fn is_t_hps<T: Real>(a: &TubalTensor<T>, tol: T) -> Result<bool> {
    if !is_t_hermitian_k(a, tol)? {
        return Ok(false);
    }
    for s in a.as_hypermatrix().frontal_slices() {
        if !is_partially_symmetric(&s, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn eval_slices<T: Real>(a: &TubalTensor<T>, z: &EvaluationPoint<T>) -> Result<FormValues<T>> {
    z.check_against(a)?;
    let mut vals = Vec::with_capacity(a.p());
    for (l, w) in z.slices.iter().enumerate() {
        let slice = a.freq_slice(l)?;
        let value = form_value_complex(&slice, a.k(), w);
        let wn2 = w.iter().fold(T::zero(), |acc, x| acc + x.norm_sqr());
        vals.push(realize(value, slice.frobenius_norm() * wn2.powi(a.k() as i32))?);
    }
    Ok(FormValues::from_freq(vals))
}

/// `h_A(X) = A *_t (J(X), ..., J(X), X, ..., X)` evaluated at `z`, computed
/// slicewise in the frequency domain. `A` must be t-Hermitian partially symmetric.
pub fn eval_t_hermitian_form<T: Real>(a: &TubalTensor<T>, z: &EvaluationPoint<T>) -> Result<FormValues<T>> {
    if !is_t_hps(a, T::default_tol())? {
        return arg_err("tensor is not t-Hermitian partially symmetric");
    }
    eval_slices(a, z)
}

/// As [`eval_t_hermitian_form`], but only requires Hermitian frequency slices.
/// Each slice value is `v^H M_l v` with `v = (z^(l))^{⊗k}`.
pub fn eval_t_hermitian_form_unsymmetrized<T: Real>(a: &TubalTensor<T>, z: &EvaluationPoint<T>) -> Result<FormValues<T>> {
    if !is_t_hermitian_k(a, T::default_tol())? {
        return arg_err("tensor is not t-Hermitian");
    }
    eval_slices(a, z)
}

/// The `p` classical forms of a t-HPS tensor: component `l` has coefficients `A_hat_(l)`.
pub fn theta_decompose<T: Real>(a: &TubalTensor<T>) -> Result<Vec<HermitianFormCoeffs<T>>> {
    if !is_t_hps(a, T::default_tol())? {
        return arg_err("tensor is not t-Hermitian partially symmetric");
    }
    (0..a.p())
        .map(|l| HermitianFormCoeffs::new(a.freq_slice(l)?))
        .collect()
}

/// Inverse of [`theta_decompose`]: the tensor whose frequency slices are the coefficients.
pub fn psi_lift<T: Real>(coeffs: &[HermitianFormCoeffs<T>]) -> Result<TubalTensor<T>> {
    let first = coeffs
        .first()
        .ok_or_else(|| Error::Argument("no components supplied".into()))?;
    for (l, c) in coeffs.iter().enumerate() {
        if c.n() != first.n() || c.k() != first.k() {
            return arg_err(format!("component {l} has (n, k) = ({}, {}), expected ({}, {})", c.n(), c.k(), first.n(), first.k()));
        }
        if !is_hermitian_tensor(c.coeffs(), T::default_tol())?
            || !is_partially_symmetric(c.coeffs(), T::default_tol())?
        {
            return arg_err(format!("component {l} is not Hermitian partially symmetric"));
        }
    }
    let slices: Vec<Hypermatrix<T>> = coeffs.iter().map(|c| c.coeffs().clone()).collect();
    TubalTensor::from_frequency_slices(&slices)
}

/// Per-slice minima found by [`t_hpd_sample_test`] with the points attaining them.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleTestResult<T: Real> {
    pub minima: Vec<T>,
    pub witnesses: Vec<Vec<Complex<T>>>,
}

impl<T: Real> SampleTestResult<T> {
    pub fn all_positive(&self) -> bool {
        self.minima.iter().all(|&m| m > T::zero())
    }

    /// First slice with a nonpositive minimum.
    pub fn first_nonpositive(&self) -> Option<(usize, T, &[Complex<T>])> {
        self.minima
            .iter()
            .position(|&m| m <= T::zero())
            .map(|l| (l, self.minima[l], &self.witnesses[l][..]))
    }

    pub fn overall_min(&self) -> T {
        self.minima.iter().copied().fold(T::max_value().expect("bounded"), |a, b| if b < a { b } else { a })
    }
}

const DESCENT_ITERS: usize = 50;

fn normalize<T: Real>(w: &mut [Complex<T>]) {
    let nrm = w.iter().fold(T::zero(), |acc, x| acc + x.norm_sqr()).sqrt();
    if nrm > T::zero() {
        for x in w.iter_mut() {
            *x /= nrm;
        }
    }
}

fn random_sphere_point<T: Real>(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex<T>> {
    let mut w: Vec<Complex<T>> = (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex::new(T::lit(re), T::lit(im))
        })
        .collect();
    normalize(&mut w);
    w
}

/// Projected gradient descent on the unit sphere, starting from `w`.
fn refine<T: Real>(f: &impl Fn(&[Complex<T>]) -> T, w: &mut Vec<Complex<T>>, value: &mut T) {
    let h = T::lit(1e-5);
    let two_h = h + h;
    let mut step = T::lit(0.1);
    for _ in 0..DESCENT_ITERS {
        let mut grad = vec![Complex::new(T::zero(), T::zero()); w.len()];
        let mut probe = w.clone();
        for i in 0..w.len() {
            for part in 0..2 {
                let delta = if part == 0 { Complex::new(h, T::zero()) } else { Complex::new(T::zero(), h) };
                probe[i] = w[i] + delta;
                let up = f(&probe);
                probe[i] = w[i] - delta;
                let down = f(&probe);
                probe[i] = w[i];
                let g = (up - down) / two_h;
                if part == 0 { grad[i].re = g } else { grad[i].im = g }
            }
        }
        let gn = grad.iter().fold(T::zero(), |acc, x| acc + x.norm_sqr()).sqrt();
        if gn <= T::zero() {
            break;
        }
        let mut cand: Vec<Complex<T>> = w.iter().zip(&grad).map(|(x, g)| *x - *g * (step / gn)).collect();
        normalize(&mut cand);
        let cv = f(&cand);
        if cv < *value {
            *w = cand;
            *value = cv;
        } else {
            step /= T::lit(2.0);
        }
    }
}

/// Estimates the minimum of each frequency-slice form over the unit sphere of
/// `C^n` by uniform sampling followed by local descent. Every slice must be
/// Hermitian. Positive minima are evidence of t-HPD; a nonpositive minimum is a
/// disproof with the returned witness.
pub fn t_hpd_sample_test<T: Real>(a: &TubalTensor<T>, samples: usize, seed: u64) -> Result<SampleTestResult<T>> {
    if samples == 0 {
        return arg_err("at least one sample is required");
    }
    if !is_t_hermitian_k(a, T::default_tol())? {
        return arg_err("tensor is not t-Hermitian");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n, k) = (a.n(), a.k());
    let mut out = SampleTestResult { minima: Vec::new(), witnesses: Vec::new() };
    for l in 0..a.p() {
        let slice = a.freq_slice(l)?;
        let f = |w: &[Complex<T>]| form_value_complex(&slice, k, w).re;
        let mut best = random_sphere_point::<T>(n, &mut rng);
        let mut best_val = f(&best);
        for _ in 1..samples {
            let w = random_sphere_point::<T>(n, &mut rng);
            let v = f(&w);
            if v < best_val {
                best_val = v;
                best = w;
            }
        }
        refine(&f, &mut best, &mut best_val);
        out.minima.push(best_val);
        out.witnesses.push(best);
    }
    Ok(out)
}
