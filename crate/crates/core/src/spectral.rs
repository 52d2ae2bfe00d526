//! Joint matrix-tensor unitary (MTU) diagonalization of the frequency-slice
//! matrices, the resulting spectral decomposition, and positivity tests.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::einstein::tensor_from_freq_matrices;
use crate::error::{arg_err, dim_err, Error, Result};
use crate::forms::outer_product;
use crate::fourier::ifft_vec;
use crate::hypermatrix::{Hypermatrix, Shape, TubalTensor};
use crate::linalg::{cholesky_strict, herm_eig, herm_eigvals_desc, is_hermitian_matrix, off_diagonal_norm};
use crate::matricization::hvec_inv;
use crate::scalar::{czero, frob_norm, CMatrix, CVector, Real};
use crate::tforms::{EvaluationPoint, FormValues};

/// Relative off-diagonal mass above which `Q^H M_l Q` is not considered diagonal.
pub const DIAGONALITY_TOL: f64 = 1e-8;

/// Spectral terms whose largest `|lambda|` is at most this fraction of the
/// overall largest are dropped when summing.
pub const TRUNCATION_TOL: f64 = 1e-12;

const DEFAULT_SEED: u64 = 0x7ab5_1e55;
const RETRIES: u64 = 3;

/// How the shared eigenbasis is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagonalizationMode {
    /// Eigenvectors of a random Gaussian combination `sum_l c_l M_l`.
    Generic { seed: u64 },
    /// Eigenvectors of `M_1` alone.
    FirstSlice,
}

impl Default for DiagonalizationMode {
    fn default() -> Self {
        DiagonalizationMode::Generic { seed: DEFAULT_SEED }
    }
}

/// Shared unitary `Q` with `Q^H M_l Q = diag(lambda^(l))` for every slice.
#[derive(Clone, Debug)]
pub struct SpectralData<T: Real> {
    /// Columns `q_i` of the common eigenbasis.
    pub q: CMatrix<T>,
    /// `U_i = hvec_inv(conj(q_i))`, order `k`.
    pub factors: Vec<Hypermatrix<T>>,
    /// `lambdas[i][l]` is the eigenvalue of `M_l` on `q_i`.
    pub lambdas: Vec<Vec<T>>,
    /// `ifft(lambdas[i])`.
    pub spatial_lambdas: Vec<Vec<Complex<T>>>,
    pub n: usize,
    pub k: usize,
}

impl<T: Real> SpectralData<T> {
    pub fn p(&self) -> usize {
        self.lambdas.first().map_or(0, |l| l.len())
    }

    /// Indices of the terms kept after truncation.
    fn kept_terms(&self) -> Vec<usize> {
        let overall = self
            .lambdas
            .iter()
            .flatten()
            .fold(T::zero(), |acc, x| if x.abs() > acc { x.abs() } else { acc });
        let cutoff = overall * T::lit(TRUNCATION_TOL);
        (0..self.lambdas.len())
            .filter(|&i| self.lambdas[i].iter().any(|x| x.abs() > cutoff))
            .collect()
    }

    /// Eigenvalues of slice `l` in factor order.
    pub fn slice_eigenvalues(&self, l: usize) -> Vec<T> {
        self.lambdas.iter().map(|lam| lam[l]).collect()
    }
}

/// Outcome of the commutation test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MtuCheck {
    pub commuting: bool,
    /// First pair of slices (zero-based) whose matrices fail to commute.
    pub witness: Option<(usize, usize)>,
}

fn hermitian_family<T: Real>(a: &TubalTensor<T>, tol: T) -> Result<Vec<CMatrix<T>>> {
    let mats = a.freq_matrices();
    if let Some(l) = mats.iter().position(|m| !is_hermitian_matrix(m, tol)) {
        return arg_err(format!("frequency slice {l} is not Hermitian"));
    }
    Ok(mats)
}

/// Whether the Hermitian slice matrices commute pairwise:
/// `||M_l M_m - M_m M_l||_F <= tol ||M_l||_F ||M_m||_F`.
pub fn check_joint_mtu<T: Real>(a: &TubalTensor<T>, tol: T) -> Result<MtuCheck> {
    let mats = hermitian_family(a, tol)?;
    Ok(commutation(&mats, tol))
}

fn commutation<T: Real>(mats: &[CMatrix<T>], tol: T) -> MtuCheck {
    let norms: Vec<T> = mats.iter().map(frob_norm).collect();
    for l in 0..mats.len() {
        for m in l + 1..mats.len() {
            let comm = &mats[l] * &mats[m] - &mats[m] * &mats[l];
            if frob_norm(&comm) > tol * norms[l] * norms[m] {
                return MtuCheck { commuting: false, witness: Some((l, m)) };
            }
        }
    }
    MtuCheck { commuting: true, witness: None }
}

/// First slice whose matrix is not diagonalized by `q`.
/// [`DIAGONALITY_TOL`], loosened to the scalar's default tolerance when that is larger.
fn diagonality_tol<T: Real>() -> T {
    let fixed = T::lit(DIAGONALITY_TOL);
    if T::default_tol() > fixed { T::default_tol() } else { fixed }
}

fn first_non_diagonal<T: Real>(q: &CMatrix<T>, mats: &[CMatrix<T>]) -> Option<usize> {
    let qh = q.adjoint();
    mats.iter().position(|m| {
        let d = &qh * m * q;
        off_diagonal_norm(&d) > diagonality_tol::<T>() * frob_norm(m)
    })
}

fn candidate_basis<T: Real>(mats: &[CMatrix<T>], mode: DiagonalizationMode, attempt: u64) -> CMatrix<T> {
    let target = match mode {
        DiagonalizationMode::FirstSlice => mats[0].clone(),
        DiagonalizationMode::Generic { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
            let mut acc = CMatrix::from_element(mats[0].nrows(), mats[0].ncols(), czero());
            for m in mats {
                let c: f64 = StandardNormal.sample(&mut rng);
                let scale = frob_norm(m);
                if scale > T::zero() {
                    acc += m * Complex::new(T::lit(c) / scale, T::zero());
                }
            }
            acc
        }
    };
    herm_eig(&target).1
}

/// A unitary that diagonalizes every matrix of a commuting Hermitian family.
fn joint_basis<T: Real>(mats: &[CMatrix<T>], mode: DiagonalizationMode) -> Result<CMatrix<T>> {
    let attempts = match mode {
        DiagonalizationMode::FirstSlice => 1,
        DiagonalizationMode::Generic { .. } => RETRIES,
    };
    for attempt in 0..attempts {
        let q = candidate_basis(mats, mode, attempt);
        if first_non_diagonal(&q, mats).is_none() {
            return Ok(q);
        }
    }
    Err(Error::Numerical(
        "no shared eigenbasis diagonalized every slice; the spectrum is too degenerate".into(),
    ))
}

/// Computes the shared eigenbasis `Q` and the per-slice eigenvalues.
pub fn joint_eigendecompose<T: Real>(a: &TubalTensor<T>, tol: T) -> Result<SpectralData<T>> {
    joint_eigendecompose_with(a, tol, DiagonalizationMode::default())
}

pub fn joint_eigendecompose_with<T: Real>(a: &TubalTensor<T>, tol: T, mode: DiagonalizationMode) -> Result<SpectralData<T>> {
    let mats = hermitian_family(a, tol)?;
    if let Some((first, second)) = commutation(&mats, tol).witness {
        return Err(Error::NotJointMtu { first, second });
    }
    let q = joint_basis(&mats, mode)?;
    let qh = q.adjoint();
    let side = q.ncols();
    let mut lambdas = vec![Vec::with_capacity(mats.len()); side];
    for m in &mats {
        let d = &qh * m * &q;
        let scale = frob_norm(m);
        for (i, lam) in lambdas.iter_mut().enumerate() {
            let z = d[(i, i)];
            if z.im.abs() > diagonality_tol::<T>() * (T::one() + scale) {
                return Err(Error::Numerical(format!("eigenvalue {i} has imaginary part {:.3e}", z.im.to_f64_lossy())));
            }
            lam.push(z.re);
        }
    }
    let half = Shape::cubical(a.n(), a.k())?;
    let factors = (0..side)
        .map(|i| hvec_inv(&q.column(i).map(|z| z.conj()), &half))
        .collect::<Result<Vec<_>>>()?;
    let spatial_lambdas = lambdas
        .iter()
        .map(|lam| ifft_vec(&lam.iter().map(|&x| Complex::new(x, T::zero())).collect::<Vec<_>>()))
        .collect();
    Ok(SpectralData { q, factors, lambdas, spatial_lambdas, n: a.n(), k: a.k() })
}

/// `A = sum_i conj(U_i) o U_i o Lambda_i`, evaluated in the spatial domain.
pub fn spectral_reconstruct<T: Real>(s: &SpectralData<T>) -> Result<TubalTensor<T>> {
    let side = s.n.pow(s.k as u32);
    if s.factors.len() != side || s.lambdas.len() != side || s.spatial_lambdas.len() != side {
        return dim_err(format!("spectral data with {} factors for n^k = {side}", s.factors.len()));
    }
    let p = s.p();
    if p == 0 {
        return arg_err("spectral data has no slices");
    }
    let mut dims = vec![s.n; 2 * s.k];
    dims.push(p);
    let mut acc = Hypermatrix::zeros(Shape::new(dims)?);
    for i in s.kept_terms() {
        let u = &s.factors[i];
        let lam = Hypermatrix::from_vector(&s.spatial_lambdas[i]);
        acc = &acc + &outer_product(&[u.conj(), u.clone(), lam]);
    }
    TubalTensor::new(acc)
}

/// Row `l` holds the eigenvalues of `M_l`, in descending order.
pub fn t_matrix_tensor_eigenvalues<T: Real>(a: &TubalTensor<T>) -> Result<Vec<Vec<T>>> {
    Ok(hermitian_family(a, T::default_tol())?
        .iter()
        .map(herm_eigvals_desc)
        .collect())
}

/// Why the commutant positivity test returned FALSE.
#[derive(Clone, Debug, PartialEq)]
pub enum Algorithm3Failure<T> {
    NotHermitian { slice: usize },
    CholeskyFailed { slice: usize, pivot: usize, value: T },
    NotCommuting { slice: usize },
}

impl<T> Algorithm3Failure<T> {
    pub fn code(&self) -> &'static str {
        match self {
            Algorithm3Failure::NotHermitian { .. } => "not-hermitian",
            Algorithm3Failure::CholeskyFailed { .. } => "cholesky-failed",
            Algorithm3Failure::NotCommuting { .. } => "not-commuting",
        }
    }

    pub fn slice(&self) -> usize {
        match *self {
            Algorithm3Failure::NotHermitian { slice }
            | Algorithm3Failure::CholeskyFailed { slice, .. }
            | Algorithm3Failure::NotCommuting { slice } => slice,
        }
    }
}

/// TRUE certifies that `A` is t-Hermitian positive definite.
#[derive(Clone, Debug, PartialEq)]
pub struct Algorithm3Outcome<T> {
    pub verdict: bool,
    pub failure: Option<Algorithm3Failure<T>>,
}

/// Positivity test for commutant forms: Cholesky on every slice matrix, then a
/// check that one unitary diagonalizes them all.
pub fn algorithm3_positivity<T: Real>(a: &TubalTensor<T>) -> Algorithm3Outcome<T> {
    algorithm3_positivity_with(a, DiagonalizationMode::default())
}

pub fn algorithm3_positivity_with<T: Real>(a: &TubalTensor<T>, mode: DiagonalizationMode) -> Algorithm3Outcome<T> {
    let fail = |f| Algorithm3Outcome { verdict: false, failure: Some(f) };
    let mats = a.freq_matrices();
    if let Some(slice) = mats.iter().position(|m| !is_hermitian_matrix(m, T::default_tol())) {
        return fail(Algorithm3Failure::NotHermitian { slice });
    }
    for (slice, m) in mats.iter().enumerate() {
        if let Err(e) = cholesky_strict(m) {
            return fail(Algorithm3Failure::CholeskyFailed { slice, pivot: e.index, value: e.value });
        }
    }
    let q = match mode {
        DiagonalizationMode::FirstSlice => candidate_basis(&mats, mode, 0),
        DiagonalizationMode::Generic { .. } => match joint_basis(&mats, mode) {
            Ok(q) => q,
            Err(_) => candidate_basis(&mats, mode, 0),
        },
    };
    if let Some(slice) = first_non_diagonal(&q, &mats) {
        return fail(Algorithm3Failure::NotCommuting { slice });
    }
    Algorithm3Outcome { verdict: true, failure: None }
}

/// Weights `u_i(l) = |U_i * (w^(l), ..., w^(l))|^2` and the resulting form values.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralEvaluation<T: Real> {
    pub u_weights: Vec<Vec<T>>,
    pub result: FormValues<T>,
}

/// `w^{⊗k}` in linearized order.
fn tensor_power<T: Real>(w: &[Complex<T>], k: usize) -> CVector<T> {
    let v = Hypermatrix::from_vector(w);
    let pow = outer_product(&vec![v; k]);
    CVector::from_column_slice(pow.data())
}

/// Form values from spectral data: `h_hat = sum_i lambda_i ⊙ u_i`.
pub fn spectral_form_eval<T: Real>(s: &SpectralData<T>, z: &EvaluationPoint<T>) -> Result<SpectralEvaluation<T>> {
    if z.n() != s.n || z.p() != s.p() {
        return dim_err(format!(
            "point in (C^{})^{} does not match spectral data with n = {}, p = {}",
            z.n(),
            z.p(),
            s.n,
            s.p()
        ));
    }
    let p = s.p();
    let mut u_weights = vec![vec![T::zero(); p]; s.factors.len()];
    for (l, w) in z.slices().iter().enumerate() {
        let v = tensor_power(w, s.k);
        for (i, u) in s.factors.iter().enumerate() {
            let c = u.data().iter().zip(v.iter()).fold(czero(), |acc: Complex<T>, (a, b)| acc + *a * *b);
            u_weights[i][l] = c.norm_sqr();
        }
    }
    let mut h = vec![T::zero(); p];
    for i in s.kept_terms() {
        for (l, hl) in h.iter_mut().enumerate() {
            *hl += s.lambdas[i][l] * u_weights[i][l];
        }
    }
    Ok(SpectralEvaluation { u_weights, result: FormValues::from_freq(h) })
}

/// `B` with `B^alpha = A`: every eigenvalue is replaced by `lambda^(1/alpha)`.
/// Requires a commuting family with strictly positive eigenvalues.
pub fn spectral_power<T: Real>(a: &TubalTensor<T>, alpha: T) -> Result<TubalTensor<T>> {
    if alpha == T::zero() {
        return arg_err("alpha must be nonzero");
    }
    let s = joint_eigendecompose(a, T::default_tol())?;
    for (i, lam) in s.lambdas.iter().enumerate() {
        if let Some(l) = lam.iter().position(|&x| x <= T::zero()) {
            return Err(Error::NotPositiveDefinite { slice: l, index: i, value: lam[l].to_f64_lossy() });
        }
    }
    let inv = T::one() / alpha;
    let mats: Vec<CMatrix<T>> = (0..s.p())
        .map(|l| {
            let d = CVector::from_iterator(
                s.lambdas.len(),
                s.lambdas.iter().map(|lam| Complex::new(lam[l].powf(inv), T::zero())),
            );
            &s.q * CMatrix::from_diagonal(&d) * s.q.adjoint()
        })
        .collect();
    tensor_from_freq_matrices(&mats, a.n(), a.k())
}
