//! Tubal tensor algebra over complex hypermatrices: t-products, t-Einstein
//! products, degree-k t-Hermitian forms and spectral positivity tests.
//!
//! All routines are generic over the real scalar type ([`Real`], implemented
//! for `f32` and `f64`); the `*64` aliases below are what most callers want.

pub mod counterexample;
pub mod einstein;
pub mod error;
pub mod forms;
pub mod fourier;
pub mod hypermatrix;
pub(crate) mod linalg;
pub mod matricization;
pub mod random;
pub mod scalar;
pub mod spectral;
pub mod tforms;
pub mod tprod;

pub use error::{Error, Result};
pub use fourier::{fft_tubal, ifft_tubal, FourierConvention};
pub use hypermatrix::{Hypermatrix, Shape, TubalTensor};
pub use scalar::{CMatrix, CVector, Real, C};

pub type Complex64 = num_complex::Complex<f64>;
pub type Hypermatrix64 = Hypermatrix<f64>;
pub type Hypermatrix32 = Hypermatrix<f32>;
pub type TubalTensor64 = TubalTensor<f64>;
pub type TubalTensor32 = TubalTensor<f32>;
pub type SpectralData64 = spectral::SpectralData<f64>;
pub type EvaluationPoint64 = tforms::EvaluationPoint<f64>;
pub type FormValues64 = tforms::FormValues<f64>;
pub type CMatrix64 = CMatrix<f64>;
