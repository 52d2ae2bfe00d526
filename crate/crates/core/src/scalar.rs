use nalgebra::{DMatrix, DVector, RealField};
use num_complex::Complex;
use num_traits::ToPrimitive;
use rustfft::FftNum;

/// Real floating point type backing every complex hypermatrix (f32, f64).
pub trait Real: RealField + FftNum + ToPrimitive + Copy {
    /// Relative tolerance used by predicates when the caller passes none.
    fn default_tol() -> Self;

    /// Converts an `f64` literal or threshold into this type.
    fn lit(x: f64) -> Self;

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn default_tol() -> Self {
        1e-10
    }

    fn lit(x: f64) -> Self {
        x
    }
}

impl Real for f32 {
    fn default_tol() -> Self {
        1e-4
    }

    fn lit(x: f64) -> Self {
        x as f32
    }
}

/// Complex scalar over `T`.
pub type C<T> = Complex<T>;

/// Dense complex matrix, column-major.
pub type CMatrix<T> = DMatrix<Complex<T>>;

/// Dense complex column vector.
pub type CVector<T> = DVector<Complex<T>>;

pub(crate) fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

pub(crate) fn cone<T: Real>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

#[cfg(test)]
pub(crate) fn creal<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// |z|, computed without going through `ComplexField` to avoid trait ambiguity.
pub(crate) fn cabs<T: Real>(z: Complex<T>) -> T {
    z.norm_sqr().sqrt()
}

pub(crate) fn frob_norm<T: Real>(m: &CMatrix<T>) -> T {
    m.iter()
        .fold(T::zero(), |acc, z| acc + z.norm_sqr())
        .sqrt()
}
