//! Transforms along the tubal (last) mode.
//!
//! The forward transform is `x_hat[m] = sum_l x[l] e^{+2 pi i m l / p}` with no
//! scaling; the inverse uses the opposite sign and divides by `p`. rustfft's
//! "inverse" plan computes exactly the unnormalized `+` transform, so the two
//! directions map onto its plans with the names swapped.

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use crate::hypermatrix::Hypermatrix;
use crate::scalar::Real;

/// Sign of the exponent used by the forward tubal transform.
pub const EXPONENT_SIGN: i32 = 1;

/// Forward/inverse DFT pair of a fixed length `p`.
pub struct FourierConvention<T: Real> {
    p: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Real> FourierConvention<T> {
    pub fn new(p: usize) -> Self {
        let mut planner = FftPlanner::new();
        FourierConvention {
            p,
            forward: planner.plan_fft_inverse(p),
            inverse: planner.plan_fft_forward(p),
        }
    }

    pub fn len(&self) -> usize {
        self.p
    }

    pub fn is_empty(&self) -> bool {
        self.p == 0
    }

    /// In-place forward transform of every length-`p` chunk of `buf`.
    pub fn forward(&self, buf: &mut [Complex<T>]) {
        if self.p > 1 {
            self.forward.process(buf);
        }
    }

    /// In-place inverse transform (including the `1/p` factor) of every chunk.
    pub fn inverse(&self, buf: &mut [Complex<T>]) {
        if self.p > 1 {
            self.inverse.process(buf);
            let s = T::one() / T::from_usize(self.p).expect("p fits in T");
            for z in buf.iter_mut() {
                *z *= s;
            }
        }
    }
}

fn transform_tubes<T: Real>(a: &Hypermatrix<T>, inverse: bool) -> Hypermatrix<T> {
    let p = a.tubal_len();
    if a.order() == 0 || p == 1 {
        return a.clone();
    }
    let block = a.len() / p;
    let src = a.data();
    // Gather tubes contiguously so the FFT runs as one batched call.
    let mut buf = vec![Complex::new(T::zero(), T::zero()); a.len()];
    for l in 0..p {
        let slice = &src[l * block..(l + 1) * block];
        for (r, &z) in slice.iter().enumerate() {
            buf[r * p + l] = z;
        }
    }
    let conv = FourierConvention::new(p);
    if inverse {
        conv.inverse(&mut buf);
    } else {
        conv.forward(&mut buf);
    }
    let mut out = a.clone();
    let dst = out.data_mut();
    for l in 0..p {
        for r in 0..block {
            dst[l * block + r] = buf[r * p + l];
        }
    }
    out
}

/// Forward transform of every tube along the last mode.
pub fn fft_tubal<T: Real>(a: &Hypermatrix<T>) -> Hypermatrix<T> {
    transform_tubes(a, false)
}

/// Inverse of [`fft_tubal`].
pub fn ifft_tubal<T: Real>(a: &Hypermatrix<T>) -> Hypermatrix<T> {
    transform_tubes(a, true)
}

/// Forward transform of a single vector.
pub fn fft_vec<T: Real>(v: &[Complex<T>]) -> Vec<Complex<T>> {
    let mut buf = v.to_vec();
    FourierConvention::new(v.len()).forward(&mut buf);
    buf
}

/// Inverse transform of a single vector.
pub fn ifft_vec<T: Real>(v: &[Complex<T>]) -> Vec<Complex<T>> {
    let mut buf = v.to_vec();
    FourierConvention::new(v.len()).inverse(&mut buf);
    buf
}
