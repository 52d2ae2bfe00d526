//! The two-slice degree-2 example whose forms are positive although the slice
//! matrices have a negative eigenvalue.
//!
//! Both frequency slices equal `S` with `S[1,1,1,1] = S[2,2,2,2] = 1` and
//! `S[1,2,1,2] = S[1,2,2,1] = S[2,1,1,2] = S[2,1,2,1] = c` (one-based), so the
//! slice form is `|z|^4 + |w|^4 + 4c |z|^2 |w|^2` and the slice matrix has
//! eigenvalues `{1, 1, 2c, 0}`.

use num_complex::Complex;

use crate::error::Result;
use crate::hypermatrix::{Hypermatrix, Shape, TubalTensor};
use crate::scalar::Real;

/// The order-4 slice `S` for the parameter `c`.
pub fn example_slice<T: Real>(c: T) -> Hypermatrix<T> {
    let mut s = Hypermatrix::zeros(Shape::cubical(2, 4).expect("positive dims"));
    let one = Complex::new(T::one(), T::zero());
    let cc = Complex::new(c, T::zero());
    s[&[0, 0, 0, 0][..]] = one;
    s[&[1, 1, 1, 1][..]] = one;
    for idx in [[0, 1, 0, 1], [0, 1, 1, 0], [1, 0, 0, 1], [1, 0, 1, 0]] {
        s[&idx[..]] = cc;
    }
    s
}

/// The `2x2x2x2x2` tensor whose two frequency slices are both [`example_slice`].
pub fn example_tensor<T: Real>(c: T) -> Result<TubalTensor<T>> {
    let s = example_slice(c);
    TubalTensor::from_frequency_slices(&[s.clone(), s])
}

/// Closed-form minimum of the slice form over the unit sphere.
pub fn example_sphere_minimum(c: f64) -> f64 {
    // With a = |z|^2, b = |w|^2, a + b = 1: 1 + (4c - 2) ab, ab in [0, 1/4].
    let at_balanced = 1.0 + (4.0 * c - 2.0) / 4.0;
    at_balanced.min(1.0)
}
