//! One-bit complex quantization.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scene::AdcCube;

/// Sign with `sign(0) = +1`.
#[inline]
pub fn sign(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Quantize one complex sample to `sign(Re) + j·sign(Im)`.
#[inline]
pub fn one_bit_sample(z: Complex64) -> Complex64 {
    Complex64::new(sign(z.re), sign(z.im))
}

/// Keep only the signs of the real and imaginary parts of every sample.
pub fn one_bit(cube: &AdcCube) -> Result<AdcCube> {
    if cube.is_quantized() {
        return Err(Error::DoubleQuantization);
    }
    AdcCube::from_one_bit(cube.data().mapv(one_bit_sample))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;
    use proptest::prelude::*;

    #[test]
    fn zero_maps_to_plus_one() {
        assert_eq!(one_bit_sample(Complex64::new(0.3, 0.0)), Complex64::new(1.0, 1.0));
        assert_eq!(one_bit_sample(Complex64::new(-0.5, 2.0)), Complex64::new(-1.0, 1.0));
        assert_eq!(one_bit_sample(Complex64::new(0.0, -0.0)), Complex64::new(1.0, 1.0));
    }

    #[test]
    fn double_quantization_rejected() {
        let cube = AdcCube::new(Array2::from_elem((4, 3), Complex64::new(0.2, -0.1)));
        let q = one_bit(&cube).unwrap();
        assert!(q.is_quantized());
        assert!(matches!(one_bit(&q), Err(Error::DoubleQuantization)));
    }

    #[test]
    fn value_map_is_idempotent() {
        let cube = AdcCube::new(Array2::from_shape_fn((8, 5), |(i, j)| {
            Complex64::new(i as f64 - 3.5, 2.0 - j as f64)
        }));
        let q = one_bit(&cube).unwrap();
        assert_eq!(q.data().mapv(one_bit_sample), *q.data());
    }

    proptest! {
        #[test]
        fn magnitude_and_quadrant(re in -1e3f64..1e3, im in -1e3f64..1e3) {
            let q = one_bit_sample(Complex64::new(re, im));
            prop_assert_eq!(q.norm_sqr(), 2.0);
            prop_assert!(q.re * re >= 0.0 && q.im * im >= 0.0);
        }
    }
}
