use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::Num;

/// Field-like scalar the hypergeometric code is generic over.
///
/// Implemented for `f32`, `f64`, [`BigRational`] and the fixed-width
/// `Ratio<i64>` / `Ratio<i128>`. The fixed-width rationals overflow quickly
/// and are only meant for tiny parameters.
pub trait Scalar: Clone + Debug + Num + Neg<Output = Self> {
    fn from_int(v: i64) -> Self;

    fn from_bigint(v: &BigInt) -> Self;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::from_int(numer) / Self::from_int(denom)
    }

    /// Lossy conversion used when exact results are fed to float checks.
    fn to_f64(&self) -> f64;
}

macro_rules! impl_float_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            fn from_int(v: i64) -> Self {
                v as $t
            }

            fn from_bigint(v: &BigInt) -> Self {
                num_traits::ToPrimitive::to_f64(v).unwrap_or(f64::NAN) as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }
        }
    )*};
}

impl_float_scalar!(f32, f64);

macro_rules! impl_ratio_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for Ratio<$t> {
            fn from_int(v: i64) -> Self {
                Ratio::from_integer(v as $t)
            }

            fn from_bigint(v: &BigInt) -> Self {
                let v = <$t>::try_from(v.clone()).expect("integer overflows fixed-width rational");
                Ratio::from_integer(v)
            }

            fn from_ratio(numer: i64, denom: i64) -> Self {
                Ratio::new(numer as $t, denom as $t)
            }

            fn to_f64(&self) -> f64 {
                *self.numer() as f64 / *self.denom() as f64
            }
        }
    )*};
}

impl_ratio_scalar!(i64, i128);

impl Scalar for BigRational {
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_conversions_agree() {
        let q = BigRational::from_ratio(-3, 4);
        assert_eq!(q.to_f64(), -0.75);
        assert_eq!(Ratio::<i64>::from_ratio(6, 8).to_f64(), 0.75);
        assert_eq!(f64::from_ratio(1, 4), 0.25);
        assert_eq!(f32::from_int(7), 7.0f32);
    }
}
