//! Floating-point scalar abstraction.
//!
//! Exact data (phase-space coordinates, the symplectic form) lives in
//! [`Rational`]; everything that involves phases, eigenvalues, FFTs or
//! sampling is generic over [`Real`], implemented for `f32` and `f64`.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::FftNum;

/// Exact rational coordinate type.
pub type Rational = BigRational;

/// Floating point: f32 or f64.
pub trait Real:
    Float + FloatConst + FromPrimitive + FftNum + Debug + Display + Default + Send + Sync + 'static
{
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts to every Real")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `e^{i angle}`.
pub fn unit_phase<T: Real>(angle: f64) -> Complex<T> {
    Complex::from_polar(T::one(), T::of(angle))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn rational_to_real<T: Real>(r: &Rational) -> T {
    T::of(rational_to_f64(r))
}

pub fn rational_from_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rational_from_frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact rational value of a finite float (every finite binary float is rational).
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}
