//! Scalar abstraction shared by every numerical routine in the crate.

use nalgebra::RealField;
use num_complex::Complex;
use num_traits::{FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar usable by the simulation (`f32` or `f64`).
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive + FloatConst + Send + Sync + 'static {
    /// Smallest absolute tolerance this precision can honour.
    const TOLERANCE_FLOOR: f64;

    /// Converts an `f64` literal.
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 literal representable")
    }

    /// Converts an integer count.
    fn from_count(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("count representable")
    }

    /// A requested tolerance, raised to what the precision supports.
    fn tol(requested: f64) -> Self {
        Self::lit(requested.max(Self::TOLERANCE_FLOOR))
    }

    fn as_f64(self) -> f64 {
        <Self as ToPrimitive>::to_f64(&self).expect("finite scalar")
    }
}

impl Real for f64 {
    const TOLERANCE_FLOOR: f64 = 0.0;
}

impl Real for f32 {
    const TOLERANCE_FLOOR: f64 = 1e-4;
}

/// `e^{iφ}`.
pub fn cis<T: Real>(phase: T) -> Complex<T> {
    Complex::new(phase.cos(), phase.sin())
}

/// `|z|²`.
pub fn abs2<T: Real>(z: Complex<T>) -> T {
    z.re * z.re + z.im * z.im
}

/// `|z|`.
pub fn modulus<T: Real>(z: Complex<T>) -> T {
    abs2(z).sqrt()
}

pub fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

pub fn cone<T: Real>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

/// Squared Euclidean norm of an amplitude vector.
pub fn norm_sqr<T: Real>(amplitudes: &[Complex<T>]) -> T {
    amplitudes.iter().fold(T::zero(), |acc, &z| acc + abs2(z))
}

/// `⟨a|b⟩` with conjugation on the left argument.
pub fn inner<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter().zip(b).fold(czero(), |acc, (x, y)| acc + x.conj() * y)
}
