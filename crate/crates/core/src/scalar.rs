//! Scalar abstraction and points of the Riemann sphere.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar the whole library is generic over: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("integer representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `λ = e^{2πi k/n}`; quarter turns are returned exactly.
pub fn unit_root<T: Real>(k: i64, n: u32) -> Complex<T> {
    assert!(n > 0, "root of unity of order zero");
    let n_i = n as i64;
    let k = k.rem_euclid(n_i);
    // exact values for multiples of a quarter turn
    if (4 * k) % n_i == 0 {
        return match 4 * k / n_i {
            0 => Complex::new(T::one(), T::zero()),
            1 => Complex::new(T::zero(), T::one()),
            2 => Complex::new(-T::one(), T::zero()),
            _ => Complex::new(T::zero(), -T::one()),
        };
    }
    let theta = T::TAU() * T::lit(k as f64) / T::lit(n as f64);
    Complex::new(theta.cos(), theta.sin())
}

/// Integer power of a complex number, negative exponents allowed.
pub fn cpowi<T: Real>(z: Complex<T>, e: i64) -> Complex<T> {
    if e >= 0 {
        z.powu(e as u32)
    } else {
        z.powu((-e) as u32).inv()
    }
}

/// Point of the extended complex plane. Infinity is a marker, never a big float.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Point<T> {
    Finite(Complex<T>),
    Infinity,
}

impl<T: Real> Point<T> {
    pub fn finite(re: T, im: T) -> Self {
        Point::Finite(Complex::new(re, im))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn as_finite(&self) -> Option<Complex<T>> {
        match *self {
            Point::Finite(z) => Some(z),
            Point::Infinity => None,
        }
    }

    /// Folds non-finite float results into the infinity marker.
    pub fn from_complex(z: Complex<T>) -> Self {
        if z.re.is_finite() && z.im.is_finite() {
            Point::Finite(z)
        } else {
            Point::Infinity
        }
    }

    /// Chordal distance on the sphere of diameter 2:
    /// `ρ(z,w) = 2|z-w| / (√(1+|z|²) √(1+|w|²))`, `ρ(z,∞) = 2/√(1+|z|²)`.
    pub fn chordal_distance(&self, other: &Point<T>) -> T {
        let two = T::lit(2.0);
        match (*self, *other) {
            (Point::Infinity, Point::Infinity) => T::zero(),
            (Point::Finite(z), Point::Infinity) | (Point::Infinity, Point::Finite(z)) => {
                two / T::one().hypot(z.norm())
            }
            (Point::Finite(z), Point::Finite(w)) => {
                let sz = T::one().hypot(z.norm());
                let sw = T::one().hypot(w.norm());
                // large moduli: compare the reciprocals instead so neither factor overflows
                if sz > T::lit(1e8) && sw > T::lit(1e8) {
                    let (iz, iw) = (z.inv(), w.inv());
                    let num = two * (iz - iw).norm();
                    return num / (T::one().hypot(iz.norm()) * T::one().hypot(iw.norm()));
                }
                two * (z - w).norm() / (sz * sw)
            }
        }
    }
}

impl<T: Real> From<Complex<T>> for Point<T> {
    fn from(z: Complex<T>) -> Self {
        Point::from_complex(z)
    }
}

impl<T: Real> Display for Point<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Point::Infinity => write!(f, "∞"),
            Point::Finite(z) => write!(f, "{}", crate::algebra::format_complex(*z)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_turn_roots_are_exact() {
        assert_eq!(unit_root::<f64>(1, 2), Complex::new(-1.0, 0.0));
        assert_eq!(unit_root::<f64>(1, 4), Complex::new(0.0, 1.0));
        assert_eq!(unit_root::<f64>(7, 7), Complex::new(1.0, 0.0));
        assert_eq!(unit_root::<f64>(-1, 4), Complex::new(0.0, -1.0));
        let w = unit_root::<f64>(1, 3);
        assert!((w.powu(3) - Complex::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn chordal_metric_values() {
        let zero = Point::<f64>::finite(0.0, 0.0);
        assert!((zero.chordal_distance(&Point::Infinity) - 2.0).abs() < 1e-15);
        let one = Point::finite(1.0, 0.0);
        assert!((zero.chordal_distance(&one) - 2.0f64.sqrt()).abs() < 1e-15);
        // reciprocal branch agrees with the direct formula
        let a = Point::finite(3e9, 1e9);
        let b = Point::finite(-2e9, 5e9);
        let ia = Point::finite(0.0, 0.0);
        let direct = {
            let (z, w) = (a.as_finite().unwrap(), b.as_finite().unwrap());
            2.0 * (z - w).norm() / ((1.0 + z.norm_sqr()).sqrt() * (1.0 + w.norm_sqr()).sqrt())
        };
        assert!((a.chordal_distance(&b) - direct).abs() < 1e-22);
        assert!(a.chordal_distance(&Point::Infinity) < 1e-9);
        assert!(ia.chordal_distance(&ia) == 0.0);
    }

    #[test]
    fn rotations_about_origin_are_chordal_isometries() {
        let lam = unit_root::<f64>(2, 7);
        let z = Complex::new(0.3, -1.7);
        let w = Complex::new(-2.2, 0.4);
        let d0 = Point::Finite(z).chordal_distance(&Point::Finite(w));
        let d1 = Point::Finite(lam * z).chordal_distance(&Point::Finite(lam * w));
        assert!((d0 - d1).abs() < 1e-14);
    }
}
