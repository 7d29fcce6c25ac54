use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Point, Real};

use super::{Polynomial, RationalMap, ToleranceConfig};

/// `z ↦ (a z + b) / (c z + d)` with `ad - bc ≠ 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MobiusTransform<T> {
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub c: Complex<T>,
    pub d: Complex<T>,
}

impl<T: Real> MobiusTransform<T> {
    pub fn new(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Result<Self> {
        let m = Self { a, b, c, d };
        let det = m.determinant().norm();
        let scale = [a, b, c, d].iter().fold(T::zero(), |s, x| s.max(x.norm()));
        if !(det > T::epsilon() * T::lit(16.0) * scale * scale) {
            return Err(Error::NotInvertible(det.to_f64().unwrap_or(0.0)));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        Self {
            a: Complex::one(),
            b: Complex::zero(),
            c: Complex::zero(),
            d: Complex::one(),
        }
    }

    /// `z ↦ a z + b`
    pub fn affine(a: Complex<T>, b: Complex<T>) -> Result<Self> {
        Self::new(a, b, Complex::zero(), Complex::one())
    }

    pub fn translation(w: Complex<T>) -> Self {
        Self::affine(Complex::one(), w).expect("translations are invertible")
    }

    /// `z ↦ 1/z`
    pub fn reciprocal() -> Self {
        Self {
            a: Complex::zero(),
            b: Complex::one(),
            c: Complex::one(),
            d: Complex::zero(),
        }
    }

    /// Rotation `z ↦ λ(z - center) + center`.
    pub fn rotation_about(lambda: Complex<T>, center: Complex<T>) -> Self {
        Self {
            a: lambda,
            b: center * (Complex::<T>::one() - lambda),
            c: Complex::zero(),
            d: Complex::one(),
        }
    }

    pub fn determinant(&self) -> Complex<T> {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, z: Point<T>) -> Point<T> {
        match z {
            Point::Infinity => {
                if self.c.is_zero() {
                    Point::Infinity
                } else {
                    Point::Finite(self.a / self.c)
                }
            }
            Point::Finite(z) => {
                let den = self.c * z + self.d;
                if den.is_zero() {
                    Point::Infinity
                } else {
                    Point::from_complex((self.a * z + self.b) / den)
                }
            }
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    /// `n`-fold self-composition.
    pub fn power(&self, n: u32) -> Self {
        (0..n).fold(Self::identity(), |acc, _| self.compose(&acc))
    }

    /// Distance to the identity in projective matrix terms: the largest entry of
    /// `M/s - I` where `s` is the scalar best matching `M` to the identity.
    pub fn identity_residual(&self) -> T {
        let s = (self.a + self.d) / T::lit(2.0);
        if s.is_zero() {
            return T::infinity();
        }
        let scale = [self.a, self.b, self.c, self.d]
            .iter()
            .fold(T::zero(), |m, x| m.max(x.norm()));
        [self.a - s, self.b, self.c, self.d - s]
            .iter()
            .fold(T::zero(), |m, x| m.max(x.norm()))
            / scale
    }

    pub fn is_identity(&self, tol: T) -> bool {
        self.identity_residual() <= tol
    }

    pub fn to_rational(&self) -> RationalMap<T> {
        RationalMap::from_parts(
            Polynomial::linear(self.a, self.b),
            Polynomial::linear(self.c, self.d),
        )
        .expect("invertible Möbius map has a nonzero denominator")
    }
}

/// `φ ∘ R ∘ φ^{-1}`
pub fn mobius_conjugate<T: Real>(
    r: &RationalMap<T>,
    phi: &MobiusTransform<T>,
    tol: &ToleranceConfig<T>,
) -> Result<RationalMap<T>> {
    MobiusTransform::new(phi.a, phi.b, phi.c, phi.d)?;
    let inner = r.compose_clean(&phi.inverse().to_rational(), tol)?;
    let out = phi.to_rational().compose_clean(&inner, tol)?;
    if out.degree() != r.degree() {
        return Err(Error::DegenerateResult("Möbius conjugation"));
    }
    Ok(out)
}
