//! Complex polynomials, rational maps, Möbius transforms and the expression parser.

mod mobius;
mod parse;
mod polynomial;
mod rational;
mod roots;
mod tolerance;

use num_complex::Complex;

use crate::scalar::Real;

pub use mobius::{mobius_conjugate, MobiusTransform};
pub use parse::{parse_complex, parse_polynomial, parse_rational};
pub use polynomial::Polynomial;
pub use rational::{rational_equal, rational_ops, vanishing_order, RationalMap, RationalOp};
pub use roots::{expand_roots, poly_roots, Root};
pub use tolerance::ToleranceConfig;

/// Formats a complex number so that the parser reads it back as a single factor.
pub fn format_complex<T: Real>(z: Complex<T>) -> String {
    // adding zero folds -0 into 0
    let (re, im) = (z.re + T::zero(), z.im + T::zero());
    if im.is_zero() {
        format!("{re}")
    } else if re.is_zero() {
        format!("{im}i")
    } else if im < T::zero() {
        format!("({re}-{}i)", -im)
    } else {
        format!("({re}+{im}i)")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_formatting() {
        assert_eq!(format_complex(Complex::new(1.5, 0.0)), "1.5");
        assert_eq!(format_complex(Complex::new(0.0, 1.2)), "1.2i");
        assert_eq!(format_complex(Complex::new(0.5, -1.0)), "(0.5-1i)");
        assert_eq!(format_complex(Complex::new(-0.5, 2.0)), "(-0.5+2i)");
    }
}
