use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::scalar::{Point, Real};

use super::format_complex;

/// Dense univariate polynomial with complex coefficients in ascending powers.
///
/// Trailing exact zeros are always trimmed, so the last stored coefficient is
/// the leading one. The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> Polynomial<T> {
    pub fn new(mut coeffs: Vec<Complex<T>>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_reals(coeffs: &[T]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex::new(c, T::zero())).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Complex::one())
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `z`.
    pub fn identity() -> Self {
        Self::monomial(Complex::one(), 1)
    }

    /// `c z^k`
    pub fn monomial(c: Complex<T>, k: usize) -> Self {
        let mut coeffs = vec![Complex::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `a z + b`
    pub fn linear(a: Complex<T>, b: Complex<T>) -> Self {
        Self::new(vec![b, a])
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex<T>]) -> Self {
        roots.iter().fold(Self::one(), |acc, &r| {
            &acc * &Self::linear(Complex::one(), -r)
        })
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex<T>> {
        self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Complex<T> {
        self.coeffs.get(k).copied().unwrap_or_else(Complex::zero)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Complex<T> {
        self.coeffs.last().copied().unwrap_or_else(Complex::zero)
    }

    /// Exponents carrying a nonzero coefficient, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, _)| k)
            .collect()
    }

    /// Multiplicity of `0` as a root: index of the first nonzero coefficient.
    pub fn lowest_order(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    /// True when exactly one coefficient is nonzero.
    pub fn is_monomial(&self) -> bool {
        self.support().len() == 1
    }

    pub fn max_coeff_norm(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.norm()))
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::zero(), |acc, &c| acc * z + c)
    }

    /// Horner evaluation together with the running bound `Σ|a_k||z|^k`.
    pub fn eval_with_scale(&self, z: Complex<T>) -> (Complex<T>, T) {
        let r = z.norm();
        let mut acc = Complex::zero();
        let mut scale = T::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
            scale = scale * r + c.norm();
        }
        (acc, scale)
    }

    /// Value and first derivative in one pass.
    pub fn eval_with_derivative(&self, z: Complex<T>) -> (Complex<T>, Complex<T>) {
        let mut p = Complex::zero();
        let mut dp = Complex::zero();
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// Evaluation on the sphere: nonconstant polynomials send `∞` to `∞`.
    pub fn eval_point(&self, z: Point<T>) -> Point<T> {
        match z {
            Point::Infinity if self.is_constant() => Point::Finite(self.coeff(0)),
            Point::Infinity => Point::Infinity,
            Point::Finite(z) => Point::from_complex(self.eval(z)),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * T::from_usize_lossy(k))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// `z ↦ p(λ z)`
    pub fn scale_arg(&self, lambda: Complex<T>) -> Self {
        let mut pow = Complex::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for &a in &self.coeffs {
            out.push(a * pow);
            pow = pow * lambda;
        }
        Self::new(out)
    }

    /// Taylor coefficients at `a`, i.e. the coefficients of `z ↦ p(z + a)`.
    pub fn shift(&self, a: Complex<T>) -> Self {
        // repeated synthetic division
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let next = c[j + 1];
                c[j] = c[j] + a * next;
            }
        }
        Self::new(c)
    }

    /// `outer ∘ inner` by Horner's scheme in polynomial arithmetic.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, &c| &(&acc * inner) + &Self::constant(c))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `z^k p(z)`
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![Complex::zero(); k];
        c.extend_from_slice(&self.coeffs);
        Self::new(c)
    }

    /// Drops the `k` lowest coefficients: `p(z) / z^k` when they vanish.
    pub fn shift_down(&self, k: usize) -> Self {
        Self::new(self.coeffs.iter().skip(k).copied().collect())
    }

    /// `z^n p(1/z)` for `n >= deg p`.
    pub fn reversed(&self, n: usize) -> Self {
        let mut c = vec![Complex::zero(); n + 1];
        for (k, &a) in self.coeffs.iter().enumerate() {
            c[n - k] = a;
        }
        Self::new(c)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(self.leading().inv())
    }

    /// Sets coefficients below `zero_tol * max|a_j|` to exact zero and trims.
    pub fn cleaned(&self, zero_tol: T) -> Self {
        let threshold = zero_tol * self.max_coeff_norm();
        Self::new(
            self.coeffs
                .iter()
                .map(|&c| if c.norm() <= threshold { Complex::zero() } else { c })
                .collect(),
        )
    }

    /// Centroid `-a_{d-1} / (d a_d)`, the mean of the roots of `p(z) = c` for any `c`.
    pub fn centroid(&self) -> Option<Complex<T>> {
        let d = self.degree();
        if d == 0 || self.is_zero() {
            return None;
        }
        Some(-self.coeff(d - 1) / (self.leading() * T::from_usize_lossy(d)))
    }

    /// Quotient and remainder of Euclidean division.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree();
        if self.coeffs.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let lead_inv = divisor.leading().inv();
        let mut quot = vec![Complex::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = rem[k + dd] * lead_inv;
            quot[k] = q;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j] - q * b;
            }
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Largest coefficient difference relative to the largest coefficient of either side.
    pub fn relative_distance(&self, other: &Self) -> T {
        let scale = self.max_coeff_norm().max(other.max_coeff_norm());
        if scale.is_zero() {
            return T::zero();
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).fold(T::zero(), |m, k| m.max((self.coeff(k) - other.coeff(k)).norm()))
            / scale
    }

    /// Coefficientwise equality within `tol` relative to the largest coefficient.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.relative_distance(other) <= tol
    }
}

impl<T: Real> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Real> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Real> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: Self) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Complex::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl<T: Real> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $m:ident) => {
        impl<T: Real> $tr for Polynomial<T> {
            type Output = Polynomial<T>;
            fn $m(self, rhs: Self) -> Polynomial<T> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl<T: Real> Neg for Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        -&self
    }
}

/// Prints in the same grammar the parser accepts, highest power first.
impl<T: Real> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            // pull a leading minus out of purely real or purely imaginary coefficients
            let (negative, mag) = if c.im.is_zero() && c.re < T::zero()
                || c.re.is_zero() && c.im < T::zero()
            {
                (true, -c)
            } else {
                (false, c)
            };
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag == Complex::one();
            match (k, unit) {
                (0, _) => write!(f, "{}", format_complex(mag))?,
                (_, true) => {}
                (_, false) => write!(f, "{}*", format_complex(mag))?,
            }
            match k {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn real(cs: &[f64]) -> Polynomial<f64> {
        Polynomial::from_reals(cs)
    }

    #[test]
    fn eval_examples() {
        let p = real(&[-1.0 / 3.0, 0.0, 0.0, 1.0]);
        assert_eq!(p.eval(c(0.0, 0.0)), c(-1.0 / 3.0, 0.0));
        // z^3+3z^2+3z-1/3 at -1: -1 + 3 - 3 - 1/3
        let q = real(&[-1.0 / 3.0, 3.0, 3.0, 1.0]);
        assert!((q.eval(c(-1.0, 0.0)) - c(-4.0 / 3.0, 0.0)).norm() < 1e-15);
        assert_eq!(real(&[-1.0, 0.0, 1.0]).eval(c(1.0, 0.0)), c(0.0, 0.0));
        assert_eq!(q.eval_point(Point::Infinity), Point::Infinity);
        assert_eq!(
            real(&[2.0]).eval_point(Point::Infinity),
            Point::Finite(c(2.0, 0.0))
        );
    }

    #[test]
    fn compose_examples() {
        let p = real(&[-1.0, 0.0, 1.0]);
        let q = real(&[1.0, 0.0, -1.0]);
        assert_eq!(p.compose(&q), real(&[0.0, 0.0, -2.0, 0.0, 1.0]));
        assert_eq!(Polynomial::identity().compose(&q), q);
        let lam = c(0.6, 0.8);
        let sq = Polynomial::monomial(c(1.0, 0.0), 2);
        let got = sq.compose(&Polynomial::monomial(lam, 1));
        assert!(got.approx_eq(&Polynomial::monomial(lam * lam, 2), 1e-15));
    }

    #[test]
    fn shift_is_taylor_expansion() {
        let p = real(&[-1.0 / 3.0, 3.0, 3.0, 1.0]);
        // p(z - 1) = z^3 - 4/3
        let s = p.shift(c(-1.0, 0.0));
        assert!(s.approx_eq(&real(&[-4.0 / 3.0, 0.0, 0.0, 1.0]), 1e-15));
    }

    #[test]
    fn division_and_roots() {
        let p = Polynomial::from_roots(&[c(1.0, 0.0), c(-2.0, 1.0), c(0.5, 0.5)]);
        let (q, r) = p.div_rem(&Polynomial::linear(c(1.0, 0.0), c(-1.0, 0.0)));
        assert!(r.max_coeff_norm() < 1e-14);
        assert_eq!(q.degree(), 2);
        assert!(q.eval(c(-2.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn centroid_and_cleaning() {
        let q = real(&[-1.0 / 3.0, 3.0, 3.0, 1.0]);
        assert_eq!(q.centroid(), Some(c(-1.0, 0.0)));
        let noisy = real(&[1.0, 1e-15, 3.0]);
        assert_eq!(noisy.cleaned(1e-12).support(), vec![0, 2]);
    }

    #[test]
    fn display_round_trip_shape() {
        let p = Polynomial::new(vec![c(0.0, 0.0), c(0.0, -1.2), c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(p.to_string(), "z^3 - 1.2i*z");
        let q = Polynomial::new(vec![c(0.5, 1.0), c(-1.0, 0.0), c(2.0, 0.0)]);
        assert_eq!(q.to_string(), "2*z^2 - z + (0.5+1i)");
    }
}
