use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Point, Real};

use super::roots::poly_roots;
use super::{Polynomial, ToleranceConfig};

/// Quotient `num / den` of polynomials with the denominator kept monic.
///
/// Maps produced by [`RationalMap::new`] and [`RationalMap::reduce`] share no
/// root between numerator and denominator (up to `root_cluster_tol`).
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMap<T> {
    num: Polynomial<T>,
    den: Polynomial<T>,
}

/// Operation selector for [`rational_ops`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RationalOp {
    Compose,
    IterateSquare,
    Reduce,
}

impl<T: Real> RationalMap<T> {
    /// Builds a reduced map from numerator and denominator.
    pub fn new(num: Polynomial<T>, den: Polynomial<T>, tol: &ToleranceConfig<T>) -> Result<Self> {
        Self::from_parts(num, den)?.reduce(tol)
    }

    /// Normalizes the denominator to be monic and strips common powers of `z`,
    /// without searching for other shared roots.
    pub fn from_parts(num: Polynomial<T>, den: Polynomial<T>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidParameters(
                "algebra",
                "denominator is identically zero".into(),
            ));
        }
        if num.is_zero() {
            return Ok(Self::constant(Complex::zero()));
        }
        let k = num.lowest_order().min(den.lowest_order());
        let (num, den) = (num.shift_down(k), den.shift_down(k));
        let lead = den.leading().inv();
        Ok(Self {
            num: num.scale(lead),
            den: den.scale(lead),
        })
    }

    pub fn from_polynomial(p: Polynomial<T>) -> Self {
        Self {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn identity() -> Self {
        Self::from_polynomial(Polynomial::identity())
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::from_polynomial(Polynomial::constant(c))
    }

    pub fn num(&self) -> &Polynomial<T> {
        &self.num
    }

    pub fn den(&self) -> &Polynomial<T> {
        &self.den
    }

    pub fn into_parts(self) -> (Polynomial<T>, Polynomial<T>) {
        (self.num, self.den)
    }

    /// `max(deg num, deg den)`
    pub fn degree(&self) -> usize {
        if self.num.is_zero() {
            return 0;
        }
        self.num.degree().max(self.den.degree())
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// The polynomial this map equals, if its denominator is constant.
    pub fn as_polynomial(&self) -> Option<Polynomial<T>> {
        self.is_polynomial()
            .then(|| self.num.scale(self.den.coeff(0).inv()))
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    /// Evaluation on the sphere; poles and overflow become the infinity marker.
    pub fn eval_point(&self, z: Point<T>) -> Point<T> {
        let (dp, dq) = (self.num.degree(), self.den.degree());
        match z {
            Point::Infinity => {
                if self.num.is_zero() {
                    Point::Finite(Complex::zero())
                } else if dp > dq {
                    Point::Infinity
                } else if dp == dq {
                    Point::Finite(self.num.leading() / self.den.leading())
                } else {
                    Point::Finite(Complex::zero())
                }
            }
            Point::Finite(z) if z.norm_sqr() <= T::one() => {
                let q = self.den.eval(z);
                if q.is_zero() {
                    return Point::Infinity;
                }
                Point::from_complex(self.num.eval(z) / q)
            }
            Point::Finite(z) => {
                // evaluate the reversed polynomials at 1/z so large |z| cannot overflow early
                let u = z.inv();
                let pr = reversed_eval(&self.num, u);
                let qr = reversed_eval(&self.den, u);
                if qr.is_zero() {
                    return Point::Infinity;
                }
                let ratio = pr / qr;
                let k = dp as i64 - dq as i64;
                let value = if k >= 0 {
                    ratio * z.powu(k as u32)
                } else {
                    ratio * u.powu((-k) as u32)
                };
                Point::from_complex(value)
            }
        }
    }

    /// Finite evaluation; `None` at poles.
    pub fn eval(&self, z: Complex<T>) -> Option<Complex<T>> {
        self.eval_point(Point::Finite(z)).as_finite()
    }

    /// `R'(z) = (P'Q - PQ') / Q²` at a finite non-pole point.
    pub fn derivative_at(&self, z: Complex<T>) -> Option<Complex<T>> {
        let (p, dp) = self.num.eval_with_derivative(z);
        let (q, dq) = self.den.eval_with_derivative(z);
        if q.is_zero() {
            return None;
        }
        let v = (dp * q - p * dq) / (q * q);
        (v.re.is_finite() && v.im.is_finite()).then_some(v)
    }

    /// The derivative as a reduced rational map.
    pub fn derivative(&self, tol: &ToleranceConfig<T>) -> Result<Self> {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let den = &self.den * &self.den;
        if num.is_zero() {
            return Ok(Self::constant(Complex::zero()));
        }
        Self::new(num, den, tol)
    }

    /// Numerator of the derivative, `P'Q - PQ'`; its roots are the finite critical points.
    pub fn critical_polynomial(&self) -> Polynomial<T> {
        &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative())
    }

    /// Removes every root shared by numerator and denominator and makes the
    /// denominator monic. Coefficients below `zero_coeff_tol` are zeroed first.
    pub fn reduce(&self, tol: &ToleranceConfig<T>) -> Result<Self> {
        let mut num = self.num.cleaned(tol.zero_coeff_tol);
        let mut den = self.den.cleaned(tol.zero_coeff_tol);
        let base = Self::from_parts(num.clone(), den.clone())?;
        num = base.num;
        den = base.den;
        if den.degree() >= 1 && num.degree() >= 1 {
            for root in poly_roots(&den, tol)? {
                let shared = vanishing_order(&num, root.value, tol.root_cluster_tol)
                    .min(root.multiplicity);
                if shared == 0 {
                    continue;
                }
                let factor = Polynomial::linear(Complex::one(), -root.value).pow(shared as u32);
                num = num.div_rem(&factor).0;
                den = den.div_rem(&factor).0;
            }
        }
        let lead = den.leading().inv();
        Ok(Self {
            num: num.scale(lead).cleaned(tol.zero_coeff_tol),
            den: den.scale(lead).cleaned(tol.zero_coeff_tol),
        })
    }

    /// `self ∘ inner` via the homogeneous form `Σ p_i A^i B^{n-i} / Σ q_i A^i B^{n-i}`.
    ///
    /// Composition of coprime pairs stays coprime, so no root-based reduction
    /// is needed when both inputs are reduced.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let n = self.degree();
        if n == 0 {
            return Ok(self.clone());
        }
        let (a, b) = (&inner.num, &inner.den);
        let mut a_pows = vec![Polynomial::one()];
        let mut b_pows = vec![Polynomial::one()];
        for i in 1..=n {
            a_pows.push(&a_pows[i - 1] * a);
            b_pows.push(&b_pows[i - 1] * b);
        }
        let homogenize = |p: &Polynomial<T>| {
            (0..=n).fold(Polynomial::zero(), |acc, i| {
                let c = p.coeff(i);
                if c.is_zero() {
                    acc
                } else {
                    &acc + &(&a_pows[i] * &b_pows[n - i]).scale(c)
                }
            })
        };
        let num = homogenize(&self.num);
        let den = homogenize(&self.den);
        if den.is_zero() {
            return Err(Error::DegenerateResult("composition"));
        }
        let out = Self::from_parts(num, den)?;
        if out.is_constant() && !inner.is_constant() {
            return Err(Error::DegenerateResult("composition"));
        }
        Ok(out)
    }

    /// Composition followed by coefficient cleaning.
    pub fn compose_clean(&self, inner: &Self, tol: &ToleranceConfig<T>) -> Result<Self> {
        let c = self.compose(inner)?;
        Ok(Self {
            num: c.num.cleaned(tol.zero_coeff_tol),
            den: c.den.cleaned(tol.zero_coeff_tol),
        })
    }

    /// The `n`-th iterate, `n >= 1`.
    pub fn iterate(&self, n: usize, tol: &ToleranceConfig<T>) -> Result<Self> {
        let mut out = self.clone();
        for _ in 1..n {
            out = self.compose_clean(&out, tol)?;
        }
        Ok(out)
    }

    /// `z ↦ R(λ z)`
    pub fn scale_arg(&self, lambda: Complex<T>) -> Self {
        Self::from_parts(self.num.scale_arg(lambda), self.den.scale_arg(lambda))
            .expect("scaling the argument keeps the denominator nonzero")
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &Self, tol: &ToleranceConfig<T>) -> Result<Self> {
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        Self::new(num, &self.den * &other.den, tol)
    }

    pub fn sub(&self, other: &Self, tol: &ToleranceConfig<T>) -> Result<Self> {
        let num = &(&self.num * &other.den) - &(&other.num * &self.den);
        Self::new(num, &self.den * &other.den, tol)
    }

    pub fn mul(&self, other: &Self, tol: &ToleranceConfig<T>) -> Result<Self> {
        Self::new(&self.num * &other.num, &self.den * &other.den, tol)
    }

    pub fn div(&self, other: &Self, tol: &ToleranceConfig<T>) -> Result<Self> {
        if other.num.is_zero() {
            return Err(Error::InvalidParameters("algebra", "division by zero map".into()));
        }
        Self::new(&self.num * &other.den, &self.den * &other.num, tol)
    }

    /// Cross-multiplied residual `P_R Q_S - P_S Q_R`, relative to the largest
    /// coefficient of either product.
    pub fn cross_residual(&self, other: &Self) -> T {
        let left = &self.num * &other.den;
        let right = &other.num * &self.den;
        left.relative_distance(&right)
    }
}

/// `Σ a_k u^{n-k}` where `n = deg p`, the polynomial `u^n p(1/u)`.
fn reversed_eval<T: Real>(p: &Polynomial<T>, u: Complex<T>) -> Complex<T> {
    p.coeffs().iter().fold(Complex::zero(), |acc, &c| acc * u + c)
}

/// Number of leading Taylor coefficients of `p` at `z0` that vanish relative to
/// the absolute-value majorant `Σ_i C(i,j) |a_i| |z0|^{i-j}`.
pub fn vanishing_order<T: Real>(p: &Polynomial<T>, z0: Complex<T>, rel_tol: T) -> usize {
    if p.is_zero() {
        return usize::MAX;
    }
    let taylor = p.shift(z0);
    let majorant = Polynomial::new(
        p.coeffs()
            .iter()
            .map(|c| Complex::new(c.norm(), T::zero()))
            .collect(),
    )
    .shift(Complex::new(z0.norm(), T::zero()));
    let mut k = 0;
    while k < p.degree() {
        let bound = rel_tol * majorant.coeff(k).re;
        if taylor.coeff(k).norm() > bound {
            break;
        }
        k += 1;
    }
    k
}

/// Compose, self-compose, or reduce; the `Reduce` case ignores `s`.
pub fn rational_ops<T: Real>(
    r: &RationalMap<T>,
    s: &RationalMap<T>,
    kind: RationalOp,
    tol: &ToleranceConfig<T>,
) -> Result<RationalMap<T>> {
    match kind {
        RationalOp::Compose => r.compose_clean(s, tol),
        RationalOp::IterateSquare => r.compose_clean(r, tol),
        RationalOp::Reduce => r.reduce(tol),
    }
}

/// Equality of rational functions: `P_R Q_S ≡ P_S Q_R` within `coeff_rel_tol`.
pub fn rational_equal<T: Real>(r: &RationalMap<T>, s: &RationalMap<T>, tol: &ToleranceConfig<T>) -> bool {
    r.cross_residual(s) <= tol.coeff_rel_tol
}

impl<T: Real> fmt::Display for RationalMap<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == 0 {
            let p = self.num.scale(self.den.coeff(0).inv());
            return write!(f, "{p}");
        }
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Polynomial<f64>;
    type R = RationalMap<f64>;

    fn tol() -> ToleranceConfig<f64> {
        ToleranceConfig::default()
    }

    fn rat(num: &[f64], den: &[f64]) -> R {
        R::new(P::from_reals(num), P::from_reals(den), &tol()).unwrap()
    }

    #[test]
    fn reduce_removes_shared_root() {
        let r = rat(&[-1.0, 0.0, 1.0], &[-1.0, 1.0]);
        assert!(r.is_polynomial());
        assert!(r.num().approx_eq(&P::from_reals(&[1.0, 1.0]), 1e-12));
    }

    #[test]
    fn reduce_keeps_denominator_monic() {
        let r = rat(&[-1.0, 0.0, 1.0], &[0.0, 2.0]);
        assert_eq!(r.den(), &P::from_reals(&[0.0, 1.0]));
        assert_eq!(r.num(), &P::from_reals(&[-0.5, 0.0, 0.5]));
    }

    #[test]
    fn third_iterate_of_basilica_type_map() {
        // R = (z^2-1)/z^2 iterated thrice is -z^4 (z^4 - 4z^2 + 2) / (2z^2 - 1)^2
        let r = rat(&[-1.0, 0.0, 1.0], &[0.0, 0.0, 1.0]);
        let r3 = r.iterate(3, &tol()).unwrap();
        let expected_num = &P::monomial(Complex::new(-1.0, 0.0), 4) * &P::from_reals(&[2.0, 0.0, -4.0, 0.0, 1.0]);
        let expected_den = P::from_reals(&[-1.0, 0.0, 2.0]).pow(2);
        let expected = R::from_parts(expected_num, expected_den).unwrap();
        assert!(rational_equal(&r3, &expected, &tol()));
        assert_eq!(r3.degree(), 8);
        let squared = rational_ops(&r, &r, RationalOp::IterateSquare, &tol()).unwrap();
        assert_eq!(squared.degree(), 4);
    }

    #[test]
    fn compose_with_identity() {
        let r = rat(&[1.0, 0.0, 0.0, 2.0], &[0.0, 3.0, 1.0]);
        let id = R::identity();
        assert!(rational_equal(&r.compose(&id).unwrap(), &r, &tol()));
        assert!(rational_equal(&id.compose(&r).unwrap(), &r, &tol()));
    }

    #[test]
    fn equality_examples() {
        let a = rat(&[-1.0, 0.0, 1.0], &[0.0, 2.0]);
        let b = R::from_parts(P::from_reals(&[-2.0, 0.0, 2.0]), P::from_reals(&[0.0, 4.0])).unwrap();
        let c = rat(&[1.0, 0.0, 1.0], &[0.0, 2.0]);
        assert!(rational_equal(&a, &a, &tol()));
        assert!(rational_equal(&a, &b, &tol()));
        assert!(!rational_equal(&a, &c, &tol()));
    }

    #[test]
    fn sphere_evaluation() {
        let r = rat(&[-1.0, 0.0, 1.0], &[0.0, 0.0, 1.0]);
        assert_eq!(r.eval_point(Point::finite(0.0, 0.0)), Point::Infinity);
        assert_eq!(r.eval_point(Point::Infinity), Point::finite(1.0, 0.0));
        let big = r.eval_point(Point::finite(1e200, 0.0)).as_finite().unwrap();
        assert!((big - Complex::new(1.0, 0.0)).norm() < 1e-15);
        let poly = R::from_polynomial(P::from_reals(&[0.0, 0.0, 1.0]));
        assert_eq!(poly.eval_point(Point::finite(1e200, 0.0)), Point::Infinity);
    }

    #[test]
    fn derivative_matches_pointwise() {
        let r = rat(&[1.0, 2.0, 0.0, 1.0], &[3.0, 0.0, 1.0]);
        let d = r.derivative(&tol()).unwrap();
        let z = Complex::new(0.3, 0.7);
        let exact = r.derivative_at(z).unwrap();
        assert!((d.eval(z).unwrap() - exact).norm() < 1e-12);
        let h = 1e-6;
        let fd = (r.eval(z + h).unwrap() - r.eval(z - h).unwrap()) / (2.0 * h);
        assert!((fd - exact).norm() < 1e-7);
    }

    #[test]
    fn vanishing_order_counts_multiplicity() {
        let p = P::from_roots(&[Complex::new(2.0, 0.0), Complex::new(2.0, 0.0), Complex::new(-1.0, 0.0)]);
        assert_eq!(vanishing_order(&p, Complex::new(2.0, 0.0), 1e-8), 2);
        assert_eq!(vanishing_order(&p, Complex::new(1.0, 0.0), 1e-8), 0);
    }
}
