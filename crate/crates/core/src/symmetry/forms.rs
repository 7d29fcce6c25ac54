use num_complex::Complex;
use num_traits::Zero;

use crate::algebra::{poly_roots, Polynomial, RationalMap, ToleranceConfig};
use crate::error::{Error, Result};
use crate::scalar::{unit_root, Real};
use crate::verify::{detect_rotation_order, functional_equation_check, RotationOrderReport};

use super::{decompose, normalize, Order, SymmetryGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HypothesisStatus {
    Pass,
    Fail,
    Unverified,
}

impl HypothesisStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            HypothesisStatus::Pass => "pass",
            HypothesisStatus::Fail => "fail",
            HypothesisStatus::Unverified => "unverified",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypothesis {
    pub name: String,
    pub status: HypothesisStatus,
    pub detail: String,
}

impl Hypothesis {
    pub fn new(name: &str, status: HypothesisStatus, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            status,
            detail: detail.into(),
        }
    }

    fn check(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        let status = if ok { HypothesisStatus::Pass } else { HypothesisStatus::Fail };
        Self::new(name, status, detail)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form1Conclusion {
    /// `ΣR` is exactly the rotation group of order `β`.
    Equal,
    /// Some hypothesis failed, but the rotations still satisfy the functional equation.
    ContainmentOnly,
    /// Neither the hypotheses nor the functional equation hold.
    NotEstablished,
}

impl Form1Conclusion {
    pub fn as_str(self) -> &'static str {
        match self {
            Form1Conclusion::Equal => "equal",
            Form1Conclusion::ContainmentOnly => "containment_only",
            Form1Conclusion::NotEstablished => "not_established",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Form1Report<T> {
    pub map: RationalMap<T>,
    pub group: SymmetryGroup<T>,
    pub checklist: Vec<Hypothesis>,
    pub conclusion: Form1Conclusion,
    /// `m` and residual of `R(λz) = λ^m R(z)` at `λ = e^{2πi/β}`.
    pub exponent_m: Option<u32>,
    pub residual: Option<T>,
}

impl<T> Form1Report<T> {
    pub fn failed(&self) -> bool {
        self.checklist.iter().any(|h| h.status == HypothesisStatus::Fail)
    }
}

fn is_centered<T: Real>(p: &Polynomial<T>, tol: &ToleranceConfig<T>) -> bool {
    let d = p.degree();
    d == 0 || p.coeff(d - 1).norm() <= tol.coeff_rel_tol * p.max_coeff_norm()
}

/// Roots of `a` and `b` that coincide up to the clustering tolerance.
fn shared_root<T: Real>(a: &Polynomial<T>, b: &Polynomial<T>, tol: &ToleranceConfig<T>) -> Result<Option<Complex<T>>> {
    if a.degree() == 0 || b.degree() == 0 {
        return Ok(None);
    }
    let ra = poly_roots(a, tol)?;
    let rb = poly_roots(b, tol)?;
    let close = tol.root_cluster_tol * T::lit(100.0);
    Ok(ra.iter().find_map(|x| {
        rb.iter()
            .any(|y| (x.value - y.value).norm() <= close * T::one().max(x.value.norm()))
            .then_some(x.value)
    }))
}

/// Symmetry of `R = P/Q` with both parts of the form `z^α_i P_i(z^β_i)`;
/// every hypothesis is checked and reported.
fn show_centroid<T: Real>(p: &Polynomial<T>) -> String {
    p.centroid().map_or_else(|| "undefined".into(), crate::algebra::format_complex)
}

pub fn form1_symmetry<T: Real>(p: &Polynomial<T>, q: &Polynomial<T>, tol: &ToleranceConfig<T>) -> Result<Form1Report<T>> {
    let map = RationalMap::new(p.clone(), q.clone(), tol)?;
    let (a1, b1, _) = decompose(p);
    let (a2, b2, _) = decompose(q);
    let mut checklist = Vec::new();
    checklist.push(Hypothesis::check(
        "centered",
        is_centered(p, tol) && is_centered(q, tol),
        format!("centroid(P) = {}, centroid(Q) = {}", show_centroid(p), show_centroid(q)),
    ));
    checklist.push(Hypothesis::check(
        "non_monomial",
        !p.is_monomial() && !q.is_monomial(),
        format!("P has {} terms, Q has {} terms", p.support().len(), q.support().len()),
    ));
    let shared = shared_root(&p.shift_down(a1), &q.shift_down(a2), tol)?;
    checklist.push(Hypothesis::check(
        "no_common_root_except_0",
        shared.is_none(),
        match shared {
            Some(z) => format!("shared root {z}"),
            None => "P/z^α1 and Q/z^α2 have no common root".into(),
        },
    ));
    checklist.push(Hypothesis::check(
        "alpha1_gt_alpha2_plus_1",
        a1 > a2 + 1,
        format!("α1 = {a1}, α2 = {a2}"),
    ));
    let beta = b1.gcd(b2);
    checklist.push(Hypothesis::check(
        "beta_gt_1",
        beta != Order::Finite(1),
        format!("β1 = {b1}, β2 = {b2}, β = gcd = {beta}"),
    ));
    let (dp, dq) = (p.degree(), q.degree());
    let bounded = dp > dq + 1 || dp < dq;
    checklist.push(Hypothesis::new(
        "not_translation_invariant",
        if bounded { HypothesisStatus::Pass } else { HypothesisStatus::Unverified },
        if bounded {
            format!("deg P = {dp}, deg Q = {dq}: the Julia set is bounded")
        } else {
            format!("deg P = {dp}, deg Q = {dq}: not decided numerically")
        },
    ));

    let failed = checklist.iter().any(|h| h.status == HypothesisStatus::Fail);
    let order = match beta {
        Order::Finite(b) => b,
        // both parts monomials: R is a monomial, check the whole circle at a generic order
        Order::Infinite => 1,
    };
    let (exponent_m, residual) = if order > 1 {
        let lambda = unit_root::<T>(1, order);
        let best = if a1 >= a2 && !failed {
            let m = (a1 - a2) as i64;
            (m, functional_equation_check(&map, lambda, m))
        } else {
            (0..=2 * map.degree() as i64)
                .map(|m| (m, functional_equation_check(&map, lambda, m)))
                .fold((0, T::infinity()), |acc, x| if x.1 < acc.1 { x } else { acc })
        };
        (Some(best.0.rem_euclid(order as i64) as u32), Some(best.1))
    } else {
        (Some(1), Some(T::zero()))
    };
    let verified = residual.is_some_and(|r| r <= tol.coeff_rel_tol);
    let conclusion = match (failed, verified) {
        (false, true) => Form1Conclusion::Equal,
        (true, true) => Form1Conclusion::ContainmentOnly,
        _ => Form1Conclusion::NotEstablished,
    };
    let group = match conclusion {
        Form1Conclusion::NotEstablished => SymmetryGroup::trivial(Complex::zero()),
        _ => SymmetryGroup::new(Complex::zero(), Order::Finite(order)),
    };
    Ok(Form1Report {
        map,
        group,
        checklist,
        conclusion,
        exponent_m,
        residual,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form2Equality {
    Equal,
    ContainmentOnly,
}

impl Form2Equality {
    pub fn as_str(self) -> &'static str {
        match self {
            Form2Equality::Equal => "equal",
            Form2Equality::ContainmentOnly => "containment_only",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Form2Report<T> {
    pub map: RationalMap<T>,
    pub group: SymmetryGroup<T>,
    pub equality: Form2Equality,
}

/// `R = a z^ν P` for normalized `P`: `ΣR = ΣP` unless `ν ∈ {-d, -d+1}`, where
/// only `ΣP ⊆ ΣR` is known.
pub fn form2_symmetry<T: Real>(p: &Polynomial<T>, nu: i64, a: Complex<T>, tol: &ToleranceConfig<T>) -> Result<Form2Report<T>> {
    if a.is_zero() {
        return Err(Error::InvalidParameters("symmetry", "a = 0".into()));
    }
    let nf = normalize(p, tol)?;
    if !nf.normalized.approx_eq(p, tol.coeff_rel_tol) {
        return Err(Error::NotNormalized(format!("P = {p}")));
    }
    if let Order::Finite(b) = nf.beta {
        if b < 2 {
            return Err(Error::BetaTooSmall(b.to_string()));
        }
    }
    let d = p.degree() as i64;
    let scaled = p.scale(a);
    let map = if nu >= 0 {
        RationalMap::new(scaled.shift_up(nu as usize), Polynomial::one(), tol)?
    } else {
        RationalMap::new(scaled, Polynomial::monomial(Complex::new(T::one(), T::zero()), (-nu) as usize), tol)?
    };
    let equality = if nu == -d || nu == -d + 1 {
        Form2Equality::ContainmentOnly
    } else {
        Form2Equality::Equal
    };
    Ok(Form2Report {
        map,
        group: SymmetryGroup::new(Complex::zero(), nf.beta),
        equality,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct McMullenReport<T> {
    pub map: RationalMap<T>,
    pub group: SymmetryGroup<T>,
    pub detected: RotationOrderReport<T>,
}

/// `z^m + λ / z^n`
pub fn mcmullen_map<T: Real>(m: u32, n: u32, lambda: Complex<T>, tol: &ToleranceConfig<T>) -> Result<RationalMap<T>> {
    if m < 2 || n < 1 {
        return Err(Error::InvalidParameters("symmetry", format!("McMullen map needs m >= 2, n >= 1 (got m = {m}, n = {n})")));
    }
    if lambda.is_zero() || !lambda.norm().is_finite() {
        return Err(Error::InvalidParameters("symmetry", "McMullen parameter λ must be nonzero".into()));
    }
    let one = Complex::new(T::one(), T::zero());
    let num = &Polynomial::monomial(one, (m + n) as usize) + &Polynomial::constant(lambda);
    RationalMap::new(num, Polynomial::monomial(one, n as usize), tol)
}

/// Predicted order `m + n`, re-checked with [`detect_rotation_order`].
pub fn mcmullen_symmetry<T: Real>(
    m: u32,
    n: u32,
    lambda: Complex<T>,
    k_max: u32,
    tol: &ToleranceConfig<T>,
) -> Result<McMullenReport<T>> {
    let map = mcmullen_map(m, n, lambda, tol)?;
    let detected = detect_rotation_order(&map, k_max, tol);
    Ok(McMullenReport {
        map,
        group: SymmetryGroup::new(Complex::zero(), Order::Finite(m + n)),
        detected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_polynomial;

    fn tol() -> ToleranceConfig<f64> {
        ToleranceConfig::default()
    }

    fn poly(s: &str) -> Polynomial<f64> {
        parse_polynomial(s, &tol()).unwrap()
    }

    #[test]
    fn form1_rational_examples() {
        let a = form1_symmetry(&poly("z^2(z^2-2)"), &poly("z^2+1"), &tol()).unwrap();
        assert_eq!(a.conclusion, Form1Conclusion::Equal);
        assert_eq!(a.group.order, Order::Finite(2));
        assert!(a.checklist.iter().all(|h| h.status == HypothesisStatus::Pass));

        let b = form1_symmetry(&poly("z^3(z^3+1)"), &poly("z^6+1"), &tol()).unwrap();
        assert_eq!(b.conclusion, Form1Conclusion::Equal);
        assert_eq!(b.group.order, Order::Finite(3));
        assert_eq!(b.exponent_m, Some(0));
        let unverified: Vec<_> = b.checklist.iter().filter(|h| h.status == HypothesisStatus::Unverified).collect();
        assert_eq!(unverified.len(), 1);
    }

    #[test]
    fn form1_gate() {
        let r = form1_symmetry(&poly("z^3"), &poly("z+1"), &tol()).unwrap();
        assert!(r.failed());
        assert_eq!(r.conclusion, Form1Conclusion::ContainmentOnly);
        let non_monomial = r.checklist.iter().find(|h| h.name == "non_monomial").unwrap();
        assert_eq!(non_monomial.status, HypothesisStatus::Fail);
    }

    #[test]
    fn form1_shared_root() {
        let r = form1_symmetry(&poly("z^2(z^2-1)"), &poly("z^2-1"), &tol()).unwrap();
        let h = r.checklist.iter().find(|h| h.name == "no_common_root_except_0").unwrap();
        assert_eq!(h.status, HypothesisStatus::Fail);
    }

    #[test]
    fn form2_cases() {
        let mc = form2_symmetry(&poly("z^3 + 0.01"), -1, Complex::new(1.0, 0.0), &tol()).unwrap();
        assert_eq!((mc.equality, mc.group.order), (Form2Equality::Equal, Order::Finite(3)));
        let newton = form2_symmetry(&poly("z^3 + 1/2"), -2, Complex::new(2.0 / 3.0, 0.0), &tol()).unwrap();
        assert_eq!(newton.equality, Form2Equality::ContainmentOnly);
        let sq = form2_symmetry(&poly("z^2 - 1"), -2, Complex::new(1.0, 0.0), &tol()).unwrap();
        assert_eq!(sq.equality, Form2Equality::ContainmentOnly);
        assert_eq!(sq.map.degree(), 2);
        assert!(matches!(
            form2_symmetry(&poly("z^3 - z + 1"), 1, Complex::new(1.0, 0.0), &tol()),
            Err(Error::BetaTooSmall(_))
        ));
        assert!(matches!(
            form2_symmetry(&poly("z^3 + z^2"), 1, Complex::new(1.0, 0.0), &tol()),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn mcmullen() {
        for (m, n, lam, order) in [
            (2, 1, Complex::new(0.01, 0.0), 3),
            (3, 3, Complex::new(1.0, 0.0), 6),
            (2, 2, Complex::new(0.0, 1.0), 4),
        ] {
            let r = mcmullen_symmetry(m, n, lam, 24, &tol()).unwrap();
            assert_eq!(r.group.order, Order::Finite(order));
            assert_eq!(r.detected.order_found, order);
        }
        assert!(mcmullen_symmetry(1, 1, Complex::new(1.0, 0.0), 24, &tol()).is_err());
        assert!(mcmullen_symmetry(2, 1, Complex::new(0.0, 0.0), 24, &tol()).is_err());
    }
}
