//! Newton, Chebyshev and König iteration maps and their symmetry relative to
//! the seed polynomial.

use num_complex::Complex;

use crate::algebra::{poly_roots, Polynomial, RationalMap, ToleranceConfig};
use crate::dynamics::critical_orbit_attractors;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::symmetry::{normalize, Order};
use crate::verify::detect_rotation_order;

/// Highest König order accepted; coefficients grow quickly with `n`.
pub const KONIG_MAX_ORDER: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Newton,
    Chebyshev,
    Konig(u32),
}

impl Method {
    pub fn name(self) -> String {
        match self {
            Method::Newton => "newton".into(),
            Method::Chebyshev => "chebyshev".into(),
            Method::Konig(n) => format!("konig({n})"),
        }
    }
}

fn require_degree<T: Real>(p: &Polynomial<T>, what: &'static str) -> Result<()> {
    if p.degree() < 2 {
        return Err(Error::DegreeTooLow(what, 2));
    }
    Ok(())
}

fn z<T: Real>() -> Polynomial<T> {
    Polynomial::identity()
}

/// `N = z - p/p' = (z p' - p) / p'`
pub fn newton_map<T: Real>(p: &Polynomial<T>, tol: &ToleranceConfig<T>) -> Result<RationalMap<T>> {
    require_degree(p, "rootfinding_methods::newton_map")?;
    let dp = p.derivative();
    RationalMap::new(&(&z() * &dp) - p, dp, tol)
}

/// `C = z - (1 + L/2) p/p'` with `L = p p'' / p'²`, i.e.
/// `(2z p'³ - 2p p'² - p² p'') / (2 p'³)`.
pub fn chebyshev_map<T: Real>(p: &Polynomial<T>, tol: &ToleranceConfig<T>) -> Result<RationalMap<T>> {
    require_degree(p, "rootfinding_methods::chebyshev_map")?;
    let d1 = p.derivative();
    let d2 = d1.derivative();
    let d1_sq = &d1 * &d1;
    let d1_cu = &d1_sq * &d1;
    let two = Complex::new(T::lit(2.0), T::zero());
    let num = &(&(&z() * &d1_cu).scale(two) - &(p * &d1_sq).scale(two)) - &(&(p * p) * &d2);
    let map = RationalMap::new(num, d1_cu.scale(two), tol)?;
    if map.degree() <= 1 {
        return Err(Error::DegenerateMethod("chebyshev_map"));
    }
    Ok(map)
}

/// `K = z + (n-1) (1/p)^{[n-2]} / (1/p)^{[n-1]}`.
///
/// Writing `(1/p)^{[k]} = N_k / p^{k+1}`, the numerators satisfy
/// `N_{k+1} = N_k' p - (k+1) N_k p'`, so
/// `K = (z N_{n-1} + (n-1) p N_{n-2}) / N_{n-1}`.
pub fn konig_map<T: Real>(p: &Polynomial<T>, n: u32, tol: &ToleranceConfig<T>) -> Result<RationalMap<T>> {
    require_degree(p, "rootfinding_methods::konig_map")?;
    if !(2..=KONIG_MAX_ORDER).contains(&n) {
        return Err(Error::InvalidParameters(
            "rootfinding_methods",
            format!("König order {n} outside 2..={KONIG_MAX_ORDER}"),
        ));
    }
    let dp = p.derivative();
    let mut numerators = vec![Polynomial::one()];
    for k in 0..(n - 1) as usize {
        let nk = &numerators[k];
        let kk = Complex::new(T::from_usize_lossy(k + 1), T::zero());
        let next = &(&nk.derivative() * p) - &(nk * &dp).scale(kk);
        numerators.push(next);
    }
    let top = &numerators[(n - 1) as usize];
    let below = &numerators[(n - 2) as usize];
    let n1 = Complex::new(T::from_usize_lossy((n - 1) as usize), T::zero());
    let num = &(&z() * top) + &(p * below).scale(n1);
    let map = RationalMap::new(num, top.clone(), tol)?;
    if map.degree() <= 1 {
        return Err(Error::DegenerateMethod("konig_map"));
    }
    Ok(map)
}

pub fn method_map<T: Real>(p: &Polynomial<T>, method: Method, tol: &ToleranceConfig<T>) -> Result<RationalMap<T>> {
    match method {
        Method::Newton => newton_map(p, tol),
        Method::Chebyshev => chebyshev_map(p, tol),
        Method::Konig(n) => konig_map(p, n, tol),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Equal,
    PSubsetMethod,
    Inconclusive,
}

impl Relation {
    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Equal => "equal",
            Relation::PSubsetMethod => "p_subset_method",
            Relation::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MethodReport<T> {
    pub method: Method,
    /// The method map of the input polynomial.
    pub map: RationalMap<T>,
    /// The method map of the normalized polynomial, on which orders are measured.
    pub normalized_map: RationalMap<T>,
    pub center: Complex<T>,
    pub sigma_p_order: Order,
    pub verified_order: u32,
    pub exponent_m: u32,
    pub residual: T,
    pub relation: Relation,
    pub critical_orbits_captured: bool,
    pub warnings: Vec<String>,
}

/// Exactly two distinct roots of equal multiplicity: the method map's Julia
/// set is their perpendicular bisector.
fn line_julia<T: Real>(p: &Polynomial<T>, tol: &ToleranceConfig<T>) -> Result<bool> {
    let roots = poly_roots(p, tol)?;
    Ok(roots.len() == 2 && roots[0].multiplicity == roots[1].multiplicity)
}

/// Compares `β(p)` with the order verified on the method map of the
/// normalized polynomial.
pub fn method_symmetry_compare<T: Real>(
    p: &Polynomial<T>,
    method: Method,
    k_max: u32,
    tol: &ToleranceConfig<T>,
) -> Result<MethodReport<T>> {
    let nf = normalize(p, tol)?;
    let map = method_map(p, method, tol)?;
    let normalized_map = method_map(&nf.normalized, method, tol)?;
    let detected = detect_rotation_order(&normalized_map, k_max, tol);
    let verified = detected.order_found;
    let mut warnings = Vec::new();
    let captured = critical_orbit_attractors(&normalized_map, tol)?.all_captured();
    if !captured {
        warnings.push("some critical orbits were not captured by an attracting cycle".to_string());
    }
    if method != Method::Newton && method != Method::Chebyshev {
        warnings.push("equality of symmetry groups is conjectural for König maps; orders are reported only".into());
    }
    let relation = if line_julia(p, tol)? {
        warnings.push("two roots of equal multiplicity: the Julia set is a line".into());
        Relation::PSubsetMethod
    } else {
        match nf.beta {
            Order::Infinite => {
                warnings.push("p is conjugate to a monomial".into());
                Relation::Inconclusive
            }
            Order::Finite(beta) if verified % beta != 0 => Relation::Inconclusive,
            Order::Finite(beta) if verified > beta => Relation::PSubsetMethod,
            Order::Finite(_) => {
                if captured {
                    Relation::Equal
                } else {
                    warnings.push("hypotheses not verified numerically; only containment is claimed".into());
                    Relation::PSubsetMethod
                }
            }
        }
    };
    Ok(MethodReport {
        method,
        map,
        normalized_map,
        center: nf.centroid,
        sigma_p_order: nf.beta,
        verified_order: verified,
        exponent_m: detected.exponent_m,
        residual: detected.residual,
        relation,
        critical_orbits_captured: captured,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_polynomial, parse_rational, rational_equal};

    fn tol() -> ToleranceConfig<f64> {
        ToleranceConfig::default()
    }

    fn poly(s: &str) -> Polynomial<f64> {
        parse_polynomial(s, &tol()).unwrap()
    }

    fn map(s: &str) -> RationalMap<f64> {
        parse_rational(s, &tol()).unwrap()
    }

    #[test]
    fn newton_closed_forms() {
        let cases = [
            ("z^2+1", "(z^2-1)/(2z)"),
            ("z^3-1", "(2z^3+1)/(3z^2)"),
            ("z(z^3-1)", "3z^4/(4z^3-1)"),
            ("z(z^5-1)", "5z^6/(6z^5-1)"),
        ];
        for (p, n) in cases {
            let got = newton_map(&poly(p), &tol()).unwrap();
            assert!(rational_equal(&got, &map(n), &tol()), "{p}: {got}");
        }
    }

    #[test]
    fn chebyshev_closed_form() {
        let c = chebyshev_map(&poly("z^2-1"), &tol()).unwrap();
        assert!(rational_equal(&c, &map("(3z^4+6z^2-1)/(8z^3)"), &tol()));
        assert!(matches!(chebyshev_map(&poly("z^3"), &tol()), Err(Error::DegenerateMethod(_))));
    }

    #[test]
    fn konig_forms() {
        let p = poly("z^2+1");
        assert!(rational_equal(&konig_map(&p, 2, &tol()).unwrap(), &map("(z^2-1)/(2z)"), &tol()));
        assert!(rational_equal(&konig_map(&p, 3, &tol()).unwrap(), &map("(z^3-3z)/(3z^2-1)"), &tol()));
        assert!(konig_map(&p, 9, &tol()).is_err());
        let q = poly("z^4 - 2z + 1i");
        assert!(rational_equal(&konig_map(&q, 2, &tol()).unwrap(), &newton_map(&q, &tol()).unwrap(), &tol()));
    }

    #[test]
    fn compare_on_z_z3_minus_1() {
        for method in [Method::Newton, Method::Chebyshev] {
            let r = method_symmetry_compare(&poly("z(z^3-1)"), method, 24, &tol()).unwrap();
            assert_eq!(r.relation, Relation::Equal, "{method:?} {:?}", r.warnings);
            assert_eq!((r.sigma_p_order, r.verified_order), (Order::Finite(3), 3));
        }
    }

    #[test]
    fn line_case() {
        let r = method_symmetry_compare(&poly("z^2-1"), Method::Newton, 24, &tol()).unwrap();
        assert_eq!(r.relation, Relation::PSubsetMethod);
    }
}
