//! Fixed points, cycles, multipliers, local degree, and the attractor
//! inventory used by the renderer.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::algebra::{poly_roots, vanishing_order, Polynomial, RationalMap, ToleranceConfig};
use crate::error::{Error, Result};
use crate::scalar::{Point, Real};

/// Iterates of `R` above this degree are not handed to the root finder.
pub const DEGREE_CAP: usize = 128;

const CRITICAL_ORBIT_STEPS: usize = 2000;
const MAX_DETECTED_PERIOD: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Superattracting,
    Attracting,
    Repelling,
    IndifferentRationalCandidate,
    IndifferentIrrationalCandidate,
}

impl Classification {
    pub fn is_attracting(self) -> bool {
        matches!(self, Classification::Superattracting | Classification::Attracting)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Superattracting => "superattracting",
            Classification::Attracting => "attracting",
            Classification::Repelling => "repelling",
            Classification::IndifferentRationalCandidate => "indifferent_rational_candidate",
            Classification::IndifferentIrrationalCandidate => "indifferent_irrational_candidate",
        }
    }
}

/// Classifies a multiplier with the band `tol.multiplier_band()` around 0 and
/// around the unit circle.
pub fn classify<T: Real>(multiplier: Complex<T>, tol: &ToleranceConfig<T>) -> Classification {
    let band = tol.multiplier_band();
    let r = multiplier.norm();
    if r <= band {
        Classification::Superattracting
    } else if r < T::one() - band {
        Classification::Attracting
    } else if r > T::one() + band {
        Classification::Repelling
    } else {
        // λ close to a root of unity of small order counts as a rational candidate
        let turns = multiplier.arg() / T::TAU();
        let rational = (1..=64).any(|n| {
            let x = turns * T::from_usize_lossy(n);
            (x - x.round()).abs() <= band * T::from_usize_lossy(n)
        });
        if rational {
            Classification::IndifferentRationalCandidate
        } else {
            Classification::IndifferentIrrationalCandidate
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointInfo<T> {
    pub location: Point<T>,
    pub multiplier: Complex<T>,
    pub classification: Classification,
    pub local_degree: usize,
    /// Multiplicity as a root of `R(z) = z`.
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CycleInfo<T> {
    pub points: Vec<Point<T>>,
    pub period: usize,
    pub multiplier: Complex<T>,
    pub classification: Classification,
}

impl<T: Real> CycleInfo<T> {
    pub fn contains(&self, z: &Point<T>, eps: T) -> bool {
        self.points.iter().any(|p| p.chordal_distance(z) <= eps)
    }

    pub fn is_infinity_fixed(&self) -> bool {
        self.period == 1 && self.points[0].is_infinite()
    }
}

fn local_tol<T: Real>(tol: &ToleranceConfig<T>) -> T {
    tol.root_cluster_tol * T::lit(100.0)
}

/// Numerator and denominator of `R` in the chart around `z0` (`u = 1/z` at
/// infinity), with the chart point.
fn source_chart<T: Real>(r: &RationalMap<T>, z0: Point<T>) -> (Polynomial<T>, Polynomial<T>, Complex<T>) {
    match z0 {
        Point::Finite(z) => (r.num().clone(), r.den().clone(), z),
        Point::Infinity => {
            let n = r.degree();
            (r.num().reversed(n), r.den().reversed(n), Complex::zero())
        }
    }
}

fn chart_order<T: Real>(n: &Polynomial<T>, d: &Polynomial<T>, z0: Complex<T>, rel: T) -> usize {
    let pole = vanishing_order(d, z0, rel);
    if pole >= 1 {
        return pole;
    }
    let w0 = n.eval(z0) / d.eval(z0);
    vanishing_order(&(n - &d.scale(w0)), z0, rel).max(1)
}

/// `deg(R, z0)`: order of the first nonvanishing Taylor coefficient of
/// `R - R(z0)`, in the charts `1/R` at poles and `R(1/u)` at infinity.
pub fn local_degree<T: Real>(r: &RationalMap<T>, z0: Point<T>, tol: &ToleranceConfig<T>) -> usize {
    if r.is_constant() {
        return 0;
    }
    let (n, d, t) = source_chart(r, z0);
    chart_order(&n, &d, t, local_tol(tol))
}

/// Derivative of `R` from the chart at `a` to the chart at `R(a)`.
pub fn chart_derivative<T: Real>(r: &RationalMap<T>, a: Point<T>) -> Complex<T> {
    let (mut n, mut d, t) = source_chart(r, a);
    if r.eval_point(a).is_infinite() {
        std::mem::swap(&mut n, &mut d);
    }
    let (nv, nd) = n.eval_with_derivative(t);
    let (dv, dd) = d.eval_with_derivative(t);
    (nd * dv - nv * dd) / (dv * dv)
}

/// All fixed points with multiplicity; `∞` is included when `deg num > deg den`.
pub fn fixed_points<T: Real>(r: &RationalMap<T>, tol: &ToleranceConfig<T>) -> Result<Vec<FixedPointInfo<T>>> {
    let d = r.degree();
    if d < 2 {
        return Err(Error::DegreeTooLow("dynamics::fixed_points", 2));
    }
    let f = (r.num() - &r.den().shift_up(1)).cleaned(tol.zero_coeff_tol);
    let mut out = Vec::new();
    if f.degree() >= 1 {
        for root in poly_roots(&f, tol)? {
            let location = Point::Finite(root.value);
            out.push(fixed_info(r, location, root.multiplicity, tol));
        }
    }
    if r.num().degree() > r.den().degree() {
        let multiplicity = (d + 1).saturating_sub(f.degree()).max(1);
        out.push(fixed_info(r, Point::Infinity, multiplicity, tol));
    }
    Ok(out)
}

fn fixed_info<T: Real>(r: &RationalMap<T>, location: Point<T>, multiplicity: usize, tol: &ToleranceConfig<T>) -> FixedPointInfo<T> {
    let local_degree = local_degree(r, location, tol);
    let multiplier = if local_degree >= 2 {
        Complex::zero()
    } else {
        chart_derivative(r, location)
    };
    FixedPointInfo {
        location,
        multiplier,
        classification: classify(multiplier, tol),
        local_degree,
        multiplicity,
    }
}

fn same_point<T: Real>(a: &Point<T>, b: &Point<T>) -> bool {
    a.chordal_distance(b) <= T::lit(1e-6).max(T::epsilon().sqrt() * T::lit(8.0))
}

/// Builds the cycle through `start` if `R^period(start) = start` with that
/// minimal period.
fn cycle_through<T: Real>(r: &RationalMap<T>, start: Point<T>, period: usize, tol: &ToleranceConfig<T>) -> Option<CycleInfo<T>> {
    let mut points = vec![start];
    let mut z = start;
    for k in 1..=period {
        z = r.eval_point(z);
        if k < period {
            if same_point(&z, &start) {
                return None;
            }
            points.push(z);
        }
    }
    if !same_point(&z, &start) {
        return None;
    }
    let mut multiplier = Complex::one();
    for p in &points {
        if local_degree(r, *p, tol) >= 2 {
            multiplier = Complex::zero();
            break;
        }
        multiplier = multiplier * chart_derivative(r, *p);
    }
    Some(CycleInfo {
        points,
        period,
        multiplier,
        classification: classify(multiplier, tol),
    })
}

fn is_known<T: Real>(cycles: &[CycleInfo<T>], z: &Point<T>) -> bool {
    cycles.iter().any(|c| c.points.iter().any(|p| same_point(p, z)))
}

/// Cycles of period at most `max_period` with `|multiplier| < 1 + band`, from
/// the fixed points of the iterates `R^p`.
pub fn attracting_cycles<T: Real>(r: &RationalMap<T>, max_period: usize, tol: &ToleranceConfig<T>) -> Result<Vec<CycleInfo<T>>> {
    if !(1..=6).contains(&max_period) {
        return Err(Error::InvalidParameters("dynamics", format!("max_period {max_period} outside 1..=6")));
    }
    let d = r.degree();
    if d < 2 {
        return Err(Error::DegreeTooLow("dynamics::attracting_cycles", 2));
    }
    let top = d.checked_pow(max_period as u32).unwrap_or(usize::MAX);
    if top > DEGREE_CAP {
        return Err(Error::DegreeOverflow { degree: top, cap: DEGREE_CAP });
    }
    let band = tol.multiplier_band();
    let mut cycles: Vec<CycleInfo<T>> = Vec::new();
    let mut iterate = r.clone();
    for period in 1..=max_period {
        if period > 1 {
            iterate = r.compose_clean(&iterate, tol)?;
        }
        let f = (iterate.num() - &iterate.den().shift_up(1)).cleaned(tol.zero_coeff_tol);
        let mut candidates = vec![Point::Infinity];
        if f.degree() >= 1 {
            candidates.extend(poly_roots(&f, tol)?.into_iter().map(|root| Point::Finite(root.value)));
        }
        for c in candidates {
            if is_known(&cycles, &c) {
                continue;
            }
            if let Some(cycle) = cycle_through(r, c, period, tol) {
                if cycle.multiplier.norm() < T::one() + band {
                    cycles.push(cycle);
                }
            }
        }
    }
    Ok(cycles)
}

/// Critical points with multiplicity (local degree minus one), `∞` included.
pub fn critical_points<T: Real>(r: &RationalMap<T>, tol: &ToleranceConfig<T>) -> Result<Vec<(Point<T>, usize)>> {
    let d = r.degree();
    if d < 2 {
        return Ok(Vec::new());
    }
    let w = r.critical_polynomial().cleaned(tol.zero_coeff_tol);
    let mut out = Vec::new();
    if w.degree() >= 1 {
        out.extend(poly_roots(&w, tol)?.into_iter().map(|root| (Point::Finite(root.value), root.multiplicity)));
    }
    let at_infinity = (2 * d - 2).saturating_sub(w.degree());
    if at_infinity > 0 {
        out.push((Point::Infinity, at_infinity));
    }
    Ok(out)
}

/// Follows the orbit of `start` and returns the attracting cycle it settles on.
pub fn orbit_attractor<T: Real>(r: &RationalMap<T>, start: Point<T>, tol: &ToleranceConfig<T>) -> Option<CycleInfo<T>> {
    let mut z = start;
    for _ in 0..CRITICAL_ORBIT_STEPS {
        z = r.eval_point(z);
    }
    let eps = T::lit(1e-8).max(T::epsilon().sqrt() * T::lit(8.0));
    let mut w = z;
    for period in 1..=MAX_DETECTED_PERIOD {
        w = r.eval_point(w);
        if w.chordal_distance(&z) <= eps {
            let cycle = cycle_through(r, z, period, tol)?;
            return cycle.classification.is_attracting().then_some(cycle);
        }
    }
    None
}

/// Attracting cycles reached by critical orbits, and how many critical points
/// (with multiplicity) were captured by one.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalOrbitSummary<T> {
    pub attractors: Vec<CycleInfo<T>>,
    pub captured: usize,
    pub total: usize,
}

impl<T> CriticalOrbitSummary<T> {
    pub fn all_captured(&self) -> bool {
        self.captured == self.total
    }
}

/// Every attracting cycle attracts a critical point, so following critical
/// orbits finds all of them regardless of period.
pub fn critical_orbit_attractors<T: Real>(r: &RationalMap<T>, tol: &ToleranceConfig<T>) -> Result<CriticalOrbitSummary<T>> {
    let mut summary = CriticalOrbitSummary {
        attractors: Vec::new(),
        captured: 0,
        total: 0,
    };
    for (c, mult) in critical_points(r, tol)? {
        summary.total += mult;
        if let Some(cycle) = orbit_attractor(r, c, tol) {
            summary.captured += mult;
            if !is_known(&summary.attractors, &cycle.points[0]) {
                summary.attractors.push(cycle);
            }
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_rational;

    fn tol() -> ToleranceConfig<f64> {
        ToleranceConfig::default()
    }

    fn map(s: &str) -> RationalMap<f64> {
        parse_rational(s, &tol()).unwrap()
    }

    fn c(re: f64, im: f64) -> Point<f64> {
        Point::finite(re, im)
    }

    fn find(fps: &[FixedPointInfo<f64>], z: Point<f64>) -> &FixedPointInfo<f64> {
        fps.iter().find(|f| f.location.chordal_distance(&z) < 1e-9).expect("fixed point present")
    }

    #[test]
    fn newton_of_z2_plus_1() {
        let fps = fixed_points(&map("(z^2-1)/(2z)"), &tol()).unwrap();
        assert_eq!(fps.iter().map(|f| f.multiplicity).sum::<usize>(), 3);
        for z in [c(0.0, 1.0), c(0.0, -1.0)] {
            assert_eq!(find(&fps, z).classification, Classification::Superattracting);
        }
        let inf = find(&fps, Point::Infinity);
        assert_eq!(inf.classification, Classification::Repelling);
        assert!((inf.multiplier - Complex::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn squaring_map() {
        let fps = fixed_points(&map("z^2"), &tol()).unwrap();
        assert_eq!(find(&fps, c(0.0, 0.0)).classification, Classification::Superattracting);
        assert_eq!(find(&fps, Point::Infinity).classification, Classification::Superattracting);
        let one = find(&fps, c(1.0, 0.0));
        assert_eq!(one.classification, Classification::Repelling);
        assert!((one.multiplier - Complex::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn newton_of_z3_minus_1() {
        let fps = fixed_points(&map("(2z^3+1)/(3z^2)"), &tol()).unwrap();
        let superattracting = fps.iter().filter(|f| f.classification == Classification::Superattracting).count();
        assert_eq!(superattracting, 3);
    }

    #[test]
    fn local_degrees() {
        assert_eq!(local_degree(&map("z^2"), c(0.0, 0.0), &tol()), 2);
        assert_eq!(local_degree(&map("(z^2-2)/z^2"), Point::Infinity, &tol()), 2);
        assert_eq!(local_degree(&map("3z^4/(4z^3-1)"), c(0.0, 0.0), &tol()), 4);
        assert_eq!(local_degree(&map("(z^2-2)/z^2"), c(0.0, 0.0), &tol()), 2);
        assert_eq!(local_degree(&map("z^3"), Point::Infinity, &tol()), 3);
        assert_eq!(local_degree(&map("z^2 + 1"), c(1.0, 0.0), &tol()), 1);
    }

    #[test]
    fn three_cycle_through_infinity() {
        let cycles = attracting_cycles(&map("(z^2-1)/z^2"), 3, &tol()).unwrap();
        let three: Vec<_> = cycles.iter().filter(|c| c.period == 3).collect();
        assert_eq!(three.len(), 1);
        let cyc = three[0];
        assert_eq!(cyc.classification, Classification::Superattracting);
        for z in [c(0.0, 0.0), Point::Infinity, c(1.0, 0.0)] {
            assert!(cyc.contains(&z, 1e-9));
        }
    }

    #[test]
    fn basilica_two_cycle() {
        let cycles = attracting_cycles(&map("z^2 - 1"), 2, &tol()).unwrap();
        let two = cycles.iter().find(|c| c.period == 2).unwrap();
        assert!(two.contains(&c(0.0, 0.0), 1e-9) && two.contains(&c(-1.0, 0.0), 1e-9));
        assert_eq!(two.classification, Classification::Superattracting);
        assert!(cycles.iter().any(|c| c.is_infinity_fixed()));
    }

    #[test]
    fn mcmullen_inventory_has_infinity() {
        let r = map("z^2 + 0.01/z");
        let cycles = attracting_cycles(&r, 1, &tol()).unwrap();
        assert!(cycles.iter().any(|c| c.is_infinity_fixed() && c.classification == Classification::Superattracting));
        let summary = critical_orbit_attractors(&r, &tol()).unwrap();
        assert!(summary.attractors.iter().any(|c| c.is_infinity_fixed()));
    }

    #[test]
    fn degree_cap() {
        assert!(matches!(
            attracting_cycles(&map("z^3 + 0.5"), 6, &tol()),
            Err(Error::DegreeOverflow { .. })
        ));
    }

    #[test]
    fn critical_orbits_of_newton_map() {
        let summary = critical_orbit_attractors(&map("3z^4/(4z^3-1)"), &tol()).unwrap();
        assert_eq!(summary.total, 6);
        assert!(summary.all_captured());
        assert_eq!(summary.attractors.len(), 4);
    }

    #[test]
    fn indifferent_classification() {
        let t = tol();
        assert_eq!(classify(Complex::new(1.0, 0.0), &t), Classification::IndifferentRationalCandidate);
        let irrational = Complex::from_polar(1.0, std::f64::consts::TAU * (5f64.sqrt() - 1.0) / 2.0);
        assert_eq!(classify(irrational, &t), Classification::IndifferentIrrationalCandidate);
        assert_eq!(classify(Complex::new(0.5, 0.0), &t), Classification::Attracting);
    }
}
