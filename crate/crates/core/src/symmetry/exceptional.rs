use num_complex::Complex;
use num_traits::{One, Zero};

use crate::algebra::{mobius_conjugate, MobiusTransform, Polynomial, RationalMap, ToleranceConfig};
use crate::dynamics::{critical_points, local_degree};
use crate::error::{Error, Result};
use crate::scalar::{unit_root, Point, Real};
use crate::verify::functional_equation_check;

use super::{normalize, Order};

fn same_point<T: Real>(a: &Point<T>, b: &Point<T>, tol: &ToleranceConfig<T>) -> bool {
    a.chordal_distance(b) <= tol.root_cluster_tol * T::lit(10.0)
}

/// Points with finite backward orbit: totally ramified points (local degree
/// `deg R`) forming a completely invariant set.
///
/// Candidates come from the critical points (`∞` included). Any candidate
/// whose image is not a candidate is dropped until the set is closed under
/// `R`; a closed set of totally ramified points is then also closed under
/// `R⁻¹`.
pub fn exceptional_points<T: Real>(r: &RationalMap<T>, tol: &ToleranceConfig<T>) -> Result<Vec<Point<T>>> {
    let d = r.degree();
    if d < 2 {
        return Err(Error::DegreeTooLow("symmetry::exceptional_points", 2));
    }
    let mut set: Vec<Point<T>> = critical_points(r, tol)?
        .into_iter()
        .filter(|(_, mult)| *mult == d - 1)
        .map(|(z, _)| z)
        .filter(|z| local_degree(r, *z, tol) == d)
        .collect();
    loop {
        let before = set.len();
        let snapshot = set.clone();
        set.retain(|z| {
            let w = r.eval_point(*z);
            snapshot.iter().any(|s| same_point(s, &w, tol))
        });
        if set.len() == before {
            break;
        }
    }
    Ok(set)
}

/// Symmetries of a map with exactly one exceptional point.
#[derive(Clone, Debug, PartialEq)]
pub struct MobiusSymmetrySet<T> {
    /// Exceptional point in the input coordinates.
    pub exceptional_point: Point<T>,
    /// `h` with `h(w) = 0`; the generators act in the coordinates of `h ∘ R ∘ h⁻¹`.
    pub conjugacy: MobiusTransform<T>,
    /// `1 / R(1/z)` for the conjugated map.
    pub polynomial: Polynomial<T>,
    pub zeta: Complex<T>,
    pub beta: u32,
    /// `z ↦ z / (ζ(1-λ)z + λ)` for `λ^β = 1`, identity first.
    pub generators: Vec<MobiusTransform<T>>,
    /// When `ζ = 0`: largest functional-equation residual over the generators.
    pub rotation_residual: Option<T>,
}

impl<T: Real> MobiusSymmetrySet<T> {
    /// Generators expressed in the input coordinates, `h⁻¹ ∘ g ∘ h`.
    pub fn generators_in_input_coordinates(&self) -> Vec<MobiusTransform<T>> {
        let h = self.conjugacy;
        let h_inv = h.inverse();
        self.generators.iter().map(|g| h_inv.compose(&g.compose(&h))).collect()
    }
}

pub fn exceptional_symmetries<T: Real>(r: &RationalMap<T>, tol: &ToleranceConfig<T>) -> Result<MobiusSymmetrySet<T>> {
    let points = exceptional_points(r, tol)?;
    let w = match points.as_slice() {
        [] => return Err(Error::NoExceptionalPoint),
        [w] => *w,
        [a, b, ..] => return Err(Error::TwoExceptionalPoints(a.to_string(), b.to_string())),
    };
    let conjugacy = match w {
        Point::Infinity => MobiusTransform::reciprocal(),
        Point::Finite(z) => MobiusTransform::translation(-z),
    };
    let conjugated = if conjugacy == MobiusTransform::translation(Complex::zero()) {
        r.clone()
    } else {
        mobius_conjugate(r, &conjugacy, tol)?
    };
    let d = conjugated.degree();
    // R(z) = c z^d / den(z), den(0) ≠ 0; 1/R(1/z) is den reversed, over c
    let num = conjugated.num();
    if num.degree() != d || num.lowest_order() != d {
        return Err(Error::HypothesisViolated(format!(
            "conjugated map {conjugated} is not of the form z^d / Q(z)"
        )));
    }
    let polynomial = conjugated.den().reversed(d).scale(num.leading().inv());
    let zeta = polynomial
        .centroid()
        .ok_or_else(|| Error::HypothesisViolated("1/R(1/z) is constant".into()))?;
    let beta = match normalize(&polynomial, tol)?.beta {
        Order::Finite(b) => b,
        Order::Infinite => return Err(Error::InfiniteFamily),
    };
    let generators: Vec<MobiusTransform<T>> = (0..beta as i64)
        .map(|k| {
            let lambda = unit_root::<T>(k, beta);
            MobiusTransform {
                a: Complex::one(),
                b: Complex::zero(),
                c: zeta * (Complex::<T>::one() - lambda),
                d: lambda,
            }
        })
        .collect();
    let rotation_residual = (zeta.norm() <= tol.coeff_rel_tol * polynomial.max_coeff_norm()).then(|| {
        generators
            .iter()
            .map(|g| {
                let lambda = g.d;
                (0..=2 * d as i64)
                    .map(|m| functional_equation_check(&conjugated, lambda, m))
                    .fold(T::infinity(), T::min)
            })
            .fold(T::zero(), T::max)
    });
    Ok(MobiusSymmetrySet {
        exceptional_point: w,
        conjugacy,
        polynomial,
        zeta,
        beta,
        generators,
        rotation_residual,
    })
}
