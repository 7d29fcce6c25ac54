//! Algebraic functional-equation checks and image rotation scoring.

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;

use crate::algebra::{MobiusTransform, RationalMap, ToleranceConfig};
use crate::dynamics::orbit_attractor;
use crate::error::{Error, Result};
use crate::render::BoundaryMask;
use crate::scalar::{cpowi, unit_root, Point, Real};

/// Largest order searched by default.
pub const DEFAULT_KMAX: u32 = 24;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationOrderReport<T> {
    pub order_found: u32,
    pub exponent_m: u32,
    pub residual: T,
    pub candidates_tested: usize,
}

/// Residual of `R(λz) ≡ λ^m R(z)`: the largest coefficient of
/// `num(λz) den(z) λ^{-m} - num(z) den(λz)`, relative to the largest
/// coefficient of either product.
pub fn functional_equation_check<T: Real>(r: &RationalMap<T>, lambda: Complex<T>, m: i64) -> T {
    let (num_l, den_l) = (r.num().scale_arg(lambda), r.den().scale_arg(lambda));
    let left = (&num_l * r.den()).scale(cpowi(lambda, -m));
    let right = r.num() * &den_l;
    left.relative_distance(&right)
}

/// Largest `k <= k_max` such that the primitive `k`-th root of unity satisfies
/// the functional equation for some `m` in `0..=2 deg R`, about the origin.
pub fn detect_rotation_order<T: Real>(r: &RationalMap<T>, k_max: u32, tol: &ToleranceConfig<T>) -> RotationOrderReport<T> {
    let m_max = 2 * r.degree() as i64;
    let mut tested = 0;
    for k in (2..=k_max.max(1)).rev() {
        let lambda = unit_root::<T>(1, k);
        let (num_l, den_l) = (r.num().scale_arg(lambda), r.den().scale_arg(lambda));
        let left = &num_l * r.den();
        let right = r.num() * &den_l;
        for m in 0..=m_max {
            tested += 1;
            let residual = left.scale(cpowi(lambda, -m)).relative_distance(&right);
            if residual <= tol.coeff_rel_tol {
                return RotationOrderReport {
                    order_found: k,
                    exponent_m: m as u32,
                    residual,
                    candidates_tested: tested,
                };
            }
        }
    }
    RotationOrderReport {
        order_found: 1,
        exponent_m: 1,
        residual: T::zero(),
        candidates_tested: tested + 1,
    }
}

/// [`detect_rotation_order`] about an arbitrary center, by conjugating the
/// center to the origin first.
pub fn detect_rotation_order_about<T: Real>(
    r: &RationalMap<T>,
    center: Complex<T>,
    k_max: u32,
    tol: &ToleranceConfig<T>,
) -> Result<RotationOrderReport<T>> {
    if center.is_zero() {
        return Ok(detect_rotation_order(r, k_max, tol));
    }
    let shifted = crate::algebra::mobius_conjugate(r, &MobiusTransform::translation(-center), tol)?;
    Ok(detect_rotation_order(&shifted, k_max, tol))
}

/// Fraction of marked pixels whose rotation by `2π/order` about `center`
/// lands farther than `dilate` pixels (Chebyshev distance from the nearest
/// pixel) from every marked pixel. Rotated points leaving the grid are not
/// counted either way.
pub fn image_symmetry_score<T: Real>(mask: &BoundaryMask<T>, center: Complex<T>, order: u32, dilate: usize) -> Result<f64> {
    if order == 0 {
        return Err(Error::InvalidParameters("verify", "rotation order 0".into()));
    }
    let marked = mask.marked_pixels();
    if marked.is_empty() {
        return Err(Error::EmptyMask);
    }
    let grid = mask.grid;
    let n = grid.pixels as i64;
    let lambda = unit_root::<T>(1, order);
    let d = dilate as i64;
    let (considered, missed) = marked
        .par_iter()
        .map(|&(row, col)| {
            let w = center + lambda * (grid.pixel_center(row, col) - center);
            let Some((r0, c0)) = grid.nearest_pixel(w) else {
                return (0usize, 0usize);
            };
            let (r0, c0) = (r0 as i64, c0 as i64);
            let hit = (r0 - d..=r0 + d).any(|r| {
                (c0 - d..=c0 + d).any(|c| r >= 0 && c >= 0 && r < n && c < n && mask.is_marked(r as usize, c as usize))
            });
            (1, usize::from(!hit))
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    if considered == 0 {
        return Ok(0.0);
    }
    Ok(missed as f64 / considered as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TranslationHeuristic {
    BoundedJulia,
    InfinityInFatou,
    Unknown,
}

impl TranslationHeuristic {
    pub fn as_str(self) -> &'static str {
        match self {
            TranslationHeuristic::BoundedJulia => "bounded_julia",
            TranslationHeuristic::InfinityInFatou => "infinity_in_fatou",
            TranslationHeuristic::Unknown => "unknown",
        }
    }
}

/// Sufficient conditions under which the Julia set cannot be invariant under
/// a translation: bounded Julia set, or `∞` inside an attracting basin.
pub fn translation_invariance_heuristic<T: Real>(r: &RationalMap<T>, tol: &ToleranceConfig<T>) -> TranslationHeuristic {
    if r.is_polynomial() || r.num().degree() > r.den().degree() + 1 {
        return TranslationHeuristic::BoundedJulia;
    }
    match orbit_attractor(r, Point::Infinity, tol) {
        Some(_) => TranslationHeuristic::InfinityInFatou,
        None => TranslationHeuristic::Unknown,
    }
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

    #[test]
    fn functional_equations() {
        assert!(functional_equation_check(&map("z^2 + 0.01/z^3"), unit_root(1, 5), 2) < 1e-12);
        assert!(functional_equation_check(&map("3z^4/(4z^3-1)"), unit_root(1, 3), 1) < 1e-12);
        assert_eq!(functional_equation_check(&map("(z^3+2z)/(z-5)"), Complex::new(1.0, 0.0), 1), 0.0);
        assert!(functional_equation_check(&map("3z^4/(4z^3-1)"), unit_root(1, 4), 1) > 0.1);
    }

    #[test]
    fn detected_orders() {
        assert_eq!(detect_rotation_order(&map("z^2 + 0.01/z"), 24, &tol()).order_found, 3);
        assert_eq!(detect_rotation_order(&map("z^3 - 1/3"), 24, &tol()).order_found, 3);
        assert_eq!(detect_rotation_order(&map("z^3 - z - 0.5i"), 24, &tol()).order_found, 1);
        let shifted = detect_rotation_order_about(&map("z^3+3z^2+3z-1/3"), Complex::new(-1.0, 0.0), 24, &tol()).unwrap();
        assert_eq!(shifted.order_found, 3);
    }

    #[test]
    fn heuristic() {
        assert_eq!(translation_invariance_heuristic(&map("z^2 - 1"), &tol()), TranslationHeuristic::BoundedJulia);
        assert_eq!(
            translation_invariance_heuristic(&map("z^2(z^2-2)/(z^2+1)"), &tol()),
            TranslationHeuristic::BoundedJulia
        );
        assert_eq!(translation_invariance_heuristic(&map("(z^2-1)/(2z)"), &tol()), TranslationHeuristic::Unknown);
        assert_eq!(
            translation_invariance_heuristic(&map("3z^3/(3-z^3)"), &tol()),
            TranslationHeuristic::InfinityInFatou
        );
    }
}
