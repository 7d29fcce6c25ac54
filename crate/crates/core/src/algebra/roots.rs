//! Simultaneous root finding (Aberth–Ehrlich) with cluster merging.

use num_complex::Complex;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::{Polynomial, ToleranceConfig};

const MAX_ITERATIONS: usize = 800;
const MAX_RESTARTS: usize = 6;

/// A root together with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root<T> {
    pub value: Complex<T>,
    pub multiplicity: usize,
}

/// All roots of `p`, multiplicities summing to `deg p`.
///
/// Exact zero low-order coefficients are split off as an exact root at the
/// origin; the rest goes through Aberth iteration. Approximations whose
/// inclusion disks overlap (or that lie within `root_cluster_tol`) are merged,
/// and the merged root is polished as a simple root of `p^{(m-1)}`.
pub fn poly_roots<T: Real>(p: &Polynomial<T>, tol: &ToleranceConfig<T>) -> Result<Vec<Root<T>>> {
    if p.degree() == 0 {
        return Err(Error::DegreeTooLow("algebra::poly_roots", 1));
    }
    let zeros = p.lowest_order();
    let reduced = p.shift_down(zeros).monic();
    let mut roots = Vec::new();
    if zeros > 0 {
        roots.push(Root {
            value: Complex::zero(),
            multiplicity: zeros,
        });
    }
    if reduced.degree() == 0 {
        return Ok(roots);
    }
    let approx = aberth(&reduced)?;
    roots.extend(cluster(&reduced, approx, tol));
    Ok(roots)
}

/// Roots with multiplicity expanded, convenient for Vieta-style checks.
pub fn expand_roots<T: Real>(roots: &[Root<T>]) -> Vec<Complex<T>> {
    roots
        .iter()
        .flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity))
        .collect()
}

fn aberth<T: Real>(p: &Polynomial<T>) -> Result<Vec<Complex<T>>> {
    let n = p.degree();
    if n == 1 {
        return Ok(vec![-p.coeff(0) / p.coeff(1)]);
    }
    let dp = p.derivative();
    let mut rng = StdRng::seed_from_u64(0x005e_ed0f_a6e7);
    let mut best: Option<(Vec<Complex<T>>, T)> = None;
    for attempt in 0..=MAX_RESTARTS {
        let mut z = initial_guesses(p, attempt, &mut rng);
        let mut converged = vec![false; n];
        for _ in 0..MAX_ITERATIONS {
            let mut all = true;
            for i in 0..n {
                if converged[i] {
                    continue;
                }
                let (pv, scale) = p.eval_with_scale(z[i]);
                if pv.norm() <= T::lit(8.0) * T::epsilon() * scale {
                    converged[i] = true;
                    continue;
                }
                all = false;
                let newton = pv / dp.eval(z[i]);
                let repulsion = (0..n)
                    .filter(|&j| j != i)
                    .fold(Complex::zero(), |acc, j| acc + (z[i] - z[j]).inv());
                let step = newton / (Complex::new(T::one(), T::zero()) - newton * repulsion);
                if !(step.re.is_finite() && step.im.is_finite()) {
                    // coincident approximations; nudge apart
                    z[i] = z[i] * Complex::new(T::one() + T::lit(1e-3), T::lit(1e-3));
                    continue;
                }
                z[i] = z[i] - step;
                if step.norm() <= T::epsilon() * z[i].norm() {
                    converged[i] = true;
                }
            }
            if all {
                return Ok(z);
            }
        }
        let worst = worst_residual(p, &z);
        if best.as_ref().is_none_or(|(_, w)| worst < *w) {
            best = Some((z, worst));
        }
    }
    let (z, worst) = best.expect("at least one attempt");
    // slow convergence on clustered roots still leaves a usable backward error
    if worst <= T::lit(1e-6) {
        return Ok(z);
    }
    Err(Error::NonConvergence {
        iterations: MAX_ITERATIONS * (MAX_RESTARTS + 1),
        worst_residual: worst.to_f64().unwrap_or(f64::INFINITY),
    })
}

fn worst_residual<T: Real>(p: &Polynomial<T>, z: &[Complex<T>]) -> T {
    z.iter().fold(T::zero(), |m, &zi| {
        let (v, s) = p.eval_with_scale(zi);
        let r = v.norm() / s.max(T::min_positive_value());
        if r.is_finite() {
            m.max(r)
        } else {
            T::infinity()
        }
    })
}

/// Points on a circle of radius `|a_0|^{1/n}` (geometric mean of root moduli);
/// restarts perturb radius and phase.
fn initial_guesses<T: Real>(p: &Polynomial<T>, attempt: usize, rng: &mut StdRng) -> Vec<Complex<T>> {
    let n = p.degree();
    let nf = T::from_usize_lossy(n);
    let mut radius = p.coeff(0).norm().powf(nf.recip());
    if !(radius.is_finite() && radius > T::zero()) {
        radius = T::one();
    }
    let centroid = p.centroid().unwrap_or_else(Complex::zero);
    let (jitter_r, jitter_phase) = if attempt == 0 {
        (T::one(), T::lit(0.4))
    } else {
        (
            T::lit(rng.gen_range(0.5..2.0)),
            T::lit(rng.gen_range(0.0..std::f64::consts::TAU)),
        )
    };
    (0..n)
        .map(|k| {
            let theta = T::TAU() * T::from_usize_lossy(k) / nf + jitter_phase;
            centroid + Complex::from_polar(radius * jitter_r, theta)
        })
        .collect()
}

/// Inclusion radius `n |p(z_i)| / |∏_{j≠i}(z_i - z_j)|` (monic `p`), inflated by
/// the evaluation error bound.
fn inclusion_radii<T: Real>(p: &Polynomial<T>, z: &[Complex<T>]) -> Vec<T> {
    let n = z.len();
    let nf = T::from_usize_lossy(n);
    (0..n)
        .map(|i| {
            let (v, s) = p.eval_with_scale(z[i]);
            let num = v.norm() + T::lit(4.0) * T::epsilon() * s;
            let den = (0..n)
                .filter(|&j| j != i)
                .fold(T::one(), |acc, j| acc * (z[i] - z[j]).norm());
            if den > T::zero() {
                nf * num / den
            } else {
                T::infinity()
            }
        })
        .collect()
}

fn cluster<T: Real>(p: &Polynomial<T>, z: Vec<Complex<T>>, tol: &ToleranceConfig<T>) -> Vec<Root<T>> {
    let n = z.len();
    let radii = inclusion_radii(p, &z);
    // union-find over overlapping disks
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut k = i;
        while parent[k] != r {
            let next = parent[k];
            parent[k] = r;
            k = next;
        }
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (z[i] - z[j]).norm();
            let near = d <= tol.root_cluster_tol * T::one().max(z[i].norm());
            let overlap = d <= radii[i] + radii[j];
            if near || overlap {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|(root, _)| *root == r) {
            Some((_, members)) => members.push(i),
            None => groups.push((r, vec![i])),
        }
    }
    groups
        .into_iter()
        .map(|(_, members)| {
            let m = members.len();
            let mean = members.iter().fold(Complex::zero(), |acc, &i| acc + z[i])
                / T::from_usize_lossy(m);
            let value = if m == 1 { z[members[0]] } else { polish_multiple(p, mean, m) };
            Root {
                value,
                multiplicity: m,
            }
        })
        .collect()
}

/// An m-fold root is a simple root of the (m-1)-th derivative.
fn polish_multiple<T: Real>(p: &Polynomial<T>, start: Complex<T>, m: usize) -> Complex<T> {
    let q = p.nth_derivative(m - 1);
    let mut z = start;
    for _ in 0..8 {
        let (v, dv) = q.eval_with_derivative(z);
        if dv.is_zero() {
            break;
        }
        let step = v / dv;
        if !(step.re.is_finite() && step.im.is_finite()) {
            break;
        }
        let next = z - step;
        // keep the cluster mean if polishing wanders off
        if (next - start).norm() > T::lit(1e-3) * T::one().max(start.norm()) {
            break;
        }
        z = next;
        if step.norm() <= T::epsilon() * z.norm() {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn sorted(mut roots: Vec<Root<f64>>) -> Vec<Root<f64>> {
        roots.sort_by(|a, b| {
            (a.value.re, a.value.im)
                .partial_cmp(&(b.value.re, b.value.im))
                .unwrap()
        });
        roots
    }

    #[test]
    fn quadratic_and_perfect_square() {
        let tol = ToleranceConfig::default();
        let r = sorted(poly_roots(&Polynomial::from_reals(&[-1.0, 0.0, 1.0]), &tol).unwrap());
        assert_eq!(r.len(), 2);
        assert!((r[0].value - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((r[1].value - c(1.0, 0.0)).norm() < 1e-14);
        let sq = poly_roots(&Polynomial::from_reals(&[1.0, -2.0, 1.0]), &tol).unwrap();
        assert_eq!(sq.len(), 1);
        assert_eq!(sq[0].multiplicity, 2);
        assert!((sq[0].value - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn cube_roots_of_unity() {
        let tol = ToleranceConfig::default();
        let r = poly_roots(&Polynomial::from_reals(&[-1.0, 0.0, 0.0, 1.0]), &tol).unwrap();
        assert_eq!(r.len(), 3);
        for root in &r {
            assert_eq!(root.multiplicity, 1);
            assert!((root.value.powu(3) - c(1.0, 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn high_multiplicity_cluster() {
        let tol = ToleranceConfig::default();
        // (z - 0.5 - i)^4 (z + 2)
        let p = Polynomial::from_roots(&[
            c(0.5, 1.0),
            c(0.5, 1.0),
            c(0.5, 1.0),
            c(0.5, 1.0),
            c(-2.0, 0.0),
        ]);
        let r = sorted(poly_roots(&p, &tol).unwrap());
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].multiplicity, 1);
        assert_eq!(r[1].multiplicity, 4);
        assert!((r[1].value - c(0.5, 1.0)).norm() < 1e-10);
    }

    #[test]
    fn exact_zero_roots_split_off() {
        let tol = ToleranceConfig::default();
        let p = Polynomial::from_reals(&[0.0, 0.0, 0.0, -1.0, 0.0, 1.0]);
        let r = poly_roots(&p, &tol).unwrap();
        assert_eq!(r[0], Root { value: c(0.0, 0.0), multiplicity: 3 });
        assert_eq!(r.iter().map(|x| x.multiplicity).sum::<usize>(), 5);
    }

    #[test]
    fn close_but_distinct_roots_stay_separate() {
        let tol = ToleranceConfig::default();
        let p = Polynomial::from_roots(&[c(1.0, 0.0), c(1.0 + 1e-5, 0.0), c(-1.0, 0.0)]);
        let r = poly_roots(&p, &tol).unwrap();
        assert_eq!(r.len(), 3);
    }

    #[test]
    fn constant_is_rejected() {
        let tol = ToleranceConfig::default();
        assert!(poly_roots(&Polynomial::from_reals(&[2.0]), &tol).is_err());
    }

    #[test]
    fn single_precision() {
        let tol = ToleranceConfig::<f32>::default();
        let p = Polynomial::<f32>::from_reals(&[-1.0, 0.0, 0.0, 1.0]);
        let r = poly_roots(&p, &tol).unwrap();
        assert_eq!(r.len(), 3);
        for root in r {
            assert!((root.value.powu(3) - Complex::new(1.0f32, 0.0)).norm() < 1e-5);
        }
    }
}
