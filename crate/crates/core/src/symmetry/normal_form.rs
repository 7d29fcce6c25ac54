use num_complex::Complex;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::algebra::{Polynomial, ToleranceConfig};
use crate::error::{Error, Result};
use crate::scalar::{cpowi, unit_root, Real};

use super::Order;

/// `g = ψ⁻¹ ∘ p ∘ ψ` with `ψ(z) = A z + ξ`, and the split `g = z^α p0(z^β)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm<T> {
    pub centroid: Complex<T>,
    pub scale: Complex<T>,
    pub normalized: Polynomial<T>,
    pub alpha: usize,
    pub beta: Order,
    pub p0: Polynomial<T>,
}

impl<T: Real> NormalForm<T> {
    /// `ψ(z) = A z + ξ`
    pub fn psi(&self, z: Complex<T>) -> Complex<T> {
        self.scale * z + self.centroid
    }

    pub fn psi_inv(&self, w: Complex<T>) -> Complex<T> {
        (w - self.centroid) / self.scale
    }

    /// Conjugates a polynomial in normalized coordinates back: `ψ ∘ q ∘ ψ⁻¹`.
    pub fn denormalize(&self, q: &Polynomial<T>) -> Polynomial<T> {
        conjugate_affine(q, self.scale, self.centroid)
    }
}

/// `ψ ∘ q ∘ ψ⁻¹` for `ψ(z) = a z + b`.
pub fn conjugate_affine<T: Real>(q: &Polynomial<T>, a: Complex<T>, b: Complex<T>) -> Polynomial<T> {
    let a_inv = a.inv();
    // q(ψ⁻¹(z)) = q(a⁻¹ z - a⁻¹ b)
    let inner = q.shift(-b * a_inv).scale_arg(a_inv);
    &inner.scale(a) + &Polynomial::constant(b)
}

/// `α` (lowest exponent), `β` (gcd of the exponent gaps) and `p0`, for a
/// polynomial whose coefficients are taken at face value.
pub fn decompose<T: Real>(g: &Polynomial<T>) -> (usize, Order, Polynomial<T>) {
    let alpha = g.lowest_order();
    let gaps: Vec<usize> = g.support().into_iter().map(|e| e - alpha).filter(|&e| e > 0).collect();
    if gaps.is_empty() {
        return (alpha, Order::Infinite, Polynomial::constant(g.coeff(alpha)));
    }
    let beta = gaps.iter().fold(0usize, |acc, &e| acc.gcd(&e));
    let p0 = Polynomial::new(
        (0..=gaps.iter().max().copied().unwrap_or(0) / beta)
            .map(|j| g.coeff(alpha + j * beta))
            .collect(),
    );
    (alpha, Order::Finite(beta as u32), p0)
}

/// Principal `(d-1)`-th root of `1/a_d`.
fn principal_scale<T: Real>(lead: Complex<T>, d: usize) -> Complex<T> {
    let inv = lead.inv();
    if d == 2 || inv == Complex::one() {
        return inv;
    }
    inv.powf(T::one() / T::from_usize_lossy(d - 1))
}

/// Brings `p` to monic centered form and splits off `z^α p0(z^β)`.
///
/// A coefficient of `g` counts as zero when it is below `zero_coeff_tol`
/// relative to the largest one, or below the rounding error the shift and
/// scaling could have produced in that slot.
pub fn normalize<T: Real>(p: &Polynomial<T>, tol: &ToleranceConfig<T>) -> Result<NormalForm<T>> {
    let d = p.degree();
    if d < 2 {
        return Err(Error::DegreeTooLow("symmetry::normalize", 2));
    }
    let xi = p.centroid().expect("degree at least two");
    let a = principal_scale(p.leading(), d);
    let a_inv = a.inv();
    let raw = &p.shift(xi).scale_arg(a) - &Polynomial::constant(xi);
    let raw = raw.scale(a_inv);

    // rounding bound per slot: |coefficients| shifted by |ξ|, scaled like g
    let majorant = Polynomial::new(p.coeffs().iter().map(|c| Complex::new(c.norm(), T::zero())).collect())
        .shift(Complex::new(xi.norm(), T::zero()));
    let noise = T::epsilon() * T::lit(64.0) * T::from_usize_lossy(d + 1);
    let floor = tol.zero_coeff_tol * raw.max_coeff_norm();
    let mut coeffs: Vec<Complex<T>> = (0..=d)
        .map(|k| {
            let c = raw.coeff(k);
            let slot = noise * majorant.coeff(k).re * a.norm().powi(k as i32) * a_inv.norm()
                + noise * xi.norm() * a_inv.norm() * if k == 0 { T::one() } else { T::zero() };
            if c.norm() <= floor.max(slot) {
                Complex::zero()
            } else {
                c
            }
        })
        .collect();
    coeffs[d] = Complex::one();
    coeffs[d - 1] = Complex::zero();
    let g = Polynomial::new(coeffs);
    let (alpha, beta, p0) = decompose(&g);
    Ok(NormalForm {
        centroid: xi,
        scale: a,
        normalized: g,
        alpha,
        beta,
        p0,
    })
}

/// Kind of rotation group found.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupKind {
    RotationGroup,
    FullCircle,
    Trivial,
}

/// Rotations `z ↦ λ(z - center) + center` with `λ^order = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetryGroup<T> {
    pub center: Complex<T>,
    pub order: Order,
    pub kind: GroupKind,
}

impl<T: Real> SymmetryGroup<T> {
    pub fn new(center: Complex<T>, order: Order) -> Self {
        let kind = match order {
            Order::Infinite => GroupKind::FullCircle,
            Order::Finite(1) => GroupKind::Trivial,
            Order::Finite(_) => GroupKind::RotationGroup,
        };
        Self { center, order, kind }
    }

    pub fn trivial(center: Complex<T>) -> Self {
        Self::new(center, Order::Finite(1))
    }

    /// The `λ` of each element, `None` for the full circle.
    pub fn lambdas(&self) -> Option<Vec<Complex<T>>> {
        match self.order {
            Order::Finite(n) => Some((0..n as i64).map(|k| unit_root(k, n)).collect()),
            Order::Infinite => None,
        }
    }
}

pub fn symmetry_group<T: Real>(p: &Polynomial<T>, tol: &ToleranceConfig<T>) -> Result<SymmetryGroup<T>> {
    let nf = normalize(p, tol)?;
    Ok(SymmetryGroup::new(nf.centroid, nf.beta))
}

/// Coefficient residual of `g(λz) - λ^d g(z)` relative to the largest coefficient.
pub fn beardon_residual<T: Real>(g: &Polynomial<T>, lambda: Complex<T>) -> T {
    let d = g.degree() as i64;
    g.scale_arg(lambda).relative_distance(&g.scale(cpowi(lambda, d)))
}

/// `g ∘ σ = σ^d ∘ g` for `σ(z) = λ z`, on a monic centered `g`.
pub fn beardon_check<T: Real>(g: &Polynomial<T>, lambda: Complex<T>, tol: &ToleranceConfig<T>) -> Result<bool> {
    let d = g.degree();
    if d < 1 {
        return Err(Error::DegreeTooLow("symmetry::beardon_check", 1));
    }
    let scale = g.max_coeff_norm();
    if (g.leading() - Complex::one()).norm() > tol.coeff_rel_tol {
        return Err(Error::NotNormalized(format!("leading coefficient {}", g.leading())));
    }
    if d >= 2 && g.coeff(d - 1).norm() > tol.coeff_rel_tol * scale {
        return Err(Error::NotNormalized(format!("coefficient of z^{} is {}", d - 1, g.coeff(d - 1))));
    }
    Ok(beardon_residual(g, lambda) <= tol.coeff_rel_tol)
}

/// `{σ ∘ p : σ ∈ Σp}`, all polynomials with the same Julia set as `p`.
pub fn same_julia_family<T: Real>(p: &Polynomial<T>, tol: &ToleranceConfig<T>) -> Result<Vec<Polynomial<T>>> {
    let nf = normalize(p, tol)?;
    let beta = match nf.beta {
        Order::Finite(b) => b,
        Order::Infinite => return Err(Error::InfiniteFamily),
    };
    let xi = Polynomial::constant(nf.centroid);
    Ok((0..beta as i64)
        .map(|k| {
            let lambda = unit_root(k, beta);
            &(&p.clone() - &xi).scale(lambda) + &xi
        })
        .collect())
}

/// Output of [`conjugate_noncommuting_pair`].
#[derive(Clone, Debug, PartialEq)]
pub struct CommutationPair<T> {
    pub q: Polynomial<T>,
    pub same_julia: bool,
    /// From expanding `p ∘ q` and `q ∘ p`.
    pub commutes: bool,
    /// From the exponent rule `λ^{(α-1)²} = 1`.
    pub predicted_commutes: bool,
    pub residual: T,
}

fn group_residual<T: Real>(lambda: Complex<T>, beta: Order) -> (u32, T) {
    match beta {
        Order::Finite(b) => (b, (lambda.powu(b) - Complex::one()).norm()),
        Order::Infinite => (0, (lambda.norm() - T::one()).abs()),
    }
}

/// `q = σ ∘ p ∘ σ⁻¹` for the rotation `σ` by `λ` about the centroid; in normal
/// coordinates `q = λ^{1-α} z^α p0(z^β)`.
pub fn conjugate_noncommuting_pair<T: Real>(
    p: &Polynomial<T>,
    lambda: Complex<T>,
    tol: &ToleranceConfig<T>,
) -> Result<CommutationPair<T>> {
    let nf = normalize(p, tol)?;
    let (order, residual) = group_residual(lambda, nf.beta);
    if residual > tol.multiplier_band() {
        return Err(Error::LambdaNotInGroup {
            order,
            residual: residual.to_f64().unwrap_or(f64::NAN),
        });
    }
    let alpha = nf.alpha as i64;
    let q_normal = nf.normalized.scale_arg(lambda.inv()).scale(lambda);
    let q = nf.denormalize(&q_normal);
    let pq = p.compose(&q);
    let qp = q.compose(p);
    let residual = pq.relative_distance(&qp);
    let e = (alpha - 1) * (alpha - 1);
    let predicted = (cpowi(lambda, e) - Complex::one()).norm() <= tol.multiplier_band();
    Ok(CommutationPair {
        q,
        same_julia: true,
        commutes: residual <= tol.coeff_rel_tol,
        predicted_commutes: predicted,
        residual,
    })
}

/// Looks for `σ ∈ Σp` with `p ∘ q = σ ∘ q ∘ p`; returns the witnessing `λ`.
pub fn julia_relation_check<T: Real>(
    p: &Polynomial<T>,
    q: &Polynomial<T>,
    tol: &ToleranceConfig<T>,
) -> Result<Option<Complex<T>>> {
    if q.degree() < 2 {
        return Err(Error::DegreeTooLow("symmetry::julia_relation_check", 2));
    }
    let nf = normalize(p, tol)?;
    let beta = match nf.beta {
        Order::Finite(b) => b,
        Order::Infinite => return Err(Error::InfiniteFamily),
    };
    let pq = p.compose(q);
    let qp = q.compose(p);
    let xi = Polynomial::constant(nf.centroid);
    let shifted = &qp - &xi;
    for k in 0..beta as i64 {
        let lambda = unit_root(k, beta);
        let rhs = &shifted.scale(lambda) + &xi;
        if pq.relative_distance(&rhs) <= tol.coeff_rel_tol {
            return Ok(Some(lambda));
        }
    }
    Ok(None)
}
