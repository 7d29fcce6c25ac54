use crate::scalar::Real;

/// Every equality decision in the crate goes through one of these thresholds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToleranceConfig<T> {
    /// Coefficientwise comparison, relative to the largest coefficient.
    pub coeff_rel_tol: T,
    /// Roots closer than this (relative to `max(1, |r|)`) are one root.
    pub root_cluster_tol: T,
    /// `|a_i| <= zero_coeff_tol * max_j |a_j|` means the slot is structurally zero.
    pub zero_coeff_tol: T,
}

impl<T: Real> Default for ToleranceConfig<T> {
    /// `1e-9 / 1e-8 / 1e-12` in double precision; floored by the machine
    /// epsilon so that `f32` gets usable thresholds.
    fn default() -> Self {
        let eps = T::epsilon();
        Self {
            coeff_rel_tol: T::lit(1e-9).max(eps * T::lit(1e4)),
            root_cluster_tol: T::lit(1e-8).max(eps.sqrt() * T::lit(0.5)),
            zero_coeff_tol: T::lit(1e-12).max(eps * T::lit(100.0)),
        }
    }
}

impl<T: Real> ToleranceConfig<T> {
    pub fn with_coeff_rel_tol(mut self, tol: T) -> Self {
        self.coeff_rel_tol = tol;
        self
    }

    pub fn is_valid(&self) -> bool {
        self.coeff_rel_tol > T::zero()
            && self.root_cluster_tol > T::zero()
            && self.zero_coeff_tol > T::zero()
            && self.coeff_rel_tol < T::one()
    }

    /// Band around the unit circle inside which a multiplier counts as indifferent
    /// (and radius below which it counts as zero).
    pub fn multiplier_band(&self) -> T {
        self.coeff_rel_tol * T::lit(1e3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let t = ToleranceConfig::<f64>::default();
        assert_eq!(t.coeff_rel_tol, 1e-9);
        assert_eq!(t.root_cluster_tol, 1e-8);
        assert_eq!(t.zero_coeff_tol, 1e-12);
        assert!(t.is_valid());
        let s = ToleranceConfig::<f32>::default();
        assert!(s.coeff_rel_tol > 1e-4 && s.is_valid());
        assert!(!t.with_coeff_rel_tol(1.5).is_valid());
    }
}
