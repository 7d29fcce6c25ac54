//! Symmetry groups of polynomials, maps with an exceptional point, and the
//! structured rational families.

mod exceptional;
mod forms;
mod normal_form;

use std::fmt;

pub use exceptional::{exceptional_points, exceptional_symmetries, MobiusSymmetrySet};
pub use forms::{
    form1_symmetry, form2_symmetry, mcmullen_map, mcmullen_symmetry, Form1Conclusion, Form1Report, Form2Equality,
    Form2Report, Hypothesis, HypothesisStatus, McMullenReport,
};
pub use normal_form::{
    beardon_check, beardon_residual, conjugate_affine, conjugate_noncommuting_pair, decompose, julia_relation_check,
    normalize, same_julia_family, symmetry_group, CommutationPair, GroupKind, NormalForm, SymmetryGroup,
};

/// Group order or `β`: a positive integer, or infinite for monomial conjugates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Order::Infinite
    }

    /// gcd with the convention that infinity is the neutral element.
    pub fn gcd(self, other: Order) -> Order {
        use num_integer::Integer;
        match (self, other) {
            (Order::Infinite, o) | (o, Order::Infinite) => o,
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a.gcd(&b)),
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => f.write_str("infinite"),
        }
    }
}
