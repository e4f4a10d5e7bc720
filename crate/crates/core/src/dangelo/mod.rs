//! Holomorphic decomposition of `ρ`, the ideals it generates, and bounds on
//! the type.

pub mod decompose;
pub mod ideal;
pub mod isometry;
pub mod local_ideal;
pub mod type_bound;

pub use decompose::{holo_decompose, HoloDecomposition};
pub use ideal::{
    check_inequality_chain, default_weight_bound, ideal_d, ideal_k, monomials_of_degree, tau_star_monomial, ChainReport,
    Extended, IdealJson, MonomialIdeal,
};
pub use isometry::{build_matching_isometry, coefficient_families, FiniteIsometry};
pub use local_ideal::{local_ideal, LocalIdeal};
pub use type_bound::{type_lower_bound, TypeBound, TypeSearch};
