//! Numerical study of Toeplitz operators on weighted Bergman spaces over
//! bounded symmetric domains: quadrature and Monte Carlo integration against
//! the weighted measure, orthonormal polynomial bases, Toeplitz matrix
//! assembly, the discrete series action with subgroup averaging, and
//! torus-weight multiplicity analysis.

pub mod basis;
pub mod domains;
pub mod error;
pub mod group;
pub mod linalg;
pub mod multiplicity;
pub mod persist;
pub mod quadrature;
pub mod symbols;
pub mod toeplitz;

pub use error::CoreError;

pub type Result<T> = std::result::Result<T, CoreError>;

pub use basis::{bergman_project, gram_matrix, kernel_eval, monomial_norm, BasisHandle};
pub use domains::{make_domain, DomainDescriptor, DomainKind, DomainPoint, MultiIndex};
pub use group::{
    average_operator, average_symbol, intertwine_defect, invariance_spot_check, mobius_apply,
    pi_lambda_matrix, GroupElement, SubgroupDescriptor,
};
pub use multiplicity::{
    algebra_is_commutative, commutant_basis, is_multiplicity_free_torus, torus_generators,
    weight_census, weight_of, CensusReport, Weight,
};
pub use quadrature::QuadratureRule;
pub use symbols::{InvarianceClass, Profile, SymbolKind, SymbolSpec};
pub use toeplitz::{commutator_norm, commutator_study, toeplitz_matrix, Exactness, OperatorMatrix};
