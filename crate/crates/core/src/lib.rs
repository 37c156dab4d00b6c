//! Finite-dimensional C*-algebra workbench.
//!
//! Builds unital *-subalgebras of `M_n`, computes their commutant, center
//! and central projections, and constructs the deformed algebras
//! `A(u, p)` with product `a∘b = p a u b + (1 - p) b u a` and involution
//! `a★ = u* a* u*`. On top of that it decides deformed positivity, finds the
//! unique unitary making an invertible element positive, recovers `(u, p)`
//! from a black-box product table, and runs seeded property suites that
//! check the algebraic laws numerically.

pub mod algebra;
pub mod deform;
pub mod error;
pub mod io;
pub mod laws;
pub mod matcore;
pub mod report;
pub mod seed;

pub use algebra::{
    bicommutant, center, central_projections, commutant, contains, generate_algebra,
    random_hermitian, random_invertible_in, random_unitary_in, CentralProjectionSet, StarAlgebra,
    Subspace,
};
pub use deform::{
    check_positivizer_uniqueness, deformed_mul, deformed_star, deformed_unit,
    diagonal_positivizers, is_positive_deformed, is_selfadjoint_deformed, positivizing_unitary,
    recover_deformation, structure_constants, verify_cstar_identity, DeformationRecovery,
    DeformedAlgebra, Positivity, StarTable, StructureConstants,
};
pub use error::{Error, Result};
pub use io::{AlgebraFile, AlgebraSource, DeformationFile, ElementFile, StructureFile};
pub use laws::{
    check_deformed_algebra, run_all, run_all_with, run_law, Injection, InstanceSpec, LawContext,
    LawId,
};
pub use matcore::{
    adjoint, apply_hermitian_function, hermitian_eig, operator_norm, polar_decompose,
    spectral_radius_normal, sqrt_psd, Check, ComplexMatrix, HermitianEig, PolarParts,
    ToleranceConfig, C64,
};
pub use report::LawReport;
pub use seed::Seed;
