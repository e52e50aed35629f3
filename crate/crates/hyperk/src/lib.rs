//! Finite multirings, hyperfields and special groups as explicit tables,
//! with exhaustive axiom verification, reduced K-theories as exact F2-linear
//! data, inductive graded rings, and the adjunction tying them together.
//!
//! The crate is organized around small immutable values: structures are
//! validated at construction, every verifier is a pure function returning a
//! report with reproducible (lexicographically least) witnesses, and all
//! linear algebra is exact over F2 on bit-packed vectors.

pub mod constructions;
pub mod doc;
pub mod f2linalg;
pub mod hyperstructures;
pub mod ktheory;
pub mod specialgroups;

pub use constructions::{
    builtin, builtin_hyperfield, factor_through, gamma_of_igr, m_of_g, marshall_quotient,
    nonzero_squares, product_h, BuilderSpec, ConstructError,
};
pub use f2linalg::{F2Error, F2Subspace, F2Vector, TensorIndex};
pub use hyperstructures::{
    check_dm, check_hyperfield, check_morphism, check_multigroup, check_multiring, classify,
    is_hyperbolic, AxiomCheck, AxiomReport, Classification, ElemSet, FiniteHyperfield,
    FiniteMultiring, StructureError, Witness,
};
pub use ktheory::{
    adjunction_unit, check_igr, expr_is_zero, f_sharp, fixsg3_backward, fixsg3_forward,
    graded_iso_exists, igr_plus, induced_map, omega, one_subring, quotient_functor, reduced_k,
    smc_check, GradedKData, IgrData, KError, KExpression, RelationMode,
};
pub use specialgroups::{
    check_sg, dm_ktheory, extend_iso, reality_check, represents, sg_of_hyperfield, SgClass,
    SgError, SpecialGroupTable,
};
