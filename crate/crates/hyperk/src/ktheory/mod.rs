//! Reduced K-theory of finite hyperfields and special groups as graded
//! F2-linear data, inductive graded rings, the level-1/quotient functors,
//! the adjunction between K-theory and the hyperfield extraction, the
//! degree-2 zero-sum witness construction and graded isomorphism search.

mod adjunction;
mod fixsg3;
mod graded;
mod igr;
mod iso;

pub use adjunction::{adjunction_unit, f_sharp, AdjunctionUnitReport, FSharpResult};
pub use fixsg3::{fixsg3_backward, fixsg3_forward, BackwardReport, Fixsg3Outcome, Fixsg3Witness};
pub use graded::{
    build_graded, expr_is_zero, induced_map, omega, reduced_k, smc_check, unit_group_coordinates,
    DegreeData, GradedKData, InducedMap, KExpression, PairPlacement, RelationMode, SmcLevel,
    SmcReport,
};
pub use igr::{check_igr, igr_plus, one_subring, quotient_functor, IgrData, IgrPlus, OneSubring, QuotientIgr};
pub use iso::graded_iso_exists;

use crate::f2linalg::F2Error;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KError {
    #[error(transparent)]
    F2(#[from] F2Error),
    #[error("element index {0} is not a unit of the hyperfield")]
    InvalidElement(usize),
    #[error("degree {degree} outside the computed range 0..={max_degree}")]
    DegreeOutOfRange { degree: usize, max_degree: usize },
    #[error("the listed coordinate vectors are linearly dependent")]
    DependentInput,
    #[error("hyperfield is not pre-special: {0}")]
    NotPreSpecial(String),
    #[error("degree-1 dimension {0} exceeds the isomorphism search bound {1}")]
    SearchBoundExceeded(usize, usize),
    #[error("inductive graded ring is not in the level-1-generated quotient-fixed class: {0}")]
    NotIgrPlus(String),
    #[error("malformed inductive graded ring data: {0}")]
    MalformedIgr(String),
    #[error(
        "a degree-{degree} relation does not annihilate: {}",
        if !*f_is_morphism { "the map fails the morphism check" }
        else if !*r_in_igr_plus { "the codomain is not in the required class" }
        else { "internal inconsistency" }
    )]
    RelationNotAnnihilated {
        degree: usize,
        r_in_igr_plus: bool,
        f_is_morphism: bool,
    },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
