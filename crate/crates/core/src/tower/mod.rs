//! Purely inseparable towers `A = R[Z_1, ..., Z_r] / (Z_i^(p^(nu_i)) - a_i)`.
//!
//! [`Tower`] is the generic normal-form arithmetic. [`ModelTower`] builds finite
//! subalgebras of the p-radical closure over a model ring, carrying a root
//! `b_i` of each relation in `k[[T]]`. [`CompletedTower`] is the base change to
//! truncated power series, and [`FieldTower`] a tower of subfields of `k`.

mod algebra;
mod completed;
mod fiber;
mod model_tower;
mod tensor;

pub use algebra::{Coeff, Stage, Tower, TowerElem};
pub use completed::{reduction_of_completion, CompletedTower, ReductionReport};
pub use fiber::{ArtinianAlgebra, InvariantTriple};
pub use model_tower::{GenSpec, ModelTower, TowerSpec};
pub use tensor::{random_field_tower, tensor_square_reduced_check, FieldTower, TensorReport};

use serde::Serialize;
use thiserror::Error;

use crate::model::{MembershipStatus, ModelError};

/// Largest supported rank. Allows `p^6` for `p = 2` and `p^4` for `p = 3`.
pub const MAX_DEGREE: usize = 81;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TowerError {
    #[error("relation coefficient of stage {stage} is not in the base (membership {status:?})")]
    NotInBase { stage: usize, status: MembershipStatus },
    #[error("stage {stage}: designated root does not satisfy its relation")]
    NotARoot { stage: usize },
    #[error("stage {stage}: root lies in the base, the adjunction is trivial")]
    DegenerateAdjunction { stage: usize },
    #[error("no root available: {0}")]
    RootMissing(String),
    #[error("degree {0} exceeds the supported maximum")]
    DegreeTooLarge(usize),
    #[error("precision too low: need {needed}, have {available}")]
    PrecisionTooLow { needed: usize, available: usize },
    #[error("invariant mismatch: {0}")]
    InvariantMismatch(String),
    #[error("invalid tower: {0}")]
    Invalid(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// One named verification step inside a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}
