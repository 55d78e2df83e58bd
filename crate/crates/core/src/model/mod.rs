//! Nagata's discrete valuation rings `R_mu = k^(p^mu)[[T]] (x)_{k^(p^mu)} k` inside `k[[T]]`.
//!
//! `R_mu` has uniformizer `T`, residue field `k` and completion `k[[T]]`. The
//! classical example is `mu = 1`; larger `mu` makes the height filtration of the
//! p-radical closure nontrivial up to height `mu`.

mod membership;
mod stream;

pub use membership::{in_model, verify_verdict, MembershipStatus, MembershipVerdict, Witness};
pub use stream::{Rule, RuleSpec, StreamElem};

use thiserror::Error;

use crate::field::{is_supported_prime, FieldError};
use crate::series::Series;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unsupported prime {0} (expected 2 <= p <= 13)")]
    UnsupportedPrime(u32),
    #[error("inseparability depth must be at least 1")]
    ZeroDepth,
    #[error("invalid rule: {0}")]
    InvalidRule(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

pub const DEFAULT_PRECISION: usize = 64;
pub const DEFAULT_RANK_THRESHOLDS: [usize; 3] = [8, 16, 32];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelRing {
    p: u32,
    mu: u32,
    precision: usize,
    rank_thresholds: Vec<usize>,
}

impl ModelRing {
    pub fn new(p: u32, mu: u32) -> Result<Self, ModelError> {
        if !is_supported_prime(p) {
            return Err(ModelError::UnsupportedPrime(p));
        }
        if mu == 0 {
            return Err(ModelError::ZeroDepth);
        }
        Ok(ModelRing {
            p,
            mu,
            precision: DEFAULT_PRECISION,
            rank_thresholds: DEFAULT_RANK_THRESHOLDS.to_vec(),
        })
    }

    pub fn with_precision(mut self, precision: usize) -> Self {
        assert!(precision > 0);
        self.precision = precision;
        self
    }

    pub fn with_rank_thresholds(mut self, thresholds: Vec<usize>) -> Self {
        assert!(!thresholds.is_empty() && thresholds.iter().all(|&m| m > 0));
        self.rank_thresholds = thresholds;
        self
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn mu(&self) -> u32 {
        self.mu
    }

    /// Working precision for evaluations and nonvanishing checks.
    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn rank_thresholds(&self) -> &[usize] {
        &self.rank_thresholds
    }

    pub fn uniformizer(&self) -> StreamElem {
        StreamElem::t_power(self.p, 1)
    }

    pub fn contains(&self, b: &StreamElem) -> MembershipVerdict {
        in_model(b, self)
    }

    /// `w_j = z_{s+j}`; satisfies `w_j = t_{s+j} + T w_{j+1}`.
    pub fn witness_chain(&self, start: usize, j: usize) -> StreamElem {
        nagata_stream(self.p, start + j)
    }
}

pub fn nagata_stream(p: u32, start: usize) -> StreamElem {
    StreamElem::nagata(p, start)
}

pub fn eval_to_precision(b: &StreamElem, precision: usize) -> Series {
    b.eval(precision)
}
