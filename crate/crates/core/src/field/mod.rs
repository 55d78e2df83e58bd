//! Exact arithmetic in `F_p` and in `k = F_p(t_0, t_1, ...)`.
//!
//! `k` has infinite p-degree: the variables `t_i` are p-independent, so every
//! `k^(p^mu)`-span computation is done against the monomial basis `t^b` with all
//! exponents of `b` below `p^mu`.

mod elem;
pub mod linalg;
mod poly;
mod prime;
pub(crate) mod pspan;

pub use elem::FieldElem;
pub use poly::{Monomial, MultiPoly};
pub use prime::{is_supported_prime, PrimeFieldElem, MAX_PRIME};
pub use pspan::{p_decompose, p_span_rank, PSpan};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live over different primes ({0} and {1})")]
    PrimeMismatch(u32, u32),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Binary operation selector for [`field_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn field_arith(x: &FieldElem, y: &FieldElem, op: FieldOp) -> Result<FieldElem, FieldError> {
    if x.p() != y.p() {
        return Err(FieldError::PrimeMismatch(x.p(), y.p()));
    }
    Ok(match op {
        FieldOp::Add => x.add(y),
        FieldOp::Sub => x.sub(y),
        FieldOp::Mul => x.mul(y),
        FieldOp::Div => x.div(y)?,
    })
}
