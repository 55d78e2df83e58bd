//! Membership in `R_mu[b]` for elements of the Nagata chain.
//!
//! Chain elements are `w_s^(p^d)` with `w_s` the stream with coefficients
//! `t_s, t_(s+1), ...`. They satisfy, for `s <= s'`,
//! `w_s^(p^d) = P^(p^d) + T^((s'-s) p^d) w_(s')^(p^d)` with `P = sum_(i < s'-s) t_(s+i) T^i`.
//! When `b = w_s^(p^e)` has degree `q` over `F = Frac(R)`, the powers `1, ..., b^(q-1)`
//! are an `F`-basis of `F(b)` and `R[b]` is the set of elements whose coordinates lie
//! in `R`. The identity above gives those coordinates explicitly.

use serde::Serialize;

use crate::field::FieldElem;
use crate::model::{in_model, MembershipStatus, Rule, StreamElem};
use crate::series::Series;
use crate::tower::ModelTower;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubalgebraVerdict {
    pub status: MembershipStatus,
    pub witness: String,
}

impl SubalgebraVerdict {
    fn new(status: MembershipStatus, witness: impl Into<String>) -> Self {
        SubalgebraVerdict { status, witness: witness.into() }
    }
}

/// `(d, s)` if `x = w_s^(p^d)` syntactically.
pub fn chain_form(x: &StreamElem) -> Option<(u32, usize)> {
    match x.rule() {
        Rule::Nagata { start } => Some((0, *start)),
        Rule::Frob { nu, inner } => chain_form(inner).map(|(d, s)| (d + nu, s)),
        _ => None,
    }
}

fn chain_prefix(p: u32, start: usize, len: usize, d: u32, precision: usize) -> Series {
    let coeffs = (0..len).map(|i| FieldElem::var((start + i) as u32, p)).collect();
    Series::from_coeffs(p, coeffs, precision).frobenius(d)
}

/// Decides `x ∈ A` for a single-generator tower `A = R_mu[b]`, checking the
/// identities it relies on mod `T^N`.
pub fn subalgebra_membership(x: &StreamElem, a: &ModelTower, precision: usize) -> SubalgebraVerdict {
    let ring = a.ring();
    let p = ring.p();
    let mu = ring.mu();
    let direct = in_model(x, ring);
    if direct.is_yes() {
        return SubalgebraVerdict::new(MembershipStatus::Yes, format!("x lies in R ({})", direct.summary()));
    }
    if a.num_gens() != 1 {
        return SubalgebraVerdict::new(MembershipStatus::Unknown, "only single-generator towers are supported");
    }
    let b = &a.roots()[0];
    let nu = a.tower().stages()[0].nu;
    let q = p.pow(nu) as u64;
    let Some((e, s)) = chain_form(b) else {
        return SubalgebraVerdict::new(MembershipStatus::Unknown, "generator is not a chain element");
    };
    let Some((d, s2)) = chain_form(x) else {
        return SubalgebraVerdict::new(MembershipStatus::Unknown, "element is not a chain element");
    };
    // [F(b):F] = q needs b^(q/p) outside R
    let below = if nu == 1 { b.clone() } else { StreamElem::frob(nu - 1, b.clone()) };
    if !in_model(&below, ring).is_no() || e + nu != mu {
        return SubalgebraVerdict::new(MembershipStatus::Unknown, "generator degree is not certified");
    }
    if d >= mu {
        return SubalgebraVerdict::new(MembershipStatus::Unknown, "chain element in R was not decided");
    }
    if d < e {
        return SubalgebraVerdict::new(
            MembershipStatus::No,
            format!("[F(x):F] = p^{} exceeds [F(b):F] = p^{nu}", mu - d),
        );
    }
    let n = precision;
    if s2 <= s {
        // w_(s2)^(p^e) = P + T^((s - s2) p^e) b
        let k = (s - s2) * p.pow(e) as usize;
        let lhs = StreamElem::frob(e, StreamElem::nagata(p, s2)).eval(n);
        let rhs = chain_prefix(p, s2, s - s2, e, n).add(&b.eval(n).shift(k));
        if !lhs.eq_mod(&rhs) {
            return SubalgebraVerdict::new(MembershipStatus::Unknown, "shift identity failed numerically");
        }
        return SubalgebraVerdict::new(
            MembershipStatus::Yes,
            format!(
                "x = (P + T^{k} b)^(p^{}) with P a polynomial; identity checked mod T^{n}",
                d - e
            ),
        );
    }
    // T^(k p^d) x = b^(p^(d-e)) - P^(p^d), and p^(d-e) < q since x is not in R
    let j = p.pow(d - e) as u64;
    debug_assert!(j < q);
    let k = (s2 - s) * p.pow(d) as usize;
    let lhs = x.eval(n).shift(k);
    let rhs = b.eval(n).pow(j).sub(&chain_prefix(p, s, s2 - s, d, n));
    if !lhs.eq_mod(&rhs) {
        return SubalgebraVerdict::new(MembershipStatus::Unknown, "shift identity failed numerically");
    }
    SubalgebraVerdict::new(
        MembershipStatus::No,
        format!(
            "the coordinate of b^{j} in x is T^(-{k}), not in R; identity T^{k} x = b^{j} - P checked mod T^{n}"
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelRing;

    fn chain_tower(p: u32, mu: u32, j: usize) -> ModelTower {
        let ring = ModelRing::new(p, mu).unwrap();
        let w = ring.witness_chain(0, j);
        ModelTower::new(ring).adjoin(StreamElem::frob(mu, w.clone()), mu, Some(w)).unwrap()
    }

    #[test]
    fn chain_is_strictly_ascending() {
        let p = 2;
        let a0 = chain_tower(p, 1, 0);
        let a1 = chain_tower(p, 1, 1);
        let w0 = StreamElem::nagata(p, 0);
        let w1 = StreamElem::nagata(p, 1);
        assert_eq!(subalgebra_membership(&w1, &a0, 64).status, MembershipStatus::No);
        assert_eq!(subalgebra_membership(&w0, &a0, 64).status, MembershipStatus::Yes);
        assert_eq!(subalgebra_membership(&w0, &a1, 64).status, MembershipStatus::Yes);
    }

    #[test]
    fn frobenius_twists() {
        let p = 3;
        let ring = ModelRing::new(p, 2).unwrap();
        let w0 = StreamElem::nagata(p, 0);
        // A = R_2[w_0^3], rank 3
        let b = StreamElem::frob(1, w0.clone());
        let a = ModelTower::new(ring).adjoin(StreamElem::frob(1, b.clone()), 1, Some(b)).unwrap();
        assert_eq!(subalgebra_membership(&w0, &a, 32).status, MembershipStatus::No);
        let x = StreamElem::frob(1, StreamElem::nagata(p, 2));
        assert_eq!(subalgebra_membership(&x, &a, 32).status, MembershipStatus::No);
        assert_eq!(subalgebra_membership(&StreamElem::frob(2, w0), &a, 32).status, MembershipStatus::Yes);
    }

    #[test]
    fn unsupported_shapes_are_unknown() {
        let p = 2;
        let a = chain_tower(p, 1, 0);
        let x = StreamElem::sum(vec![StreamElem::nagata(p, 3), StreamElem::nagata(p, 4)]);
        assert_eq!(subalgebra_membership(&x, &a, 32).status, MembershipStatus::Unknown);
    }
}
