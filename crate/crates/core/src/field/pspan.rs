//! Spans over the subfield `k^(p^mu)`.
//!
//! An element `x = u/v` of `k` spans the same `k^q`-line as `u v^(q-1)`
//! (they differ by the factor `v^q`). That polynomial splits uniquely as
//! `sum_b t^b h_b^q` over exponent classes `b` mod `q`, and Frobenius turns the
//! `k^q`-coordinates `h_b^q` into `k`-coordinates `h_b`. Ranks over `k^q` are
//! therefore ordinary ranks over `k` of the vectors `(h_b)_b`.

use std::collections::BTreeMap;

use super::poly::{Monomial, MultiPoly};
use super::FieldElem;

/// Coordinates of `x` (up to a `k^q` scalar) in the `p^mu`-monomial basis.
pub fn p_decompose(x: &FieldElem, mu: u32) -> BTreeMap<Monomial, FieldElem> {
    let p = x.p();
    let q = p.pow(mu);
    let w = if x.den().is_one() {
        x.num().clone()
    } else {
        x.num().mul(&x.den().pow(q as u64 - 1))
    };
    decompose_poly(&w, q)
}

pub(crate) fn decompose_poly(w: &MultiPoly, q: u32) -> BTreeMap<Monomial, FieldElem> {
    let p = w.p();
    let mut groups: BTreeMap<Monomial, Vec<(Monomial, u32)>> = BTreeMap::new();
    for (m, c) in w.terms() {
        let (root, rem) = m.split_mod(q);
        groups.entry(rem).or_default().push((root, *c));
    }
    groups
        .into_iter()
        .map(|(k, terms)| (k, FieldElem::from_poly(MultiPoly::from_terms(terms, p))))
        .collect()
}

/// Incremental echelon basis of a `k^(p^mu)`-subspace of `k`.
#[derive(Clone, Debug)]
pub struct PSpan {
    mu: u32,
    rows: Vec<(Monomial, BTreeMap<Monomial, FieldElem>)>,
    members: Vec<FieldElem>,
}

impl PSpan {
    pub fn new(mu: u32) -> Self {
        PSpan { mu, rows: Vec::new(), members: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// The inserted elements that were independent, i.e. a basis of the span.
    pub fn basis(&self) -> &[FieldElem] {
        &self.members
    }

    fn reduce(&self, x: &FieldElem) -> BTreeMap<Monomial, FieldElem> {
        let mut v = p_decompose(x, self.mu);
        for (pivot, row) in &self.rows {
            let Some(c) = v.get(pivot).cloned() else { continue };
            for (k, r) in row {
                let cur = v.remove(k).unwrap_or_else(|| FieldElem::zero(x.p()));
                let new = cur.sub(&c.mul(r));
                if !new.is_zero() {
                    v.insert(k.clone(), new);
                }
            }
        }
        v
    }

    pub fn contains(&self, x: &FieldElem) -> bool {
        x.is_zero() || self.reduce(x).is_empty()
    }

    /// Adds `x`; returns whether the rank grew.
    pub fn insert(&mut self, x: &FieldElem) -> bool {
        if x.is_zero() {
            return false;
        }
        let v = self.reduce(x);
        let Some((pivot, lead)) = v.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = lead.inv().expect("nonzero pivot");
        let row = v.into_iter().map(|(k, c)| (k, c.mul(&inv))).collect();
        self.rows.push((pivot, row));
        self.members.push(x.clone());
        true
    }
}

/// Dimension over `k^(p^mu)` of the span of `elems`.
pub fn p_span_rank(elems: &[FieldElem], mu: u32) -> usize {
    let mut span = PSpan::new(mu);
    for e in elems {
        span.insert(e);
    }
    span.rank()
}
