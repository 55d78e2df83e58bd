//! Rule-defined elements of `k[[T]]`.

use std::fmt;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::field::FieldElem;
use crate::series::Series;

/// The rule defining a [`StreamElem`].
#[derive(Clone, Debug, PartialEq)]
pub enum Rule {
    /// Finitely many coefficients `q_0 + q_1 T + ...`.
    Polynomial(Vec<FieldElem>),
    /// Coefficient of `T^i` is `t_{start+i}`.
    Nagata { start: usize },
    /// `inner^(p^nu)`.
    Frob { nu: u32, inner: StreamElem },
    ScalarMul { scalar: FieldElem, inner: StreamElem },
    Sum(Vec<StreamElem>),
    Product(Vec<StreamElem>),
}

struct Node {
    p: u32,
    rule: Rule,
    // grows monotonically; a stored series is a prefix-consistent evaluation
    cache: RwLock<Option<Series>>,
}

/// An element of `k[[T]]` given by a rule, evaluated lazily to any precision.
///
/// Clones share the evaluation cache. Evaluation is deterministic, so readers
/// racing a writer can only observe a shorter prefix of the same series.
#[derive(Clone)]
pub struct StreamElem(Arc<Node>);

impl PartialEq for StreamElem {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.rule == other.0.rule)
    }
}

impl fmt::Debug for StreamElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

impl StreamElem {
    fn from_rule(p: u32, rule: Rule) -> Self {
        StreamElem(Arc::new(Node { p, rule, cache: RwLock::new(None) }))
    }

    pub fn polynomial(p: u32, coeffs: Vec<FieldElem>) -> Self {
        Self::from_rule(p, Rule::Polynomial(coeffs))
    }

    pub fn zero(p: u32) -> Self {
        Self::polynomial(p, Vec::new())
    }

    pub fn one(p: u32) -> Self {
        Self::constant(FieldElem::one(p))
    }

    pub fn constant(c: FieldElem) -> Self {
        Self::polynomial(c.p(), vec![c])
    }

    /// The uniformizer power `T^k`.
    pub fn t_power(p: u32, k: usize) -> Self {
        let mut cs = vec![FieldElem::zero(p); k];
        cs.push(FieldElem::one(p));
        Self::polynomial(p, cs)
    }

    /// `z_s = sum_i t_{s+i} T^i`.
    pub fn nagata(p: u32, start: usize) -> Self {
        Self::from_rule(p, Rule::Nagata { start })
    }

    pub fn frob(nu: u32, inner: StreamElem) -> Self {
        Self::from_rule(inner.p(), Rule::Frob { nu, inner })
    }

    pub fn scalar_mul(scalar: FieldElem, inner: StreamElem) -> Self {
        Self::from_rule(inner.p(), Rule::ScalarMul { scalar, inner })
    }

    pub fn sum(terms: Vec<StreamElem>) -> Self {
        let p = terms.first().expect("sum of at least one term").p();
        Self::from_rule(p, Rule::Sum(terms))
    }

    pub fn product(factors: Vec<StreamElem>) -> Self {
        let p = factors.first().expect("product of at least one factor").p();
        Self::from_rule(p, Rule::Product(factors))
    }

    pub fn neg(&self) -> Self {
        Self::scalar_mul(FieldElem::one(self.p()).neg(), self.clone())
    }

    pub fn sub(&self, other: &StreamElem) -> Self {
        Self::sum(vec![self.clone(), other.neg()])
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn rule(&self) -> &Rule {
        &self.0.rule
    }

    /// The first `precision` coefficients.
    pub fn eval(&self, precision: usize) -> Series {
        assert!(precision > 0, "evaluation precision must be positive");
        if let Some(s) = self.0.cache.read().expect("cache lock").as_ref() {
            if s.precision() >= precision {
                return s.truncate(precision);
            }
        }
        let s = self.compute(precision);
        let mut slot = self.0.cache.write().expect("cache lock");
        match slot.as_ref() {
            Some(old) if old.precision() >= precision => {}
            _ => *slot = Some(s.clone()),
        }
        s
    }

    fn compute(&self, n: usize) -> Series {
        let p = self.p();
        match &self.0.rule {
            Rule::Polynomial(cs) => {
                Series::from_coeffs(p, cs.iter().take(n).cloned().collect(), n)
            }
            Rule::Nagata { start } => Series::from_coeffs(
                p,
                (0..n).map(|i| FieldElem::var((start + i) as u32, p)).collect(),
                n,
            ),
            Rule::Frob { nu, inner } => {
                let inner_n = Series::pth_root_precision(n, p, *nu);
                inner.eval(inner_n).frobenius_to(*nu, n)
            }
            Rule::ScalarMul { scalar, inner } => inner.eval(n).scale(scalar),
            Rule::Sum(terms) => terms
                .iter()
                .map(|t| t.eval(n))
                .reduce(|a, b| a.add(&b))
                .expect("nonempty sum"),
            Rule::Product(factors) => factors
                .iter()
                .map(|t| t.eval(n))
                .reduce(|a, b| a.mul(&b))
                .expect("nonempty product"),
        }
    }

    /// The exact coefficient list if the rule only involves polynomial leaves.
    pub fn as_polynomial(&self) -> Option<Vec<FieldElem>> {
        let p = self.p();
        match &self.0.rule {
            Rule::Polynomial(cs) => Some(cs.clone()),
            Rule::Nagata { .. } => None,
            Rule::Frob { nu, inner } => {
                let cs = inner.as_polynomial()?;
                let q = p.pow(*nu) as usize;
                let mut out = vec![FieldElem::zero(p); cs.len().saturating_sub(1) * q + 1];
                for (i, c) in cs.iter().enumerate() {
                    out[i * q] = c.frobenius(*nu);
                }
                Some(out)
            }
            Rule::ScalarMul { scalar, inner } => {
                Some(inner.as_polynomial()?.iter().map(|c| c.mul(scalar)).collect())
            }
            Rule::Sum(terms) => {
                let mut acc: Vec<FieldElem> = Vec::new();
                for t in terms {
                    let cs = t.as_polynomial()?;
                    if cs.len() > acc.len() {
                        acc.resize(cs.len(), FieldElem::zero(p));
                    }
                    for (i, c) in cs.iter().enumerate() {
                        acc[i] = acc[i].add(c);
                    }
                }
                Some(acc)
            }
            Rule::Product(factors) => {
                let mut acc = vec![FieldElem::one(p)];
                for f in factors {
                    let cs = f.as_polynomial()?;
                    if cs.is_empty() {
                        return Some(Vec::new());
                    }
                    let mut out = vec![FieldElem::zero(p); acc.len() + cs.len() - 1];
                    for (i, a) in acc.iter().enumerate() {
                        for (j, b) in cs.iter().enumerate() {
                            out[i + j] = out[i + j].add(&a.mul(b));
                        }
                    }
                    acc = out;
                }
                Some(acc)
            }
        }
    }

    pub fn to_spec(&self) -> RuleSpec {
        match &self.0.rule {
            Rule::Polynomial(cs) => RuleSpec::Poly { coeffs: cs.iter().map(|c| c.to_string()).collect() },
            Rule::Nagata { start } => RuleSpec::Nagata { s: *start },
            Rule::Frob { nu, inner } => RuleSpec::Frob { nu: *nu, inner: Box::new(inner.to_spec()) },
            Rule::ScalarMul { scalar, inner } => RuleSpec::Scalar {
                lambda: scalar.to_string(),
                inner: Box::new(inner.to_spec()),
            },
            Rule::Sum(ts) => RuleSpec::Sum { terms: ts.iter().map(|t| t.to_spec()).collect() },
            Rule::Product(fs) => {
                RuleSpec::Product { factors: fs.iter().map(|t| t.to_spec()).collect() }
            }
        }
    }

    pub fn from_spec(spec: &RuleSpec, p: u32) -> Result<StreamElem, ModelError> {
        Ok(match spec {
            RuleSpec::Poly { coeffs } => StreamElem::polynomial(
                p,
                coeffs
                    .iter()
                    .map(|c| FieldElem::parse(c, p))
                    .collect::<Result<_, _>>()?,
            ),
            RuleSpec::Nagata { s } => StreamElem::nagata(p, *s),
            RuleSpec::Frob { nu, inner } => StreamElem::frob(*nu, Self::from_spec(inner, p)?),
            RuleSpec::Scalar { lambda, inner } => {
                StreamElem::scalar_mul(FieldElem::parse(lambda, p)?, Self::from_spec(inner, p)?)
            }
            RuleSpec::Sum { terms } => {
                if terms.is_empty() {
                    return Err(ModelError::InvalidRule("empty sum".into()));
                }
                StreamElem::sum(terms.iter().map(|t| Self::from_spec(t, p)).collect::<Result<_, _>>()?)
            }
            RuleSpec::Product { factors } => {
                if factors.is_empty() {
                    return Err(ModelError::InvalidRule("empty product".into()));
                }
                StreamElem::product(
                    factors.iter().map(|t| Self::from_spec(t, p)).collect::<Result<_, _>>()?,
                )
            }
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_spec()).expect("rule specs serialize")
    }

    pub fn from_json(json: &str, p: u32) -> Result<StreamElem, ModelError> {
        let spec: RuleSpec =
            serde_json::from_str(json).map_err(|e| ModelError::InvalidRule(e.to_string()))?;
        Self::from_spec(&spec, p)
    }
}

/// Serialized form of a rule, e.g. `{"rule":"frob","nu":1,"inner":{"rule":"nagata","s":0}}`.
/// Field elements are written in the textual `t0^2*t1 + 1` syntax.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum RuleSpec {
    Poly { coeffs: Vec<String> },
    Nagata { s: usize },
    Frob { nu: u32, inner: Box<RuleSpec> },
    Scalar { lambda: String, inner: Box<RuleSpec> },
    Sum { terms: Vec<RuleSpec> },
    Product { factors: Vec<RuleSpec> },
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(i: u32, p: u32) -> FieldElem {
        FieldElem::var(i, p)
    }

    #[test]
    fn nagata_unfolds_to_variables() {
        let p = 2;
        let z = StreamElem::nagata(p, 0);
        let s = z.eval(4);
        assert_eq!(s.coeffs(), &[t(0, p), t(1, p), t(2, p), t(3, p)]);
        assert_eq!(StreamElem::nagata(p, 2).eval(1).coeff(0), &t(2, p));
    }

    #[test]
    fn frobenius_rule_matches_series_frobenius() {
        let p = 2;
        let z = StreamElem::nagata(p, 0);
        let f = StreamElem::frob(1, z.clone()).eval(8);
        assert_eq!(f, z.eval(8).frobenius(1));
        assert_eq!(f.coeff(6), &t(3, p).pow(2));
    }

    #[test]
    fn sum_and_product_rules() {
        let p = 2;
        let z = StreamElem::nagata(p, 0);
        let poly = StreamElem::polynomial(p, vec![FieldElem::one(p), t(0, p)]);
        assert_eq!(poly.eval(4), Series::from_coeffs(p, vec![FieldElem::one(p), t(0, p)], 4));
        assert!(StreamElem::sum(vec![z.clone(), z.clone()]).eval(8).is_zero());
        let sq = StreamElem::product(vec![z.clone(), z.clone()]).eval(8);
        assert_eq!(sq, z.eval(8).frobenius(1));
    }

    #[test]
    fn evaluation_is_prefix_consistent() {
        let p = 3;
        let z = StreamElem::frob(1, StreamElem::product(vec![StreamElem::nagata(p, 1), StreamElem::nagata(p, 0)]));
        let long = z.eval(24);
        let short = z.eval(7);
        assert_eq!(long.truncate(7), short);
        let fresh = StreamElem::from_json(&z.to_json(), p).unwrap();
        assert_eq!(fresh.eval(24), long);
    }

    #[test]
    fn json_rule_format() {
        let p = 2;
        let json = r#"{"rule":"frob","nu":1,"inner":{"rule":"nagata","s":0}}"#;
        let e = StreamElem::from_json(json, p).unwrap();
        assert_eq!(e, StreamElem::frob(1, StreamElem::nagata(p, 0)));
        assert_eq!(e.to_json(), json);
        assert!(StreamElem::from_json(r#"{"rule":"sum","terms":[]}"#, p).is_err());
        assert!(StreamElem::from_json(r#"{"rule":"poly","coeffs":["t0 +"]}"#, p).is_err());
    }

    #[test]
    fn polynomial_extraction() {
        let p = 3;
        let a = StreamElem::polynomial(p, vec![t(0, p), FieldElem::one(p)]);
        let b = StreamElem::product(vec![a.clone(), StreamElem::frob(1, a.clone())]);
        let cs = b.as_polynomial().unwrap();
        assert_eq!(Series::from_coeffs(p, cs, 8), b.eval(8));
        assert!(StreamElem::sum(vec![a, StreamElem::nagata(p, 0)]).as_polynomial().is_none());
    }
}
