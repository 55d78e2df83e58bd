//! Finite subalgebras `A = R_mu[b_1, ..., b_r]` of `k[[T]]` presented as towers.

use serde::{Deserialize, Serialize};

use crate::field::FieldElem;
use crate::model::{in_model, MembershipStatus, ModelRing, RuleSpec, StreamElem};

use super::algebra::{Coeff, Tower, TowerElem};
use super::completed::CompletedTower;
use super::fiber::{ArtinianAlgebra, InvariantTriple};
use super::{TowerError, MAX_DEGREE};

#[derive(Clone, Debug, PartialEq)]
pub struct ModelTower {
    ring: ModelRing,
    tower: Tower<StreamElem>,
    roots: Vec<StreamElem>,
    degenerate: Vec<bool>,
}

impl ModelTower {
    /// The trivial tower `R_mu` itself.
    pub fn new(ring: ModelRing) -> Self {
        let p = ring.p();
        ModelTower { ring, tower: Tower::trivial(p, StreamElem::one(p)), roots: Vec::new(), degenerate: Vec::new() }
    }

    pub fn ring(&self) -> &ModelRing {
        &self.ring
    }

    pub fn tower(&self) -> &Tower<StreamElem> {
        &self.tower
    }

    /// Designated roots `b_i` with `b_i^(p^(nu_i)) = a_i(b_1, ..., b_(i-1))`.
    pub fn roots(&self) -> &[StreamElem] {
        &self.roots
    }

    pub fn degree(&self) -> usize {
        self.tower.degree()
    }

    pub fn num_gens(&self) -> usize {
        self.tower.num_gens()
    }

    /// Stages whose root already lies in `R_mu`.
    pub fn degenerate_stages(&self) -> Vec<usize> {
        (0..self.degenerate.len()).filter(|&i| self.degenerate[i]).collect()
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate.iter().any(|&d| d)
    }

    /// Adjoins `Z^(p^nu) = a` with `a` in the base ring.
    pub fn adjoin(&self, a: StreamElem, nu: u32, root: Option<StreamElem>) -> Result<ModelTower, TowerError> {
        let mut relation = vec![StreamElem::zero(self.ring.p()); self.degree()];
        relation[0] = a;
        self.adjoin_relation(relation, nu, root)
    }

    /// Like [`ModelTower::adjoin`] but rejects degenerate adjunctions.
    pub fn adjoin_proper(&self, a: StreamElem, nu: u32, root: Option<StreamElem>) -> Result<ModelTower, TowerError> {
        let t = self.adjoin(a, nu, root)?;
        if t.is_degenerate() && !self.is_degenerate() {
            return Err(TowerError::DegenerateAdjunction { stage: self.num_gens() });
        }
        Ok(t)
    }

    /// Adjoins `Z^(p^nu) = relation`, the relation an element of the current top stage
    /// with coefficients in `R_mu`.
    pub fn adjoin_relation(
        &self,
        relation: TowerElem<StreamElem>,
        nu: u32,
        root: Option<StreamElem>,
    ) -> Result<ModelTower, TowerError> {
        let stage = self.num_gens();
        if nu == 0 {
            return Err(TowerError::Invalid("adjunction exponent must be positive".into()));
        }
        if relation.len() != self.degree() {
            return Err(TowerError::Invalid(format!(
                "relation has {} coefficients, the top stage has rank {}",
                relation.len(),
                self.degree()
            )));
        }
        let p = self.ring.p();
        let degree = self.degree() * p.pow(nu) as usize;
        if degree > MAX_DEGREE {
            return Err(TowerError::DegreeTooLarge(degree));
        }
        for c in &relation {
            if c.p() != p {
                return Err(TowerError::Invalid("characteristic mismatch".into()));
            }
            if Coeff::is_zero(c) {
                continue;
            }
            let v = in_model(c, &self.ring);
            if v.status != MembershipStatus::Yes {
                return Err(TowerError::NotInBase { stage, status: v.status });
            }
        }
        let image = self.image(&relation);
        let root = match root {
            Some(b) => b,
            None => polynomial_root(&image, nu).ok_or_else(|| {
                TowerError::RootMissing(format!("stage {stage}: no designated root and none found in k[T]"))
            })?,
        };
        let n = self.ring.precision();
        if !StreamElem::frob(nu, root.clone()).eval(n).eq_mod(&image.eval(n)) {
            return Err(TowerError::NotARoot { stage });
        }
        let degenerate = in_model(&root, &self.ring).is_yes();
        let mut roots = self.roots.clone();
        roots.push(root);
        let mut flags = self.degenerate.clone();
        flags.push(degenerate);
        Ok(ModelTower { ring: self.ring.clone(), tower: self.tower.adjoin(nu, relation), roots, degenerate: flags })
    }

    /// `x(b_1, ..., b_r)` as a stream.
    pub fn image(&self, x: &[StreamElem]) -> StreamElem {
        let p = self.ring.p();
        let mut terms = Vec::new();
        for (idx, c) in x.iter().enumerate() {
            if Coeff::is_zero(c) {
                continue;
            }
            let mut factors = vec![c.clone()];
            for (i, &e) in self.tower.exponents_of(idx).iter().enumerate() {
                factors.extend(std::iter::repeat(self.roots[i].clone()).take(e));
            }
            terms.push(if factors.len() == 1 { factors.pop().expect("one factor") } else { StreamElem::product(factors) });
        }
        match terms.len() {
            0 => StreamElem::zero(p),
            1 => terms.pop().expect("one term"),
            _ => StreamElem::sum(terms),
        }
    }

    /// `D = A / T A`.
    pub fn special_fiber(&self) -> ArtinianAlgebra {
        let p = self.ring.p();
        ArtinianAlgebra::new(self.tower.map(FieldElem::one(p), |c| c.eval(1).coeff(0).clone()))
    }

    pub fn invariants(&self) -> Result<InvariantTriple, TowerError> {
        self.special_fiber().invariants()
    }

    /// Base change to `k[[T]]` at precision `N`. Relations are evaluated at
    /// `p^(sum nu) N` so that roots extracted from them keep precision `N`.
    pub fn completion(&self, precision: usize) -> Result<CompletedTower, TowerError> {
        self.completion_to(precision * self.degree(), precision)
    }

    /// Relations evaluated at `precision`, tower arithmetic at `output`.
    pub fn completion_to(&self, precision: usize, output: usize) -> Result<CompletedTower, TowerError> {
        if output == 0 || precision < self.degree() * output {
            return Err(TowerError::PrecisionTooLow {
                needed: self.degree() * output.max(1),
                available: precision,
            });
        }
        let relations = self
            .tower
            .stages()
            .iter()
            .map(|s| (s.nu, s.relation.iter().map(|c| c.eval(precision)).collect()))
            .collect();
        let completed = CompletedTower::new(self.ring.p(), relations, output)?;
        Ok(completed.with_designated_roots(self.roots.iter().map(|b| b.eval(output)).collect()))
    }

    pub fn to_spec(&self) -> TowerSpec {
        TowerSpec {
            p: self.ring.p(),
            mu: self.ring.mu(),
            gens: self
                .tower
                .stages()
                .iter()
                .zip(&self.roots)
                .map(|(s, b)| {
                    let base_only = s.relation.iter().skip(1).all(Coeff::is_zero);
                    GenSpec {
                        nu: s.nu,
                        a: base_only.then(|| s.relation[0].to_spec()),
                        relation: (!base_only).then(|| s.relation.iter().map(StreamElem::to_spec).collect()),
                        root: Some(b.to_spec()),
                    }
                })
                .collect(),
        }
    }

    pub fn from_spec(spec: &TowerSpec) -> Result<ModelTower, TowerError> {
        let ring = ModelRing::new(spec.p, spec.mu)?;
        let p = spec.p;
        let mut t = ModelTower::new(ring);
        for g in &spec.gens {
            let root = g.root.as_ref().map(|r| StreamElem::from_spec(r, p)).transpose()?;
            t = match (&g.a, &g.relation) {
                (Some(a), None) => t.adjoin(StreamElem::from_spec(a, p)?, g.nu, root)?,
                (None, Some(rel)) => t.adjoin_relation(
                    rel.iter().map(|r| StreamElem::from_spec(r, p)).collect::<Result<_, _>>()?,
                    g.nu,
                    root,
                )?,
                _ => return Err(TowerError::Invalid("each generator needs exactly one of `a` or `relation`".into())),
            };
        }
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_spec()).expect("tower specs serialize")
    }

    pub fn from_json(json: &str) -> Result<ModelTower, TowerError> {
        let spec: TowerSpec = serde_json::from_str(json).map_err(|e| TowerError::Invalid(e.to_string()))?;
        Self::from_spec(&spec)
    }
}

/// `{"p":2,"mu":1,"gens":[{"nu":1,"a":RULE,"root":RULE}]}`; `relation` replaces `a`
/// for relations involving earlier generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerSpec {
    pub p: u32,
    pub mu: u32,
    pub gens: Vec<GenSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub nu: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<RuleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<Vec<RuleSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<RuleSpec>,
}

// For a polynomial stream, the q-th root in k[T] if there is one.
fn polynomial_root(a: &StreamElem, nu: u32) -> Option<StreamElem> {
    let p = a.p();
    let q = p.pow(nu) as usize;
    let cs = a.as_polynomial()?;
    let mut out = Vec::new();
    for (i, c) in cs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if i % q != 0 {
            return None;
        }
        let r = c.pth_root(nu)?;
        if out.len() <= i / q {
            out.resize(i / q + 1, FieldElem::zero(p));
        }
        out[i / q] = r;
    }
    Some(StreamElem::polynomial(p, out))
}
