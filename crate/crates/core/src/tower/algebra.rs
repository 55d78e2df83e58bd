//! Free algebras `C[Z_1, ..., Z_r] / (Z_i^(q_i) - a_i)` over a coefficient ring.
//!
//! Each `a_i` is an element of the previous stage. Elements are stored as flat
//! coefficient vectors over the monomials `Z^e`, `0 <= e_i < q_i`, with `Z_1`
//! varying fastest: index `e_1 + q_1 (e_2 + q_2 (...))`.

use std::fmt;
use std::sync::OnceLock;

use crate::field::FieldElem;
use crate::model::StreamElem;
use crate::series::Series;

/// Coefficient ring operations needed by [`Tower`].
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// May return `false` for zero elements it cannot recognize.
    fn is_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    /// The p-th power map.
    fn frobenius(&self) -> Self;
}

impl Coeff for FieldElem {
    fn add(&self, o: &Self) -> Self {
        FieldElem::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        FieldElem::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        FieldElem::mul(self, o)
    }
    fn neg(&self) -> Self {
        FieldElem::neg(self)
    }
    fn is_zero(&self) -> bool {
        FieldElem::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        FieldElem::zero(self.p())
    }
    fn one_like(&self) -> Self {
        FieldElem::one(self.p())
    }
    fn frobenius(&self) -> Self {
        FieldElem::frobenius(self, 1)
    }
}

impl Coeff for Series {
    fn add(&self, o: &Self) -> Self {
        Series::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Series::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Series::mul(self, o)
    }
    fn neg(&self) -> Self {
        Series::neg(self)
    }
    fn is_zero(&self) -> bool {
        Series::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        Series::zero(self.p(), self.precision())
    }
    fn one_like(&self) -> Self {
        Series::one(self.p(), self.precision())
    }
    fn frobenius(&self) -> Self {
        Series::frobenius(self, 1)
    }
}

/// Symbolic arithmetic: results are new rules.
impl Coeff for StreamElem {
    fn add(&self, o: &Self) -> Self {
        StreamElem::sum(vec![self.clone(), o.clone()])
    }
    fn sub(&self, o: &Self) -> Self {
        StreamElem::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        StreamElem::product(vec![self.clone(), o.clone()])
    }
    fn neg(&self) -> Self {
        StreamElem::neg(self)
    }
    fn is_zero(&self) -> bool {
        matches!(self.rule(), crate::model::Rule::Polynomial(cs) if cs.iter().all(FieldElem::is_zero))
    }
    fn zero_like(&self) -> Self {
        StreamElem::zero(self.p())
    }
    fn one_like(&self) -> Self {
        StreamElem::one(self.p())
    }
    fn frobenius(&self) -> Self {
        StreamElem::frob(1, self.clone())
    }
}

/// One adjunction `Z^(p^nu) = relation`, the relation living in the previous stage.
#[derive(Clone, Debug, PartialEq)]
pub struct Stage<C> {
    pub nu: u32,
    pub relation: Vec<C>,
}

pub type TowerElem<C> = Vec<C>;

#[derive(Clone, Debug)]
pub struct Tower<C: Coeff> {
    p: u32,
    one: C,
    stages: Vec<Stage<C>>,
    // Z^(p e) for every basis exponent e, built on first use
    frob_basis: OnceLock<Vec<TowerElem<C>>>,
}

impl<C: Coeff> PartialEq for Tower<C> {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.stages == other.stages
    }
}

impl<C: Coeff> Tower<C> {
    /// The base ring itself (degree 1). `one` fixes how to build constants.
    pub fn trivial(p: u32, one: C) -> Self {
        Tower { p, one, stages: Vec::new(), frob_basis: OnceLock::new() }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn stages(&self) -> &[Stage<C>] {
        &self.stages
    }

    pub fn num_gens(&self) -> usize {
        self.stages.len()
    }

    pub fn total_nu(&self) -> u32 {
        self.stages.iter().map(|s| s.nu).sum()
    }

    pub fn stage_exponent(&self, i: usize) -> usize {
        self.p.pow(self.stages[i].nu) as usize
    }

    /// Rank over the base: the product of the `p^(nu_i)`.
    pub fn degree(&self) -> usize {
        self.dim_at(self.stages.len())
    }

    fn dim_at(&self, level: usize) -> usize {
        (0..level).map(|i| self.stage_exponent(i)).product()
    }

    /// Adds `Z^(p^nu) = relation`, `relation` an element of the current top stage.
    pub fn adjoin(&self, nu: u32, relation: TowerElem<C>) -> Tower<C> {
        assert!(nu >= 1, "adjunction exponent must be positive");
        assert_eq!(relation.len(), self.degree(), "relation must live in the current stage");
        let mut stages = self.stages.clone();
        stages.push(Stage { nu, relation });
        Tower { p: self.p, one: self.one.clone(), stages, frob_basis: OnceLock::new() }
    }

    /// The same relations with coefficients mapped through a ring map.
    pub fn map<D: Coeff>(&self, one: D, f: impl Fn(&C) -> D) -> Tower<D> {
        Tower {
            p: self.p,
            one,
            stages: self
                .stages
                .iter()
                .map(|s| Stage { nu: s.nu, relation: s.relation.iter().map(&f).collect() })
                .collect(),
            frob_basis: OnceLock::new(),
        }
    }

    pub fn base_one(&self) -> &C {
        &self.one
    }

    pub fn exponents_of(&self, mut index: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.stages.len());
        for i in 0..self.stages.len() {
            let q = self.stage_exponent(i);
            out.push(index % q);
            index /= q;
        }
        out
    }

    pub fn index_of(&self, exps: &[usize]) -> usize {
        let mut idx = 0;
        let mut stride = 1;
        for (i, &e) in exps.iter().enumerate() {
            idx += e * stride;
            stride *= self.stage_exponent(i);
        }
        idx
    }

    pub fn zero(&self) -> TowerElem<C> {
        vec![self.one.zero_like(); self.degree()]
    }

    pub fn one(&self) -> TowerElem<C> {
        self.from_base(self.one.clone())
    }

    pub fn from_base(&self, c: C) -> TowerElem<C> {
        let mut v = self.zero();
        v[0] = c;
        v
    }

    pub fn basis_element(&self, index: usize) -> TowerElem<C> {
        let mut v = self.zero();
        v[index] = self.one.clone();
        v
    }

    /// The generator `Z_i`.
    pub fn generator(&self, i: usize) -> TowerElem<C> {
        let mut exps = vec![0; self.stages.len()];
        exps[i] = 1;
        if self.stage_exponent(i) == 1 {
            unreachable!("stage exponents are at least p");
        }
        self.basis_element(self.index_of(&exps))
    }

    /// `a_i` viewed as an element of the full tower.
    pub fn relation_element(&self, i: usize) -> TowerElem<C> {
        let mut v = self.stages[i].relation.clone();
        v.resize(self.degree(), self.one.zero_like());
        v
    }

    /// Embeds an element of stage `level` (its first `dim` coefficients).
    pub fn embed(&self, x: &[C]) -> TowerElem<C> {
        let mut v = x.to_vec();
        v.resize(self.degree(), self.one.zero_like());
        v
    }

    pub fn is_zero(&self, x: &[C]) -> bool {
        x.iter().all(Coeff::is_zero)
    }

    pub fn add(&self, x: &[C], y: &[C]) -> TowerElem<C> {
        x.iter().zip(y).map(|(a, b)| a.add(b)).collect()
    }

    pub fn sub(&self, x: &[C], y: &[C]) -> TowerElem<C> {
        x.iter().zip(y).map(|(a, b)| a.sub(b)).collect()
    }

    pub fn neg(&self, x: &[C]) -> TowerElem<C> {
        x.iter().map(Coeff::neg).collect()
    }

    pub fn scale(&self, x: &[C], c: &C) -> TowerElem<C> {
        x.iter()
            .map(|a| if a.is_zero() { a.clone() } else { a.mul(c) })
            .collect()
    }

    pub fn mul(&self, x: &[C], y: &[C]) -> TowerElem<C> {
        self.mul_at(self.stages.len(), x, y)
    }

    fn mul_at(&self, level: usize, x: &[C], y: &[C]) -> Vec<C> {
        if level == 0 {
            if x[0].is_zero() || y[0].is_zero() {
                return vec![x[0].zero_like()];
            }
            return vec![x[0].mul(&y[0])];
        }
        let d = self.dim_at(level - 1);
        let q = self.stage_exponent(level - 1);
        let zero_chunk = || vec![self.one.zero_like(); d];
        let chunk_zero = |c: &[C]| c.iter().all(Coeff::is_zero);
        let mut acc: Vec<Vec<C>> = vec![zero_chunk(); 2 * q - 1];
        for i in 0..q {
            let xi = &x[i * d..(i + 1) * d];
            if chunk_zero(xi) {
                continue;
            }
            for j in 0..q {
                let yj = &y[j * d..(j + 1) * d];
                if chunk_zero(yj) {
                    continue;
                }
                let prod = self.mul_at(level - 1, xi, yj);
                acc[i + j] = acc[i + j].iter().zip(&prod).map(|(a, b)| a.add(b)).collect();
            }
        }
        let relation = &self.stages[level - 1].relation;
        for k in (q..2 * q - 1).rev() {
            if chunk_zero(&acc[k]) {
                continue;
            }
            let top = std::mem::replace(&mut acc[k], zero_chunk());
            let reduced = self.mul_at(level - 1, &top, relation);
            acc[k - q] = acc[k - q].iter().zip(&reduced).map(|(a, b)| a.add(b)).collect();
        }
        acc.truncate(q);
        acc.into_iter().flatten().collect()
    }

    fn frob_basis(&self) -> &[TowerElem<C>] {
        self.frob_basis.get_or_init(|| {
            let n = self.degree();
            let p = self.p as usize;
            // Z_i^p for each generator, then products over exponent vectors
            let gen_p: Vec<TowerElem<C>> = (0..self.stages.len())
                .map(|i| {
                    let g = self.generator(i);
                    (1..p).fold(g.clone(), |acc, _| self.mul(&acc, &g))
                })
                .collect();
            (0..n)
                .map(|idx| {
                    let exps = self.exponents_of(idx);
                    let mut acc = self.one();
                    for (i, &e) in exps.iter().enumerate() {
                        for _ in 0..e {
                            acc = self.mul(&acc, &gen_p[i]);
                        }
                    }
                    acc
                })
                .collect()
        })
    }

    /// `x^p = sum_e x_e^p Z^(p e)`.
    pub fn frobenius(&self, x: &[C]) -> TowerElem<C> {
        let basis = self.frob_basis();
        let mut out = self.zero();
        for (e, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cp = c.frobenius();
            for (o, b) in out.iter_mut().zip(&basis[e]) {
                if !b.is_zero() {
                    *o = o.add(&b.mul(&cp));
                }
            }
        }
        out
    }

    /// `x^n`, using Frobenius for the base-p digits of `n`.
    pub fn pow(&self, x: &[C], mut n: u64) -> TowerElem<C> {
        let p = self.p as u64;
        let mut acc = self.one();
        let mut cur = x.to_vec();
        while n > 0 {
            let digit = n % p;
            for _ in 0..digit {
                acc = self.mul(&acc, &cur);
            }
            n /= p;
            if n > 0 {
                cur = self.frobenius(&cur);
            }
        }
        acc
    }

    /// `x^(p^k)`.
    pub fn frobenius_iter(&self, x: &[C], k: u32) -> TowerElem<C> {
        (0..k).fold(x.to_vec(), |acc, _| self.frobenius(&acc))
    }

    /// Evaluates `sum_e x_e prod_i v_i^(e_i)` for values `v_i` of the generators
    /// in the coefficient ring.
    pub fn substitute(&self, x: &[C], values: &[C]) -> C {
        self.substitute_basis(x, &self.basis_values(values))
    }

    /// The images `prod_i v_i^(e_i)` of the monomial basis, for repeated
    /// [`Tower::substitute_basis`] calls.
    pub fn basis_values(&self, values: &[C]) -> Vec<C> {
        assert_eq!(values.len(), self.stages.len());
        let mut out = vec![values.first().map_or_else(|| self.one.clone(), |v| v.one_like())];
        for (i, v) in values.iter().enumerate() {
            // Z_i varies slowest among the first i + 1 generators
            let block = out.clone();
            for _ in 1..self.stage_exponent(i) {
                let start = out.len() - block.len();
                let next: Vec<C> = out[start..].iter().map(|c| c.mul(v)).collect();
                out.extend(next);
            }
        }
        out
    }

    pub fn substitute_basis(&self, x: &[C], basis: &[C]) -> C {
        let mut acc: Option<C> = None;
        for (c, b) in x.iter().zip(basis) {
            if c.is_zero() {
                continue;
            }
            let term = c.mul(b);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        acc.unwrap_or_else(|| x[0].zero_like())
    }
}
