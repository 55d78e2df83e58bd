//! Towers over truncated power series and the reduction check.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::field::FieldElem;
use crate::series::Series;

use super::algebra::{Tower, TowerElem};
use super::fiber::{ArtinianAlgebra, InvariantTriple};
use super::{Check, TowerError, MAX_DEGREE};

/// A tower over `k[[T]]` with arithmetic mod `T^N`.
///
/// The relations are also kept at a higher input precision so that their
/// roots can be extracted without dropping below `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct CompletedTower {
    tower: Tower<Series>,
    precision: usize,
    lifted: Vec<(u32, Vec<Series>)>,
    designated: Option<Vec<Series>>,
}

impl CompletedTower {
    /// `relations[i]` has one coefficient per basis monomial of stage `i`, each at
    /// precision at least `p^(sum nu) * precision`.
    pub fn new(p: u32, relations: Vec<(u32, Vec<Series>)>, precision: usize) -> Result<Self, TowerError> {
        if precision == 0 {
            return Err(TowerError::PrecisionTooLow { needed: 1, available: 0 });
        }
        let mut degree = 1usize;
        for (i, (nu, rel)) in relations.iter().enumerate() {
            if *nu == 0 {
                return Err(TowerError::Invalid("adjunction exponent must be positive".into()));
            }
            if rel.len() != degree {
                return Err(TowerError::Invalid(format!("stage {i}: expected {degree} relation coefficients")));
            }
            if rel.iter().any(|c| c.p() != p) {
                return Err(TowerError::Invalid("characteristic mismatch".into()));
            }
            degree *= p.pow(*nu) as usize;
            if degree > MAX_DEGREE {
                return Err(TowerError::DegreeTooLarge(degree));
            }
        }
        let needed = degree * precision;
        let available = relations.iter().flat_map(|(_, r)| r).map(Series::precision).min().unwrap_or(usize::MAX);
        if available < needed {
            return Err(TowerError::PrecisionTooLow { needed, available });
        }
        let mut tower = Tower::trivial(p, Series::one(p, precision));
        for (nu, rel) in &relations {
            tower = tower.adjoin(*nu, rel.iter().map(|c| c.truncate(precision)).collect());
        }
        Ok(CompletedTower { tower, precision, lifted: relations, designated: None })
    }

    /// `k[[T]]` mod `T^N`.
    pub fn trivial(p: u32, precision: usize) -> Result<Self, TowerError> {
        Self::new(p, Vec::new(), precision)
    }

    pub fn with_designated_roots(mut self, roots: Vec<Series>) -> Self {
        assert_eq!(roots.len(), self.tower.num_gens());
        self.designated = Some(roots);
        self
    }

    /// Adds a stage; the relation must already be known to the new total precision.
    pub fn adjoin(&self, nu: u32, relation: Vec<Series>) -> Result<Self, TowerError> {
        let mut rels = self.lifted.clone();
        rels.push((nu, relation));
        Self::new(self.tower.p(), rels, self.precision)
    }

    pub fn tower(&self) -> &Tower<Series> {
        &self.tower
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn degree(&self) -> usize {
        self.tower.degree()
    }

    pub fn designated_roots(&self) -> Option<&[Series]> {
        self.designated.as_deref()
    }

    pub fn special_fiber(&self) -> ArtinianAlgebra {
        let p = self.tower.p();
        ArtinianAlgebra::new(self.tower.map(FieldElem::one(p), |c| c.coeff(0).clone()))
    }

    pub fn invariants(&self) -> Result<InvariantTriple, TowerError> {
        self.special_fiber().invariants()
    }

    /// Roots `b_i` of the relations: `b_i^(q_i) = a_i(b_1, ..., b_(i-1))`.
    pub fn roots(&self) -> Result<Vec<Series>, TowerError> {
        let mut roots: Vec<Series> = Vec::new();
        let mut partial = Tower::trivial(self.tower.p(), Series::one(self.tower.p(), 1));
        for (i, (nu, rel)) in self.lifted.iter().enumerate() {
            let image = if i == 0 {
                rel[0].clone()
            } else {
                let values: Vec<Series> = roots.clone();
                partial.substitute(rel, &values)
            };
            let b = image.pth_root(*nu).ok_or_else(|| {
                TowerError::RootMissing(format!("stage {i}: relation has no p^{nu}-th root in k[[T]]"))
            })?;
            if b.precision() < self.precision {
                return Err(TowerError::PrecisionTooLow { needed: self.precision, available: b.precision() });
            }
            roots.push(b);
            partial = partial.adjoin(*nu, vec![Series::zero(self.tower.p(), 1); partial.degree()]);
        }
        Ok(roots.into_iter().map(|b| b.truncate(self.precision)).collect())
    }

    /// `x(b_1, ..., b_r)`.
    pub fn substitute(&self, x: &[Series], roots: &[Series]) -> Series {
        self.tower.substitute(x, roots)
    }
}

/// Outcome of [`reduction_of_completion`]; all statements hold mod `T^N`.
#[derive(Clone, Debug, Serialize)]
pub struct ReductionReport {
    pub precision: usize,
    #[serde(skip)]
    pub roots: Vec<Series>,
    /// `Z_i - b_i` in the monomial basis.
    #[serde(skip)]
    pub nil_gens: Vec<TowerElem<Series>>,
    /// `(q_i, whether (Z_i - b_i)^(q_i - 1) is nonzero)`.
    pub nilpotency_orders: Vec<(usize, bool)>,
    pub checks: Vec<Check>,
}

impl ReductionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Locates the nilradical of the completed tower at `Z_i - b_i` and checks that
/// the quotient is `k[[T]]`.
///
/// Checks, each mod `T^N`:
/// - `(Z_i - b_i)^(q_i) = a_i - b_i^(q_i)` and every `Z_i - b_i` is killed by the full degree;
/// - the products `h_e = prod (Z_i - b_i)^(e_i)` are unitriangular against `Z^e`,
///   so they form a basis and those with `e != 0` span the ideal they generate;
/// - substituting `Z_i -> b_i` respects the relations, kills every `h_e` with
///   `e != 0` and commutes with multiplication by `Z_i` and by base elements on
///   samples (enough, as these generate `A` and the substitution is additive);
/// - `k[[T]] -> A -> A / nil` is the identity on sample series.
pub fn reduction_of_completion(a: &CompletedTower) -> Result<ReductionReport, TowerError> {
    let t = a.tower();
    let p = t.p();
    let n = a.precision();
    let deg = t.degree();
    let roots = a.roots()?;
    let mut checks = Vec::new();

    if let Some(designated) = a.designated_roots() {
        let agree = designated.iter().zip(&roots).all(|(d, b)| d.eq_mod(b));
        checks.push(Check::new("designated roots agree", agree, format!("mod T^{n}")));
    }

    let basis = t.basis_values(&roots);
    let eval = |x: &[Series]| t.substitute_basis(x, &basis);

    let nil_gens: Vec<TowerElem<Series>> = (0..t.num_gens())
        .map(|i| t.sub(&t.generator(i), &t.from_base(roots[i].clone())))
        .collect();

    let mut orders = Vec::new();
    let mut power_ok = true;
    let mut killed_ok = true;
    for (i, g) in nil_gens.iter().enumerate() {
        let q = t.stage_exponent(i);
        let expected = t.sub(&t.relation_element(i), &t.from_base(roots[i].pow(q as u64)));
        power_ok &= elem_eq(&t.pow(g, q as u64), &expected);
        killed_ok &= t.is_zero(&t.pow(g, deg as u64));
        orders.push((q, !t.is_zero(&t.pow(g, q as u64 - 1))));
    }
    checks.push(Check::new("(Z_i - b_i)^(q_i) = a_i - b_i^(q_i)", power_ok, format!("{} generators", nil_gens.len())));
    checks.push(Check::new("nil generators are nilpotent", killed_ok, format!("killed by exponent {deg}")));
    let sharp = orders.iter().all(|&(_, nonzero)| nonzero);
    checks.push(Check::new("nilpotency order is exactly q_i", sharp, format!("{orders:?}")));

    let relations_ok = (0..t.num_gens()).all(|i| {
        let q = t.stage_exponent(i) as u64;
        roots[i].pow(q).eq_mod(&eval(&t.relation_element(i)))
    });
    checks.push(Check::new("substitution respects relations", relations_ok, String::new()));

    let mut triangular = true;
    let mut in_kernel = true;
    let mut powers: Vec<Vec<TowerElem<Series>>> = Vec::new();
    for (i, g) in nil_gens.iter().enumerate() {
        let q = t.stage_exponent(i);
        let mut pw = vec![t.one()];
        for _ in 1..q {
            let last = pw.last().expect("nonempty").clone();
            pw.push(t.mul(&last, g));
        }
        powers.push(pw);
    }
    for idx in 0..deg {
        let exps = t.exponents_of(idx);
        let mut h = t.one();
        for (i, &e) in exps.iter().enumerate() {
            if e > 0 {
                h = t.mul(&h, &powers[i][e]);
            }
        }
        for (j, c) in h.iter().enumerate() {
            let other = t.exponents_of(j);
            let below = other.iter().zip(&exps).all(|(o, e)| o <= e);
            if j == idx {
                triangular &= c.sub(&Series::one(p, n)).is_zero();
            } else if !below {
                triangular &= c.is_zero();
            }
        }
        if idx != 0 {
            in_kernel &= eval(&h).is_zero();
        }
    }
    checks.push(Check::new("nil products are unitriangular", triangular, format!("{deg} basis elements")));
    checks.push(Check::new("substitution kills the nil ideal", in_kernel, String::new()));

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut multiplicative = true;
    let mut identity = true;
    for _ in 0..4 {
        // the Z_i generate A over k[[T]], so these products pin down every product
        let x: TowerElem<Series> = (0..deg).map(|_| Series::random(&mut rng, p, n, 3)).collect();
        let c = Series::random(&mut rng, p, n, 3);
        let ex = eval(&x);
        multiplicative &= eval(&t.mul(&x, &t.from_base(c.clone()))).eq_mod(&ex.mul(&c));
        for (i, b) in roots.iter().enumerate() {
            multiplicative &= eval(&t.mul(&x, &t.generator(i))).eq_mod(&ex.mul(b));
        }
        let s = Series::random(&mut rng, p, n, 6);
        identity &= eval(&t.from_base(s.clone())).eq_mod(&s);
    }
    checks.push(Check::new("substitution is multiplicative", multiplicative, "4 seeded samples against each generator".to_string()));
    checks.push(Check::new("k[[T]] -> A/nil is the identity", identity, "4 seeded samples".to_string()));

    Ok(ReductionReport { precision: n, roots, nil_gens, nilpotency_orders: orders, checks })
}

fn elem_eq(x: &[Series], y: &[Series]) -> bool {
    x.iter().zip(y).all(|(a, b)| a.eq_mod(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ModelRing, StreamElem};
    use crate::tower::ModelTower;

    #[test]
    fn reduction_of_nagata_square_root() {
        let p = 2;
        let z = StreamElem::nagata(p, 0);
        let a = ModelTower::new(ModelRing::new(p, 1).unwrap())
            .adjoin(StreamElem::frob(1, z.clone()), 1, Some(z.clone()))
            .unwrap();
        let c = a.completion(16).unwrap();
        let r = reduction_of_completion(&c).unwrap();
        assert!(r.passed(), "{:?}", r.checks);
        assert_eq!(r.roots[0], z.eval(16));
        let t = c.tower();
        let expected = t.sub(&t.generator(0), &t.from_base(z.eval(16)));
        assert_eq!(r.nil_gens, vec![expected]);
    }

    #[test]
    fn trivial_tower_reduces_to_itself() {
        let c = CompletedTower::trivial(3, 10).unwrap();
        let r = reduction_of_completion(&c).unwrap();
        assert!(r.nil_gens.is_empty());
        assert!(r.passed());
    }

    #[test]
    fn nested_tower_reduction() {
        let p = 2;
        let z = StreamElem::nagata(p, 0);
        let a = ModelTower::new(ModelRing::new(p, 2).unwrap())
            .adjoin(StreamElem::frob(2, z.clone()), 1, Some(StreamElem::frob(1, z.clone())))
            .unwrap()
            .adjoin_relation(vec![StreamElem::zero(p), StreamElem::one(p)], 1, Some(z.clone()))
            .unwrap();
        let c = a.completion(8).unwrap();
        let r = reduction_of_completion(&c).unwrap();
        assert!(r.passed(), "{:?}", r.checks);
        assert_eq!(c.invariants().unwrap(), a.invariants().unwrap());
    }

    #[test]
    fn missing_root_is_reported() {
        let p = 2;
        // Z^2 = T has no root
        let c = CompletedTower::new(p, vec![(1, vec![Series::monomial(p, 1, 8)])], 4).unwrap();
        assert!(matches!(reduction_of_completion(&c), Err(TowerError::RootMissing(_))));
    }

    #[test]
    fn completion_commutes_with_adjoin() {
        let p = 3;
        let z = StreamElem::nagata(p, 0);
        let base = ModelTower::new(ModelRing::new(p, 1).unwrap());
        let a = base.adjoin(StreamElem::frob(1, z.clone()), 1, Some(z.clone())).unwrap();
        let w = StreamElem::nagata(p, 2);
        let rel = vec![StreamElem::frob(1, w.clone()), StreamElem::zero(p), StreamElem::zero(p)];
        let b = a.adjoin_relation(rel.clone(), 1, Some(w)).unwrap();
        let (n, m) = (36, 4);
        let direct = b.completion_to(n, m).unwrap();
        let stepwise = a
            .completion_to(n, m)
            .unwrap()
            .adjoin(1, rel.iter().map(|c| c.eval(n)).collect())
            .unwrap();
        assert_eq!(direct.tower(), stepwise.tower());
    }
}
