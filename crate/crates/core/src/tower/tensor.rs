//! Purely inseparable field towers `B ⊂ C ⊂ k` with `B = k^(p^mu)`, and the
//! reducedness of `C ⊗_B C`.

use rand::Rng;
use serde::Serialize;

use crate::field::{p_span_rank, FieldElem};

use super::algebra::{Tower, TowerElem};
use super::fiber::ArtinianAlgebra;
use super::{Check, TowerError, MAX_DEGREE};

/// `C = B(c_1, ..., c_r)` inside `k`, presented as `B[Z]/(Z_i^(q_i) - a_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldTower {
    mu: u32,
    gens: Vec<FieldElem>,
    tower: Tower<FieldElem>,
}

impl FieldTower {
    /// `C = B = k^(p^mu)`.
    pub fn new(p: u32, mu: u32) -> Self {
        FieldTower { mu, gens: Vec::new(), tower: Tower::trivial(p, FieldElem::one(p)) }
    }

    pub fn p(&self) -> u32 {
        self.tower.p()
    }

    pub fn mu(&self) -> u32 {
        self.mu
    }

    pub fn gens(&self) -> &[FieldElem] {
        &self.gens
    }

    pub fn tower(&self) -> &Tower<FieldElem> {
        &self.tower
    }

    pub fn degree(&self) -> usize {
        self.tower.degree()
    }

    pub fn in_base(&self, x: &FieldElem) -> bool {
        x.pth_root(self.mu).is_some()
    }

    /// Adjoins `c` with `c^(p^nu)` in `B`.
    pub fn adjoin(&self, c: FieldElem, nu: u32) -> Result<Self, TowerError> {
        let mut relation = vec![FieldElem::zero(self.p()); self.degree()];
        relation[0] = c.pow(self.p().pow(nu) as u64);
        self.adjoin_relation(c, nu, relation)
    }

    /// Adjoins `c` with `c^(p^nu) = sum_e relation[e] c^e`, coefficients in `B`.
    pub fn adjoin_relation(&self, c: FieldElem, nu: u32, relation: Vec<FieldElem>) -> Result<Self, TowerError> {
        let p = self.p();
        if nu == 0 || relation.len() != self.degree() {
            return Err(TowerError::Invalid("malformed relation".into()));
        }
        if self.degree() * p.pow(nu) as usize > MAX_DEGREE {
            return Err(TowerError::DegreeTooLarge(self.degree() * p.pow(nu) as usize));
        }
        if let Some(stage) = relation.iter().position(|a| !self.in_base(a)) {
            return Err(TowerError::Invalid(format!("relation coefficient {stage} is not in k^(p^{})", self.mu)));
        }
        let lhs = c.pow(p.pow(nu) as u64);
        let rhs = if self.gens.is_empty() { relation[0].clone() } else { self.tower.substitute(&relation, &self.gens) };
        if lhs != rhs {
            return Err(TowerError::NotARoot { stage: self.gens.len() });
        }
        let mut gens = self.gens.clone();
        gens.push(c);
        Ok(FieldTower { mu: self.mu, gens, tower: self.tower.adjoin(nu, relation) })
    }

    /// The element `sum_e x_e c^e` of `k`.
    pub fn evaluate(&self, x: &[FieldElem]) -> FieldElem {
        if self.gens.is_empty() {
            return x[0].clone();
        }
        self.tower.substitute(x, &self.gens)
    }

    /// `[C : B]`, computed as the `k^(p^mu)`-rank of the monomials `c^e`.
    pub fn rank_over_base(&self) -> usize {
        let monomials: Vec<FieldElem> =
            (0..self.degree()).map(|i| self.evaluate(&self.tower.basis_element(i))).collect();
        p_span_rank(&monomials, self.mu)
    }

    /// Coordinates (in `B`) of a random element of `C`.
    pub fn random_coordinates<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<FieldElem> {
        let p = self.p();
        let mut x = vec![FieldElem::zero(p); self.degree()];
        for _ in 0..rng.gen_range(1..=3) {
            let e = rng.gen_range(0..self.degree());
            x[e] = FieldElem::random_poly(rng, p, 2, 3, 4).frobenius(self.mu);
        }
        x
    }
}

/// A random tower of rank `p` or `p^2` over `k^(p^mu)`.
///
/// Generators are `h^(p^(mu - nu))` with `h = t_v s + r`, `s, r` in `k^(p^nu)`,
/// which has degree `p^nu` over `B`. With `mu >= 2` the nested shape
/// `c_1 = h^p`, `c_2 = h` with `Z_2^p = Z_1` also occurs.
pub fn random_field_tower<R: Rng + ?Sized>(rng: &mut R, p: u32, mu: u32) -> FieldTower {
    assert!(mu >= 1);
    let gen = |rng: &mut R, v: u32, nu: u32| -> FieldElem {
        let s = FieldElem::random_poly(rng, p, 2, 3, 6).add(&FieldElem::one(p)).frobenius(nu);
        let s = if s.is_zero() { FieldElem::one(p) } else { s };
        let r = FieldElem::random_poly(rng, p, 2, 3, 6).frobenius(nu);
        FieldElem::var(v, p).mul(&s).add(&r).frobenius(mu - nu)
    };
    let base = FieldTower::new(p, mu);
    // rank p^2 towers have tensor squares of dimension p^4 over the base, so
    // larger primes only get single degree-p adjunctions
    let kinds = if p > 3 { 1 } else if mu >= 2 { 4 } else { 2 };
    let v1 = rng.gen_range(0..4);
    match rng.gen_range(0..kinds) {
        0 => base.adjoin(gen(rng, v1, 1), 1),
        1 => {
            let v2 = (v1 + 1 + rng.gen_range(0..3)) % 4;
            let c1 = gen(rng, v1, 1);
            let c2 = gen(rng, v2, 1);
            base.adjoin(c1, 1).and_then(|t| t.adjoin(c2, 1))
        }
        2 => base.adjoin(gen(rng, v1, 2), 2),
        _ => {
            let h = gen(rng, v1, 2);
            let c1 = h.frobenius(1);
            base.adjoin(c1, 1).and_then(|t| {
                let mut rel = vec![FieldElem::zero(p); t.degree()];
                rel[1] = FieldElem::one(p);
                t.adjoin_relation(h, 1, rel)
            })
        }
    }
    .expect("random generators satisfy their relations")
}

#[derive(Clone, Debug, Serialize)]
pub struct TensorReport {
    /// `[C : B]`.
    pub degree: usize,
    pub dim_over_base: usize,
    pub nil_dim_over_base: usize,
    pub reduced_dim_over_base: usize,
    pub checks: Vec<Check>,
}

impl TensorReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Checks that `C -> (C ⊗_B C)_red`, `c -> c ⊗ 1`, is bijective.
///
/// `C ⊗_B C = C[Y]/(Y_i^(q_i) - a_i)`, the second factor written in fresh
/// variables. Its nilradical is computed as a semilinear kernel after extending
/// scalars to `k`; since the quotient by `(Y_i - c_i)` is `k`, no new nilpotents
/// appear and dimensions over `C` and `k` agree. The multiplication map
/// `g: Y_i -> c_i` is the section: it kills the nilradical and `g(c ⊗ 1) = c`.
/// Membership in the nilradical is tested directly as `x^(p^m) = 0`.
pub fn tensor_square_reduced_check<R: Rng + ?Sized>(c: &FieldTower, rng: &mut R) -> TensorReport {
    let n = c.degree();
    let t = c.tower();
    let d = ArtinianAlgebra::new(t.clone());
    let mut checks = Vec::new();

    let rank = c.rank_over_base();
    checks.push(Check::new("[C:B] equals the tower rank", rank == n, format!("rank {rank}, degree {n}")));

    let nil = d.nilradical();
    checks.push(Check::new(
        "nilradical has codimension 1 over C",
        nil.len() + 1 == n,
        format!("dim nil = {}", nil.len()),
    ));

    let diffs: Vec<TowerElem<FieldElem>> = (0..t.num_gens())
        .map(|i| t.sub(&t.generator(i), &t.from_base(c.gens()[i].clone())))
        .collect();
    let basis_nil = nil.iter().all(|v| d.is_nilpotent(v));
    checks.push(Check::new("nilradical basis is nilpotent", basis_nil, format!("x^(p^{}) = 0", t.total_nu())));
    let diffs_nil = diffs.iter().all(|v| d.is_nilpotent(v));
    checks.push(Check::new("Y_i - c_i are nilpotent", diffs_nil, String::new()));

    let g = |x: &[FieldElem]| c.evaluate(x);
    let kills = nil.iter().all(|v| g(v).is_zero());
    checks.push(Check::new("multiplication map kills the nilradical", kills, String::new()));

    let mut section = true;
    let mut symmetric = true;
    for _ in 0..4 {
        let coords = c.random_coordinates(rng);
        let s = c.evaluate(&coords);
        let left = t.from_base(s.clone());
        section &= g(&left) == s;
        // 1 ⊗ s as a polynomial in Y coincides with s ⊗ 1 modulo nilpotents
        let diff = t.sub(&left, &coords);
        symmetric &= d.is_nilpotent(&diff);
    }
    checks.push(Check::new("g(c ⊗ 1) = c", section, "4 random elements".to_string()));
    checks.push(Check::new("c ⊗ 1 = 1 ⊗ c modulo nilpotents", symmetric, "4 random elements".to_string()));

    TensorReport {
        degree: n,
        dim_over_base: n * n,
        nil_dim_over_base: nil.len() * n,
        reduced_dim_over_base: (n - nil.len()) * n,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn k_over_its_squares() {
        let p = 2;
        let c = FieldTower::new(p, 1).adjoin(FieldElem::var(0, p), 1).unwrap();
        let r = tensor_square_reduced_check(&c, &mut ChaCha8Rng::seed_from_u64(1));
        assert!(r.passed(), "{:?}", r.checks);
        assert_eq!((r.dim_over_base, r.nil_dim_over_base, r.reduced_dim_over_base), (4, 2, 2));
    }

    #[test]
    fn trivial_tower() {
        let c = FieldTower::new(3, 1);
        let r = tensor_square_reduced_check(&c, &mut ChaCha8Rng::seed_from_u64(2));
        assert!(r.passed());
        assert_eq!(r.reduced_dim_over_base, 1);
    }

    #[test]
    fn rank_nine_over_p_squared_powers() {
        let p = 3;
        let c = FieldTower::new(p, 2)
            .adjoin(FieldElem::var(0, p), 2)
            .unwrap();
        let r = tensor_square_reduced_check(&c, &mut ChaCha8Rng::seed_from_u64(3));
        assert!(r.passed(), "{:?}", r.checks);
        assert_eq!((r.dim_over_base, r.reduced_dim_over_base), (81, 9));
    }

    #[test]
    fn rejects_relations_outside_base() {
        let p = 2;
        let base = FieldTower::new(p, 2);
        // t0^2 is not in k^4
        assert!(base.adjoin(FieldElem::var(0, p), 1).is_err());
    }

    #[test]
    fn random_towers_have_full_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for mu in 1..=2 {
            for _ in 0..4 {
                let c = random_field_tower(&mut rng, 2, mu);
                assert_eq!(c.rank_over_base(), c.degree());
            }
        }
    }
}
