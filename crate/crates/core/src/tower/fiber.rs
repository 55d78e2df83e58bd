//! Finite-dimensional algebras over `k` presented by towers.

use serde::Serialize;

use crate::field::linalg::{kernel, rref};
use crate::field::{FieldElem, MultiPoly};

use super::algebra::{Tower, TowerElem};
use super::TowerError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InvariantTriple {
    /// Ramification index: the length of the fiber ring.
    pub e: usize,
    /// Residual degree.
    pub f: usize,
    /// Degree (rank).
    pub n: usize,
}

/// A commutative unital `k`-algebra `k[Z]/(Z_i^(q_i) - a_i)` with `a_i` over `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ArtinianAlgebra {
    tower: Tower<FieldElem>,
}

impl ArtinianAlgebra {
    pub fn new(tower: Tower<FieldElem>) -> Self {
        ArtinianAlgebra { tower }
    }

    pub fn tower(&self) -> &Tower<FieldElem> {
        &self.tower
    }

    pub fn p(&self) -> u32 {
        self.tower.p()
    }

    pub fn dim(&self) -> usize {
        self.tower.degree()
    }

    pub fn mul(&self, x: &[FieldElem], y: &[FieldElem]) -> TowerElem<FieldElem> {
        self.tower.mul(x, y)
    }

    /// `e_i e_j` in the monomial basis.
    pub fn structure_constants(&self, i: usize, j: usize) -> TowerElem<FieldElem> {
        self.tower.mul(&self.tower.basis_element(i), &self.tower.basis_element(j))
    }

    /// Basis (in reduced echelon form) of the nilradical.
    ///
    /// `x^q = 0` with `q = p^m` at least the dimension.
    pub fn is_nilpotent(&self, x: &[FieldElem]) -> bool {
        self.tower.is_zero(&self.tower.frobenius_iter(x, self.tower.total_nu()))
    }

    /// Every nilpotent is killed by `x -> x^q`, `q = p^m` with `m` the total
    /// exponent, since `q` is at least the dimension. The map is `q`-semilinear:
    /// `(sum x_i e_i)^q = sum x_i^q v_i` with `v_i = e_i^q`. Clearing denominators
    /// in each coordinate and splitting polynomials into `t^b h_b^q` turns the
    /// equations into a linear system in the `x_i`.
    pub fn nilradical(&self) -> Vec<TowerElem<FieldElem>> {
        let n = self.dim();
        let p = self.p();
        let m = self.tower.total_nu();
        if m == 0 {
            return Vec::new();
        }
        let q = p.pow(m);
        let images: Vec<TowerElem<FieldElem>> =
            (0..n).map(|i| self.tower.frobenius_iter(&self.tower.basis_element(i), m)).collect();
        let mut rows: Vec<Vec<FieldElem>> = Vec::new();
        for j in 0..n {
            let column: Vec<&FieldElem> = images.iter().map(|v| &v[j]).collect();
            if column.iter().all(|c| c.is_zero()) {
                continue;
            }
            let lcm = column
                .iter()
                .filter(|c| !c.is_zero())
                .fold(MultiPoly::one(p), |acc, c| poly_lcm(&acc, c.den()));
            let mut by_class: std::collections::BTreeMap<_, Vec<FieldElem>> = Default::default();
            for (i, c) in column.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let cofactor = lcm.exact_div(c.den()).expect("lcm is a multiple");
                let w = c.num().mul(&cofactor);
                for (class, h) in crate::field::pspan::decompose_poly(&w, q) {
                    by_class
                        .entry(class)
                        .or_insert_with(|| vec![FieldElem::zero(p); n])[i] = h;
                }
            }
            rows.extend(by_class.into_values());
        }
        let mut basis = kernel(&rows, n, p);
        rref(&mut basis, n);
        basis
    }

    /// Basis of the span of `vectors`.
    fn span(&self, mut vectors: Vec<TowerElem<FieldElem>>) -> Vec<TowerElem<FieldElem>> {
        let n = self.dim();
        let r = rref(&mut vectors, n).len();
        vectors.truncate(r);
        vectors
    }

    /// Elements generating `ideal` as an ideal, chosen from its basis.
    fn ideal_generators(&self, ideal: &[TowerElem<FieldElem>]) -> Vec<TowerElem<FieldElem>> {
        let n = self.dim();
        let mut gens: Vec<TowerElem<FieldElem>> = Vec::new();
        let mut generated: Vec<TowerElem<FieldElem>> = Vec::new();
        for v in ideal {
            if crate::field::linalg::in_span(&generated, v) {
                continue;
            }
            gens.push(v.clone());
            let mut more = generated.clone();
            for b in 0..n {
                more.push(self.mul(v, &self.tower.basis_element(b)));
            }
            generated = self.span(more);
            if generated.len() == ideal.len() {
                break;
            }
        }
        gens
    }

    /// Dimensions of `m^i` for `i = 0, 1, ...` until zero, with `m` the nilradical.
    pub fn radical_filtration(&self) -> Result<Vec<usize>, TowerError> {
        let n = self.dim();
        let nil = self.nilradical();
        let mut dims = vec![n];
        if nil.is_empty() {
            dims.push(0);
            return Ok(dims);
        }
        let gens = self.ideal_generators(&nil);
        let mut current = nil;
        for _ in 0..=n {
            dims.push(current.len());
            if current.is_empty() {
                return Ok(dims);
            }
            let mut next = Vec::with_capacity(current.len() * gens.len());
            for x in &current {
                for g in &gens {
                    next.push(self.mul(x, g));
                }
            }
            current = self.span(next);
        }
        Err(TowerError::InvariantMismatch("radical powers do not reach zero".into()))
    }

    /// `(e, f, n)` with `e` the length, computed from the radical filtration.
    pub fn invariants(&self) -> Result<InvariantTriple, TowerError> {
        let n = self.dim();
        let dims = self.radical_filtration()?;
        let f = n - dims[1];
        if f == 0 {
            return Err(TowerError::InvariantMismatch("algebra is nilpotent".into()));
        }
        let mut e = 0;
        for w in dims.windows(2) {
            let layer = w[0] - w[1];
            if layer % f != 0 {
                return Err(TowerError::InvariantMismatch(format!(
                    "layer of dimension {layer} is not a multiple of f = {f}"
                )));
            }
            e += layer / f;
        }
        if e * f != n {
            return Err(TowerError::InvariantMismatch(format!("e = {e}, f = {f}, n = {n}")));
        }
        Ok(InvariantTriple { e, f, n })
    }
}

fn poly_lcm(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if b.is_one() {
        return a.clone();
    }
    if a.is_one() {
        return b.clone();
    }
    let g = a.gcd(b);
    a.exact_div(&g).expect("gcd divides").mul(b)
}
