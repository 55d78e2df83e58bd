//! Heights, the filtration `B_n`, and purely inseparable equations over `R_mu`.
//!
//! An element `b` of `k[[T]]` has height `nu` if `nu` is the least exponent with
//! `b^(p^nu)` in `R_mu`. `B_n` is the ring of elements of height at most `n`;
//! their union is the p-radical closure of `R_mu` inside `k[[T]]`.

use serde::Serialize;
use thiserror::Error;

use crate::field::{FieldElem, PrimeFieldElem};
use crate::model::{in_model, MembershipStatus, ModelRing, StreamElem};

pub const DEFAULT_HEIGHT_BOUND: u32 = 4;
/// Bounds above this are clamped.
pub const MAX_HEIGHT_BOUND: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PradicalError {
    #[error("polynomial must have degree at least 1 with nonzero leading coefficient")]
    Degenerate,
    #[error("undecidable coefficients: {0}")]
    UndecidableCoefficients(String),
    #[error("the candidate does not satisfy the equation mod T^{0}")]
    NotARoot(usize),
    #[error("characteristic mismatch")]
    PrimeMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum HeightStatus {
    Finite(u32),
    ExceedsBound(u32),
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeightStep {
    pub exponent: u32,
    pub status: MembershipStatus,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeightResult {
    pub status: HeightStatus,
    /// Verdicts for `b, b^p, b^(p^2), ...` up to the deciding exponent.
    pub evidence: Vec<HeightStep>,
}

/// Least `nu <= bound` with `b^(p^nu)` in `R_mu`.
pub fn height(b: &StreamElem, ring: &ModelRing, bound: u32) -> HeightResult {
    let bound = bound.min(MAX_HEIGHT_BOUND);
    let mut evidence = Vec::new();
    for nu in 0..=bound {
        let x = if nu == 0 { b.clone() } else { StreamElem::frob(nu, b.clone()) };
        let v = in_model(&x, ring);
        evidence.push(HeightStep { exponent: nu, status: v.status, witness: v.summary() });
        match v.status {
            MembershipStatus::Yes => return HeightResult { status: HeightStatus::Finite(nu), evidence },
            MembershipStatus::Unknown => return HeightResult { status: HeightStatus::Unknown, evidence },
            MembershipStatus::No => {}
        }
    }
    HeightResult { status: HeightStatus::ExceedsBound(bound), evidence }
}

/// Whether `b` lies in `B_n`.
pub fn filtration_member(b: &StreamElem, n: u32, ring: &ModelRing) -> MembershipStatus {
    match height(b, ring, n).status {
        HeightStatus::Finite(_) => MembershipStatus::Yes,
        HeightStatus::ExceedsBound(h) if h >= n => MembershipStatus::No,
        HeightStatus::ExceedsBound(_) | HeightStatus::Unknown => MembershipStatus::Unknown,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Zeroness {
    Zero,
    NonZero,
}

/// `f(X) = sum lambda_i X^i` with coefficients in `R_mu`.
#[derive(Debug, Clone)]
pub struct RPolynomial {
    ring: ModelRing,
    coeffs: Vec<StreamElem>,
    zeroness: Vec<Zeroness>,
}

impl RPolynomial {
    /// Checks that every coefficient is decided to lie in `R_mu`, that each is
    /// decided zero or nonzero, and that the leading one is nonzero.
    pub fn new(coeffs: Vec<StreamElem>, ring: &ModelRing) -> Result<Self, PradicalError> {
        if coeffs.len() < 2 {
            return Err(PradicalError::Degenerate);
        }
        let mut zeroness = Vec::with_capacity(coeffs.len());
        for (i, c) in coeffs.iter().enumerate() {
            if c.p() != ring.p() {
                return Err(PradicalError::PrimeMismatch);
            }
            let z = match c.as_polynomial() {
                Some(cs) if cs.iter().all(FieldElem::is_zero) => Zeroness::Zero,
                Some(_) => Zeroness::NonZero,
                None if !c.eval(ring.precision()).is_zero() => Zeroness::NonZero,
                None => {
                    return Err(PradicalError::UndecidableCoefficients(format!(
                        "coefficient {i} vanishes mod T^{} but is not certified zero",
                        ring.precision()
                    )))
                }
            };
            if z == Zeroness::NonZero {
                let v = in_model(c, ring);
                if !v.is_yes() {
                    return Err(PradicalError::UndecidableCoefficients(format!(
                        "coefficient {i} is not decided to lie in R ({})",
                        v.summary()
                    )));
                }
            }
            zeroness.push(z);
        }
        if zeroness.last() == Some(&Zeroness::Zero) {
            return Err(PradicalError::Degenerate);
        }
        Ok(RPolynomial { ring: ring.clone(), coeffs, zeroness })
    }

    pub fn ring(&self) -> &ModelRing {
        &self.ring
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[StreamElem] {
        &self.coeffs
    }

    pub fn leading(&self) -> &StreamElem {
        self.coeffs.last().expect("degree at least 1")
    }

    /// `f(b)` mod `T^N`.
    pub fn evaluate(&self, b: &StreamElem, precision: usize) -> crate::series::Series {
        let bs = b.eval(precision);
        let mut acc = crate::series::Series::zero(self.ring.p(), precision);
        let nonzero = self.zeroness.iter().filter(|&&z| z == Zeroness::NonZero).count();
        if 2 * nonzero > self.coeffs.len() {
            for c in self.coeffs.iter().rev() {
                acc = acc.mul(&bs).add(&c.eval(precision));
            }
            return acc;
        }
        // sparse: `pow` turns p-power exponents into Frobenius twists
        for (k, c) in self.coeffs.iter().enumerate().filter(|&(k, _)| self.zeroness[k] == Zeroness::NonZero) {
            acc = acc.add(&c.eval(precision).mul(&bs.pow(k as u64)));
        }
        acc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InseparabilityVerdict {
    /// `f = c (X^(p^nu) - beta)^m` over the fraction field; `m = 1` unless the
    /// degree has a prime-to-p part.
    PurelyInseparable { nu: u32, m: usize },
    NotPurelyInseparable,
}

/// Decides whether `f` has exactly one root in an algebraic closure of `Frac(R)`.
///
/// With `p^nu` the largest power such that `f = g(X^(p^nu))` and `m = deg g`,
/// `f` is purely inseparable iff `g = c (X - beta)^m`. That forces `p ∤ m`
/// (otherwise `g` would lie in `F[X^p]`) and `beta = -lambda_(m-1) / (m c)`, so
/// the test is the identity `lambda_k (m c)^(m-k) = c C(m,k) lambda_(m-1)^(m-k)`.
/// The identities are checked exactly on polynomial coefficients; other
/// coefficients are undecidable unless no identity is needed (`m = 1`).
pub fn detect_purely_inseparable(f: &RPolynomial) -> Result<InseparabilityVerdict, PradicalError> {
    let p = f.ring.p() as usize;
    let n = f.degree();
    let support: Vec<usize> = (0..=n).filter(|&i| f.zeroness[i] == Zeroness::NonZero).collect();
    let mut nu = 0u32;
    let mut q = 1usize;
    while support.iter().all(|&i| i % (q * p) == 0) && n % (q * p) == 0 {
        q *= p;
        nu += 1;
    }
    let m = n / q;
    if m == 1 {
        return Ok(InseparabilityVerdict::PurelyInseparable { nu, m });
    }
    if m % p == 0 {
        return Ok(InseparabilityVerdict::NotPurelyInseparable);
    }
    let g: Vec<Vec<FieldElem>> = (0..=m)
        .map(|i| {
            f.coeffs[i * q].as_polynomial().ok_or_else(|| {
                PradicalError::UndecidableCoefficients(format!(
                    "coefficient {} has no exact representation",
                    i * q
                ))
            })
        })
        .collect::<Result<_, _>>()?;
    let pf = f.ring.p();
    let c = &g[m];
    let mc = poly_scale(c, m as u64, pf);
    let lam = &g[m - 1];
    for (k, gk) in g.iter().enumerate().take(m - 1) {
        let lhs = poly_mul(gk, &poly_pow(&mc, (m - k) as u64, pf), pf);
        let rhs = poly_scale(&poly_mul(c, &poly_pow(lam, (m - k) as u64, pf), pf), binomial_mod(m, k, pf), pf);
        if !poly_eq(&lhs, &rhs) {
            return Ok(InseparabilityVerdict::NotPurelyInseparable);
        }
    }
    Ok(InseparabilityVerdict::PurelyInseparable { nu, m })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RadicalVerdict {
    /// `c b` has height at most `nu`; `element` is its rule as JSON.
    Confirmed {
        #[serde(skip)]
        element: StreamElem,
        rule: String,
        nu: u32,
        certificate: String,
    },
    Refuted { reason: String },
    Unknown { reason: String },
}

/// For a root `b` of a purely inseparable `f` with leading coefficient `c`,
/// exhibits `c b` as an element of the p-radical closure.
///
/// Writing `f = c (X^(p^nu) - beta)^m` gives `c b^(p^nu) = -lambda_(n - p^nu) / m`,
/// hence `(c b)^(p^nu) = c^(p^nu - 1) (-lambda_(n - p^nu) / m)`. The membership
/// oracle is asked about `(c b)^(p^nu)` directly and, failing that, about this
/// product of members after checking the identity mod `T^N`.
pub fn radical_from_equation(f: &RPolynomial, b: &StreamElem, ring: &ModelRing) -> Result<RadicalVerdict, PradicalError> {
    if b.p() != ring.p() {
        return Err(PradicalError::PrimeMismatch);
    }
    let n = ring.precision();
    if !f.evaluate(b, n).is_zero() {
        return Err(PradicalError::NotARoot(n));
    }
    let (nu, m) = match detect_purely_inseparable(f)? {
        InseparabilityVerdict::PurelyInseparable { nu, m } => (nu, m),
        InseparabilityVerdict::NotPurelyInseparable => {
            return Ok(RadicalVerdict::Refuted { reason: "f is not purely inseparable".into() })
        }
    };
    let p = ring.p();
    let c = f.leading().clone();
    let cb = match c.as_polynomial() {
        Some(cs) if cs.len() == 1 && cs[0].is_one() => b.clone(),
        Some(cs) if cs.len() == 1 => StreamElem::scalar_mul(cs[0].clone(), b.clone()),
        _ => StreamElem::product(vec![c.clone(), b.clone()]),
    };
    let power = StreamElem::frob(nu, cb.clone());
    let direct = in_model(&power, ring);
    let confirmed = |certificate: String| RadicalVerdict::Confirmed { rule: cb.to_json(), element: cb.clone(), nu, certificate };
    match direct.status {
        MembershipStatus::Yes => return Ok(confirmed(format!("(cb)^(p^{nu}): {}", direct.summary()))),
        MembershipStatus::No => {
            return Ok(RadicalVerdict::Refuted { reason: format!("(cb)^(p^{nu}) decided outside R: {}", direct.summary()) })
        }
        MembershipStatus::Unknown => {}
    }
    let q = p.pow(nu) as usize;
    let lambda = f.coeffs()[f.degree() - q].clone();
    let inv_m = PrimeFieldElem::new((m % p as usize) as u64, p).inv().expect("p does not divide m");
    let scalar = FieldElem::constant(inv_m.value() as u64, p).neg();
    let mut factors: Vec<StreamElem> = std::iter::repeat(c).take(q - 1).collect();
    factors.push(StreamElem::scalar_mul(scalar, lambda));
    let certificate = if factors.len() == 1 { factors.pop().expect("one factor") } else { StreamElem::product(factors) };
    if !certificate.eval(n).eq_mod(&power.eval(n)) {
        return Ok(RadicalVerdict::Unknown { reason: "certificate identity fails numerically".into() });
    }
    let v = in_model(&certificate, ring);
    if v.is_yes() {
        Ok(confirmed(format!("c^(p^{nu}-1) * (-lambda/m) agrees mod T^{n}; {}", v.summary())))
    } else {
        Ok(RadicalVerdict::Unknown { reason: format!("certificate undecided: {}", v.summary()) })
    }
}

fn poly_mul(a: &[FieldElem], b: &[FieldElem], p: u32) -> Vec<FieldElem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![FieldElem::zero(p); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

fn poly_pow(a: &[FieldElem], e: u64, p: u32) -> Vec<FieldElem> {
    (0..e).fold(vec![FieldElem::one(p)], |acc, _| poly_mul(&acc, a, p))
}

fn poly_scale(a: &[FieldElem], s: u64, p: u32) -> Vec<FieldElem> {
    let s = (s % p as u64) as u32;
    a.iter().map(|x| x.scale(s)).collect()
}

fn poly_eq(a: &[FieldElem], b: &[FieldElem]) -> bool {
    let len = a.len().max(b.len());
    (0..len).all(|i| {
        let x = a.get(i).filter(|x| !x.is_zero());
        let y = b.get(i).filter(|y| !y.is_zero());
        match (x, y) {
            (None, None) => true,
            (Some(x), Some(y)) => x == y,
            _ => false,
        }
    })
}

fn binomial_mod(n: usize, k: usize, p: u32) -> u64 {
    // Lucas' theorem
    let p = p as usize;
    let (mut n, mut k) = (n, k);
    let mut acc = 1u64;
    while n > 0 || k > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return 0;
        }
        let mut c = 1u64;
        for i in 0..ki {
            c = c * (ni - i) as u64 / (i + 1) as u64;
        }
        acc = acc * (c % p as u64) % p as u64;
        n /= p;
        k /= p;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u32, mu: u32) -> ModelRing {
        ModelRing::new(p, mu).unwrap()
    }

    fn konst(c: FieldElem) -> StreamElem {
        StreamElem::constant(c)
    }

    #[test]
    fn heights_of_nagata_stream() {
        let p = 2;
        let z = StreamElem::nagata(p, 0);
        for mu in 1..=3 {
            let h = height(&z, &ring(p, mu), DEFAULT_HEIGHT_BOUND);
            assert_eq!(h.status, HeightStatus::Finite(mu));
            assert_eq!(h.evidence.len(), mu as usize + 1);
        }
        let poly = StreamElem::polynomial(p, vec![FieldElem::var(0, p), FieldElem::one(p)]);
        assert_eq!(height(&poly, &ring(p, 2), 4).status, HeightStatus::Finite(0));
    }

    #[test]
    fn bound_and_unknown() {
        let p = 2;
        let z = StreamElem::nagata(p, 0);
        assert_eq!(height(&z, &ring(p, 3), 2).status, HeightStatus::ExceedsBound(2));
        let zz = StreamElem::sum(vec![z.clone(), StreamElem::nagata(p, 1)]);
        assert_eq!(height(&zz, &ring(p, 2), 4).status, HeightStatus::Unknown);
    }

    #[test]
    fn filtration_levels() {
        let p = 2;
        let z = StreamElem::nagata(p, 0);
        assert_eq!(filtration_member(&z, 0, &ring(p, 1)), MembershipStatus::No);
        assert_eq!(filtration_member(&z, 1, &ring(p, 1)), MembershipStatus::Yes);
        assert_eq!(filtration_member(&z, 1, &ring(p, 2)), MembershipStatus::No);
        assert_eq!(filtration_member(&z, 20, &ring(p, 2)), MembershipStatus::Yes);
        let r = konst(FieldElem::var(3, p));
        assert_eq!(filtration_member(&r, 0, &ring(p, 1)), MembershipStatus::Yes);
    }

    #[test]
    fn detects_inseparable_equations() {
        let p = 2;
        let r = ring(p, 1);
        let z = StreamElem::nagata(p, 0);
        let a = StreamElem::frob(1, z.clone());
        let f = RPolynomial::new(vec![a.clone(), StreamElem::zero(p), StreamElem::one(p)], &r).unwrap();
        assert_eq!(detect_purely_inseparable(&f).unwrap(), InseparabilityVerdict::PurelyInseparable { nu: 1, m: 1 });
        let g = RPolynomial::new(vec![StreamElem::zero(p), StreamElem::one(p), StreamElem::one(p)], &r).unwrap();
        assert_eq!(detect_purely_inseparable(&g).unwrap(), InseparabilityVerdict::NotPurelyInseparable);
        let t0 = FieldElem::var(0, p);
        let scaled = RPolynomial::new(
            vec![StreamElem::scalar_mul(t0.clone(), a), StreamElem::zero(p), konst(t0)],
            &r,
        )
        .unwrap();
        assert_eq!(detect_purely_inseparable(&scaled).unwrap(), InseparabilityVerdict::PurelyInseparable { nu: 1, m: 1 });
    }

    #[test]
    fn prime_to_p_part() {
        // (X - t0)^3 = X^3 - t0 X^2 + t0^2 X - t0^3 over F_2: one root, m = 3
        let p = 2;
        let r = ring(p, 1);
        let t0 = FieldElem::var(0, p);
        let c = |x: FieldElem| konst(x);
        let f = RPolynomial::new(vec![c(t0.pow(3)), c(t0.pow(2)), c(t0.clone()), c(FieldElem::one(p))], &r).unwrap();
        assert_eq!(detect_purely_inseparable(&f).unwrap(), InseparabilityVerdict::PurelyInseparable { nu: 0, m: 3 });
        // X^3 + t0 X^2 + X + t0^3 has distinct roots
        let g = RPolynomial::new(vec![c(t0.pow(3)), c(FieldElem::one(p)), c(t0), c(FieldElem::one(p))], &r).unwrap();
        assert_eq!(detect_purely_inseparable(&g).unwrap(), InseparabilityVerdict::NotPurelyInseparable);
    }

    #[test]
    fn rejects_degenerate_polynomials() {
        let p = 3;
        let r = ring(p, 1);
        assert!(matches!(RPolynomial::new(vec![StreamElem::one(p)], &r), Err(PradicalError::Degenerate)));
        assert!(matches!(
            RPolynomial::new(vec![StreamElem::one(p), StreamElem::zero(p)], &r),
            Err(PradicalError::Degenerate)
        ));
        let z = StreamElem::nagata(p, 0);
        assert!(matches!(
            RPolynomial::new(vec![z, StreamElem::one(p)], &r),
            Err(PradicalError::UndecidableCoefficients(_))
        ));
    }

    #[test]
    fn radicals_from_equations() {
        let p = 2;
        let r = ring(p, 1);
        let z = StreamElem::nagata(p, 0);
        let a = StreamElem::frob(1, z.clone());
        let f = RPolynomial::new(vec![a.neg(), StreamElem::zero(p), StreamElem::one(p)], &r).unwrap();
        match radical_from_equation(&f, &z, &r).unwrap() {
            RadicalVerdict::Confirmed { element, nu, .. } => {
                assert_eq!(element, z);
                assert_eq!(nu, 1);
            }
            other => panic!("{other:?}"),
        }
        let off = StreamElem::sum(vec![z.clone(), StreamElem::t_power(p, 1)]);
        assert!(matches!(radical_from_equation(&f, &off, &r), Err(PradicalError::NotARoot(_))));

        let t0 = FieldElem::var(0, p);
        let g = RPolynomial::new(
            vec![StreamElem::scalar_mul(t0.clone(), a).neg(), StreamElem::zero(p), konst(t0.clone())],
            &r,
        )
        .unwrap();
        match radical_from_equation(&g, &z, &r).unwrap() {
            RadicalVerdict::Confirmed { element, nu, .. } => {
                assert_eq!(element, StreamElem::scalar_mul(t0, z));
                assert_eq!(nu, 1);
                assert_eq!(height(&element, &r, 4).status, HeightStatus::Finite(1));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lucas_binomials() {
        assert_eq!(binomial_mod(3, 1, 2), 1);
        assert_eq!(binomial_mod(4, 2, 2), 0);
        assert_eq!(binomial_mod(6, 3, 5), 0);
        assert_eq!(binomial_mod(7, 2, 5), 1);
    }
}
