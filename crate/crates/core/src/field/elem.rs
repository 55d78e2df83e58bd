//! Elements of the rational function field `k = F_p(t_0, t_1, ...)`.

use std::fmt;

use rand::Rng;

use super::poly::{Monomial, MultiPoly};
use super::FieldError;

/// A fraction `num / den` of polynomials.
///
/// Constructors reduce by the polynomial gcd and scale `den` to leading
/// coefficient 1, but equality is decided by cross-multiplication so it does
/// not depend on that normalization.
#[derive(Clone, Debug)]
pub struct FieldElem {
    num: MultiPoly,
    den: MultiPoly,
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        if self.num == other.num && self.den == other.den {
            return true;
        }
        if self.den.is_one() && other.den.is_one() {
            return false;
        }
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for FieldElem {}

impl FieldElem {
    pub fn zero(p: u32) -> Self {
        FieldElem { num: MultiPoly::zero(p), den: MultiPoly::one(p) }
    }

    pub fn one(p: u32) -> Self {
        Self::constant(1, p)
    }

    pub fn constant(c: u64, p: u32) -> Self {
        FieldElem { num: MultiPoly::constant(c, p), den: MultiPoly::one(p) }
    }

    /// The variable `t_i`.
    pub fn var(i: u32, p: u32) -> Self {
        FieldElem { num: MultiPoly::var(i, p), den: MultiPoly::one(p) }
    }

    pub fn from_poly(num: MultiPoly) -> Self {
        let p = num.p();
        FieldElem { num, den: MultiPoly::one(p) }
    }

    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, FieldError> {
        if num.p() != den.p() {
            return Err(FieldError::PrimeMismatch(num.p(), den.p()));
        }
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: MultiPoly, den: MultiPoly) -> Self {
        let p = num.p();
        if num.is_zero() {
            return Self::zero(p);
        }
        if den.is_constant() {
            let c = den.leading_coeff();
            let inv = super::prime::inv_mod(c, p);
            return FieldElem { num: num.scale(inv), den: MultiPoly::one(p) };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides numerator"),
                den.exact_div(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_coeff();
        if lc == 1 {
            FieldElem { num, den }
        } else {
            let inv = super::prime::inv_mod(lc, p);
            FieldElem { num: num.scale(inv), den: den.scale(inv) }
        }
    }

    pub fn p(&self) -> u32 {
        self.num.p()
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    /// Number of terms in numerator and denominator.
    pub fn size(&self) -> usize {
        self.num.terms().len() + self.den.terms().len()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, other: &FieldElem) -> FieldElem {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(self.num.add(&other.num));
        }
        if self.den == other.den {
            return Self::reduced(self.num.add(&other.num), self.den.clone());
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::reduced(num, self.den.mul(&other.den))
    }

    pub fn neg(&self) -> FieldElem {
        FieldElem { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &FieldElem) -> FieldElem {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FieldElem) -> FieldElem {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p());
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(self.num.mul(&other.num));
        }
        // cross-cancel before multiplying to keep both sides small
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let a = self.num.exact_div(&g1).expect("gcd divides");
        let d = other.den.exact_div(&g1).expect("gcd divides");
        let c = other.num.exact_div(&g2).expect("gcd divides");
        let b = self.den.exact_div(&g2).expect("gcd divides");
        let num = a.mul(&c);
        let den = b.mul(&d);
        let lc = den.leading_coeff();
        let inv = super::prime::inv_mod(lc, self.p());
        FieldElem { num: num.scale(inv), den: den.scale(inv) }
    }

    /// `sum a_i b_i`; polynomial inputs skip the per-step normalisation.
    pub fn sum_of_products<'a, I>(pairs: I, p: u32) -> FieldElem
    where
        I: IntoIterator<Item = (&'a FieldElem, &'a FieldElem)>,
    {
        let pairs: Vec<_> = pairs.into_iter().collect();
        if pairs.iter().all(|(a, b)| a.is_polynomial() && b.is_polynomial()) {
            return Self::from_poly(MultiPoly::sum_of_products(pairs.iter().map(|(a, b)| (&a.num, &b.num)), p));
        }
        pairs.iter().fold(Self::zero(p), |acc, (a, b)| acc.add(&a.mul(b)))
    }

    pub fn scale(&self, c: u32) -> FieldElem {
        FieldElem { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<FieldElem, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Self::reduced(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, n: u64) -> FieldElem {
        FieldElem { num: self.num.pow(n), den: self.den.pow(n) }
    }

    /// `x^(p^nu)`.
    pub fn frobenius(&self, nu: u32) -> FieldElem {
        FieldElem { num: self.num.frobenius(nu), den: self.den.frobenius(nu) }
    }

    /// The unique `y` with `y^(p^nu) = self`, if it exists in `k`.
    pub fn pth_root(&self, nu: u32) -> Option<FieldElem> {
        if nu == 0 {
            return Some(self.clone());
        }
        if let (Some(n), Some(d)) = (self.num.pth_root(nu), self.den.pth_root(nu)) {
            return Some(FieldElem { num: n, den: d });
        }
        // u/v = u v^(q-1) / v^q, so u/v is a q-th power iff u v^(q-1) is.
        let q = self.p().pow(nu) as u64;
        let w = self.num.mul(&self.den.pow(q - 1));
        let root = w.pth_root(nu)?;
        Some(Self::reduced(root, self.den.clone()))
    }

    /// Parses `terms` or `terms / terms`, e.g. `t0^2*t3 + 2*t1`.
    pub fn parse(s: &str, p: u32) -> Result<FieldElem, FieldError> {
        let s = s.trim();
        let s = strip_outer_parens(s);
        match split_top_level(s, '/') {
            Some((a, b)) => {
                let num = parse_poly(strip_outer_parens(a), p)?;
                let den = parse_poly(strip_outer_parens(b), p)?;
                FieldElem::new(num, den)
            }
            None => Ok(FieldElem::from_poly(parse_poly(s, p)?)),
        }
    }

    /// Exponent bound used for random test data: `p^2`, capped at 9 so that
    /// gcds of random fractions stay cheap for larger primes.
    pub fn random_exp_bound(p: u32) -> u32 {
        (p * p).min(9)
    }

    /// A sparse random polynomial with at most `max_terms` terms, exponents
    /// below `max_exp`, over the variables `t_0 .. t_{vars-1}`.
    pub fn random_poly<R: Rng + ?Sized>(
        rng: &mut R,
        p: u32,
        max_terms: usize,
        max_exp: u32,
        vars: u32,
    ) -> FieldElem {
        let nterms = rng.gen_range(1..=max_terms);
        let terms = (0..nterms).map(|_| {
            let nv = rng.gen_range(0..=2);
            let m = Monomial::from_pairs(
                (0..nv).map(|_| (rng.gen_range(0..vars), rng.gen_range(1..max_exp.max(2)))),
            );
            (m, rng.gen_range(1..p))
        });
        FieldElem::from_poly(MultiPoly::from_terms(terms, p))
    }

    /// A random nonzero element, occasionally a proper fraction.
    pub fn random_nonzero<R: Rng + ?Sized>(rng: &mut R, p: u32) -> FieldElem {
        loop {
            let num = Self::random_poly(rng, p, 4, Self::random_exp_bound(p), 8);
            if num.is_zero() {
                continue;
            }
            if rng.gen_bool(0.25) {
                let den = Self::random_poly(rng, p, 2, Self::random_exp_bound(p), 8);
                if !den.is_zero() {
                    return num.div(&den).expect("nonzero denominator");
                }
            }
            return num;
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{} / {}", Grouped(&self.num), Grouped(&self.den))
        }
    }
}

/// Brackets a polynomial with several terms so `a / b` reads unambiguously.
struct Grouped<'a>(&'a MultiPoly);

impl fmt::Display for Grouped<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.num_terms() > 1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

fn strip_outer_parens(s: &str) -> &str {
    let mut s = s.trim();
    while s.starts_with('(') && s.ends_with(')') && matching_close(s) == Some(s.len() - 1) {
        s = s[1..s.len() - 1].trim();
    }
    s
}

fn matching_close(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

fn split_top_level(s: &str, sep: char) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

fn parse_poly(s: &str, p: u32) -> Result<MultiPoly, FieldError> {
    let s = strip_outer_parens(s);
    if s.is_empty() {
        return Err(FieldError::Parse("empty expression".into()));
    }
    let mut acc = MultiPoly::zero(p);
    let mut sign_neg = false;
    let mut start = 0;
    let bytes: Vec<char> = s.chars().collect();
    let mut depth = 0i32;
    let mut pieces: Vec<(bool, String)> = Vec::new();
    for (i, &ch) in bytes.iter().enumerate() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 => {
                let piece: String = bytes[start..i].iter().collect();
                if !piece.trim().is_empty() {
                    pieces.push((sign_neg, piece));
                } else if i > 0 && !pieces.is_empty() {
                    return Err(FieldError::Parse(format!("dangling operator in `{s}`")));
                }
                sign_neg = ch == '-';
                start = i + 1;
            }
            _ => {}
        }
    }
    let piece: String = bytes[start..].iter().collect();
    if piece.trim().is_empty() {
        return Err(FieldError::Parse(format!("trailing operator in `{s}`")));
    }
    pieces.push((sign_neg, piece));
    for (neg, piece) in pieces {
        let t = parse_term(piece.trim(), p)?;
        acc = if neg { acc.sub(&t) } else { acc.add(&t) };
    }
    Ok(acc)
}

fn parse_term(s: &str, p: u32) -> Result<MultiPoly, FieldError> {
    if s.starts_with('(') {
        return parse_poly(s, p);
    }
    let mut coeff: u64 = 1;
    let mut pairs = Vec::new();
    for factor in s.split('*') {
        let factor = factor.trim();
        if let Some(rest) = factor.strip_prefix('t') {
            let (idx, exp) = match rest.split_once('^') {
                Some((i, e)) => (i, e),
                None => (rest, "1"),
            };
            let idx: u32 = idx
                .trim()
                .parse()
                .map_err(|_| FieldError::Parse(format!("bad variable `{factor}`")))?;
            let exp: u32 = exp
                .trim()
                .parse()
                .map_err(|_| FieldError::Parse(format!("bad exponent `{factor}`")))?;
            pairs.push((idx, exp));
        } else {
            let c: u64 = factor
                .parse()
                .map_err(|_| FieldError::Parse(format!("bad factor `{factor}`")))?;
            coeff = coeff * (c % p as u64) % p as u64;
        }
    }
    Ok(MultiPoly::term(Monomial::from_pairs(pairs), coeff, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(i: u32, p: u32) -> FieldElem {
        FieldElem::var(i, p)
    }

    #[test]
    fn char_two_cancellation() {
        assert!(t(0, 2).add(&t(0, 2)).is_zero());
    }

    #[test]
    fn inverse_cancellation() {
        let x = t(0, 5).div(&t(1, 5)).unwrap();
        assert_eq!(x.mul(&t(1, 5)), t(0, 5));
    }

    #[test]
    fn division_of_frobenius_sum() {
        let p = 2;
        let a = t(0, p).pow(2).add(&t(1, p).pow(2));
        let b = t(0, p).add(&t(1, p));
        let q = a.div(&b).unwrap();
        assert_eq!(q, b);
        assert!(q.is_polynomial());
        // oracle: cross-multiplication
        assert_eq!(b.mul(&b), a);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(t(0, 3).div(&FieldElem::zero(3)), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn frobenius_examples() {
        let p = 2;
        let s = t(0, p).add(&t(1, p));
        assert_eq!(s.frobenius(1), t(0, p).pow(2).add(&t(1, p).pow(2)));
        assert_eq!(s.frobenius(0), s);
        let f = t(0, p).div(&t(1, p)).unwrap().frobenius(2);
        assert_eq!(f, t(0, p).pow(4).div(&t(1, p).pow(4)).unwrap());
    }

    #[test]
    fn pth_root_examples() {
        let p = 2;
        let x = FieldElem::parse("t0^2*t1^2 + t2^2", p).unwrap();
        assert_eq!(x.pth_root(1), Some(FieldElem::parse("t0*t1 + t2", p).unwrap()));
        assert_eq!(t(0, p).pth_root(1), None);
    }

    #[test]
    fn pth_root_of_unnormalized_fraction() {
        let p = 3;
        // (t0^3 * t1) / t1 is a cube even though neither side is before cancelling
        let num = t(0, p).pow(3).mul(&t(1, p));
        let e = FieldElem { num: num.num().clone(), den: t(1, p).num().clone() };
        assert_eq!(e.pth_root(1), Some(t(0, p)));
    }

    #[test]
    fn equality_is_cross_multiplication() {
        let p = 3;
        let a = FieldElem { num: t(0, p).pow(2).num().clone(), den: t(0, p).num().clone() };
        assert_eq!(a, t(0, p));
    }

    #[test]
    fn parse_and_print() {
        let p = 5;
        let x = FieldElem::parse("t0^2*t3 + 2*t1", p).unwrap();
        assert_eq!(FieldElem::parse(&x.to_string(), p).unwrap(), x);
        let y = FieldElem::parse("t0 + 1 / t1 - 3", p).unwrap();
        assert_eq!(y, t(0, p).add(&FieldElem::one(p)).div(&t(1, p).sub(&FieldElem::constant(3, p))).unwrap());
        assert_eq!(FieldElem::parse(&y.to_string(), p).unwrap(), y);
        assert!(FieldElem::parse("t0 +", p).is_err());
        assert!(FieldElem::parse("1 / 0", p).is_err());
    }
}
