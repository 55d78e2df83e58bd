//! Truncated power series over `k`: elements of `k[[T]]` known modulo `T^N`.
//!
//! Every result carries the precision it is actually determined to. Binary
//! operations use the smaller input precision.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::field::{FieldElem, FieldError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series is not a unit (constant term vanishes)")]
    NotAUnit,
    #[error("series parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Outcome of [`Series::valuation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(usize),
    /// All stored coefficients vanish.
    PrecisionExceeded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
}

/// `c_0 + c_1 T + ... + c_{N-1} T^{N-1} + O(T^N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    p: u32,
    coeffs: Vec<FieldElem>,
}

impl Series {
    pub fn zero(p: u32, precision: usize) -> Self {
        assert!(precision > 0, "series precision must be positive");
        Series { p, coeffs: vec![FieldElem::zero(p); precision] }
    }

    pub fn one(p: u32, precision: usize) -> Self {
        Self::constant(FieldElem::one(p), precision)
    }

    pub fn constant(c: FieldElem, precision: usize) -> Self {
        let mut s = Self::zero(c.p(), precision);
        s.coeffs[0] = c;
        s
    }

    /// `T^k` at the given precision (zero if `k >= precision`).
    pub fn monomial(p: u32, k: usize, precision: usize) -> Self {
        let mut s = Self::zero(p, precision);
        if k < precision {
            s.coeffs[k] = FieldElem::one(p);
        }
        s
    }

    /// Pads with zeros or truncates `coeffs` to `precision`.
    pub fn from_coeffs(p: u32, mut coeffs: Vec<FieldElem>, precision: usize) -> Self {
        assert!(precision > 0, "series precision must be positive");
        coeffs.resize(precision, FieldElem::zero(p));
        Series { p, coeffs }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &FieldElem {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElem::is_zero)
    }

    pub fn truncate(&self, precision: usize) -> Series {
        assert!(precision > 0 && precision <= self.precision(), "cannot raise precision by truncation");
        Series { p: self.p, coeffs: self.coeffs[..precision].to_vec() }
    }

    /// Equality modulo `T^min(N, N')`.
    pub fn eq_mod(&self, other: &Series) -> bool {
        let n = self.precision().min(other.precision());
        self.coeffs[..n] == other.coeffs[..n]
    }

    pub fn add(&self, other: &Series) -> Series {
        let n = self.precision().min(other.precision());
        let coeffs = (0..n).map(|i| self.coeffs[i].add(&other.coeffs[i])).collect();
        Series { p: self.p, coeffs }
    }

    pub fn sub(&self, other: &Series) -> Series {
        let n = self.precision().min(other.precision());
        let coeffs = (0..n).map(|i| self.coeffs[i].sub(&other.coeffs[i])).collect();
        Series { p: self.p, coeffs }
    }

    pub fn neg(&self) -> Series {
        Series { p: self.p, coeffs: self.coeffs.iter().map(FieldElem::neg).collect() }
    }

    pub fn mul(&self, other: &Series) -> Series {
        let n = self.precision().min(other.precision());
        let lhs: Vec<usize> = (0..n).filter(|&i| !self.coeffs[i].is_zero()).collect();
        let rhs: Vec<usize> = (0..n).filter(|&j| !other.coeffs[j].is_zero()).collect();
        let coeffs = (0..n)
            .map(|k| {
                let pairs = lhs
                    .iter()
                    .take_while(|&&i| i <= k)
                    .filter(|&&i| rhs.binary_search(&(k - i)).is_ok())
                    .map(|&i| (&self.coeffs[i], &other.coeffs[k - i]));
                FieldElem::sum_of_products(pairs, self.p)
            })
            .collect();
        Series { p: self.p, coeffs }
    }

    pub fn scale(&self, c: &FieldElem) -> Series {
        Series { p: self.p, coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect() }
    }

    /// Multiplies by `T^k`, keeping the precision.
    pub fn shift(&self, k: usize) -> Series {
        let n = self.precision();
        let mut coeffs = vec![FieldElem::zero(self.p); n];
        for i in 0..n.saturating_sub(k) {
            coeffs[i + k] = self.coeffs[i].clone();
        }
        Series { p: self.p, coeffs }
    }

    pub fn pow(&self, mut e: u64) -> Series {
        let p = self.p as u64;
        let mut base = self.clone();
        let mut acc = Series::one(self.p, self.precision());
        while e > 0 {
            if e % p == 0 {
                base = base.frobenius(1);
                e /= p;
            } else {
                acc = acc.mul(&base);
                e -= 1;
            }
        }
        acc
    }

    /// `a^{-1}` modulo `T^N`.
    pub fn invert(&self) -> Result<Series, SeriesError> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(SeriesError::NotAUnit);
        }
        let inv0 = c0.inv()?;
        let n = self.precision();
        let mut out = vec![FieldElem::zero(self.p); n];
        out[0] = inv0.clone();
        let nz: Vec<usize> = (1..n).filter(|&j| !self.coeffs[j].is_zero()).collect();
        for i in 1..n {
            let mut acc = FieldElem::zero(self.p);
            for &j in &nz {
                if j > i {
                    break;
                }
                if !out[i - j].is_zero() {
                    acc = acc.add(&self.coeffs[j].mul(&out[i - j]));
                }
            }
            out[i] = acc.mul(&inv0).neg();
        }
        Ok(Series { p: self.p, coeffs: out })
    }

    pub fn valuation(&self) -> Valuation {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(i) => Valuation::Finite(i),
            None => Valuation::PrecisionExceeded,
        }
    }

    /// `a^(p^nu) = sum c_i^(p^nu) T^(i p^nu)` at the input precision.
    pub fn frobenius(&self, nu: u32) -> Series {
        self.frobenius_to(nu, self.precision())
    }

    /// Frobenius image truncated to `precision`, which may exceed the input's
    /// up to `p^nu` times its precision.
    pub fn frobenius_to(&self, nu: u32, precision: usize) -> Series {
        if nu == 0 {
            return self.truncate(precision.min(self.precision()));
        }
        let q = self.p.pow(nu) as usize;
        assert!(
            precision <= q * self.precision(),
            "frobenius image is only determined below T^(p^nu N)"
        );
        let mut coeffs = vec![FieldElem::zero(self.p); precision];
        for (i, c) in self.coeffs.iter().enumerate() {
            if i * q >= precision {
                break;
            }
            if !c.is_zero() {
                coeffs[i * q] = c.frobenius(nu);
            }
        }
        Series { p: self.p, coeffs }
    }

    /// Output precision of [`Series::pth_root`] for an input of precision `n`.
    pub fn pth_root_precision(n: usize, p: u32, nu: u32) -> usize {
        let q = p.pow(nu) as usize;
        n.div_ceil(q)
    }

    /// `b` with `b^(p^nu) = a`, at precision `ceil(N / p^nu)`.
    pub fn pth_root(&self, nu: u32) -> Option<Series> {
        if nu == 0 {
            return Some(self.clone());
        }
        let q = self.p.pow(nu) as usize;
        let mut coeffs = Vec::with_capacity(Self::pth_root_precision(self.precision(), self.p, nu));
        for (i, c) in self.coeffs.iter().enumerate() {
            if i % q == 0 {
                coeffs.push(c.pth_root(nu)?);
            } else if !c.is_zero() {
                return None;
            }
        }
        Some(Series { p: self.p, coeffs })
    }

    /// Random series with at most `max_nonzero` nonzero coefficients.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, p: u32, precision: usize, max_nonzero: usize) -> Series {
        let mut s = Series::zero(p, precision);
        let count = rng.gen_range(1..=max_nonzero.max(1));
        for _ in 0..count {
            let i = rng.gen_range(0..precision);
            s.coeffs[i] = FieldElem::random_poly(rng, p, 2, FieldElem::random_exp_bound(p), 8);
        }
        s
    }

    /// Random unit: nonzero constant term plus a few sparse monomial terms.
    pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, p: u32, precision: usize) -> Series {
        let mut s = Series::zero(p, precision);
        s.coeffs[0] = if rng.gen_bool(0.5) {
            FieldElem::constant(rng.gen_range(1..p) as u64, p)
        } else {
            FieldElem::random_poly(rng, p, 1, FieldElem::random_exp_bound(p), 8)
        };
        if s.coeffs[0].is_zero() {
            s.coeffs[0] = FieldElem::one(p);
        }
        for _ in 0..rng.gen_range(1..=3) {
            let i = rng.gen_range(1..precision.max(2)).min(precision - 1);
            if i > 0 {
                s.coeffs[i] = FieldElem::random_poly(rng, p, 1, FieldElem::random_exp_bound(p), 8);
            }
        }
        s
    }

    pub fn parse(s: &str, p: u32) -> Result<Series, SeriesError> {
        let mut coeffs: Vec<(usize, FieldElem)> = Vec::new();
        let mut precision = None;
        for piece in split_plus(s) {
            let piece = piece.trim();
            if piece.is_empty() {
                return Err(SeriesError::Parse(format!("empty term in `{s}`")));
            }
            if let Some(inner) = piece.strip_prefix("O(").and_then(|r| r.strip_suffix(')')) {
                let n = inner
                    .trim()
                    .strip_prefix('T')
                    .map(|r| r.trim().strip_prefix('^').unwrap_or("1"))
                    .ok_or_else(|| SeriesError::Parse(format!("bad order term `{piece}`")))?;
                precision = Some(
                    n.trim()
                        .parse::<usize>()
                        .map_err(|_| SeriesError::Parse(format!("bad order term `{piece}`")))?,
                );
                continue;
            }
            if piece.starts_with('(') {
                let close = matching_paren(piece)
                    .ok_or_else(|| SeriesError::Parse(format!("unbalanced `{piece}`")))?;
                let c = FieldElem::parse(&piece[1..close], p)?;
                let rest = piece[close + 1..].trim();
                let k = if rest.is_empty() {
                    0
                } else {
                    let r = rest
                        .strip_prefix('*')
                        .map(str::trim)
                        .and_then(|r| r.strip_prefix('T'))
                        .ok_or_else(|| SeriesError::Parse(format!("bad term `{piece}`")))?;
                    match r.trim().strip_prefix('^') {
                        Some(e) => e
                            .trim()
                            .parse()
                            .map_err(|_| SeriesError::Parse(format!("bad exponent `{piece}`")))?,
                        None if r.trim().is_empty() => 1,
                        None => return Err(SeriesError::Parse(format!("bad term `{piece}`"))),
                    }
                };
                coeffs.push((k, c));
            } else {
                coeffs.push((0, FieldElem::parse(piece, p)?));
            }
        }
        let precision = precision.ok_or_else(|| SeriesError::Parse("missing O(T^N)".into()))?;
        if precision == 0 {
            return Err(SeriesError::Parse("precision must be positive".into()));
        }
        let mut out = Series::zero(p, precision);
        for (k, c) in coeffs {
            if k >= precision {
                return Err(SeriesError::Parse(format!("term T^{k} beyond O(T^{precision})")));
            }
            out.coeffs[k] = out.coeffs[k].add(&c);
        }
        Ok(out)
    }
}

fn matching_paren(s: &str) -> Option<usize> {
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

/// Splits on top-level ` + ` separators only; signs inside coefficients stay put.
fn split_plus(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = s.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 if c.is_polynomial() => write!(f, "{c}")?,
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*T")?,
                _ => write!(f, "({c})*T^{i}")?,
            }
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "O(T^{})", self.precision())
    }
}

pub fn series_arith(a: &Series, b: &Series, op: SeriesOp) -> Series {
    match op {
        SeriesOp::Add => a.add(b),
        SeriesOp::Sub => a.sub(b),
        SeriesOp::Mul => a.mul(b),
    }
}
