//! Sparse multivariate polynomials over `F_p` in the variables `t_0, t_1, ...`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use smallvec::SmallVec;

use super::prime::{inv_mod, PrimeFieldElem};

/// A monomial `t_{i_1}^{e_1} ... t_{i_r}^{e_r}` stored as `(variable, exponent)`
/// pairs sorted by variable, exponents nonzero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[(u32, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(i: u32) -> Self {
        Self::from_pairs([(i, 1)])
    }

    /// Builds a monomial from arbitrary pairs; repeated variables are merged.
    pub fn from_pairs<I: IntoIterator<Item = (u32, u32)>>(pairs: I) -> Self {
        let mut v: SmallVec<[(u32, u32); 4]> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        v.sort_unstable();
        let mut out: SmallVec<[(u32, u32); 4]> = SmallVec::new();
        for (i, e) in v {
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 += e,
                _ => out.push((i, e)),
            }
        }
        Monomial(out)
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn degree_in(&self, var: u32) -> u32 {
        self.0
            .iter()
            .find(|&&(i, _)| i == var)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn max_var(&self) -> Option<u32> {
        self.0.last().map(|&(i, _)| i)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out: SmallVec<[(u32, u32); 4]> = SmallVec::new();
        let mut j = 0;
        for &(i, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < i {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == i {
                let f = other.0[j].1;
                if f > e {
                    return None;
                }
                if e > f {
                    out.push((i, e - f));
                }
                j += 1;
            } else {
                out.push((i, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    out.push((self.0[i].0, self.0[i].1.min(other.0[j].1)));
                    i += 1;
                    j += 1;
                }
            }
        }
        Monomial(out)
    }

    pub fn scale_exponents(&self, factor: u32) -> Monomial {
        Monomial(self.0.iter().map(|&(i, e)| (i, e * factor)).collect())
    }

    /// Splits `self = rest^q * remainder` with every exponent of `remainder` below `q`.
    pub fn split_mod(&self, q: u32) -> (Monomial, Monomial) {
        let mut rest = SmallVec::new();
        let mut rem = SmallVec::new();
        for &(i, e) in &self.0 {
            if e / q > 0 {
                rest.push((i, e / q));
            }
            if e % q > 0 {
                rem.push((i, e % q));
            }
        }
        (Monomial(rest), Monomial(rem))
    }

    /// Removes `var` from the monomial, returning its exponent.
    fn without(&self, var: u32) -> (u32, Monomial) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .filter(|&&(i, d)| {
                if i == var {
                    e = d;
                    false
                } else {
                    true
                }
            })
            .copied()
            .collect();
        (e, Monomial(rest))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, &(i, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "t{i}")?;
            } else {
                write!(f, "t{i}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial in `F_p[t_0, t_1, ...]`.
///
/// Terms are sorted by descending monomial and never carry a zero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    p: u32,
    terms: Vec<(Monomial, u32)>,
}

impl MultiPoly {
    pub fn zero(p: u32) -> Self {
        MultiPoly { p, terms: Vec::new() }
    }

    pub fn constant(c: u64, p: u32) -> Self {
        Self::term(Monomial::one(), c, p)
    }

    pub fn one(p: u32) -> Self {
        Self::constant(1, p)
    }

    pub fn var(i: u32, p: u32) -> Self {
        Self::term(Monomial::var(i), 1, p)
    }

    pub fn term(m: Monomial, c: u64, p: u32) -> Self {
        let c = (c % p as u64) as u32;
        if c == 0 {
            Self::zero(p)
        } else {
            MultiPoly { p, terms: vec![(m, c)] }
        }
    }

    /// Builds from unsorted terms, combining duplicates.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, u32)>>(terms: I, p: u32) -> Self {
        let mut acc: HashMap<Monomial, u32> = HashMap::new();
        for (m, c) in terms {
            let e = acc.entry(m).or_insert(0);
            *e = (*e + c % p) % p;
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MultiPoly { p, terms }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1 == 1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn constant_value(&self) -> Option<PrimeFieldElem> {
        if self.is_zero() {
            Some(PrimeFieldElem::new(0, self.p))
        } else if self.is_constant() {
            Some(PrimeFieldElem::new(self.terms[0].1 as u64, self.p))
        } else {
            None
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn max_var(&self) -> Option<u32> {
        self.terms.iter().filter_map(|(m, _)| m.max_var()).max()
    }

    /// Sorted list of the variables that occur.
    pub fn variables(&self) -> Vec<u32> {
        let mut vs: Vec<u32> = self.terms.iter().flat_map(|(m, _)| m.0.iter().map(|&(i, _)| i)).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn degree_in(&self, var: u32) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree_in(var)).max().unwrap_or(0)
    }

    /// Coefficient of the greatest monomial.
    pub fn leading_coeff(&self) -> u32 {
        self.terms.first().map(|&(_, c)| c).unwrap_or(0)
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.merge(other, 1)
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.merge(other, self.p - 1)
    }

    fn merge(&self, other: &MultiPoly, scale: u32) -> MultiPoly {
        debug_assert_eq!(self.p, other.p);
        let p = self.p;
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), b[j].1 * scale % p));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = (a[i].1 + b[j].1 * scale) % p;
                    if c != 0 {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), c * scale % p)));
        MultiPoly { p, terms: out }
    }

    pub fn neg(&self) -> MultiPoly {
        self.scale(self.p - 1)
    }

    pub fn scale(&self, c: u32) -> MultiPoly {
        let c = c % self.p;
        if c == 0 {
            return Self::zero(self.p);
        }
        MultiPoly {
            p: self.p,
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c % self.p)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: u32) -> MultiPoly {
        let c = c % self.p;
        if c == 0 {
            return Self::zero(self.p);
        }
        // the derived monomial order is not multiplicative, so re-sort
        let mut terms: Vec<_> = self
            .terms
            .iter()
            .map(|(n, d)| (n.mul(m), d * c % self.p))
            .collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MultiPoly { p: self.p, terms }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        if self.is_monomial() {
            return other.mul_monomial(&self.terms[0].0, self.terms[0].1);
        }
        if other.is_monomial() {
            return self.mul_monomial(&other.terms[0].0, other.terms[0].1);
        }
        let p = self.p as u64;
        // products collide a lot, so the full product count overestimates badly
        let mut acc: HashMap<Monomial, u64> =
            HashMap::with_capacity((self.terms.len() * other.terms.len()).min(1 << 16));
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                let e = acc.entry(m.mul(n)).or_insert(0);
                *e = (*e + (*c as u64) * (*d as u64)) % p;
            }
        }
        let mut terms: Vec<_> = acc
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(m, c)| (m, c as u32))
            .collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MultiPoly { p: self.p, terms }
    }

    /// `sum a_i b_i`, accumulated in one table instead of pairwise merges.
    pub fn sum_of_products<'a, I>(pairs: I, p: u32) -> MultiPoly
    where
        I: IntoIterator<Item = (&'a MultiPoly, &'a MultiPoly)>,
    {
        let p64 = p as u64;
        let mut acc: HashMap<Monomial, u64> = HashMap::new();
        for (a, b) in pairs {
            for (m, c) in &a.terms {
                for (n, d) in &b.terms {
                    let e = acc.entry(m.mul(n)).or_insert(0);
                    *e = (*e + (*c as u64) * (*d as u64)) % p64;
                }
            }
        }
        let mut terms: Vec<_> = acc
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(m, c)| (m, c as u32))
            .collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MultiPoly { p, terms }
    }

    pub fn pow(&self, mut n: u64) -> MultiPoly {
        let mut base = self.clone();
        let mut acc = Self::one(self.p);
        while n > 0 {
            if n % self.p as u64 == 0 {
                // x^(p k) = (x^p)^k and x^p is a cheap exponent scaling
                base = base.frobenius(1);
                n /= self.p as u64;
                continue;
            }
            acc = acc.mul(&base);
            n -= 1;
        }
        acc
    }

    /// `x^(p^nu)`: coefficients in `F_p` are fixed, exponents scale by `p^nu`.
    pub fn frobenius(&self, nu: u32) -> MultiPoly {
        if nu == 0 {
            return self.clone();
        }
        let q = self.p.pow(nu);
        MultiPoly {
            p: self.p,
            terms: self.terms.iter().map(|(m, c)| (m.scale_exponents(q), *c)).collect(),
        }
    }

    /// The `p^nu`-th root if every exponent is divisible by `p^nu`.
    pub fn pth_root(&self, nu: u32) -> Option<MultiPoly> {
        if nu == 0 {
            return Some(self.clone());
        }
        let q = self.p.pow(nu);
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let (root, rem) = m.split_mod(q);
            if !rem.is_one() {
                return None;
            }
            terms.push((root, *c));
        }
        Some(MultiPoly { p: self.p, terms })
    }

    /// Scales so that the leading coefficient is 1.
    pub fn monic(&self) -> MultiPoly {
        let lc = self.leading_coeff();
        if lc <= 1 {
            return self.clone();
        }
        self.scale(inv_mod(lc, self.p))
    }

    /// Monomial content: the gcd of all monomials.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else {
            return Monomial::one();
        };
        let mut g = first.clone();
        for (m, _) in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    /// Coefficients with respect to `var`, indexed by degree.
    pub fn to_univariate(&self, var: u32) -> Vec<MultiPoly> {
        let deg = self.degree_in(var) as usize;
        let mut buckets: Vec<Vec<(Monomial, u32)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.without(var);
            buckets[e as usize].push((rest, *c));
        }
        buckets
            .into_iter()
            .map(|mut t| {
                t.sort_unstable_by(|a, b| b.0.cmp(&a.0));
                MultiPoly { p: self.p, terms: t }
            })
            .collect()
    }

    pub fn from_univariate(coeffs: &[MultiPoly], var: u32, p: u32) -> MultiPoly {
        let mut terms = Vec::new();
        for (d, c) in coeffs.iter().enumerate() {
            let shift = Monomial::from_pairs([(var, d as u32)]);
            for (m, a) in &c.terms {
                terms.push((m.mul(&shift), *a));
            }
        }
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MultiPoly { p, terms }
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        assert!(!divisor.is_zero(), "exact_div by zero polynomial");
        if self.is_zero() {
            return Some(self.clone());
        }
        if divisor.is_constant() {
            return Some(self.scale(inv_mod(divisor.terms[0].1, self.p)));
        }
        if divisor.is_monomial() {
            let (dm, dc) = &divisor.terms[0];
            let inv = inv_mod(*dc, self.p);
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                terms.push((m.div(dm)?, c * inv % self.p));
            }
            terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
            return Some(MultiPoly { p: self.p, terms });
        }
        let var = self.max_var().max(divisor.max_var())?;
        let ddeg = divisor.degree_in(var);
        if ddeg == 0 {
            let mut out = Vec::new();
            for c in self.to_univariate(var) {
                out.push(c.exact_div(divisor)?);
            }
            return Some(Self::from_univariate(&out, var, self.p));
        }
        let dcoeffs = divisor.to_univariate(var);
        let dlead = dcoeffs.last().expect("nonzero divisor");
        let mut rem = self.clone();
        let mut quot = Self::zero(self.p);
        while !rem.is_zero() {
            let rdeg = rem.degree_in(var);
            if rdeg < ddeg {
                return None;
            }
            let rlead = rem.to_univariate(var).pop().expect("nonzero remainder");
            let qc = rlead.exact_div(dlead)?;
            let shift = Monomial::from_pairs([(var, rdeg - ddeg)]);
            let qterm = qc.mul_monomial(&shift, 1);
            rem = rem.sub(&qterm.mul(divisor));
            quot = quot.add(&qterm);
        }
        Some(quot)
    }

    /// Greatest common divisor, normalized to leading coefficient 1.
    pub fn gcd(&self, other: &MultiPoly) -> MultiPoly {
        let p = self.p;
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return Self::one(p);
        }
        if self.is_monomial() || other.is_monomial() {
            let g = self.monomial_content().gcd(&other.monomial_content());
            return Self::term(g, 1, p);
        }
        // Pull out the common monomial factor first; it keeps the recursion shallow.
        let ma = self.monomial_content();
        let mb = other.monomial_content();
        if !ma.is_one() || !mb.is_one() {
            let g = ma.gcd(&mb);
            let a = self.exact_div(&Self::term(ma, 1, p)).expect("content divides");
            let b = other.exact_div(&Self::term(mb, 1, p)).expect("content divides");
            return a.gcd(&b).mul_monomial(&g, 1).monic();
        }
        // A variable missing from one side cannot occur in the gcd, so the other
        // side may be replaced by its content in it. Otherwise run the PRS in the
        // shared variable of smallest degree.
        let (va, vb) = (self.variables(), other.variables());
        if let Some(&v) = vb.iter().find(|v| !va.contains(v)) {
            return self.gcd(&other.content_in(v));
        }
        if let Some(&v) = va.iter().find(|v| !vb.contains(v)) {
            return other.gcd(&self.content_in(v));
        }
        // deg_x gcd = 0 whenever some evaluation of the other variables keeps both
        // leading coefficients and gives coprime images; the gcd is then that of
        // the x-contents, which have fewer variables
        if let Some(&v) = va.iter().find(|&&v| self.coprime_image_in(other, v)) {
            return self.content_in(v).gcd(&other.content_in(v)).monic();
        }
        let var = *va
            .iter()
            .min_by_key(|&&v| self.degree_in(v).max(other.degree_in(v)))
            .expect("nonconstant");
        let ca = self.content_in(var);
        let cb = other.content_in(var);
        let c = ca.gcd(&cb);
        let mut a = self.exact_div(&ca).expect("content divides");
        let mut b = other.exact_div(&cb).expect("content divides");
        if a.degree_in(var) < b.degree_in(var) {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            let r = a.pseudo_rem(&b, var);
            if r.is_zero() {
                break;
            }
            if r.degree_in(var) == 0 {
                return c.monic();
            }
            a = b;
            b = r.primitive_in(var);
        }
        c.mul(&b.primitive_in(var)).monic()
    }

    /// Tries a few evaluations of every variable except `var` in `F_p` and
    /// reports whether one of them certifies `deg_var gcd(self, other) = 0`.
    fn coprime_image_in(&self, other: &MultiPoly, var: u32) -> bool {
        const ATTEMPTS: u64 = 4;
        let p = self.p as u64;
        let (da, db) = (self.degree_in(var) as usize, other.degree_in(var) as usize);
        for attempt in 0..ATTEMPTS {
            // cheap deterministic points; any point is sound, some are useless
            let point = |i: u32| (i as u64 * 0x9e37_79b9 + attempt * 0x7f4a_7c15 + 1) % p;
            let a = self.eval_except(var, &point);
            let b = other.eval_except(var, &point);
            if a.len() == da + 1 && b.len() == db + 1 && dense_gcd_degree(a, b, p) == 0 {
                return true;
            }
        }
        false
    }

    /// Dense univariate image in `var` after substituting `point(i)` for every
    /// other variable `t_i`; trailing zeros are trimmed.
    fn eval_except(&self, var: u32, point: &impl Fn(u32) -> u64) -> Vec<u64> {
        let p = self.p as u64;
        let mut out = vec![0u64; self.degree_in(var) as usize + 1];
        for (m, c) in &self.terms {
            let mut value = *c as u64;
            let mut e_var = 0;
            for &(i, e) in &m.0 {
                if i == var {
                    e_var = e as usize;
                } else {
                    value = value * super::prime::pow_mod(point(i) as u32, e as u64, self.p) as u64 % p;
                }
            }
            out[e_var] = (out[e_var] + value) % p;
        }
        while out.len() > 1 && *out.last().expect("nonempty") == 0 {
            out.pop();
        }
        out
    }

    /// Gcd of the coefficients with respect to `var`.
    fn content_in(&self, var: u32) -> MultiPoly {
        let mut g = Self::zero(self.p);
        for c in self.to_univariate(var).into_iter().rev() {
            if c.is_zero() {
                continue;
            }
            g = g.gcd(&c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn primitive_in(&self, var: u32) -> MultiPoly {
        let c = self.content_in(var);
        self.exact_div(&c).expect("content divides")
    }

    fn pseudo_rem(&self, divisor: &MultiPoly, var: u32) -> MultiPoly {
        let ddeg = divisor.degree_in(var);
        let dlead = divisor.to_univariate(var).pop().expect("nonzero divisor");
        let mut rem = self.clone();
        while !rem.is_zero() && rem.degree_in(var) >= ddeg {
            let rdeg = rem.degree_in(var);
            let rlead = rem.to_univariate(var).pop().expect("nonzero");
            let shift = Monomial::from_pairs([(var, rdeg - ddeg)]);
            rem = rem
                .mul(&dlead)
                .sub(&rlead.mul_monomial(&shift, 1).mul(divisor));
        }
        rem
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            match (m.is_one(), *c) {
                (true, c) => write!(f, "{c}")?,
                (false, 1) => write!(f, "{m}")?,
                (false, c) => write!(f, "{c}*{m}")?,
            }
        }
        Ok(())
    }
}

/// Degree of the gcd of two dense univariate polynomials over `F_p`
/// (coefficients low to high, leading coefficients nonzero).
fn dense_gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> usize {
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
            continue;
        }
        let inv = inv_mod(*b.last().expect("nonempty") as u32, p as u32) as u64;
        while a.len() >= b.len() {
            let f = a.last().expect("nonempty") * inv % p;
            let shift = a.len() - b.len();
            for (k, &c) in b.iter().enumerate() {
                a[shift + k] = (a[shift + k] + p - f * c % p) % p;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(i: u32) -> MultiPoly {
        MultiPoly::var(i, 2)
    }

    fn parse(s: &str, p: u32) -> MultiPoly {
        crate::field::FieldElem::parse(s, p).unwrap().num().clone()
    }

    #[test]
    fn gcd_finds_shared_factors() {
        let p = 3;
        let g = parse("t0 + t1", p);
        let a = g.mul(&parse("t0^2*t2 + 1", p));
        let b = g.mul(&parse("t1^3 + t2", p));
        assert_eq!(a.gcd(&b), g.monic());
        let h = parse("t0*t1 + 2", p).pow(3);
        assert_eq!(h.mul(&parse("t2 + t0", p)).gcd(&h.mul(&parse("t2^2 + 1", p))), h.monic());
    }

    #[test]
    fn gcd_of_high_degree_coprime_pair() {
        let p = 5;
        let a = parse("t5^13 + 4*t3^23 + 2*t0^21*t3^9 + t0^5*t5^2", p);
        let b = parse("4*t3^17*t5^12 + t0^14*t3^24", p);
        assert!(a.gcd(&b).is_one());
    }

    #[test]
    fn dense_gcd() {
        // (x + 1)(x + 2) and (x + 1) x over F_5
        assert_eq!(dense_gcd_degree(vec![2, 3, 1], vec![0, 1, 1], 5), 1);
        assert_eq!(dense_gcd_degree(vec![1, 1], vec![0, 1], 5), 0);
        assert_eq!(dense_gcd_degree(vec![1, 0, 1], vec![1, 1], 2), 1);
    }

    #[test]
    fn freshman_dream_in_char_two() {
        let x = t(0).add(&t(1));
        assert_eq!(x.mul(&x), t(0).mul(&t(0)).add(&t(1).mul(&t(1))));
        assert_eq!(x.frobenius(1), x.mul(&x));
    }

    #[test]
    fn gcd_of_shared_factor() {
        let p = 3;
        let a = MultiPoly::var(0, p).add(&MultiPoly::var(1, p));
        let b = MultiPoly::var(0, p).sub(&MultiPoly::var(2, p));
        let c = MultiPoly::var(1, p).mul(&MultiPoly::var(2, p)).add(&MultiPoly::one(p));
        let g = a.mul(&b).gcd(&a.mul(&c));
        assert_eq!(g, a.monic());
        assert!(b.gcd(&c).is_one());
    }

    #[test]
    fn exact_division_detects_remainder() {
        let a = t(0).mul(&t(0)).add(&t(1).mul(&t(1)));
        let b = t(0).add(&t(1));
        assert_eq!(a.exact_div(&b), Some(b.clone()));
        assert_eq!(a.add(&t(2)).exact_div(&b), None);
    }

    #[test]
    fn pth_root_requires_divisible_exponents() {
        let x = t(0).mul(&t(1)).add(&t(2));
        assert_eq!(x.frobenius(1).pth_root(1), Some(x.clone()));
        assert_eq!(t(0).pth_root(1), None);
    }
}
