//! The prime field `F_p` for small primes.

use std::fmt;

pub const MAX_PRIME: u32 = 13;

pub fn is_supported_prime(p: u32) -> bool {
    matches!(p, 2 | 3 | 5 | 7 | 11 | 13)
}

pub(crate) fn pow_mod(base: u32, mut exp: u64, p: u32) -> u32 {
    let mut acc = 1u64;
    let m = p as u64;
    let mut b = base as u64 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u32
}

/// Inverse in `F_p` by Fermat; `a` must be nonzero mod `p`.
pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    pow_mod(a, (p - 2) as u64, p)
}

/// An element of `F_p`, `value < p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeFieldElem {
    value: u32,
    p: u32,
}

impl PrimeFieldElem {
    pub fn new(value: u64, p: u32) -> Self {
        PrimeFieldElem { value: (value % p as u64) as u32, p }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn p(self) -> u32 {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn add(self, o: Self) -> Self {
        Self::new((self.value + o.value) as u64, self.p)
    }

    pub fn sub(self, o: Self) -> Self {
        Self::new((self.value + self.p - o.value) as u64, self.p)
    }

    pub fn mul(self, o: Self) -> Self {
        Self::new(self.value as u64 * o.value as u64, self.p)
    }

    pub fn inv(self) -> Option<Self> {
        (!self.is_zero()).then(|| Self::new(inv_mod(self.value, self.p) as u64, self.p))
    }

    pub fn pow(self, e: u64) -> Self {
        Self::new(pow_mod(self.value, e, self.p) as u64, self.p)
    }
}

impl fmt::Display for PrimeFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
