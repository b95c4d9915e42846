//! Arithmetic in `F_p` for a single word-sized prime.
//!
//! Residues are plain `u64` values in `[0, p)`. Three reduction strategies are
//! selected once at construction: a Mersenne fold for `2^61 - 1`, Barrett
//! reduction for primes below [`NARROW_LIMIT`], and a `u128` remainder for
//! everything else.

use rand::Rng;

use crate::error::{Error, Result};

/// `2^61 - 1`, the default modulus.
pub const MERSENNE_61: u64 = (1 << 61) - 1;

/// Primes strictly below this bound use the narrow elimination kernel, which
/// accumulates 64 products of residues in a single `u64`.
pub const NARROW_LIMIT: u64 = 1 << 29;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Repr {
    Mersenne61,
    /// Barrett constant `floor(2^64 / p)`.
    Narrow { mu: u64 },
    Wide,
}

/// A prime field `F_p` with `3 <= p < 2^63`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
    repr: Repr,
}

impl Default for PrimeField {
    fn default() -> Self {
        Self::mersenne61()
    }
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(3..1 << 63).contains(&p) {
            return Err(Error::InvalidPrime { p, reason: "modulus must lie in [3, 2^63)" });
        }
        if !is_prime(p) {
            return Err(Error::InvalidPrime { p, reason: "not prime" });
        }
        let repr = if p == MERSENNE_61 {
            Repr::Mersenne61
        } else if p < NARROW_LIMIT {
            Repr::Narrow { mu: ((1u128 << 64) / p as u128) as u64 }
        } else {
            Repr::Wide
        };
        Ok(Self { p, repr })
    }

    pub fn mersenne61() -> Self {
        Self { p: MERSENNE_61, repr: Repr::Mersenne61 }
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    /// True when the narrow (`u64`-accumulating) elimination kernel applies.
    pub fn is_narrow(&self) -> bool {
        matches!(self.repr, Repr::Narrow { .. })
    }

    /// Reduces an arbitrary integer into `[0, p)`.
    pub fn from_i128(&self, x: i128) -> u64 {
        x.rem_euclid(self.p as i128) as u64
    }

    pub fn from_u64(&self, x: u64) -> u64 {
        if x < self.p {
            x
        } else {
            x % self.p
        }
    }

    /// Symmetric lift to `(-p/2, p/2]`, handy for printing small values.
    pub fn to_signed(&self, a: u64) -> i128 {
        if a > self.p / 2 {
            a as i128 - self.p as i128
        } else {
            a as i128
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match self.repr {
            Repr::Narrow { mu } => barrett(a * b, self.p, mu),
            _ => self.reduce_u128(a as u128 * b as u128),
        }
    }

    /// Reduces any `u128` (not just products) into `[0, p)`.
    #[inline]
    pub fn reduce_u128(&self, x: u128) -> u64 {
        match self.repr {
            Repr::Mersenne61 => fold61(x),
            Repr::Narrow { .. } | Repr::Wide => (x % self.p as u128) as u64,
        }
    }

    /// Reduces a `u64` accumulator into `[0, p)`.
    #[inline]
    pub(crate) fn reduce_u64(&self, x: u64) -> u64 {
        match self.repr {
            Repr::Narrow { mu } => barrett(x, self.p, mu),
            Repr::Mersenne61 => fold61(x as u128),
            Repr::Wide => x % self.p,
        }
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.p - 2))
    }

    /// Euler's criterion: `a^((p-1)/2) == 1`. Zero counts as a square.
    pub fn is_square(&self, a: u64) -> bool {
        a == 0 || self.pow(a, (self.p - 1) / 2) == 1
    }

    /// Tonelli-Shanks square root. `None` for non-residues.
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return Some(0);
        }
        if !self.is_square(a) {
            return None;
        }
        let p = self.p;
        if p % 4 == 3 {
            return Some(self.pow(a, (p + 1) / 4));
        }
        // p - 1 = q * 2^s with q odd
        let s = (p - 1).trailing_zeros();
        let q = (p - 1) >> s;
        // The smallest non-residue keeps the result deterministic.
        let z = (2..p).find(|&z| !self.is_square(z))?;

        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, q.div_ceil(2));
        while t != 1 {
            // least i with t^(2^i) == 1
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = self.mul(t2, t2);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.mul(b, b);
            }
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.random_range(0..self.p)
    }
}

#[inline]
fn fold61(x: u128) -> u64 {
    let lo = (x as u64) & MERSENNE_61;
    let mid = ((x >> 61) as u64) & MERSENNE_61;
    let hi = (x >> 122) as u64;
    let mut s = lo + mid + hi;
    s = (s & MERSENNE_61) + (s >> 61);
    if s >= MERSENNE_61 {
        s - MERSENNE_61
    } else {
        s
    }
}

#[inline]
fn barrett(x: u64, p: u64, mu: u64) -> u64 {
    let q = ((x as u128 * mu as u128) >> 64) as u64;
    let mut r = x - q * p;
    while r >= p {
        r -= p;
    }
    r
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
