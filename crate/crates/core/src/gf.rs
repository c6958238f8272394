//! Arithmetic in prime fields GF(p) for word-sized primes.
//!
//! Residues are plain `u64` values in `[0, p)`. [`PrimeModulus`] carries the
//! modulus and exposes the raw operations used by the matrix and polynomial
//! layers; [`FieldElement`] is the checked value type that remembers its field.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported modulus bound (exclusive).
pub const MODULUS_BOUND: u64 = 1 << 62;

/// A prime modulus `p` with `2 <= p < 2^62`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeModulus {
    p: u64,
    /// Bit length of `p`.
    bits: u32,
    /// Barrett constant `floor(2^(2 bits) / p)`, below `2^63`.
    barrett: u64,
    /// Number of products `< (p-1)^2` that can be summed in a `u128` before reducing.
    lazy: usize,
}

impl fmt::Debug for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.p)
    }
}

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..MODULUS_BOUND).contains(&p) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let sq = (p as u128 - 1) * (p as u128 - 1);
        let lazy = if sq == 0 {
            usize::MAX
        } else {
            (u128::MAX / sq).min(1 << 30) as usize
        };
        let bits = 64 - p.leading_zeros();
        let barrett = ((1u128 << (2 * bits)) / p as u128) as u64;
        Ok(Self {
            p,
            bits,
            barrett,
            lazy,
        })
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.p
    }

    /// How many raw products may be accumulated in a `u128` before [`Self::reduce_wide`].
    #[inline]
    pub fn lazy_limit(self) -> usize {
        self.lazy
    }

    /// Wraps an arbitrary integer as a field element (reduced mod p).
    pub fn elem(self, v: u64) -> FieldElement {
        FieldElement {
            value: v % self.p,
            modulus: self,
        }
    }

    /// Maps a signed integer into the field.
    #[inline]
    pub fn from_i64(self, v: i64) -> u64 {
        let r = v.rem_euclid(self.p as i64);
        r as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        self.barrett_reduce(a as u128 * b as u128)
    }

    /// Barrett reduction of `x < 2^(2 bits)`, in particular of any product of residues.
    #[inline]
    fn barrett_reduce(self, x: u128) -> u64 {
        let q = (((x >> (self.bits - 1)) as u64) as u128 * self.barrett as u128) >> (self.bits + 1);
        // q undershoots x / p by at most 2
        let mut r = (x - q * self.p as u128) as u64;
        while r >= self.p {
            r -= self.p;
        }
        r
    }

    /// `a + b * c`.
    #[inline]
    pub fn mul_add(self, a: u64, b: u64, c: u64) -> u64 {
        self.add(a, self.mul(b, c))
    }

    /// `a - b * c`.
    #[inline]
    pub fn mul_sub(self, a: u64, b: u64, c: u64) -> u64 {
        self.sub(a, self.mul(b, c))
    }

    #[inline]
    pub fn reduce_wide(self, x: u128) -> u64 {
        if x >> (2 * self.bits) == 0 {
            self.barrett_reduce(x)
        } else {
            (x % self.p as u128) as u64
        }
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        // extended Euclid on signed 128-bit values
        let (mut r0, mut r1) = (self.p as i128, a as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Some(s0.rem_euclid(self.p as i128) as u64)
    }

    /// Dot product of two residue slices with lazy reduction.
    pub fn dot(self, a: &[u64], b: &[u64]) -> u64 {
        debug_assert_eq!(a.len(), b.len());
        let mut acc: u128 = 0;
        let mut out = 0u64;
        for (ca, cb) in a.chunks(self.lazy).zip(b.chunks(self.lazy)) {
            for (&x, &y) in ca.iter().zip(cb) {
                acc += x as u128 * y as u128;
            }
            out = self.add(out, self.reduce_wide(acc));
            acc = 0;
        }
        out
    }
}

/// A residue together with its field.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    modulus: PrimeModulus,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus.p)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl FieldElement {
    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn same_field(self, other: Self) -> Result<PrimeModulus> {
        if self.modulus.p != other.modulus.p {
            Err(Error::ModulusMismatch(self.modulus.p, other.modulus.p))
        } else {
            Ok(self.modulus)
        }
    }

    pub fn add(self, other: Self) -> Result<Self> {
        let f = self.same_field(other)?;
        Ok(f.elem(f.add(self.value, other.value)))
    }

    pub fn sub(self, other: Self) -> Result<Self> {
        let f = self.same_field(other)?;
        Ok(f.elem(f.sub(self.value, other.value)))
    }

    pub fn mul(self, other: Self) -> Result<Self> {
        let f = self.same_field(other)?;
        Ok(f.elem(f.mul(self.value, other.value)))
    }

    pub fn neg(self) -> Self {
        self.modulus.elem(self.modulus.neg(self.value))
    }

    pub fn inv(self) -> Result<Self> {
        self.modulus
            .inv(self.value)
            .map(|v| self.modulus.elem(v))
            .ok_or(Error::DivisionByZero)
    }
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u64(acc, b, m);
        }
        b = mul_mod_u64(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve prime bases are exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &q in &BASES {
        if n % q == 0 {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
