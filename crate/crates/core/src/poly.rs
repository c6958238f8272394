//! Univariate polynomials over GF(p), coefficients stored low to high.

use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::gf::PrimeModulus;
use crate::opcount;

/// Default operand length below which multiplication stays schoolbook.
pub const KARATSUBA_THRESHOLD: usize = 32;

/// Degree of a polynomial; the zero polynomial has degree `NegInf`, which
/// orders below every finite degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInf,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(d) => Some(d),
        }
    }

    pub fn is_neg_inf(self) -> bool {
        self == Degree::NegInf
    }

    /// Degree of a product: `NegInf` absorbs.
    pub fn plus(self, other: Degree) -> Degree {
        match (self, other) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::NegInf,
        }
    }

    /// Finite value, with `NegInf` mapped to `default`.
    pub fn unwrap_or(self, default: usize) -> usize {
        self.finite().unwrap_or(default)
    }
}

impl From<usize> for Degree {
    fn from(d: usize) -> Self {
        Degree::Finite(d)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<u64>,
    field: PrimeModulus,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self}) over {:?}", self.field)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (k, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "{c}*x")?,
                (_, 1) => write!(f, "x^{k}")?,
                _ => write!(f, "{c}*x^{k}")?,
            }
        }
        Ok(())
    }
}

fn normalize(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

impl Poly {
    pub fn zero(field: PrimeModulus) -> Self {
        Self {
            coeffs: Vec::new(),
            field,
        }
    }

    pub fn one(field: PrimeModulus) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: PrimeModulus, c: u64) -> Self {
        Self::from_coeffs(field, vec![c])
    }

    /// The polynomial `x`.
    pub fn x(field: PrimeModulus) -> Self {
        Self::monomial(field, 1, 1)
    }

    /// `c * x^k`.
    pub fn monomial(field: PrimeModulus, c: u64, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        Self::from_coeffs(field, v)
    }

    /// From low-to-high coefficients; values are reduced and trailing zeros dropped.
    pub fn from_coeffs(field: PrimeModulus, mut coeffs: Vec<u64>) -> Self {
        let p = field.value();
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        normalize(&mut coeffs);
        Self { coeffs, field }
    }

    pub fn from_i64s(field: PrimeModulus, coeffs: &[i64]) -> Self {
        Self::from_coeffs(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    /// Trusts that `coeffs` holds canonical residues.
    pub(crate) fn from_raw(field: PrimeModulus, mut coeffs: Vec<u64>) -> Self {
        normalize(&mut coeffs);
        Self { coeffs, field }
    }

    #[inline]
    pub fn field(&self) -> PrimeModulus {
        self.field
    }

    #[inline]
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.coeffs
    }

    #[inline]
    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of stored coefficients (`deg + 1`, or 0 for zero).
    #[inline]
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInf,
            n => Degree::Finite(n - 1),
        }
    }

    /// Leading coefficient (0 for the zero polynomial).
    pub fn lead(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 1
    }

    pub fn eval(&self, x: u64) -> u64 {
        let f = self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.mul_add(c, acc, x % f.value()))
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            Err(Error::ModulusMismatch(self.field.value(), other.field.value()))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.field, other.field);
        let f = self.field;
        let (long, short) = if self.len() >= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut v = long.coeffs.clone();
        for (x, &y) in v.iter_mut().zip(&short.coeffs) {
            *x = f.add(*x, y);
        }
        Self::from_raw(f, v)
    }

    pub fn add_assign(&mut self, other: &Self) {
        let f = self.field;
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), 0);
        }
        for (x, &y) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *x = f.add(*x, y);
        }
        normalize(&mut self.coeffs);
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        Self {
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
            field: f,
        }
    }

    pub fn scale(&self, c: u64) -> Self {
        let f = self.field;
        let c = c % f.value();
        Self::from_raw(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![0; k];
        v.extend_from_slice(&self.coeffs);
        Self {
            coeffs: v,
            field: self.field,
        }
    }

    /// `self div x^k`: drops the `k` lowest coefficients.
    pub fn shift_down(&self, k: usize) -> Self {
        Self {
            coeffs: self.coeffs.get(k..).map_or_else(Vec::new, <[u64]>::to_vec),
            field: self.field,
        }
    }

    /// Coefficients `lo..hi` as a polynomial: `(self div x^lo) rem x^(hi-lo)`.
    pub fn window(&self, lo: usize, hi: usize) -> Self {
        let hi = hi.min(self.coeffs.len());
        if lo >= hi {
            return Self::zero(self.field);
        }
        Self::from_raw(self.field, self.coeffs[lo..hi].to_vec())
    }

    /// `self rem x^d`.
    pub fn truncate(&self, d: usize) -> Self {
        if d >= self.coeffs.len() {
            return self.clone();
        }
        Self::from_raw(self.field, self.coeffs[..d].to_vec())
    }

    /// `x^d * self(1/x)`; requires `deg self <= d`.
    pub fn reverse(&self, d: usize) -> Result<Self> {
        if self.coeffs.len() > d + 1 {
            return Err(Error::DegreeBound(format!(
                "reverse at {d} of a polynomial of degree {}",
                self.degree()
            )));
        }
        let mut v = vec![0; d + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            v[d - k] = c;
        }
        Ok(Self::from_raw(self.field, v))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_with_threshold(other, KARATSUBA_THRESHOLD)
    }

    /// Product with an explicit Karatsuba threshold (`usize::MAX` forces schoolbook).
    pub fn mul_with_threshold(&self, other: &Self, threshold: usize) -> Self {
        debug_assert_eq!(self.field, other.field);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field);
        }
        Self::from_raw(
            self.field,
            mul_slices(self.field, &self.coeffs, &other.coeffs, threshold.max(2)),
        )
    }

    /// Checked variant of [`Self::mul`] that rejects mixed moduli.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        Ok(self.mul(other))
    }

    pub fn make_monic(&self) -> Self {
        match self.field.inv(self.lead()) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    /// Euclidean division `self = q * g + r` with `deg r < deg g`.
    pub fn divrem(&self, g: &Self) -> Result<(Self, Self)> {
        self.check_field(g)?;
        if g.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = self.field;
        let dg = g.coeffs.len() - 1;
        if self.coeffs.len() <= dg {
            return Ok((Self::zero(f), self.clone()));
        }
        let inv = f.inv(g.lead()).expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        let mut q = vec![0u64; r.len() - dg];
        for k in (0..q.len()).rev() {
            let c = f.mul(r[k + dg], inv);
            q[k] = c;
            if c != 0 {
                for (i, &gi) in g.coeffs.iter().enumerate() {
                    r[k + i] = f.mul_sub(r[k + i], c, gi);
                }
            }
        }
        opcount::add((q.len() * (dg + 1)) as u64);
        r.truncate(dg);
        Ok((Self::from_raw(f, q), Self::from_raw(f, r)))
    }

    pub fn rem(&self, g: &Self) -> Result<Self> {
        Ok(self.divrem(g)?.1)
    }

    /// Monic gcd; zero when both inputs are zero.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.make_monic())
    }

    /// `x^k rem f` for monic `f` of degree at least 1.
    pub fn powmod(k: &BigUint, f: &Self) -> Result<Self> {
        if !f.is_monic() || f.coeffs.len() < 2 {
            return Err(Error::NotMonic);
        }
        let field = f.field;
        let mut acc = Self::one(field).rem(f)?;
        for i in (0..k.bits()).rev() {
            acc = acc.mul(&acc).rem(f)?;
            if k.bit(i) {
                acc = acc.shift(1).rem(f)?;
            }
        }
        Ok(acc)
    }

    pub fn powmod_u64(k: u64, f: &Self) -> Result<Self> {
        Self::powmod(&BigUint::from(k), f)
    }

    pub fn derivative(&self) -> Self {
        let f = self.field;
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| f.mul(c, k as u64 % f.value()))
            .collect();
        Self::from_raw(f, v)
    }
}

impl Poly {
    /// Extended gcd: monic `g` and `u`, `v` with `u * self + v * other = g`.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut u0, mut u1) = (Self::one(f), Self::zero(f));
        let (mut v0, mut v1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            let u2 = u0.sub(&q.mul(&u1));
            let v2 = v0.sub(&q.mul(&v1));
            (r0, r1) = (r1, r);
            (u0, u1) = (u1, u2);
            (v0, v1) = (v1, v2);
        }
        match f.inv(r0.lead()) {
            Some(c) => (r0.scale(c), u0.scale(c), v0.scale(c)),
            None => (r0, u0, v0),
        }
    }

    /// Power series inverse `self^{-1} rem x^n`; requires a nonzero constant term.
    pub fn inv_series(&self, n: usize) -> Result<Self> {
        let f = self.field;
        let c0 = f.inv(self.coeff(0)).ok_or(Error::DivisionByZero)?;
        let mut g = Self::constant(f, c0);
        let mut prec = 1;
        while prec < n {
            prec = (2 * prec).min(n);
            // g <- g * (2 - self * g)
            let e = self.truncate(prec).mul(&g).truncate(prec);
            let two_minus = Self::constant(f, 2).sub(&e);
            g = g.mul(&two_minus).truncate(prec);
        }
        Ok(g.truncate(n))
    }
}

/// Fixed nonzero modulus with a precomputed reversed inverse for fast remainders.
#[derive(Clone, Debug)]
pub struct PolyModulus {
    modulus: Poly,
    inv_rev: Poly,
}

impl PolyModulus {
    pub fn new(modulus: Poly) -> Result<Self> {
        if modulus.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = modulus.len() - 1;
        let rev = modulus.reverse(d)?;
        let inv_rev = rev.inv_series(d.max(1))?;
        Ok(Self { modulus, inv_rev })
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// `a rem modulus`; fast when `deg a < 2 deg modulus`.
    pub fn rem(&self, a: &Poly) -> Poly {
        let d = self.modulus.len() - 1;
        if a.len() <= d {
            return a.clone();
        }
        let da = a.len() - 1;
        let qlen = da - d + 1;
        if d == 0 || qlen > d {
            return a.rem(&self.modulus).expect("nonzero modulus");
        }
        let ra = a.reverse(da).expect("degree fits");
        let qrev = ra.truncate(qlen).mul(&self.inv_rev.truncate(qlen)).truncate(qlen);
        let q = qrev.reverse(qlen - 1).expect("degree fits");
        a.sub(&q.mul(&self.modulus)).truncate(d)
    }

    pub fn mul_rem(&self, a: &Poly, b: &Poly) -> Poly {
        self.rem(&a.mul(b))
    }
}

/// Schoolbook convolution with lazy `u128` accumulation.
pub(crate) fn schoolbook(f: PrimeModulus, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let n = a.len() + b.len() - 1;
    let lazy = f.lazy_limit();
    let mut out = vec![0u64; n];
    for (k, o) in out.iter_mut().enumerate() {
        let lo = k.saturating_sub(b.len() - 1);
        let hi = k.min(a.len() - 1);
        let mut acc = 0u128;
        let mut count = 0;
        let mut res = 0u64;
        for i in lo..=hi {
            acc += a[i] as u128 * b[k - i] as u128;
            count += 1;
            if count == lazy {
                res = f.add(res, f.reduce_wide(acc));
                acc = 0;
                count = 0;
            }
        }
        *o = f.add(res, f.reduce_wide(acc));
    }
    opcount::add((a.len() * b.len()) as u64);
    out
}

fn add_into(f: PrimeModulus, dst: &mut [u64], src: &[u64]) {
    for (x, &y) in dst.iter_mut().zip(src) {
        *x = f.add(*x, y);
    }
}

fn sub_into(f: PrimeModulus, dst: &mut [u64], src: &[u64]) {
    for (x, &y) in dst.iter_mut().zip(src) {
        *x = f.sub(*x, y);
    }
}

fn add_slices(f: PrimeModulus, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut v = if a.len() >= b.len() { a.to_vec() } else { b.to_vec() };
    let short = if a.len() >= b.len() { b } else { a };
    add_into(f, &mut v, short);
    v
}

/// Full-length product of coefficient slices (no normalization).
pub(crate) fn mul_slices(f: PrimeModulus, a: &[u64], b: &[u64], threshold: usize) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let (la, lb) = (a.len(), b.len());
    if la.min(lb) < threshold {
        return schoolbook(f, a, b);
    }
    let (long, short) = if la >= lb { (a, b) } else { (b, a) };
    let h = long.len().div_ceil(2);
    let mut out = vec![0u64; la + lb - 1];
    if short.len() <= h {
        // unbalanced: slice the long operand into pieces of the short length
        for (i, chunk) in long.chunks(short.len()).enumerate() {
            let prod = mul_slices(f, chunk, short, threshold);
            add_into(f, &mut out[i * short.len()..], &prod);
        }
        return out;
    }
    let (a0, a1) = long.split_at(h);
    let (b0, b1) = short.split_at(h);
    let z0 = mul_slices(f, a0, b0, threshold);
    let z2 = mul_slices(f, a1, b1, threshold);
    let mut z1 = mul_slices(f, &add_slices(f, a0, a1), &add_slices(f, b0, b1), threshold);
    sub_into(f, &mut z1, &z0);
    sub_into(f, &mut z1, &z2);
    add_into(f, &mut out, &z0);
    add_into(f, &mut out[h..], &z1);
    add_into(f, &mut out[2 * h..], &z2);
    out
}
