//! Exact arithmetic in the prime field F_p and its quadratic extension F_{p^2}.
//!
//! Residues are kept as canonical `u64` values in `[0, p)`. Every product of
//! two residues fits in a `u64` because primes are capped well below 2^32.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Serialize, Serializer};

use crate::error::{domain, Error, Result};

/// Largest modulus accepted by [`Prime::new`]; keeps `a * b` inside a `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5;
    while d * d <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A verified prime modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    pub fn is_odd(self) -> bool {
        self.0 != 2
    }

    /// Fails unless `p >= min`.
    pub fn require_at_least(self, min: u64) -> Result<()> {
        if self.0 < min {
            Err(Error::PrimeTooSmall { p: self.0, min })
        } else {
            Ok(())
        }
    }

    pub fn require_odd(self) -> Result<()> {
        self.require_at_least(3)
    }

    #[inline]
    pub fn elem(self, v: i64) -> Fp {
        Fp::new(self, v)
    }

    #[inline]
    pub fn zero(self) -> Fp {
        Fp { value: 0, modulus: self }
    }

    #[inline]
    pub fn one(self) -> Fp {
        Fp { value: 1, modulus: self }
    }

    /// All residues `0, 1, ..., p-1`.
    pub fn elements(self) -> impl Iterator<Item = Fp> {
        (0..self.0).map(move |v| Fp { value: v, modulus: self })
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of F_p.
///
/// Ordering compares the canonical residue first, so sorting elements of a
/// single field orders them by integer value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fp {
    value: u64,
    modulus: Prime,
}

impl Fp {
    /// Reduces a signed integer into `[0, p)`.
    pub fn new(p: Prime, v: i64) -> Self {
        let m = p.get() as i64;
        Fp { value: v.rem_euclid(m) as u64, modulus: p }
    }

    pub fn from_u64(p: Prime, v: u64) -> Self {
        Fp { value: v % p.get(), modulus: p }
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> Prime {
        self.modulus
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// The representative in `(-p/2, p/2]`, handy for printing `-2` instead of `11`.
    pub fn signed(self) -> i64 {
        let p = self.modulus.get();
        if self.value > p / 2 {
            self.value as i64 - p as i64
        } else {
            self.value as i64
        }
    }

    pub fn square(self) -> Self {
        self * self
    }

    pub fn pow(self, mut e: u64) -> Self {
        let p = self.modulus.get();
        let mut base = self.value;
        let mut acc = 1 % p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        Fp { value: acc, modulus: self.modulus }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        let p = self.modulus.get() as i64;
        let (mut r0, mut r1) = (p, self.value as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(Fp::new(self.modulus, t0))
    }

    pub fn checked_div(self, rhs: Self) -> Option<Self> {
        rhs.inv().map(|r| self * r)
    }

    /// `self / 2`; requires an odd modulus.
    pub fn half(self) -> Self {
        let p = self.modulus.get();
        debug_assert!(p != 2, "halving in characteristic 2");
        let inv2 = p.div_ceil(2);
        Fp { value: self.value * inv2 % p, modulus: self.modulus }
    }

    /// The quadratic character of `self` (see [`chi`]).
    pub fn chi(self) -> i8 {
        chi(self)
    }

    /// One square root (the smaller residue of the pair), if any.
    pub fn sqrt(self) -> Option<Self> {
        sqrt_mod(self).map(|r| r.smallest())
    }

    /// Multiplicative order in F_p^*.
    pub fn mult_order(self) -> Result<u64> {
        if self.is_zero() {
            return Err(domain("multiplicative order of 0"));
        }
        Ok(order_dividing(self.modulus.get() - 1, |e| self.pow(e).value == 1))
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Serialize for Fp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u64(self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    #[inline]
    fn add(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let p = self.modulus.get();
        let v = self.value + rhs.value;
        Fp { value: if v >= p { v - p } else { v }, modulus: self.modulus }
    }
}

impl Sub for Fp {
    type Output = Fp;
    #[inline]
    fn sub(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let p = self.modulus.get();
        let v = if self.value >= rhs.value { self.value - rhs.value } else { self.value + p - rhs.value };
        Fp { value: v, modulus: self.modulus }
    }
}

impl Mul for Fp {
    type Output = Fp;
    #[inline]
    fn mul(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Fp { value: self.value * rhs.value % self.modulus.get(), modulus: self.modulus }
    }
}

impl Mul<i64> for Fp {
    type Output = Fp;
    #[inline]
    fn mul(self, rhs: i64) -> Fp {
        self * Fp::new(self.modulus, rhs)
    }
}

impl Add<i64> for Fp {
    type Output = Fp;
    #[inline]
    fn add(self, rhs: i64) -> Fp {
        self + Fp::new(self.modulus, rhs)
    }
}

impl Sub<i64> for Fp {
    type Output = Fp;
    #[inline]
    fn sub(self, rhs: i64) -> Fp {
        self - Fp::new(self.modulus, rhs)
    }
}

/// Panics on division by zero, like integer division.
impl Div for Fp {
    type Output = Fp;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Fp) -> Fp {
        self * rhs.inv().expect("division by zero in F_p")
    }
}

impl Neg for Fp {
    type Output = Fp;
    #[inline]
    fn neg(self) -> Fp {
        if self.value == 0 {
            self
        } else {
            Fp { value: self.modulus.get() - self.value, modulus: self.modulus }
        }
    }
}

impl AddAssign for Fp {
    fn add_assign(&mut self, rhs: Fp) {
        *self = *self + rhs;
    }
}

impl SubAssign for Fp {
    fn sub_assign(&mut self, rhs: Fp) {
        *self = *self - rhs;
    }
}

impl MulAssign for Fp {
    fn mul_assign(&mut self, rhs: Fp) {
        *self = *self * rhs;
    }
}

/// Sums an iterator of elements of one field. Panics on an empty iterator,
/// which carries no modulus; use `fold` with an explicit zero instead.
impl Sum for Fp {
    fn sum<I: Iterator<Item = Fp>>(mut iter: I) -> Fp {
        let first = iter.next().expect("sum of empty F_p iterator");
        iter.fold(first, |acc, x| acc + x)
    }
}

/// Quadratic character: 0 at zero, 1 on nonzero squares, -1 otherwise.
///
/// Uses Euler's criterion; for p = 2 every nonzero element is a square.
pub fn chi(x: Fp) -> i8 {
    if x.is_zero() {
        return 0;
    }
    let p = x.modulus.get();
    if p == 2 {
        return 1;
    }
    if x.pow((p - 1) / 2).value == 1 {
        1
    } else {
        -1
    }
}

/// The square roots of a residue: `{0}` or a pair `{r, -r}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SquareRoots {
    Zero(Fp),
    /// Ordered so that the first root has the smaller residue.
    Pair(Fp, Fp),
}

impl SquareRoots {
    pub fn smallest(self) -> Fp {
        match self {
            SquareRoots::Zero(z) => z,
            SquareRoots::Pair(r, _) => r,
        }
    }

    pub fn to_vec(self) -> Vec<Fp> {
        match self {
            SquareRoots::Zero(z) => vec![z],
            SquareRoots::Pair(r, s) => vec![r, s],
        }
    }

    fn from_root(r: Fp) -> Self {
        if r.is_zero() {
            return SquareRoots::Zero(r);
        }
        let s = -r;
        if r < s {
            SquareRoots::Pair(r, s)
        } else {
            SquareRoots::Pair(s, r)
        }
    }
}

/// Square roots mod an odd prime (Tonelli-Shanks, with the `x^((p+1)/4)`
/// shortcut when p = 3 mod 4). Returns `None` for non-residues.
pub fn sqrt_mod(x: Fp) -> Option<SquareRoots> {
    let p = x.modulus.get();
    if x.is_zero() {
        return Some(SquareRoots::Zero(x));
    }
    if p == 2 {
        // 1 = -1 in F_2
        return Some(SquareRoots::Pair(x, x));
    }
    if chi(x) != 1 {
        return None;
    }
    let root = if p % 4 == 3 {
        x.pow((p + 1) / 4)
    } else {
        tonelli_shanks(x)
    };
    debug_assert_eq!(root * root, x);
    Some(SquareRoots::from_root(root))
}

fn tonelli_shanks(n: Fp) -> Fp {
    let prime = n.modulus;
    let p = prime.get();
    let mut q = p - 1;
    let mut e = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        e += 1;
    }
    let z = smallest_non_residue(prime);
    let mut m = e;
    let mut c = z.pow(q);
    let mut t = n.pow(q);
    let mut r = n.pow(q.div_ceil(2));
    while t.value != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2.value != 1 {
            t2 = t2.square();
            i += 1;
        }
        let b = c.pow(1 << (m - i - 1));
        m = i;
        c = b.square();
        t *= c;
        r *= b;
    }
    r
}

/// Smallest positive integer that is a quadratic non-residue mod an odd prime.
pub fn smallest_non_residue(p: Prime) -> Fp {
    assert!(p.is_odd(), "F_2 has no non-residues");
    (2..p.get())
        .map(|v| Fp::from_u64(p, v))
        .find(|&v| chi(v) == -1)
        .expect("odd prime has a non-residue")
}

/// Smallest `d` dividing `group_order` with `is_one(d)`, found by stripping
/// prime factors from the group order.
fn order_dividing(group_order: u64, is_one: impl Fn(u64) -> bool) -> u64 {
    let mut n = group_order;
    for q in prime_factors(group_order) {
        while n.is_multiple_of(q) && is_one(n / q) {
            n /= q;
        }
    }
    n
}

/// An element `c0 + c1*w` of F_{p^2}, where `w^2 = n` for the smallest
/// non-residue `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp2 {
    c0: Fp,
    c1: Fp,
    nonres: Fp,
}

impl Fp2 {
    pub fn new(c0: Fp, c1: Fp) -> Self {
        let nonres = smallest_non_residue(c0.modulus);
        Fp2 { c0, c1, nonres }
    }

    pub fn embed(x: Fp) -> Self {
        Fp2::new(x, x.modulus.zero())
    }

    /// A square root of `x`, lying in F_p when `x` is a square there and in
    /// `F_p * w` otherwise.
    pub fn sqrt_of(x: Fp) -> Self {
        let p = x.modulus;
        let nonres = smallest_non_residue(p);
        match sqrt_mod(x) {
            Some(r) => Fp2 { c0: r.smallest(), c1: p.zero(), nonres },
            None => {
                // x = c^2 * n with x/n a residue
                let c = (x / nonres).sqrt().expect("x/n is a residue");
                Fp2 { c0: p.zero(), c1: c, nonres }
            }
        }
    }

    pub fn c0(self) -> Fp {
        self.c0
    }

    pub fn c1(self) -> Fp {
        self.c1
    }

    pub fn non_residue(self) -> Fp {
        self.nonres
    }

    pub fn modulus(self) -> Prime {
        self.c0.modulus
    }

    pub fn is_zero(self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    pub fn is_one(self) -> bool {
        self.c0.value == 1 && self.c1.is_zero()
    }

    pub fn in_base_field(self) -> bool {
        self.c1.is_zero()
    }

    pub fn conj(self) -> Self {
        Fp2 { c1: -self.c1, ..self }
    }

    pub fn norm(self) -> Fp {
        self.c0.square() - self.nonres * self.c1.square()
    }

    pub fn scale(self, k: Fp) -> Self {
        Fp2 { c0: self.c0 * k, c1: self.c1 * k, nonres: self.nonres }
    }

    pub fn inv(self) -> Option<Self> {
        let n = self.norm().inv()?;
        Some(self.conj().scale(n))
    }

    pub fn pow(self, mut e: u64) -> Self {
        let p = self.modulus();
        let mut acc = Fp2 { c0: p.one(), c1: p.zero(), nonres: self.nonres };
        let mut base = self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for Fp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c1.is_zero() {
            write!(f, "{}", self.c0)
        } else {
            write!(f, "{} + {}*sqrt({})", self.c0, self.c1, self.nonres)
        }
    }
}

impl Add for Fp2 {
    type Output = Fp2;
    fn add(self, rhs: Fp2) -> Fp2 {
        Fp2 { c0: self.c0 + rhs.c0, c1: self.c1 + rhs.c1, nonres: self.nonres }
    }
}

impl Sub for Fp2 {
    type Output = Fp2;
    fn sub(self, rhs: Fp2) -> Fp2 {
        Fp2 { c0: self.c0 - rhs.c0, c1: self.c1 - rhs.c1, nonres: self.nonres }
    }
}

impl Neg for Fp2 {
    type Output = Fp2;
    fn neg(self) -> Fp2 {
        Fp2 { c0: -self.c0, c1: -self.c1, nonres: self.nonres }
    }
}

impl Mul for Fp2 {
    type Output = Fp2;
    fn mul(self, rhs: Fp2) -> Fp2 {
        Fp2 {
            c0: self.c0 * rhs.c0 + self.nonres * self.c1 * rhs.c1,
            c1: self.c0 * rhs.c1 + self.c1 * rhs.c0,
            nonres: self.nonres,
        }
    }
}

/// Multiplicative order of a nonzero element of F_{p^2}.
///
/// The search starts from `p - 1` for elements of F_p, from `p + 1` for
/// norm-one elements outside F_p, and from `p^2 - 1` otherwise.
pub fn mult_order(x: Fp2) -> Result<u64> {
    if x.is_zero() {
        return Err(domain("multiplicative order of 0"));
    }
    let p = x.modulus().get();
    let group = if x.in_base_field() {
        p - 1
    } else if x.norm().value == 1 {
        p + 1
    } else {
        p * p - 1
    };
    Ok(order_dividing(group, |e| x.pow(e).is_one()))
}

/// Per-prime lookup tables for the character, square roots and inverses.
///
/// Built in O(p) once and then shared read-only across a sweep.
#[derive(Clone, Debug)]
pub struct FieldTables {
    p: Prime,
    chi: Vec<i8>,
    /// Smaller square root, or `u32::MAX` for non-residues.
    sqrt: Vec<u32>,
    inv: Vec<u32>,
}

const NO_ROOT: u32 = u32::MAX;

impl FieldTables {
    pub fn new(p: Prime) -> Self {
        let n = p.get() as usize;
        let mut sqrt = vec![NO_ROOT; n];
        for r in 0..n as u64 {
            let sq = (r * r % p.get()) as usize;
            if sqrt[sq] == NO_ROOT {
                sqrt[sq] = r as u32;
            }
        }
        let chi = (0..n)
            .map(|v| match (v, sqrt[v]) {
                (0, _) => 0,
                (_, NO_ROOT) => -1,
                _ => 1,
            })
            .collect();
        // inv[i] = -(p / i) * inv[p mod i]
        let mut inv = vec![0u32; n];
        if n > 1 {
            inv[1] = 1;
        }
        let pu = p.get();
        for i in 2..n as u64 {
            let k = pu - pu / i;
            inv[i as usize] = (k * inv[(pu % i) as usize] as u64 % pu) as u32;
        }
        FieldTables { p, chi, sqrt, inv }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn chi(&self, x: Fp) -> i8 {
        self.chi[x.value as usize]
    }

    /// Smaller square root, if `x` is a square.
    #[inline]
    pub fn sqrt(&self, x: Fp) -> Option<Fp> {
        match self.sqrt[x.value as usize] {
            NO_ROOT => None,
            r => Some(Fp { value: r as u64, modulus: self.p }),
        }
    }

    #[inline]
    pub fn inv(&self, x: Fp) -> Option<Fp> {
        if x.is_zero() {
            None
        } else {
            Some(Fp { value: self.inv[x.value as usize] as u64, modulus: self.p })
        }
    }
}
