//! Prime fields with word-sized moduli near 2^61.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::scalar::{Field, Ring};

/// 2^61 - 1.
pub const P61: u64 = 2_305_843_009_213_693_951;
/// Largest prime below 2^61 - 1.
pub const P61_B: u64 = 2_305_843_009_213_693_921;
/// Next prime below [`P61_B`].
pub const P61_C: u64 = 2_305_843_009_213_693_907;

/// Element of Z/PZ, stored reduced in `0..P`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub const MODULUS: u64 = P;

    pub fn new(v: u64) -> Self {
        Fp(v % P)
    }

    pub fn from_i128(v: i128) -> Self {
        Fp(v.rem_euclid(P as i128) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    /// Representative in `(-P/2, P/2]`.
    pub fn symmetric(self) -> i64 {
        if self.0 > P / 2 {
            self.0 as i64 - P as i64
        } else {
            self.0 as i64
        }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Fp(rng.gen_range(0..P))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Fp(rng.gen_range(1..P))
    }

    pub fn pow_u64(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp(1 % P);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Raise to a signed power; `None` for a negative power of zero.
    pub fn powi(self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.pow_u64(e as u64))
        } else {
            self.inverse().map(|x| x.pow_u64(e.unsigned_abs()))
        }
    }

    pub fn inverse(self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow_u64(P - 2))
        }
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        let s = self.0 + o.0;
        Fp(if s >= P { s - P } else { s })
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Fp(if self.0 >= o.0 { self.0 - o.0 } else { self.0 + P - o.0 })
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Fp(((self.0 as u128 * o.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Ring for Fp<P> {
    fn add_ref(&self, o: &Self) -> Self {
        *self + *o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        *self - *o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        *self * *o
    }
    fn neg_ref(&self) -> Self {
        -*self
    }
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self = *self + *a * *b;
    }
    fn from_i64(v: i64) -> Self {
        Fp::from_i128(v as i128)
    }
}

impl<const P: u64> Field for Fp<P> {
    fn inv(&self) -> Option<Self> {
        self.inverse()
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
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

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Field element with a modulus chosen at run time. Used where the prime is
/// user configuration (determinant checks); the const-generic [`Fp`] is
/// used everywhere else.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DynFp {
    pub value: u64,
    pub modulus: u64,
}

impl DynFp {
    pub fn new(value: u64, modulus: u64) -> Self {
        DynFp { value: value % modulus, modulus }
    }

    pub fn from_i128(v: i128, modulus: u64) -> Self {
        DynFp { value: v.rem_euclid(modulus as i128) as u64, modulus }
    }

    pub fn pow(self, e: u64) -> Self {
        DynFp { value: pow_mod(self.value, e, self.modulus), modulus: self.modulus }
    }

    pub fn inverse(self) -> Option<Self> {
        if self.value == 0 {
            None
        } else {
            Some(self.pow(self.modulus - 2))
        }
    }

    pub fn powi(self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.pow(e as u64))
        } else {
            self.inverse().map(|x| x.pow(e.unsigned_abs()))
        }
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

impl std::ops::Add for DynFp {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let s = (self.value as u128 + o.value as u128) % self.modulus as u128;
        DynFp { value: s as u64, modulus: self.modulus }
    }
}

impl std::ops::Neg for DynFp {
    type Output = Self;
    fn neg(self) -> Self {
        DynFp { value: if self.value == 0 { 0 } else { self.modulus - self.value }, modulus: self.modulus }
    }
}

impl std::ops::Sub for DynFp {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + -o
    }
}

impl std::ops::Mul for DynFp {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        DynFp { value: mul_mod(self.value, o.value, self.modulus), modulus: self.modulus }
    }
}
