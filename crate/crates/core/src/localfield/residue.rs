use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Returns whether `p` is an odd prime.
pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn check_odd_prime(p: u32) -> Result<()> {
    if is_odd_prime(p as u64) {
        Ok(())
    } else {
        Err(Error::NotOddPrime(p as u64))
    }
}

/// An element of the prime field `F_p`, stored as its least non-negative
/// representative.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueElem {
    value: u32,
    p: u32,
}

impl ResidueElem {
    /// Reduces `value` modulo `p`. The caller guarantees `p` is an odd prime.
    pub fn new(value: i64, p: u32) -> Self {
        let v = value.rem_euclid(p as i64) as u32;
        ResidueElem { value: v, p }
    }

    pub fn zero(p: u32) -> Self {
        ResidueElem { value: 0, p }
    }

    pub fn one(p: u32) -> Self {
        ResidueElem { value: 1, p }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let p = self.p as u64;
        let mut base = self.value as u64;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        ResidueElem { value: acc as u32, p: self.p }
    }

    pub fn inv(self) -> Result<Self> {
        if self.value == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(self.p as u64 - 2))
    }

    /// The quadratic character: `+1` on nonzero squares, `-1` on
    /// non-squares and `0` at zero.
    pub fn legendre(self) -> i8 {
        if self.value == 0 {
            return 0;
        }
        if self.pow((self.p as u64 - 1) / 2).value == 1 {
            1
        } else {
            -1
        }
    }

    /// Square root with representative in `[1, p/2]`, if one exists.
    pub fn sqrt(self) -> Option<Self> {
        if self.value == 0 {
            return Some(self);
        }
        (1..=self.p / 2)
            .map(|x| ResidueElem { value: x, p: self.p })
            .find(|&x| x * x == self)
    }

    fn check(self, other: Self) {
        assert_eq!(self.p, other.p, "residues over different primes");
    }
}

/// Quadratic character of `c`; see [`ResidueElem::legendre`].
pub fn legendre(c: ResidueElem) -> i8 {
    c.legendre()
}

impl Add for ResidueElem {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.check(rhs);
        ResidueElem { value: ((self.value as u64 + rhs.value as u64) % self.p as u64) as u32, p: self.p }
    }
}

impl Sub for ResidueElem {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for ResidueElem {
    type Output = Self;
    fn neg(self) -> Self {
        ResidueElem { value: (self.p - self.value) % self.p, p: self.p }
    }
}

impl Mul for ResidueElem {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.check(rhs);
        ResidueElem { value: ((self.value as u64 * rhs.value as u64) % self.p as u64) as u32, p: self.p }
    }
}

impl fmt::Debug for ResidueElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

impl fmt::Display for ResidueElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
