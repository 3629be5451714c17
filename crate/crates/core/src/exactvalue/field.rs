use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// An element of `Q(zeta)`, `zeta = exp(2 pi i / 4p)`, in the power basis
/// `1, zeta, ..., zeta^(2p - 3)`, reduced modulo the `4p`-th cyclotomic
/// polynomial `sum_{k < p} (-1)^k x^(2k)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactValue {
    p: u32,
    coeffs: Vec<BigRational>,
}

/// Dimension `phi(4p) = 2(p - 1)`.
pub fn degree(p: u32) -> usize {
    2 * (p as usize - 1)
}

impl ExactValue {
    pub fn zero(p: u32) -> Self {
        ExactValue { p, coeffs: vec![BigRational::zero(); degree(p)] }
    }

    pub fn one(p: u32) -> Self {
        Self::from_rational(p, BigRational::one())
    }

    pub fn from_rational(p: u32, c: BigRational) -> Self {
        let mut v = Self::zero(p);
        v.coeffs[0] = c;
        v
    }

    pub fn from_int(p: u32, c: i64) -> Self {
        Self::from_rational(p, BigRational::from_integer(c.into()))
    }

    /// Builds a value from its coordinates; fails on a wrong length.
    pub fn from_coeffs(p: u32, coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.len() != degree(p) {
            return Err(Error::precondition(format!(
                "{} coordinates given, Q(zeta_{}) has degree {}",
                coeffs.len(),
                4 * p,
                degree(p)
            )));
        }
        Ok(ExactValue { p, coeffs })
    }

    /// `sum_k c[k] zeta^k` for an arbitrary-length exponent vector (taken
    /// cyclically modulo `4p`).
    pub fn from_cyclic(p: u32, c: Vec<BigRational>) -> Self {
        let n = 4 * p as usize;
        let mut folded = vec![BigRational::zero(); n];
        for (k, x) in c.into_iter().enumerate() {
            if !x.is_zero() {
                folded[k % n] += x;
            }
        }
        Self::reduce(p, folded)
    }

    /// `zeta^k`.
    pub fn zeta_pow(p: u32, k: i64) -> Self {
        let n = 4 * p as i64;
        let mut c = vec![BigRational::zero(); n as usize];
        c[k.rem_euclid(n) as usize] = BigRational::one();
        Self::reduce(p, c)
    }

    /// `i = zeta^p`.
    pub fn imag_unit(p: u32) -> Self {
        Self::zeta_pow(p, p as i64)
    }

    /// Reduces a length-`4p` cyclic vector: `x^(2p) = -1`, then
    /// `x^(2p-2) = -sum_{k <= p-2} (-1)^k x^(2k)`.
    fn reduce(p: u32, mut c: Vec<BigRational>) -> Self {
        let h = 2 * p as usize;
        for k in h..c.len() {
            let x = std::mem::take(&mut c[k]);
            if !x.is_zero() {
                c[k - h] -= x;
            }
        }
        c.truncate(h);
        let d = degree(p);
        for top in [d, d + 1] {
            let x = std::mem::take(&mut c[top]);
            if x.is_zero() {
                continue;
            }
            let shift = top - d;
            for k in 0..(p as usize - 1) {
                let term = if k % 2 == 0 { -x.clone() } else { x.clone() };
                c[2 * k + shift] += term;
            }
        }
        c.truncate(d);
        ExactValue { p, coeffs: c }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..].iter().all(|c| c.is_zero()).then(|| &self.coeffs[0])
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.p, other.p, "values in different cyclotomic fields");
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        Ok(self + other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        Ok(self * other)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        ExactValue { p: self.p, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// The automorphism `zeta -> zeta^k`, `k` prime to `4p`.
    pub fn galois(&self, k: i64) -> Self {
        let n = 4 * self.p as i64;
        assert_eq!(k.gcd(&n), 1, "zeta -> zeta^{k} is not an automorphism");
        let mut c = vec![BigRational::zero(); n as usize];
        for (j, x) in self.coeffs.iter().enumerate() {
            if !x.is_zero() {
                c[(j as i64 * k).rem_euclid(n) as usize] += x;
            }
        }
        Self::reduce(self.p, c)
    }

    /// Complex conjugation `zeta -> zeta^(-1)`.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Field norm down to `Q`.
    pub fn norm(&self) -> BigRational {
        let (prod, _) = self.norm_parts();
        prod.as_rational().cloned().expect("norm is rational")
    }

    /// (N(x), product of the nontrivial conjugates).
    fn norm_parts(&self) -> (Self, Self) {
        let n = 4 * self.p as i64;
        let mut others = Self::one(self.p);
        for k in 2..n {
            if k.gcd(&n) == 1 {
                others = &others * &self.galois(k);
            }
        }
        (self * &others, others)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(self.p, r.recip()));
        }
        let (prod, others) = self.norm_parts();
        let norm = prod.as_rational().cloned().expect("norm is rational");
        Ok(others.scale(&norm.recip()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = Self::one(self.p);
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &sq;
            }
            n >>= 1;
            if n > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// `{"p":7,"basis":"zeta_28_power","coeffs":["1/7","0",...]}`.
    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "basis": format!("zeta_{}_power", 4 * self.p),
            "coeffs": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("exact value JSON: {what}"));
        let p = v["p"].as_u64().ok_or_else(|| bad("missing p"))? as u32;
        let coeffs = v["coeffs"]
            .as_array()
            .ok_or_else(|| bad("missing coeffs"))?
            .iter()
            .map(|c| {
                c.as_str()
                    .and_then(|s| s.parse::<BigRational>().ok())
                    .ok_or_else(|| bad("coefficient is not a rational string"))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_coeffs(p, coeffs)
    }

    /// `sum c_k z^k` with `z = zeta_{4p}`.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

/// `p^k` as a rational, any sign of `k`.
pub fn q_pow(p: u32, k: i64) -> BigRational {
    let base = BigInt::from(p).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        BigRational::from_integer(base)
    } else {
        BigRational::new(BigInt::one(), base)
    }
}

impl Add for &ExactValue {
    type Output = ExactValue;
    fn add(self, rhs: &ExactValue) -> ExactValue {
        self.check(rhs);
        ExactValue { p: self.p, coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &ExactValue {
    type Output = ExactValue;
    fn sub(self, rhs: &ExactValue) -> ExactValue {
        self.check(rhs);
        ExactValue { p: self.p, coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &ExactValue {
    type Output = ExactValue;
    fn neg(self) -> ExactValue {
        ExactValue { p: self.p, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl Mul for &ExactValue {
    type Output = ExactValue;
    fn mul(self, rhs: &ExactValue) -> ExactValue {
        self.check(rhs);
        if let Some(r) = self.as_rational() {
            return rhs.scale(r);
        }
        if let Some(r) = rhs.as_rational() {
            return self.scale(r);
        }
        let mut c = vec![BigRational::zero(); 4 * self.p as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        ExactValue::reduce(self.p, c)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for ExactValue {
            type Output = ExactValue;
            fn $f(self, rhs: ExactValue) -> ExactValue {
                (&self).$f(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for ExactValue {
    type Output = ExactValue;
    fn neg(self) -> ExactValue {
        -&self
    }
}

impl std::iter::Sum for ExactValue {
    fn sum<I: Iterator<Item = ExactValue>>(mut iter: I) -> ExactValue {
        let first = iter.next().expect("sum of an empty sequence of exact values");
        iter.fold(first, |acc, x| &acc + &x)
    }
}

impl fmt::Debug for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactValue[p={}]({})", self.p, self.pretty())
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}
