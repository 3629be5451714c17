use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::residue::ResidueElem;
use crate::error::{Error, Result};

/// An element of `F_p((t))` known modulo `t^N` (absolute precision `N`).
///
/// Zero is its own variant: a series whose known coefficients all vanish is
/// only known to lie in `t^N O`, so it carries a precision but no valuation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentSeries {
    p: u32,
    prec: i32,
    body: Body,
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Body {
    Zero,
    /// `coeffs[k]` is the coefficient of `t^(val + k)`; `coeffs[0] != 0` and
    /// `val + coeffs.len() == prec`.
    Nonzero { val: i32, coeffs: Vec<u32> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl LaurentSeries {
    pub fn zero(p: u32, prec: i32) -> Self {
        LaurentSeries { p, prec, body: Body::Zero }
    }

    /// Builds `sum_k coeffs[k] t^(val + k)` known modulo `t^prec`; missing
    /// coefficients below `prec` are zero.
    pub fn from_coeffs(p: u32, val: i32, coeffs: &[i64], prec: i32) -> Result<Self> {
        if val + coeffs.len() as i32 > prec && coeffs.iter().skip((prec - val).max(0) as usize).any(|&c| c.rem_euclid(p as i64) != 0) {
            return Err(Error::precision(format!(
                "coefficients extend past the precision t^{prec}"
            )));
        }
        if val >= prec {
            return Ok(Self::zero(p, prec));
        }
        let len = (prec - val) as usize;
        let mut dense = vec![0u32; len];
        for (slot, &c) in dense.iter_mut().zip(coeffs) {
            *slot = c.rem_euclid(p as i64) as u32;
        }
        Ok(Self::normalized(p, val, dense, prec))
    }

    pub fn constant(p: u32, c: i64, prec: i32) -> Self {
        Self::monomial(p, c, 0, prec)
    }

    pub fn one(p: u32, prec: i32) -> Self {
        Self::constant(p, 1, prec)
    }

    /// `c t^k` modulo `t^prec`.
    pub fn monomial(p: u32, c: i64, k: i32, prec: i32) -> Self {
        Self::from_coeffs(p, k, &[c], prec.max(k)).expect("monomial fits its precision")
            .truncate(prec)
    }

    pub fn from_residue(c: ResidueElem, prec: i32) -> Self {
        Self::constant(c.modulus(), c.value() as i64, prec)
    }

    fn normalized(p: u32, val: i32, dense: Vec<u32>, prec: i32) -> Self {
        match dense.iter().position(|&c| c != 0) {
            None => Self::zero(p, prec),
            Some(0) => LaurentSeries { p, prec, body: Body::Nonzero { val, coeffs: dense } },
            Some(k) => LaurentSeries {
                p,
                prec,
                body: Body::Nonzero { val: val + k as i32, coeffs: dense[k..].to_vec() },
            },
        }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn precision(&self) -> i32 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.body, Body::Zero)
    }

    /// `None` for zero.
    pub fn valuation(&self) -> Option<i32> {
        match &self.body {
            Body::Zero => None,
            Body::Nonzero { val, .. } => Some(*val),
        }
    }

    /// The norm `|x| = p^(-v(x))` as an exact rational; zero for zero.
    pub fn norm(&self) -> BigRational {
        match self.valuation() {
            None => BigRational::zero(),
            Some(v) => {
                let q = BigRational::from_integer(self.p.into());
                if v >= 0 {
                    BigRational::one() / num_traits::pow(q, v as usize)
                } else {
                    num_traits::pow(q, (-v) as usize)
                }
            }
        }
    }

    /// Lower bound on the valuation: the valuation itself, or the precision
    /// for zero.
    pub fn min_valuation(&self) -> i32 {
        self.valuation().unwrap_or(self.prec)
    }

    pub fn leading_coeff(&self) -> Option<ResidueElem> {
        match &self.body {
            Body::Zero => None,
            Body::Nonzero { coeffs, .. } => Some(ResidueElem::new(coeffs[0] as i64, self.p)),
        }
    }

    /// Coefficient of `t^k`; an error when `k` is at or beyond the precision.
    pub fn coeff(&self, k: i32) -> Result<ResidueElem> {
        if k >= self.prec {
            return Err(Error::precision(format!(
                "coefficient of t^{k} requested, series known modulo t^{}",
                self.prec
            )));
        }
        Ok(ResidueElem::new(self.raw_coeff(k) as i64, self.p))
    }

    fn raw_coeff(&self, k: i32) -> u32 {
        match &self.body {
            Body::Zero => 0,
            Body::Nonzero { val, coeffs } => {
                if k < *val {
                    0
                } else {
                    coeffs.get((k - val) as usize).copied().unwrap_or(0)
                }
            }
        }
    }

    /// Known coefficients starting at the valuation.
    pub fn coeffs(&self) -> &[u32] {
        match &self.body {
            Body::Zero => &[],
            Body::Nonzero { coeffs, .. } => coeffs,
        }
    }

    /// `x t^(-v(x))`, a unit of `O`; `None` for zero.
    pub fn unit_part(&self) -> Option<LaurentSeries> {
        self.valuation().map(|v| self.shift(-v))
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i32) -> Self {
        let body = match &self.body {
            Body::Zero => Body::Zero,
            Body::Nonzero { val, coeffs } => Body::Nonzero { val: val + k, coeffs: coeffs.clone() },
        };
        LaurentSeries { p: self.p, prec: self.prec + k, body }
    }

    /// Forgets everything at and beyond `t^prec` (no-op if already coarser).
    pub fn truncate(&self, prec: i32) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        match &self.body {
            Body::Zero => Self::zero(self.p, prec),
            Body::Nonzero { val, coeffs } => {
                if *val >= prec {
                    Self::zero(self.p, prec)
                } else {
                    Self::normalized(self.p, *val, coeffs[..(prec - val) as usize].to_vec(), prec)
                }
            }
        }
    }

    /// Whether `x` is known to lie in `t^k O`: `Some(true)`/`Some(false)`
    /// when decided by the known coefficients, `None` otherwise.
    pub fn in_ideal(&self, k: i32) -> Option<bool> {
        match self.valuation() {
            Some(v) if v < k => Some(false),
            _ if self.prec >= k => Some(true),
            _ => None,
        }
    }

    fn check_prime(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            Err(Error::PrimeMismatch(self.p, other.p))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let prec = self.prec.min(other.prec);
        let lo = match (self.valuation(), other.valuation()) {
            (None, None) => return Ok(Self::zero(self.p, prec)),
            (Some(a), None) | (None, Some(a)) => a,
            (Some(a), Some(b)) => a.min(b),
        };
        if lo >= prec {
            return Ok(Self::zero(self.p, prec));
        }
        let p = self.p;
        let dense = (lo..prec).map(|k| (self.raw_coeff(k) + other.raw_coeff(k)) % p).collect();
        Ok(Self::normalized(p, lo, dense, prec))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let prec = (self.prec + other.min_valuation()).min(other.prec + self.min_valuation());
        let (Body::Nonzero { val: va, coeffs: ca }, Body::Nonzero { val: vb, coeffs: cb }) = (&self.body, &other.body) else {
            return Ok(Self::zero(self.p, prec));
        };
        let len = ca.len().min(cb.len());
        let p = self.p as u64;
        let mut dense = vec![0u32; len];
        for (i, &x) in ca.iter().take(len).enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in cb.iter().take(len - i).enumerate() {
                let slot = &mut dense[i + j];
                *slot = ((*slot as u64 + x as u64 * y as u64) % p) as u32;
            }
        }
        Ok(Self::normalized(self.p, va + vb, dense, prec))
    }

    pub fn checked_inv(&self) -> Result<Self> {
        let Body::Nonzero { val, coeffs } = &self.body else {
            return Err(Error::DivisionByZero);
        };
        let p = self.p as u64;
        let len = coeffs.len();
        let lead_inv = ResidueElem::new(coeffs[0] as i64, self.p).inv()?.value() as u64;
        let mut out = vec![0u32; len];
        out[0] = lead_inv as u32;
        for k in 1..len {
            let mut acc = 0u64;
            for j in 1..=k {
                acc = (acc + coeffs[j] as u64 * out[k - j] as u64) % p;
            }
            out[k] = ((p - acc) % p * lead_inv % p) as u32;
        }
        Ok(Self::normalized(self.p, -val, out, -val + len as i32))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        self.checked_mul(&other.checked_inv()?)
    }

    fn neg_ref(&self) -> Self {
        let body = match &self.body {
            Body::Zero => Body::Zero,
            Body::Nonzero { val, coeffs } => Body::Nonzero {
                val: *val,
                coeffs: coeffs.iter().map(|&c| (self.p - c) % self.p).collect(),
            },
        };
        LaurentSeries { p: self.p, prec: self.prec, body }
    }

    pub fn scale(&self, c: ResidueElem) -> Self {
        let p = self.p as u64;
        match &self.body {
            Body::Zero => self.clone(),
            Body::Nonzero { val, coeffs } => Self::normalized(
                self.p,
                *val,
                coeffs.iter().map(|&x| (x as u64 * c.value() as u64 % p) as u32).collect(),
                self.prec,
            ),
        }
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.checked_inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc: Option<Self> = None;
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => a.checked_mul(&sq)?,
                });
            }
            n >>= 1;
            if n > 0 {
                sq = sq.checked_mul(&sq)?;
            }
        }
        // x^0 is exactly one; give it the precision of a unit times x's unit part.
        Ok(acc.unwrap_or_else(|| {
            let v = self.min_valuation();
            Self::one(self.p, self.prec - v)
        }))
    }
}

/// Exact truncated arithmetic with precision propagation.
pub fn lf_arith(x: &LaurentSeries, y: &LaurentSeries, op: ArithOp) -> Result<LaurentSeries> {
    match op {
        ArithOp::Add => x.checked_add(y),
        ArithOp::Sub => x.checked_sub(y),
        ArithOp::Mul => x.checked_mul(y),
        ArithOp::Div => x.checked_div(y),
    }
}

/// Square root by digit-wise Hensel lifting. The leading coefficient of the
/// root is the representative in `[1, p/2]`.
pub fn lf_sqrt(x: &LaurentSeries) -> Result<LaurentSeries> {
    let Body::Nonzero { val, coeffs } = &x.body else {
        // y^2 in t^N O forces y in t^ceil(N/2) O
        return Ok(LaurentSeries::zero(x.p, Integer::div_ceil(&x.prec, &2)));
    };
    if val % 2 != 0 {
        return Err(Error::OddValuation(*val));
    }
    let p = x.p as u64;
    let lead = ResidueElem::new(coeffs[0] as i64, x.p);
    let root0 = lead.sqrt().ok_or(Error::NonResidue(coeffs[0], x.p))?;
    let inv_two_root = (root0 + root0).inv()?.value() as u64;
    let len = coeffs.len();
    let mut y = vec![0u32; len];
    y[0] = root0.value();
    for k in 1..len {
        let mut cross = 0u64;
        for i in 1..k {
            cross = (cross + y[i] as u64 * y[k - i] as u64) % p;
        }
        let rhs = (coeffs[k] as u64 + p - cross) % p;
        y[k] = (rhs * inv_two_root % p) as u32;
    }
    let half = val / 2;
    Ok(LaurentSeries::normalized(x.p, half, y, half + len as i32))
}

/// All `z` in `F` with `z^r = 1`. With residue field `F_p` these are the
/// constant series on the `gcd(r, p - 1)`-th roots of unity of `F_p^*`,
/// returned in increasing order of representative.
pub fn roots_of_unity(p: u32, r: u32, prec: i32) -> Vec<LaurentSeries> {
    assert!(r >= 1, "roots of unity of order zero");
    let d = (r as u64).gcd(&(p as u64 - 1));
    let g = primitive_root(p);
    let step = (p as u64 - 1) / d;
    let mut roots: Vec<u32> = (0..d).map(|k| g.pow(k * step).value()).collect();
    roots.sort_unstable();
    roots.into_iter().map(|c| LaurentSeries::constant(p, c as i64, prec)).collect()
}

fn primitive_root(p: u32) -> ResidueElem {
    let n = p as u64 - 1;
    let mut factors = Vec::new();
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            factors.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p)
        .map(|g| ResidueElem::new(g as i64, p))
        .find(|g| factors.iter().all(|&f| g.pow(n / f).value() != 1))
        .unwrap_or_else(|| ResidueElem::one(p))
}

impl Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: Self) -> LaurentSeries {
        self.checked_add(rhs).expect("series over the same residue field")
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: Self) -> LaurentSeries {
        self.checked_sub(rhs).expect("series over the same residue field")
    }
}

impl Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: Self) -> LaurentSeries {
        self.checked_mul(rhs).expect("series over the same residue field")
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        self.neg_ref()
    }
}

impl Neg for LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        self.neg_ref()
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.body {
            Body::Zero => write!(f, "O(t^{}) [p={}]", self.prec, self.p),
            Body::Nonzero { val, coeffs } => {
                for (k, c) in coeffs.iter().enumerate() {
                    if *c != 0 {
                        write!(f, "{c}t^{} + ", val + k as i32)?;
                    }
                }
                write!(f, "O(t^{}) [p={}]", self.prec, self.p)
            }
        }
    }
}

/// Text encoding `v=<int>;c=<c0,c1,...>;N=<int>`, with zero written as `0`.
impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.body {
            Body::Zero => write!(f, "0"),
            Body::Nonzero { val, coeffs } => {
                let last = coeffs.iter().rposition(|&c| c != 0).unwrap_or(0);
                let list: Vec<String> = coeffs[..=last].iter().map(|c| c.to_string()).collect();
                write!(f, "v={val};c={};N={}", list.join(","), self.prec)
            }
        }
    }
}

/// Precision given to a parsed `0`, which carries none of its own.
pub const PARSED_ZERO_PRECISION: i32 = 64;

/// Parses the text encoding over the residue field `F_p`.
pub fn parse_series(s: &str, p: u32) -> Result<LaurentSeries> {
    super::residue::check_odd_prime(p)?;
    let s = s.trim();
    if s == "0" {
        return Ok(LaurentSeries::zero(p, PARSED_ZERO_PRECISION));
    }
    let (mut val, mut coeffs, mut prec) = (None, None, None);
    for part in s.split(';') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value in `{part}`")))?;
        let int = |v: &str| v.trim().parse::<i64>().map_err(|e| Error::Parse(format!("`{v}`: {e}")));
        match key.trim() {
            "v" => val = Some(int(value)? as i32),
            "N" => prec = Some(int(value)? as i32),
            "c" => {
                let list: Result<Vec<i64>> = value.split(',').map(int).collect();
                let list = list?;
                if list.iter().any(|&c| c < 0 || c >= p as i64) {
                    return Err(Error::Parse(format!("coefficients must lie in [0, {p})")));
                }
                coeffs = Some(list);
            }
            other => return Err(Error::Parse(format!("unknown key `{other}`"))),
        }
    }
    let (Some(val), Some(coeffs), Some(prec)) = (val, coeffs, prec) else {
        return Err(Error::Parse(format!("`{s}` needs v, c and N")));
    };
    if val + coeffs.len() as i32 > prec {
        return Err(Error::Parse(format!("{} coefficients from t^{val} exceed N={prec}", coeffs.len())));
    }
    LaurentSeries::from_coeffs(p, val, &coeffs, prec)
}

/// Expects the prime as a `p=<int>;` prefix, e.g. `p=7;v=1;c=1;N=3`.
impl FromStr for LaurentSeries {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (head, rest) = s
            .split_once(';')
            .ok_or_else(|| Error::Parse("missing `p=` prefix".into()))?;
        let p = head
            .strip_prefix("p=")
            .ok_or_else(|| Error::Parse("missing `p=` prefix".into()))?
            .parse::<u32>()
            .map_err(|e| Error::Parse(e.to_string()))?;
        parse_series(rest, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ls(p: u32, val: i32, c: &[i64], prec: i32) -> LaurentSeries {
        LaurentSeries::from_coeffs(p, val, c, prec).unwrap()
    }

    #[test]
    fn additive_cancellation() {
        let x = ls(7, -1, &[1, 1], 10);
        let y = LaurentSeries::constant(7, -1, 10);
        let s = &x + &y;
        assert_eq!(s, ls(7, -1, &[1], 10));
        assert_eq!(s.valuation(), Some(-1));
    }

    #[test]
    fn inverse_pair() {
        let t = LaurentSeries::monomial(7, 1, 1, 10);
        let tinv = t.checked_inv().unwrap();
        assert_eq!(tinv.valuation(), Some(-1));
        let one = &t * &tinv;
        assert_eq!(one.valuation(), Some(0));
        assert_eq!(one.leading_coeff().unwrap().value(), 1);
        assert!(one.coeffs()[1..].iter().all(|&c| c == 0));
    }

    #[test]
    fn precision_rules() {
        let x = ls(5, 1, &[2, 1], 4); // known mod t^4
        let y = ls(5, -2, &[1], 3);
        assert_eq!((&x + &y).precision(), 3);
        // mul: min(Nx + v(y), Ny + v(x)) = min(4 - 2, 3 + 1) = 2
        assert_eq!((&x * &y).precision(), 2);
        // inverse of t^v u known mod t^N is known mod t^(N - 2v)
        assert_eq!(x.checked_inv().unwrap().precision(), 4 - 2);
        let z = LaurentSeries::zero(5, 3);
        assert_eq!((&z * &y).precision(), 1);
        assert!((&z * &y).is_zero());
        assert_eq!(z.checked_inv(), Err(Error::DivisionByZero));
        let other = LaurentSeries::one(7, 3);
        assert_eq!(x.checked_add(&other), Err(Error::PrimeMismatch(5, 7)));
    }

    #[test]
    fn sqrt_examples() {
        let one = LaurentSeries::one(7, 6);
        assert_eq!(lf_sqrt(&one).unwrap(), one);
        let four = LaurentSeries::constant(7, 4, 6);
        assert_eq!(lf_sqrt(&four).unwrap().leading_coeff().unwrap().value(), 2);
        let x = ls(7, 0, &[1, 1], 6);
        let y = lf_sqrt(&x).unwrap();
        let back = &y * &y;
        assert_eq!(back.precision(), 6);
        assert_eq!(back, x);
        assert_eq!(lf_sqrt(&ls(7, 1, &[1], 6)), Err(Error::OddValuation(1)));
        assert_eq!(lf_sqrt(&ls(7, 0, &[3], 6)), Err(Error::NonResidue(3, 7)));
    }

    #[test]
    fn roots_of_unity_examples() {
        let vals = |p, r| -> Vec<u32> {
            roots_of_unity(p, r, 5).iter().map(|z| z.leading_coeff().unwrap().value()).collect()
        };
        assert_eq!(vals(7, 1), vec![1]);
        assert_eq!(vals(7, 2), vec![1, 6]);
        assert_eq!(vals(7, 3), vec![1, 2, 4]);
    }

    #[test]
    fn roots_of_unity_match_exhaustive_search() {
        for p in [5u32, 7, 11, 13] {
            for r in 1..=12u32 {
                let brute: Vec<u32> =
                    (1..p).filter(|&c| ResidueElem::new(c as i64, p).pow(r as u64).value() == 1).collect();
                let got: Vec<u32> =
                    roots_of_unity(p, r, 4).iter().map(|z| z.leading_coeff().unwrap().value()).collect();
                assert_eq!(got, brute, "p={p} r={r}");
                assert_eq!(got.len() as u64, (r as u64).gcd(&(p as u64 - 1)));
            }
        }
    }

    #[test]
    fn text_encoding() {
        let x = parse_series("v=1;c=1;N=3", 7).unwrap();
        assert_eq!(x.valuation(), Some(1));
        assert_eq!(x.precision(), 3);
        assert_eq!(x.to_string(), "v=1;c=1;N=3");
        let y = parse_series("v=-2;c=3,0,5;N=4", 7).unwrap();
        assert_eq!(parse_series(&y.to_string(), 7).unwrap(), y);
        assert!(parse_series("0", 7).unwrap().is_zero());
        assert_eq!(LaurentSeries::zero(7, 3).to_string(), "0");
        assert!(parse_series("v=1;c=9;N=3", 7).is_err());
        assert!(parse_series("v=1;c=1,2,3;N=3", 7).is_err());
        assert_eq!("p=7;v=1;c=1;N=3".parse::<LaurentSeries>().unwrap(), x);
        // leading zeros are absorbed into the valuation
        assert_eq!(parse_series("v=0;c=0,2;N=3", 7).unwrap().valuation(), Some(1));
    }

    #[test]
    fn ideal_membership() {
        let x = ls(7, 2, &[3], 5);
        assert_eq!(x.in_ideal(2), Some(true));
        assert_eq!(x.in_ideal(3), Some(false));
        let z = LaurentSeries::zero(7, 2);
        assert_eq!(z.in_ideal(2), Some(true));
        assert_eq!(z.in_ideal(3), None);
    }
}
