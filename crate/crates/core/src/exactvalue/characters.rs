use num_rational::BigRational;

use super::field::{q_pow, ExactValue};
use crate::error::{Error, Result};
use crate::localfield::{LaurentSeries, MatrixLF, ResidueElem};

/// `psi(c) = zeta_p^c` with `zeta_p = zeta^4`.
pub fn psi_char(c: ResidueElem) -> ExactValue {
    ExactValue::zeta_pow(c.modulus(), 4 * c.value() as i64)
}

/// `Psi(x) = psi(coefficient of t^-1)`, the conductor-0 character of `F`.
pub fn big_psi_char(x: &LaurentSeries) -> Result<ExactValue> {
    Ok(psi_char(x.coeff(-1)?))
}

/// `theta(n) = Psi(sum of n_{i,i+1} / 2)` on upper unitriangular `n`.
pub fn theta_char(n: &MatrixLF) -> Result<ExactValue> {
    if !n.is_upper_unitriangular() {
        return Err(Error::precondition("theta is defined on upper unitriangular matrices"));
    }
    let p = n.modulus();
    let half = ResidueElem::new(2, p).inv()?;
    big_psi_char(&n.superdiagonal_sum()?.scale(half))
}

/// `g = sum_{c != 0} (c/p) psi(c)`.
pub fn gauss_sum(p: u32) -> ExactValue {
    let mut c = vec![BigRational::from_integer(0.into()); 4 * p as usize];
    for k in 1..p {
        let l = ResidueElem::new(k as i64, p).legendre();
        c[4 * k as usize] = BigRational::from_integer(l.into());
    }
    ExactValue::from_cyclic(p, c)
}

/// The positive square root of `p` under `zeta = exp(2 pi i / 4p)`:
/// `g` for `p = 1 mod 4` and `-i g` for `p = 3 mod 4`.
pub fn sqrt_q(p: u32) -> ExactValue {
    let g = gauss_sum(p);
    if p % 4 == 1 {
        g
    } else {
        -&(&ExactValue::imag_unit(p) * &g)
    }
}

/// `sqrt(p)^k`; negative `k` uses `sqrt(p)^-1 = sqrt(p) / p`.
pub fn sqrt_q_pow(p: u32, k: i64) -> ExactValue {
    let half = k.div_euclid(2);
    let base = ExactValue::from_rational(p, q_pow(p, half));
    if k.rem_euclid(2) == 1 {
        &base * &sqrt_q(p)
    } else {
        base
    }
}

/// `|a|^(k/2) = sqrt(q)^(-v(a) k)`.
pub fn abs_half_power(a: &LaurentSeries, k: i64) -> Result<ExactValue> {
    let v = a.valuation().ok_or(Error::DivisionByZero)?;
    Ok(sqrt_q_pow(a.modulus(), -(v as i64) * k))
}
