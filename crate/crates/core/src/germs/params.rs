use crate::error::{Error, Result};
use crate::localfield::{check_odd_prime, LaurentSeries};

/// Smallest `v(a)` at which the germ sums are asserted to match their
/// closed forms at congruence level `m`.
pub const fn germ_regime_threshold(m: u32) -> u32 {
    2 * m + 1
}

/// Extra precision carried by `a` beyond what any germ computation reads.
const PRECISION_SLACK: i32 = 16;

/// Prime, rank, congruence level and the scaling element `a` of a germ
/// computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GermParams {
    pub p: u32,
    pub r: u32,
    pub m: u32,
    pub a: LaurentSeries,
}

impl GermParams {
    pub fn new(p: u32, r: u32, m: u32, a: LaurentSeries) -> Result<Self> {
        check_odd_prime(p)?;
        if a.modulus() != p {
            return Err(Error::PrimeMismatch(p, a.modulus()));
        }
        if r == 0 || m == 0 {
            return Err(Error::precondition("rank and congruence level must be positive"));
        }
        match a.valuation() {
            Some(v) if v >= 1 => {}
            _ => return Err(Error::precondition("a must be nonzero with v(a) >= 1")),
        }
        // a^-1 must still be known modulo t^(m + v(a)) after inversion
        let va = a.valuation().unwrap_or(0);
        if a.precision() - 2 * va < m as i32 {
            return Err(Error::precision(format!("a known modulo t^{} only", a.precision())));
        }
        Ok(GermParams { p, r, m, a })
    }

    /// `a = t^va (ua[0] + ua[1] t + ...)`.
    pub fn from_parts(p: u32, r: u32, m: u32, va: u32, ua: &[i64]) -> Result<Self> {
        check_odd_prime(p)?;
        if ua.is_empty() || ua[0].rem_euclid(p as i64) == 0 {
            return Err(Error::precondition("unit part must have a nonzero constant term"));
        }
        let va = va as i32;
        let prec = 2 * va + m as i32 + ua.len() as i32 + PRECISION_SLACK;
        Self::new(p, r, m, LaurentSeries::from_coeffs(p, va, ua, prec)?)
    }

    pub fn va(&self) -> u32 {
        self.a.valuation().expect("validated nonzero") as u32
    }

    pub fn in_germ_regime(&self) -> bool {
        self.va() >= germ_regime_threshold(self.m)
    }

    pub fn with_rank(&self, r: u32) -> Self {
        GermParams { r, ..self.clone() }
    }

    /// Requires `p > 2r + 1`, the standing hypothesis of the `I`-side formulas.
    pub fn require_large_p(&self) -> Result<()> {
        if self.p <= 2 * self.r + 1 {
            return Err(Error::precondition(format!("p = {} must exceed 2r + 1 = {}", self.p, 2 * self.r + 1)));
        }
        Ok(())
    }
}
