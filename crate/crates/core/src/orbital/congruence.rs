use crate::error::{Error, Result};
use crate::exactvalue::ExactValue;
use crate::localfield::{LaurentSeries, MatrixLF};

/// Whether a cell of matrices lies inside the support, outside it, or
/// straddles the boundary at the precision available.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    In,
    Out,
    Unknown,
}

/// `scale * char(g0 K_m)`, intersected with the symmetric matrices when
/// `symmetric_only`; `K_m = Id + t^m Mat_r(O)`.
#[derive(Clone, Debug)]
pub struct CongruenceFunction {
    pub base: MatrixLF,
    pub level: u32,
    pub scale: ExactValue,
    pub symmetric_only: bool,
    base_inv: MatrixLF,
}

impl CongruenceFunction {
    pub fn new(base: MatrixLF, level: u32, scale: ExactValue, symmetric_only: bool) -> Result<Self> {
        if level == 0 {
            return Err(Error::precondition("congruence level must be at least 1"));
        }
        if scale.prime() != base.modulus() {
            return Err(Error::PrimeMismatch(base.modulus(), scale.prime()));
        }
        if symmetric_only && !base.is_symmetric() {
            return Err(Error::precondition("symmetric test function needs a symmetric base point"));
        }
        let base_inv = base.inverse()?;
        Ok(CongruenceFunction { base, level, scale, symmetric_only, base_inv })
    }

    /// `scale * char(w_{G_r} K_m)`.
    pub fn longest_weyl(p: u32, r: usize, m: u32, scale: ExactValue, symmetric_only: bool, prec: i32) -> Result<Self> {
        Self::new(MatrixLF::longest_weyl(p, r, prec), m, scale, symmetric_only)
    }

    /// `char(K_m)`.
    pub fn principal(p: u32, r: usize, m: u32, prec: i32) -> Result<Self> {
        Self::new(MatrixLF::identity(p, r, prec), m, ExactValue::one(p), false)
    }

    pub fn rank(&self) -> usize {
        self.base.size()
    }

    pub fn modulus(&self) -> u32 {
        self.base.modulus()
    }

    pub fn is_zero(&self) -> bool {
        self.scale.is_zero()
    }

    /// Decides `x in g0 K_m` for every matrix agreeing with `x` to its
    /// tracked precision.
    pub fn classify(&self, x: &MatrixLF) -> Result<Membership> {
        if x.size() != self.rank() {
            return Err(Error::precondition("matrix size differs from the test function's rank"));
        }
        let r = x.size();
        let mut unknown = false;
        if self.symmetric_only {
            for i in 0..r {
                for j in i + 1..r {
                    // a difference known only to be small counts as symmetric
                    if !x.get(i, j).checked_sub(x.get(j, i))?.is_zero() {
                        return Ok(Membership::Out);
                    }
                }
            }
        }
        let y = self.base_inv.checked_mul(x)?;
        let m = self.level as i32;
        let p = self.modulus();
        for i in 0..r {
            for j in 0..r {
                let mut e = y.get(i, j).clone();
                if i == j {
                    e = e.checked_sub(&LaurentSeries::one(p, e.precision().max(m)))?;
                }
                match e.in_ideal(m) {
                    Some(false) => return Ok(Membership::Out),
                    Some(true) => {}
                    None => unknown = true,
                }
            }
        }
        Ok(if unknown { Membership::Unknown } else { Membership::In })
    }

    /// The value at `x`, which must be known precisely enough to decide
    /// membership.
    pub fn evaluate(&self, x: &MatrixLF) -> Result<ExactValue> {
        if self.is_zero() {
            return Ok(ExactValue::zero(self.modulus()));
        }
        match self.classify(x)? {
            Membership::In => Ok(self.scale.clone()),
            Membership::Out => Ok(ExactValue::zero(self.modulus())),
            Membership::Unknown => Err(Error::precision("matrix too coarse to decide membership in g0 K_m")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(p: u32, v: i64) -> LaurentSeries {
        LaurentSeries::constant(p, v, 20)
    }

    #[test]
    fn membership() {
        let p = 7;
        let f = CongruenceFunction::longest_weyl(p, 2, 1, ExactValue::one(p), false, 20).unwrap();
        let tt = LaurentSeries::monomial(p, 1, 1, 20);
        let inside = MatrixLF::new(2, vec![tt.clone(), c(p, 1), c(p, 1), tt.clone()]).unwrap();
        assert_eq!(f.classify(&inside).unwrap(), Membership::In);
        let outside = MatrixLF::new(2, vec![c(p, 1), c(p, 1), c(p, 1), tt.clone()]).unwrap();
        assert_eq!(f.classify(&outside).unwrap(), Membership::Out);
        let coarse = MatrixLF::new(2, vec![LaurentSeries::zero(p, 0), c(p, 1), c(p, 1), tt]).unwrap();
        assert_eq!(f.classify(&coarse).unwrap(), Membership::Unknown);
        assert!(f.evaluate(&coarse).is_err());
    }

    #[test]
    fn symmetric_restriction() {
        let p = 7;
        let f = CongruenceFunction::principal(p, 2, 1, 20).unwrap();
        let g = CongruenceFunction::new(f.base.clone(), 1, ExactValue::one(p), true).unwrap();
        let x = MatrixLF::new(2, vec![c(p, 1), LaurentSeries::monomial(p, 1, 1, 20), LaurentSeries::monomial(p, 2, 1, 20), c(p, 1)])
            .unwrap();
        assert_eq!(f.classify(&x).unwrap(), Membership::In);
        assert_eq!(g.classify(&x).unwrap(), Membership::Out);
        let bad = MatrixLF::new(2, vec![c(p, 1), c(p, 1), c(p, 0), c(p, 1)]).unwrap();
        assert!(CongruenceFunction::new(bad, 1, ExactValue::one(p), true).is_err());
    }
}
