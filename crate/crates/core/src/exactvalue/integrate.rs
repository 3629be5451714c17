use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::field::{q_pow, ExactValue};
use crate::error::{Error, Result};
use crate::localfield::LaurentSeries;

/// A polynomial condition `poly(x) in t^exponent O` on the variables.
#[derive(Clone)]
pub struct Constraint {
    pub poly: Arc<dyn Fn(&[LaurentSeries]) -> Result<LaurentSeries> + Send + Sync>,
    pub exponent: i32,
}

/// Integration domain: variable `i` ranges over `center_i + t^e_i O`, cut
/// out by the constraints. Integrand and constraints must only depend on
/// the variables modulo `t^modulus`.
#[derive(Clone)]
pub struct DomainSpec {
    pub p: u32,
    pub vars: Vec<(LaurentSeries, i32)>,
    pub constraints: Vec<Constraint>,
    pub modulus: i32,
}

impl DomainSpec {
    pub fn new(p: u32, modulus: i32) -> Self {
        DomainSpec { p, vars: Vec::new(), constraints: Vec::new(), modulus }
    }

    /// Adds a variable ranging over `center + t^exponent O`.
    pub fn var(mut self, center: LaurentSeries, exponent: i32) -> Self {
        self.vars.push((center, exponent));
        self
    }

    pub fn constraint(
        mut self,
        exponent: i32,
        poly: impl Fn(&[LaurentSeries]) -> Result<LaurentSeries> + Send + Sync + 'static,
    ) -> Self {
        self.constraints.push(Constraint { poly: Arc::new(poly), exponent });
        self
    }

    pub fn with_modulus(&self, modulus: i32) -> Self {
        DomainSpec { modulus, ..self.clone() }
    }

    /// Number of representative tuples modulo `t^modulus`.
    pub fn point_count(&self) -> u128 {
        let digits: i64 = self.vars.iter().map(|(_, e)| (self.modulus - e).max(0) as i64).sum();
        (self.p as u128).saturating_pow(digits as u32)
    }

    /// Visits every representative tuple satisfying the constraints.
    fn for_each_point(&self, mut visit: impl FnMut(&[LaurentSeries]) -> Result<()>) -> Result<()> {
        let p = self.p;
        let m = self.modulus;
        let widths: Vec<usize> = self.vars.iter().map(|(_, e)| (m - e).max(0) as usize).collect();
        let mut digits: Vec<Vec<i64>> = widths.iter().map(|&w| vec![0; w]).collect();
        let centers: Vec<LaurentSeries> = self.vars.iter().map(|(c, _)| c.truncate(m)).collect();
        if let Some(c) = centers.iter().find(|c| c.precision() < m) {
            return Err(Error::precision(format!(
                "center known modulo t^{} but the domain needs t^{m}",
                c.precision()
            )));
        }
        loop {
            let point = centers
                .iter()
                .zip(&self.vars)
                .zip(&digits)
                .map(|((c, (_, e)), d)| {
                    let offset = LaurentSeries::from_coeffs(p, *e, d, m.max(*e))?.truncate(m);
                    c.checked_add(&offset)
                })
                .collect::<Result<Vec<_>>>()?;
            let mut inside = true;
            for con in &self.constraints {
                let value = (con.poly)(&point)?;
                match value.in_ideal(con.exponent) {
                    Some(true) => {}
                    Some(false) => {
                        inside = false;
                        break;
                    }
                    None => {
                        return Err(Error::precision(format!(
                            "constraint value known modulo t^{} cannot decide membership in t^{}",
                            value.precision(),
                            con.exponent
                        )))
                    }
                }
            }
            if inside {
                visit(&point)?;
            }
            // odometer step
            let mut carried = true;
            'outer: for d in digits.iter_mut() {
                for x in d.iter_mut() {
                    *x += 1;
                    if *x < p as i64 {
                        carried = false;
                        break 'outer;
                    }
                    *x = 0;
                }
            }
            if carried {
                return Ok(());
            }
        }
    }

    /// `q^(-sum of digit counts)`: the volume of one representative cell.
    fn cell_volume(&self) -> BigRational {
        let exp: i64 = self.vars.iter().map(|(_, e)| self.modulus.max(*e) as i64).sum();
        q_pow(self.p, -exp)
    }
}

/// Exact integral of a locally constant function over the domain, as the
/// volume-weighted sum over representatives modulo `t^M`.
pub fn integrate(
    d: &DomainSpec,
    f: impl Fn(&[LaurentSeries]) -> Result<ExactValue>,
) -> Result<ExactValue> {
    let mut acc = ExactValue::zero(d.p);
    d.for_each_point(|x| {
        acc = &acc + &f(x)?;
        Ok(())
    })?;
    Ok(acc.scale(&d.cell_volume()))
}

/// Integral of `Psi(phase(x))` over the domain. The phase must be known at
/// least modulo `O`.
pub fn integrate_phase(
    d: &DomainSpec,
    phase: impl Fn(&[LaurentSeries]) -> Result<LaurentSeries>,
) -> Result<ExactValue> {
    let p = d.p;
    let mut counts = vec![0i64; p as usize];
    d.for_each_point(|x| {
        let c = phase(x)?.coeff(-1)?;
        counts[c.value() as usize] += 1;
        Ok(())
    })?;
    Ok(residue_counts_value(p, &counts).scale(&d.cell_volume()))
}

/// `sum_c counts[c] psi(c)`.
pub fn residue_counts_value<T: Into<BigInt> + Clone>(p: u32, counts: &[T]) -> ExactValue {
    let mut c = vec![BigRational::from_integer(0.into()); 4 * p as usize];
    for (k, n) in counts.iter().enumerate() {
        c[4 * k] = BigRational::from_integer(n.clone().into());
    }
    ExactValue::from_cyclic(p, c)
}

/// [`integrate_phase`] at modulus `M` and `M + 1`; errors unless they agree.
pub fn integrate_phase_stable(
    d: &DomainSpec,
    phase: impl Fn(&[LaurentSeries]) -> Result<LaurentSeries>,
) -> Result<ExactValue> {
    let v = integrate_phase(d, &phase)?;
    let w = integrate_phase(&d.with_modulus(d.modulus + 1), &phase)?;
    if v != w {
        return Err(Error::NotStabilized { radius: d.modulus });
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::ResidueElem;

    fn zero(p: u32) -> LaurentSeries {
        LaurentSeries::zero(p, 64)
    }

    #[test]
    fn volumes() {
        let p = 7;
        let d = DomainSpec::new(p, 1).var(zero(p), 0);
        assert!(integrate(&d, |_| Ok(ExactValue::one(p))).unwrap().is_one());
        for m in 1..4 {
            let d = DomainSpec::new(p, m + 1).var(zero(p), m);
            let v = integrate(&d, |_| Ok(ExactValue::one(p))).unwrap();
            assert_eq!(v, ExactValue::from_rational(p, q_pow(p, -(m as i64))));
        }
    }

    #[test]
    fn full_character_sum_vanishes() {
        let p = 7;
        let d = DomainSpec::new(p, 1).var(zero(p), 0);
        let v = integrate_phase_stable(&d, |x| Ok(x[0].shift(-1))).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn constraint_and_stabilization() {
        // x in O with x^2 = 1 mod t^2: the two cosets +-1 + t^2 O
        let p = 5;
        let d = DomainSpec::new(p, 2)
            .var(zero(p), 0)
            .constraint(2, move |x| x[0].checked_mul(&x[0])?.checked_sub(&LaurentSeries::one(p, 64)));
        let v = integrate(&d, |_| Ok(ExactValue::one(p))).unwrap();
        assert_eq!(v, ExactValue::from_rational(p, q_pow(p, -2) * BigRational::from_integer(2.into())));
        let w = integrate(&d.with_modulus(3), |_| Ok(ExactValue::one(p))).unwrap();
        assert_eq!(v, w);
        // Psi(x / t^2) over O: only x in tO survives at first order
        let d = DomainSpec::new(p, 2).var(zero(p), 0);
        let s = integrate_phase_stable(&d, |x| Ok(x[0].shift(-2).scale(ResidueElem::new(3, p)))).unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn phase_precision_is_checked() {
        let p = 5;
        let d = DomainSpec::new(p, 1).var(zero(p), 0);
        assert!(integrate_phase(&d, |x| Ok(x[0].shift(-3))).is_err());
    }
}
