use super::congruence::CongruenceFunction;
use super::integrals::orbital_j;
use super::label::OrbitLabel;
use crate::error::{Error, Result};
use crate::exactvalue::ExactValue;
use crate::germs::{eval_j, germ_k, GermParams, GermSumEvaluator};
use crate::localfield::{roots_of_unity, LaurentSeries};

/// Both sides of the rank-2 germ expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionCheck {
    pub lhs: ExactValue,
    pub rhs: ExactValue,
    pub equal: bool,
}

/// `J(alpha beta, f)` against `sum_{z^2 = 1} K(z alpha) J(w_{G_2} z^-1 beta, f)`
/// with `alpha = diag(a, -a^-1)`. `K` comes from the germ sums through
/// `evaluator`; both orbital integrals come from the tree search. The
/// radius defaults to `v(a) + m`.
pub fn germ_expansion_check(
    beta_unit: &LaurentSeries,
    f: &CongruenceFunction,
    gp: &GermParams,
    evaluator: &dyn GermSumEvaluator,
    radius: Option<i32>,
) -> Result<ExpansionCheck> {
    let p = gp.p;
    if gp.r != 2 || f.rank() != 2 {
        return Err(Error::precondition("the germ expansion is checked at rank 2"));
    }
    if beta_unit.modulus() != p || f.modulus() != p {
        return Err(Error::PrimeMismatch(p, beta_unit.modulus()));
    }
    if beta_unit.valuation() != Some(0) {
        return Err(Error::precondition("beta must be a unit"));
    }
    let radius = radius.unwrap_or((gp.va() + gp.m) as i32);
    let a = &gp.a;
    let t1 = a.checked_mul(beta_unit)?;
    let t2 = beta_unit.checked_div(a)?.scale(crate::localfield::ResidueElem::new(-1, p));
    let lhs = orbital_j(&OrbitLabel::diagonal(vec![t1, t2])?, f, radius)?;
    let mut rhs = ExactValue::zero(p);
    for z in roots_of_unity(p, 2, a.precision()) {
        let small = OrbitLabel::longest(2, beta_unit.checked_div(&z)?)?;
        let j_small = orbital_j(&small, f, 1)?;
        if j_small.is_zero() {
            continue;
        }
        let gz = GermParams::new(p, 2, gp.m, a.checked_mul(&z)?)?;
        let k = germ_k(&gz, &eval_j(&gz, evaluator)?)?;
        rhs = &rhs + &(&k * &j_small);
    }
    let equal = lhs == rhs;
    Ok(ExpansionCheck { lhs, rhs, equal })
}
