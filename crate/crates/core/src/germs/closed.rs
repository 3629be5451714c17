use super::counting::{count_c1_exponent, count_c2};
use super::params::GermParams;
use crate::error::{Error, Result};
use crate::exactvalue::{abs_half_power, big_psi_char, ExactValue};
use crate::localfield::{LaurentSeries, ResidueElem};
use crate::symbols::{hilbert, weil_gamma};

fn sign(p: u32, s: i8) -> ExactValue {
    ExactValue::from_int(p, s as i64)
}

/// `Psi(r / 2a)`.
fn psi_r_over_2a(gp: &GermParams) -> Result<ExactValue> {
    let p = gp.p;
    let c = ResidueElem::new(gp.r as i64, p) * ResidueElem::new(2, p).inv()?;
    big_psi_char(&gp.a.checked_inv()?.scale(c))
}

/// `gamma(a^-1, Psi)`.
pub fn gamma_inv_a(gp: &GermParams) -> Result<ExactValue> {
    weil_gamma(&gp.a.checked_inv()?)
}

/// `gamma^-k` through conjugation (`gamma conj(gamma) = 1`).
fn gamma_neg_pow(gamma: &ExactValue, k: u32) -> Result<ExactValue> {
    gamma.conj().pow(k as i64)
}

/// `|a|^((r+1)/2) Psi(r/2a) (r / 2^(r-1), a^-1) gamma(a^-1)^(r-1)`.
pub fn closed_j(gp: &GermParams) -> Result<ExactValue> {
    let (p, r) = (gp.p, gp.r);
    if (r as u64).is_multiple_of(p as u64) {
        return Err(Error::precondition(format!("p = {p} divides r = {r}")));
    }
    let a_inv = gp.a.checked_inv()?;
    let c = ResidueElem::new(r as i64, p) * ResidueElem::new(2, p).pow(r as u64 - 1).inv()?;
    let sym = hilbert(&LaurentSeries::from_residue(c, 8), &a_inv)?;
    let gamma = gamma_inv_a(gp)?;
    Ok(&(&(&abs_half_power(&gp.a, r as i64 + 1)? * &psi_r_over_2a(gp)?) * &sign(p, sym)) * &gamma.pow(r as i64 - 1)?)
}

/// `|a|^(floor((r-1)/2)/2 + 1) Psi(r/2a) (r, a^-1) (1/2, a^-1)^(r-1)
/// gamma(a^-1)^floor((r-1)/2)`.
pub fn closed_i(gp: &GermParams) -> Result<ExactValue> {
    gp.require_large_p()?;
    let (p, r) = (gp.p, gp.r);
    let a_inv = gp.a.checked_inv()?;
    let l = (r - 1) / 2;
    let sym_r = hilbert(&LaurentSeries::constant(p, r as i64, 8), &a_inv)?;
    let half = ResidueElem::new(2, p).inv()?;
    let sym_half = hilbert(&LaurentSeries::from_residue(half, 8), &a_inv)?;
    let sym = sym_r * if (r - 1) % 2 == 0 { 1 } else { sym_half };
    let gamma = gamma_inv_a(gp)?;
    Ok(&(&(&abs_half_power(&gp.a, l as i64 + 2)? * &psi_r_over_2a(gp)?) * &sign(p, sym)) * &gamma.pow(l as i64)?)
}

/// Right-hand side of the germ-ratio formula:
/// `|a|^(floor(r/2)/2) gamma(a^-1)^-floor(r/2) J(a, r)`.
pub fn ratio_prop(gp: &GermParams, j: &ExactValue) -> Result<ExactValue> {
    gp.require_large_p()?;
    let k = gp.r / 2;
    let gamma = gamma_inv_a(gp)?;
    Ok(&(&abs_half_power(&gp.a, k as i64)? * &gamma_neg_pow(&gamma, k)?) * j)
}

/// The ratio with the `|a|` exponent negated,
/// `|a|^(-floor(r/2)/2) gamma(a^-1)^-floor(r/2) J(a, r)`; this is the
/// quotient of the two closed forms.
pub fn ratio_from_closed_forms(gp: &GermParams, j: &ExactValue) -> Result<ExactValue> {
    gp.require_large_p()?;
    let k = gp.r / 2;
    let gamma = gamma_inv_a(gp)?;
    Ok(&(&abs_half_power(&gp.a, -(k as i64))? * &gamma_neg_pow(&gamma, k)?) * j)
}

/// `K(alpha) = |a|^(-1 - r(r-1)/2) J(a, r)`.
pub fn germ_k(gp: &GermParams, j: &ExactValue) -> Result<ExactValue> {
    let r = gp.r as i64;
    Ok(&abs_half_power(&gp.a, 2 * (-1 - r * (r - 1) / 2))? * j)
}

/// `L(alpha) = |a|^(r - 2 - c2(r) + floor(r/2)/2) gamma(a^-1)^-floor(r/2) J(a, r)`.
pub fn germ_l(gp: &GermParams, j: &ExactValue) -> Result<ExactValue> {
    gp.require_large_p()?;
    let r = gp.r as i64;
    let k = gp.r / 2;
    let half_exp = 2 * (r - 2 - count_c2(gp.r) as i64) + k as i64;
    let gamma = gamma_inv_a(gp)?;
    Ok(&(&abs_half_power(&gp.a, half_exp)? * &gamma_neg_pow(&gamma, k)?) * j)
}

/// `L` from `K`: `|a|^(floor(r^2/4) + floor(r/2)/2) gamma^-floor(r/2) K`.
pub fn germ_l_via_k(gp: &GermParams, k_value: &ExactValue) -> Result<ExactValue> {
    gp.require_large_p()?;
    let k = gp.r / 2;
    let half_exp = 2 * count_c1_exponent(gp.r) as i64 + k as i64;
    let gamma = gamma_inv_a(gp)?;
    Ok(&(&abs_half_power(&gp.a, half_exp)? * &gamma_neg_pow(&gamma, k)?) * k_value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germs::{eval_i, eval_j, DpEvaluator};

    fn gp(p: u32, r: u32, va: u32, ua: &[i64]) -> GermParams {
        GermParams::from_parts(p, r, 1, va, ua).unwrap()
    }

    #[test]
    fn rank_one_closed_j() {
        let g = gp(7, 1, 3, &[2, 5]);
        let half = ResidueElem::new(2, 7).inv().unwrap();
        let expected = &ExactValue::from_rational(7, g.a.norm())
            * &big_psi_char(&g.a.checked_inv().unwrap().scale(half)).unwrap();
        assert_eq!(closed_j(&g).unwrap(), expected);
        assert_eq!(closed_j(&g).unwrap(), eval_j(&g, &DpEvaluator).unwrap());
        // K at r = 1 is Psi(1 / 2a)
        let k = germ_k(&g, &expected).unwrap();
        assert_eq!(k, big_psi_char(&g.a.checked_inv().unwrap().scale(half)).unwrap());
    }

    #[test]
    fn rank_two_substitutions() {
        let g = gp(7, 2, 3, &[3]);
        let a_inv = g.a.checked_inv().unwrap();
        let gamma = gamma_inv_a(&g).unwrap();
        let two = LaurentSeries::constant(7, 2, 8);
        let expected_j = &(&(&abs_half_power(&g.a, 3).unwrap() * &big_psi_char(&a_inv).unwrap())
            * &ExactValue::from_int(7, hilbert(&two, &a_inv).unwrap() as i64))
            * &gamma;
        assert_eq!(closed_j(&g).unwrap(), expected_j);
        let g11 = gp(11, 2, 3, &[3]);
        let expected_i = &ExactValue::from_rational(11, g11.a.norm())
            * &big_psi_char(&g11.a.checked_inv().unwrap()).unwrap();
        assert_eq!(closed_i(&g11).unwrap(), expected_i);
    }

    #[test]
    fn closed_forms_match_sums_at_p11_r3() {
        let g = gp(11, 3, 3, &[1]);
        assert_eq!(closed_j(&g).unwrap(), eval_j(&g, &DpEvaluator).unwrap());
        assert_eq!(closed_i(&g).unwrap(), eval_i(&g, &DpEvaluator).unwrap());
    }

    #[test]
    fn closed_i_at_precondition_boundary() {
        let g = gp(13, 5, 3, &[1]);
        assert_eq!(closed_i(&g).unwrap(), eval_i(&g, &DpEvaluator).unwrap());
        assert!(closed_i(&gp(11, 5, 3, &[1])).is_err());
    }

    #[test]
    fn closed_j_rejects_p_dividing_r() {
        assert!(closed_j(&gp(3, 3, 3, &[1])).is_err());
    }

    #[test]
    fn ratio_at_rank_one_is_j() {
        let g = gp(7, 1, 3, &[1]);
        let j = eval_j(&g, &DpEvaluator).unwrap();
        assert_eq!(ratio_prop(&g, &j).unwrap(), j);
    }

    #[test]
    fn closed_form_quotient_matches_sums() {
        for (p, r) in [(11, 3), (13, 4), (7, 2)] {
            let g = gp(p, r, 3, &[1]);
            let j = eval_j(&g, &DpEvaluator).unwrap();
            assert_eq!(ratio_from_closed_forms(&g, &j).unwrap(), eval_i(&g, &DpEvaluator).unwrap());
        }
    }

    #[test]
    fn germ_l_two_ways() {
        for (p, r) in [(7, 2), (11, 3), (13, 4), (13, 5)] {
            let g = gp(p, r, 3, &[2]);
            let j = eval_j(&g, &DpEvaluator).unwrap();
            let k = germ_k(&g, &j).unwrap();
            assert_eq!(germ_l(&g, &j).unwrap(), germ_l_via_k(&g, &k).unwrap());
        }
        // r = 2: L = |a|^(-1/2) gamma^-1 J
        let g = gp(7, 2, 3, &[1]);
        let j = eval_j(&g, &DpEvaluator).unwrap();
        let gamma = gamma_inv_a(&g).unwrap();
        let expected = &(&abs_half_power(&g.a, -1).unwrap() * &gamma.inverse().unwrap()) * &j;
        assert_eq!(germ_l(&g, &j).unwrap(), expected);
    }
}
