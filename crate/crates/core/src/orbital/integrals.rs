use super::congruence::CongruenceFunction;
use super::label::{kloosterman_point, levi_positions, radical_positions, relevant_representative, unipotent, upper_positions, OrbitLabel};
use super::search::{SearchProblem, DEFAULT_NODE_BUDGET};
use crate::error::{Error, Result};
use crate::exactvalue::{q_pow, ExactValue};
use crate::germs::count_c1_exponent;
use crate::localfield::{Composition, LaurentSeries, MatrixLF, ResidueElem};

pub(crate) fn check_rank(r: usize) -> Result<()> {
    if !(2..=3).contains(&r) {
        return Err(Error::precondition(format!("orbital integrals are implemented for r in {{2, 3}}, not {r}")));
    }
    Ok(())
}

fn check_compatible(o: &OrbitLabel, f: &CongruenceFunction, radius: i32) -> Result<()> {
    check_rank(o.rank())?;
    if f.rank() != o.rank() {
        return Err(Error::precondition("test function and orbit have different ranks"));
    }
    if f.modulus() != o.modulus() {
        return Err(Error::PrimeMismatch(o.modulus(), f.modulus()));
    }
    if radius < 0 {
        return Err(Error::precondition("radius must be non-negative"));
    }
    Ok(())
}

/// Precision carried by the constant matrices of a search at `radius`.
pub(crate) fn working_precision(spread: i32, m: u32, radius: i32) -> i32 {
    4 * radius + 2 * spread + 2 * m as i32 + 16
}

/// Finest coordinate precision a search may refine to.
fn refinement_cap(spread: i32, m: u32, radius: i32) -> i32 {
    2 * radius + 2 * spread + m as i32 + 4
}

/// Runs `compute` at `radius` and `radius + 1` and insists on agreement.
pub(crate) fn stabilized(radius: i32, compute: impl Fn(i32) -> Result<ExactValue>) -> Result<ExactValue> {
    let v = compute(radius)?;
    if v != compute(radius + 1)? {
        return Err(Error::NotStabilized { radius });
    }
    Ok(v)
}

fn superdiagonal_phase(positions: &[(usize, usize)], c: ResidueElem) -> Vec<ResidueElem> {
    positions
        .iter()
        .map(|&(i, j)| if j == i + 1 { c } else { ResidueElem::zero(c.modulus()) })
        .collect()
}

/// Coordinates of `N_r / (N_r)_{w t}`: all of `N_r`, except that for
/// `w_{G_3}` the stabilizer is cut by the cross-section `n_12 = 0`.
fn quotient_positions(c: &Composition) -> Vec<(usize, usize)> {
    let all = upper_positions(c.rank());
    if c.rank() == 3 && c.parts() == [3] {
        all.into_iter().filter(|&pos| pos != (0, 1)).collect()
    } else {
        all
    }
}

fn orbital_i_at(o: &OrbitLabel, phi: &CongruenceFunction, radius: i32) -> Result<ExactValue> {
    let (p, r) = (o.modulus(), o.rank());
    let spread = o.valuation_spread();
    let prec = working_precision(spread, phi.level, radius);
    let wt = relevant_representative(o, prec);
    let positions = quotient_positions(&o.composition);
    let point = |x: &[LaurentSeries]| -> Result<MatrixLF> {
        let n = unipotent(p, r, &positions, x, prec);
        MatrixLF::product(&[&n.transpose(), &wt, &n])
    };
    SearchProblem {
        p,
        radius,
        // theta^2(n) = Psi(sum n_{i,i+1})
        phase: superdiagonal_phase(&positions, ResidueElem::new(1, p)),
        point: &point,
        f: phi,
        max_precision: refinement_cap(spread, phi.level, radius),
        node_budget: DEFAULT_NODE_BUDGET,
    }
    .run()
}

/// `I(w t, phi) = int phi(tn . w t . n) theta^2(n) dn` over
/// `N_r / (N_r)_{w t}`, each coordinate ranging over `t^-radius O`.
pub fn orbital_i(o: &OrbitLabel, phi: &CongruenceFunction, radius: i32) -> Result<ExactValue> {
    check_compatible(o, phi, radius)?;
    stabilized(radius, |rad| orbital_i_at(o, phi, rad))
}

fn orbital_j_at(o: &OrbitLabel, f: &CongruenceFunction, radius: i32) -> Result<ExactValue> {
    let (p, r) = (o.modulus(), o.rank());
    let spread = o.valuation_spread();
    let prec = working_precision(spread, f.level, radius);
    let rad = radical_positions(&o.composition);
    let lev = levi_positions(&o.composition);
    let (k1, k2) = (rad.len(), lev.len());
    let point = |x: &[LaurentSeries]| -> Result<MatrixLF> {
        let u1 = unipotent(p, r, &rad, &x[..k1], prec);
        let v = unipotent(p, r, &lev, &x[k1..k1 + k2], prec);
        let u2 = unipotent(p, r, &rad, &x[k1 + k2..], prec);
        kloosterman_point(o, &u1, &v, &u2, prec)
    };
    // theta(u1 u2 v) = Psi(sum of superdiagonal entries / 2)
    let half = ResidueElem::new(2, p).inv()?;
    let mut phase = superdiagonal_phase(&rad, half);
    phase.extend(superdiagonal_phase(&lev, half));
    phase.extend(superdiagonal_phase(&rad, half));
    SearchProblem {
        p,
        radius,
        phase,
        point: &point,
        f,
        max_precision: refinement_cap(spread, f.level, radius),
        node_budget: DEFAULT_NODE_BUDGET,
    }
    .run()
}

/// `J(w t, f) = int f(tu1 . w t . v . u2) theta(u1 u2 v) du1 dv du2`, with
/// `f` read on the Kloosterman point itself (the leading `w_{G_r}` is
/// absorbed into the test function).
pub fn orbital_j(o: &OrbitLabel, f: &CongruenceFunction, radius: i32) -> Result<ExactValue> {
    check_compatible(o, f, radius)?;
    stabilized(radius, |rad| orbital_j_at(o, f, rad))
}

/// `I(w_{G_r} z, phi)` with `phi = c1(r) char(w_{G_r} K_m cap S_r)`; the
/// value is 1 for `z = 1` and 0 otherwise.
pub fn unit_sym_test(r: usize, z: &LaurentSeries, m: u32) -> Result<ExactValue> {
    check_rank(r)?;
    let p = z.modulus();
    if !z.pow(r as i64)?.checked_sub(&LaurentSeries::one(p, z.precision()))?.is_zero() {
        return Err(Error::precondition(format!("z is not an r-th root of unity for r = {r}")));
    }
    let radius = 1;
    let prec = working_precision(0, m, radius) + z.precision();
    let c1 = ExactValue::from_rational(p, q_pow(p, m as i64 * count_c1_exponent(r as u32) as i64));
    let phi = CongruenceFunction::longest_weyl(p, r, m, c1, true, prec)?;
    orbital_i(&OrbitLabel::longest(r, z.clone())?, &phi, radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::roots_of_unity;

    fn c(p: u32, v: i64) -> LaurentSeries {
        LaurentSeries::constant(p, v, 40)
    }

    #[test]
    fn unit_orbit_rank_two_and_three() {
        for (r, p) in [(2usize, 7u32), (3, 7)] {
            for z in roots_of_unity(p, r as u32, 30) {
                let v = unit_sym_test(r, &z, 1).unwrap();
                if z == LaurentSeries::one(p, 30) {
                    assert!(v.is_one(), "r = {r}");
                } else {
                    assert!(v.is_zero(), "r = {r}, z = {z}");
                }
            }
        }
        assert!(unit_sym_test(2, &c(7, 3), 1).is_err());
        assert!(unit_sym_test(4, &c(7, 1), 1).is_err());
    }

    #[test]
    fn far_orbit_vanishes() {
        let p = 7;
        let far = LaurentSeries::monomial(p, 1, 12, 40);
        let o = OrbitLabel::diagonal(vec![far, c(p, 1)]).unwrap();
        let phi = CongruenceFunction::longest_weyl(p, 2, 1, ExactValue::one(p), true, 40).unwrap();
        assert!(orbital_i(&o, &phi, 1).unwrap().is_zero());
    }

    #[test]
    fn single_coset_orbital_i() {
        // phi = char(P0 K_m cap S), P0 = tn0 n0 with n0_12 = t^-1: the support
        // is x in t^-1 + t^(m+2) O and theta^2 = psi(1)
        let p = 7;
        let m = 1;
        let x0 = LaurentSeries::monomial(p, 1, -1, 40);
        let n0 = unipotent(p, 2, &[(0, 1)], &[x0], 40);
        let p0 = n0.transpose().checked_mul(&n0).unwrap();
        let phi = CongruenceFunction::new(p0, m, ExactValue::one(p), true).unwrap();
        let o = OrbitLabel::diagonal(vec![c(p, 1), c(p, 1)]).unwrap();
        let expected = ExactValue::zeta_pow(p, 4).scale(&q_pow(p, -(m as i64 + 2)));
        assert_eq!(orbital_i(&o, &phi, 2).unwrap(), expected);
    }

    #[test]
    fn small_orbit_j_is_one_dimensional() {
        // w_{G_2} beta: J = int f(w beta v) theta(v) dv; with f = char(w K_m)
        // this is q^-m [beta = 1 mod t^m]
        let p = 7;
        for m in 1..=2u32 {
            let f = CongruenceFunction::longest_weyl(p, 2, m, ExactValue::one(p), false, 40).unwrap();
            let one = OrbitLabel::longest(2, c(p, 1)).unwrap();
            assert_eq!(orbital_j(&one, &f, 1).unwrap(), ExactValue::from_rational(p, q_pow(p, -(m as i64))));
            let minus = OrbitLabel::longest(2, c(p, -1)).unwrap();
            assert!(orbital_j(&minus, &f, 1).unwrap().is_zero());
        }
    }
}
