//! The tame Hilbert symbol and the Weil constant `gamma(a, Psi)`.

use crate::error::{Error, Result};
use crate::exactvalue::{abs_half_power, integrate_phase, DomainSpec, ExactValue};
use crate::localfield::{LaurentSeries, ResidueElem};

fn valuation_and_unit(x: &LaurentSeries) -> Result<(i64, ResidueElem)> {
    match (x.valuation(), x.leading_coeff()) {
        (Some(v), Some(u)) => Ok((v as i64, u)),
        _ => Err(Error::precondition("Hilbert symbol of zero")),
    }
}

fn sign_pow(s: i8, e: i64) -> i8 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        s
    }
}

/// Tame Hilbert symbol `(a, b)` for odd `p`.
pub fn hilbert(a: &LaurentSeries, b: &LaurentSeries) -> Result<i8> {
    if a.modulus() != b.modulus() {
        return Err(Error::PrimeMismatch(a.modulus(), b.modulus()));
    }
    let p = a.modulus();
    let (va, ua) = valuation_and_unit(a)?;
    let (vb, ub) = valuation_and_unit(b)?;
    let minus_one = ResidueElem::new(-1, p).legendre();
    Ok(sign_pow(minus_one, va * vb) * sign_pow(ua.legendre(), vb) * sign_pow(ub.legendre(), va))
}

/// Decides `(a, b)` by searching for a primitive solution of
/// `z^2 = a x^2 + b y^2` modulo `t^3`. Only valid when `v(a), v(b)` lie
/// in `{0, 1}`, which covers representatives of every square class.
pub fn hilbert_by_search(a: &LaurentSeries, b: &LaurentSeries) -> Result<i8> {
    let p = a.modulus() as u64;
    let digits = |x: &LaurentSeries| -> Result<[u64; 3]> {
        match x.valuation() {
            Some(v) if (0..=1).contains(&v) => {
                Ok([x.coeff(0)?.value() as u64, x.coeff(1)?.value() as u64, x.coeff(2)?.value() as u64])
            }
            _ => Err(Error::precondition("search oracle needs valuations 0 or 1")),
        }
    };
    let (da, db) = (digits(a)?, digits(b)?);
    let mul = |x: [u64; 3], y: [u64; 3]| {
        [
            x[0] * y[0] % p,
            (x[0] * y[1] + x[1] * y[0]) % p,
            (x[0] * y[2] + x[1] * y[1] + x[2] * y[0]) % p,
        ]
    };
    let index = |x: [u64; 3]| ((x[0] * p + x[1]) * p + x[2]) as usize;
    let all = || (0..p * p * p).map(|n| [n / (p * p), (n / p) % p, n % p]);
    let mut square = vec![false; (p * p * p) as usize];
    for z in all() {
        square[index(mul(z, z))] = true;
    }
    for x in all() {
        let ax2 = mul(da, mul(x, x));
        for y in all() {
            if x[0] == 0 && y[0] == 0 {
                continue;
            }
            let by2 = mul(db, mul(y, y));
            let s = [(ax2[0] + by2[0]) % p, (ax2[1] + by2[1]) % p, (ax2[2] + by2[2]) % p];
            if square[index(s)] {
                return Ok(1);
            }
        }
    }
    Ok(-1)
}

/// `int_O Psi(c x^2) dx`, exact.
fn quadratic_integral(c: &LaurentSeries) -> Result<ExactValue> {
    let p = c.modulus();
    let v = c.valuation().ok_or(Error::DivisionByZero)?;
    let m = (-v).max(0);
    let d = DomainSpec::new(p, m).var(LaurentSeries::zero(p, m.max(1) + 64), 0);
    let c = c.clone();
    integrate_phase(&d, move |x| c.checked_mul(&x[0].checked_mul(&x[0])?))
}

/// Weil constant from its Fourier identity with `Phi = char(O)`:
/// `gamma(a) = |a|^(1/2) int_O Psi(a x^2 / 2) / int_O Psi(-x^2 / 2a)`.
pub fn weil_gamma(a: &LaurentSeries) -> Result<ExactValue> {
    let p = a.modulus();
    if a.is_zero() {
        return Err(Error::precondition("Weil constant of zero"));
    }
    let half = ResidueElem::new(2, p).inv()?;
    let num = quadratic_integral(&a.scale(half))?;
    let den = quadratic_integral(&a.checked_inv()?.scale(-half))?;
    if den.is_zero() {
        return Err(Error::DegenerateWeil(format!("denominator integral vanishes at a = {a}")));
    }
    Ok(&abs_half_power(a, 1)? * &num.checked_div(&den)?)
}

/// `gamma(a) gamma(b) == gamma(ab) gamma(1) (a, b)`.
pub fn gamma_law_check(a: &LaurentSeries, b: &LaurentSeries) -> Result<bool> {
    let p = a.modulus();
    let one = LaurentSeries::one(p, a.precision().max(b.precision()).max(1));
    let lhs = &weil_gamma(a)? * &weil_gamma(b)?;
    let sym = ExactValue::from_int(p, hilbert(a, b)? as i64);
    let rhs = &(&weil_gamma(&a.checked_mul(b)?)? * &weil_gamma(&one)?) * &sym;
    Ok(lhs == rhs)
}

/// Representatives `1, u, t, ut` of `F^* / F^*2`, `u` the least non-residue.
pub fn square_class_representatives(p: u32, prec: i32) -> Vec<LaurentSeries> {
    let u = (2..p as i64).find(|&c| ResidueElem::new(c, p).legendre() == -1).expect("odd p has non-residues");
    vec![
        LaurentSeries::one(p, prec),
        LaurentSeries::constant(p, u, prec),
        LaurentSeries::monomial(p, 1, 1, prec),
        LaurentSeries::monomial(p, u, 1, prec),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactvalue::gauss_sum;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_unit_times_power(p: u32, rng: &mut ChaCha8Rng, v: i32) -> LaurentSeries {
        let mut c: Vec<i64> = (0..4).map(|_| rng.gen_range(0..p as i64)).collect();
        c[0] = rng.gen_range(1..p as i64);
        LaurentSeries::from_coeffs(p, v, &c, v + 8).unwrap()
    }

    #[test]
    fn hilbert_examples() {
        let p = 7;
        let t = LaurentSeries::monomial(p, 1, 1, 3);
        assert_eq!(hilbert(&t, &t).unwrap(), -1);
        assert_eq!(hilbert_by_search(&t, &t).unwrap(), -1);
        let one = LaurentSeries::one(p, 3);
        for b in square_class_representatives(p, 3) {
            assert_eq!(hilbert(&one, &b).unwrap(), 1);
        }
        assert!(hilbert(&LaurentSeries::zero(p, 3), &one).is_err());
    }

    #[test]
    fn hilbert_matches_search_on_classes() {
        for p in [3u32, 5, 7, 11, 13] {
            let reps = square_class_representatives(p, 3);
            for a in &reps {
                for b in &reps {
                    assert_eq!(hilbert(a, b).unwrap(), hilbert_by_search(a, b).unwrap(), "p={p} {a} {b}");
                }
            }
        }
    }

    #[test]
    fn hilbert_x_minus_x() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for p in [5u32, 7, 11] {
            for _ in 0..50 {
                let v = rng.gen_range(-3..4);
                let a = random_unit_times_power(p, &mut rng, v);
                assert_eq!(hilbert(&a, &-&a).unwrap(), 1);
            }
        }
    }

    #[test]
    fn gamma_of_units_and_even_classes() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for p in [5u32, 7] {
            for v in [0, 2, -2] {
                let a = random_unit_times_power(p, &mut rng, v);
                assert!(weil_gamma(&a).unwrap().is_one(), "p={p} a={a}");
            }
        }
    }

    #[test]
    fn gamma_at_t_inverse() {
        let p = 7;
        let a = LaurentSeries::monomial(p, 1, -1, 6);
        let g = weil_gamma(&a).unwrap();
        assert!((&g * &g.conj()).is_one());
        // gamma^2 = (-1 / p), a fourth root of unity up to the Gauss-sum class
        let g2 = g.pow(2).unwrap();
        let gs = gauss_sum(p).pow(2).unwrap();
        assert!(g2 == ExactValue::from_int(p, 1) || g2 == ExactValue::from_int(p, -1) || g2 == gs);
    }

    #[test]
    fn gamma_depends_on_square_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let p = 7;
        for a in square_class_representatives(p, 10) {
            let base = weil_gamma(&a).unwrap();
            for _ in 0..3 {
                let u = random_unit_times_power(p, &mut rng, 1);
                let a2 = a.checked_mul(&u.checked_mul(&u).unwrap()).unwrap();
                assert_eq!(weil_gamma(&a2).unwrap(), base);
            }
        }
    }

    #[test]
    fn gamma_law_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let p = 7;
        let one = LaurentSeries::one(p, 8);
        assert!(gamma_law_check(&one, &one).unwrap());
        for _ in 0..100 {
            let va = rng.gen_range(-2..3);
            let vb = rng.gen_range(-2..3);
            let a = random_unit_times_power(p, &mut rng, va);
            let b = random_unit_times_power(p, &mut rng, vb);
            assert!(gamma_law_check(&a, &b).unwrap(), "a={a} b={b}");
        }
    }
}
