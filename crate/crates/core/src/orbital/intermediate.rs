use super::congruence::CongruenceFunction;
use super::integrals::{check_rank, orbital_i, orbital_j, stabilized, working_precision};
use super::label::{unipotent, OrbitLabel};
use crate::error::{Error, Result};
use crate::exactvalue::{big_psi_char, integrate, DomainSpec, ExactValue};
use crate::localfield::{LaurentSeries, MatrixLF, ResidueElem};

/// Largest number of representative tuples a brute-force intermediate
/// integral will enumerate.
pub const BRUTE_FORCE_BUDGET: u128 = 5_000_000;

fn rank_one_entry(g: &MatrixLF) -> Result<LaurentSeries> {
    if g.size() != 1 {
        return Err(Error::precondition("intermediate integrals are implemented for r1 = r2 = 1"));
    }
    let x = g.get(0, 0).clone();
    if x.is_zero() {
        return Err(Error::precondition("blocks must be invertible"));
    }
    Ok(x)
}

fn check_function(f: &CongruenceFunction, p: u32, radius: i32) -> Result<()> {
    check_rank(f.rank())?;
    if f.rank() != 2 {
        return Err(Error::precondition("intermediate integrals need a rank-2 test function"));
    }
    if f.modulus() != p {
        return Err(Error::PrimeMismatch(p, f.modulus()));
    }
    if radius < 0 {
        return Err(Error::precondition("radius must be non-negative"));
    }
    Ok(())
}

/// Integrates over `(t^-radius O)^k` modulo `t^M`, raising `M` until every
/// cell is decided.
fn adaptive_integral(
    p: u32,
    vars: usize,
    radius: i32,
    start: i32,
    cap: i32,
    f: impl Fn(&[LaurentSeries]) -> Result<ExactValue>,
) -> Result<ExactValue> {
    let mut modulus = start.max(1);
    loop {
        let mut d = DomainSpec::new(p, modulus);
        for _ in 0..vars {
            d = d.var(LaurentSeries::zero(p, modulus + radius + 64), -radius);
        }
        let needed = d.point_count();
        if needed > BRUTE_FORCE_BUDGET {
            return Err(Error::BudgetExceeded { needed, budget: BRUTE_FORCE_BUDGET });
        }
        match integrate(&d, &f) {
            Err(Error::InsufficientPrecision(msg)) => {
                if modulus >= cap {
                    return Err(Error::InsufficientPrecision(msg));
                }
                modulus += 1;
            }
            other => return other,
        }
    }
}

fn spread(xs: &[&LaurentSeries]) -> i32 {
    xs.iter().map(|x| x.valuation().unwrap_or(0).abs()).sum()
}

/// `int int f(X-block . diag(g1, g2) . Y-block) theta(X + Y) dX dY` at
/// `r1 = r2 = 1`, by direct enumeration of `X, Y in t^-radius O`. As for
/// [`orbital_j`], `f` is read without the leading `w_{G_2}`.
pub fn intermediate_j(g1: &MatrixLF, g2: &MatrixLF, f: &CongruenceFunction, radius: i32) -> Result<ExactValue> {
    let (a, b) = (rank_one_entry(g1)?, rank_one_entry(g2)?);
    let p = a.modulus();
    check_function(f, p, radius)?;
    if f.is_zero() {
        return Ok(ExactValue::zero(p));
    }
    let half = ResidueElem::new(2, p).inv()?;
    let s = spread(&[&a, &b]);
    stabilized(radius, |rad| {
        let prec = working_precision(s, f.level, rad);
        let d = MatrixLF::diagonal(&[a.clone(), b.clone()], prec);
        adaptive_integral(p, 2, rad, f.level as i32, f.level as i32 + 2 * s + 2 * rad + 4, |xy| {
            let lower = unipotent(p, 2, &[(0, 1)], &xy[..1], prec).transpose();
            let upper = unipotent(p, 2, &[(0, 1)], &xy[1..], prec);
            let value = f.evaluate(&MatrixLF::product(&[&lower, &d, &upper])?)?;
            if value.is_zero() {
                return Ok(value);
            }
            Ok(&value * &big_psi_char(&xy[0].checked_add(&xy[1])?.scale(half))?)
        })
    })
}

/// `int phi([[g1, g1 X], [tX g1, tX g1 X + g2]]) theta(2X) dX` at
/// `r1 = r2 = 1`, by direct enumeration of `X in t^-radius O`.
pub fn intermediate_i(g1: &MatrixLF, g2: &MatrixLF, phi: &CongruenceFunction, radius: i32) -> Result<ExactValue> {
    let (a, b) = (rank_one_entry(g1)?, rank_one_entry(g2)?);
    let p = a.modulus();
    check_function(phi, p, radius)?;
    if phi.is_zero() {
        return Ok(ExactValue::zero(p));
    }
    let s = spread(&[&a, &b]);
    stabilized(radius, |rad| {
        adaptive_integral(p, 1, rad, phi.level as i32, phi.level as i32 + 2 * s + 2 * rad + 4, |x| {
            let x = &x[0];
            let ax = a.checked_mul(x)?;
            let m = MatrixLF::new(2, vec![a.clone(), ax.clone(), ax.clone(), ax.checked_mul(x)?.checked_add(&b)?])?;
            let value = phi.evaluate(&m)?;
            if value.is_zero() {
                return Ok(value);
            }
            // theta(2X) = Psi(X)
            Ok(&value * &big_psi_char(x)?)
        })
    })
}

/// Both sides of a rank-2 decomposition identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionCheck {
    pub orbital: ExactValue,
    pub intermediate: ExactValue,
}

impl DecompositionCheck {
    pub fn holds(&self) -> bool {
        self.orbital == self.intermediate
    }
}

/// `J(diag(t1, t2), f)` against the intermediate integral at `(t1, t2)`.
pub fn check_decomposition_j(t1: &LaurentSeries, t2: &LaurentSeries, f: &CongruenceFunction, radius: i32) -> Result<DecompositionCheck> {
    let o = OrbitLabel::diagonal(vec![t1.clone(), t2.clone()])?;
    let orbital = orbital_j(&o, f, radius)?;
    let intermediate = intermediate_j(&MatrixLF::scalar(t1.clone()), &MatrixLF::scalar(t2.clone()), f, radius)?;
    Ok(DecompositionCheck { orbital, intermediate })
}

/// `I(diag(t1, t2), phi)` against the intermediate integral at `(t1, t2)`.
pub fn check_decomposition_i(t1: &LaurentSeries, t2: &LaurentSeries, phi: &CongruenceFunction, radius: i32) -> Result<DecompositionCheck> {
    let o = OrbitLabel::diagonal(vec![t1.clone(), t2.clone()])?;
    let orbital = orbital_i(&o, phi, radius)?;
    let intermediate = intermediate_i(&MatrixLF::scalar(t1.clone()), &MatrixLF::scalar(t2.clone()), phi, radius)?;
    Ok(DecompositionCheck { orbital, intermediate })
}

/// A rank-2 congruence function near the orbit of `diag(t1, t2)`: the base
/// point is `g k` (`J` side) or `tk g k` (`I` side), where `g` is the orbit
/// point with unipotent entries `x0`, `y0` (`y0` ignored on the `I` side)
/// and `k` has integral entries `k`.
pub fn sample_test_function(
    t1: &LaurentSeries,
    t2: &LaurentSeries,
    x0: &LaurentSeries,
    y0: &LaurentSeries,
    k: [[i64; 2]; 2],
    m: u32,
    scale: ExactValue,
    symmetric: bool,
) -> Result<CongruenceFunction> {
    let p = t1.modulus();
    let prec = [t1, t2].iter().map(|x| x.precision()).min().unwrap_or(0);
    let d = MatrixLF::diagonal(&[t1.clone(), t2.clone()], prec);
    let kk = MatrixLF::from_fn(2, |i, j| LaurentSeries::constant(p, k[i][j], prec));
    if kk.det()?.valuation() != Some(0) {
        return Err(Error::precondition("k must lie in GL_2(O)"));
    }
    let n1 = unipotent(p, 2, &[(0, 1)], std::slice::from_ref(x0), prec);
    let base = if symmetric {
        let g = MatrixLF::product(&[&n1.transpose(), &d, &n1])?;
        MatrixLF::product(&[&kk.transpose(), &g, &kk])?
    } else {
        let n2 = unipotent(p, 2, &[(0, 1)], std::slice::from_ref(y0), prec);
        MatrixLF::product(&[&n1.transpose(), &d, &n2, &kk])?
    };
    CongruenceFunction::new(base, m, scale, symmetric)
}
