use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::congruence::{CongruenceFunction, Membership};
use crate::error::{Error, Result};
use crate::exactvalue::{q_pow, residue_counts_value, ExactValue};
use crate::localfield::{LaurentSeries, MatrixLF, ResidueElem};

/// Default cap on visited cells per search.
pub const DEFAULT_NODE_BUDGET: u64 = 20_000_000;

/// An integral `int f(point(x)) Psi(sum c_i x_i) dx` over `x in (t^-R O)^k`.
pub(crate) struct SearchProblem<'a> {
    pub p: u32,
    pub radius: i32,
    /// `c_i`, one per coordinate.
    pub phase: Vec<ResidueElem>,
    pub point: &'a (dyn Fn(&[LaurentSeries]) -> Result<MatrixLF> + Sync),
    pub f: &'a CongruenceFunction,
    /// Finest precision any coordinate is refined to.
    pub max_precision: i32,
    pub node_budget: u64,
}

struct Tally {
    /// volume exponent `E` (volume `q^-E`) to counts per residue of the phase
    counts: BTreeMap<i64, Vec<u64>>,
    nodes: u64,
}

impl SearchProblem<'_> {
    fn coordinate(&self, digits: &[i64]) -> Result<LaurentSeries> {
        let prec = -self.radius + digits.len() as i32;
        LaurentSeries::from_coeffs(self.p, -self.radius, digits, prec)
    }

    fn visit(&self, digits: &mut Vec<Vec<i64>>, tally: &mut Tally) -> Result<()> {
        tally.nodes += 1;
        if tally.nodes > self.node_budget {
            return Err(Error::BudgetExceeded { needed: tally.nodes as u128, budget: self.node_budget as u128 });
        }
        let coords = digits.iter().map(|d| self.coordinate(d)).collect::<Result<Vec<_>>>()?;
        let x = (self.point)(&coords)?;
        match self.f.classify(&x)? {
            Membership::Out => Ok(()),
            Membership::In => {
                // on a cell t^e O with e < 0 a nontrivial linear phase integrates to 0
                let mut residue = ResidueElem::zero(self.p);
                for (c, x) in self.phase.iter().zip(&coords) {
                    if c.is_zero() {
                        continue;
                    }
                    if x.precision() < 0 {
                        return Ok(());
                    }
                    residue = residue + *c * x.coeff(-1)?;
                }
                let exponent: i64 = coords.iter().map(|x| x.precision() as i64).sum();
                let slot = tally.counts.entry(exponent).or_insert_with(|| vec![0; self.p as usize]);
                slot[residue.value() as usize] += 1;
                Ok(())
            }
            Membership::Unknown => {
                let (i, n) = digits
                    .iter()
                    .enumerate()
                    .map(|(i, d)| (i, d.len()))
                    .min_by_key(|&(_, n)| n)
                    .ok_or_else(|| Error::precision("point is undecided with no coordinates to refine"))?;
                if -self.radius + n as i32 >= self.max_precision {
                    return Err(Error::precision(format!(
                        "support undecided with coordinates known modulo t^{}",
                        self.max_precision
                    )));
                }
                for c in 0..self.p as i64 {
                    digits[i].push(c);
                    let res = self.visit(digits, tally);
                    digits[i].pop();
                    res?;
                }
                Ok(())
            }
        }
    }

    /// The exact value of the integral at this radius.
    pub fn run(&self) -> Result<ExactValue> {
        if self.f.is_zero() {
            return Ok(ExactValue::zero(self.p));
        }
        let mut tally = Tally { counts: BTreeMap::new(), nodes: 0 };
        let mut digits = vec![Vec::new(); self.phase.len()];
        self.visit(&mut digits, &mut tally)?;
        let mut total = ExactValue::zero(self.p);
        for (e, counts) in &tally.counts {
            let counts: Vec<BigInt> = counts.iter().map(|&c| BigInt::from(c)).collect();
            total = &total + &residue_counts_value(self.p, &counts).scale(&q_pow(self.p, -e));
        }
        Ok(&total * &self.f.scale)
    }
}
