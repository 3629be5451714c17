use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::params::GermParams;
use crate::error::{Error, Result};
use crate::exactvalue::{q_pow, residue_counts_value, ExactValue};
use crate::localfield::{LaurentSeries, ResidueElem};

/// Default cap on the number of tuples the naive evaluator may visit.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Enumeration budget: `GERMLAB_BUDGET` if set and valid, else the default.
pub fn budget_from_env() -> u128 {
    std::env::var("GERMLAB_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse::<u128>().ok())
        .filter(|&b| b > 0)
        .unwrap_or(DEFAULT_BUDGET)
}

/// One variable `x in 1 + t^m O` entering the constraint as `x^exponent` and
/// the phase as `weight * x / a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SumVar {
    pub exponent: u32,
    pub weight: ResidueElem,
}

/// `vol(t^m O)^-1 int Psi(sum w_i x_i / a) dx` over `x_i in 1 + t^m O` with
/// `prod x_i^e_i = 1 mod a t^m O`.
///
/// The germ sums are the instances
/// - `J(a, r)`: `r` variables, exponent 1, weight 1/2;
/// - `I(a, 2l)`: `l` variables, exponent 2, weight 1;
/// - `I(a, 2l+1)`: as above plus one variable with exponent 1, weight 1/2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GermSum {
    pub p: u32,
    pub m: u32,
    pub a: LaurentSeries,
    pub vars: Vec<SumVar>,
}

impl GermSum {
    pub fn j(gp: &GermParams) -> Self {
        let half = ResidueElem::new(2, gp.p).inv().expect("p odd");
        let vars = vec![SumVar { exponent: 1, weight: half }; gp.r as usize];
        GermSum { p: gp.p, m: gp.m, a: gp.a.clone(), vars }
    }

    pub fn i(gp: &GermParams) -> Self {
        let p = gp.p;
        let half = ResidueElem::new(2, p).inv().expect("p odd");
        let l = (gp.r / 2) as usize;
        let mut vars = vec![SumVar { exponent: 2, weight: ResidueElem::one(p) }; l];
        if gp.r % 2 == 1 {
            vars.push(SumVar { exponent: 1, weight: half });
        }
        GermSum { p, m: gp.m, a: gp.a.clone(), vars }
    }

    pub fn va(&self) -> u32 {
        self.a.valuation().expect("nonzero a") as u32
    }

    /// Reduction modulus `m + v(a)`: everything depends on `x_i` modulo it.
    pub fn modulus(&self) -> i32 {
        (self.m + self.va()) as i32
    }

    /// Number of tuples modulo `t^(m + v(a))`.
    pub fn tuple_count(&self) -> u128 {
        (self.p as u128).saturating_pow(self.va() * self.vars.len() as u32)
    }

    /// `vol(t^m O)^-1` times the cell volume `q^-(m + v(a)) k`.
    fn normalization(&self) -> BigRational {
        let k = self.vars.len() as i64;
        q_pow(self.p, self.m as i64 - self.modulus() as i64 * k)
    }

    /// `a^-1` truncated to what the phase reads.
    fn a_inverse(&self) -> Result<LaurentSeries> {
        let inv = self.a.checked_inv()?;
        if inv.precision() < 0 {
            return Err(Error::precision("a^-1 must be known modulo O"));
        }
        Ok(inv.truncate(0))
    }
}

/// A way of evaluating a [`GermSum`] exactly.
pub trait GermSumEvaluator: Send + Sync {
    fn name(&self) -> &'static str;
    fn evaluate(&self, sum: &GermSum) -> Result<ExactValue>;
}

impl fmt::Debug for dyn GermSumEvaluator + '_ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GermSumEvaluator({})", self.name())
    }
}

/// Visits all `q^(k v(a))` tuples with series arithmetic.
pub struct NaiveEvaluator {
    pub budget: u128,
}

impl Default for NaiveEvaluator {
    fn default() -> Self {
        NaiveEvaluator { budget: budget_from_env() }
    }
}

struct Candidate {
    power: LaurentSeries,
    phase: u32,
}

impl GermSumEvaluator for NaiveEvaluator {
    fn name(&self) -> &'static str {
        "naive"
    }

    fn evaluate(&self, sum: &GermSum) -> Result<ExactValue> {
        let needed = sum.tuple_count();
        if needed > self.budget {
            return Err(Error::BudgetExceeded { needed, budget: self.budget });
        }
        let p = sum.p;
        let big_m = sum.modulus();
        let va = sum.va() as usize;
        let a_inv = sum.a_inverse()?;
        // all x = 1 + t^m (d_0 + d_1 t + ...) modulo t^(m + v(a))
        let mut xs = Vec::with_capacity(p.pow(va as u32) as usize);
        let mut digits = vec![0i64; va];
        loop {
            let tail = LaurentSeries::from_coeffs(p, sum.m as i32, &digits, big_m)?;
            xs.push(LaurentSeries::one(p, big_m).checked_add(&tail)?);
            if !odometer(&mut digits, p) {
                break;
            }
        }
        let candidates = sum
            .vars
            .iter()
            .map(|v| {
                xs.iter()
                    .map(|x| {
                        let phase = x.scale(v.weight).checked_mul(&a_inv)?.coeff(-1)?.value();
                        Ok(Candidate { power: x.pow(v.exponent as i64)?, phase })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut counts = vec![0u64; p as usize];
        let one = LaurentSeries::one(p, big_m);
        walk(&candidates, 0, &one, 0, p, big_m, &mut counts)?;
        Ok(residue_counts_value(p, &counts).scale(&sum.normalization()))
    }
}

fn walk(
    candidates: &[Vec<Candidate>],
    depth: usize,
    prefix: &LaurentSeries,
    phase: u32,
    p: u32,
    big_m: i32,
    counts: &mut [u64],
) -> Result<()> {
    let last = depth + 1 == candidates.len();
    for c in &candidates[depth] {
        let prod = prefix.checked_mul(&c.power)?;
        let ph = (phase + c.phase) % p;
        if last {
            let off = prod.checked_sub(&LaurentSeries::one(p, big_m))?;
            match off.in_ideal(big_m) {
                Some(true) => counts[ph as usize] += 1,
                Some(false) => {}
                None => return Err(Error::precision("product constraint undecided")),
            }
        } else {
            walk(candidates, depth + 1, &prod, ph, p, big_m, counts)?;
        }
    }
    Ok(())
}

/// Advances a base-`p` digit vector; false after the last value.
fn odometer(digits: &mut [i64], p: u32) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < p as i64 {
            return true;
        }
        *d = 0;
    }
    false
}

/// Dynamic program over partial products.
///
/// The phase only sees `x` modulo `t^v(a)`, so it is constant on cosets of
/// `H = (1 + t^d O) / (1 + t^(m + v(a)) O)` with `d = max(v(a), m)`. The
/// program runs on `G' = (1 + t^m O) / (1 + t^d O)`; since `x -> x^e` is
/// bijective on these `p`-groups whenever `p` does not divide `e`, every admissible
/// tuple of cosets lifts in exactly `|H|^(k-1)` ways, and the last
/// variable is solved for instead of enumerated.
pub struct DpEvaluator;

struct QuotientGroup {
    p: u32,
    m: usize,
    d: usize,
    size: usize,
    /// `mul[x * size + y]`
    mul: Vec<u32>,
    inverse: Vec<u32>,
}

impl QuotientGroup {
    fn new(p: u32, m: usize, d: usize) -> Self {
        let width = d - m;
        let size = (p as usize).pow(width as u32);
        let digits: Vec<Vec<u64>> = (0..size).map(|n| Self::digits_of(n, p, width)).collect();
        let mut mul = vec![0u32; size * size];
        let pu = p as u64;
        for x in 0..size {
            for y in 0..size {
                // (1 + X)(1 + Y) = 1 + X + Y + XY, coefficients at t^m .. t^(d-1)
                let mut z: Vec<u64> = (0..width).map(|j| (digits[x][j] + digits[y][j]) % pu).collect();
                for i in 0..width {
                    if digits[x][i] == 0 {
                        continue;
                    }
                    for j in 0..width {
                        let deg = 2 * m + i + j;
                        if deg >= d {
                            break;
                        }
                        let slot = &mut z[deg - m];
                        *slot = (*slot + digits[x][i] * digits[y][j]) % pu;
                    }
                }
                mul[x * size + y] = Self::index_of(&z, p) as u32;
            }
        }
        let mut inverse = vec![0u32; size];
        for x in 0..size {
            inverse[x] = (0..size).find(|&y| mul[x * size + y] == 0).expect("group inverse") as u32;
        }
        QuotientGroup { p, m, d, size, mul, inverse }
    }

    fn digits_of(mut n: usize, p: u32, width: usize) -> Vec<u64> {
        (0..width)
            .map(|_| {
                let d = (n % p as usize) as u64;
                n /= p as usize;
                d
            })
            .collect()
    }

    fn index_of(digits: &[u64], p: u32) -> usize {
        digits.iter().rev().fold(0usize, |acc, &d| acc * p as usize + d as usize)
    }

    fn pow(&self, x: usize, e: u32) -> usize {
        (0..e).fold(0usize, |acc, _| self.mul[acc * self.size + x] as usize)
    }

    fn element(&self, x: usize) -> Result<LaurentSeries> {
        let digits: Vec<i64> = Self::digits_of(x, self.p, self.d - self.m).into_iter().map(|d| d as i64).collect();
        let tail = LaurentSeries::from_coeffs(self.p, self.m as i32, &digits, self.d as i32)?;
        LaurentSeries::one(self.p, self.d as i32).checked_add(&tail)
    }
}

impl GermSumEvaluator for DpEvaluator {
    fn name(&self) -> &'static str {
        "dp"
    }

    fn evaluate(&self, sum: &GermSum) -> Result<ExactValue> {
        if sum.vars.is_empty() {
            return Err(Error::precondition("germ sum without variables"));
        }
        if let Some(v) = sum.vars.iter().find(|v| v.exponent == 0 || (v.exponent as u64).is_multiple_of(sum.p as u64)) {
            return Err(Error::precondition(format!("exponent {} is not invertible on 1 + t^m O", v.exponent)));
        }
        let p = sum.p;
        let (m, va) = (sum.m as usize, sum.va() as usize);
        let d = va.max(m);
        let g = QuotientGroup::new(p, m, d);
        let a_inv = sum.a_inverse()?;
        let n = g.size;
        let pu = p as usize;

        let phases = sum
            .vars
            .iter()
            .map(|v| {
                (0..n)
                    .map(|x| Ok(g.element(x)?.scale(v.weight).checked_mul(&a_inv)?.coeff(-1)?.value() as usize))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let powers: Vec<Vec<usize>> = sum.vars.iter().map(|v| (0..n).map(|x| g.pow(x, v.exponent)).collect()).collect();

        let mut state = vec![0u128; n * pu];
        state[0] = 1;
        let k = sum.vars.len();
        for i in 0..k - 1 {
            let mut next = vec![0u128; n * pu];
            for s in 0..n {
                let row = &state[s * pu..(s + 1) * pu];
                if row.iter().all(|&c| c == 0) {
                    continue;
                }
                for x in 0..n {
                    let t = g.mul[s * n + powers[i][x]] as usize;
                    let shift = phases[i][x];
                    let dst = &mut next[t * pu..(t + 1) * pu];
                    for (res, &c) in row.iter().enumerate() {
                        if c != 0 {
                            dst[(res + shift) % pu] += c;
                        }
                    }
                }
            }
            state = next;
        }

        // the last variable is the unique root of the remaining product
        let last = k - 1;
        let mut root = vec![usize::MAX; n];
        for x in 0..n {
            root[powers[last][x]] = x;
        }
        let mut counts = vec![0u128; pu];
        for s in 0..n {
            let x = root[g.inverse[s] as usize];
            let shift = phases[last][x];
            for res in 0..pu {
                counts[(res + shift) % pu] += state[s * pu + res];
            }
        }
        let lifts = BigInt::from(p).pow(((m + va - d) * (k - 1)) as u32);
        let counts: Vec<BigInt> = counts.into_iter().map(|c| BigInt::from(c) * &lifts).collect();
        Ok(residue_counts_value(p, &counts).scale(&sum.normalization()))
    }
}

/// Named evaluators, selected at run time.
pub struct EvaluatorRegistry {
    evaluators: Vec<Box<dyn GermSumEvaluator>>,
}

impl EvaluatorRegistry {
    pub fn empty() -> Self {
        EvaluatorRegistry { evaluators: Vec::new() }
    }

    /// `naive` (with the given budget) and `dp`.
    pub fn with_defaults(budget: u128) -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(NaiveEvaluator { budget }));
        reg.register(Box::new(DpEvaluator));
        reg
    }

    /// Adds an evaluator, replacing any with the same name.
    pub fn register(&mut self, ev: Box<dyn GermSumEvaluator>) {
        self.evaluators.retain(|e| e.name() != ev.name());
        self.evaluators.push(ev);
    }

    pub fn get(&self, name: &str) -> Result<&dyn GermSumEvaluator> {
        self.evaluators
            .iter()
            .find(|e| e.name() == name)
            .map(|e| e.as_ref())
            .ok_or_else(|| Error::UnknownEvaluator(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.evaluators.iter().map(|e| e.name()).collect()
    }
}

impl Default for EvaluatorRegistry {
    fn default() -> Self {
        Self::with_defaults(budget_from_env())
    }
}

pub fn eval_j(gp: &GermParams, ev: &dyn GermSumEvaluator) -> Result<ExactValue> {
    ev.evaluate(&GermSum::j(gp))
}

pub fn eval_i(gp: &GermParams, ev: &dyn GermSumEvaluator) -> Result<ExactValue> {
    ev.evaluate(&GermSum::i(gp))
}
