//! Named identities between exact values, evaluated over parameter grids.

use std::fmt;

use crate::error::{Error, Result};
use crate::exactvalue::ExactValue;
use crate::germs::{
    closed_i, closed_j, eval_i, eval_j, germ_k, germ_l, germ_l_via_k, ratio_prop, EvaluatorRegistry, GermParams,
};
use crate::localfield::{LaurentSeries, ResidueElem};
use crate::orbital::{germ_expansion_check, CongruenceFunction};

/// The two sides of an identity at one parameter point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub lhs: ExactValue,
    pub rhs: ExactValue,
}

impl Comparison {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub trait Identity: Send + Sync {
    fn name(&self) -> &'static str;
    /// `None` when the identity is asserted at `gp`, otherwise the reason
    /// it is skipped.
    fn skip_reason(&self, gp: &GermParams) -> Option<String>;
    fn compare(&self, gp: &GermParams, evaluators: &EvaluatorRegistry) -> Result<Comparison>;
}

impl fmt::Debug for dyn Identity + '_ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Identity({})", self.name())
    }
}

fn large_p(gp: &GermParams) -> Option<String> {
    gp.require_large_p().err().map(|e| e.to_string())
}

struct ClosedJ;

impl Identity for ClosedJ {
    fn name(&self) -> &'static str {
        "closed-j"
    }
    fn skip_reason(&self, gp: &GermParams) -> Option<String> {
        gp.r.is_multiple_of(gp.p).then(|| format!("p = {} divides r", gp.p))
    }
    fn compare(&self, gp: &GermParams, ev: &EvaluatorRegistry) -> Result<Comparison> {
        Ok(Comparison { lhs: eval_j(gp, ev.get("dp")?)?, rhs: closed_j(gp)? })
    }
}

struct ClosedI;

impl Identity for ClosedI {
    fn name(&self) -> &'static str {
        "closed-i"
    }
    fn skip_reason(&self, gp: &GermParams) -> Option<String> {
        large_p(gp)
    }
    fn compare(&self, gp: &GermParams, ev: &EvaluatorRegistry) -> Result<Comparison> {
        Ok(Comparison { lhs: eval_i(gp, ev.get("dp")?)?, rhs: closed_i(gp)? })
    }
}

/// `I(a, r)` against the germ-ratio formula applied to `J(a, r)`.
struct Ratio;

impl Identity for Ratio {
    fn name(&self) -> &'static str {
        "ratio"
    }
    fn skip_reason(&self, gp: &GermParams) -> Option<String> {
        large_p(gp)
    }
    fn compare(&self, gp: &GermParams, ev: &EvaluatorRegistry) -> Result<Comparison> {
        let dp = ev.get("dp")?;
        Ok(Comparison { lhs: eval_i(gp, dp)?, rhs: ratio_prop(gp, &eval_j(gp, dp)?)? })
    }
}

/// `L` computed directly against `L` computed from `K`.
struct GermLk;

impl Identity for GermLk {
    fn name(&self) -> &'static str {
        "germ-lk"
    }
    fn skip_reason(&self, gp: &GermParams) -> Option<String> {
        large_p(gp)
    }
    fn compare(&self, gp: &GermParams, ev: &EvaluatorRegistry) -> Result<Comparison> {
        let j = eval_j(gp, ev.get("dp")?)?;
        Ok(Comparison { lhs: germ_l(gp, &j)?, rhs: germ_l_via_k(gp, &germ_k(gp, &j)?)? })
    }
}

/// The naive and DP evaluators on the same sum.
struct NaiveDp {
    name: &'static str,
    i_side: bool,
}

impl Identity for NaiveDp {
    fn name(&self) -> &'static str {
        self.name
    }
    fn skip_reason(&self, _: &GermParams) -> Option<String> {
        None
    }
    fn compare(&self, gp: &GermParams, ev: &EvaluatorRegistry) -> Result<Comparison> {
        let eval = if self.i_side { eval_i } else { eval_j };
        Ok(Comparison { lhs: eval(gp, ev.get("naive")?)?, rhs: eval(gp, ev.get("dp")?)? })
    }
}

/// Rank-2 germ expansion with `f = char(w_{G_2} K_m)` and `beta = 1`.
struct Expansion;

impl Identity for Expansion {
    fn name(&self) -> &'static str {
        "expansion"
    }
    fn skip_reason(&self, gp: &GermParams) -> Option<String> {
        (gp.r != 2).then(|| "checked at rank 2 only".to_string())
    }
    fn compare(&self, gp: &GermParams, ev: &EvaluatorRegistry) -> Result<Comparison> {
        let p = gp.p;
        let prec = gp.a.precision() + 2 * (gp.va() + gp.m) as i32 + 16;
        let f = CongruenceFunction::longest_weyl(p, 2, gp.m, ExactValue::one(p), false, prec)?;
        let r = germ_expansion_check(&LaurentSeries::one(p, prec), &f, gp, ev.get("dp")?, None)?;
        Ok(Comparison { lhs: r.lhs, rhs: r.rhs })
    }
}

/// Named identities, selected at run time.
pub struct IdentityRegistry {
    identities: Vec<Box<dyn Identity>>,
}

impl IdentityRegistry {
    pub fn empty() -> Self {
        IdentityRegistry { identities: Vec::new() }
    }

    /// `closed-j`, `closed-i`, `ratio`, `germ-lk`, `naive-dp-j`,
    /// `naive-dp-i` and `expansion`.
    pub fn with_defaults() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(ClosedJ));
        reg.register(Box::new(ClosedI));
        reg.register(Box::new(Ratio));
        reg.register(Box::new(GermLk));
        reg.register(Box::new(NaiveDp { name: "naive-dp-j", i_side: false }));
        reg.register(Box::new(NaiveDp { name: "naive-dp-i", i_side: true }));
        reg.register(Box::new(Expansion));
        reg
    }

    /// Adds an identity, replacing any with the same name.
    pub fn register(&mut self, id: Box<dyn Identity>) {
        self.identities.retain(|i| i.name() != id.name());
        self.identities.push(id);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Identity> {
        self.identities
            .iter()
            .find(|i| i.name() == name)
            .map(|i| i.as_ref())
            .ok_or_else(|| Error::Parse(format!("unknown identity `{name}`")))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.identities.iter().map(|i| i.name()).collect()
    }
}

impl Default for IdentityRegistry {
    fn default() -> Self {
        Self::with_defaults()
    }
}

/// Cartesian grid of germ parameters.
#[derive(Clone, Debug)]
pub struct Grid {
    pub primes: Vec<u32>,
    pub ranks: Vec<u32>,
    pub levels: Vec<u32>,
    pub valuations: Vec<u32>,
    /// Unit parts of `a`, each as coefficients `ua[0] + ua[1] t + ...`.
    pub units: Vec<Vec<i64>>,
}

impl Grid {
    pub fn points(&self) -> Vec<(u32, u32, u32, u32, Vec<i64>)> {
        let mut out = Vec::new();
        for &p in &self.primes {
            for &r in &self.ranks {
                for &m in &self.levels {
                    for &va in &self.valuations {
                        for ua in &self.units {
                            out.push((p, r, m, va, ua.clone()));
                        }
                    }
                }
            }
        }
        out
    }
}

/// The smallest quadratic non-residue mod `p`.
pub fn smallest_nonresidue(p: u32) -> i64 {
    (2..p as i64).find(|&c| ResidueElem::new(c, p).legendre() == -1).unwrap_or(2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Skipped(String),
    Error(Error),
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Skipped(_) => "skip",
            Outcome::Error(Error::BudgetExceeded { .. }) => "budget",
            Outcome::Error(_) => "error",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub identity: &'static str,
    pub p: u32,
    pub r: u32,
    pub m: u32,
    pub va: u32,
    pub ua: Vec<i64>,
    pub outcome: Outcome,
    pub comparison: Option<Comparison>,
}

impl SweepRow {
    pub const HEADER: [&'static str; 10] = ["identity", "p", "r", "m", "va", "ua", "status", "lhs", "rhs", "note"];

    pub fn record(&self) -> Vec<String> {
        let ua: Vec<String> = self.ua.iter().map(|c| c.to_string()).collect();
        let (lhs, rhs) = match &self.comparison {
            Some(c) => (c.lhs.pretty(), c.rhs.pretty()),
            None => (String::new(), String::new()),
        };
        let note = match &self.outcome {
            Outcome::Skipped(s) => s.clone(),
            Outcome::Error(e) => e.to_string(),
            _ => String::new(),
        };
        vec![
            self.identity.to_string(),
            self.p.to_string(),
            self.r.to_string(),
            self.m.to_string(),
            self.va.to_string(),
            ua.join(" "),
            self.outcome.label().to_string(),
            lhs,
            rhs,
            note,
        ]
    }
}

/// Evaluates each named identity at every grid point. Points that cannot
/// be built (e.g. a unit part divisible by `p`) are reported as errors.
pub fn run_sweep(
    identities: &IdentityRegistry,
    names: &[&str],
    evaluators: &EvaluatorRegistry,
    grid: &Grid,
) -> Result<Vec<SweepRow>> {
    let selected = names.iter().map(|n| identities.get(n)).collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for (p, r, m, va, ua) in grid.points() {
        let gp = GermParams::from_parts(p, r, m, va, &ua);
        for id in &selected {
            let (outcome, comparison) = match &gp {
                Err(e) => (Outcome::Error(e.clone()), None),
                Ok(gp) => match id.skip_reason(gp) {
                    Some(reason) => (Outcome::Skipped(reason), None),
                    None => match id.compare(gp, evaluators) {
                        Ok(c) => (if c.holds() { Outcome::Pass } else { Outcome::Fail }, Some(c)),
                        Err(e) => (Outcome::Error(e), None),
                    },
                },
            };
            rows.push(SweepRow { identity: id.name(), p, r, m, va, ua: ua.clone(), outcome, comparison });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_lookup() {
        let reg = IdentityRegistry::default();
        assert_eq!(reg.names().len(), 7);
        assert_eq!(reg.get("closed-j").unwrap().name(), "closed-j");
        assert!(reg.get("nope").is_err());
    }

    #[test]
    fn small_sweep() {
        let grid = Grid { primes: vec![7], ranks: vec![2, 3], levels: vec![1], valuations: vec![3], units: vec![vec![1], vec![3]] };
        let rows = run_sweep(
            &IdentityRegistry::default(),
            &["closed-j", "closed-i", "naive-dp-j", "germ-lk"],
            &EvaluatorRegistry::with_defaults(1_000_000),
            &grid,
        )
        .unwrap();
        assert_eq!(rows.len(), 16);
        for row in &rows {
            let ok = match (row.identity, row.r) {
                // p = 7 is not larger than 2r + 1 at r = 3
                ("closed-i" | "germ-lk", 3) => row.outcome.label() == "skip",
                ("naive-dp-j", 3) => row.outcome.label() == "budget",
                _ => row.outcome == Outcome::Pass,
            };
            assert!(ok, "{:?}", row.record());
        }
        assert_eq!(smallest_nonresidue(7), 3);
        assert_eq!(smallest_nonresidue(13), 2);
    }
}
