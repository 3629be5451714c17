use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use germlab::exactvalue::ExactValue;
use germlab::germs::{
    bracket_identities, closed_i, closed_j, count_c2, count_c2_direct, diagonalize_quadratic, eval_i, eval_j,
    expected_diagonal, germ_k, germ_l, ratio_from_closed_forms, ratio_prop, EvaluatorRegistry, GermParams,
    DEFAULT_BUDGET,
};
use germlab::localfield::{check_odd_prime, parse_series, roots_of_unity, Composition, LaurentSeries};
use germlab::orbital::{
    check_decomposition_i, check_decomposition_j, germ_expansion_check, orbital_i, orbital_j, sample_test_function,
    unit_sym_test, CongruenceFunction, OrbitLabel,
};
use germlab::sweep::{run_sweep, Grid, IdentityRegistry, SweepRow};
use germlab::symbols::{hilbert, weil_gamma};
use germlab::{Error, Result};
use serde_json::{json, Value};

/// Exact germ computations over F_p((t)). Values are printed as JSON.
#[derive(Parser)]
#[command(name = "germlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// An odd prime.
    #[arg(long, value_parser = parse_prime)]
    p: u32,
    /// Render field elements as sums of powers of zeta_{4p}.
    #[arg(long)]
    pretty: bool,
}

fn parse_prime(s: &str) -> std::result::Result<u32, String> {
    let p: u32 = s.parse().map_err(|e| format!("{e}"))?;
    check_odd_prime(p).map_err(|e| e.to_string())?;
    Ok(p)
}

#[derive(Copy, Clone, ValueEnum)]
enum Mode {
    Naive,
    Dp,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Naive => "naive",
            Mode::Dp => "dp",
        }
    }
}

#[derive(Args, Clone)]
struct Germ {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    r: u32,
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// v(a).
    #[arg(long)]
    va: u32,
    /// Unit part of a as comma-separated coefficients of 1, t, t^2, ...
    #[arg(long, value_delimiter = ',', default_value = "1", allow_negative_numbers = true)]
    ua: Vec<i64>,
    #[arg(long, value_enum, default_value_t = Mode::Dp)]
    mode: Mode,
    /// Tuple budget of the naive evaluator.
    #[arg(long, env = "GERMLAB_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u128,
}

impl Germ {
    fn params(&self) -> Result<GermParams> {
        GermParams::from_parts(self.common.p, self.r, self.m, self.va, &self.ua)
    }

    fn evaluate(&self, i_side: bool) -> Result<ExactValue> {
        let reg = EvaluatorRegistry::with_defaults(self.budget);
        let gp = self.params()?;
        let ev = reg.get(self.mode.name())?;
        if i_side {
            eval_i(&gp, ev)
        } else {
            eval_j(&gp, ev)
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum Base {
    /// g0 = w_{G_r}
    Longest,
    /// g0 = Id
    Identity,
}

#[derive(Args, Clone)]
struct Orbital {
    #[command(flatten)]
    common: Common,
    /// Block sizes, e.g. `2,1`.
    #[arg(long, value_delimiter = ',')]
    composition: Vec<usize>,
    /// One series per block, e.g. `--torus "v=0;c=1;N=20"`.
    #[arg(long)]
    torus: Vec<String>,
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long, value_enum, default_value_t = Base::Longest)]
    base: Base,
    #[arg(long, default_value_t = 1)]
    radius: i32,
}

impl Orbital {
    fn label(&self) -> Result<OrbitLabel> {
        let torus = self.torus.iter().map(|s| parse_series(s, self.common.p)).collect::<Result<Vec<_>>>()?;
        OrbitLabel::new(Composition::new(self.composition.clone())?, torus)
    }

    fn function(&self, symmetric: bool) -> Result<CongruenceFunction> {
        let p = self.common.p;
        let r = self.composition.iter().sum();
        let prec = 4 * self.radius + 2 * self.m as i32 + 64;
        let one = ExactValue::one(p);
        match self.base {
            Base::Longest => CongruenceFunction::longest_weyl(p, r, self.m, one, symmetric, prec),
            Base::Identity => {
                CongruenceFunction::new(germlab::MatrixLF::identity(p, r, prec), self.m, one, symmetric)
            }
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum Side {
    J,
    I,
}

#[derive(Subcommand)]
enum Command {
    /// The Hilbert symbol (a, b).
    Hilbert {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// The Weil constant gamma(a, Psi).
    Weil {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        a: String,
    },
    /// The germ sum J(a, r).
    JSum(Germ),
    /// The germ sum I(a, r).
    ISum(Germ),
    /// Closed form of J(a, r).
    ClosedJ(Germ),
    /// Closed form of I(a, r).
    ClosedI(Germ),
    /// The germ K(alpha) from J(a, r).
    GermK(Germ),
    /// The germ L(alpha) from J(a, r).
    GermL(Germ),
    /// I(a, r) against the ratio formula applied to J(a, r).
    RatioCheck(Germ),
    /// The bracket and counting identities for r = 1..r-max.
    Identities {
        #[arg(long, default_value_t = 200)]
        r_max: u32,
    },
    /// Symmetric elimination of the rank-l quadratic form.
    DiagQuadratic {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        l: usize,
    },
    /// I(w t, phi) with phi = char(g0 K_m cap S_r).
    OrbitalI(Orbital),
    /// J(w t, f) with f = char(g0 K_m).
    OrbitalJ(Orbital),
    /// I(w_{G_r} z, c1(r) char(w_{G_r} K_m cap S_r)); every z^r = 1 when z is omitted.
    UnitLemma {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, allow_negative_numbers = true)]
        z: Option<i64>,
    },
    /// Rank-2 orbital integral against its intermediate integral.
    DecompCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Side::J)]
        side: Side,
        #[arg(long)]
        t1: String,
        #[arg(long)]
        t2: String,
        /// Unipotent entries of the base point.
        #[arg(long, default_value = "v=0;c=0;N=40")]
        x0: String,
        #[arg(long, default_value = "v=0;c=0;N=40")]
        y0: String,
        /// Integral matrix k as `k11,k12,k21,k22`.
        #[arg(long, value_delimiter = ',', default_value = "1,0,0,1", allow_negative_numbers = true)]
        k: Vec<i64>,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = 0)]
        radius: i32,
    },
    /// Rank-2 germ expansion with f = char(w_{G_2} K_m).
    ExpansionCheck {
        #[command(flatten)]
        germ: Germ,
        /// The unit beta; defaults to 1.
        #[arg(long)]
        beta: Option<String>,
        /// Defaults to v(a) + m.
        #[arg(long)]
        radius: Option<i32>,
    },
    /// Evaluates identities over a grid and writes CSV.
    Sweep {
        #[arg(long, value_delimiter = ',', default_value = "7,11,13", value_parser = parse_prime)]
        primes: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        ranks: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        levels: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "3,4")]
        vas: Vec<u32>,
        /// Unit parts separated by `;`, each comma-separated.
        #[arg(long, default_value = "1")]
        units: String,
        #[arg(long, value_delimiter = ',', default_value = "closed-j,closed-i,ratio,germ-lk")]
        identities: Vec<String>,
        #[arg(long, env = "GERMLAB_BUDGET", default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
}

fn render(v: &ExactValue, pretty: bool) -> Value {
    if pretty {
        Value::String(v.pretty())
    } else {
        v.to_json()
    }
}

fn check_report(lhs: &ExactValue, rhs: &ExactValue, names: (&str, &str), pretty: bool) -> Value {
    json!({ "equal": lhs == rhs, names.0: render(lhs, pretty), names.1: render(rhs, pretty) })
}

fn run(cmd: Command, out: &mut impl Write) -> Result<()> {
    let value = match cmd {
        Command::Hilbert { common, a, b } => {
            let s = hilbert(&parse_series(&a, common.p)?, &parse_series(&b, common.p)?)?;
            json!({ "value": s })
        }
        Command::Weil { common, a } => render(&weil_gamma(&parse_series(&a, common.p)?)?, common.pretty),
        Command::JSum(g) => render(&g.evaluate(false)?, g.common.pretty),
        Command::ISum(g) => render(&g.evaluate(true)?, g.common.pretty),
        Command::ClosedJ(g) => render(&closed_j(&g.params()?)?, g.common.pretty),
        Command::ClosedI(g) => render(&closed_i(&g.params()?)?, g.common.pretty),
        Command::GermK(g) => render(&germ_k(&g.params()?, &g.evaluate(false)?)?, g.common.pretty),
        Command::GermL(g) => render(&germ_l(&g.params()?, &g.evaluate(false)?)?, g.common.pretty),
        Command::RatioCheck(g) => {
            let gp = g.params()?;
            let (i, j) = (g.evaluate(true)?, g.evaluate(false)?);
            let stated = ratio_prop(&gp, &j)?;
            let quotient = ratio_from_closed_forms(&gp, &j)?;
            json!({
                "equal": i == stated,
                "i": render(&i, g.common.pretty),
                "ratio": render(&stated, g.common.pretty),
                "equal_with_negated_exponent": i == quotient,
            })
        }
        Command::Identities { r_max } => {
            let brackets = (1..=r_max).all(bracket_identities);
            let counts = (2..=r_max.min(50)).all(|r| count_c2(r) == count_c2_direct(r));
            json!({ "ok": brackets && counts })
        }
        Command::DiagQuadratic { common, l } => {
            let (t, d) = diagonalize_quadratic(l, common.p)?;
            let vals = |row: &[germlab::ResidueElem]| row.iter().map(|x| x.value()).collect::<Vec<_>>();
            json!({
                "t": t.iter().map(|row| vals(row)).collect::<Vec<_>>(),
                "d": vals(&d),
                "ok": d == expected_diagonal(l, common.p)?,
            })
        }
        Command::OrbitalI(o) => render(&orbital_i(&o.label()?, &o.function(true)?, o.radius)?, o.common.pretty),
        Command::OrbitalJ(o) => render(&orbital_j(&o.label()?, &o.function(false)?, o.radius)?, o.common.pretty),
        Command::UnitLemma { common, r, m, z } => {
            let p = common.p;
            if r == 0 {
                return Err(Error::Precondition("rank must be positive".into()));
            }
            let zs = match z {
                Some(z) => vec![LaurentSeries::constant(p, z, 40)],
                None => roots_of_unity(p, r as u32, 40),
            };
            let rows = zs
                .iter()
                .map(|z| Ok(json!({ "z": z.to_string(), "value": render(&unit_sym_test(r, z, m)?, common.pretty) })))
                .collect::<Result<Vec<_>>>()?;
            if z.is_some() {
                rows[0]["value"].clone()
            } else {
                Value::Array(rows)
            }
        }
        Command::DecompCheck { common, side, t1, t2, x0, y0, k, m, radius } => {
            let p = common.p;
            let [k11, k12, k21, k22] = k[..] else {
                return Err(Error::Parse("--k takes four entries".into()));
            };
            let (t1, t2) = (parse_series(&t1, p)?, parse_series(&t2, p)?);
            let (x0, y0) = (parse_series(&x0, p)?, parse_series(&y0, p)?);
            let kk = [[k11, k12], [k21, k22]];
            let symmetric = matches!(side, Side::I);
            let f = sample_test_function(&t1, &t2, &x0, &y0, kk, m, ExactValue::one(p), symmetric)?;
            let c = if symmetric {
                check_decomposition_i(&t1, &t2, &f, radius)?
            } else {
                check_decomposition_j(&t1, &t2, &f, radius)?
            };
            check_report(&c.orbital, &c.intermediate, ("orbital", "intermediate"), common.pretty)
        }
        Command::ExpansionCheck { germ, beta, radius } => {
            let p = germ.common.p;
            let gp = germ.params()?;
            let prec = gp.a.precision() + 2 * (gp.va() + gp.m) as i32 + 16;
            let beta = match beta {
                Some(s) => parse_series(&s, p)?,
                None => LaurentSeries::one(p, prec),
            };
            let f = CongruenceFunction::longest_weyl(p, 2, gp.m, ExactValue::one(p), false, prec)?;
            let reg = EvaluatorRegistry::with_defaults(germ.budget);
            let r = germ_expansion_check(&beta, &f, &gp, reg.get(germ.mode.name())?, radius)?;
            check_report(&r.lhs, &r.rhs, ("lhs", "rhs"), germ.common.pretty)
        }
        Command::Sweep { primes, ranks, levels, vas, units, identities, budget } => {
            let units = units
                .split(';')
                .map(|u| u.split(',').map(|c| c.trim().parse::<i64>().map_err(|e| Error::Parse(e.to_string()))).collect())
                .collect::<Result<Vec<Vec<i64>>>>()?;
            let grid = Grid { primes, ranks, levels, valuations: vas, units };
            let names: Vec<&str> = identities.iter().map(String::as_str).collect();
            let rows = run_sweep(&IdentityRegistry::default(), &names, &EvaluatorRegistry::with_defaults(budget), &grid)?;
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| Error::Parse(e.to_string());
            w.write_record(SweepRow::HEADER).map_err(csv_err)?;
            for row in &rows {
                w.write_record(row.record()).map_err(csv_err)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
            out.write_all(&bytes).map_err(|e| Error::Parse(e.to_string()))?;
            return Ok(());
        }
    };
    writeln!(out, "{value}").map_err(|e| Error::Parse(e.to_string()))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotStabilized { .. } => 3,
        Error::BudgetExceeded { .. } => 4,
        Error::InsufficientPrecision(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    match run(cli.command, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
