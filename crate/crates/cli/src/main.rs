use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use sigmapoints::algebraic::AlgebraicNumber;
use sigmapoints::auxpoly::{coefficient_report, construct_vanishing};
use sigmapoints::bounds::eval_bound;
use sigmapoints::census::{
    run_census, run_growth_suite, run_zero_experiment, GrowthSuiteConfig, RunManifest, ZeroExperimentConfig,
};
use sigmapoints::elliptic::{tol_from_digits, DEFAULT_DIGITS};
use sigmapoints::exact::parse_rational;
use sigmapoints::growth::threshold_iteration;
use sigmapoints::lattice::reduce_to_cell;
use sigmapoints::{BoundId, Error, GaussianRational, Lattice, SigmaEvaluator};

#[derive(Parser)]
#[command(name = "sigmapoints", version, about = "Algebraic points on the graph of the Weierstrass sigma function")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Lattice basis as "<w1>,<w2>", e.g. "1,i" or "1,3/10+6/5i".
    #[arg(long, global = true)]
    lattice: Option<String>,
    /// Working precision in decimal digits.
    #[arg(long, global = true)]
    digits: Option<u32>,
    /// key = value configuration file; command-line flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (default: standard output).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a lattice basis; with --z, also reduce points into the cell.
    Reduce {
        #[arg(long = "z", allow_hyphen_values = true)]
        points: Vec<String>,
    },
    /// Quasi-periods, invariants and the Legendre residual.
    Invariants,
    /// log sigma, sigma and zeta at the given points.
    Sigma {
        #[arg(long = "z", required = true, allow_hyphen_values = true)]
        points: Vec<String>,
    },
    /// Growth certificate, threshold iteration, discriminant grid and sampled growth check.
    Growth {
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        width: Option<f64>,
        #[arg(long)]
        delta_points: Option<usize>,
    },
    /// The iteration y_{k+1} on Im(tau) starting at sqrt(3)/2.
    Threshold {
        #[arg(long, default_value_t = 4)]
        steps: usize,
    },
    /// Zero counts of P(z, sigma(z)) on disks, one JSON line per (P, R).
    Zeros {
        /// Polynomial in X and Y, e.g. "Y^2 - X"; repeatable.
        #[arg(long = "poly")]
        polys: Vec<String>,
        /// Disk radius; repeatable.
        #[arg(long = "radius")]
        radii: Vec<f64>,
        /// Number of additional seeded random polynomials.
        #[arg(long)]
        random: Option<usize>,
        /// Also run the Jensen bound.
        #[arg(long)]
        jensen: bool,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Integer polynomial of degree <= T vanishing at rational points "x,y".
    Auxpoly {
        #[arg(long = "point", required = true, allow_hyphen_values = true, value_name = "X,Y")]
        points: Vec<String>,
        #[arg(long)]
        t: usize,
        /// Height used for the coefficient-size comparison.
        #[arg(long, default_value_t = 2.0)]
        h: f64,
    },
    /// Evaluate a counting or radius bound.
    Bound {
        #[arg(long)]
        id: BoundId,
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[arg(long = "const", value_name = "KEY=VALUE")]
        consts: Vec<String>,
    },
    /// Census of algebraic z up to degree and height, as JSON lines.
    Census {
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        d_max: Option<usize>,
        #[arg(long)]
        h_max: Option<f64>,
        #[arg(long = "const", value_name = "KEY=VALUE")]
        consts: Vec<String>,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e.root() {
        Error::ImTauTooLarge { .. }
        | Error::PositiveDiscriminant(_)
        | Error::HypothesisUnmet(_)
        | Error::DomainViolation(_)
        | Error::DegreeTooSmall { .. }
        | Error::NoKernel
        | Error::WitnessNotFound { .. } => 3,
        Error::PrecisionUnreachable(_)
        | Error::PrecisionTooLow { .. }
        | Error::ContourStuck { .. }
        | Error::FormulaMismatch { .. }
        | Error::RootFindingFailure(_) => 4,
        Error::BudgetExceeded(_) => 5,
        _ => 2,
    }
}

fn key_value(s: &str) -> Result<(String, String), Error> {
    let (k, v) = s.split_once('=').ok_or_else(|| Error::InvalidInput(format!("expected KEY=VALUE, got '{s}'")))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

fn number_map(pairs: &[String]) -> Result<BTreeMap<String, f64>, Error> {
    pairs
        .iter()
        .map(|s| {
            let (k, v) = key_value(s)?;
            let x = v.parse().map_err(|_| Error::InvalidInput(format!("bad number '{v}' for '{k}'")))?;
            Ok((k, x))
        })
        .collect()
}

fn parse_complex(s: &str) -> Result<Complex64, Error> {
    Ok(s.parse::<GaussianRational>()?.to_complex())
}

fn parse_rational_i64(s: &str) -> Result<AlgebraicNumber, Error> {
    let r = parse_rational(s)?;
    let too_big = || Error::InvalidInput(format!("'{s}' does not fit in 64-bit integers"));
    let p = i64::try_from(r.numer()).map_err(|_| too_big())?;
    let q = i64::try_from(r.denom()).map_err(|_| too_big())?;
    AlgebraicNumber::rational(p, q)
}

struct Context {
    common: Common,
    config: Option<String>,
}

impl Context {
    fn lattice_spec(&self) -> String {
        self.common.lattice.clone().unwrap_or_else(|| "1,i".into())
    }

    fn lattice(&self) -> Result<Lattice, Error> {
        Lattice::parse(&self.lattice_spec())
    }

    fn tol(&self) -> f64 {
        tol_from_digits(self.common.digits.unwrap_or(DEFAULT_DIGITS))
    }

    fn evaluator(&self) -> Result<SigmaEvaluator, Error> {
        SigmaEvaluator::new(&self.lattice()?, self.tol())
    }

    fn no_config(&self, command: &str) -> Result<(), Error> {
        match self.config {
            Some(_) => Err(Error::InvalidInput(format!("'{command}' does not read a configuration file"))),
            None => Ok(()),
        }
    }
}

fn write_json<W: Write, T: Serialize>(out: &mut W, value: &T) -> Result<(), Error> {
    let io = |e: io::Error| Error::InvalidInput(format!("write failed: {e}"));
    serde_json::to_writer(&mut *out, value).map_err(|e| io(e.into()))?;
    out.write_all(b"\n").map_err(io)
}

fn run(ctx: &Context, command: Command, out: &mut dyn Write) -> Result<(), Error> {
    let mut out = out;
    match command {
        Command::Reduce { points } => {
            ctx.no_config("reduce")?;
            let lat = ctx.lattice()?;
            let cells = points
                .iter()
                .map(|p| Ok(json!({ "z": p, "cell": reduce_to_cell(&lat, parse_complex(p)?) })))
                .collect::<Result<Vec<_>, Error>>()?;
            write_json(
                &mut out,
                &json!({
                    "omega1": lat.omega1(),
                    "omega2": lat.omega2(),
                    "tau": lat.tau(),
                    "reduction": lat.reduction(),
                    "exact": lat.is_exact(),
                    "points": cells,
                }),
            )
        }
        Command::Invariants => {
            ctx.no_config("invariants")?;
            let ev = ctx.evaluator()?;
            let lat = ev.lattice();
            let qp = ev.quasi_periods();
            write_json(
                &mut out,
                &json!({
                    "tau": lat.tau(),
                    "omega1": lat.omega1(),
                    "omega2": lat.omega2(),
                    "quasi_periods": qp,
                    "legendre_residual": qp.legendre_residual(lat.omega1(), lat.omega2()),
                }),
            )
        }
        Command::Sigma { points } => {
            ctx.no_config("sigma")?;
            let ev = ctx.evaluator()?;
            for p in &points {
                let z = parse_complex(p)?;
                let log = ev.log_sigma(z).ok();
                let zeta = ev.zeta(z).ok();
                write_json(&mut out, &json!({ "z": z, "log_sigma": log, "sigma": ev.sigma(z), "zeta": zeta }))?;
            }
            Ok(())
        }
        Command::Growth { samples, width, delta_points } => {
            let mut cfg = GrowthSuiteConfig::default();
            if let Some(text) = &ctx.config {
                cfg.apply_config(text)?;
            }
            if let Some(l) = &ctx.common.lattice {
                cfg.lattice = l.clone();
            }
            cfg.digits = ctx.common.digits.unwrap_or(cfg.digits);
            cfg.seed = ctx.common.seed.unwrap_or(cfg.seed);
            cfg.samples = samples.unwrap_or(cfg.samples);
            cfg.width = width.unwrap_or(cfg.width);
            cfg.delta_points = delta_points.unwrap_or(cfg.delta_points);
            write_json(&mut out, &run_growth_suite(&cfg)?)
        }
        Command::Threshold { steps } => {
            ctx.no_config("threshold")?;
            write_json(&mut out, &json!({ "iteration": threshold_iteration(steps) }))
        }
        Command::Zeros { polys, radii, random, jensen, set } => {
            let mut cfg = ZeroExperimentConfig::default();
            if let Some(text) = &ctx.config {
                cfg.apply_config(text)?;
            }
            for s in &set {
                let (k, v) = key_value(s)?;
                cfg.set(&k, &v)?;
            }
            if let Some(l) = &ctx.common.lattice {
                cfg.lattice = l.clone();
            }
            cfg.digits = ctx.common.digits.unwrap_or(cfg.digits);
            cfg.seed = ctx.common.seed.unwrap_or(cfg.seed);
            if !polys.is_empty() {
                cfg.polys = polys;
            }
            if !radii.is_empty() {
                cfg.radii = radii;
            }
            cfg.random = random.unwrap_or(cfg.random);
            cfg.jensen |= jensen;
            for row in run_zero_experiment(&cfg)? {
                write_json(&mut out, &row)?;
            }
            Ok(())
        }
        Command::Auxpoly { points, t, h } => {
            ctx.no_config("auxpoly")?;
            let pts = points
                .iter()
                .map(|p| {
                    let (x, y) =
                        p.split_once(',').ok_or_else(|| Error::InvalidInput(format!("point '{p}' must be 'x,y'")))?;
                    Ok((parse_rational_i64(x)?, parse_rational_i64(y)?))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            let poly = construct_vanishing(&pts, t)?;
            let report = coefficient_report(&poly, 1, h);
            write_json(&mut out, &json!({ "polynomial": poly, "coefficients": report }))
        }
        Command::Bound { id, params, consts } => {
            ctx.no_config("bound")?;
            write_json(&mut out, &eval_bound(id, &number_map(&params)?, &number_map(&consts)?)?)
        }
        Command::Census { mode, d_max, h_max, consts, set } => {
            let mut m = RunManifest::default();
            if let Some(text) = &ctx.config {
                m.apply_config(text)?;
            }
            for s in &set {
                let (k, v) = key_value(s)?;
                m.set(&k, &v)?;
            }
            if let Some(l) = &ctx.common.lattice {
                m.lattice = l.clone();
            }
            m.digits = ctx.common.digits.unwrap_or(m.digits);
            m.seed = ctx.common.seed.unwrap_or(m.seed);
            if let Some(mode) = mode {
                m.mode = mode.parse()?;
            }
            m.d_max = d_max.unwrap_or(m.d_max);
            m.h_max = h_max.unwrap_or(m.h_max);
            for (k, v) in number_map(&consts)? {
                m.constants.insert(k, v);
            }
            run_census(&m, &mut out).map(|_| ())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match &cli.common.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => Some(text),
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None => None,
    };
    let mut out: Box<dyn Write> = match &cli.common.out {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: cannot create {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let ctx = Context { common: cli.common, config };
    let result = run(&ctx, cli.command, &mut out)
        .and_then(|()| out.flush().map_err(|e| Error::InvalidInput(format!("write failed: {e}"))));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
