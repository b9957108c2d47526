//! Run configuration: flags, parameter resolution and the config echo.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kmap_core::poly::{format_rational, Rational};
use kmap_core::projmap::FamilyParams;
use kmap_core::tower::Family;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::CliError;

#[derive(Parser, Debug)]
#[command(name = "kmap", version, about = "Degree growth of the birational maps k_F = j_F o iota")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: GlobalOpts,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Print k, its inverse, degrees, Jacobian factors and exceptional images.
    Show,
    /// Degree sequence of the iterates against the Picard prediction.
    Degseq,
    /// Action on the Picard group: matrix, characteristic polynomial, growth.
    Pic {
        /// Basis family; chosen by parity of n, or Z for cubic parameters, when omitted.
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Degree of F; coefficients are drawn at random unless given.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Exact coefficients "a0,a1,...,an" (integers or p/q).
    #[arg(long, global = true, allow_hyphen_values = true, conflicts_with = "cubic")]
    pub coeffs: Option<String>,
    /// Cubic family "a,b": F = a y^3 + a y^2 + b y + 2.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub cubic: Option<String>,
    /// Number of iterates.
    #[arg(long, global = true, default_value_t = 6)]
    pub iters: usize,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Prime)]
    pub mode: Mode,
    /// Fixed prime for prime-field mode.
    #[arg(long, global = true)]
    pub prime: Option<u64>,
    /// Horizon for genericity and orbit scans.
    #[arg(long, global = true, default_value_t = 12)]
    pub horizon: u32,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Abort a degree computation once a polynomial exceeds this many terms.
    #[arg(long, global = true, default_value_t = 2_000_000)]
    pub budget: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Rational,
    Prime,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Tsv,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyArg {
    X,
    Y,
    Z,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Involutions,
    Builders,
    Inverse,
    Jacobian,
    Exceptional,
    Fibermaps,
    Orbits,
    Pic,
    Invariant,
    Isometry,
    All,
}

impl Suite {
    pub const EACH: [Suite; 10] = [
        Suite::Involutions,
        Suite::Builders,
        Suite::Inverse,
        Suite::Jacobian,
        Suite::Exceptional,
        Suite::Fibermaps,
        Suite::Orbits,
        Suite::Pic,
        Suite::Invariant,
        Suite::Isometry,
    ];

    pub fn name(&self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Explicit,
    Cubic,
    Random,
}

/// Flags resolved into concrete parameters.
#[derive(Debug)]
pub struct RunConfig {
    pub command: Command,
    pub opts: GlobalOpts,
    pub params: FamilyParams,
    pub source: Source,
}

impl RunConfig {
    pub fn resolve(cli: Cli) -> Result<Self, CliError> {
        let Cli { command, opts } = cli;
        let (params, source) = resolve_params(&command, &opts)?;
        if let Some(n) = opts.n {
            if n != params.n() {
                return Err(CliError::Usage(format!(
                    "--n {n} disagrees with the {} given coefficients",
                    params.coeffs().len()
                )));
            }
        }
        if opts.iters == 0 {
            return Err(CliError::Usage("--iters must be at least 1".into()));
        }
        Ok(RunConfig { command, opts, params, source })
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    /// The family whose Picard matrix describes these parameters.
    pub fn family(&self) -> Family {
        match self.command {
            Command::Pic { family: Some(f) } => match f {
                FamilyArg::X => Family::X,
                FamilyArg::Y => Family::Y,
                FamilyArg::Z => Family::Z,
            },
            _ if self.params.cubic_parameters().is_some() => Family::Z,
            _ => Family::by_parity(&self.params),
        }
    }

    pub fn echo(&self) -> Value {
        let (command, suite, family) = match &self.command {
            Command::Show => ("show", None, None),
            Command::Degseq => ("degseq", None, None),
            Command::Pic { family } => ("pic", None, *family),
            Command::Verify { suite } => ("verify", Some(suite.name()), None),
        };
        let source = match self.source {
            Source::Explicit => "explicit",
            Source::Cubic => "cubic",
            Source::Random => "random",
        };
        json!({
            "command": command,
            "suite": suite,
            "family": family.map(|f| format!("{f:?}")),
            "n": self.n(),
            "coeffs": self.params.coeff_strings(),
            "cubic": self.params.cubic_parameters().map(|(a, b)| [format_rational(&a), format_rational(&b)]),
            "params_source": source,
            "iters": self.opts.iters,
            "mode": match self.opts.mode { Mode::Rational => "rational", Mode::Prime => "prime" },
            "prime": self.opts.prime,
            "horizon": self.opts.horizon,
            "budget": self.opts.budget,
            "seed": self.opts.seed,
            "format": format!("{:?}", self.opts.format).to_lowercase(),
        })
    }
}

fn resolve_params(command: &Command, opts: &GlobalOpts) -> Result<(FamilyParams, Source), CliError> {
    if let Some(text) = &opts.coeffs {
        let coeffs = parse_list(text)?;
        let p = FamilyParams::new(coeffs).map_err(|e| CliError::Usage(e.to_string()))?;
        return Ok((p, Source::Explicit));
    }
    if let Some(text) = &opts.cubic {
        let (a, b) = parse_pair(text)?;
        let p = FamilyParams::cubic(a, b).map_err(|e| CliError::Usage(e.to_string()))?;
        return Ok((p, Source::Cubic));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let wants_z = matches!(command, Command::Pic { family: Some(FamilyArg::Z) })
        || matches!(command, Command::Verify { suite: Suite::Invariant | Suite::Isometry });
    if wants_z && opts.n.is_none() {
        let a = loop {
            let a = small_rational(&mut rng);
            if a != Rational::from_integer(BigInt::from(0)) {
                break a;
            }
        };
        let b = small_rational(&mut rng);
        let p = FamilyParams::cubic(a, b).map_err(|e| CliError::Usage(e.to_string()))?;
        return Ok((p, Source::Random));
    }
    let n = opts.n.unwrap_or(2);
    Ok((FamilyParams::random(n, opts.horizon, &mut rng), Source::Random))
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let num: i64 = rng.gen_range(-9..=9);
    let den: i64 = rng.gen_range(1..=5);
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn parse_rational(text: &str) -> Result<Rational, CliError> {
    kmap_core::poly::parse_rational(text).map_err(|e| CliError::Usage(e.to_string()))
}

fn parse_list(text: &str) -> Result<Vec<Rational>, CliError> {
    text.split(',').map(parse_rational).collect()
}

fn parse_pair(text: &str) -> Result<(Rational, Rational), CliError> {
    match parse_list(text)?.as_slice() {
        [a, b] => Ok((a.clone(), b.clone())),
        _ => Err(CliError::Usage(format!("--cubic expects \"a,b\", got {text:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-3/6").unwrap(), q(-1, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), q(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("0.5").is_err());
    }
}
