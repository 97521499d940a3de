//! `trimer` command-line tool: bound states of the 1D heavy-heavy-light
//! contact-interaction system by three routes, with cross-validation.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use trimer::cli::{self, Command as RunCommand, RunConfig};
use trimer::{Error, Sector};

#[derive(Parser)]
#[command(
    name = "trimer",
    version,
    about = "Spectral solvers for a 1D three-body contact-interaction system",
    long_about = "Computes the bound states of two heavy particles (bosons or fermions) \
                  coupled to one light particle by attractive contact interactions, via the \
                  exact momentum-space spectral condition, the Born-Oppenheimer effective \
                  operator, and the Airy-function asymptotic law."
)]
struct Args {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(clap::Args, Debug)]
struct CommonOpts {
    /// Contact coupling (attractive: alpha < 0)
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    alpha: f64,
    /// Mass-ratio parameters, comma separated
    #[arg(long = "eps", value_delimiter = ',', num_args = 1..)]
    eps: Option<Vec<f64>>,
    /// Symmetry sector: b, f, or both
    #[arg(long, default_value = "both")]
    sector: String,
    /// Number of levels (bound states / eigenvalues) per sector
    #[arg(long)]
    levels: Option<usize>,
    /// Node count (effective-solver grid or momentum-grid budget)
    #[arg(long)]
    nodes: Option<usize>,
    /// Momentum truncation override for the spectral condition
    #[arg(long = "nu-max")]
    nu_max: Option<f64>,
    /// Half-domain length override for the effective solver
    #[arg(long)]
    domain: Option<f64>,
    /// Root-bracketing tolerance in units of alpha^2
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Output format: csv or json
    #[arg(long, default_value = "csv")]
    format: String,
    /// Output path (standard output when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Light-particle spectrum dataset (x, -lambda0, -lambda1, N, V, R)
    Lightspec {
        #[command(flatten)]
        common: CommonOpts,
        /// Sample range half-width
        #[arg(long = "x-max", default_value_t = 10.0)]
        x_max: f64,
        /// Number of samples
        #[arg(long = "x-count", default_value_t = 401)]
        x_count: usize,
    },
    /// Effective potential and correction (x, V, R) on [0, x-max]
    Potential {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long = "x-max", default_value_t = 10.0)]
        x_max: f64,
        #[arg(long = "x-count", default_value_t = 201)]
        x_count: usize,
    },
    /// Eigenvalues of the effective heavy-pair operator
    Effective {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Bound states from the exact spectral condition
    Bs {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Airy-law eigenvalue predictions
    Asymptotic {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Airy constants sigma_k with residuals and brackets
    Airy {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Convert physical masses and coupling to scaled (epsilon, alpha)
    Convert {
        #[command(flatten)]
        common: CommonOpts,
        /// Heavy-particle mass M
        #[arg(long = "mass-heavy")]
        mass_heavy: f64,
        /// Light-particle mass m
        #[arg(long = "mass-light")]
        mass_light: f64,
        /// Physical contact coupling
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
    },
    /// Run the full cross-validation suite (exit 0 iff all checks pass)
    Validate {
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn to_config(cmd: Cmd) -> Result<RunConfig, Error> {
    let (command, common, extra) = match cmd {
        Cmd::Lightspec { common, x_max, x_count } => {
            (RunCommand::Lightspec, common, Some((x_max, x_count)))
        }
        Cmd::Potential { common, x_max, x_count } => {
            (RunCommand::Potential, common, Some((x_max, x_count)))
        }
        Cmd::Effective { common } => (RunCommand::Effective, common, None),
        Cmd::Bs { common } => (RunCommand::Bs, common, None),
        Cmd::Asymptotic { common } => (RunCommand::Asymptotic, common, None),
        Cmd::Airy { common } => (RunCommand::Airy, common, None),
        Cmd::Convert { common, mass_heavy, mass_light, beta } => {
            let mut config = base_config(RunCommand::Convert, common)?;
            config.mass_heavy = mass_heavy;
            config.mass_light = mass_light;
            config.beta = beta;
            return Ok(config);
        }
        Cmd::Validate { common } => (RunCommand::Validate, common, None),
    };
    let mut config = base_config(command, common)?;
    if let Some((x_max, x_count)) = extra {
        config.x_max = x_max;
        config.x_count = x_count;
    }
    Ok(config)
}

fn base_config(command: RunCommand, common: CommonOpts) -> Result<RunConfig, Error> {
    let sectors = match common.sector.as_str() {
        "b" => vec![Sector::Bosonic],
        "f" => vec![Sector::Fermionic],
        "both" => vec![Sector::Bosonic, Sector::Fermionic],
        other => return Err(Error::Config(format!("unknown sector {other:?} (use b|f|both)"))),
    };
    let defaults = RunConfig::default();
    Ok(RunConfig {
        command,
        alpha: common.alpha,
        epsilons: common.eps.unwrap_or(defaults.epsilons),
        sectors,
        levels: common.levels.unwrap_or(defaults.levels),
        nodes: common.nodes,
        nu_max: common.nu_max,
        domain: common.domain,
        tol: common.tol,
        format: common.format.parse()?,
        out: common.out,
        ..defaults
    })
}

fn main() {
    let args = Args::parse();
    let code = match to_config(args.command).and_then(|config| cli::run(&config)) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Config(_) | Error::Domain { .. } | Error::Range { .. } => 2,
                Error::NonConvergence { .. } | Error::Discretization { .. } => 3,
                _ => 2,
            }
        }
    };
    std::process::exit(code);
}
