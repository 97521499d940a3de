//! Command-line front end: parameter conversion, table emission for every
//! solver surface, and the `validate` cross-check suite.

pub mod table;
pub mod validate;

pub use table::{emit, OutputFormat, Table, Value};

use crate::birman_schwinger::{self, BsGrid};
use crate::bo_effective::{self, DEFAULT_NODES};
use crate::light_particle::{LightSpectrum, PhysParams, Sector};
use crate::specfun;
use crate::{Error, Result};
use serde_json::json;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Lightspec,
    Potential,
    Effective,
    Bs,
    Asymptotic,
    Airy,
    Convert,
    Validate,
}

/// Fully resolved run configuration; validated before dispatch and embedded
/// in every output's metadata block.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub alpha: f64,
    pub epsilons: Vec<f64>,
    pub sectors: Vec<Sector>,
    pub levels: usize,
    /// Effective-solver node count or momentum-grid node budget.
    pub nodes: Option<usize>,
    pub nu_max: Option<f64>,
    /// Half-domain override for the effective solver.
    pub domain: Option<f64>,
    /// Bisection tolerance for bound-state roots, in units of `alpha^2`.
    pub tol: f64,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    /// Sample range `[-x_max, x_max]` and count for `lightspec`/`potential`.
    pub x_max: f64,
    pub x_count: usize,
    /// Masses and physical coupling for `convert`.
    pub mass_heavy: f64,
    pub mass_light: f64,
    pub beta: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: Command::Validate,
            alpha: -1.0,
            epsilons: vec![0.2, 0.1, 0.05],
            sectors: vec![Sector::Bosonic, Sector::Fermionic],
            levels: 3,
            nodes: None,
            nu_max: None,
            domain: None,
            tol: 1e-6,
            format: OutputFormat::Csv,
            out: None,
            x_max: 10.0,
            x_count: 401,
            mass_heavy: 1.0,
            mass_light: 0.01,
            beta: -50.25,
        }
    }
}

impl RunConfig {
    pub fn validate_config(&self) -> Result<()> {
        if !self.alpha.is_finite() {
            return Err(Error::Config(format!("non-finite alpha {}", self.alpha)));
        }
        if self.epsilons.is_empty() || self.epsilons.iter().any(|&e| !(e > 0.0 && e <= 1.0)) {
            return Err(Error::Config(format!("epsilon list {:?} outside (0, 1]", self.epsilons)));
        }
        if self.sectors.is_empty() {
            return Err(Error::Config("no sector selected".into()));
        }
        if self.levels == 0 || self.levels > 20 {
            return Err(Error::Config(format!("levels {} outside 1..=20", self.levels)));
        }
        if !(self.tol > 0.0 && self.tol < 1e-2) {
            return Err(Error::Config(format!("tol {} outside (0, 1e-2)", self.tol)));
        }
        if self.x_count < 2 || !(self.x_max > 0.0) {
            return Err(Error::Config("need x_count >= 2 and x_max > 0".into()));
        }
        if self.command == Command::Convert && !(self.mass_heavy > 0.0 && self.mass_light > 0.0) {
            return Err(Error::Config("masses must be positive".into()));
        }
        Ok(())
    }

    fn meta_into(&self, t: &mut Table) {
        t.meta("alpha", json!(self.alpha));
        t.meta("epsilon", json!(self.epsilons));
        t.meta("sectors", json!(self.sectors.iter().map(|s| s.label()).collect::<Vec<_>>()));
        t.meta("levels", json!(self.levels));
        t.meta("nodes", json!(self.nodes));
        t.meta("nu_max", json!(self.nu_max));
        t.meta("domain", json!(self.domain));
        t.meta("tol", json!(self.tol));
    }

    fn params(&self, epsilon: f64, sector: Sector) -> PhysParams {
        PhysParams { alpha: self.alpha, epsilon, sector }
    }
}

/// Converts physical masses and coupling to the scaled parameters:
/// `mu = 2 M m / (2M + m)`, `eps = sqrt(2 mu / M)`, `alpha = 2 mu beta`.
pub fn phys_to_scaled(mass_heavy: f64, mass_light: f64, beta: f64) -> Result<(f64, f64)> {
    if !(mass_heavy > 0.0) || !(mass_light > 0.0) {
        return Err(Error::domain(
            "phys_to_scaled",
            format!("masses must be positive: M = {mass_heavy}, m = {mass_light}"),
        ));
    }
    let mu = 2.0 * mass_heavy * mass_light / (2.0 * mass_heavy + mass_light);
    let epsilon = (2.0 * mu / mass_heavy).sqrt();
    let alpha = 2.0 * mu * beta;
    Ok((epsilon, alpha))
}

/// Dispatches a validated configuration; returns the process exit code.
pub fn run(config: &RunConfig) -> Result<i32> {
    config.validate_config()?;
    let (table, code) = match config.command {
        Command::Lightspec => (run_lightspec(config)?, 0),
        Command::Potential => (run_potential(config)?, 0),
        Command::Effective => (run_effective(config)?, 0),
        Command::Bs => (run_bs(config)?, 0),
        Command::Asymptotic => (run_asymptotic(config)?, 0),
        Command::Airy => (run_airy(config)?, 0),
        Command::Convert => (run_convert(config)?, 0),
        Command::Validate => {
            let report = validate::run_validate(config)?;
            let code = if report.all_passed() { 0 } else { 1 };
            for line in report.lines() {
                eprintln!("{line}");
            }
            (report.into_table(config), code)
        }
    };
    emit(&table, config.format, config.out.as_deref())?;
    Ok(code)
}

/// The light-particle dataset: per `x`, both negative eigenvalues (the
/// excited one where present), the normalization, and the heavy-pair
/// potential data `V`, `R`.
pub fn run_lightspec(config: &RunConfig) -> Result<Table> {
    if !(config.alpha < 0.0) {
        return Err(Error::Config("lightspec needs alpha < 0".into()));
    }
    let mut t = Table::new(vec!["x", "e0", "e1", "n", "v", "r"]);
    config.meta_into(&mut t);
    t.meta("x_max", json!(config.x_max));
    t.meta("x_count", json!(config.x_count));
    for i in 0..config.x_count {
        let x = -config.x_max + 2.0 * config.x_max * i as f64 / (config.x_count - 1) as f64;
        let spec = LightSpectrum::evaluate(config.alpha, x)?;
        let r_x = if x == 0.0 { 1e-6 / config.alpha.abs() } else { x };
        t.push(vec![
            x.into(),
            (-spec.lambda0).into(),
            spec.lambda1.map(|l| -l).into(),
            spec.n.into(),
            bo_effective::potential_v(config.alpha, x)?.into(),
            bo_effective::correction_r(config.alpha, r_x)?.into(),
        ]);
    }
    Ok(t)
}

/// The effective-potential dataset `x, V, R` on `[0, x_max]`.
pub fn run_potential(config: &RunConfig) -> Result<Table> {
    if !(config.alpha < 0.0) {
        return Err(Error::Config("potential needs alpha < 0".into()));
    }
    let mut t = Table::new(vec!["x", "v", "r"]);
    config.meta_into(&mut t);
    for i in 0..config.x_count {
        let x = config.x_max * i as f64 / (config.x_count - 1) as f64;
        let r_x = if x == 0.0 { 1e-6 / config.alpha.abs() } else { x };
        t.push(vec![
            x.into(),
            bo_effective::potential_v(config.alpha, x)?.into(),
            bo_effective::correction_r(config.alpha, r_x)?.into(),
        ]);
    }
    Ok(t)
}

/// Effective-operator levels for every `(epsilon, sector)` pair, with the
/// scaled ratio and its Airy target.
pub fn run_effective(config: &RunConfig) -> Result<Table> {
    let mut t = Table::new(vec![
        "alpha", "epsilon", "sector", "k", "e_shifted", "energy", "ratio", "s_target", "e_airy",
        "half_length", "nodes",
    ]);
    config.meta_into(&mut t);
    let nodes = config.nodes.unwrap_or(DEFAULT_NODES);
    let a2 = config.alpha * config.alpha;
    for &eps in &config.epsilons {
        for &sector in &config.sectors {
            let p = config.params(eps, sector);
            let eigs = bo_effective::effective_eigs(&p, config.levels, nodes, config.domain)?;
            for (k, &shifted) in eigs.shifted.iter().enumerate() {
                let s = bo_effective::sector_constant(sector, k)?;
                t.push(vec![
                    config.alpha.into(),
                    eps.into(),
                    sector.label().into(),
                    k.into(),
                    shifted.into(),
                    (shifted - a2).into(),
                    (shifted / (a2 * eps.powf(2.0 / 3.0))).into(),
                    s.into(),
                    bo_effective::airy_prediction(&p, k)?.into(),
                    eigs.half_length.into(),
                    eigs.node_count.into(),
                ]);
            }
        }
    }
    Ok(t)
}

/// Bound states from the spectral condition for every `(epsilon, sector)`.
pub fn run_bs(config: &RunConfig) -> Result<Table> {
    let mut t = Table::new(vec![
        "alpha", "epsilon", "sector", "k", "lambda_star", "energy", "ratio", "s_target",
        "converged", "grid_nodes", "nu_max",
    ]);
    config.meta_into(&mut t);
    let a2 = config.alpha * config.alpha;
    for &eps in &config.epsilons {
        for &sector in &config.sectors {
            let p = config.params(eps, sector);
            let states = bs_states_for(config, &p)?;
            for s in states {
                let (lambda, energy, ratio) = if s.converged {
                    let r = (s.energy + a2) / (a2 * eps.powf(2.0 / 3.0));
                    (Some(s.lambda_star), Some(s.energy), Some(r))
                } else {
                    (None, None, None)
                };
                t.push(vec![
                    config.alpha.into(),
                    eps.into(),
                    sector.label().into(),
                    s.level.into(),
                    lambda.into(),
                    energy.into(),
                    ratio.into(),
                    bo_effective::sector_constant(sector, s.level)?.into(),
                    s.converged.into(),
                    s.grid_nodes.into(),
                    s.grid_nu_max.into(),
                ]);
            }
        }
    }
    Ok(t)
}

pub(crate) fn bs_states_for(
    config: &RunConfig,
    params: &PhysParams,
) -> Result<Vec<birman_schwinger::BoundStateResult>> {
    let grid = match (config.nu_max, config.nodes) {
        (None, None) => BsGrid::for_params(params)?,
        (nu, nodes) => {
            let default = BsGrid::for_params(params)?;
            BsGrid::build(nu.unwrap_or(default.nu_max), nodes.unwrap_or(default.len()))?
        }
    };
    birman_schwinger::bound_states(params, config.levels, &grid, config.tol)
}

/// The Airy asymptotic predictor per `(epsilon, sector, level)`.
pub fn run_asymptotic(config: &RunConfig) -> Result<Table> {
    if !(config.alpha < 0.0) {
        return Err(Error::Config("asymptotic needs alpha < 0".into()));
    }
    let mut t = Table::new(vec!["alpha", "epsilon", "sector", "k", "s", "e_airy"]);
    config.meta_into(&mut t);
    for &eps in &config.epsilons {
        for &sector in &config.sectors {
            let p = config.params(eps, sector);
            for k in 0..config.levels {
                t.push(vec![
                    config.alpha.into(),
                    eps.into(),
                    sector.label().into(),
                    k.into(),
                    bo_effective::sector_constant(sector, k)?.into(),
                    bo_effective::airy_prediction(&p, k)?.into(),
                ]);
            }
        }
    }
    Ok(t)
}

/// The interlaced Airy constants with residuals and brackets.
pub fn run_airy(config: &RunConfig) -> Result<Table> {
    let mut t = Table::new(vec!["k", "sigma", "kind", "ai", "ai_prime", "bracket_lo", "bracket_hi"]);
    config.meta_into(&mut t);
    for k in 0..=config.levels.max(2) {
        let s = specfun::sigma(k)?;
        let bracket = specfun::hethcote_bracket(k);
        t.push(vec![
            k.into(),
            s.value.into(),
            match s.kind {
                specfun::SigmaKind::Extremum => "extremum".into(),
                specfun::SigmaKind::Zero => "zero".into(),
            },
            specfun::airy_ai(s.value).into(),
            specfun::airy_ai_prime(s.value).into(),
            bracket.map(|b| b.0).into(),
            bracket.map(|b| b.1).into(),
        ]);
    }
    Ok(t)
}

/// Physical-to-scaled parameter conversion.
pub fn run_convert(config: &RunConfig) -> Result<Table> {
    let (epsilon, alpha) = phys_to_scaled(config.mass_heavy, config.mass_light, config.beta)?;
    let mu = 2.0 * config.mass_heavy * config.mass_light / (2.0 * config.mass_heavy + config.mass_light);
    let mut t = Table::new(vec!["mass_heavy", "mass_light", "beta", "mu", "epsilon", "alpha"]);
    t.push(vec![
        config.mass_heavy.into(),
        config.mass_light.into(),
        config.beta.into(),
        mu.into(),
        epsilon.into(),
        alpha.into(),
    ]);
    Ok(t)
}

/// One row of the cross-validation table tying the three routes together.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SpectralTableRow {
    pub alpha: f64,
    pub epsilon: f64,
    pub sector: Sector,
    pub k: usize,
    /// Bound-state energy from the spectral condition, when converged.
    pub e_bs: Option<f64>,
    /// Effective-operator energy, when below the continuum margin.
    pub e_eff: Option<f64>,
    pub e_airy: f64,
    /// Scaled gap ratio `(E_bs + alpha^2) / (alpha^2 eps^(2/3))`.
    pub ratio: Option<f64>,
    /// Airy target `s_k` the ratio converges to.
    pub s_target: f64,
}

impl SpectralTableRow {
    /// Eigenvalue-window and finiteness invariants for converged rows.
    pub fn check(&self) -> Result<()> {
        let a2 = self.alpha * self.alpha;
        if let Some(e) = self.e_bs {
            let threshold = -a2 / (4.0 + self.epsilon * self.epsilon);
            if !(e > -a2 && e < threshold) {
                return Err(Error::domain(
                    "SpectralTableRow",
                    format!("E_bs = {e} outside (-alpha^2, {threshold})"),
                ));
            }
        }
        if let Some(r) = self.ratio {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::domain("SpectralTableRow", format!("ratio {r} not positive")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phys_to_scaled_examples() {
        // direct evaluation of the three formulas
        let (eps, alpha) = phys_to_scaled(1.0, 0.01, -50.25).unwrap();
        let mu = 2.0f64 * 1.0 * 0.01 / 2.01;
        assert!((mu - 0.009950248756218907).abs() < 1e-17);
        assert!((eps - (2.0 * mu).sqrt()).abs() < 1e-16);
        assert!((eps - 0.14106912317171966).abs() < 1e-15);
        assert!((alpha + 1.0).abs() < 1e-14);
        // m -> 0 drives both parameters to zero at fixed beta
        let (eps0, alpha0) = phys_to_scaled(1.0, 1e-12, -50.25).unwrap();
        assert!(eps0 < 2e-6 && alpha0.abs() < 2e-10);
        // equal masses, free coupling
        let (eps1, alpha1) = phys_to_scaled(1.0, 1.0, 0.0).unwrap();
        assert_eq!(alpha1, 0.0);
        assert!((eps1 - (4.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(phys_to_scaled(-1.0, 1.0, 0.0).is_err());
        assert!(phys_to_scaled(1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn lightspec_dataset_endpoints() {
        let config = RunConfig {
            command: Command::Lightspec,
            x_max: 10.0,
            x_count: 41,
            ..RunConfig::default()
        };
        let t = run_lightspec(&config).unwrap();
        assert_eq!(t.rows.len(), 41);
        // center row: e0 = -alpha^2, e1 absent for |x| <= 2
        let mid = &t.rows[20];
        assert!(matches!(mid[0], Value::Float(x) if x == 0.0));
        assert!(matches!(mid[1], Value::Float(e) if (e + 1.0).abs() < 1e-14));
        assert!(matches!(mid[2], Value::Missing));
        // both eigenvalue columns near -alpha^2/4 at the edge
        let edge = &t.rows[40];
        assert!(matches!(edge[1], Value::Float(e) if (e + 0.25).abs() < 2e-2));
        assert!(matches!(edge[2], Value::Float(e) if (e + 0.25).abs() < 2e-2));
    }

    #[test]
    fn lightspec_alpha_minus_two_has_excited_branch() {
        let config = RunConfig {
            command: Command::Lightspec,
            alpha: -2.0,
            x_max: 10.0,
            x_count: 81,
            ..RunConfig::default()
        };
        let t = run_lightspec(&config).unwrap();
        for row in &t.rows {
            let x = match row[0] {
                Value::Float(x) => x,
                _ => unreachable!(),
            };
            if x.abs() > 1.0 {
                assert!(
                    matches!(row[2], Value::Float(e) if (-1.0..0.0).contains(&e)),
                    "missing excited branch at x = {x}"
                );
            } else {
                assert!(matches!(row[2], Value::Missing));
            }
        }
    }

    #[test]
    fn lightspec_deterministic_rerun() {
        let config = RunConfig { x_count: 21, ..RunConfig::default() };
        let a = run_lightspec(&config).unwrap();
        let b = run_lightspec(&config).unwrap();
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            assert_eq!(ra, rb);
        }
    }

    #[test]
    fn convert_and_asymptotic_tables() {
        let config = RunConfig { command: Command::Convert, ..RunConfig::default() };
        let t = run_convert(&config).unwrap();
        assert_eq!(t.rows.len(), 1);
        let t = run_asymptotic(&RunConfig { levels: 2, ..RunConfig::default() }).unwrap();
        // 3 epsilons x 2 sectors x 2 levels
        assert_eq!(t.rows.len(), 12);
    }

    #[test]
    fn config_validation_rejects_bad_input() {
        let bad_eps = RunConfig { epsilons: vec![0.0], ..RunConfig::default() };
        assert!(bad_eps.validate_config().is_err());
        let bad_levels = RunConfig { levels: 0, ..RunConfig::default() };
        assert!(bad_levels.validate_config().is_err());
        let bad_mass = RunConfig {
            command: Command::Convert,
            mass_light: -0.1,
            ..RunConfig::default()
        };
        assert!(bad_mass.validate_config().is_err());
    }
}
