//! Closed-form spectrum and bound state of the light-particle Hamiltonian at
//! frozen heavy-pair separation `x`: a 1D particle feeling two attractive
//! delta wells of strength `alpha < 0` at `y = -x/2` and `y = +x/2`.
//!
//! The negative eigenvalues `-lambda` solve
//!
//! ```text
//! (alpha + 2 sqrt(lambda))^2 = alpha^2 exp(-2 sqrt(lambda) |x|)
//! ```
//!
//! and both solutions have Lambert-W closed forms: with `u = |alpha||x|/2`,
//!
//! ```text
//! lambda0(x) = ( W(+u e^-u)/|x| + |alpha|/2 )^2     always present,
//! lambda1(x) = ( W(-u e^-u)/|x| + |alpha|/2 )^2     present iff |x| > 2/|alpha|.
//! ```
//!
//! The ground state `psi_bo` and its analytic `x`-derivative feed the
//! Born-Oppenheimer effective potential `V = alpha^2 - lambda0` and the
//! correction `R` in [`crate::bo_effective`].

use crate::specfun::lambert_w0;
use crate::{Error, Result};
use serde::Serialize;

/// Symmetry class of the heavy pair under exchange.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sector {
    Bosonic,
    Fermionic,
}

impl Sector {
    /// Sign combining the diagonal and off-diagonal boundary-operator
    /// blocks: `+` for bosons, `-` for fermions.
    pub fn sign(self) -> f64 {
        match self {
            Sector::Bosonic => 1.0,
            Sector::Fermionic => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Sector::Bosonic => "b",
            Sector::Fermionic => "f",
        }
    }
}

/// Physical parameters of the scaled three-body problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysParams {
    /// Contact coupling; bound-state routines require `alpha < 0`.
    pub alpha: f64,
    /// Mass-ratio parameter, `eps^2 = 2 mu / M`, positive.
    pub epsilon: f64,
    pub sector: Sector,
}

impl PhysParams {
    pub fn new(alpha: f64, epsilon: f64, sector: Sector) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(Error::domain(
                "PhysParams",
                format!("epsilon must be positive, got {epsilon}"),
            ));
        }
        if !alpha.is_finite() {
            return Err(Error::domain("PhysParams", format!("non-finite alpha {alpha}")));
        }
        Ok(PhysParams { alpha, epsilon, sector })
    }
}

/// Per-separation record of the light-particle spectrum.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LightSpectrum {
    pub x: f64,
    /// Magnitude of the ground level, in `(alpha^2/4, alpha^2]`.
    pub lambda0: f64,
    /// Magnitude of the excited level, in `(0, alpha^2/4)`; present iff
    /// `|x| > 2/|alpha|`.
    pub lambda1: Option<f64>,
    /// Normalization constant of the ground state.
    pub n: f64,
}

impl LightSpectrum {
    pub fn evaluate(alpha: f64, x: f64) -> Result<Self> {
        let lam0 = lambda0(alpha, x)?;
        let lam1 = if x.abs() > 2.0 / alpha.abs() { Some(lambda1(alpha, x)?) } else { None };
        Ok(LightSpectrum { x, lambda0: lam0, lambda1: lam1, n: normalization(alpha, x)? })
    }
}

fn require_attractive(op: &'static str, alpha: f64) -> Result<()> {
    if alpha < 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("no bound state for alpha = {alpha} (need alpha < 0)")))
    }
}

/// Magnitude of the lowest light-particle eigenvalue `-lambda0(x)`.
///
/// Strictly decreasing in `|x|` from `alpha^2` at `x = 0` (the removable
/// limit of the closed form) toward `alpha^2/4` at infinity.
pub fn lambda0(alpha: f64, x: f64) -> Result<f64> {
    require_attractive("lambda0", alpha)?;
    let ax = x.abs();
    if ax == 0.0 {
        return Ok(alpha * alpha);
    }
    let u = alpha.abs() * ax / 2.0;
    let w = lambert_w0(u * (-u).exp())?;
    let root = w / ax + alpha.abs() / 2.0;
    Ok(root * root)
}

/// Magnitude of the excited light-particle eigenvalue `-lambda1(x)`,
/// defined for `|x| > 2/|alpha|` only; increases from 0 at the threshold
/// toward `alpha^2/4`.
pub fn lambda1(alpha: f64, x: f64) -> Result<f64> {
    require_attractive("lambda1", alpha)?;
    let ax = x.abs();
    if ax <= 2.0 / alpha.abs() {
        return Err(Error::domain(
            "lambda1",
            format!(
                "second bound state absent for |x| = {ax} <= 2/|alpha| = {}",
                2.0 / alpha.abs()
            ),
        ));
    }
    let u = alpha.abs() * ax / 2.0;
    let w = lambert_w0(-u * (-u).exp())?;
    let root = w / ax + alpha.abs() / 2.0;
    Ok(root * root)
}

/// Signed residual of the eigenvalue equation,
/// `(alpha + 2 sqrt(lambda))^2 - alpha^2 exp(-2 sqrt(lambda) |x|)`;
/// vanishes exactly at `lambda0(x)` and `lambda1(x)`.
pub fn eigen_residual(alpha: f64, x: f64, lambda: f64) -> f64 {
    let s = lambda.max(0.0).sqrt();
    let lhs = alpha + 2.0 * s;
    lhs * lhs - alpha * alpha * (-2.0 * s * x.abs()).exp()
}

/// Normalization constant `N(x)` of the ground state, even in `x`:
/// `N = sqrt( s / (2 (1 + e^(-s|x|) (1 + s|x|))) )` with `s = sqrt(lambda0)`.
pub fn normalization(alpha: f64, x: f64) -> Result<f64> {
    let s = lambda0(alpha, x)?.sqrt();
    let sx = s * x.abs();
    Ok((s / (2.0 * (1.0 + (-sx).exp() * (1.0 + sx)))).sqrt())
}

/// Normalized Born-Oppenheimer ground state
/// `psi(x, y) = N(x) (e^(-s|x/2 - y|) + e^(-s|x/2 + y|))`,
/// positive and even in both `x` and `y`.
pub fn psi_bo(alpha: f64, x: f64, y: f64) -> Result<f64> {
    Ok(XProfile::new(alpha, x)?.psi(y))
}

/// Analytic `x`-derivative of `psi_bo`, assembled from the three-term
/// decomposition (normalization drift, level drift, well motion); odd in
/// `x` and undefined at `x = 0` where `lambda0` has a kink.
pub fn dpsi_bo_dx(alpha: f64, x: f64, y: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::domain("dpsi_bo_dx", "lambda0 is not differentiable at x = 0"));
    }
    Ok(XProfile::new(alpha, x)?.dpsi_dx(y))
}

/// Everything about the ground state at one separation `x`, precomputed so
/// repeated `y`-evaluations (quadrature) stay cheap.
#[derive(Debug, Clone, Copy)]
pub(crate) struct XProfile {
    x: f64,
    /// `sqrt(lambda0)`
    pub(crate) s: f64,
    /// normalization `N`
    pub(crate) n: f64,
    /// `ds/dx`, odd in `x`
    s_prime: f64,
    /// logarithmic derivative `N'/N`, odd in `x`
    nlog_prime: f64,
}

impl XProfile {
    pub(crate) fn new(alpha: f64, x: f64) -> Result<Self> {
        require_attractive("psi_bo", alpha)?;
        let ax = x.abs();
        let a = alpha.abs();
        let s = lambda0(alpha, x)?.sqrt();
        let sx = s * ax;
        let n = (s / (2.0 * (1.0 + (-sx).exp() * (1.0 + sx)))).sqrt();
        // nu = 2 s / |alpha| in [1, 2] satisfies nu'/nu = -1/(e^(u nu) + u)
        // at u = |alpha||x|/2, hence s' = -(alpha^2/4) nu / (e^(u nu) + u).
        let u = a * ax / 2.0;
        let nu = 2.0 * s / a;
        let s_prime_abs = -(a * a / 4.0) * nu / ((u * nu).exp() + u);
        // N'/N = s'/(2s) + s x (s' x + s) / (2 (s x + e^(s x) + 1)) for x > 0
        let nlog_prime_abs =
            s_prime_abs / (2.0 * s) + sx * (s_prime_abs * ax + s) / (2.0 * (sx + sx.exp() + 1.0));
        let sign = if x >= 0.0 { 1.0 } else { -1.0 };
        Ok(XProfile { x, s, n, s_prime: sign * s_prime_abs, nlog_prime: sign * nlog_prime_abs })
    }

    pub(crate) fn psi(&self, y: f64) -> f64 {
        let h = self.x / 2.0;
        self.n * ((-self.s * (h - y).abs()).exp() + (-self.s * (h + y).abs()).exp())
    }

    /// The three pieces of `d psi / dx`; the derivative is the signed sum
    /// `phi1 - phi2 - phi3`.
    pub(crate) fn dpsi_components(&self, y: f64) -> (f64, f64, f64) {
        let h = self.x / 2.0;
        let dm = h - y;
        let dp = h + y;
        let em = (-self.s * dm.abs()).exp();
        let ep = (-self.s * dp.abs()).exp();
        let phi1 = self.nlog_prime * self.n * (em + ep);
        let phi2 = self.n * self.s_prime * (dm.abs() * em + dp.abs() * ep);
        let phi3 = self.n * self.s / 2.0 * (sign_or_zero(dm) * em + sign_or_zero(dp) * ep);
        (phi1, phi2, phi3)
    }

    pub(crate) fn dpsi_dx(&self, y: f64) -> f64 {
        let (phi1, phi2, phi3) = self.dpsi_components(y);
        phi1 - phi2 - phi3
    }
}

fn sign_or_zero(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v.signum()
    }
}
