//! Exact three-body bound states through the spectral condition: `-lambda`
//! is an eigenvalue of the full Hamiltonian iff `1 + 2 alpha M(-lambda)` is
//! singular, where `M = (M_d (+/-) M_od) / 2` acts on the Fourier transform
//! of the coincidence-line trace.
//!
//! In the Fourier variable `nu` the diagonal block is the multiplier
//! `1 / sqrt(4 eps^2 nu^2 + (4 + eps^2) lambda)` and the off-diagonal block
//! the Hilbert-Schmidt kernel
//! `(2/pi) / ((4 + eps^2)(nu^2 + nu'^2) + 2 (4 - eps^2) nu nu' + 4 lambda)`.
//! A Nystrom discretization with square-root weights keeps the matrix
//! symmetric, the eigenvalue curves `mu_k(lambda)` are strictly increasing
//! for `alpha < 0`, and the roots are found by bisection on inertia counts.

use crate::light_particle::PhysParams;
use crate::numerics::{gauss_legendre, sturm_count, sym_lowest_eigs, SymMatrix};
use crate::{Error, Result};
use serde::Serialize;
use std::collections::HashMap;

/// Gauss-Legendre order used on every momentum panel.
const PANEL_ORDER: usize = 16;

/// Discretized momentum grid, symmetric under `nu -> -nu`: geometric
/// Gauss-Legendre panels densest at the origin where both kernels peak.
#[derive(Debug, Clone)]
pub struct BsGrid {
    /// Momentum truncation: nodes fill `[-nu_max, nu_max]`.
    pub nu_max: f64,
    /// Positive half of the nodes, ascending, with their weights; the full
    /// grid is this half mirrored (no node at zero).
    half_nodes: Vec<f64>,
    half_weights: Vec<f64>,
}

impl BsGrid {
    /// Builds a grid with roughly `node_budget` total nodes over
    /// `[-nu_max, nu_max]`; panel widths grow geometrically away from zero.
    pub fn build(nu_max: f64, node_budget: usize) -> Result<Self> {
        if !(nu_max > 0.0) {
            return Err(Error::domain("BsGrid", format!("nu_max = {nu_max} must be positive")));
        }
        let panels = (node_budget / (2 * PANEL_ORDER)).max(4);
        const GROWTH: f64 = 1.12;
        // edge_j = nu_max (g^j - 1) / (g^m - 1)
        let denom = GROWTH.powi(panels as i32) - 1.0;
        let mut edges = Vec::with_capacity(panels + 1);
        for j in 0..=panels {
            edges.push(nu_max * (GROWTH.powi(j as i32) - 1.0) / denom);
        }
        let (gx, gw) = gauss_legendre(PANEL_ORDER);
        let mut half_nodes = Vec::with_capacity(panels * PANEL_ORDER);
        let mut half_weights = Vec::with_capacity(panels * PANEL_ORDER);
        for p in edges.windows(2) {
            let c = 0.5 * (p[0] + p[1]);
            let h = 0.5 * (p[1] - p[0]);
            for i in 0..PANEL_ORDER {
                half_nodes.push(c + h * gx[i]);
                half_weights.push(h * gw[i]);
            }
        }
        Ok(BsGrid { nu_max, half_nodes, half_weights })
    }

    /// Default grid for the given parameters: truncation
    /// `nu_max = 12 |alpha| max(1, 1/eps)` (the diagonal symbol varies on
    /// the scale `nu ~ |alpha|/eps`), budget 1600 growing to at most 4800
    /// as `eps` shrinks.
    pub fn for_params(params: &PhysParams) -> Result<Self> {
        if !(params.alpha < 0.0) {
            return Err(Error::domain("BsGrid", "default grid needs alpha < 0"));
        }
        let nu_max = 12.0 * params.alpha.abs() * (1.0f64).max(1.0 / params.epsilon);
        let budget = if params.epsilon >= 0.05 {
            1600
        } else {
            ((1600.0 * (0.05 / params.epsilon).cbrt()) as usize).min(4800)
        };
        Self::build(nu_max, budget)
    }

    /// Refined copy: half again as many nodes and a 25% longer tail; used
    /// for the grid-convergence certification of every reported root.
    pub fn refined(&self) -> Result<Self> {
        Self::build(1.25 * self.nu_max, 3 * self.len() / 2)
    }

    /// Total node count of the full (mirrored) grid.
    pub fn len(&self) -> usize {
        2 * self.half_nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.half_nodes.is_empty()
    }

    /// Full symmetric node list, ascending.
    pub fn nodes(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.half_nodes.iter().rev().map(|&x| -x).collect();
        v.extend_from_slice(&self.half_nodes);
        v
    }

    /// Weights matching [`BsGrid::nodes`].
    pub fn weights(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.half_weights.iter().rev().copied().collect();
        v.extend_from_slice(&self.half_weights);
        v
    }
}

/// One bound state found by the spectral condition.
#[derive(Debug, Clone, Serialize)]
pub struct BoundStateResult {
    pub sector: crate::Sector,
    pub epsilon: f64,
    pub level: usize,
    /// Binding magnitude: the root of the `level`-th eigenvalue curve, in
    /// `(alpha^2/(4 + eps^2), alpha^2]`.
    pub lambda_star: f64,
    /// `E = -lambda_star`.
    pub energy: f64,
    pub converged: bool,
    /// Grid metadata: total nodes and truncation of the production grid.
    pub grid_nodes: usize,
    pub grid_nu_max: f64,
}

/// Fourier multiplier of the diagonal block:
/// `1 / sqrt(4 eps^2 nu^2 + (4 + eps^2) lambda)`.
pub fn diag_symbol(epsilon: f64, lambda: f64, nu: f64) -> f64 {
    debug_assert!(lambda > 0.0);
    1.0 / (4.0 * epsilon * epsilon * nu * nu + (4.0 + epsilon * epsilon) * lambda).sqrt()
}

/// Kernel of the off-diagonal (Hilbert-Schmidt) block:
/// `(2/pi) / ((4 + eps^2)(nu^2 + nu'^2) + 2 (4 - eps^2) nu nu' + 4 lambda)`.
pub fn offdiag_kernel(epsilon: f64, lambda: f64, nu: f64, nu2: f64) -> f64 {
    debug_assert!(lambda > 0.0);
    let e2 = epsilon * epsilon;
    let q = (4.0 + e2) * (nu * nu + nu2 * nu2) + 2.0 * (4.0 - e2) * nu * nu2 + 4.0 * lambda;
    2.0 / (std::f64::consts::PI * q)
}

/// Bottom of the essential spectrum, `-alpha^2 / (4 + eps^2)`; the diagonal
/// symbol `1 + alpha diag_symbol` vanishes there at `nu = 0`.
pub fn ess_threshold(alpha: f64, epsilon: f64) -> f64 {
    -alpha * alpha / (4.0 + epsilon * epsilon)
}

/// Nystrom matrix of the spectral condition at `-lambda`:
/// `A(lambda) = I + alpha (D + s sqrt(w) K sqrt(w))` with `s = +1` bosonic,
/// `-1` fermionic; exactly symmetric by construction.
pub fn assemble(params: &PhysParams, lambda: f64, grid: &BsGrid) -> SymMatrix {
    let nodes = grid.nodes();
    let weights = grid.weights();
    let sqw: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
    let s = params.sector.sign();
    let (alpha, eps) = (params.alpha, params.epsilon);
    SymMatrix::from_fn(nodes.len(), |i, j| {
        let mut v = alpha * s * sqw[i] * sqw[j] * offdiag_kernel(eps, lambda, nodes[i], nodes[j]);
        if i == j {
            v += 1.0 + alpha * diag_symbol(eps, lambda, nodes[i]);
        }
        v
    })
}

/// `k`-th smallest eigenvalue curve `mu_k(lambda)` of the condition matrix;
/// strictly increasing in `lambda` for `alpha < 0`, and a bound state sits
/// exactly where it crosses zero.
pub fn eigencurve(params: &PhysParams, lambda: f64, grid: &BsGrid, k: usize) -> Result<f64> {
    let a = assemble(params, lambda, grid);
    Ok(sym_lowest_eigs(&a, k + 1)?[k])
}

/// The two parity blocks of the condition matrix (even/odd under
/// `nu -> -nu`); their joint spectrum equals the full matrix spectrum, at a
/// quarter of the factorization cost.
fn parity_blocks(params: &PhysParams, lambda: f64, grid: &BsGrid) -> (SymMatrix, SymMatrix) {
    let m = grid.half_nodes.len();
    let sqw: Vec<f64> = grid.half_weights.iter().map(|w| w.sqrt()).collect();
    let s = params.sector.sign();
    let (alpha, eps) = (params.alpha, params.epsilon);
    let block = |parity: f64| {
        SymMatrix::from_fn(m, |i, j| {
            let (ni, nj) = (grid.half_nodes[i], grid.half_nodes[j]);
            let k = offdiag_kernel(eps, lambda, ni, nj) + parity * offdiag_kernel(eps, lambda, ni, -nj);
            let mut v = alpha * s * sqw[i] * sqw[j] * k;
            if i == j {
                v += 1.0 + alpha * diag_symbol(eps, lambda, ni);
            }
            v
        })
    };
    (block(1.0), block(-1.0))
}

/// Number of negative eigenvalues of `A(lambda)`, via Householder reduction
/// of the parity blocks and Sturm counts at zero.
fn negative_count(params: &PhysParams, lambda: f64, grid: &BsGrid) -> usize {
    let (even, odd) = parity_blocks(params, lambda, grid);
    let (de, oe) = even.into_tridiag();
    let (dd, od) = odd.into_tridiag();
    sturm_count(&de, &oe, 0.0) + sturm_count(&dd, &od, 0.0)
}

/// Frobenius norm of the symmetrized off-diagonal block
/// `sqrt(w) K sqrt(w)`; approximates the Hilbert-Schmidt norm of `M_od`
/// from below and must stay within `sqrt(1 / (2 min(eps^2, 4) lambda))`
/// plus a small grid-tail allowance.
pub fn hs_norm(epsilon: f64, lambda: f64, grid: &BsGrid) -> f64 {
    let nodes = grid.nodes();
    let weights = grid.weights();
    let mut sum = 0.0;
    for i in 0..nodes.len() {
        for j in 0..nodes.len() {
            let k = offdiag_kernel(epsilon, lambda, nodes[i], nodes[j]);
            sum += weights[i] * weights[j] * k * k;
        }
    }
    sum.sqrt()
}

/// Bound states of the three-body Hamiltonian in the sector of `params`:
/// for each level `k < levels`, the root `lambda*_k` of the `k`-th
/// eigenvalue curve, located by inertia-count bisection over
/// `(alpha^2/(4 + eps^2), alpha^2 (1 + eps)]` to width `tol * alpha^2` and
/// certified against a refined grid (errors out if any root moves by more
/// than `10 tol alpha^2`). Levels whose curve never crosses zero come back
/// as non-converged placeholders; for `alpha >= 0` there are no bound
/// states and the list is empty.
pub fn bound_states(
    params: &PhysParams,
    levels: usize,
    grid: &BsGrid,
    tol: f64,
) -> Result<Vec<BoundStateResult>> {
    if params.alpha >= 0.0 {
        return Ok(Vec::new());
    }
    if !(params.epsilon > 0.0 && params.epsilon <= 1.0) {
        return Err(Error::domain(
            "bound_states",
            format!("epsilon = {} outside (0, 1]", params.epsilon),
        ));
    }
    if !(tol > 0.0 && tol < 1e-2) {
        return Err(Error::domain("bound_states", format!("tolerance {tol} outside (0, 1e-2)")));
    }
    let a2 = params.alpha * params.alpha;
    let threshold = a2 / (4.0 + params.epsilon * params.epsilon);
    // curves accumulate at zero toward the continuum edge, so the lower
    // endpoint sits 10 tol above it; the upper endpoint clears alpha^2
    let lambda_lo = threshold * (1.0 + 10.0 * tol);
    let lambda_hi = a2 * (1.0 + params.epsilon);

    let mut memo: HashMap<u64, usize> = HashMap::new();
    let mut count_at = |lam: f64, g: &BsGrid, use_memo: bool| -> usize {
        if !use_memo {
            return negative_count(params, lam, g);
        }
        *memo.entry(lam.to_bits()).or_insert_with(|| negative_count(params, lam, g))
    };

    let c_lo = count_at(lambda_lo, grid, true);
    let c_hi = count_at(lambda_hi, grid, true);
    if c_hi != 0 {
        return Err(Error::non_convergence(
            "bound_states",
            format!("{c_hi} negative eigenvalues above alpha^2; spectrum bound violated"),
        ));
    }
    let refined = grid.refined()?;
    let width = tol * a2;
    let mut out = Vec::with_capacity(levels);
    let mut hi_for_level = lambda_hi;
    for k in 0..levels {
        if c_lo < k + 1 {
            // curve never crosses: no k-th bound state at this epsilon
            out.push(BoundStateResult {
                sector: params.sector,
                epsilon: params.epsilon,
                level: k,
                lambda_star: f64::NAN,
                energy: f64::NAN,
                converged: false,
                grid_nodes: grid.len(),
                grid_nu_max: grid.nu_max,
            });
            continue;
        }
        // invariant: count(lo) >= k+1 > count(hi); roots of deeper levels
        // lie above, so the previous root bounds this bracket from above
        let mut lo = lambda_lo;
        let mut hi = hi_for_level;
        while hi - lo > width {
            let mid = 0.5 * (lo + hi);
            if count_at(mid, grid, true) > k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let root = 0.5 * (lo + hi);
        hi_for_level = hi;
        // certify against the refined grid: the transition must stay within
        // 10 tol alpha^2 of the reported root
        let guard = 10.0 * width;
        let below = count_at((root - guard).max(lambda_lo), &refined, false);
        let above = count_at(root + guard, &refined, false);
        if below < k + 1 || above > k {
            return Err(Error::discretization(
                "bound_states",
                format!(
                    "level {k}: root {root:.8} moved by more than {guard:.2e} on the refined grid"
                ),
            ));
        }
        out.push(BoundStateResult {
            sector: params.sector,
            epsilon: params.epsilon,
            level: k,
            lambda_star: root,
            energy: -root,
            converged: true,
            grid_nodes: grid.len(),
            grid_nu_max: grid.nu_max,
        });
    }
    Ok(out)
}
