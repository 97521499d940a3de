//! Born-Oppenheimer effective problem for the heavy pair: the potential
//! `V(x) = alpha^2 - lambda0(x)`, the correction `R(x) = ||d_x psi_bo||^2`,
//! the commutator constant `delta`, finite-difference eigensolvers for
//! `-eps^2 d^2/dx^2 + V + eps^2 R` in both symmetry sectors, the Airy
//! asymptotic predictor, and the linear-potential comparison operator
//! `K^1 = -d^2/dx^2 + |alpha|^3 |x|` whose exact levels are
//! `e_k = |sigma_k| alpha^2`.

use crate::light_particle::{lambda0, PhysParams, Sector, XProfile};
use crate::numerics::{quad_adaptive, richardson2, root_bisect, tridiag_lowest_eigs};
use crate::specfun::sigma;
use crate::{Error, Result};
use serde::Serialize;

/// Margin below the continuum edge `3 alpha^2 / 4` (in units of `alpha^2`):
/// discretized levels above `(3/4 - margin) alpha^2` are suppressed as
/// artifacts of the finite domain.
const CONTINUUM_MARGIN: f64 = 0.05;

/// Per-grid disagreement allowed between the `h` and `h/2` eigenvalues, in
/// units of `alpha^2`; ten times this aborts with a discretization error.
const DISC_TOL: f64 = 1e-5;

/// Default node count of the coarse grid (the fine grid uses `2n - 1`).
pub const DEFAULT_NODES: usize = 8001;

/// Discretized effective heavy-pair problem on `[0, L]`.
#[derive(Debug, Clone)]
pub struct EffectiveProblem {
    pub params: PhysParams,
    /// Half-domain length; `V(L)` reaches at least 90% of the plateau.
    pub half_length: f64,
    /// Nodes of the coarse grid; the solver also uses the `2n - 1` refinement.
    pub node_count: usize,
    /// `V(x_i) + eps^2 R(x_i)` on the fine grid.
    potential_fine: Vec<f64>,
}

/// Eigenvalues of the effective operator in one sector.
#[derive(Debug, Clone, Serialize)]
pub struct EffectiveEigs {
    pub sector: Sector,
    pub epsilon: f64,
    /// Shifted levels `E + alpha^2`, ascending, each below the continuum
    /// margin; may hold fewer entries than requested.
    pub shifted: Vec<f64>,
    /// Unshifted levels `E = shifted - alpha^2`.
    pub unshifted: Vec<f64>,
    pub requested: usize,
    pub half_length: f64,
    pub node_count: usize,
}

/// Effective potential `V(x) = alpha^2 - lambda0(x)`: even, `V(0) = 0`,
/// strictly increasing on `(0, inf)` with limit `3 alpha^2 / 4`, and
/// `V(x) = |alpha|^3 |x| + O(x^2)` near the origin.
pub fn potential_v(alpha: f64, x: f64) -> Result<f64> {
    Ok(alpha * alpha - lambda0(alpha, x)?)
}

/// Adiabatic correction `R(x) = integral |d_x psi_bo(x, y)|^2 dy`,
/// nonnegative, even, bounded by `4 alpha^2`; undefined at `x = 0`.
pub fn correction_r(alpha: f64, x: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::domain("correction_r", "d_x psi_bo is undefined at x = 0"));
    }
    let profile = XProfile::new(alpha, x)?;
    r_of_profile(&profile, x)
}

/// `R` from a prebuilt profile: `2 int_0^inf |d_x psi|^2 dy` with the tail
/// mapped through `y = t / (1 - t^2)` and a breakpoint at the well.
fn r_of_profile(profile: &XProfile, x: f64) -> Result<f64> {
    let t_kink = t_of_y(x.abs() / 2.0);
    let val = quad_adaptive(
        |t| {
            let om = 1.0 - t * t;
            let y = t / om;
            let d = profile.dpsi_dx(y);
            d * d * (1.0 + t * t) / (om * om)
        },
        0.0,
        1.0 - 1e-12,
        &[t_kink],
        1e-10,
    )?;
    Ok(2.0 * val)
}

/// Inverse of the tail map `y = t / (1 - t^2)` on `[0, 1)`.
fn t_of_y(y: f64) -> f64 {
    if y == 0.0 {
        0.0
    } else {
        (-1.0 + (1.0 + 4.0 * y * y).sqrt()) / (2.0 * y)
    }
}

/// The commutator constant
/// `delta = 2 (sup_x integral |d_x psi_bo|^2 dy)^(1/2) <= 4 |alpha|`:
/// coarse scan of `R` over `(0, 40/|alpha|]`, then golden-section
/// refinement around the maximizer.
pub fn delta_constant(alpha: f64) -> Result<f64> {
    if !(alpha < 0.0) {
        return Err(Error::domain("delta_constant", "needs alpha < 0"));
    }
    let r_at = |x: f64| correction_r(alpha, x).expect("R defined for x > 0");
    let hi = 40.0 / alpha.abs();
    let n = 320;
    let xs: Vec<f64> = (1..=n).map(|i| hi * i as f64 / n as f64).collect();
    let mut best_i = 0;
    let mut best = f64::NEG_INFINITY;
    for (i, &x) in xs.iter().enumerate() {
        let r = r_at(x);
        if r > best {
            best = r;
            best_i = i;
        }
    }
    let mut a = if best_i == 0 { xs[0] / 2.0 } else { xs[best_i - 1] };
    let mut b = if best_i + 1 < xs.len() { xs[best_i + 1] } else { hi };
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = r_at(c);
    let mut fd = r_at(d);
    for _ in 0..60 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = r_at(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = r_at(d);
        }
        if (b - a).abs() < 1e-10 / alpha.abs() {
            break;
        }
    }
    Ok(2.0 * best.max(fc).max(fd).sqrt())
}

/// Airy-law prediction for the `k`-th level of the sector:
/// `E = -alpha^2 + s_k alpha^2 eps^(2/3)` with `s_k = |sigma_2k|` (bosonic)
/// or `|sigma_(2k+1)|` (fermionic).
pub fn airy_prediction(params: &PhysParams, k: usize) -> Result<f64> {
    if !(params.alpha < 0.0) {
        return Err(Error::domain("airy_prediction", "needs alpha < 0"));
    }
    let s = sector_constant(params.sector, k)?;
    let a2 = params.alpha * params.alpha;
    Ok(-a2 + s * a2 * params.epsilon.powf(2.0 / 3.0))
}

/// `s_k` for the sector: magnitude of the Airy extremum (bosonic) or zero
/// (fermionic) of interlacing index `2k` / `2k + 1`.
pub fn sector_constant(sector: Sector, k: usize) -> Result<f64> {
    let idx = match sector {
        Sector::Bosonic => 2 * k,
        Sector::Fermionic => 2 * k + 1,
    };
    Ok(sigma(idx)?.value.abs())
}

impl EffectiveProblem {
    /// Samples `V + eps^2 R` on the fine grid over an automatically sized
    /// domain (or `domain_override` when given).
    pub fn build(
        params: &PhysParams,
        levels: usize,
        nodes: usize,
        domain_override: Option<f64>,
    ) -> Result<Self> {
        if !(params.alpha < 0.0) {
            return Err(Error::domain("EffectiveProblem", "needs alpha < 0"));
        }
        if !(params.epsilon > 0.0 && params.epsilon <= 1.0) {
            return Err(Error::domain(
                "EffectiveProblem",
                format!("epsilon = {} outside (0, 1]", params.epsilon),
            ));
        }
        if levels == 0 || nodes < 3 {
            return Err(Error::domain("EffectiveProblem", "need levels >= 1 and nodes >= 3"));
        }
        let alpha = params.alpha;
        let a2 = alpha * alpha;
        let half_length = match domain_override {
            Some(l) if l > 0.0 => l,
            Some(l) => {
                return Err(Error::domain("EffectiveProblem", format!("domain length {l} <= 0")))
            }
            None => {
                // classical turning point of the topmost requested level plus
                // a decay margin of 8 Airy widths, extended until the
                // potential reaches 90% of its plateau
                let s_top = sector_constant(params.sector, levels - 1)?;
                let e_max = s_top * a2 * params.epsilon.powf(2.0 / 3.0);
                let target = (e_max + 0.1 * a2).min(0.72 * a2);
                let x_turn = root_bisect(
                    |x| potential_v(alpha, x).unwrap() - target,
                    1e-9 / alpha.abs(),
                    60.0 / alpha.abs(),
                    1e-9 / alpha.abs(),
                )?;
                let x_plateau = root_bisect(
                    |x| potential_v(alpha, x).unwrap() - 0.9 * 0.75 * a2,
                    1e-9 / alpha.abs(),
                    60.0 / alpha.abs(),
                    1e-9 / alpha.abs(),
                )?;
                let tail = 8.0 * params.epsilon.powf(2.0 / 3.0) * s_top.max(1.0) / alpha.abs();
                (x_turn + tail).max(x_plateau + 0.5 / alpha.abs())
            }
        };
        let fine = 2 * nodes - 1;
        let h = half_length / (fine - 1) as f64;
        let eps2 = params.epsilon * params.epsilon;
        let mut potential_fine = Vec::with_capacity(fine);
        for i in 0..fine {
            // the boundary node uses the one-sided R sample; V(0) = 0 exactly
            let x = if i == 0 { 1e-6 / alpha.abs() } else { i as f64 * h };
            let v = if i == 0 { 0.0 } else { potential_v(alpha, x)? };
            let profile = XProfile::new(alpha, x)?;
            let q = v + eps2 * r_of_profile(&profile, x)?;
            potential_fine.push(q);
        }
        let problem =
            EffectiveProblem { params: *params, half_length, node_count: nodes, potential_fine };
        problem.check_invariants()?;
        Ok(problem)
    }

    fn check_invariants(&self) -> Result<()> {
        let a2 = self.params.alpha * self.params.alpha;
        let v_end = potential_v(self.params.alpha, self.half_length)?;
        if v_end < 0.9 * 0.75 * a2 {
            return Err(Error::domain(
                "EffectiveProblem",
                format!("domain too short: V(L) = {v_end:.6} < 0.9 * (3/4) alpha^2"),
            ));
        }
        let cap = 0.75 * a2 + self.params.epsilon.powi(2) * 4.0 * a2;
        if self.potential_fine.iter().any(|&q| !q.is_finite() || !(0.0..=cap).contains(&q)) {
            return Err(Error::domain("EffectiveProblem", "potential samples out of range"));
        }
        Ok(())
    }

    /// Potential samples on the coarse grid (every other fine node).
    fn potential_coarse(&self) -> Vec<f64> {
        self.potential_fine.iter().step_by(2).copied().collect()
    }
}

/// Lowest eigenvalues of the half-line finite-difference discretization of
/// `-c h^2 d^2/dx^2 + q` with Dirichlet at the far wall and either a
/// Neumann (even sector, ghost reflection `u_-1 = u_1`, symmetrized with a
/// `sqrt 2` first coupling) or Dirichlet (odd sector) condition at 0.
/// `q` holds potential samples at all `n` nodes including both endpoints;
/// `c = eps^2 / h^2`.
pub(crate) fn half_line_fd_eigs(c: f64, q: &[f64], neumann: bool, k: usize) -> Vec<f64> {
    let n = q.len();
    if neumann {
        // unknowns at nodes 0..n-2
        let m = n - 1;
        let diag: Vec<f64> = (0..m).map(|i| 2.0 * c + q[i]).collect();
        let mut off = vec![-c; m - 1];
        off[0] = -std::f64::consts::SQRT_2 * c;
        tridiag_lowest_eigs(&diag, &off, k.min(m))
    } else {
        // unknowns at nodes 1..n-2
        let m = n - 2;
        let diag: Vec<f64> = (1..=m).map(|i| 2.0 * c + q[i]).collect();
        let off = vec![-c; m - 1];
        tridiag_lowest_eigs(&diag, &off, k.min(m))
    }
}

/// Lowest `levels` eigenvalues of the effective operator
/// `-eps^2 d^2/dx^2 + V + eps^2 R` in the sector of `params`,
/// Richardson-extrapolated from the `n` and `2n - 1` node grids; levels
/// reaching the continuum margin are suppressed, so fewer than `levels`
/// entries may come back.
pub fn effective_eigs(
    params: &PhysParams,
    levels: usize,
    nodes: usize,
    domain_override: Option<f64>,
) -> Result<EffectiveEigs> {
    let problem = EffectiveProblem::build(params, levels, nodes, domain_override)?;
    eigs_of_problem(&problem, levels)
}

/// Solves a prebuilt [`EffectiveProblem`]; see [`effective_eigs`].
pub fn eigs_of_problem(problem: &EffectiveProblem, levels: usize) -> Result<EffectiveEigs> {
    let params = problem.params;
    let neumann = params.sector == Sector::Bosonic;
    let a2 = params.alpha * params.alpha;
    let q_fine = &problem.potential_fine;
    let q_coarse = problem.potential_coarse();
    let n_fine = q_fine.len();
    let h_fine = problem.half_length / (n_fine - 1) as f64;
    let h_coarse = 2.0 * h_fine;
    let eps2 = params.epsilon * params.epsilon;
    let coarse = half_line_fd_eigs(eps2 / (h_coarse * h_coarse), &q_coarse, neumann, levels);
    let fine = half_line_fd_eigs(eps2 / (h_fine * h_fine), q_fine, neumann, levels);
    let mut shifted = Vec::with_capacity(levels);
    for (k, (&vh, &vh2)) in coarse.iter().zip(&fine).enumerate() {
        if (vh - vh2).abs() > 10.0 * DISC_TOL * a2 {
            return Err(Error::discretization(
                "effective_eigs",
                format!("level {k}: grids disagree by {:.3e} alpha^2", (vh - vh2).abs() / a2),
            ));
        }
        shifted.push(richardson2(vh, vh2));
    }
    // suppress levels at the continuum margin
    let cut = (0.75 - CONTINUUM_MARGIN) * a2;
    shifted.retain(|&e| e < cut);
    let unshifted = shifted.iter().map(|&e| e - a2).collect();
    Ok(EffectiveEigs {
        sector: params.sector,
        epsilon: params.epsilon,
        shifted,
        unshifted,
        requested: levels,
        half_length: problem.half_length,
        node_count: problem.node_count,
    })
}

/// Finite-difference levels of the comparison operator
/// `K^1 = -d^2/dx^2 + |alpha|^3 |x|` on the full line (both parities mixed),
/// Richardson-extrapolated; reproduces `e_k = |sigma_k| alpha^2`.
pub fn k1_oracle_eigs(alpha: f64, levels: usize) -> Result<Vec<f64>> {
    if !(alpha < 0.0) {
        return Err(Error::domain("k1_oracle_eigs", "needs alpha < 0"));
    }
    if levels == 0 {
        return Ok(Vec::new());
    }
    let a2 = alpha * alpha;
    // domain past the topmost turning point |x| = |sigma|/|alpha| plus decay room
    let s_top = sigma((levels + 1).min(50))?.value.abs();
    let l = (s_top + 6.0) / alpha.abs();
    let n = 6001;
    let solve = |nodes: usize| -> Vec<f64> {
        let h = 2.0 * l / (nodes - 1) as f64;
        let m = nodes - 2; // interior nodes; x = 0 sits on the grid (odd n)
        let diag: Vec<f64> = (1..=m)
            .map(|i| {
                let x = -l + i as f64 * h;
                2.0 / (h * h) + alpha.abs().powi(3) * x.abs()
            })
            .collect();
        let off = vec![-1.0 / (h * h); m - 1];
        tridiag_lowest_eigs(&diag, &off, levels)
    };
    let coarse = solve(n);
    let fine = solve(2 * n - 1);
    let mut out = Vec::with_capacity(levels);
    for (k, (&vh, &vh2)) in coarse.iter().zip(&fine).enumerate() {
        if (vh - vh2).abs() > 10.0 * DISC_TOL * a2 {
            return Err(Error::discretization(
                "k1_oracle_eigs",
                format!("level {k}: grids disagree by {:.3e}", (vh - vh2).abs()),
            ));
        }
        out.push(richardson2(vh, vh2));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potential_examples_and_invariants() {
        assert_eq!(potential_v(-1.0, 0.0).unwrap(), 0.0);
        assert!((potential_v(-1.0, 1e6).unwrap() - 0.75).abs() < 1e-5);
        // leading slope |alpha|^3
        let h = 1e-3;
        let slope = potential_v(-1.0, h).unwrap() / h;
        assert!((slope - 1.0).abs() < 5e-2, "slope {slope}");
        assert!(potential_v(0.5, 1.0).is_err());
        // evenness, monotonicity, range on a 500-point grid
        let mut prev = -1.0;
        for i in 0..500 {
            let x = 0.02 + 12.0 * i as f64 / 499.0;
            let v = potential_v(-1.0, x).unwrap();
            assert_eq!(v, potential_v(-1.0, -x).unwrap());
            assert!(v > prev, "V not strictly increasing at {x}");
            assert!((0.0..0.75).contains(&v));
            prev = v;
        }
    }

    #[test]
    fn correction_r_examples() {
        for &x in &[0.3, 1.0, 4.0] {
            let r = correction_r(-1.0, x).unwrap();
            assert!(r >= 0.0);
            assert!((r - correction_r(-1.0, -x).unwrap()).abs() < 1e-14);
            assert!(2.0 * r.sqrt() <= 4.0, "R({x}) = {r} violates delta bound");
        }
        assert!(correction_r(-1.0, 0.0).is_err());
        // finite-difference-in-x + quadrature oracle at 20 sampled x per coupling
        let h = 1e-5;
        let fd_oracle = |alpha: f64, x: f64| {
            2.0 * quad_adaptive(
                |t| {
                    let om = 1.0 - t * t;
                    let y = t / om;
                    let d = (crate::light_particle::psi_bo(alpha, x + h, y).unwrap()
                        - crate::light_particle::psi_bo(alpha, x - h, y).unwrap())
                        / (2.0 * h);
                    d * d * (1.0 + t * t) / (om * om)
                },
                0.0,
                1.0 - 1e-12,
                &[t_of_y(x / 2.0)],
                1e-10,
            )
            .unwrap()
        };
        for &alpha in &[-1.0f64, -2.0] {
            let mut worst: f64 = 0.0;
            for i in 1..=20 {
                let x = 8.0 * i as f64 / 20.0 / alpha.abs();
                worst = worst.max((correction_r(alpha, x).unwrap() - fd_oracle(alpha, x)).abs());
            }
            println!("alpha = {alpha}: max |R - FD oracle| = {worst:.3e}");
            assert!(worst < 1e-5);
        }
    }

    #[test]
    fn delta_bound_scaling_and_positivity() {
        let d1 = delta_constant(-1.0).unwrap();
        println!("delta(-1) = {d1}");
        assert!(d1 > 0.0 && d1 <= 4.0);
        for &alpha in &[-0.5, -2.0] {
            let d = delta_constant(alpha).unwrap();
            assert!(d <= 4.0 * alpha.abs());
            assert!(
                (d - alpha.abs() * d1).abs() < 1e-6 * d,
                "scaling violated: delta({alpha}) = {d} vs {}",
                alpha.abs() * d1
            );
        }
    }

    #[test]
    fn airy_prediction_examples() {
        let b0 = PhysParams { alpha: -1.0, epsilon: 0.0, sector: Sector::Bosonic };
        assert!((airy_prediction(&b0, 0).unwrap() + 1.0).abs() < 1e-15);
        let b = PhysParams { alpha: -1.0, epsilon: 1e-3, sector: Sector::Bosonic };
        let e = airy_prediction(&b, 0).unwrap();
        assert!((e - (-1.0 + 1.018792971647471 * 1e-2)).abs() < 1e-12);
        // sector ordering at each level
        for k in 0..4 {
            let pb = PhysParams { alpha: -1.0, epsilon: 0.05, sector: Sector::Bosonic };
            let pf = PhysParams { alpha: -1.0, epsilon: 0.05, sector: Sector::Fermionic };
            assert!(airy_prediction(&pb, k).unwrap() < airy_prediction(&pf, k).unwrap());
        }
    }

    #[test]
    fn k1_oracle_matches_airy_levels() {
        let eigs = k1_oracle_eigs(-1.0, 6).unwrap();
        println!("K^1 levels: {eigs:?}");
        for (k, &e) in eigs.iter().enumerate() {
            let target = sigma(k).unwrap().value.abs();
            assert!((e - target).abs() < 1e-4, "e_{k} = {e} vs |sigma_{k}| = {target}");
        }
        // quadratic coupling scaling: eigs(-2) = 4 eigs(-1)
        let e2 = k1_oracle_eigs(-2.0, 3).unwrap();
        let e1 = k1_oracle_eigs(-1.0, 3).unwrap();
        for k in 0..3 {
            assert!(
                (e2[k] / (4.0 * e1[k]) - 1.0).abs() < 1e-6,
                "scaling at level {k}: {} vs {}",
                e2[k],
                4.0 * e1[k]
            );
        }
    }

    #[test]
    fn k1_parity_split_consistency() {
        // even-indexed full-line levels = Neumann half-line solve,
        // odd-indexed = Dirichlet, each pair within 1e-8
        let alpha = -1.0f64;
        let levels = 6;
        let full = k1_oracle_eigs(alpha, levels).unwrap();
        let s_top = sigma(levels + 1).unwrap().value.abs();
        let l = (s_top + 6.0) / alpha.abs();
        let half = |nodes: usize, neumann: bool| {
            let h = l / (nodes - 1) as f64;
            let q: Vec<f64> = (0..nodes).map(|i| alpha.abs().powi(3) * (i as f64 * h)).collect();
            half_line_fd_eigs(1.0 / (h * h), &q, neumann, 3)
        };
        // full-line n = 6001 over [-l, l] means 3001 nodes per half at the
        // same spacing, refined to 6001
        for (j, even) in [(0, true), (1, false), (2, true), (3, false), (4, true), (5, false)] {
            let hc = half(3001, even)[j / 2];
            let hf = half(6001, even)[j / 2];
            let r = richardson2(hc, hf);
            assert!(
                (r - full[j]).abs() < 1e-8,
                "parity split at level {j}: half-line {r} vs full {}",
                full[j]
            );
        }
    }

    #[test]
    fn effective_levels_ordered_and_near_airy_law() {
        let p = PhysParams { alpha: -1.0, epsilon: 0.1, sector: Sector::Bosonic };
        let eigs = effective_eigs(&p, 2, 4001, None).unwrap();
        assert!(eigs.shifted.windows(2).all(|w| w[0] < w[1]));
        let r0 = eigs.shifted[0] / 0.1f64.powf(2.0 / 3.0);
        println!("bosonic ratio at eps = 0.1: {r0} (target 1.0188)");
        assert!((r0 - 1.018792971647471).abs() / 1.018792971647471 < 0.25);
        // bosonic ground below fermionic ground
        let f = PhysParams { sector: Sector::Fermionic, ..p };
        let ef = effective_eigs(&f, 1, 4001, None).unwrap();
        assert!(eigs.shifted[0] < ef.shifted[0]);
        // unshifted = shifted - alpha^2
        assert!((eigs.unshifted[0] - (eigs.shifted[0] - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn effective_fd_convergence_order_in_window() {
        // observed order from three dyadic grids should sit in [1.5, 2.3]
        let p = PhysParams { alpha: -1.0, epsilon: 0.1, sector: Sector::Fermionic };
        let problem = EffectiveProblem::build(&p, 1, 2001, None).unwrap();
        let v = |nodes: usize| {
            let pr = EffectiveProblem::build(&p, 1, nodes, Some(problem.half_length)).unwrap();
            let q = pr.potential_coarse();
            let h = pr.half_length / (q.len() - 1) as f64;
            half_line_fd_eigs(p.epsilon * p.epsilon / (h * h), &q, false, 1)[0]
        };
        let (v1, v2, v3) = (v(1001), v(2001), v(4001));
        let order = ((v1 - v2) / (v2 - v3)).abs().log2();
        println!("observed FD order: {order}");
        assert!((1.5..=2.3).contains(&order), "order {order} outside window");
    }
}
