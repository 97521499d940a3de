//! Reusable numerical kernels: adaptive Gauss-Kronrod quadrature with
//! breakpoints, symmetric eigensolvers (tridiagonal Sturm bisection and
//! dense Householder + QL), monotone bisection, and Richardson
//! extrapolation.

mod eigen;
mod quad;

pub use eigen::{sturm_count, sym_lowest_eigs, tridiag_lowest_eigs};
pub use quad::{gauss_legendre, quad_adaptive};

use crate::{Error, Result};

/// A one-dimensional quadrature grid: strictly increasing nodes with
/// positive weights.
#[derive(Debug, Clone)]
pub struct Grid1D {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Grid1D {
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.len() != weights.len() || nodes.len() < 2 {
            return Err(Error::domain("Grid1D", "need >= 2 nodes with matching weights"));
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("Grid1D", "nodes must be strictly increasing"));
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::domain("Grid1D", "weights must be positive"));
        }
        Ok(Grid1D { nodes, weights })
    }

    /// Composite Gauss-Legendre grid: an `order`-point rule on each panel
    /// `[edges[i], edges[i+1]]`.
    pub fn gauss_legendre_panels(edges: &[f64], order: usize) -> Result<Self> {
        if edges.len() < 2 || edges.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("Grid1D", "panel edges must be strictly increasing"));
        }
        let (x, w) = gauss_legendre(order);
        let mut nodes = Vec::with_capacity(order * (edges.len() - 1));
        let mut weights = Vec::with_capacity(order * (edges.len() - 1));
        for p in edges.windows(2) {
            let c = 0.5 * (p[0] + p[1]);
            let h = 0.5 * (p[1] - p[0]);
            for i in 0..order {
                nodes.push(c + h * x[i]);
                weights.push(h * w[i]);
            }
        }
        Grid1D::new(nodes, weights)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Dense symmetric matrix, lower triangle stored row-wise; symmetry holds by
/// construction since only one triangle exists.
#[derive(Debug, Clone)]
pub struct SymMatrix {
    n: usize,
    /// `a[i (i+1) / 2 + j]` holds entry `(i, j)` for `j <= i`.
    a: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, a: vec![0.0; n * (n + 1) / 2] }
    }

    /// Builds from `f(i, j)` evaluated on the lower triangle `j <= i`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut a = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in 0..=i {
                a.push(f(i, j));
            }
        }
        SymMatrix { n, a }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        self.a[r * (r + 1) / 2 + c]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        self.a[r * (r + 1) / 2 + c] = v;
    }

    /// Largest absolute entry; cheap norm proxy for residual scaling.
    pub fn max_abs(&self) -> f64 {
        self.a.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
    }

    /// `y = A x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = vec![0.0; n];
        for i in 0..n {
            let row = &self.a[i * (i + 1) / 2..i * (i + 1) / 2 + i + 1];
            let mut acc = 0.0;
            for j in 0..=i {
                acc += row[j] * x[j];
                if j < i {
                    y[j] += row[j] * x[i];
                }
            }
            y[i] += acc;
        }
        y
    }
}

/// Monotone bisection for a root of `f` on `[lo, hi]`.
///
/// The caller guarantees continuity and a sign change; the bracket is
/// narrowed to width `tol` and the midpoint returned, which takes at most
/// `ceil(log2((hi - lo) / tol))` halvings.
pub fn root_bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Bracket { op: "root_bisect", lo, hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // tol below floating-point resolution of the bracket
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Richardson extrapolation of two second-order approximations at steps `h`
/// and `h/2`: `(4 v_h2 - v_h) / 3`, computed in difference form so equal
/// inputs are a fixed point to the last bit.
pub fn richardson2(v_h: f64, v_h2: f64) -> f64 {
    v_h2 + (v_h2 - v_h) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cell::Cell;

    #[test]
    fn bisect_linear_and_sqrt2() {
        assert!((root_bisect(|x| x - 1.0, 0.0, 2.0, 1e-12).unwrap() - 1.0).abs() < 1e-12);
        let r = root_bisect(|x| x * x - 2.0, 1.0, 2.0, 1e-13).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn bisect_bracket_error() {
        assert!(matches!(
            root_bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-6),
            Err(Error::Bracket { .. })
        ));
    }

    #[test]
    fn bisect_iteration_bound() {
        // one evaluation per halving plus the two endpoint evaluations
        let calls = Cell::new(0usize);
        let (lo, hi, tol) = (0.0f64, 2.0f64, 1e-9f64);
        root_bisect(
            |x| {
                calls.set(calls.get() + 1);
                x - 0.7311
            },
            lo,
            hi,
            tol,
        )
        .unwrap();
        let bound = ((hi - lo) / tol).log2().ceil() as usize + 2;
        println!("bisection evaluations: {} (bound {})", calls.get(), bound + 2);
        assert!(calls.get() <= bound + 2);
    }

    #[test]
    fn richardson_examples() {
        assert!((richardson2(1.04, 1.01) - 1.0).abs() < 1e-15);
        assert_eq!(richardson2(0.37, 0.37), 0.37);
    }

    #[test]
    fn richardson_fd_eigenvalue_convergence() {
        // lowest eigenvalue of -u'' on [0, pi], Dirichlet: exactly 1.
        let solve = |n: usize| {
            let h = std::f64::consts::PI / (n + 1) as f64;
            let d = vec![2.0 / (h * h); n];
            let e = vec![-1.0 / (h * h); n - 1];
            tridiag_lowest_eigs(&d, &e, 1)[0]
        };
        let v_h = solve(512);
        let v_h2 = solve(1025); // h/2 needs 2n+1 interior points
        let r = richardson2(v_h, v_h2);
        println!("v_h = {v_h}, v_h2 = {v_h2}, richardson = {r}");
        assert!((r - 1.0).abs() * 10.0 <= (v_h2 - 1.0).abs());
    }

    #[test]
    fn grid_validation() {
        assert!(Grid1D::new(vec![0.0, 1.0], vec![0.5, 0.5]).is_ok());
        assert!(Grid1D::new(vec![0.0, 0.0], vec![0.5, 0.5]).is_err());
        assert!(Grid1D::new(vec![0.0, 1.0], vec![0.5, -0.5]).is_err());
        assert!(Grid1D::new(vec![0.0], vec![0.5]).is_err());
    }

    #[test]
    fn gl_panel_grid_integrates() {
        // integral of x^2 over [0, 2] = 8/3 across two panels
        let g = Grid1D::gauss_legendre_panels(&[0.0, 0.7, 2.0], 8).unwrap();
        let s: f64 = g.nodes().iter().zip(g.weights()).map(|(x, w)| w * x * x).sum();
        assert!((s - 8.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn sym_matrix_mul_and_storage() {
        let mut m = SymMatrix::zeros(3);
        m.set(0, 0, 2.0);
        m.set(1, 0, -1.0);
        m.set(1, 1, 2.0);
        m.set(2, 1, -1.0);
        m.set(2, 2, 2.0);
        assert_eq!(m.get(0, 1), m.get(1, 0));
        let y = m.mul_vec(&[1.0, 2.0, 3.0]);
        assert_eq!(y, vec![0.0, 0.0, 4.0]);
    }
}
