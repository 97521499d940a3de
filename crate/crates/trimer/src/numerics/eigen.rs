//! Symmetric eigensolvers: Householder reduction to tridiagonal form,
//! Sturm-sequence bisection for the lowest eigenvalues, and an
//! implicit-shift QL sweep for full spectra.
//!
//! The reduction follows the classic EISPACK TRED1/TQL1 scheme on packed
//! lower-triangular storage; no eigenvectors are accumulated (callers that
//! need residual checks recover vectors by inverse iteration).

use super::SymMatrix;
use crate::{Error, Result};

/// Desk-scale cap for the dense solver.
const MAX_DENSE_ORDER: usize = 6000;

impl SymMatrix {
    /// Householder reduction to symmetric tridiagonal form; returns
    /// `(diagonal, off-diagonal)` with the off-diagonal of length `n - 1`.
    /// The transform is orthogonal, so the eigenvalues are preserved.
    pub fn into_tridiag(self) -> (Vec<f64>, Vec<f64>) {
        let n = self.order();
        let mut a = self.a;
        let mut e = vec![0.0; n];
        let mut p = vec![0.0; n];
        for i in (1..n).rev() {
            let l = i - 1;
            let ri = i * (i + 1) / 2;
            let mut scale = 0.0;
            for k in 0..i {
                scale += a[ri + k].abs();
            }
            if scale == 0.0 {
                e[i] = 0.0;
                continue;
            }
            let mut h = 0.0;
            for k in 0..i {
                a[ri + k] /= scale;
                h += a[ri + k] * a[ri + k];
            }
            let f = a[ri + l];
            let g = -h.sqrt().copysign(f);
            e[i] = scale * g;
            h -= f * g;
            a[ri + l] = f - g;
            // p = A u / h on the leading i-by-i block, one contiguous pass
            // over the packed triangle (both the row and the transposed
            // column contribution of each entry are applied immediately)
            p[..i].fill(0.0);
            {
                let (rows, u) = a.split_at(ri);
                for k in 0..i {
                    let rk = k * (k + 1) / 2;
                    let uk = u[k];
                    let row = &rows[rk..rk + k];
                    let mut s = rows[rk + k] * uk;
                    for j in 0..k {
                        s += row[j] * u[j];
                        p[j] += row[j] * uk;
                    }
                    p[k] += s;
                }
            }
            for pj in p.iter_mut().take(i) {
                *pj /= h;
            }
            let mut kappa = 0.0;
            for j in 0..i {
                kappa += a[ri + j] * p[j];
            }
            kappa /= 2.0 * h;
            // q = p - kappa u; rank-two update A -= u q' + q u'
            for j in 0..i {
                p[j] -= kappa * a[ri + j];
            }
            for j in 0..i {
                let rj = j * (j + 1) / 2;
                let (uj, qj) = (a[ri + j], p[j]);
                for k in 0..=j {
                    a[rj + k] -= uj * p[k] + qj * a[ri + k];
                }
            }
        }
        let d: Vec<f64> = (0..n).map(|i| a[i * (i + 1) / 2 + i]).collect();
        let off: Vec<f64> = (1..n).map(|i| e[i]).collect();
        (d, off)
    }
}

/// Number of eigenvalues of the symmetric tridiagonal `(diag, off)` strictly
/// below `shift`, by the Sturm sequence of `LDL^T` pivots.
pub fn sturm_count(diag: &[f64], off: &[f64], shift: f64) -> usize {
    debug_assert_eq!(off.len() + 1, diag.len());
    // Smallest pivot magnitude kept in the recurrence, scaled to the matrix
    // so that e^2 / pivmin cannot overflow.
    let max_e2 = off.iter().fold(0.0f64, |m, &e| m.max(e * e));
    let pivmin = f64::MIN_POSITIVE.max(f64::EPSILON * f64::EPSILON * max_e2);
    let mut count = 0usize;
    let mut q = diag[0] - shift;
    for i in 0..diag.len() {
        if i > 0 {
            q = diag[i] - shift - off[i - 1] * off[i - 1] / q;
        }
        if q.abs() <= pivmin {
            q = -pivmin; // exact-hit tie-break, counted as negative
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k` smallest eigenvalues of a symmetric tridiagonal matrix, in
/// ascending order, each bracketed by Sturm-count bisection to
/// `1e-13 * spectral scale`.
pub fn tridiag_lowest_eigs(diag: &[f64], off: &[f64], k: usize) -> Vec<f64> {
    let n = diag.len();
    assert_eq!(off.len() + 1, n, "off-diagonal must have length n - 1");
    assert!(k >= 1 && k <= n, "requested {k} of {n} eigenvalues");
    // Gershgorin enclosure of the whole spectrum
    let radius = |i: usize| {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i < n - 1 { off[i].abs() } else { 0.0 };
        left + right
    };
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        lo = lo.min(diag[i] - radius(i));
        hi = hi.max(diag[i] + radius(i));
    }
    let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        let (mut a, mut b) = (lo, hi);
        // invariant: count(a) <= j < count(b); bisect essentially to the
        // floating-point resolution of the eigenvalue itself (far inside
        // the 1e-12 * spectral-scale certification).
        for _ in 0..200 {
            let tol = (8.0 * f64::EPSILON * a.abs().max(b.abs())).max(1e-300 * scale);
            if b - a <= tol {
                break;
            }
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if sturm_count(diag, off, mid) > j {
                b = mid;
            } else {
                a = mid;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}

/// All eigenvalues of a symmetric tridiagonal matrix by the implicit-shift
/// QL method (no eigenvectors), ascending.
fn tql_eigenvalues(d: &mut [f64], off: &[f64]) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);
    let mut f = 0.0f64;
    let mut b = 0.0f64;
    for l in 0..n {
        let h = f64::EPSILON * (d[l].abs() + e[l].abs());
        if b < h {
            b = h;
        }
        // find a negligible off-diagonal element
        let mut m = l;
        while m < n {
            if e[m].abs() <= b {
                break;
            }
            m += 1;
        }
        if m >= n {
            m = n - 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                if iter == 50 {
                    return Err(Error::non_convergence(
                        "tql_eigenvalues",
                        format!("QL sweep stalled at index {l}"),
                    ));
                }
                iter += 1;
                // Wilkinson-style shift
                let g = d[l];
                let p = (d[l + 1] - g) / (2.0 * e[l]);
                let r = (p * p + 1.0).sqrt();
                d[l] = e[l] / (p + r.copysign(p));
                let h = g - d[l];
                for item in d.iter_mut().take(n).skip(l + 1) {
                    *item -= h;
                }
                f += h;
                // QL transformation
                let mut p = d[m];
                let mut c = 1.0;
                let mut s = 0.0;
                for i in (l..m).rev() {
                    let g = c * e[i];
                    let h = c * p;
                    if p.abs() >= e[i].abs() {
                        c = e[i] / p;
                        let r = (c * c + 1.0).sqrt();
                        e[i + 1] = s * p * r;
                        s = c / r;
                        c = 1.0 / r;
                    } else {
                        c = p / e[i];
                        let r = (c * c + 1.0).sqrt();
                        e[i + 1] = s * e[i] * r;
                        s = 1.0 / r;
                        c *= s;
                    }
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                }
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= b {
                    break;
                }
            }
        }
        d[l] += f;
    }
    d.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(())
}

/// The `k` smallest eigenvalues of a dense symmetric matrix, ascending:
/// Householder tridiagonalization followed by an implicit-shift QL sweep.
pub fn sym_lowest_eigs(a: &SymMatrix, k: usize) -> Result<Vec<f64>> {
    let n = a.order();
    if n > MAX_DENSE_ORDER {
        return Err(Error::range(
            "sym_lowest_eigs",
            format!("order {n} above the desk-scale cap {MAX_DENSE_ORDER}"),
        ));
    }
    if k == 0 || k > n {
        return Err(Error::range("sym_lowest_eigs", format!("requested {k} of {n} eigenvalues")));
    }
    let (mut d, off) = a.clone().into_tridiag();
    tql_eigenvalues(&mut d, &off)?;
    d.truncate(k);
    Ok(d)
}
