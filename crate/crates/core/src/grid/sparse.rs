//! Two-variable finite-difference operator, banded Cholesky factorization and
//! shift-invert Lanczos for its lowest eigenpairs.

use super::tridiag::{axpy, dot, fix_sign, start_vector, SymTridiagonal};
use crate::{Error, Result};

/// 5-point-stencil operator on the interior points of a rectangular grid.
///
/// Interior point `(i, j)` (fast index `i` along `φ_f`) sits at position
/// `j * nf + i`.
#[derive(Debug, Clone)]
pub struct Operator2d {
    pub nf: usize,
    pub nm: usize,
    /// Potential plus the stencil centre.
    pub diag: Vec<f64>,
    /// Coupling to `φ_f` neighbours, as a positive number (entry is `−cf`).
    pub cf: f64,
    /// Coupling to `φ_m` neighbours, as a positive number (entry is `−cm`).
    pub cm: f64,
}

impl Operator2d {
    pub fn dim(&self) -> usize {
        self.nf * self.nm
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let (nf, nm) = (self.nf, self.nm);
        for j in 0..nm {
            for i in 0..nf {
                let k = j * nf + i;
                let mut s = self.diag[k] * x[k];
                if i > 0 {
                    s -= self.cf * x[k - 1];
                }
                if i + 1 < nf {
                    s -= self.cf * x[k + 1];
                }
                if j > 0 {
                    s -= self.cm * x[k - nf];
                }
                if j + 1 < nm {
                    s -= self.cm * x[k + nf];
                }
                y[k] = s;
            }
        }
    }

    /// Max-row-sum norm.
    pub fn norm(&self) -> f64 {
        self.diag.iter().map(|d| d.abs()).fold(0.0, f64::max) + 2.0 * (self.cf + self.cm)
    }

    /// Entry `(row, row - offset)` for `offset ≤ nf`.
    fn lower_entry(&self, row: usize, offset: usize) -> f64 {
        if offset == 0 {
            self.diag[row]
        } else if offset == 1 {
            if row.is_multiple_of(self.nf) {
                0.0
            } else {
                -self.cf
            }
        } else if offset == self.nf {
            -self.cm
        } else {
            0.0
        }
    }
}

/// Cholesky factor of `A − σI` in row-band storage (bandwidth `nf`).
pub struct BandedCholesky {
    n: usize,
    band: usize,
    // Row i stores L[i][i-band ..= i] at offsets 0..=band.
    l: Vec<f64>,
}

impl BandedCholesky {
    pub fn factor(op: &Operator2d, shift: f64) -> Result<Self> {
        let n = op.dim();
        let band = op.nf;
        let w = band + 1;
        let mut l = vec![0.0; n * w];
        for i in 0..n {
            let j0 = i.saturating_sub(band);
            for j in j0..=i {
                let mut s = op.lower_entry(i, i - j);
                if i == j {
                    s -= shift;
                }
                let k0 = j0.max(j.saturating_sub(band));
                if k0 < j {
                    let ri = &l[i * w + (k0 + band - i)..i * w + (j + band - i)];
                    let rj = &l[j * w + (k0 + band - j)..j * w + band];
                    s -= dot(ri, rj);
                }
                if i == j {
                    if s <= 0.0 || !s.is_finite() {
                        return Err(Error::InvalidArgument(format!(
                            "shifted operator is not positive definite (pivot {s:.3e} at row {i})"
                        )));
                    }
                    l[i * w + band] = s.sqrt();
                } else {
                    l[i * w + (j + band - i)] = s / l[j * w + band];
                }
            }
        }
        Ok(BandedCholesky { n, band, l })
    }

    /// Solves `(A − σI) x = b` in place.
    pub fn solve(&self, b: &mut [f64]) {
        let (n, band) = (self.n, self.band);
        let w = band + 1;
        for i in 0..n {
            let k0 = i.saturating_sub(band);
            let row = &self.l[i * w + (k0 + band - i)..i * w + band];
            let s = b[i] - dot(row, &b[k0..i]);
            b[i] = s / self.l[i * w + band];
        }
        for i in (0..n).rev() {
            let xi = b[i] / self.l[i * w + band];
            b[i] = xi;
            let k0 = i.saturating_sub(band);
            let row = &self.l[i * w + (k0 + band - i)..i * w + band];
            for (bk, lk) in b[k0..i].iter_mut().zip(row) {
                *bk -= lk * xi;
            }
        }
    }
}

/// Converged lowest eigenpairs from [`lowest_eigenpairs`].
#[derive(Debug, Clone)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    /// Euclidean unit vectors on the interior points.
    pub vectors: Vec<Vec<f64>>,
    /// `‖Ax − λx‖` for each pair.
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

/// Lowest `k` eigenpairs of `op` by Lanczos on `(A − σI)⁻¹` with full
/// reorthogonalization. `shift` must lie below the lowest eigenvalue.
///
/// Convergence is declared when every wanted Ritz pair of the inverted
/// operator has residual bound below `tol` relative to the largest Ritz value.
pub fn lowest_eigenpairs(op: &Operator2d, k: usize, shift: f64, tol: f64, max_iter: usize) -> Result<Eigenpairs> {
    let n = op.dim();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("cannot compute {k} eigenpairs of a {n}-point operator")));
    }
    let chol = BandedCholesky::factor(op, shift)?;
    let max_iter = max_iter.min(n);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_iter.min(512));
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();

    let mut v = start_vector(n, 7);
    let nv = dot(&v, &v).sqrt();
    v.iter_mut().for_each(|x| *x /= nv);
    basis.push(v);

    let mut ritz: Option<(Vec<f64>, Vec<Vec<f64>>)> = None;
    let mut worst = f64::INFINITY;
    for j in 0..max_iter {
        let mut w = basis[j].clone();
        chol.solve(&mut w);
        let a = dot(&basis[j], &w);
        axpy(-a, &basis[j], &mut w);
        if j > 0 {
            axpy(-beta[j - 1], &basis[j - 1], &mut w);
        }
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &w);
                axpy(-c, q, &mut w);
            }
        }
        alpha.push(a);
        let b = dot(&w, &w).sqrt();

        let m = j + 1;
        let check = m >= k && (m % 5 == 0 || m == max_iter || b <= 1e-14 * a.abs());
        if check {
            let t = SymTridiagonal::new(alpha.clone(), beta.clone());
            let (theta, s) = t.eigenpairs(m - k..m);
            let scale = theta.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            worst = s.iter().map(|si| b * si[m - 1].abs()).fold(0.0, f64::max) / scale;
            if worst < tol || b <= 1e-14 * a.abs() {
                ritz = Some((theta, s));
                break;
            }
        }
        if b <= 1e-14 * a.abs() {
            break;
        }
        beta.push(b);
        w.iter_mut().for_each(|x| *x /= b);
        basis.push(w);
    }

    let (theta, s) = ritz.ok_or(Error::NoConvergence { iterations: basis.len(), residual: worst })?;
    let mut pairs: Vec<(f64, Vec<f64>, f64)> = Vec::with_capacity(k);
    let mut y = vec![0.0; n];
    for (th, si) in theta.iter().zip(&s) {
        let mut x = vec![0.0; n];
        for (c, q) in si.iter().zip(&basis) {
            axpy(*c, q, &mut x);
        }
        let nx = dot(&x, &x).sqrt();
        x.iter_mut().for_each(|v| *v /= nx);
        fix_sign(&mut x);
        op.apply(&x, &mut y);
        let rq = dot(&x, &y);
        let res = y.iter().zip(&x).map(|(a, b)| (a - rq * b).powi(2)).sum::<f64>().sqrt();
        debug_assert!((rq - (shift + 1.0 / th)).abs() < 1e-6 * rq.abs().max(1.0));
        pairs.push((rq, x, res));
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let iterations = alpha.len();
    let mut out = Eigenpairs { values: vec![], vectors: vec![], residuals: vec![], iterations };
    for (v, x, r) in pairs {
        out.values.push(v);
        out.vectors.push(x);
        out.residuals.push(r);
    }
    Ok(out)
}
