//! Dense complex linear algebra kernel.
//!
//! Every rank and positivity decision goes through a [`Tolerance`], so the
//! whole crate agrees on what "numerically zero" means.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Relative/absolute cut-off used for rank and zero tests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rel_eps: f64,
    pub abs_floor: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel_eps: 1e-9,
            abs_floor: 1e-12,
        }
    }
}

impl Tolerance {
    pub fn new(rel_eps: f64, abs_floor: f64) -> Self {
        Self { rel_eps, abs_floor }
    }

    /// Tolerance with a custom relative part and the default floor.
    pub fn relative(rel_eps: f64) -> Self {
        Self {
            rel_eps,
            ..Self::default()
        }
    }

    /// Values at or below this are treated as zero for a quantity of size `scale`.
    pub fn threshold(&self, scale: f64) -> f64 {
        (self.rel_eps * scale.abs()).max(self.abs_floor)
    }
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Eigen {
    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// Rebuilds `sum_k f(lambda_k) v_k v_k^*`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.vectors.nrows();
        let mut out = CMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let s = f(lambda);
            if s == 0.0 {
                continue;
            }
            let v = self.vectors.column(k);
            out += (v * v.adjoint()) * C64::from(s);
        }
        out
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.apply_fn(|l| l)
    }
}

pub fn ensure_finite(m: &CMatrix, what: &'static str) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

fn ensure_square(a: &CMatrix) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        })
    }
}

pub fn hermitian_residual(a: &CMatrix) -> f64 {
    (a - a.adjoint()).norm()
}

/// Eigen-decomposition of a Hermitian matrix.
pub fn hermitian_eig(a: &CMatrix, tol: &Tolerance) -> Result<Eigen> {
    ensure_square(a)?;
    ensure_finite(a, "matrix")?;
    let residual = hermitian_residual(a);
    if residual > tol.threshold(a.norm()) {
        return Err(Error::NotHermitian { residual });
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(Eigen {
            values: Vec::new(),
            vectors: CMatrix::zeros(0, 0),
        });
    }
    let h = (a + a.adjoint()) * C64::from(0.5);
    let eig = SymmetricEigen::try_new(h, f64::EPSILON, 1000 * n.max(10))
        .ok_or_else(|| Error::NumericalFailure("eigen-decomposition did not converge".into()))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(Eigen { values, vectors })
}

fn psd_function(a: &CMatrix, tol: &Tolerance, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    let eig = hermitian_eig(a, tol)?;
    let top = eig.max();
    if top <= tol.abs_floor {
        return Err(Error::ZeroMatrix);
    }
    let cut = tol.threshold(top);
    Ok(eig.apply_fn(|l| if l > cut { f(l) } else { 0.0 }))
}

/// `A^{+1/2}`: inverse square root on the range, zero on the kernel.
pub fn psd_inverse_sqrt(a: &CMatrix, tol: &Tolerance) -> Result<CMatrix> {
    psd_function(a, tol, |l| l.sqrt().recip())
}

pub fn psd_sqrt(a: &CMatrix, tol: &Tolerance) -> Result<CMatrix> {
    psd_function(a, tol, f64::sqrt)
}

/// Moore-Penrose pseudo-inverse of a positive semi-definite matrix.
pub fn psd_pinv(a: &CMatrix, tol: &Tolerance) -> Result<CMatrix> {
    psd_function(a, tol, f64::recip)
}

#[derive(Debug, Clone)]
pub struct RankNullspace {
    pub rank: usize,
    /// Orthonormal columns spanning the kernel.
    pub null_basis: CMatrix,
    /// Descending.
    pub singular_values: Vec<f64>,
}

/// Full SVD `A = U diag(sigma) V^*` with `sigma` descending, `U` square and `V` square.
struct FullSvd {
    u: CMatrix,
    sigma: Vec<f64>,
    v: CMatrix,
}

fn full_svd(a: &CMatrix) -> Result<FullSvd> {
    let (rows, cols) = a.shape();
    let m = faer::Mat::<faer::c64>::from_fn(rows, cols, |r, c| {
        let z = a[(r, c)];
        faer::c64::new(z.re, z.im)
    });
    let svd = m
        .svd()
        .map_err(|e| Error::NumericalFailure(format!("SVD did not converge: {e:?}")))?;
    let to_c = |z: &faer::c64| C64::new(z.re, z.im);
    let (u, v, s) = (svd.U(), svd.V(), svd.S().column_vector());
    Ok(FullSvd {
        u: CMatrix::from_fn(rows, rows, |r, c| to_c(&u[(r, c)])),
        sigma: (0..s.nrows()).map(|k| s[k].re).collect(),
        v: CMatrix::from_fn(cols, cols, |r, c| to_c(&v[(r, c)])),
    })
}

/// Numerical rank and an orthonormal kernel basis.
pub fn svd_rank_nullspace(a: &CMatrix, tol: &Tolerance) -> Result<RankNullspace> {
    ensure_finite(a, "matrix")?;
    let (rows, cols) = a.shape();
    if cols == 0 || rows == 0 {
        return Ok(RankNullspace {
            rank: 0,
            null_basis: CMatrix::identity(cols, cols),
            singular_values: Vec::new(),
        });
    }
    let svd = full_svd(a)?;
    let cut = tol.threshold(svd.sigma[0]);
    let rank = svd.sigma.iter().filter(|&&s| s > cut).count();
    Ok(RankNullspace {
        rank,
        null_basis: svd.v.columns(rank, cols - rank).into_owned(),
        singular_values: svd.sigma,
    })
}

/// Orthonormal basis (as columns) of the column space of `a`.
pub fn orthonormal_span_basis(a: &CMatrix, tol: &Tolerance) -> Result<CMatrix> {
    ensure_finite(a, "matrix")?;
    let rows = a.nrows();
    if a.ncols() == 0 || rows == 0 {
        return Ok(CMatrix::zeros(rows, 0));
    }
    let svd = full_svd(a)?;
    let cut = tol.threshold(svd.sigma[0]);
    let rank = svd.sigma.iter().filter(|&&s| s > cut).count();
    Ok(svd.u.columns(0, rank).into_owned())
}

/// Orthonormal basis of the orthogonal complement of the column space of `a`.
pub fn orthogonal_complement_basis(a: &CMatrix, tol: &Tolerance) -> Result<CMatrix> {
    let n = a.nrows();
    if a.ncols() == 0 || a.norm() <= tol.abs_floor {
        return Ok(CMatrix::identity(n, n));
    }
    Ok(svd_rank_nullspace(&a.adjoint(), tol)?.null_basis)
}

pub fn rank(a: &CMatrix, tol: &Tolerance) -> Result<usize> {
    Ok(orthonormal_span_basis(a, tol)?.ncols())
}

/// `<x, y> = sum_k x_k conj(y_k)`, linear in the first argument.
pub fn inner(x: &CVector, y: &CVector) -> C64 {
    y.dotc(x)
}

/// Entrywise complex conjugate.
pub fn conj(a: &CMatrix) -> CMatrix {
    a.map(|z| z.conj())
}

pub fn max_column_norm(a: &CMatrix) -> f64 {
    a.column_iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Largest column norm of `a - b`.
pub fn max_column_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    max_column_norm(&(a - b))
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}
