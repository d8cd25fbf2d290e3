//! Conjugate-linear witnesses `L~ x = M conj(x)` for R-duality.

use serde::Serialize;

use super::certificate::{Residual, YData};
use super::same_shape;
use crate::error::{Error, Result};
use crate::frames::VectorFamily;
use crate::numerics::{conj, hermitian_eig, identity, CMatrix, CVector, Eigen, Tolerance, C64};

/// `x -> M conj(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugateLinearMap {
    matrix: CMatrix,
}

impl ConjugateLinearMap {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, x: &CVector) -> CVector {
        &self.matrix * x.map(|z| z.conj())
    }

    /// The adjoint, `<L~x, z> = conj(<x, L~^* z>)`: `z -> M^T conj(z)`.
    pub fn adjoint_apply(&self, z: &CVector) -> CVector {
        self.matrix.transpose() * z.map(|c| c.conj())
    }

    /// `z -> conj(M^{-1} z)`.
    pub fn inverse_apply(&self, z: &CVector) -> Result<CVector> {
        let inv = self.inverse_matrix()?;
        Ok((inv * z).map(|c| c.conj()))
    }

    fn inverse_matrix(&self) -> Result<CMatrix> {
        self.matrix.clone().try_inverse().ok_or(Error::NotInvertible)
    }

    /// `L~ L~^*`, a linear operator: `M M^*`.
    pub fn ll_star(&self) -> CMatrix {
        &self.matrix * self.matrix.adjoint()
    }

    /// `L~^* L~`, a linear operator: `conj(M^* M)`.
    pub fn lstar_l(&self) -> CMatrix {
        conj(&(self.matrix.adjoint() * &self.matrix))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessCheck {
    /// `|S_w - (L~ L~^*)^{-1}|_F / |S_w|_F`.
    pub sw_residual: f64,
    /// `|S_f - (L~^* L~)^{-1}|_F / |S_f|_F`.
    pub sf_residual: f64,
    pub u_parseval: Residual,
    pub gram_condition: Residual,
    pub y_parseval: Residual,
    pub holds: bool,
    #[serde(skip)]
    pub u: VectorFamily,
}

/// Checks the frame-operator identities of a witness and the induced
/// `u_k = L~^{-1} w~_k`.
pub fn verify_witness(
    l: &ConjugateLinearMap,
    w: &VectorFamily,
    f: &VectorFamily,
    tol: &Tolerance,
) -> Result<WitnessCheck> {
    same_shape(&[("w", w), ("f", f)])?;
    if l.dim() != w.dim() {
        return Err(Error::ShapeMismatch(format!(
            "map acts on C^{}, families live in C^{}",
            l.dim(),
            w.dim()
        )));
    }
    let a = w.analyze(tol)?;
    if !a.is_frame_for_ambient {
        return Err(Error::GateFailed(format!(
            "span w has dimension {} < {}",
            a.span_dim, a.dim
        )));
    }
    let m_inv = l.inverse_matrix()?;
    let ll_inv = l.ll_star().try_inverse().ok_or(Error::NotInvertible)?;
    let lstar_l_inv = l.lstar_l().try_inverse().ok_or(Error::NotInvertible)?;
    let s_w = w.frame_operator();
    let s_f = f.frame_operator();
    let sw_residual = (&s_w - ll_inv).norm() / s_w.norm();
    let sf_residual = (&s_f - lstar_l_inv).norm() / s_f.norm().max(tol.abs_floor);

    let s_w_inv = s_w.clone().try_inverse().ok_or(Error::NotInvertible)?;
    let t_wt = s_w_inv * w.synthesis_matrix();
    let u = VectorFamily::from_synthesis(conj(&(m_inv * t_wt)), "u")?;
    let u_parseval = Residual::new((u.frame_operator() - identity(u.dim())).norm(), tol.threshold(1.0));
    let yd = YData::new(w, f, &u, tol)?;
    let holds = sw_residual <= tol.rel_eps
        && sf_residual <= tol.rel_eps
        && u_parseval.holds()
        && yd.gram_condition.holds()
        && yd.y_parseval.holds();
    Ok(WitnessCheck {
        sw_residual,
        sf_residual,
        u_parseval,
        gram_condition: yd.gram_condition,
        y_parseval: yd.y_parseval,
        holds,
        u,
    })
}

#[derive(Debug, Clone)]
pub enum WitnessSearch {
    Found {
        map: ConjugateLinearMap,
        /// Common spectrum of `S_w^{-1}` and `S_f^{-1}`, ascending.
        spectrum: Vec<f64>,
    },
    NoWitness {
        /// Largest gap between the sorted spectra.
        gap: f64,
        sw_inv_spectrum: Vec<f64>,
        sf_inv_spectrum: Vec<f64>,
    },
}

impl WitnessSearch {
    pub fn map(&self) -> Option<&ConjugateLinearMap> {
        match self {
            WitnessSearch::Found { map, .. } => Some(map),
            WitnessSearch::NoWitness { .. } => None,
        }
    }
}

fn inverse_eig(s: &CMatrix, what: &'static str, tol: &Tolerance) -> Result<Eigen> {
    let e = hermitian_eig(s, tol)?;
    if e.max() <= tol.abs_floor || e.min() <= tol.threshold(e.max()) {
        return Err(Error::NotPD(what));
    }
    // Same eigenvectors, reciprocal eigenvalues, re-sorted ascending.
    let n = e.values.len();
    let values = e.values.iter().rev().map(|l| l.recip()).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| e.vectors[(r, n - 1 - c)]);
    Ok(Eigen { values, vectors })
}

/// Looks for `M` with `M M^* = S_w^{-1}` and `conj(M^* M) = S_f^{-1}`.
///
/// One exists exactly when `S_w^{-1}` and `S_f^{-1}` have the same spectrum.
pub fn find_witness(s_w: &CMatrix, s_f: &CMatrix, tol: &Tolerance) -> Result<WitnessSearch> {
    if s_w.shape() != s_f.shape() {
        return Err(Error::ShapeMismatch(format!(
            "S_w is {:?}, S_f is {:?}",
            s_w.shape(),
            s_f.shape()
        )));
    }
    let a = inverse_eig(s_w, "S_w", tol)?;
    // conj(S_f^{-1}) has the same spectrum and conjugated eigenvectors.
    let mut b = inverse_eig(s_f, "S_f", tol)?;
    b.vectors = conj(&b.vectors);

    let gap = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    if gap > tol.threshold(a.max().max(b.max())) {
        return Ok(WitnessSearch::NoWitness {
            gap,
            sw_inv_spectrum: a.values,
            sf_inv_spectrum: b.values,
        });
    }
    let root = CMatrix::from_diagonal(&CVector::from_iterator(
        a.values.len(),
        a.values.iter().map(|l| C64::from(l.sqrt())),
    ));
    let map = ConjugateLinearMap::new(&a.vectors * root * b.vectors.adjoint())?;
    Ok(WitnessSearch::Found {
        map,
        spectrum: a.values,
    })
}
