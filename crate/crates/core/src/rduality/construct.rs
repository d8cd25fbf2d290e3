//! Constructions of the Parseval families that make a weak R-dual work.

use super::certificate::{evaluate, Basis, YData};
use super::interleave::{interleave_double_prime, interleave_prime};
use super::{frame_pinv, parseval_for_ambient, parseval_for_span, same_shape};
use crate::error::{Error, Result};
use crate::frames::VectorFamily;
use crate::numerics::{
    conj, orthogonal_complement_basis, psd_inverse_sqrt, svd_rank_nullspace, CMatrix, Tolerance,
};

#[derive(Debug, Clone)]
pub struct CanonicalV {
    /// `v_i = conj(S_f^{-1/2} f_i)`.
    pub v: VectorFamily,
    /// `f` was a Riesz basis, so `v` is an orthonormal basis.
    pub riesz_basis_input: bool,
}

/// Parseval `v` for which the standard weak R-dual of `f` exists with respect to every Parseval `u`.
pub fn canonical_parseval_v(f: &VectorFamily, tol: &Tolerance) -> Result<CanonicalV> {
    let a = f.analyze(tol)?;
    if !a.is_frame_for_ambient {
        return Err(Error::HypothesisFailed(format!(
            "f spans only {} of {} dimensions",
            a.span_dim, a.dim
        )));
    }
    let r = psd_inverse_sqrt(&f.frame_operator(), tol)?;
    let v = VectorFamily::from_synthesis(conj(&(r * f.synthesis_matrix())), "v")?;
    Ok(CanonicalV {
        v,
        riesz_basis_input: a.is_riesz_basis,
    })
}

/// Checks `u` Parseval, `y` Parseval for `span w` and the Gram condition.
fn hypotheses(w: &VectorFamily, f: &VectorFamily, u: &VectorFamily, tol: &Tolerance) -> Result<YData> {
    same_shape(&[("w", w), ("f", f), ("u", u)])?;
    parseval_for_span(u, "u", tol)?;
    let yd = YData::new(w, f, u, tol)?;
    require_y(&yd)?;
    Ok(yd)
}

fn require_y(yd: &YData) -> Result<()> {
    if !yd.y_parseval.holds() {
        return Err(Error::HypothesisFailed(format!(
            "y is not Parseval for span w (residual {:.3e})",
            yd.y_parseval.value
        )));
    }
    if !yd.gram_condition.holds() {
        return Err(Error::HypothesisFailed(format!(
            "the Gram condition fails (residual {:.3e})",
            yd.gram_condition.value
        )));
    }
    Ok(())
}

/// `T_y + Phi Psi^*`: `Phi` an orthonormal basis of `(span w)^perp`, `Psi` the first
/// `deficit_w` vectors of an orthonormal basis of `Ker T_y`.
fn complete(w: &VectorFamily, yd: &YData, tol: &Tolerance) -> Result<VectorFamily> {
    let phi = orthogonal_complement_basis(w.synthesis_matrix(), tol)?;
    let psi = svd_rank_nullspace(&yd.t_y, tol)?.null_basis;
    let d = phi.ncols();
    if d > psi.ncols() {
        return Err(Error::NumericalFailure(format!(
            "kernel of T_y has {} vectors, need {d}",
            psi.ncols()
        )));
    }
    let t_v = &yd.t_y + phi * psi.columns(0, d).adjoint();
    VectorFamily::from_synthesis(t_v, "v")
}

/// Orthonormal basis `v` with `w` an R-dual of `f` with respect to `u` and `v`.
///
/// Needs as many vectors as dimensions, `y` Parseval for `span w`, the Gram condition, and
/// `dim (span w)^perp = dim Ker T_y`.
pub fn construct_onb_v(
    w: &VectorFamily,
    f: &VectorFamily,
    u: &VectorFamily,
    tol: &Tolerance,
) -> Result<VectorFamily> {
    if w.len() != w.dim() {
        return Err(Error::GateFailed(format!(
            "an orthonormal basis needs {} vectors, the index set has {}",
            w.dim(),
            w.len()
        )));
    }
    let yd = hypotheses(w, f, u, tol)?;
    if yd.deficit_w != yd.ker_ty {
        return Err(Error::HypothesisFailed(format!(
            "dim (span w)^perp = {} but dim Ker T_y = {}",
            yd.deficit_w, yd.ker_ty
        )));
    }
    complete(w, &yd, tol)
}

/// Parseval `v`, not an orthonormal basis, when `dim (span w)^perp < dim Ker T_y`.
pub fn construct_parseval_v(
    w: &VectorFamily,
    f: &VectorFamily,
    u: &VectorFamily,
    tol: &Tolerance,
) -> Result<VectorFamily> {
    same_shape(&[("w", w), ("f", f), ("u", u)])?;
    parseval_for_span(u, "u", tol)?;
    let yd = YData::new(w, f, u, tol)?;
    let case = match yd.deficit_w.cmp(&yd.ker_ty) {
        std::cmp::Ordering::Less => None,
        std::cmp::Ordering::Equal => Some("equal"),
        std::cmp::Ordering::Greater => Some("exceeds"),
    };
    if case == Some("exceeds") {
        return Err(Error::DimensionCase {
            case: "exceeds",
            deficit: yd.deficit_w,
            kernel: yd.ker_ty,
        });
    }
    require_y(&yd)?;
    if let Some(case) = case {
        return Err(Error::DimensionCase {
            case,
            deficit: yd.deficit_w,
            kernel: yd.ker_ty,
        });
    }
    complete(w, &yd, tol)
}

#[derive(Debug, Clone)]
pub struct FPrime {
    pub f_prime: VectorFamily,
    pub u_prime: VectorFamily,
    pub w_prime: VectorFamily,
    /// `y' + q''`.
    pub v: VectorFamily,
}

/// Doubles the index set so that `w` becomes a weak R-dual of `f'`.
///
/// `q` must be Parseval for `(span w)^perp` and indexed like `w`. The
/// returned `u'` and `w'` carry zeros in the new slots.
pub fn construct_weak_r_dual_fprime(
    w: &VectorFamily,
    f: &VectorFamily,
    u: &VectorFamily,
    q: &VectorFamily,
    tol: &Tolerance,
) -> Result<FPrime> {
    let yd = hypotheses(w, f, u, tol)?;
    same_shape(&[("w", w), ("q", q)])?;
    let perp = CMatrix::identity(w.dim(), w.dim()) - &yd.span_w;
    let residual = (q.frame_operator() - perp).norm();
    if residual > tol.threshold(1.0) {
        return Err(Error::NotParsevalComplement { residual });
    }
    let y = yd.y_family("y")?;
    let v = interleave_prime(&y)?.synthesis_matrix() + interleave_double_prime(q)?.synthesis_matrix();
    Ok(FPrime {
        f_prime: interleave_prime(f)?,
        u_prime: interleave_prime(u)?,
        w_prime: interleave_prime(w)?,
        v: VectorFamily::from_synthesis(v, "v")?,
    })
}

#[derive(Debug, Clone)]
pub struct Transfer {
    /// Co-isometry `U` with `U U^* = I`.
    pub map: CMatrix,
    /// `v_i = U h_i`.
    pub v: VectorFamily,
}

/// Moves a known weak R-dual `p` (with respect to `u`, `h`) onto `w`.
pub fn transfer_via_coisometry(
    w: &VectorFamily,
    p: &VectorFamily,
    f: &VectorFamily,
    u: &VectorFamily,
    h: &VectorFamily,
    tol: &Tolerance,
) -> Result<Transfer> {
    same_shape(&[("w", w), ("p", p), ("f", f), ("u", u), ("h", h)])?;
    parseval_for_ambient(h, "h", tol)?;
    let cert = evaluate(p, f, u, h, Basis::Definition, tol)?;
    if !cert.definition_holds {
        return Err(Error::HypothesisFailed(format!(
            "p is not a weak R-dual of f with respect to u and h (synthesis {:.3e}, commutation {:.3e})",
            cert.synthesis.value, cert.commutation.value
        )));
    }
    let yd = hypotheses(w, f, u, tol)?;
    if yd.deficit_w > cert.deficit_w {
        return Err(Error::DeficitOrder {
            target: yd.deficit_w,
            source_deficit: cert.deficit_w,
        });
    }
    let t_p = p.synthesis_matrix();
    let t_w = w.synthesis_matrix();
    let u1 = t_w * (t_p.adjoint() * frame_pinv(p, tol)?);
    let phi_p = orthogonal_complement_basis(t_p, tol)?;
    let psi_w = orthogonal_complement_basis(t_w, tol)?;
    let d = psi_w.ncols();
    let map = u1 + psi_w * phi_p.columns(0, d).adjoint();
    let v = VectorFamily::from_synthesis(&map * h.synthesis_matrix(), "v")?;
    Ok(Transfer { map, v })
}

/// `u_i = conj(S_w^{-1/2} w_i)`, which satisfies the Gram condition against every `f`.
///
/// Only defined when `w` spans the whole space.
pub fn construct_u_from_w(w: &VectorFamily, f: &VectorFamily, tol: &Tolerance) -> Result<VectorFamily> {
    same_shape(&[("w", w), ("f", f)])?;
    let a = w.analyze(tol)?;
    if !a.is_frame_for_ambient {
        return Err(Error::GateFailed(format!(
            "span w has dimension {} < {}",
            a.span_dim, a.dim
        )));
    }
    let r = psd_inverse_sqrt(&w.frame_operator(), tol)?;
    VectorFamily::from_synthesis(conj(&(r * w.synthesis_matrix())), "u")
}
