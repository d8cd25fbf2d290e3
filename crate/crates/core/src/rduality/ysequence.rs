//! Frame properties of the y-sequence and the reproducing condition.

use serde::Serialize;

use super::certificate::{Residual, YData};
use super::{covers, cross_gram, parseval_for_ambient, parseval_for_span, same_shape};
use crate::error::{Error, Result};
use crate::frames::VectorFamily;
use crate::numerics::{max_column_distance, max_column_norm, Tolerance};

/// `max_k |sum_j <u_j, u_k> w_j - w_k|`, i.e. `(G(u, u)^t - I) w = 0`.
pub fn check_reproducing_condition(u: &VectorFamily, w: &VectorFamily, tol: &Tolerance) -> Result<Residual> {
    same_shape(&[("u", u), ("w", w)])?;
    let g_uu = cross_gram(u, u)?.into_matrix();
    let t_w = w.synthesis_matrix();
    Ok(Residual::new(
        max_column_distance(&(t_w * g_uu), t_w),
        tol.threshold(max_column_norm(t_w)),
    ))
}

fn require_u_covers_f(u: &VectorFamily, f: &VectorFamily, tol: &Tolerance) -> Result<()> {
    parseval_for_span(u, "u", tol)?;
    if covers(u, f, tol)? {
        Ok(())
    } else {
        Err(Error::HypothesisFailed("f is not contained in span u".into()))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct YBounds {
    /// Optimal frame bounds of `y` on its span.
    pub y_lower: f64,
    pub y_upper: f64,
    /// `A_f / B_w`.
    pub predicted_lower: f64,
    /// `B_f / A_w`.
    pub predicted_upper: f64,
    pub span_equal: bool,
    /// `predicted_lower (1 - eps) <= y_lower` and `y_upper <= predicted_upper (1 + eps)`.
    pub sandwich_holds: bool,
    pub reproducing: Residual,
}

/// Frame bounds of `y` under the reproducing condition, against `[A_f / B_w, B_f / A_w]`.
///
/// `A_f` is the lower bound of `f` for the whole space (zero if `f` does not span it),
/// `A_w`, `B_w` are the bounds of `w` on its span.
pub fn y_bounds_check(
    w: &VectorFamily,
    f: &VectorFamily,
    u: &VectorFamily,
    tol: &Tolerance,
) -> Result<YBounds> {
    same_shape(&[("w", w), ("f", f), ("u", u)])?;
    require_u_covers_f(u, f, tol)?;
    let reproducing = check_reproducing_condition(u, w, tol)?;
    if !reproducing.holds() {
        return Err(Error::HypothesisFailed(format!(
            "the reproducing condition fails (residual {:.3e})",
            reproducing.value
        )));
    }
    let fa = f.analyze(tol)?;
    let wa = w.analyze(tol)?;
    let y = YData::new(w, f, u, tol)?.y_family("y")?;
    let ya = y.analyze(tol)?;
    let span_equal = ya.span_dim == wa.span_dim;
    let predicted_lower = fa.ambient_lower_bound() / wa.upper_bound;
    let predicted_upper = fa.upper_bound / wa.lower_bound;
    let eps = tol.rel_eps;
    let sandwich_holds = span_equal
        && predicted_lower * (1.0 - eps) <= ya.lower_bound
        && ya.upper_bound <= predicted_upper * (1.0 + eps);
    Ok(YBounds {
        y_lower: ya.lower_bound,
        y_upper: ya.upper_bound,
        predicted_lower,
        predicted_upper,
        span_equal,
        sandwich_holds,
        reproducing,
    })
}

/// The reproducing condition for `w_j = sum_i <f_i, u_j> v_i`, which always holds.
pub fn reproducing_check(
    f: &VectorFamily,
    u: &VectorFamily,
    v: &VectorFamily,
    tol: &Tolerance,
) -> Result<Residual> {
    same_shape(&[("f", f), ("u", u), ("v", v)])?;
    parseval_for_span(u, "u", tol)?;
    parseval_for_ambient(v, "v", tol)?;
    let g_fu = cross_gram(f, u)?.into_matrix();
    let w = VectorFamily::from_synthesis(v.synthesis_matrix() * g_fu, "w")?;
    check_reproducing_condition(u, &w, tol)
}

/// The reproducing condition, given that `y` is complete in `span w` and the Gram condition holds.
pub fn completeness_check(
    w: &VectorFamily,
    f: &VectorFamily,
    u: &VectorFamily,
    tol: &Tolerance,
) -> Result<Residual> {
    same_shape(&[("w", w), ("f", f), ("u", u)])?;
    require_u_covers_f(u, f, tol)?;
    let yd = YData::new(w, f, u, tol)?;
    let rank_w = w.dim() - yd.deficit_w;
    let rank_y = w.len() - yd.ker_ty;
    if rank_y != rank_w {
        return Err(Error::HypothesisFailed(format!(
            "y spans {rank_y} of the {rank_w} dimensions of span w"
        )));
    }
    if !yd.gram_condition.holds() {
        return Err(Error::HypothesisFailed(format!(
            "the Gram condition fails (residual {:.3e})",
            yd.gram_condition.value
        )));
    }
    check_reproducing_condition(u, w, tol)
}
