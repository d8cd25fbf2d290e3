use std::cmp::Ordering;

use serde::Serialize;

use super::{covers, cross_gram, frame_pinv, parseval_for_ambient, parseval_for_span, same_shape};
use crate::error::Result;
use crate::frames::VectorFamily;
use crate::numerics::{self, identity, max_column_distance, max_column_norm, CMatrix, Tolerance};

/// Version tag carried by every serialized report.
pub const SCHEMA_VERSION: u32 = 1;

/// A measured residual and the cut-off it is judged against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub value: f64,
    pub threshold: f64,
}

impl Residual {
    pub fn new(value: f64, threshold: f64) -> Self {
        Self { value, threshold }
    }

    pub fn holds(&self) -> bool {
        self.value <= self.threshold
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    RDual,
    WeakRDual,
    NotWeakRDual,
}

impl Verdict {
    pub fn is_weak_r_dual(self) -> bool {
        self != Verdict::NotWeakRDual
    }
}

/// Which test produced the headline verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Basis {
    /// Direct synthesis plus the Gram commutation condition.
    Definition,
    /// y-sequence Parseval, the Gram condition and `P v_i = y_i`.
    Characterization,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeakRDualCertificate {
    pub schema_version: u32,
    pub verdict: Verdict,
    pub basis: Basis,
    pub definition_holds: bool,
    pub characterization_holds: bool,
    pub agreement: bool,
    /// `max_j |w_j - sum_i <f_i, u_j> v_i|`.
    pub synthesis: Residual,
    /// `|(G(v, v)^t - I) G(f, u)|_F`.
    pub commutation: Residual,
    /// `|(G(w~, w)^t - I) G(u, f)|_F`.
    pub gram_condition: Residual,
    /// `|S_y - P_w|_F`.
    pub y_parseval: Residual,
    /// `max_i |P_w v_i - y_i|`.
    pub x_orthogonality: Residual,
    pub dim: usize,
    pub count: usize,
    pub deficit_w: usize,
    pub ker_ty: usize,
    pub ker_tf: usize,
    /// Every `f_i` lies in `span u`.
    pub u_covers_f: bool,
    pub u_is_onb: bool,
    pub v_is_onb: bool,
}

#[derive(Debug, Clone)]
pub struct WeakRDual {
    pub w: VectorFamily,
    pub certificate: WeakRDualCertificate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    Less,
    Equal,
    Greater,
}

impl From<Ordering> for Relation {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => Relation::Less,
            Ordering::Equal => Relation::Equal,
            Ordering::Greater => Relation::Greater,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub deficit_w: usize,
    pub ker_ty: usize,
    pub ker_tf_conj: usize,
    /// `deficit_w` compared with `ker_ty`.
    pub relation: Relation,
}

/// Everything derived from `(w, f, u)` alone.
pub(crate) struct YData {
    pub g_uf: CMatrix,
    pub t_y: CMatrix,
    pub span_w: CMatrix,
    pub gram_condition: Residual,
    pub y_parseval: Residual,
    pub deficit_w: usize,
    pub ker_ty: usize,
}

impl YData {
    pub fn new(w: &VectorFamily, f: &VectorFamily, u: &VectorFamily, tol: &Tolerance) -> Result<Self> {
        same_shape(&[("w", w), ("f", f), ("u", u)])?;
        let g_uf = cross_gram(u, f)?.into_matrix();
        let t_w = w.synthesis_matrix();
        let t_wt = frame_pinv(w, tol)? * t_w;
        let t_y = &t_wt * &g_uf;

        // G(w~, w)^t = T_w^* T_w~, the projection onto (Ker T_w)^perp.
        let gram_proj = t_w.adjoint() * &t_wt;
        let gram_condition = Residual::new(
            ((gram_proj - identity(w.len())) * &g_uf).norm(),
            tol.threshold(g_uf.norm()),
        );

        let basis = w.span_basis(tol)?;
        let span_w = &basis * basis.adjoint();
        let y_parseval = Residual::new(
            (&t_y * t_y.adjoint() - &span_w).norm(),
            tol.threshold(1.0),
        );
        let deficit_w = w.dim() - basis.ncols();
        let ker_ty = w.len() - numerics::rank(&t_y, tol)?;
        Ok(Self {
            g_uf,
            t_y,
            span_w,
            gram_condition,
            y_parseval,
            deficit_w,
            ker_ty,
        })
    }

    pub fn y_family(&self, label: &str) -> Result<VectorFamily> {
        VectorFamily::from_synthesis(self.t_y.clone(), label)
    }
}

pub(crate) fn evaluate(
    w: &VectorFamily,
    f: &VectorFamily,
    u: &VectorFamily,
    v: &VectorFamily,
    basis: Basis,
    tol: &Tolerance,
) -> Result<WeakRDualCertificate> {
    same_shape(&[("w", w), ("f", f), ("u", u), ("v", v)])?;
    let u_info = parseval_for_span(u, "u", tol)?;
    let v_info = parseval_for_ambient(v, "v", tol)?;
    let yd = YData::new(w, f, u, tol)?;

    let g_fu = yd.g_uf.adjoint();
    let t_v = v.synthesis_matrix();
    let t_w = w.synthesis_matrix();
    let expected = t_v * &g_fu;
    let synthesis = Residual::new(
        max_column_distance(t_w, &expected),
        tol.threshold(max_column_norm(t_w).max(max_column_norm(&expected))),
    );
    let g_vv = cross_gram(v, v)?.into_matrix();
    let commutation = Residual::new(
        ((g_vv.transpose() - identity(v.len())) * &g_fu).norm(),
        tol.threshold(g_fu.norm()),
    );
    let x_orthogonality = Residual::new(
        max_column_distance(&(&yd.span_w * t_v), &yd.t_y),
        tol.threshold(max_column_norm(t_v)),
    );

    let definition_holds = synthesis.holds() && commutation.holds();
    let characterization_holds =
        yd.y_parseval.holds() && yd.gram_condition.holds() && x_orthogonality.holds();
    let holds = match basis {
        Basis::Definition => definition_holds,
        Basis::Characterization => characterization_holds,
    };
    let verdict = match (holds, u_info.is_onb && v_info.is_onb) {
        (false, _) => Verdict::NotWeakRDual,
        (true, true) => Verdict::RDual,
        (true, false) => Verdict::WeakRDual,
    };

    Ok(WeakRDualCertificate {
        schema_version: SCHEMA_VERSION,
        verdict,
        basis,
        definition_holds,
        characterization_holds,
        agreement: definition_holds == characterization_holds,
        synthesis,
        commutation,
        gram_condition: yd.gram_condition,
        y_parseval: yd.y_parseval,
        x_orthogonality,
        dim: w.dim(),
        count: w.len(),
        deficit_w: yd.deficit_w,
        ker_ty: yd.ker_ty,
        ker_tf: f.len() - f.rank(tol)?,
        u_covers_f: covers(u, f, tol)?,
        u_is_onb: u_info.is_onb,
        v_is_onb: v_info.is_onb,
    })
}

/// Builds `w_j = sum_i <f_i, u_j> v_i` and certifies it against the definition.
///
/// `u` must be Parseval for its span and `v` Parseval for the whole space.
pub fn weak_r_dual(
    f: &VectorFamily,
    u: &VectorFamily,
    v: &VectorFamily,
    tol: &Tolerance,
) -> Result<WeakRDual> {
    same_shape(&[("f", f), ("u", u), ("v", v)])?;
    let g_fu = cross_gram(f, u)?.into_matrix();
    let w = VectorFamily::from_synthesis(v.synthesis_matrix() * g_fu, "w")?;
    let certificate = evaluate(&w, f, u, v, Basis::Definition, tol)?;
    Ok(WeakRDual { w, certificate })
}

/// Certifies a given `w` against the definition: synthesis from `f`, `u`, `v` plus the
/// Gram commutation condition.
pub fn check(
    w: &VectorFamily,
    f: &VectorFamily,
    u: &VectorFamily,
    v: &VectorFamily,
    tol: &Tolerance,
) -> Result<WeakRDualCertificate> {
    evaluate(w, f, u, v, Basis::Definition, tol)
}

/// Decides weak R-duality of a given `w` through the y-sequence characterization,
/// cross-checked against the definition.
pub fn characterize(
    w: &VectorFamily,
    f: &VectorFamily,
    u: &VectorFamily,
    v: &VectorFamily,
    tol: &Tolerance,
) -> Result<WeakRDualCertificate> {
    evaluate(w, f, u, v, Basis::Characterization, tol)
}

/// `y_i = sum_k <u_k, f_i> w~_k`.
pub fn compute_y(
    w: &VectorFamily,
    f: &VectorFamily,
    u: &VectorFamily,
    tol: &Tolerance,
) -> Result<VectorFamily> {
    YData::new(w, f, u, tol)?.y_family("y")
}

/// Residual of `(G(w~, w)^t - I) G(u, f) = 0`.
pub fn check_gram_condition(
    w: &VectorFamily,
    f: &VectorFamily,
    u: &VectorFamily,
    tol: &Tolerance,
) -> Result<Residual> {
    Ok(YData::new(w, f, u, tol)?.gram_condition)
}

pub fn dimension_report(
    w: &VectorFamily,
    f: &VectorFamily,
    u: &VectorFamily,
    tol: &Tolerance,
) -> Result<DimensionReport> {
    let yd = YData::new(w, f, u, tol)?;
    Ok(DimensionReport {
        deficit_w: yd.deficit_w,
        ker_ty: yd.ker_ty,
        ker_tf_conj: f.len() - f.rank(tol)?,
        relation: yd.deficit_w.cmp(&yd.ker_ty).into(),
    })
}
