//! Weak R-duality: certificates, the y-sequence and constructions.

mod certificate;
mod construct;
mod interleave;
mod witness;
mod ysequence;

pub use certificate::{
    characterize, check, check_gram_condition, compute_y, dimension_report, weak_r_dual, Basis,
    DimensionReport, Relation, Residual, Verdict, WeakRDual, WeakRDualCertificate,
    SCHEMA_VERSION,
};
pub use construct::{
    construct_onb_v, canonical_parseval_v, construct_parseval_v,
    construct_u_from_w, construct_weak_r_dual_fprime, transfer_via_coisometry, FPrime,
    CanonicalV, Transfer,
};
pub use interleave::{interleave_double_prime, interleave_double_star, interleave_prime, interleave_star};
pub use witness::{find_witness, verify_witness, ConjugateLinearMap, WitnessCheck, WitnessSearch};
pub use ysequence::{
    check_reproducing_condition, completeness_check, reproducing_check, y_bounds_check, YBounds,
};

use crate::error::{Error, Result};
use crate::frames::{CrossGram, FrameAnalysis, VectorFamily};
use crate::numerics::{self, CMatrix, Tolerance};

/// `G(g, h)[i][j] = <g_i, h_j>`.
pub fn cross_gram(g: &VectorFamily, h: &VectorFamily) -> Result<CrossGram> {
    if g.len() != h.len() {
        return Err(Error::ShapeMismatch(format!(
            "cross-Gram of families with {} and {} members",
            g.len(),
            h.len()
        )));
    }
    CrossGram::new(g, h)
}

fn same_shape(families: &[(&str, &VectorFamily)]) -> Result<()> {
    let (name0, first) = families[0];
    for &(name, fam) in &families[1..] {
        if fam.dim() != first.dim() || fam.len() != first.len() {
            return Err(Error::ShapeMismatch(format!(
                "{name} has {} members in C^{}, {name0} has {} members in C^{}",
                fam.len(),
                fam.dim(),
                first.len(),
                first.dim()
            )));
        }
    }
    Ok(())
}

/// Requires `fam` to be Parseval for its own span.
fn parseval_for_span(
    fam: &VectorFamily,
    which: &'static str,
    tol: &Tolerance,
) -> Result<FrameAnalysis> {
    let a = fam.analyze(tol)?;
    if a.is_parseval_for_span {
        Ok(a)
    } else {
        Err(Error::NotParseval {
            which,
            residual: a.parseval_residual,
        })
    }
}

/// Requires `fam` to be Parseval for the whole space.
fn parseval_for_ambient(
    fam: &VectorFamily,
    which: &'static str,
    tol: &Tolerance,
) -> Result<FrameAnalysis> {
    let a = fam.analyze(tol)?;
    if a.is_parseval {
        Ok(a)
    } else {
        let residual = if a.is_parseval_for_span {
            1.0
        } else {
            a.parseval_residual
        };
        Err(Error::NotParseval { which, residual })
    }
}

/// `S^+`, or zero for a family with empty span.
fn frame_pinv(fam: &VectorFamily, tol: &Tolerance) -> Result<CMatrix> {
    match numerics::psd_pinv(&fam.frame_operator(), tol) {
        Err(Error::ZeroMatrix) => Ok(CMatrix::zeros(fam.dim(), fam.dim())),
        other => other,
    }
}

/// Projection onto the span, zero for an empty span.
fn span_projection(fam: &VectorFamily, tol: &Tolerance) -> Result<CMatrix> {
    fam.span_projection(tol)
}

/// Whether every member of `f` lies in the span of `u`.
fn covers(u: &VectorFamily, f: &VectorFamily, tol: &Tolerance) -> Result<bool> {
    let p = span_projection(u, tol)?;
    let t = f.synthesis_matrix();
    let miss = numerics::max_column_norm(&(&p * t - t));
    Ok(miss <= tol.threshold(numerics::max_column_norm(t)))
}
