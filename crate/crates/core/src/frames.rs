//! Finite vector families and their frame-theoretic analysis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    self, conj, hermitian_eig, orthonormal_span_basis, psd_inverse_sqrt, psd_pinv, CMatrix,
    CVector, Tolerance, C64,
};

/// An ordered family of vectors in `C^n`, stored as the columns of its synthesis matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFamily {
    synthesis: CMatrix,
    label: String,
}

impl VectorFamily {
    pub fn from_synthesis(synthesis: CMatrix, label: impl Into<String>) -> Result<Self> {
        if synthesis.nrows() == 0 || synthesis.ncols() == 0 {
            return Err(Error::ShapeMismatch(format!(
                "family must have positive dimension and count, got {}x{}",
                synthesis.nrows(),
                synthesis.ncols()
            )));
        }
        numerics::ensure_finite(&synthesis, "vector family")?;
        Ok(Self {
            synthesis,
            label: label.into(),
        })
    }

    pub fn new(dim: usize, members: &[CVector], label: impl Into<String>) -> Result<Self> {
        if let Some(bad) = members.iter().find(|v| v.len() != dim) {
            return Err(Error::ShapeMismatch(format!(
                "member of length {} in a family of dimension {dim}",
                bad.len()
            )));
        }
        let t = CMatrix::from_fn(dim, members.len(), |r, c| members[c][r]);
        Self::from_synthesis(t, label)
    }

    pub fn dim(&self) -> usize {
        self.synthesis.nrows()
    }

    pub fn len(&self) -> usize {
        self.synthesis.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn member(&self, i: usize) -> CVector {
        self.synthesis.column(i).into_owned()
    }

    pub fn members(&self) -> impl Iterator<Item = CVector> + '_ {
        self.synthesis.column_iter().map(|c| c.into_owned())
    }

    /// `T`: coefficients to vectors, members as columns.
    pub fn synthesis_matrix(&self) -> &CMatrix {
        &self.synthesis
    }

    /// `T^*`: `x -> (<x, f_i>)_i`.
    pub fn analysis_matrix(&self) -> CMatrix {
        self.synthesis.adjoint()
    }

    /// `S = T T^*`.
    pub fn frame_operator(&self) -> CMatrix {
        &self.synthesis * self.synthesis.adjoint()
    }

    pub fn conjugate(&self) -> Self {
        Self {
            synthesis: conj(&self.synthesis),
            label: self.label.clone(),
        }
    }

    /// Applies a linear operator to every member.
    pub fn map(&self, op: &CMatrix) -> Result<Self> {
        if op.ncols() != self.dim() {
            return Err(Error::ShapeMismatch(format!(
                "operator has {} columns, family lives in C^{}",
                op.ncols(),
                self.dim()
            )));
        }
        Self::from_synthesis(op * &self.synthesis, self.label.clone())
    }

    /// Appends zero members up to `count`.
    pub fn zero_padded(&self, count: usize) -> Result<Self> {
        if count < self.len() {
            return Err(Error::ShapeMismatch(format!(
                "cannot pad {} members down to {count}",
                self.len()
            )));
        }
        let mut t = CMatrix::zeros(self.dim(), count);
        t.columns_mut(0, self.len()).copy_from(&self.synthesis);
        Self::from_synthesis(t, self.label.clone())
    }

    pub fn rank(&self, tol: &Tolerance) -> Result<usize> {
        numerics::rank(&self.synthesis, tol)
    }

    /// Orthonormal basis of the span.
    pub fn span_basis(&self, tol: &Tolerance) -> Result<CMatrix> {
        orthonormal_span_basis(&self.synthesis, tol)
    }

    pub fn analyze(&self, tol: &Tolerance) -> Result<FrameAnalysis> {
        FrameAnalysis::of(self, tol)
    }

    /// `S^+ f_i`.
    pub fn canonical_dual(&self, tol: &Tolerance) -> Result<Self> {
        let s_pinv = psd_pinv(&self.frame_operator(), tol).map_err(empty_span)?;
        Self::from_synthesis(s_pinv * &self.synthesis, format!("{}~", self.label))
    }

    /// `S^{+1/2} f_i`: a Parseval frame for the same span.
    pub fn parseval_tighten(&self, tol: &Tolerance) -> Result<Self> {
        let r = psd_inverse_sqrt(&self.frame_operator(), tol).map_err(empty_span)?;
        Self::from_synthesis(r * &self.synthesis, self.label.clone())
    }

    /// Orthogonal projection of `x` onto the span.
    pub fn project_onto_span(&self, x: &CVector, tol: &Tolerance) -> Result<CVector> {
        if x.len() != self.dim() {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} projected in C^{}",
                x.len(),
                self.dim()
            )));
        }
        let q = self.span_basis(tol)?;
        Ok(&q * (q.adjoint() * x))
    }

    /// Matrix of the orthogonal projection onto the span.
    pub fn span_projection(&self, tol: &Tolerance) -> Result<CMatrix> {
        let q = self.span_basis(tol)?;
        Ok(&q * q.adjoint())
    }

    pub fn to_file(&self) -> FamilyFile {
        FamilyFile {
            dim: self.dim(),
            vectors: self
                .synthesis
                .column_iter()
                .map(|c| c.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            label: self.label.clone(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: FamilyFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.into_family()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("family serializes")
    }
}

fn empty_span(e: Error) -> Error {
    match e {
        Error::ZeroMatrix => Error::EmptySpan,
        other => other,
    }
}

/// On-disk form: `{"dim": n, "vectors": [[[re, im], ...], ...], "label": "..."}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyFile {
    pub dim: usize,
    pub vectors: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    pub label: String,
}

impl FamilyFile {
    pub fn into_family(self) -> Result<VectorFamily> {
        let members: Vec<CVector> = self
            .vectors
            .iter()
            .map(|v| CVector::from_iterator(v.len(), v.iter().map(|&[re, im]| C64::new(re, im))))
            .collect();
        VectorFamily::new(self.dim, &members, self.label)
    }
}

/// Frame, Riesz and Parseval diagnostics of a family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameAnalysis {
    pub dim: usize,
    pub count: usize,
    /// `dim span`.
    pub span_dim: usize,
    /// `dim (span)^perp`.
    pub deficit: usize,
    /// `dim Ker T`.
    pub kernel_dim: usize,
    /// Optimal frame bounds on the span.
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub is_frame_for_ambient: bool,
    pub is_frame_sequence: bool,
    pub is_tight: bool,
    pub is_parseval_for_span: bool,
    pub is_parseval: bool,
    /// `max |lambda - 1|` over the nonzero spectrum of `S`.
    pub parseval_residual: f64,
    pub is_riesz_sequence: bool,
    pub is_riesz_basis: bool,
    pub is_onb: bool,
    pub riesz_bounds: Option<(f64, f64)>,
    /// Spectrum of `S`, ascending.
    pub spectrum: Vec<f64>,
}

impl FrameAnalysis {
    fn of(fam: &VectorFamily, tol: &Tolerance) -> Result<Self> {
        let eig = hermitian_eig(&fam.frame_operator(), tol)?;
        let top = eig.max();
        if top <= tol.abs_floor {
            return Err(Error::EmptySpan);
        }
        let cut = tol.threshold(top);
        let nonzero: Vec<f64> = eig.values.iter().copied().filter(|&l| l > cut).collect();
        let span_dim = nonzero.len();
        let (dim, count) = (fam.dim(), fam.len());
        let lower = nonzero[0];
        let parseval_residual = nonzero.iter().map(|l| (l - 1.0).abs()).fold(0.0, f64::max);
        let is_parseval_for_span = parseval_residual <= tol.threshold(1.0);
        let deficit = dim - span_dim;

        let riesz_bounds = if count <= dim
            && fam
                .synthesis
                .column_iter()
                .all(|c| c.norm() > tol.abs_floor)
        {
            let gram = fam.synthesis.adjoint() * &fam.synthesis;
            let g = hermitian_eig(&gram, tol)?;
            (g.min() > tol.threshold(g.max())).then(|| (g.min(), g.max()))
        } else {
            None
        };
        let is_riesz_sequence = riesz_bounds.is_some();

        Ok(Self {
            dim,
            count,
            span_dim,
            deficit,
            kernel_dim: count - span_dim,
            lower_bound: lower,
            upper_bound: top,
            is_frame_for_ambient: deficit == 0,
            is_frame_sequence: true,
            is_tight: (top - lower) <= tol.threshold(top),
            is_parseval_for_span,
            is_parseval: is_parseval_for_span && deficit == 0,
            parseval_residual,
            is_riesz_sequence,
            is_riesz_basis: is_riesz_sequence && deficit == 0,
            is_onb: is_riesz_sequence && deficit == 0 && is_parseval_for_span,
            riesz_bounds,
            spectrum: eig.values,
        })
    }

    /// Lower frame bound for the ambient space (zero unless the family spans it).
    pub fn ambient_lower_bound(&self) -> f64 {
        if self.is_frame_for_ambient {
            self.lower_bound
        } else {
            0.0
        }
    }
}

/// Cross-Gram matrix `G(g, h)[i][j] = <g_i, h_j>`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossGram(CMatrix);

impl CrossGram {
    pub fn new(g: &VectorFamily, h: &VectorFamily) -> Result<Self> {
        if g.dim() != h.dim() {
            return Err(Error::ShapeMismatch(format!(
                "cross-Gram of families in C^{} and C^{}",
                g.dim(),
                h.dim()
            )));
        }
        Ok(Self(g.synthesis.transpose() * conj(&h.synthesis)))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{inner, ONE, ZERO};

    fn e(n: usize, k: usize) -> CVector {
        let mut v = CVector::zeros(n);
        v[k] = ONE;
        v
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn mercedes_benz_is_tight_not_riesz() {
        let s = 3f64.sqrt() / 2.0;
        let members = [
            CVector::from_vec(vec![ONE, ZERO]),
            CVector::from_vec(vec![C64::from(-0.5), C64::from(s)]),
            CVector::from_vec(vec![C64::from(-0.5), C64::from(-s)]),
        ];
        let f = VectorFamily::new(2, &members, "mb").unwrap();
        let a = f.analyze(&tol()).unwrap();
        assert!(a.is_tight && a.is_frame_for_ambient);
        assert!((a.lower_bound - 1.5).abs() < 1e-12 && (a.upper_bound - 1.5).abs() < 1e-12);
        assert!(!a.is_riesz_sequence);
        assert_eq!(a.kernel_dim, 1);
    }

    #[test]
    fn repeated_vector_frame_sequence() {
        let f = VectorFamily::new(2, &[e(2, 0), e(2, 0)], "rep").unwrap();
        let a = f.analyze(&tol()).unwrap();
        assert_eq!(a.span_dim, 1);
        assert_eq!(a.deficit, 1);
        assert!(!a.is_frame_for_ambient && !a.is_riesz_sequence);
    }

    #[test]
    fn zero_member_breaks_riesz() {
        let f = VectorFamily::new(2, &[e(2, 0), CVector::zeros(2)], "z").unwrap();
        assert!(!f.analyze(&tol()).unwrap().is_riesz_sequence);
    }

    #[test]
    fn onb_flags() {
        let f = VectorFamily::new(2, &[e(2, 0), e(2, 1)], "onb").unwrap();
        let a = f.analyze(&tol()).unwrap();
        assert!(a.is_onb && a.is_riesz_basis && a.is_parseval);
    }

    #[test]
    fn zero_family_has_empty_span() {
        let f = VectorFamily::new(2, &[CVector::zeros(2)], "0").unwrap();
        assert_eq!(f.analyze(&tol()).unwrap_err(), Error::EmptySpan);
        assert_eq!(f.parseval_tighten(&tol()).unwrap_err(), Error::EmptySpan);
    }

    #[test]
    fn canonical_dual_of_scaled_basis() {
        let f = VectorFamily::new(
            2,
            &[e(2, 0) * C64::from(2.0), e(2, 1)],
            "s",
        )
        .unwrap();
        let d = f.canonical_dual(&tol()).unwrap();
        assert!((d.member(0) - e(2, 0) * C64::from(0.5)).norm() < 1e-14);
        assert!((d.member(1) - e(2, 1)).norm() < 1e-14);
    }

    #[test]
    fn tighten_repeated_e1() {
        let f = VectorFamily::new(2, &[e(2, 0), e(2, 0)], "r").unwrap();
        let p = f.parseval_tighten(&tol()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((p.member(0) - e(2, 0) * C64::from(h)).norm() < 1e-14);
        assert!(p.analyze(&tol()).unwrap().is_parseval_for_span);
    }

    #[test]
    fn projection_onto_coordinate_span() {
        let f = VectorFamily::new(4, &[e(4, 0), e(4, 2)], "w").unwrap();
        let p = f.project_onto_span(&e(4, 1), &tol()).unwrap();
        assert!(p.norm() < 1e-14);
        let p = f.project_onto_span(&(e(4, 0) + e(4, 1)), &tol()).unwrap();
        assert!((p - e(4, 0)).norm() < 1e-14);
    }

    #[test]
    fn cross_gram_convention() {
        let i = C64::new(0.0, 1.0);
        let g = VectorFamily::new(2, &[e(2, 0) * i], "g").unwrap();
        let h = VectorFamily::new(2, &[e(2, 0)], "h").unwrap();
        let gr = CrossGram::new(&g, &h).unwrap();
        assert_eq!(gr.entry(0, 0), inner(&g.member(0), &h.member(0)));
        assert_eq!(gr.entry(0, 0), i);
    }

    #[test]
    fn json_round_trip() {
        let f = VectorFamily::new(2, &[e(2, 0) * C64::new(1.0, -2.0), e(2, 1)], "x").unwrap();
        let back = VectorFamily::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn json_rejects_ragged() {
        let text = r#"{"dim":2,"vectors":[[[1,0]]],"label":"bad"}"#;
        assert!(matches!(VectorFamily::from_json(text), Err(Error::ShapeMismatch(_))));
    }
}
