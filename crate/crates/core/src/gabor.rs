//! Gabor systems on the cyclic group `Z_N` and their adjoint systems.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::frames::VectorFamily;
use crate::numerics::{conj, hermitian_eig, psd_inverse_sqrt, CMatrix, CVector, Eigen, Tolerance, C64};
use crate::rduality::{
    characterize, check_gram_condition, compute_y, construct_onb_v, construct_parseval_v, dimension_report, find_witness,
    verify_witness, DimensionReport, Residual, Verdict, WeakRDualCertificate, WitnessSearch,
    SCHEMA_VERSION,
};
use crate::sampling;

/// Time step `a` and frequency step `b` on `Z_N`, both dividing `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GaborLattice {
    pub n: usize,
    pub a: usize,
    pub b: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Density {
    /// `ab < N`: more members than dimensions.
    Redundant,
    Critical,
    /// `ab > N`: too few members to span.
    Sparse,
}

impl GaborLattice {
    pub fn new(n: usize, a: usize, b: usize) -> Result<Self> {
        if n == 0 || a == 0 || b == 0 {
            return Err(Error::BadLattice(format!("N={n}, a={a}, b={b} must be positive")));
        }
        if !n.is_multiple_of(a) || !n.is_multiple_of(b) {
            return Err(Error::BadLattice(format!("a={a} and b={b} must divide N={n}")));
        }
        Ok(Self { n, a, b })
    }

    /// `(N/a)(N/b)`.
    pub fn members(&self) -> usize {
        (self.n / self.a) * (self.n / self.b)
    }

    /// Number of members of the adjoint system, `ab`.
    pub fn adjoint_members(&self) -> usize {
        self.a * self.b
    }

    /// `N / (ab)`.
    pub fn redundancy(&self) -> f64 {
        self.n as f64 / (self.a * self.b) as f64
    }

    pub fn density(&self) -> Density {
        match (self.a * self.b).cmp(&self.n) {
            std::cmp::Ordering::Less => Density::Redundant,
            std::cmp::Ordering::Equal => Density::Critical,
            std::cmp::Ordering::Greater => Density::Sparse,
        }
    }

    /// All lattices on `Z_N`.
    pub fn all(n: usize) -> Vec<Self> {
        let divisors: Vec<usize> = (1..=n).filter(|&d| n.is_multiple_of(d)).collect();
        divisors
            .iter()
            .flat_map(|&a| divisors.iter().map(move |&b| Self { n, a, b }))
            .collect()
    }
}

fn cyclic_shift_modulate(window: &CVector, shift: usize, freq: f64, scale: f64) -> CVector {
    let n = window.len();
    CVector::from_fn(n, |t, _| {
        let phase = C64::from_polar(scale, 2.0 * PI * freq * t as f64);
        phase * window[(t + n - shift % n) % n]
    })
}

#[derive(Debug, Clone)]
pub struct GaborSystem {
    pub lattice: GaborLattice,
    pub window: CVector,
    /// `g_{m,k}[t] = e^{2 pi i m b t / N} g[t - k a]`, index `m (N/a) + k`.
    pub family: VectorFamily,
}

pub fn gabor_system(lattice: GaborLattice, window: &CVector) -> Result<GaborSystem> {
    let GaborLattice { n, a, b } = lattice;
    if window.len() != n {
        return Err(Error::BadLattice(format!("window has length {}, N={n}", window.len())));
    }
    if window.norm() <= Tolerance::default().abs_floor {
        return Err(Error::ZeroWindow);
    }
    let members: Vec<CVector> = (0..n / b)
        .flat_map(|m| (0..n / a).map(move |k| (m, k)))
        .map(|(m, k)| cyclic_shift_modulate(window, k * a, (m * b) as f64 / n as f64, 1.0))
        .collect();
    let family = VectorFamily::new(n, &members, format!("gabor(N={n},a={a},b={b})"))?;
    Ok(GaborSystem {
        lattice,
        window: window.clone(),
        family,
    })
}

#[derive(Debug, Clone)]
pub struct AdjointSystem {
    /// `sqrt(N/(ab))`.
    pub kappa: f64,
    /// `kappa e^{2 pi i m t / a} g[t - k N/b]`, index `m b + k`.
    pub family: VectorFamily,
}

pub fn adjoint_system(sys: &GaborSystem) -> Result<AdjointSystem> {
    let GaborLattice { n, a, b } = sys.lattice;
    let kappa = (n as f64 / (a * b) as f64).sqrt();
    let members: Vec<CVector> = (0..a)
        .flat_map(|m| (0..b).map(move |k| (m, k)))
        .map(|(m, k)| cyclic_shift_modulate(&sys.window, k * (n / b), m as f64 / a as f64, kappa))
        .collect();
    let family = VectorFamily::new(n, &members, format!("adjoint(N={n},a={a},b={b})"))?;
    Ok(AdjointSystem { kappa, family })
}

#[derive(Debug, Clone, Serialize)]
pub struct DualityReport {
    pub schema_version: u32,
    pub lattice: GaborLattice,
    /// Extreme eigenvalues of the frame operator of the system.
    pub frame_bounds: (f64, f64),
    /// Extreme eigenvalues of the Gram matrix of the adjoint system.
    pub riesz_bounds: (f64, f64),
    pub is_frame: bool,
    pub is_riesz: bool,
    pub bounds_agree: bool,
    pub holds: bool,
}

/// Compares the frame bounds of a system with the Riesz bounds of its adjoint.
pub fn duality_check(sys: &GaborSystem, tol: &Tolerance) -> Result<DualityReport> {
    let adj = adjoint_system(sys)?;
    let fa = sys.family.analyze(tol)?;
    let aa = adj.family.analyze(tol)?;
    let frame_bounds = (fa.spectrum[0].max(0.0), fa.upper_bound);
    let riesz_bounds = if sys.lattice.adjoint_members() <= sys.lattice.n {
        let t = adj.family.synthesis_matrix();
        let g = hermitian_eig(&(t.adjoint() * t), tol)?;
        (g.min().max(0.0), g.max())
    } else {
        // More members than dimensions: the Gram matrix is singular and shares
        // its nonzero spectrum with the frame operator.
        (0.0, aa.upper_bound)
    };
    let scale = frame_bounds.1.max(riesz_bounds.1);
    let bounds_agree = (frame_bounds.0 - riesz_bounds.0).abs() <= tol.rel_eps * scale
        && (frame_bounds.1 - riesz_bounds.1).abs() <= tol.rel_eps * scale;
    let is_frame = fa.is_frame_for_ambient;
    let is_riesz = aa.is_riesz_sequence;
    Ok(DualityReport {
        schema_version: SCHEMA_VERSION,
        lattice: sys.lattice,
        frame_bounds,
        riesz_bounds,
        is_frame,
        is_riesz,
        bounds_agree,
        holds: bounds_agree && is_frame == is_riesz,
    })
}

/// `S^{-1/2} g`: the window of the canonical Parseval system.
pub fn canonical_tight_window(lattice: GaborLattice, window: &CVector, tol: &Tolerance) -> Result<CVector> {
    let sys = gabor_system(lattice, window)?;
    let a = sys.family.analyze(tol)?;
    if !a.is_frame_for_ambient {
        return Err(Error::HypothesisFailed("the system is not a frame".into()));
    }
    Ok(psd_inverse_sqrt(&sys.family.frame_operator(), tol)? * window)
}

/// `{e_0, ..., e_{k-1}}` followed by zero vectors, `count` members in `C^n`.
pub fn coordinate_u(n: usize, k: usize, count: usize) -> Result<VectorFamily> {
    if k > n || k > count {
        return Err(Error::ShapeMismatch(format!("{k} coordinate vectors in C^{n} with {count} slots")));
    }
    let mut t = CMatrix::zeros(n, count);
    for j in 0..k {
        t[(j, j)] = C64::from(1.0);
    }
    VectorFamily::from_synthesis(t, "u")
}

#[derive(Debug, Clone, Serialize)]
pub struct TightPipeline {
    pub schema_version: u32,
    pub lattice: GaborLattice,
    /// Adjoint members followed by this many zero vectors.
    pub padding: usize,
    pub adjoint_is_riesz: bool,
    pub dimensions: DimensionReport,
    pub v_is_onb: bool,
    pub certificate: WeakRDualCertificate,
    #[serde(skip)]
    pub w: VectorFamily,
    #[serde(skip)]
    pub u: VectorFamily,
    #[serde(skip)]
    pub v: VectorFamily,
}

/// Makes the adjoint of a redundant tight system a weak R-dual of it.
///
/// The adjoint has `ab` members and the system `(N/a)(N/b)`, so the adjoint is
/// padded with zero vectors to a common index set. Unless `u` is given it is
/// `{e_0, ..., e_{ab-1}}` on the adjoint slots and zero on the padding.
pub fn tight_gabor_weak_r_dual(
    sys: &GaborSystem,
    u: Option<&VectorFamily>,
    tol: &Tolerance,
) -> Result<TightPipeline> {
    let lat = sys.lattice;
    if lat.density() == Density::Critical {
        return Err(Error::CriticalDensity);
    }
    let fa = sys.family.analyze(tol)?;
    if !(fa.is_frame_for_ambient && fa.is_tight) {
        return Err(Error::NotTight);
    }
    let adj = adjoint_system(sys)?;
    let adjoint_is_riesz = adj.family.analyze(tol)?.is_riesz_sequence;
    let count = lat.members();
    let w = adj.family.zero_padded(count)?.with_label("w");
    let u = match u {
        Some(u) => u.clone(),
        None => coordinate_u(lat.n, lat.adjoint_members(), count)?,
    };
    let f = &sys.family;
    let dimensions = dimension_report(&w, f, &u, tol)?;
    let v = construct_parseval_v(&w, f, &u, tol)?;
    let certificate = characterize(&w, f, &u, &v, tol)?;
    Ok(TightPipeline {
        schema_version: SCHEMA_VERSION,
        lattice: lat,
        padding: count - lat.adjoint_members(),
        adjoint_is_riesz,
        dimensions,
        v_is_onb: v.analyze(tol)?.is_onb,
        certificate,
        w,
        u,
        v,
    })
}

/// `u` induced by a conjugate-linear witness between the adjoint and the system
/// at critical density.
pub fn critical_u(sys: &GaborSystem, tol: &Tolerance) -> Result<VectorFamily> {
    if sys.lattice.density() != Density::Critical {
        return Err(Error::GateFailed("lattice is not at critical density".into()));
    }
    let w = adjoint_system(sys)?.family;
    let f = &sys.family;
    match find_witness(&w.frame_operator(), &f.frame_operator(), tol)? {
        WitnessSearch::Found { map, .. } => Ok(verify_witness(&map, &w, f, tol)?.u),
        WitnessSearch::NoWitness { gap, .. } => Err(Error::HypothesisFailed(format!(
            "frame operator spectra differ by {gap:.3e}"
        ))),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Promotion {
    pub is_r_dual: bool,
    pub certificate: WeakRDualCertificate,
    #[serde(skip)]
    pub v: VectorFamily,
}

/// Replaces `v` by an orthonormal basis when `w` is a Riesz sequence indexed like a basis.
pub fn promote_to_r_dual(
    w: &VectorFamily,
    f: &VectorFamily,
    u: &VectorFamily,
    tol: &Tolerance,
) -> Result<Promotion> {
    if w.len() != w.dim() {
        return Err(Error::GateFailed(format!(
            "{} members in C^{}: no orthonormal basis on this index set",
            w.len(),
            w.dim()
        )));
    }
    if !w.analyze(tol)?.is_riesz_sequence {
        return Err(Error::HypothesisFailed("w is not a Riesz sequence".into()));
    }
    let v = construct_onb_v(w, f, u, tol)?;
    let certificate = characterize(w, f, u, &v, tol)?;
    Ok(Promotion {
        is_r_dual: certificate.verdict == Verdict::RDual,
        certificate,
        v,
    })
}

// ---------------------------------------------------------------------------
// Explorer

#[derive(Debug, Clone)]
pub struct ExploreConfig {
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Skip lattices whose system has more members than this.
    pub max_members: usize,
    pub tol: Tolerance,
}

impl Default for ExploreConfig {
    fn default() -> Self {
        Self {
            dims: vec![4, 6, 8, 12, 16],
            trials: 32,
            seed: 0,
            max_members: 64,
            tol: Tolerance::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ExploreVerdict {
    WitnessFound,
    NoWitness,
    Gated,
    Tight,
}

#[derive(Debug, Clone, Serialize)]
pub struct CandidateRecord {
    pub name: &'static str,
    pub verdict: ExploreVerdict,
    pub note: String,
    pub gram_condition: Option<f64>,
    pub y_parseval: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub window_hash: String,
    pub frame_bounds: (f64, f64),
    pub frame_spectrum: Vec<f64>,
    pub adjoint_gram_spectrum: Vec<f64>,
    pub candidates: Vec<CandidateRecord>,
    pub verdict: ExploreVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExploreReport {
    pub schema_version: u32,
    pub seed: u64,
    pub dims: Vec<usize>,
    pub max_members: usize,
    /// Every lattice a trial may draw.
    pub corpus: Vec<GaborLattice>,
    pub counts: BTreeMap<ExploreVerdict, usize>,
    pub trials: Vec<TrialRecord>,
}

fn window_hash(window: &CVector) -> String {
    let mut h = Sha256::new();
    for z in window.iter() {
        h.update(z.re.to_le_bytes());
        h.update(z.im.to_le_bytes());
    }
    h.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Searches non-tight redundant Gabor frames for a `u` that makes the padded
/// adjoint a weak R-dual.
///
/// Trials are independent: trial `i` draws from a stream keyed by `(seed, i)`,
/// so the report is identical across runs and thread counts.
pub fn open_problem_explore(cfg: &ExploreConfig) -> Result<ExploreReport> {
    let mut lattices: Vec<GaborLattice> = Vec::new();
    for &n in &cfg.dims {
        if n < 2 {
            return Err(Error::BadLattice(format!("N={n} has no redundant lattice")));
        }
        lattices.extend(
            GaborLattice::all(n)
                .into_iter()
                .filter(|l| l.density() == Density::Redundant && l.members() <= cfg.max_members),
        );
    }
    if lattices.is_empty() {
        return Err(Error::BadLattice("no redundant lattice within the member limit".into()));
    }
    let trials: Vec<TrialRecord> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| explore_trial(i, &lattices, cfg))
        .collect::<Result<_>>()?;
    let mut counts = BTreeMap::new();
    for t in &trials {
        *counts.entry(t.verdict).or_insert(0) += 1;
    }
    Ok(ExploreReport {
        schema_version: SCHEMA_VERSION,
        seed: cfg.seed,
        dims: cfg.dims.clone(),
        max_members: cfg.max_members,
        corpus: lattices,
        counts,
        trials,
    })
}

fn explore_trial(index: usize, lattices: &[GaborLattice], cfg: &ExploreConfig) -> Result<TrialRecord> {
    let tol = &cfg.tol;
    let mut rng = sampling::trial_rng(cfg.seed, index as u64);
    let lat = lattices[rng.random_range(0..lattices.len())];
    let window = sampling::gaussian_matrix(&mut rng, lat.n, 1).column(0).into_owned();
    let sys = gabor_system(lat, &window)?;
    let adj = adjoint_system(&sys)?;
    let fa = sys.family.analyze(tol)?;
    let t_adj = adj.family.synthesis_matrix();
    let gram = hermitian_eig(&(t_adj.adjoint() * t_adj), tol)?;

    let mut record = TrialRecord {
        trial: index,
        n: lat.n,
        a: lat.a,
        b: lat.b,
        window_hash: window_hash(&window),
        frame_bounds: (fa.spectrum[0].max(0.0), fa.upper_bound),
        frame_spectrum: fa.spectrum.clone(),
        adjoint_gram_spectrum: gram.values.clone(),
        candidates: Vec::new(),
        verdict: ExploreVerdict::Gated,
    };
    if fa.is_tight && fa.is_frame_for_ambient {
        record.verdict = ExploreVerdict::Tight;
        return Ok(record);
    }
    if !fa.is_frame_for_ambient {
        record.candidates.push(gated("system", "the system is not a frame".into()));
        return Ok(record);
    }

    let count = lat.members();
    let k = lat.adjoint_members();
    let w = adj.family.zero_padded(count)?;
    let f = &sys.family;

    record.candidates.push(gated(
        "ambient-witness",
        format!("the adjoint spans {k} < {} dimensions", lat.n),
    ));

    let s_w = w.frame_operator();
    let conj_u = psd_inverse_sqrt(&s_w, tol).map(|r| conj(&(r * w.synthesis_matrix())));
    record.candidates.push(match conj_u {
        Ok(t) => evaluate_candidate("conjugate-adjoint", &w, f, &VectorFamily::from_synthesis(t, "u")?, tol)?,
        Err(e) => gated("conjugate-adjoint", e.to_string()),
    });

    let frame_eig = hermitian_eig(&f.frame_operator(), tol)?;
    record.candidates.push(match spectral_u(&frame_eig, &gram, count, tol)? {
        Some(u) => evaluate_candidate("spectral-compression", &w, f, &u, tol)?,
        None => CandidateRecord {
            name: "spectral-compression",
            verdict: ExploreVerdict::NoWitness,
            note: "adjoint Gram spectrum is not contained in the frame spectrum".into(),
            gram_condition: None,
            y_parseval: None,
        },
    });

    let q = sampling::random_parseval(&mut rng, k, lat.n).adjoint();
    let mut t = CMatrix::zeros(lat.n, count);
    t.columns_mut(0, k).copy_from(&q);
    record
        .candidates
        .push(evaluate_candidate("random-orthonormal", &w, f, &VectorFamily::from_synthesis(t, "u")?, tol)?);

    record.verdict = if record.candidates.iter().any(|c| c.verdict == ExploreVerdict::WitnessFound) {
        ExploreVerdict::WitnessFound
    } else if record.candidates.iter().any(|c| c.verdict == ExploreVerdict::NoWitness) {
        ExploreVerdict::NoWitness
    } else {
        ExploreVerdict::Gated
    };
    Ok(record)
}

fn gated(name: &'static str, note: String) -> CandidateRecord {
    CandidateRecord {
        name,
        verdict: ExploreVerdict::Gated,
        note,
        gram_condition: None,
        y_parseval: None,
    }
}

fn evaluate_candidate(
    name: &'static str,
    w: &VectorFamily,
    f: &VectorFamily,
    u: &VectorFamily,
    tol: &Tolerance,
) -> Result<CandidateRecord> {
    let mut rec = CandidateRecord {
        name,
        verdict: ExploreVerdict::NoWitness,
        note: String::new(),
        gram_condition: None,
        y_parseval: None,
    };
    let v = match construct_parseval_v(w, f, u, tol) {
        Ok(v) => v,
        Err(Error::HypothesisFailed(msg)) => {
            rec.note = msg;
            let (g, y) = characterize_residuals(w, f, u, tol)?;
            rec.gram_condition = Some(g.value);
            rec.y_parseval = Some(y.value);
            return Ok(rec);
        }
        Err(e @ (Error::NotParseval { .. } | Error::DimensionCase { .. })) => {
            rec.note = e.to_string();
            return Ok(rec);
        }
        Err(e) => return Err(e),
    };
    let cert = characterize(w, f, u, &v, tol)?;
    rec.gram_condition = Some(cert.gram_condition.value);
    rec.y_parseval = Some(cert.y_parseval.value);
    if cert.verdict.is_weak_r_dual() {
        rec.verdict = ExploreVerdict::WitnessFound;
        rec.note = "certificate passes".into();
    } else {
        rec.note = "certificate fails".into();
    }
    Ok(rec)
}

fn characterize_residuals(
    w: &VectorFamily,
    f: &VectorFamily,
    u: &VectorFamily,
    tol: &Tolerance,
) -> Result<(Residual, Residual)> {
    let gram_condition = check_gram_condition(w, f, u, tol)?;
    let y = compute_y(w, f, u, tol)?;
    let value = (y.frame_operator() - w.span_projection(tol)?).norm();
    Ok((gram_condition, Residual::new(value, tol.threshold(1.0))))
}

/// Orthonormal `u` on the adjoint slots with `T_u^* S_f T_u = conj(G)`, `G` the
/// adjoint Gram matrix, when the Gram spectrum embeds in the frame spectrum.
fn spectral_u(
    frame: &Eigen,
    gram: &Eigen,
    count: usize,
    tol: &Tolerance,
) -> Result<Option<VectorFamily>> {
    let n = frame.values.len();
    let k = gram.values.len();
    let cut = tol.threshold(frame.max());
    let mut used = vec![false; n];
    let mut pick = Vec::with_capacity(k);
    for &mu in &gram.values {
        match (0..n).find(|&i| !used[i] && (frame.values[i] - mu).abs() <= cut) {
            Some(i) => {
                used[i] = true;
                pick.push(i);
            }
            None => return Ok(None),
        }
    }
    let v_sel = CMatrix::from_fn(n, k, |r, c| frame.vectors[(r, pick[c])]);
    let t_u = v_sel * gram.vectors.transpose();
    let mut t = CMatrix::zeros(n, count);
    t.columns_mut(0, k).copy_from(&t_u);
    Ok(Some(VectorFamily::from_synthesis(t, "u")?))
}
