//! Seeded random matrices for tests, experiments and the explorer.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::frames::VectorFamily;
use crate::numerics::{conj, orthogonal_complement_basis, svd_rank_nullspace, CMatrix, Tolerance, C64};
use crate::rduality::canonical_parseval_v;

/// RNG for trial `index` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn gaussian(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-distributed unitary.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> CMatrix {
    let qr = gaussian_matrix(rng, n, n).qr();
    let (mut q, r) = qr.unpack();
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        let mut col = q.column_mut(k);
        col *= phase;
    }
    q
}

/// `n x m` matrix with orthonormal rows: a random Parseval frame of `m` vectors for `C^n`.
pub fn random_parseval(rng: &mut impl Rng, n: usize, m: usize) -> CMatrix {
    assert!(n <= m, "a Parseval frame for C^{n} needs at least {n} vectors");
    random_unitary(rng, m).rows(0, n).into_owned()
}

/// `rows x cols` with orthonormal columns spanning a random subspace of the column space of `basis`.
pub fn random_subspace(rng: &mut impl Rng, basis: &CMatrix, dim: usize) -> CMatrix {
    assert!(dim <= basis.ncols());
    let rot = random_unitary(rng, basis.ncols());
    basis * rot.columns(0, dim)
}

/// Random `n x m` matrix of rank `r`.
pub fn random_rank(rng: &mut impl Rng, n: usize, m: usize, r: usize) -> CMatrix {
    gaussian_matrix(rng, n, r) * gaussian_matrix(rng, r, m)
}

/// A random `(f, u, v)` with `u` and `v` Parseval for `C^n`.
#[derive(Debug, Clone)]
pub struct Triple {
    pub f: VectorFamily,
    pub u: VectorFamily,
    pub v: VectorFamily,
}

/// `f` a random frame of `m` vectors for `C^n`, `u` random Parseval and `v` the canonical choice,
/// so that `w_j = sum_i <f_i, u_j> v_i` is a weak R-dual of `f`.
pub fn canonical_triple(rng: &mut impl Rng, n: usize, m: usize, tol: &Tolerance) -> Result<Triple> {
    let f = VectorFamily::from_synthesis(gaussian_matrix(rng, n, m), "f")?;
    let u = VectorFamily::from_synthesis(random_parseval(rng, n, m), "u")?;
    let v = canonical_parseval_v(&f, tol)?.v;
    Ok(Triple { f, u, v })
}

/// Like [`canonical_triple`] but `f` has rank `n - d`, so the weak R-dual misses `d` dimensions.
///
/// `Ker T_v` is the conjugate of a random `(m - n)`-dimensional subspace of `Ker T_f`.
pub fn deficient_triple(rng: &mut impl Rng, n: usize, m: usize, d: usize, tol: &Tolerance) -> Result<Triple> {
    assert!(n <= m && d <= n, "need n <= m and d <= n");
    let t_f = random_rank(rng, n, m, n - d);
    let kernel = svd_rank_nullspace(&t_f, tol)?.null_basis;
    let k = random_subspace(rng, &kernel, m - n);
    let c = orthogonal_complement_basis(&conj(&k), tol)?;
    let t_v = random_unitary(rng, n) * c.adjoint();
    Ok(Triple {
        f: VectorFamily::from_synthesis(t_f, "f")?,
        u: VectorFamily::from_synthesis(random_parseval(rng, n, m), "u")?,
        v: VectorFamily::from_synthesis(t_v, "v")?,
    })
}

/// Positive definite `n x n` matrix with the given spectrum and random eigenvectors.
pub fn with_spectrum(rng: &mut impl Rng, spectrum: &[f64]) -> CMatrix {
    let q = random_unitary(rng, spectrum.len());
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        spectrum.len(),
        spectrum.iter().map(|&l| C64::from(l)),
    ));
    &q * d * q.adjoint()
}
