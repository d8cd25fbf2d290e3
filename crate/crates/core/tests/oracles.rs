//! Library results against direct, loop-by-loop computations.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rdual::gabor::{adjoint_system, gabor_system, GaborLattice};
use rdual::numerics::{psd_inverse_sqrt, CMatrix, CVector, C64};
use rdual::rduality::{
    check_reproducing_condition, compute_y, cross_gram, weak_r_dual, y_bounds_check,
};
use rdual::sampling::{canonical_triple, gaussian_matrix, trial_rng, with_spectrum};
use rdual::{Tolerance, VectorFamily};

fn family(cols: &[&[f64]]) -> VectorFamily {
    let n = cols[0].len();
    let members: Vec<CVector> = cols
        .iter()
        .map(|c| CVector::from_iterator(n, c.iter().map(|&x| C64::from(x))))
        .collect();
    VectorFamily::new(n, &members, "").unwrap()
}

fn naive_inner(x: &CVector, y: &CVector) -> C64 {
    let mut s = C64::new(0.0, 0.0);
    for k in 0..x.len() {
        s += x[k] * y[k].conj();
    }
    s
}

#[test]
fn cross_gram_entries() {
    let mut rng = trial_rng(11, 0);
    let g = VectorFamily::from_synthesis(gaussian_matrix(&mut rng, 4, 6), "g").unwrap();
    let h = VectorFamily::from_synthesis(gaussian_matrix(&mut rng, 4, 6), "h").unwrap();
    let gram = cross_gram(&g, &h).unwrap();
    for i in 0..6 {
        for j in 0..6 {
            let expected = naive_inner(&g.member(i), &h.member(j));
            assert!((gram.entry(i, j) - expected).norm() < 1e-12);
        }
    }
}

#[test]
fn synthesis_by_loops() {
    let tol = Tolerance::default();
    let mut rng = trial_rng(12, 0);
    let t = canonical_triple(&mut rng, 3, 5, &tol).unwrap();
    let w = weak_r_dual(&t.f, &t.u, &t.v, &tol).unwrap().w;
    for j in 0..5 {
        let mut expected = CVector::zeros(3);
        for i in 0..5 {
            expected += t.v.member(i) * naive_inner(&t.f.member(i), &t.u.member(j));
        }
        assert!((w.member(j) - expected).norm() < 1e-12);
    }
}

#[test]
fn y_sequence_by_loops() {
    let tol = Tolerance::default();
    let mut rng = trial_rng(13, 0);
    let f = VectorFamily::from_synthesis(gaussian_matrix(&mut rng, 3, 5), "f").unwrap();
    let u = VectorFamily::from_synthesis(gaussian_matrix(&mut rng, 3, 5), "u").unwrap();
    let w = VectorFamily::from_synthesis(gaussian_matrix(&mut rng, 3, 5), "w").unwrap();
    let s_inv = w.frame_operator().try_inverse().unwrap();
    let y = compute_y(&w, &f, &u, &tol).unwrap();
    for i in 0..5 {
        let mut expected = CVector::zeros(3);
        for k in 0..5 {
            expected += &s_inv * w.member(k) * naive_inner(&u.member(k), &f.member(i));
        }
        assert!((y.member(i) - expected).norm() < 1e-10);
    }
}

#[test]
fn y_of_repeated_coordinate_family() {
    let tol = Tolerance::default();
    let s = FRAC_1_SQRT_2;
    let f = family(&[&[1.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
    let u = family(&[&[s, 0.0], &[s, 0.0], &[0.0, 1.0]]);
    let y = compute_y(&f, &f, &u, &tol).unwrap();
    assert!((y.synthesis_matrix() - u.synthesis_matrix()).norm() < 1e-12);

    let a = y.analyze(&tol).unwrap();
    assert!((a.lower_bound - 1.0).abs() < 1e-12 && (a.upper_bound - 1.0).abs() < 1e-12);
    let b = y_bounds_check(&f, &f, &u, &tol).unwrap();
    assert!(b.sandwich_holds && b.span_equal);
    assert!((b.predicted_lower - 0.5).abs() < 1e-12 && (b.predicted_upper - 2.0).abs() < 1e-12);
    assert!(check_reproducing_condition(&u, &f, &tol).unwrap().value < 1e-12);
}

#[test]
fn gabor_members_by_formula() {
    let mut rng = trial_rng(14, 0);
    let g = gaussian_matrix(&mut rng, 12, 1).column(0).into_owned();
    for lat in [GaborLattice::new(12, 2, 3).unwrap(), GaborLattice::new(12, 4, 3).unwrap()] {
        let (n, a, b) = (lat.n, lat.a, lat.b);
        let sys = gabor_system(lat, &g).unwrap();
        for m in 0..n / b {
            for k in 0..n / a {
                let member = sys.family.member(m * (n / a) + k);
                for t in 0..n {
                    let phase = C64::from_polar(1.0, 2.0 * PI * (m * b * t) as f64 / n as f64);
                    let expected = phase * g[(t + n - (k * a) % n) % n];
                    assert!((member[t] - expected).norm() < 1e-12);
                }
            }
        }
        let adj = adjoint_system(&sys).unwrap();
        let kappa = (n as f64 / (a * b) as f64).sqrt();
        assert!((adj.kappa - kappa).abs() < 1e-15);
        for m in 0..a {
            for k in 0..b {
                let member = adj.family.member(m * b + k);
                for t in 0..n {
                    let phase = C64::from_polar(kappa, 2.0 * PI * (m * t) as f64 / a as f64);
                    let expected = phase * g[(t + n - (k * n / b) % n) % n];
                    assert!((member[t] - expected).norm() < 1e-12);
                }
            }
        }
    }
}

/// Coupled Newton-Schulz iteration for `A^{-1/2}`.
fn newton_schulz_inverse_sqrt(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let c = a.norm();
    let eye = CMatrix::identity(n, n);
    let mut y = a / C64::from(c);
    let mut z = eye.clone();
    for _ in 0..100 {
        let t = (&eye * C64::from(3.0) - &z * &y) * C64::from(0.5);
        y = &y * &t;
        z = &t * &z;
    }
    z / C64::from(c.sqrt())
}

#[test]
fn inverse_square_root_against_iteration() {
    let tol = Tolerance::default();
    let mut rng = trial_rng(15, 0);
    for spectrum in [vec![1.0, 2.0, 3.0, 4.0], vec![0.1, 0.5, 5.0], vec![2.0, 2.0, 2.0]] {
        let a = with_spectrum(&mut rng, &spectrum);
        let expected = newton_schulz_inverse_sqrt(&a);
        let got = psd_inverse_sqrt(&a, &tol).unwrap();
        assert!((got - expected).norm() < 1e-9);
    }
}

#[test]
fn frame_bounds_of_repeated_basis() {
    let tol = Tolerance::default();
    // {e1, e1, e2}: S = diag(2, 1).
    let f = family(&[&[1.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
    let a = f.analyze(&tol).unwrap();
    assert_eq!((a.lower_bound, a.upper_bound), (1.0, 2.0));
    assert_eq!(a.kernel_dim, 1);
    let dual = f.canonical_dual(&tol).unwrap();
    let expected = family(&[&[0.5, 0.0], &[0.5, 0.0], &[0.0, 1.0]]);
    assert!((dual.synthesis_matrix() - expected.synthesis_matrix()).norm() < 1e-12);
}
