//! End-to-end acceptance run: one line per criterion, non-zero exit if any fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::Rng;

use rdual::fixtures;
use rdual::gabor::{
    adjoint_system, canonical_tight_window, critical_u, duality_check, gabor_system,
    promote_to_r_dual, tight_gabor_weak_r_dual, Density, GaborLattice,
};
use rdual::numerics::{identity, max_column_distance, psd_inverse_sqrt, CVector, C64};
use rdual::rduality::{
    canonical_parseval_v, characterize, check, construct_parseval_v, cross_gram, find_witness,
    reproducing_check, transfer_via_coisometry, verify_witness, weak_r_dual, y_bounds_check,
    Verdict, WitnessSearch,
};
use rdual::sampling::{
    canonical_triple, deficient_triple, gaussian_matrix, random_parseval, random_unitary,
    trial_rng, with_spectrum,
};
use rdual::{Error, Tolerance, VectorFamily};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn tol() -> Tolerance {
    Tolerance::default()
}

fn family(t: rdual::CMatrix, label: &str) -> VectorFamily {
    VectorFamily::from_synthesis(t, label).unwrap()
}

fn window(rng: &mut impl Rng, n: usize) -> CVector {
    gaussian_matrix(rng, n, 1).column(0).into_owned()
}

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn definition_round_trip() -> Outcome {
    let tol = tol();
    let (mut certified, mut rejected, mut agreed, mut worst) = (0, 0, 0, 0.0f64);
    let runs = 200usize;
    for i in 0..runs {
        let mut rng = trial_rng(1, i as u64);
        let n = rng.random_range(2..=6);
        let m = n + rng.random_range(1..=4);
        let mut t = canonical_triple(&mut rng, n, m, &tol).unwrap();
        if i % 2 == 1 {
            t.f = t.f.parseval_tighten(&tol).unwrap();
            t.v = canonical_parseval_v(&t.f, &tol).unwrap().v;
        }
        let r = weak_r_dual(&t.f, &t.u, &t.v, &tol).unwrap();
        let c = &r.certificate;
        worst = worst.max(c.commutation.value);
        if c.verdict == Verdict::WeakRDual && c.commutation.value <= 1e-8 {
            certified += 1;
        }
        let ch = characterize(&r.w, &t.f, &t.u, &t.v, &tol).unwrap();
        agreed += usize::from(ch.verdict.is_weak_r_dual() == c.verdict.is_weak_r_dual());

        let noise = gaussian_matrix(&mut rng, n, m) * C64::from(1e-3);
        let v2 = family(t.v.synthesis_matrix() + noise, "v").parseval_tighten(&tol).unwrap();
        let d = check(&r.w, &t.f, &t.u, &v2, &tol).unwrap();
        rejected += usize::from(d.verdict == Verdict::NotWeakRDual);
        let ch = characterize(&r.w, &t.f, &t.u, &v2, &tol).unwrap();
        agreed += usize::from(ch.verdict == d.verdict);
    }
    verdict(
        certified == runs && rejected == runs && agreed == 2 * runs,
        format!(
            "{certified}/{runs} certified (max commutation {worst:.1e}), {rejected}/{runs} perturbations rejected, {agreed}/{} agree",
            2 * runs
        ),
    )
}

fn canonical_v() -> Outcome {
    let tol = tol();
    let (mut good, mut min_gap, mut worst) = (0, f64::INFINITY, 0.0f64);
    for i in 0..100 {
        let mut rng = trial_rng(2, i);
        let n = rng.random_range(2..=6);
        let m = n + rng.random_range(1..=4);
        let f = family(gaussian_matrix(&mut rng, n, m), "f");
        let c = canonical_parseval_v(&f, &tol).unwrap();
        let g = cross_gram(&c.v, &c.v).unwrap().into_matrix();
        let gap = (g - identity(m)).norm();
        let res = (c.v.frame_operator() - identity(n)).norm();
        min_gap = min_gap.min(gap);
        worst = worst.max(res);
        good += usize::from(gap > 1e-3 && res <= 1e-9 && !c.riesz_basis_input);
    }
    let mut flagged = 0;
    for i in 0..20 {
        let mut rng = trial_rng(2, 1000 + i);
        let n = rng.random_range(2..=6);
        let f = family(gaussian_matrix(&mut rng, n, n), "f");
        let c = canonical_parseval_v(&f, &tol).unwrap();
        flagged += usize::from(c.riesz_basis_input && c.v.analyze(&tol).unwrap().is_onb);
    }
    verdict(
        good == 100 && flagged == 20,
        format!("100 redundant frames: {good} non-orthonormal Parseval (min |G-I| {min_gap:.2}, max residual {worst:.1e}); Riesz bases flagged {flagged}/20"),
    )
}

fn kernel_identity() -> Outcome {
    let tol = tol();
    let (mut total, mut good) = (0, 0);
    for i in 0..200 {
        let mut rng = trial_rng(3, i);
        let n = rng.random_range(2..=6);
        let m = n + rng.random_range(0..=4);
        let d = rng.random_range(0..n);
        let t = deficient_triple(&mut rng, n, m, d, &tol).unwrap();
        let c = weak_r_dual(&t.f, &t.u, &t.v, &tol).unwrap().certificate;
        if !c.verdict.is_weak_r_dual() {
            continue;
        }
        total += 1;
        let strict_ok = c.v_is_onb || c.deficit_w < c.ker_ty;
        good += usize::from(c.ker_ty == c.ker_tf && c.deficit_w <= c.ker_ty && strict_ok && c.deficit_w == d);
    }
    verdict(total == 200 && good == total, format!("{good}/{total} certificates with dim Ker T_y = dim Ker T_f and the deficit ordering"))
}

fn parseval_construction() -> Outcome {
    let tol = tol();
    let mut good = 0;
    for i in 0..50 {
        let mut rng = trial_rng(4, i);
        let n = rng.random_range(2..=6);
        let m = n + rng.random_range(1..=4);
        let d = rng.random_range(0..n);
        let t = deficient_triple(&mut rng, n, m, d, &tol).unwrap();
        let w = weak_r_dual(&t.f, &t.u, &t.v, &tol).unwrap().w;
        let v = construct_parseval_v(&w, &t.f, &t.u, &tol).unwrap();
        let c = characterize(&w, &t.f, &t.u, &v, &tol).unwrap();
        good += usize::from(c.verdict == Verdict::WeakRDual && !c.v_is_onb && c.deficit_w < c.ker_ty);
    }
    verdict(good == 50, format!("{good}/50 constructed v certified and not orthonormal"))
}

fn transfer() -> Outcome {
    let tol = tol();
    let (mut good, mut worst_u, mut worst_w) = (0, 0.0f64, 0.0f64);
    for i in 0..50 {
        let mut rng = trial_rng(5, i);
        let n = rng.random_range(2..=6);
        let m = n + rng.random_range(0..=4);
        let d = rng.random_range(0..n);
        let t = deficient_triple(&mut rng, n, m, d, &tol).unwrap();
        let p = weak_r_dual(&t.f, &t.u, &t.v, &tol).unwrap().w;
        let w = p.map(&random_unitary(&mut rng, n)).unwrap();
        let tr = transfer_via_coisometry(&w, &p, &t.f, &t.u, &t.v, &tol).unwrap();
        let eu = (&tr.map * tr.map.adjoint() - identity(n)).norm();
        let g_fu = cross_gram(&t.f, &t.u).unwrap().into_matrix();
        let ew = max_column_distance(w.synthesis_matrix(), &(tr.v.synthesis_matrix() * g_fu));
        worst_u = worst_u.max(eu);
        worst_w = worst_w.max(ew);
        good += usize::from(eu <= 1e-8 && ew <= 1e-8);
    }
    verdict(good == 50, format!("{good}/50 (max |UU*-I| {worst_u:.1e}, max synthesis error {worst_w:.1e})"))
}

fn witness() -> Outcome {
    let tol = tol();
    let (mut correct, mut verified, mut found, mut worst) = (0, 0, 0, 0.0f64);
    for i in 0..100 {
        let mut rng = trial_rng(6, i);
        let n = rng.random_range(1..=5);
        let m = n + rng.random_range(0..=3);
        let planted = i % 2 == 0;
        let spectrum: Vec<f64> = (0..n).map(|_| rng.random_range(0.2..4.0)).collect();
        let mut other = spectrum.clone();
        if !planted {
            let k = rng.random_range(0..n);
            other[k] *= 1.0 + rng.random_range(0.05..0.5);
        }
        // T = S^{1/2} P with P Parseval gives frame operator S.
        let s_w = psd_inverse_sqrt(&with_spectrum(&mut rng, &spectrum), &tol).unwrap();
        let s_f = psd_inverse_sqrt(&with_spectrum(&mut rng, &other), &tol).unwrap();
        let w = family(&s_w * random_parseval(&mut rng, n, m), "w");
        let f = family(&s_f * random_parseval(&mut rng, n, m), "f");
        let search = find_witness(&w.frame_operator(), &f.frame_operator(), &tol).unwrap();
        correct += usize::from(matches!(search, WitnessSearch::Found { .. }) == planted);
        if let Some(map) = search.map() {
            found += 1;
            let c = verify_witness(map, &w, &f, &tol).unwrap();
            let r = c
                .sw_residual
                .max(c.sf_residual)
                .max(c.u_parseval.value)
                .max(c.gram_condition.value)
                .max(c.y_parseval.value);
            worst = worst.max(r);
            verified += usize::from(c.holds && r <= 1e-8);
        }
    }
    verdict(
        correct == 100 && verified == found,
        format!("{correct}/100 searches decided correctly, {verified}/{found} witnesses verified (max residual {worst:.1e})"),
    )
}

fn y_sequence_suite() -> Outcome {
    let tol = tol();
    let mut reproducing = 0;
    let mut worst = 0.0f64;
    for i in 0..200 {
        let mut rng = trial_rng(7, i);
        let n = rng.random_range(1..=6);
        let m = n + rng.random_range(0..=4);
        let f = family(gaussian_matrix(&mut rng, n, m), "f");
        let u = family(random_parseval(&mut rng, n, m), "u");
        let v = family(random_parseval(&mut rng, n, m), "v");
        let r = reproducing_check(&f, &u, &v, &tol).unwrap();
        worst = worst.max(r.value);
        reproducing += usize::from(r.value <= 1e-9);
    }
    let mut sandwich = 0;
    for i in 0..100 {
        let mut rng = trial_rng(7, 1000 + i);
        let n = rng.random_range(1..=6);
        let f = family(gaussian_matrix(&mut rng, n, n), "f");
        let w = family(gaussian_matrix(&mut rng, n, n), "w");
        let u = family(random_unitary(&mut rng, n), "u");
        let b = y_bounds_check(&w, &f, &u, &tol).unwrap();
        let slack = 1e-8;
        let ok = b.span_equal
            && b.predicted_lower * (1.0 - slack) <= b.y_lower
            && b.y_lower <= b.y_upper
            && b.y_upper <= b.predicted_upper * (1.0 + slack);
        sandwich += usize::from(ok);
    }
    let example = fixtures::repro("3.3", &tol).unwrap();
    verdict(
        reproducing == 200 && sandwich == 100 && example.pass,
        format!(
            "reproducing {reproducing}/200 (max {worst:.1e}), sandwich {sandwich}/100, worked example {}",
            if example.pass { "reproduced" } else { "failed" }
        ),
    )
}

fn gabor_duality() -> Outcome {
    let tol = Tolerance::relative(1e-8);
    let (mut total, mut good) = (0, 0);
    for n in [2usize, 4, 6, 8, 12, 16] {
        for (l, lat) in GaborLattice::all(n).into_iter().enumerate() {
            for k in 0..20 {
                let mut rng = trial_rng(8, (n * 10_000 + l * 100 + k) as u64);
                let sys = gabor_system(lat, &window(&mut rng, n)).unwrap();
                let d = duality_check(&sys, &tol).unwrap();
                total += 1;
                good += usize::from(d.holds);
            }
        }
    }
    verdict(good == total, format!("{good}/{total} systems with matching frame and Riesz bounds"))
}

fn tight_pipeline() -> Outcome {
    let tol = tol();
    let (mut redundant, mut redundant_ok, mut critical, mut critical_ok) = (0, 0, 0, 0);
    for n in [2usize, 4, 6, 8, 12, 16] {
        for (l, lat) in GaborLattice::all(n).into_iter().enumerate() {
            if lat.members() > 64 || lat.density() == Density::Sparse {
                continue;
            }
            for k in 0..3 {
                let mut rng = trial_rng(9, (n * 10_000 + l * 100 + k) as u64);
                let g = window(&mut rng, n);
                match lat.density() {
                    Density::Redundant => {
                        redundant += 1;
                        let tight = canonical_tight_window(lat, &g, &tol).unwrap();
                        let sys = gabor_system(lat, &tight).unwrap();
                        let ok = tight_gabor_weak_r_dual(&sys, None, &tol)
                            .map(|p| p.certificate.verdict.is_weak_r_dual() && !p.v_is_onb)
                            .unwrap_or(false);
                        redundant_ok += usize::from(ok);
                    }
                    Density::Critical => {
                        critical += 1;
                        let sys = gabor_system(lat, &g).unwrap();
                        let riesz_basis = sys.family.analyze(&tol).unwrap().is_riesz_basis;
                        let gated = matches!(
                            tight_gabor_weak_r_dual(&sys, None, &tol),
                            Err(Error::CriticalDensity)
                        );
                        let promoted = critical_u(&sys, &tol)
                            .and_then(|u| {
                                let w = adjoint_system(&sys)?.family;
                                promote_to_r_dual(&w, &sys.family, &u, &tol)
                            })
                            .map(|p| p.is_r_dual && p.v.analyze(&tol).map(|a| a.is_onb).unwrap_or(false))
                            .unwrap_or(false);
                        critical_ok += usize::from(riesz_basis && gated && promoted);
                    }
                    Density::Sparse => unreachable!(),
                }
            }
        }
    }
    verdict(
        redundant_ok == redundant && critical_ok == critical,
        format!("redundant tight systems {redundant_ok}/{redundant}, critical density gated and promoted {critical_ok}/{critical}"),
    )
}

fn command_line() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_rdual");
    let mut failed = Vec::new();
    for id in fixtures::IDS {
        let status = Command::new(bin).args(["repro", id]).output().unwrap().status;
        if !status.success() {
            failed.push(id);
        }
    }
    let explore = || {
        Command::new(bin)
            .args(["gabor", "explore", "--N", "4..8", "--trials", "100", "--seed", "1"])
            .output()
            .unwrap()
    };
    let (a, b) = (explore(), explore());
    let identical = a.status.success() && a.stdout == b.stdout && !a.stdout.is_empty();
    verdict(
        failed.is_empty() && identical,
        format!(
            "repro failures {failed:?}, explorer reports {} ({} bytes)",
            if identical { "identical" } else { "differ" },
            a.stdout.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("definition round trip", definition_round_trip),
        ("canonical Parseval v", canonical_v),
        ("kernel identity", kernel_identity),
        ("Parseval v construction", parseval_construction),
        ("transfer by co-isometry", transfer),
        ("conjugate-linear witness", witness),
        ("y-sequence suite", y_sequence_suite),
        ("Gabor duality", gabor_duality),
        ("tight Gabor pipeline", tight_pipeline),
        ("command line", command_line),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        failures += usize::from(outcome.is_err());
        println!("criterion {:>2} {tag} {name}: {detail} [{secs:.2}s]", i + 1);
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
