mod common;

use std::f64::consts::PI;
use std::time::Instant;

use canonpos_core::fio::{kernel_domination_check, kernel_equivalence, kernel_from_map};
use canonpos_core::forms::{ComplexQuadraticSymbolExponent, QuadraticWeight};
use canonpos_core::linalg::{c64, CVec, C64};
use canonpos_core::positivity::{map_positivity, PositivityStatus, ROUTE_GATE};
use canonpos_core::symplectic::{cayley_map, cayley_phase, push_weight, ComplexCanonicalMap};
use canonpos_core::toeplitz::{analyze, weyl_symbol};
use canonpos_core::validate::{
    projection_idempotence, spectral_report, truncated_matrix_with, Method,
};
use canonpos_core::Tolerance;
use common::{instance, kind_for, Kind};
use rand::Rng;

type Outcome = (bool, String);

fn lambda_q(lambda: C64) -> ComplexQuadraticSymbolExponent {
    ComplexQuadraticSymbolExponent::radial(1, lambda * 0.5)
}

fn model() -> QuadraticWeight {
    QuadraticWeight::model(1)
}

fn tol() -> Tolerance {
    Tolerance::default()
}

fn boundedness_law() -> Outcome {
    let start = Instant::now();
    // Polar grid about λ = 1, so that both sides of |1 − λ| = 1 are sampled.
    let mut points = Vec::new();
    'outer: for i in 0..40 {
        let rho = 0.5 + 1.2 * (i as f64 + 0.5) / 40.0;
        for j in 0..24 {
            let theta = -PI + 2.0 * PI * (j as f64 + 0.5) / 24.0;
            let lambda = c64(1.0, 0.0) - C64::from_polar(rho, theta);
            if lambda.re < 0.5 && (rho - 1.0).abs() > 1e-6 {
                points.push(lambda);
                if points.len() == 200 {
                    break 'outer;
                }
            }
        }
    }
    let mut agree = 0;
    let mut bounded_count = 0;
    for &lambda in &points {
        let rep = analyze(&lambda_q(lambda), &model(), tol()).unwrap();
        let got = rep
            .bounded
            .as_ref()
            .map(|v| v.status.is_positive())
            .unwrap_or(false);
        let expected = (c64(1.0, 0.0) - lambda).norm() >= 1.0;
        bounded_count += usize::from(expected);
        agree += usize::from(got == expected);
    }
    let secs = start.elapsed().as_secs_f64();
    (
        agree == points.len() && secs < 5.0,
        format!(
            "{agree}/{} agree ({bounded_count} bounded), {secs:.2}s",
            points.len()
        ),
    )
}

fn weyl_exactness() -> Outcome {
    let lambda = -1.0_f64;
    let w = weyl_symbol(&lambda_q(c64(lambda, 0.0)), &model()).unwrap();
    let amp = 2.0 / (2.0 - lambda);
    let coef = 2.0 * lambda / (2.0 - lambda);
    let amp_err = (w.c - c64(amp, 0.0)).norm();
    // ½sᵀGs = coef·|x|²
    let coef_err = (w.lambda_exponent[(0, 0)] * 0.5 - c64(coef, 0.0))
        .norm()
        .max((w.lambda_exponent[(1, 1)] * 0.5 - c64(coef, 0.0)).norm())
        .max(w.lambda_exponent[(0, 1)].norm());
    (
        amp_err <= 1e-12 && coef_err <= 1e-12,
        format!("amplitude err {amp_err:.1e}, exponent err {coef_err:.1e}"),
    )
}

fn map_exactness() -> Outcome {
    let mut rng = common::rng(3);
    let (mut worst, mut worst_cayley) = (0.0_f64, 0.0_f64);
    for _ in 0..20 {
        let lambda = c64(rng.random_range(-3.0..0.9), rng.random_range(-2.0..2.0));
        let rep = analyze(&lambda_q(lambda), &model(), tol()).unwrap();
        let s = c64(1.0, 0.0) - lambda;
        let expected = ComplexCanonicalMap::dilation(1, s);
        let k = rep.kappa.as_ref().unwrap();
        let err = (k.matrix() - expected.matrix())
            .iter()
            .fold(0.0_f64, |m, z| m.max(z.norm()));
        worst = worst.max(err);
        worst_cayley = worst_cayley.max(rep.cayley_residual.unwrap());
    }
    (
        worst <= 1e-12 && worst_cayley < 1e-9,
        format!("max entry err {worst:.1e}, max Cayley residual {worst_cayley:.1e}"),
    )
}

struct Corpus {
    instances: Vec<common::Instance>,
}

fn corpus() -> Corpus {
    let mut rng = common::rng(4);
    let mut instances = Vec::new();
    for n in 1..=3 {
        for i in 0..201 {
            instances.push(instance(&mut rng, n, kind_for(i)));
        }
    }
    Corpus { instances }
}

fn route_equivalence(c: &Corpus) -> Outcome {
    let mut contradictions = 0;
    let mut gated_disagreements = 0;
    let mut per_n = [0usize; 3];
    for inst in &c.instances {
        let v = map_positivity(&inst.map, &inst.phi1, &inst.phi2, tol()).unwrap();
        per_n[inst.map.n() - 1] += 1;
        contradictions += usize::from(v.is_contradiction());
        if let Ok(ch) = &v.characterization {
            if ch.min_eigenvalue.abs() > ROUTE_GATE
                && v.direct.min_eigenvalue.abs() > ROUTE_GATE
                && ch.status != v.direct.status
            {
                gated_disagreements += 1;
            }
        }
    }
    (
        contradictions == 0 && gated_disagreements == 0 && per_n.iter().all(|&k| k >= 200),
        format!("instances per n {per_n:?}, contradictions {contradictions}, gated disagreements {gated_disagreements}"),
    )
}

fn tri_equivalence(c: &Corpus) -> Outcome {
    let mut mismatched = 0;
    let mut contradictions = 0;
    let mut by_kind = [0usize; 3];
    for inst in &c.instances {
        let r = kernel_equivalence(&inst.map, &inst.phi1, &inst.phi2, tol()).unwrap();
        mismatched += usize::from(!r.all_agree);
        contradictions +=
            usize::from(r.map.is_contradiction() || r.doubled_plane.is_contradiction());
        let idx = match r.map.status {
            PositivityStatus::StrictlyPositive => 0,
            PositivityStatus::DegeneratePositive => 1,
            _ => 2,
        };
        by_kind[idx] += 1;
    }
    (
        mismatched == 0 && contradictions == 0,
        format!("status mismatches {mismatched}, contradictions {contradictions}, strict/degenerate/not {by_kind:?}"),
    )
}

/// `F` is taken relative to the image weight `Φ` with `κ(Λ_{Φ₂}) = Λ_Φ`; it must
/// also stay psd when `Φ` is replaced by the dominating `Φ₁`.
fn domination(c: &Corpus) -> Outcome {
    let mut worst = f64::INFINITY;
    let mut worst_dominating = f64::INFINITY;
    let mut bad_kernel = 0;
    let mut checked = 0;
    for inst in c.instances.iter().filter(|i| i.kind != Kind::Not) {
        let psi = kernel_from_map(&inst.map, &inst.phi2).unwrap();
        let image = push_weight(&inst.map, &inst.phi2).unwrap();
        let d = kernel_domination_check(&psi, &image, &inst.phi2, tol()).unwrap();
        let d1 = kernel_domination_check(&psi, &inst.phi1, &inst.phi2, tol()).unwrap();
        worst = worst.min(d.min_eigenvalue);
        worst_dominating = worst_dominating.min(d1.min_eigenvalue);
        checked += 1;
        if inst.kind == Kind::Strict && d.kernel_dimension != 2 * inst.map.n() {
            bad_kernel += 1;
        }
    }
    (
        worst >= -1e-10 && worst_dominating >= -1e-10 && bad_kernel == 0,
        format!(
            "{checked} positive instances, min eigenvalue {worst:.2e} (image weight), \
             {worst_dominating:.2e} (dominating weight), wrong kernel dimension {bad_kernel}"
        ),
    )
}

fn oracle_spectra() -> Outcome {
    let q = lambda_q(c64(-1.0, 0.0));
    let t = truncated_matrix_with(&q, 40, Method::Analytic).unwrap();
    let rep = spectral_report(&t);
    let rel = rep
        .singular_values
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let e = 0.5f64.powi(k as i32 + 1);
            (s - e).abs() / e
        })
        .fold(0.0_f64, f64::max);
    let analyzed = analyze(&q, &model(), tol()).unwrap().trace.unwrap();
    let to_one = (rep.trace_partial - c64(1.0, 0.0)).norm();
    let to_analyze = (rep.trace_partial - analyzed).norm();
    (
        rel < 1e-8 && to_one <= 1e-8 && to_analyze <= 1e-8,
        format!(
            "max rel err {rel:.1e}, |trace - 1| {to_one:.1e}, |trace - analyze| {to_analyze:.1e}"
        ),
    )
}

fn unitarity() -> Outcome {
    let lambda = c64(1.0, 0.0) - C64::from_polar(1.0, PI / 4.0);
    let q = lambda_q(lambda);
    let rep = spectral_report(&truncated_matrix_with(&q, 40, Method::Analytic).unwrap());
    let an = analyze(&q, &model(), tol()).unwrap();
    (
        rep.unitary_defect < 1e-8 && an.unitary_up_to_phase,
        format!(
            "unitary defect {:.1e}, analyze unitary {}",
            rep.unitary_defect, an.unitary_up_to_phase
        ),
    )
}

fn unboundedness() -> Outcome {
    let q = lambda_q(c64(0.4, 0.0));
    let norms: Vec<f64> = [10, 20, 40, 60]
        .iter()
        .map(|&n| {
            spectral_report(&truncated_matrix_with(&q, n, Method::Analytic).unwrap()).operator_norm
        })
        .collect();
    let increasing = norms.windows(2).all(|w| w[1] > w[0]);
    let status = analyze(&q, &model(), tol())
        .unwrap()
        .bounded
        .unwrap()
        .status;
    (
        increasing && norms[3] > 1e3 && status == PositivityStatus::NotPositive,
        format!(
            "norms at N=10,20,40,60: {}, analyze {}",
            norms
                .iter()
                .map(|v| format!("{v:.3e}"))
                .collect::<Vec<_>>()
                .join(" "),
            status.as_str()
        ),
    )
}

fn normalization() -> Outcome {
    let defect = projection_idempotence(30, 1.0 / PI).unwrap();
    let w = weyl_symbol(&ComplexQuadraticSymbolExponent::zero(1), &model()).unwrap();
    let mut rng = common::rng(10);
    let mut worst = 0.0_f64;
    for _ in 0..10 {
        let x = CVec::from_element(1, common::cnum(&mut rng, 3.0));
        let xi = model().graph_fiber(&x);
        worst = worst.max((w.eval(&x, &xi) - c64(1.0, 0.0)).norm());
    }
    (
        defect < 1e-8 && worst == 0.0,
        format!("idempotence defect {defect:.1e}, max |a - 1| on Lambda {worst:.1e}"),
    )
}

fn round_trips() -> Outcome {
    let mut rng = common::rng(11);
    let mut cayley_worst = 0.0_f64;
    let mut push_worst = 0.0_f64;
    for i in 0..50 {
        let n = 1 + i % 3;
        let f = common::random_form(&mut rng, 2 * n, 0.5);
        let k = cayley_map(&f).unwrap();
        let back = cayley_phase(&k).unwrap();
        let again = cayley_map(&back).unwrap();
        cayley_worst = cayley_worst.max(back.distance(&f)).max(again.distance(&k));

        let m1 = common::random_map(&mut rng, n, 0.3);
        let m2 = common::random_map(&mut rng, n, 0.3);
        let phi = common::weight(&mut rng, n);
        let joint = push_weight(&m1.compose(&m2), &phi).unwrap();
        let nested = push_weight(&m1, &push_weight(&m2, &phi).unwrap()).unwrap();
        push_worst = push_worst.max(joint.distance(&nested));
    }
    (
        cayley_worst < 1e-9 && push_worst < 1e-9,
        format!("Cayley residual {cayley_worst:.1e}, push_weight functoriality {push_worst:.1e}"),
    )
}

fn main() {
    let start = Instant::now();
    let c = corpus();
    let results: Vec<(&str, Outcome)> = vec![
        ("boundedness law on the lambda grid", boundedness_law()),
        ("Weyl symbol exactness", weyl_exactness()),
        ("canonical map exactness", map_exactness()),
        ("direct vs characterization routes", route_equivalence(&c)),
        ("kernel tri-equivalence", tri_equivalence(&c)),
        ("kernel domination", domination(&c)),
        ("oracle spectra", oracle_spectra()),
        ("unitarity", unitarity()),
        ("unboundedness evidence", unboundedness()),
        ("normalization oracles", normalization()),
        ("Cayley round trips and functoriality", round_trips()),
    ];
    let mut failed = 0;
    for (i, (name, (ok, detail))) in results.iter().enumerate() {
        println!(
            "{} criterion {:>2} {name}: {detail}",
            if *ok { "PASS" } else { "FAIL" },
            i + 1
        );
        failed += usize::from(!ok);
    }
    println!(
        "acceptance finished in {:.2}s",
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
