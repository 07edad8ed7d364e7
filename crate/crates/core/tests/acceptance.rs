//! Acceptance suite: prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Runs without the libtest harness so the
//! lines always reach the terminal in order.

use std::f64::consts::TAU;
use std::time::Instant;

use opradius::geometry::{
    bhatia_semrl_check, find_orthogonality_witness, find_parallelism_witness, is_orthogonal, is_parallel,
    norm_parallel_check, WitnessOutcome,
};
use opradius::linalg::operator_norm;
use opradius::oracle::{
    buzano_check, conjugate, cross_check, grid_min_gamma, norm_orthogonal_partner, orthogonal_partner,
    sphere_radius_estimate_seeded, GridSpec, Mode, Sampler,
};
use opradius::radius::{block_embed, numerical_radius, rho_radius, DEFAULT_RADIUS_TOL};
use opradius::{ComplexMatrix, ComplexScalar, Result, RhoParam};

const WITNESS_TOL: f64 = 1e-6;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

fn rho(v: f64) -> RhoParam {
    RhoParam::new(v).expect("valid rho")
}

fn radius(a: &ComplexMatrix, r: RhoParam) -> Result<f64> {
    Ok(rho_radius(a, r, DEFAULT_RADIUS_TOL)?.radius)
}

fn diag(d: &[f64]) -> ComplexMatrix {
    ComplexMatrix::diag_real(d)
}

fn criterion_1() -> Result<Outcome> {
    let a = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]])?;
    let mut worst: f64 = 0.0;
    for (r, expected) in [(0.5, 2.0), (1.0, 1.0), (1.5, 2.0 / 3.0), (2.0, 0.5)] {
        worst = worst.max((radius(&a, rho(r))? - expected).abs());
    }
    Ok(Outcome::new(
        worst <= 1e-8,
        format!("4 values, max error {worst:.2e} (tol 1e-8)"),
    ))
}

fn criterion_2() -> Result<Outcome> {
    let mut s = Sampler::new(0xC2);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let n = s.dim(1, 6);
        let a = s.normal_matrix(n);
        let norm = operator_norm(&a);
        for r in [1.0, 1.5, 2.0] {
            worst = worst.max((radius(&a, rho(r))? - norm).abs());
        }
        for r in [0.25, 0.5, 0.75] {
            worst = worst.max((radius(&a, rho(r))? - (2.0 / r - 1.0) * norm).abs());
        }
    }
    Ok(Outcome::new(
        worst <= 1e-7,
        format!("20 matrices x 6 rho, max error {worst:.2e} (tol 1e-7)"),
    ))
}

fn criterion_3() -> Result<Outcome> {
    let mut s = Sampler::new(0xC3);
    let (mut w1, mut w2): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let n = s.dim(1, 6);
        let a = s.matrix(n);
        w1 = w1.max((radius(&a, RhoParam::ONE)? - operator_norm(&a)).abs());
        w2 = w2.max((radius(&a, RhoParam::TWO)? - numerical_radius(&a, DEFAULT_RADIUS_TOL)?.radius).abs());
    }
    Ok(Outcome::new(
        w1 <= 1e-8 && w2 <= 1e-8,
        format!("100 matrices, |w_1 - ||A||| max {w1:.2e}, |w_2 - w| max {w2:.2e} (tol 1e-8)"),
    ))
}

fn criterion_4() -> Result<Outcome> {
    let mut s = Sampler::new(0xC4);
    let (mut excess, mut gap): (f64, f64) = (f64::NEG_INFINITY, 0.0);
    for k in 0..50 {
        let n = s.dim(1, 6);
        let a = s.matrix(n);
        let r = s.rho();
        let exact = r.value() / 2.0 * radius(&a, r)?;
        let est = sphere_radius_estimate_seeded(&block_embed(&a, r)?, 500, 100, 1000 + k)?;
        excess = excess.max(est - exact);
        gap = gap.max(exact - est);
    }
    Ok(Outcome::new(
        excess <= 1e-8 && gap <= 1e-5,
        format!("50 pairs, max overshoot {excess:.2e} (tol 1e-8), max gap {gap:.2e} (tol 1e-5)"),
    ))
}

/// A criterion that needs no shared state.
type Criterion = (usize, &'static str, fn() -> Result<Outcome>);

/// Positive instances of criteria 5 and 6, kept for the witness checks of
/// criterion 7.
type Triples = Vec<(ComplexMatrix, ComplexMatrix, RhoParam)>;

fn criterion_5(orthogonal: &mut Triples) -> Result<Outcome> {
    let mut s = Sampler::new(0xC5);
    let grid = GridSpec::default();
    let mut cases: Vec<(ComplexMatrix, ComplexMatrix, RhoParam, Option<bool>)> = Vec::new();
    for k in 0..50 {
        let n = 2 + k % 2;
        let r = s.rho();
        let a = s.matrix(n);
        let b = s.matrix(n);
        // Every other triple is a constructed orthogonal pair; Gaussian
        // pairs alone are practically never orthogonal.
        if k % 2 == 0 {
            cases.push((a, b, r, None));
        } else {
            let b = orthogonal_partner(&a, &b, r)?;
            cases.push((a, b, r, Some(true)));
        }
    }
    cases.push((diag(&[1.0, -1.0]), diag(&[1.0, 1.0]), RhoParam::ONE, Some(true)));
    let a = s.matrix(3);
    cases.push((a.clone(), a.clone(), s.rho(), Some(false)));
    cases.push((a, ComplexMatrix::zeros(3, 3), s.rho(), Some(true)));

    let (mut disagreements, mut wrong_fixed, mut worst, mut positives) = (0, 0, 0.0_f64, 0);
    for (a, b, r, expected) in cases {
        let report = is_orthogonal(&a, &b, r, None)?;
        let verdict = cross_check(&a, &b, r, Mode::Orthogonal, &grid)?;
        let agrees = verdict.agrees && verdict.main_decision == report.orthogonal;
        disagreements += usize::from(!agrees);
        worst = worst.max(verdict.discrepancy / verdict.allowance.max(f64::MIN_POSITIVE));
        if expected.is_some_and(|e| e != report.orthogonal) {
            wrong_fixed += 1;
        }
        if report.orthogonal {
            positives += 1;
            orthogonal.push((a, b, r));
        }
    }
    Ok(Outcome::new(
        disagreements == 0 && wrong_fixed == 0,
        format!(
            "53 triples ({positives} orthogonal), {disagreements} oracle disagreements, {wrong_fixed} wrong expected decisions, max discrepancy/allowance {worst:.3}"
        ),
    ))
}

fn criterion_6(parallel: &mut Triples) -> Result<Outcome> {
    let mut s = Sampler::new(0xC6);
    let grid = GridSpec::default();
    let mut cases: Vec<(ComplexMatrix, ComplexMatrix, RhoParam, Option<bool>)> = Vec::new();
    for k in 0..50 {
        let n = 2 + k % 2;
        let r = s.rho();
        match k % 3 {
            0 => cases.push((s.matrix(n), s.matrix(n), r, None)),
            1 => {
                let (a, b) = s.parallel_normal_pair(n);
                cases.push((a, b, r, Some(true)));
            }
            _ => {
                let a = s.matrix(n);
                let b = a.scale(s.complex_normal());
                cases.push((a, b, r, Some(true)));
            }
        }
    }
    let mut disagreements = 0;
    let mut wrong = Vec::new();
    let mut positives = 0;
    for (a, b, r, expected) in cases {
        let report = is_parallel(&a, &b, r, None)?;
        let verdict = cross_check(&a, &b, r, Mode::Parallel, &grid)?;
        disagreements += usize::from(!(verdict.agrees && verdict.main_decision == report.parallel));
        if expected.is_some_and(|e| e != report.parallel) {
            wrong.push("constructed pair");
        }
        if report.parallel {
            positives += 1;
            parallel.push((a, b, r));
        }
    }

    let a = s.matrix(3);
    let r = s.rho();
    let report = is_parallel(&a, &a.scale_real(2.0), r, None)?;
    let lambda_err = (report.lambda_star - ComplexScalar::new(1.0, 0.0)).norm();
    if !report.parallel || lambda_err > 1e-6 {
        wrong.push("(A, 2A)");
    }
    disagreements += usize::from(!cross_check(&a, &a.scale_real(2.0), r, Mode::Parallel, &grid)?.agrees);
    parallel.push((a.clone(), a.scale_real(2.0), r));

    let (e1, e2) = (diag(&[1.0, 0.0]), diag(&[0.0, 1.0]));
    if is_parallel(&e1, &e2, RhoParam::ONE, None)?.parallel {
        wrong.push("(diag(1,0), diag(0,1))");
    }
    disagreements += usize::from(!cross_check(&e1, &e2, RhoParam::ONE, Mode::Parallel, &grid)?.agrees);

    let (d, id) = (diag(&[1.0, -1.0]), diag(&[1.0, 1.0]));
    let report = is_parallel(&d, &id, RhoParam::ONE, None)?;
    let max_err = (report.max_value - 2.0).abs();
    if !report.parallel || max_err > 1e-7 {
        wrong.push("(diag(1,-1), I)");
    }
    disagreements += usize::from(!cross_check(&d, &id, RhoParam::ONE, Mode::Parallel, &grid)?.agrees);
    parallel.push((d, id, RhoParam::ONE));

    Ok(Outcome::new(
        disagreements == 0 && wrong.is_empty(),
        format!(
            "53 triples ({positives} random-mix parallel), {disagreements} oracle disagreements, |lambda*-1| = {lambda_err:.1e}, |max_value-2| = {max_err:.1e}, wrong: {wrong:?}"
        ),
    ))
}

fn criterion_7(orthogonal: &Triples, parallel: &Triples) -> Result<Outcome> {
    let mut worst_found = usize::MAX;
    let mut unexplained = 0;
    let mut worst_residual: f64 = 0.0;
    for (a, b, r) in orthogonal {
        let mut found = 0;
        for k in 0..16 {
            let theta = TAU * k as f64 / 16.0;
            match find_orthogonality_witness(a, b, *r, theta, WITNESS_TOL)? {
                WitnessOutcome::Found(w) => {
                    found += 1;
                    worst_residual = worst_residual.max(w.attainment_residual.max(w.sign_or_product_residual));
                }
                WitnessOutcome::NotFound(f) => {
                    eprintln!(
                        "  orthogonality witness failure at theta = {theta:.4}: residuals {:.2e}/{:.2e}, degenerate = {}",
                        f.attainment_residual, f.sign_or_product_residual, f.degenerate_eigenspace
                    );
                    unexplained += usize::from(!f.degenerate_eigenspace);
                }
            }
        }
        worst_found = worst_found.min(found);
    }
    let mut par_failures = 0;
    let mut worst_product: f64 = 0.0;
    for (a, b, r) in parallel {
        match find_parallelism_witness(a, b, *r, WITNESS_TOL)? {
            WitnessOutcome::Found(w) => worst_product = worst_product.max(w.sign_or_product_residual),
            WitnessOutcome::NotFound(_) => par_failures += 1,
        }
    }
    let worst_found = if orthogonal.is_empty() { 16 } else { worst_found };
    Ok(Outcome::new(
        worst_found >= 14 && unexplained == 0 && worst_residual <= WITNESS_TOL && par_failures == 0 && worst_product <= WITNESS_TOL,
        format!(
            "{} orthogonal instances, min {worst_found}/16 witnesses, max residual {worst_residual:.1e}; {} parallel instances, {par_failures} failures, max product residual {worst_product:.1e}",
            orthogonal.len(),
            parallel.len()
        ),
    ))
}

fn criterion_8() -> Result<Outcome> {
    let mut s = Sampler::new(0xC8);
    let (mut orth_disagree, mut par_disagree, mut orth_pos, mut par_pos) = (0, 0, 0, 0);
    for k in 0..50 {
        let n = 2 + k % 2;
        let a = s.matrix(n);
        let b0 = s.matrix(n);
        let b = if k % 2 == 0 {
            b0
        } else {
            norm_orthogonal_partner(&a, &b0)?
        };
        let found = bhatia_semrl_check(&a, &b, 1e-7)?.found;
        let orth = is_orthogonal(&a, &b, RhoParam::ONE, None)?.orthogonal;
        orth_disagree += usize::from(found != orth);
        orth_pos += usize::from(orth);

        let (a, b) = if k % 2 == 0 {
            (s.matrix(n), s.matrix(n))
        } else {
            s.norm_parallel_pair(n)
        };
        let found = norm_parallel_check(&a, &b, 1e-7)?.found;
        let par = is_parallel(&a, &b, RhoParam::ONE, None)?.parallel;
        par_disagree += usize::from(found != par);
        par_pos += usize::from(par);
    }
    Ok(Outcome::new(
        orth_disagree == 0 && par_disagree == 0,
        format!(
            "50 pairs each: orthogonality {orth_disagree} disagreements ({orth_pos} positive), parallelism {par_disagree} disagreements ({par_pos} positive)"
        ),
    ))
}

fn criterion_9() -> Result<Outcome> {
    let mut s = Sampler::new(0xC9);
    let mut mismatches = 0;
    let (mut orth_pos, mut par_pos) = (0, 0);
    for k in 0..50 {
        let n = 2 + k % 2;
        let r = s.rho();
        let a = s.matrix(n);
        let b0 = s.matrix(n);
        let (oa, ob) = if k % 2 == 0 {
            (a.clone(), b0)
        } else {
            (a.clone(), orthogonal_partner(&a, &b0, r)?)
        };
        let (pa, pb) = match k % 3 {
            0 => (s.matrix(n), s.matrix(n)),
            1 => s.parallel_normal_pair(n),
            _ => {
                let m = s.matrix(n);
                let k = s.complex_normal();
                (m.clone(), m.scale(k))
            }
        };
        let (alpha, beta) = (s.complex_normal(), s.complex_normal());
        let u = s.unitary(n);
        let transforms = |x: &ComplexMatrix, y: &ComplexMatrix| {
            vec![
                (x.adjoint(), y.adjoint()),
                (x.scale(alpha), y.scale(beta)),
                (conjugate(&u, x), conjugate(&u, y)),
            ]
        };
        let orth = is_orthogonal(&oa, &ob, r, None)?.orthogonal;
        orth_pos += usize::from(orth);
        for (x, y) in transforms(&oa, &ob) {
            mismatches += usize::from(is_orthogonal(&x, &y, r, None)?.orthogonal != orth);
        }
        let par = is_parallel(&pa, &pb, r, None)?.parallel;
        par_pos += usize::from(par);
        for (x, y) in transforms(&pa, &pb) {
            mismatches += usize::from(is_parallel(&x, &y, r, None)?.parallel != par);
        }
    }
    Ok(Outcome::new(
        mismatches == 0,
        format!("50 instances x 3 transforms x 2 relations ({orth_pos} orthogonal, {par_pos} parallel), {mismatches} changed decisions"),
    ))
}

fn criterion_10() -> Result<Outcome> {
    let mut s = Sampler::new(0xCA);
    let mut nil_counter = 0;
    for k in 0..25 {
        let n = 2 + k % 3;
        let a = s.nilpotent(n);
        let b = norm_orthogonal_partner(&a, &s.matrix(n))?;
        for r in [0.5, 1.0, 1.5, 2.0] {
            nil_counter += usize::from(!is_orthogonal(&a, &b, rho(r), None)?.orthogonal);
        }
    }
    let grid = GridSpec::default();
    let mut normal_counter = 0;
    let mut tested = 0;
    for k in 0..25 {
        let n = 2 + k % 2;
        let a = s.normal_matrix(n);
        let r = rho([1.0, 1.5, 2.0][k % 3]);
        let b = orthogonal_partner(&a, &s.matrix(n), r)?;
        if !is_orthogonal(&a, &b, r, None)?.orthogonal {
            continue;
        }
        tested += 1;
        let norm = operator_norm(&a);
        let (_, min) = grid_min_gamma(&a, &b, RhoParam::ONE, &grid)?;
        if min < norm - 1e-7 * norm.max(1.0) {
            normal_counter += 1;
        }
    }
    Ok(Outcome::new(
        nil_counter == 0 && normal_counter == 0 && tested == 25,
        format!(
            "nilpotent: 25 x 4 rho, {nil_counter} counterexamples; normal: {tested}/25 orthogonal, {normal_counter} counterexamples"
        ),
    ))
}

fn criterion_11() -> Result<Outcome> {
    let mut s = Sampler::new(0xCB);
    let mut violations = 0;
    for k in 0..10_000 {
        let n = 1 + k % 6;
        let (a, b) = (s.matrix(n), s.matrix(n));
        let (x, y) = (s.unit_vector(n), s.vector(n));
        violations += usize::from(!buzano_check(&a, &b, &x, &y)?);
    }
    Ok(Outcome::new(
        violations == 0,
        format!("10000 trials, {violations} violations (slack 1e-10)"),
    ))
}

fn report(index: usize, name: &str, outcome: Result<Outcome>, started: Instant, failures: &mut usize) {
    let secs = started.elapsed().as_secs_f64();
    match outcome {
        Ok(o) => {
            *failures += usize::from(!o.passed);
            let status = if o.passed { "PASS" } else { "FAIL" };
            println!("criterion {index:>2} {status} {name}: {} [{secs:.1}s]", o.detail);
        }
        Err(e) => {
            *failures += 1;
            println!("criterion {index:>2} FAIL {name}: error {e} [{secs:.1}s]");
        }
    }
}

fn main() {
    let mut failures = 0;
    let simple: [Criterion; 4] = [
        (1, "closed-form radius, 2-nilpotent", criterion_1),
        (2, "closed-form radius, normal", criterion_2),
        (3, "reductions to operator norm and numerical radius", criterion_3),
        (4, "sphere-sampling oracle for the radius", criterion_4),
    ];
    for (i, name, f) in simple {
        let t = Instant::now();
        report(i, name, f(), t, &mut failures);
    }

    let (mut orthogonal, mut parallel) = (Vec::new(), Vec::new());
    let t = Instant::now();
    report(
        5,
        "orthogonality decisions vs gamma-grid oracle",
        criterion_5(&mut orthogonal),
        t,
        &mut failures,
    );
    let t = Instant::now();
    report(
        6,
        "parallelism decisions vs lambda-grid oracle",
        criterion_6(&mut parallel),
        t,
        &mut failures,
    );
    let t = Instant::now();
    report(
        7,
        "witness soundness",
        criterion_7(&orthogonal, &parallel),
        t,
        &mut failures,
    );

    let rest: [Criterion; 4] = [
        (8, "operator-norm characterizations at rho = 1", criterion_8),
        (9, "invariance of decisions", criterion_9),
        (10, "implications for nilpotent and normal A", criterion_10),
        (11, "Buzano inequality", criterion_11),
    ];
    for (i, name, f) in rest {
        let t = Instant::now();
        report(i, name, f(), t, &mut failures);
    }
    if failures > 0 {
        println!("acceptance: {failures} criteria failed");
        std::process::exit(1);
    }
    println!("acceptance: all 11 criteria passed");
}
