//! Randomized invariant and oracle-equivalence suite behind
//! `opradius selftest`.
//!
//! Every trial draws fresh matrices from one seeded [`Sampler`], so a run
//! is fully determined by `(seed, trials, grid)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    bhatia_semrl_check, is_orthogonal, is_parallel, norm_parallel_check, scaled_witness_vector, DEFAULT_THETA_SAMPLES,
    DEFAULT_WITNESS_TOL,
};
use crate::linalg::{c, cis, dot, operator_norm, ComplexMatrix};
use crate::oracle::{
    buzano_check, conjugate, norm_orthogonal_partner, orthogonal_partner, sphere_radius_estimate_seeded,
    verify_orthogonality, verify_parallelism, GridSpec, Sampler, DEFAULT_LAMBDA_POINTS,
};
use crate::radius::{block_embed, numerical_radius, rho_radius, RhoParam, DEFAULT_RADIUS_TOL};

/// Outcome of one property over all trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub name: String,
    pub checks: usize,
    pub failures: usize,
    /// Largest discrepancy observed (property specific, 0 for pure
    /// boolean agreements).
    pub worst: f64,
    /// Informational properties are measured but never fail the run.
    pub asserted: bool,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        !self.asserted || self.failures == 0
    }
}

/// Summary of a selftest run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub trials: usize,
    pub grid: GridSpec,
    pub properties: Vec<PropertyResult>,
    pub passed: bool,
}

impl SelftestReport {
    /// Human-readable pass/fail table.
    pub fn table(&self) -> String {
        let mut out = format!(
            "{:<38} {:>7} {:>8} {:>12}  status\n",
            "property", "checks", "failures", "worst"
        );
        for p in &self.properties {
            let status = match (p.asserted, p.failures == 0) {
                (false, _) => "info",
                (true, true) => "PASS",
                (true, false) => "FAIL",
            };
            out.push_str(&format!(
                "{:<38} {:>7} {:>8} {:>12.3e}  {status}\n",
                p.name, p.checks, p.failures, p.worst
            ));
        }
        out.push_str(if self.passed {
            "selftest: PASS\n"
        } else {
            "selftest: FAIL\n"
        });
        out
    }
}

struct Tally {
    results: Vec<PropertyResult>,
}

impl Tally {
    fn new() -> Self {
        Self { results: Vec::new() }
    }

    fn entry(&mut self, name: &str, asserted: bool) -> &mut PropertyResult {
        if let Some(i) = self.results.iter().position(|p| p.name == name) {
            return &mut self.results[i];
        }
        self.results.push(PropertyResult {
            name: name.to_string(),
            checks: 0,
            failures: 0,
            worst: 0.0,
            asserted,
        });
        self.results.last_mut().expect("just pushed")
    }

    /// Records one check of an asserted property.
    fn check(&mut self, name: &str, ok: bool, discrepancy: f64) {
        let e = self.entry(name, true);
        e.checks += 1;
        e.failures += usize::from(!ok);
        e.worst = e.worst.max(discrepancy);
    }

    /// Records one measurement of an informational property; `hit` counts
    /// as a "failure" column entry without failing the run.
    fn observe(&mut self, name: &str, hit: bool, amount: f64) {
        let e = self.entry(name, false);
        e.checks += 1;
        e.failures += usize::from(hit);
        e.worst = e.worst.max(amount);
    }
}

fn rel(x: f64) -> f64 {
    x.abs().max(1.0)
}

/// Runs `trials` rounds of every property. `trials = 0` is rejected.
pub fn run_selftest(seed: u64, trials: usize, grid: &GridSpec) -> Result<SelftestReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    grid.validate()?;
    let mut s = Sampler::new(seed);
    let mut tally = Tally::new();
    for trial in 0..trials {
        radius_properties(&mut s, &mut tally)?;
        decision_properties(&mut s, &mut tally, trial, grid)?;
    }
    let passed = tally.results.iter().all(PropertyResult::passed);
    Ok(SelftestReport {
        seed,
        trials,
        grid: *grid,
        properties: tally.results,
        passed,
    })
}

fn radius_properties(s: &mut Sampler, tally: &mut Tally) -> Result<()> {
    let n = s.dim(2, 4);
    let a = s.matrix(n);
    let b = s.matrix(n);
    let rho = s.rho();
    let tol = DEFAULT_RADIUS_TOL;
    let w = |m: &ComplexMatrix, r: RhoParam| rho_radius(m, r, tol).map(|c| c.radius);

    let op = operator_norm(&a);
    let d = (w(&a, RhoParam::ONE)? - op).abs();
    tally.check("reduction w_1 = operator norm", d <= 1e-8, d);
    let d = (w(&a, RhoParam::TWO)? - numerical_radius(&a, tol)?.radius).abs();
    tally.check("reduction w_2 = numerical radius", d <= 1e-8, d);

    let nil = s.nilpotent(n);
    let d = (w(&nil, rho)? - operator_norm(&nil) / rho.value()).abs();
    tally.check(
        "closed form, 2-nilpotent",
        d <= 1e-8 * rel(operator_norm(&nil) / rho.value()),
        d,
    );
    let nor = s.normal_matrix(n);
    let r = rho.value();
    let expect = if r >= 1.0 {
        operator_norm(&nor)
    } else {
        (2.0 / r - 1.0) * operator_norm(&nor)
    };
    let d = (w(&nor, rho)? - expect).abs();
    tally.check("closed form, normal", d <= 1e-7 * rel(expect), d);

    let wa = w(&a, rho)?;
    let wb = w(&b, rho)?;
    let excess = w(&(&a + &b), rho)? - wa - wb;
    tally.check("triangle inequality", excess <= 1e-8, excess.max(0.0));
    let scalar = s.complex_normal();
    let d = (w(&a.scale(scalar), rho)? - scalar.norm() * wa).abs();
    tally.check("absolute homogeneity", d <= 1e-9 * rel(wa), d);
    let d = (w(&a.adjoint(), rho)? - wa).abs();
    tally.check("adjoint invariance", d <= 1e-8, d);
    let u = s.unitary(n);
    let d = (w(&conjugate(&u.adjoint(), &a), rho)? - wa).abs();
    tally.check("unitary invariance", d <= 1e-8, d);

    let lower_gap = op / r - wa;
    tally.check("lower bound ||A||/rho <= w_rho", lower_gap <= 1e-9, lower_gap.max(0.0));
    let upper_gap = wa - op;
    if r >= 1.0 {
        tally.check(
            "upper bound w_rho <= ||A||, rho >= 1",
            upper_gap <= 1e-9,
            upper_gap.max(0.0),
        );
    } else {
        tally.observe("upper bound violated, rho < 1", upper_gap > 1e-9, upper_gap.max(0.0));
    }

    let cert = rho_radius(&a, rho, tol)?;
    let t = block_embed(&a, rho)?;
    let q = rho.scale() * t.quadratic_form(&cert.attaining_vector)?.norm();
    let d = (q - cert.radius).abs();
    tally.check(
        "certificate consistency",
        d <= cert.residual + 1e-12 * rel(cert.radius),
        d,
    );

    let est = sphere_radius_estimate_seeded(&t, 40, 30, 7)?;
    let excess = est - r / 2.0 * wa;
    tally.check("sphere estimate <= w(T)", excess <= 1e-8, excess.max(0.0));

    for _ in 0..20 {
        let (x, y) = (s.unit_vector(n), s.vector(n));
        tally.check("Buzano inequality", buzano_check(&a, &b, &x, &y)?, 0.0);
    }

    let (x, y) = (s.vector(n), s.vector(n));
    let ay = a.mul_vec(&y)?;
    let u = scaled_witness_vector(&x, &y, rho)?;
    let (sc, cc) = rho.block_coefficients();
    let v = x.scale_real(sc).axpy(c(cc, 0.0), &y);
    let lhs = dot(ay.as_slice(), u.as_slice());
    let rhs = rho.scale() * dot(ay.as_slice(), v.as_slice());
    let d = (lhs - rhs).norm();
    tally.check("witness vector identity", d <= 1e-12 * rel(lhs.norm()), d);
    Ok(())
}

fn decision_properties(s: &mut Sampler, tally: &mut Tally, trial: usize, grid: &GridSpec) -> Result<()> {
    let n = 2 + trial % 2;
    let rho = s.rho();

    // Orthogonality: alternate plain Gaussian pairs (practically never
    // orthogonal) with constructed orthogonal partners.
    let a = s.matrix(n);
    let b0 = s.matrix(n);
    let b = if trial.is_multiple_of(2) {
        b0
    } else {
        orthogonal_partner(&a, &b0, rho)?
    };
    let report = is_orthogonal(&a, &b, rho, None)?;
    let verdict = verify_orthogonality(&a, &b, &report, grid)?;
    tally.check("orthogonality oracle agreement", verdict.agrees, verdict.discrepancy);
    if trial % 2 == 1 {
        tally.check("constructed pair is orthogonal", report.orthogonal, 0.0);
    }
    if report.orthogonal {
        let found = report.witnesses.len();
        let total = found + report.witness_failures.len();
        let ok = found * DEFAULT_THETA_SAMPLES >= 14 * total;
        tally.check(
            "orthogonality witnesses >= 14/16",
            ok,
            report.witness_failures.len() as f64,
        );
        for wr in &report.witnesses {
            let (att, sign) = wr.recheck_orthogonality(&a, &b, rho, report.base_radius)?;
            let worst = att.max(sign);
            tally.check(
                "orthogonality witness soundness",
                worst <= DEFAULT_WITNESS_TOL && wr.in_unit_ball(),
                worst,
            );
        }
    }
    let alpha = s.complex_normal();
    let beta = s.complex_normal();
    let u = s.unitary(n);
    let variants = [
        (a.adjoint(), b.adjoint()),
        (a.scale(alpha), b.scale(beta)),
        (conjugate(&u.adjoint(), &a), conjugate(&u.adjoint(), &b)),
    ];
    for (ta, tb) in &variants {
        let same = is_orthogonal(ta, tb, rho, None)?.orthogonal == report.orthogonal;
        tally.check("orthogonality decision invariance", same, 0.0);
    }

    // Parallelism: Gaussian pairs, commuting normal pairs, scalar multiples.
    let (a, b) = match trial % 3 {
        0 => (s.matrix(n), s.matrix(n)),
        1 => s.parallel_normal_pair(n),
        _ => {
            let a = s.matrix(n);
            let k = s.complex_normal();
            let b = a.scale(k);
            (a, b)
        }
    };
    let report = is_parallel(&a, &b, rho, None)?;
    let verdict = verify_parallelism(&a, &b, &report, DEFAULT_LAMBDA_POINTS)?;
    tally.check("parallelism oracle agreement", verdict.agrees, verdict.discrepancy);
    let excess = report.max_value - report.sum_radius;
    tally.check("max_value <= sum_radius", excess <= 1e-9, excess.max(0.0));
    if !trial.is_multiple_of(3) {
        tally.check("constructed pair is parallel", report.parallel, 0.0);
    }
    if report.parallel {
        tally.check("parallelism witness found", !report.witnesses.is_empty(), 0.0);
        for wr in &report.witnesses {
            let (_, prod) = wr.recheck_parallelism(&a, &b, rho, report.radius_a, report.radius_b)?;
            tally.check("parallelism witness soundness", prod <= DEFAULT_WITNESS_TOL, prod);
        }
    }
    let alpha = s.complex_normal();
    let beta = s.uniform(0.2, 2.0) * if trial.is_multiple_of(2) { 1.0 } else { -1.0 };
    let u = s.unitary(n);
    let variants = [
        (a.adjoint(), b.adjoint()),
        (a.scale(alpha), b.scale_real(beta)),
        (conjugate(&u.adjoint(), &a), conjugate(&u.adjoint(), &b)),
    ];
    for (ta, tb) in &variants {
        let same = is_parallel(ta, tb, rho, None)?.parallel == report.parallel;
        tally.check("parallelism decision invariance", same, 0.0);
    }

    // Operator-norm special cases against the deciders at rho = 1.
    let a = s.matrix(n);
    let b0 = s.matrix(n);
    let b = if trial.is_multiple_of(2) {
        b0
    } else {
        norm_orthogonal_partner(&a, &b0)?
    };
    let bs = bhatia_semrl_check(&a, &b, 1e-7)?;
    let orth = is_orthogonal(&a, &b, RhoParam::ONE, None)?.orthogonal;
    tally.check("Bhatia-Semrl <=> w_1-orthogonality", bs.found == orth, 0.0);

    let (a, b) = if trial.is_multiple_of(2) {
        (s.matrix(n), s.matrix(n))
    } else {
        s.norm_parallel_pair(n)
    };
    let np = norm_parallel_check(&a, &b, 1e-7)?;
    let par = is_parallel(&a, &b, RhoParam::ONE, None)?.parallel;
    tally.check("norm parallelism <=> w_1-parallelism", np.found == par, 0.0);

    // Scaling a pair by a unimodular factor keeps both decisions.
    let phase = cis(s.uniform(0.0, std::f64::consts::TAU));
    let same = is_parallel(&a.scale(phase), &b.scale(phase), RhoParam::ONE, None)?.parallel == par;
    tally.check("parallelism decision invariance", same, 0.0);
    Ok(())
}
