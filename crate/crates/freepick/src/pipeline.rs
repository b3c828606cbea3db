//! End-to-end workflows: solve, minimal norm, extension, and the
//! realization invariant suite.
//!
//! A solve runs membership, then the feasibility certificate, then the
//! isometry step, then verification at sampled variety points. Outcomes map
//! to process exit codes: 0 solved, 1 input error, 2 target outside the
//! algebra, 3 undecided after the iteration cap (with a counterexample
//! search over the variety, since a failed floating-point feasibility run
//! never proves unsolvability by itself).

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraBasis, AlgebraError};
use crate::certificate::{
    build_constraint_map, solve_feasibility, verify_certificate, CertError, CertReport,
    GramCertificate,
};
use crate::freepoly::{FreePoly, MatrixTuple, PolyError};
use crate::nevanlinna::{build_parametrization, NevError, NevanlinnaData};
use crate::numerics::{cond, op_norm, CMat, CVec, NumError};
use crate::problem::{matrix_to_json, PickProblem, Report, Witness};
use crate::realization::{gram_columns, lurking_isometry, Realization, RealizeError};
use crate::sampler::{sample_domain, sample_variety, sup_search, SampleConfig, SampleError};
use crate::tol::Tolerances;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("node lies outside the domain: ||delta|| = {0:.6} >= {1:.6}")]
    NodeOutsideDomain(f64, f64),
    #[error("no finite interpolation norm found below {0:.3e}")]
    NoFiniteNorm(f64),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Cert(#[from] CertError),
    #[error(transparent)]
    Realize(#[from] RealizeError),
    #[error(transparent)]
    Nev(#[from] NevError),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Knobs shared by the workflows, mirrored by command-line flags.
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub tol: Tolerances,
    pub seed: u64,
    /// Sample count for verification and counterexample search.
    pub samples: usize,
    /// Largest sample size.
    pub max_size: usize,
    /// Required domain margin for the node: `||delta|| < 1 - margin`.
    pub margin: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: Tolerances::default(),
            seed: 1,
            samples: 50,
            max_size: 4,
            margin: 0.0,
        }
    }
}

impl SolveOptions {
    fn sample_config(&self) -> SampleConfig {
        SampleConfig {
            seed: self.seed,
            max_size: self.max_size,
            count: self.samples,
            ..SampleConfig::default()
        }
    }
}

/// Everything produced by a successful solve.
pub struct SolvedBundle {
    pub basis: AlgebraBasis,
    pub interpolant: FreePoly,
    pub interpolant_coeffs: CVec,
    pub certificate: GramCertificate,
    pub realization: Realization,
    pub verification: CertReport,
    pub gram_mismatch: f64,
    pub interpolation_residual: f64,
}

/// Outcome of a solve attempt.
pub enum Outcome {
    Solved(Box<SolvedBundle>),
    NotInAlgebra {
        residual: f64,
    },
    Undecided {
        sup_estimate: f64,
        witness: Option<(MatrixTuple, f64, f64)>,
    },
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::Solved(_) => 0,
            Outcome::NotInAlgebra { .. } => 2,
            Outcome::Undecided { .. } => 3,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            Outcome::Solved(_) => "solved",
            Outcome::NotInAlgebra { .. } => "not_in_algebra",
            Outcome::Undecided { .. } => "undecided_likely_unsolvable",
        }
    }
}

fn check_node(problem: &PickProblem, opts: &SolveOptions) -> Result<f64, PipelineError> {
    let v = problem.delta.eval(&problem.node)?;
    let norm = op_norm(&v)?;
    if norm >= 1.0 - opts.margin {
        return Err(PipelineError::NodeOutsideDomain(norm, 1.0 - opts.margin));
    }
    Ok(norm)
}

/// Full pipeline for one problem, optionally with the target rescaled by
/// `1 / scale` (used by the norm bisection and the extension workflow).
fn solve_scaled(
    problem: &PickProblem,
    opts: &SolveOptions,
    scale: f64,
    max_iter: usize,
    with_verification: bool,
) -> Result<(Outcome, Report), PipelineError> {
    let tol = &opts.tol;
    let mut report = Report::new("solve", "running", 1, opts.seed);

    // membership first: it needs no domain hypothesis, and a target outside
    // the algebra settles the problem regardless of where the node sits
    let target = problem.target.map(|z| z / num_scale(scale));
    let basis = AlgebraBasis::compute(&problem.node, tol)?;
    let (coeffs, residual) = basis.project(&target)?;
    report.residuals.membership = Some(residual);
    if residual > tol.membership {
        let outcome = Outcome::NotInAlgebra { residual };
        finalize(&mut report, &outcome);
        return Ok((outcome, report));
    }
    let delta_norm = check_node(problem, opts)?;
    report.norms.delta_at_node = Some(delta_norm);
    let interpolant = basis.combine(&coeffs);
    report.norms.interpolant_at_node = Some(op_norm(&crate::freepoly::eval(
        &interpolant,
        &problem.node,
    )?)?);

    let map = build_constraint_map(&basis, &problem.delta, tol)?;
    let solved = solve_feasibility(&map, &basis, &coeffs, &target, tol.sdp_tol, max_iter)?;

    let Some(cert) = solved else {
        // counterexample search: a variety point with interpolant norm > 1
        let cfg = opts.sample_config();
        let (sup, best) = sup_search(&basis, &problem.delta, &interpolant, &cfg)?;
        report.norms.sup_estimate = Some(sup);
        let witness = if sup > 1.0 + 1e-9 {
            let dn = op_norm(&problem.delta.eval(&best)?)?;
            Some((best, sup, dn))
        } else {
            None
        };
        let outcome = Outcome::Undecided {
            sup_estimate: sup,
            witness,
        };
        finalize(&mut report, &outcome);
        return Ok((outcome, report));
    };

    report.residuals.sdp_affine = Some(cert.residual);
    report.residuals.certificate_at_node = Some(cert.node_residual);
    report.residual_curve = cert.residual_curve.clone();

    let realization = lurking_isometry(&basis, &problem.delta, &interpolant, &cert, tol)?;
    let (p, q) = gram_columns(&basis, &problem.delta, &interpolant, &cert)?;
    let gram_mismatch = (p.adjoint() * &p - q.adjoint() * &q).norm();
    report.residuals.gram_mismatch = Some(gram_mismatch);
    report.residuals.unitarity = Some(realization.unitarity_residual());

    let phi_at_node = realization.eval(&problem.node)?;
    let interpolation_residual = (&phi_at_node - &target).norm();
    report.residuals.interpolation = Some(interpolation_residual);

    let verification = if with_verification {
        let cfg = SampleConfig {
            count: 20,
            ..opts.sample_config()
        };
        let samples = sample_variety(&basis, &problem.delta, &cfg)?;
        verify_certificate(&cert, &basis, &problem.delta, &interpolant, &samples, tol)?
    } else {
        CertReport {
            checks: Vec::new(),
            max_identity_residual: cert.node_residual,
            telescope_tail: 0.0,
            telescope_bound: 0.0,
            passed: true,
        }
    };
    report.residuals.verification_max = Some(verification.max_identity_residual);

    let outcome = Outcome::Solved(Box::new(SolvedBundle {
        basis,
        interpolant,
        interpolant_coeffs: coeffs,
        certificate: cert,
        realization,
        verification,
        gram_mismatch,
        interpolation_residual,
    }));
    finalize(&mut report, &outcome);
    Ok((outcome, report))
}

fn num_scale(scale: f64) -> crate::numerics::C64 {
    crate::numerics::cx(scale, 0.0)
}

fn finalize(report: &mut Report, outcome: &Outcome) {
    report.status = outcome.status().to_string();
    report.exit_code = outcome.exit_code();
    if let Outcome::Undecided {
        witness: Some((x, pnorm, dnorm)),
        ..
    } = outcome
    {
        report.counterexample = Some(Witness {
            size: x.size(),
            interpolant_norm: *pnorm,
            delta_norm: *dnorm,
            x: x.mats().iter().map(matrix_to_json).collect(),
        });
    }
}

/// Solve the problem as stated.
pub fn solve(
    problem: &PickProblem,
    opts: &SolveOptions,
) -> Result<(Outcome, Report), PipelineError> {
    solve_scaled(problem, opts, 1.0, opts.tol.sdp_max_iter, true)
}

fn feasible_at(
    problem: &PickProblem,
    opts: &SolveOptions,
    basis: &AlgebraBasis,
    map: &crate::certificate::ConstraintMap,
    coeffs: &CVec,
    scale: f64,
    max_iter: usize,
) -> Result<bool, PipelineError> {
    let target = problem.target.map(|z| z / num_scale(scale));
    let scaled = coeffs.map(|c| c / num_scale(scale));
    Ok(solve_feasibility(map, basis, &scaled, &target, opts.tol.sdp_tol, max_iter)?.is_some())
}

/// Smallest `t` such that the problem with target `W / t` stays feasible,
/// located by bisection to relative precision `1e-4`. The zero target has
/// norm zero by convention.
pub fn minimal_norm(
    problem: &PickProblem,
    opts: &SolveOptions,
) -> Result<(f64, Report), PipelineError> {
    let mut report = Report::new("norm", "running", 1, opts.seed);

    if problem.target.norm() < 1e-14 {
        report.status = "solved".into();
        report.exit_code = 0;
        report.norms.minimal_norm = Some(0.0);
        return Ok((0.0, report));
    }

    let tol = &opts.tol;
    let basis = AlgebraBasis::compute(&problem.node, tol)?;
    let (coeffs, residual) = basis.project(&problem.target)?;
    report.residuals.membership = Some(residual);
    if residual > tol.membership {
        report.status = "not_in_algebra".into();
        report.exit_code = 2;
        return Ok((f64::NAN, report));
    }
    let delta_norm = check_node(problem, opts)?;
    report.norms.delta_at_node = Some(delta_norm);
    let map = build_constraint_map(&basis, &problem.delta, tol)?;

    // the value at the node is a lower bound for the norm
    let w_norm = op_norm(&problem.target)?;
    let bisect_iters = tol.sdp_max_iter.min(8_000);
    let mut lo = w_norm.max(1e-12) * 0.999;
    let mut hi = w_norm.max(1.0);
    let mut grow = 0;
    while !feasible_at(problem, opts, &basis, &map, &coeffs, hi, bisect_iters)? {
        lo = hi;
        hi *= 2.0;
        grow += 1;
        if grow > 40 {
            return Err(PipelineError::NoFiniteNorm(hi));
        }
    }
    while (hi - lo) / hi > 1e-4 {
        let mid = 0.5 * (lo + hi);
        if feasible_at(problem, opts, &basis, &map, &coeffs, mid, bisect_iters)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    report.status = "solved".into();
    report.exit_code = 0;
    report.norms.minimal_norm = Some(hi);
    Ok((hi, report))
}

/// Extension workflow: fold the variety data, solve the one-point problem,
/// rescaling by the user-supplied or discovered supremum when the data does
/// not fit in the unit ball directly. The returned scale multiplies the unit
/// ball solution back to the extension; the report notes the finite stage.
pub fn extend(
    problem: &PickProblem,
    opts: &SolveOptions,
    sup_override: Option<f64>,
) -> Result<(Outcome, f64, Report), PipelineError> {
    let scale = match sup_override {
        Some(s) if s > 0.0 => s,
        _ => 1.0,
    };
    let (outcome, report) = solve_scaled(problem, opts, scale, opts.tol.sdp_max_iter, true)?;
    let (outcome, scale, mut report) = match outcome {
        Outcome::Undecided { .. } if sup_override.is_none() => {
            // not solvable at norm one: rescale by the minimal norm instead
            let (t, _norm_report) = minimal_norm(problem, opts)?;
            if !t.is_finite() {
                return Ok((outcome, scale, report));
            }
            let (retried, report2) = solve_scaled(problem, opts, t, opts.tol.sdp_max_iter, true)?;
            (retried, t, report2)
        }
        other => (other, scale, report),
    };
    report.command = "extend".into();
    report.finite_stage = Some(problem.point_count);
    report.norms.extension_scale = Some(scale);
    if let Outcome::Solved(bundle) = &outcome {
        // estimated variety supremum of the (unscaled) interpolant
        let cfg = opts.sample_config();
        let unscaled = bundle.interpolant.scale(num_scale(scale));
        let (sup, _) = sup_search(&bundle.basis, &problem.delta, &unscaled, &cfg)?;
        report.norms.sup_estimate = Some(sup);
    }
    Ok((outcome, scale, report))
}

/// Builds the solution parametrization for a solved bundle.
pub fn parametrize(
    problem: &PickProblem,
    bundle: &SolvedBundle,
    opts: &SolveOptions,
) -> Result<NevanlinnaData, PipelineError> {
    Ok(build_parametrization(
        &bundle.basis,
        &problem.delta,
        &bundle.interpolant,
        &bundle.certificate,
        &opts.tol,
    )?)
}

/// One line of the invariant suite.
#[derive(Serialize, Clone)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub bound: f64,
}

/// Machine-readable invariant suite output.
#[derive(Serialize)]
pub struct VerifyReport {
    pub status: String,
    pub exit_code: i32,
    pub seed: u64,
    pub checks: Vec<CheckLine>,
    pub versions: crate::problem::Versions,
}

/// Runs the realization invariant suite: unitarity, interpolation when the
/// problem is given, contractivity on domain samples, and the direct-sum and
/// similarity function axioms.
pub fn verify_realization(
    realization: &Realization,
    problem: Option<&PickProblem>,
    opts: &SolveOptions,
) -> Result<VerifyReport, PipelineError> {
    let mut checks = Vec::new();
    let push = |checks: &mut Vec<CheckLine>, name: &str, value: f64, bound: f64| {
        checks.push(CheckLine {
            name: name.into(),
            passed: value <= bound,
            value,
            bound,
        });
    };

    push(
        &mut checks,
        "colligation_unitarity",
        realization.unitarity_residual(),
        opts.tol.unitary,
    );

    if let Some(problem) = problem {
        let phi = realization.eval(&problem.node)?;
        push(
            &mut checks,
            "interpolation",
            (&phi - &problem.target).norm(),
            1e-6,
        );
    }

    let cfg = opts.sample_config();
    let samples = sample_domain(realization.delta(), &cfg)?;
    let mut worst_contraction: f64 = 0.0;
    for x in &samples {
        worst_contraction = worst_contraction.max(op_norm(&realization.eval(x)?)?);
    }
    push(&mut checks, "contractivity", worst_contraction, 1.0 + 1e-6);

    let mut worst_sum: f64 = 0.0;
    for pair in samples.chunks(2) {
        if pair.len() < 2 {
            continue;
        }
        let s = pair[0].direct_sum(&pair[1])?;
        let lhs = realization.eval(&s)?;
        let rhs =
            crate::numerics::direct_sum(&realization.eval(&pair[0])?, &realization.eval(&pair[1])?);
        worst_sum = worst_sum.max((lhs - rhs).norm());
    }
    push(&mut checks, "direct_sum_axiom", worst_sum, 1e-9);

    let mut worst_similarity: f64 = 0.0;
    let mut rng = crate::sampler::rng_for(opts.seed, 17);
    for x in samples.iter().take(8) {
        let n = x.size();
        let s = crate::numerics::CMat::identity(n, n)
            + CMat::from_fn(n, n, |_, _| {
                use rand::Rng;
                crate::numerics::cx(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            })
            .map(|z| z * 0.2);
        let c = cond(&s);
        if c > 10.0 {
            continue;
        }
        let xs = x.similarity(&s).unwrap();
        let v = realization.delta().eval(&xs)?;
        if op_norm(&v)? >= 1.0 {
            continue;
        }
        let lhs = realization.eval(&xs)?;
        let inner = realization.eval(x)?;
        let rhs = s.clone().lu().solve(&(&inner * &s)).unwrap();
        worst_similarity = worst_similarity.max((lhs - rhs).norm() / c);
    }
    push(&mut checks, "similarity_axiom", worst_similarity, 1e-6);

    let all = checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        status: if all { "pass" } else { "fail" }.into(),
        exit_code: if all { 0 } else { 3 },
        seed: opts.seed,
        checks,
        versions: crate::problem::Versions::default(),
    })
}
