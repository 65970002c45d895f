//! The `run` command.

use hilbert_trunc::bases::{
    adversarial_test_basis, image_basis, krylov_basis, operator_space, svd_bases, BasisSpace, OrthonormalBasis,
};
use hilbert_trunc::diagnostics::{classify, evaluate, evaluate_lifted, ConvergenceRecord, Indicator, MIN_SERIES_LEN};
use hilbert_trunc::noise::{noise_series, NoiseModel};
use hilbert_trunc::operators::{Ambient, BoundedOperator, OperatorSpec};
use hilbert_trunc::truncation::{compress, solve_cg, solve_gmres, solve_with_family, SolutionFamily, SolverKind};
use hilbert_trunc::{Element, L2Space, SequenceLaw};

use crate::config::ExperimentConfig;
use crate::datum::DatumSpec;
use crate::output::{format_float, Table};
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub table: Table,
}

impl RunOutput {
    pub fn csv(&self) -> String {
        self.table.to_csv()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TrialKind {
    Legendre,
    Fourier,
    Canonical,
    Svd,
    Krylov,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TestKind {
    Same,
    Legendre,
    Fourier,
    Canonical,
    Svd,
    Krylov,
    Image,
    Adversarial,
}

fn config_err(field: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{field}: {e}"))
}

fn parse_trial(s: &str) -> Result<TrialKind, CliError> {
    Ok(match s {
        "legendre" => TrialKind::Legendre,
        "fourier" => TrialKind::Fourier,
        "canonical" => TrialKind::Canonical,
        "svd" => TrialKind::Svd,
        "krylov" => TrialKind::Krylov,
        other => return Err(config_err("truncation.trial", format!("unknown basis `{other}`"))),
    })
}

fn parse_test(s: Option<&str>, trial: TrialKind) -> Result<TestKind, CliError> {
    let kind = match s {
        None => match trial {
            TrialKind::Krylov => TestKind::Image,
            TrialKind::Svd => TestKind::Svd,
            _ => TestKind::Same,
        },
        Some("same") => TestKind::Same,
        Some("legendre") => TestKind::Legendre,
        Some("fourier") => TestKind::Fourier,
        Some("canonical") => TestKind::Canonical,
        Some("svd") => TestKind::Svd,
        Some("krylov") => TestKind::Krylov,
        Some("image") => TestKind::Image,
        Some("adversarial") => TestKind::Adversarial,
        Some(other) => return Err(config_err("truncation.test", format!("unknown basis `{other}`"))),
    };
    if (kind == TestKind::Svd) != (trial == TrialKind::Svd) && kind != TestKind::Same {
        return Err(config_err("truncation.test", "the svd test system pairs only with the svd trial system"));
    }
    Ok(kind)
}

/// Runs an experiment and returns its table.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let spec: OperatorSpec = config
        .problem
        .operator
        .parse()
        .map_err(|e| config_err("problem.operator", e))?;
    let op = BoundedOperator::new(spec).map_err(|e| config_err("problem.operator", e))?;
    let ns = config.truncation.n_list.expand()?;
    if config.output.tracked.contains(&0) {
        return Err(config_err("output.tracked", "indices start at 1"));
    }
    match &config.noise {
        Some(noise) => run_noise(config, &op, noise, &ns),
        None => run_truncation(config, &op, &ns),
    }
}

fn law(field: &str, s: &str) -> Result<SequenceLaw, CliError> {
    s.parse().map_err(|e| config_err(field, e))
}

fn run_noise(
    config: &ExperimentConfig,
    op: &BoundedOperator,
    noise: &crate::config::NoiseConfig,
    ns: &[usize],
) -> Result<RunOutput, CliError> {
    let model = NoiseModel::new(
        law("noise.sigma", &noise.sigma)?,
        law("noise.g", &noise.g)?,
        law("noise.nu", &noise.nu)?,
    )
    .map_err(|e| config_err("noise", e))?;
    op.exact_svd()?;
    let n_max = *ns.last().expect("non-empty");
    let series = noise_series(&model, n_max)?;
    let mut t = Table {
        columns: ["N", "alpha", "beta", "res_sq", "err_sq"].map(String::from).to_vec(),
        ..Default::default()
    };
    t.meta("operator", &config.problem.operator);
    t.meta("frame", "exact singular system");
    t.meta("sigma", &noise.sigma);
    t.meta("g", &noise.g);
    t.meta("nu", &noise.nu);
    t.meta("noise_norm_sq", format_float(series.noise_norm_sq));
    t.meta("noise_in_range", model.noise_in_range());
    t.meta("N0", series.n0);
    for &n in ns {
        let p = &series.points[n];
        t.rows.push(vec![Some(n as f64), Some(p.alpha), Some(p.beta), Some(p.res_sq), Some(p.err_sq)]);
    }
    Ok(RunOutput { table: t })
}

fn build_trial(kind: TrialKind, op: &BoundedOperator, space: &BasisSpace, g: &Element, n_max: usize) -> Result<OrthonormalBasis, CliError> {
    let needs_functions = |name: &str| {
        CliError::Capability(format!("basis `{name}` needs a function space, `{}` acts on sequences", op.label()))
    };
    let basis = match kind {
        TrialKind::Legendre => OrthonormalBasis::legendre(space.function_space().ok_or_else(|| needs_functions("legendre"))?),
        TrialKind::Fourier => OrthonormalBasis::fourier(space.function_space().ok_or_else(|| needs_functions("fourier"))?),
        TrialKind::Canonical => match space {
            BasisSpace::Sequences(d) => OrthonormalBasis::canonical(*d),
            BasisSpace::Functions(_) => {
                return Err(CliError::Capability(format!(
                    "basis `canonical` needs a sequence space, `{}` acts on functions",
                    op.label()
                )))
            }
        },
        TrialKind::Svd => svd_bases(op, space)?.0,
        TrialKind::Krylov => krylov_basis(op, g, n_max)?,
    };
    if !basis.lives_in(op) {
        return Err(CliError::Capability(format!(
            "basis `{}` does not live in the space of `{}`",
            basis.label(),
            op.label()
        )));
    }
    Ok(basis)
}

fn run_truncation(config: &ExperimentConfig, op: &BoundedOperator, ns: &[usize]) -> Result<RunOutput, CliError> {
    let tc = &config.truncation;
    let solver: SolverKind = tc.solver.parse().map_err(|e| config_err("truncation.solver", e))?;
    let family: SolutionFamily = tc
        .solution_family
        .parse()
        .map_err(|e| config_err("truncation.solution_family", e))?;
    if !(tc.tol.is_finite() && tc.tol >= 0.0) {
        return Err(config_err("truncation.tol", "must be a non-negative number"));
    }
    let trial_kind = parse_trial(&tc.trial)?;
    let test_kind = parse_test(tc.test.as_deref(), trial_kind)?;
    if ns[0] == 0 {
        return Err(config_err("truncation.n_list", "truncation levels start at 1"));
    }
    if solver != SolverKind::Qr {
        if trial_kind != TrialKind::Krylov {
            return Err(config_err("truncation.trial", format!("solver `{solver}` works in the Krylov basis")));
        }
        if family != SolutionFamily::MinimumNorm {
            return Err(config_err("truncation.solution_family", format!("solver `{solver}` has no solution families")));
        }
    }
    if solver == SolverKind::Cg && !(op.is_self_adjoint() && op.is_positive_semidefinite()) {
        return Err(CliError::Capability(format!(
            "cg needs a self-adjoint positive semi-definite operator, `{}` is not",
            op.label()
        )));
    }
    if trial_kind == TrialKind::Svd && !op.has_exact_svd() {
        return Err(CliError::Capability(format!("`{}` has no exact singular system", op.label())));
    }

    let n_max = *ns.last().expect("non-empty");
    let horizon = 4 * n_max;
    let space = match (test_kind, op.ambient()) {
        (TestKind::Adversarial, Ambient::Functions { a, b }) => BasisSpace::Functions(L2Space::for_truncation(a, b, horizon)?),
        _ => operator_space(op, n_max)?,
    };
    let g = DatumSpec::parse("problem.datum", &config.problem.datum)?.build("problem.datum", &space)?;
    let exact = match &config.problem.exact {
        Some(s) => Some(DatumSpec::parse("problem.exact", s)?.build("problem.exact", &space)?),
        None => None,
    };
    let trial = build_trial(trial_kind, op, &space, &g, n_max)?;
    let available = trial.len().map_or(n_max, |l| l.min(n_max));

    let mut t = Table::default();
    t.meta("operator", op.label());
    t.meta("datum", &config.problem.datum);
    t.meta("exact", config.problem.exact.as_deref().unwrap_or("none"));
    t.meta("trial", trial.label());
    t.meta("solver", solver);
    t.meta("tol", format_float(tc.tol));
    t.meta("solution_family", family);
    if trial_kind == TrialKind::Krylov {
        let convention = match (solver, test_kind) {
            (SolverKind::Cg, _) | (_, TestKind::Krylov) => "galerkin (test = trial)",
            _ => "residual-minimizing (test = orthonormalized A·K_N)",
        };
        t.meta("krylov_convention", convention);
        if trial.is_exhausted() || available < n_max {
            t.meta("krylov_exhausted_at", available);
        }
    }

    let tracked = &config.output.tracked;
    let records = match solver {
        SolverKind::Qr => {
            let test = match test_kind {
                TestKind::Same => trial.clone(),
                TestKind::Legendre | TestKind::Fourier | TestKind::Canonical => {
                    let k = match test_kind {
                        TestKind::Legendre => TrialKind::Legendre,
                        TestKind::Fourier => TrialKind::Fourier,
                        _ => TrialKind::Canonical,
                    };
                    build_trial(k, op, &space, &g, n_max)?
                }
                TestKind::Svd => svd_bases(op, &space)?.1,
                TestKind::Krylov => krylov_basis(op, &g, n_max)?,
                TestKind::Image => image_basis(op, &trial, available)?,
                TestKind::Adversarial => adversarial_test_basis(op, &trial, n_max, horizon)?,
            };
            t.meta("test", test.label());
            let mut out = Vec::new();
            for &n in ns.iter().filter(|&&n| n <= available) {
                let p = compress(op, &trial, &test, n, &g)?;
                if p.quadrature_warning {
                    return Err(CliError::Runtime(format!("quadrature grid too coarse for N = {n}")));
                }
                let sol = solve_with_family(&p, family)?;
                out.push(evaluate(op, &g, exact.as_ref(), &sol, &trial, &test, tracked)?);
            }
            out
        }
        SolverKind::Gmres => {
            let run = solve_gmres(op, &g, n_max, tc.tol)?;
            let krylov = run.krylov_basis();
            let steps = run.solutions.len();
            let test = image_basis(op, &krylov, steps)?;
            t.meta("test", test.label());
            t.meta("iterations", steps);
            t.meta("converged", run.converged);
            ns.iter()
                .filter(|&&n| n <= steps)
                .map(|&n| evaluate(op, &g, exact.as_ref(), &run.solutions[n - 1], &krylov, &test, tracked))
                .collect::<Result<_, _>>()?
        }
        SolverKind::Cg => {
            let its = solve_cg(op, &g, n_max, &g.zero_like())?;
            t.meta("test", trial.label());
            t.meta("iterations", its.len() - 1);
            let mut out = Vec::new();
            for &n in ns.iter().filter(|&&n| n < its.len() && n <= available) {
                let f = &its[n].iterate;
                let r = g.sub(&op.apply(f)?)?;
                let eps = trial.coordinates(&r, n)?.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                out.push(evaluate_lifted(op, &g, exact.as_ref(), f, n, eps, &trial, &trial, tracked)?);
            }
            out
        }
    };
    if records.len() >= MIN_SERIES_LEN {
        if exact.is_some() {
            let c = classify(&records, Indicator::Error)?;
            t.meta("classification_error", format!("{} (advisory)", c.mode));
        }
        let c = classify(&records, Indicator::Residual)?;
        t.meta("classification_residual", format!("{} (advisory)", c.mode));
    }
    t.meta("tracked", tracked.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","));
    t.columns = ["N", "err_norm", "res_norm", "sol_norm", "eps_norm"].map(String::from).to_vec();
    for i in tracked {
        t.columns.push(format!("err_c{i}"));
        t.columns.push(format!("res_c{i}"));
    }
    for r in &records {
        t.rows.push(row(r));
    }
    Ok(RunOutput { table: t })
}

fn row(r: &ConvergenceRecord) -> Vec<Option<f64>> {
    let mut v = vec![Some(r.n as f64), r.err_norm, Some(r.res_norm), Some(r.sol_norm), Some(r.eps_norm)];
    for c in &r.tracked {
        v.push(c.error.map(|z| z.norm()));
        v.push(c.residual.map(|z| z.norm()));
    }
    v
}
