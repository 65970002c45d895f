//! Finite truncations `A_N f^(N) = g_N` and their solvers.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::bases::{Arnoldi, BasisSpace, OrthonormalBasis};
use crate::coefficients::{hypot_norm, Coefficients};
use crate::error::{Error, Result};
use crate::matrix::{qr_least_squares, DenseMatrix};
use crate::operators::BoundedOperator;
use crate::space::Element;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// The pair `(A_N, g_N)` with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedProblem {
    pub n: usize,
    pub matrix: DenseMatrix,
    pub rhs: Coefficients,
    pub trial: String,
    pub test: String,
    pub operator: String,
    /// Set when the integrands may exceed the exactness degree of the grid.
    pub quadrature_warning: bool,
}

/// `A_N[i][j] = ⟨v_i, A u_j⟩`, `g_N[i] = ⟨v_i, g⟩` for `i, j < N`.
///
/// ```
/// use hilbert_trunc::bases::OrthonormalBasis;
/// use hilbert_trunc::operators::BoundedOperator;
/// use hilbert_trunc::space::{Element, SeqDomain, Sequence};
/// use hilbert_trunc::truncation::compress;
/// use hilbert_trunc::SequenceLaw;
///
/// let op = BoundedOperator::multiplication_seq(SequenceLaw::power(1.0, 1.0)).unwrap();
/// let e = OrthonormalBasis::canonical(SeqDomain::Natural);
/// let g = Element::Seq(Sequence::canonical(SeqDomain::Natural, 1).unwrap());
/// let p = compress(&op, &e, &e, 4, &g).unwrap();
/// assert_eq!(p.matrix[(2, 2)].re, 1.0 / 3.0);
/// ```
pub fn compress(
    op: &BoundedOperator,
    trial: &OrthonormalBasis,
    test: &OrthonormalBasis,
    n: usize,
    g: &Element,
) -> Result<TruncatedProblem> {
    if n < 1 {
        return Err(Error::InvalidArgument("truncation size must be positive".into()));
    }
    if !trial.lives_in(op) || !test.lives_in(op) {
        return Err(Error::Representation(format!(
            "bases `{}`/`{}` do not live in the space of `{}`",
            trial.label(),
            test.label(),
            op.label()
        )));
    }
    trial.check_len(n)?;
    test.check_len(n)?;
    let mut matrix = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let au = op.apply(&trial.element(j)?)?;
        let column = test.coordinates(&au, n)?;
        for (i, v) in column.into_iter().enumerate() {
            matrix[(i, j)] = v;
        }
    }
    let rhs = Coefficients::new(test.coordinates(g, n)?, 1, test.label());
    let quadrature_warning = match test.space() {
        // Products of degree-N elements with images of degree N+1.
        BasisSpace::Functions(space) => 2 * n + 1 > space.rule().exact_degree(),
        BasisSpace::Sequences(_) => false,
    };
    Ok(TruncatedProblem {
        n,
        matrix,
        rhs,
        trial: trial.label().to_string(),
        test: test.label().to_string(),
        operator: op.label(),
        quadrature_warning,
    })
}

/// Which iterative or direct method produced a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverKind {
    Qr,
    Gmres,
    Cg,
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverKind::Qr => "qr",
            SolverKind::Gmres => "gmres",
            SolverKind::Cg => "cg",
        })
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "qr" => Ok(SolverKind::Qr),
            "gmres" => Ok(SolverKind::Gmres),
            "cg" => Ok(SolverKind::Cg),
            other => Err(Error::InvalidArgument(format!("unknown solver `{other}`"))),
        }
    }
}

/// Which vector to return from a truncated problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SolutionFamily {
    /// Minimum-norm least-squares solution.
    #[default]
    MinimumNorm,
    /// `f^(N) = e_N`.
    LastUnit,
    /// `f^(N) = N e_N`.
    ScaledLastUnit,
}

impl fmt::Display for SolutionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolutionFamily::MinimumNorm => "min-norm",
            SolutionFamily::LastUnit => "e_N",
            SolutionFamily::ScaledLastUnit => "N*e_N",
        })
    }
}

impl FromStr for SolutionFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "min-norm" => Ok(SolutionFamily::MinimumNorm),
            "e_N" | "last-unit" => Ok(SolutionFamily::LastUnit),
            "N*e_N" | "scaled-last-unit" => Ok(SolutionFamily::ScaledLastUnit),
            other => Err(Error::InvalidArgument(format!("unknown solution family `{other}`"))),
        }
    }
}

/// `f^(N)` together with `‖ε^(N)‖ = ‖A_N f^(N) − g_N‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxSolution {
    pub coeffs: Coefficients,
    pub eps_norm: f64,
    pub solver: SolverKind,
    pub iterations: usize,
    /// The method stopped early (Krylov breakdown).
    pub breakdown: bool,
}

impl ApproxSolution {
    /// `‖A_N f^(N) − g_N‖` recomputed from the problem data.
    pub fn recompute_eps(&self, p: &TruncatedProblem) -> Result<f64> {
        truncation_residual(p, self.coeffs.values())
    }
}

fn truncation_residual(p: &TruncatedProblem, x: &[Complex64]) -> Result<f64> {
    let ax = p.matrix.mul_vec(x)?;
    let d: Vec<Complex64> = ax.iter().zip(p.rhs.values()).map(|(a, b)| a - b).collect();
    Ok(hypot_norm(&d))
}

/// Minimum-norm least-squares solution by QR.
pub fn solve_direct(p: &TruncatedProblem) -> Result<ApproxSolution> {
    solve_with_family(p, SolutionFamily::MinimumNorm)
}

/// Returns the requested member of the solution family.
pub fn solve_with_family(p: &TruncatedProblem, family: SolutionFamily) -> Result<ApproxSolution> {
    let n = p.n;
    let values = match family {
        SolutionFamily::MinimumNorm => qr_least_squares(&p.matrix, &p.rhs)?.into_values(),
        SolutionFamily::LastUnit | SolutionFamily::ScaledLastUnit => {
            let mut v = vec![ZERO; n];
            v[n - 1] = if family == SolutionFamily::LastUnit {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(n as f64, 0.0)
            };
            v
        }
    };
    let eps_norm = truncation_residual(p, &values)?;
    Ok(ApproxSolution {
        coeffs: Coefficients::new(values, 1, p.trial.clone()),
        eps_norm,
        solver: SolverKind::Qr,
        iterations: 0,
        breakdown: false,
    })
}

/// The hat-lift `f̂^(N) = Σ_{n ≤ N} f^(N)_n u_n`.
pub fn lift(sol: &ApproxSolution, trial: &OrthonormalBasis) -> Result<Element> {
    trial.synthesize(sol.coeffs.values())
}

/// Output of [`solve_gmres`].
#[derive(Debug, Clone)]
pub struct GmresRun {
    /// One entry per step `n = 1, 2, …`; coefficients refer to the Krylov basis.
    pub solutions: Vec<ApproxSolution>,
    pub arnoldi: Arnoldi,
    pub converged: bool,
}

impl GmresRun {
    /// Orthonormal Krylov basis of the last step.
    pub fn krylov_basis(&self) -> OrthonormalBasis {
        let n = self.solutions.len();
        let space = match &self.arnoldi.vectors()[0] {
            Element::Seq(s) => BasisSpace::Sequences(s.domain()),
            Element::Func(f) => BasisSpace::Functions(f.space().clone()),
        };
        OrthonormalBasis::explicit(
            "krylov",
            space,
            self.arnoldi.vectors()[..n].to_vec(),
            crate::bases::Completeness::PossiblyIncomplete,
        )
    }
}

/// GMRES without restarts: at step `n` the minimizer of `‖A x − g‖` over
/// `K_n(A, g)`, from the Hessenberg least-squares problem updated by Givens
/// rotations. Stops at `n_max` or once the residual is `≤ tol`.
pub fn solve_gmres(op: &BoundedOperator, g: &Element, n_max: usize, tol: f64) -> Result<GmresRun> {
    let mut arnoldi = Arnoldi::start(g)?;
    let beta = arnoldi.beta();
    // Rotated Hessenberg columns (upper triangular part) and rotations.
    let mut r_cols: Vec<Vec<Complex64>> = Vec::new();
    let mut rotations: Vec<(f64, Complex64)> = Vec::new();
    let mut rhs = vec![Complex64::new(beta, 0.0)];
    let mut solutions = Vec::new();
    let mut converged = false;
    for n in 1..=n_max {
        let more = arnoldi.step(op)?;
        let h = arnoldi.hessenberg(n);
        let mut col: Vec<Complex64> = (0..=n).map(|i| h[(i, n - 1)]).collect();
        for (i, &(c, s)) in rotations.iter().enumerate() {
            let (a, b) = (col[i], col[i + 1]);
            col[i] = c * a + s * b;
            col[i + 1] = -s.conj() * a + c * b;
        }
        let (c, s) = givens(col[n - 1], col[n]);
        col[n - 1] = c * col[n - 1] + s * col[n];
        col[n] = ZERO;
        rotations.push((c, s));
        let top = rhs[n - 1];
        rhs[n - 1] = c * top;
        rhs.push(-s.conj() * top);
        r_cols.push(col);

        // Back substitution on the n×n triangle.
        let mut y = vec![ZERO; n];
        for i in (0..n).rev() {
            let mut acc = rhs[i];
            for (k, yk) in y.iter().enumerate().skip(i + 1) {
                acc -= r_cols[k][i] * yk;
            }
            y[i] = if r_cols[i][i] == ZERO { ZERO } else { acc / r_cols[i][i] };
        }
        let eps_norm = rhs[n].norm();
        let done = eps_norm <= tol;
        solutions.push(ApproxSolution {
            coeffs: Coefficients::new(y, 1, "krylov"),
            eps_norm,
            solver: SolverKind::Gmres,
            iterations: n,
            breakdown: !more,
        });
        if done {
            converged = true;
            break;
        }
        if !more {
            break;
        }
    }
    Ok(GmresRun {
        solutions,
        arnoldi,
        converged,
    })
}

/// Rotation `(c, s)` with `[c s; −s̄ c] (a, b)ᵀ = (r, 0)ᵀ`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    if b == ZERO {
        return (1.0, ZERO);
    }
    if a == ZERO {
        return (0.0, b.conj() / b.norm());
    }
    let an = a.norm();
    let r = an.hypot(b.norm());
    let c = an / r;
    let s = (a / an) * b.conj() / r;
    (c, s)
}

/// One conjugate-gradient iterate `f^[N]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CgIterate {
    pub n: usize,
    pub iterate: Element,
    pub residual_norm: f64,
    /// `Φ[f^[N]] = ⟨f, Af⟩ − 2 Re⟨f, g⟩`.
    pub energy: f64,
}

/// `Φ[h] = ⟨h, A h⟩ − 2 Re⟨h, g⟩`.
pub fn energy(op: &BoundedOperator, h: &Element, g: &Element) -> Result<f64> {
    Ok(h.inner(&op.apply(h)?)?.re - 2.0 * h.inner(g)?.re)
}

/// Conjugate-gradient iterates `f^[0], f^[1], …, f^[N_max]` for a
/// self-adjoint positive semi-definite operator (two-term recurrence).
/// Stops early when the residual vanishes.
pub fn solve_cg(op: &BoundedOperator, g: &Element, n_max: usize, f0: &Element) -> Result<Vec<CgIterate>> {
    if !op.is_self_adjoint() || !op.is_positive_semidefinite() {
        return Err(Error::CapabilityAbsent {
            operator: op.label(),
            capability: "self-adjoint positive semi-definite",
        });
    }
    let mut f = f0.clone();
    let mut r = g.sub(&op.apply(&f)?)?;
    let scale = g.norm()?.max(f64::MIN_POSITIVE);
    let mut rr = r.norm_sqr()?;
    let mut p = r.clone();
    let mut out = vec![CgIterate {
        n: 0,
        iterate: f.clone(),
        residual_norm: rr.sqrt(),
        energy: energy(op, &f, g)?,
    }];
    for n in 1..=n_max {
        if rr.sqrt() <= 1e-15 * scale {
            break;
        }
        let ap = op.apply(&p)?;
        let pap = p.inner(&ap)?.re;
        if pap <= 0.0 {
            break;
        }
        let alpha = rr / pap;
        f = f.axpy(alpha.into(), &p)?;
        r = r.axpy((-alpha).into(), &ap)?;
        let rr_new = r.norm_sqr()?;
        p = r.axpy((rr_new / rr).into(), &p)?;
        rr = rr_new;
        out.push(CgIterate {
            n,
            iterate: f.clone(),
            residual_norm: rr.sqrt(),
            energy: energy(op, &f, g)?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::{image_basis, krylov_basis, svd_bases};
    use crate::law::SequenceLaw;
    use crate::space::{Function, L2Space, SeqDomain, Sequence};
    use std::f64::consts::PI;

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    fn canonical() -> OrthonormalBasis {
        OrthonormalBasis::canonical(SeqDomain::Natural)
    }

    #[test]
    fn weighted_shift_compression_is_subdiagonal() {
        let op = BoundedOperator::weighted_right_shift(SequenceLaw::power(1.0, 1.0)).unwrap();
        let g = Element::Seq(Sequence::zero(SeqDomain::Natural));
        let p = compress(&op, &canonical(), &canonical(), 5, &g).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let expected = if i == j + 1 { 1.0 / (j + 1) as f64 } else { 0.0 };
                assert_eq!(p.matrix[(i, j)], c(expected));
            }
        }
    }

    #[test]
    fn diagonal_problem_solves_componentwise() {
        let op = BoundedOperator::multiplication_seq(SequenceLaw::power(1.0, 1.0)).unwrap();
        let n = 12;
        let g = Element::Seq(
            Sequence::new(
                SeqDomain::Natural,
                1,
                (1..=n).map(|k| c(1.0 / (k * k) as f64)).collect(),
            )
            .unwrap(),
        );
        let p = compress(&op, &canonical(), &canonical(), n, &g).unwrap();
        let s = solve_direct(&p).unwrap();
        for (k, v) in s.coeffs.values().iter().enumerate() {
            assert!((v - c(1.0 / (k + 1) as f64)).norm() < 1e-14);
        }
        assert!(s.eps_norm < 1e-15);
        assert!((s.recompute_eps(&p).unwrap() - s.eps_norm).abs() < 1e-12);
    }

    #[test]
    fn shift_with_zero_datum_and_families() {
        let op = BoundedOperator::right_shift();
        let g = Element::Seq(Sequence::zero(SeqDomain::Natural));
        let p = compress(&op, &canonical(), &canonical(), 6, &g).unwrap();
        let s = solve_direct(&p).unwrap();
        assert!(s.coeffs.values().iter().all(|v| *v == ZERO));
        let e = solve_with_family(&p, SolutionFamily::LastUnit).unwrap();
        assert_eq!(e.eps_norm, 0.0);
        let ne = solve_with_family(&p, SolutionFamily::ScaledLastUnit).unwrap();
        assert_eq!(ne.coeffs.norm(), 6.0);
    }

    #[test]
    fn svd_bases_give_diagonal_and_picard_solution() {
        let n = 10;
        let sp = L2Space::for_truncation(0.0, 1.0, n).unwrap();
        let v = BoundedOperator::volterra();
        let (trial, test) = svd_bases(&v, &BasisSpace::Functions(sp.clone())).unwrap();
        let g = Element::Func(Function::polynomial(&sp, &[0.0, 0.0, 0.5]));
        let p = compress(&v, &trial, &test, n, &g).unwrap();
        let svd = v.exact_svd().unwrap();
        for i in 0..n {
            for j in 0..n {
                let expected = if i == j { svd.sigma(i) } else { 0.0 };
                assert!((p.matrix[(i, j)] - c(expected)).norm() < 1e-12);
            }
        }
        assert!((p.matrix[(0, 0)].re - 2.0 / PI).abs() < 1e-14);
        let s = solve_direct(&p).unwrap();
        for i in 0..n {
            let expected = p.rhs.values()[i] / svd.sigma(i);
            assert!((s.coeffs.values()[i] - expected).norm() < 1e-10);
        }
    }

    #[test]
    fn lift_reproduces_projection_of_x() {
        let sp = L2Space::new(0.0, 1.0, 40).unwrap();
        let leg = OrthonormalBasis::legendre(&sp);
        let sol = ApproxSolution {
            coeffs: Coefficients::new(vec![c(0.5), c(1.0 / 12f64.sqrt()), ZERO], 1, "legendre"),
            eps_norm: 0.0,
            solver: SolverKind::Qr,
            iterations: 0,
            breakdown: false,
        };
        let f = lift(&sol, &leg).unwrap();
        let f = f.as_function().unwrap();
        for &x in sp.rule().nodes() {
            assert!((f.eval(x).unwrap() - c(x)).norm() < 1e-12);
        }
        let z = ApproxSolution {
            coeffs: Coefficients::zeros(3, "canonical"),
            ..sol
        };
        assert_eq!(lift(&z, &canonical()).unwrap().norm().unwrap(), 0.0);
    }

    #[test]
    fn gmres_identity_and_monotonicity() {
        let id = BoundedOperator::multiplication_seq(SequenceLaw::Constant(1.0)).unwrap();
        let g = Element::Seq(Sequence::new(SeqDomain::Natural, 1, vec![c(1.0), c(-2.0), c(0.5)]).unwrap());
        let run = solve_gmres(&id, &g, 5, 1e-12).unwrap();
        assert_eq!(run.solutions.len(), 1);
        assert!(run.solutions[0].eps_norm < 1e-14);

        let sp = L2Space::for_truncation(1.0, 2.0, 60).unwrap();
        let m = BoundedOperator::multiplication_x(1.0, 2.0).unwrap();
        let g = Element::Func(Function::polynomial(&sp, &[0.0, 0.0, 1.0]));
        let run = solve_gmres(&m, &g, 50, 1e-10).unwrap();
        assert!(run.converged);
        for w in run.solutions.windows(2) {
            assert!(w[1].eps_norm <= w[0].eps_norm);
        }
    }

    #[test]
    fn gmres_matches_residual_minimizing_truncation() {
        let sp = L2Space::for_truncation(0.0, 1.0, 40).unwrap();
        let v = BoundedOperator::volterra();
        let g = Element::Func(Function::polynomial(&sp, &[0.0, 0.0, 0.5]));
        let run = solve_gmres(&v, &g, 10, 0.0).unwrap();
        for n in 1..=10 {
            let trial = krylov_basis(&v, &g, n).unwrap();
            let test = image_basis(&v, &trial, n).unwrap();
            let p = compress(&v, &trial, &test, n, &g).unwrap();
            let s = solve_direct(&p).unwrap();
            let f = lift(&s, &trial).unwrap();
            let res = g.sub(&v.apply(&f).unwrap()).unwrap().norm().unwrap();
            assert!((res - run.solutions[n - 1].eps_norm).abs() < 1e-10, "n={n}");
        }
    }

    #[test]
    fn cg_basics() {
        let v = BoundedOperator::volterra();
        let sp = L2Space::new(0.0, 1.0, 32).unwrap();
        let g = Element::Func(Function::polynomial(&sp, &[1.0]));
        assert!(matches!(
            solve_cg(&v, &g, 3, &g.zero_like()),
            Err(Error::CapabilityAbsent { .. })
        ));

        let op = BoundedOperator::multiplication_seq(SequenceLaw::power(1.0, 1.0)).unwrap();
        let e1 = Element::Seq(Sequence::canonical(SeqDomain::Natural, 1).unwrap());
        let its = solve_cg(&op, &e1, 5, &e1.zero_like()).unwrap();
        assert_eq!(its.len(), 2);
        assert!(its[1].iterate.sub(&e1).unwrap().norm().unwrap() < 1e-15);

        // Starting from the exact solution.
        let its = solve_cg(&op, &e1, 5, &e1).unwrap();
        assert_eq!(its.len(), 1);
        assert_eq!(its[0].residual_norm, 0.0);
    }

    #[test]
    fn cg_energy_decreases_and_galerkin_orthogonality() {
        let sp = L2Space::for_truncation(1.0, 2.0, 40).unwrap();
        let m = BoundedOperator::multiplication_x(1.0, 2.0).unwrap();
        let g = Element::Func(Function::polynomial(&sp, &[0.0, 0.0, 1.0]));
        let its = solve_cg(&m, &g, 12, &g.zero_like()).unwrap();
        for w in its.windows(2) {
            assert!(w[1].energy <= w[0].energy + 1e-14);
        }
        // r_N ⊥ K_N(A, r_0) with r_0 = g.
        let k = krylov_basis(&m, &g, 12).unwrap();
        for it in &its[1..] {
            let r = g.sub(&m.apply(&it.iterate).unwrap()).unwrap();
            for j in 0..it.n {
                assert!(k.element(j).unwrap().inner(&r).unwrap().norm() < 1e-8);
            }
        }
    }

    #[test]
    fn rejects_mismatched_bases() {
        let v = BoundedOperator::volterra();
        let g = Element::Seq(Sequence::zero(SeqDomain::Natural));
        assert!(matches!(
            compress(&v, &canonical(), &canonical(), 3, &g),
            Err(Error::Representation(_))
        ));
    }
}
