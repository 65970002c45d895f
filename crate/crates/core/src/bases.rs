//! Orthonormal trial and test systems.
//!
//! Every basis is enumerated from `n = 0`; the `n`-th element is the
//! `(n+1)`-th vector of the corresponding system `(u_n)` or `(v_n)`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{null_space_basis, DenseMatrix};
use crate::operators::{enumerate_index, symmetric_index, Ambient, BoundedOperator, SvdFamily};
use crate::space::{Element, Function, L2Space, SeqDomain, Sequence};

/// Relative size below which a new Krylov direction counts as zero.
pub const ARNOLDI_BREAKDOWN_TOLERANCE: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Where the basis lives.
#[derive(Debug, Clone, PartialEq)]
pub enum BasisSpace {
    Sequences(SeqDomain),
    Functions(Arc<L2Space>),
}

impl BasisSpace {
    pub fn function_space(&self) -> Option<&Arc<L2Space>> {
        match self {
            BasisSpace::Functions(s) => Some(s),
            BasisSpace::Sequences(_) => None,
        }
    }

    fn matches(&self, ambient: Ambient) -> bool {
        match (self, ambient) {
            (BasisSpace::Sequences(d), Ambient::Sequences(e)) => *d == e,
            (BasisSpace::Functions(s), Ambient::Functions { a, b }) => s.interval() == (a, b),
            _ => false,
        }
    }

    fn zero(&self) -> Element {
        match self {
            BasisSpace::Sequences(d) => Element::Seq(Sequence::zero(*d)),
            BasisSpace::Functions(s) => Element::Func(Function::zero(s)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Completeness {
    Complete,
    PossiblyIncomplete,
}

#[derive(Debug, Clone)]
enum Generator {
    Canonical,
    Legendre,
    Fourier,
    Svd(SvdFamily),
    Explicit(Arc<Vec<Element>>),
}

/// An enumerable orthonormal family.
#[derive(Debug, Clone)]
pub struct OrthonormalBasis {
    label: String,
    space: BasisSpace,
    generator: Generator,
    completeness: Completeness,
    exhausted: bool,
}

impl OrthonormalBasis {
    /// `e_1, e_2, …` on `ℕ`, or `e_0, e_1, e_{−1}, …` on `ℤ`.
    pub fn canonical(domain: SeqDomain) -> Self {
        Self {
            label: "canonical".into(),
            space: BasisSpace::Sequences(domain),
            generator: Generator::Canonical,
            completeness: Completeness::Complete,
            exhausted: false,
        }
    }

    /// Normalized shifted Legendre polynomials `p_0, p_1, …` on the space's interval.
    pub fn legendre(space: &Arc<L2Space>) -> Self {
        Self {
            label: "legendre".into(),
            space: BasisSpace::Functions(space.clone()),
            generator: Generator::Legendre,
            completeness: Completeness::Complete,
            exhausted: false,
        }
    }

    /// `(b−a)^{−1/2} e^{2πik(x−a)/(b−a)}` for `k = 0, 1, −1, 2, −2, …`.
    pub fn fourier(space: &Arc<L2Space>) -> Self {
        Self {
            label: "fourier".into(),
            space: BasisSpace::Functions(space.clone()),
            generator: Generator::Fourier,
            completeness: Completeness::Complete,
            exhausted: false,
        }
    }

    /// A finite orthonormal family given explicitly.
    pub fn explicit(
        label: impl Into<String>,
        space: BasisSpace,
        elements: Vec<Element>,
        completeness: Completeness,
    ) -> Self {
        Self {
            label: label.into(),
            space,
            generator: Generator::Explicit(Arc::new(elements)),
            completeness,
            exhausted: false,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn space(&self) -> &BasisSpace {
        &self.space
    }

    pub fn completeness(&self) -> Completeness {
        self.completeness
    }

    /// Whether a finite family stopped short of the requested length.
    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    /// Number of available elements; `None` for infinite families.
    pub fn len(&self) -> Option<usize> {
        match &self.generator {
            Generator::Explicit(v) => Some(v.len()),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        match self.len() {
            Some(len) if n > len => Err(Error::InvalidArgument(format!(
                "basis `{}` has only {len} elements, {n} requested",
                self.label
            ))),
            _ => Ok(()),
        }
    }

    /// The `n`-th element, 0-based.
    pub fn element(&self, n: usize) -> Result<Element> {
        match (&self.generator, &self.space) {
            (Generator::Canonical, BasisSpace::Sequences(d)) => {
                Ok(Element::Seq(Sequence::canonical(*d, enumerate_index(*d, n))?))
            }
            (Generator::Legendre, BasisSpace::Functions(s)) => Ok(Element::Func(Function::legendre(s, n))),
            (Generator::Fourier, BasisSpace::Functions(s)) => {
                let len = s.length();
                let k = symmetric_index(n);
                Ok(Element::Func(Function::exponential(
                    s,
                    2.0 * PI * k as f64 / len,
                    Complex64::new(len.powf(-0.5), 0.0),
                )))
            }
            (Generator::Svd(family), space) => family.element(n, space.function_space()),
            (Generator::Explicit(v), _) => v.get(n).cloned().ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "basis `{}` has only {} elements",
                    self.label,
                    v.len()
                ))
            }),
            _ => unreachable!("generator and space are paired by construction"),
        }
    }

    pub fn elements(&self, count: usize) -> Result<Vec<Element>> {
        (0..count).map(|n| self.element(n)).collect()
    }

    /// `(⟨u_n, f⟩)_{n < count}`.
    pub fn coordinates(&self, f: &Element, count: usize) -> Result<Vec<Complex64>> {
        self.check_len(count)?;
        match (&self.generator, &self.space, f) {
            (Generator::Canonical, BasisSpace::Sequences(d), Element::Seq(s)) if s.domain() == *d => {
                Ok((0..count).map(|n| s.get(enumerate_index(*d, n))).collect())
            }
            (Generator::Legendre, BasisSpace::Functions(_), Element::Func(g))
                if g.is_analytic() && g.exponentials().is_empty() =>
            {
                let c = g.legendre_coeffs();
                Ok((0..count).map(|n| c.get(n).copied().unwrap_or(ZERO)).collect())
            }
            _ => (0..count).map(|n| self.element(n)?.inner(f)).collect(),
        }
    }

    /// `Σ_{n < len} c_n u_n`.
    pub fn synthesize(&self, coeffs: &[Complex64]) -> Result<Element> {
        self.check_len(coeffs.len())?;
        match (&self.generator, &self.space) {
            (Generator::Canonical, BasisSpace::Sequences(SeqDomain::Natural)) => Ok(Element::Seq(
                Sequence::new(SeqDomain::Natural, 1, coeffs.to_vec())?,
            )),
            (Generator::Canonical, BasisSpace::Sequences(SeqDomain::Integer)) => {
                let k = (coeffs.len() / 2) as i64;
                let mut values = vec![ZERO; (2 * k + 1) as usize];
                for (n, c) in coeffs.iter().enumerate() {
                    values[(symmetric_index(n) + k) as usize] = *c;
                }
                Ok(Element::Seq(Sequence::new(SeqDomain::Integer, -k, values)?))
            }
            (Generator::Legendre, BasisSpace::Functions(s)) => {
                Ok(Element::Func(Function::from_legendre(s, coeffs.to_vec())))
            }
            _ => {
                let mut acc = self.space.zero();
                for (n, c) in coeffs.iter().enumerate() {
                    if *c != ZERO {
                        acc = acc.axpy(*c, &self.element(n)?)?;
                    }
                }
                Ok(acc)
            }
        }
    }

    /// Gram matrix `⟨u_i, u_j⟩` of the first `count` elements.
    pub fn gram(&self, count: usize) -> Result<DenseMatrix> {
        let els = self.elements(count)?;
        let mut g = DenseMatrix::zeros(count, count);
        for i in 0..count {
            for j in 0..count {
                g[(i, j)] = els[i].inner(&els[j])?;
            }
        }
        Ok(g)
    }

    /// Whether the basis spans a subspace of the ambient space of `op`.
    pub fn lives_in(&self, op: &BoundedOperator) -> bool {
        self.space.matches(op.ambient())
    }
}

/// Function space for `op`, if it acts on functions.
pub fn operator_space(op: &BoundedOperator, n_max: usize) -> Result<BasisSpace> {
    Ok(match op.ambient() {
        Ambient::Sequences(d) => BasisSpace::Sequences(d),
        Ambient::Functions { a, b } => BasisSpace::Functions(L2Space::for_truncation(a, b, n_max)?),
    })
}

/// Trial `φ` and test `ψ` families of the exact SVD of `op`.
pub fn svd_bases(op: &BoundedOperator, space: &BasisSpace) -> Result<(OrthonormalBasis, OrthonormalBasis)> {
    let svd = op.exact_svd()?;
    if !space.matches(op.ambient()) {
        return Err(Error::Representation(
            "basis space does not match the operator".into(),
        ));
    }
    let make = |family: SvdFamily, label: &str| OrthonormalBasis {
        label: label.into(),
        space: space.clone(),
        generator: Generator::Svd(family),
        completeness: Completeness::Complete,
        exhausted: false,
    };
    Ok((make(svd.right, "svd-right"), make(svd.left, "svd-left")))
}

/// Arnoldi process on `K(A, g)`: orthonormal `q_0, …, q_m` and the
/// `(m+1)×m` upper-Hessenberg `H̃` with `A Q_m = Q_{m+1} H̃`.
#[derive(Debug, Clone)]
pub struct Arnoldi {
    vectors: Vec<Element>,
    hessenberg: Vec<Vec<Complex64>>,
    beta: f64,
    breakdown: bool,
}

impl Arnoldi {
    /// Starts the process at `q_0 = g/‖g‖`.
    pub fn start(g: &Element) -> Result<Self> {
        let beta = g.norm()?;
        if beta == 0.0 {
            return Err(Error::InvalidArgument("Krylov space of the zero vector".into()));
        }
        Ok(Self {
            vectors: vec![g.scaled((1.0 / beta).into())],
            hessenberg: Vec::new(),
            beta,
            breakdown: false,
        })
    }

    /// One step of modified Gram–Schmidt with a reorthogonalization pass.
    /// Returns `false` once the space is exhausted.
    pub fn step(&mut self, op: &BoundedOperator) -> Result<bool> {
        if self.breakdown {
            return Ok(false);
        }
        let j = self.hessenberg.len();
        let mut w = op.apply(&self.vectors[j])?;
        let scale = w.norm()?;
        let mut h = vec![ZERO; j + 2];
        for _pass in 0..2 {
            for (i, q) in self.vectors.iter().enumerate() {
                let c = q.inner(&w)?;
                h[i] += c;
                w = w.axpy(-c, q)?;
            }
        }
        let norm = w.norm()?;
        self.hessenberg.push(h);
        if norm <= ARNOLDI_BREAKDOWN_TOLERANCE * scale || norm == 0.0 {
            self.breakdown = true;
            return Ok(false);
        }
        self.hessenberg[j][j + 1] = norm.into();
        self.vectors.push(w.scaled((1.0 / norm).into()));
        Ok(true)
    }

    /// Runs up to `steps` steps.
    pub fn run(op: &BoundedOperator, g: &Element, steps: usize) -> Result<Self> {
        let mut ar = Self::start(g)?;
        for _ in 0..steps {
            if !ar.step(op)? {
                break;
            }
        }
        Ok(ar)
    }

    /// Number of completed steps `m`.
    pub fn steps(&self) -> usize {
        self.hessenberg.len()
    }

    pub fn vectors(&self) -> &[Element] {
        &self.vectors
    }

    /// `‖g‖`.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Whether the Krylov space was exhausted before the requested step count.
    pub fn broke_down(&self) -> bool {
        self.breakdown
    }

    /// Leading `(n+1)×n` block of `H̃`; after a breakdown at step `n` the
    /// last row is zero.
    pub fn hessenberg(&self, n: usize) -> DenseMatrix {
        DenseMatrix::from_fn(n + 1, n, |i, j| {
            self.hessenberg
                .get(j)
                .and_then(|col| col.get(i))
                .copied()
                .unwrap_or(ZERO)
        })
    }
}

/// Orthonormal basis of `K_N(A, g) = span{g, Ag, …, A^{N−1} g}`.
///
/// On breakdown at step `m < N` the basis has `m` elements and reports
/// exhaustion.
pub fn krylov_basis(op: &BoundedOperator, g: &Element, n: usize) -> Result<OrthonormalBasis> {
    if n < 1 {
        return Err(Error::InvalidArgument("Krylov dimension must be positive".into()));
    }
    let arnoldi = Arnoldi::run(op, g, n - 1)?;
    let mut vectors = arnoldi.vectors;
    // A breakdown on the last step leaves a direction we never built.
    let exhausted = vectors.len() < n;
    vectors.truncate(n);
    let mut basis = OrthonormalBasis::explicit(
        "krylov",
        space_of(g),
        vectors,
        Completeness::PossiblyIncomplete,
    );
    basis.exhausted = exhausted;
    Ok(basis)
}

fn space_of(e: &Element) -> BasisSpace {
    match e {
        Element::Seq(s) => BasisSpace::Sequences(s.domain()),
        Element::Func(f) => BasisSpace::Functions(f.space().clone()),
    }
}

/// Orthonormalization of `A u_0, …, A u_{N−1}`: the test system for which
/// the Petrov–Galerkin solution minimizes the residual over the trial span.
pub fn image_basis(op: &BoundedOperator, trial: &OrthonormalBasis, n: usize) -> Result<OrthonormalBasis> {
    trial.check_len(n)?;
    let mut out: Vec<Element> = Vec::with_capacity(n);
    let mut exhausted = false;
    for j in 0..n {
        let mut w = op.apply(&trial.element(j)?)?;
        let scale = w.norm()?;
        for _pass in 0..2 {
            for q in &out {
                let c = q.inner(&w)?;
                w = w.axpy(-c, q)?;
            }
        }
        let norm = w.norm()?;
        if norm <= ARNOLDI_BREAKDOWN_TOLERANCE * scale || norm == 0.0 {
            exhausted = true;
            break;
        }
        out.push(w.scaled((1.0 / norm).into()));
    }
    let mut basis = OrthonormalBasis::explicit(
        format!("{}-image", trial.label()),
        trial.space().clone(),
        out,
        Completeness::PossiblyIncomplete,
    );
    basis.exhausted = exhausted;
    Ok(basis)
}

/// Test system `v_1, …, v_{N_max}` making every compression `A_N`
/// singular: `v_N ⊥ A u_j` for `j ≤ N` and `v_N ⊥ v_i` for `i < N`.
///
/// The construction is carried out in the span of the first `horizon` trial
/// vectors, which must contain `A u_j` for `j < N_max` for the result to be
/// exact; `horizon ≥ 2·N_max` is required.
pub fn adversarial_test_basis(
    op: &BoundedOperator,
    trial: &OrthonormalBasis,
    n_max: usize,
    horizon: usize,
) -> Result<OrthonormalBasis> {
    if horizon < 2 * n_max {
        return Err(Error::Precondition(format!(
            "horizon {horizon} is smaller than 2·N_max = {}",
            2 * n_max
        )));
    }
    if !trial.lives_in(op) {
        return Err(Error::Representation(
            "trial basis does not live in the operator's space".into(),
        ));
    }
    trial.check_len(horizon)?;
    // Trial coordinates of A u_j over the window.
    let images: Vec<Vec<Complex64>> = (0..n_max)
        .map(|j| trial.coordinates(&op.apply(&trial.element(j)?)?, horizon))
        .collect::<Result<_>>()?;
    let mut chosen: Vec<Vec<Complex64>> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let rows: Vec<&Vec<Complex64>> = images[..n].iter().chain(chosen.iter()).collect();
        let c = DenseMatrix::from_fn(rows.len(), horizon, |i, k| rows[i][k].conj());
        let null = null_space_basis(&c);
        let v = null.into_iter().next().ok_or_else(|| {
            Error::Precondition(format!("constraint matrix has full rank {horizon} at N = {n}"))
        })?;
        chosen.push(v);
    }
    let elements = chosen
        .iter()
        .map(|c| trial.synthesize(c))
        .collect::<Result<Vec<_>>>()?;
    Ok(OrthonormalBasis::explicit(
        "adversarial",
        trial.space().clone(),
        elements,
        Completeness::PossiblyIncomplete,
    ))
}
