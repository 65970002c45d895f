//! Truncation of a noisy datum `g + ν` along a singular system.
//!
//! With `A = Σ σ_n |ψ_n⟩⟨φ_n|`, `g = Σ g_n ψ_n`, `ν = Σ ν_n ψ_n` and the
//! solution `f = Σ (g_n/σ_n) φ_n`, indices starting at 1, the truncated
//! solution in the singular bases is `f̂ = Σ_{n≤N} (g_n + ν_n)/σ_n φ_n`, and
//!
//! ```text
//! ‖𝕽_N‖² = Σ_{n≤N} ν_n² + Σ_{n>N} g_n²
//! ‖𝓔_N‖² = α(N) + β(N),  α(N) = Σ_{n≤N} ν_n²/σ_n²,  β(N) = Σ_{n>N} f_n².
//! ```

use crate::bases::{svd_bases, BasisSpace};
use crate::diagnostics::evaluate;
use crate::error::{Error, Result};
use crate::law::SequenceLaw;
use crate::operators::{BoundedOperator, OperatorSpec};
use crate::space::{Element, SeqDomain, Sequence};
use crate::truncation::{compress, solve_direct};

/// Singular values, clean datum and noise as closed-form laws in `n ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    pub sigma: SequenceLaw,
    pub g: SequenceLaw,
    pub nu: SequenceLaw,
}

impl NoiseModel {
    pub fn new(sigma: SequenceLaw, g: SequenceLaw, nu: SequenceLaw) -> Result<Self> {
        sigma.validate_weights(1)?;
        if !sigma.tends_to_zero() {
            return Err(Error::InvalidLaw(format!(
                "singular values `{sigma}` do not tend to zero"
            )));
        }
        g.tail_sum_sq(0)?;
        nu.tail_sum_sq(0)?;
        Ok(Self { sigma, g, nu })
    }

    /// `σ_n = 1/n`, `g_n = 1/n²`, `ν_n = n^(−3/2)`.
    pub fn harmonic() -> Self {
        Self::with_noise_level(1.0)
    }

    /// Same as [`NoiseModel::harmonic`] with `ν_n = level · n^(−3/2)`.
    pub fn with_noise_level(level: f64) -> Self {
        Self {
            sigma: SequenceLaw::power(1.0, 1.0),
            g: SequenceLaw::power(1.0, 2.0),
            nu: SequenceLaw::power(level, 1.5),
        }
    }

    /// Law of the exact solution `f_n = g_n / σ_n`.
    pub fn solution_law(&self) -> Result<SequenceLaw> {
        self.g.quotient(&self.sigma)
    }

    /// `‖ν‖²`.
    pub fn noise_norm_sq(&self) -> Result<f64> {
        self.nu.tail_sum_sq(0)
    }

    /// Whether `ν ∈ ran A`, i.e. `Σ ν_n²/σ_n² < ∞`.
    pub fn noise_in_range(&self) -> bool {
        self.nu
            .quotient(&self.sigma)
            .and_then(|l| l.tail_sum_sq(0))
            .is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoisePoint {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub res_sq: f64,
    pub err_sq: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSeries {
    /// Points for `N = 0, 1, …, N_max`.
    pub points: Vec<NoisePoint>,
    /// Smallest minimiser of `err_sq`.
    pub n0: usize,
    pub noise_norm_sq: f64,
}

/// Closed-form `α`, `β`, `‖𝕽_N‖²` and `‖𝓔_N‖²` for `N = 0..=n_max`.
pub fn noise_series(model: &NoiseModel, n_max: usize) -> Result<NoiseSeries> {
    let f = model.solution_law()?;
    let top = n_max as i64;
    let mut beta = vec![0.0; n_max + 1];
    let mut g_tail = vec![0.0; n_max + 1];
    beta[n_max] = f.tail_sum_sq(top)?;
    g_tail[n_max] = model.g.tail_sum_sq(top)?;
    for n in (0..n_max).rev() {
        let k = n as i64 + 1;
        beta[n] = beta[n + 1] + f.value(k).powi(2);
        g_tail[n] = g_tail[n + 1] + model.g.value(k).powi(2);
    }
    let mut points = Vec::with_capacity(n_max + 1);
    let (mut alpha, mut nu_head) = (0.0, 0.0);
    for n in 0..=n_max {
        if n > 0 {
            let k = n as i64;
            let nu = model.nu.value(k);
            alpha += (nu / model.sigma.value(k)).powi(2);
            nu_head += nu * nu;
        }
        points.push(NoisePoint {
            n,
            alpha,
            beta: beta[n],
            res_sq: nu_head + g_tail[n],
            err_sq: alpha + beta[n],
        });
    }
    let min = points.iter().map(|p| p.err_sq).fold(f64::INFINITY, f64::min);
    let n0 = points
        .iter()
        .find(|p| p.err_sq <= min * (1.0 + 1e-12))
        .map(|p| p.n)
        .expect("non-empty");
    Ok(NoiseSeries {
        points,
        n0,
        noise_norm_sq: model.noise_norm_sq()?,
    })
}

/// One truncation level of the end-to-end noisy solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelinePoint {
    pub n: usize,
    pub res_sq: f64,
    pub err_sq: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineCheck {
    pub points: Vec<PipelinePoint>,
    /// Largest `|pipeline − closed form|` over both squared norms.
    pub max_discrepancy: f64,
}

/// Solves `A f = g + ν` in the singular bases of a weighted shift on `ℕ` for
/// `N = 1..=n_max` and compares the resulting squared norms with
/// [`noise_series`].
pub fn noisy_pipeline_check(
    op: &BoundedOperator,
    model: &NoiseModel,
    n_max: usize,
) -> Result<PipelineCheck> {
    if !matches!(op.spec(), OperatorSpec::WeightedRightShift(_)) {
        return Err(Error::Representation(format!(
            "noisy data along the singular system of `{}` has no closed form",
            op.label()
        )));
    }
    let svd = op.exact_svd()?;
    for n in 1..=100usize {
        let (a, b) = (svd.sigma(n - 1), model.sigma.value(n as i64));
        if (a - b).abs() > 1e-14 * b.abs().max(f64::MIN_POSITIVE) {
            return Err(Error::InvalidArgument(format!(
                "σ_{n} = {a} of `{}` differs from the model value {b}",
                op.label()
            )));
        }
    }
    let domain = SeqDomain::Natural;
    let g = Element::Seq(Sequence::from_law(domain, model.g.clone(), 2, 1)?);
    let datum = Element::Seq(Sequence::from_law(domain, model.g.plus(&model.nu), 2, 1)?);
    let f = Element::Seq(Sequence::from_law(domain, model.solution_law()?, 1, 0)?);
    let (trial, test) = svd_bases(op, &BasisSpace::Sequences(domain))?;
    let closed = noise_series(model, n_max)?;
    let mut points = Vec::with_capacity(n_max);
    let mut max_discrepancy: f64 = 0.0;
    for n in 1..=n_max {
        let p = compress(op, &trial, &test, n, &datum)?;
        let sol = solve_direct(&p)?;
        let rec = evaluate(op, &g, Some(&f), &sol, &trial, &test, &[])?;
        let err = rec.err_norm.expect("exact solution supplied");
        let point = PipelinePoint {
            n,
            res_sq: rec.res_norm * rec.res_norm,
            err_sq: err * err,
        };
        let c = &closed.points[n];
        max_discrepancy = max_discrepancy
            .max((point.res_sq - c.res_sq).abs())
            .max((point.err_sq - c.err_sq).abs());
        points.push(point);
    }
    Ok(PipelineCheck {
        points,
        max_discrepancy,
    })
}
