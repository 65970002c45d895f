//! Infinite-dimensional error and residual of truncated solutions, and an
//! advisory classifier for their mode of convergence.

use std::fmt;

use num_complex::Complex64;

use crate::bases::OrthonormalBasis;
use crate::error::{Error, Result};
use crate::operators::BoundedOperator;
use crate::space::Element;
use crate::truncation::{lift, ApproxSolution};

/// Default tracked component indices (1-based).
pub const DEFAULT_TRACKED: [usize; 5] = [1, 2, 3, 5, 10];

/// Threshold below which a norm or component counts as zero.
pub const TOL_STRONG: f64 = 1e-6;

/// Minimum series length accepted by [`classify`].
pub const MIN_SERIES_LEN: usize = 8;

/// `⟨u_n, 𝓔_N⟩` and `⟨v_n, 𝕽_N⟩` for one tracked index `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackedComponent {
    pub index: usize,
    pub error: Option<Complex64>,
    pub residual: Option<Complex64>,
}

/// Norms of `𝓔_N = f − f̂^(N)` and `𝕽_N = g − A f̂^(N)` at one `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord {
    pub n: usize,
    /// Absent when no exact solution was supplied.
    pub err_norm: Option<f64>,
    pub res_norm: f64,
    pub sol_norm: f64,
    pub eps_norm: f64,
    pub tracked: Vec<TrackedComponent>,
}

/// Builds the record for a truncated solution.
pub fn evaluate(
    op: &BoundedOperator,
    g: &Element,
    f_exact: Option<&Element>,
    sol: &ApproxSolution,
    trial: &OrthonormalBasis,
    test: &OrthonormalBasis,
    tracked: &[usize],
) -> Result<ConvergenceRecord> {
    let f_hat = lift(sol, trial)?;
    evaluate_lifted(op, g, f_exact, &f_hat, sol.coeffs.len(), sol.eps_norm, trial, test, tracked)
}

/// Same as [`evaluate`] for an already lifted approximation `f̂`.
#[allow(clippy::too_many_arguments)]
pub fn evaluate_lifted(
    op: &BoundedOperator,
    g: &Element,
    f_exact: Option<&Element>,
    f_hat: &Element,
    n: usize,
    eps_norm: f64,
    trial: &OrthonormalBasis,
    test: &OrthonormalBasis,
    tracked: &[usize],
) -> Result<ConvergenceRecord> {
    let residual = g.sub(&op.apply(f_hat)?)?;
    let error = f_exact.map(|f| f.sub(f_hat)).transpose()?;
    let component = |basis: &OrthonormalBasis, e: &Element, index: usize| -> Result<Option<Complex64>> {
        if index == 0 || basis.len().is_some_and(|len| index > len) {
            return Ok(None);
        }
        Ok(Some(basis.element(index - 1)?.inner(e)?))
    };
    let mut comps = Vec::with_capacity(tracked.len());
    for &index in tracked {
        comps.push(TrackedComponent {
            index,
            error: match &error {
                Some(e) => component(trial, e, index)?,
                None => None,
            },
            residual: component(test, &residual, index)?,
        });
    }
    Ok(ConvergenceRecord {
        n,
        err_norm: error.map(|e| e.norm()).transpose()?,
        res_norm: residual.norm()?,
        sol_norm: f_hat.norm()?,
        eps_norm,
        tracked: comps,
    })
}

/// Which indicator to classify.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Indicator {
    Error,
    Residual,
}

/// Mode of vanishing, strongest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConvergenceMode {
    Strong,
    WeakNotStrong,
    ComponentwiseNotWeak,
    None,
}

impl fmt::Display for ConvergenceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConvergenceMode::Strong => "strong",
            ConvergenceMode::WeakNotStrong => "weak-not-strong",
            ConvergenceMode::ComponentwiseNotWeak => "componentwise-not-weak",
            ConvergenceMode::None => "none",
        })
    }
}

/// The fitted trends behind a classification.
#[derive(Debug, Clone, PartialEq)]
pub struct Evidence {
    pub last_norm: f64,
    pub max_norm: f64,
    /// Log-log slope of the norm over the second half of the series.
    pub norm_slope: f64,
    pub norm_vanishes: bool,
    pub components_vanish: bool,
    pub bounded: bool,
}

/// Classification of a series; heuristic, so always marked advisory.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub mode: ConvergenceMode,
    pub evidence: Evidence,
    pub advisory: bool,
}

/// Classifies the decay of `𝓔_N` or `𝕽_N` along a series of records.
///
/// Finite data cannot decide weak convergence; the rule used here is
/// componentwise vanishing of the tracked indices plus a uniform norm bound.
/// A sequence *vanishes* when its second half stays below [`TOL_STRONG`], or
/// its last value is below `TOL_STRONG` with a non-increasing trend. The norm
/// is *bounded* when it vanishes or its log-log slope over the second half is
/// at most `0.1`.
pub fn classify(series: &[ConvergenceRecord], which: Indicator) -> Result<Classification> {
    if series.len() < MIN_SERIES_LEN {
        return Err(Error::InsufficientSeries {
            needed: MIN_SERIES_LEN,
            got: series.len(),
        });
    }
    let ns: Vec<f64> = series.iter().map(|r| r.n as f64).collect();
    let norms: Vec<f64> = series
        .iter()
        .map(|r| match which {
            Indicator::Error => r.err_norm.ok_or_else(|| {
                Error::InvalidArgument("error norms need an exact solution".into())
            }),
            Indicator::Residual => Ok(r.res_norm),
        })
        .collect::<Result<_>>()?;
    let norm_slope = loglog_slope(&ns, &norms);
    let norm_vanishes = vanishes(&ns, &norms);
    let half = norms.len() / 2;
    let second_half_max = norms[half..].iter().copied().fold(0.0, f64::max);
    let bounded = norms.iter().all(|v| v.is_finite())
        && (second_half_max <= TOL_STRONG || norm_slope <= 0.1);

    // Each tracked index must have data on the second half of the series.
    let indices: Vec<usize> = series[0].tracked.iter().map(|t| t.index).collect();
    let mut components_vanish = !indices.is_empty();
    for (k, _) in indices.iter().enumerate() {
        let values: Vec<(f64, f64)> = series
            .iter()
            .filter_map(|r| {
                let t = r.tracked.get(k)?;
                let v = match which {
                    Indicator::Error => t.error,
                    Indicator::Residual => t.residual,
                };
                v.map(|z| (r.n as f64, z.norm()))
            })
            .collect();
        if values.len() < 2 {
            components_vanish = false;
            continue;
        }
        let (xs, ys): (Vec<f64>, Vec<f64>) = values.into_iter().unzip();
        if !vanishes(&xs, &ys) {
            components_vanish = false;
        }
    }

    let mode = if norm_vanishes {
        ConvergenceMode::Strong
    } else if components_vanish && bounded {
        ConvergenceMode::WeakNotStrong
    } else if components_vanish {
        ConvergenceMode::ComponentwiseNotWeak
    } else {
        ConvergenceMode::None
    };
    Ok(Classification {
        mode,
        evidence: Evidence {
            last_norm: *norms.last().expect("non-empty"),
            max_norm: norms.iter().copied().fold(0.0, f64::max),
            norm_slope,
            norm_vanishes,
            components_vanish,
            bounded,
        },
        advisory: true,
    })
}

fn vanishes(xs: &[f64], ys: &[f64]) -> bool {
    let half = ys.len() / 2;
    let tail_max = ys[half..].iter().copied().fold(0.0, f64::max);
    let last = *ys.last().expect("non-empty");
    tail_max <= TOL_STRONG || (last <= TOL_STRONG && loglog_slope(xs, ys) <= 0.0)
}

/// Least-squares slope of `ln y` against `ln x` over the second half of the
/// points (zeros are floored at the smallest positive double).
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let half = xs.len() / 2;
    let pts: Vec<(f64, f64)> = xs[half..]
        .iter()
        .zip(&ys[half..])
        .filter(|(x, _)| **x > 0.0)
        .map(|(x, y)| (x.ln(), y.max(f64::MIN_POSITIVE).ln()))
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::OrthonormalBasis;
    use crate::law::SequenceLaw;
    use crate::space::{Function, L2Space, SeqDomain, Sequence};
    use crate::truncation::{compress, solve_direct, solve_with_family, SolutionFamily};
    use proptest::prelude::*;

    fn shift_series(family: SolutionFamily, n_max: usize) -> Vec<ConvergenceRecord> {
        let r = BoundedOperator::right_shift();
        let e = OrthonormalBasis::canonical(SeqDomain::Natural);
        let zero = Element::Seq(Sequence::zero(SeqDomain::Natural));
        (1..=n_max)
            .map(|n| {
                let p = compress(&r, &e, &e, n, &zero).unwrap();
                let s = solve_with_family(&p, family).unwrap();
                evaluate(&r, &zero, Some(&zero), &s, &e, &e, &DEFAULT_TRACKED).unwrap()
            })
            .collect()
    }

    #[test]
    fn exact_solution_has_zero_error_and_residual() {
        let sp = L2Space::for_truncation(0.0, 1.0, 10).unwrap();
        let v = BoundedOperator::volterra();
        let leg = OrthonormalBasis::legendre(&sp);
        let f = Element::Func(Function::polynomial(&sp, &[0.0, 1.0]));
        let g = v.apply(&f).unwrap();
        let p = compress(&v, &leg, &leg, 10, &g).unwrap();
        let s = solve_direct(&p).unwrap();
        let rec = evaluate(&v, &g, Some(&f), &s, &leg, &leg, &DEFAULT_TRACKED).unwrap();
        assert!(rec.err_norm.unwrap() <= 1e-6);
        assert!((rec.sol_norm - 1.0 / 3f64.sqrt()).abs() < 1e-4);
        assert!(rec.res_norm <= v.norm().unwrap() * rec.err_norm.unwrap() + 1e-15);
        let rec = evaluate(&v, &g, None, &s, &leg, &leg, &[1]).unwrap();
        assert!(rec.err_norm.is_none());
        assert!(rec.tracked[0].error.is_none());
    }

    #[test]
    fn last_unit_family_converges_weakly_only() {
        let series = shift_series(SolutionFamily::LastUnit, 30);
        for r in &series {
            assert_eq!(r.err_norm, Some(1.0));
            assert_eq!(r.res_norm, 1.0);
            for t in &r.tracked {
                if r.n > t.index {
                    assert_eq!(t.error.unwrap().norm(), 0.0);
                    assert_eq!(t.residual.unwrap().norm(), 0.0);
                }
            }
        }
        let c = classify(&series, Indicator::Error).unwrap();
        assert_eq!(c.mode, ConvergenceMode::WeakNotStrong);
        assert!(c.advisory);
    }

    #[test]
    fn scaled_family_is_componentwise_only() {
        let series = shift_series(SolutionFamily::ScaledLastUnit, 30);
        assert!((series.last().unwrap().sol_norm - 30.0).abs() < 1e-12);
        let c = classify(&series, Indicator::Error).unwrap();
        assert_eq!(c.mode, ConvergenceMode::ComponentwiseNotWeak);
    }

    #[test]
    fn short_series_is_rejected() {
        let series = shift_series(SolutionFamily::LastUnit, 5);
        assert!(matches!(
            classify(&series, Indicator::Error),
            Err(Error::InsufficientSeries { needed: 8, got: 5 })
        ));
    }

    #[test]
    fn diagonal_problem_is_strong() {
        let op = BoundedOperator::multiplication_seq(SequenceLaw::power(1.0, 1.0)).unwrap();
        let e = OrthonormalBasis::canonical(SeqDomain::Natural);
        let f = Element::Seq(Sequence::from_law(SeqDomain::Natural, SequenceLaw::power(1.0, 4.0), 1, 0).unwrap());
        let g = Element::Seq(Sequence::from_law(SeqDomain::Natural, SequenceLaw::power(1.0, 5.0), 1, 0).unwrap());
        let series: Vec<_> = (1..=10usize)
            .map(|k| {
                let p = compress(&op, &e, &e, 20 * k, &g).unwrap();
                let s = solve_direct(&p).unwrap();
                evaluate(&op, &g, Some(&f), &s, &e, &e, &DEFAULT_TRACKED).unwrap()
            })
            .collect();
        let c = classify(&series, Indicator::Error).unwrap();
        assert_eq!(c.mode, ConvergenceMode::Strong);
    }

    proptest! {
        #[test]
        fn strong_implies_weak_and_componentwise_evidence(
            base in 1e-9f64..1.0,
            rate in 0.0f64..3.0,
            comp_scale in 0.0f64..1.0,
        ) {
            let series: Vec<ConvergenceRecord> = (1..=12usize)
                .map(|n| {
                    let norm = base * (n as f64).powf(-rate);
                    ConvergenceRecord {
                        n,
                        err_norm: Some(norm),
                        res_norm: norm,
                        sol_norm: 1.0,
                        eps_norm: 0.0,
                        tracked: vec![TrackedComponent {
                            index: 1,
                            error: Some(Complex64::new(comp_scale * norm, 0.0)),
                            residual: Some(Complex64::new(comp_scale * norm, 0.0)),
                        }],
                    }
                })
                .collect();
            let c = classify(&series, Indicator::Error).unwrap();
            if c.mode == ConvergenceMode::Strong {
                prop_assert!(c.evidence.components_vanish);
                prop_assert!(c.evidence.bounded);
            }
        }
    }
}
