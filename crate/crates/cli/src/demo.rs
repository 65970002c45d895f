//! Demonstrations of pathological truncations, each checking its defining
//! property.

use std::fmt::{self, Write};

use hilbert_trunc::bases::{adversarial_test_basis, OrthonormalBasis};
use hilbert_trunc::diagnostics::{classify, evaluate, ConvergenceMode, Indicator, DEFAULT_TRACKED};
use hilbert_trunc::operators::BoundedOperator;
use hilbert_trunc::truncation::{compress, solve_with_family, SolutionFamily};
use hilbert_trunc::{singular_values, Element, Function, L2Space, SeqDomain, Sequence};

use crate::output::format_float;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum DemoName {
    /// Volterra operator with a test system that makes every truncation singular.
    BadTruncation,
    /// Right shift with the unbounded family f̂ = N e_N.
    PathologicalFamily,
    /// Right shift with f̂ = e_N: unit residual that vanishes only weakly.
    ShiftWeakResidual,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DemoReport {
    pub name: &'static str,
    pub lines: Vec<String>,
    pub pass: bool,
}

impl fmt::Display for DemoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "demo {}", self.name)?;
        for l in &self.lines {
            writeln!(f, "{l}")?;
        }
        writeln!(f, "overall: {}", if self.pass { "PASS" } else { "FAIL" })
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn demo(name: DemoName) -> Result<DemoReport, CliError> {
    match name {
        DemoName::BadTruncation => bad_truncation(),
        DemoName::PathologicalFamily => shift_family("pathological-family", SolutionFamily::ScaledLastUnit),
        DemoName::ShiftWeakResidual => shift_family("shift-weak-residual", SolutionFamily::LastUnit),
    }
}

fn bad_truncation() -> Result<DemoReport, CliError> {
    let (n_max, horizon) = (20, 80);
    let sp = L2Space::for_truncation(0.0, 1.0, horizon)?;
    let v = BoundedOperator::volterra();
    let trial = OrthonormalBasis::legendre(&sp);
    let test = adversarial_test_basis(&v, &trial, n_max, horizon)?;
    let zero = Element::Func(Function::zero(&sp));
    let mut lines = vec![format!(
        "operator volterra, trial legendre, adversarial test system from {horizon} Legendre elements"
    )];
    let mut pass = true;
    for n in 1..=n_max {
        let sv = singular_values(&compress(&v, &trial, &test, n, &zero)?.matrix);
        let smin = *sv.last().expect("N ≥ 1");
        let ok = smin <= 1e-10;
        pass &= ok;
        lines.push(format!("{} N = {n:>2}: σ_min(A_N) = {}", verdict(ok), format_float(smin)));
    }
    Ok(DemoReport {
        name: "bad-truncation",
        lines,
        pass,
    })
}

fn shift_family(name: &'static str, family: SolutionFamily) -> Result<DemoReport, CliError> {
    let r = BoundedOperator::right_shift();
    let e = OrthonormalBasis::canonical(SeqDomain::Natural);
    let zero = Element::Seq(Sequence::zero(SeqDomain::Natural));
    let mut records = Vec::new();
    for n in 1..=100 {
        let p = compress(&r, &e, &e, n, &zero)?;
        let s = solve_with_family(&p, family)?;
        records.push(evaluate(&r, &zero, Some(&zero), &s, &e, &e, &DEFAULT_TRACKED)?);
    }
    let mut lines = vec![format!("operator right-shift, zero datum, family {family}, N = 1..=100")];
    let mut pass = true;
    let components_ok = records.iter().all(|rec| {
        rec.tracked
            .iter()
            .filter(|t| rec.n > t.index)
            .all(|t| t.residual.is_some_and(|z| z.norm() <= 1e-12) && t.error.is_some_and(|z| z.norm() <= 1e-12))
    });
    pass &= components_ok;
    lines.push(format!(
        "{} tracked components {:?} of error and residual ≤ 1e-12 once N exceeds the index",
        verdict(components_ok),
        DEFAULT_TRACKED
    ));
    let err = classify(&records, Indicator::Error)?;
    let res = classify(&records, Indicator::Residual)?;
    match family {
        SolutionFamily::LastUnit => {
            let ok = records.iter().all(|r| r.res_norm == 1.0);
            pass &= ok;
            lines.push(format!("{} res_norm = 1 at every N", verdict(ok)));
            let ok = res.mode == ConvergenceMode::WeakNotStrong;
            pass &= ok;
            lines.push(format!("{} residual classification (advisory): {}", verdict(ok), res.mode));
        }
        _ => {
            let mut s = String::new();
            for r in records.iter().filter(|r| [1, 10, 100].contains(&r.n)) {
                write!(s, " N = {}: {};", r.n, format_float(r.sol_norm)).unwrap();
            }
            let ok = records.windows(2).all(|w| w[1].sol_norm > w[0].sol_norm);
            pass &= ok;
            lines.push(format!("{} sol_norm grows without bound:{s}", verdict(ok)));
            let ok = err.mode == ConvergenceMode::ComponentwiseNotWeak;
            pass &= ok;
            lines.push(format!("{} error classification (advisory): {}", verdict(ok), err.mode));
            lines.push(format!("     residual classification (advisory): {}", res.mode));
        }
    }
    Ok(DemoReport { name, lines, pass })
}
