//! Element specifications for data and exact solutions.
//!
//! * `zero`
//! * `poly:c0,c1,…` monomial coefficients of a function
//! * `func:NAME` named functions: `x`, `x2`, `x2-half`
//! * `basis-e:k` canonical vector `e_k` of a sequence space
//! * `law:LAW` the sequence `n ↦ LAW(n)` from the first index of `ℕ`

use std::sync::Arc;

use hilbert_trunc::bases::BasisSpace;
use hilbert_trunc::{Element, Function, L2Space, SeqDomain, Sequence, SequenceLaw};

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum DatumSpec {
    Zero,
    Poly(Vec<f64>),
    BasisE(i64),
    Law(SequenceLaw),
}

pub const NAMED_FUNCTIONS: [(&str, &str); 3] = [
    ("x", "x"),
    ("x2", "x²"),
    ("x2-half", "x²/2"),
];

impl DatumSpec {
    pub fn parse(field: &str, s: &str) -> Result<Self, CliError> {
        let bad = |why: String| CliError::Config(format!("{field}: {why}"));
        let s = s.trim();
        if s == "zero" {
            return Ok(DatumSpec::Zero);
        }
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| bad(format!("expected `kind:value`, got `{s}`")))?;
        match kind {
            "poly" => body
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map(DatumSpec::Poly)
                .map_err(|e| bad(format!("`{body}`: {e}"))),
            "func" => match body {
                "x" => Ok(DatumSpec::Poly(vec![0.0, 1.0])),
                "x2" => Ok(DatumSpec::Poly(vec![0.0, 0.0, 1.0])),
                "x2-half" => Ok(DatumSpec::Poly(vec![0.0, 0.0, 0.5])),
                other => Err(bad(format!("unknown function `{other}`"))),
            },
            "basis-e" => body
                .trim()
                .parse()
                .map(DatumSpec::BasisE)
                .map_err(|e| bad(format!("`{body}`: {e}"))),
            "law" => body
                .parse()
                .map(DatumSpec::Law)
                .map_err(|e: hilbert_trunc::Error| bad(e.to_string())),
            other => Err(bad(format!("unknown element kind `{other}`"))),
        }
    }

    /// The element in `space`.
    pub fn build(&self, field: &str, space: &BasisSpace) -> Result<Element, CliError> {
        let mismatch = |what: &str| CliError::Config(format!("{field}: {what} does not fit the operator's space"));
        match (self, space) {
            (DatumSpec::Zero, BasisSpace::Sequences(d)) => Ok(Element::Seq(Sequence::zero(*d))),
            (DatumSpec::Zero, BasisSpace::Functions(sp)) => Ok(Element::Func(Function::zero(sp))),
            (DatumSpec::Poly(c), BasisSpace::Functions(sp)) => Ok(poly(sp, c)),
            (DatumSpec::BasisE(k), BasisSpace::Sequences(d)) => Sequence::canonical(*d, *k)
                .map(Element::Seq)
                .map_err(|e| CliError::Config(format!("{field}: {e}"))),
            (DatumSpec::Law(law), BasisSpace::Sequences(SeqDomain::Natural)) => {
                Sequence::from_law(SeqDomain::Natural, law.clone(), 1, 0)
                    .map(Element::Seq)
                    .map_err(|e| CliError::Config(format!("{field}: {e}")))
            }
            (DatumSpec::Poly(_), _) => Err(mismatch("a polynomial")),
            (DatumSpec::BasisE(_), _) => Err(mismatch("a canonical vector")),
            (DatumSpec::Law(_), _) => Err(mismatch("a sequence law on ℕ")),
        }
    }
}

fn poly(sp: &Arc<L2Space>, c: &[f64]) -> Element {
    Element::Func(Function::polynomial(sp, c))
}
