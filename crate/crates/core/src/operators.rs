//! Model operators and their capabilities.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::law::SequenceLaw;
use crate::space::{Element, Function, L2Space, SeqDomain, Sequence};

/// Which operator to build.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorSpec {
    /// `M^(a) e_n = a_n e_n` on `ℓ²(ℕ)`.
    MultiplicationSeq(SequenceLaw),
    /// `R e_n = e_{n+1}` on `ℓ²(ℕ)`.
    RightShift,
    /// `𝓡 e_n = σ_n e_{n+1}` on `ℓ²(ℕ)`.
    WeightedRightShift(SequenceLaw),
    /// `𝓡 e_n = σ_{|n|} e_{n+1}` on `ℓ²(ℤ)`.
    WeightedRightShiftZ(SequenceLaw),
    /// `(Vf)(x) = ∫_0^x f` on `L²[0, 1]`.
    Volterra,
    /// `f ↦ x f` on `L²[a, b]`.
    MultiplicationX { a: f64, b: f64 },
}

/// The space an operator acts on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ambient {
    Sequences(SeqDomain),
    Functions { a: f64, b: f64 },
}

/// A bounded operator together with what is known about it.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundedOperator {
    spec: OperatorSpec,
}

/// Orthonormal family appearing in an exact SVD.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SvdFamily {
    /// `√2 cos((2n+1)πx/2)` on `[0, 1]`.
    VolterraCos,
    /// `√2 sin((2n+1)πx/2)` on `[0, 1]`.
    VolterraSin,
    /// `e_{m(n) + shift}` where `m` enumerates the index set of `domain`.
    Canonical { domain: SeqDomain, shift: i64 },
}

impl SvdFamily {
    /// The `n`-th member (0-based). `space` is required for function families.
    pub fn element(&self, n: usize, space: Option<&Arc<L2Space>>) -> Result<Element> {
        match self {
            SvdFamily::VolterraCos | SvdFamily::VolterraSin => {
                let space = space.ok_or_else(|| {
                    Error::Representation("function family needs an L² space".into())
                })?;
                let omega = volterra_frequency(n);
                let amp = FRAC_1_SQRT_2;
                let (cp, cm) = if *self == SvdFamily::VolterraCos {
                    (Complex64::new(amp, 0.0), Complex64::new(amp, 0.0))
                } else {
                    (Complex64::new(0.0, -amp), Complex64::new(0.0, amp))
                };
                let f = Function::exponential(space, omega, cp)
                    .plus(&Function::exponential(space, -omega, cm))?;
                Ok(Element::Func(f))
            }
            SvdFamily::Canonical { domain, shift } => {
                let m = enumerate_index(*domain, n);
                Ok(Element::Seq(Sequence::canonical(*domain, m + shift)?))
            }
        }
    }
}

/// `(σ_n, φ_n, ψ_n)` with `A = Σ σ_n |ψ_n⟩⟨φ_n|`, enumerated from `n = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdTriple {
    sigma: SvdSigma,
    /// Right family `φ` (trial).
    pub right: SvdFamily,
    /// Left family `ψ` (test).
    pub left: SvdFamily,
}

#[derive(Debug, Clone, PartialEq)]
enum SvdSigma {
    Volterra,
    /// `σ_{m(n)}` for `ℕ`, `σ_{|m(n)|}` for `ℤ`.
    Law { law: SequenceLaw, domain: SeqDomain },
}

impl SvdTriple {
    /// `σ_n`, 0-based in the enumeration of the families.
    pub fn sigma(&self, n: usize) -> f64 {
        match &self.sigma {
            SvdSigma::Volterra => 1.0 / volterra_frequency(n),
            SvdSigma::Law { law, domain } => law.value(enumerate_index(*domain, n).abs()),
        }
    }

    pub fn singular_values(&self, count: usize) -> Vec<f64> {
        (0..count).map(|n| self.sigma(n)).collect()
    }
}

fn volterra_frequency(n: usize) -> f64 {
    (2 * n + 1) as f64 * PI / 2.0
}

/// Enumeration of an index set: `1, 2, 3, …` on `ℕ`, `0, 1, −1, 2, −2, …` on `ℤ`.
pub fn enumerate_index(domain: SeqDomain, n: usize) -> i64 {
    match domain {
        SeqDomain::Natural => n as i64 + 1,
        SeqDomain::Integer => symmetric_index(n),
    }
}

/// `0, 1, −1, 2, −2, …`.
pub fn symmetric_index(n: usize) -> i64 {
    let n = n as i64;
    if n % 2 == 1 {
        (n + 1) / 2
    } else {
        -n / 2
    }
}

impl BoundedOperator {
    /// Validates the spec and builds the operator.
    pub fn new(spec: OperatorSpec) -> Result<Self> {
        match &spec {
            OperatorSpec::WeightedRightShift(law) => law.validate_weights(1)?,
            OperatorSpec::WeightedRightShiftZ(law) => law.validate_weights(0)?,
            OperatorSpec::MultiplicationSeq(law) => {
                let sup = law.sup_abs(1);
                if !sup.is_finite() {
                    return Err(Error::InvalidLaw(format!("`{law}` is unbounded")));
                }
            }
            OperatorSpec::MultiplicationX { a, b } => {
                if a >= b || !a.is_finite() || !b.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "degenerate interval [{a}, {b}]"
                    )));
                }
            }
            OperatorSpec::RightShift | OperatorSpec::Volterra => {}
        }
        Ok(Self { spec })
    }

    pub fn volterra() -> Self {
        Self {
            spec: OperatorSpec::Volterra,
        }
    }

    pub fn right_shift() -> Self {
        Self {
            spec: OperatorSpec::RightShift,
        }
    }

    pub fn multiplication_x(a: f64, b: f64) -> Result<Self> {
        Self::new(OperatorSpec::MultiplicationX { a, b })
    }

    pub fn multiplication_seq(law: SequenceLaw) -> Result<Self> {
        Self::new(OperatorSpec::MultiplicationSeq(law))
    }

    pub fn weighted_right_shift(law: SequenceLaw) -> Result<Self> {
        Self::new(OperatorSpec::WeightedRightShift(law))
    }

    pub fn weighted_right_shift_z(law: SequenceLaw) -> Result<Self> {
        Self::new(OperatorSpec::WeightedRightShiftZ(law))
    }

    pub fn spec(&self) -> &OperatorSpec {
        &self.spec
    }

    pub fn label(&self) -> String {
        self.spec.to_string()
    }

    pub fn ambient(&self) -> Ambient {
        match &self.spec {
            OperatorSpec::MultiplicationSeq(_)
            | OperatorSpec::RightShift
            | OperatorSpec::WeightedRightShift(_) => Ambient::Sequences(SeqDomain::Natural),
            OperatorSpec::WeightedRightShiftZ(_) => Ambient::Sequences(SeqDomain::Integer),
            OperatorSpec::Volterra => Ambient::Functions { a: 0.0, b: 1.0 },
            OperatorSpec::MultiplicationX { a, b } => Ambient::Functions { a: *a, b: *b },
        }
    }

    /// Known operator norm.
    pub fn norm(&self) -> Option<f64> {
        match &self.spec {
            OperatorSpec::MultiplicationSeq(law) => Some(law.sup_abs(1)),
            OperatorSpec::RightShift => Some(1.0),
            OperatorSpec::WeightedRightShift(law) => Some(law.value(1)),
            OperatorSpec::WeightedRightShiftZ(law) => Some(law.value(0)),
            OperatorSpec::Volterra => Some(2.0 / PI),
            OperatorSpec::MultiplicationX { a, b } => Some(a.abs().max(b.abs())),
        }
    }

    pub fn is_self_adjoint(&self) -> bool {
        matches!(
            self.spec,
            OperatorSpec::MultiplicationSeq(_) | OperatorSpec::MultiplicationX { .. }
        )
    }

    /// Self-adjoint with spectrum in `[0, ∞)`.
    pub fn is_positive_semidefinite(&self) -> bool {
        match &self.spec {
            OperatorSpec::MultiplicationX { a, .. } => *a >= 0.0,
            OperatorSpec::MultiplicationSeq(law) => {
                (1..=crate::law::WEIGHT_CHECK_LEN).all(|n| law.value(n) >= 0.0)
            }
            _ => false,
        }
    }

    pub fn is_compact(&self) -> bool {
        match &self.spec {
            OperatorSpec::MultiplicationSeq(law) => law.tends_to_zero(),
            OperatorSpec::RightShift | OperatorSpec::MultiplicationX { .. } => false,
            OperatorSpec::WeightedRightShift(_)
            | OperatorSpec::WeightedRightShiftZ(_)
            | OperatorSpec::Volterra => true,
        }
    }

    pub fn has_exact_svd(&self) -> bool {
        self.exact_svd().is_ok()
    }

    pub fn exact_svd(&self) -> Result<SvdTriple> {
        match &self.spec {
            OperatorSpec::Volterra => Ok(SvdTriple {
                sigma: SvdSigma::Volterra,
                right: SvdFamily::VolterraCos,
                left: SvdFamily::VolterraSin,
            }),
            OperatorSpec::WeightedRightShift(law) => Ok(SvdTriple {
                sigma: SvdSigma::Law {
                    law: law.clone(),
                    domain: SeqDomain::Natural,
                },
                right: SvdFamily::Canonical {
                    domain: SeqDomain::Natural,
                    shift: 0,
                },
                left: SvdFamily::Canonical {
                    domain: SeqDomain::Natural,
                    shift: 1,
                },
            }),
            OperatorSpec::WeightedRightShiftZ(law) => Ok(SvdTriple {
                sigma: SvdSigma::Law {
                    law: law.clone(),
                    domain: SeqDomain::Integer,
                },
                right: SvdFamily::Canonical {
                    domain: SeqDomain::Integer,
                    shift: 0,
                },
                left: SvdFamily::Canonical {
                    domain: SeqDomain::Integer,
                    shift: 1,
                },
            }),
            _ => Err(self.absent("exact SVD")),
        }
    }

    fn absent(&self, capability: &'static str) -> Error {
        Error::CapabilityAbsent {
            operator: self.label(),
            capability,
        }
    }

    fn check_ambient(&self, f: &Element) -> Result<()> {
        let ok = match (self.ambient(), f) {
            (Ambient::Sequences(d), Element::Seq(s)) => s.domain() == d,
            (Ambient::Functions { a, b }, Element::Func(g)) => g.space().interval() == (a, b),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Representation(format!(
                "element does not live in the ambient space of `{}`",
                self.label()
            )))
        }
    }

    /// `A f`.
    pub fn apply(&self, f: &Element) -> Result<Element> {
        self.check_ambient(f)?;
        let one = |_: i64| Complex64::new(1.0, 0.0);
        match (&self.spec, f) {
            (OperatorSpec::MultiplicationSeq(law), Element::Seq(s)) => {
                Ok(Element::Seq(s.multiply(|n| law.value(n).into())?))
            }
            (OperatorSpec::RightShift, Element::Seq(s)) => Ok(Element::Seq(s.shift_up(one)?)),
            (OperatorSpec::WeightedRightShift(law), Element::Seq(s)) => {
                Ok(Element::Seq(s.shift_up(|n| law.value(n).into())?))
            }
            (OperatorSpec::WeightedRightShiftZ(law), Element::Seq(s)) => {
                Ok(Element::Seq(s.shift_up(|n| law.value(n.abs()).into())?))
            }
            (OperatorSpec::Volterra, Element::Func(g)) => Ok(Element::Func(g.integrate_from_left())),
            (OperatorSpec::MultiplicationX { .. }, Element::Func(g)) => Ok(Element::Func(g.times_x())),
            _ => unreachable!("ambient checked"),
        }
    }

    /// `A* f`. The left shifts are realized here.
    pub fn apply_adjoint(&self, f: &Element) -> Result<Element> {
        self.check_ambient(f)?;
        let one = |_: i64| Complex64::new(1.0, 0.0);
        match (&self.spec, f) {
            (OperatorSpec::MultiplicationSeq(_), _) | (OperatorSpec::MultiplicationX { .. }, _) => {
                self.apply(f)
            }
            (OperatorSpec::RightShift, Element::Seq(s)) => Ok(Element::Seq(s.shift_down(one)?)),
            (OperatorSpec::WeightedRightShift(law), Element::Seq(s)) => {
                Ok(Element::Seq(s.shift_down(|n| law.value(n).into())?))
            }
            (OperatorSpec::WeightedRightShiftZ(law), Element::Seq(s)) => {
                Ok(Element::Seq(s.shift_down(|n| law.value(n.abs()).into())?))
            }
            (OperatorSpec::Volterra, Element::Func(g)) => {
                // V* f = ⟨1, f⟩ 1 − V f
                let total = Function::constant(g.space(), g.integral());
                Ok(Element::Func(total.plus(&g.integrate_from_left().scaled((-1.0).into()))?))
            }
            _ => unreachable!("ambient checked"),
        }
    }

    /// `⟨v, A u⟩`.
    pub fn matrix_element(&self, v: &Element, u: &Element) -> Result<Complex64> {
        v.inner(&self.apply(u)?)
    }
}

/// `V^n f`, by `n`-fold exact integration.
pub fn volterra_power_apply(n: usize, f: &Element) -> Result<Element> {
    if n < 1 {
        return Err(Error::InvalidArgument("power must be at least 1".into()));
    }
    let v = BoundedOperator::volterra();
    let mut out = v.apply(f)?;
    for _ in 1..n {
        out = v.apply(&out)?;
    }
    Ok(out)
}

impl fmt::Display for OperatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorSpec::MultiplicationSeq(law) => write!(f, "mult-seq:{law}"),
            OperatorSpec::RightShift => write!(f, "right-shift"),
            OperatorSpec::WeightedRightShift(law) => write!(f, "weighted-shift:{law}"),
            OperatorSpec::WeightedRightShiftZ(law) => write!(f, "weighted-shift-z:{law}"),
            OperatorSpec::Volterra => write!(f, "volterra"),
            OperatorSpec::MultiplicationX { a, b } => write!(f, "mult-x:{a},{b}"),
        }
    }
}

impl FromStr for OperatorSpec {
    type Err = Error;

    /// `volterra`, `right-shift`, `mult-x:a,b`, `mult-seq:<law>`,
    /// `weighted-shift:<law>`, `weighted-shift-z:<law>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h.trim(), Some(r.trim())),
            None => (s, None),
        };
        let need = |what: &str| {
            rest.ok_or_else(|| Error::InvalidArgument(format!("`{head}` needs {what}")))
        };
        match head {
            "volterra" => Ok(OperatorSpec::Volterra),
            "right-shift" => Ok(OperatorSpec::RightShift),
            "mult-x" => {
                let args = need("an interval `a,b`")?;
                let parts: Vec<&str> = args.split(',').map(str::trim).collect();
                if parts.len() != 2 {
                    return Err(Error::InvalidArgument(format!("bad interval `{args}`")));
                }
                let parse = |p: &str| {
                    p.parse::<f64>()
                        .map_err(|_| Error::InvalidArgument(format!("bad number `{p}`")))
                };
                Ok(OperatorSpec::MultiplicationX {
                    a: parse(parts[0])?,
                    b: parse(parts[1])?,
                })
            }
            "mult-seq" => Ok(OperatorSpec::MultiplicationSeq(need("a law")?.parse()?)),
            "weighted-shift" => Ok(OperatorSpec::WeightedRightShift(need("a law")?.parse()?)),
            "weighted-shift-z" => Ok(OperatorSpec::WeightedRightShiftZ(need("a law")?.parse()?)),
            other => Err(Error::InvalidArgument(format!("unknown operator `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_legendre;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    fn unit_space() -> Arc<L2Space> {
        L2Space::new(0.0, 1.0, 96).unwrap()
    }

    fn random_function(rng: &mut ChaCha8Rng, space: &Arc<L2Space>) -> Element {
        let deg = rng.gen_range(0..8);
        let coeffs = (0..=deg)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let mut f = Function::from_legendre(space, coeffs);
        for _ in 0..rng.gen_range(0..3) {
            let k = rng.gen_range(-5i64..=5);
            let w = 2.0 * PI * k as f64 / space.length();
            let e = Function::exponential(space, w, Complex64::new(rng.gen_range(-1.0..1.0), 0.3));
            f = f.plus(&e).unwrap();
        }
        Element::Func(f)
    }

    fn random_sequence(rng: &mut ChaCha8Rng, domain: SeqDomain) -> Element {
        let len = rng.gen_range(1..12);
        let origin = match domain {
            SeqDomain::Natural => rng.gen_range(1..5),
            SeqDomain::Integer => rng.gen_range(-6..3),
        };
        let v = (0..len)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        Element::Seq(Sequence::new(domain, origin, v).unwrap())
    }

    fn all_operators() -> Vec<BoundedOperator> {
        vec![
            BoundedOperator::volterra(),
            BoundedOperator::multiplication_x(1.0, 2.0).unwrap(),
            BoundedOperator::right_shift(),
            BoundedOperator::multiplication_seq(SequenceLaw::power(1.0, 1.0)).unwrap(),
            BoundedOperator::weighted_right_shift(SequenceLaw::geometric(1.0, 0.5)).unwrap(),
            BoundedOperator::weighted_right_shift_z(SequenceLaw::Power {
                scale: 1.0,
                exponent: 1.0,
                shift: 1.0,
            })
            .unwrap(),
        ]
    }

    fn random_for(op: &BoundedOperator, rng: &mut ChaCha8Rng) -> Element {
        match op.ambient() {
            Ambient::Sequences(d) => random_sequence(rng, d),
            Ambient::Functions { a, b } => random_function(rng, &L2Space::new(a, b, 96).unwrap()),
        }
    }

    #[test]
    fn volterra_on_constant_and_x() {
        let sp = unit_space();
        let v = BoundedOperator::volterra();
        let one = Element::Func(Function::constant(&sp, c(1.0)));
        let x = v.apply(&one).unwrap();
        let x2 = v.apply(&x).unwrap();
        for &t in &[0.0, 0.25, 0.8] {
            let f = x.as_function().unwrap();
            assert!((f.eval(t).unwrap() - c(t)).norm() < 1e-14);
            let g = x2.as_function().unwrap();
            assert!((g.eval(t).unwrap() - c(t * t / 2.0)).norm() < 1e-14);
        }
        assert!((v.norm().unwrap() - 2.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn multiplication_x_on_x() {
        let sp = L2Space::new(1.0, 2.0, 32).unwrap();
        let m = BoundedOperator::multiplication_x(1.0, 2.0).unwrap();
        let x = Element::Func(Function::polynomial(&sp, &[0.0, 1.0]));
        let y = m.apply(&x).unwrap();
        let y = y.as_function().unwrap();
        for &t in &[1.0, 1.5, 2.0] {
            assert!((y.eval(t).unwrap() - c(t * t)).norm() < 1e-13);
        }
        assert_eq!(m.norm(), Some(2.0));
        assert!(m.is_self_adjoint() && m.is_positive_semidefinite());
    }

    #[test]
    fn shifts_on_canonical_vectors() {
        let e1 = Element::Seq(Sequence::canonical(SeqDomain::Natural, 1).unwrap());
        let r = BoundedOperator::right_shift().apply(&e1).unwrap();
        assert_eq!(r.as_sequence().unwrap().get(2), c(1.0));
        assert!((r.norm().unwrap() - 1.0).abs() < 1e-15);

        let w = BoundedOperator::weighted_right_shift(SequenceLaw::power(1.0, 1.0)).unwrap();
        for n in 1..6 {
            let en = Element::Seq(Sequence::canonical(SeqDomain::Natural, n).unwrap());
            let out = w.apply(&en).unwrap();
            let expected = Sequence::canonical(SeqDomain::Natural, n + 1)
                .unwrap()
                .scaled(c(1.0 / n as f64));
            assert_eq!(out, Element::Seq(expected));
        }
    }

    #[test]
    fn weight_laws_are_validated() {
        assert!(BoundedOperator::weighted_right_shift(SequenceLaw::Constant(1.0)).is_err());
        assert!(BoundedOperator::weighted_right_shift_z(SequenceLaw::power(1.0, 1.0)).is_err());
        assert!(BoundedOperator::multiplication_x(2.0, 1.0).is_err());
    }

    #[test]
    fn volterra_powers_match_cauchy_formula() {
        let sp = unit_space();
        let f = Element::Func(Function::sample(&sp, |x| c((3.0 * x).cos())));
        let q = gauss_legendre(48, 0.0, 1.0).unwrap();
        for n in 1..=4usize {
            let got = volterra_power_apply(n, &f).unwrap();
            let got = got.as_function().unwrap();
            let fact: f64 = (1..n).map(|k| k as f64).product();
            for &x in &[0.2, 0.5, 1.0] {
                // Oracle: ∫_0^x (x−y)^{n−1} f(y) dy / (n−1)! on a mapped rule.
                let inner = q.integrate(|s| {
                    let y = s * x;
                    x * (x - y).powi(n as i32 - 1) * (3.0 * y).cos()
                }) / fact;
                assert!((got.eval(x).unwrap() - c(inner)).norm() < 1e-12, "n={n} x={x}");
            }
        }
        let one = Element::Func(Function::constant(&sp, c(1.0)));
        let v3 = volterra_power_apply(3, &one).unwrap();
        assert!((v3.as_function().unwrap().eval(0.7).unwrap() - c(0.343 / 6.0)).norm() < 1e-14);
        assert!(volterra_power_apply(0, &one).is_err());
    }

    #[test]
    fn exact_svd_triples() {
        let sp = unit_space();
        let v = BoundedOperator::volterra();
        let svd = v.exact_svd().unwrap();
        assert!((svd.sigma(0) - 2.0 / PI).abs() < 1e-15);
        for n in 0..=50 {
            let phi = svd.right.element(n, Some(&sp)).unwrap();
            let psi = svd.left.element(n, Some(&sp)).unwrap();
            let d = v.apply(&phi).unwrap().axpy(c(-svd.sigma(n)), &psi).unwrap();
            assert!(d.norm().unwrap() <= 1e-10, "n={n}");
            assert!((phi.norm().unwrap() - 1.0).abs() < 1e-12);
        }
        let phi0 = svd.right.element(0, Some(&sp)).unwrap();
        let x = 0.3;
        let val = phi0.as_function().unwrap().eval(x).unwrap();
        assert!((val - c(2f64.sqrt() * (PI * x / 2.0).cos())).norm() < 1e-14);

        let w = BoundedOperator::weighted_right_shift(SequenceLaw::geometric(1.0, 0.5)).unwrap();
        let svd = w.exact_svd().unwrap();
        assert_eq!(svd.sigma(0), 0.5);
        assert_eq!(
            svd.left.element(0, None).unwrap(),
            Element::Seq(Sequence::canonical(SeqDomain::Natural, 2).unwrap())
        );
        assert!(matches!(
            BoundedOperator::right_shift().exact_svd(),
            Err(Error::CapabilityAbsent { .. })
        ));
    }

    #[test]
    fn volterra_plus_adjoint_is_rank_one_projection() {
        let sp = unit_space();
        let v = BoundedOperator::volterra();
        let one = Element::Func(Function::constant(&sp, c(1.0)));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let f = random_function(&mut rng, &sp);
            let lhs = v.apply(&f).unwrap().add(&v.apply_adjoint(&f).unwrap()).unwrap();
            let rhs = one.scaled(one.inner(&f).unwrap());
            assert!(lhs.sub(&rhs).unwrap().norm().unwrap() < 1e-12);
        }
    }

    #[test]
    fn adjoint_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for op in all_operators() {
            for _ in 0..100 {
                let u = random_for(&op, &mut rng);
                let v = random_for(&op, &mut rng);
                let lhs = v.inner(&op.apply(&u).unwrap()).unwrap();
                let rhs = op.apply_adjoint(&v).unwrap().inner(&u).unwrap();
                assert!(
                    (lhs - rhs).norm() < 1e-10 * (1.0 + lhs.norm()),
                    "{}: {lhs} vs {rhs}",
                    op.label()
                );
            }
        }
    }

    #[test]
    fn reported_norm_bounds_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for op in all_operators() {
            let bound = op.norm().unwrap();
            for _ in 0..100 {
                let u = random_for(&op, &mut rng);
                let nu = u.norm().unwrap();
                let au = op.apply(&u).unwrap().norm().unwrap();
                assert!(au <= bound * nu * (1.0 + 1e-12), "{}", op.label());
            }
        }
    }

    #[test]
    fn weighted_shift_products() {
        // 𝓛𝓡 = M^(σ²) on both index sets. 𝓡𝓛 is multiplication by the
        // shifted weights τ_m = σ_{m−1}² (τ_1 = 0 on ℕ).
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let law_z = SequenceLaw::Power {
            scale: 1.0,
            exponent: 1.0,
            shift: 1.0,
        };
        let rz = BoundedOperator::weighted_right_shift_z(law_z.clone()).unwrap();
        let law_n = SequenceLaw::power(1.0, 1.0);
        let rn = BoundedOperator::weighted_right_shift(law_n.clone()).unwrap();
        let close = |a: &Element, b: &Sequence| a.sub(&Element::Seq(b.clone())).unwrap().norm().unwrap() < 1e-14;
        for _ in 0..20 {
            let x = random_sequence(&mut rng, SeqDomain::Integer);
            let xs = x.as_sequence().unwrap();
            let m = xs.multiply(|n| law_z.value(n.abs()).powi(2).into()).unwrap();
            let tau = xs.multiply(|n| law_z.value((n - 1).abs()).powi(2).into()).unwrap();
            let lr = rz.apply_adjoint(&rz.apply(&x).unwrap()).unwrap();
            let rl = rz.apply(&rz.apply_adjoint(&x).unwrap()).unwrap();
            assert!(close(&lr, &m));
            assert!(close(&rl, &tau));

            let y = random_sequence(&mut rng, SeqDomain::Natural);
            let ys = y.as_sequence().unwrap();
            let m = ys.multiply(|n| law_n.value(n).powi(2).into()).unwrap();
            let tau = ys
                .multiply(|n| if n == 1 { c(0.0) } else { law_n.value(n - 1).powi(2).into() })
                .unwrap();
            let lr = rn.apply_adjoint(&rn.apply(&y).unwrap()).unwrap();
            let rl = rn.apply(&rn.apply_adjoint(&y).unwrap()).unwrap();
            assert!(close(&lr, &m));
            assert!(close(&rl, &tau));
        }
    }

    #[test]
    fn spec_strings_round_trip() {
        for op in all_operators() {
            let s = op.spec().to_string();
            let back: OperatorSpec = s.parse().unwrap();
            assert_eq!(&back, op.spec());
        }
        assert!("bogus".parse::<OperatorSpec>().is_err());
        assert!("mult-x:1".parse::<OperatorSpec>().is_err());
    }

    #[test]
    fn symmetric_enumeration() {
        let v: Vec<i64> = (0..5).map(symmetric_index).collect();
        assert_eq!(v, vec![0, 1, -1, 2, -2]);
    }

    proptest! {
        #[test]
        fn right_shift_is_isometry(values in prop::collection::vec(-10.0f64..10.0, 1..20), origin in 1i64..20) {
            let x = Element::Seq(Sequence::new(
                SeqDomain::Natural,
                origin,
                values.iter().map(|&v| c(v)).collect(),
            ).unwrap());
            let r = BoundedOperator::right_shift().apply(&x).unwrap();
            prop_assert!((r.norm().unwrap() - x.norm().unwrap()).abs() <= 1e-12 * (1.0 + x.norm().unwrap()));
        }
    }
}
