//! Closed-form real sequences `n ↦ a_n`: weight laws of weighted shifts,
//! multiplication symbols, and spectral coefficients of data and noise.
//!
//! Laws are closed-form rather than stored arrays so that arbitrary truncation
//! sizes are supported and so that tails `Σ_{n>N} a_n²` can be evaluated
//! analytically.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Relative accuracy demanded from tail sums.
pub const TAIL_RELATIVE_TOLERANCE: f64 = 1e-10;

/// Number of leading indices checked when validating a weight law.
pub const WEIGHT_CHECK_LEN: i64 = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub enum SequenceLaw {
    /// `scale · (n + shift)^(−exponent)`.
    Power { scale: f64, exponent: f64, shift: f64 },
    /// `scale · ratio^n`.
    Geometric { scale: f64, ratio: f64 },
    Constant(f64),
    Sum(Vec<SequenceLaw>),
}

impl SequenceLaw {
    pub fn power(scale: f64, exponent: f64) -> Self {
        SequenceLaw::Power {
            scale,
            exponent,
            shift: 0.0,
        }
    }

    pub fn geometric(scale: f64, ratio: f64) -> Self {
        SequenceLaw::Geometric { scale, ratio }
    }

    pub fn value(&self, n: i64) -> f64 {
        let x = n as f64;
        match self {
            SequenceLaw::Power {
                scale,
                exponent,
                shift,
            } => scale * (x + shift).powf(-exponent),
            SequenceLaw::Geometric { scale, ratio } => scale * ratio.powf(x),
            SequenceLaw::Constant(c) => *c,
            SequenceLaw::Sum(parts) => parts.iter().map(|p| p.value(n)).sum(),
        }
    }

    /// `a + b`, flattening nested sums.
    pub fn plus(&self, other: &SequenceLaw) -> SequenceLaw {
        let mut parts = Vec::new();
        for law in [self, other] {
            match law {
                SequenceLaw::Sum(ps) => parts.extend(ps.iter().cloned()),
                l => parts.push(l.clone()),
            }
        }
        SequenceLaw::Sum(parts)
    }

    /// The law `a_n / b_n` when it is again closed-form.
    pub fn quotient(&self, denom: &SequenceLaw) -> Result<SequenceLaw> {
        use SequenceLaw::*;
        match (self, denom) {
            (Sum(parts), _) => Ok(Sum(parts
                .iter()
                .map(|p| p.quotient(denom))
                .collect::<Result<_>>()?)),
            (
                Power {
                    scale: a,
                    exponent: p,
                    shift: s,
                },
                Power {
                    scale: b,
                    exponent: q,
                    shift: t,
                },
            ) if s == t && *b != 0.0 => Ok(Power {
                scale: a / b,
                exponent: p - q,
                shift: *s,
            }),
            (Geometric { scale: a, ratio: r }, Geometric { scale: b, ratio: q })
                if *b != 0.0 && *q != 0.0 =>
            {
                Ok(Geometric {
                    scale: a / b,
                    ratio: r / q,
                })
            }
            (Constant(c), Constant(d)) if *d != 0.0 => Ok(Constant(c / d)),
            (Power { .. }, Constant(d)) | (Geometric { .. }, Constant(d)) if *d != 0.0 => {
                Ok(self.scaled(1.0 / d))
            }
            _ => Err(Error::InvalidLaw(format!(
                "quotient `{self}` / `{denom}` has no closed form"
            ))),
        }
    }

    pub fn scaled(&self, factor: f64) -> SequenceLaw {
        use SequenceLaw::*;
        match self {
            Power {
                scale,
                exponent,
                shift,
            } => Power {
                scale: scale * factor,
                exponent: *exponent,
                shift: *shift,
            },
            Geometric { scale, ratio } => Geometric {
                scale: scale * factor,
                ratio: *ratio,
            },
            Constant(c) => Constant(c * factor),
            Sum(parts) => Sum(parts.iter().map(|p| p.scaled(factor)).collect()),
        }
    }

    /// Structural test for `a_n → 0`.
    pub fn tends_to_zero(&self) -> bool {
        match self {
            SequenceLaw::Power {
                scale, exponent, ..
            } => *scale == 0.0 || *exponent > 0.0,
            SequenceLaw::Geometric { scale, ratio } => *scale == 0.0 || ratio.abs() < 1.0,
            SequenceLaw::Constant(c) => *c == 0.0,
            SequenceLaw::Sum(parts) => parts.iter().all(SequenceLaw::tends_to_zero),
        }
    }

    /// Checks `0 < a_{n+1} < a_n` on `n = start, …, start + 10⁴` and `a_n → 0`,
    /// the requirement on weights of compact shifts.
    pub fn validate_weights(&self, start: i64) -> Result<()> {
        if !self.tends_to_zero() {
            return Err(Error::InvalidLaw(format!("`{self}` does not tend to zero")));
        }
        let mut prev = self.value(start);
        if !(prev > 0.0 && prev.is_finite()) {
            return Err(Error::InvalidLaw(format!(
                "`{self}` is not positive and finite at n = {start}"
            )));
        }
        for n in (start + 1)..=(start + WEIGHT_CHECK_LEN) {
            let v = self.value(n);
            if (0.0..f64::MIN_POSITIVE).contains(&v) && prev < 1e-290 {
                // Underflow: the law has left the representable range.
                break;
            }
            if !(v > 0.0 && v < prev) {
                return Err(Error::InvalidLaw(format!(
                    "`{self}` is not strictly decreasing and positive at n = {n}"
                )));
            }
            prev = v;
        }
        Ok(())
    }

    /// `sup_{n ≥ start} |a_n|`, assuming the law is eventually monotone.
    pub fn sup_abs(&self, start: i64) -> f64 {
        let head = (start..start + WEIGHT_CHECK_LEN)
            .map(|n| self.value(n).abs())
            .fold(0.0, f64::max);
        if self.tends_to_zero() {
            head
        } else {
            head.max(self.value(start + WEIGHT_CHECK_LEN).abs())
        }
    }

    /// `Σ_{n = from+1}^{to} a_n²` by compensated summation.
    pub fn partial_sum_sq(&self, from: i64, to: i64) -> f64 {
        let mut acc = Neumaier::default();
        for n in (from + 1)..=to {
            let v = self.value(n);
            acc.add(v * v);
        }
        acc.total()
    }

    /// `Σ_{n > from} a_n²`, accurate to [`TAIL_RELATIVE_TOLERANCE`].
    ///
    /// Power-law pieces use explicit summation over a short head followed by an
    /// Euler–Maclaurin remainder; geometric pieces are summed in closed form.
    pub fn tail_sum_sq(&self, from: i64) -> Result<f64> {
        let pieces = self.simple_pieces();
        if pieces
            .iter()
            .any(|p| matches!(p, SequenceLaw::Constant(c) if *c != 0.0))
        {
            return Err(Error::NonSummable(format!("`{self}` has a constant part")));
        }
        let pieces: Vec<&SequenceLaw> = pieces
            .iter()
            .filter(|p| !matches!(p, SequenceLaw::Constant(_)))
            .collect();
        let mut total = Neumaier::default();
        for (i, a) in pieces.iter().enumerate() {
            for (j, b) in pieces.iter().enumerate().skip(i) {
                let factor = if i == j { 1.0 } else { 2.0 };
                total.add(factor * cross_tail(a, b, from)?);
            }
        }
        Ok(total.total().max(0.0))
    }

    fn simple_pieces(&self) -> Vec<SequenceLaw> {
        match self {
            SequenceLaw::Sum(parts) => parts.iter().flat_map(|p| p.simple_pieces()).collect(),
            other => vec![other.clone()],
        }
    }
}

/// `Σ_{n > from} a_n b_n` for two simple (non-sum, non-constant) laws.
fn cross_tail(a: &SequenceLaw, b: &SequenceLaw, from: i64) -> Result<f64> {
    use SequenceLaw::*;
    match (a, b) {
        (
            Power {
                scale: c1,
                exponent: p1,
                shift: s1,
            },
            Power {
                scale: c2,
                exponent: p2,
                shift: s2,
            },
        ) if s1 == s2 => power_tail(c1 * c2, p1 + p2, *s1, from),
        (Geometric { scale: c1, ratio: r1 }, Geometric { scale: c2, ratio: r2 }) => {
            let r = r1 * r2;
            if r.abs() >= 1.0 {
                return Err(Error::NonSummable(format!("geometric ratio {r}")));
            }
            Ok(c1 * c2 * r.powf((from + 1) as f64) / (1.0 - r))
        }
        (Power { .. }, Geometric { .. }) | (Geometric { .. }, Power { .. }) => {
            mixed_tail(a, b, from)
        }
        _ => Err(Error::InvalidLaw(format!(
            "tail of `{a}`·`{b}` is not supported in closed form"
        ))),
    }
}

/// `Σ_{n > from} c (n + s)^(−q)`.
fn power_tail(c: f64, q: f64, s: f64, from: i64) -> Result<f64> {
    if c == 0.0 {
        return Ok(0.0);
    }
    if q <= 1.0 {
        return Err(Error::NonSummable(format!(
            "power law with squared exponent {q} ≤ 1"
        )));
    }
    if (from as f64 + 1.0 + s) <= 0.0 {
        return Err(Error::InvalidLaw(format!(
            "power law undefined at n = {}",
            from + 1
        )));
    }
    let mut head_len: i64 = 64.max((8.0 * q).ceil() as i64);
    loop {
        let last = from + head_len;
        let mut head = Neumaier::default();
        for n in (from + 1)..=last {
            head.add((n as f64 + s).powf(-q));
        }
        // Σ_{n>L} f(n) = ∫_L^∞ f − f(L)/2 − f'(L)/12 + f'''(L)/720 − f⁽⁵⁾(L)/30240 + R,
        // with |R| bounded by the size of the next term, f⁽⁷⁾(L)/1209600.
        let x = last as f64 + s;
        let f = x.powf(-q);
        let d = |order: i32| -> f64 {
            let mut coeff = 1.0;
            for k in 0..order {
                coeff *= -(q + k as f64);
            }
            coeff * x.powf(-q - order as f64)
        };
        let integral = x.powf(1.0 - q) / (q - 1.0);
        let remainder = integral - f / 2.0 - d(1) / 12.0 + d(3) / 720.0 - d(5) / 30240.0;
        let error_bound = d(7).abs() / 1_209_600.0;
        let total = head.total() + remainder;
        if error_bound <= TAIL_RELATIVE_TOLERANCE * 1e-3 * total.abs() || head_len > 1 << 24 {
            return Ok(c * total);
        }
        head_len *= 2;
    }
}

/// Term-by-term sum of a power × geometric product, stopped by a geometric
/// majorant of the remainder.
fn mixed_tail(a: &SequenceLaw, b: &SequenceLaw, from: i64) -> Result<f64> {
    let ratio = match (a, b) {
        (SequenceLaw::Power { .. }, SequenceLaw::Geometric { ratio, .. })
        | (SequenceLaw::Geometric { ratio, .. }, SequenceLaw::Power { .. }) => *ratio,
        _ => unreachable!("mixed_tail called with non-mixed pair"),
    };
    if ratio.abs() >= 1.0 {
        return Err(Error::NonSummable(format!("geometric ratio {ratio}")));
    }
    let mut acc = Neumaier::default();
    let mut n = from + 1;
    loop {
        let term = a.value(n) * b.value(n);
        acc.add(term);
        // Power factor is eventually non-increasing, so the remainder is at most
        // |term| · r / (1 − r).
        let bound = term.abs() * ratio.abs() / (1.0 - ratio.abs());
        if bound <= TAIL_RELATIVE_TOLERANCE * 1e-3 * acc.total().abs() || n - from > 50_000_000 {
            return Ok(acc.total());
        }
        n += 1;
    }
}

/// Neumaier compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

impl fmt::Display for SequenceLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceLaw::Power {
                scale,
                exponent,
                shift,
            } => {
                if *shift == 0.0 {
                    write!(f, "power:{scale},{exponent}")
                } else {
                    write!(f, "power:{scale},{exponent},{shift}")
                }
            }
            SequenceLaw::Geometric { scale, ratio } => write!(f, "geometric:{scale},{ratio}"),
            SequenceLaw::Constant(c) => write!(f, "const:{c}"),
            SequenceLaw::Sum(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for SequenceLaw {
    type Err = Error;

    /// Grammar: `power:scale,exponent[,shift]`, `geometric:scale,ratio`,
    /// `const:c`, and sums of these joined by `+`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('+') {
            let parts = s
                .split('+')
                .map(str::parse)
                .collect::<Result<Vec<SequenceLaw>>>()?;
            return Ok(SequenceLaw::Sum(parts));
        }
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidLaw(format!("`{s}`: expected `kind:args`")))?;
        let nums = args
            .split(',')
            .map(|a| {
                a.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidLaw(format!("`{s}`: bad number `{a}`")))
            })
            .collect::<Result<Vec<f64>>>()?;
        match (kind.trim(), nums.as_slice()) {
            ("power", [scale, exponent]) => Ok(SequenceLaw::power(*scale, *exponent)),
            ("power", [scale, exponent, shift]) => Ok(SequenceLaw::Power {
                scale: *scale,
                exponent: *exponent,
                shift: *shift,
            }),
            ("geometric", [scale, ratio]) => Ok(SequenceLaw::geometric(*scale, *ratio)),
            ("const", [c]) => Ok(SequenceLaw::Constant(*c)),
            _ => Err(Error::InvalidLaw(format!("`{s}`: unknown law"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const ZETA3: f64 = 1.202_056_903_159_594_2;

    #[test]
    fn zeta_tails() {
        let g = SequenceLaw::power(1.0, 1.0);
        let t = g.tail_sum_sq(0).unwrap();
        assert!((t - PI * PI / 6.0).abs() < 1e-13);

        let nu = SequenceLaw::power(1.0, 1.5);
        assert!((nu.tail_sum_sq(0).unwrap() - ZETA3).abs() < 1e-13);

        // Σ_{n>3} n^-2 = π²/6 − 1 − 1/4 − 1/9
        let t3 = g.tail_sum_sq(3).unwrap();
        assert!((t3 - (PI * PI / 6.0 - 1.0 - 0.25 - 1.0 / 9.0)).abs() < 1e-13);
    }

    #[test]
    fn tail_matches_brute_force() {
        let law = SequenceLaw::Power {
            scale: 0.4,
            exponent: 2.0,
            shift: 0.5,
        };
        let brute: f64 = law.partial_sum_sq(10, 4_000_000);
        let rest = law.tail_sum_sq(4_000_000).unwrap();
        let t = law.tail_sum_sq(10).unwrap();
        assert!(((brute + rest) - t).abs() <= 1e-12 * t);
    }

    #[test]
    fn sum_law_tail_expands_square() {
        let g = SequenceLaw::power(1.0, 2.0);
        let nu = SequenceLaw::power(0.4, 1.5);
        let both = g.plus(&nu);
        let direct = both.partial_sum_sq(5, 2_000_000) + both.tail_sum_sq(2_000_000).unwrap();
        let t = both.tail_sum_sq(5).unwrap();
        assert!((direct - t).abs() <= 1e-12 * t);
    }

    #[test]
    fn geometric_and_mixed_tails() {
        let geo = SequenceLaw::geometric(1.0, 0.5);
        // Σ_{n>0} 4^-n = 1/3
        assert!((geo.tail_sum_sq(0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let mixed = geo.plus(&SequenceLaw::power(1.0, 1.0));
        let brute = mixed.partial_sum_sq(0, 3_000_000) + SequenceLaw::power(1.0, 1.0).tail_sum_sq(3_000_000).unwrap();
        let t = mixed.tail_sum_sq(0).unwrap();
        assert!((brute - t).abs() < 1e-11);
    }

    #[test]
    fn non_summable_laws() {
        assert!(matches!(
            SequenceLaw::power(1.0, 0.5).tail_sum_sq(0),
            Err(Error::NonSummable(_))
        ));
        assert!(matches!(
            SequenceLaw::Constant(1.0).tail_sum_sq(0),
            Err(Error::NonSummable(_))
        ));
    }

    #[test]
    fn weight_validation() {
        assert!(SequenceLaw::power(1.0, 1.0).validate_weights(1).is_ok());
        assert!(SequenceLaw::geometric(1.0, 0.5).validate_weights(1).is_ok());
        assert!(SequenceLaw::Constant(1.0).validate_weights(1).is_err());
        assert!(SequenceLaw::power(-1.0, 1.0).validate_weights(1).is_err());
        // 1/n at n = 0 is infinite: ℤ-laws need a shift.
        assert!(SequenceLaw::power(1.0, 1.0).validate_weights(0).is_err());
        let shifted = SequenceLaw::Power {
            scale: 1.0,
            exponent: 1.0,
            shift: 1.0,
        };
        assert!(shifted.validate_weights(0).is_ok());
    }

    #[test]
    fn quotient_of_powers() {
        let g = SequenceLaw::power(1.0, 2.0);
        let sigma = SequenceLaw::power(1.0, 1.0);
        assert_eq!(g.quotient(&sigma).unwrap(), SequenceLaw::power(1.0, 1.0));
        assert!(g.quotient(&SequenceLaw::geometric(1.0, 0.5)).is_err());
    }

    #[test]
    fn display_parse_round_trip() {
        for s in [
            "power:1,1.5",
            "power:0.4,1.5,2",
            "geometric:1,0.5",
            "const:3",
            "power:1,2+power:0.4,1.5",
        ] {
            let law: SequenceLaw = s.parse().unwrap();
            assert_eq!(law.to_string(), s);
            assert_eq!(law.to_string().parse::<SequenceLaw>().unwrap(), law);
        }
        assert!("power:1".parse::<SequenceLaw>().is_err());
        assert!("banana:1,2".parse::<SequenceLaw>().is_err());
    }
}
