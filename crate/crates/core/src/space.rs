//! Elements of the ambient Hilbert spaces: square-summable sequences on `ℕ`
//! or `ℤ`, and square-integrable functions on an interval.
//!
//! Function elements are kept in a dual form. The analytic part is a finite
//! combination of catalogued functions (normalized shifted Legendre
//! polynomials and exponentials `e^{iω(x−a)}`), on which operators act in
//! closed form and inner products are exact. Anything else is stored as
//! samples on the Gauss–Legendre grid shared by the space.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::coefficients::hypot_norm;
use crate::error::{Error, Result};
use crate::law::{Neumaier, SequenceLaw};
use crate::quadrature::{gauss_legendre, QuadratureRule};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Index set of a sequence space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeqDomain {
    /// `ℓ²(ℕ)`, indices `1, 2, …`.
    Natural,
    /// `ℓ²(ℤ)`.
    Integer,
}

impl SeqDomain {
    pub fn first_index(self) -> Option<i64> {
        match self {
            SeqDomain::Natural => Some(1),
            SeqDomain::Integer => None,
        }
    }
}

/// Closed-form tail of a sequence: entries at `index ≥ start` equal
/// `factor · law(index − offset)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tail {
    pub law: SequenceLaw,
    pub start: i64,
    pub offset: i64,
    pub factor: Complex64,
}

/// A square-summable sequence: a finite window of explicit entries plus an
/// optional closed-form tail.
#[derive(Debug, Clone)]
pub struct Sequence {
    domain: SeqDomain,
    origin: i64,
    values: Vec<Complex64>,
    tail: Option<Tail>,
}

impl PartialEq for Sequence {
    /// Entrywise equality; zero padding in the stored window is ignored.
    fn eq(&self, other: &Self) -> bool {
        if self.domain != other.domain || self.tail != other.tail {
            return false;
        }
        let lo = self.origin.min(other.origin);
        let hi = self.window_end().max(other.window_end());
        (lo..hi).all(|i| self.get(i) == other.get(i))
    }
}

impl Sequence {
    pub fn new(domain: SeqDomain, origin: i64, values: Vec<Complex64>) -> Result<Self> {
        if let Some(first) = domain.first_index() {
            if origin < first {
                return Err(Error::Representation(format!(
                    "window starts at index {origin}, before {first}"
                )));
            }
        }
        Ok(Self {
            domain,
            origin,
            values,
            tail: None,
        })
    }

    pub fn zero(domain: SeqDomain) -> Self {
        Self {
            domain,
            origin: domain.first_index().unwrap_or(0),
            values: Vec::new(),
            tail: None,
        }
    }

    /// Canonical basis vector `e_index`.
    pub fn canonical(domain: SeqDomain, index: i64) -> Result<Self> {
        Self::new(domain, index, vec![Complex64::new(1.0, 0.0)])
    }

    /// The sequence `n ↦ law(n − offset)` for `n ≥ start`, zero before.
    pub fn from_law(domain: SeqDomain, law: SequenceLaw, start: i64, offset: i64) -> Result<Self> {
        let mut s = Self::new(domain, start, Vec::new())?;
        s.tail = Some(Tail {
            law,
            start,
            offset,
            factor: Complex64::new(1.0, 0.0),
        });
        Ok(s)
    }

    pub fn domain(&self) -> SeqDomain {
        self.domain
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn window(&self) -> &[Complex64] {
        &self.values
    }

    pub fn tail(&self) -> Option<&Tail> {
        self.tail.as_ref()
    }

    pub fn is_finitely_supported(&self) -> bool {
        self.tail.is_none()
    }

    fn window_end(&self) -> i64 {
        self.origin + self.values.len() as i64
    }

    pub fn get(&self, index: i64) -> Complex64 {
        if let Some(t) = &self.tail {
            if index >= t.start {
                return t.factor * t.law.value(index - t.offset);
            }
        }
        if index >= self.origin && index < self.window_end() {
            self.values[(index - self.origin) as usize]
        } else {
            ZERO
        }
    }

    /// Largest index with a nonzero explicit entry, if any (ignores tails).
    pub fn support_end(&self) -> Option<i64> {
        self.values
            .iter()
            .rposition(|v| *v != ZERO)
            .map(|p| self.origin + p as i64)
    }

    /// Moves tail entries below `end` into the explicit window.
    fn materialize_to(&mut self, end: i64) {
        let Some(t) = &self.tail else { return };
        if end <= t.start {
            return;
        }
        let (start, law, offset, factor) = (t.start, t.law.clone(), t.offset, t.factor);
        self.extend_window(start, end);
        for idx in start..end {
            self.values[(idx - self.origin) as usize] = factor * law.value(idx - offset);
        }
        if let Some(t) = &mut self.tail {
            t.start = end;
        }
    }

    fn extend_window(&mut self, lo: i64, hi: i64) {
        if self.values.is_empty() {
            self.origin = lo;
        }
        if lo < self.origin {
            let pad = (self.origin - lo) as usize;
            let mut v = vec![ZERO; pad];
            v.extend_from_slice(&self.values);
            self.values = v;
            self.origin = lo;
        }
        if hi > self.window_end() {
            let new_len = (hi - self.origin) as usize;
            self.values.resize(new_len, ZERO);
        }
    }

    fn combine(&self, other: &Sequence, beta: Complex64) -> Result<Sequence> {
        if self.domain != other.domain {
            return Err(Error::Representation("sequences on different index sets".into()));
        }
        let mut a = self.clone();
        let mut b = other.clone();
        // Bring both tails to a common start beyond both windows.
        let mut common = a.window_end().max(b.window_end());
        if let Some(t) = &a.tail {
            common = common.max(t.start);
        }
        if let Some(t) = &b.tail {
            common = common.max(t.start);
        }
        a.materialize_to(common);
        b.materialize_to(common);

        let lo = match (a.values.is_empty(), b.values.is_empty()) {
            (true, true) => a.origin.min(b.origin),
            (true, false) => b.origin,
            (false, true) => a.origin,
            (false, false) => a.origin.min(b.origin),
        };
        let hi = a.window_end().max(b.window_end());
        let mut out = Sequence {
            domain: a.domain,
            origin: lo,
            values: vec![ZERO; (hi - lo).max(0) as usize],
            tail: None,
        };
        for (i, v) in a.values.iter().enumerate() {
            out.values[(a.origin - lo) as usize + i] += v;
        }
        for (i, v) in b.values.iter().enumerate() {
            out.values[(b.origin - lo) as usize + i] += beta * v;
        }
        out.tail = match (a.tail, b.tail) {
            (None, None) => None,
            (Some(t), None) => Some(t),
            (None, Some(mut t)) => {
                t.factor *= beta;
                Some(t)
            }
            (Some(ta), Some(tb)) => {
                let fb = tb.factor * beta;
                if ta.offset != tb.offset || ta.factor.im != 0.0 || fb.im != 0.0 {
                    return Err(Error::Representation(
                        "cannot combine tails with different offsets or complex factors".into(),
                    ));
                }
                Some(Tail {
                    law: ta.law.scaled(ta.factor.re).plus(&tb.law.scaled(fb.re)),
                    start: ta.start,
                    offset: ta.offset,
                    factor: Complex64::new(1.0, 0.0),
                })
            }
        };
        Ok(out)
    }

    pub fn plus(&self, other: &Sequence) -> Result<Sequence> {
        self.combine(other, Complex64::new(1.0, 0.0))
    }

    pub fn scaled(&self, c: Complex64) -> Sequence {
        let mut s = self.clone();
        for v in &mut s.values {
            *v *= c;
        }
        if let Some(t) = &mut s.tail {
            t.factor *= c;
        }
        s
    }

    pub fn inner(&self, other: &Sequence) -> Result<Complex64> {
        if self.domain != other.domain {
            return Err(Error::Representation("sequences on different index sets".into()));
        }
        if self.tail.is_some() && other.tail.is_some() {
            return Err(Error::Representation(
                "inner product of two infinitely supported sequences".into(),
            ));
        }
        let (finite, other_seq, conj_finite) = if self.tail.is_none() {
            (self, other, true)
        } else {
            (other, self, false)
        };
        let mut acc = ZERO;
        for (i, v) in finite.values.iter().enumerate() {
            if *v == ZERO {
                continue;
            }
            let w = other_seq.get(finite.origin + i as i64);
            acc += if conj_finite { v.conj() * w } else { w.conj() * v };
        }
        Ok(acc)
    }

    pub fn norm_sqr(&self) -> Result<f64> {
        let head: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        let tail = match &self.tail {
            Some(t) => t.factor.norm_sqr() * t.law.tail_sum_sq(t.start - 1 - t.offset)?,
            None => 0.0,
        };
        Ok(head + tail)
    }

    fn require_finite(&self, what: &str) -> Result<()> {
        if self.tail.is_some() {
            return Err(Error::Representation(format!(
                "{what} requires a finitely supported sequence"
            )));
        }
        Ok(())
    }

    /// `n ↦ weight(n) · x_n`.
    pub(crate) fn multiply(&self, weight: impl Fn(i64) -> Complex64) -> Result<Sequence> {
        self.require_finite("multiplication")?;
        let mut s = self.clone();
        for (i, v) in s.values.iter_mut().enumerate() {
            *v *= weight(self.origin + i as i64);
        }
        Ok(s)
    }

    /// `(Sx)_{n+1} = weight(n) x_n`, support moves up by one.
    pub(crate) fn shift_up(&self, weight: impl Fn(i64) -> Complex64) -> Result<Sequence> {
        self.require_finite("shift")?;
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| v * weight(self.origin + i as i64))
            .collect();
        Ok(Sequence {
            domain: self.domain,
            origin: self.origin + 1,
            values,
            tail: None,
        })
    }

    /// `(Sx)_n = weight(n) x_{n+1}`; on `ℕ` the entry `x_1` is dropped.
    pub(crate) fn shift_down(&self, weight: impl Fn(i64) -> Complex64) -> Result<Sequence> {
        self.require_finite("shift")?;
        let mut origin = self.origin - 1;
        let mut values: Vec<Complex64> = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| v * weight(self.origin - 1 + i as i64))
            .collect();
        if let Some(first) = self.domain.first_index() {
            if origin < first {
                if !values.is_empty() {
                    values.remove(0);
                }
                origin = first;
            }
        }
        Ok(Sequence {
            domain: self.domain,
            origin,
            values,
            tail: None,
        })
    }
}

/// `L²[a, b]` together with the quadrature grid used for non-analytic
/// elements and mixed inner products.
#[derive(Debug, Clone, PartialEq)]
pub struct L2Space {
    a: f64,
    b: f64,
    rule: QuadratureRule,
}

impl L2Space {
    /// Space on `[a, b]` with a `grid_order`-point Gauss–Legendre grid.
    pub fn new(a: f64, b: f64, grid_order: usize) -> Result<Arc<Self>> {
        let rule = gauss_legendre(grid_order, a, b)?;
        Ok(Arc::new(Self { a, b, rule }))
    }

    /// Grid order `2·n_max + 16`, enough for products of two Legendre
    /// elements of index up to `n_max` plus headroom.
    pub fn for_truncation(a: f64, b: f64, n_max: usize) -> Result<Arc<Self>> {
        Self::new(a, b, 2 * n_max + 16)
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn grid_order(&self) -> usize {
        self.rule.order()
    }

    fn same_as(&self, other: &L2Space) -> bool {
        self.a == other.a && self.b == other.b && self.rule.order() == other.rule.order()
    }

    /// Values `p_0(x), …, p_{count−1}(x)` of the normalized shifted Legendre
    /// polynomials on `[a, b]`.
    pub fn legendre_values(&self, count: usize, x: f64) -> Vec<f64> {
        legendre_normalized(count, x, self.a, self.b)
    }

    /// Discrete Legendre transform of grid samples (exact for polynomial
    /// samples of degree `< grid_order`).
    fn legendre_transform(&self, samples: &[Complex64]) -> Vec<Complex64> {
        let q = self.rule.order();
        let mut coeffs = vec![ZERO; q];
        for ((&x, &w), &s) in self.rule.nodes().iter().zip(self.rule.weights()).zip(samples) {
            let p = self.legendre_values(q, x);
            for (c, pn) in coeffs.iter_mut().zip(&p) {
                *c += s * (w * pn);
            }
        }
        coeffs
    }
}

pub(crate) fn legendre_normalized(count: usize, x: f64, a: f64, b: f64) -> Vec<f64> {
    let len = b - a;
    let t = (2.0 * x - a - b) / len;
    let mut out = Vec::with_capacity(count);
    let (mut p_prev, mut p_cur) = (0.0, 1.0);
    for n in 0..count {
        let nf = n as f64;
        if n > 0 {
            let p_next = ((2.0 * nf - 1.0) * t * p_cur - (nf - 1.0) * p_prev) / nf;
            p_prev = p_cur;
            p_cur = p_next;
        }
        out.push(p_cur * ((2.0 * nf + 1.0) / len).sqrt());
    }
    out
}

/// An element of `L²[a, b]`; see the module docs for the representation.
#[derive(Debug, Clone)]
pub struct Function {
    space: Arc<L2Space>,
    /// Coefficients against `p_0, p_1, …`.
    legendre: Vec<Complex64>,
    /// `(ω, c)` pairs for `c · e^{iω(x−a)}`, sorted by `ω`, no duplicates.
    exps: Vec<(f64, Complex64)>,
    /// Values on the space grid.
    samples: Option<Vec<Complex64>>,
}

impl PartialEq for Function {
    fn eq(&self, other: &Self) -> bool {
        self.space.same_as(&other.space)
            && self.legendre == other.legendre
            && self.exps == other.exps
            && self.samples == other.samples
    }
}

impl Function {
    pub fn zero(space: &Arc<L2Space>) -> Self {
        Self {
            space: space.clone(),
            legendre: Vec::new(),
            exps: Vec::new(),
            samples: None,
        }
    }

    pub fn from_legendre(space: &Arc<L2Space>, coeffs: Vec<Complex64>) -> Self {
        Self {
            legendre: coeffs,
            ..Self::zero(space)
        }
    }

    /// `p_n`, the normalized shifted Legendre polynomial of degree `n`.
    pub fn legendre(space: &Arc<L2Space>, n: usize) -> Self {
        let mut c = vec![ZERO; n + 1];
        c[n] = Complex64::new(1.0, 0.0);
        Self::from_legendre(space, c)
    }

    /// `coeff · e^{iω(x−a)}`.
    pub fn exponential(space: &Arc<L2Space>, omega: f64, coeff: Complex64) -> Self {
        Self {
            exps: vec![(omega, coeff)],
            ..Self::zero(space)
        }
    }

    pub fn from_samples(space: &Arc<L2Space>, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != space.grid_order() {
            return Err(Error::DimensionMismatch {
                expected: space.grid_order(),
                got: samples.len(),
            });
        }
        Ok(Self {
            samples: Some(samples),
            ..Self::zero(space)
        })
    }

    /// Samples an arbitrary function on the grid.
    pub fn sample(space: &Arc<L2Space>, f: impl Fn(f64) -> Complex64) -> Self {
        let samples = space.rule().nodes().iter().map(|&x| f(x)).collect();
        Self {
            samples: Some(samples),
            ..Self::zero(space)
        }
    }

    /// The polynomial `Σ_k c_k x^k`, converted exactly to Legendre form.
    pub fn polynomial(space: &Arc<L2Space>, monomial_coeffs: &[f64]) -> Self {
        let one = Self::constant(space, Complex64::new(1.0, 0.0));
        let mut acc = Self::zero(space);
        for &c in monomial_coeffs.iter().rev() {
            acc = acc.times_x();
            acc = acc
                .plus(&one.scaled(Complex64::new(c, 0.0)))
                .expect("same space");
        }
        acc.trimmed()
    }

    pub fn constant(space: &Arc<L2Space>, c: Complex64) -> Self {
        Self::from_legendre(space, vec![c * space.length().sqrt()])
    }

    pub fn space(&self) -> &Arc<L2Space> {
        &self.space
    }

    pub fn legendre_coeffs(&self) -> &[Complex64] {
        &self.legendre
    }

    pub fn exponentials(&self) -> &[(f64, Complex64)] {
        &self.exps
    }

    pub fn samples(&self) -> Option<&[Complex64]> {
        self.samples.as_deref()
    }

    pub fn is_analytic(&self) -> bool {
        self.samples.is_none()
    }

    fn check_space(&self, other: &Function) -> Result<()> {
        if !self.space.same_as(&other.space) {
            return Err(Error::Representation(
                "functions live on different L² spaces".into(),
            ));
        }
        Ok(())
    }

    /// Drops trailing zero Legendre coefficients and zero exponentials.
    fn trimmed(mut self) -> Self {
        while self.legendre.last() == Some(&ZERO) {
            self.legendre.pop();
        }
        self.exps.retain(|(_, c)| *c != ZERO);
        self
    }

    /// Value at an arbitrary point; only for analytic elements.
    pub fn eval(&self, x: f64) -> Result<Complex64> {
        if self.samples.is_some() {
            return Err(Error::Representation(
                "sampled functions can only be evaluated on the grid".into(),
            ));
        }
        Ok(self.eval_legendre(x) + self.eval_exps(x))
    }

    fn eval_legendre(&self, x: f64) -> Complex64 {
        if self.legendre.is_empty() {
            return ZERO;
        }
        let p = self.space.legendre_values(self.legendre.len(), x);
        self.legendre.iter().zip(&p).map(|(c, v)| c * v).sum()
    }

    fn eval_exps(&self, x: f64) -> Complex64 {
        let a = self.space.a;
        self.exps
            .iter()
            .map(|(w, c)| c * Complex64::from_polar(1.0, w * (x - a)))
            .sum()
    }

    fn grid_legendre(&self) -> Vec<Complex64> {
        self.space
            .rule()
            .nodes()
            .iter()
            .map(|&x| self.eval_legendre(x))
            .collect()
    }

    fn grid_exps(&self) -> Vec<Complex64> {
        self.space
            .rule()
            .nodes()
            .iter()
            .map(|&x| self.eval_exps(x))
            .collect()
    }

    /// Values on the space grid.
    pub fn grid_values(&self) -> Vec<Complex64> {
        let nodes = self.space.rule().nodes();
        let mut v: Vec<Complex64> = nodes
            .iter()
            .map(|&x| self.eval_legendre(x) + self.eval_exps(x))
            .collect();
        if let Some(s) = &self.samples {
            for (vi, si) in v.iter_mut().zip(s) {
                *vi += si;
            }
        }
        v
    }

    fn combine(&self, other: &Function, beta: Complex64) -> Result<Function> {
        self.check_space(other)?;
        let n = self.legendre.len().max(other.legendre.len());
        let mut legendre = vec![ZERO; n];
        for (i, c) in self.legendre.iter().enumerate() {
            legendre[i] += c;
        }
        for (i, c) in other.legendre.iter().enumerate() {
            legendre[i] += beta * c;
        }
        let mut exps = self.exps.clone();
        for (w, c) in &other.exps {
            match exps.binary_search_by(|(v, _)| v.total_cmp(w)) {
                Ok(pos) => exps[pos].1 += beta * c,
                Err(pos) => exps.insert(pos, (*w, beta * c)),
            }
        }
        let samples = match (&self.samples, &other.samples) {
            (None, None) => None,
            (Some(s), None) => Some(s.clone()),
            (None, Some(t)) => Some(t.iter().map(|v| beta * v).collect()),
            (Some(s), Some(t)) => Some(s.iter().zip(t).map(|(p, q)| p + beta * q).collect()),
        };
        Ok(Function {
            space: self.space.clone(),
            legendre,
            exps,
            samples,
        }
        .trimmed())
    }

    pub fn plus(&self, other: &Function) -> Result<Function> {
        self.combine(other, Complex64::new(1.0, 0.0))
    }

    pub fn scaled(&self, c: Complex64) -> Function {
        Function {
            space: self.space.clone(),
            legendre: self.legendre.iter().map(|v| v * c).collect(),
            exps: self.exps.iter().map(|(w, v)| (*w, v * c)).collect(),
            samples: self
                .samples
                .as_ref()
                .map(|s| s.iter().map(|v| v * c).collect()),
        }
    }

    /// `⟨self, other⟩ = ∫ conj(self) · other`.
    pub fn inner(&self, other: &Function) -> Result<Complex64> {
        self.check_space(other)?;
        let mut acc = ZERO;
        // Legendre–Legendre: orthonormal.
        acc += self
            .legendre
            .iter()
            .zip(&other.legendre)
            .map(|(p, q)| p.conj() * q)
            .sum::<Complex64>();
        // Exponential–exponential: closed form.
        let len = self.space.length();
        for (w1, c1) in &self.exps {
            for (w2, c2) in &other.exps {
                acc += c1.conj() * c2 * exp_overlap(w2 - w1, len);
            }
        }
        // Everything else by quadrature.
        let need_cross = (!self.legendre.is_empty() && !other.exps.is_empty())
            || (!self.exps.is_empty() && !other.legendre.is_empty());
        if need_cross || self.samples.is_some() || other.samples.is_some() {
            let w = self.space.rule().weights();
            let (sl, se) = (self.grid_legendre(), self.grid_exps());
            let (ol, oe) = (other.grid_legendre(), other.grid_exps());
            let zero = vec![ZERO; w.len()];
            let ss = self.samples.as_ref().unwrap_or(&zero);
            let os = other.samples.as_ref().unwrap_or(&zero);
            for j in 0..w.len() {
                let cross = sl[j].conj() * oe[j] + se[j].conj() * ol[j];
                let with_samples = ss[j].conj() * (ol[j] + oe[j] + os[j]) + (sl[j] + se[j]).conj() * os[j];
                acc += w[j] * (cross + with_samples);
            }
        }
        Ok(acc)
    }

    pub fn norm_sqr(&self) -> f64 {
        let mixed = !self.legendre.is_empty() && !self.exps.is_empty();
        if self.samples.is_some() || mixed {
            // Pointwise first, so that near-cancelling parts do not lose accuracy.
            let v = self.grid_values();
            let mut acc = Neumaier::default();
            for (vi, wi) in v.iter().zip(self.space.rule().weights()) {
                acc.add(wi * vi.norm_sqr());
            }
            acc.total()
        } else if !self.exps.is_empty() {
            self.inner(self).map(|z| z.re.max(0.0)).unwrap_or(0.0)
        } else {
            hypot_norm(&self.legendre).powi(2)
        }
    }

    /// Multiplication by the coordinate `x`.
    pub fn times_x(&self) -> Function {
        let (a, b) = self.space.interval();
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        // x = mid + half·t and t p_n = α_{n+1} p_{n+1} + α_n p_{n−1},
        // α_n = n / √((2n−1)(2n+1)).
        let alpha = |n: usize| -> f64 {
            let nf = n as f64;
            nf / ((2.0 * nf - 1.0) * (2.0 * nf + 1.0)).sqrt()
        };
        let n = self.legendre.len();
        let mut legendre = vec![ZERO; if n == 0 { 0 } else { n + 1 }];
        for (k, c) in self.legendre.iter().enumerate() {
            legendre[k] += c * mid;
            legendre[k + 1] += c * (half * alpha(k + 1));
            if k > 0 {
                legendre[k - 1] += c * (half * alpha(k));
            }
        }
        let nodes = self.space.rule().nodes();
        let mut samples: Option<Vec<Complex64>> = self
            .samples
            .as_ref()
            .map(|s| s.iter().zip(nodes).map(|(v, x)| v * x).collect());
        if !self.exps.is_empty() {
            let e = self.grid_exps();
            let from_exps = e.iter().zip(nodes).map(|(v, x)| v * x);
            samples = Some(match samples {
                Some(s) => s.iter().zip(from_exps).map(|(p, q)| p + q).collect(),
                None => from_exps.collect(),
            });
        }
        Function {
            space: self.space.clone(),
            legendre,
            exps: Vec::new(),
            samples,
        }
        .trimmed()
    }

    /// `x ↦ ∫_a^x f(y) dy`, exact on the analytic part.
    pub fn integrate_from_left(&self) -> Function {
        let len = self.space.length();
        let a0 = len.sqrt();
        let mut legendre = legendre_antiderivative(&self.legendre, len);
        let mut exps = Vec::new();
        for (w, c) in &self.exps {
            if *w == 0.0 {
                // ∫_a^x c = c (x − a) = c·len/2·(1 + t) = c·len/2·(√len p_0 + √(len/3) p_1)
                grow(&mut legendre, 2);
                legendre[0] += c * (0.5 * len * a0);
                legendre[1] += c * (0.5 * len * (len / 3.0).sqrt());
            } else {
                let k = c / Complex64::new(0.0, *w);
                exps.push((*w, k));
                grow(&mut legendre, 1);
                legendre[0] -= k * a0;
            }
        }
        if let Some(s) = &self.samples {
            let coeffs = self.space.legendre_transform(s);
            let anti = legendre_antiderivative(&coeffs, len);
            grow(&mut legendre, anti.len());
            for (l, v) in legendre.iter_mut().zip(anti) {
                *l += v;
            }
        }
        Function {
            space: self.space.clone(),
            legendre,
            exps,
            samples: None,
        }
        .trimmed()
    }

    /// `∫_a^b f`.
    pub fn integral(&self) -> Complex64 {
        let one = Function::constant(&self.space, Complex64::new(1.0, 0.0));
        one.inner(self).expect("same space")
    }
}

fn grow(v: &mut Vec<Complex64>, len: usize) {
    if v.len() < len {
        v.resize(len, ZERO);
    }
}

/// Antiderivative `∫_a^x Σ c_n p_n` in normalized Legendre form, using
/// `∫_{−1}^t P_n = (P_{n+1} − P_{n−1}) / (2n+1)` for `n ≥ 1`.
fn legendre_antiderivative(coeffs: &[Complex64], len: f64) -> Vec<Complex64> {
    if coeffs.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ZERO; coeffs.len() + 1];
    let half = 0.5 * len;
    for (n, c) in coeffs.iter().enumerate() {
        let nf = n as f64;
        if n == 0 {
            out[0] += c * half;
            out[1] += c * (half / 3f64.sqrt());
        } else {
            out[n + 1] += c * (half / ((2.0 * nf + 1.0) * (2.0 * nf + 3.0)).sqrt());
            out[n - 1] -= c * (half / ((2.0 * nf + 1.0) * (2.0 * nf - 1.0)).sqrt());
        }
    }
    out
}

/// `∫_0^len e^{iΔt} dt = len · e^{iθ/2} · sinc(θ/2)` with `θ = Δ·len`.
fn exp_overlap(delta: f64, len: f64) -> Complex64 {
    if delta == 0.0 {
        return Complex64::new(len, 0.0);
    }
    let half = 0.5 * delta * len;
    let sinc = if half.abs() < 1e-8 {
        1.0 - half * half / 6.0
    } else {
        half.sin() / half
    };
    Complex64::from_polar(len * sinc, half)
}

/// Angular frequency of Fourier mode `k` on an interval of length `len`.
pub fn fourier_frequency(k: i64, len: f64) -> f64 {
    2.0 * PI * k as f64 / len
}

/// An element of one of the ambient Hilbert spaces.
#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Seq(Sequence),
    Func(Function),
}

impl Element {
    pub fn as_sequence(&self) -> Option<&Sequence> {
        match self {
            Element::Seq(s) => Some(s),
            Element::Func(_) => None,
        }
    }

    pub fn as_function(&self) -> Option<&Function> {
        match self {
            Element::Func(f) => Some(f),
            Element::Seq(_) => None,
        }
    }

    /// `self + beta · other`.
    pub fn axpy(&self, beta: Complex64, other: &Element) -> Result<Element> {
        match (self, other) {
            (Element::Seq(a), Element::Seq(b)) => Ok(Element::Seq(a.combine(b, beta)?)),
            (Element::Func(a), Element::Func(b)) => Ok(Element::Func(a.combine(b, beta)?)),
            _ => Err(Error::Representation(
                "cannot combine a sequence with a function".into(),
            )),
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.axpy(Complex64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    pub fn scaled(&self, c: Complex64) -> Element {
        match self {
            Element::Seq(s) => Element::Seq(s.scaled(c)),
            Element::Func(f) => Element::Func(f.scaled(c)),
        }
    }

    /// `⟨self, other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Element) -> Result<Complex64> {
        match (self, other) {
            (Element::Seq(a), Element::Seq(b)) => a.inner(b),
            (Element::Func(a), Element::Func(b)) => a.inner(b),
            _ => Err(Error::Representation(
                "inner product between a sequence and a function".into(),
            )),
        }
    }

    pub fn norm_sqr(&self) -> Result<f64> {
        match self {
            Element::Seq(s) => s.norm_sqr(),
            Element::Func(f) => Ok(f.norm_sqr()),
        }
    }

    pub fn norm(&self) -> Result<f64> {
        self.norm_sqr().map(f64::sqrt)
    }

    /// The zero element of the same space.
    pub fn zero_like(&self) -> Element {
        match self {
            Element::Seq(s) => Element::Seq(Sequence::zero(s.domain())),
            Element::Func(f) => Element::Func(Function::zero(f.space())),
        }
    }

    pub fn same_space(&self, other: &Element) -> bool {
        match (self, other) {
            (Element::Seq(a), Element::Seq(b)) => a.domain() == b.domain(),
            (Element::Func(a), Element::Func(b)) => a.space().same_as(b.space()),
            _ => false,
        }
    }
}

impl From<Sequence> for Element {
    fn from(s: Sequence) -> Self {
        Element::Seq(s)
    }
}

impl From<Function> for Element {
    fn from(f: Function) -> Self {
        Element::Func(f)
    }
}
