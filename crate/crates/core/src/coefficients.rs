//! Finite coefficient vectors relative to a declared basis.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A finite complex coefficient vector `(c_origin, c_origin+1, ...)` whose
/// entries refer to a named orthonormal system.
///
/// This is the carrier for the truncated data `f_N`, `g_N`, the unknown
/// `f^(N)` and the truncation residual `ε^(N)`. By Parseval the squared norm
/// of the vector equals the squared Hilbert-space norm of the element it
/// represents.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficients {
    values: Vec<Complex64>,
    origin: i64,
    basis_tag: String,
}

impl Coefficients {
    pub fn new(values: Vec<Complex64>, origin: i64, basis_tag: impl Into<String>) -> Self {
        Self {
            values,
            origin,
            basis_tag: basis_tag.into(),
        }
    }

    /// Vector indexed from 1 (an `ℕ`-indexed system).
    pub fn from_vec(values: Vec<Complex64>, basis_tag: impl Into<String>) -> Self {
        Self::new(values, 1, basis_tag)
    }

    pub fn from_real(values: &[f64], basis_tag: impl Into<String>) -> Self {
        Self::from_vec(
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            basis_tag,
        )
    }

    pub fn zeros(len: usize, basis_tag: impl Into<String>) -> Self {
        Self::from_vec(vec![Complex64::new(0.0, 0.0); len], basis_tag)
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn basis_tag(&self) -> &str {
        &self.basis_tag
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Entry at the absolute index `index` (so `get(origin)` is the first entry).
    pub fn get(&self, index: i64) -> Option<Complex64> {
        let offset = index.checked_sub(self.origin)?;
        usize::try_from(offset)
            .ok()
            .and_then(|i| self.values.get(i).copied())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        hypot_norm(&self.values)
    }

    /// `Σ conj(self_i) other_i`.
    pub fn inner(&self, other: &Coefficients) -> Result<Complex64> {
        self.check_frame(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn checked_add(&self, other: &Coefficients) -> Result<Coefficients> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Coefficients) -> Result<Coefficients> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scaled(&self, factor: Complex64) -> Coefficients {
        Coefficients {
            values: self.values.iter().map(|v| v * factor).collect(),
            origin: self.origin,
            basis_tag: self.basis_tag.clone(),
        }
    }

    /// Same entries relabelled to another basis.
    pub fn retagged(self, basis_tag: impl Into<String>) -> Coefficients {
        Coefficients {
            basis_tag: basis_tag.into(),
            ..self
        }
    }

    fn zip_with(
        &self,
        other: &Coefficients,
        op: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Coefficients> {
        self.check_frame(other)?;
        Ok(Coefficients {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| op(a, b))
                .collect(),
            origin: self.origin,
            basis_tag: self.basis_tag.clone(),
        })
    }

    fn check_frame(&self, other: &Coefficients) -> Result<()> {
        if self.basis_tag != other.basis_tag {
            return Err(Error::FrameMismatch(format!(
                "basis `{}` vs `{}`",
                self.basis_tag, other.basis_tag
            )));
        }
        if self.origin != other.origin {
            return Err(Error::FrameMismatch(format!(
                "origin {} vs {}",
                self.origin, other.origin
            )));
        }
        if self.values.len() != other.values.len() {
            return Err(Error::DimensionMismatch {
                expected: self.values.len(),
                got: other.values.len(),
            });
        }
        Ok(())
    }
}

/// Euclidean norm with scaling, safe against overflow for large entries.
pub(crate) fn hypot_norm(values: &[Complex64]) -> f64 {
    let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let sum: f64 = values.iter().map(|v| (v / scale).norm_sqr()).sum();
    scale * sum.sqrt()
}
