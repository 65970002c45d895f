//! Dense complex matrices, Householder QR, minimum-norm least squares and
//! singular values.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::coefficients::{hypot_norm, Coefficients};
use crate::error::{Error, Result};

/// Singular values below this fraction of the largest one count as zero when
/// deciding the numerical rank of a least-squares problem.
pub const RANK_TOLERANCE: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A dense `rows × cols` complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>10.3e}{:+.3e}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl DenseMatrix {
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged rows".into()));
        }
        Ok(Self::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0)))
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { ZERO })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Top-left `rows × cols` block.
    pub fn leading_block(&self, rows: usize, cols: usize) -> DenseMatrix {
        DenseMatrix::from_fn(rows.min(self.rows), cols.min(self.cols), |i, j| self[(i, j)])
    }

    pub fn frobenius_norm(&self) -> f64 {
        hypot_norm(&self.entries)
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.entries)
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.entries[i * self.cols + j]
    }
}

/// Singular values in descending order.
pub fn singular_values(a: &DenseMatrix) -> Vec<f64> {
    if a.rows == 0 || a.cols == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = a.to_nalgebra().singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Numerical rank under [`RANK_TOLERANCE`].
pub fn numerical_rank(a: &DenseMatrix) -> usize {
    let sv = singular_values(a);
    match sv.first() {
        Some(&top) if top > 0.0 => sv.iter().filter(|&&s| s > RANK_TOLERANCE * top).count(),
        _ => 0,
    }
}

/// Householder QR factorization `A Π = Q R`, optionally with column pivoting.
#[derive(Debug, Clone)]
pub struct HouseholderQr {
    rows: usize,
    cols: usize,
    /// Reflector `k` acts on rows `k..`; stored unnormalized, with its squared norm.
    reflectors: Vec<(Vec<Complex64>, f64)>,
    r: DenseMatrix,
    permutation: Vec<usize>,
}

impl HouseholderQr {
    pub fn new(a: &DenseMatrix, pivoting: bool) -> Self {
        let (m, n) = (a.rows, a.cols);
        let mut work = a.clone();
        let mut permutation: Vec<usize> = (0..n).collect();
        let steps = m.min(n);
        let mut reflectors = Vec::with_capacity(steps);

        for k in 0..steps {
            if pivoting {
                let col_norm = |w: &DenseMatrix, j: usize| -> f64 {
                    (k..m).map(|i| w[(i, j)].norm_sqr()).sum::<f64>()
                };
                let best = (k..n)
                    .map(|j| (j, col_norm(&work, j)))
                    .fold((k, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc })
                    .0;
                if best != k {
                    for i in 0..m {
                        work.entries.swap(i * n + k, i * n + best);
                    }
                    permutation.swap(k, best);
                }
            }

            let x: Vec<Complex64> = (k..m).map(|i| work[(i, k)]).collect();
            let xnorm = hypot_norm(&x);
            if xnorm == 0.0 {
                reflectors.push((vec![ZERO; m - k], 0.0));
                continue;
            }
            let phase = if x[0] == ZERO { ONE } else { x[0] / x[0].norm() };
            let alpha = -phase * xnorm;
            let mut v = x;
            v[0] -= alpha;
            let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();

            for j in k..n {
                let dot: Complex64 = (k..m).map(|i| v[i - k].conj() * work[(i, j)]).sum();
                let s = dot * (2.0 / vnorm2);
                for i in k..m {
                    work.entries[i * n + j] -= v[i - k] * s;
                }
            }
            work[(k, k)] = alpha;
            for i in (k + 1)..m {
                work[(i, k)] = ZERO;
            }
            reflectors.push((v, vnorm2));
        }

        HouseholderQr {
            rows: m,
            cols: n,
            reflectors,
            r: work,
            permutation,
        }
    }

    /// Upper-triangular (trapezoidal) factor `R`, `rows × cols`.
    pub fn r(&self) -> &DenseMatrix {
        &self.r
    }

    /// Column permutation: column `j` of `AΠ` is column `permutation()[j]` of `A`.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// `Q^H b`.
    pub fn apply_qh(&self, b: &[Complex64]) -> Vec<Complex64> {
        let mut y = b.to_vec();
        for (k, (v, vnorm2)) in self.reflectors.iter().enumerate() {
            reflect(&mut y[k..], v, *vnorm2);
        }
        y
    }

    /// `Q y`.
    pub fn apply_q(&self, y: &[Complex64]) -> Vec<Complex64> {
        let mut x = y.to_vec();
        for (k, (v, vnorm2)) in self.reflectors.iter().enumerate().rev() {
            reflect(&mut x[k..], v, *vnorm2);
        }
        x
    }

    /// The full unitary factor `Q` (`rows × rows`).
    pub fn q(&self) -> DenseMatrix {
        let m = self.rows;
        let mut q = DenseMatrix::zeros(m, m);
        for j in 0..m {
            let mut e = vec![ZERO; m];
            e[j] = ONE;
            let col = self.apply_q(&e);
            for i in 0..m {
                q[(i, j)] = col[i];
            }
        }
        q
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
}

fn reflect(y: &mut [Complex64], v: &[Complex64], vnorm2: f64) {
    if vnorm2 == 0.0 {
        return;
    }
    let dot: Complex64 = v.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum();
    let s = dot * (2.0 / vnorm2);
    for (yi, vi) in y.iter_mut().zip(v) {
        *yi -= vi * s;
    }
}

/// Minimum-norm minimizer of `‖A x − b‖`.
///
/// The numerical rank `r` is fixed by [`RANK_TOLERANCE`]; the solution is then
/// obtained from a column-pivoted QR factorization truncated to `r` rows,
/// followed by a second QR of the trapezoidal factor (a complete orthogonal
/// decomposition), which yields the minimum-norm element among all
/// least-squares minimizers.
///
/// ```
/// use hilbert_trunc::{Coefficients, DenseMatrix, qr_least_squares};
/// use num_complex::Complex64;
///
/// let diag: Vec<Complex64> = (1..=4).map(|n| Complex64::new(1.0 / n as f64, 0.0)).collect();
/// let a = DenseMatrix::diagonal(&diag);
/// let b = Coefficients::from_real(&[1.0; 4], "e");
/// let x = qr_least_squares(&a, &b).unwrap();
/// for (n, v) in x.values().iter().enumerate() {
///     assert!((v.re - (n + 1) as f64).abs() < 1e-12);
/// }
/// ```
pub fn qr_least_squares(a: &DenseMatrix, b: &Coefficients) -> Result<Coefficients> {
    if a.rows != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.rows,
            got: b.len(),
        });
    }
    let n = a.cols;
    let rank = numerical_rank(a);
    let mut x = vec![ZERO; n];
    if rank == 0 {
        return Ok(Coefficients::new(x, 1, b.basis_tag()));
    }

    let qr = HouseholderQr::new(a, true);
    let c = qr.apply_qh(b.values());
    let r = qr.r();

    let y = if rank == n {
        back_substitute(r, &c[..n])
    } else {
        // R_top = [S^H 0] Z^H with R_top^H = Z [S; 0].
        let r_top_adj = DenseMatrix::from_fn(n, rank, |i, j| r[(j, i)].conj());
        let second = HouseholderQr::new(&r_top_adj, false);
        let s = second.r();
        // Solve S^H w = c[..rank] by forward substitution.
        let mut w = vec![ZERO; rank];
        for i in 0..rank {
            let mut acc = c[i];
            for k in 0..i {
                acc -= s[(k, i)].conj() * w[k];
            }
            w[i] = acc / s[(i, i)].conj();
        }
        let mut padded = vec![ZERO; n];
        padded[..rank].copy_from_slice(&w);
        second.apply_q(&padded)
    };

    for (j, &p) in qr.permutation().iter().enumerate() {
        x[p] = y[j];
    }
    Ok(Coefficients::new(x, 1, b.basis_tag()))
}

fn back_substitute(r: &DenseMatrix, c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len();
    let mut y = vec![ZERO; n];
    for i in (0..n).rev() {
        let mut acc = c[i];
        for k in (i + 1)..n {
            acc -= r[(i, k)] * y[k];
        }
        y[i] = acc / r[(i, i)];
    }
    y
}

/// Unit vectors spanning the orthogonal complement of the row space of `c`,
/// i.e. the null space `{x : C x = 0}`, from a full QR of `C^H`.
pub fn null_space_basis(c: &DenseMatrix) -> Vec<Vec<Complex64>> {
    let k = c.cols;
    let rank = numerical_rank(c);
    let qr = HouseholderQr::new(&c.adjoint(), true);
    let q = qr.q();
    (rank..k).map(|j| q.column(j)).collect()
}
