//! Finite-dimensional truncation of linear inverse problems `A f = g` in
//! separable Hilbert spaces.
//!
//! A bounded operator is compressed to `A_N[i][j] = ⟨v_i, A u_j⟩` between a
//! trial system `(u_n)` and a test system `(v_n)`. The truncated problem is
//! solved by QR, GMRES or conjugate gradients. The result is lifted back and
//! judged by its error and residual in the full space.
//!
//! ```
//! use hilbert_trunc::bases::OrthonormalBasis;
//! use hilbert_trunc::operators::BoundedOperator;
//! use hilbert_trunc::truncation::{compress, solve_direct};
//! use hilbert_trunc::{Element, Function, L2Space};
//!
//! let space = L2Space::for_truncation(1.0, 2.0, 6)?;
//! let legendre = OrthonormalBasis::legendre(&space);
//! let m = BoundedOperator::multiplication_x(1.0, 2.0)?;
//! let g = Element::Func(Function::polynomial(&space, &[0.0, 0.0, 1.0]));
//! let sol = solve_direct(&compress(&m, &legendre, &legendre, 6, &g)?)?;
//! assert!((sol.coeffs.norm() - (7.0f64 / 3.0).sqrt()).abs() < 1e-12);
//! # Ok::<(), hilbert_trunc::Error>(())
//! ```
//!
//! The guide in `book/` covers each module; its code samples are compiled
//! and run as documentation tests.

pub mod bases;
pub mod coefficients;
pub mod diagnostics;
pub mod error;
pub mod law;
pub mod matrix;
pub mod noise;
pub mod operators;
pub mod quadrature;
pub mod space;
pub mod truncation;

pub use coefficients::Coefficients;
pub use error::{Error, Result};
pub use law::SequenceLaw;
pub use matrix::{qr_least_squares, singular_values, DenseMatrix};
pub use quadrature::{gauss_legendre, QuadratureRule};
pub use space::{Element, Function, L2Space, SeqDomain, Sequence};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    pub struct Readme;
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/spaces.md")]
    pub struct Spaces;
    #[doc = include_str!("../../../book/src/operators.md")]
    pub struct Operators;
    #[doc = include_str!("../../../book/src/bases.md")]
    pub struct Bases;
    #[doc = include_str!("../../../book/src/truncation.md")]
    pub struct Truncation;
    #[doc = include_str!("../../../book/src/convergence.md")]
    pub struct Convergence;
    #[doc = include_str!("../../../book/src/noise.md")]
    pub struct Noise;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
