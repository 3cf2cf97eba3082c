//! Exact computation of bigraded Betti numbers of Stanley-Reisner rings
//! through the full-subcomplex decomposition, together with everything
//! needed to study them on random complexes:
//!
//! - [`complex`]: simplicial complexes on labeled vertices, full
//!   subcomplexes, boundary matrices, and reduced Betti numbers.
//! - [`linalg`]: the exact rank kernel (fraction-free elimination over the
//!   integers, modular elimination over prime fields).
//! - [`hochster`]: bigraded Betti tables, Betti numbers of the associated
//!   moment-angle complex, minimal non-faces, and an independent Taylor
//!   complex route to the same table.
//! - [`sampler`]: seeded, bit-reproducible Linial-Meshulam sampling.
//! - [`limits`]: exact limit polynomials of the normalized Betti
//!   statistics, plus their variance and covariance polynomials, by
//!   exhaustive enumeration.
//! - [`experiments`]: a deterministic Monte Carlo harness for convergence,
//!   variance-scaling, and covariance checks.
//! - [`io`]: the JSON/CSV file formats shared with the command-line tool.
//!
//! Homology ranks are always exact: over the rationals they go through
//! arbitrary-precision integer elimination, over `F_p` through modular
//! elimination. No floating point enters any rank computation; floats
//! appear only in Monte Carlo aggregates at output time.

pub mod complex;
pub mod experiments;
pub mod field;
pub mod hochster;
pub mod io;
pub mod limits;
pub mod linalg;
pub mod matrix;
pub mod poly;
pub mod sampler;
pub mod subsets;

pub use complex::{ComplexError, SimplicialComplex};
pub use field::{FieldError, FieldSpec};
pub use hochster::{
    bigraded_betti, minimal_non_faces, tor_via_taylor, zk_betti_numbers, BigradedTable,
    HochsterError,
};
pub use limits::{exact_cov_poly, exact_variance_poly, limit_poly_f, limit_poly_g, LimitError};
pub use matrix::IntegerMatrix;
pub use poly::IntPolynomial;
pub use sampler::{sample_lm, sample_stream, LMParams, SampleError};
