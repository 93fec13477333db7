//! Semi-analytic solver for acoustic fields in a semi-infinite strip waveguide
//! with membrane or elastic-plate walls.
//!
//! The wave field is reconstructed from two symmetric scalar Riemann-Hilbert
//! problems on the real axis whose rational coefficient is factorized
//! explicitly from the zeros of a cubic (membrane) or quintic (plate)
//! polynomial. Edge constants are fixed by small dense linear systems, and an
//! independent finite-difference solver cross-checks the result.
//!
//! Module map:
//!
//! - [`model`]: configuration, validation, derived wall parameters
//! - [`kernel`]: branch of `zeta`, dispersion functions, 1-D Green function,
//!   transform connection coefficients
//! - [`spectra`]: polynomial root classification, winding index, dispersion
//!   zeros
//! - [`rh`]: Riemann-Hilbert coefficient, Wiener-Hopf factors, Cauchy
//!   integrals and sectionally analytic solutions
//! - [`constants`]: linear systems fixing the edge constants
//! - [`field`]: boundary traces and interior field reconstruction
//! - [`oracle`]: independent finite-difference / collocation verification

pub mod constants;
pub mod cx;
pub mod field;
pub mod kernel;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod quad;
pub mod rh;
pub mod spectra;

use num_complex::Complex64;

/// Errors shared across the solver pipeline.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("evaluation point too close to the branch cut (distance {dist:.3e})")]
    OnBranchCut { dist: f64 },
    #[error("dispersion function vanishes at this spectral point (|value| = {magnitude:.3e})")]
    DispersionZero { magnitude: f64 },
    #[error("connection coefficients are singular at eta = 0")]
    EtaZero,
    #[error("overflow in scaled evaluation (exponent {exponent:.3e})")]
    Overflow { exponent: f64 },
    #[error("degenerate root configuration: {0}")]
    DegenerateRoots(String),
    #[error("coefficient has a pole on the contour; request an indented contour for case (ii)")]
    ContourPole,
    #[error("argument-principle count {counted} does not match {refined} refined roots")]
    CountMismatch { counted: i64, refined: usize },
    #[error("evaluation at a pole of the coefficient")]
    PoleOnEvaluation,
    #[error("unsupported factorization case: {0}")]
    UnsupportedCase(String),
    #[error("quadrature did not converge (estimate {estimate:.3e}, tolerance {tolerance:.3e})")]
    QuadratureNotConverged { estimate: f64, tolerance: f64 },
    #[error("removability correction failed in case (ii): mismatch {mismatch:.3e}")]
    RemovabilityFailure { mismatch: f64 },
    #[error("residue series truncated at {terms} terms with tail estimate {tail:.3e}")]
    SeriesTruncationTooShort { terms: usize, tail: f64 },
    #[error("square-root branch selection failed: {0}")]
    BranchSelectionFailure(String),
    #[error("linear system is numerically singular (condition estimate {cond:.3e})")]
    SingularSystem { cond: f64 },
    #[error("finite-difference discretization is singular; perturb the grid spacing")]
    SingularDiscretization,
    #[error("field point within the source exclusion radius ({dist:.3e} < {radius:.3e})")]
    SourceSingularity { dist: f64, radius: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Shorthand complex constructor used throughout the crate.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
