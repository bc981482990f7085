//! Reconstruction of the temperature history `u` and the time-independent
//! source `f` of a diffusion or subdiffusion equation
//!
//! ```text
//! D^α_t u + L u = f,    u(0) = φ,    u(T) = ψ,
//! ```
//!
//! for positive self-adjoint operators `L` with a known eigensystem, using
//! the eigenfunction-series solution. Reconstructions can be checked against
//! independent finite-difference solvers of the direct problem.

pub mod error;
pub mod experiment;
pub mod forward;
pub mod inverse;
pub mod mittag_leffler;
pub mod operator;
pub mod quadrature;

pub use error::{Error, Result};
pub use inverse::{solve, solve_heat, InverseSolution, ProblemData};
pub use mittag_leffler::{ml_neg, FractionalOrder};
pub use operator::{make_operator, EigenSystem, OperatorDescriptor};
pub use quadrature::FieldSample;
