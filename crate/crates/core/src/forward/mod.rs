//! Forward solvers for the direct problem and the check that closes the
//! inverse → forward loop.
//!
//! [`forward_modal`] evolves the spectral representation exactly. The
//! finite-difference schemes in [`fd`] work on a physical-space grid and share
//! nothing with the eigenfunction machinery, so agreement between a
//! reconstruction and [`verify_reconstruction`] is evidence rather than an
//! identity.

pub mod fd;
mod modal;
pub mod spline;
mod verify;

pub use fd::{
    forward_fd_heat, forward_l1_subdiffusion, forward_l1_with, l1_weights, FdOperator, L1Start, SpaceGrid,
    TimeGrid,
};
pub use modal::forward_modal;
pub use spline::CubicSpline;
pub use verify::{
    verify_reconstruction, verify_source, OracleGrids, OracleScheme, VerificationReport, DEFAULT_TOLERANCE,
};
