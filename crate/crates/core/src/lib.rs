//! Minimum-energy scheduling for a user / helper / access-point edge
//! computing system with joint computation and communication cooperation.
//!
//! A user must finish `L` task-input bits within a block of `T` seconds. It
//! may compute bits locally, offload some to a nearby helper (which computes
//! them in the remainder of the block), and offload others to the access
//! point with the helper acting as a decode-and-forward relay. The block is
//! split into four slots:
//!
//! 1. user → helper offload (`tau1`),
//! 2. user broadcast to helper and AP (`tau2`),
//! 3. helper → AP forward (`tau3`),
//! 4. AP execution (`bits_ap / f_ap_max`).
//!
//! The crate is organised as:
//!
//! - [`model`]: rates, energies and constraint validation.
//! - [`lp`]: a small dense simplex solver and the two scheduling LPs
//!   (maximum supportable bits, primal recovery).
//! - [`dual`]: closed-form Lagrangian subproblems, ellipsoid dual ascent and
//!   the end-to-end [`dual::solve_joint`] pipeline.
//! - [`oracle`]: a brute-force grid minimizer sharing no code with [`dual`].
//! - [`schemes`]: the local-only and single-cooperation benchmarks.
//!
//! Everything is `no_std` (with `alloc`) and free of global state.

#![cfg_attr(not(test), no_std)]
#![warn(missing_debug_implementations, rust_2018_idioms)]

extern crate alloc;

pub mod dual;
mod error;
pub mod lp;
mod math;
pub mod model;
pub mod oracle;
mod relay;
pub mod schemes;
mod search;

pub use dual::{solve_joint, solve_joint_with, DualPoint, SolveConfig, SolveReport, SolveStatus};
pub use error::Error;
pub use model::{Allocation, ConstraintReport, EnergyBreakdown, Scenario};

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
