//! Finite-difference solvers for hyperbolic conservation laws.
//!
//! The crate combines three ingredients:
//!
//! * shock-capturing spatial reconstructions: classical Jiang-Shu WENO,
//!   OWENO3 and FOWENO operators built from fast smoothness indicators and
//!   optimal weights ([`reconstruct`]);
//! * time integrators: SSP Runge-Kutta (3rd order and the 10-stage 4th
//!   order scheme) and approximate Taylor methods in both the global (LAT)
//!   and compact, interface-local (CAT) flavours ([`integrators`],
//!   [`solver2d`]);
//! * reference solutions and a reproduction harness: an exact Riemann
//!   solver for the 1D Euler equations, characteristic solutions for scalar
//!   laws, a catalog of thirteen standard test problems, error norms, EOC
//!   tables and a CPU-ratio benchmark ([`exactsol`], [`harness`]).
//!
//! Everything runs serially and deterministically: two runs with the same
//! configuration produce byte-identical output.
//!
//! See the `examples/` directory for runnable entry points covering each
//! capability, or the `foweno` binary for the command-line interface.

// The numerical kernels iterate components and stencil offsets across
// several arrays at once; index loops are the clearer form there.
#![allow(clippy::needless_range_loop)]

pub mod exactsol;
pub mod grid;
pub mod harness;
pub mod integrators;
pub mod models;
pub mod numdiff;
pub mod reconstruct;
pub mod solver2d;

pub mod cli;

mod ratmath;

pub use grid::{Boundary, Grid1, Grid2, State1, State2};
pub use harness::{RunReport, RunStats, SchemeLabel, TestCase};
pub use integrators::SchemeConfig;
pub use models::FluxModel;
pub use reconstruct::{Family, ReconstructionConfig};
