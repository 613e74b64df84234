//! Time-of-arrival operator for a free spin-1/2 Dirac particle moving along x.
//!
//! The crate is organised bottom-up:
//!
//! * [`spinor`]: closed-form Dirac matrices and spinors (energy, event, u/w,
//!   nonrelativistic limits).
//! * [`grid`], [`operators`], [`energy`]: momentum grids that exclude a
//!   neighbourhood of `p = 0`, finite-difference stencils, the Hamiltonian,
//!   the Dirac and nonrelativistic time-of-arrival operators, and the energy
//!   representation where the time operator is `-i d/dE`.
//! * [`eigen`]: the three eigenfunction families of the Dirac time operator.
//! * [`arrival`]: Gaussian wave packets, free evolution, arrival-time
//!   distributions and the flux-at-origin oracle.
//! * [`limits`]: nonrelativistic limits, the dual "time-Hamiltonian" family
//!   and the deficiency-index diagnostic.
//! * [`verify`], [`config`], [`output`], [`cli`]: the command line front end.
//!
//! Natural units are used throughout (`hbar = c = 1`); the mass sets the scale.

// spin and direction indices read better as explicit loops
#![allow(clippy::needless_range_loop)]

pub mod arrival;
pub mod cli;
pub mod config;
pub mod eigen;
pub mod energy;
pub mod error;
pub mod grid;
pub mod limits;
pub mod operators;
pub mod output;
pub mod par;
pub mod quad;
pub mod spinor;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{DerivOrder, GridSpinorField, MomentumGrid};
pub use spinor::{CMat2, CMat4, CVec2, Sign, Spin, Spinor4, C64};
