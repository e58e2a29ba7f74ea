//! Linear stability toolkit for pipe Poiseuille flow in the (W, U) formulation.

#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::excessive_precision,
    clippy::type_complexity,
    clippy::needless_range_loop
)]

pub mod acceptance;
pub mod bvp;
pub mod checks;
pub mod config;
pub mod error;
pub mod grid;
pub mod inequalities;
pub mod linalg;
pub mod manufactured;
pub mod operators;
pub mod runner;
pub mod special;
pub mod spectrum;
pub mod testfn;

pub use error::{Error, Result};
pub use grid::{build_grid, FourierMode, GridRef, RadialField, RadialGrid};
pub use num_complex::Complex64 as C64;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/grid.md")]
    mod grid {}
    #[doc = include_str!("../../../book/src/solvers.md")]
    mod solvers {}
    #[doc = include_str!("../../../book/src/checks.md")]
    mod checks {}
    #[doc = include_str!("../../../book/src/spectrum.md")]
    mod spectrum {}
    #[doc = include_str!("../../../book/src/inequalities.md")]
    mod inequalities {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
