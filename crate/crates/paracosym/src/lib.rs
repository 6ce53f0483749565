//! Verification workbench for weakly para-cosymplectic manifolds.
//!
//! The crate is organised bottom up:
//!
//! * [`jets`]: truncated Taylor arithmetic, the differentiation engine;
//! * [`fields`]: scalar expressions and differential forms;
//! * [`riemann`]: a coordinate curvature oracle computed from metric jets;
//! * [`pac`]: almost para-contact structures, the tensor `A` and its
//!   classification, identity suites;
//! * [`frame`]: adopted-frame calculus, curvature coefficients and gauge
//!   transformations;
//! * [`models`]: explicit model families in coordinates;
//! * [`lie`]: exact structure-constant computations;
//! * [`cli`]: configuration loading, check suites and reports.

pub mod jets;
pub mod fields;
pub mod riemann;
pub mod models;
pub mod pac;
pub mod frame;
pub mod lie;
pub mod cli;
