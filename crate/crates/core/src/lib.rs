//! Intersections of shifted regenerative sets, their local times, and the
//! stable-regenerative multiple-stable processes built from them.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod ergodic;
pub mod error;
pub mod experiments;
pub mod interval_sets;
pub mod localtime;
pub mod moments;
pub mod mstable;
pub mod quad;
pub mod regen;
pub mod stats;
pub mod streams;

pub use error::{Error, Result};
