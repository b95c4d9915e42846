//! Fat-point linear systems on `P^2` and `P^3`.
//!
//! - [`syscore`]: systems `L_n(d, m_1, ..., m_r)` and their virtual dimension.
//! - [`gfprime`]: prime-field arithmetic and exact rank.
//! - [`interp`]: interpolation matrices at random points and the effective
//!   dimension they certify.
//! - [`blowup`]: intersection numbers, Riemann-Roch, Cremona reduction and
//!   `(-1)`-curve searches on blow-ups.
//! - [`quadricmap`]: curves on a smooth quadric and their planar models.
//! - [`pipeline`]: run configuration and the end-to-end counterexample report.
//!
//! Data-parallel loops go through [`par::Execution`]; building without the
//! default `parallel` feature makes everything sequential.

pub mod blowup;
pub mod error;
pub mod gfprime;
pub mod interp;
pub mod par;
mod parse;
pub mod pipeline;
pub mod quadricmap;
pub mod syscore;

pub use error::{Error, ParseError, Result};
pub use gfprime::{PrimeField, PrimeFieldMatrix};
pub use syscore::FatPointSystem;
