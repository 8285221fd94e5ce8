//! Symbolic and numeric rate regions for a two-transmitter, two-receiver
//! broadcast setting with an eavesdropper.
//!
//! The crate is split into layers:
//!
//! * [`dist`] holds finite joint distributions, factorizations and channel builders.
//! * [`info`] evaluates Shannon quantities and represents them symbolically as
//!   rational combinations of joint entropies.
//! * [`poly`] eliminates rate variables by Fourier-Motzkin, prunes redundant
//!   inequalities with LP certificates and turns symbolic systems into numeric regions.
//! * [`regions`] ships the builtin systems, evaluation and the auxiliary search.
//! * [`sim`] runs the finite-blocklength codebook experiments.
//! * [`dsl`] is the text format for systems, and [`cli`] backs the command line tool.

pub mod cli;
pub mod dist;
pub mod dsl;
pub mod error;
pub mod info;
pub mod poly;
pub mod rational;
pub mod regions;
pub mod sim;

pub use error::{Error, Result};
pub use rational::Rational;
