//! Monte Carlo laboratory for renewal shot noise processes
//! `X(t) = Σ_{k≥0} h(t − S_k) 1{S_k ≤ t}` with eventually nondecreasing,
//! regularly varying response functions `h`.
//!
//! The crate simulates the processes, normalizes and centers them according to
//! the tail structure of the inter-arrival law, samples the candidate limit
//! processes (Brownian motion, spectrally negative stable Lévy processes,
//! inverse stable subordinators and their fractional integrals) and compares
//! the two against closed-form oracles.
//!
//! Module map:
//!
//! - [`response`]: response functions, centering integrals, exponential smoothing.
//! - [`renewal`]: inter-arrival laws, renewal paths, normalization plans.
//! - [`shotnoise`]: shot noise evaluation and normalized prelimit processes.
//! - [`limits`]: samplers for the limit objects.
//! - [`oracle`]: characteristic functions, moment formulas, covariances.
//! - [`stats`]: KS and empirical-CF tests, summaries, convergence sweeps.
//! - [`config`], [`cli`]: the config-driven experiment runner.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod cli;
pub mod config;
pub mod error;
pub mod limits;
pub mod oracle;
pub mod output;
pub mod quadrature;
pub mod renewal;
pub mod response;
pub mod rng;
pub mod shotnoise;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
pub use limits::{StableRole, StableSpec};
pub use renewal::{InterArrivalLaw, LimitCase, LimitCaseSpec, RenewalPath};
pub use response::{LeftTail, ResponseFunction, SlowlyVarying};
pub use rng::StreamSeed;
pub use shotnoise::{ProcessPath, UniformGrid};
