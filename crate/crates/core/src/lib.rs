//! Exact certificates of the psd graph complement inequality
//! `msr(G) + msr(complement(G)) <= |G| + 2` for cactus graphs.
//!
//! The pipeline recognises a cactus, orders its vertices so that every new
//! vertex has at most two earlier neighbours, builds an orthogonal
//! representation of the complement in low dimension with exact rational
//! vectors, verifies it independently, and combines it with a rule base for
//! `msr(G)` into a [`GccReport`].
//!
//! ```
//! use cactus_gcc::cert::{gcc_check, CertifyOptions};
//! use cactus_gcc::Graph;
//!
//! let report = gcc_check(&Graph::cycle(6), &CertifyOptions::default())?;
//! assert!(report.is_certified());
//! assert_eq!(report.msr_g.unwrap().value, 4);
//! # Ok::<(), cactus_gcc::Error>(())
//! ```

// Matrix code reads better with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod batch;
pub mod cactus;
pub mod cert;
pub mod chordal;
pub mod error;
pub mod format;
pub mod graph;
pub mod lattice;
pub mod linalg;
pub mod ordering;
pub mod ortho;
pub mod scalar;

pub use cert::{gcc_check, GccReport};
pub use error::{Error, Result};
pub use graph::Graph;

/// Exact rationals used for every certified computation.
pub type Rational = num_rational::BigRational;
pub type RationalVector = linalg::Vector<Rational>;
pub type FloatVector = linalg::Vector<f64>;
