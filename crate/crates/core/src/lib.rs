#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::type_complexity)]

//! Thermalization analysis for commuting Pauli Hamiltonians coupled to a
//! Davies bath: generalized energy barriers, exact coset-block spectral
//! gaps, and the canonical-path lower bounds built from them.
//!
//! The crate is `no_std` with `alloc`. The default `std` feature only adds
//! rayon parallelism; results are identical either way.

extern crate alloc;

pub mod barrier;
pub mod bits;
pub mod bounds;
pub mod davies;
pub mod error;
pub mod gf2;
mod linalg;
pub mod model;
mod par;
pub mod pauli;

pub use error::{Error, Result};
pub use model::{Energy, Model};
pub use pauli::{PauliWord, WeightOneSet};
