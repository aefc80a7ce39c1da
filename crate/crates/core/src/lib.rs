//! Exact lower semicontinuous submeasures on ℕ.
//!
//! Everything here is computed in exact rational arithmetic: evaluation of
//! submeasure representations on finite sets, the non-pathological hull via
//! an exact simplex, pathology degrees, pair colorings with homogeneous-set
//! extraction, and selectors that return checkable certificates.
//!
//! The crate is `no_std` with `alloc`; the `std` feature only forwards to the
//! numeric dependencies.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod colorings;
pub mod combine;
pub mod cover;
pub mod ideals;
pub mod lp;
pub mod measure;
pub mod pathology;
pub mod rational;
pub mod selectors;
pub mod set;
pub mod spec;
pub mod stream;
pub mod vectors;

pub use measure::PointMeasure;
pub use rational::{ExtRat, Rational};
pub use set::FinSet;
pub use spec::{EvalError, SubmeasureSpec};
pub use stream::SetStream;
pub use vectors::{SparseVec, VectorSeq};
