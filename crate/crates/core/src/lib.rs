//! Multiple harmonic sums over residues coprime to `p`, computed exactly in
//! `Z/p^m`, together with machine checks of the super congruences they satisfy.
//!
//! The crate is `no_std` + `alloc` when built without the default `std`
//! feature. With `std` enabled, Bernoulli numbers are memoized process-wide
//! and timings are recorded on results.
//!
//! ```
//! use supercong_core::sums::{mhs, MhsQuery, Strategy};
//!
//! // S_5^(1)(7^2) mod 7^2
//! let q = MhsQuery::harmonic(5, 1, 7, 2).unwrap();
//! let res = mhs(&q, Strategy::Auto).unwrap();
//! assert_eq!(res.residue.to_u64(), Some(42));
//! ```

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bernoulli;
pub mod combinatorics;
mod error;
pub mod ring;
pub mod sums;
mod time;
pub mod verifier;

pub use error::{Error, Result};
pub use ring::{Modulus, PadicRational, RingElem, Valuation};

/// Bumped whenever a change could alter a computed residue; cached sums
/// recorded under another version are ignored.
pub const ENGINE_VERSION: &str = concat!("supercong-core/", env!("CARGO_PKG_VERSION"));
