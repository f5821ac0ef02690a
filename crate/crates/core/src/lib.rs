//! Separated spherical latin bitrades in their permutation representation.
//!
//! A bitrade is held as a [`TauTriple`] `[τ₁, τ₂, τ₃]` of fixed-point-free
//! permutations with `τ₁τ₂τ₃ = 1`. The crate converts to and from the array
//! form ([`TradePair`]), performs slide expansions and contractions
//! ([`moves`]), computes a breadth-first canonical form ([`canon`]) and
//! enumerates τ-isomorphism classes of spherical bitrades by canonical
//! augmentation ([`enumerate`]). [`oracle`] is an independent brute-force
//! closure used to cross-check the enumerator at small sizes.
//!
//! With the default `parallel` feature the enumerator runs search tasks on a
//! rayon pool; without it every run is sequential.

pub mod canon;
pub mod enumerate;
mod error;
pub mod moves;
pub mod oracle;
pub mod perm;
pub mod trade;
pub mod triple;

pub use canon::{canonical_form, Canonical, CanonicalForm};
pub use enumerate::{enumerate_all, CensusTable, EnumerateConfig, SearchTask};
pub use error::Error;
pub use moves::SlideSite;
pub use trade::{from_pair, to_pair, TradePair};
pub use triple::{Direction, TauTriple, ValidationReport};
