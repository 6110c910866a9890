//! Exact-arithmetic toolkit for studying EFX allocations of indivisible
//! chores with monotone cost functions.
//!
//! Everything that feeds a verdict (comparisons, envy ratios, thresholds)
//! runs on integers and rationals; floating point never enters a decision.
//! The crate is organized around a small pipeline:
//!
//! * [`numeric`]: values of the form `m * 2^(p/q)` with exact ordering.
//! * [`setfn`]: bitmask set functions over a named ground set, with
//!   exhaustive class checks (normalized, monotone, subadditive, ...).
//! * [`instances`]: the built-in three-agent, six-chore counterexample
//!   family and its dummy-item extensions.
//! * [`transform`]: rank compression of ordinal profiles, coverage
//!   construction from weighted atoms, separation factors.
//! * [`efx`]: allocation enumeration, critical envy ratios, instance
//!   thresholds, and nonexistence certificates.
//! * [`prooflab`]: the case split behind the nonexistence argument,
//!   replayed mechanically over all allocations.
//! * [`miner`]: seeded search for small ordinal obstructions.
//! * [`io`]: the JSON instance format.

pub mod efx;
pub mod instances;
pub mod io;
pub mod miner;
pub mod numeric;
pub mod prooflab;
pub mod setfn;
pub mod transform;
