//! Exact enumeration of permutations that strongly avoid the pattern 132,
//! meaning both π and π² avoid 132.
//!
//! The crate is organized around the cycle containing the largest element:
//!
//! - [`perm`]: permutations, cycles, pattern containment.
//! - [`series`]: exact truncated power series and every generating function.
//! - [`enumerate`]: brute-force generators and the `(n, k)` class table.
//! - [`construct`]: explicit constructions of the big-cycle and 3-cycle families.
//! - [`asymptotics`]: numeric checks of the `K 2^n / √n` growth law.
//! - [`verify`]: the cross-check suite tying all of the above together.

pub mod asymptotics;
pub mod construct;
pub mod enumerate;
pub mod error;
pub mod perm;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use perm::{CycleDecomposition, Pattern, Permutation};
pub use series::PowerSeries;
