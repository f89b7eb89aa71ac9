//! Covering finite groups, and finite quotient chains of profinite groups, by
//! translates of small sets.
//!
//! * [`group`] and [`epimorphism`]: index-encoded finite groups and quotient maps.
//! * [`covering`]: random intersecting families, k-covering sets and their checks.
//! * [`tower`]: extension of covering sets through quotient maps, staged
//!   towers, thin sets and their constructive translation.
//! * [`cli`]: the `covtrans` command-line front end and its documents.

mod bitset;
pub mod cli;
pub mod covering;
pub mod epimorphism;
pub mod error;
pub mod group;
pub mod round;
pub mod subset;
pub mod tower;

pub use epimorphism::{cyclic_tower_map, Epimorphism};
pub use error::{Error, Result};
pub use group::{Element, FiniteGroup};
pub use subset::GroupSubset;
