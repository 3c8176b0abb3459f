//! Finite set mappings generated by families of pair functions, free-set
//! search, ρ-type colorings, forcing-condition algebra, and exact/symbolic
//! arithmetic for the accompanying Ramsey-number bounds.

pub mod bits;
pub mod bounds;
pub mod conditions;
pub mod error;
pub mod freeset;
pub mod io;
pub mod ramsey;
pub mod random;
pub mod setmap;
pub mod suites;

pub use bits::ElemSet;
pub use error::{Error, Result};
