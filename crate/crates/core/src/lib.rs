//! Explicit invariant orders on coset spaces `G/G0` for free groups, free
//! products with amalgamation, HNN extensions, right-angled Artin groups and
//! surface groups, with exhaustive and sampled law checks on word balls.

pub mod amalgam;
pub mod audit;
pub mod ball;
pub mod burns_hale;
pub mod cli;
pub mod edge;
pub mod error;
pub mod free;
pub mod hnn;
pub mod order;
pub mod par;
pub mod raag;
pub mod snf;
pub mod spec;
pub mod stallings;
pub mod tree;
pub mod words;

pub use error::{Error, Result};
pub use order::{Group, OrderedCosetSpace, Sign};
pub use words::{Alphabet, Generator, Letter, Word};
