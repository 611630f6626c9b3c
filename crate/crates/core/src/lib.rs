//! Trinities, sandpile groups of balanced plane digraphs, hypertrees, and
//! the Bernardi and rotor-routing actions, in exact integer arithmetic.

pub mod actions;
pub mod build;
pub mod error;
pub mod examples;
pub mod format;
pub mod hypertree;
pub mod jaeger;
pub mod linalg;
pub mod map;
pub mod random;
pub mod rotor;
pub mod sandpile;
pub mod trinity;
pub mod trinity_group;
pub mod verify;

pub use error::{Error, Result};
