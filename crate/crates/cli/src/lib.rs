//! Document handling for the `matroid-menger` binary: JSON schemas for
//! instances and certificates, plus the seeded instance generator.
//!
//! The binary in `main.rs` is a thin command dispatcher over these modules;
//! they are exposed as a library so integration tests can build corpora
//! without shelling out.

pub mod doc;
pub mod gen;
