//! Executable regularity calculus on finite sets.
//!
//! Maps between finite sets stand in for morphisms. On top of them the
//! crate provides inner/outer/generalized inverses, towers of higher star
//! maps, obstructors of diagram cycles and semicommutativity, regular
//! 3-cycles, braidings with idempotent obstructors, and an exhaustive
//! solver for the regularized set-theoretic Yang-Baxter equation. The
//! `regcat` binary drives all of it from a small workspace language.

pub mod braiding;
pub mod cli;
pub mod diagrams;
pub mod dsl;
pub mod error;
pub mod finmap;
pub mod higher;
pub mod inverses;
pub mod report;
pub mod space;

pub use error::{Error, Result};
pub use finmap::{
    build_map, classify_map, compose, compose_path, direct_image, identity, inverse_image,
    tensor, FinMap, FiniteSet, MapClass, ProductSet, Subset,
};
pub use inverses::InverseKind;
