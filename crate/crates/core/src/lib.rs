//! Finite Kripke-model engine for tabular intermediate logics.
//!
//! The crate computes with finite rooted posets (frames), monotone Kripke
//! models over them, p-morphisms and bisimulation quotients, logics given by
//! finite frame families closed under `sm` (generated subframes + p-morphic
//! images), semantic substitutions and their generality pre-order, and the
//! certificate searches behind finitary/unitary unification and projective
//! approximation. A classifier labels logics by frame omission and a small
//! database of known results.

pub mod catalog;
pub mod classifier;
pub mod dot;
pub mod formulas;
pub mod frames;
pub mod logics;
pub mod models;
pub mod morphisms;
pub mod text;
pub mod unification;
pub mod verify;

pub use catalog::Catalog;
pub use formulas::{Formula, Substitution};
pub use frames::Frame;
pub use logics::LogicSpec;
pub use models::Model;
