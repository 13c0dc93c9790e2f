//! Lie group models, left-trivialized forms, and the Cartan–Dirac structure.

pub mod cartan;
pub mod forms;
pub mod group;
pub mod integrability;

pub use group::{CMat, GroupModel, ModelKind};
