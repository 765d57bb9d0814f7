//! Simulator for small arrays of coupled resonators, each ultrastrongly
//! coupled to a qubit: spectra, avoided crossings and qubit-photon dynamics.

pub mod dynamics;
pub mod error;
pub mod fock;
pub mod model;
pub mod scenario;
pub mod spectrum;

pub use error::{Error, FieldIssue, Result};
