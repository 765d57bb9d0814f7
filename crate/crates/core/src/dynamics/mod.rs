//! Time evolution: exact eigenbasis propagation for static Hamiltonians,
//! fixed-step interaction-picture integration under a Gaussian drive, and
//! occupation observables.

mod driven;
mod free;
mod observables;

pub use driven::{drive_matrix, evolve_driven, evolve_driven_eig, DrivenOptions, STEP_FAILURE_DRIFT, TARGET_DRIFT};
pub use free::{evolve_free, evolve_free_eig, rabi_period};
pub use observables::{occupation_probability, ObservableSpec, Series, Trajectory};
