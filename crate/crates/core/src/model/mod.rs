//! Array Hamiltonians in the bare and normal-mode bases, the normal-mode
//! transform, drive terms and labelled state preparation.

mod hamiltonian;
mod params;
mod pulse;
mod states;
mod supermode;

pub use hamiltonian::{
    bare_space, build_bare_hamiltonian, build_hamiltonian, build_supermode_hamiltonian, drive_hamiltonian,
    drive_operator, space_for, supermode_couplings, supermode_order, supermode_space, Basis,
};
pub use params::{phase_sign, SystemParams, DEFAULT_N_MAX};
pub use pulse::{DriveFrequency, EnvelopeNorm, PulseSpec};
pub use states::{bare_label_state, one_quantum_states, parse_label, supermode_label_state};
pub use supermode::{hopping_matrix, supermode_transform, SupermodeTransform};
