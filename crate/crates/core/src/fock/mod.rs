//! Truncated Fock-space kernel: mode composition, embedded ladder and Pauli
//! operators, Hermitian eigendecomposition and state algebra.

mod eigen;
mod operator;
mod space;
mod state;

pub use eigen::{eig_hermitian, eigenvalues_hermitian, EigenDecomposition};
pub use operator::{annihilation, creation, number, pauli, LocalOperator, Operator, PauliAxis, HERMITIAN_TOL};
pub use space::{make_space, HilbertSpace, ModeKind, ModeSpec, DEFAULT_DIM_GUARD};
pub use state::{apply_annihilation, apply_creation, expectation, overlap, QuantumState};

pub use faer::c64;
