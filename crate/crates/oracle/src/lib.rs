//! Brute-force reference for the dimer dynamics: each decoupled mode is
//! represented in a truncated number basis and evolved as a wavefunction.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod crosscheck;
pub mod evolve;
pub mod fock;

pub use crosscheck::{
    cross_validate, cross_validate_engine, oracle_dimer_run, CrossCheck, OracleConfig, OracleRun,
};
pub use evolve::{evolve_schrodinger, expm, expm_action, ground_state, NORM_TOLERANCE};
pub use fock::{
    appendix_identity_check, build_mode_ops, dimer_hamiltonian, squeeze_matrix, FockOperator,
    QuadraticBasis, DEFAULT_N_MAX,
};
