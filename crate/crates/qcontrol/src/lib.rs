//! Controllability analysis for finite-dimensional bilinear quantum control
//! systems: Lie-closure computation, the four controllability verdicts
//! (operator, pure-state, equivalent-state, density-matrix), orbit-equality
//! tests for density matrices, and a piecewise-constant propagator for
//! empirical corroboration.

pub mod analysis;
pub mod error;
pub mod io;
pub mod lie;
pub mod matcore;
pub mod models;
pub mod sim;

pub use analysis::{
    analyze, classify, orbit_equality, realify, realify_state, small_time_report, test_dmc,
    test_esc, test_oc, test_psc, AnalysisReport, Classification, Obstruction, OcFlavor,
    SystemModel,
};
pub use error::{Error, Result};
pub use lie::{
    centralizer_in_full, centralizer_intersection_dim, conjugate_basis, contains_scalar,
    find_invariant_form, lie_closure, BilinearForm, FormSymmetry, LieBasis,
};
pub use matcore::{
    bracket, expm_skew, haar_random_unitary, hs_inner, numerical_rank, skew_project, CMat, CVec,
    DensityMatrix, StateVector,
};
pub use sim::{
    equivalent_state_check, propagate_operator, propagate_state, random_reach_probe,
    PulseSequence, Segment,
};
