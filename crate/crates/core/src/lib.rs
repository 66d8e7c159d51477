//! PT-symmetric and PT-symmetry-broken two-mode states realized inside an open
//! one-dimensional Bose lattice, in the discrete Gross-Pitaevskii (mean-field)
//! description.
//!
//! * [`lattice`] – model parameters, state, equations of motion.
//! * [`tms`] – analytic eigenstates of the non-Hermitian two-mode system.
//! * [`prep`] – reservoir-chain preparations for both regimes.
//! * [`integrator`] – fixed-step RK4 time evolution.
//! * [`observables`] – currents, correlations, breakdown times, rate fits.
//!
//! Units are ħ = m = 1. Site indices in the public API start at 1. The chain
//! has hard-wall ends.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod integrator;
pub mod lattice;
pub mod observables;
pub mod prep;
pub mod tms;

pub use error::{Error, Result};
pub use integrator::{evolve, phase_derivative, step, IntegratorConfig, Scheme, Trajectory};
pub use lattice::{rhs, tms_as_lattice, LatticeParams, LatticeState};
pub use observables::{
    breakdown_time, correlation, current, decay_rate_fit, peak_deviation, unwrap_phases, BreakdownReference,
    ObservableKind, ObservableSeries,
};
pub use prep::{gamma_profile, prepare, prepare_pt_broken, prepare_pt_symmetric, PrepRegime, PrepSpec, Scenario};
pub use tms::{
    characteristic_values, chemical_potential_embedded, complex_arcsin_branch, evolve_analytic, link_phase,
    pt_broken_state, pt_symmetric_state, tms_chemical_potential, Branch, Regime, TmsSolution,
};

pub use num_complex::Complex64;
