//! Resonant Tavis–Cummings dynamics for `N` qubits coupled to one cavity mode.
//!
//! The Hamiltonian conserves the excitation number, so the joint space splits
//! into small blocks that are diagonalized once and reused for every time.
//! All numerics are generic over [`Real`]; `f64` aliases are provided below.

// `!(x > 0)` guards double as NaN rejection.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod hilbert;
pub mod model;
pub mod observables;
pub mod scalar;
pub mod states;

pub use dynamics::{
    characteristic_times, locate_attractor_time, simulate, AttractorPeak, CoherentConfig, ComplexValue, ModelConfig,
    Observable, QubitSpec, Scenario, ScenarioConfig, TimeGridConfig, TimeSeries, Timescales,
};
pub use error::{Error, Result};
pub use hilbert::{
    compose_state, configuration_label, fidelity, parse_configuration, reduce_to_field, reduce_to_qubits,
    DensityMatrix, PureState, QubitRegisterState, Subsystem,
};
pub use model::{
    build_blocks, dense_hamiltonian, evolve, DensePropagator, ExcitationBlock, ExcitationBlockSet, Frame, ModelParams,
    SpectralState,
};
pub use observables::{
    concurrence, configuration_probability, ghz_fidelity, mean_photon_number, mixed_tangle, pure_tangle, q_function,
    von_neumann_entropy, GridAxis, GridSpec, QGrid, QPeak,
};
pub use scalar::Real;
pub use states::{
    attractor_qubit, attractor_state, basin_state, coherent_field, default_fock_dim, dicke_state, field_cat_reference,
    general_two_qubit, ghz_state, BasinParams, Branch, CoherentParams,
};

pub type C64 = num_complex::Complex<f64>;
pub type C32 = num_complex::Complex<f32>;

pub type PureState64 = PureState<f64>;
pub type PureState32 = PureState<f32>;
pub type QubitRegisterState64 = QubitRegisterState<f64>;
pub type QubitRegisterState32 = QubitRegisterState<f32>;
pub type DensityMatrix64 = DensityMatrix<f64>;
pub type DensityMatrix32 = DensityMatrix<f32>;
pub type ModelParams64 = ModelParams<f64>;
pub type ExcitationBlockSet64 = ExcitationBlockSet<f64>;
pub type Scenario64 = Scenario<f64>;
pub type TimeSeries64 = TimeSeries<f64>;
pub type QGrid64 = QGrid<f64>;
