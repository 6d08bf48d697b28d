//! Scenario orchestration: timescales, trajectories and attractor search.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{
    compose_state, fidelity, parse_configuration, reduce_to_field, reduce_to_qubits, DensityMatrix, PureState,
    QubitRegisterState,
};
use crate::model::{build_blocks, ExcitationBlockSet, Frame, ModelParams, SpectralState, DEFAULT_MAX_DIM};
use crate::observables::{
    configuration_probability, ghz_fidelity, mean_photon_number, mixed_tangle, von_neumann_entropy,
};
use crate::scalar::Real;
use crate::states::{
    attractor_qubit, attractor_state, basin_state, coherent_field, default_fock_dim, dicke_state, general_two_qubit,
    ghz_state, BasinParams, Branch, CoherentParams,
};

/// Collapse and revival times of the Rabi oscillations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Timescales<T> {
    /// `t_c = √2/λ`
    pub collapse: T,
    /// `t_r = 2π√n̄/λ`
    pub revival: T,
}

pub fn characteristic_times<T: Real>(nbar: T, coupling: T) -> Result<Timescales<T>> {
    if !(nbar > T::zero()) {
        return Err(Error::invalid("nbar", "must be positive"));
    }
    if !(coupling > T::zero()) {
        return Err(Error::invalid("coupling", "must be positive"));
    }
    Ok(Timescales {
        collapse: T::lit(2.0).sqrt() / coupling,
        revival: T::two_pi() * nbar.sqrt() / coupling,
    })
}

/// Complex number in config files: a bare real or `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexValue {
    Real(f64),
    Pair([f64; 2]),
}

impl ComplexValue {
    pub fn to_complex<T: Real>(self) -> Complex<T> {
        match self {
            ComplexValue::Real(re) => Complex::new(T::lit(re), T::zero()),
            ComplexValue::Pair([re, im]) => Complex::new(T::lit(re), T::lit(im)),
        }
    }
}

impl From<Complex<f64>> for ComplexValue {
    fn from(z: Complex<f64>) -> Self {
        if z.im == 0.0 {
            ComplexValue::Real(z.re)
        } else {
            ComplexValue::Pair([z.re, z.im])
        }
    }
}

/// Initial register state specifier.
///
/// `theta` overrides default to the coherent-field phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum QubitSpec {
    /// Basis configuration such as `"g"` or `"eg"`.
    Configuration { label: String },
    /// Dicke state with `k` qubits in `|g⟩`.
    Dicke { k: usize },
    Attractor {
        #[serde(default)]
        sign: Branch,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theta: Option<f64>,
    },
    Basin {
        a: ComplexValue,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theta: Option<f64>,
    },
    GeneralTwoQubit {
        c_ee: ComplexValue,
        c_eg: ComplexValue,
        c_ge: ComplexValue,
        c_gg: ComplexValue,
    },
    /// `(|e…e⟩ + e^{iφ}|g…g⟩)/√2`.
    Ghz {
        #[serde(default)]
        phase: f64,
    },
    /// Raw amplitudes in configuration order.
    Amplitudes { amplitudes: Vec<ComplexValue> },
}

impl QubitSpec {
    pub fn build<T: Real>(&self, num_qubits: usize, field_theta: f64) -> Result<QubitRegisterState<T>> {
        match self {
            QubitSpec::Configuration { label } => {
                QubitRegisterState::configuration(num_qubits, parse_configuration(label, num_qubits)?)
            }
            QubitSpec::Dicke { k } => dicke_state(num_qubits, *k),
            QubitSpec::Attractor { sign, theta } => {
                attractor_state(num_qubits, T::lit(theta.unwrap_or(field_theta)), *sign)
            }
            QubitSpec::Basin { a, theta } => basin_state(&BasinParams::new(
                num_qubits,
                a.to_complex(),
                T::lit(theta.unwrap_or(field_theta)),
            )?),
            QubitSpec::GeneralTwoQubit { c_ee, c_eg, c_ge, c_gg } => {
                if num_qubits != 2 {
                    return Err(Error::invalid(
                        "initial_qubits",
                        "general_two_qubit needs num_qubits = 2",
                    ));
                }
                general_two_qubit(
                    c_ee.to_complex(),
                    c_eg.to_complex(),
                    c_ge.to_complex(),
                    c_gg.to_complex(),
                )
            }
            QubitSpec::Ghz { phase } => ghz_state(num_qubits, excited(), ground(), T::lit(*phase)),
            QubitSpec::Amplitudes { amplitudes } => {
                QubitRegisterState::new(num_qubits, amplitudes.iter().map(|z| z.to_complex()).collect())
            }
        }
    }
}

fn excited<T: Real>() -> [Complex<T>; 2] {
    [Complex::new(T::zero(), T::zero()), Complex::new(T::one(), T::zero())]
}

fn ground<T: Real>() -> [Complex<T>; 2] {
    [Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero())]
}

/// A per-time quantity recorded by [`simulate`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Observable {
    /// Fidelity of ρ^Q to the initial register state.
    PInitial,
    /// Fidelity of ρ^Q to the attractor state of one branch.
    PAttractor(Branch),
    /// Probability of one register configuration, e.g. `p_gg`.
    Configuration(String),
    /// Von Neumann entropy of ρ^Q (nats).
    Entropy,
    /// Two-qubit mixed-state tangle of ρ^Q.
    MixedTangle,
    /// `Tr (ρ^F)²`.
    FieldPurity,
    /// `⟨a†a⟩`.
    MeanPhotons,
    /// Phase-maximized fidelity to `|e…e⟩ + e^{iφ}|g…g⟩`.
    GhzFidelity,
    /// Same, on the attractor basis `{ψ⁺, ψ⁻}`.
    GhzAttractorFidelity,
}

impl Observable {
    pub fn name(&self) -> String {
        match self {
            Observable::PInitial => "p_initial".into(),
            Observable::PAttractor(b) => format!("p_attractor_{}", b.name()),
            Observable::Configuration(label) => format!("p_{label}"),
            Observable::Entropy => "entropy".into(),
            Observable::MixedTangle => "mixed_tangle".into(),
            Observable::FieldPurity => "field_purity".into(),
            Observable::MeanPhotons => "mean_photons".into(),
            Observable::GhzFidelity => "ghz_fidelity".into(),
            Observable::GhzAttractorFidelity => "ghz_attractor_fidelity".into(),
        }
    }

    fn needs_field(&self) -> bool {
        matches!(self, Observable::FieldPurity | Observable::MeanPhotons)
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Observable {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "p_initial" => Observable::PInitial,
            "p_attractor_plus" => Observable::PAttractor(Branch::Plus),
            "p_attractor_minus" => Observable::PAttractor(Branch::Minus),
            "entropy" => Observable::Entropy,
            "mixed_tangle" => Observable::MixedTangle,
            "field_purity" => Observable::FieldPurity,
            "mean_photons" => Observable::MeanPhotons,
            "ghz_fidelity" => Observable::GhzFidelity,
            "ghz_attractor_fidelity" => Observable::GhzAttractorFidelity,
            other => match other.strip_prefix("p_") {
                Some(label) if !label.is_empty() && label.chars().all(|c| c == 'e' || c == 'g') => {
                    Observable::Configuration(label.to_string())
                }
                _ => return Err(format!("unknown observable `{other}`")),
            },
        })
    }
}

impl TryFrom<String> for Observable {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Observable> for String {
    fn from(o: Observable) -> Self {
        o.name()
    }
}

impl Serialize for Observable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for Observable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn default_coupling() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub num_qubits: usize,
    #[serde(default = "default_coupling")]
    pub coupling: f64,
    #[serde(default)]
    pub frequency: f64,
    #[serde(default)]
    pub frame: Frame,
    /// Defaults to `⌈n̄ + 12√n̄⌉ + 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fock_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoherentConfig {
    pub nbar: f64,
    #[serde(default)]
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGridConfig {
    #[serde(default = "TimeGridConfig::default_t_max")]
    pub t_max_over_tr: f64,
    #[serde(default = "TimeGridConfig::default_samples")]
    pub samples: usize,
}

impl TimeGridConfig {
    fn default_t_max() -> f64 {
        1.1
    }

    fn default_samples() -> usize {
        2000
    }
}

impl Default for TimeGridConfig {
    fn default() -> Self {
        Self {
            t_max_over_tr: Self::default_t_max(),
            samples: Self::default_samples(),
        }
    }
}

fn default_observables() -> Vec<Observable> {
    vec![
        Observable::PInitial,
        Observable::PAttractor(Branch::Plus),
        Observable::Entropy,
    ]
}

/// Complete description of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub model: ModelConfig,
    pub coherent: CoherentConfig,
    pub initial_qubits: QubitSpec,
    #[serde(default)]
    pub grid: TimeGridConfig,
    #[serde(default = "default_observables")]
    pub observables: Vec<Observable>,
    #[serde(default)]
    pub attractor_sign: Branch,
}

impl ScenarioConfig {
    /// Interaction-frame, λ = 1 scenario with default truncation and grid.
    pub fn new(num_qubits: usize, nbar: f64, initial_qubits: QubitSpec) -> Self {
        Self {
            model: ModelConfig {
                num_qubits,
                coupling: 1.0,
                frequency: 0.0,
                frame: Frame::Interaction,
                fock_dim: None,
                max_dim: None,
            },
            coherent: CoherentConfig { nbar, theta: 0.0 },
            initial_qubits,
            grid: TimeGridConfig::default(),
            observables: default_observables(),
            attractor_sign: Branch::Plus,
        }
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.coherent.theta = theta;
        self
    }

    pub fn with_observables(mut self, observables: Vec<Observable>) -> Self {
        self.observables = observables;
        self
    }

    pub fn with_grid(mut self, t_max_over_tr: f64, samples: usize) -> Self {
        self.grid = TimeGridConfig { t_max_over_tr, samples };
        self
    }

    pub fn fock_dim(&self) -> usize {
        self.model
            .fock_dim
            .unwrap_or_else(|| default_fock_dim(self.coherent.nbar))
    }

    pub fn model_params<T: Real>(&self) -> ModelParams<T> {
        ModelParams {
            num_qubits: self.model.num_qubits,
            coupling: T::lit(self.model.coupling),
            frequency: T::lit(self.model.frequency),
            frame: self.model.frame,
            fock_dim: self.fock_dim(),
            max_dim: self.model.max_dim.unwrap_or(DEFAULT_MAX_DIM),
        }
    }

    /// Structural checks; error names carry the offending field path.
    pub fn validate(&self) -> Result<()> {
        let m = &self.model;
        if m.num_qubits == 0 || m.num_qubits > 16 {
            return Err(Error::invalid("model.num_qubits", "must be in 1..=16"));
        }
        if !(m.coupling > 0.0) || !m.coupling.is_finite() {
            return Err(Error::invalid("model.coupling", "must be positive and finite"));
        }
        if !(m.frequency >= 0.0) || !m.frequency.is_finite() {
            return Err(Error::invalid("model.frequency", "must be nonnegative and finite"));
        }
        if matches!(m.fock_dim, Some(d) if d < 2) {
            return Err(Error::invalid("model.fock_dim", "must be at least 2"));
        }
        if !(self.coherent.nbar > 0.0) || !self.coherent.nbar.is_finite() {
            return Err(Error::invalid("coherent.nbar", "must be positive and finite"));
        }
        if !self.coherent.theta.is_finite() {
            return Err(Error::invalid("coherent.theta", "must be finite"));
        }
        if self.grid.samples < 2 {
            return Err(Error::invalid("grid.samples", "must be at least 2"));
        }
        if !(self.grid.t_max_over_tr > 0.0) || !self.grid.t_max_over_tr.is_finite() {
            return Err(Error::invalid("grid.t_max_over_tr", "must be positive and finite"));
        }
        for obs in &self.observables {
            match obs {
                Observable::MixedTangle if m.num_qubits != 2 => {
                    return Err(Error::UndefinedObservable {
                        observable: obs.name(),
                        num_qubits: m.num_qubits,
                    })
                }
                Observable::Configuration(label) => {
                    parse_configuration(label, m.num_qubits)
                        .map_err(|e| Error::invalid("observables", e.to_string()))?;
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// Sampled trajectory of observables.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries<T> {
    pub times: Vec<T>,
    /// `t_r` used to express times in revival units.
    pub revival_time: T,
    pub columns: Vec<String>,
    /// `rows[i][k]` is observable `columns[k]` at `times[i]`.
    pub rows: Vec<Vec<T>>,
    pub config: ScenarioConfig,
}

impl<T: Real> TimeSeries<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<Vec<T>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

/// Maximum of the attractor fidelity inside a search window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttractorPeak<T> {
    pub time: T,
    pub fidelity: T,
}

/// A config resolved into diagonalized blocks and a composed initial state.
#[derive(Debug, Clone)]
pub struct Scenario<T: Real> {
    config: ScenarioConfig,
    blocks: ExcitationBlockSet<T>,
    initial_register: QubitRegisterState<T>,
    initial: PureState<T>,
    timescales: Timescales<T>,
    coherent: CoherentParams<T>,
}

impl<T: Real> Scenario<T> {
    pub fn prepare(config: &ScenarioConfig) -> Result<Self> {
        config.validate()?;
        let params = config.model_params::<T>();
        params.validate()?;
        let fock_dim = params.fock_dim;
        let coherent = CoherentParams::new(T::lit(config.coherent.nbar), T::lit(config.coherent.theta), fock_dim)?;
        let field = coherent_field(&coherent)?;
        let initial_register = config
            .initial_qubits
            .build::<T>(config.model.num_qubits, config.coherent.theta)?;
        let initial = compose_state(&initial_register, &field, fock_dim)?;
        let blocks = build_blocks(&params)?;
        let edge = blocks.truncation_weight(&initial)?;
        if edge > T::tol(1e-8) {
            return Err(Error::Truncation {
                context: "initial state in edge excitation blocks",
                weight: edge.as_f64(),
                fock_dim,
            });
        }
        let timescales = characteristic_times(coherent.nbar, params.coupling)?;
        Ok(Self {
            config: config.clone(),
            blocks,
            initial_register,
            initial,
            timescales,
            coherent,
        })
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.config
    }

    pub fn blocks(&self) -> &ExcitationBlockSet<T> {
        &self.blocks
    }

    pub fn timescales(&self) -> Timescales<T> {
        self.timescales
    }

    pub fn coherent(&self) -> &CoherentParams<T> {
        &self.coherent
    }

    pub fn initial_register(&self) -> &QubitRegisterState<T> {
        &self.initial_register
    }

    pub fn initial_state(&self) -> &PureState<T> {
        &self.initial
    }

    pub fn num_qubits(&self) -> usize {
        self.config.model.num_qubits
    }

    /// Attractor state matched to the field phase.
    pub fn attractor(&self, branch: Branch) -> QubitRegisterState<T> {
        attractor_state(self.num_qubits(), self.coherent.theta, branch).expect("num_qubits validated")
    }

    pub fn propagator(&self) -> SpectralState<'_, T> {
        self.blocks
            .decompose(&self.initial)
            .expect("initial state built for these blocks")
    }

    pub fn state_at(&self, t: T) -> PureState<T> {
        self.propagator().at(t)
    }

    /// Sample times `t_max · i/(samples−1)`.
    pub fn times(&self) -> Vec<T> {
        let t_max = T::lit(self.config.grid.t_max_over_tr) * self.timescales.revival;
        let last = self.config.grid.samples - 1;
        (0..=last)
            .map(|i| t_max * (T::from_count(i) / T::from_count(last)))
            .collect()
    }

    /// Evaluates `observables` on one joint state.
    pub fn observe(&self, state: &PureState<T>, observables: &[Observable]) -> Result<Vec<T>> {
        let rho_q = reduce_to_qubits(state);
        let rho_f: Option<DensityMatrix<T>> = observables
            .iter()
            .any(Observable::needs_field)
            .then(|| reduce_to_field(state));
        let theta = self.coherent.theta;
        observables
            .iter()
            .map(|obs| match obs {
                Observable::PInitial => fidelity(self.initial_register.amplitudes(), &rho_q),
                Observable::PAttractor(b) => fidelity(self.attractor(*b).amplitudes(), &rho_q),
                Observable::Configuration(label) => {
                    configuration_probability(state, parse_configuration(label, self.num_qubits())?)
                }
                Observable::Entropy => von_neumann_entropy(&rho_q),
                Observable::MixedTangle => {
                    if self.num_qubits() != 2 {
                        return Err(Error::UndefinedObservable {
                            observable: obs.name(),
                            num_qubits: self.num_qubits(),
                        });
                    }
                    mixed_tangle(&rho_q)
                }
                Observable::FieldPurity => Ok(rho_f.as_ref().expect("field reduced").purity()),
                Observable::MeanPhotons => Ok(mean_photon_number(rho_f.as_ref().expect("field reduced"))),
                Observable::GhzFidelity => ghz_fidelity(&rho_q, excited(), ground()),
                Observable::GhzAttractorFidelity => ghz_fidelity(
                    &rho_q,
                    attractor_qubit(theta, Branch::Plus),
                    attractor_qubit(theta, Branch::Minus),
                ),
            })
            .collect()
    }

    /// Fidelity of ρ^Q(t) to the attractor of `branch`.
    pub fn attractor_fidelity(&self, propagator: &SpectralState<'_, T>, t: T, branch: Branch) -> T {
        let rho = reduce_to_qubits(&propagator.at(t));
        fidelity(self.attractor(branch).amplitudes(), &rho).expect("dimensions match")
    }

    /// Grid argmax of the attractor fidelity in `[start, end]`, refined by a
    /// golden-section search down to `resolution`.
    pub fn locate_attractor_time(&self, window: (T, T), resolution: T, branch: Branch) -> Result<AttractorPeak<T>> {
        let (start, end) = window;
        if !(end > start) || start < T::zero() {
            return Err(Error::EmptyWindow {
                start: start.as_f64(),
                end: end.as_f64(),
            });
        }
        let propagator = self.propagator();
        let f = |t: T| self.attractor_fidelity(&propagator, t, branch);

        let t_max = T::lit(self.config.grid.t_max_over_tr) * self.timescales.revival;
        let spacing = t_max / T::from_count(self.config.grid.samples - 1);
        let count = ((end - start) / spacing).ceil().as_f64().max(63.0) as usize + 1;
        let grid: Vec<T> = (0..count)
            .map(|i| start + (end - start) * T::from_count(i) / T::from_count(count - 1))
            .collect();
        let values: Vec<T> = grid.par_iter().map(|&t| f(t)).collect();
        let best = values
            .iter()
            .enumerate()
            .fold(0, |b, (i, v)| if *v > values[b] { i } else { b });

        let mut lo = grid[best.saturating_sub(1)];
        let mut hi = grid[(best + 1).min(count - 1)];
        let inv_phi = (T::lit(5.0).sqrt() - T::one()) * T::lit(0.5);
        let mut x1 = hi - inv_phi * (hi - lo);
        let mut x2 = lo + inv_phi * (hi - lo);
        let (mut f1, mut f2) = (f(x1), f(x2));
        let resolution = resolution.max(T::default_epsilon() * end);
        while hi - lo > resolution {
            if f1 >= f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - inv_phi * (hi - lo);
                f1 = f(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + inv_phi * (hi - lo);
                f2 = f(x2);
            }
        }
        let candidates = [(grid[best], values[best]), (x1, f1), (x2, f2)];
        let (time, fidelity) = candidates
            .into_iter()
            .fold(candidates[0], |b, c| if c.1 > b.1 { c } else { b });
        Ok(AttractorPeak { time, fidelity })
    }
}

/// Runs the full trajectory and records the selected observables.
pub fn simulate<T: Real>(config: &ScenarioConfig) -> Result<TimeSeries<T>> {
    let scenario = Scenario::<T>::prepare(config)?;
    let propagator = scenario.propagator();
    let times = scenario.times();
    let rows = times
        .par_iter()
        .map(|&t| scenario.observe(&propagator.at(t), &config.observables))
        .collect::<Result<Vec<_>>>()?;
    Ok(TimeSeries {
        times,
        revival_time: scenario.timescales.revival,
        columns: config.observables.iter().map(Observable::name).collect(),
        rows,
        config: config.clone(),
    })
}

/// Peak of the attractor fidelity (branch from `config.attractor_sign`).
pub fn locate_attractor_time<T: Real>(
    config: &ScenarioConfig,
    window: (T, T),
    resolution: T,
) -> Result<AttractorPeak<T>> {
    Scenario::<T>::prepare(config)?.locate_attractor_time(window, resolution, config.attractor_sign)
}
