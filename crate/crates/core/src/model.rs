//! Resonant Tavis–Cummings Hamiltonian with uniform coupling.
//!
//! ```text
//! H = ω a†a + (ω/2) Σ σᶻᵢ + λ Σ (a σ⁺ᵢ + a† σ⁻ᵢ)      (ħ = 1)
//! ```
//!
//! The total excitation number `a†a + Σ σ⁺ᵢσ⁻ᵢ` commutes with `H`, so the
//! truncated Hamiltonian splits into blocks of at most `2^N` states each. Every
//! block is diagonalized once; propagation is then a phase rotation in each
//! block's eigenbasis.

use nalgebra::DMatrix;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::PureState;
use crate::scalar::{abs2, cis, czero, Real};

/// Default cap on the joint dimension `2^N · fock_dim`.
pub const DEFAULT_MAX_DIM: usize = 1 << 20;

/// Default cap for building the dense oracle matrix.
pub const DEFAULT_ORACLE_CAP: usize = 4096;

/// Picture in which the Hamiltonian is expressed.
///
/// At resonance the free part commutes with the coupling, so the interaction
/// frame only drops commuting phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    #[default]
    Interaction,
    Lab,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams<T> {
    pub num_qubits: usize,
    /// Coupling λ; sets the inverse time unit.
    pub coupling: T,
    /// Common cavity/qubit frequency ω. Only enters in the lab frame.
    pub frequency: T,
    pub frame: Frame,
    pub fock_dim: usize,
    /// Largest joint dimension `build_blocks` accepts.
    pub max_dim: usize,
}

impl<T: Real> ModelParams<T> {
    /// Interaction-frame model with λ = 1.
    pub fn new(num_qubits: usize, fock_dim: usize) -> Self {
        Self {
            num_qubits,
            coupling: T::one(),
            frequency: T::zero(),
            frame: Frame::Interaction,
            fock_dim,
            max_dim: DEFAULT_MAX_DIM,
        }
    }

    pub fn with_coupling(mut self, coupling: T) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn with_frame(mut self, frame: Frame, frequency: T) -> Self {
        self.frame = frame;
        self.frequency = frequency;
        self
    }

    pub fn with_max_dim(mut self, max_dim: usize) -> Self {
        self.max_dim = max_dim;
        self
    }

    pub fn register_dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn joint_dim(&self) -> usize {
        self.register_dim() * self.fock_dim
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_qubits == 0 || self.num_qubits > 16 {
            return Err(Error::invalid("num_qubits", "must be in 1..=16"));
        }
        if self.fock_dim < 2 {
            return Err(Error::invalid("fock_dim", "must be at least 2"));
        }
        if !(self.coupling > T::zero()) || !self.coupling.is_finite() {
            return Err(Error::invalid("coupling", "must be positive and finite"));
        }
        if self.frequency < T::zero() || !self.frequency.is_finite() {
            return Err(Error::invalid("frequency", "must be nonnegative and finite"));
        }
        let dim = self.register_dim().saturating_mul(self.fock_dim);
        if dim > self.max_dim {
            return Err(Error::DimensionCap { dim, cap: self.max_dim });
        }
        Ok(())
    }

    /// Free-Hamiltonian energy of a basis state, `ω (n + popcount(q) − N/2)`.
    fn free_energy(&self, config: usize, photons: usize) -> T {
        match self.frame {
            Frame::Interaction => T::zero(),
            Frame::Lab => {
                let excitations = T::from_count(photons + config.count_ones() as usize);
                self.frequency * (excitations - T::from_count(self.num_qubits) * T::lit(0.5))
            }
        }
    }

    /// Off-diagonal couplings `λ√(n+1)` from `(q, n)` through `a† σ⁻ᵢ`.
    ///
    /// Yields `(target_config, target_photons, amplitude)`; the Hermitian
    /// partner `a σ⁺ᵢ` is the transpose.
    fn lowering_moves(&self, config: usize, photons: usize) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        let raise_ok = photons + 1 < self.fock_dim;
        let amp = self.coupling * T::from_count(photons + 1).sqrt();
        (0..self.num_qubits)
            .filter(move |&i| raise_ok && config >> i & 1 == 1)
            .map(move |i| (config & !(1 << i), photons + 1, amp))
    }
}

/// One excitation-number sector.
#[derive(Debug, Clone)]
pub struct ExcitationBlock<T: Real> {
    pub excitation: usize,
    /// Joint basis indices, ordered by configuration.
    pub indices: Vec<usize>,
    /// Block touches the Fock truncation (E ≥ fock_dim − 1).
    pub truncated: bool,
    pub energies: Vec<T>,
    /// Columns are eigenvectors in the order of `energies`.
    pub eigenvectors: DMatrix<Complex<T>>,
}

impl<T: Real> ExcitationBlock<T> {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// All excitation blocks of a truncated model, diagonalized.
#[derive(Debug, Clone)]
pub struct ExcitationBlockSet<T: Real> {
    params: ModelParams<T>,
    blocks: Vec<ExcitationBlock<T>>,
}

/// Diagonalizes every excitation-number block of the truncated Hamiltonian.
pub fn build_blocks<T: Real>(params: &ModelParams<T>) -> Result<ExcitationBlockSet<T>> {
    params.validate()?;
    let nq = params.num_qubits;
    let fd = params.fock_dim;
    let max_excitation = fd - 1 + nq;
    let mut blocks = Vec::with_capacity(max_excitation + 1);

    for excitation in 0..=max_excitation {
        let members: Vec<(usize, usize)> = (0..params.register_dim())
            .filter_map(|q| {
                let ones = q.count_ones() as usize;
                (excitation >= ones && excitation - ones < fd).then(|| (q, excitation - ones))
            })
            .collect();
        let size = members.len();
        let local = |q: usize| members.iter().position(|&(c, _)| c == q);
        let mut h = DMatrix::from_element(size, size, czero::<T>());
        for (row, &(q, n)) in members.iter().enumerate() {
            h[(row, row)] = Complex::new(params.free_energy(q, n), T::zero());
            for (q2, n2, amp) in params.lowering_moves(q, n) {
                debug_assert_eq!(n2 + q2.count_ones() as usize, excitation);
                let col = local(q2).expect("move stays inside the block");
                h[(col, row)] += Complex::new(amp, T::zero());
                h[(row, col)] += Complex::new(amp, T::zero());
            }
        }
        let (energies, eigenvectors) = if size == 1 {
            (
                vec![h[(0, 0)].re],
                DMatrix::from_element(1, 1, Complex::new(T::one(), T::zero())),
            )
        } else {
            let eig = h.symmetric_eigen();
            (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
        };
        blocks.push(ExcitationBlock {
            excitation,
            indices: members.iter().map(|&(q, n)| q * fd + n).collect(),
            truncated: excitation + 1 >= fd,
            energies,
            eigenvectors,
        });
    }
    Ok(ExcitationBlockSet {
        params: params.clone(),
        blocks,
    })
}

impl<T: Real> ExcitationBlockSet<T> {
    pub fn params(&self) -> &ModelParams<T> {
        &self.params
    }

    pub fn blocks(&self) -> &[ExcitationBlock<T>] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.params.joint_dim()
    }

    /// All eigenvalues across blocks, ascending.
    pub fn spectrum(&self) -> Vec<T> {
        let mut all: Vec<T> = self.blocks.iter().flat_map(|b| b.energies.iter().copied()).collect();
        all.sort_by(|a, b| a.partial_cmp(b).expect("finite energies"));
        all
    }

    fn check_state(&self, state: &PureState<T>) -> Result<()> {
        if state.num_qubits() != self.params.num_qubits || state.fock_dim() != self.params.fock_dim {
            return Err(Error::DimensionMismatch {
                context: "state vs excitation blocks",
                expected: self.dim(),
                found: state.dim(),
            });
        }
        Ok(())
    }

    /// Total weight of `state` in blocks flagged as touching the truncation.
    pub fn truncation_weight(&self, state: &PureState<T>) -> Result<T> {
        self.check_state(state)?;
        let amps = state.amplitudes();
        Ok(self
            .blocks
            .iter()
            .filter(|b| b.truncated)
            .flat_map(|b| b.indices.iter())
            .fold(T::zero(), |acc, &i| acc + abs2(amps[i])))
    }

    /// Expands `state` in the block eigenbases.
    pub fn decompose(&self, state: &PureState<T>) -> Result<SpectralState<'_, T>> {
        self.check_state(state)?;
        let amps = state.amplitudes();
        let coefficients = self
            .blocks
            .iter()
            .map(|b| {
                (0..b.len())
                    .map(|k| {
                        b.indices
                            .iter()
                            .enumerate()
                            .fold(czero(), |acc, (r, &i)| acc + b.eigenvectors[(r, k)].conj() * amps[i])
                    })
                    .collect()
            })
            .collect();
        Ok(SpectralState {
            blocks: self,
            coefficients,
        })
    }

    pub fn evolve(&self, state: &PureState<T>, t: T) -> Result<PureState<T>> {
        Ok(self.decompose(state)?.at(t))
    }
}

/// A state expanded in the eigenbasis of every block; cheap to propagate.
#[derive(Debug, Clone)]
pub struct SpectralState<'a, T: Real> {
    blocks: &'a ExcitationBlockSet<T>,
    coefficients: Vec<Vec<Complex<T>>>,
}

impl<T: Real> SpectralState<'_, T> {
    /// The state at time `t` (units of 1/λ).
    pub fn at(&self, t: T) -> PureState<T> {
        let params = &self.blocks.params;
        let mut amps = vec![czero(); params.joint_dim()];
        for (b, coeffs) in self.blocks.blocks.iter().zip(&self.coefficients) {
            let rotated: Vec<Complex<T>> = coeffs.iter().zip(&b.energies).map(|(&c, &e)| c * cis(-e * t)).collect();
            for (r, &i) in b.indices.iter().enumerate() {
                amps[i] = rotated
                    .iter()
                    .enumerate()
                    .fold(czero(), |acc, (k, &c)| acc + b.eigenvectors[(r, k)] * c);
            }
        }
        PureState::from_raw(params.num_qubits, params.fock_dim, amps).expect("dimensions fixed by the block set")
    }

    /// `⟨H⟩` from the spectral weights.
    pub fn energy(&self) -> T {
        self.blocks
            .blocks
            .iter()
            .zip(&self.coefficients)
            .flat_map(|(b, c)| b.energies.iter().zip(c))
            .fold(T::zero(), |acc, (&e, &c)| acc + e * abs2(c))
    }
}

/// Exact propagation `e^{−iHt}|Ψ⟩` via the precomputed blocks.
pub fn evolve<T: Real>(state: &PureState<T>, t: T, blocks: &ExcitationBlockSet<T>) -> Result<PureState<T>> {
    blocks.evolve(state, t)
}

/// Full truncated Hamiltonian as a dense matrix in the joint basis.
pub fn dense_hamiltonian<T: Real>(params: &ModelParams<T>) -> Result<DMatrix<Complex<T>>> {
    dense_hamiltonian_capped(params, DEFAULT_ORACLE_CAP)
}

pub fn dense_hamiltonian_capped<T: Real>(params: &ModelParams<T>, cap: usize) -> Result<DMatrix<Complex<T>>> {
    params.validate()?;
    let dim = params.joint_dim();
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    let fd = params.fock_dim;
    let mut h = DMatrix::from_element(dim, dim, czero::<T>());
    for q in 0..params.register_dim() {
        for n in 0..fd {
            let i = q * fd + n;
            h[(i, i)] = Complex::new(params.free_energy(q, n), T::zero());
            for (q2, n2, amp) in params.lowering_moves(q, n) {
                let j = q2 * fd + n2;
                h[(j, i)] += Complex::new(amp, T::zero());
                h[(i, j)] += Complex::new(amp, T::zero());
            }
        }
    }
    Ok(h)
}

/// Matrix-free `H|Ψ⟩` (result not normalized).
pub fn apply_hamiltonian<T: Real>(params: &ModelParams<T>, state: &PureState<T>) -> Vec<Complex<T>> {
    let fd = params.fock_dim;
    let amps = state.amplitudes();
    let mut out = vec![czero(); amps.len()];
    for q in 0..params.register_dim() {
        for n in 0..fd {
            let i = q * fd + n;
            out[i] += amps[i] * params.free_energy(q, n);
            for (q2, n2, amp) in params.lowering_moves(q, n) {
                let j = q2 * fd + n2;
                out[j] += amps[i] * amp;
                out[i] += amps[j] * amp;
            }
        }
    }
    out
}

/// `⟨a†a + Σ σ⁺ᵢσ⁻ᵢ⟩`.
pub fn excitation_number<T: Real>(state: &PureState<T>) -> T {
    let fd = state.fock_dim();
    state.amplitudes().iter().enumerate().fold(T::zero(), |acc, (i, &z)| {
        let (q, n) = (i / fd, i % fd);
        acc + abs2(z) * T::from_count(n + q.count_ones() as usize)
    })
}

/// `⟨H⟩` evaluated matrix-free.
pub fn energy<T: Real>(params: &ModelParams<T>, state: &PureState<T>) -> T {
    let h_psi = apply_hamiltonian(params, state);
    crate::scalar::inner(state.amplitudes(), &h_psi).re
}

/// Brute-force propagator from a full dense eigendecomposition.
///
/// Used as an oracle for the block route on small systems.
#[derive(Debug, Clone)]
pub struct DensePropagator<T: Real> {
    num_qubits: usize,
    fock_dim: usize,
    energies: Vec<T>,
    eigenvectors: DMatrix<Complex<T>>,
}

impl<T: Real> DensePropagator<T> {
    pub fn new(params: &ModelParams<T>, cap: usize) -> Result<Self> {
        let h = dense_hamiltonian_capped(params, cap)?;
        let eig = h.symmetric_eigen();
        Ok(Self {
            num_qubits: params.num_qubits,
            fock_dim: params.fock_dim,
            energies: eig.eigenvalues.iter().copied().collect(),
            eigenvectors: eig.eigenvectors,
        })
    }

    /// Eigenvalues, ascending.
    pub fn spectrum(&self) -> Vec<T> {
        let mut e = self.energies.clone();
        e.sort_by(|a, b| a.partial_cmp(b).expect("finite energies"));
        e
    }

    pub fn evolve(&self, state: &PureState<T>, t: T) -> Result<PureState<T>> {
        if state.num_qubits() != self.num_qubits || state.fock_dim() != self.fock_dim {
            return Err(Error::DimensionMismatch {
                context: "state vs dense propagator",
                expected: self.energies.len(),
                found: state.dim(),
            });
        }
        let v = &self.eigenvectors;
        let psi = nalgebra::DVector::from_column_slice(state.amplitudes());
        let mut coeffs = v.ad_mul(&psi);
        for (c, &e) in coeffs.iter_mut().zip(&self.energies) {
            *c *= cis(-e * t);
        }
        let out = v * coeffs;
        PureState::from_raw(self.num_qubits, self.fock_dim, out.iter().copied().collect())
    }
}
