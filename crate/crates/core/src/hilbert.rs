//! Joint qubit-register ⊗ Fock-space states and their reductions.
//!
//! The joint basis is qubit-major: index `q * fock_dim + n`, where bit `i` of
//! the configuration `q` is set when qubit `i` is excited and `n` is the
//! photon number. Tracing out the field is then a sum over contiguous blocks.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{abs2, czero, inner, modulus, norm_sqr, Real};

/// Input normalization tolerance for user-supplied amplitudes.
pub(crate) const INPUT_NORM_TOL: f64 = 1e-8;

/// Which factor of the joint space a reduced operator lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    Qubits,
    Field,
}

/// Parses a configuration label such as `"eg"` into its bitstring index.
///
/// Character `i` describes qubit `i`: `e` (excited) sets bit `i`, `g` leaves it
/// clear.
pub fn parse_configuration(label: &str, num_qubits: usize) -> Result<usize> {
    if label.chars().count() != num_qubits {
        return Err(Error::invalid(
            "configuration",
            format!("`{label}` must have one e/g character per qubit ({num_qubits})"),
        ));
    }
    label.chars().enumerate().try_fold(0usize, |acc, (i, c)| match c {
        'e' | 'E' => Ok(acc | (1 << i)),
        'g' | 'G' => Ok(acc),
        other => Err(Error::invalid(
            "configuration",
            format!("unexpected character `{other}` in `{label}`"),
        )),
    })
}

/// Inverse of [`parse_configuration`].
pub fn configuration_label(config: usize, num_qubits: usize) -> String {
    (0..num_qubits)
        .map(|i| if config >> i & 1 == 1 { 'e' } else { 'g' })
        .collect()
}

fn check_normalized<T: Real>(what: &'static str, amplitudes: &[Complex<T>]) -> Result<T> {
    let n2 = norm_sqr(amplitudes);
    if (n2 - T::one()).abs() > T::tol(INPUT_NORM_TOL) {
        return Err(Error::NotNormalized {
            what,
            norm_sqr: n2.as_f64(),
        });
    }
    Ok(n2)
}

fn rescale<T: Real>(amplitudes: &mut [Complex<T>], norm_sqr: T) {
    let s = T::one() / norm_sqr.sqrt();
    for z in amplitudes.iter_mut() {
        *z *= s;
    }
}

/// Pure state of the qubit register alone, amplitudes ordered by configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitRegisterState<T> {
    amplitudes: Vec<Complex<T>>,
    num_qubits: usize,
}

impl<T: Real> QubitRegisterState<T> {
    /// Accepts amplitudes normalized within 1e-8 and removes the residual.
    pub fn new(num_qubits: usize, mut amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let dim = 1usize << num_qubits;
        if amplitudes.len() != dim {
            return Err(Error::DimensionMismatch {
                context: "qubit register",
                expected: dim,
                found: amplitudes.len(),
            });
        }
        let n2 = check_normalized("qubit register state", &amplitudes)?;
        rescale(&mut amplitudes, n2);
        Ok(Self { amplitudes, num_qubits })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(num_qubits: usize, mut amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let n2 = norm_sqr(&amplitudes);
        if !(n2 > T::zero()) {
            return Err(Error::NotNormalized {
                what: "qubit register state",
                norm_sqr: n2.as_f64(),
            });
        }
        rescale(&mut amplitudes, n2);
        Self::new(num_qubits, amplitudes)
    }

    /// The basis state for one configuration.
    pub fn configuration(num_qubits: usize, config: usize) -> Result<Self> {
        let dim = 1usize << num_qubits;
        if config >= dim {
            return Err(Error::invalid(
                "configuration",
                format!("{config} out of range for {num_qubits} qubits"),
            ));
        }
        let mut amplitudes = vec![czero(); dim];
        amplitudes[config] = Complex::new(T::one(), T::zero());
        Ok(Self { amplitudes, num_qubits })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn amplitude(&self, config: usize) -> Complex<T> {
        self.amplitudes[config]
    }

    pub fn inner(&self, other: &Self) -> Complex<T> {
        inner(&self.amplitudes, &other.amplitudes)
    }

    pub fn projector(&self) -> DensityMatrix<T> {
        DensityMatrix::pure(&self.amplitudes, Subsystem::Qubits)
    }
}

/// Pure state on the joint register ⊗ truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T> {
    amplitudes: Vec<Complex<T>>,
    num_qubits: usize,
    fock_dim: usize,
}

impl<T: Real> PureState<T> {
    /// Wraps amplitudes that are already normalized within 1e-8.
    pub fn new(num_qubits: usize, fock_dim: usize, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let state = Self::from_raw(num_qubits, fock_dim, amplitudes)?;
        check_normalized("joint state", &state.amplitudes)?;
        Ok(state)
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(num_qubits: usize, fock_dim: usize, mut amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let n2 = norm_sqr(&amplitudes);
        if !(n2 > T::zero()) {
            return Err(Error::NotNormalized {
                what: "joint state",
                norm_sqr: n2.as_f64(),
            });
        }
        rescale(&mut amplitudes, n2);
        Self::from_raw(num_qubits, fock_dim, amplitudes)
    }

    pub(crate) fn from_raw(num_qubits: usize, fock_dim: usize, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if fock_dim == 0 {
            return Err(Error::invalid("fock_dim", "must be positive"));
        }
        let dim = (1usize << num_qubits) * fock_dim;
        if amplitudes.len() != dim {
            return Err(Error::DimensionMismatch {
                context: "joint state",
                expected: dim,
                found: amplitudes.len(),
            });
        }
        Ok(Self {
            amplitudes,
            num_qubits,
            fock_dim,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn fock_dim(&self) -> usize {
        self.fock_dim
    }

    pub fn register_dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn index(&self, config: usize, photons: usize) -> usize {
        config * self.fock_dim + photons
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        norm_sqr(&self.amplitudes)
    }

    pub fn inner(&self, other: &Self) -> Complex<T> {
        inner(&self.amplitudes, &other.amplitudes)
    }

    /// Largest elementwise amplitude deviation.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(T::zero(), |m, (a, b)| m.max(modulus(*a - *b)))
    }

    /// Field amplitudes conditioned on one register configuration (unnormalized).
    pub fn field_slice(&self, config: usize) -> &[Complex<T>] {
        let start = config * self.fock_dim;
        &self.amplitudes[start..start + self.fock_dim]
    }
}

/// Product of a register state and a field state.
///
/// `field` may be shorter than `fock_dim`; missing amplitudes are zero.
pub fn compose_state<T: Real>(
    qubits: &QubitRegisterState<T>,
    field: &[Complex<T>],
    fock_dim: usize,
) -> Result<PureState<T>> {
    if field.len() > fock_dim {
        return Err(Error::DimensionMismatch {
            context: "field amplitudes vs fock_dim",
            expected: fock_dim,
            found: field.len(),
        });
    }
    check_normalized("field state", field)?;
    let mut amplitudes = vec![czero(); qubits.dim() * fock_dim];
    for (q, &cq) in qubits.amplitudes().iter().enumerate() {
        for (n, &cn) in field.iter().enumerate() {
            amplitudes[q * fock_dim + n] = cq * cn;
        }
    }
    PureState::from_raw(qubits.num_qubits(), fock_dim, amplitudes)
}

/// Hermitian, unit-trace, positive semidefinite operator on one subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    entries: DMatrix<Complex<T>>,
    subsystem: Subsystem,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates hermiticity and unit trace within 1e-10.
    ///
    /// Positivity is checked lazily by the spectral routines.
    pub fn new(entries: DMatrix<Complex<T>>, subsystem: Subsystem) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionMismatch {
                context: "density matrix columns",
                expected: entries.nrows(),
                found: entries.ncols(),
            });
        }
        let tol = T::tol(1e-10);
        let dim = entries.nrows();
        let mut worst = T::zero();
        for i in 0..dim {
            for j in i..dim {
                worst = worst.max(modulus(entries[(i, j)] - entries[(j, i)].conj()));
            }
        }
        if worst > tol {
            return Err(Error::NotHermitian(worst.as_f64()));
        }
        let trace = (0..dim).fold(T::zero(), |acc, i| acc + entries[(i, i)].re);
        if (trace - T::one()).abs() > tol {
            return Err(Error::BadTrace(trace.as_f64()));
        }
        Ok(Self { entries, subsystem })
    }

    pub(crate) fn new_unchecked(entries: DMatrix<Complex<T>>, subsystem: Subsystem) -> Self {
        Self { entries, subsystem }
    }

    /// `|ψ⟩⟨ψ|` for a normalized vector.
    pub fn pure(vector: &[Complex<T>], subsystem: Subsystem) -> Self {
        let dim = vector.len();
        let entries = DMatrix::from_fn(dim, dim, |i, j| vector[i] * vector[j].conj());
        Self { entries, subsystem }
    }

    pub fn entries(&self) -> &DMatrix<Complex<T>> {
        &self.entries
    }

    pub fn subsystem(&self) -> Subsystem {
        self.subsystem
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> Complex<T> {
        self.entries.trace()
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> T {
        self.entries.iter().fold(T::zero(), |acc, &z| acc + abs2(z))
    }

    /// `⟨v|ρ|v⟩` without normalization or clipping.
    pub fn expectation(&self, v: &[Complex<T>]) -> Complex<T> {
        let dim = self.dim();
        let mut acc = czero();
        for i in 0..dim {
            let row = v
                .iter()
                .enumerate()
                .fold(czero(), |r, (j, &x)| r + self.entries[(i, j)] * x);
            acc += v[i].conj() * row;
        }
        acc
    }

    /// Eigenvalues in decreasing order.
    ///
    /// Values in `[-1e-9, 0)` are clipped to zero; anything more negative is
    /// rejected as non-positive.
    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        let mut values: Vec<T> = self.entries.clone().symmetric_eigenvalues().iter().copied().collect();
        clip_spectrum(&mut values)?;
        values.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
        Ok(values)
    }
}

pub(crate) fn clip_spectrum<T: Real>(values: &mut [T]) -> Result<()> {
    let floor = -T::tol(1e-9);
    for v in values.iter_mut() {
        if *v < floor {
            return Err(Error::NotPositive(v.as_f64()));
        }
        if *v < T::zero() {
            *v = T::zero();
        }
    }
    Ok(())
}

/// `ρ^Q = Tr_F |Ψ⟩⟨Ψ|`.
pub fn reduce_to_qubits<T: Real>(state: &PureState<T>) -> DensityMatrix<T> {
    let dim = state.register_dim();
    let mut rho = DMatrix::from_element(dim, dim, czero());
    for q in 0..dim {
        let row = state.field_slice(q);
        for p in q..dim {
            let col = state.field_slice(p);
            let v = row.iter().zip(col).fold(czero(), |acc, (a, b)| acc + *a * b.conj());
            rho[(q, p)] = v;
            rho[(p, q)] = v.conj();
        }
    }
    DensityMatrix::new_unchecked(rho, Subsystem::Qubits)
}

/// `ρ^F = Tr_Q |Ψ⟩⟨Ψ|`.
pub fn reduce_to_field<T: Real>(state: &PureState<T>) -> DensityMatrix<T> {
    let dim = state.fock_dim();
    let mut rho = DMatrix::from_element(dim, dim, czero());
    for q in 0..state.register_dim() {
        let slice = state.field_slice(q);
        for n in 0..dim {
            let a = slice[n];
            if a == czero() {
                continue;
            }
            for m in n..dim {
                rho[(n, m)] += a * slice[m].conj();
            }
        }
    }
    for n in 0..dim {
        for m in n + 1..dim {
            rho[(m, n)] = rho[(n, m)].conj();
        }
        rho[(n, n)].im = T::zero();
    }
    DensityMatrix::new_unchecked(rho, Subsystem::Field)
}

/// `⟨ref|ρ|ref⟩`, clipped to `[0, 1]`.
///
/// An imaginary residue above 1e-8 is reported as an error.
pub fn fidelity<T: Real>(reference: &[Complex<T>], rho: &DensityMatrix<T>) -> Result<T> {
    if reference.len() != rho.dim() {
        return Err(Error::DimensionMismatch {
            context: "fidelity reference vs density matrix",
            expected: rho.dim(),
            found: reference.len(),
        });
    }
    let value = rho.expectation(reference);
    if value.im.abs() > T::tol(1e-8) {
        return Err(Error::ComplexFidelity(value.im.as_f64()));
    }
    Ok(value.re.max(T::zero()).min(T::one()))
}
