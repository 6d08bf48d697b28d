//! Scalar diagnostics and the Husimi Q function.

use nalgebra::DMatrix;
use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hilbert::{clip_spectrum, DensityMatrix, PureState, QubitRegisterState};
use crate::scalar::{abs2, czero, modulus, Real};
use crate::states::{coherent_amplitudes, product_state};

/// `Σ_n |⟨config, n|Ψ⟩|²`.
pub fn configuration_probability<T: Real>(state: &PureState<T>, config: usize) -> Result<T> {
    if config >= state.register_dim() {
        return Err(Error::invalid(
            "configuration",
            format!("{config} out of range for {} qubits", state.num_qubits()),
        ));
    }
    let p = state
        .field_slice(config)
        .iter()
        .fold(T::zero(), |acc, &z| acc + abs2(z));
    Ok(p.min(T::one()))
}

/// `−Tr ρ ln ρ` in nats.
pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let s = rho
        .eigenvalues()?
        .into_iter()
        .filter(|&p| p > T::zero())
        .fold(T::zero(), |acc, p| acc - p * p.ln());
    Ok(s.max(T::zero()))
}

/// `Σ_n n ρ_nn` for a field density matrix.
pub fn mean_photon_number<T: Real>(rho: &DensityMatrix<T>) -> T {
    (0..rho.dim()).fold(T::zero(), |acc, n| acc + T::from_count(n) * rho.entries()[(n, n)].re)
}

/// `τ = 4|C_ee C_gg − C_eg C_ge|²` for a two-qubit pure state.
pub fn pure_tangle<T: Real>(qubits: &QubitRegisterState<T>) -> Result<T> {
    if qubits.num_qubits() != 2 {
        return Err(Error::UndefinedObservable {
            observable: "pure_tangle".into(),
            num_qubits: qubits.num_qubits(),
        });
    }
    let c = qubits.amplitudes();
    let det = c[3] * c[0] - c[1] * c[2];
    Ok((T::lit(4.0) * abs2(det)).min(T::one()))
}

/// Wootters concurrence `max(0, μ₁ − μ₂ − μ₃ − μ₄)`.
pub fn concurrence<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    Ok(wootters_margin(rho)?.max(T::zero()))
}

/// The unclipped `μ₁ − μ₂ − μ₃ − μ₄`; negative for separable states.
///
/// With `ρ = X X†`, the `μᵢ` are the singular values of `Xᵀ (σʸ⊗σʸ) X`. This
/// avoids square roots of near-zero eigenvalues, which would turn rounding
/// noise of order 1e−16 into errors of order 1e−8.
pub fn wootters_margin<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            context: "two-qubit density matrix",
            expected: 4,
            found: rho.dim(),
        });
    }
    let eig = rho.entries().clone().symmetric_eigen();
    let mut weights: Vec<T> = eig.eigenvalues.iter().copied().collect();
    clip_spectrum(&mut weights)?;
    // eigenvalues at the solver's rounding level carry no information
    let cutoff = T::default_epsilon() * T::lit(16.0);
    let kept: Vec<usize> = (0..4).filter(|&k| weights[k] > cutoff).collect();
    if kept.is_empty() {
        return Ok(T::zero());
    }
    let x = DMatrix::from_fn(4, kept.len(), |i, k| {
        eig.eigenvectors[(i, kept[k])] * weights[kept[k]].sqrt()
    });
    // σʸ⊗σʸ is anti-diagonal with signs (−1, +1, +1, −1) in configuration order
    let flip_sign = |i: usize| if i == 0 || i == 3 { -T::one() } else { T::one() };
    let flipped = DMatrix::from_fn(4, kept.len(), |i, k| x[(3 - i, k)] * flip_sign(i));
    let tau = x.transpose() * flipped;
    let mut mu: Vec<T> = tau.singular_values().iter().copied().collect();
    mu.resize(4, T::zero());
    mu.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    Ok(mu[0] - mu[1] - mu[2] - mu[3])
}

/// Mixed-state tangle `τ = C²` of a two-qubit density matrix.
pub fn mixed_tangle<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let c = concurrence(rho)?;
    Ok((c * c).min(T::one()))
}

/// Fidelity to the GHZ family `(|u…u⟩ + e^{iφ}|v…v⟩)/√2`, maximized over φ.
///
/// Closed form `(⟨U|ρ|U⟩ + ⟨V|ρ|V⟩)/2 + |⟨U|ρ|V⟩|`.
pub fn ghz_fidelity<T: Real>(rho: &DensityMatrix<T>, u: [Complex<T>; 2], v: [Complex<T>; 2]) -> Result<T> {
    let n = rho.dim().trailing_zeros() as usize;
    if rho.dim() != 1 << n {
        return Err(Error::invalid("rho", "dimension is not a power of two"));
    }
    let big_u = product_state(n, u);
    let big_v = product_state(n, v);
    let m = rho.entries();
    let mut cross = czero();
    for i in 0..rho.dim() {
        for j in 0..rho.dim() {
            cross += big_u[i].conj() * m[(i, j)] * big_v[j];
        }
    }
    let diag = (rho.expectation(&big_u).re + rho.expectation(&big_v).re) * T::lit(0.5);
    Ok((diag + modulus(cross)).max(T::zero()).min(T::one()))
}

/// One axis of a phase-space grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis<T> {
    pub min: T,
    pub max: T,
    pub count: usize,
}

impl<T: Real> GridAxis<T> {
    pub fn new(min: T, max: T, count: usize) -> Self {
        Self { min, max, count }
    }

    pub fn value(&self, i: usize) -> T {
        if self.count == 1 {
            return self.min;
        }
        self.min + (self.max - self.min) * T::from_count(i) / T::from_count(self.count - 1)
    }

    fn validate(&self, name: &str) -> Result<()> {
        if self.count == 0 || !self.min.is_finite() || !self.max.is_finite() || self.max < self.min {
            return Err(Error::invalid(name, "needs count ≥ 1 and finite min ≤ max"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    pub re: GridAxis<T>,
    pub im: GridAxis<T>,
    /// Multiply by 1/π (standard normalization) instead of the bare overlap.
    pub pi_normalized: bool,
}

impl<T: Real> GridSpec<T> {
    /// 201 × 201 square over `[−1.5√n̄, 1.5√n̄]²`.
    pub fn default_for(nbar: T) -> Self {
        let half = T::lit(1.5) * nbar.sqrt().max(T::one());
        let axis = GridAxis::new(-half, half, 201);
        Self {
            re: axis,
            im: axis,
            pi_normalized: false,
        }
    }
}

/// Sampled Q function; `values[j * re.count + i]` is at `β = re(i) + i·im(j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QGrid<T> {
    pub re: GridAxis<T>,
    pub im: GridAxis<T>,
    pub pi_normalized: bool,
    pub values: Vec<T>,
}

/// A local maximum of a [`QGrid`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QPeak<T> {
    pub beta: Complex<T>,
    pub value: T,
}

impl<T: Real> QGrid<T> {
    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[j * self.re.count + i]
    }

    pub fn point(&self, i: usize, j: usize) -> Complex<T> {
        Complex::new(self.re.value(i), self.im.value(j))
    }

    pub fn max_value(&self) -> T {
        self.values.iter().copied().fold(T::zero(), |a, b| a.max(b))
    }

    /// Grid points not exceeded by any of their 8 neighbours and carrying at
    /// least `fraction` of the global maximum. Plateaus report one point each.
    pub fn local_maxima(&self, fraction: T) -> Vec<QPeak<T>> {
        let (nr, ni) = (self.re.count, self.im.count);
        let floor = self.max_value() * fraction;
        let mut peaks = Vec::new();
        for j in 0..ni {
            for i in 0..nr {
                let v = self.get(i, j);
                if v < floor {
                    continue;
                }
                let mut is_peak = true;
                'nbr: for dj in -1i64..=1 {
                    for di in -1i64..=1 {
                        if di == 0 && dj == 0 {
                            continue;
                        }
                        let (x, y) = (i as i64 + di, j as i64 + dj);
                        if x < 0 || y < 0 || x >= nr as i64 || y >= ni as i64 {
                            continue;
                        }
                        let w = self.get(x as usize, y as usize);
                        // ties are broken toward the earlier grid point
                        let earlier = (y, x) < (j as i64, i as i64);
                        if w > v || (w == v && earlier) {
                            is_peak = false;
                            break 'nbr;
                        }
                    }
                }
                if is_peak {
                    peaks.push(QPeak {
                        beta: self.point(i, j),
                        value: v,
                    });
                }
            }
        }
        peaks
    }
}

/// `Q(β) = ⟨β|ρ^F|β⟩` on a grid.
///
/// `ρ^F` lives on `n < fock_dim`, so projecting the exact coherent state onto
/// that subspace (no renormalization) gives the exact overlap for every `β`.
pub fn q_function<T: Real>(rho_field: &DensityMatrix<T>, grid: &GridSpec<T>) -> Result<QGrid<T>> {
    grid.re.validate("grid.re")?;
    grid.im.validate("grid.im")?;
    let dim = rho_field.dim();
    // ρ = Σ_k p_k |v_k⟩⟨v_k| turns each point into a few short dot products
    let eig = rho_field.entries().clone().symmetric_eigen();
    let mut weights: Vec<T> = eig.eigenvalues.iter().copied().collect();
    clip_spectrum(&mut weights)?;
    let cutoff = T::lit(1e-15);
    let modes: Vec<(T, Vec<Complex<T>>)> = weights
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > cutoff)
        .map(|(k, &p)| (p, eig.eigenvectors.column(k).iter().copied().collect()))
        .collect();
    let scale = if grid.pi_normalized {
        T::one() / T::pi()
    } else {
        T::one()
    };

    let points: Vec<(usize, usize)> = (0..grid.im.count)
        .flat_map(|j| (0..grid.re.count).map(move |i| (i, j)))
        .collect();
    let values = points
        .par_iter()
        .map(|&(i, j)| {
            let beta = Complex::new(grid.re.value(i), grid.im.value(j));
            let b = coherent_amplitudes(beta, dim);
            let q = modes.iter().fold(T::zero(), |acc, (p, v)| {
                let overlap = b.iter().zip(v).fold(czero(), |s, (x, y)| s + x.conj() * y);
                acc + *p * abs2(overlap)
            });
            q.max(T::zero()) * scale
        })
        .collect();
    Ok(QGrid {
        re: grid.re,
        im: grid.im,
        pi_normalized: grid.pi_normalized,
        values,
    })
}
