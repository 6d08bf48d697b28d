//! Constructors for the field and register states used by the scenarios.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::QubitRegisterState;
use crate::scalar::{cis, czero, modulus, norm_sqr, Real};

/// Maximum Poisson weight allowed beyond the truncation.
pub const TRUNCATION_TAIL_TOL: f64 = 1e-8;

/// Default truncation: `n_max = ⌈n̄ + 12√n̄⌉`, so `fock_dim = n_max + 1`.
pub fn default_fock_dim(nbar: f64) -> usize {
    let n_max = (nbar + 12.0 * nbar.sqrt()).ceil().max(1.0) as usize;
    n_max + 1
}

/// `Σ_{n ≥ from} e^{−n̄} n̄ⁿ / n!`, summed directly so small tails keep precision.
pub fn poisson_tail<T: Real>(nbar: T, from: usize) -> T {
    if nbar == T::zero() {
        return if from == 0 { T::one() } else { T::zero() };
    }
    let ln_nbar = nbar.ln();
    let mut ln_fact = T::zero();
    for k in 2..=from {
        ln_fact += T::from_count(k).ln();
    }
    let mut log_p = -nbar + T::from_count(from) * ln_nbar - ln_fact;
    let mut tail = T::zero();
    let mut n = from;
    loop {
        let p = log_p.exp();
        tail += p;
        n += 1;
        log_p += ln_nbar - T::from_count(n).ln();
        // past the mode, terms decay geometrically
        if T::from_count(n) > nbar && p < tail * T::lit(1e-18) {
            break;
        }
        if n > from + 100_000 {
            break;
        }
    }
    tail
}

/// Unnormalized coherent amplitudes `e^{−|β|²/2} βⁿ/√n!` for `n < len`.
///
/// Evaluated in log space so large `|β|` neither overflows nor underflows
/// prematurely.
pub fn coherent_amplitudes<T: Real>(beta: Complex<T>, len: usize) -> Vec<Complex<T>> {
    let r = modulus(beta);
    let mut out = vec![czero(); len];
    if len == 0 {
        return out;
    }
    if r == T::zero() {
        out[0] = Complex::new(T::one(), T::zero());
        return out;
    }
    let phase = beta.im.atan2(beta.re);
    let ln_r = r.ln();
    let mut log_mag = -r * r * T::lit(0.5);
    for (n, z) in out.iter_mut().enumerate() {
        if n > 0 {
            log_mag += ln_r - T::from_count(n).ln() * T::lit(0.5);
        }
        *z = cis(phase * T::from_count(n)) * log_mag.exp();
    }
    out
}

/// Coherent field `|α⟩`, `α = √n̄ e^{−iθ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentParams<T> {
    pub nbar: T,
    pub theta: T,
    pub fock_dim: usize,
}

impl<T: Real> CoherentParams<T> {
    pub fn new(nbar: T, theta: T, fock_dim: usize) -> Result<Self> {
        let p = Self { nbar, theta, fock_dim };
        p.validate()?;
        Ok(p)
    }

    pub fn with_default_truncation(nbar: T, theta: T) -> Result<Self> {
        Self::new(nbar, theta, default_fock_dim(nbar.as_f64()))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nbar >= T::zero()) || !self.nbar.is_finite() {
            return Err(Error::invalid("nbar", "must be nonnegative and finite"));
        }
        if !self.theta.is_finite() {
            return Err(Error::invalid("theta", "must be finite"));
        }
        let tail = poisson_tail(self.nbar, self.fock_dim);
        if tail > T::tol(TRUNCATION_TAIL_TOL) {
            return Err(Error::Truncation {
                context: "coherent field",
                weight: tail.as_f64(),
                fock_dim: self.fock_dim,
            });
        }
        Ok(())
    }

    pub fn alpha(&self) -> Complex<T> {
        cis(-self.theta) * self.nbar.sqrt()
    }
}

/// Truncated and renormalized `|α⟩`.
pub fn coherent_field<T: Real>(p: &CoherentParams<T>) -> Result<Vec<Complex<T>>> {
    p.validate()?;
    Ok(normalize(coherent_amplitudes(p.alpha(), p.fock_dim)))
}

fn normalize<T: Real>(mut v: Vec<Complex<T>>) -> Vec<Complex<T>> {
    let s = T::one() / norm_sqr(&v).sqrt();
    for z in v.iter_mut() {
        *z *= s;
    }
    v
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Symmetric Dicke state with `ground` qubits in `|g⟩` (label `m = N/2 − ground`).
pub fn dicke_state<T: Real>(num_qubits: usize, ground: usize) -> Result<QubitRegisterState<T>> {
    if ground > num_qubits {
        return Err(Error::invalid(
            "k",
            format!("{ground} ground-state qubits out of range for {num_qubits} qubits"),
        ));
    }
    let excited = num_qubits - ground;
    let amp = T::lit(binomial(num_qubits, ground)).sqrt().recip();
    let amplitudes = (0..1usize << num_qubits)
        .map(|q| {
            if q.count_ones() as usize == excited {
                Complex::new(amp, T::zero())
            } else {
                czero()
            }
        })
        .collect();
    QubitRegisterState::new(num_qubits, amplitudes)
}

/// Sign branch of the attractor states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash, Serialize, Deserialize)]
pub enum Branch {
    #[default]
    #[serde(rename = "+", alias = "plus")]
    Plus,
    #[serde(rename = "-", alias = "minus")]
    Minus,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        }
    }

    fn sign<T: Real>(self) -> T {
        match self {
            Branch::Plus => T::one(),
            Branch::Minus => -T::one(),
        }
    }
}

/// Single-qubit attractor `(e^{−iθ}|e⟩ ± i|g⟩)/√2` as `[g, e]` amplitudes.
pub fn attractor_qubit<T: Real>(theta: T, branch: Branch) -> [Complex<T>; 2] {
    let s = T::lit(0.5).sqrt();
    [Complex::new(T::zero(), branch.sign::<T>() * s), cis(-theta) * s]
}

/// `⊗ⁿ` of a single-qubit state given as `[g, e]` amplitudes.
pub fn product_state<T: Real>(num_qubits: usize, single: [Complex<T>; 2]) -> Vec<Complex<T>> {
    (0..1usize << num_qubits)
        .map(|q| (0..num_qubits).fold(Complex::new(T::one(), T::zero()), |acc, i| acc * single[q >> i & 1]))
        .collect()
}

/// Spin-coherent attractor: the tensor power of [`attractor_qubit`].
pub fn attractor_state<T: Real>(num_qubits: usize, theta: T, branch: Branch) -> Result<QubitRegisterState<T>> {
    if num_qubits == 0 {
        return Err(Error::invalid("num_qubits", "must be at least 1"));
    }
    QubitRegisterState::new(num_qubits, product_state(num_qubits, attractor_qubit(theta, branch)))
}

/// GHZ-type state `(|u…u⟩ + e^{iφ}|v…v⟩)/√2` on a local basis `{u, v}`.
pub fn ghz_state<T: Real>(
    num_qubits: usize,
    u: [Complex<T>; 2],
    v: [Complex<T>; 2],
    phase: T,
) -> Result<QubitRegisterState<T>> {
    let a = product_state(num_qubits, u);
    let b = product_state(num_qubits, v);
    let w = cis(phase);
    QubitRegisterState::normalized(num_qubits, a.iter().zip(&b).map(|(x, y)| *x + w * y).collect())
}

/// Parameters of the basin-of-attraction family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasinParams<T> {
    pub num_qubits: usize,
    pub a: Complex<T>,
    pub theta: T,
}

impl<T: Real> BasinParams<T> {
    pub fn new(num_qubits: usize, a: Complex<T>, theta: T) -> Result<Self> {
        let p = Self { num_qubits, a, theta };
        p.validate()?;
        Ok(p)
    }

    /// Upper bound `1/√(2^{N−1})` on `|a|`.
    pub fn max_modulus(num_qubits: usize) -> T {
        T::from_count(1usize << (num_qubits.max(1) - 1)).sqrt().recip()
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_qubits == 0 {
            return Err(Error::invalid("num_qubits", "must be at least 1"));
        }
        if modulus(self.a) > Self::max_modulus(self.num_qubits) + T::lit(1e-12) {
            return Err(Error::invalid(
                "a",
                format!(
                    "|a| = {} exceeds 1/sqrt(2^(N-1)) = {}",
                    modulus(self.a).as_f64(),
                    Self::max_modulus(self.num_qubits).as_f64()
                ),
            ));
        }
        Ok(())
    }

    /// Amplitude weight `√(1/2^{N−1} − |a|²)` of the odd Dicke components.
    pub fn odd_weight(&self) -> T {
        let m = Self::max_modulus(self.num_qubits);
        (m * m - self.a.norm_sqr()).max(T::zero()).sqrt()
    }
}

/// Basin-of-attraction state.
///
/// Dicke component `k` (qubits in `|g⟩`) carries
/// `A(k) e^{−i(N/2−k)θ} √C(N,k)` with `A = a` for even `k` and
/// `A = √(1/2^{N−1} − |a|²)` for odd `k`; per configuration this is simply
/// `A(k) e^{−i(N/2−k)θ}`.
pub fn basin_state<T: Real>(p: &BasinParams<T>) -> Result<QubitRegisterState<T>> {
    p.validate()?;
    let n = p.num_qubits;
    let odd = Complex::new(p.odd_weight(), T::zero());
    let amplitudes = (0..1usize << n)
        .map(|q| {
            let ground = n - q.count_ones() as usize;
            let weight = if ground.is_multiple_of(2) { p.a } else { odd };
            let m = T::from_count(n) * T::lit(0.5) - T::from_count(ground);
            weight * cis(-m * p.theta)
        })
        .collect();
    QubitRegisterState::new(n, amplitudes)
}

/// `C_ee|ee⟩ + C_eg|eg⟩ + C_ge|ge⟩ + C_gg|gg⟩` (first letter is qubit 1).
pub fn general_two_qubit<T: Real>(
    c_ee: Complex<T>,
    c_eg: Complex<T>,
    c_ge: Complex<T>,
    c_gg: Complex<T>,
) -> Result<QubitRegisterState<T>> {
    // bit 0 ↔ qubit 1, bit 1 ↔ qubit 2
    QubitRegisterState::new(2, vec![c_gg, c_eg, c_ge, c_ee])
}

/// Analytic two-qubit field state at `t_r/4`:
///
/// ```text
/// e^{iθ} [ e^{iπn̄/2} (a − √(½−|a|²)) |α⟩ + e^{−iπn̄/2} (a + √(½−|a|²)) |−α⟩ ]
/// ```
///
/// normalized numerically after truncation.
pub fn field_cat_reference<T: Real>(p: &BasinParams<T>, nbar: T, fock_dim: usize) -> Result<Vec<Complex<T>>> {
    p.validate()?;
    if p.num_qubits != 2 {
        return Err(Error::invalid(
            "num_qubits",
            "the cat reference is defined for two qubits",
        ));
    }
    let coherent = CoherentParams::new(nbar, p.theta, fock_dim)?;
    let (c_plus, c_minus) = cat_coefficients(p, nbar);
    let plus = coherent_amplitudes(coherent.alpha(), fock_dim);
    let minus = coherent_amplitudes(-coherent.alpha(), fock_dim);
    let v = plus
        .iter()
        .zip(&minus)
        .map(|(x, y)| c_plus * x + c_minus * y)
        .collect::<Vec<_>>();
    if !(norm_sqr(&v) > T::zero()) {
        return Err(Error::invalid("a", "cat reference vanishes"));
    }
    Ok(normalize(v))
}

/// Coefficients of `|α⟩` and `|−α⟩` in [`field_cat_reference`], before normalization.
pub fn cat_coefficients<T: Real>(p: &BasinParams<T>, nbar: T) -> (Complex<T>, Complex<T>) {
    let s = Complex::new(p.odd_weight(), T::zero());
    let half_turn = T::pi() * nbar * T::lit(0.5);
    let global = cis(p.theta);
    (
        global * cis(half_turn) * (p.a - s),
        global * cis(-half_turn) * (p.a + s),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::inner;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn close(a: &[Complex<f64>], b: &[Complex<f64>], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() < tol)
    }

    #[test]
    fn default_truncation_at_nbar_50() {
        assert_eq!(default_fock_dim(50.0), 136);
        assert_eq!(default_fock_dim(0.0), 2);
    }

    #[test]
    fn poisson_tail_matches_complement() {
        // oracle: 1 − Σ_{n<k} p_n for a moderate tail
        let nbar = 3.0_f64;
        let mut head = 0.0;
        let mut p = (-nbar).exp();
        for n in 0..5 {
            head += p;
            p *= nbar / (n + 1) as f64;
        }
        assert!((poisson_tail(nbar, 5) - (1.0 - head)).abs() < 1e-14);
        assert!(poisson_tail(50.0_f64, 136) < 1e-10);
    }

    #[test]
    fn vacuum_coherent_state() {
        let v = coherent_field(&CoherentParams::new(0.0, 0.3, 4).unwrap()).unwrap();
        assert!(close(&v, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], 1e-15));
    }

    #[test]
    fn coherent_nbar_50_real_positive_with_poisson_mean() {
        let v = coherent_field(&CoherentParams::new(50.0, 0.0, 136).unwrap()).unwrap();
        assert!(v.iter().all(|z| z.re > 0.0 && z.im == 0.0));
        let mean: f64 = v.iter().enumerate().map(|(n, z)| n as f64 * z.norm_sqr()).sum();
        assert!((mean - 50.0).abs() < 0.05);
        assert!((mean - 50.0).abs() / 50.0 < 1e-6);
    }

    #[test]
    fn coherent_theta_pi_is_minus_alpha() {
        let a = coherent_field(&CoherentParams::new(4.0, std::f64::consts::PI, 40).unwrap()).unwrap();
        let b = coherent_amplitudes(c(-2.0, 0.0), 40);
        let b = normalize(b);
        assert!(close(&a, &b, 1e-12));
    }

    #[test]
    fn coherent_rejects_short_truncation() {
        assert!(matches!(
            CoherentParams::new(50.0, 0.0, 60),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn dicke_examples() {
        let s = FRAC_1_SQRT_2;
        let d21 = dicke_state::<f64>(2, 1).unwrap();
        assert!(close(
            d21.amplitudes(),
            &[c(0.0, 0.0), c(s, 0.0), c(s, 0.0), c(0.0, 0.0)],
            1e-15
        ));
        let d20 = dicke_state::<f64>(2, 0).unwrap();
        assert!(close(
            d20.amplitudes(),
            &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            1e-15
        ));
        let d32 = dicke_state::<f64>(3, 2).unwrap();
        let t = 1.0 / 3f64.sqrt();
        for q in 0..8usize {
            let expected = if q.count_ones() == 1 { t } else { 0.0 };
            assert!((d32.amplitude(q) - c(expected, 0.0)).norm() < 1e-15);
        }
        assert!(dicke_state::<f64>(2, 3).is_err());
    }

    #[test]
    fn attractor_examples() {
        let s = FRAC_1_SQRT_2;
        let a1 = attractor_state::<f64>(1, 0.0, Branch::Plus).unwrap();
        assert!(close(a1.amplitudes(), &[c(0.0, s), c(s, 0.0)], 1e-15));
        // (1/2)(|ee⟩ + i|eg⟩ + i|ge⟩ − |gg⟩) in [gg, eg, ge, ee] order
        let a2 = attractor_state::<f64>(2, 0.0, Branch::Plus).unwrap();
        assert!(close(
            a2.amplitudes(),
            &[c(-0.5, 0.0), c(0.0, 0.5), c(0.0, 0.5), c(0.5, 0.0)],
            1e-15
        ));
        let minus = attractor_state::<f64>(1, 0.4, Branch::Minus).unwrap();
        let plus = attractor_state::<f64>(1, 0.4, Branch::Plus).unwrap();
        assert!(plus.inner(&minus).norm() < 1e-15);
    }

    #[test]
    fn basin_examples() {
        let s = FRAC_1_SQRT_2;
        let bell = basin_state(&BasinParams::new(2, c(s, 0.0), 0.0).unwrap()).unwrap();
        assert!(close(
            bell.amplitudes(),
            &[c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)],
            1e-15
        ));
        let sym = basin_state(&BasinParams::new(2, c(0.0, 0.0), 0.0).unwrap()).unwrap();
        assert!(close(
            sym.amplitudes(),
            dicke_state::<f64>(2, 1).unwrap().amplitudes(),
            1e-15
        ));
        assert!(BasinParams::new(2, c(0.8, 0.0), 0.0).is_err());
        assert!(BasinParams::new(3, c(0.6, 0.0), 0.0).is_err());
    }

    #[test]
    fn basin_two_qubit_matches_written_form() {
        let (a, theta) = (c(0.3, -0.2), 0.9);
        let st = basin_state(&BasinParams::new(2, a, theta).unwrap()).unwrap();
        let b = c((0.5 - a.norm_sqr()).sqrt(), 0.0);
        let c_ee = a * cis(-theta);
        let c_gg = a * cis(theta);
        let expected = general_two_qubit(c_ee, b, b, c_gg).unwrap();
        assert!(close(st.amplitudes(), expected.amplitudes(), 1e-14));
        // sector restriction e^{iθ}C_ee = e^{−iθ}C_gg = a, C_eg = C_ge
        assert!((st.amplitude(3) * cis(theta) - a).norm() < 1e-14);
        assert!((st.amplitude(0) * cis(-theta) - a).norm() < 1e-14);
        assert!((st.amplitude(1) - st.amplitude(2)).norm() < 1e-15);
    }

    #[test]
    fn general_two_qubit_examples() {
        let s = FRAC_1_SQRT_2;
        let ee = general_two_qubit(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(ee.amplitude(3), c(1.0, 0.0));
        let d = general_two_qubit(c(0.0, 0.0), c(s, 0.0), c(s, 0.0), c(0.0, 0.0)).unwrap();
        assert!(close(
            d.amplitudes(),
            dicke_state::<f64>(2, 1).unwrap().amplitudes(),
            1e-15
        ));
        let bell = general_two_qubit(c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)).unwrap();
        let basin = basin_state(&BasinParams::new(2, c(s, 0.0), 0.0).unwrap()).unwrap();
        assert!(close(bell.amplitudes(), basin.amplitudes(), 1e-15));
        assert!(general_two_qubit(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn cat_reference_single_lobe_at_a_half() {
        let p = BasinParams::new(2, c(0.5, 0.0), 0.0).unwrap();
        let cat = field_cat_reference(&p, 50.0, 136).unwrap();
        let minus = normalize(coherent_amplitudes(c(-50f64.sqrt(), 0.0), 136));
        assert!((inner(&minus, &cat).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cat_reference_even_cat_at_a_max() {
        let p = BasinParams::new(2, c(FRAC_1_SQRT_2, 0.0), 0.0).unwrap();
        let cat = field_cat_reference(&p, 50.0, 136).unwrap();
        let alpha = 50f64.sqrt();
        let even = normalize(
            coherent_amplitudes(c(alpha, 0.0), 136)
                .iter()
                .zip(coherent_amplitudes(c(-alpha, 0.0), 136))
                .map(|(x, y)| x + y)
                .collect(),
        );
        assert!((inner(&even, &cat).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cat_reference_balanced_for_imaginary_a() {
        // a = i/2: |a − 1/2| = |a + 1/2| = √(1/4 + 1/4)
        let p = BasinParams::new(2, c(0.0, 0.5), 0.0).unwrap();
        let (x, y) = cat_coefficients(&p, 50.0);
        assert!((x.norm() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((y.norm() - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn ghz_state_is_normalized_superposition() {
        let g = ghz_state::<f64>(3, [c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)], 0.0).unwrap();
        assert!((g.amplitude(7) - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((g.amplitude(0) - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
    }
}
