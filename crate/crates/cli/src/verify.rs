//! Oracle equivalence harness behind `tavis-sim verify`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tavis_core::model::DensePropagator;
use tavis_core::states::{coherent_field, CoherentParams};
use tavis_core::{
    basin_state, build_blocks, compose_state, mixed_tangle, pure_tangle, BasinParams, DensityMatrix, ModelParams,
    PureState, QubitRegisterState, Subsystem, C64,
};

use crate::Result;

pub const DEFAULT_MAX_DIM: usize = 4096;
pub const DEFAULT_SEED: u64 = 20_071_127;

/// `(num_qubits, fock_dim)` pairs compared against the dense oracle.
pub const ORACLE_CASES: [(usize, usize); 3] = [(1, 32), (2, 24), (3, 16)];

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    /// Largest joint dimension handed to the dense oracle.
    pub max_dim: usize,
    pub seed: u64,
    /// Evolve the block route under the sign-flipped interaction (`H → −H`),
    /// to show the harness catches it.
    pub inject_fault: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            max_dim: DEFAULT_MAX_DIM,
            seed: DEFAULT_SEED,
            inject_fault: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Pass,
    Fail,
    /// Not run because the dense oracle would exceed `max_dim`.
    Skip,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub outcome: Outcome,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: String) -> Self {
        Self {
            name: name.into(),
            outcome: if pass { Outcome::Pass } else { Outcome::Fail },
            detail,
        }
    }

    pub fn line(&self) -> String {
        let tag = match self.outcome {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Skip => "SKIP",
        };
        format!("{tag} {}: {}", self.name, self.detail)
    }
}

fn random_vector(rng: &mut ChaCha8Rng, len: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..len)
        .map(|_| Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Largest amplitude deviation between block and dense evolution.
fn oracle_deviation(params: &ModelParams<f64>, states: &[PureState<f64>], times: &[f64], fault: bool) -> Result<f64> {
    let blocks = build_blocks(params)?;
    let dense = DensePropagator::new(params, usize::MAX)?;
    let sign = if fault { -1.0 } else { 1.0 };
    let mut worst = 0.0_f64;
    for psi in states {
        for &t in times {
            let a = blocks.evolve(psi, sign * t)?;
            let b = dense.evolve(psi, t)?;
            worst = worst.max(a.max_abs_diff(&b));
        }
    }
    Ok(worst)
}

fn oracle_checks(opts: &VerifyOptions, rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let tr = 2.0 * PI * 50f64.sqrt();
    let mut checks = Vec::new();
    for (n, d) in ORACLE_CASES {
        let params = ModelParams::<f64>::new(n, d);
        let name = format!("block-vs-dense N={n} fock_dim={d}");
        if params.joint_dim() > opts.max_dim {
            checks.push(Check {
                name,
                outcome: Outcome::Skip,
                detail: format!(
                    "joint dimension {} exceeds --max-dim {}",
                    params.joint_dim(),
                    opts.max_dim
                ),
            });
            continue;
        }
        let states = (0..20)
            .map(|_| PureState::new(n, d, random_vector(rng, params.joint_dim())))
            .collect::<tavis_core::Result<Vec<_>>>()?;
        let times: Vec<f64> = (0..20).map(|_| tr * rng.random::<f64>()).collect();
        let worst = oracle_deviation(&params, &states, &times, opts.inject_fault)?;
        checks.push(Check::new(
            name,
            worst <= 1e-8,
            format!("max amplitude deviation {worst:.3e} over 20 states x 20 times (<= 1e-8)"),
        ));
    }

    // physical start: (|ee> + |gg>)/√2 with a coherent field of n̄ = 4
    let (n, d, nbar) = (2, 24, 4.0);
    let params = ModelParams::<f64>::new(n, d);
    let name = format!("block-vs-dense coherent start N={n} fock_dim={d} nbar={nbar}");
    if params.joint_dim() > opts.max_dim {
        checks.push(Check {
            name,
            outcome: Outcome::Skip,
            detail: format!(
                "joint dimension {} exceeds --max-dim {}",
                params.joint_dim(),
                opts.max_dim
            ),
        });
    } else {
        let qubits = basin_state(&BasinParams::new(n, Complex::new(FRAC_1_SQRT_2, 0.0), 0.0)?)?;
        let field = coherent_field(&CoherentParams::new(nbar, 0.0, d)?)?;
        let psi = compose_state(&qubits, &field, d)?;
        let tr4 = 2.0 * PI * nbar.sqrt();
        let times: Vec<f64> = (0..=40).map(|k| 1.5 * tr4 * k as f64 / 40.0).collect();
        let worst = oracle_deviation(&params, &[psi], &times, opts.inject_fault)?;
        checks.push(Check::new(
            name,
            worst <= 1e-8,
            format!("max amplitude deviation {worst:.3e} over [0, 1.5 t_r] (<= 1e-8)"),
        ));
    }
    Ok(checks)
}

fn basin_check(rng: &mut ChaCha8Rng) -> Result<Check> {
    let mut worst = 0.0_f64;
    for n in 1..=6 {
        for _ in 0..100 {
            let r = BasinParams::<f64>::max_modulus(n) * rng.random::<f64>().sqrt();
            let a = Complex::from_polar(r, 2.0 * PI * rng.random::<f64>());
            let theta = 2.0 * PI * rng.random::<f64>();
            let state = basin_state(&BasinParams::new(n, a, theta)?)?;
            let norm: f64 = state.amplitudes().iter().map(|z| z.norm_sqr()).sum();
            worst = worst.max((norm - 1.0).abs());
        }
    }
    Ok(Check::new(
        "basin normalization",
        worst <= 1e-12,
        format!("max |norm - 1| = {worst:.3e} over 100 random members for N = 1..6 (<= 1e-12)"),
    ))
}

fn tangle_checks(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let psi = QubitRegisterState::new(2, random_vector(rng, 4))?;
        worst = worst.max((mixed_tangle(&psi.projector())? - pure_tangle(&psi)?).abs());
    }
    let pure = Check::new(
        "mixed tangle of pure states",
        worst <= 1e-8,
        format!("max |mixed - pure| = {worst:.3e} over 100 random states (<= 1e-8)"),
    );

    let bell = [FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2];
    let mut worst = 0.0_f64;
    for p in [0.0, 0.2, 1.0 / 3.0, 0.6, 0.9, 1.0] {
        let m = nalgebra::DMatrix::from_fn(4, 4, |i, j| {
            Complex::new(p * bell[i] * bell[j] + if i == j { (1.0 - p) / 4.0 } else { 0.0 }, 0.0)
        });
        let rho = DensityMatrix::new(m, Subsystem::Qubits)?;
        worst = worst.max((mixed_tangle(&rho)? - ((3.0 * p - 1.0) / 2.0).max(0.0).powi(2)).abs());
    }
    let werner = Check::new(
        "Werner tangle",
        worst <= 1e-10,
        format!("max deviation from max(0,(3p-1)/2)^2 = {worst:.3e} (<= 1e-10)"),
    );

    let mut worst = 0.0_f64;
    for k in 0..=100 {
        let a = FRAC_1_SQRT_2 * (2.0 * k as f64 - 100.0) / 100.0;
        let state = basin_state(&BasinParams::new(2, Complex::new(a, 0.0), 0.0)?)?;
        worst = worst.max((pure_tangle(&state)? - (4.0 * a * a - 1.0).powi(2)).abs());
    }
    let basin = Check::new(
        "basin tangle closed form",
        worst <= 1e-12,
        format!("max |tau - (4a^2-1)^2| = {worst:.3e} over 101 real a (<= 1e-12)"),
    );
    Ok(vec![pure, werner, basin])
}

/// Runs every check; the caller decides the exit status.
pub fn run_checks(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut checks = oracle_checks(opts, &mut rng)?;
    checks.push(basin_check(&mut rng)?);
    checks.extend(tangle_checks(&mut rng)?);
    Ok(checks)
}
