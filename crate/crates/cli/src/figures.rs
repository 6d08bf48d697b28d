//! Presets reproducing the standard figure setups.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex;
use tavis_core::observables::{GridAxis, GridSpec};
use tavis_core::{
    basin_state, pure_tangle, q_function, reduce_to_field, simulate, BasinParams, Branch, ComplexValue, Observable,
    QubitSpec, Scenario, ScenarioConfig,
};

use crate::output::{qgrid_csv, render_csv, time_series_csv, write_file};
use crate::{CliError, Result};

pub const DEFAULT_NBAR: f64 = 50.0;
pub const FIG3_POINTS: usize = 401;
/// Default snapshot times for `qfunc`, in units of `t_r`.
pub const QFUNC_TIMES: [f64; 6] = [0.0, 0.05, 0.25, 0.45, 0.75, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureName {
    /// One qubit from `|g⟩`.
    Fig1,
    /// Two qubits from `(|ee⟩ + |gg⟩)/√2`: entropy and attractor fidelity.
    Fig2,
    /// Two-qubit basin tangle against real `a`.
    Fig3,
    /// Same start as `Fig2`: entropy and mixed tangle.
    Fig4,
    /// Field Q function snapshots for the `Fig2` start.
    Qfunc,
}

impl FigureName {
    pub const ALL: [FigureName; 5] = [
        FigureName::Fig1,
        FigureName::Fig2,
        FigureName::Fig3,
        FigureName::Fig4,
        FigureName::Qfunc,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FigureName::Fig1 => "fig1",
            FigureName::Fig2 => "fig2",
            FigureName::Fig3 => "fig3",
            FigureName::Fig4 => "fig4",
            FigureName::Qfunc => "qfunc",
        }
    }
}

impl fmt::Display for FigureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureName {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|n| n.as_str() == s).ok_or_else(|| {
            let names: Vec<_> = Self::ALL.iter().map(|n| n.as_str()).collect();
            CliError::Usage(format!("unknown figure `{s}` (expected one of {})", names.join(", ")))
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FigureOptions {
    pub nbar: Option<f64>,
    pub theta: Option<f64>,
    /// Time samples (`fig1`, `fig2`, `fig4`), sweep points (`fig3`) or grid
    /// points per axis (`qfunc`).
    pub samples: Option<usize>,
    /// Snapshot times for `qfunc`, in units of `t_r`.
    pub times: Option<Vec<f64>>,
    pub pi_normalized: bool,
}

fn bell_like() -> QubitSpec {
    QubitSpec::Basin {
        a: ComplexValue::Real(FRAC_1_SQRT_2),
        theta: None,
    }
}

/// Scenario behind a time-series figure; `None` for `fig3`.
pub fn figure_config(name: FigureName, opts: &FigureOptions) -> Option<ScenarioConfig> {
    let nbar = opts.nbar.unwrap_or(DEFAULT_NBAR);
    let (num_qubits, initial, observables) = match name {
        FigureName::Fig1 => (
            1,
            QubitSpec::Configuration { label: "g".into() },
            vec![
                Observable::PInitial,
                Observable::PAttractor(Branch::Plus),
                Observable::Entropy,
            ],
        ),
        FigureName::Fig2 | FigureName::Qfunc => (
            2,
            bell_like(),
            vec![
                Observable::Entropy,
                Observable::Configuration("gg".into()),
                Observable::PAttractor(Branch::Plus),
            ],
        ),
        FigureName::Fig4 => (
            2,
            bell_like(),
            vec![
                Observable::Entropy,
                Observable::Configuration("gg".into()),
                Observable::MixedTangle,
            ],
        ),
        FigureName::Fig3 => return None,
    };
    let mut cfg = ScenarioConfig::new(num_qubits, nbar, initial)
        .with_theta(opts.theta.unwrap_or(0.0))
        .with_observables(observables);
    if let (Some(samples), false) = (opts.samples, name == FigureName::Qfunc) {
        cfg.grid.samples = samples;
    }
    Some(cfg)
}

/// `(a, τ(a))` over real `a ∈ [−1/√2, 1/√2]`.
pub fn basin_tangle_curve(points: usize) -> Result<Vec<[f64; 2]>> {
    if points < 2 {
        return Err(CliError::Usage("fig3 needs at least 2 samples".into()));
    }
    (0..points)
        .map(|i| {
            let a = FRAC_1_SQRT_2 * (2.0 * i as f64 - (points - 1) as f64) / (points - 1) as f64;
            let state = basin_state(&BasinParams::new(2, Complex::new(a, 0.0), 0.0)?)?;
            Ok([a, pure_tangle(&state)?])
        })
        .collect()
}

fn qfunc_file_name(fraction: f64) -> String {
    format!("qfunc_t{fraction:.4}.csv")
}

/// Writes the figure's data files into `out`, returning their paths.
pub fn write_figure(name: FigureName, opts: &FigureOptions, out: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out).map_err(|e| CliError::io(format!("cannot create {}", out.display()), e))?;
    match name {
        FigureName::Fig1 | FigureName::Fig2 | FigureName::Fig4 => {
            let cfg = figure_config(name, opts).expect("time-series figure");
            let ts = simulate::<f64>(&cfg)?;
            let path = out.join(format!("{name}.csv"));
            write_file(&path, &time_series_csv(&ts))?;
            Ok(vec![path])
        }
        FigureName::Fig3 => {
            let curve = basin_tangle_curve(opts.samples.unwrap_or(FIG3_POINTS))?;
            let path = out.join("fig3.csv");
            write_file(
                &path,
                &render_csv(&["a", "pure_tangle"], curve.iter().map(|p| p.to_vec())),
            )?;
            Ok(vec![path])
        }
        FigureName::Qfunc => {
            let cfg = figure_config(name, opts).expect("qfunc scenario");
            let scenario = Scenario::<f64>::prepare(&cfg)?;
            let tr = scenario.timescales().revival;
            let mut grid = GridSpec::default_for(cfg.coherent.nbar);
            if let Some(points) = opts.samples {
                grid.re = GridAxis::new(grid.re.min, grid.re.max, points);
                grid.im = grid.re;
            }
            grid.pi_normalized = opts.pi_normalized;
            let times = opts.times.clone().unwrap_or_else(|| QFUNC_TIMES.to_vec());
            let propagator = scenario.propagator();
            times
                .iter()
                .map(|&fraction| {
                    if !(fraction >= 0.0) || !fraction.is_finite() {
                        return Err(CliError::Usage(format!(
                            "qfunc time {fraction} must be finite and >= 0"
                        )));
                    }
                    let rho = reduce_to_field(&propagator.at(fraction * tr));
                    let path = out.join(qfunc_file_name(fraction));
                    write_file(&path, &qgrid_csv(&q_function(&rho, &grid)?))?;
                    Ok(path)
                })
                .collect()
        }
    }
}
