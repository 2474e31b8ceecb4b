use std::fmt;

use rayon::prelude::*;

use super::config::SweepConfig;
use crate::error::Result;
use crate::fz1::{solve_band_fz1, FloquetSolution, Fz1Config};
use crate::fz2::{solve_band_fz2, Fz2Config};
use crate::model::FourierHamiltonian;
use crate::oracle::{exact_quasienergies, fold_to_bz, truncated_exact_spectrum, DEFAULT_FINE_STEPS};
use crate::variational::{GradientScheme, OptimizerConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SolverKind {
    Fz1,
    Fz2,
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Fz1 => "fz1",
            Self::Fz2 => "fz2",
        })
    }
}

/// One solver branch at one amplitude, with oracle references.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub algorithm: SolverKind,
    pub amplitude: f64,
    /// Rank of the solution by energy within its point.
    pub branch: usize,
    pub epsilon: f64,
    pub epsilon_sigma: f64,
    pub epsilon_raw: Option<f64>,
    /// Exact quasi-energy of the matched oracle branch.
    pub epsilon_exact: f64,
    /// Unfolded truncated-space eigenvalue of the matched branch.
    pub epsilon_truncated: Option<f64>,
    pub fidelity: f64,
    pub loss_star: f64,
    pub seed: u64,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutcome {
    pub records: Vec<SweepRecord>,
}

impl SweepOutcome {
    pub fn unconverged(&self) -> usize {
        self.records.iter().filter(|r| !r.converged).count()
    }
}

/// Inclusive linspace; a single step yields `[a_min]`.
pub fn amplitudes(config: &SweepConfig) -> Vec<f64> {
    let n = config.a_steps;
    if n <= 1 {
        return vec![config.a_min];
    }
    let width = config.a_max - config.a_min;
    (0..n)
        .map(|i| {
            if i == n - 1 {
                config.a_max
            } else {
                config.a_min + width * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

fn optimizer(config: &SweepConfig, seed: u64) -> OptimizerConfig {
    OptimizerConfig {
        restarts: config.restarts,
        seed,
        ..Default::default()
    }
}

/// Circular distance on the quasi-energy zone.
fn zone_distance(a: f64, b: f64, omega: f64) -> f64 {
    let d = (a - b).rem_euclid(omega);
    d.min(omega - d)
}

fn run_point(config: &SweepConfig, index: usize, amplitude: f64) -> Result<Vec<SweepRecord>> {
    let seed = config.seed ^ index as u64;
    let h = FourierHamiltonian::driven_spin_half(config.delta, amplitude, config.omega)?;
    let exact = exact_quasienergies(&h, DEFAULT_FINE_STEPS)?;
    let mut records = Vec::new();

    let mut push = |kind: SolverKind, mut sols: Vec<FloquetSolution>, refs: &dyn Fn(&FloquetSolution) -> (f64, Option<f64>)| {
        sols.sort_by(|a, b| {
            a.epsilon_raw
                .unwrap_or(a.epsilon)
                .total_cmp(&b.epsilon_raw.unwrap_or(b.epsilon))
        });
        for (rank, s) in sols.iter().enumerate() {
            let (epsilon_exact, epsilon_truncated) = refs(s);
            records.push(SweepRecord {
                algorithm: kind,
                amplitude,
                branch: rank,
                epsilon: s.epsilon,
                epsilon_sigma: s.epsilon_sigma,
                epsilon_raw: s.epsilon_raw,
                epsilon_exact,
                epsilon_truncated,
                fidelity: s.fidelity_vs_oracle,
                loss_star: s.loss_star,
                seed,
                converged: s.converged,
            });
        }
    };

    if config.algorithm.runs_fz1() {
        let fz1 = Fz1Config {
            lambda: config.lambda,
            shots: config.shots,
            trotter_steps: config.trotter_steps,
            iqpe_bits: config.iqpe_bits,
            iqpe_shots: config.iqpe_shots,
            iqpe_repeats: config.iqpe_repeats,
            optimizer: OptimizerConfig {
                scheme: GradientScheme::ParameterShift,
                ..optimizer(config, seed)
            },
            ..Default::default()
        };
        let sols = solve_band_fz1(&h, &fz1)?;
        push(SolverKind::Fz1, sols, &|s| (exact.energies[s.branch], None));
    }
    if config.algorithm.runs_fz2() {
        let fz2 = Fz2Config {
            lambda: config.lambda,
            shots: config.shots,
            entangler: config.entangler,
            optimizer: optimizer(config, seed),
            ..Default::default()
        };
        let sols = solve_band_fz2(&h, config.j_max, &fz2)?;
        let truncated = truncated_exact_spectrum(&h, config.j_max);
        let omega = config.omega;
        push(SolverKind::Fz2, sols, &|s| {
            let raw = truncated[s.branch].0;
            let folded = fold_to_bz(raw, omega).unwrap_or(raw);
            let nearest = exact
                .energies
                .iter()
                .copied()
                .min_by(|a, b| {
                    zone_distance(*a, folded, omega).total_cmp(&zone_distance(*b, folded, omega))
                })
                .unwrap_or(f64::NAN);
            (nearest, Some(raw))
        });
    }
    Ok(records)
}

/// Runs every amplitude point (in parallel) and returns records sorted by
/// algorithm, amplitude, then branch. Point `i` uses seed `seed ^ i`.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutcome> {
    let grid = amplitudes(config);
    let per_point: Vec<Vec<SweepRecord>> = grid
        .par_iter()
        .enumerate()
        .map(|(i, &a)| run_point(config, i, a))
        .collect::<Result<_>>()?;
    let mut records: Vec<SweepRecord> = per_point.into_iter().flatten().collect();
    records.sort_by(|a, b| {
        a.algorithm
            .cmp(&b.algorithm)
            .then(a.amplitude.total_cmp(&b.amplitude))
            .then(a.branch.cmp(&b.branch))
    });
    Ok(SweepOutcome { records })
}
