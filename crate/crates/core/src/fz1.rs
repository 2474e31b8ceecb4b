//! Time-domain solver: maximize the one-period return probability
//! `|⟨0|U(Θ)† U_T U(Θ)|0⟩|²`, deflate found states, then read each
//! quasi-energy with iterative phase estimation on `U_T`.

use std::f64::consts::PI;

use log::warn;
use rand::Rng;

use crate::error::{Error, Result};
use crate::evolution::{controlled_power, trotter_monodromy, MonodromyOperator};
use crate::model::FourierHamiltonian;
use crate::oracle::{exact_quasienergies, fold_to_bz, mode_fidelity, DEFAULT_FINE_STEPS};
use crate::qsim::{
    hadamard, new_zero_state, phase_gate, sample_probability, sample_projector, RegisterShape,
    StateVector,
};
use crate::rng::{substream, SimRng};
use crate::variational::{
    deflation_penalty, maximize, DeflationSet, GradientScheme, LineSearch, Maximum, Objective,
    OptimizerConfig, ParameterizedCircuit, ShiftRule,
};

pub use crate::qsim::u3_matrix;

/// Converged Floquet state and its quasi-energy.
#[derive(Clone, Debug)]
pub struct FloquetSolution {
    pub theta_star: Vec<f64>,
    /// Quasi-energy folded to `[−Ω/2, Ω/2)`.
    pub epsilon: f64,
    /// Statistical uncertainty of `epsilon` (energy units).
    pub epsilon_sigma: f64,
    /// Unfolded extended-space energy `ε ± jΩ` (Fourier-space solver only).
    pub epsilon_raw: Option<f64>,
    /// Inferred harmonic offset `j` with `epsilon_raw ≈ epsilon + jΩ`.
    pub harmonic: Option<i32>,
    pub loss_star: f64,
    /// Index of the best-matching oracle eigenvector.
    pub branch: usize,
    pub fidelity_vs_oracle: f64,
    /// `⟨H²⟩ − ⟨H⟩²` of the optimized state (Fourier-space solver only).
    pub residual_variance: Option<f64>,
    pub converged: bool,
    pub state: StateVector,
    pub optimizer: Maximum,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fz1Config {
    pub lambda: f64,
    /// Shots per loss evaluation; 0 evaluates exactly.
    pub shots: u64,
    pub trotter_steps: usize,
    pub iqpe_bits: u32,
    pub iqpe_shots: u64,
    pub iqpe_repeats: usize,
    pub oracle_steps: usize,
    /// Solutions whose final loss falls below this are flagged.
    pub unconverged_threshold: f64,
    pub optimizer: OptimizerConfig,
}

impl Default for Fz1Config {
    fn default() -> Self {
        Self {
            lambda: 5.0,
            shots: 10_000,
            trotter_steps: 100,
            iqpe_bits: 5,
            iqpe_shots: 100,
            iqpe_repeats: 20,
            oracle_steps: DEFAULT_FINE_STEPS,
            unconverged_threshold: 0.9,
            optimizer: OptimizerConfig {
                scheme: GradientScheme::ParameterShift,
                ..Default::default()
            },
        }
    }
}

/// Single U3 gate on one qubit.
pub fn u3_ansatz() -> ParameterizedCircuit {
    ParameterizedCircuit::new(RegisterShape::new(vec![2]).expect("valid shape"))
        .u3(0)
        .expect("qubit target")
}

fn return_probability<R: Rng + ?Sized>(
    circuit: &ParameterizedCircuit,
    theta_left: &[f64],
    theta_right: &[f64],
    monodromy: &MonodromyOperator,
    shots: u64,
    rng: &mut R,
) -> Result<f64> {
    let mut state = circuit.prepare(theta_right)?;
    state.apply_full(monodromy.operator())?;
    circuit.apply_adjoint(&mut state, theta_left)?;
    if shots == 0 {
        state.projector_probability(0)
    } else {
        Ok(sample_projector(&state, 0, shots, rng)?.value)
    }
}

/// Return probability of `U(Θ)|0⟩` after one period, minus the deflation
/// penalty. Sampled when `shots > 0`.
pub fn loss_fz1<R: Rng + ?Sized>(
    circuit: &ParameterizedCircuit,
    theta: &[f64],
    monodromy: &MonodromyOperator,
    deflation: &DeflationSet,
    shots: u64,
    rng: &mut R,
) -> Result<f64> {
    if circuit.shape().total_dim() != monodromy.dim() {
        return Err(Error::DimensionMismatch {
            expected: circuit.shape().total_dim(),
            actual: monodromy.dim(),
        });
    }
    let overlap = return_probability(circuit, theta, theta, monodromy, shots, rng)?;
    Ok(overlap - deflation_penalty(circuit, theta, deflation, shots, rng)?)
}

/// [`loss_fz1`] as an optimizer objective. `U(Θ)†` and `U(Θ)` are separate
/// parameter occurrences for the shift rule.
pub struct ReturnOverlapObjective<'a> {
    pub circuit: &'a ParameterizedCircuit,
    pub monodromy: &'a MonodromyOperator,
    pub deflation: &'a DeflationSet,
    pub shots: u64,
    pub rng: SimRng,
}

impl Objective for ReturnOverlapObjective<'_> {
    fn n_params(&self) -> usize {
        self.circuit.n_params()
    }

    fn occurrences(&self) -> usize {
        2
    }

    fn evaluate_split(&mut self, thetas: &[&[f64]]) -> f64 {
        let (left, right) = (thetas[0], thetas[1]);
        let overlap = return_probability(self.circuit, left, right, self.monodromy, self.shots, &mut self.rng)
            .expect("shapes checked at construction");
        let penalty = deflation_penalty(self.circuit, right, self.deflation, self.shots, &mut self.rng)
            .expect("shapes checked at construction");
        overlap - penalty
    }

    fn shift_rule(&self, param: usize) -> Option<ShiftRule> {
        self.circuit.shift_rule(param)
    }
}

/// Per-bit outcome of one phase-estimation run; index `k − 1` holds bit `k`
/// of `φ = 0.b₁b₂…bₙ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IqpeRecord {
    pub bits: Vec<u8>,
    pub ones: Vec<u64>,
    /// Majority ties, resolved to 0.
    pub ties: Vec<bool>,
}

/// Probability that the ancilla reads 1 in the round for bit `k` with
/// feedback angle `feedback`.
fn ancilla_one_probability(
    prep: &StateVector,
    unitary: &MonodromyOperator,
    k: u32,
    feedback: f64,
) -> Result<f64> {
    let dim = prep.dim();
    let shape = RegisterShape::new(vec![2, dim])?;
    let mut amps = new_zero_state(&shape).into_amplitudes();
    amps.rows_mut(0, dim).copy_from(prep.amplitudes());
    let mut state = StateVector::from_amplitudes(&shape, amps)?;
    state.apply(&hadamard(), &[0])?;
    state.apply(&controlled_power(unitary, k - 1), &[0, 1])?;
    state.apply(&phase_gate(feedback), &[0])?;
    state.apply(&hadamard(), &[0])?;
    Ok(state.marginal_probabilities(0)?[1])
}

/// Kitaev iterative phase estimation with one ancilla, least significant
/// bit first. `U|ψ⟩ = e^{2πiφ}|ψ⟩` yields `φ ∈ [0, 1)`.
pub fn iqpe<R: Rng + ?Sized>(
    prep: &StateVector,
    unitary: &MonodromyOperator,
    n_bits: u32,
    shots_per_bit: u64,
    rng: &mut R,
) -> Result<(f64, IqpeRecord)> {
    if n_bits == 0 || n_bits > 52 {
        return Err(Error::InvalidArgument(format!("n_bits must be in 1..=52, got {n_bits}")));
    }
    if prep.dim() != unitary.dim() {
        return Err(Error::DimensionMismatch {
            expected: unitary.dim(),
            actual: prep.dim(),
        });
    }
    let n = n_bits as usize;
    let mut record = IqpeRecord {
        bits: vec![0; n],
        ones: vec![0; n],
        ties: vec![false; n],
    };
    for k in (1..=n_bits).rev() {
        let feedback = -2.0
            * PI
            * (k + 1..=n_bits)
                .map(|l| record.bits[l as usize - 1] as f64 * 0.5f64.powi((l - k + 1) as i32))
                .sum::<f64>();
        let p1 = ancilla_one_probability(prep, unitary, k, feedback)?;
        let ones = (sample_probability(p1, shots_per_bit, rng)?.value * shots_per_bit as f64).round() as u64;
        let idx = k as usize - 1;
        record.ones[idx] = ones;
        record.ties[idx] = 2 * ones == shots_per_bit;
        record.bits[idx] = u8::from(2 * ones > shots_per_bit);
    }
    let phi = record
        .bits
        .iter()
        .enumerate()
        .map(|(i, &b)| b as f64 * 0.5f64.powi(i as i32 + 1))
        .sum();
    Ok((phi, record))
}

/// `ε = fold(−2πφ/T)` from `e^{2πiφ} = e^{−iεT}`.
pub fn quasienergy_from_phase(phi: f64, period: f64, omega: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&phi) {
        return Err(Error::PhaseOutOfRange(phi));
    }
    fold_to_bz(-2.0 * PI * phi / period, omega)
}

/// Circular mean (in `(−π, π]`) and circular standard deviation
/// `sqrt(−2 ln R)` of a set of angles.
pub fn circular_statistics(angles: &[f64]) -> (f64, f64) {
    let n = angles.len() as f64;
    let (s, c) = angles
        .iter()
        .fold((0.0, 0.0), |(s, c), a| (s + a.sin(), c + a.cos()));
    let r = (s / n).hypot(c / n);
    // Identical angles give R = 1 up to rounding.
    let sigma = if r >= 1.0 - 1e-12 { 0.0 } else { (-2.0 * r.ln()).sqrt() };
    (s.atan2(c), sigma)
}

/// Runs the full time-domain procedure with the single-U3 ansatz.
pub fn solve_band_fz1(h: &FourierHamiltonian, config: &Fz1Config) -> Result<Vec<FloquetSolution>> {
    let circuit = ParameterizedCircuit::new(RegisterShape::new(vec![h.dim_r()])?)
        .u3(0)
        .map_err(|_| Error::InvalidArgument("the U3 ansatz needs a two-level system".into()))?;
    solve_band_fz1_with(h, &circuit, config)
}

/// Runs the full time-domain procedure with an arbitrary ansatz, finding
/// one solution per physical dimension.
pub fn solve_band_fz1_with(
    h: &FourierHamiltonian,
    circuit: &ParameterizedCircuit,
    config: &Fz1Config,
) -> Result<Vec<FloquetSolution>> {
    if circuit.shape().total_dim() != h.dim_r() {
        return Err(Error::DimensionMismatch {
            expected: h.dim_r(),
            actual: circuit.shape().total_dim(),
        });
    }
    if config.iqpe_repeats == 0 {
        return Err(Error::InvalidArgument("iqpe_repeats must be positive".into()));
    }
    if config.lambda < 1.0 {
        warn!(
            "deflation weight {} is below the spread of the return-overlap loss (1)",
            config.lambda
        );
    }
    let mut optimizer = config.optimizer.clone();
    if config.shots > 0 {
        optimizer.line_search = LineSearch::FixedSchedule;
    }
    let monodromy = trotter_monodromy(h, config.trotter_steps)?;
    let oracle = exact_quasienergies(h, config.oracle_steps)?;
    let period = monodromy.period();
    let seed = optimizer.seed;

    let mut deflation = DeflationSet::new(config.lambda)?;
    let mut solutions = Vec::with_capacity(h.dim_r());
    for alpha in 0..h.dim_r() as u64 {
        let mut objective = ReturnOverlapObjective {
            circuit,
            monodromy: &monodromy,
            deflation: &deflation,
            shots: config.shots,
            rng: substream(seed, 3 * alpha + 1),
        };
        let best = maximize(&mut objective, &optimizer, &mut substream(seed, 3 * alpha))?;
        let state = circuit.prepare(&best.theta)?;

        let mut iqpe_rng = substream(seed, 3 * alpha + 2);
        let angles = (0..config.iqpe_repeats)
            .map(|_| {
                iqpe(&state, &monodromy, config.iqpe_bits, config.iqpe_shots, &mut iqpe_rng)
                    .map(|(phi, _)| 2.0 * PI * phi)
            })
            .collect::<Result<Vec<_>>>()?;
        let (mean_angle, sigma_angle) = circular_statistics(&angles);
        let phi = (mean_angle / (2.0 * PI)).rem_euclid(1.0);
        // rem_euclid can round up to exactly 1.0.
        let phi = if phi >= 1.0 { 0.0 } else { phi };
        let epsilon = quasienergy_from_phase(phi, period, h.omega())?;
        let (branch, fidelity) = mode_fidelity(state.amplitudes(), &oracle)?;

        deflation.push(circuit, &best.theta)?;
        solutions.push(FloquetSolution {
            theta_star: best.theta.clone(),
            epsilon,
            epsilon_sigma: sigma_angle / period,
            epsilon_raw: None,
            harmonic: None,
            loss_star: best.loss,
            branch,
            fidelity_vs_oracle: fidelity,
            residual_variance: None,
            converged: best.loss >= config.unconverged_threshold,
            state,
            optimizer: best,
        });
    }
    Ok(solutions)
}
