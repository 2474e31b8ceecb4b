//! Frequency-domain solver: excited-state search on `H_eff²` in the
//! truncated extended space with a seven-parameter Hamiltonian ansatz on a
//! qutrit-qubit register, signs recovered from `⟨H_eff⟩`.

use log::warn;
use rand::Rng;

use crate::error::{Error, Result};
use crate::fz1::FloquetSolution;
use crate::model::{ExtendedHamiltonian, FourierHamiltonian};
use crate::oracle::{best_overlap, fold_to_bz, truncated_exact_spectrum};
use crate::qsim::{
    c, pauli_x, pauli_y, sample_observable, CMatrix, DenseOperator, Estimate, StateVector,
};
use crate::rng::substream;
use crate::variational::{
    deflation_overlaps, deflation_penalty, maximize, DeflationSet, ExponentSign, FnObjective,
    LineSearch, OptimizerConfig, ParameterizedCircuit,
};

/// Residual variance above `RESIDUAL_FRACTION · Ω²` flags a branch.
pub const RESIDUAL_FRACTION: f64 = 0.05;
/// Overlap with an earlier solution above this flags a duplicate branch.
pub const DUPLICATE_OVERLAP: f64 = 0.5;

/// Ladder generators on the three-level T space and Paulis on R.
#[derive(Clone, Debug)]
pub struct SpinLadderGenerators {
    pub s4: DenseOperator,
    pub s5: DenseOperator,
    pub sx: DenseOperator,
    pub sigma_y: DenseOperator,
    pub sigma_x: DenseOperator,
}

impl SpinLadderGenerators {
    pub fn new(j_max: usize) -> Result<Self> {
        if j_max != 1 {
            return Err(Error::UnsupportedTruncation(j_max));
        }
        let mut s4 = CMatrix::zeros(3, 3);
        s4[(1, 2)] = c(1.0, 0.0);
        s4[(2, 1)] = c(1.0, 0.0);
        let mut s5 = CMatrix::zeros(3, 3);
        s5[(0, 1)] = c(1.0, 0.0);
        s5[(1, 0)] = c(1.0, 0.0);
        let sx = (&s4 + &s5).scale(0.5);
        Ok(Self {
            s4: DenseOperator::hermitian(s4)?,
            s5: DenseOperator::hermitian(s5)?,
            sx: DenseOperator::hermitian(sx)?,
            sigma_y: pauli_y(),
            sigma_x: pauli_x(),
        })
    }
}

/// R-space Pauli paired with `S_x` in the entangling gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Entangler {
    /// `exp(iΘ S_x⊗σ_x)`.
    #[default]
    SxSigmaX,
    /// `exp(iΘ S_x⊗σ_y)`; a real rotation that reaches every `H_eff`
    /// eigenvector of the benchmark model.
    SxSigmaY,
}

impl Entangler {
    pub fn name(self) -> &'static str {
        match self {
            Self::SxSigmaX => "sx-sigma-x",
            Self::SxSigmaY => "sx-sigma-y",
        }
    }
}

impl std::str::FromStr for Entangler {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sx-sigma-x" => Ok(Self::SxSigmaX),
            "sx-sigma-y" => Ok(Self::SxSigmaY),
            other => Err(Error::InvalidArgument(format!("unknown entangler `{other}`"))),
        }
    }
}

/// `e^{iΘ₁σ_y} e^{iΘ₂S4} e^{iΘ₃S5} e^{iΘ₄S_x⊗σ_x} e^{iΘ₅σ_y} e^{iΘ₆S4} e^{iΘ₇S5}`
/// on register `[3, 2]`, rightmost factor first.
pub fn build_vha(j_max: usize) -> Result<ParameterizedCircuit> {
    build_vha_with(j_max, Entangler::default())
}

pub fn build_vha_with(j_max: usize, entangler: Entangler) -> Result<ParameterizedCircuit> {
    let g = SpinLadderGenerators::new(j_max)?;
    let r_pauli = match entangler {
        Entangler::SxSigmaX => &g.sigma_x,
        Entangler::SxSigmaY => &g.sigma_y,
    };
    let coupling = DenseOperator::hermitian(g.sx.kron(r_pauli).into_matrix())?;
    let shape = crate::qsim::RegisterShape::new(vec![2 * j_max + 1, 2])?;
    let plus = ExponentSign::Plus;
    ParameterizedCircuit::new(shape)
        .rotation(g.sigma_y.clone(), &[1], plus)?
        .rotation(g.s4.clone(), &[0], plus)?
        .rotation(g.s5.clone(), &[0], plus)?
        .rotation(coupling, &[0, 1], plus)?
        .rotation(g.sigma_y, &[1], plus)?
        .rotation(g.s4, &[0], plus)?
        .rotation(g.s5, &[0], plus)
}

fn check_dims(circuit: &ParameterizedCircuit, heff: &ExtendedHamiltonian) -> Result<()> {
    if circuit.shape().total_dim() != heff.dim() {
        return Err(Error::DimensionMismatch {
            expected: heff.dim(),
            actual: circuit.shape().total_dim(),
        });
    }
    Ok(())
}

/// `⟨H_eff²⟩ + λ Σ_β |⟨ψ_β|ψ(Θ)⟩|²`, to be minimized.
pub fn loss_fz2<R: Rng + ?Sized>(
    circuit: &ParameterizedCircuit,
    theta: &[f64],
    heff_squared: &DenseOperator,
    deflation: &DeflationSet,
    shots: u64,
    rng: &mut R,
) -> Result<f64> {
    if circuit.shape().total_dim() != heff_squared.dim() {
        return Err(Error::DimensionMismatch {
            expected: heff_squared.dim(),
            actual: circuit.shape().total_dim(),
        });
    }
    let state = circuit.prepare(theta)?;
    let energy = sample_observable(&state, heff_squared, shots, rng)?.value;
    Ok(energy + deflation_penalty(circuit, theta, deflation, shots, rng)?)
}

/// Estimate of `⟨H_eff⟩` at `theta` and its value folded into the zone.
pub fn energy_from_state<R: Rng + ?Sized>(
    circuit: &ParameterizedCircuit,
    theta: &[f64],
    heff: &ExtendedHamiltonian,
    shots: u64,
    rng: &mut R,
) -> Result<(Estimate, f64)> {
    check_dims(circuit, heff)?;
    let state = circuit.prepare(theta)?;
    let estimate = sample_observable(&state, heff.matrix(), shots, rng)?;
    let folded = fold_to_bz(estimate.value, heff.omega())?;
    Ok((estimate, folded))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fz2Config {
    pub lambda: f64,
    /// Shots per expectation value; 0 evaluates exactly.
    pub shots: u64,
    pub entangler: Entangler,
    /// Central-difference step used when `shots > 0`; in exact mode the
    /// optimizer's own `fd_step` applies.
    pub sampled_fd_step: f64,
    pub optimizer: OptimizerConfig,
}

impl Default for Fz2Config {
    fn default() -> Self {
        Self {
            lambda: 5.0,
            shots: 10_000,
            entangler: Entangler::default(),
            sampled_fd_step: 0.05,
            optimizer: OptimizerConfig::default(),
        }
    }
}

/// Runs the full frequency-domain procedure: one solution per extended
/// dimension, sorted by raw `⟨H_eff⟩`.
pub fn solve_band_fz2(
    h: &FourierHamiltonian,
    j_max: usize,
    config: &Fz2Config,
) -> Result<Vec<FloquetSolution>> {
    let circuit = build_vha_with(j_max, config.entangler)?;
    let heff = ExtendedHamiltonian::build(h, j_max);
    heff.verify(h)?;
    check_dims(&circuit, &heff)?;
    let heff_squared = heff.squared();
    let sq_values = &heff_squared.spectrum()?.values;
    let width = sq_values[sq_values.len() - 1] - sq_values[0];
    if config.lambda < width {
        warn!(
            "deflation weight {} is below the spectral width of H_eff² ({width:.3}); \
             outer branches may be unreachable",
            config.lambda
        );
    }
    let truncated = truncated_exact_spectrum(h, j_max);
    let omega = h.omega();

    let mut optimizer = config.optimizer.clone();
    if config.shots > 0 {
        optimizer.line_search = LineSearch::FixedSchedule;
        optimizer.fd_step = config.sampled_fd_step;
    }
    let seed = optimizer.seed;
    let mut deflation = DeflationSet::new(config.lambda)?;
    let mut solutions = Vec::with_capacity(heff.dim());
    for alpha in 0..heff.dim() as u64 {
        let mut loss_rng = substream(seed, 3 * alpha + 1);
        let best = {
            let deflation = &deflation;
            let mut objective = FnObjective::new(circuit.n_params(), |theta: &[f64]| {
                -loss_fz2(&circuit, theta, &heff_squared, deflation, config.shots, &mut loss_rng)
                    .expect("dimensions checked before the solve")
            });
            maximize(&mut objective, &optimizer, &mut substream(seed, 3 * alpha))?
        };

        let mut eval_rng = substream(seed, 3 * alpha + 2);
        let state = circuit.prepare(&best.theta)?;
        let (energy, folded) = energy_from_state(&circuit, &best.theta, &heff, config.shots, &mut eval_rng)?;
        let energy_sq = sample_observable(&state, &heff_squared, config.shots, &mut eval_rng)?;
        let residual = energy_sq.value - energy.value * energy.value;
        let max_previous = deflation_overlaps(&circuit, &best.theta, &deflation, 0, &mut eval_rng)?
            .into_iter()
            .fold(0.0, f64::max);
        let (branch, fidelity) = best_overlap(state.amplitudes(), truncated.iter().map(|(_, v)| v))?;

        deflation.push(&circuit, &best.theta)?;
        solutions.push(FloquetSolution {
            theta_star: best.theta.clone(),
            epsilon: folded,
            epsilon_sigma: energy.std_error,
            epsilon_raw: Some(energy.value),
            harmonic: Some(((energy.value - folded) / omega).round() as i32),
            loss_star: -best.loss,
            branch,
            fidelity_vs_oracle: fidelity,
            residual_variance: Some(residual),
            converged: residual <= RESIDUAL_FRACTION * omega * omega && max_previous <= DUPLICATE_OVERLAP,
            state,
            optimizer: best,
        });
    }
    solutions.sort_by(|a, b| a.epsilon_raw.unwrap_or(0.0).total_cmp(&b.epsilon_raw.unwrap_or(0.0)));
    Ok(solutions)
}

/// Pairwise `|⟨ψ_α|ψ_β⟩|²` over distinct solutions.
pub fn pairwise_overlaps(states: &[StateVector]) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, a) in states.iter().enumerate() {
        for b in &states[i + 1..] {
            out.push(a.inner(b)?.norm_sqr());
        }
    }
    Ok(out)
}
