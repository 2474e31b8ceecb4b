use rand::Rng;
use rand_distr::{Binomial, Distribution};

use super::{DenseOperator, StateVector};
use crate::error::{Error, Result};

/// A sampled (or exact) estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            std_error: 0.0,
        }
    }
}

fn binomial<R: Rng + ?Sized>(n: u64, p: f64, rng: &mut R) -> u64 {
    let p = p.clamp(0.0, 1.0);
    if n == 0 || p == 0.0 {
        return 0;
    }
    if p == 1.0 {
        return n;
    }
    Binomial::new(n, p).expect("p in [0, 1]").sample(rng)
}

/// Fraction of successes in `shots` Bernoulli(p) trials.
pub fn sample_probability<R: Rng + ?Sized>(p: f64, shots: u64, rng: &mut R) -> Result<Estimate> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let hits = binomial(shots, p, rng);
    let p_hat = hits as f64 / shots as f64;
    Ok(Estimate {
        value: p_hat,
        std_error: (p_hat * (1.0 - p_hat) / shots as f64).sqrt(),
    })
}

/// Shot-noise estimate of `|⟨k|ψ⟩|²`.
pub fn sample_projector<R: Rng + ?Sized>(
    state: &StateVector,
    flat_index: usize,
    shots: u64,
    rng: &mut R,
) -> Result<Estimate> {
    let p = state.projector_probability(flat_index)?;
    sample_probability(p, shots, rng)
}

/// Shot-noise estimate of `⟨ψ|obs|ψ⟩` by projective measurement in the
/// eigenbasis of `obs`. `shots == 0` returns the exact expectation.
pub fn sample_observable<R: Rng + ?Sized>(
    state: &StateVector,
    obs: &DenseOperator,
    shots: u64,
    rng: &mut R,
) -> Result<Estimate> {
    if shots == 0 {
        return state.expectation(obs).map(Estimate::exact);
    }
    let spectrum = obs.spectrum()?;
    if spectrum.dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            actual: spectrum.dim(),
        });
    }
    let probs: Vec<f64> = spectrum
        .vectors
        .column_iter()
        .map(|v| v.dotc(state.amplitudes()).norm_sqr())
        .collect();
    let total: f64 = probs.iter().sum();

    // Multinomial draw as a chain of conditional binomials.
    let mut remaining = shots;
    let mut mass = total;
    let mut counts = vec![0u64; probs.len()];
    for (k, &p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        let n = if k + 1 == probs.len() || mass <= p {
            remaining
        } else {
            binomial(remaining, p / mass, rng)
        };
        counts[k] = n;
        remaining -= n;
        mass -= p;
    }

    let n = shots as f64;
    let mean = counts
        .iter()
        .zip(&spectrum.values)
        .map(|(&k, &l)| k as f64 * l)
        .sum::<f64>()
        / n;
    let var = counts
        .iter()
        .zip(&spectrum.values)
        .map(|(&k, &l)| k as f64 * (l - mean).powi(2))
        .sum::<f64>()
        / n;
    Ok(Estimate {
        value: mean,
        std_error: (var / n).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{pauli_z, CVector, RegisterShape, C64};
    use crate::rng::substream;

    fn plus() -> StateVector {
        let shape = RegisterShape::new(vec![2]).unwrap();
        let a = C64::new(1.0, 0.0);
        StateVector::from_amplitudes(&shape, CVector::from_vec(vec![a, a])).unwrap()
    }

    #[test]
    fn deterministic_outcomes() {
        let mut rng = substream(1, 0);
        let zero = StateVector::basis(&RegisterShape::new(vec![2]).unwrap(), 0).unwrap();
        let e = sample_projector(&zero, 0, 100, &mut rng).unwrap();
        assert_eq!(e, Estimate { value: 1.0, std_error: 0.0 });
        let e = sample_projector(&zero, 1, 100, &mut rng).unwrap();
        assert_eq!(e.value, 0.0);
        assert_eq!(sample_projector(&zero, 0, 0, &mut rng), Err(Error::ZeroShots));
    }

    #[test]
    fn half_probability_concentrates() {
        let mut rng = substream(7, 3);
        let e = sample_projector(&plus(), 0, 10_000, &mut rng).unwrap();
        assert!((e.value - 0.5).abs() <= 0.02, "{e:?}");
        assert!((e.std_error - 0.005).abs() < 1e-4);
    }

    #[test]
    fn observable_sampling() {
        let mut rng = substream(11, 0);
        let zero = StateVector::basis(&RegisterShape::new(vec![2]).unwrap(), 0).unwrap();
        let e = sample_observable(&zero, &pauli_z(), 1000, &mut rng).unwrap();
        assert!((e.value - 1.0).abs() < 1e-12);
        assert_eq!(e.std_error, 0.0);

        let exact = sample_observable(&plus(), &pauli_z(), 0, &mut rng).unwrap();
        assert_eq!(exact, Estimate::exact(plus().expectation(&pauli_z()).unwrap()));

        let e = sample_observable(&plus(), &pauli_z(), 10_000, &mut rng).unwrap();
        assert!(e.value.abs() <= 0.04, "{e:?}");
        assert!((e.std_error - 0.01).abs() < 1e-3);
    }

    #[test]
    fn sampling_is_reproducible() {
        let a = sample_observable(&plus(), &pauli_z(), 500, &mut substream(5, 2)).unwrap();
        let b = sample_observable(&plus(), &pauli_z(), 500, &mut substream(5, 2)).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }
}
