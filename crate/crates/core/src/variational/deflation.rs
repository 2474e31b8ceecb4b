use rand::Rng;

use super::ParameterizedCircuit;
use crate::error::{Error, Result};
use crate::qsim::{sample_projector, StateVector};

/// A previously found solution `U(Θ_β)`.
#[derive(Clone, Debug)]
pub struct BoundCircuit {
    pub circuit: ParameterizedCircuit,
    pub theta: Vec<f64>,
}

impl BoundCircuit {
    pub fn prepare(&self) -> Result<StateVector> {
        self.circuit.prepare(&self.theta)
    }
}

/// Previously found solutions and the penalty weight `λ > 0`.
#[derive(Clone, Debug)]
pub struct DeflationSet {
    solutions: Vec<BoundCircuit>,
    lambda: f64,
}

impl DeflationSet {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "deflation weight must be positive, got {lambda}"
            )));
        }
        Ok(Self {
            solutions: Vec::new(),
            lambda,
        })
    }

    pub fn push(&mut self, circuit: &ParameterizedCircuit, theta: &[f64]) -> Result<()> {
        if theta.len() != circuit.n_params() {
            return Err(Error::ParameterCount {
                expected: circuit.n_params(),
                actual: theta.len(),
            });
        }
        if let Some(first) = self.solutions.first() {
            if first.circuit.shape() != circuit.shape() {
                return Err(Error::ShapeMismatch);
            }
        }
        self.solutions.push(BoundCircuit {
            circuit: circuit.clone(),
            theta: theta.to_vec(),
        });
        Ok(())
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn solutions(&self) -> &[BoundCircuit] {
        &self.solutions
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }
}

/// Estimates of `|⟨0|U(Θ_β)† U(Θ)|0⟩|²` for every stored solution, read
/// off the `|0⟩` projector of the composed circuit (sampled if `shots > 0`).
pub fn deflation_overlaps<R: Rng + ?Sized>(
    circuit: &ParameterizedCircuit,
    theta: &[f64],
    deflation: &DeflationSet,
    shots: u64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if deflation.is_empty() {
        return Ok(Vec::new());
    }
    let psi = circuit.prepare(theta)?;
    deflation
        .solutions
        .iter()
        .map(|prev| {
            if prev.circuit.shape() != circuit.shape() {
                return Err(Error::ShapeMismatch);
            }
            let mut composed = psi.clone();
            prev.circuit.apply_adjoint(&mut composed, &prev.theta)?;
            if shots == 0 {
                composed.projector_probability(0)
            } else {
                sample_projector(&composed, 0, shots, rng).map(|e| e.value)
            }
        })
        .collect()
}

/// `λ · Σ_β |⟨0|U(Θ_β)† U(Θ)|0⟩|²`.
pub fn deflation_penalty<R: Rng + ?Sized>(
    circuit: &ParameterizedCircuit,
    theta: &[f64],
    deflation: &DeflationSet,
    shots: u64,
    rng: &mut R,
) -> Result<f64> {
    let overlaps = deflation_overlaps(circuit, theta, deflation, shots, rng)?;
    Ok(deflation.lambda * overlaps.iter().sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::RegisterShape;
    use crate::rng::substream;
    use std::f64::consts::PI;

    fn u3() -> ParameterizedCircuit {
        ParameterizedCircuit::new(RegisterShape::new(vec![2]).unwrap())
            .u3(0)
            .unwrap()
    }

    #[test]
    fn penalty_cases() {
        let c = u3();
        let mut rng = substream(0, 0);
        let mut set = DeflationSet::new(5.0).unwrap();
        assert_eq!(deflation_penalty(&c, &[0.3, 0.2, 0.1], &set, 0, &mut rng).unwrap(), 0.0);

        set.push(&c, &[0.3, 0.2, 0.1]).unwrap();
        let p = deflation_penalty(&c, &[0.3, 0.2, 0.1], &set, 0, &mut rng).unwrap();
        assert!((p - 5.0).abs() < 1e-12);

        // Antipodal point on the Bloch sphere is orthogonal.
        let mut set = DeflationSet::new(5.0).unwrap();
        set.push(&c, &[0.0, 0.0, 0.0]).unwrap();
        let p = deflation_penalty(&c, &[PI, 0.0, 0.0], &set, 0, &mut rng).unwrap();
        assert!(p.abs() < 1e-12);
        let p = deflation_penalty(&c, &[PI, 0.0, 0.0], &set, 1000, &mut rng).unwrap();
        assert_eq!(p, 0.0);
    }

    #[test]
    fn lambda_must_be_positive() {
        assert!(DeflationSet::new(0.0).is_err());
        assert!(DeflationSet::new(-1.0).is_err());
    }

    #[test]
    fn shape_mismatch() {
        let mut set = DeflationSet::new(1.0).unwrap();
        set.push(&u3(), &[0.0; 3]).unwrap();
        let other = ParameterizedCircuit::new(RegisterShape::new(vec![2, 2]).unwrap())
            .u3(1)
            .unwrap();
        assert_eq!(set.push(&other, &[0.0; 3]).unwrap_err(), Error::ShapeMismatch);
        assert!(deflation_penalty(&other, &[0.0; 3], &set, 0, &mut substream(0, 0)).is_err());
    }
}
