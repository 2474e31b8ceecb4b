use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::qsim::{
    embed_operator, new_zero_state, u3_matrix, DenseOperator, RegisterShape, StateVector,
};

/// Sign of the exponent of a rotation gate, `exp(±i·θ·K)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExponentSign {
    Plus,
    Minus,
}

impl ExponentSign {
    fn value(self) -> f64 {
        match self {
            Self::Plus => 1.0,
            Self::Minus => -1.0,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Gate {
    /// `exp(±i·θ·K)` with a hermitian generator `K`; one parameter.
    Rotation {
        generator: DenseOperator,
        targets: Vec<usize>,
        sign: ExponentSign,
    },
    /// `U3(θ, φ, ν)` on one qubit; three parameters.
    U3 { target: usize },
    /// Parameter-free unitary.
    Fixed {
        unitary: DenseOperator,
        targets: Vec<usize>,
    },
}

impl Gate {
    pub fn n_params(&self) -> usize {
        match self {
            Self::Rotation { .. } => 1,
            Self::U3 { .. } => 3,
            Self::Fixed { .. } => 0,
        }
    }

    fn targets(&self) -> Vec<usize> {
        match self {
            Self::Rotation { targets, .. } | Self::Fixed { targets, .. } => targets.clone(),
            Self::U3 { target } => vec![*target],
        }
    }

    fn matrix(&self, params: &[f64]) -> Result<DenseOperator> {
        Ok(match self {
            Self::Rotation {
                generator, sign, ..
            } => DenseOperator::unitary_unchecked(generator.spectrum()?.exp_i(sign.value() * params[0])),
            Self::U3 { .. } => u3_matrix(params[0], params[1], params[2]),
            Self::Fixed { unitary, .. } => unitary.clone(),
        })
    }
}

/// Two-term parameter-shift rule
/// `∂f/∂θ = coefficient · (f(θ + shift) − f(θ − shift))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShiftRule {
    pub shift: f64,
    pub coefficient: f64,
}

impl ShiftRule {
    /// Rule for a generator whose spectrum is `{c − r, c + r}`.
    fn for_half_gap(r: f64) -> Self {
        Self {
            shift: PI / (4.0 * r),
            coefficient: r,
        }
    }
}

/// Ordered gate product `G_1 G_2 ⋯ G_L`; `G_L` acts first on `|0⟩`.
#[derive(Clone, Debug)]
pub struct ParameterizedCircuit {
    shape: RegisterShape,
    gates: Vec<Gate>,
    n_params: usize,
}

impl ParameterizedCircuit {
    pub fn new(shape: RegisterShape) -> Self {
        Self {
            shape,
            gates: Vec::new(),
            n_params: 0,
        }
    }

    fn push(mut self, gate: Gate, op_dim: usize) -> Result<Self> {
        let dim = self.shape.target_dim(&gate.targets())?;
        if dim != op_dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: op_dim,
            });
        }
        self.n_params += gate.n_params();
        self.gates.push(gate);
        Ok(self)
    }

    /// Appends `exp(±i·θ·generator)` as the next (later-applied-first) factor.
    pub fn rotation(
        self,
        generator: DenseOperator,
        targets: &[usize],
        sign: ExponentSign,
    ) -> Result<Self> {
        generator.spectrum()?;
        let dim = generator.dim();
        self.push(
            Gate::Rotation {
                generator,
                targets: targets.to_vec(),
                sign,
            },
            dim,
        )
    }

    pub fn u3(self, target: usize) -> Result<Self> {
        self.push(Gate::U3 { target }, 2)
    }

    pub fn fixed(self, unitary: DenseOperator, targets: &[usize]) -> Result<Self> {
        let dim = unitary.dim();
        self.push(
            Gate::Fixed {
                unitary,
                targets: targets.to_vec(),
            },
            dim,
        )
    }

    pub fn shape(&self) -> &RegisterShape {
        &self.shape
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    fn check_len(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.n_params {
            return Err(Error::ParameterCount {
                expected: self.n_params,
                actual: theta.len(),
            });
        }
        Ok(())
    }

    /// Gate unitaries with their targets, in listed order.
    fn bound_gates(&self, theta: &[f64]) -> Result<Vec<(DenseOperator, Vec<usize>)>> {
        self.check_len(theta)?;
        let mut offset = 0;
        self.gates
            .iter()
            .map(|g| {
                let n = g.n_params();
                let m = g.matrix(&theta[offset..offset + n])?;
                offset += n;
                Ok((m, g.targets()))
            })
            .collect()
    }

    /// Full-register unitary `G_1(θ) ⋯ G_L(θ)`.
    pub fn bind(&self, theta: &[f64]) -> Result<DenseOperator> {
        let dim = self.shape.total_dim();
        let mut u = DenseOperator::identity(dim);
        for (m, targets) in self.bound_gates(theta)? {
            let full = DenseOperator::unitary_unchecked(embed_operator(&self.shape, &m, &targets)?);
            u = u.compose(&full)?;
        }
        Ok(u)
    }

    /// `state ← U(θ) state`.
    pub fn apply(&self, state: &mut StateVector, theta: &[f64]) -> Result<()> {
        if state.shape() != &self.shape {
            return Err(Error::ShapeMismatch);
        }
        for (m, targets) in self.bound_gates(theta)?.iter().rev() {
            state.apply(m, targets)?;
        }
        Ok(())
    }

    /// `state ← U(θ)† state`.
    pub fn apply_adjoint(&self, state: &mut StateVector, theta: &[f64]) -> Result<()> {
        if state.shape() != &self.shape {
            return Err(Error::ShapeMismatch);
        }
        for (m, targets) in self.bound_gates(theta)? {
            state.apply(&m.adjoint(), &targets)?;
        }
        Ok(())
    }

    /// `U(θ)|0⟩`.
    pub fn prepare(&self, theta: &[f64]) -> Result<StateVector> {
        let mut s = new_zero_state(&self.shape);
        self.apply(&mut s, theta)?;
        Ok(s)
    }

    /// Exact two-term shift rule for parameter `param`, if its generator has
    /// exactly two distinct eigenvalues (all U3 angles qualify).
    pub fn shift_rule(&self, param: usize) -> Option<ShiftRule> {
        let mut offset = 0;
        for g in &self.gates {
            let n = g.n_params();
            if param < offset + n {
                return match g {
                    Gate::U3 { .. } => Some(ShiftRule::for_half_gap(0.5)),
                    Gate::Rotation { generator, .. } => {
                        let values = &generator.spectrum().ok()?.values;
                        let (lo, hi) = (values[0], values[values.len() - 1]);
                        let two_level = values
                            .iter()
                            .all(|&v| (v - lo).abs() < 1e-9 || (v - hi).abs() < 1e-9);
                        (two_level && hi - lo > 1e-9).then(|| ShiftRule::for_half_gap((hi - lo) / 2.0))
                    }
                    Gate::Fixed { .. } => None,
                };
            }
            offset += n;
        }
        None
    }

    pub fn shift_rules(&self) -> Vec<Option<ShiftRule>> {
        (0..self.n_params).map(|k| self.shift_rule(k)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{max_abs, pauli_x, pauli_y, pauli_z, CMatrix};

    fn qubit() -> RegisterShape {
        RegisterShape::new(vec![2]).unwrap()
    }

    #[test]
    fn u3_binding() {
        let c = ParameterizedCircuit::new(qubit()).u3(0).unwrap();
        assert_eq!(c.n_params(), 3);
        let u = c.bind(&[0.0, 0.0, 0.0]).unwrap();
        assert!(max_abs(&(u.matrix() - CMatrix::identity(2, 2))) < 1e-15);
        let u = c.bind(&[PI, 0.0, PI]).unwrap();
        assert!(max_abs(&(u.matrix() - pauli_x().matrix())) < 1e-15);
        assert_eq!(
            c.bind(&[0.0]).unwrap_err(),
            Error::ParameterCount { expected: 3, actual: 1 }
        );
    }

    #[test]
    fn ordering_leftmost_applied_last() {
        // exp(iθ1 X) exp(iθ2 Z) |0⟩ vs bound matrix.
        let c = ParameterizedCircuit::new(qubit())
            .rotation(pauli_x(), &[0], ExponentSign::Plus)
            .unwrap()
            .rotation(pauli_z(), &[0], ExponentSign::Plus)
            .unwrap();
        let theta = [0.3, 1.1];
        let u = c.bind(&theta).unwrap();
        let x = pauli_x().spectrum().unwrap().exp_i(0.3);
        let z = pauli_z().spectrum().unwrap().exp_i(1.1);
        assert!(max_abs(&(u.matrix() - &x * &z)) < 1e-14);
        let psi = c.prepare(&theta).unwrap();
        assert!((psi.amplitudes() - u.matrix().column(0)).norm() < 1e-14);
        let mut back = psi.clone();
        c.apply_adjoint(&mut back, &theta).unwrap();
        assert!((back.amplitudes()[0].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn shift_rule_eligibility() {
        let s4 = DenseOperator::hermitian(CMatrix::from_fn(3, 3, |r, c| {
            crate::qsim::C64::new(if (r, c) == (1, 2) || (r, c) == (2, 1) { 1.0 } else { 0.0 }, 0.0)
        }))
        .unwrap();
        let c = ParameterizedCircuit::new(RegisterShape::new(vec![3, 2]).unwrap())
            .rotation(pauli_y(), &[1], ExponentSign::Plus)
            .unwrap()
            .rotation(s4, &[0], ExponentSign::Plus)
            .unwrap()
            .u3(1)
            .unwrap();
        let rules = c.shift_rules();
        assert_eq!(rules[0], Some(ShiftRule { shift: PI / 4.0, coefficient: 1.0 }));
        assert_eq!(rules[1], None);
        assert_eq!(rules[2], Some(ShiftRule { shift: PI / 2.0, coefficient: 0.5 }));
        assert_eq!(rules.len(), 5);
    }

    #[test]
    fn dimension_checks() {
        let c = ParameterizedCircuit::new(RegisterShape::new(vec![3, 2]).unwrap());
        assert!(c.clone().u3(0).is_err());
        assert!(c.clone().rotation(pauli_x(), &[0], ExponentSign::Plus).is_err());
        assert!(c.rotation(DenseOperator::identity(2), &[1], ExponentSign::Plus).is_err());
    }
}
