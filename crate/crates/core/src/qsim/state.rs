use num_complex::ComplexFloat;

use super::{CMatrix, CVector, DenseOperator, OperatorKind, RegisterShape, C64};
use crate::error::{Error, Result};

/// Normalized amplitude vector over a register.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    shape: RegisterShape,
    amps: CVector,
}

/// `|0…0⟩` on `shape`.
pub fn new_zero_state(shape: &RegisterShape) -> StateVector {
    StateVector::basis(shape, 0).expect("index 0 always exists")
}

/// Returns `op` applied to `targets` of `state` (identity elsewhere).
pub fn apply_operator(
    state: &StateVector,
    op: &DenseOperator,
    targets: &[usize],
) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply(op, targets)?;
    Ok(out)
}

/// Full-register matrix of `op` acting on `targets`.
pub fn embed_operator(
    shape: &RegisterShape,
    op: &DenseOperator,
    targets: &[usize],
) -> Result<CMatrix> {
    let dim = shape.total_dim();
    let mut out = CMatrix::identity(dim, dim);
    for col in 0..dim {
        let mut column = out.column(col).into_owned();
        apply_in_place(shape, &mut column, op.matrix(), targets)?;
        out.set_column(col, &column);
    }
    Ok(out)
}

pub(crate) fn apply_in_place(
    shape: &RegisterShape,
    amps: &mut CVector,
    m: &CMatrix,
    targets: &[usize],
) -> Result<()> {
    let sub = shape.target_dim(targets)?;
    if m.nrows() != sub {
        return Err(Error::DimensionMismatch {
            expected: sub,
            actual: m.nrows(),
        });
    }
    let rest: Vec<usize> = (0..shape.num_subsystems())
        .filter(|s| !targets.contains(s))
        .collect();
    let offsets = shape.offsets(targets);
    let bases = shape.offsets(&rest);
    let mut buf = vec![C64::new(0.0, 0.0); sub];
    for &base in &bases {
        for (slot, &o) in buf.iter_mut().zip(&offsets) {
            *slot = amps[base + o];
        }
        for (r, &o) in offsets.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (k, &b) in buf.iter().enumerate() {
                acc += m[(r, k)] * b;
            }
            amps[base + o] = acc;
        }
    }
    Ok(())
}

impl StateVector {
    pub fn basis(shape: &RegisterShape, flat_index: usize) -> Result<Self> {
        let dim = shape.total_dim();
        if flat_index >= dim {
            return Err(Error::IndexOutOfRange {
                index: flat_index,
                dim,
            });
        }
        let mut amps = CVector::zeros(dim);
        amps[flat_index] = C64::new(1.0, 0.0);
        Ok(Self {
            shape: shape.clone(),
            amps,
        })
    }

    /// Builds a state from raw amplitudes, normalizing them.
    pub fn from_amplitudes(shape: &RegisterShape, amps: CVector) -> Result<Self> {
        if amps.len() != shape.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: shape.total_dim(),
                actual: amps.len(),
            });
        }
        let norm = amps.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(Self {
            shape: shape.clone(),
            amps: amps.unscale(norm),
        })
    }

    pub fn shape(&self) -> &RegisterShape {
        &self.shape
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    pub fn apply(&mut self, op: &DenseOperator, targets: &[usize]) -> Result<()> {
        apply_in_place(&self.shape, &mut self.amps, op.matrix(), targets)
    }

    /// Applies a full-register matrix.
    pub fn apply_full(&mut self, op: &DenseOperator) -> Result<()> {
        if op.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: op.dim(),
            });
        }
        self.amps = op.matrix() * &self.amps;
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch);
        }
        Ok(self.amps.dotc(&other.amps))
    }

    /// `⟨ψ|obs|ψ⟩` for a hermitian-tagged observable on the whole register.
    pub fn expectation(&self, obs: &DenseOperator) -> Result<f64> {
        if obs.kind() != OperatorKind::Hermitian {
            return Err(Error::HermitianTagRequired);
        }
        if obs.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: obs.dim(),
            });
        }
        let value = self.amps.dotc(&(obs.matrix() * &self.amps));
        debug_assert!(value.im().abs() <= 1e-10 * (1.0 + value.re().abs()));
        Ok(value.re)
    }

    /// `|⟨k|ψ⟩|²` for basis index `k`.
    pub fn projector_probability(&self, flat_index: usize) -> Result<f64> {
        self.amps
            .get(flat_index)
            .map(|a| a.norm_sqr().min(1.0))
            .ok_or(Error::IndexOutOfRange {
                index: flat_index,
                dim: self.dim(),
            })
    }

    /// Probabilities of each outcome of subsystem `subsystem`.
    pub fn marginal_probabilities(&self, subsystem: usize) -> Result<Vec<f64>> {
        self.shape.target_dim(&[subsystem])?;
        let dims = self.shape.dims();
        let stride = self.shape.strides()[subsystem];
        let mut probs = vec![0.0; dims[subsystem]];
        for (flat, a) in self.amps.iter().enumerate() {
            probs[(flat / stride) % dims[subsystem]] += a.norm_sqr();
        }
        Ok(probs)
    }
}
