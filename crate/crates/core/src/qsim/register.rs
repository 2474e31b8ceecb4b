use crate::error::{Error, Result};

/// Ordered subsystem dimensions of a register.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RegisterShape {
    dims: Vec<usize>,
}

impl RegisterShape {
    pub fn new(dims: impl Into<Vec<usize>>) -> Result<Self> {
        let dims = dims.into();
        if dims.is_empty() {
            return Err(Error::EmptyRegister);
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::SubsystemTooSmall(d));
        }
        Ok(Self { dims })
    }

    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Flat-index stride of each subsystem; the last subsystem has stride 1.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.dims[k + 1];
        }
        strides
    }

    pub fn flat_index(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.dims.len() {
            return Err(Error::DimensionMismatch {
                expected: self.dims.len(),
                actual: digits.len(),
            });
        }
        let mut flat = 0;
        for (&d, &dim) in digits.iter().zip(&self.dims) {
            if d >= dim {
                return Err(Error::IndexOutOfRange { index: d, dim });
            }
            flat = flat * dim + d;
        }
        Ok(flat)
    }

    pub fn digits(&self, flat: usize) -> Result<Vec<usize>> {
        let total = self.total_dim();
        if flat >= total {
            return Err(Error::IndexOutOfRange { index: flat, dim: total });
        }
        let mut rest = flat;
        let mut digits = vec![0; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            digits[k] = rest % self.dims[k];
            rest /= self.dims[k];
        }
        Ok(digits)
    }

    /// Product of the dimensions of `targets`, after checking they are
    /// distinct and in range.
    pub(crate) fn target_dim(&self, targets: &[usize]) -> Result<usize> {
        let mut seen = vec![false; self.dims.len()];
        let mut dim = 1;
        for &t in targets {
            if t >= self.dims.len() {
                return Err(Error::TargetOutOfRange {
                    index: t,
                    len: self.dims.len(),
                });
            }
            if seen[t] {
                return Err(Error::RepeatedTarget(t));
            }
            seen[t] = true;
            dim *= self.dims[t];
        }
        Ok(dim)
    }

    /// Flat offsets enumerating the joint basis of `subsystems`, first entry
    /// slowest.
    pub(crate) fn offsets(&self, subsystems: &[usize]) -> Vec<usize> {
        let strides = self.strides();
        let mut offsets = vec![0usize];
        for &s in subsystems {
            let (dim, stride) = (self.dims[s], strides[s]);
            offsets = offsets
                .iter()
                .flat_map(|&o| (0..dim).map(move |d| o + d * stride))
                .collect();
        }
        offsets
    }
}
