//! Dense statevector simulation over registers of mixed subsystem dimensions.
//!
//! Basis states are flattened mixed-radix with subsystem 0 as the slowest
//! digit, so a register of dims `[3, 2]` matches the tensor product
//! `A ⊗ B` with `A` acting on the qutrit.

mod gates;
mod operator;
mod register;
mod sampling;
mod state;

pub use gates::{hadamard, identity, pauli_x, pauli_y, pauli_z, phase_gate, u3_matrix};
pub use operator::{matrix_exponential, DenseOperator, HermitianSpectrum, OperatorKind};
pub use register::RegisterShape;
pub use sampling::{sample_observable, sample_probability, sample_projector, Estimate};
pub use state::{apply_operator, embed_operator, new_zero_state, StateVector};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Tolerance for hermitian tagging (max |M − M†|).
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance for unitary tagging (max |M†M − 1|) and norm preservation.
pub const UNITARY_TOL: f64 = 1e-10;

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}
