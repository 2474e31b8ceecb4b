//! One-period propagator by time slicing, and its controlled powers.

use crate::error::{Error, Result};
use crate::model::FourierHamiltonian;
use crate::qsim::{CMatrix, DenseOperator, HermitianSpectrum, C64};

/// One-period propagator `U_T` of a periodic Hamiltonian. The global phase
/// is physical and never normalized away.
#[derive(Clone, Debug)]
pub struct MonodromyOperator {
    u_t: DenseOperator,
    steps: usize,
    period: f64,
}

impl MonodromyOperator {
    /// Wraps an arbitrary unitary as a one-period propagator.
    pub fn from_unitary(u_t: DenseOperator, period: f64) -> Result<Self> {
        let u_t = DenseOperator::unitary(u_t.into_matrix())?;
        Ok(Self {
            u_t,
            steps: 0,
            period,
        })
    }

    pub fn operator(&self) -> &DenseOperator {
        &self.u_t
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn dim(&self) -> usize {
        self.u_t.dim()
    }

    /// `(U_T)^{2^p}` by repeated squaring.
    pub fn power_of_two(&self, p: u32) -> DenseOperator {
        let mut m = self.u_t.matrix().clone();
        for _ in 0..p {
            m = &m * &m;
        }
        DenseOperator::unitary_unchecked(m)
    }
}

/// `U_T = Π_{k=steps..1} exp(−i H(t_k) Δt)` with midpoint times
/// `t_k = (k − ½)Δt`; later slices multiply from the left.
pub fn trotter_monodromy(h: &FourierHamiltonian, steps: usize) -> Result<MonodromyOperator> {
    if steps == 0 {
        return Err(Error::ZeroSteps);
    }
    let period = h.period();
    let dt = period / steps as f64;
    let dim = h.dim_r();
    let mut u = CMatrix::identity(dim, dim);
    for k in 1..=steps {
        let t = (k as f64 - 0.5) * dt;
        let slice = HermitianSpectrum::of(h.evaluate_at_time(t).matrix()).exp_i(-dt);
        u = slice * u;
    }
    Ok(MonodromyOperator {
        u_t: DenseOperator::unitary(u)?,
        steps,
        period,
    })
}

/// `|0⟩⟨0| ⊗ 𝟙 + |1⟩⟨1| ⊗ U^{2^p}` on `[2, dim]` with the ancilla slowest.
pub fn controlled_power(u: &MonodromyOperator, p: u32) -> DenseOperator {
    controlled(&u.power_of_two(p))
}

pub(crate) fn controlled(u: &DenseOperator) -> DenseOperator {
    let d = u.dim();
    let mut m = CMatrix::zeros(2 * d, 2 * d);
    for k in 0..d {
        m[(k, k)] = C64::new(1.0, 0.0);
    }
    m.view_mut((d, d), (d, d)).copy_from(u.matrix());
    DenseOperator::unitary_unchecked(m)
}
