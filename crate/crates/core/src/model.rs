//! Time-periodic Hamiltonians as finite Fourier series and their truncated
//! extended-space (Sambe) representation.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::qsim::{max_abs, CMatrix, DenseOperator, RegisterShape, C64, HERMITIAN_TOL};

/// `H(t) = Σ_j e^{−ijΩt} H_j` with `H_{−j} = H_j†`.
#[derive(Clone, Debug)]
pub struct FourierHamiltonian {
    components: BTreeMap<i32, CMatrix>,
    omega: f64,
    dim_r: usize,
}

impl FourierHamiltonian {
    pub fn new(
        dim_r: usize,
        omega: f64,
        components: impl IntoIterator<Item = (i32, CMatrix)>,
    ) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::NonPositiveFrequency(omega));
        }
        let components: BTreeMap<i32, CMatrix> = components.into_iter().collect();
        for (&j, m) in &components {
            if m.nrows() != dim_r || m.ncols() != dim_r {
                return Err(Error::DimensionMismatch {
                    expected: dim_r,
                    actual: m.nrows().max(m.ncols()),
                });
            }
            let partner = components.get(&-j);
            let ok = match partner {
                Some(p) => max_abs(&(p - m.adjoint())) <= HERMITIAN_TOL,
                // A lone component is allowed only if it vanishes.
                None => max_abs(m) <= HERMITIAN_TOL,
            };
            if !ok {
                return Err(Error::NonHermitianSeries(j));
            }
        }
        Ok(Self {
            components,
            omega,
            dim_r,
        })
    }

    /// `H(t) = −Δ/2 σ_z + A/2 cos(Ωt) σ_x`, i.e. `H_0 = −Δ/2 σ_z` and
    /// `H_{±1} = A/4 σ_x`.
    pub fn driven_spin_half(delta: f64, amplitude: f64, omega: f64) -> Result<Self> {
        let z = |x: f64| C64::new(x, 0.0);
        let h0 = CMatrix::from_row_slice(2, 2, &[z(-delta / 2.0), z(0.0), z(0.0), z(delta / 2.0)]);
        let drive = amplitude / 4.0;
        let h1 = CMatrix::from_row_slice(2, 2, &[z(0.0), z(drive), z(drive), z(0.0)]);
        Self::new(2, omega, [(0, h0), (1, h1.clone()), (-1, h1)])
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    pub fn dim_r(&self) -> usize {
        self.dim_r
    }

    /// Component `H_j`, or zero when absent.
    pub fn component(&self, j: i32) -> CMatrix {
        self.components
            .get(&j)
            .cloned()
            .unwrap_or_else(|| CMatrix::zeros(self.dim_r, self.dim_r))
    }

    pub fn harmonics(&self) -> impl Iterator<Item = i32> + '_ {
        self.components.keys().copied()
    }

    pub fn evaluate_at_time(&self, t: f64) -> DenseOperator {
        let mut h = CMatrix::zeros(self.dim_r, self.dim_r);
        for (&j, m) in &self.components {
            let phase = C64::from_polar(1.0, -(j as f64) * self.omega * t);
            h += m * phase;
        }
        DenseOperator::hermitian_symmetrized(h)
    }
}

/// Truncated extended-space Hamiltonian with blocks
/// `(j, k) = H_{j−k} − jΩ δ_{jk}` for `|j|, |k| ≤ j_max`.
///
/// Basis order is `|j⟩_T ⊗ |s⟩_R` with the T index `m = j + j_max`, so
/// flat row `m·dim_r + s`; `m = 0` is `j = −j_max`.
#[derive(Clone, Debug)]
pub struct ExtendedHamiltonian {
    matrix: DenseOperator,
    j_max: usize,
    omega: f64,
    dim_r: usize,
}

impl ExtendedHamiltonian {
    pub fn build(h: &FourierHamiltonian, j_max: usize) -> Self {
        let dim_r = h.dim_r();
        let blocks = 2 * j_max + 1;
        let mut m = CMatrix::zeros(blocks * dim_r, blocks * dim_r);
        for row in 0..blocks {
            for col in 0..blocks {
                let j = row as i32 - j_max as i32;
                let k = col as i32 - j_max as i32;
                let mut block = h.component(j - k);
                if j == k {
                    for s in 0..dim_r {
                        block[(s, s)] -= C64::new(j as f64 * h.omega(), 0.0);
                    }
                }
                m.view_mut((row * dim_r, col * dim_r), (dim_r, dim_r))
                    .copy_from(&block);
            }
        }
        Self {
            matrix: DenseOperator::hermitian_symmetrized(m),
            j_max,
            omega: h.omega(),
            dim_r,
        }
    }

    pub fn matrix(&self) -> &DenseOperator {
        &self.matrix
    }

    pub fn j_max(&self) -> usize {
        self.j_max
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn dim_r(&self) -> usize {
        self.dim_r
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Register `[2·j_max+1, dim_r]`; fails for `j_max = 0`, where the T
    /// factor is one-dimensional.
    pub fn register_shape(&self) -> Result<RegisterShape> {
        RegisterShape::new(vec![2 * self.j_max + 1, self.dim_r])
    }

    /// Harmonic index `j` of T-register level `m`.
    pub fn harmonic_of_level(&self, m: usize) -> i32 {
        m as i32 - self.j_max as i32
    }

    /// `H_eff²`, tagged hermitian.
    pub fn squared(&self) -> DenseOperator {
        let m = self.matrix.matrix();
        DenseOperator::hermitian_symmetrized(m * m)
    }

    /// Checks hermiticity and that every block matches `h`.
    pub fn verify(&self, h: &FourierHamiltonian) -> Result<()> {
        let residual = self.matrix.hermitian_residual();
        if residual > HERMITIAN_TOL {
            return Err(Error::NotHermitian(residual));
        }
        let rebuilt = Self::build(h, self.j_max);
        let diff = max_abs(&(rebuilt.matrix.matrix() - self.matrix.matrix()));
        if diff > HERMITIAN_TOL || self.dim_r != h.dim_r() {
            return Err(Error::InvalidArgument(format!(
                "extended Hamiltonian block structure deviates by {diff:.3e}"
            )));
        }
        Ok(())
    }
}
