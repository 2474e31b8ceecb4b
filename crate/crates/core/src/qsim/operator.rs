use std::sync::{Arc, OnceLock};

use nalgebra::linalg::SymmetricEigen;

use super::{max_abs, CMatrix, CVector, C64, HERMITIAN_TOL, UNITARY_TOL};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    Hermitian,
    Unitary,
    General,
}

/// Eigendecomposition of a hermitian operator, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianSpectrum {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: CMatrix,
}

impl HermitianSpectrum {
    pub fn of(matrix: &CMatrix) -> Self {
        let eig = SymmetricEigen::new(matrix.clone());
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = CMatrix::from_columns(
            &order
                .iter()
                .map(|&k| eig.eigenvectors.column(k).into_owned())
                .collect::<Vec<_>>(),
        );
        Self { values, vectors }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, k: usize) -> CVector {
        self.vectors.column(k).into_owned()
    }

    /// `exp(i·scale·M)` rebuilt from the stored eigenpairs.
    pub fn exp_i(&self, scale: f64) -> CMatrix {
        let mut scaled = self.vectors.clone();
        for (k, &lambda) in self.values.iter().enumerate() {
            let phase = C64::from_polar(1.0, scale * lambda);
            for z in scaled.column_mut(k).iter_mut() {
                *z *= phase;
            }
        }
        &scaled * self.vectors.adjoint()
    }
}

/// Square complex matrix with a verified structural tag.
///
/// The eigendecomposition of a hermitian operator is computed once on first
/// use and shared by clones.
#[derive(Clone, Debug)]
pub struct DenseOperator {
    matrix: CMatrix,
    kind: OperatorKind,
    spectrum: OnceLock<Arc<HermitianSpectrum>>,
}

impl DenseOperator {
    fn tagged(matrix: CMatrix, kind: OperatorKind) -> Self {
        Self {
            matrix,
            kind,
            spectrum: OnceLock::new(),
        }
    }

    fn check_square(matrix: &CMatrix) -> Result<()> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                actual: matrix.ncols(),
            });
        }
        Ok(())
    }

    pub fn hermitian(matrix: CMatrix) -> Result<Self> {
        Self::check_square(&matrix)?;
        let residual = hermitian_residual(&matrix);
        if residual > HERMITIAN_TOL {
            return Err(Error::NotHermitian(residual));
        }
        Ok(Self::tagged(matrix, OperatorKind::Hermitian))
    }

    /// Tags `(M + M†)/2` as hermitian. For matrices that are hermitian up to
    /// rounding by construction.
    pub(crate) fn hermitian_symmetrized(matrix: CMatrix) -> Self {
        let sym = (&matrix + matrix.adjoint()) * C64::new(0.5, 0.0);
        Self::tagged(sym, OperatorKind::Hermitian)
    }

    pub fn unitary(matrix: CMatrix) -> Result<Self> {
        Self::check_square(&matrix)?;
        let residual = unitary_residual(&matrix);
        if residual > UNITARY_TOL {
            return Err(Error::NotUnitary(residual));
        }
        Ok(Self::tagged(matrix, OperatorKind::Unitary))
    }

    pub(crate) fn unitary_unchecked(matrix: CMatrix) -> Self {
        debug_assert!(unitary_residual(&matrix) <= 1e-8);
        Self::tagged(matrix, OperatorKind::Unitary)
    }

    pub fn general(matrix: CMatrix) -> Result<Self> {
        Self::check_square(&matrix)?;
        Ok(Self::tagged(matrix, OperatorKind::General))
    }

    pub fn identity(dim: usize) -> Self {
        Self::tagged(CMatrix::identity(dim, dim), OperatorKind::Unitary)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn hermitian_residual(&self) -> f64 {
        hermitian_residual(&self.matrix)
    }

    pub fn unitary_residual(&self) -> f64 {
        unitary_residual(&self.matrix)
    }

    pub fn adjoint(&self) -> Self {
        Self::tagged(self.matrix.adjoint(), self.kind)
    }

    /// Matrix product `self · rhs`; unitary if both factors are.
    pub fn compose(&self, rhs: &DenseOperator) -> Result<Self> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: rhs.dim(),
            });
        }
        let kind = match (self.kind, rhs.kind) {
            (OperatorKind::Unitary, OperatorKind::Unitary) => OperatorKind::Unitary,
            _ => OperatorKind::General,
        };
        Ok(Self::tagged(&self.matrix * &rhs.matrix, kind))
    }

    /// Tensor product `self ⊗ rhs`, tag kept when both share it.
    pub fn kron(&self, rhs: &DenseOperator) -> Self {
        let kind = if self.kind == rhs.kind {
            self.kind
        } else {
            OperatorKind::General
        };
        Self::tagged(self.matrix.kronecker(&rhs.matrix), kind)
    }

    /// Cached eigendecomposition; only available for hermitian operators.
    pub fn spectrum(&self) -> Result<&HermitianSpectrum> {
        if self.kind != OperatorKind::Hermitian {
            return Err(Error::HermitianTagRequired);
        }
        Ok(self
            .spectrum
            .get_or_init(|| Arc::new(HermitianSpectrum::of(&self.matrix))))
    }
}

impl PartialEq for DenseOperator {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.matrix == other.matrix
    }
}

fn hermitian_residual(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

fn unitary_residual(m: &CMatrix) -> f64 {
    let n = m.nrows();
    max_abs(&(m.adjoint() * m - CMatrix::identity(n, n)))
}

/// `exp(i·scale·gen)` for a hermitian generator.
pub fn matrix_exponential(gen: &DenseOperator, scale: f64) -> Result<DenseOperator> {
    let spectrum = gen.spectrum()?;
    Ok(DenseOperator::unitary_unchecked(spectrum.exp_i(scale)))
}
