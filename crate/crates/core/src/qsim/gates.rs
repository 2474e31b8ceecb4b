use super::{c, CMatrix, DenseOperator};

fn from_rows(dim: usize, entries: &[(f64, f64)]) -> CMatrix {
    let data: Vec<_> = entries.iter().map(|&(re, im)| c(re, im)).collect();
    CMatrix::from_row_slice(dim, dim, &data)
}

pub fn identity(dim: usize) -> DenseOperator {
    DenseOperator::identity(dim)
}

pub fn pauli_x() -> DenseOperator {
    DenseOperator::hermitian(from_rows(2, &[(0., 0.), (1., 0.), (1., 0.), (0., 0.)])).unwrap()
}

pub fn pauli_y() -> DenseOperator {
    DenseOperator::hermitian(from_rows(2, &[(0., 0.), (0., -1.), (0., 1.), (0., 0.)])).unwrap()
}

pub fn pauli_z() -> DenseOperator {
    DenseOperator::hermitian(from_rows(2, &[(1., 0.), (0., 0.), (0., 0.), (-1., 0.)])).unwrap()
}

pub fn hadamard() -> DenseOperator {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    DenseOperator::unitary(from_rows(2, &[(h, 0.), (h, 0.), (h, 0.), (-h, 0.)])).unwrap()
}

/// `diag(1, e^{iω})`.
pub fn phase_gate(omega: f64) -> DenseOperator {
    DenseOperator::unitary(from_rows(
        2,
        &[(1., 0.), (0., 0.), (0., 0.), (omega.cos(), omega.sin())],
    ))
    .unwrap()
}

/// Generic single-qubit rotation
/// `[[cos(θ/2), −e^{iν} sin(θ/2)], [e^{iφ} sin(θ/2), e^{i(φ+ν)} cos(θ/2)]]`.
pub fn u3_matrix(theta: f64, phi: f64, nu: f64) -> DenseOperator {
    let (s, co) = (theta / 2.0).sin_cos();
    let m = from_rows(
        2,
        &[
            (co, 0.0),
            (-s * nu.cos(), -s * nu.sin()),
            (s * phi.cos(), s * phi.sin()),
            (co * (phi + nu).cos(), co * (phi + nu).sin()),
        ],
    );
    DenseOperator::unitary_unchecked(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::max_abs;
    use std::f64::consts::PI;

    fn close(a: &DenseOperator, b: &DenseOperator) -> bool {
        max_abs(&(a.matrix() - b.matrix())) < 1e-12
    }

    #[test]
    fn u3_special_points() {
        assert!(close(&u3_matrix(0.0, 0.0, 0.0), &identity(2)));
        let x = u3_matrix(PI, 0.0, PI);
        assert!(max_abs(&(x.matrix() - pauli_x().matrix())) < 1e-12);
        let h = u3_matrix(PI / 2.0, 0.0, PI);
        assert!(close(&h, &hadamard()));
    }

    #[test]
    fn u3_is_unitary_everywhere() {
        for k in 0..50 {
            let t = k as f64 * 0.37;
            let u = u3_matrix(t, 1.3 * t, -0.7 * t);
            assert!(u.unitary_residual() < 1e-12);
        }
    }
}
