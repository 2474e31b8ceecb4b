use floquet_core::oracle::fold_to_bz;
use floquet_core::qsim::{
    apply_operator, embed_operator, matrix_exponential, CMatrix, DenseOperator, RegisterShape,
    StateVector, C64,
};
use proptest::prelude::*;

fn hermitian(values: &[f64], n: usize) -> DenseOperator {
    let mut m = CMatrix::zeros(n, n);
    let mut it = values.iter().copied().cycle();
    for i in 0..n {
        m[(i, i)] = C64::new(it.next().unwrap(), 0.0);
        for j in i + 1..n {
            let z = C64::new(it.next().unwrap(), it.next().unwrap());
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    DenseOperator::hermitian(m).unwrap()
}

fn state(shape: &RegisterShape, values: &[f64]) -> StateVector {
    let n = shape.total_dim();
    let amps = (0..n).map(|k| C64::new(values[(2 * k) % values.len()], values[(2 * k + 1) % values.len()] + 0.1));
    StateVector::from_amplitudes(shape, floquet_core::qsim::CVector::from_iterator(n, amps)).unwrap()
}

proptest! {
    #[test]
    fn fold_is_idempotent_and_in_zone(e in -1e3f64..1e3, omega in 0.1f64..10.0) {
        let f = fold_to_bz(e, omega).unwrap();
        prop_assert!(f >= -omega / 2.0 && f < omega / 2.0);
        prop_assert_eq!(fold_to_bz(f, omega).unwrap(), f);
        let k = ((e - f) / omega).round();
        prop_assert!((e - f - k * omega).abs() < 1e-9 * (1.0 + e.abs()));
    }

    #[test]
    fn unitary_evolution_preserves_norm(values in prop::collection::vec(-2.0f64..2.0, 12), t in -3.0f64..3.0) {
        let shape = RegisterShape::new(vec![3, 2]).unwrap();
        let u = matrix_exponential(&hermitian(&values, 3), t).unwrap();
        let psi = state(&shape, &values);
        let out = apply_operator(&psi, &u, &[0]).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
        prop_assert!(u.unitary_residual() < 1e-10);
    }

    #[test]
    fn sequential_application_equals_composition(a in prop::collection::vec(-1.0f64..1.0, 8), b in prop::collection::vec(-1.0f64..1.0, 8)) {
        let shape = RegisterShape::new(vec![2, 2]).unwrap();
        let ua = matrix_exponential(&hermitian(&a, 4), 0.7).unwrap();
        let ub = matrix_exponential(&hermitian(&b, 4), -1.3).unwrap();
        let psi = state(&shape, &a);
        let seq = apply_operator(&apply_operator(&psi, &ub, &[0, 1]).unwrap(), &ua, &[0, 1]).unwrap();
        let once = apply_operator(&psi, &ua.compose(&ub).unwrap(), &[0, 1]).unwrap();
        prop_assert!((seq.amplitudes() - once.amplitudes()).norm() < 1e-12);
    }

    #[test]
    fn embedding_follows_kronecker_order(a in prop::collection::vec(-1.0f64..1.0, 9), b in prop::collection::vec(-1.0f64..1.0, 4)) {
        // Subsystem 0 (dim 3) is the slow factor.
        let shape = RegisterShape::new(vec![3, 2]).unwrap();
        let ha = hermitian(&a, 3);
        let hb = hermitian(&b, 2);
        let on_first = embed_operator(&shape, &ha, &[0]).unwrap();
        let on_second = embed_operator(&shape, &hb, &[1]).unwrap();
        prop_assert!((on_first - ha.matrix().kronecker(&CMatrix::identity(2, 2))).norm() < 1e-14);
        prop_assert!((on_second - CMatrix::identity(3, 3).kronecker(hb.matrix())).norm() < 1e-14);
        let both = embed_operator(&shape, &ha.kron(&hb), &[0, 1]).unwrap();
        prop_assert!((both - ha.matrix().kronecker(hb.matrix())).norm() < 1e-14);
        // Reversed targets swap the factor order.
        let swapped = RegisterShape::new(vec![2, 3]).unwrap();
        let rev = embed_operator(&swapped, &ha.kron(&hb), &[1, 0]).unwrap();
        prop_assert!((rev - hb.matrix().kronecker(ha.matrix())).norm() < 1e-14);
    }
}
