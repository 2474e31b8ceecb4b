//! Exact classical references: monodromy eigenphases, the truncated
//! extended-space spectrum, Brillouin-zone folding and mode fidelities.

use nalgebra::linalg::Schur;

use crate::error::{Error, Result};
use crate::evolution::{trotter_monodromy, MonodromyOperator};
use crate::model::{ExtendedHamiltonian, FourierHamiltonian};
use crate::qsim::CVector;

pub const DEFAULT_FINE_STEPS: usize = 100_000;
pub const MIN_FINE_STEPS: usize = 10_000;
/// Eigenphases closer than this (radians, on the circle) are flagged
/// degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Folds `eps` into `[−Ω/2, Ω/2)`.
pub fn fold_to_bz(eps: f64, omega: f64) -> Result<f64> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::NonPositiveFrequency(omega));
    }
    if !eps.is_finite() {
        return Err(Error::InvalidArgument(format!("cannot fold {eps}")));
    }
    let half = omega / 2.0;
    if (-half..half).contains(&eps) {
        return Ok(eps);
    }
    let mut r = eps - omega * ((eps + half) / omega).floor();
    if r >= half {
        r -= omega;
    }
    if r < -half {
        r += omega;
    }
    Ok(r)
}

/// Quasi-energies folded to the first zone, ascending, with the matching
/// `t = 0` Floquet modes.
#[derive(Clone, Debug)]
pub struct QuasiEnergySpectrum {
    pub energies: Vec<f64>,
    pub modes: Vec<CVector>,
    pub omega: f64,
    /// Set when two eigenphases coincide within [`DEGENERACY_TOL`]; the
    /// modes are then one orthonormal choice within the degenerate space.
    pub degenerate: bool,
}

impl QuasiEnergySpectrum {
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }
}

/// Quasi-energies of `h` from a fine time-sliced propagator.
pub fn exact_quasienergies(h: &FourierHamiltonian, fine_steps: usize) -> Result<QuasiEnergySpectrum> {
    if fine_steps < MIN_FINE_STEPS {
        return Err(Error::InvalidArgument(format!(
            "oracle needs at least {MIN_FINE_STEPS} time slices, got {fine_steps}"
        )));
    }
    let m = trotter_monodromy(h, fine_steps)?;
    monodromy_spectrum(&m, h.omega())
}

/// Eigen-decomposition of a one-period propagator: eigenvalue `e^{iθ}`
/// maps to `ε = fold(−θ/T)`.
pub fn monodromy_spectrum(m: &MonodromyOperator, omega: f64) -> Result<QuasiEnergySpectrum> {
    let (q, t) = Schur::new(m.operator().matrix().clone()).unpack();
    let dim = m.dim();
    let phases: Vec<f64> = (0..dim).map(|k| t[(k, k)].arg()).collect();
    let mut pairs = Vec::with_capacity(dim);
    for (k, &theta) in phases.iter().enumerate() {
        let eps = fold_to_bz(-theta / m.period(), omega)?;
        pairs.push((eps, q.column(k).into_owned()));
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut degenerate = false;
    for a in 0..dim {
        for b in a + 1..dim {
            let d = (phases[a] - phases[b]).rem_euclid(2.0 * std::f64::consts::PI);
            if d.min(2.0 * std::f64::consts::PI - d) < DEGENERACY_TOL {
                degenerate = true;
            }
        }
    }
    let (energies, modes) = pairs.into_iter().unzip();
    Ok(QuasiEnergySpectrum {
        energies,
        modes,
        omega,
        degenerate,
    })
}

/// Full eigendecomposition of the truncated extended Hamiltonian, ascending.
pub fn truncated_exact_spectrum(h: &FourierHamiltonian, j_max: usize) -> Vec<(f64, CVector)> {
    let heff = ExtendedHamiltonian::build(h, j_max);
    let spectrum = heff
        .matrix()
        .spectrum()
        .expect("extended Hamiltonian is tagged hermitian");
    spectrum
        .values
        .iter()
        .enumerate()
        .map(|(k, &v)| (v, spectrum.vector(k)))
        .collect()
}

/// The two truncated eigenvalues nearest zero, folded and sorted.
pub fn central_pair(truncated: &[(f64, CVector)], omega: f64) -> Result<[f64; 2]> {
    let mut by_size: Vec<f64> = truncated.iter().map(|(v, _)| *v).collect();
    if by_size.len() < 2 {
        return Err(Error::InvalidArgument("need at least two eigenvalues".into()));
    }
    by_size.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    let mut pair = [fold_to_bz(by_size[0], omega)?, fold_to_bz(by_size[1], omega)?];
    pair.sort_by(f64::total_cmp);
    Ok(pair)
}

/// Best `|⟨v_k|candidate⟩|²` over a set of orthonormal vectors, after
/// normalizing the candidate.
pub fn best_overlap<'a>(
    candidate: &CVector,
    vectors: impl IntoIterator<Item = &'a CVector>,
) -> Result<(usize, f64)> {
    let norm = candidate.norm();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::ZeroNorm);
    }
    let mut best = (0, -1.0);
    for (k, v) in vectors.into_iter().enumerate() {
        if v.len() != candidate.len() {
            return Err(Error::DimensionMismatch {
                expected: v.len(),
                actual: candidate.len(),
            });
        }
        let f = (v.dotc(candidate).norm_sqr() / (norm * norm)).min(1.0);
        if f > best.1 {
            best = (k, f);
        }
    }
    Ok(best)
}

/// `(argmax_α, max_α |⟨mode_α|candidate⟩|²)`.
pub fn mode_fidelity(candidate: &CVector, spectrum: &QuasiEnergySpectrum) -> Result<(usize, f64)> {
    best_overlap(candidate, &spectrum.modes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::C64;

    #[test]
    fn folding_examples() {
        assert!((fold_to_bz(3.0, 2.5).unwrap() - 0.5).abs() < 1e-15);
        assert!((fold_to_bz(-1.3, 2.5).unwrap() - 1.2).abs() < 1e-15);
        assert_eq!(fold_to_bz(1.25, 2.5).unwrap(), -1.25);
        assert_eq!(fold_to_bz(-1.25, 2.5).unwrap(), -1.25);
        assert_eq!(fold_to_bz(0.3, 0.0).unwrap_err(), Error::NonPositiveFrequency(0.0));
        assert!(fold_to_bz(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn undriven_quasienergies() {
        let h = FourierHamiltonian::driven_spin_half(1.0, 0.0, 2.5).unwrap();
        let s = exact_quasienergies(&h, MIN_FINE_STEPS).unwrap();
        assert!((s.energies[0] + 0.5).abs() < 1e-12);
        assert!((s.energies[1] - 0.5).abs() < 1e-12);
        assert!(!s.degenerate);
        // ε = −0.5 is spin up, |0⟩.
        assert!((s.modes[0][0].norm() - 1.0).abs() < 1e-12);
        let up = CVector::from_vec(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
        let (branch, f) = mode_fidelity(&up, &s).unwrap();
        assert_eq!(branch, 1);
        assert!((f - 1.0).abs() < 1e-12);
        assert!(exact_quasienergies(&h, 100).is_err());
    }

    #[test]
    fn fidelity_rejects_zero_candidate() {
        let h = FourierHamiltonian::driven_spin_half(1.0, 0.0, 2.5).unwrap();
        let s = exact_quasienergies(&h, MIN_FINE_STEPS).unwrap();
        assert_eq!(mode_fidelity(&CVector::zeros(2), &s).unwrap_err(), Error::ZeroNorm);
        // Any vector has fidelity ≥ 1/dim with a complete basis.
        let v = CVector::from_vec(vec![C64::new(0.3, 0.1), C64::new(-0.2, 0.7)]);
        assert!(mode_fidelity(&v, &s).unwrap().1 >= 0.5);
    }

    #[test]
    fn undriven_truncated_ladder() {
        let h = FourierHamiltonian::driven_spin_half(1.0, 0.0, 2.5).unwrap();
        let values: Vec<f64> = truncated_exact_spectrum(&h, 1).into_iter().map(|p| p.0).collect();
        for (v, e) in values.iter().zip([-3.0, -2.0, -0.5, 0.5, 2.0, 3.0]) {
            assert!((v - e).abs() < 1e-12);
        }
        let pair = central_pair(&truncated_exact_spectrum(&h, 1), 2.5).unwrap();
        assert!((pair[0] + 0.5).abs() < 1e-12 && (pair[1] - 0.5).abs() < 1e-12);
    }
}
