//! Reference computations that share no code with the library.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64 as C;

pub type M2 = [[C; 2]; 2];

pub fn mul(a: &M2, b: &M2) -> M2 {
    let mut out = [[C::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn axpy(a: &M2, s: f64, b: &M2) -> M2 {
    let mut out = *a;
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] += b[i][j] * s;
        }
    }
    out
}

/// `−i H(t) U` for `H(t) = −Δ/2 σz + A/2 cos(Ωt) σx`.
fn rhs(delta: f64, amp: f64, omega: f64, t: f64, u: &M2) -> M2 {
    let x = 0.5 * amp * (omega * t).cos();
    let h = [[C::new(-0.5 * delta, 0.0), C::new(x, 0.0)], [C::new(x, 0.0), C::new(0.5 * delta, 0.0)]];
    let hu = mul(&h, u);
    let mut out = hu;
    for row in out.iter_mut() {
        for v in row.iter_mut() {
            *v *= C::new(0.0, -1.0);
        }
    }
    out
}

/// Classical fourth-order Runge–Kutta propagator over one period.
pub fn rk4_period(delta: f64, amp: f64, omega: f64, steps: usize) -> M2 {
    let period = 2.0 * PI / omega;
    let dt = period / steps as f64;
    let one = C::new(1.0, 0.0);
    let zero = C::new(0.0, 0.0);
    let mut u = [[one, zero], [zero, one]];
    for k in 0..steps {
        let t = k as f64 * dt;
        let k1 = rhs(delta, amp, omega, t, &u);
        let k2 = rhs(delta, amp, omega, t + dt / 2.0, &axpy(&u, dt / 2.0, &k1));
        let k3 = rhs(delta, amp, omega, t + dt / 2.0, &axpy(&u, dt / 2.0, &k2));
        let k4 = rhs(delta, amp, omega, t + dt, &axpy(&u, dt, &k3));
        for i in 0..2 {
            for j in 0..2 {
                u[i][j] += (k1[i][j] + k2[i][j] * 2.0 + k3[i][j] * 2.0 + k4[i][j]) * (dt / 6.0);
            }
        }
    }
    u
}

/// Eigenvalues of a 2×2 matrix from the characteristic polynomial.
pub fn eigenvalues(m: &M2) -> [C; 2] {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = (tr * tr - det * 4.0).sqrt();
    [(tr + disc) / 2.0, (tr - disc) / 2.0]
}

/// Folds into `[−Ω/2, Ω/2)`.
pub fn fold(e: f64, omega: f64) -> f64 {
    (e + omega / 2.0).rem_euclid(omega) - omega / 2.0
}

/// Sorted quasi-energies `−arg(λ)/T` of a one-period propagator.
pub fn quasienergies(u: &M2, omega: f64) -> [f64; 2] {
    let period = 2.0 * PI / omega;
    let mut e = eigenvalues(u).map(|z| fold(-z.arg() / period, omega));
    e.sort_by(f64::total_cmp);
    e
}

/// Hand-written truncated extended Hamiltonian of the driven spin for
/// `j_max = 1`, rows `m·2 + s` with `m = 0` the `j = −1` harmonic.
pub fn heff_6x6(delta: f64, amp: f64, omega: f64) -> [[f64; 6]; 6] {
    let mut h = [[0.0; 6]; 6];
    for m in 0..3 {
        let j = m as f64 - 1.0;
        h[2 * m][2 * m] = -0.5 * delta - j * omega;
        h[2 * m + 1][2 * m + 1] = 0.5 * delta - j * omega;
    }
    // Neighbouring harmonics couple through A/4 σx.
    for m in 0..2 {
        let c = 0.25 * amp;
        h[2 * m][2 * (m + 1) + 1] = c;
        h[2 * m + 1][2 * (m + 1)] = c;
        h[2 * (m + 1) + 1][2 * m] = c;
        h[2 * (m + 1)][2 * m + 1] = c;
    }
    h
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues<const N: usize>(mut a: [[f64; N]; N]) -> [f64; N] {
    for _ in 0..100 {
        let off: f64 = (0..N).flat_map(|i| (0..N).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-26 {
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..N {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut d = [0.0; N];
    for i in 0..N {
        d[i] = a[i][i];
    }
    d.sort_by(f64::total_cmp);
    d
}
