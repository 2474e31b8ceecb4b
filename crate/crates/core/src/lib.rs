//! Statevector simulation and hybrid variational solvers for Floquet
//! quasi-energy band structures of periodically driven quantum systems.
//!
//! Two solvers are provided:
//!
//! * [`fz1`] maximizes the one-period return probability of a
//!   parameterized state, deflates found states, and reads the quasi-energy
//!   with iterative phase estimation on the one-period propagator.
//! * [`fz2`] runs an excited-state eigensolver on the square of the
//!   truncated Fourier-space (Sambe) Hamiltonian.
//!
//! [`oracle`] provides exact classical references for both, and
//! [`harness`] drives amplitude sweeps and writes CSV/SVG output.

pub mod error;
pub mod evolution;
pub mod fz1;
pub mod fz2;
pub mod harness;
pub mod model;
pub mod oracle;
pub mod qsim;
pub mod rng;
pub mod variational;

pub use error::{Error, Result};
