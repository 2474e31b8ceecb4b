//! Shared variational machinery: parameterized circuits, gradients,
//! Polak–Ribière conjugate-gradient ascent and deflation penalties.

mod circuit;
mod deflation;
mod gradient;
mod optimizer;

pub use circuit::{ExponentSign, Gate, ParameterizedCircuit, ShiftRule};
pub use deflation::{deflation_overlaps, deflation_penalty, BoundCircuit, DeflationSet};
pub use gradient::{gradient, FnObjective, GradientScheme, Objective};
pub use optimizer::{maximize, LineSearch, Maximum, OptimizerConfig, RestartReport};
