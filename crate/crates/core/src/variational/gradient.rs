use super::ShiftRule;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum GradientScheme {
    #[default]
    CentralDifference,
    /// Exact two-term rule; requires a [`ShiftRule`] for every parameter.
    ParameterShift,
}

/// A scalar loss over a parameter vector.
///
/// A loss may feed the same parameters into several gates of its measured
/// circuits (for example `U(θ)†` and `U(θ)` in a return-overlap circuit).
/// `evaluate_split` receives one parameter vector per such occurrence so
/// the parameter-shift rule can shift each occurrence separately.
pub trait Objective {
    fn n_params(&self) -> usize;

    fn occurrences(&self) -> usize {
        1
    }

    fn evaluate_split(&mut self, thetas: &[&[f64]]) -> f64;

    fn evaluate(&mut self, theta: &[f64]) -> f64 {
        let copies = vec![theta; self.occurrences()];
        self.evaluate_split(&copies)
    }

    fn shift_rule(&self, _param: usize) -> Option<ShiftRule> {
        None
    }
}

/// Closure-backed objective with a single parameter occurrence.
pub struct FnObjective<F> {
    n_params: usize,
    f: F,
    rules: Vec<Option<ShiftRule>>,
}

impl<F: FnMut(&[f64]) -> f64> FnObjective<F> {
    pub fn new(n_params: usize, f: F) -> Self {
        Self {
            n_params,
            f,
            rules: vec![None; n_params],
        }
    }

    pub fn with_shift_rules(mut self, rules: Vec<Option<ShiftRule>>) -> Self {
        self.rules = rules;
        self
    }
}

impl<F: FnMut(&[f64]) -> f64> Objective for FnObjective<F> {
    fn n_params(&self) -> usize {
        self.n_params
    }

    fn evaluate_split(&mut self, thetas: &[&[f64]]) -> f64 {
        (self.f)(thetas[0])
    }

    fn shift_rule(&self, param: usize) -> Option<ShiftRule> {
        self.rules.get(param).copied().flatten()
    }
}

pub fn gradient<O: Objective + ?Sized>(
    objective: &mut O,
    theta: &[f64],
    scheme: GradientScheme,
    fd_step: f64,
) -> Result<Vec<f64>> {
    let n = objective.n_params();
    if theta.len() != n {
        return Err(Error::ParameterCount {
            expected: n,
            actual: theta.len(),
        });
    }
    match scheme {
        GradientScheme::CentralDifference => {
            if fd_step.is_nan() || fd_step <= 0.0 {
                return Err(Error::InvalidArgument("finite-difference step must be positive".into()));
            }
            let mut shifted = theta.to_vec();
            let mut grad = Vec::with_capacity(n);
            for i in 0..n {
                shifted[i] = theta[i] + fd_step;
                let up = objective.evaluate(&shifted);
                shifted[i] = theta[i] - fd_step;
                let down = objective.evaluate(&shifted);
                shifted[i] = theta[i];
                grad.push((up - down) / (2.0 * fd_step));
            }
            Ok(grad)
        }
        GradientScheme::ParameterShift => {
            let rules = (0..n)
                .map(|i| objective.shift_rule(i).ok_or(Error::ShiftRuleUnavailable(i)))
                .collect::<Result<Vec<_>>>()?;
            let copies = objective.occurrences();
            let mut grad = vec![0.0; n];
            for (i, rule) in rules.iter().enumerate() {
                for occ in 0..copies {
                    let mut shifted = theta.to_vec();
                    shifted[i] = theta[i] + rule.shift;
                    let up = eval_with(objective, theta, &shifted, occ);
                    shifted[i] = theta[i] - rule.shift;
                    let down = eval_with(objective, theta, &shifted, occ);
                    grad[i] += rule.coefficient * (up - down);
                }
            }
            Ok(grad)
        }
    }
}

fn eval_with<O: Objective + ?Sized>(objective: &mut O, base: &[f64], shifted: &[f64], occ: usize) -> f64 {
    let copies: Vec<&[f64]> = (0..objective.occurrences())
        .map(|k| if k == occ { shifted } else { base })
        .collect();
    objective.evaluate_split(&copies)
}
