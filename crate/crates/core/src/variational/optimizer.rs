use std::f64::consts::PI;

use rand::Rng;

use super::{gradient, GradientScheme, Objective};
use crate::error::{Error, Result};

const ARMIJO_C: f64 = 1e-4;
const SHRINK: f64 = 0.5;
const MAX_BACKTRACKS: usize = 40;
const FIXED_SCHEDULE: [f64; 4] = [1.0, 0.5, 0.25, 0.125];
/// Consecutive non-improving iterations tolerated under the fixed schedule.
const MAX_STALLS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LineSearch {
    /// Backtracking with the Armijo sufficient-increase test.
    #[default]
    Armijo,
    /// Best of a fixed set of trial steps; for noisy (sampled) losses.
    FixedSchedule,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerConfig {
    pub max_iters: usize,
    pub grad_norm_tol: f64,
    pub fd_step: f64,
    pub restarts: usize,
    pub seed: u64,
    pub scheme: GradientScheme,
    pub line_search: LineSearch,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            max_iters: 200,
            grad_norm_tol: 1e-5,
            fd_step: 1e-3,
            restarts: 8,
            seed: 0,
            scheme: GradientScheme::CentralDifference,
            line_search: LineSearch::Armijo,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidArgument(format!("optimizer {what} must be positive")));
        if self.max_iters == 0 {
            return bad("max_iters");
        }
        if self.restarts == 0 {
            return bad("restarts");
        }
        if self.grad_norm_tol.is_nan() || self.grad_norm_tol <= 0.0 {
            return bad("grad_norm_tol");
        }
        if self.fd_step.is_nan() || self.fd_step <= 0.0 {
            return bad("fd_step");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RestartReport {
    pub initial_theta: Vec<f64>,
    pub initial_loss: f64,
    pub final_loss: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub grad_norm: f64,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Maximum {
    pub theta: Vec<f64>,
    pub loss: f64,
    pub best_restart: usize,
    pub restarts: Vec<RestartReport>,
}

impl Maximum {
    pub fn converged(&self) -> bool {
        self.restarts[self.best_restart].converged
    }
}

struct Counting<'a, O: ?Sized> {
    inner: &'a mut O,
    calls: usize,
}

impl<O: Objective + ?Sized> Objective for Counting<'_, O> {
    fn n_params(&self) -> usize {
        self.inner.n_params()
    }
    fn occurrences(&self) -> usize {
        self.inner.occurrences()
    }
    fn evaluate_split(&mut self, thetas: &[&[f64]]) -> f64 {
        self.calls += 1;
        self.inner.evaluate_split(thetas)
    }
    fn shift_rule(&self, param: usize) -> Option<super::ShiftRule> {
        self.inner.shift_rule(param)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn step(x: &[f64], d: &[f64], alpha: f64) -> Vec<f64> {
    x.iter().zip(d).map(|(xi, di)| xi + alpha * di).collect()
}

/// Polak–Ribière conjugate-gradient ascent from `config.restarts` uniform
/// random starts in `[0, 2π)^n`; returns the best final iterate.
pub fn maximize<O, R>(objective: &mut O, config: &OptimizerConfig, rng: &mut R) -> Result<Maximum>
where
    O: Objective + ?Sized,
    R: Rng + ?Sized,
{
    config.validate()?;
    let n = objective.n_params();
    let mut best: Option<(Vec<f64>, f64, usize)> = None;
    let mut reports = Vec::with_capacity(config.restarts);
    for r in 0..config.restarts {
        let x0: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
        let (x, f, report) = ascend(objective, x0, config)?;
        if best.as_ref().is_none_or(|b| f > b.1) {
            best = Some((x, f, r));
        }
        reports.push(report);
    }
    let (theta, loss, best_restart) = best.expect("at least one restart");
    Ok(Maximum {
        theta,
        loss,
        best_restart,
        restarts: reports,
    })
}

fn ascend<O: Objective + ?Sized>(
    objective: &mut O,
    x0: Vec<f64>,
    config: &OptimizerConfig,
) -> Result<(Vec<f64>, f64, RestartReport)> {
    let mut obj = Counting {
        inner: objective,
        calls: 0,
    };
    let grad = |o: &mut Counting<O>, x: &[f64]| gradient(o, x, config.scheme, config.fd_step);

    let mut x = x0.clone();
    let mut f = obj.evaluate(&x);
    let initial_loss = f;
    let mut g = grad(&mut obj, &x)?;
    let mut d = g.clone();
    let mut alpha_prev = 1.0f64;
    let mut best = (x.clone(), f);
    let mut converged = false;
    let mut iterations = 0;
    let mut stalls = 0;

    while iterations < config.max_iters {
        let gnorm = dot(&g, &g).sqrt();
        if gnorm <= config.grad_norm_tol {
            converged = true;
            break;
        }
        iterations += 1;
        let mut slope = dot(&g, &d);
        let mut steepest = d == g;
        if slope <= 0.0 {
            d = g.clone();
            slope = gnorm * gnorm;
            steepest = true;
        }
        // No coordinate moves by more than π in one step.
        let dmax = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let cap = PI / dmax;

        let accepted = match config.line_search {
            LineSearch::Armijo => {
                let mut alpha = (2.0 * alpha_prev).min(cap);
                let mut found = None;
                for _ in 0..MAX_BACKTRACKS {
                    let xt = step(&x, &d, alpha);
                    let ft = obj.evaluate(&xt);
                    if ft >= f + ARMIJO_C * alpha * slope {
                        found = Some((xt, ft, alpha));
                        break;
                    }
                    alpha *= SHRINK;
                }
                found
            }
            LineSearch::FixedSchedule => {
                // Fresh estimate so a lucky draw at `x` does not block progress.
                f = obj.evaluate(&x);
                let base = (2.0 * alpha_prev).min(cap);
                FIXED_SCHEDULE
                    .iter()
                    .map(|&s| {
                        let xt = step(&x, &d, s * base);
                        let ft = obj.evaluate(&xt);
                        (xt, ft, s * base)
                    })
                    .max_by(|a, b| a.1.total_cmp(&b.1))
                    .filter(|t| t.1 >= f)
            }
        };

        let Some((xt, ft, alpha)) = accepted else {
            if !steepest {
                d = g.clone();
                continue;
            }
            match config.line_search {
                LineSearch::Armijo => break,
                LineSearch::FixedSchedule => {
                    stalls += 1;
                    if stalls >= MAX_STALLS {
                        break;
                    }
                    alpha_prev *= FIXED_SCHEDULE[FIXED_SCHEDULE.len() - 1];
                    continue;
                }
            }
        };
        stalls = 0;
        x = xt;
        f = ft;
        alpha_prev = alpha;
        if f > best.1 || config.line_search == LineSearch::FixedSchedule {
            best = (x.clone(), f);
        }
        let g_new = grad(&mut obj, &x)?;
        let gg = dot(&g, &g);
        let beta = if gg > 0.0 {
            (dot(&g_new, &g_new) - dot(&g_new, &g)) / gg
        } else {
            0.0
        }
        .max(0.0);
        d = g_new.iter().zip(&d).map(|(gn, di)| gn + beta * di).collect();
        g = g_new;
    }

    let report = RestartReport {
        initial_theta: x0,
        initial_loss,
        final_loss: best.1,
        iterations,
        evaluations: obj.calls,
        grad_norm: dot(&g, &g).sqrt(),
        converged,
    };
    Ok((best.0, best.1, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use crate::variational::FnObjective;

    fn bowl() -> FnObjective<impl FnMut(&[f64]) -> f64> {
        FnObjective::new(3, |t: &[f64]| -t.iter().map(|x| (x - 1.0).powi(2)).sum::<f64>())
    }

    #[test]
    fn quadratic_bowl_reaches_center() {
        let cfg = OptimizerConfig {
            restarts: 2,
            ..Default::default()
        };
        let m = maximize(&mut bowl(), &cfg, &mut substream(1, 0)).unwrap();
        for x in &m.theta {
            assert!((x - 1.0).abs() < 1e-4, "{:?}", m.theta);
        }
        assert!(m.converged());
    }

    #[test]
    fn more_restarts_never_worse() {
        let mut f = FnObjective::new(2, |t: &[f64]| (3.0 * t[0]).sin() * t[1].cos() + 0.1 * t[0].cos());
        let one = OptimizerConfig {
            restarts: 1,
            ..Default::default()
        };
        let eight = OptimizerConfig {
            restarts: 8,
            ..Default::default()
        };
        let a = maximize(&mut f, &one, &mut substream(9, 0)).unwrap();
        let b = maximize(&mut f, &eight, &mut substream(9, 0)).unwrap();
        // Same stream: the first start of `eight` is the start of `one`.
        assert!(b.loss >= a.loss);
        assert_eq!(b.restarts[0].initial_theta, a.restarts[0].initial_theta);
    }

    #[test]
    fn never_below_initial_losses() {
        let mut f = FnObjective::new(2, |t: &[f64]| (2.0 * t[0]).cos() + (t[0] - t[1]).sin());
        let m = maximize(&mut f, &OptimizerConfig::default(), &mut substream(4, 0)).unwrap();
        let lowest_start = m
            .restarts
            .iter()
            .map(|r| r.initial_loss)
            .fold(f64::INFINITY, f64::min);
        assert!(m.loss >= lowest_start);
        for r in &m.restarts {
            assert!(r.final_loss >= r.initial_loss);
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let a = maximize(&mut bowl(), &OptimizerConfig::default(), &mut substream(2, 0)).unwrap();
        let b = maximize(&mut bowl(), &OptimizerConfig::default(), &mut substream(2, 0)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn fixed_schedule_climbs_noisy_loss() {
        let mut noise = substream(8, 1);
        let mut f = FnObjective::new(2, move |t: &[f64]| {
            let n: f64 = noise.random_range(-1e-3..1e-3);
            t[0].cos() + t[1].cos() + n
        });
        let cfg = OptimizerConfig {
            restarts: 2,
            fd_step: 0.1,
            line_search: LineSearch::FixedSchedule,
            ..Default::default()
        };
        let m = maximize(&mut f, &cfg, &mut substream(8, 0)).unwrap();
        assert!(m.loss > 1.95, "{}", m.loss);
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = OptimizerConfig {
            restarts: 0,
            ..Default::default()
        };
        assert!(maximize(&mut bowl(), &cfg, &mut substream(0, 0)).is_err());
    }
}
