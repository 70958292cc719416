//! Implicit filtering: central-difference stencils over a shrinking scale
//! sequence, quasi-Newton directions within a scale and a short
//! backtracking line search.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ImFilConfig {
    /// Maximum objective evaluations; `None` means `10 * dim * (2 dim + 1)`.
    pub budget: Option<usize>,
    /// Stencil step sizes, strictly decreasing.
    pub scales: Vec<f64>,
    /// Stencil failures tolerated at one scale before moving to the next.
    pub stencil_failure_limit: usize,
    /// A scale also ends once the stencil gradient norm drops below
    /// `tolerance * h`.
    pub tolerance: f64,
    /// Step halvings tried by the line search.
    pub line_search_steps: usize,
}

impl Default for ImFilConfig {
    fn default() -> Self {
        Self {
            budget: None,
            scales: (1..=8).map(|k| std::f64::consts::PI / f64::from(1u32 << k)).collect(),
            stencil_failure_limit: 1,
            tolerance: 1e-3,
            line_search_steps: 3,
        }
    }
}

impl ImFilConfig {
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = Some(budget);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.scales.is_empty() {
            return Err(Error::Config("no stencil scales".into()));
        }
        if self.scales.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
            return Err(Error::Config("stencil scales must be positive".into()));
        }
        if self.scales.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Config("stencil scales must be strictly decreasing".into()));
        }
        if self.stencil_failure_limit == 0 {
            return Err(Error::Config("stencil_failure_limit must be at least 1".into()));
        }
        if self.tolerance.is_nan() || self.tolerance < 0.0 {
            return Err(Error::Config("tolerance must be non-negative".into()));
        }
        Ok(())
    }

    pub fn budget_for(&self, dim: usize) -> usize {
        self.budget.unwrap_or(10 * dim.max(1) * (2 * dim + 1))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImFilResult {
    pub theta: Vec<f64>,
    pub f_min: f64,
    /// `(iteration, best value)` after each accepted move.
    pub trace: Vec<(usize, f64)>,
    pub iterations: usize,
    pub evaluations: usize,
    /// The evaluation budget ran out before the last scale finished.
    pub truncated: bool,
}

struct Counted<F> {
    f: F,
    used: usize,
    budget: usize,
}

impl<F: FnMut(&[f64]) -> Result<f64>> Counted<F> {
    /// `None` once the budget is spent.
    fn eval(&mut self, x: &[f64]) -> Result<Option<f64>> {
        if self.used >= self.budget {
            return Ok(None);
        }
        self.used += 1;
        let v = (self.f)(x)?;
        if !v.is_finite() {
            return Err(Error::Numerical(format!("objective returned {v}")));
        }
        Ok(Some(v))
    }
}

fn bfgs_update(h: &mut DMatrix<f64>, s: &DVector<f64>, y: &DVector<f64>) {
    let sy = s.dot(y);
    if sy <= 1e-12 * s.norm() * y.norm() {
        return;
    }
    let rho = 1.0 / sy;
    let n = s.len();
    let eye = DMatrix::<f64>::identity(n, n);
    let left = &eye - rho * s * y.transpose();
    let right = &eye - rho * y * s.transpose();
    *h = &left * &*h * &right + rho * s * s.transpose();
}

/// Minimizes `f` from `theta0`. Never calls `f` more than the budget;
/// running out returns the best point with `truncated` set.
pub fn imfil_minimize<F>(f: F, theta0: &[f64], cfg: &ImFilConfig) -> Result<ImFilResult>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    cfg.validate()?;
    let dim = theta0.len();
    let budget = cfg.budget_for(dim);
    if budget < 2 * dim + 1 {
        return Err(Error::contract(format!(
            "budget {budget} is below the stencil size {}",
            2 * dim + 1
        )));
    }
    let mut f = Counted { f, used: 0, budget };
    let mut x = DVector::from_column_slice(theta0);
    let mut fx = f.eval(x.as_slice())?.expect("budget covers the first call");
    let mut trace = vec![(0, fx)];
    let mut iterations = 0;
    let mut truncated = false;

    'scales: for &h in &cfg.scales {
        if dim == 0 {
            break;
        }
        let mut hess = DMatrix::<f64>::identity(dim, dim);
        let mut previous: Option<(DVector<f64>, DVector<f64>)> = None;
        let mut failures = 0;
        loop {
            let mut grad = DVector::zeros(dim);
            let mut best_stencil: Option<(DVector<f64>, f64)> = None;
            for i in 0..dim {
                let mut pair = [0.0; 2];
                for (k, sign) in [1.0, -1.0].into_iter().enumerate() {
                    let mut xp = x.clone();
                    xp[i] += sign * h;
                    let Some(v) = f.eval(xp.as_slice())? else {
                        truncated = true;
                        break 'scales;
                    };
                    pair[k] = v;
                    if best_stencil.as_ref().is_none_or(|(_, b)| v < *b) {
                        best_stencil = Some((xp, v));
                    }
                }
                grad[i] = (pair[0] - pair[1]) / (2.0 * h);
            }
            let (xs, fs) = best_stencil.expect("dim > 0");
            if fs >= fx || grad.norm() < cfg.tolerance * h {
                failures += 1;
                if failures >= cfg.stencil_failure_limit {
                    break;
                }
                continue;
            }
            if let Some((xp, gp)) = &previous {
                bfgs_update(&mut hess, &(&x - xp), &(&grad - gp));
            }
            let direction = -(&hess * &grad);
            let mut moved = None;
            let mut lambda = 1.0;
            for _ in 0..=cfg.line_search_steps {
                let xt = &x + lambda * &direction;
                let Some(ft) = f.eval(xt.as_slice())? else {
                    truncated = true;
                    break;
                };
                if ft < fx {
                    moved = Some((xt, ft));
                    break;
                }
                lambda *= 0.5;
            }
            let (xn, fnew) = match moved {
                Some(m) if m.1 <= fs => m,
                _ => {
                    // A failed line search falls back to the best stencil
                    // point and restarts the curvature model.
                    hess = DMatrix::identity(dim, dim);
                    (xs, fs)
                }
            };
            previous = Some((x, grad));
            x = xn;
            fx = fnew;
            iterations += 1;
            trace.push((iterations, fx));
            if truncated {
                break 'scales;
            }
        }
    }
    Ok(ImFilResult {
        theta: x.as_slice().to_vec(),
        f_min: fx,
        trace,
        iterations,
        evaluations: f.used,
        truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scales_must_decrease() {
        let cfg = ImFilConfig {
            scales: vec![0.1, 0.2],
            ..ImFilConfig::default()
        };
        assert!(cfg.validate().is_err());
        assert!(ImFilConfig::default().validate().is_ok());
    }

    #[test]
    fn small_budget_is_rejected() {
        let cfg = ImFilConfig::default().with_budget(4);
        assert!(imfil_minimize(|x: &[f64]| Ok(x[0] * x[0] + x[1] * x[1]), &[1.0, 1.0], &cfg).is_err());
    }

    #[test]
    fn zero_dimensional_problem() {
        let r = imfil_minimize(|_: &[f64]| Ok(3.0), &[], &ImFilConfig::default()).unwrap();
        assert_eq!((r.f_min, r.evaluations), (3.0, 1));
    }

    #[test]
    fn truncation_keeps_best_point() {
        let cfg = ImFilConfig::default().with_budget(7);
        let r = imfil_minimize(|x: &[f64]| Ok((x[0] - 1.0).powi(2)), &[0.0], &cfg).unwrap();
        assert!(r.truncated);
        assert!(r.evaluations <= 7);
        assert!(r.f_min < 1.0);
    }
}
