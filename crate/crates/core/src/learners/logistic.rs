//! L2-regularised logistic regression fit by gradient descent.
//!
//! Features are standardised with the training mean and standard deviation
//! before optimisation; the transform is part of the fitted state. The
//! objective is
//!
//! ```text
//! J(w, b) = (1/n) Σ [softplus(z_i) - y_i z_i] + (λ/2) ‖w‖²,   z_i = b + w·x̃_i
//! ```
//!
//! with the bias left unpenalised.

use ndarray::{Array1, ArrayView1, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::classifier::{check_fit_shape, require_both_classes, BinaryClassifier};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogisticParams {
    pub learning_rate: f64,
    pub max_iters: usize,
    pub l2_penalty: f64,
    /// Stop once the gradient norm drops below this.
    pub convergence_tol: f64,
}

impl Default for LogisticParams {
    fn default() -> Self {
        LogisticParams {
            learning_rate: 0.1,
            max_iters: 1000,
            l2_penalty: 1e-4,
            convergence_tol: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogisticState {
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LogisticBinary {
    pub params: LogisticParams,
    pub state: Option<LogisticState>,
}

impl LogisticBinary {
    pub fn new(params: LogisticParams) -> Self {
        LogisticBinary {
            params,
            state: None,
        }
    }

    pub fn state(&self) -> Option<&LogisticState> {
        self.state.as_ref()
    }

    fn fitted(&self) -> Result<&LogisticState> {
        self.state
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("logistic model is not fitted".into()))
    }

    fn decision(&self, state: &LogisticState, x: ArrayView1<'_, f64>) -> f64 {
        state.bias
            + x.iter()
                .zip(&state.mean)
                .zip(&state.scale)
                .zip(&state.weights)
                .map(|(((v, m), s), w)| w * (v - m) / s)
                .sum::<f64>()
    }
}

/// Numerically stable logistic function.
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Objective value and gradient `(J, ∂J/∂w, ∂J/∂b)` on already-standardised
/// features.
pub fn objective_and_gradient(
    x: ArrayView2<'_, f64>,
    y: &[bool],
    weights: ArrayView1<'_, f64>,
    bias: f64,
    l2: f64,
) -> (f64, Array1<f64>, f64) {
    let n = x.nrows() as f64;
    let z = x.dot(&weights) + bias;
    let mut loss = 0.0;
    let mut resid = Array1::zeros(x.nrows());
    for (i, (&zi, &yi)) in z.iter().zip(y).enumerate() {
        let t = if yi { 1.0 } else { 0.0 };
        loss += softplus(zi) - t * zi;
        resid[i] = sigmoid(zi) - t;
    }
    let grad_w = x.t().dot(&resid) / n + &weights * l2;
    let grad_b = resid.sum() / n;
    let value = loss / n + 0.5 * l2 * weights.dot(&weights);
    (value, grad_w, grad_b)
}

fn objective(x: ArrayView2<'_, f64>, y: &[bool], w: ArrayView1<'_, f64>, b: f64, l2: f64) -> f64 {
    let z = x.dot(&w) + b;
    let loss: f64 = z
        .iter()
        .zip(y)
        .map(|(&zi, &yi)| softplus(zi) - if yi { zi } else { 0.0 })
        .sum();
    loss / x.nrows() as f64 + 0.5 * l2 * w.dot(&w)
}

impl BinaryClassifier for LogisticBinary {
    fn fit(&mut self, features: ArrayView2<'_, f64>, targets: &[bool]) -> Result<()> {
        check_fit_shape(features, targets)?;
        require_both_classes(targets)?;
        let p = &self.params;

        let mean = features.mean_axis(Axis(0)).expect("non-empty");
        let scale = features
            .std_axis(Axis(0), 0.0)
            .mapv(|s| if s > 0.0 && s.is_finite() { s } else { 1.0 });
        let x = (&features - &mean) / &scale;

        let mut w = Array1::<f64>::zeros(x.ncols());
        let mut b = 0.0;
        let mut step = p.learning_rate;
        let mut converged = false;
        let mut iterations = 0;
        let (mut value, mut gw, mut gb) = objective_and_gradient(x.view(), targets, w.view(), b, p.l2_penalty);

        while iterations < p.max_iters {
            let gnorm2 = gw.dot(&gw) + gb * gb;
            if gnorm2.sqrt() < p.convergence_tol {
                converged = true;
                break;
            }
            iterations += 1;
            // Armijo backtracking; the accepted step seeds the next trial at twice its size.
            let mut accepted = false;
            for _ in 0..60 {
                let w_new = &w - &(&gw * step);
                let b_new = b - step * gb;
                let v_new = objective(x.view(), targets, w_new.view(), b_new, p.l2_penalty);
                if v_new <= value - 1e-4 * step * gnorm2 {
                    w = w_new;
                    b = b_new;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if !accepted {
                // no descent left at floating-point resolution
                break;
            }
            (value, gw, gb) = objective_and_gradient(x.view(), targets, w.view(), b, p.l2_penalty);
            step *= 2.0;
        }
        if !converged {
            let gnorm = (gw.dot(&gw) + gb * gb).sqrt();
            converged = gnorm < p.convergence_tol;
        }
        if !w.iter().all(|v| v.is_finite()) || !b.is_finite() {
            return Err(Error::DegenerateTarget("logistic parameters diverged".into()));
        }

        self.state = Some(LogisticState {
            mean: mean.to_vec(),
            scale: scale.to_vec(),
            weights: w.to_vec(),
            bias: b,
            iterations,
            converged,
        });
        Ok(())
    }

    fn predict_proba_positive(&self, features: ArrayView2<'_, f64>) -> Result<Vec<f64>> {
        let state = self.fitted()?;
        if features.ncols() != state.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: state.weights.len(),
                got: features.ncols(),
            });
        }
        Ok(features
            .rows()
            .into_iter()
            .map(|row| sigmoid(self.decision(state, row)))
            .collect())
    }
}
