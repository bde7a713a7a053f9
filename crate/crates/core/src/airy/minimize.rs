use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::operator::{interior_nodes, DirichletOperator, Potential};
use super::state::GridState;
use crate::{par, Result};

pub const RESTARTS: usize = 8;
pub const MAX_ITERATIONS: usize = 100_000;
/// Stop once the mean relative decrease per step falls below this.
pub const STOP_DECREASE: f64 = 1e-12;
const WINDOW: usize = 50;
/// Consecutive halvings after which no decrease is left above rounding.
const MAX_HALVINGS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Ground state of the Dirichlet operator.
    Spectral,
    /// Projected `H¹`-gradient descent from random starts.
    Descent,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Spectral => "spectral",
            Method::Descent => "descent",
        })
    }
}

/// Which functional is minimized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Functional {
    /// `kinetic·⟨x⟩²`.
    Product,
    /// `kinetic·⟨x²⟩`.
    Combined,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub value: f64,
    pub state: GridState,
    pub method: Method,
    /// Descent steps of the best restart; zero for the spectral route.
    pub iterations: usize,
    /// False when descent hit the iteration cap.
    pub converged: bool,
}

/// `inf kinetic·⟨x⟩²` over unit Dirichlet states on `[0, L]`.
pub fn minimize_product(h: f64, length: f64, method: Method) -> Result<Minimum> {
    minimize(Functional::Product, h, length, method, 0)
}

/// `inf kinetic·⟨x²⟩` over unit Dirichlet states on `[0, L]`.
pub fn minimize_combined(h: f64, length: f64, method: Method) -> Result<Minimum> {
    minimize(Functional::Combined, h, length, method, 0)
}

pub fn minimize(functional: Functional, h: f64, length: f64, method: Method, seed: u64) -> Result<Minimum> {
    match method {
        Method::Spectral => spectral(functional, h, length),
        Method::Descent => descent(functional, h, length, seed),
    }
}

fn spectral(functional: Functional, h: f64, length: f64) -> Result<Minimum> {
    let potential = match functional {
        Functional::Product => Potential::Linear(1.0),
        Functional::Combined => Potential::Quadratic(1.0),
    };
    let (e, state) = DirichletOperator::new(h, length, potential)?.eigenstate(1)?;
    // both functionals are scale invariant; the ground state needs no rescaling
    let value = match functional {
        Functional::Product => 4.0 / 27.0 * e.powi(3),
        Functional::Combined => 0.25 * e * e,
    };
    Ok(Minimum {
        value,
        state,
        method: Method::Spectral,
        iterations: 0,
        converged: true,
    })
}

struct Objective {
    functional: Functional,
    h: f64,
    x: Vec<f64>,
}

impl Objective {
    /// Value and gradient of the degree-zero homogeneous extension,
    /// so that the sphere constraint only enters through renormalization.
    fn eval(&self, v: &[f64], grad: &mut [f64]) -> f64 {
        let h = self.h;
        let m = v.len();
        let at = |j: isize| if j < 0 || j as usize >= m { 0.0 } else { v[j as usize] };
        let mut k = 0.0;
        let mut w = 0.0;
        let mut n = 0.0;
        for (j, (&vj, &x)) in v.iter().zip(&self.x).enumerate() {
            let d = vj - at(j as isize - 1);
            k += d * d;
            w += self.weight(x) * vj * vj;
            n += vj * vj;
        }
        k += v[m - 1] * v[m - 1];
        k /= h;
        w *= h;
        n *= h;
        let (pw, pn, value) = match self.functional {
            Functional::Product => (2.0, 3.0, k * w * w / (n * n * n)),
            Functional::Combined => (1.0, 2.0, k * w / (n * n)),
        };
        for j in 0..m {
            let jj = j as isize;
            let dk = 2.0 / h * (2.0 * v[j] - at(jj - 1) - at(jj + 1));
            let dw = 2.0 * h * self.weight(self.x[j]) * v[j];
            let dn = 2.0 * h * v[j];
            grad[j] = value * (dk / k + pw * dw / w - pn * dn / n);
        }
        value
    }

    fn weight(&self, x: f64) -> f64 {
        match self.functional {
            Functional::Product => x,
            Functional::Combined => x * x,
        }
    }
}

/// Solves `(−Δ_h + 1)·y = g` in place, with `Δ_h` the Dirichlet second
/// difference: this turns the Euclidean gradient into the `H¹` gradient, whose
/// descent rate does not degrade as `h → 0`.
fn sobolev_precondition(g: &mut [f64], h: f64, scratch: &mut [f64]) {
    let m = g.len();
    let off = -1.0 / (h * h);
    let diag = 2.0 / (h * h) + 1.0;
    // Thomas algorithm; the matrix is diagonally dominant
    scratch[0] = off / diag;
    g[0] /= diag;
    for j in 1..m {
        let denom = diag - off * scratch[j - 1];
        scratch[j] = off / denom;
        g[j] = (g[j] - off * g[j - 1]) / denom;
    }
    for j in (0..m - 1).rev() {
        g[j] -= scratch[j] * g[j + 1];
    }
}

fn normalize(v: &mut [f64], h: f64) {
    let norm = (h * v.iter().map(|a| a * a).sum::<f64>()).sqrt();
    v.iter_mut().for_each(|a| *a /= norm);
}

struct Run {
    value: f64,
    values: Vec<f64>,
    iterations: usize,
    converged: bool,
}

fn descend(objective: &Objective, mut v: Vec<f64>) -> Run {
    let h = objective.h;
    let m = v.len();
    normalize(&mut v, h);
    let mut grad = vec![0.0; m];
    let mut trial = vec![0.0; m];
    let mut trial_grad = vec![0.0; m];
    let mut scratch = vec![0.0; m];
    let mut value = objective.eval(&v, &mut grad);
    sobolev_precondition(&mut grad, h, &mut scratch);
    let mut step = 1e-3;
    let mut history = std::collections::VecDeque::with_capacity(WINDOW + 1);
    history.push_back(value);
    let mut halvings = 0;
    for iteration in 1..=MAX_ITERATIONS {
        for j in 0..m {
            trial[j] = v[j] - step * grad[j];
        }
        normalize(&mut trial, h);
        let candidate = objective.eval(&trial, &mut trial_grad);
        if candidate < value {
            sobolev_precondition(&mut trial_grad, h, &mut scratch);
            std::mem::swap(&mut v, &mut trial);
            std::mem::swap(&mut grad, &mut trial_grad);
            value = candidate;
            step *= 1.25;
            halvings = 0;
            history.push_back(value);
            if history.len() > WINDOW {
                let old = history.pop_front().expect("window is full");
                if (old - value) / value < WINDOW as f64 * STOP_DECREASE {
                    return Run {
                        value,
                        values: v,
                        iterations: iteration,
                        converged: true,
                    };
                }
            }
        } else {
            step *= 0.5;
            halvings += 1;
            if halvings == MAX_HALVINGS {
                return Run {
                    value,
                    values: v,
                    iterations: iteration,
                    converged: true,
                };
            }
        }
    }
    Run {
        value,
        values: v,
        iterations: MAX_ITERATIONS,
        converged: false,
    }
}

fn descent(functional: Functional, h: f64, length: f64, seed: u64) -> Result<Minimum> {
    let m = interior_nodes(h, length)?;
    let objective = Objective {
        functional,
        h,
        x: (1..=m).map(|j| j as f64 * h).collect(),
    };
    let runs = par::map_range(RESTARTS, |r| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(RESTARTS as u64).wrapping_add(r as u64));
        let start: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..1.0)).collect();
        descend(&objective, start)
    });
    let best = runs
        .into_iter()
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .expect("at least one restart");
    Ok(Minimum {
        value: best.value,
        state: GridState::normalized(best.values, h, length)?,
        method: Method::Descent,
        iterations: best.iterations,
        converged: best.converged,
    })
}
