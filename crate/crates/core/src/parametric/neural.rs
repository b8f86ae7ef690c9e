//! Single-hidden-layer network with a softmax output, trained by full-batch
//! gradient descent on the mean cross-entropy.
//!
//! Parameters are kept in one flat vector laid out as `W1` (hidden x inputs,
//! row-major), `b1`, `W2` (classes x hidden, row-major), `b2`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{Dataset, TrainedClassifier};
use crate::error::{check_dim, Error, Result};

pub const DEFAULT_HIDDEN: usize = 10;
pub const DEFAULT_MAX_EPOCHS: usize = 2000;
pub const DEFAULT_GRADIENT_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_LEARNING_RATE: f64 = 1.0;
pub const MIN_LEARNING_RATE: f64 = 1e-10;
/// Learning-rate growth after an accepted step.
const STEP_GROWTH: f64 = 1.1;

/// Softmax with the maximum subtracted first.
pub fn softmax(z: &[f64]) -> Vec<f64> {
    let m = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = z.iter().map(|v| (v - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Activation {
    Tanh,
    Linear,
    /// `x / (1 + |x|)`.
    Elliot,
}

impl Activation {
    pub fn eval(self, a: f64) -> f64 {
        match self {
            Activation::Tanh => a.tanh(),
            Activation::Linear => a,
            Activation::Elliot => a / (1.0 + a.abs()),
        }
    }

    /// Derivative at pre-activation `a`, given `u = eval(a)`.
    fn derivative(self, a: f64, u: f64) -> f64 {
        match self {
            Activation::Tanh => 1.0 - u * u,
            Activation::Linear => 1.0,
            Activation::Elliot => {
                let t = 1.0 + a.abs();
                1.0 / (t * t)
            }
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Activation::Tanh => "Tangent",
            Activation::Linear => "Linear",
            Activation::Elliot => "Elliot",
        }
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Activation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tanh" | "tangent" => Ok(Activation::Tanh),
            "linear" => Ok(Activation::Linear),
            "elliot" => Ok(Activation::Elliot),
            _ => Err(Error::InvalidArgument(format!("unknown activation '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NetworkShape {
    pub inputs: usize,
    pub hidden: usize,
    pub outputs: usize,
}

impl NetworkShape {
    pub fn n_params(&self) -> usize {
        self.hidden * (self.inputs + 1) + self.outputs * (self.hidden + 1)
    }

    fn offsets(&self) -> (usize, usize, usize) {
        let b1 = self.hidden * self.inputs;
        let w2 = b1 + self.hidden;
        let b2 = w2 + self.outputs * self.hidden;
        (b1, w2, b2)
    }
}

/// Uniform on `+-sqrt(6 / (fan_in + fan_out))` for the weights, zero biases.
pub fn glorot_init(shape: NetworkShape, rng: &mut impl Rng) -> Vec<f64> {
    let mut p = vec![0.0; shape.n_params()];
    let (b1, w2, b2) = shape.offsets();
    let r1 = (6.0 / (shape.inputs + shape.hidden) as f64).sqrt();
    for w in &mut p[..b1] {
        *w = rng.random_range(-r1..=r1);
    }
    let r2 = (6.0 / (shape.hidden + shape.outputs) as f64).sqrt();
    for w in &mut p[w2..b2] {
        *w = rng.random_range(-r2..=r2);
    }
    p
}

/// Hidden activations and output logits for one input.
fn forward_into(shape: NetworkShape, act: Activation, params: &[f64], x: &[f64], a: &mut [f64], u: &mut [f64], z: &mut [f64]) {
    let (b1, w2, b2) = shape.offsets();
    let d = shape.inputs;
    for r in 0..shape.hidden {
        let row = &params[r * d..(r + 1) * d];
        let s: f64 = row.iter().zip(x).map(|(w, v)| w * v).sum();
        a[r] = s + params[b1 + r];
        u[r] = act.eval(a[r]);
    }
    let h = shape.hidden;
    for c in 0..shape.outputs {
        let row = &params[w2 + c * h..w2 + (c + 1) * h];
        z[c] = row.iter().zip(u.iter()).map(|(w, v)| w * v).sum::<f64>() + params[b2 + c];
    }
}

/// Class probabilities of the network at `x`.
pub fn nn_forward(shape: NetworkShape, act: Activation, params: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    check_dim(shape.n_params(), params.len())?;
    check_dim(shape.inputs, x.len())?;
    let mut a = vec![0.0; shape.hidden];
    let mut u = vec![0.0; shape.hidden];
    let mut z = vec![0.0; shape.outputs];
    forward_into(shape, act, params, x, &mut a, &mut u, &mut z);
    Ok(softmax(&z))
}

/// Mean cross-entropy of the batch and its gradient with respect to the
/// flat parameter vector.
pub fn nn_loss_gradient<V: AsRef<[f64]>>(
    shape: NetworkShape,
    act: Activation,
    params: &[f64],
    points: &[V],
    labels: &[usize],
) -> Result<(f64, Vec<f64>)> {
    check_dim(shape.n_params(), params.len())?;
    check_dim(points.len(), labels.len())?;
    if points.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    let (b1, w2, b2) = shape.offsets();
    let (d, h, k) = (shape.inputs, shape.hidden, shape.outputs);
    let mut grad = vec![0.0; params.len()];
    let mut a = vec![0.0; h];
    let mut u = vec![0.0; h];
    let mut z = vec![0.0; k];
    let mut delta_h = vec![0.0; h];
    let mut loss = 0.0;
    for (x, &y) in points.iter().zip(labels) {
        let x = x.as_ref();
        check_dim(d, x.len())?;
        if y >= k {
            return Err(Error::InvalidArgument(format!("label {y} out of range for {k} classes")));
        }
        forward_into(shape, act, params, x, &mut a, &mut u, &mut z);
        let m = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let zy = z[y] - m;
        let mut s = 0.0;
        for zc in z.iter_mut() {
            *zc = (*zc - m).exp();
            s += *zc;
        }
        // -log p_y = log sum exp(z - m) - (z_y - m)
        loss += s.ln() - zy;
        // z now holds p - e_y
        for zc in z.iter_mut() {
            *zc /= s;
        }
        z[y] -= 1.0;
        delta_h.iter_mut().for_each(|v| *v = 0.0);
        for c in 0..k {
            let dz = z[c];
            grad[b2 + c] += dz;
            let wrow = &params[w2 + c * h..w2 + (c + 1) * h];
            let grow = &mut grad[w2 + c * h..w2 + (c + 1) * h];
            for r in 0..h {
                grow[r] += dz * u[r];
                delta_h[r] += dz * wrow[r];
            }
        }
        for r in 0..h {
            let da = delta_h[r] * act.derivative(a[r], u[r]);
            grad[b1 + r] += da;
            let grow = &mut grad[r * d..(r + 1) * d];
            for (g, xv) in grow.iter_mut().zip(x) {
                *g += da * xv;
            }
        }
    }
    let n = points.len() as f64;
    grad.iter_mut().for_each(|g| *g /= n);
    Ok((loss / n, grad))
}

fn loss_only<V: AsRef<[f64]>>(shape: NetworkShape, act: Activation, params: &[f64], points: &[V], labels: &[usize]) -> f64 {
    let mut a = vec![0.0; shape.hidden];
    let mut u = vec![0.0; shape.hidden];
    let mut z = vec![0.0; shape.outputs];
    let mut loss = 0.0;
    for (x, &y) in points.iter().zip(labels) {
        forward_into(shape, act, params, x.as_ref(), &mut a, &mut u, &mut z);
        let m = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let s: f64 = z.iter().map(|v| (v - m).exp()).sum();
        loss += s.ln() + m - z[y];
    }
    loss / points.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NnConfig {
    pub hidden: usize,
    pub activation: Activation,
    pub learning_rate: f64,
    pub max_epochs: usize,
    pub gradient_tolerance: f64,
    pub seed: u64,
}

impl NnConfig {
    pub fn new(activation: Activation, seed: u64) -> Self {
        Self {
            hidden: DEFAULT_HIDDEN,
            activation,
            learning_rate: DEFAULT_LEARNING_RATE,
            max_epochs: DEFAULT_MAX_EPOCHS,
            gradient_tolerance: DEFAULT_GRADIENT_TOLERANCE,
            seed,
        }
    }
}

/// How training ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrainStatus {
    /// Gradient norm fell below the tolerance.
    Converged,
    /// The epoch cap was reached.
    EpochCap,
    /// Backtracking could not find a decreasing step above the learning-rate
    /// floor. The model is still usable.
    NoImprovement,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingReport {
    pub status: TrainStatus,
    pub epochs: usize,
    pub initial_loss: f64,
    pub final_loss: f64,
    pub gradient_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NeuralNetModel {
    pub shape: NetworkShape,
    pub activation: Activation,
    pub params: Vec<f64>,
    pub report: TrainingReport,
}

/// Glorot-initialized training from the configured seed.
pub fn fit_neural_net(train: &Dataset, config: &NnConfig) -> Result<NeuralNetModel> {
    if train.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if config.hidden == 0 {
        return Err(Error::InvalidArgument("hidden layer needs at least one unit".into()));
    }
    let shape = NetworkShape {
        inputs: train.dim(),
        hidden: config.hidden,
        outputs: train.n_classes(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let init = glorot_init(shape, &mut rng);
    fit_neural_net_from(train, config, init)
}

/// Training from explicit initial parameters. The loss never increases
/// between accepted steps, so the final loss is at most the initial one.
pub fn fit_neural_net_from(train: &Dataset, config: &NnConfig, init: Vec<f64>) -> Result<NeuralNetModel> {
    if !(config.learning_rate > 0.0) {
        return Err(Error::InvalidArgument(format!("learning rate must be positive, got {}", config.learning_rate)));
    }
    let shape = NetworkShape {
        inputs: train.dim(),
        hidden: config.hidden,
        outputs: train.n_classes(),
    };
    check_dim(shape.n_params(), init.len())?;
    let act = config.activation;
    let (xs, ys) = (train.features(), train.labels());
    let mut params = init;
    let (mut loss, mut grad) = nn_loss_gradient(shape, act, &params, xs, ys)?;
    let initial_loss = loss;
    let mut eta = config.learning_rate;
    let mut status = TrainStatus::EpochCap;
    let mut epochs = 0;
    let mut trial = vec![0.0; params.len()];
    let norm = |g: &[f64]| g.iter().map(|v| v * v).sum::<f64>().sqrt();
    while epochs < config.max_epochs {
        if norm(&grad) < config.gradient_tolerance {
            status = TrainStatus::Converged;
            break;
        }
        let accepted = loop {
            for ((t, p), g) in trial.iter_mut().zip(&params).zip(&grad) {
                *t = p - eta * g;
            }
            let value = loss_only(shape, act, &trial, xs, ys);
            if value < loss {
                break true;
            }
            eta *= 0.5;
            if eta < MIN_LEARNING_RATE {
                break false;
            }
        };
        if !accepted {
            status = TrainStatus::NoImprovement;
            break;
        }
        std::mem::swap(&mut params, &mut trial);
        (loss, grad) = nn_loss_gradient(shape, act, &params, xs, ys)?;
        eta *= STEP_GROWTH;
        epochs += 1;
    }
    if status == TrainStatus::EpochCap && norm(&grad) < config.gradient_tolerance {
        status = TrainStatus::Converged;
    }
    Ok(NeuralNetModel {
        shape,
        activation: act,
        params,
        report: TrainingReport {
            status,
            epochs,
            initial_loss,
            final_loss: loss,
            gradient_norm: norm(&grad),
        },
    })
}

impl TrainedClassifier for NeuralNetModel {
    fn n_classes(&self) -> usize {
        self.shape.outputs
    }

    fn dim(&self) -> usize {
        self.shape.inputs
    }

    fn scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        nn_forward(self.shape, self.activation, &self.params, x)
    }
}
