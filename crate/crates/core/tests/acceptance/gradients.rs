//! Backpropagation against central differences.

use cdsproxy::parametric::{glorot_init, nn_loss_gradient, Activation, NetworkShape};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::Outcome;

const STEP: f64 = 1e-5;
const TOL: f64 = 1e-5;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn criterion() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for (a, act) in [Activation::Tanh, Activation::Linear, Activation::Elliot].into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(30 + a as u64);
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let shape = NetworkShape {
                inputs: rng.random_range(1..=6),
                hidden: rng.random_range(1..=8),
                outputs: rng.random_range(2..=5),
            };
            let mut params = glorot_init(shape, &mut rng);
            for p in params.iter_mut() {
                *p += rng.random_range(-0.3..0.3);
            }
            let batch = rng.random_range(1..=20);
            let xs: Vec<Vec<f64>> = (0..batch)
                .map(|_| (0..shape.inputs).map(|_| StandardNormal.sample(&mut rng)).collect())
                .collect();
            let ys: Vec<usize> = (0..batch).map(|_| rng.random_range(0..shape.outputs)).collect();

            let (_, grad) = nn_loss_gradient(shape, act, &params, &xs, &ys).unwrap();
            let mut numeric = vec![0.0; params.len()];
            for i in 0..params.len() {
                let keep = params[i];
                params[i] = keep + STEP;
                let up = nn_loss_gradient(shape, act, &params, &xs, &ys).unwrap().0;
                params[i] = keep - STEP;
                let down = nn_loss_gradient(shape, act, &params, &xs, &ys).unwrap().0;
                params[i] = keep;
                numeric[i] = (up - down) / (2.0 * STEP);
            }
            let diff: Vec<f64> = grad.iter().zip(&numeric).map(|(g, n)| g - n).collect();
            let rel = norm(&diff) / norm(&grad).max(norm(&numeric)).max(1e-8);
            worst = worst.max(rel);
        }
        pass &= worst <= TOL;
        parts.push(format!("{} max_rel={worst:.1e}", act.label()));
    }
    Outcome::new(pass, format!("100 pairs per activation; {}", parts.join(", ")))
}
