//! The contract shared by every fitted model.

use crate::error::Result;

/// Index of the largest score; the lowest index wins ties and NaN never wins.
pub fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    let mut best_value = f64::NEG_INFINITY;
    for (j, &s) in scores.iter().enumerate() {
        if s > best_value {
            best = j;
            best_value = s;
        }
    }
    best
}

/// A fitted classifier exposing per-class scores and a MAP decision.
pub trait TrainedClassifier: Send + Sync {
    fn n_classes(&self) -> usize;

    /// Input dimension.
    fn dim(&self) -> usize;

    /// Real-valued class scores; larger is more likely.
    fn scores(&self, x: &[f64]) -> Result<Vec<f64>>;

    /// Lowest class index among the maximal scores.
    fn classify(&self, x: &[f64]) -> Result<usize> {
        Ok(argmax(&self.scores(x)?))
    }
}

impl<T: TrainedClassifier + ?Sized> TrainedClassifier for Box<T> {
    fn n_classes(&self) -> usize {
        (**self).n_classes()
    }

    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        (**self).scores(x)
    }

    fn classify(&self, x: &[f64]) -> Result<usize> {
        (**self).classify(x)
    }
}

pub fn classify(model: &dyn TrainedClassifier, x: &[f64]) -> Result<usize> {
    model.classify(x)
}
