//! Parametric classifiers: logistic regression and a one-hidden-layer network.

pub mod logistic;
pub mod neural;

pub use logistic::{fit_logistic_binary, fit_logistic_multiclass, sigmoid, LogisticConfig, LogisticModel};
pub use neural::{
    fit_neural_net, fit_neural_net_from, glorot_init, nn_forward, nn_loss_gradient, softmax, Activation, NetworkShape,
    NeuralNetModel, NnConfig, TrainStatus, TrainingReport,
};
