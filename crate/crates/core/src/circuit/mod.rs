//! Search spaces, architecture encoding, circuit construction and gradients.

mod arch;
mod build;
mod grad;
mod space;

pub use arch::{Architecture, LayerChoice, LayoutKey, ParamAssignment};
pub use build::{build_circuit, circuit_outputs, evaluate, evaluate_mixed, outputs};
pub use grad::{
    gradient_finite_difference, gradient_param_shift, metric_diagonal, param_shift_gates,
    LossGradient,
};
pub use space::{SearchSpace, MAX_PAIRS};
