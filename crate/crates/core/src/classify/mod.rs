//! Linear classification, cross-validation and significance testing.

mod cv;
mod significance;
mod svm;

pub use cv::{cross_validate, stratified_folds, CvConfig, Evaluator, FoldReport, Prediction, Request};
pub use significance::{accuracy, approx_randomization_test};
pub use svm::{train_linear_svm, LinearModel, SvmConfig};
