//! SINR and SINR loss, closed-form loss curves, residual and detection metrics.

mod sinr;
mod stats;
mod theory;

pub use sinr::{sinr, sinr_loss, temporal_stage_covariance, temporal_stage_loss, SinrLoss, SinrReference};
pub use stats::{contrast_ratio, mean_stderr, ms_residual, roc_auc};
pub use theory::{kappa, naive_spatial_estimate, theory_sinr_loss, NaiveSpatial, TheoryCurve, TheoryParams};
