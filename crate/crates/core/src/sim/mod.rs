//! SIRV clutter simulation, target injection and training-set corruption.

mod sampler;
mod scenario;
mod targets;

pub use sampler::{sample_clutter, ClutterSampler};
pub(crate) use scenario::complex_normal;
pub use scenario::{scenario_covariance, ClutterScenario, ScenarioParams};
pub use targets::{
    corrupt_training, corrupt_training_with, random_target, target_return, CorruptionSpec, TargetSpec,
};
