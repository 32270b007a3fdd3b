//! Steering vectors, the four projector STAP filters and the detection statistic.

mod stap;
mod steering;

pub use stap::{
    apply_filter, detection_statistic, detection_statistic_with_h, detection_statistics, from_pq,
    kron_classical_filter, kron_stap_filter, lr_stap_filter, lr_stap_filter_from_samples, spatial_only_filter, to_pq,
    Factor, FilterKind, FilterWarning, StapFilter,
};
pub use steering::{doppler_grid, phase_ramp, steering_bank, temporal_matrix, SteeringVector};
