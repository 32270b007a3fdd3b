use super::config::ExperimentConfig;
use crate::error::{Error, Result};

/// Bundled configurations, by name.
pub const PRESETS: &[(&str, &str)] = &[
    ("fig2_desk", include_str!("../../presets/fig2_desk.cfg")),
    ("full-scale", include_str!("../../presets/full_scale.cfg")),
    ("fig3_convergence", include_str!("../../presets/fig3_convergence.cfg")),
    ("sinr_desk", include_str!("../../presets/sinr_desk.cfg")),
    ("fig4_desk", include_str!("../../presets/fig4_desk.cfg")),
    ("fig5_desk", include_str!("../../presets/fig5_desk.cfg")),
    ("fig6_lr25", include_str!("../../presets/fig6_lr25.cfg")),
    ("fig6_lr40", include_str!("../../presets/fig6_lr40.cfg")),
];

pub fn preset_text(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let text = preset_text(name).ok_or_else(|| {
        let names: Vec<_> = PRESETS.iter().map(|(n, _)| *n).collect();
        Error::Config(format!("unknown preset `{name}` (available: {})", names.join(", ")))
    })?;
    ExperimentConfig::parse(text)
}
