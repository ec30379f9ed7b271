//! Spec files shipped with the binary.

use crate::error::{HarnessError, Result};
use crate::spec::ExperimentSpec;

pub const PRESETS: [(&str, &str); 6] = [
    ("fig8", include_str!("../presets/fig8.toml")),
    ("fig9", include_str!("../presets/fig9.toml")),
    ("fig10", include_str!("../presets/fig10.toml")),
    ("fig11", include_str!("../presets/fig11.toml")),
    ("table1", include_str!("../presets/table1.toml")),
    ("fig12", include_str!("../presets/fig12.toml")),
];

pub fn preset_text(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn preset(name: &str) -> Result<ExperimentSpec> {
    let text = preset_text(name).ok_or_else(|| HarnessError::InvalidSpec(format!("no preset named {name:?}")))?;
    ExperimentSpec::from_toml(text)
}
