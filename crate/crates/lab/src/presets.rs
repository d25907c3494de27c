//! Built-in experiment configs.

use crate::config::ExperimentConfig;
use crate::error::ConfigError;

/// Three canonical regimes: summable gaps, constant gaps, growing gaps.
pub const PAPER_DICHOTOMY: &str = "\
name = paper-dichotomy
seed = 20240601
depth = 10
levels = 1,2,3,4,5,6
replicates = 100000
y_mode = exact
oracle = true
outputs = classify,moments,census,lil,cuts,bounds
cuts.level = 10
cuts.windows = 6
lil.anchors = 1,2
census.levels = 4,8,12,16,20,24
bounds.level = 8

[spec.geometric]
kind = geometric
x = 1.5
epsilon = 0.5

[spec.constant]
kind = constant
a = 1
epsilon = 0.25

[spec.linear]
kind = linear
epsilon = 0.1
";

/// Binary construction with `b = (0.4, 0.04, 0.01)`.
pub const FIGURE1: &str = "\
name = figure1
seed = 1
depth = 3
levels = 1,2,3
replicates = 1000
outputs = tree,paths
oracle = false
bounds.level = 3

[spec.figure1]
kind = custom
table = 1.2649110640673518,0.8,0.8
epsilon = 0.1
";

/// Ternary construction with `b = (0.2, 0.04, 0.01)`.
pub const FIGURE3: &str = "\
name = figure3
seed = 1
depth = 3
levels = 1,2,3
replicates = 1000
outputs = tree,paths
oracle = false
bounds.level = 3

[spec.figure3]
kind = custom
table = 1.3416407864998738,1.8,2.7
branching = 3
epsilon = 0.1
";

pub const NAMES: [&str; 3] = ["paper-dichotomy", "figure1", "figure3"];

pub fn preset_text(name: &str) -> Result<&'static str, ConfigError> {
    match name {
        "paper-dichotomy" => Ok(PAPER_DICHOTOMY),
        "figure1" => Ok(FIGURE1),
        "figure3" => Ok(FIGURE3),
        other => Err(ConfigError::UnknownPreset(other.into())),
    }
}

pub fn preset(name: &str) -> Result<ExperimentConfig, ConfigError> {
    ExperimentConfig::parse(preset_text(name)?)
}
