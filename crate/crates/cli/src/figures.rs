//! The bundled figure scenarios.

use std::path::{Path, PathBuf};

use crate::commands::{run_scenario, ScenarioRun};
use crate::scenario::Scenario;
use crate::{CliError, CliResult};

pub const FIGURE1: &str = include_str!("../../../scenarios/figure1.json");
pub const FIGURE2: &str = include_str!("../../../scenarios/figure2.json");
pub const FIGURE3: &str = include_str!("../../../scenarios/figure3.json");
pub const BETA71: &str = include_str!("../../../scenarios/beta71.json");
pub const POINTMASS: &str = include_str!("../../../scenarios/pointmass.json");

/// The bundled scenario for figure `1`, `2` or `3`.
pub fn figure_scenario(which: u8) -> CliResult<Scenario> {
    let (text, name) = match which {
        1 => (FIGURE1, "figure1.json"),
        2 => (FIGURE2, "figure2.json"),
        3 => (FIGURE3, "figure3.json"),
        other => return Err(CliError::Schema(format!("unknown figure {other} (expected 1, 2, 3 or all)"))),
    };
    Scenario::parse(text, name)
}

/// Parse `1`, `2`, `3` or `all`.
pub fn parse_which(s: &str) -> CliResult<Vec<u8>> {
    match s {
        "all" => Ok(vec![1, 2, 3]),
        "1" | "2" | "3" => Ok(vec![s.parse().expect("digit")]),
        other => Err(CliError::Schema(format!("unknown figure {other:?} (expected 1, 2, 3 or all)"))),
    }
}

pub fn cmd_figures(which: &[u8], out: &Path) -> CliResult<Vec<(ScenarioRun, Vec<PathBuf>)>> {
    which
        .iter()
        .map(|&w| {
            let run = run_scenario(&figure_scenario(w)?, None)?;
            let files = run.write(out)?;
            Ok((run, files))
        })
        .collect()
}
