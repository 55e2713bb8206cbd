//! Scenario execution shared by `psi` and `figures`.

use std::path::{Path, PathBuf};

use posterior_dynamics::diagnostics::{analyze, normal_critical_points, Context, CriticalPoint, DiagnosticsReport};
use posterior_dynamics::priors::value_to_json;
use posterior_dynamics::psi::{compute_psi, psi_at_zero, NumericMode, PsiSequence};
use posterior_dynamics::{FamilySpec, NamedPrior, Prior};
use serde_json::json;

use crate::render::{canonical_json, psi_csv, write_atomic};
use crate::scenario::{OutputKind, Scenario, SCHEMA_VERSION};
use crate::svg::{line_plot, Marker};
use crate::CliResult;

pub struct ScenarioRun {
    pub scenario: Scenario,
    pub mode: NumericMode,
    pub seq: PsiSequence,
    pub report: DiagnosticsReport,
    pub critical_points: Vec<CriticalPoint>,
}

/// Compute `ψ` and its diagnostics. `mode` overrides the scenario's setting.
pub fn run_scenario(scenario: &Scenario, mode: Option<NumericMode>) -> CliResult<ScenarioRun> {
    let mode = mode.unwrap_or(scenario.numeric_mode);
    let seq = compute_psi(&scenario.family, &scenario.prior, &scenario.theta0, &scenario.theta1, scenario.horizon, mode)?;
    let ctx = Context {
        family: &scenario.family,
        prior: &scenario.prior,
        theta0: &scenario.theta0,
        theta1: &scenario.theta1,
    };
    let report = analyze(&seq, Some(ctx));
    let critical_points = match (&scenario.family, &scenario.prior) {
        (FamilySpec::Normal { sigma }, Prior::Named(NamedPrior::StdNormal)) => {
            normal_critical_points(scenario.theta0.to_f64(), scenario.theta1.to_f64(), *sigma)?
        }
        _ => Vec::new(),
    };
    Ok(ScenarioRun { scenario: scenario.clone(), mode, seq, report, critical_points })
}

impl ScenarioRun {
    pub fn report_json(&self) -> CliResult<serde_json::Value> {
        let psi0 = psi_at_zero(&self.scenario.prior, &self.scenario.theta0)?;
        Ok(json!({
            "schema": SCHEMA_VERSION,
            "scenario": self.scenario.to_json(),
            "psi0": value_to_json(&psi0),
            "diagnostics": serde_json::to_value(&self.report).expect("report serializes"),
            "normal_critical_points": serde_json::to_value(&self.critical_points).expect("points serialize"),
        }))
    }

    pub fn svg(&self) -> String {
        let ns: Vec<f64> = (0..self.seq.len()).map(|i| self.seq.n_at(i) as f64).collect();
        let values = self.seq.floats();
        let at = |n: u64| self.seq.index_of(n).map(|i| values[i]);
        let mut markers = Vec::new();
        for &n in &self.report.modes {
            if let Some(v) = at(n) {
                markers.push(Marker { n: n as f64, value: v, label: format!("max {n}"), color: "firebrick" });
            }
        }
        for &n in &self.report.minima {
            if let Some(v) = at(n) {
                markers.push(Marker { n: n as f64, value: v, label: format!("min {n}"), color: "seagreen" });
            }
        }
        let title = match &self.scenario.description {
            Some(d) => format!("{}: {d}", self.scenario.name),
            None => self.scenario.name.clone(),
        };
        line_plot(&title, &ns, &values, &markers)
    }

    /// Write the requested outputs as `<dir>/<name>.{csv,json,svg}`.
    pub fn write(&self, dir: &Path) -> CliResult<Vec<PathBuf>> {
        let mut written = Vec::new();
        for kind in &self.scenario.outputs {
            let (ext, bytes) = match kind {
                OutputKind::Csv => ("csv", psi_csv(&self.seq, &self.report)?),
                OutputKind::Json => ("json", canonical_json(&self.report_json()?).into_bytes()),
                OutputKind::Svg => ("svg", self.svg().into_bytes()),
            };
            let path = dir.join(format!("{}.{ext}", self.scenario.name));
            write_atomic(&path, &bytes)?;
            written.push(path);
        }
        Ok(written)
    }

    /// One human-readable summary line.
    pub fn summary(&self) -> String {
        let r = &self.report;
        let fmt = |v: &[u64]| {
            if v.len() > 12 {
                format!("{} entries [{}..{}]", v.len(), v[0], v[v.len() - 1])
            } else {
                format!("{v:?}")
            }
        };
        format!(
            "{}: n = {}..{}, method {}, modes {}, minima {}, log-concavity violations {}, eventual decrease {}",
            self.scenario.name,
            r.first_n,
            r.horizon,
            r.method,
            fmt(&r.modes),
            fmt(&r.minima),
            fmt(&r.log_concavity_violations),
            r.eventual_decrease_index.map_or("not reached".into(), |n| n.to_string()),
        )
    }
}

pub fn cmd_psi(path: &Path, mode: Option<NumericMode>, out: &Path) -> CliResult<(ScenarioRun, Vec<PathBuf>)> {
    let scenario = Scenario::from_path(path)?;
    let run = run_scenario(&scenario, mode)?;
    let written = run.write(out)?;
    Ok((run, written))
}
