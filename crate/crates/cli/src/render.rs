//! Deterministic text rendering and atomic file writes.
//!
//! Floats are printed with 17 significant digits in scientific notation, so
//! every `f64` round-trips and repeated runs are byte-identical. Rationals
//! are printed as reduced `p/q`, unless the stored value is larger than
//! [`RATIONAL_RENDER_BITS`]; reducing and printing multi-million-bit values
//! costs far more than computing them, and those rows fall back to the
//! float rendering with `repr = exact_rounded`.

use std::io::Write;
use std::path::Path;

use posterior_dynamics::diagnostics::DiagnosticsReport;
use posterior_dynamics::exact::{format_rational, Rational};
use posterior_dynamics::psi::PsiSequence;
use serde_json::Value as Json;

use crate::{CliError, CliResult};

/// Largest stored numerator-plus-denominator size rendered as `p/q`.
pub const RATIONAL_RENDER_BITS: u64 = 65_536;

pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

fn renderable(r: &Rational) -> bool {
    r.numer().bits() + r.denom().bits() <= RATIONAL_RENDER_BITS
}

/// `(text, repr)` for one value of the sequence.
pub fn psi_cell(seq: &PsiSequence, i: usize) -> (String, &'static str) {
    match &seq.exact {
        Some(v) if renderable(&v[i]) => (format_rational(&v[i]), "rational"),
        Some(_) => (fmt_f64(seq.psi_f64(i)), "exact_rounded"),
        None => (fmt_f64(seq.psi_f64(i)), "float"),
    }
}

/// CSV with columns `n, psi, log_psi, is_mode, lc_violation, method, repr`.
pub fn psi_csv(seq: &PsiSequence, report: &DiagnosticsReport) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let to_err = |e: csv::Error| CliError::Schema(format!("csv: {e}"));
    w.write_record(["n", "psi", "log_psi", "is_mode", "lc_violation", "method", "repr"]).map_err(to_err)?;
    let modes: std::collections::BTreeSet<u64> = report.modes.iter().copied().collect();
    let lc: std::collections::BTreeSet<u64> = report.log_concavity_violations.iter().copied().collect();
    for i in 0..seq.len() {
        let n = seq.n_at(i);
        let (psi, repr) = psi_cell(seq, i);
        w.write_record([
            n.to_string(),
            psi,
            fmt_f64(seq.ln_psi[i]),
            (modes.contains(&n) as u8).to_string(),
            (lc.contains(&n) as u8).to_string(),
            seq.method.name().to_string(),
            repr.to_string(),
        ])
        .map_err(to_err)?;
    }
    w.into_inner().map_err(|e| CliError::Schema(format!("csv: {e}")))
}

/// Pretty JSON with sorted keys and floats in the fixed 17-digit form.
pub fn canonical_json(v: &Json) -> String {
    let mut out = String::new();
    emit(v, 0, &mut out);
    out.push('\n');
    out
}

fn emit(v: &Json, depth: usize, out: &mut String) {
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Json::Null | Json::Bool(_) | Json::String(_) => out.push_str(&v.to_string()),
        Json::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
            (Some(i), _, _) => out.push_str(&i.to_string()),
            (_, Some(u), _) => out.push_str(&u.to_string()),
            (_, _, Some(f)) if f.is_finite() => out.push_str(&fmt_f64(f)),
            _ => out.push_str("null"),
        },
        Json::Array(a) if a.is_empty() => out.push_str("[]"),
        Json::Array(a) => {
            let scalar = a.iter().all(|x| !x.is_array() && !x.is_object());
            if scalar {
                out.push('[');
                for (i, x) in a.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    emit(x, depth, out);
                }
                out.push(']');
            } else {
                out.push_str("[\n");
                for (i, x) in a.iter().enumerate() {
                    out.push_str(&pad(depth + 1));
                    emit(x, depth + 1, out);
                    out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
                }
                out.push_str(&pad(depth));
                out.push(']');
            }
        }
        Json::Object(m) if m.is_empty() => out.push_str("{}"),
        Json::Object(m) => {
            out.push_str("{\n");
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            for (i, k) in keys.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&Json::String((*k).clone()).to_string());
                out.push_str(": ");
                emit(&m[k.as_str()], depth + 1, out);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
    }
}

/// Write `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(path, e))?;
    // temp files are created owner-only; outputs should look like ordinary files
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file().set_permissions(std::fs::Permissions::from_mode(0o644)).map_err(|e| CliError::io(path, e))?;
    }
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}
