//! State files: `{"dims": [...], "transpose_set": [...], "entries": [[re, im], ...]}`
//! with entries in row-major order.

use std::path::Path;

use serde_json::{json, Value};

use pptgeo_core::{Capacity, ComplexMatrix, FactoredState, HermitianOperator, C64};

use crate::error::{io, CliError, Result};

/// Largest entrywise deviation from Hermiticity accepted on input.
pub const INPUT_HERMITIAN_TOL: f64 = 1e-9;

pub fn complex_json(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn matrix_json(m: &ComplexMatrix) -> Value {
    Value::Array((0..m.rows()).map(|r| Value::Array(m.row(r).iter().map(|&z| complex_json(z)).collect())).collect())
}

pub fn state_json(s: &FactoredState) -> Value {
    json!({
        "dims": s.factor_dims(),
        "transpose_set": s.transpose_set(),
        "entries": s.matrix().as_slice().iter().map(|&z| complex_json(z)).collect::<Vec<_>>(),
    })
}

fn usize_list(v: &Value, key: &str) -> std::result::Result<Vec<usize>, String> {
    v.get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| format!("missing array {key:?}"))?
        .iter()
        .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| format!("{key:?} must hold non-negative integers")))
        .collect()
}

/// Parses a state object, or an object carrying one under `"state"`.
/// Non-Hermitian input beyond [`INPUT_HERMITIAN_TOL`] is rejected, as are
/// inputs that are not unit-trace PSD.
pub fn state_from_json(v: &Value, cap: Capacity) -> std::result::Result<FactoredState, String> {
    let v = v.get("state").unwrap_or(v);
    let dims = usize_list(v, "dims")?;
    let transpose_set = usize_list(v, "transpose_set")?;
    let n = cap.checked_product(&dims).map_err(|e| e.to_string())?;
    let entries = v.get("entries").and_then(Value::as_array).ok_or("missing array \"entries\"")?;
    if entries.len() != n * n {
        return Err(format!("expected {} entries for dimension {n}, got {}", n * n, entries.len()));
    }
    let data = entries
        .iter()
        .map(|e| match e.as_array().map(|p| p.iter().map(Value::as_f64).collect::<Vec<_>>()).as_deref() {
            Some([Some(re), Some(im)]) => Ok(C64::new(*re, *im)),
            _ => Err(format!("entry {e} is not a [re, im] pair")),
        })
        .collect::<std::result::Result<Vec<_>, String>>()?;
    let m = ComplexMatrix::from_vec(n, n, data).map_err(|e| e.to_string())?;
    let op = HermitianOperator::with_tolerance(m, INPUT_HERMITIAN_TOL).map_err(|e| e.to_string())?;
    FactoredState::new(op, dims, transpose_set).map_err(|e| e.to_string())
}

pub fn read_state(path: &Path, cap: Capacity) -> Result<FactoredState> {
    let text = std::fs::read_to_string(path).map_err(io(path))?;
    let bad = |msg: String| CliError::Format { path: path.to_path_buf(), msg };
    let v: Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    state_from_json(&v, cap).map_err(bad)
}
