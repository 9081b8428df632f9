use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use cpmaps::channel::{AnyMap, LinearMap};
use cpmaps::matrix::ComplexMatrix;
use cpmaps::{KrausChannel, SuperOperator};

use crate::{Failure, Shared, EXIT_DIMENSION, EXIT_PARSE};

pub const MAX_DIM: usize = 16;

fn read_value(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: malformed JSON: {e}", path.display())))
}

fn decode<T: DeserializeOwned>(path: &Path, what: &str, v: Value) -> Result<T, Failure> {
    serde_json::from_value(v).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: invalid {what}: {e}", path.display())))
}

pub fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T, Failure> {
    decode(path, what, read_value(path)?)
}

/// A channel is `{"dim", "kraus"}` or `{"dim", "transfer"}`; an analyze report is
/// accepted through its `channel` field.
fn channel_from_value(path: &Path, v: Value) -> Result<AnyMap, Failure> {
    let Value::Object(map) = &v else {
        return Err(Failure::new(EXIT_PARSE, format!("{}: expected a JSON object with field `kraus` or `transfer`", path.display())));
    };
    if map.contains_key("kraus") {
        Ok(AnyMap::Kraus(decode::<KrausChannel>(path, "channel", v)?))
    } else if map.contains_key("transfer") {
        Ok(AnyMap::Super(decode::<SuperOperator>(path, "superoperator", v)?))
    } else if let Some(inner) = map.get("channel") {
        channel_from_value(path, inner.clone())
    } else {
        Err(Failure::new(EXIT_PARSE, format!("{}: missing field `kraus` (or `transfer`)", path.display())))
    }
}

pub fn read_channel(path: &Path) -> Result<AnyMap, Failure> {
    let map = channel_from_value(path, read_value(path)?)?;
    check_dim(map.dim())?;
    Ok(map)
}

pub fn check_dim(d: usize) -> Result<(), Failure> {
    if d > MAX_DIM {
        return Err(Failure::new(EXIT_DIMENSION, format!("dimension {d} exceeds the limit {MAX_DIM}")));
    }
    Ok(())
}

/// A matrix file, or `{"diag": [...]}` for a real diagonal matrix.
pub fn read_matrix(path: &Path) -> Result<ComplexMatrix, Failure> {
    let v = read_value(path)?;
    if let Some(diag) = v.get("diag") {
        let entries: Vec<f64> = decode(path, "field `diag`", diag.clone())?;
        if entries.is_empty() {
            return Err(Failure::new(EXIT_PARSE, format!("{}: field `diag` is empty", path.display())));
        }
        return Ok(ComplexMatrix::real_diag(&entries));
    }
    let m: ComplexMatrix = decode(path, "matrix", v)?;
    check_dim(m.dim())?;
    Ok(m)
}

pub fn emit<T: Serialize>(value: &T, shared: &Shared) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::new(1, e.to_string()))?;
    text.push('\n');
    match &shared.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::new(1, format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
