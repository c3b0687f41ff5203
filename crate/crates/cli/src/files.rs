//! JSON fan and divisor files.

use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Number;

use toricfan::divisor::ToricDivisor;
use toricfan::exactlin::LatticeVector;
use toricfan::fan::Fan;

use crate::report::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanFile {
    pub dim: usize,
    pub rays: Vec<Vec<Number>>,
    pub max_cones: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorFile {
    pub coefficients: Vec<Number>,
}

pub fn number(b: &BigInt) -> Number {
    b.to_string()
        .parse()
        .expect("integers are valid JSON numbers")
}

fn integer(n: &Number, what: &str) -> Result<BigInt, CliError> {
    n.to_string()
        .parse()
        .map_err(|_| CliError::Input(format!("{what}: {n} is not an integer")))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// A parsed fan plus the warnings produced on the way.
pub struct LoadedFan {
    pub fan: Fan,
    pub labels: Option<Vec<String>>,
    pub warnings: Vec<String>,
}

pub fn parse_fan(text: &str, origin: &str) -> Result<LoadedFan, CliError> {
    let file: FanFile =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("{origin}: {e}")))?;
    if file.dim == 0 {
        return Err(CliError::Input(format!("{origin}: dim must be at least 1")));
    }
    if let Some(labels) = &file.labels {
        if labels.len() != file.rays.len() {
            return Err(CliError::Input(format!(
                "{origin}: {} labels for {} rays",
                labels.len(),
                file.rays.len()
            )));
        }
    }
    let mut warnings = Vec::new();
    let mut rays = Vec::with_capacity(file.rays.len());
    for (i, r) in file.rays.iter().enumerate() {
        let coords = r
            .iter()
            .map(|x| integer(x, &format!("{origin}: ray {i}")))
            .collect::<Result<Vec<_>, _>>()?;
        let v = LatticeVector::new(coords);
        if v.dim() != file.dim {
            return Err(CliError::Input(format!(
                "{origin}: ray {i} has {} coordinates, dim is {}",
                v.dim(),
                file.dim
            )));
        }
        let p = v
            .primitive()
            .map_err(|e| CliError::Input(format!("{origin}: ray {i}: {e}")))?;
        if p != v {
            warnings.push(format!(
                "ray {i}: {v} replaced by its primitive generator {p}"
            ));
        }
        rays.push(p);
    }
    let fan = Fan::new(file.dim, rays, file.max_cones)?;
    Ok(LoadedFan {
        fan,
        labels: file.labels,
        warnings,
    })
}

pub fn load_fan(path: &Path) -> Result<LoadedFan, CliError> {
    parse_fan(&read(path)?, &path.display().to_string())
}

pub fn fan_file(f: &Fan, labels: Option<Vec<String>>) -> FanFile {
    FanFile {
        dim: f.ambient_rank(),
        rays: f
            .rays()
            .iter()
            .map(|r| r.coords().iter().map(number).collect())
            .collect(),
        max_cones: f.max_cones().to_vec(),
        labels,
    }
}

pub fn emit_fan(path: &Path, f: &Fan, labels: Option<Vec<String>>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(&fan_file(f, labels)).expect("serializable");
    std::fs::write(path, text + "\n")
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn load_divisor(path: &Path, f: &Fan) -> Result<ToricDivisor, CliError> {
    let origin = path.display().to_string();
    let file: DivisorFile = serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::Input(format!("{origin}: {e}")))?;
    let coefficients = file
        .coefficients
        .iter()
        .enumerate()
        .map(|(i, x)| integer(x, &format!("{origin}: coefficient {i}")))
        .collect::<Result<Vec<_>, _>>()?;
    if coefficients.len() != f.rays().len() {
        return Err(CliError::Input(format!(
            "{origin}: {} coefficients, fan has {} rays",
            coefficients.len(),
            f.rays().len()
        )));
    }
    Ok(ToricDivisor::new(coefficients))
}
