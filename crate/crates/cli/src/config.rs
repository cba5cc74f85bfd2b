//! Flat key-value experiment configs.
//!
//! Values come from built-in defaults, then the config file, then `--set`
//! overrides, then dedicated flags such as `--seed`. Every key must be known
//! to the selected experiment.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use toml::Value;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Ground,
    QuenchUniform,
    QuenchDisorder,
    ThermalBound,
    PhaseDiagram,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Ground => "ground",
            Experiment::QuenchUniform => "quench-uniform",
            Experiment::QuenchDisorder => "quench-disorder",
            Experiment::ThermalBound => "thermal-bound",
            Experiment::PhaseDiagram => "phase-diagram",
        }
    }

    /// Accepted keys with their kinds and defaults.
    pub fn schema(&self) -> Vec<KeySpec> {
        use Kind::*;
        let mut keys = vec![KeySpec::new("seed", Int, Some(Value::Integer(0)), "master seed"),
            KeySpec::new("plots", Bool, Some(Value::Boolean(false)), "also write SVG line charts")];
        let more = match self {
            Experiment::Ground => vec![
                KeySpec::new("lambdas", FloatList, Some(floats(&[0.5, 1.0, 1.5])), "field strengths λ/J"),
                KeySpec::new("l_region", Int, Some(Value::Integer(64)), "region side L; w_D for D < L"),
                KeySpec::new("n_sites", Int, None, "chain length N (default 5L, rounded up to even)"),
            ],
            Experiment::PhaseDiagram => vec![
                KeySpec::new("lambda_x", FloatList, Some(floats(&[0.5, 1.5])), "electric field grid"),
                KeySpec::new("lambda_z", FloatList, Some(floats(&[0.5, 1.5])), "magnetic field grid"),
                KeySpec::new("j_a", Float, Some(Value::Float(1.0)), "star coupling J^A"),
                KeySpec::new("j_b", Float, Some(Value::Float(1.0)), "plaquette coupling J^B"),
                KeySpec::new("l_values", IntList, Some(ints(&[16, 24, 32, 48, 64])), "region sizes L"),
                KeySpec::new("n_per_l", Int, Some(Value::Integer(5)), "chain length per region side, N = n_per_l·L"),
                KeySpec::new("fit_window", IntList, None, "[L_min, L_max] (default: upper half of l_values)"),
            ],
            Experiment::QuenchUniform => vec![
                KeySpec::new("lambda0", Float, Some(Value::Float(0.0)), "initial field"),
                KeySpec::new("lambda", Float, Some(Value::Float(0.5)), "field after the quench"),
                KeySpec::new("n_sites", Int, Some(Value::Integer(400)), "chain length N"),
                KeySpec::new("d_max", Int, Some(Value::Integer(8)), "largest string length d"),
                KeySpec::new("t_min", Float, Some(Value::Float(400.0)), "first time"),
                KeySpec::new("t_max", Float, Some(Value::Float(500.0)), "last time"),
                KeySpec::new("n_times", Int, Some(Value::Integer(20)), "evenly spaced times"),
            ],
            Experiment::QuenchDisorder => vec![
                KeySpec::new("delta_j", FloatList, Some(floats(&[0.0, 0.5])), "disorder widths δJ"),
                KeySpec::new("j", Float, Some(Value::Float(1.0)), "mean coupling J"),
                KeySpec::new("lambda", Float, Some(Value::Float(0.5)), "field after the quench"),
                KeySpec::new("l_region", Int, Some(Value::Integer(40)), "region side L"),
                KeySpec::new("n_sites", Int, None, "chain length N (default 5L, rounded up to even)"),
                KeySpec::new("n_realizations", Int, Some(Value::Integer(100)), "disorder realizations"),
                KeySpec::new("times", FloatList, Some(floats(&[1000.0])), "evaluation times; the last one is fitted"),
                KeySpec::new("fit_window", IntList, None, "[L_min, L_max] (default: upper half of 1..=L)"),
                KeySpec::new("inner_parallel", Bool, Some(Value::Boolean(false)), "parallelize inside realizations"),
            ],
            Experiment::ThermalBound => vec![
                KeySpec::new("j", Float, Some(Value::Float(1.0)), "coupling J"),
                KeySpec::new("temperatures", FloatList, Some(floats(&[0.5, 1.0, 2.0])), "temperatures T"),
                KeySpec::new("l_values", IntList, Some(ints(&[10, 100, 200, 400, 1000, 10_000])), "region sizes L"),
            ],
        };
        keys.extend(more);
        keys
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn floats(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| Value::Float(x)).collect())
}

fn ints(xs: &[i64]) -> Value {
    Value::Array(xs.iter().map(|&x| Value::Integer(x)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Int,
    Float,
    Bool,
    FloatList,
    IntList,
}

#[derive(Clone, Debug)]
pub struct KeySpec {
    pub name: &'static str,
    pub kind: Kind,
    pub default: Option<Value>,
    pub help: &'static str,
}

impl KeySpec {
    fn new(name: &'static str, kind: Kind, default: Option<Value>, help: &'static str) -> Self {
        Self {
            name,
            kind,
            default,
            help,
        }
    }
}

/// Checks `v` against `kind`, widening integers to floats where needed.
fn coerce(key: &str, kind: Kind, v: Value) -> Result<Value, CliError> {
    let bad = |v: &Value| CliError::Config(format!("`{key}` expects {kind:?}, got `{v}`"));
    let to_float = |v: &Value| match v {
        Value::Float(x) => Some(*x),
        Value::Integer(i) => Some(*i as f64),
        _ => None,
    };
    match kind {
        Kind::Int => match v {
            Value::Integer(_) => Ok(v),
            _ => Err(bad(&v)),
        },
        Kind::Bool => match v {
            Value::Boolean(_) => Ok(v),
            _ => Err(bad(&v)),
        },
        Kind::Float => to_float(&v).map(Value::Float).ok_or_else(|| bad(&v)),
        Kind::FloatList => match &v {
            Value::Array(items) => items
                .iter()
                .map(|x| to_float(x).map(Value::Float))
                .collect::<Option<Vec<_>>>()
                .map(Value::Array)
                .ok_or_else(|| bad(&v)),
            _ => to_float(&v).map(|x| Value::Array(vec![Value::Float(x)])).ok_or_else(|| bad(&v)),
        },
        Kind::IntList => match &v {
            Value::Array(items) if items.iter().all(|x| x.is_integer()) => Ok(v),
            Value::Integer(_) => Ok(Value::Array(vec![v])),
            _ => Err(bad(&v)),
        },
    }
}

/// A fully resolved configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    values: BTreeMap<String, Value>,
}

impl ExperimentConfig {
    /// Resolves defaults, then `file_text`, then `overrides` (`key=value`),
    /// then `seed`.
    pub fn resolve(
        experiment: Experiment,
        file_text: Option<&str>,
        overrides: &[String],
        seed: Option<u64>,
    ) -> Result<Self, CliError> {
        let schema = experiment.schema();
        let lookup = |key: &str| -> Result<&KeySpec, CliError> {
            schema.iter().find(|k| k.name == key).ok_or_else(|| {
                let known: Vec<&str> = schema.iter().map(|k| k.name).collect();
                CliError::Config(format!(
                    "unknown key `{key}` for `{experiment}` (known: {})",
                    known.join(", ")
                ))
            })
        };

        let mut values = BTreeMap::new();
        for k in &schema {
            if let Some(d) = &k.default {
                values.insert(k.name.to_string(), d.clone());
            }
        }
        if let Some(text) = file_text {
            let table: toml::Table = text
                .parse()
                .map_err(|e| CliError::Config(format!("config file: {e}")))?;
            for (key, v) in table {
                let spec = lookup(&key)?;
                values.insert(key.clone(), coerce(&key, spec.kind, v)?);
            }
        }
        for item in overrides {
            let (key, raw) = item
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("`--set {item}`: expected key=value")))?;
            let key = key.trim();
            let spec = lookup(key)?;
            let parsed: toml::Table = format!("v = {}", raw.trim())
                .parse()
                .map_err(|e| CliError::Config(format!("`--set {item}`: {e}")))?;
            let v = parsed.get("v").cloned().expect("parsed key");
            values.insert(key.to_string(), coerce(key, spec.kind, v)?);
        }
        if let Some(s) = seed {
            let s = i64::try_from(s)
                .map_err(|_| CliError::Config(format!("seed {s} does not fit the config's signed 64-bit integers")))?;
            values.insert("seed".into(), Value::Integer(s));
        }
        Ok(Self { experiment, values })
    }

    pub fn values(&self) -> &BTreeMap<String, Value> {
        &self.values
    }

    fn get(&self, key: &str) -> Option<&Value> {
        self.values.get(key)
    }

    pub fn float(&self, key: &str) -> f64 {
        self.get(key).and_then(Value::as_float).unwrap_or_else(|| panic!("float key {key}"))
    }

    pub fn boolean(&self, key: &str) -> bool {
        self.get(key).and_then(Value::as_bool).unwrap_or_else(|| panic!("bool key {key}"))
    }

    /// A nonnegative integer; negative values are config errors.
    pub fn uint(&self, key: &str) -> Result<usize, CliError> {
        self.opt_uint(key)?
            .ok_or_else(|| CliError::Config(format!("`{key}` is required")))
    }

    pub fn opt_uint(&self, key: &str) -> Result<Option<usize>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => {
                let i = v.as_integer().unwrap_or_else(|| panic!("int key {key}"));
                usize::try_from(i)
                    .map(Some)
                    .map_err(|_| CliError::Config(format!("`{key}` must be nonnegative, got {i}")))
            }
        }
    }

    pub fn seed(&self) -> u64 {
        self.get("seed").and_then(Value::as_integer).expect("seed") as u64
    }

    pub fn floats(&self, key: &str) -> Vec<f64> {
        self.get(key)
            .and_then(Value::as_array)
            .map(|a| a.iter().filter_map(Value::as_float).collect())
            .unwrap_or_default()
    }

    pub fn uints(&self, key: &str) -> Result<Option<Vec<usize>>, CliError> {
        match self.get(key).and_then(Value::as_array) {
            None => Ok(None),
            Some(a) => a
                .iter()
                .map(|v| {
                    let i = v.as_integer().expect("int list");
                    usize::try_from(i)
                        .map_err(|_| CliError::Config(format!("`{key}` entries must be nonnegative, got {i}")))
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Some),
        }
    }

    /// Optional `[lo, hi]` window.
    pub fn window(&self, key: &str) -> Result<Option<(usize, usize)>, CliError> {
        match self.uints(key)? {
            None => Ok(None),
            Some(w) if w.len() == 2 && w[0] <= w[1] => Ok(Some((w[0], w[1]))),
            Some(w) => Err(CliError::Config(format!("`{key}` must be [lo, hi] with lo ≤ hi, got {w:?}"))),
        }
    }

    /// The resolved values as a TOML table, keys sorted.
    pub fn to_toml(&self) -> String {
        let table: toml::Table = self.values.clone().into_iter().collect();
        toml::to_string(&table).expect("serializable config")
    }
}

/// Reads a config file.
pub fn read_config_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_then_file_then_overrides() {
        let c = ExperimentConfig::resolve(
            Experiment::Ground,
            Some("l_region = 10\nlambdas = [0.1, 2]\n"),
            &["l_region=12".into()],
            Some(9),
        )
        .unwrap();
        assert_eq!(c.uint("l_region").unwrap(), 12);
        assert_eq!(c.floats("lambdas"), vec![0.1, 2.0]);
        assert_eq!(c.seed(), 9);
        assert_eq!(c.opt_uint("n_sites").unwrap(), None);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let e = ExperimentConfig::resolve(Experiment::Ground, Some("l_regoin = 4"), &[], None);
        assert!(matches!(e, Err(CliError::Config(m)) if m.contains("l_regoin")));
        let e = ExperimentConfig::resolve(Experiment::ThermalBound, None, &["lambda=1".into()], None);
        assert!(matches!(e, Err(CliError::Config(_))));
    }

    #[test]
    fn kinds_are_checked() {
        for bad in ["l_region=1.5", "lambdas=\"a\"", "plots=1", "l_region"] {
            let e = ExperimentConfig::resolve(Experiment::Ground, None, &[bad.into()], None);
            assert!(matches!(e, Err(CliError::Config(_))), "{bad}");
        }
        let c = ExperimentConfig::resolve(Experiment::Ground, None, &["lambdas=1".into()], None).unwrap();
        assert_eq!(c.floats("lambdas"), vec![1.0]);
        let c = ExperimentConfig::resolve(Experiment::Ground, None, &["l_region=-3".into()], None).unwrap();
        assert!(c.uint("l_region").is_err());
    }

    #[test]
    fn manifest_table_round_trips() {
        let c = ExperimentConfig::resolve(Experiment::QuenchDisorder, None, &[], Some(3)).unwrap();
        let again = ExperimentConfig::resolve(Experiment::QuenchDisorder, Some(&c.to_toml()), &[], None).unwrap();
        assert_eq!(c, again);
    }
}
