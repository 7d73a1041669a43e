//! JSON run configuration: loading, flag overrides, key-path errors and the
//! `meta.json` written next to every output.
//!
//! A config file is `{"schema_version": 1, "command": "...", "settings": {...}}`.
//! A `meta.json` emitted by a previous run has the same shape plus provenance
//! keys, so it can be passed back through `--config` to repeat the run.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{usage, CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable naming the directory outputs go to when no `--out`
/// is given. Each command writes to a subdirectory named after itself.
pub const OUT_ENV: &str = "APCASCADE_OUT";

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    schema_version: u32,
    command: String,
    #[serde(default)]
    settings: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tool: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tool_version: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seeds: Option<Value>,
}

pub fn default_out(command: &str) -> PathBuf {
    let base = std::env::var_os(OUT_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("apcascade-out"));
    base.join(command)
}

/// Reads the `settings` object of a config file written for `command`.
pub fn load_settings(path: &Path, command: &str) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    let file: ConfigFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let inner = e.inner();
        usage(format!(
            "{}:{}: config key `{}`: {inner}",
            path.display(),
            inner.line(),
            e.path()
        ))
    })?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(usage(format!(
            "{}: config key `schema_version`: expected {SCHEMA_VERSION}, found {}",
            path.display(),
            file.schema_version
        )));
    }
    if file.command != command {
        return Err(usage(format!(
            "{}: config key `command`: file is for `{}`, not `{command}`",
            path.display(),
            file.command
        )));
    }
    match file.settings {
        Value::Object(_) => Ok(file.settings),
        Value::Null => Ok(Value::Object(Map::new())),
        _ => Err(usage(format!("{}: config key `settings`: expected an object", path.display()))),
    }
}

/// Flag values to lay over the config, keyed by their path in `settings`.
#[derive(Debug, Default)]
pub struct Overrides(Vec<(Vec<&'static str>, Value)>);

impl Overrides {
    pub fn set(&mut self, path: &[&'static str], value: impl Serialize) {
        let v = serde_json::to_value(value).expect("flag values serialise");
        self.0.push((path.to_vec(), v));
    }

    pub fn set_opt<T: Serialize>(&mut self, path: &[&'static str], value: Option<T>) {
        if let Some(v) = value {
            self.set(path, v);
        }
    }
}

fn insert_at(root: &mut Value, path: &[&str], value: Value) {
    let mut cur = root;
    for (i, key) in path.iter().enumerate() {
        if !cur.is_object() {
            *cur = Value::Object(Map::new());
        }
        let obj = cur.as_object_mut().unwrap();
        if i + 1 == path.len() {
            obj.insert((*key).to_string(), value);
            return;
        }
        cur = obj.entry((*key).to_string()).or_insert_with(|| Value::Object(Map::new()));
    }
}

/// Builds the settings for a command: `defaults`, then the config file
/// (if any), then flags. Errors name the offending key path.
pub fn resolve<T: DeserializeOwned>(
    config: Option<&Path>,
    command: &str,
    defaults: &[(&[&'static str], Value)],
    overrides: Overrides,
) -> CliResult<T> {
    let mut settings = Value::Object(Map::new());
    for (path, v) in defaults {
        insert_at(&mut settings, path, v.clone());
    }
    if let Some(path) = config {
        merge(&mut settings, load_settings(path, command)?);
    }
    for (path, v) in overrides.0 {
        insert_at(&mut settings, &path, v);
    }
    serde_path_to_error::deserialize(settings).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            usage(format!("config: {}", e.inner()))
        } else {
            usage(format!("config key `{path}`: {}", e.inner()))
        }
    })
}

fn merge(into: &mut Value, from: Value) {
    match (into, from) {
        (Value::Object(a), Value::Object(b)) => {
            for (k, v) in b {
                match a.get_mut(&k) {
                    Some(slot) if slot.is_object() && v.is_object() => merge(slot, v),
                    _ => {
                        a.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

/// Rejects a state component outside `[0, 1]`, naming its key.
pub fn check_unit(key: &str, v: f64) -> CliResult<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(usage(format!("config key `{key}`: {v} is outside its legal range [0, 1]")))
    }
}

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::Data(format!("cannot create {}: {e}", dir.display())))
}

/// Writes `meta.json`: the resolved settings plus provenance.
pub fn write_meta(dir: &Path, command: &str, settings: &impl Serialize, seeds: Value) -> CliResult<()> {
    let meta = ConfigFile {
        schema_version: SCHEMA_VERSION,
        command: command.to_string(),
        settings: serde_json::to_value(settings).expect("settings serialise"),
        tool: Some("apcascade".into()),
        tool_version: Some(env!("CARGO_PKG_VERSION").into()),
        seeds: Some(seeds),
    };
    let text = serde_json::to_string_pretty(&meta).expect("meta serialises") + "\n";
    write_file(&dir.join("meta.json"), text.as_bytes())
}

pub fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Demo {
        params: apcascade::ModelParams,
        #[serde(default)]
        seed: u64,
    }

    #[test]
    fn flags_beat_config_and_errors_name_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        fs::write(
            &path,
            r#"{"schema_version":1,"command":"demo","settings":{"params":{"alpha":0.8,"beta":0.7,"red_fraction":0.5},"seed":7}}"#,
        )
        .unwrap();
        let mut o = Overrides::default();
        o.set(&["seed"], 42u64);
        let d: Demo = resolve(Some(&path), "demo", &[], o).unwrap();
        assert_eq!(d.seed, 42);
        assert_eq!(d.params.alpha(), 0.8);

        let mut o = Overrides::default();
        o.set(&["params", "alpha"], 1.5);
        let e = resolve::<Demo>(Some(&path), "demo", &[], o).unwrap_err().to_string();
        assert!(e.contains("alpha") && e.contains("[0, 1]"), "{e}");

        let e = resolve::<Demo>(Some(&path), "other", &[], Overrides::default()).unwrap_err();
        assert_eq!(e.exit_code(), 1);

        let mut o = Overrides::default();
        o.set(&["params", "gamma"], 1.0);
        let e = resolve::<Demo>(Some(&path), "demo", &[], o).unwrap_err().to_string();
        assert!(e.contains("params") && e.contains("gamma"), "{e}");
    }
}
