use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{ArgMatches, Command};
use serde_json::Value;

use crate::error::{Error, Result};

fn normalize(key: &str) -> String {
    key.trim().replace('_', "-")
}

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::InvalidArgument(format!(
                "config line {}: expected key=value, got '{line}'",
                i + 1
            ))
        })?;
        out.push((normalize(k), v.trim().to_string()));
    }
    Ok(out)
}

fn config_path(args: &[OsString]) -> Result<Option<PathBuf>> {
    for (i, a) in args.iter().enumerate() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return args
                .get(i + 1)
                .map(|p| Some(PathBuf::from(p)))
                .ok_or_else(|| Error::InvalidArgument("--config needs a file".into()));
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Ok(Some(PathBuf::from(p)));
        }
    }
    Ok(None)
}

/// Merges a `--config` file into the argument list. Keys name long options
/// of the subcommand; a key present in the file replaces every occurrence of
/// that option on the command line.
pub fn expand_config(cmd: &Command, args: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(path) = config_path(&args)? else {
        return Ok(args);
    };
    let Some(sub_name) = args.get(1).map(|s| s.to_string_lossy().into_owned()) else {
        return Ok(args);
    };
    let Some(sub) = cmd.find_subcommand(&sub_name) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let entries = parse_config(&text)?;

    let mut extra = Vec::new();
    let mut overridden = Vec::new();
    for (key, value) in entries {
        if key == "config" {
            return Err(Error::InvalidArgument(
                "config files cannot include other config files".into(),
            ));
        }
        let arg = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()))
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "config key '{key}' is not an option of '{sub_name}'"
                ))
            })?;
        let takes_values = arg.get_action().takes_values();
        overridden.push((key.clone(), takes_values));
        if takes_values {
            extra.push(OsString::from(format!("--{key}")));
            extra.push(OsString::from(value));
        } else {
            match value.as_str() {
                "true" | "1" | "yes" => extra.push(OsString::from(format!("--{key}"))),
                "false" | "0" | "no" => {}
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "config key '{key}' is a flag; expected true or false, got '{value}'"
                    )))
                }
            }
        }
    }

    let mut kept = Vec::with_capacity(args.len() + extra.len());
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy().into_owned();
        let hit = overridden
            .iter()
            .find(|(k, _)| s == format!("--{k}") || s.starts_with(&format!("--{k}=")));
        match hit {
            Some((k, true)) if s == format!("--{k}") => {
                it.next();
            }
            Some(_) => {}
            None => kept.push(a),
        }
    }
    kept.extend(extra);
    Ok(kept)
}

/// Every argument value the command ran with, keyed by long option name.
/// Feeding [`config_lines`] of this map back through `--config` reruns the
/// command exactly.
pub fn echo(cmd: &Command, matches: &ArgMatches, skip: &[&str]) -> BTreeMap<String, Value> {
    let mut out = BTreeMap::new();
    for id in matches.ids() {
        if !cmd.get_arguments().any(|a| a.get_id() == id) {
            continue;
        }
        let key = normalize(id.as_str());
        if skip.contains(&key.as_str()) {
            continue;
        }
        let Ok(Some(raw)) = matches.try_get_raw(id.as_str()) else {
            continue;
        };
        let values: Vec<Value> = raw
            .map(|v| Value::String(v.to_string_lossy().into_owned()))
            .collect();
        let value = if values.len() > 1 {
            Value::Array(values)
        } else {
            values.into_iter().next().unwrap_or(Value::Null)
        };
        out.insert(key, value);
    }
    out
}

/// Renders an echo map as a config file.
pub fn config_lines(echo: &BTreeMap<String, Value>) -> String {
    let mut s = String::new();
    for (k, v) in echo {
        match v {
            Value::Array(items) => {
                for item in items {
                    s.push_str(&format!("{k}={}\n", item.as_str().unwrap_or_default()));
                }
            }
            Value::String(x) => s.push_str(&format!("{k}={x}\n")),
            other => s.push_str(&format!("{k}={other}\n")),
        }
    }
    s
}
