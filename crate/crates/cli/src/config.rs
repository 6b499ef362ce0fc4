//! `--config FILE` support.
//!
//! A config file is a JSON object whose keys are flag names (underscores
//! may stand for dashes) plus a `subcommand` key. The file is turned into
//! `--flag=value` tokens placed ahead of the flags typed on the command
//! line; a key whose flag is also typed is dropped, so typed flags win and
//! every value goes through the same parser either way.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::args::Command;
use crate::error::CliError;

/// Rewrites `argv` so that it no longer mentions `--config`.
pub fn expand(argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let (path, mut rest) = take_config(argv)?;
    let Some(path) = path else {
        return Ok(rest);
    };
    let prog = if rest.is_empty() {
        OsString::from("fracvar")
    } else {
        rest.remove(0)
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::usage(format!("--config {}: {e}", path.display())))?;
    let (file_sub, tokens) = tokens_from_json(&text, &path)?;

    let typed_sub = rest
        .first()
        .and_then(|t| t.to_str())
        .filter(|t| Command::NAMES.contains(t))
        .map(str::to_owned);
    let typed_flags = if typed_sub.is_some() {
        rest.split_off(1)
    } else {
        rest
    };
    let Some(sub) = typed_sub.or(file_sub) else {
        return Err(missing_subcommand());
    };
    let typed: BTreeSet<String> = typed_flags
        .iter()
        .filter_map(|t| t.to_str()?.strip_prefix("--"))
        .map(|t| t.split('=').next().unwrap_or(t).to_owned())
        .collect();

    let mut out = vec![prog, OsString::from(sub)];
    out.extend(
        tokens
            .into_iter()
            .filter(|(flag, _)| !typed.contains(flag))
            .map(|(_, token)| OsString::from(token)),
    );
    out.extend(typed_flags);
    Ok(out)
}

pub fn missing_subcommand() -> CliError {
    CliError::usage(format!(
        "missing subcommand: give one of {} on the command line or a \"subcommand\" field in --config",
        Command::NAMES.join(", ")
    ))
}

/// Splits the `--config` path off the other tokens.
fn take_config(argv: Vec<OsString>) -> Result<(Option<PathBuf>, Vec<OsString>), CliError> {
    let mut path = None;
    let mut rest = Vec::with_capacity(argv.len());
    let mut it = argv.into_iter();
    while let Some(tok) = it.next() {
        match tok.to_str() {
            Some("--config") => {
                let value = it
                    .next()
                    .ok_or_else(|| CliError::usage("--config needs a file path".into()))?;
                path = Some(value.into());
            }
            Some(s) if s.starts_with("--config=") => path = Some(s["--config=".len()..].into()),
            _ => rest.push(tok),
        }
    }
    Ok((path, rest))
}

fn scalar(key: &str, v: &Value) -> Result<String, CliError> {
    match v {
        Value::Number(n) => Ok(n.to_string()),
        Value::String(s) => Ok(s.clone()),
        Value::Array(items) => items
            .iter()
            .map(|item| match item {
                Value::Number(n) => Ok(n.to_string()),
                _ => Err(CliError::usage(format!(
                    "config field '{key}': expected numbers in the inner list"
                ))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(|parts| parts.join(",")),
        other => Err(CliError::usage(format!(
            "config field '{key}': unsupported value {other}"
        ))),
    }
}

/// Subcommand named in a config file and one `(flag, token)` pair per value.
type FileTokens = (Option<String>, Vec<(String, String)>);

fn tokens_from_json(text: &str, path: &Path) -> Result<FileTokens, CliError> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| CliError::usage(format!("--config {}: {e}", path.display())))?;
    let Value::Object(map) = value else {
        return Err(CliError::usage(format!(
            "--config {}: expected a JSON object",
            path.display()
        )));
    };
    let mut sub = None;
    let mut tokens = Vec::new();
    for (key, v) in &map {
        if key == "subcommand" {
            match v {
                Value::String(s) => sub = Some(s.clone()),
                _ => {
                    return Err(CliError::usage(
                        "config field 'subcommand': expected a string".into(),
                    ))
                }
            }
            continue;
        }
        let flag = key.replace('_', "-");
        if flag == "config" {
            return Err(CliError::usage(
                "config field 'config': files cannot include other files".into(),
            ));
        }
        match v {
            Value::Null | Value::Bool(false) => {}
            Value::Bool(true) => tokens.push((flag.clone(), format!("--{flag}"))),
            Value::Array(items) if items.iter().all(|i| !i.is_number()) => {
                for item in items {
                    tokens.push((flag.clone(), format!("--{flag}={}", scalar(key, item)?)));
                }
            }
            other => tokens.push((flag.clone(), format!("--{flag}={}", scalar(key, other)?))),
        }
    }
    Ok((sub, tokens))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tokens(json: &str) -> (Option<String>, Vec<String>) {
        let (sub, t) = tokens_from_json(json, Path::new("c.json")).unwrap();
        (sub, t.into_iter().map(|(_, tok)| tok).collect())
    }

    #[test]
    fn scalars_and_lists() {
        let (sub, t) = tokens(
            r#"{"subcommand": "sweep", "A_start": 1.9, "initial_state": [[0, 0, 0.5], "1,2,3"], "real": true, "seed": null}"#,
        );
        assert_eq!(sub.as_deref(), Some("sweep"));
        assert_eq!(
            t,
            [
                "--A-start=1.9",
                "--initial-state=0,0,0.5",
                "--initial-state=1,2,3",
                "--real"
            ]
        );
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = tokens_from_json("{\n  \"n\": 12,\n  oops\n}", Path::new("c.json")).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn nested_objects_are_rejected() {
        let err = tokens_from_json(r#"{"a": {"b": 1}}"#, Path::new("c.json")).unwrap_err();
        assert!(err.to_string().contains("'a'"), "{err}");
    }
}
