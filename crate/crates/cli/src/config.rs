//! Folds a TOML config file into the argument list.
//!
//! Keys are flag names (`xi`, `n`, `profile`, ...) plus an optional
//! `command`. A key becomes `--key value` unless the flag is already on the
//! command line. Keys that no subcommand understands are an error; keys
//! that only other subcommands understand are skipped, so one file can
//! serve several commands.

use clap::CommandFactory;
use toml::Value;

use crate::{Cli, CliError};

const GLOBAL_WITH_VALUE: [&str; 5] = ["--format", "-f", "--output", "-o", "--config"];

/// Where the subcommand name sits in `args`, skipping global option values.
fn subcommand_index(args: &[String]) -> Option<usize> {
    let mut i = 1;
    while i < args.len() {
        let a = args[i].as_str();
        if GLOBAL_WITH_VALUE.contains(&a) {
            i += 2;
            continue;
        }
        if !a.starts_with('-') {
            return Some(i);
        }
        i += 1;
    }
    None
}

fn config_path(args: &[String]) -> Option<String> {
    args.iter().enumerate().find_map(|(i, a)| {
        if a == "--config" {
            args.get(i + 1).cloned()
        } else {
            a.strip_prefix("--config=").map(str::to_string)
        }
    })
}

fn scalar(key: &str, v: &Value) -> Result<String, CliError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Integer(i) => Ok(i.to_string()),
        Value::Float(f) => Ok(f.to_string()),
        _ => Err(CliError::Usage(format!("config key {key}: expected a string or number"))),
    }
}

/// Flags present on the command line, as long names without dashes.
fn given(args: &[String]) -> Vec<String> {
    args.iter()
        .filter_map(|a| match a.as_str() {
            "-f" => Some("format"),
            "-o" => Some("output"),
            _ => a.strip_prefix("--"),
        })
        .map(|a| a.split('=').next().unwrap_or(a).to_string())
        .collect()
}

pub fn merge(mut args: Vec<String>) -> Result<Vec<String>, CliError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Usage(format!("config {path}: {e}")))?;
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| CliError::Usage(format!("config {path}: {}", e.message())))?;

    let cli = Cli::command();
    let sub_index = match subcommand_index(&args) {
        Some(i) => i,
        None => {
            let Some(name) = table.get("command").and_then(Value::as_str) else {
                return Err(CliError::Usage("no command given on the command line or in the config".into()));
            };
            args.push(name.to_string());
            args.len() - 1
        }
    };
    let sub_name = args[sub_index].clone();
    let Some(sub) = cli.find_subcommand(&sub_name) else {
        // let clap report the unknown subcommand
        return Ok(args);
    };
    let present = given(&args);
    let source_given = present.iter().any(|p| p == "name" || p == "expr");

    let mut globals = Vec::new();
    let mut extra = Vec::new();
    for (key, value) in &table {
        let flag = key.replace('_', "-");
        if flag == "command" || flag == "config" || present.contains(&flag) {
            continue;
        }
        let takes = |c: &clap::Command| c.get_arguments().any(|a| a.get_long() == Some(flag.as_str()));
        let is_global = flag == "format" || flag == "output";
        if !is_global && !takes(sub) {
            if cli.get_subcommands().any(takes) {
                continue;
            }
            return Err(CliError::Usage(format!("config {path}: unknown key {key:?}")));
        }
        if source_given && (flag == "name" || flag == "expr") {
            continue;
        }
        let values: Vec<&Value> = match value {
            Value::Array(items) => items.iter().collect(),
            v => vec![v],
        };
        let out = if is_global { &mut globals } else { &mut extra };
        for v in values {
            if let Value::Boolean(b) = v {
                if *b {
                    out.push(format!("--{flag}"));
                }
                continue;
            }
            out.push(format!("--{flag}={}", scalar(key, v)?));
        }
    }
    args.splice(sub_index..sub_index, globals.iter().cloned());
    args.extend(extra);
    Ok(args)
}
