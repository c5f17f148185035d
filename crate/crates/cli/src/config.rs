//! `key = value` configuration files. Values are spliced into the command
//! line as `--key value` for every option the user did not pass, so flags
//! override the file and the file overrides built-in defaults.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::Command;

/// Parses `key = value` lines. `#` starts a comment, `[section]` lines are
/// ignored and values may be wrapped in double quotes.
pub fn parse(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split_once('#').map_or(raw, |(l, _)| l).trim();
        if line.is_empty() || (line.starts_with('[') && line.ends_with(']')) {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("line {}: expected `key = value`", n + 1);
        };
        let key = k.trim().replace('_', "-");
        let value = v.trim();
        let value = value
            .strip_prefix('"')
            .and_then(|v| v.strip_suffix('"'))
            .unwrap_or(value);
        out.insert(key, value.to_string());
    }
    Ok(out)
}

pub fn load(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    parse(&text).with_context(|| format!("in config {}", path.display()))
}

/// Value of `--config` anywhere on the command line.
pub fn find_config(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = s.strip_prefix("--config=") {
            return Some(v.into());
        }
    }
    None
}

/// Appends config entries for options of the selected subcommand that are
/// absent from `args`. Keys the subcommand does not know are returned.
pub fn inject(cmd: &Command, args: &mut Vec<OsString>, entries: &BTreeMap<String, String>) -> Vec<String> {
    let names: Vec<String> = cmd.get_subcommands().map(|s| s.get_name().to_string()).collect();
    let Some(sub_name) = args.iter().skip(1).map(|a| a.to_string_lossy().to_string()).find(|a| names.contains(a)) else {
        return Vec::new();
    };
    let sub = cmd.find_subcommand(&sub_name).expect("name came from the command");
    let present = |long: &str| {
        args.iter().any(|a| {
            let s = a.to_string_lossy();
            s == format!("--{long}") || s.starts_with(&format!("--{long}="))
        })
    };
    let mut extra = Vec::new();
    let mut unknown = Vec::new();
    for (key, value) in entries {
        if key == "config" {
            continue;
        }
        let Some(arg) = sub.get_arguments().find(|a| a.get_long() == Some(key.as_str())) else {
            unknown.push(key.clone());
            continue;
        };
        if present(key) {
            continue;
        }
        if arg.get_action().takes_values() {
            extra.push(OsString::from(format!("--{key}")));
            extra.push(OsString::from(value));
        } else if matches!(value.to_ascii_lowercase().as_str(), "true" | "1" | "yes") {
            extra.push(OsString::from(format!("--{key}")));
        }
    }
    args.extend(extra);
    unknown
}
