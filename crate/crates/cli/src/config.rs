//! `--config` files: flat `key = value` lines that stand in for flags.
//!
//! Each entry becomes `--key value` (or a bare `--key` for `true`, nothing
//! for `false`) and is placed right after the subcommand, ahead of the
//! explicit arguments, so flags given on the command line win.

use std::path::{Path, PathBuf};

#[derive(Debug)]
pub enum ConfigError {
    Io(PathBuf, std::io::Error),
    Syntax(String),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            ConfigError::Syntax(m) => f.write_str(m),
        }
    }
}

/// Flag tokens for the entries of a config file.
pub fn parse(text: &str, origin: &Path) -> Result<Vec<String>, ConfigError> {
    let mut tokens = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Syntax(format!(
                "{}:{}: expected key = value",
                origin.display(),
                i + 1
            )));
        };
        let key = key.trim().trim_start_matches("--");
        let value = value.trim();
        if key.is_empty() || key == "config" {
            return Err(ConfigError::Syntax(format!(
                "{}:{}: invalid key {key:?}",
                origin.display(),
                i + 1
            )));
        }
        match value {
            "true" => tokens.push(format!("--{key}")),
            "false" => {}
            _ => {
                tokens.push(format!("--{key}"));
                tokens.push(value.to_string());
            }
        }
    }
    Ok(tokens)
}

fn config_path(args: &[String]) -> Option<PathBuf> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        if a == "--" {
            return None;
        }
        if a == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

/// Splices the entries of the `--config` file, if any, into `args`.
pub fn expand(args: Vec<String>, subcommands: &[&str]) -> Result<Vec<String>, ConfigError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| ConfigError::Io(path.clone(), e))?;
    let tokens = parse(&text, &path)?;
    let Some(at) = args.iter().position(|a| subcommands.contains(&a.as_str())) else {
        // No subcommand: let the parser report the usage error.
        return Ok(args);
    };
    let mut out = args[..=at].to_vec();
    out.extend(tokens);
    out.extend_from_slice(&args[at + 1..]);
    Ok(out)
}
