//! `--config FILE` support: TOML keys become flags inserted ahead of the
//! command-line flags, which therefore take precedence.

use std::ffi::OsString;
use std::path::Path;

use anyhow::{bail, Context, Result};

/// Removes `--config FILE` / `--config=FILE` from `argv` and returns the path.
pub fn take_config_arg(argv: &mut Vec<OsString>) -> Result<Option<OsString>> {
    let mut i = 0;
    while i < argv.len() {
        let arg = argv[i].to_string_lossy().into_owned();
        if arg == "--config" {
            if i + 1 >= argv.len() {
                bail!("--config needs a file");
            }
            argv.remove(i);
            return Ok(Some(argv.remove(i)));
        }
        if let Some(v) = arg.strip_prefix("--config=") {
            let v = OsString::from(v);
            argv.remove(i);
            return Ok(Some(v));
        }
        i += 1;
    }
    Ok(None)
}

/// Flags for every key of the config file, in file order.
pub fn config_flags(path: &Path) -> Result<Vec<OsString>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let table: toml::Table = text.parse().with_context(|| format!("parsing {}", path.display()))?;
    let mut out = Vec::new();
    for (key, value) in table {
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            toml::Value::Boolean(true) => out.push(flag.into()),
            toml::Value::Boolean(false) => {}
            toml::Value::String(s) => {
                out.push(flag.into());
                out.push(s.into());
            }
            toml::Value::Integer(i) => {
                out.push(flag.into());
                out.push(i.to_string().into());
            }
            toml::Value::Float(f) => {
                out.push(flag.into());
                out.push(f.to_string().into());
            }
            other => bail!("config key {key:?}: unsupported value {other}"),
        }
    }
    Ok(out)
}

/// Inserts `flags` right after the two subcommand words (`pddt build`, ...).
pub fn splice(argv: &mut Vec<OsString>, flags: Vec<OsString>) {
    let at = argv.len().min(3);
    argv.splice(at..at, flags);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn extracts_config() {
        let mut a = os(&["bin", "pddt", "build", "--config", "c.toml", "--n", "4"]);
        assert_eq!(take_config_arg(&mut a).unwrap(), Some("c.toml".into()));
        assert_eq!(a, os(&["bin", "pddt", "build", "--n", "4"]));
        let mut b = os(&["bin", "--config=x.toml", "pddt"]);
        assert_eq!(take_config_arg(&mut b).unwrap(), Some("x.toml".into()));
        let mut c = os(&["bin", "--config"]);
        assert!(take_config_arg(&mut c).is_err());
    }

    #[test]
    fn splices_after_subcommand() {
        let mut a = os(&["bin", "pddt", "build", "--n", "4"]);
        splice(&mut a, os(&["--threshold", "0.5"]));
        assert_eq!(a, os(&["bin", "pddt", "build", "--threshold", "0.5", "--n", "4"]));
    }
}
