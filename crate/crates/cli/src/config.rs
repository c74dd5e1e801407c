//! `key=value` config files. Keys are the long flag names without the
//! leading dashes; explicit command-line flags always win.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::new(2, format!("cannot read {}: {e}", path.display())))?;
            for (lineno, raw) in text.lines().enumerate() {
                let line = raw.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let (key, value) = line.split_once('=').ok_or_else(|| {
                    CliError::new(
                        2,
                        format!("{}:{}: expected key=value, got {raw:?}", path.display(), lineno + 1),
                    )
                })?;
                values.insert(key.trim().to_string(), value.trim().to_string());
            }
        }
        Ok(Self { values })
    }

    /// The flag value if given, else the parsed config entry, else None.
    pub fn resolve<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|e| CliError::new(2, format!("config key {key}={raw:?}: {e}"))),
            None => Ok(None),
        }
    }

    /// As [`resolve`](Self::resolve) but the value must come from somewhere.
    pub fn require<T>(&self, flag: Option<T>, key: &str) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.resolve(flag, key)?
            .ok_or_else(|| CliError::new(2, format!("missing required flag --{key}")))
    }

    /// As [`resolve`](Self::resolve) with a default.
    pub fn resolve_or<T>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        Ok(self.resolve(flag, key)?.unwrap_or(default))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn config_from(text: &str) -> Config {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(text.as_bytes()).unwrap();
        Config::load(Some(file.path())).unwrap()
    }

    #[test]
    fn parses_comments_and_whitespace() {
        let cfg = config_from("# header\nbeta = 2.5 # inline\n\nw0=0.5\n");
        assert_eq!(cfg.resolve::<f64>(None, "beta").unwrap(), Some(2.5));
        assert_eq!(cfg.resolve::<f64>(None, "w0").unwrap(), Some(0.5));
        assert_eq!(cfg.resolve::<f64>(None, "absent").unwrap(), None);
    }

    #[test]
    fn flag_overrides_config() {
        let cfg = config_from("beta=2.5\n");
        assert_eq!(cfg.require(Some(9.0f64), "beta").unwrap(), 9.0);
        assert_eq!(cfg.require::<f64>(None, "beta").unwrap(), 2.5);
    }

    #[test]
    fn missing_required_is_parameter_error() {
        let cfg = Config::load(None).unwrap();
        let err = cfg.require::<f64>(None, "beta").unwrap_err();
        assert_eq!(err.code, 2);
    }

    #[test]
    fn bad_value_is_parameter_error() {
        let cfg = config_from("beta=abc\n");
        assert_eq!(cfg.resolve::<f64>(None, "beta").unwrap_err().code, 2);
    }

    #[test]
    fn malformed_line_rejected() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(b"just a line\n").unwrap();
        assert_eq!(Config::load(Some(file.path())).unwrap_err().code, 2);
    }
}
