//! `key = value` configuration files. Blank lines and lines starting with
//! `#` are ignored; command-line flags override file values.

use std::path::Path;

use cvwerner::{Error, QuadratureGrid, Result, Settings};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    pub cutoff: Option<usize>,
    pub eps_tail: Option<f64>,
    pub eps_int: Option<f64>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub radial_nodes: Option<usize>,
    pub angular_nodes: Option<usize>,
    pub r_max: Option<f64>,
    pub t_max: Option<f64>,
    pub t_step: Option<f64>,
    pub mc_samples: Option<usize>,
}

fn parse_value<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<Option<T>> {
    value.parse().map(Some).map_err(|_| Error::Parse {
        line,
        message: format!("invalid value `{value}` for `{key}`"),
    })
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut config = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed.split_once('=').ok_or_else(|| Error::Parse {
                line,
                message: format!("expected key = value, got `{trimmed}`"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "cutoff" => config.cutoff = parse_value(line, key, value)?,
                "eps_tail" => config.eps_tail = parse_value(line, key, value)?,
                "eps_int" => config.eps_int = parse_value(line, key, value)?,
                "seed" => config.seed = parse_value(line, key, value)?,
                "threads" => config.threads = parse_value(line, key, value)?,
                "radial_nodes" => config.radial_nodes = parse_value(line, key, value)?,
                "angular_nodes" => config.angular_nodes = parse_value(line, key, value)?,
                "r_max" => config.r_max = parse_value(line, key, value)?,
                "t_max" => config.t_max = parse_value(line, key, value)?,
                "t_step" => config.t_step = parse_value(line, key, value)?,
                "mc_samples" => config.mc_samples = parse_value(line, key, value)?,
                _ => {
                    return Err(Error::Parse {
                        line,
                        message: format!("unknown key `{key}`"),
                    })
                }
            }
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Config::parse(&std::fs::read_to_string(path)?)
    }

    /// Fields set in `other` replace those of `self`.
    pub fn overridden_by(self, other: Config) -> Config {
        Config {
            cutoff: other.cutoff.or(self.cutoff),
            eps_tail: other.eps_tail.or(self.eps_tail),
            eps_int: other.eps_int.or(self.eps_int),
            seed: other.seed.or(self.seed),
            threads: other.threads.or(self.threads),
            radial_nodes: other.radial_nodes.or(self.radial_nodes),
            angular_nodes: other.angular_nodes.or(self.angular_nodes),
            r_max: other.r_max.or(self.r_max),
            t_max: other.t_max.or(self.t_max),
            t_step: other.t_step.or(self.t_step),
            mc_samples: other.mc_samples.or(self.mc_samples),
        }
    }

    pub fn settings(&self) -> Result<Settings> {
        let mut s = Settings::default();
        s.truncation.cutoff_override = self.cutoff;
        if let Some(eps) = self.eps_tail {
            s.truncation.eps_tail = eps;
        }
        if let Some(eps) = self.eps_int {
            s.optimizer.eps_int = eps;
        }
        if let Some(seed) = self.seed {
            s.seed = seed;
        }
        if let Some(n) = self.mc_samples {
            s.mc_samples = n;
        }
        if let Some(t) = self.t_max {
            s.optimizer.t_max = t;
        }
        if let Some(t) = self.t_step {
            s.optimizer.t_step = t;
        }
        if self.radial_nodes.is_some() || self.angular_nodes.is_some() || self.r_max.is_some() {
            let d = QuadratureGrid::default();
            s.grid = QuadratureGrid::new(
                self.radial_nodes.unwrap_or(d.radial_nodes()),
                self.angular_nodes.unwrap_or(d.angular_nodes()),
                self.r_max.unwrap_or(d.r_max()),
            )?;
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_override() {
        let file = Config::parse("# defaults\ncutoff = 40\n\neps_int=1e-9\nseed = 3\n").unwrap();
        assert_eq!(file.cutoff, Some(40));
        assert_eq!(file.eps_int, Some(1e-9));
        let flags = Config {
            cutoff: Some(60),
            ..Default::default()
        };
        let merged = file.overridden_by(flags);
        assert_eq!(merged.cutoff, Some(60));
        assert_eq!(merged.seed, Some(3));
        let s = merged.settings().unwrap();
        assert_eq!(s.truncation.cutoff_override, Some(60));
        assert_eq!(s.optimizer.eps_int, 1e-9);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(
            Config::parse("cutoff 40"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Config::parse("\nfoo = 1"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Config::parse("cutoff = x"),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
