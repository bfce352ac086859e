use std::collections::BTreeSet;

use beam_optics::astigmatic_midpoint;
use bloch_core::mhz_to_gamma;

/// Flat `key = value` run configuration with `#` comments. Every dimensioned
/// quantity carries a mandatory unit tag (`Gamma`, `MHz`, `mm`, `deg`);
/// frequencies and rates are stored in units of Γ, lengths in mm, the lens
/// tilt in degrees. Unknown and duplicate keys are hard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub gamma_p: f64,
    pub omega_c: f64,
    pub omega_s: f64,
    pub delta_c: f64,
    /// Two-photon detuning δ for the single-point modes.
    pub delta: f64,
    pub scan_delta_min: f64,
    pub scan_delta_max: f64,
    pub scan_points: usize,
    pub optical_density: f64,
    pub coupling_waist: f64,
    pub ell: i32,
    pub p: u32,
    pub waist: f64,
    pub power: f64,
    pub grid_n: usize,
    pub grid_window: f64,
    pub focal: f64,
    pub tilt_deg: f64,
    /// Observation distance after the lens; defaults to the astigmatic
    /// midpoint computed from `focal` and `tilt_deg`.
    pub observe_z: Option<f64>,
    pub max_ell: i32,
    pub max_p: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            gamma_p: 0.05,
            omega_c: 0.1,
            omega_s: 1e-4,
            delta_c: 0.0,
            delta: 0.0,
            scan_delta_min: -2.0,
            scan_delta_max: 2.0,
            scan_points: 401,
            optical_density: 3.0,
            coupling_waist: 3.0,
            ell: 0,
            p: 0,
            waist: 0.5,
            power: 1.0,
            grid_n: 512,
            grid_window: 8.0,
            focal: 600.0,
            tilt_deg: 30.0,
            observe_z: None,
            max_ell: 6,
            max_p: 5,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid value for `{key}`: {message}")]
    Validation { key: String, message: String },
}

fn validation(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Validation {
        key: key.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dim {
    /// Rate or detuning: `Gamma` or `MHz` tag required.
    Rate,
    /// Length in `mm`.
    Length,
    /// Angle in `deg`.
    Angle,
    /// Dimensionless float, no unit tag allowed.
    Bare,
    /// Non-negative integer, no unit tag.
    Count,
    /// Signed integer, no unit tag.
    Int,
}

/// Key table: name, dimension. Echoes are emitted in this order.
const KEYS: &[(&str, Dim)] = &[
    ("atomic.gamma_p", Dim::Rate),
    ("atomic.omega_c", Dim::Rate),
    ("atomic.omega_s", Dim::Rate),
    ("atomic.delta_c", Dim::Rate),
    ("atomic.delta", Dim::Rate),
    ("scan.delta_min", Dim::Rate),
    ("scan.delta_max", Dim::Rate),
    ("scan.points", Dim::Count),
    ("medium.optical_density", Dim::Bare),
    ("medium.coupling_waist", Dim::Length),
    ("beam.ell", Dim::Int),
    ("beam.p", Dim::Count),
    ("beam.waist", Dim::Length),
    ("beam.power", Dim::Bare),
    ("grid.n", Dim::Count),
    ("grid.window", Dim::Length),
    ("lens.focal", Dim::Length),
    ("lens.tilt", Dim::Angle),
    ("lens.observe_z", Dim::Length),
    ("decompose.max_ell", Dim::Count),
    ("decompose.max_p", Dim::Count),
];

fn dim_of(key: &str) -> Option<Dim> {
    KEYS.iter().find(|(k, _)| *k == key).map(|(_, d)| *d)
}

fn parse_float(key: &str, dim: Dim, value: &str) -> Result<f64, ConfigError> {
    let tokens: Vec<&str> = value.split_whitespace().collect();
    let (num, unit) = match tokens.as_slice() {
        [n] => (*n, None),
        [n, u] => (*n, Some(*u)),
        _ => {
            return Err(validation(
                key,
                format!("expected `<number> [unit]`, got `{value}`"),
            ))
        }
    };
    let x: f64 = num
        .parse()
        .map_err(|_| validation(key, format!("`{num}` is not a number")))?;
    if !x.is_finite() {
        return Err(validation(key, "value must be finite"));
    }
    match dim {
        Dim::Rate => match unit {
            Some("Gamma") => Ok(x),
            Some("MHz") => Ok(mhz_to_gamma(x)),
            Some(u) => Err(validation(
                key,
                format!("unknown unit `{u}` (use Gamma or MHz)"),
            )),
            None => Err(validation(key, "unit tag required (Gamma or MHz)")),
        },
        Dim::Length => match unit {
            Some("mm") => Ok(x),
            Some(u) => Err(validation(key, format!("unknown unit `{u}` (use mm)"))),
            None => Err(validation(key, "unit tag required (mm)")),
        },
        Dim::Angle => match unit {
            Some("deg") => Ok(x),
            Some(u) => Err(validation(key, format!("unknown unit `{u}` (use deg)"))),
            None => Err(validation(key, "unit tag required (deg)")),
        },
        Dim::Bare => match unit {
            None => Ok(x),
            Some(u) => Err(validation(
                key,
                format!("`{key}` is dimensionless, unexpected `{u}`"),
            )),
        },
        Dim::Count | Dim::Int => unreachable!("integers parsed separately"),
    }
}

fn parse_int<T: std::str::FromStr>(key: &str, value: &str, what: &str) -> Result<T, ConfigError> {
    if value.split_whitespace().count() != 1 {
        return Err(validation(
            key,
            format!("expected a bare {what}, got `{value}`"),
        ));
    }
    value
        .trim()
        .parse::<T>()
        .map_err(|_| validation(key, format!("`{value}` is not {what}")))
}

impl RunConfig {
    fn apply(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let dim = dim_of(key).ok_or_else(|| validation(key, "unknown key"))?;
        match key {
            "atomic.gamma_p" => self.gamma_p = parse_float(key, dim, value)?,
            "atomic.omega_c" => self.omega_c = parse_float(key, dim, value)?,
            "atomic.omega_s" => self.omega_s = parse_float(key, dim, value)?,
            "atomic.delta_c" => self.delta_c = parse_float(key, dim, value)?,
            "atomic.delta" => self.delta = parse_float(key, dim, value)?,
            "scan.delta_min" => self.scan_delta_min = parse_float(key, dim, value)?,
            "scan.delta_max" => self.scan_delta_max = parse_float(key, dim, value)?,
            "scan.points" => self.scan_points = parse_int(key, value, "a positive integer")?,
            "medium.optical_density" => self.optical_density = parse_float(key, dim, value)?,
            "medium.coupling_waist" => self.coupling_waist = parse_float(key, dim, value)?,
            "beam.ell" => self.ell = parse_int(key, value, "an integer")?,
            "beam.p" => self.p = parse_int(key, value, "a non-negative integer")?,
            "beam.waist" => self.waist = parse_float(key, dim, value)?,
            "beam.power" => self.power = parse_float(key, dim, value)?,
            "grid.n" => self.grid_n = parse_int(key, value, "a positive integer")?,
            "grid.window" => self.grid_window = parse_float(key, dim, value)?,
            "lens.focal" => self.focal = parse_float(key, dim, value)?,
            "lens.tilt" => self.tilt_deg = parse_float(key, dim, value)?,
            "lens.observe_z" => self.observe_z = Some(parse_float(key, dim, value)?),
            "decompose.max_ell" => self.max_ell = parse_int(key, value, "a non-negative integer")?,
            "decompose.max_p" => self.max_p = parse_int(key, value, "a non-negative integer")?,
            _ => unreachable!("key table and match out of sync"),
        }
        Ok(())
    }

    /// Cross-field validation and resolution of computed defaults.
    fn finalize(&mut self) -> Result<(), ConfigError> {
        for (key, v, min_ok) in [
            ("atomic.gamma_p", self.gamma_p, 0.0),
            ("atomic.omega_c", self.omega_c, 0.0),
            ("atomic.omega_s", self.omega_s, 0.0),
            ("medium.optical_density", self.optical_density, 0.0),
        ] {
            if v < min_ok {
                return Err(validation(key, format!("must be ≥ {min_ok}, got {v}")));
            }
        }
        for (key, v) in [
            ("medium.coupling_waist", self.coupling_waist),
            ("beam.waist", self.waist),
            ("beam.power", self.power),
            ("grid.window", self.grid_window),
            ("lens.focal", self.focal),
        ] {
            if !(v > 0.0) {
                return Err(validation(key, format!("must be > 0, got {v}")));
            }
        }
        if self.scan_points < 2 {
            return Err(validation("scan.points", "need at least 2 samples"));
        }
        if self.scan_delta_min > self.scan_delta_max {
            return Err(validation(
                "scan.delta_min",
                format!(
                    "range [{}, {}] is reversed",
                    self.scan_delta_min, self.scan_delta_max
                ),
            ));
        }
        if self.grid_n < 64 || !self.grid_n.is_power_of_two() {
            return Err(validation(
                "grid.n",
                format!("must be a power of two ≥ 64, got {}", self.grid_n),
            ));
        }
        if !(self.tilt_deg > 0.0 && self.tilt_deg < 45.0) {
            return Err(validation(
                "lens.tilt",
                format!("must lie in (0°, 45°), got {}", self.tilt_deg),
            ));
        }
        if self.max_ell > 16 || self.max_p > 16 {
            return Err(validation(
                "decompose.max_ell",
                "decomposition basis capped at max_ell, max_p ≤ 16",
            ));
        }
        // Beam-versus-grid geometry, mirrored from the synthesis rules so it
        // fails at parse time rather than mid-run.
        let pitch = self.grid_window / self.grid_n as f64;
        if self.waist < 4.0 * pitch {
            return Err(validation(
                "beam.waist",
                format!(
                    "waist {} mm under-sampled on a {}-point window of {} mm",
                    self.waist, self.grid_n, self.grid_window
                ),
            ));
        }
        if self.grid_window * (1.0 + 1e-12) < 6.0 * self.waist {
            return Err(validation(
                "grid.window",
                format!(
                    "window {} mm spans less than 6× the waist {} mm",
                    self.grid_window, self.waist
                ),
            ));
        }
        if self.observe_z.is_none() {
            self.observe_z = Some(astigmatic_midpoint(self.focal, self.tilt_deg.to_radians()));
        }
        let z = self.observe_z.unwrap();
        if !z.is_finite() {
            return Err(validation("lens.observe_z", "must be finite"));
        }
        Ok(())
    }

    /// Canonical `key = value` lines of the resolved configuration, in table
    /// order, with all rates in Γ units. Re-parsing them reproduces this
    /// config exactly.
    pub fn canonical_lines(&self) -> Vec<(String, String)> {
        KEYS.iter()
            .map(|(key, dim)| {
                let value = match (*key, dim) {
                    ("atomic.gamma_p", _) => format!("{} Gamma", self.gamma_p),
                    ("atomic.omega_c", _) => format!("{} Gamma", self.omega_c),
                    ("atomic.omega_s", _) => format!("{} Gamma", self.omega_s),
                    ("atomic.delta_c", _) => format!("{} Gamma", self.delta_c),
                    ("atomic.delta", _) => format!("{} Gamma", self.delta),
                    ("scan.delta_min", _) => format!("{} Gamma", self.scan_delta_min),
                    ("scan.delta_max", _) => format!("{} Gamma", self.scan_delta_max),
                    ("scan.points", _) => format!("{}", self.scan_points),
                    ("medium.optical_density", _) => format!("{}", self.optical_density),
                    ("medium.coupling_waist", _) => format!("{} mm", self.coupling_waist),
                    ("beam.ell", _) => format!("{}", self.ell),
                    ("beam.p", _) => format!("{}", self.p),
                    ("beam.waist", _) => format!("{} mm", self.waist),
                    ("beam.power", _) => format!("{}", self.power),
                    ("grid.n", _) => format!("{}", self.grid_n),
                    ("grid.window", _) => format!("{} mm", self.grid_window),
                    ("lens.focal", _) => format!("{} mm", self.focal),
                    ("lens.tilt", _) => format!("{} deg", self.tilt_deg),
                    ("lens.observe_z", _) => {
                        format!("{} mm", self.observe_z.expect("config not finalized"))
                    }
                    ("decompose.max_ell", _) => format!("{}", self.max_ell),
                    ("decompose.max_p", _) => format!("{}", self.max_p),
                    _ => unreachable!(),
                };
                (key.to_string(), value)
            })
            .collect()
    }
}

/// Parse and validate a configuration document, starting from the documented
/// defaults. Returns the fully resolved config plus the sorted list of keys
/// that kept their default.
pub fn parse_config(text: &str) -> Result<(RunConfig, Vec<String>), ConfigError> {
    let mut cfg = RunConfig::default();
    let mut seen: BTreeSet<String> = BTreeSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Parse {
            line: line_no,
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        let key = key.trim();
        let value = value.trim();
        if value.is_empty() {
            return Err(ConfigError::Parse {
                line: line_no,
                message: format!("missing value for `{key}`"),
            });
        }
        if !seen.insert(key.to_string()) {
            return Err(ConfigError::Parse {
                line: line_no,
                message: format!("duplicate key `{key}`"),
            });
        }
        cfg.apply(key, value)?;
    }

    cfg.finalize()?;
    let defaulted = KEYS
        .iter()
        .map(|(k, _)| k.to_string())
        .filter(|k| !seen.contains(k))
        .collect();
    Ok((cfg, defaulted))
}

/// Apply `--override key=value` pairs on top of a parsed config.
pub fn apply_overrides(
    cfg: &mut RunConfig,
    defaulted: &mut Vec<String>,
    overrides: &[String],
) -> Result<(), ConfigError> {
    for ov in overrides {
        let (key, value) = ov.split_once('=').ok_or_else(|| ConfigError::Validation {
            key: ov.clone(),
            message: "override must look like key=value".into(),
        })?;
        let key = key.trim();
        cfg.apply(key, value.trim())?;
        defaulted.retain(|k| k != key);
    }
    cfg.finalize()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve_and_echo_round_trips() {
        let (cfg, defaulted) = parse_config("").unwrap();
        assert_eq!(defaulted.len(), KEYS.len());
        // observe_z resolved to the astigmatic midpoint of the defaults
        let z = cfg.observe_z.unwrap();
        assert!((z - astigmatic_midpoint(600.0, 30f64.to_radians())).abs() < 1e-12);

        let echo: String = cfg
            .canonical_lines()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect();
        let (back, redefaulted) = parse_config(&echo).unwrap();
        assert_eq!(back, cfg);
        assert!(redefaulted.is_empty());
    }

    #[test]
    fn unit_conversion_and_tags() {
        let (cfg, _) = parse_config(
            "atomic.omega_c = 0.1 Gamma\natomic.delta_c = -5.5 MHz\nlens.tilt = 12 deg\n",
        )
        .unwrap();
        assert_eq!(cfg.omega_c, 0.1);
        assert!((cfg.delta_c - (-5.5 / 5.2)).abs() < 1e-15);
        assert_eq!(cfg.tilt_deg, 12.0);
    }

    #[test]
    fn missing_unit_is_an_error() {
        let err = parse_config("atomic.omega_c = 0.1\n").unwrap_err();
        assert!(matches!(err, ConfigError::Validation { .. }), "{err}");
    }

    #[test]
    fn unknown_key_is_an_error() {
        let err = parse_config("atomic.omega_x = 0.1 Gamma\n").unwrap_err();
        let text = err.to_string();
        assert!(text.contains("atomic.omega_x"), "{text}");
    }

    #[test]
    fn fractional_charge_is_rejected() {
        let err = parse_config("beam.ell = 2.5\n").unwrap_err();
        assert!(matches!(err, ConfigError::Validation { .. }), "{err}");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_config("# comment\n\natomic.omega_c : 0.1 Gamma\n").unwrap_err();
        match err {
            ConfigError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn duplicate_key_is_an_error() {
        let err = parse_config("beam.ell = 1\nbeam.ell = 2\n").unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
    }

    #[test]
    fn geometry_cross_checks() {
        assert!(parse_config("grid.n = 100\n").is_err());
        assert!(parse_config("beam.waist = 4 mm\n").is_err()); // window < 6w
        assert!(parse_config("lens.tilt = 50 deg\n").is_err());
        assert!(parse_config("scan.points = 1\n").is_err());
    }

    #[test]
    fn overrides_apply_after_file() {
        let (mut cfg, mut defaulted) = parse_config("beam.ell = 1\n").unwrap();
        apply_overrides(
            &mut cfg,
            &mut defaulted,
            &["beam.ell=3".to_string(), "beam.waist=1.0 mm".to_string()],
        )
        .unwrap();
        assert_eq!(cfg.ell, 3);
        assert_eq!(cfg.waist, 1.0);
        assert!(!defaulted.contains(&"beam.waist".to_string()));
    }
}
