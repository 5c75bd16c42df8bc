//! Flat key-value configuration with dotted section keys.
//!
//! The file format is one `key = value` pair per line, `#` comments, blank
//! lines ignored. Keys are validated against a fixed schema: unknown keys
//! are rejected and values are type-checked, both for files and for
//! command-line `--set` overrides. Resolution is layered: defaults, then
//! the file, then overrides, later layers winning.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Result, SdError};

/// Value type a key must parse as.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueKind {
    String,
    UInt,
    Int,
    Float,
    Bool,
    /// Comma-separated floats, e.g. `0.1,0.05,0.025`.
    FloatList,
    /// Comma-separated integers, e.g. `1,0`.
    IntList,
}

impl ValueKind {
    fn check(self, key: &str, raw: &str) -> Result<()> {
        let bad = |what: &str| {
            Err(SdError::Config(format!("key {key}: expected {what}, got {raw:?}")))
        };
        match self {
            ValueKind::String => Ok(()),
            ValueKind::UInt => {
                if raw.parse::<u64>().is_ok() { Ok(()) } else { bad("a nonnegative integer") }
            }
            ValueKind::Int => {
                if raw.parse::<i64>().is_ok() { Ok(()) } else { bad("an integer") }
            }
            ValueKind::Float => {
                if raw.parse::<f64>().is_ok() { Ok(()) } else { bad("a number") }
            }
            ValueKind::Bool => {
                if raw.parse::<bool>().is_ok() { Ok(()) } else { bad("true or false") }
            }
            ValueKind::FloatList => {
                if raw.is_empty() || raw.split(',').all(|p| p.trim().parse::<f64>().is_ok()) {
                    Ok(())
                } else {
                    bad("a comma-separated list of numbers")
                }
            }
            ValueKind::IntList => {
                if raw.is_empty() || raw.split(',').all(|p| p.trim().parse::<i64>().is_ok()) {
                    Ok(())
                } else {
                    bad("a comma-separated list of integers")
                }
            }
        }
    }
}

/// Every key the harness understands; kept sorted for the resolved echo.
pub const SCHEMA: &[(&str, ValueKind, &str)] = &[
    ("name", ValueKind::String, "scenario name; also the output directory name"),
    ("dim", ValueKind::UInt, "spatial dimension, 1..3"),
    ("grid.points", ValueKind::UInt, "points per axis, power of two >= 8"),
    ("grid.extent", ValueKind::Float, "box edge length L"),
    ("params.mu", ValueKind::Float, "relaxation time mu > 0"),
    ("params.lambda", ValueKind::Int, "nonlinearity sign, +1 or -1"),
    ("step.dt", ValueKind::Float, "time step"),
    ("step.t_end", ValueKind::Float, "final time"),
    ("step.dealias", ValueKind::Bool, "two-thirds spectral truncation per step"),
    ("initial.u.kind", ValueKind::String, "gaussian|constant|mode|random_bandlimited|from_file"),
    ("initial.u.amplitude", ValueKind::Float, "amplitude of the u profile"),
    ("initial.u.width", ValueKind::Float, "gaussian width of u"),
    ("initial.u.center", ValueKind::FloatList, "gaussian center; empty = box center"),
    ("initial.u.value", ValueKind::FloatList, "constant value as re,im"),
    ("initial.u.mode", ValueKind::IntList, "integer mode indices for a plane wave"),
    ("initial.u.cutoff", ValueKind::UInt, "band limit for random data"),
    ("initial.u.seed", ValueKind::UInt, "seed for random u data; 0 = derive from seed"),
    ("initial.u.path", ValueKind::String, "snapshot file for u"),
    ("initial.v.kind", ValueKind::String, "zero|equilibrium|gaussian|constant|random_bandlimited|from_file"),
    ("initial.v.amplitude", ValueKind::Float, "amplitude of the v profile"),
    ("initial.v.width", ValueKind::Float, "gaussian width of v"),
    ("initial.v.center", ValueKind::FloatList, "gaussian center; empty = box center"),
    ("initial.v.value", ValueKind::FloatList, "constant value (single number)"),
    ("initial.v.cutoff", ValueKind::UInt, "band limit for random v data"),
    ("initial.v.seed", ValueKind::UInt, "seed for random v data; 0 = derive from seed"),
    ("initial.v.path", ValueKind::String, "snapshot file for v"),
    ("diagnostics.cadence", ValueKind::UInt, "record every k-th step"),
    ("output.snapshots", ValueKind::FloatList, "times to store u and v snapshots at"),
    ("seed", ValueKind::UInt, "master seed for every random ingredient"),
    ("gronwall.safety", ValueKind::Float, "safety factor on the calibrated beta^4"),
    ("gronwall.ensemble", ValueKind::UInt, "random fields in the calibration ensemble"),
    ("scaling.mu", ValueKind::Float, "mu of the scaled run in check-scaling"),
    ("scaling.samples", ValueKind::UInt, "comparison times in check-scaling"),
    ("nls.mu_list", ValueKind::FloatList, "decreasing mu values for the limit study"),
    ("bilinear.s_values", ValueKind::FloatList, "s lattice for the sweep"),
    ("bilinear.ell_values", ValueKind::FloatList, "ell lattice for the sweep"),
    ("bilinear.eps", ValueKind::Float, "epsilon used for every exponent offset"),
    ("bilinear.members", ValueKind::UInt, "ensemble members per lattice point"),
    ("bilinear.grid_points", ValueKind::UInt, "spatial points per axis for trace members"),
    ("bilinear.time_points", ValueKind::UInt, "snapshots per trace member"),
    ("bilinear.dt", ValueKind::Float, "time mesh spacing of trace members"),
    ("bilinear.space_cut", ValueKind::UInt, "spatial band limit of trace members"),
    ("bilinear.time_cut", ValueKind::UInt, "temporal band limit of trace members"),
];

fn schema_kind(key: &str) -> Option<ValueKind> {
    SCHEMA.iter().find(|(k, _, _)| *k == key).map(|(_, kind, _)| *kind)
}

/// An ordered, validated key-value layer stack.
#[derive(Debug, Clone, Default)]
pub struct ConfigMap {
    map: BTreeMap<String, String>,
}

impl ConfigMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Global defaults shared by every subcommand.
    pub fn defaults() -> Self {
        let mut m = Self::new();
        for (k, v) in [
            ("name", "scenario"),
            ("dim", "2"),
            ("grid.points", "64"),
            ("grid.extent", "12.0"),
            ("params.mu", "1.0"),
            ("params.lambda", "1"),
            ("step.dt", "1e-3"),
            ("step.t_end", "1.0"),
            ("step.dealias", "false"),
            ("initial.u.kind", "gaussian"),
            ("initial.u.amplitude", "1.0"),
            ("initial.u.width", "1.0"),
            ("initial.u.center", ""),
            ("initial.u.value", "1.0,0.0"),
            ("initial.u.mode", "1"),
            ("initial.u.cutoff", "4"),
            ("initial.u.seed", "0"),
            ("initial.u.path", ""),
            ("initial.v.kind", "equilibrium"),
            ("initial.v.amplitude", "1.0"),
            ("initial.v.width", "1.0"),
            ("initial.v.center", ""),
            ("initial.v.value", "0.0"),
            ("initial.v.cutoff", "4"),
            ("initial.v.seed", "0"),
            ("initial.v.path", ""),
            ("diagnostics.cadence", "10"),
            ("output.snapshots", ""),
            ("seed", "1"),
            ("gronwall.safety", "2.0"),
            ("gronwall.ensemble", "8"),
            ("scaling.mu", "4.0"),
            ("scaling.samples", "5"),
            ("nls.mu_list", "0.1,0.05,0.025"),
            ("bilinear.s_values", "1.0"),
            ("bilinear.ell_values", "0.0"),
            ("bilinear.eps", "0.05"),
            ("bilinear.members", "200"),
            ("bilinear.grid_points", "16"),
            ("bilinear.time_points", "16"),
            ("bilinear.dt", "0.1"),
            ("bilinear.space_cut", "4"),
            ("bilinear.time_cut", "4"),
        ] {
            m.map.insert(k.to_string(), v.to_string());
        }
        m
    }

    /// Parse `key = value` text, validating each key and value.
    pub fn parse(text: &str) -> Result<Self> {
        let mut m = Self::new();
        for (lineno, raw_line) in text.lines().enumerate() {
            let line = raw_line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                SdError::Config(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            m.set(key.trim(), value.trim())?;
        }
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            SdError::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::parse(&text)
    }

    /// Insert after schema validation; rejects unknown keys.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let kind = schema_kind(key)
            .ok_or_else(|| SdError::Config(format!("unknown key {key:?}")))?;
        kind.check(key, value)?;
        self.map.insert(key.to_string(), value.to_string());
        Ok(())
    }

    /// Parse a `key=value` override as passed on the command line.
    pub fn set_pair(&mut self, pair: &str) -> Result<()> {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| SdError::Config(format!("override {pair:?} is not key=value")))?;
        self.set(key.trim(), value.trim())
    }

    /// Overlay `other` on top of `self`.
    pub fn merge(&mut self, other: &ConfigMap) {
        for (k, v) in &other.map {
            self.map.insert(k.clone(), v.clone());
        }
    }

    /// Resolve the three layers: defaults, file, overrides.
    pub fn resolve(defaults: ConfigMap, file: Option<ConfigMap>, overrides: ConfigMap) -> Self {
        let mut out = defaults;
        if let Some(f) = file {
            out.merge(&f);
        }
        out.merge(&overrides);
        out
    }

    pub fn get(&self, key: &str) -> Result<&str> {
        self.map
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| SdError::Config(format!("missing key {key:?}")))
    }

    pub fn get_string(&self, key: &str) -> Result<String> {
        Ok(self.get(key)?.to_string())
    }

    pub fn get_usize(&self, key: &str) -> Result<usize> {
        let raw = self.get(key)?;
        raw.parse::<usize>()
            .map_err(|_| SdError::Config(format!("key {key}: expected an integer, got {raw:?}")))
    }

    pub fn get_u64(&self, key: &str) -> Result<u64> {
        let raw = self.get(key)?;
        raw.parse::<u64>()
            .map_err(|_| SdError::Config(format!("key {key}: expected an integer, got {raw:?}")))
    }

    pub fn get_i32(&self, key: &str) -> Result<i32> {
        let raw = self.get(key)?;
        raw.parse::<i32>()
            .map_err(|_| SdError::Config(format!("key {key}: expected an integer, got {raw:?}")))
    }

    pub fn get_f64(&self, key: &str) -> Result<f64> {
        let raw = self.get(key)?;
        raw.parse::<f64>()
            .map_err(|_| SdError::Config(format!("key {key}: expected a number, got {raw:?}")))
    }

    pub fn get_bool(&self, key: &str) -> Result<bool> {
        let raw = self.get(key)?;
        raw.parse::<bool>()
            .map_err(|_| SdError::Config(format!("key {key}: expected true/false, got {raw:?}")))
    }

    pub fn get_f64_list(&self, key: &str) -> Result<Vec<f64>> {
        let raw = self.get(key)?;
        if raw.trim().is_empty() {
            return Ok(Vec::new());
        }
        raw.split(',')
            .map(|p| {
                p.trim().parse::<f64>().map_err(|_| {
                    SdError::Config(format!("key {key}: bad number {:?}", p.trim()))
                })
            })
            .collect()
    }

    pub fn get_i64_list(&self, key: &str) -> Result<Vec<i64>> {
        let raw = self.get(key)?;
        if raw.trim().is_empty() {
            return Ok(Vec::new());
        }
        raw.split(',')
            .map(|p| {
                p.trim().parse::<i64>().map_err(|_| {
                    SdError::Config(format!("key {key}: bad integer {:?}", p.trim()))
                })
            })
            .collect()
    }

    /// Deterministic `key = value` listing of the resolved configuration.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.map {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_accepts_comments_and_blank_lines() {
        let text = "\n# a comment\nname = demo\ngrid.points = 32\n\nparams.mu = 0.5\n";
        let m = ConfigMap::parse(text).unwrap();
        assert_eq!(m.get("name").unwrap(), "demo");
        assert_eq!(m.get_usize("grid.points").unwrap(), 32);
        assert_eq!(m.get_f64("params.mu").unwrap(), 0.5);
    }

    #[test]
    fn unknown_keys_and_bad_types_rejected() {
        assert!(matches!(
            ConfigMap::parse("nonsense.key = 3"),
            Err(SdError::Config(msg)) if msg.contains("unknown key")
        ));
        assert!(matches!(
            ConfigMap::parse("grid.points = banana"),
            Err(SdError::Config(msg)) if msg.contains("grid.points")
        ));
        assert!(matches!(
            ConfigMap::parse("step.dealias = yes"),
            Err(SdError::Config(msg)) if msg.contains("true or false")
        ));
        let mut m = ConfigMap::new();
        assert!(m.set_pair("no-equals-sign").is_err());
    }

    #[test]
    fn three_layer_precedence() {
        let defaults = ConfigMap::defaults();
        let file = ConfigMap::parse("params.mu = 0.25\nname = fromfile\n").unwrap();
        let mut overrides = ConfigMap::new();
        overrides.set_pair("params.mu=0.125").unwrap();

        let resolved = ConfigMap::resolve(defaults.clone(), Some(file), overrides);
        // override beats file beats default
        assert_eq!(resolved.get_f64("params.mu").unwrap(), 0.125);
        // file beats default
        assert_eq!(resolved.get("name").unwrap(), "fromfile");
        // untouched keys come from defaults
        assert_eq!(
            resolved.get_usize("grid.points").unwrap(),
            defaults.get_usize("grid.points").unwrap()
        );
    }

    #[test]
    fn defaults_cover_the_whole_schema() {
        let d = ConfigMap::defaults();
        for (key, kind, _) in SCHEMA {
            let raw = d.get(key).unwrap_or_else(|_| panic!("no default for {key}"));
            kind.check(key, raw).unwrap();
        }
        // and vice versa: every default key is in the schema
        for key in d.map.keys() {
            assert!(schema_kind(key).is_some(), "default key {key} not in schema");
        }
    }

    #[test]
    fn render_is_sorted_and_parseable() {
        let d = ConfigMap::defaults();
        let rendered = d.render();
        let keys: Vec<&str> =
            rendered.lines().map(|l| l.split(" = ").next().unwrap()).collect();
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        assert_eq!(keys, sorted);
        // skip keys with empty values when reparsing; they render as "k = "
        let reparsed = ConfigMap::parse(&rendered).unwrap();
        assert_eq!(reparsed.get("name").unwrap(), d.get("name").unwrap());
    }

    #[test]
    fn empty_lists_parse_as_empty() {
        let d = ConfigMap::defaults();
        assert!(d.get_f64_list("output.snapshots").unwrap().is_empty());
        assert_eq!(d.get_f64_list("nls.mu_list").unwrap(), vec![0.1, 0.05, 0.025]);
    }
}
