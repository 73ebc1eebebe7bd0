use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebraic::DEFAULT_BOX_CAP;
use crate::elliptic::DEFAULT_DIGITS;
use crate::error::{Error, Result};

/// `periods` leaves out lattice points (whose sigma value is trivially
/// zero); `invariants` keeps them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CensusMode {
    Periods,
    Invariants,
}

impl FromStr for CensusMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periods" => Ok(CensusMode::Periods),
            "invariants" => Ok(CensusMode::Invariants),
            _ => Err(Error::InvalidInput(format!("unknown mode '{s}' (periods | invariants)"))),
        }
    }
}

impl fmt::Display for CensusMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CensusMode::Periods => "periods",
            CensusMode::Invariants => "invariants",
        })
    }
}

/// Everything that determines a census output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub lattice: String,
    pub mode: CensusMode,
    pub d_max: usize,
    pub h_max: f64,
    pub digits: u32,
    pub detect_tol: f64,
    pub seed: u64,
    pub box_cap: u64,
    pub constants: BTreeMap<String, f64>,
    pub version: String,
}

impl Default for RunManifest {
    fn default() -> Self {
        Self {
            lattice: "1,i".into(),
            mode: CensusMode::Periods,
            d_max: 1,
            h_max: 2.0,
            digits: DEFAULT_DIGITS,
            detect_tol: 1e-9,
            seed: 0,
            box_cap: DEFAULT_BOX_CAP,
            constants: BTreeMap::new(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

pub(crate) fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| Error::InvalidInput(format!("bad value '{value}' for '{key}'")))
}

/// Splits `key = value` lines; blank lines and `#` comments are skipped.
pub(crate) fn config_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) =
            line.split_once('=').ok_or_else(|| Error::InvalidInput(format!("line {}: expected key = value", n + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

impl RunManifest {
    /// Sets one key; constants are written `const.<name>`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "lattice" => self.lattice = value.trim().to_string(),
            "mode" => self.mode = value.trim().parse()?,
            "d_max" => self.d_max = parse_value(key, value)?,
            "h_max" => self.h_max = parse_value(key, value)?,
            "digits" => self.digits = parse_value(key, value)?,
            "detect_tol" => self.detect_tol = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "box_cap" => self.box_cap = parse_value(key, value)?,
            _ => match key.strip_prefix("const.") {
                Some(name) if !name.is_empty() => {
                    self.constants.insert(name.to_string(), parse_value(key, value)?);
                }
                _ => return Err(Error::InvalidInput(format!("unknown key '{key}'"))),
            },
        }
        Ok(())
    }

    /// Applies a `key = value` configuration text.
    pub fn apply_config(&mut self, text: &str) -> Result<()> {
        for (k, v) in config_pairs(text)? {
            self.set(&k, &v)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.d_max) {
            return Err(Error::InvalidInput(format!("d_max = {} outside 1..=3", self.d_max)));
        }
        if !(self.h_max >= 1.0) || !self.h_max.is_finite() {
            return Err(Error::InvalidInput(format!("h_max = {} must be >= 1", self.h_max)));
        }
        if !(4..=300).contains(&self.digits) {
            return Err(Error::InvalidInput(format!("digits = {} outside 4..=300", self.digits)));
        }
        if !(self.detect_tol > 0.0 && self.detect_tol < 1.0) {
            return Err(Error::InvalidInput(format!("detect_tol = {} outside (0, 1)", self.detect_tol)));
        }
        if self.constants.values().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("constants must be finite".into()));
        }
        Ok(())
    }
}
