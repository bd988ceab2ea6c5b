//! Registry of the tunable constants. Every report records the values it used.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const C_T: &str = "c_T";
pub const C_SMALL: &str = "c_small";
pub const C_B: &str = "c_B";
pub const C_L: &str = "c_L";
pub const C_A: &str = "c_A";
pub const C_BUDGET: &str = "c_budget";
pub const C_WINDOW: &str = "c_window";
pub const C_ZERO_DENSITY: &str = "c_zero_density";
pub const EH_K: &str = "eh_k";
pub const PLANCHEREL_REL_TOL: &str = "plancherel_rel_tol";
pub const POWER_SAVING_CEILING: &str = "power_saving_ceiling";
pub const RATIO_CEILING: &str = "ratio_ceiling";
pub const T_CAP: &str = "t_cap";
pub const COSINE_C: &str = "cosine_c";
pub const COSINE_SLACK: &str = "cosine_slack";
pub const CONVEXITY_CEILING: &str = "convexity_ceiling";

const DEFAULTS: &[(&str, f64)] = &[
    (C_T, 1.0),
    (C_SMALL, 1.0),
    (C_B, 1.0),
    (C_L, 1.0),
    (C_A, 1.0),
    (C_BUDGET, 1.0),
    (C_WINDOW, 1.0),
    (C_ZERO_DENSITY, 1.0),
    (EH_K, 4.0),
    (PLANCHEREL_REL_TOL, 1e-3),
    (POWER_SAVING_CEILING, 10.0),
    (RATIO_CEILING, 20.0),
    (T_CAP, 200.0),
    (COSINE_C, 1.0),
    (COSINE_SLACK, 1.0),
    (CONVEXITY_CEILING, 10.0),
];

/// Named constants with their defaults; unknown names are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, f64>", into = "BTreeMap<String, f64>")]
pub struct Constants {
    values: BTreeMap<String, f64>,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            values: DEFAULTS.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }
}

impl Constants {
    pub fn names() -> impl Iterator<Item = &'static str> {
        DEFAULTS.iter().map(|(k, _)| *k)
    }

    pub fn get(&self, name: &str) -> f64 {
        match self.values.get(name) {
            Some(v) => *v,
            None => panic!("constant {name} is not registered"),
        }
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !self.values.contains_key(name) {
            return Err(Error::Domain(format!("unknown constant {name}")));
        }
        if !value.is_finite() {
            return Err(Error::Domain(format!("constant {name} = {value} is not finite")));
        }
        self.values.insert(name.to_string(), value);
        Ok(())
    }

    /// Applies overrides, rejecting any name missing from the registry.
    pub fn with_overrides(mut self, overrides: &BTreeMap<String, f64>) -> Result<Self> {
        for (k, v) in overrides {
            self.set(k, *v)?;
        }
        Ok(self)
    }

    pub fn as_map(&self) -> &BTreeMap<String, f64> {
        &self.values
    }

    /// The subset of constants named in `keys`, for embedding in a report.
    pub fn subset(&self, keys: &[&str]) -> BTreeMap<String, f64> {
        keys.iter().map(|k| (k.to_string(), self.get(k))).collect()
    }
}

impl TryFrom<BTreeMap<String, f64>> for Constants {
    type Error = Error;

    fn try_from(map: BTreeMap<String, f64>) -> Result<Self> {
        Constants::default().with_overrides(&map)
    }
}

impl From<Constants> for BTreeMap<String, f64> {
    fn from(c: Constants) -> Self {
        c.values
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let c = Constants::default();
        assert_eq!(c.get(C_T), 1.0);
        assert_eq!(c.get(PLANCHEREL_REL_TOL), 1e-3);
        assert_eq!(Constants::names().count(), c.as_map().len());
        let mut over = BTreeMap::new();
        over.insert(C_B.to_string(), 2.5);
        let c = c.with_overrides(&over).unwrap();
        assert_eq!(c.get(C_B), 2.5);
        over.insert("c_unknown".to_string(), 1.0);
        assert!(Constants::default().with_overrides(&over).is_err());
        let text = serde_json::to_string(&c).unwrap();
        let back: Constants = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<Constants>("{\"bogus\": 1.0}").is_err());
    }
}
