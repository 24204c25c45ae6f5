use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable holding a decimal literal that replaces every default epsilon.
pub const TOLERANCE_ENV: &str = "ANGLESPACE_TOLERANCE";

pub const DEFAULT_EPS: f64 = 1e-9;
const MAX_EPS: f64 = 1e-2;

/// Numerical tolerances used by every check.
///
/// `eps_angle` is in radians, `eps_rel` is relative, and `eps_det` is multiplied by
/// `(max |entry|)^order` before it is compared with a determinant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    pub eps_angle: f64,
    pub eps_rel: f64,
    pub eps_det: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self::uniform(DEFAULT_EPS)
    }
}

impl ToleranceConfig {
    pub fn uniform(eps: f64) -> Self {
        Self {
            eps_angle: eps,
            eps_rel: eps,
            eps_det: eps,
        }
    }

    pub fn new(eps_angle: f64, eps_rel: f64, eps_det: f64) -> Result<Self> {
        let tol = Self {
            eps_angle,
            eps_rel,
            eps_det,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("eps_angle", self.eps_angle),
            ("eps_rel", self.eps_rel),
            ("eps_det", self.eps_det),
        ] {
            if !(value > 0.0 && value <= MAX_EPS) {
                return Err(Error::InvalidTolerance { name, value });
            }
        }
        Ok(())
    }

    /// Defaults, overridden by [`TOLERANCE_ENV`] when it is set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(TOLERANCE_ENV) {
            Ok(raw) => Self::from_literal(&raw),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn from_literal(raw: &str) -> Result<Self> {
        let value: f64 = raw.trim().parse().map_err(|_| Error::InvalidTolerance {
            name: TOLERANCE_ENV,
            value: f64::NAN,
        })?;
        let tol = Self::uniform(value);
        tol.validate()?;
        Ok(tol)
    }

    /// Determinant tolerance for a matrix of the given order and largest absolute entry.
    pub fn det_threshold(&self, max_abs_entry: f64, order: usize) -> f64 {
        self.eps_det * max_abs_entry.max(f64::MIN_POSITIVE).powi(order as i32)
    }
}
