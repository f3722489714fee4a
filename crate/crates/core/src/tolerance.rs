use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds shared by every check.
///
/// `structural` bounds matrix identities (unitarity, `TSTST = S`, ...);
/// `integer` bounds the distance of Verlinde sums from the nearest integer.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub structural: f64,
    pub integer: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            structural: 1e-9,
            integer: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn new(structural: f64, integer: f64) -> Result<Self> {
        if !(structural.is_finite() && structural > 0.0 && integer.is_finite() && integer > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "tolerances must be positive (got {structural:e}, {integer:e})"
            )));
        }
        if integer < structural {
            return Err(Error::InvalidSpec(format!(
                "integer tolerance {integer:e} is tighter than structural tolerance {structural:e}"
            )));
        }
        Ok(Tolerances {
            structural,
            integer,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let t = Tolerances::default();
        assert_eq!(t.structural, 1e-9);
        assert_eq!(t.integer, 1e-6);
        assert!(Tolerances::new(t.structural, t.integer).is_ok());
    }

    #[test]
    fn rejects_bad_ordering() {
        assert!(Tolerances::new(1e-6, 1e-9).is_err());
        assert!(Tolerances::new(0.0, 1e-6).is_err());
        assert!(Tolerances::new(f64::NAN, 1e-6).is_err());
    }
}
