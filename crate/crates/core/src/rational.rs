use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A non-negative reduced fraction, used for exponents and initial critical
/// exponents. Always rendered as `num/den`, including integers (`2/1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExactRational(Ratio<u64>);

impl ExactRational {
    pub fn new(numer: u64, denom: u64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(ExactRational(Ratio::new(numer, denom)))
    }

    /// Panics on a zero denominator; for internal call sites where the
    /// denominator is a length or a period.
    pub(crate) fn from_parts(numer: u64, denom: u64) -> Self {
        ExactRational(Ratio::new(numer, denom))
    }

    pub fn integer(value: u64) -> Self {
        ExactRational(Ratio::from_integer(value))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    pub fn as_ratio(&self) -> Ratio<u64> {
        self.0
    }
}

impl Ord for ExactRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.numer() as u128 * other.denom() as u128;
        let rhs = other.numer() as u128 * self.denom() as u128;
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for ExactRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("cannot parse rational {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n = n.trim().parse().map_err(|_| bad())?;
                let d = d.trim().parse().map_err(|_| bad())?;
                ExactRational::new(n, d)
            }
            None => Ok(ExactRational::integer(s.trim().parse().map_err(|_| bad())?)),
        }
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_renders() {
        let r = ExactRational::new(14, 6).unwrap();
        assert_eq!((r.numer(), r.denom()), (7, 3));
        assert_eq!(r.to_string(), "7/3");
        assert_eq!(ExactRational::integer(1).to_string(), "1/1");
    }

    #[test]
    fn ordering_is_exact() {
        let a = ExactRational::new(7, 4).unwrap();
        let b = ExactRational::new(5, 3).unwrap();
        assert!(a > b);
        assert_eq!("7/4".parse::<ExactRational>().unwrap(), a);
        assert!(ExactRational::new(1, 0).is_err());
    }
}
