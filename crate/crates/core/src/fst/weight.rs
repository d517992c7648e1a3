use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Tropical semiring weight: a non-negative negative log probability in nats.
///
/// `plus` is `min`, `times` is `+`. The semiring zero is `+inf` and the
/// semiring one is `0.0`.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Weight(f64);

impl Weight {
    pub const ZERO: Weight = Weight(f64::INFINITY);
    pub const ONE: Weight = Weight(0.0);

    /// Panics on negative or NaN values.
    pub fn new(value: f64) -> Weight {
        Weight::try_new(value).unwrap_or_else(|| panic!("invalid tropical weight {value}"))
    }

    pub fn try_new(value: f64) -> Option<Weight> {
        if value.is_nan() || value < 0.0 {
            None
        } else {
            // normalizes -0.0
            Some(Weight(value + 0.0))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn plus(self, other: Weight) -> Weight {
        if other.0 < self.0 {
            other
        } else {
            self
        }
    }

    pub fn times(self, other: Weight) -> Weight {
        Weight(self.0 + other.0)
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::INFINITY
    }
}

impl Eq for Weight {}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Weight {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl Default for Weight {
    fn default() -> Self {
        Weight::ONE
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weight({})", self.0)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl From<Weight> for f64 {
    fn from(w: Weight) -> f64 {
        w.0
    }
}

impl TryFrom<f64> for Weight {
    type Error = String;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        Weight::try_new(value).ok_or_else(|| format!("invalid tropical weight {value}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // dyadic rationals keep + exact so the laws can be checked with ==
    fn weight() -> impl Strategy<Value = Weight> {
        prop_oneof![
            9 => (0u32..4096).prop_map(|n| Weight::new(n as f64 / 64.0)),
            1 => Just(Weight::ZERO),
        ]
    }

    #[test]
    fn identities() {
        let w = Weight::new(2.5);
        assert_eq!(w.plus(Weight::ZERO), w);
        assert_eq!(w.times(Weight::ONE), w);
        assert_eq!(w.times(Weight::ZERO), Weight::ZERO);
        assert!(Weight::try_new(-1.0).is_none());
        assert!(Weight::try_new(f64::NAN).is_none());
        assert_eq!(Weight::new(-0.0).value().to_bits(), 0.0f64.to_bits());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn semiring_laws(a in weight(), b in weight(), c in weight()) {
            prop_assert_eq!(a.plus(b), b.plus(a));
            prop_assert_eq!(a.plus(b).plus(c), a.plus(b.plus(c)));
            prop_assert_eq!(a.times(b).times(c), a.times(b.times(c)));
            prop_assert_eq!(a.times(b.plus(c)), a.times(b).plus(a.times(c)));
            prop_assert_eq!(b.plus(c).times(a), b.times(a).plus(c.times(a)));
            prop_assert_eq!(a.times(Weight::ZERO), Weight::ZERO);
            prop_assert_eq!(Weight::ZERO.times(a), Weight::ZERO);
            prop_assert_eq!(a.plus(Weight::ZERO), a);
            prop_assert_eq!(a.times(Weight::ONE), a);
        }
    }
}
