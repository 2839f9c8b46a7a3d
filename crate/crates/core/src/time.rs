//! Simulated time.
//!
//! The engine keeps time as an integer count of nanoseconds so that delay
//! components add up to the end-to-end total without rounding drift.

use core::fmt;
use core::ops::{Add, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SimTime(pub u64);

impl SimTime {
    pub const ZERO: SimTime = SimTime(0);
    pub const NANOS_PER_SEC: u64 = 1_000_000_000;

    /// Rounds a non-negative duration in seconds to the nearest nanosecond.
    /// Negative or NaN inputs clamp to zero.
    pub fn from_secs(secs: f64) -> SimTime {
        if !(secs > 0.0) {
            return SimTime::ZERO;
        }
        SimTime(libm::round(secs * Self::NANOS_PER_SEC as f64) as u64)
    }

    pub fn as_secs(self) -> f64 {
        self.0 as f64 / Self::NANOS_PER_SEC as f64
    }

    pub fn nanos(self) -> u64 {
        self.0
    }

    pub fn saturating_sub(self, rhs: SimTime) -> SimTime {
        SimTime(self.0.saturating_sub(rhs.0))
    }
}

impl Add for SimTime {
    type Output = SimTime;
    fn add(self, rhs: SimTime) -> SimTime {
        SimTime(self.0 + rhs.0)
    }
}

impl Sub for SimTime {
    type Output = SimTime;
    fn sub(self, rhs: SimTime) -> SimTime {
        SimTime(self.0 - rhs.0)
    }
}

/// Prints seconds with nine fractional digits, which is exact at nanosecond
/// resolution.
impl fmt::Display for SimTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let secs = self.0 / Self::NANOS_PER_SEC;
        let frac = self.0 % Self::NANOS_PER_SEC;
        write!(f, "{secs}.{frac:09}")
    }
}
