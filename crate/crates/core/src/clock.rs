//! Time sources for limits and statistics.
//!
//! The algorithms only need "seconds elapsed since some fixed origin". In a
//! `no_std` build the caller supplies its own [`Clock`]; [`NoClock`] disables
//! every time limit.

/// Monotone elapsed-time source, in seconds.
pub trait Clock {
    fn now(&self) -> f64;
}

/// A clock that never advances. Time limits never trigger.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn now(&self) -> f64 {
        0.0
    }
}

/// Wall clock measured from construction.
#[cfg(feature = "std")]
#[derive(Clone, Copy, Debug)]
pub struct StdClock(std::time::Instant);

#[cfg(feature = "std")]
impl StdClock {
    pub fn start() -> Self {
        StdClock(std::time::Instant::now())
    }
}

#[cfg(feature = "std")]
impl Default for StdClock {
    fn default() -> Self {
        Self::start()
    }
}

#[cfg(feature = "std")]
impl Clock for StdClock {
    fn now(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

/// A deadline relative to a clock reading. `None` means unlimited.
#[derive(Clone, Copy, Debug, Default)]
pub struct Deadline {
    at: Option<f64>,
}

impl Deadline {
    pub fn none() -> Self {
        Deadline { at: None }
    }

    pub fn after(clock: &dyn Clock, seconds: Option<f64>) -> Self {
        Deadline {
            at: seconds.map(|s| clock.now() + s),
        }
    }

    pub fn expired(&self, clock: &dyn Clock) -> bool {
        match self.at {
            Some(t) => clock.now() >= t,
            None => false,
        }
    }

    /// Seconds left, or `None` when unlimited.
    pub fn remaining(&self, clock: &dyn Clock) -> Option<f64> {
        self.at.map(|t| (t - clock.now()).max(0.0))
    }
}
