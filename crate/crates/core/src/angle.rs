//! Logarithmic eigenvalues `theta` in (0, 1), `lambda = exp(pi i theta)`.
//!
//! Strong non-degeneracy asks for irrational `theta`. Exact computation needs
//! rationals, so an [`Angle`] carries a [`Horizon`]:
//!
//! * `Horizon::Finite(K)`: the rational value itself is certified: no iterate
//!   `1 <= k <= K` has `k * theta / 2` integral. Asking about iterates beyond
//!   `K` is an error.
//! * `Horizon::Unbounded`: the value is read as its right limit `theta + 0`,
//!   an irrational number just above `theta`. Every floor `floor(k theta / 2)`
//!   of the right limit equals the floor of the rational value, and no iterate
//!   is degenerate, so sequences are defined for every `k`.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::rational::{floor_half_multiple, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Horizon {
    Finite(u64),
    Unbounded,
}

impl Horizon {
    pub fn covers(self, k: u64) -> bool {
        match self {
            Horizon::Finite(h) => k <= h,
            Horizon::Unbounded => true,
        }
    }

    /// Errors with `HorizonExceeded` unless iterate `k` is covered.
    pub fn check(self, k: u64) -> Result<()> {
        match self {
            Horizon::Finite(h) if k > h => Err(Error::HorizonExceeded {
                requested: k,
                horizon: h,
            }),
            _ => Ok(()),
        }
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Horizon::Finite(h) => Some(h),
            Horizon::Unbounded => None,
        }
    }
}

impl PartialOrd for Horizon {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Horizon {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Horizon::Finite(a), Horizon::Finite(b)) => a.cmp(b),
            (Horizon::Finite(_), Horizon::Unbounded) => Ordering::Less,
            (Horizon::Unbounded, Horizon::Finite(_)) => Ordering::Greater,
            (Horizon::Unbounded, Horizon::Unbounded) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Horizon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Horizon::Finite(h) => write!(f, "{h}"),
            Horizon::Unbounded => f.write_str("unbounded"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Angle {
    value: Rational,
    horizon: Horizon,
}

impl Angle {
    /// Certified angle: fails if some `k <= horizon` is degenerate.
    pub fn new(value: Rational, horizon: u64) -> Result<Self> {
        check_open_unit(&value)?;
        let first = first_degenerate_iterate(&value);
        if first <= horizon {
            return Err(Error::NonDegeneracyViolation { value, k: first });
        }
        Ok(Angle {
            value,
            horizon: Horizon::Finite(horizon),
        })
    }

    /// Right-limit reading of `value`; see the module docs.
    pub fn right_limit(value: Rational) -> Result<Self> {
        check_open_unit(&value)?;
        Ok(Angle {
            value,
            horizon: Horizon::Unbounded,
        })
    }

    pub fn with_horizon(value: Rational, horizon: Horizon) -> Result<Self> {
        match horizon {
            Horizon::Finite(h) => Angle::new(value, h),
            Horizon::Unbounded => Angle::right_limit(value),
        }
    }

    pub fn value(&self) -> Rational {
        self.value
    }

    pub fn horizon(&self) -> Horizon {
        self.horizon
    }

    /// `floor(k * theta / 2)`, unchecked against the horizon.
    pub fn half_floor(&self, k: u64) -> i64 {
        floor_half_multiple(&self.value, k)
    }

    /// Same angle with the horizon lowered to `horizon` if that is smaller.
    pub(crate) fn restricted(self, horizon: Horizon) -> Self {
        Angle {
            value: self.value,
            horizon: self.horizon.min(horizon),
        }
    }
}

fn check_open_unit(value: &Rational) -> Result<()> {
    let zero = Rational::from_integer(0);
    let one = Rational::from_integer(1);
    if *value <= zero || *value >= one {
        return Err(Error::AngleOutOfRange { value: *value });
    }
    Ok(())
}

/// Smallest `k >= 1` with `k * theta / 2` an integer.
///
/// For `theta = p/q` in lowest terms this is `2q / gcd(p, 2q)`.
pub fn first_degenerate_iterate(theta: &Rational) -> u64 {
    let p = theta.numer().unsigned_abs();
    let two_q = 2 * theta.denom().unsigned_abs();
    two_q / p.gcd(&two_q)
}
