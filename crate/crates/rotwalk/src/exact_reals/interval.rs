use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Closed interval with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalInterval {
    lo: BigRational,
    hi: BigRational,
}

impl RationalInterval {
    pub fn new(a: BigRational, b: BigRational) -> RationalInterval {
        if a <= b {
            RationalInterval { lo: a, hi: b }
        } else {
            RationalInterval { lo: b, hi: a }
        }
    }

    pub fn point(x: BigRational) -> RationalInterval {
        RationalInterval { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn add(&self, other: &RationalInterval) -> RationalInterval {
        RationalInterval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    pub fn add_scalar(&self, c: &BigRational) -> RationalInterval {
        RationalInterval { lo: &self.lo + c, hi: &self.hi + c }
    }

    pub fn neg(&self) -> RationalInterval {
        RationalInterval { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn mul(&self, other: &RationalInterval) -> RationalInterval {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if *c < lo {
                lo = c.clone();
            }
            if *c > hi {
                hi = c.clone();
            }
        }
        RationalInterval { lo, hi }
    }

    /// Sign of every point of the interval, if it is uniform and nonzero.
    pub fn strict_sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    pub fn is_point_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
