use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::interval::RationalInterval;

/// Polynomial with integer coefficients, constant term first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly(Vec<BigInt>);

impl Poly {
    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn constant(c: BigInt) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    pub fn linear(c0: BigInt, c1: BigInt) -> Poly {
        Poly::from_coeffs(vec![c0, c1])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.0.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lead(&self) -> BigInt {
        self.0.last().cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            match (self.0.get(i), other.0.get(i)) {
                (Some(a), Some(b)) => out.push(a + b),
                (Some(a), None) => out.push(a.clone()),
                (None, Some(b)) => out.push(b.clone()),
                (None, None) => unreachable!(),
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn scale(&self, k: &BigInt) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|c| c * k).collect())
    }

    pub fn div_scalar_exact(&self, k: &BigInt) -> Poly {
        Poly(self.0.iter().map(|c| c / k).collect())
    }

    /// Non-negative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.0 {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient, and the signed factor removed.
    pub fn primitive(&self) -> (BigInt, Poly) {
        if self.is_zero() {
            return (BigInt::zero(), Poly::zero());
        }
        let mut g = self.content();
        if self.lead().is_negative() {
            g = -g;
        }
        (g.clone(), self.div_scalar_exact(&g))
    }

    /// Exact quotient over the integers, if `divisor` divides `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if self.degree() < divisor.degree() {
            return None;
        }
        let mut rem = self.0.clone();
        let dl = divisor.lead();
        let dd = divisor.degree();
        let mut quot = vec![BigInt::zero(); self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dd];
            let (q, r) = top.div_rem(&dl);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (i, c) in divisor.0.iter().enumerate() {
                    rem[k + i] -= &q * c;
                }
            }
            quot[k] = q;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(Poly::from_coeffs(quot))
        } else {
            None
        }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Interval enclosure of the polynomial over `x`.
    pub fn eval_interval(&self, x: &RationalInterval) -> RationalInterval {
        let mut acc = RationalInterval::point(BigRational::zero());
        for c in self.0.iter().rev() {
            acc = acc.mul(x).add_scalar(&BigRational::from_integer(c.clone()));
        }
        acc
    }

    pub fn one() -> Poly {
        Poly::constant(BigInt::one())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                1 if mag.is_one() => write!(f, "a")?,
                1 => write!(f, "{mag}*a")?,
                _ if mag.is_one() => write!(f, "a^{i}")?,
                _ => write!(f, "{mag}*a^{i}")?,
            }
        }
        Ok(())
    }
}
