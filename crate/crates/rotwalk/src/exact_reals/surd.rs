use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact value (p + q·√d)/r.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    p: BigInt,
    q: BigInt,
    d: BigInt,
    r: BigInt,
}

/// Sign of a + b·√d for d ≥ 0.
pub fn sign_a_plus_b_sqrt(a: &BigInt, b: &BigInt, d: &BigInt) -> Ordering {
    if let (Some(a), Some(b), Some(d)) = (a.to_i128(), b.to_i128(), d.to_i128()) {
        if let Some(s) = sign_small(a, b, d) {
            return s;
        }
    }
    let sa = a.sign();
    let sb = if d.is_zero() { num_bigint::Sign::NoSign } else { b.sign() };
    use num_bigint::Sign::*;
    match (sa, sb) {
        (NoSign, NoSign) => Ordering::Equal,
        (Plus, Plus) | (Plus, NoSign) | (NoSign, Plus) => Ordering::Greater,
        (Minus, Minus) | (Minus, NoSign) | (NoSign, Minus) => Ordering::Less,
        (Plus, Minus) => (a * a).cmp(&(b * b * d)),
        (Minus, Plus) => (b * b * d).cmp(&(a * a)),
    }
}

fn sign_small(a: i128, b: i128, d: i128) -> Option<Ordering> {
    let sb = if d == 0 { 0 } else { b.signum() };
    Some(match (a.signum(), sb) {
        (0, 0) => Ordering::Equal,
        (x, y) if x >= 0 && y >= 0 => Ordering::Greater,
        (x, y) if x <= 0 && y <= 0 => Ordering::Less,
        (1, _) => a.checked_mul(a)?.cmp(&b.checked_mul(b)?.checked_mul(d)?),
        _ => b.checked_mul(b)?.checked_mul(d)?.cmp(&a.checked_mul(a)?),
    })
}

/// Splits d into (s, f) with d = s²·f and f free of square factors below a search bound.
fn square_split(d: &BigInt) -> (BigInt, BigInt) {
    let mut f = d.clone();
    let mut s = BigInt::one();
    let mut k = BigInt::from(2);
    let bound = BigInt::from(1_000_000u32);
    while &k * &k <= f && k <= bound {
        let kk = &k * &k;
        while (&f % &kk).is_zero() {
            f /= &kk;
            s *= &k;
        }
        k += 1;
    }
    (s, f)
}

impl QuadraticSurd {
    pub fn new(p: BigInt, q: BigInt, d: BigInt, r: BigInt) -> Result<QuadraticSurd> {
        if r.is_zero() {
            return Err(Error::OutOfRange("surd denominator is zero".into()));
        }
        if d.is_negative() {
            return Err(Error::OutOfRange("negative radicand".into()));
        }
        Ok(Self::canonical(p, q, d, r))
    }

    fn canonical(mut p: BigInt, mut q: BigInt, d: BigInt, mut r: BigInt) -> QuadraticSurd {
        let mut d = d;
        if q.is_zero() || d.is_zero() {
            q = BigInt::zero();
            d = BigInt::zero();
        } else {
            let root = d.sqrt();
            if &root * &root == d {
                p += &q * root;
                q = BigInt::zero();
                d = BigInt::zero();
            } else {
                let (s, f) = square_split(&d);
                q *= s;
                d = f;
            }
        }
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        let g = p.gcd(&q).gcd(&r);
        if !g.is_one() && !g.is_zero() {
            p /= &g;
            q /= &g;
            r /= &g;
        }
        QuadraticSurd { p, q, d, r }
    }

    pub fn from_integer(n: BigInt) -> QuadraticSurd {
        QuadraticSurd { p: n, q: BigInt::zero(), d: BigInt::zero(), r: BigInt::one() }
    }

    pub fn from_rational(x: &BigRational) -> QuadraticSurd {
        Self::canonical(x.numer().clone(), BigInt::zero(), BigInt::zero(), x.denom().clone())
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }
    pub fn q(&self) -> &BigInt {
        &self.q
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }
    pub fn r(&self) -> &BigInt {
        &self.r
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.p.clone(), self.r.clone()))
    }

    fn common_d(&self, other: &QuadraticSurd) -> Result<BigInt> {
        match (self.is_rational(), other.is_rational()) {
            (true, true) => Ok(BigInt::zero()),
            (true, false) => Ok(other.d.clone()),
            (false, true) => Ok(self.d.clone()),
            (false, false) if self.d == other.d => Ok(self.d.clone()),
            _ => Err(Error::MixedField(format!("sqrt({}) vs sqrt({})", self.d, other.d))),
        }
    }

    pub fn add(&self, other: &QuadraticSurd) -> Result<QuadraticSurd> {
        let d = self.common_d(other)?;
        Ok(Self::canonical(
            &self.p * &other.r + &other.p * &self.r,
            &self.q * &other.r + &other.q * &self.r,
            d,
            &self.r * &other.r,
        ))
    }

    pub fn neg(&self) -> QuadraticSurd {
        QuadraticSurd { p: -&self.p, q: -&self.q, d: self.d.clone(), r: self.r.clone() }
    }

    pub fn sub(&self, other: &QuadraticSurd) -> Result<QuadraticSurd> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &QuadraticSurd) -> Result<QuadraticSurd> {
        let d = self.common_d(other)?;
        Ok(Self::canonical(
            &self.p * &other.p + &self.q * &other.q * &d,
            &self.p * &other.q + &self.q * &other.p,
            d,
            &self.r * &other.r,
        ))
    }

    pub fn recip(&self) -> Result<QuadraticSurd> {
        let norm = &self.p * &self.p - &self.q * &self.q * &self.d;
        if norm.is_zero() {
            return Err(Error::OutOfRange("division by zero".into()));
        }
        Ok(Self::canonical(&self.r * &self.p, -&self.r * &self.q, self.d.clone(), norm))
    }

    pub fn div(&self, other: &QuadraticSurd) -> Result<QuadraticSurd> {
        self.common_d(other)?;
        self.mul(&other.recip()?)
    }

    pub fn add_int(&self, k: i64) -> QuadraticSurd {
        Self::canonical(&self.p + &self.r * k, self.q.clone(), self.d.clone(), self.r.clone())
    }

    pub fn mul_int(&self, k: i64) -> QuadraticSurd {
        Self::canonical(&self.p * k, &self.q * k, self.d.clone(), self.r.clone())
    }

    pub fn signum(&self) -> Ordering {
        sign_a_plus_b_sqrt(&self.p, &self.q, &self.d)
    }

    pub fn cmp_surd(&self, other: &QuadraticSurd) -> Result<Ordering> {
        Ok(self.sub(other)?.signum())
    }

    /// Compares the value with n/m, m > 0.
    pub fn cmp_rational(&self, n: &BigInt, m: &BigInt) -> Ordering {
        // (p + q√d)/r vs n/m  <=>  m·p − n·r + m·q·√d vs 0
        sign_a_plus_b_sqrt(&(m * &self.p - n * &self.r), &(m * &self.q), &self.d)
    }

    pub fn floor(&self) -> BigInt {
        let s = (&self.q * &self.q * &self.d).sqrt();
        let top = if self.q.is_negative() { &self.p - s - 1 } else { &self.p + s };
        top.div_floor(&self.r)
    }

    pub fn frac(&self) -> QuadraticSurd {
        let f = self.floor();
        Self::canonical(&self.p - f * &self.r, self.q.clone(), self.d.clone(), self.r.clone())
    }

    pub fn to_f64(&self) -> f64 {
        let d = self.d.to_f64().unwrap_or(0.0);
        let v = self.p.to_f64().unwrap_or(f64::NAN) + self.q.to_f64().unwrap_or(f64::NAN) * d.sqrt();
        v / self.r.to_f64().unwrap_or(f64::NAN)
    }

    /// Coefficients (a, b, c) of the primitive minimal polynomial a·x² + b·x + c, a > 0.
    pub fn minimal_polynomial(&self) -> Option<(BigInt, BigInt, BigInt)> {
        if self.is_rational() {
            return None;
        }
        // (r x − p)² = q² d
        let a = &self.r * &self.r;
        let b = BigInt::from(-2) * &self.p * &self.r;
        let c = &self.p * &self.p - &self.q * &self.q * &self.d;
        let g = a.gcd(&b).gcd(&c);
        Some((a / &g, b / &g, c / &g))
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            if self.r.is_one() {
                write!(f, "{}", self.p)
            } else {
                write!(f, "{}/{}", self.p, self.r)
            }
        } else {
            let sign = if self.q.is_negative() { '-' } else { '+' };
            write!(f, "({}{}{}*sqrt({}))/{}", self.p, sign, self.q.abs(), self.d, self.r)
        }
    }
}
