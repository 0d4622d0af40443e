use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::angle::AngleDescriptor;
use crate::error::Result;

/// Exact comparisons of α with rationals, with machine-integer fast paths.
#[derive(Clone, Debug)]
pub struct Comparator {
    angle: AngleDescriptor,
    surd: Option<[i128; 4]>,
    /// α lies strictly between lo and hi, as (num, den) pairs.
    cylinder: Option<((i128, i128), (i128, i128))>,
    approx: f64,
}

const CYLINDER_DEN_LIMIT: i128 = 1 << 60;

impl Comparator {
    pub fn new(angle: &AngleDescriptor) -> Comparator {
        let surd = angle.surd().and_then(|s| {
            Some([s.p().to_i128()?, s.q().to_i128()?, s.d().to_i128()?, s.r().to_i128()?])
                .filter(|v| v.iter().all(|x| x.unsigned_abs() < 1 << 40))
        });
        let cylinder = if surd.is_none() { Self::cylinder(angle) } else { None };
        Comparator { angle: angle.clone(), surd, cylinder, approx: angle.approx_f64() }
    }

    fn cylinder(angle: &AngleDescriptor) -> Option<((i128, i128), (i128, i128))> {
        let (mut p0, mut q0, mut p1, mut q1) = (1i128, 0i128, 0i128, 1i128);
        let mut h = 1;
        let mut any = false;
        while let Ok(a) = angle.quotient(h) {
            let a = a as i128;
            let (p2, q2) = (a.checked_mul(p1)? + p0, a.checked_mul(q1)? + q0);
            if q2 + q1 > CYLINDER_DEN_LIMIT {
                break;
            }
            p0 = p1;
            q0 = q1;
            p1 = p2;
            q1 = q2;
            h += 1;
            any = true;
        }
        if !any {
            return None;
        }
        let (a, b) = ((p1, q1), (p1 + p0, q1 + q0));
        Some(if a.0 * b.1 <= b.0 * a.1 { (a, b) } else { (b, a) })
    }

    pub fn angle(&self) -> &AngleDescriptor {
        &self.angle
    }

    pub fn approx(&self) -> f64 {
        self.approx
    }

    /// α vs n/m, m ≠ 0.
    pub fn cmp(&self, n: i128, m: i128) -> Result<Ordering> {
        let (n, m) = if m < 0 { (-n, -m) } else { (n, m) };
        if n <= 0 {
            return Ok(Ordering::Greater);
        }
        if n >= m {
            return Ok(Ordering::Less);
        }
        if let Some([p, q, d, r]) = self.surd {
            // (p + q√d)/r vs n/m  <=>  m·p − n·r + m·q·√d vs 0
            if let (Some(a), Some(b)) = (
                m.checked_mul(p).and_then(|x| x.checked_sub(n.checked_mul(r)?)),
                m.checked_mul(q),
            ) {
                if let Some(o) = sign_small(a, b, d) {
                    return Ok(o);
                }
            }
        }
        if let Some(((ln, ld), (hn, hd))) = self.cylinder {
            if let (Some(x), Some(y)) = (n.checked_mul(ld), ln.checked_mul(m)) {
                if x <= y {
                    return Ok(Ordering::Greater);
                }
            }
            if let (Some(x), Some(y)) = (n.checked_mul(hd), hn.checked_mul(m)) {
                if x >= y {
                    return Ok(Ordering::Less);
                }
            }
        }
        self.angle.cmp_rational(&BigInt::from(n), &BigInt::from(m))
    }

    pub fn cmp_big(&self, n: &BigInt, m: &BigInt) -> Result<Ordering> {
        if let (Some(a), Some(b)) = (n.to_i128(), m.to_i128()) {
            return self.cmp(a, b);
        }
        if m.is_negative() {
            self.angle.cmp_rational(&-n, &-m)
        } else {
            self.angle.cmp_rational(n, m)
        }
    }

    pub fn cmp_ratio(&self, x: &BigRational) -> Result<Ordering> {
        self.cmp_big(x.numer(), x.denom())
    }

    /// ⌊rα⌋ for r ≥ 0.
    pub fn floor_mul(&self, r: u128) -> Result<u128> {
        if r == 0 {
            return Ok(0);
        }
        if r >= 1 << 52 {
            return self.angle.floor_mul(r);
        }
        let mut k = (r as f64 * self.approx).floor().max(0.0) as u128;
        let ri = r as i128;
        while k > 0 && self.cmp(k as i128, ri)? == Ordering::Less {
            k -= 1;
        }
        while self.cmp(k as i128 + 1, ri)? != Ordering::Less {
            k += 1;
        }
        Ok(k)
    }

    /// Sign of u + v·α for rationals u, v.
    pub fn sign_affine(&self, u: &BigRational, v: &BigRational) -> Result<Ordering> {
        if v.is_zero() {
            return Ok(u.numer().sign().cmp(&num_bigint::Sign::NoSign));
        }
        // u + vα > 0  <=>  α vs −u/v with orientation of v
        let t = -(u / v);
        let o = self.cmp_ratio(&t)?;
        Ok(if v.is_negative() { o.reverse() } else { o })
    }

    /// Sign of a + b·α for integers a, b.
    pub fn sign_affine_int(&self, a: i128, b: i128) -> Result<Ordering> {
        if b == 0 {
            return Ok(a.cmp(&0));
        }
        let o = self.cmp(-a, b)?;
        Ok(if b < 0 { o.reverse() } else { o })
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_paths_agree_with_exact_route() {
        let angles = [
            AngleDescriptor::sqrt2m1(),
            AngleDescriptor::golden(),
            AngleDescriptor::em2().truncate(40).unwrap(),
        ];
        for a in &angles {
            let c = Comparator::new(a);
            for m in 1..150i128 {
                for n in -2..=m + 2 {
                    let slow = a.cmp_rational(&BigInt::from(n), &BigInt::from(m));
                    let slow = if n <= 0 { Ok(Ordering::Greater) } else if n >= m { Ok(Ordering::Less) } else { slow };
                    assert_eq!(c.cmp(n, m).unwrap(), slow.unwrap());
                }
            }
        }
    }
}
