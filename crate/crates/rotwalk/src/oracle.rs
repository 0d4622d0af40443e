//! Brute-force ground truth by direct summation over the orbit.
//!
//! Nothing here depends on the renormalization modules.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::exact_reals::{AngleDescriptor, Comparator, Elem};

/// An orbit point (a + b·α)/d with d > 0 and its integer part.
#[derive(Clone, Debug)]
struct Point {
    a: i128,
    b: i128,
    d: i128,
    floor: i128,
}

/// Affine offset (u + v·α)/w with machine-sized integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Affine {
    pub u: i128,
    pub v: i128,
    pub w: i128,
}

impl Affine {
    pub fn from_elem(x: &Elem) -> Result<Affine> {
        let (u, v) = x
            .as_linear()
            .ok_or_else(|| Error::OutOfRange(format!("offset {x} is not affine in the angle")))?;
        Affine::from_rationals(&u, &v)
    }

    pub fn from_rationals(u: &BigRational, v: &BigRational) -> Result<Affine> {
        let w = u.denom().lcm(v.denom());
        let un = u.numer() * (&w / u.denom());
        let vn = v.numer() * (&w / v.denom());
        let fit = |x: &BigInt| x.to_i128().filter(|y| y.unsigned_abs() < 1 << 80);
        match (fit(&un), fit(&vn), fit(&w)) {
            (Some(u), Some(v), Some(w)) => Ok(Affine { u, v, w }),
            _ => Err(Error::OutOfRange("offset coefficients too large for a direct scan".into())),
        }
    }

    pub fn zero() -> Affine {
        Affine { u: 0, v: 0, w: 1 }
    }
}

/// Incremental scan of y_r = rα + β.
struct Orbit<'a> {
    cmp: &'a Comparator,
    p: Point,
}

impl<'a> Orbit<'a> {
    fn new(cmp: &'a Comparator, beta: Affine) -> Result<Orbit<'a>> {
        let mut p = Point { a: beta.u, b: beta.v, d: beta.w, floor: 0 };
        p.floor = floor_point(cmp, &p)?;
        Ok(Orbit { cmp, p })
    }

    fn advance(&mut self) -> Result<()> {
        self.p.b += self.p.d;
        // ⌊y + α⌋ ∈ {⌊y⌋, ⌊y⌋ + 1}
        let next = self.p.floor + 1;
        if sign(self.cmp, self.p.a - next * self.p.d, self.p.b)? != Ordering::Less {
            self.p.floor = next;
        }
        Ok(())
    }

    /// {y} vs (tu + tv·α)/tw.
    fn frac_vs(&self, t: &Affine) -> Result<Ordering> {
        let p = &self.p;
        // (a − floor·d)/d − (tu + tv α)/tw = [tw(a − fd) − d·tu + (tw·b − d·tv)α] / (d·tw)
        let c0 = t.w * (p.a - p.floor * p.d) - p.d * t.u;
        let c1 = t.w * p.b - p.d * t.v;
        sign(self.cmp, c0, c1)
    }

    /// s({y}) = +1 iff {y} < 1/2.
    fn s(&self) -> Result<i64> {
        let p = &self.p;
        let c0 = 2 * (p.a - p.floor * p.d) - p.d;
        Ok(if sign(self.cmp, c0, 2 * p.b)? == Ordering::Less { 1 } else { -1 })
    }
}

fn sign(cmp: &Comparator, a: i128, b: i128) -> Result<Ordering> {
    let s = cmp.sign_affine_int(a, b)?;
    if s == Ordering::Equal && b != 0 {
        return Err(Error::EqualityDetected(format!("{a} + {b}·α vanishes")));
    }
    Ok(s)
}

fn floor_point(cmp: &Comparator, p: &Point) -> Result<i128> {
    let est = (p.a as f64 + p.b as f64 * cmp.approx()) / p.d as f64;
    let mut k = est.floor() as i128;
    while sign(cmp, p.a - k * p.d, p.b)? == Ordering::Less {
        k -= 1;
    }
    while sign(cmp, p.a - (k + 1) * p.d, p.b)? != Ordering::Less {
        k += 1;
    }
    Ok(k)
}

fn horizon(angle: &AngleDescriptor, n: u128) -> Result<()> {
    angle.check_index(n)
}

fn offset(beta: Option<&Elem>) -> Result<Affine> {
    beta.map_or(Ok(Affine::zero()), Affine::from_elem)
}

/// S_n(α, β) = Σ_{r=0}^{n} s({rα + β}).
pub fn oracle_walk(n: u128, angle: &AngleDescriptor, beta: Option<&Elem>) -> Result<i64> {
    Ok(*oracle_walk_series(n, angle, beta)?.last().unwrap())
}

/// S_0, …, S_n.
pub fn oracle_walk_series(n: u128, angle: &AngleDescriptor, beta: Option<&Elem>) -> Result<Vec<i64>> {
    horizon(angle, n)?;
    let cmp = Comparator::new(angle);
    let mut orbit = Orbit::new(&cmp, offset(beta)?)?;
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut acc = 0i64;
    for r in 0..=n {
        if r > 0 {
            orbit.advance()?;
        }
        acc += orbit.s()?;
        out.push(acc);
    }
    Ok(out)
}

/// Σ_{r=0}^{n} s({−rα}).
pub fn oracle_walk_negative(n: u128, angle: &AngleDescriptor) -> Result<i64> {
    horizon(angle, n)?;
    let cmp = Comparator::new(angle);
    let mut acc = 1i64;
    for r in 1..=n {
        // {−rα} = ⌊rα⌋ + 1 − rα
        let k = cmp.floor_mul(r)? as i128;
        let below = sign(&cmp, 2 * (k + 1) - 1, -2 * r as i128)? == Ordering::Less;
        acc += if below { 1 } else { -1 };
    }
    Ok(acc)
}

/// (max, min) of S_n(α) over 0 ≤ n ≤ r.
pub fn oracle_extrema(r: u128, angle: &AngleDescriptor) -> Result<(i64, i64)> {
    let s = oracle_walk_series(r, angle, None)?;
    Ok((*s.iter().max().unwrap(), *s.iter().min().unwrap()))
}

/// Counts #{r < n : {rα} ∈ I} for n = 0..=n_max, with I = [0, β) or (1 − β, 1) when complemented.
pub fn oracle_counts(n_max: u128, angle: &AngleDescriptor, beta: &Elem, complemented: bool) -> Result<Vec<u64>> {
    if n_max > 0 {
        horizon(angle, n_max - 1)?;
    }
    let cmp = Comparator::new(angle);
    let b = Affine::from_elem(beta)?;
    let t = if complemented { Affine { u: b.w - b.u, v: -b.v, w: b.w } } else { b };
    let mut orbit = Orbit::new(&cmp, Affine::zero())?;
    let mut out = Vec::with_capacity(n_max as usize + 1);
    out.push(0u64);
    let mut acc = 0u64;
    for r in 0..n_max {
        if r > 0 {
            orbit.advance()?;
        }
        let o = orbit.frac_vs(&t)?;
        let hit = if complemented { o == Ordering::Greater } else { o == Ordering::Less };
        if hit {
            acc += 1;
        }
        out.push(acc);
    }
    Ok(out)
}

/// d_n(α, β) = Σ_{r<n} χ_{[0,β)}({rα}) − βn.
pub fn oracle_drel(n: u128, angle: &AngleDescriptor, beta: &Elem) -> Result<Elem> {
    Ok(oracle_drel_series(n, angle, beta, false)?.pop().unwrap())
}

/// d_n with χ_{(1−β,1)} in place of χ_{[0,β)}.
pub fn oracle_drel_complemented(n: u128, angle: &AngleDescriptor, beta: &Elem) -> Result<Elem> {
    Ok(oracle_drel_series(n, angle, beta, true)?.pop().unwrap())
}

/// d_0, …, d_{n_max}.
pub fn oracle_drel_series(n_max: u128, angle: &AngleDescriptor, beta: &Elem, complemented: bool) -> Result<Vec<Elem>> {
    let counts = oracle_counts(n_max, angle, beta, complemented)?;
    let field = beta.field();
    Ok(counts
        .iter()
        .enumerate()
        .map(|(n, &c)| &field.big(BigInt::from(c)) - &(beta * &field.big(BigInt::from(n))))
        .collect())
}

/// Orbit points {rα}, r < n, as (−⌊rα⌋, r) meaning rα − ⌊rα⌋.
fn orbit_points(n: u128, cmp: &Comparator) -> Result<Vec<(i128, i128)>> {
    let mut out = Vec::with_capacity(n as usize);
    let mut orbit = Orbit::new(cmp, Affine::zero())?;
    for r in 0..n {
        if r > 0 {
            orbit.advance()?;
        }
        out.push((-orbit.p.floor, r as i128));
    }
    Ok(out)
}

/// n·D_n* = sup_β |d_n(α, β)| by evaluating both one-sided limits at every breakpoint.
///
/// Quadratic in n; meant as a reference for small horizons.
pub fn oracle_dstar(n: u128, angle: &AngleDescriptor) -> Result<Elem> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be positive".into()));
    }
    horizon(angle, n - 1)?;
    let cmp = Comparator::new(angle);
    let pts = orbit_points(n, &cmp)?;
    let ni = n as i128;
    // candidate values c0 + c1·α, all of |d| at the limits β → y⁺ and β → y⁻ (with y = 1 included)
    let mut best: Option<(i128, i128)> = None;
    let consider = |c0: i128, c1: i128, best: &mut Option<(i128, i128)>| -> Result<()> {
        let (c0, c1) = if sign(&cmp, c0, c1)? == Ordering::Less { (-c0, -c1) } else { (c0, c1) };
        match best {
            Some((b0, b1)) if sign(&cmp, c0 - *b0, c1 - *b1)? != Ordering::Greater => {}
            _ => *best = Some((c0, c1)),
        }
        Ok(())
    };
    let mut breakpoints: Vec<(i128, i128)> = pts.clone();
    breakpoints.push((1, 0));
    for &(y0, y1) in &breakpoints {
        let mut below = 0i128;
        let mut at = 0i128;
        for &(x0, x1) in &pts {
            match sign(&cmp, x0 - y0, x1 - y1).or_else(|e| match e {
                Error::EqualityDetected(_) => Ok(Ordering::Equal),
                e => Err(e),
            })? {
                Ordering::Less => below += 1,
                Ordering::Equal => at += 1,
                Ordering::Greater => {}
            }
        }
        // left limit: count below − n·y; right limit: count (below + at) − n·y
        let is_one = y0 == 1 && y1 == 0;
        consider(below - ni * y0, -ni * y1, &mut best)?;
        if !is_one {
            consider(below + at - ni * y0, -ni * y1, &mut best)?;
        }
    }
    let (b0, b1) = best.unwrap();
    let field = crate::exact_reals::Field::new(angle);
    Ok(field.linear(BigInt::from(b0), BigInt::from(b1), BigInt::one()))
}

/// Σ_{k<n} χ_{[γ,δ)}({kα + β}) − n(δ − γ), evaluated directly.
pub fn oracle_birkhoff(n: u128, angle: &AngleDescriptor, beta: &Elem, gamma: &Elem, delta: &Elem) -> Result<Elem> {
    if n > 0 {
        horizon(angle, n - 1)?;
    }
    let cmp = Comparator::new(angle);
    let lo = Affine::from_elem(gamma)?;
    let hi = Affine::from_elem(delta)?;
    let mut orbit = Orbit::new(&cmp, Affine::from_elem(beta)?)?;
    let mut count = 0i64;
    for r in 0..n {
        if r > 0 {
            orbit.advance()?;
        }
        let above_lo = orbit.frac_vs(&lo)? != Ordering::Less;
        let below_hi = orbit.frac_vs(&hi)? == Ordering::Less;
        if above_lo && below_hi {
            count += 1;
        }
    }
    let field = beta.field();
    let len = delta - gamma;
    Ok(&field.int(count) - &(&len * &field.big(BigInt::from(n))))
}

/// Block lengths t_k and first-visit indices r_k for k < k_max, by scanning ⌊rα⌋.
pub fn oracle_return_structure(k_max: usize, angle: &AngleDescriptor) -> Result<(Vec<u64>, Vec<u128>)> {
    let cmp = Comparator::new(angle);
    let mut r_list: Vec<u128> = Vec::with_capacity(k_max + 1);
    let mut r = 0u128;
    let mut last: Option<u128> = None;
    while r_list.len() <= k_max {
        let k = cmp.floor_mul(r)?;
        if last != Some(k) {
            debug_assert_eq!(k as usize, r_list.len());
            r_list.push(r);
            last = Some(k);
        }
        r += 1;
    }
    let t = r_list.windows(2).map(|w| (w[1] - w[0]) as u64).collect();
    r_list.truncate(k_max);
    Ok((t, r_list))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_reals::Field;

    #[test]
    fn walk_examples() {
        let s = AngleDescriptor::sqrt2m1();
        assert_eq!(oracle_walk_series(7, &s, None).unwrap(), vec![1, 2, 1, 2, 1, 2, 3, 2]);
        assert_eq!(oracle_walk(0, &AngleDescriptor::golden(), None).unwrap(), 1);
        let f = Field::new(&s);
        assert_eq!(oracle_walk(2, &s, Some(&f.ratio(1, 10))).unwrap(), -1);
    }

    #[test]
    fn discrepancy_examples() {
        let s = AngleDescriptor::sqrt2m1();
        let f = Field::new(&s);
        assert_eq!(oracle_drel(3, &s, &f.ratio(1, 2)).unwrap(), f.ratio(1, 2));
        assert_eq!(oracle_drel(3, &s, &f.ratio(2, 5)).unwrap(), f.ratio(-1, 5));
        assert_eq!(oracle_dstar(1, &s).unwrap(), f.int(1));
        assert_eq!(oracle_dstar(3, &s).unwrap(), f.int(1));
    }

    #[test]
    fn return_structure_example() {
        let (t, r) = oracle_return_structure(3, &AngleDescriptor::sqrt2m1()).unwrap();
        assert_eq!(t, vec![3, 2, 3]);
        assert_eq!(r, vec![0, 3, 5]);
    }
}
