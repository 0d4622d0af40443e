//! Exact irrational angles, quadratic surds, and exact comparisons in ℚ(α).

mod angle;
mod convergents;
mod fastcmp;
mod field;
mod interval;
mod parse;
mod poly;
mod surd;

pub use angle::{surd_to_cf, AngleDescriptor, AngleKind, Rule, DEFAULT_RULE_CAP};
pub use convergents::ConvergentTable;
pub use fastcmp::Comparator;
pub use field::{Elem, Field};
pub use interval::RationalInterval;
pub use parse::{parse_angle, parse_beta, parse_surd, BetaSpec};
pub use poly::Poly;
pub use surd::{sign_a_plus_b_sqrt, QuadraticSurd};

use std::cmp::Ordering;

use crate::error::Result;

pub fn quotients(angle: &AngleDescriptor, m: usize) -> Result<Vec<u64>> {
    angle.quotients(m)
}

pub fn convergent_table(angle: &AngleDescriptor, depth: usize) -> Result<ConvergentTable> {
    ConvergentTable::new(angle, depth)
}

pub fn gauss_shift(angle: &AngleDescriptor, m: usize) -> Result<AngleDescriptor> {
    angle.gauss_shift(m)
}

pub fn bar_shift(angle: &AngleDescriptor, m: usize) -> Result<AngleDescriptor> {
    angle.bar_shift(m)
}

/// Exact ordering of {rα} against a threshold of the angle's field.
pub fn frac_compare(r: u128, threshold: &Elem) -> Result<Ordering> {
    let angle = threshold.field().angle();
    let k = angle.floor_mul(r)?;
    if let Some((u, v)) = threshold.as_linear() {
        // rα − k vs u + vα  <=>  (r − v)α vs u + k
        let lhs = num_rational::BigRational::from_integer(r.into()) - v;
        let rhs = u + num_rational::BigRational::from_integer(k.into());
        use num_traits::{Signed, Zero};
        if lhs.is_zero() {
            return Ok(rhs.numer().sign().cmp(&num_bigint::Sign::NoSign).reverse());
        }
        let t = rhs / &lhs;
        let o = angle.cmp_rational(t.numer(), t.denom())?;
        return Ok(if lhs.is_negative() { o.reverse() } else { o });
    }
    let field = threshold.field();
    let x = &(&field.alpha().mul_int(1) * &field.big(r.into())) - &field.big(k.into());
    x.cmp_exact(threshold)
}
