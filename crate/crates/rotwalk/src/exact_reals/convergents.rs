use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::angle::AngleDescriptor;
use super::field::{Elem, Field};
use super::interval::RationalInterval;
use super::surd::QuadraticSurd;
use crate::error::Result;

/// Convergents p_h/q_h for h = 0..=depth, with p_{-1} = 1, q_{-1} = 0.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergentTable {
    a: Vec<u64>,
    p: Vec<BigInt>,
    q: Vec<BigInt>,
    surd: Option<QuadraticSurd>,
}

impl ConvergentTable {
    pub fn new(angle: &AngleDescriptor, depth: usize) -> Result<ConvergentTable> {
        let a = angle.quotients(depth)?;
        let mut p = vec![BigInt::zero()];
        let mut q = vec![BigInt::one()];
        let (mut pm, mut qm) = (BigInt::one(), BigInt::zero());
        for &ah in &a {
            let ah = BigInt::from(ah);
            let pn = &ah * p.last().unwrap() + &pm;
            let qn = &ah * q.last().unwrap() + &qm;
            pm = p.last().unwrap().clone();
            qm = q.last().unwrap().clone();
            p.push(pn);
            q.push(qn);
        }
        Ok(ConvergentTable { a, p, q, surd: angle.surd().cloned() })
    }

    pub fn depth(&self) -> usize {
        self.a.len()
    }

    /// a_h for 1 ≤ h ≤ depth.
    pub fn a(&self, h: usize) -> u64 {
        self.a[h - 1]
    }

    pub fn p(&self, h: usize) -> &BigInt {
        &self.p[h]
    }

    pub fn q(&self, h: usize) -> &BigInt {
        &self.q[h]
    }

    pub fn qs(&self) -> &[BigInt] {
        &self.q
    }

    pub fn ps(&self) -> &[BigInt] {
        &self.p
    }

    /// f_h as a surd, when the angle is quadratic.
    pub fn f_surd(&self, h: i64) -> Option<QuadraticSurd> {
        if h < 0 {
            return Some(QuadraticSurd::from_integer(BigInt::one()));
        }
        let s = self.surd.as_ref()?;
        let h = h as usize;
        let v = s
            .mul(&QuadraticSurd::from_integer(self.q[h].clone()))
            .ok()?
            .sub(&QuadraticSurd::from_integer(self.p[h].clone()))
            .ok()?;
        Some(if h % 2 == 0 { v } else { v.neg() })
    }

    pub fn f_elem(&self, field: &Arc<Field>, h: i64) -> Elem {
        if h < 0 {
            return field.int(1);
        }
        field.f(h, &self.p[h as usize], &self.q[h as usize])
    }

    /// Enclosure of f_h from `tightness` quotients of α.
    pub fn f_interval(&self, field: &Arc<Field>, h: i64, tightness: usize) -> Result<RationalInterval> {
        self.f_elem(field, h).enclose(tightness)
    }
}
