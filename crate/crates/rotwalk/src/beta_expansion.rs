//! Expansion of an offset β in the base (f_k) and the renormalized offsets.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact_reals::{convergent_table, AngleDescriptor, ConvergentTable, Elem, Field};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeStatus {
    /// β = t + sα.
    InLattice { t: BigInt, s: BigInt },
    NotInLattice,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct BetaExpansion {
    beta: Elem,
    coeffs: Vec<u64>,
    /// β_0 = β, β_1, ..., β_depth.
    remainders: Vec<Elem>,
    /// f_{−1}, f_0, ..., f_depth.
    f: Vec<Elem>,
    quotients: Vec<u64>,
    lattice: LatticeStatus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OffsetKind {
    Plain,
    Barred,
}

#[derive(Clone, Debug)]
pub struct RenormOffset {
    pub m: usize,
    pub kind: OffsetKind,
    pub value: Elem,
}

fn check_unit(beta: &Elem) -> Result<()> {
    let field = beta.field();
    if beta.sign()? != Ordering::Greater || !beta.lt(&field.int(1))? {
        return Err(Error::OutOfRange(format!("offset {beta} must lie in (0,1)")));
    }
    Ok(())
}

impl BetaExpansion {
    pub fn beta(&self) -> &Elem {
        &self.beta
    }

    /// b_0, ..., b_{depth−1}.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs[k]
    }

    /// β_k with β_0 = β.
    pub fn remainder(&self, k: usize) -> &Elem {
        &self.remainders[k]
    }

    /// f_k for k ≥ −1.
    pub fn f(&self, k: i64) -> &Elem {
        &self.f[(k + 1) as usize]
    }

    pub fn depth(&self) -> usize {
        self.coeffs.len()
    }

    pub fn lattice(&self) -> &LatticeStatus {
        &self.lattice
    }

    /// Index of the last nonzero digit, when a remainder vanished within the depth.
    pub fn support_end(&self) -> Option<usize> {
        let first_zero = self.remainders.iter().position(|r| r.is_zero())?;
        Some(self.coeffs[..first_zero].iter().rposition(|&b| b > 0).unwrap_or(0))
    }

    /// Checks 0 ≤ b_k ≤ a_{k+1}, b_k = a_{k+1} ⇒ b_{k+1} = 0, and β_k < f_{k−1}.
    pub fn verify_digits(&self) -> Result<()> {
        for (k, &b) in self.coeffs.iter().enumerate() {
            let a = self.quotients[k];
            if b > a {
                return Err(Error::DigitConstraint(format!("b_{k} = {b} > a_{} = {a}", k + 1)));
            }
            if b == a && self.coeffs.get(k + 1).is_some_and(|&n| n != 0) {
                return Err(Error::DigitConstraint(format!("b_{k} = a_{} but b_{} ≠ 0", k + 1, k + 1)));
            }
        }
        for (k, r) in self.remainders.iter().enumerate() {
            if !r.lt(self.f(k as i64 - 1))? || r.is_negative()? {
                return Err(Error::DigitConstraint(format!("remainder β_{k} out of [0, f_{})", k as i64 - 1)));
            }
        }
        Ok(())
    }
}

/// Greedy digits b_k = ⌊β_k / f_k⌋ with exact remainders.
pub fn expand(beta: &Elem, angle: &AngleDescriptor, depth: usize) -> Result<BetaExpansion> {
    check_unit(beta)?;
    if beta.field().angle() != angle {
        return Err(Error::MixedField("offset belongs to a different angle".into()));
    }
    let table = convergent_table(angle, depth.max(1))?;
    expand_with(beta, &table, depth)
}

fn f_list(field: &Arc<Field>, table: &ConvergentTable, depth: usize) -> Vec<Elem> {
    (-1..=depth as i64).map(|h| table.f_elem(field, h)).collect()
}

fn expand_with(beta: &Elem, table: &ConvergentTable, depth: usize) -> Result<BetaExpansion> {
    let field = beta.field().clone();
    let f = f_list(&field, table, depth.min(table.depth()));
    let quotients: Vec<u64> = (1..=table.depth()).map(|h| table.a(h)).collect();
    let mut coeffs = Vec::with_capacity(depth);
    let mut remainders = vec![beta.clone()];
    for k in 0..depth {
        let rem = remainders.last().unwrap();
        let fk = &f[k + 1];
        let mut b = 0u64;
        let mut taken = field.int(0);
        loop {
            let next = &taken + fk;
            if rem.lt(&next)? {
                break;
            }
            taken = next;
            b += 1;
        }
        let r = rem - &taken;
        coeffs.push(b);
        remainders.push(r);
    }
    let lattice = lattice_test(beta);
    Ok(BetaExpansion { beta: beta.clone(), coeffs, remainders, f, quotients, lattice })
}

/// β^m = β_m / f_m and β̄^m = (β_m − f_m)/(f_{m−1} − f_m).
pub fn renorm_offsets(exp: &BetaExpansion, m: usize) -> Result<(RenormOffset, RenormOffset)> {
    if m == 0 || m > exp.depth() {
        return Err(Error::OutOfRange(format!("offset index {m} outside 1..={}", exp.depth())));
    }
    let bm = exp.remainder(m);
    let fm = exp.f(m as i64);
    let fp = exp.f(m as i64 - 1);
    let plain = bm.checked_div(fm).ok_or_else(|| Error::OutOfRange("f_m vanishes".into()))?;
    let barred = (bm - fm)
        .checked_div(&(fp - fm))
        .ok_or_else(|| Error::OutOfRange("f_{m−1} = f_m".into()))?;
    Ok((
        RenormOffset { m, kind: OffsetKind::Plain, value: plain },
        RenormOffset { m, kind: OffsetKind::Barred, value: barred },
    ))
}

/// Decides β ∈ ℤ + αℤ by solving β = t + sα in the field.
pub fn lattice_test(beta: &Elem) -> LatticeStatus {
    let Some((u, v)) = beta.as_linear() else {
        return LatticeStatus::Unknown;
    };
    // 1 and α are independent over ℚ, so the representation u + vα is unique
    if u.denom().is_one() && v.denom().is_one() {
        LatticeStatus::InLattice { t: u.numer().clone(), s: v.numer().clone() }
    } else {
        LatticeStatus::NotInLattice
    }
}

/// Σ b_k f_k for a digit list.
pub fn from_digits(field: &Arc<Field>, digits: &[u64]) -> Result<Elem> {
    let table = convergent_table(field.angle(), digits.len().max(1))?;
    let mut acc = field.int(0);
    for (k, &b) in digits.iter().enumerate() {
        if b > 0 {
            acc = &acc + &table.f_elem(field, k as i64).mul_int(b as i64);
        }
    }
    Ok(acc)
}
