//! Ostrowski numeration and the return-time combinatorics of the rotation.

use std::cmp::Ordering;
use std::sync::RwLock;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exact_reals::{AngleDescriptor, Comparator, ConvergentTable};

/// Denominators stop growing past this bound.
const Q_LIMIT: u128 = 1 << 100;

/// Digits c_h with r = Σ c_h q_h.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct OstrowskiRep {
    coeffs: Vec<u64>,
}

impl OstrowskiRep {
    pub fn new(mut coeffs: Vec<u64>) -> OstrowskiRep {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        OstrowskiRep { coeffs }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, h: usize) -> u64 {
        self.coeffs.get(h).copied().unwrap_or(0)
    }

    /// Largest h with c_h > 0, and 0 for the empty representation.
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn lowest(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c > 0)
    }
}

/// Machine-integer convergent data a_h, p_h, q_h for Ostrowski arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Numeration {
    /// a[h] = a_h for h ≥ 1; a[0] is unused.
    a: Vec<u64>,
    p: Vec<u128>,
    q: Vec<u128>,
}

/// The decomposition r = r_{k_j} + R_1 q_1 + R_0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuredIndex {
    pub j: u128,
    pub k: u128,
    pub peak: u128,
    pub r1: u128,
    pub r0: u128,
    pub peak_rep: OstrowskiRep,
}

/// (k_j, j, k_j − j) for a peak r_{k_j}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexMaps {
    pub k: u128,
    pub j: u128,
    pub k_minus_j: u128,
}

impl Numeration {
    /// Convergent data with q reaching past `bound` whenever the descriptor allows it.
    pub fn new(angle: &AngleDescriptor, bound: u128) -> Result<Numeration> {
        let mut a = vec![0u64];
        let mut p = vec![0u128];
        let mut q = vec![1u128];
        let (mut pm, mut qm) = (1u128, 0u128);
        let mut h = 1usize;
        // three extra quotients keep a_2, a_3, a_4 available for small bounds
        while *q.last().unwrap() <= bound || h <= 4 {
            let ah = match angle.quotient(h) {
                Ok(x) => x,
                Err(Error::TruncationExceeded { .. }) | Err(Error::DepthCap(_)) => break,
                Err(e) => return Err(e),
            };
            let (pl, ql) = (*p.last().unwrap(), *q.last().unwrap());
            let next = (ah as u128)
                .checked_mul(ql)
                .and_then(|x| x.checked_add(qm))
                .filter(|&x| x < Q_LIMIT);
            let Some(qn) = next else { break };
            let pn = ah as u128 * pl + pm;
            a.push(ah);
            p.push(pn);
            q.push(qn);
            pm = pl;
            qm = ql;
            h += 1;
        }
        if a.len() < 2 {
            return Err(Error::TableTooShallow(bound));
        }
        Ok(Numeration { a, p, q })
    }

    /// As deep as machine integers allow.
    pub fn full(angle: &AngleDescriptor) -> Result<Numeration> {
        Numeration::new(angle, Q_LIMIT)
    }

    pub fn from_table(table: &ConvergentTable) -> Numeration {
        let mut a = vec![0u64];
        let mut p = vec![0u128];
        let mut q = vec![1u128];
        for h in 1..=table.depth() {
            match (table.p(h).to_u128(), table.q(h).to_u128()) {
                (Some(ph), Some(qh)) => {
                    a.push(table.a(h));
                    p.push(ph);
                    q.push(qh);
                }
                _ => break,
            }
        }
        Numeration { a, p, q }
    }

    /// a_h for 1 ≤ h within the table.
    pub fn a(&self, h: usize) -> u64 {
        self.a[h]
    }

    pub fn a_checked(&self, h: usize) -> Result<u64> {
        self.a.get(h).copied().filter(|_| h >= 1).ok_or(Error::TableTooShallow(h as u128))
    }

    pub fn p(&self, h: usize) -> u128 {
        self.p[h]
    }

    pub fn q(&self, h: usize) -> u128 {
        self.q[h]
    }

    /// Highest index h with a_h, p_h, q_h available.
    pub fn depth(&self) -> usize {
        self.a.len() - 1
    }

    /// Every r below this value can be represented.
    pub fn capacity(&self) -> u128 {
        *self.q.last().unwrap()
    }

    fn check(&self, r: u128) -> Result<()> {
        if r >= self.capacity() {
            return Err(Error::TableTooShallow(r));
        }
        Ok(())
    }

    pub fn to_ostrowski(&self, r: u128) -> Result<OstrowskiRep> {
        self.check(r)?;
        let mut h = 0;
        while h + 1 < self.q.len() && self.q[h + 1] <= r {
            h += 1;
        }
        let mut c = vec![0u64; h + 1];
        let mut rest = r;
        for i in (0..=h).rev() {
            c[i] = (rest / self.q[i]) as u64;
            rest -= c[i] as u128 * self.q[i];
        }
        Ok(OstrowskiRep::new(c))
    }

    pub fn validate(&self, rep: &OstrowskiRep) -> Result<()> {
        let c = rep.coeffs();
        if c.len() > self.depth() {
            return Err(Error::TableTooShallow(c.len() as u128));
        }
        for (h, &ch) in c.iter().enumerate() {
            let bound = self.a[h + 1];
            if ch > bound || (h == 0 && ch == bound) {
                return Err(Error::DigitConstraint(format!("c_{h} = {ch} exceeds a_{} = {bound}", h + 1)));
            }
            if ch == bound && h >= 1 && c[h - 1] != 0 {
                return Err(Error::DigitConstraint(format!("c_{h} = a_{} forces c_{} = 0", h + 1, h - 1)));
            }
        }
        Ok(())
    }

    pub fn from_ostrowski(&self, rep: &OstrowskiRep) -> Result<u128> {
        self.validate(rep)?;
        Ok(self.value(rep))
    }

    fn value(&self, rep: &OstrowskiRep) -> u128 {
        rep.coeffs().iter().enumerate().map(|(h, &c)| c as u128 * self.q[h]).sum()
    }

    pub fn order(&self, r: u128) -> Result<usize> {
        Ok(self.to_ostrowski(r)?.order())
    }

    /// c_0 = c_1 = 0 and the lowest nonzero digit sits at an even index.
    pub fn is_return_peak(&self, r: u128) -> Result<bool> {
        if r == 0 {
            return Ok(false);
        }
        let rep = self.to_ostrowski(r)?;
        Ok(matches!(rep.lowest(), Some(h) if h >= 2 && h % 2 == 0))
    }

    /// r = r_{k_j} or r = r_{k_j} + c_1 q_1 + 1 with 1 ≤ c_1 ≤ a_2.
    pub fn is_rk(&self, r: u128) -> Result<bool> {
        if r == 0 || self.is_return_peak(r)? {
            return Ok(true);
        }
        let s = self.decompose(r - 1)?;
        Ok(s.r0 == 0 && s.r1 >= 1 && s.r1 <= self.a[2] as u128)
    }

    /// Digits of the greatest r_{k_j} ≤ r (j ≥ 0).
    pub fn greatest_peak(&self, r: u128) -> Result<OstrowskiRep> {
        let rep = self.to_ostrowski(r)?;
        let mut c = rep.coeffs().to_vec();
        for x in c.iter_mut().take(2) {
            *x = 0;
        }
        let Some(h0) = c.iter().position(|&x| x > 0) else {
            return Ok(OstrowskiRep::default());
        };
        if h0 % 2 == 1 {
            c[h0] -= 1;
            let mut fill = true;
            let mut i = h0 - 1;
            while i >= 2 {
                c[i] = if fill { self.a[i + 1] } else { 0 };
                fill = !fill;
                i -= 1;
            }
        }
        Ok(OstrowskiRep::new(c))
    }

    /// (k_j, j) from the digits of r_{k_j}.
    fn k_and_j(&self, rep: &OstrowskiRep) -> (u128, u128) {
        let a1 = self.a[1] as u128;
        let mut k = 0u128;
        let mut j = 0u128;
        for (h, &c) in rep.coeffs().iter().enumerate() {
            let c = c as u128;
            k += c * self.p[h];
            j += c * (self.q[h] - a1 * self.p[h]);
        }
        (k, j)
    }

    /// Index maps of a return peak, with k_j − j from the denominators of ᾱ_1.
    pub fn index_maps(&self, rep: &OstrowskiRep) -> Result<IndexMaps> {
        self.validate(rep)?;
        if !rep.is_empty() && !matches!(rep.lowest(), Some(h) if h >= 2 && h % 2 == 0) {
            return Err(Error::DigitConstraint("digits do not describe a return peak".into()));
        }
        let (k, j) = self.k_and_j(rep);
        Ok(IndexMaps { k, j, k_minus_j: self.k_minus_j(rep)? })
    }

    fn k_minus_j(&self, rep: &OstrowskiRep) -> Result<u128> {
        let c = rep.coeffs();
        if c.len() <= 2 {
            return Ok(0);
        }
        let a2 = self.a_checked(2)?;
        // denominators of a continued fraction [b_1, b_2, ...], starting from q_0 = 1
        let dens = |b: &mut dyn Iterator<Item = u64>, n: usize| -> Vec<u128> {
            let mut out = vec![1u128];
            let mut prev = 0u128;
            for x in b.take(n) {
                let next = x as u128 * out.last().unwrap() + prev;
                prev = *out.last().unwrap();
                out.push(next);
            }
            out
        };
        let top = c.len() - 1;
        let mut sum = 0u128;
        if a2 != 1 {
            let mut b = std::iter::once(a2 - 1).chain((3..=top).map(|h| self.a[h]));
            let qb = dens(&mut b, top);
            for (h, &ch) in c.iter().enumerate().skip(2) {
                sum += ch as u128 * qb[h - 1];
            }
        } else {
            let mut b = (4..=top.max(4)).filter_map(|h| self.a.get(h).copied());
            let mut qq = vec![0u128];
            qq.extend(dens(&mut b, top));
            for (h, &ch) in c.iter().enumerate().skip(2) {
                sum += ch as u128 * qq[h - 2];
            }
        }
        Ok(sum)
    }

    /// r = r_{k_j} + R_1 q_1 + R_0 with r_{k_j} the greatest peak ≤ r.
    pub fn decompose(&self, r: u128) -> Result<StructuredIndex> {
        let rep = self.greatest_peak(r)?;
        let peak = self.value(&rep);
        let (k, j) = self.k_and_j(&rep);
        let rest = r - peak;
        let q1 = self.q[1];
        Ok(StructuredIndex { j, k, peak, r1: rest / q1, r0: rest % q1, peak_rep: rep })
    }
}

pub fn to_ostrowski(r: u128, table: &ConvergentTable) -> Result<OstrowskiRep> {
    Numeration::from_table(table).to_ostrowski(r)
}

pub fn from_ostrowski(rep: &OstrowskiRep, table: &ConvergentTable) -> Result<u128> {
    Numeration::from_table(table).from_ostrowski(rep)
}

pub fn is_return_peak(r: u128, table: &ConvergentTable) -> Result<bool> {
    Numeration::from_table(table).is_return_peak(r)
}

pub fn is_rk(r: u128, table: &ConvergentTable) -> Result<bool> {
    Numeration::from_table(table).is_rk(r)
}

pub fn index_maps(rep: &OstrowskiRep, table: &ConvergentTable) -> Result<IndexMaps> {
    Numeration::from_table(table).index_maps(rep)
}

pub fn decompose(r: u128, angle: &AngleDescriptor) -> Result<StructuredIndex> {
    angle.check_index(r)?;
    Numeration::new(angle, r)?.decompose(r)
}

#[derive(Debug, Default)]
struct Scan {
    /// r_0, r_1, ...
    r: Vec<u128>,
    /// t_0, t_1, ...; one shorter than r once started
    t: Vec<u64>,
}

/// Lazily extended t_k / r_k tables for one angle, decided by exact comparisons.
#[derive(Debug)]
pub struct ReturnStructure {
    cmp: Comparator,
    a1: u64,
    scan: RwLock<Scan>,
}

impl ReturnStructure {
    pub fn new(angle: &AngleDescriptor) -> Result<ReturnStructure> {
        let a1 = angle.quotient(1)?;
        Ok(ReturnStructure { cmp: Comparator::new(angle), a1, scan: RwLock::new(Scan { r: vec![0], t: vec![] }) })
    }

    pub fn angle(&self) -> &AngleDescriptor {
        self.cmp.angle()
    }

    fn ensure(&self, k: usize) -> Result<()> {
        if self.scan.read().unwrap().t.len() > k {
            return Ok(());
        }
        let mut s = self.scan.write().unwrap();
        while s.t.len() <= k {
            let kk = s.t.len() as i128;
            let rk = *s.r.last().unwrap();
            // {r_k α} < f_1  <=>  (r_k + a_1)α < k + 1
            let long = self.cmp.cmp(kk + 1, rk as i128 + self.a1 as i128)? == Ordering::Less;
            let t = if long { self.a1 + 1 } else { self.a1 };
            s.t.push(t);
            s.r.push(rk + t as u128);
        }
        Ok(())
    }

    /// Block length t_k ∈ {a_1, a_1 + 1}.
    pub fn t_value(&self, k: usize) -> Result<u64> {
        self.ensure(k)?;
        Ok(self.scan.read().unwrap().t[k])
    }

    /// Least r with ⌊rα⌋ = k.
    pub fn r_value(&self, k: usize) -> Result<u128> {
        if k > 0 {
            self.ensure(k - 1)?;
        }
        Ok(self.scan.read().unwrap().r[k])
    }

    /// Every r_{k_j} ≤ r_max, starting with r_{k_0} = 0.
    pub fn peaks_upto(&self, r_max: u128) -> Result<Vec<u128>> {
        let mut out = Vec::new();
        let mut k = 0usize;
        loop {
            let r = self.r_value(k)?;
            if r > r_max {
                return Ok(out);
            }
            if self.t_value(k)? == self.a1 + 1 {
                out.push(r);
            }
            k += 1;
        }
    }
}

pub fn t_value(k: usize, angle: &AngleDescriptor) -> Result<u64> {
    ReturnStructure::new(angle)?.t_value(k)
}

pub fn r_value(k: usize, angle: &AngleDescriptor) -> Result<u128> {
    ReturnStructure::new(angle)?.r_value(k)
}

/// g_j = r_{k_j} − r_{k_{j−1}}: q_2 when {(j−1)α_2} < 1 − α_2, else q_2 + q_1.
pub fn gap(j: u128, angle: &AngleDescriptor) -> Result<u128> {
    if j == 0 {
        return Err(Error::OutOfRange("gaps are indexed from 1".into()));
    }
    let num = Numeration::new(angle, 0)?;
    let (q1, q2) = (num.q(1), num.q(2));
    let alpha2 = angle.gauss_shift(2)?;
    let c = Comparator::new(&alpha2);
    let k = c.floor_mul(j - 1)?;
    // {(j−1)α_2} < 1 − α_2  <=>  jα_2 < k + 1
    let short = c.cmp(k as i128 + 1, j as i128)? == Ordering::Less;
    Ok(if short { q2 } else { q2 + q1 })
}

/// j_h with j_0 = a_3 + 1 and j_h − j_{h−1} = t_h(α_2).
pub fn special_subsequence(h: usize, angle: &AngleDescriptor) -> Result<u128> {
    ReturnStructure::new(&angle.gauss_shift(2)?)?.r_value(h + 1)
}
