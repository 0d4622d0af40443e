//! Relative discrepancy d_n(α,β) by renormalization, D_n*, and the Birkhoff deviation.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::beta_expansion::{expand, from_digits};
use crate::error::{Error, Result};
use crate::exact_reals::{AngleDescriptor, Comparator, Elem, Field};
use crate::ostrowski::Numeration;
use crate::walk_renorm::{window, Stage, StageKind};

fn rat(x: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// β' = u + vγ in the coordinates of a stage angle γ.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Offset {
    u: BigRational,
    v: BigRational,
}

impl Offset {
    fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    fn elem(&self, gamma: &Elem) -> Elem {
        let field = gamma.field();
        &field.rational(self.u.clone()) + &(&field.rational(self.v.clone()) * gamma)
    }
}

/// Which pair a step works on: (α_m, β^{m−1}) or (ᾱ_m, β̄^m).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairKind {
    Plain,
    Barred,
}

/// One step of the discrepancy recursion.
#[derive(Clone, Debug)]
pub struct RenormPathStep {
    pub stage: usize,
    pub kind: PairKind,
    /// Quotients of the root consumed to reach the step angle.
    pub shift: usize,
    pub complemented: bool,
    /// The horizon n at this step.
    pub n: u128,
    pub a1: u64,
    pub b0: u64,
    pub b1_positive: bool,
    pub angle: AngleDescriptor,
    /// Step angle and offset, in the root field.
    pub gamma: Elem,
    pub beta: Elem,
    /// C = −K + (c + K a_1)γ as the integer pair (−K, c + K a_1).
    pub c_affine: (BigInt, BigInt),
    pub c_value: Elem,
    pub coef: Elem,
    pub s_value: Elem,
    pub b_value: Elem,
    pub next_horizon: Option<u128>,
}

impl RenormPathStep {
    /// Appendix bounds (lower, upper) on the step's S-value.
    pub fn s_bounds(&self) -> (Elem, Elem) {
        let field = self.beta.field();
        let b = &self.beta;
        let a1 = self.a1 as i64;
        let b0 = self.b0 as i64;
        let base = &field.int(b0) - &b.mul_int(a1);
        if !self.complemented {
            let hi = (&field.int(1) - b).mul_int(b0 + 1);
            let lo = if self.b1_positive { base } else { &base - b };
            (lo, hi)
        } else if self.b1_positive {
            (b.mul_int(-(a1 - b0)), base.add_int(1))
        } else {
            (b.mul_int(-(a1 + 1 - b0)), &base.add_int(1) - b)
        }
    }
}

#[derive(Clone, Debug)]
pub struct DiscrepancyBreakdown {
    pub n: u128,
    pub beta: Elem,
    pub value: Elem,
    pub c_part: Elem,
    pub s_part: Elem,
    pub b_part: Elem,
    pub path: Vec<RenormPathStep>,
}

/// Prop. bounds: |𝒞| < N, |ℬ| < N, |𝒮| ≤ Σ_{m=1}^{N+1} (1 + a_m/4) with N = ord(n−1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscrepancyBounds {
    pub order: usize,
    pub bound_c: BigRational,
    pub bound_b: BigRational,
    pub bound_s: BigRational,
}

pub fn order_before(n: u128, angle: &AngleDescriptor) -> Result<usize> {
    let r = n.saturating_sub(1);
    Numeration::new(angle, r)?.order(r)
}

fn quotient_sum(angle: &AngleDescriptor, upto: usize) -> Result<u64> {
    (1..=upto).map(|m| angle.quotient(m)).sum()
}

pub fn disc_bounds(n: u128, angle: &AngleDescriptor) -> Result<DiscrepancyBounds> {
    let order = order_before(n, angle)?;
    let s = quotient_sum(angle, order + 1)?;
    let bound_s = rat((order + 1) as i128) + BigRational::new(BigInt::from(s), BigInt::from(4));
    Ok(DiscrepancyBounds { order, bound_c: rat(order as i128), bound_b: rat(order as i128), bound_s })
}

impl DiscrepancyBreakdown {
    /// Checks the three part bounds; N = 0 forces the parts to vanish.
    pub fn check_bounds(&self, b: &DiscrepancyBounds) -> Result<bool> {
        let field = self.value.field();
        let lt = |x: &Elem, r: &BigRational| -> Result<bool> {
            if x.is_zero() {
                return Ok(true);
            }
            x.abs()?.lt(&field.rational(r.clone()))
        };
        let s_ok = self.s_part.abs()?.cmp_exact(&field.rational(b.bound_s.clone()))? != Ordering::Greater;
        Ok(lt(&self.c_part, &b.bound_c)? && lt(&self.b_part, &b.bound_b)? && s_ok)
    }
}

/// Discrepancy evaluator sharing the stage tree of one angle.
#[derive(Clone, Debug)]
pub struct Evaluator {
    root: Arc<Stage>,
}

impl Evaluator {
    pub fn new(angle: &AngleDescriptor) -> Result<Evaluator> {
        Ok(Evaluator { root: Stage::root(angle)? })
    }

    pub fn from_stage(root: Arc<Stage>) -> Evaluator {
        Evaluator { root }
    }

    pub fn angle(&self) -> &AngleDescriptor {
        self.root.angle()
    }

    pub fn field(&self) -> &Arc<Field> {
        self.root.field()
    }

    /// d_n(α,β) = Σ_{r<n} χ_{[0,β)}({rα}) − βn.
    pub fn d_rel(&self, n: u128, beta: &Elem) -> Result<DiscrepancyBreakdown> {
        self.run(n, beta, false)
    }

    /// The complemented variant Σ_{r<n} χ_{(1−β,1)}({rα}) − βn.
    pub fn d_rel_complemented(&self, n: u128, beta: &Elem) -> Result<DiscrepancyBreakdown> {
        self.run(n, beta, true)
    }

    fn run(&self, n: u128, beta: &Elem, comp: bool) -> Result<DiscrepancyBreakdown> {
        let field = self.field().clone();
        if beta.field().angle() != self.angle() {
            return Err(Error::MixedField("offset belongs to a different angle".into()));
        }
        if n == 0 {
            return Err(Error::OutOfRange("horizon n must be ≥ 1".into()));
        }
        if beta.sign()? != Ordering::Greater || !beta.lt(&field.int(1))? {
            return Err(Error::OutOfRange(format!("offset {beta} must lie in (0,1)")));
        }
        self.angle().check_index(n)?;
        let (u, v) = beta
            .as_linear()
            .ok_or_else(|| Error::OutOfRange(format!("offset {beta} is not of the form u + vα")))?;
        let mut off = Offset { u, v };
        let mut stage = self.root.clone();
        let mut n = n;
        let mut comp = comp;
        let mut path = Vec::new();
        let zero = field.int(0);
        let (mut c_part, mut s_part, mut b_part) = (zero.clone(), zero.clone(), zero.clone());
        while n > 0 && !off.is_zero() {
            let step = self.step(&stage, n, &off, comp)?;
            let (next, step) = step;
            c_part = &c_part + &(&step.coef * &step.c_value);
            s_part = &s_part + &step.s_value;
            b_part = &b_part + &step.b_value;
            let horizon = step.next_horizon;
            path.push(step);
            match (next, horizon) {
                (Some((kind, o)), Some(h)) => {
                    stage = match kind {
                        PairKind::Plain => stage.plain()?,
                        PairKind::Barred => {
                            comp = !comp;
                            stage.barred()?
                        }
                    };
                    off = o;
                    n = h;
                }
                _ => break,
            }
        }
        let value = &(&c_part + &s_part) + &b_part;
        Ok(DiscrepancyBreakdown { n: path.first().map_or(n, |s| s.n), beta: beta.clone(), value, c_part, s_part, b_part, path })
    }

    #[allow(clippy::type_complexity)]
    fn step(&self, stage: &Arc<Stage>, n: u128, off: &Offset, comp: bool) -> Result<(Option<(PairKind, Offset)>, RenormPathStep)> {
        let field = self.field().clone();
        let cmp: &Comparator = stage.comparator();
        let a1 = stage.a(1)?;
        let a1r = rat(a1 as i128);
        let gamma = stage.gamma()?;
        let beta = off.elem(&gamma);

        // b_0 = ⌊β'/γ⌋
        let mut b0 = 0u64;
        while cmp.sign_affine(&off.u, &(&off.v - rat(b0 as i128 + 1)))? != Ordering::Less {
            b0 += 1;
        }
        let b0r = rat(b0 as i128);
        let v1 = &off.v - &b0r;
        // β_1 ≥ f_1 = 1 − a_1γ
        let b1_positive = cmp.sign_affine(&(&off.u - rat(1)), &(&v1 + &a1r))? != Ordering::Less;

        let r = n - 1;
        let d = stage.decompose(r)?;
        let mut count = 0i64;
        let mut len = 0i64;
        for i in window(&d, r) {
            let k = rat(cmp.floor_mul(i)? as i128);
            let ir = rat(i as i128);
            let hit = if comp {
                cmp.sign_affine(&(&off.u - &k - rat(1)), &(&ir + &off.v))? == Ordering::Greater
            } else {
                cmp.sign_affine(&(-&k - &off.u), &(&ir - &off.v))? == Ordering::Less
            };
            count += i64::from(hit);
            len += 1;
        }
        let s_value = &field.int(count) - &beta.mul_int(len);

        let c = d.j + u128::from(d.r1 > 0);
        let kk = d.k + d.r1;
        let c_affine = (-BigInt::from(kk), BigInt::from(c) + BigInt::from(kk) * BigInt::from(a1));
        let kind = match stage.kind() {
            StageKind::Barred => PairKind::Barred,
            _ => PairKind::Plain,
        };
        let mut out = RenormPathStep {
            stage: stage.depth(),
            kind,
            shift: stage.shift(),
            complemented: comp,
            n,
            a1,
            b0,
            b1_positive,
            angle: stage.angle().clone(),
            gamma: gamma.clone(),
            beta: beta.clone(),
            c_affine: c_affine.clone(),
            c_value: field.int(0),
            coef: field.int(0),
            s_value,
            b_value: field.int(0),
            next_horizon: None,
        };
        if c == 0 {
            return Ok((None, out));
        }
        out.c_value = &field.big(c_affine.0.clone()) + &(&field.big(c_affine.1.clone()) * &gamma);
        let f1 = gamma.mul_int(-(a1 as i64)).add_int(1);
        let a1_beta = beta.mul_int(a1 as i64);
        let no_div = || Error::OutOfRange("vanishing step denominator".into());
        if !b1_positive {
            out.coef = (&a1_beta.add_int(-(b0 as i64))).checked_div(&f1).ok_or_else(no_div)?;
            out.next_horizon = Some(c);
            let a2 = rat(stage.a(2)? as i128);
            let u2 = &off.u * (&a1r * &a2 + rat(1)) + &v1 * &a2;
            let v2 = &off.u * &a1r + &v1;
            return Ok((Some((PairKind::Plain, Offset { u: u2, v: v2 })), out));
        }
        let e = &(&field.int(b0 as i64 + 1) - &a1_beta) - &beta;
        let dd = gamma.mul_int(a1 as i64 + 1).add_int(-1);
        out.coef = e.checked_div(&dd).ok_or_else(no_div)?;
        let fl = if stage.a(2)? == 1 { rat(stage.a(3)? as i128) } else { BigRational::zero() };
        let a = &off.u * &a1r + &v1;
        let b = &a + &off.u - rat(1);
        let next = Offset { u: &a + &b * &fl, v: b };
        let child = stage.barred()?;
        let bbar = next.elem(&child.gamma()?);
        out.b_value = if comp { bbar.add_int(-1) } else { bbar };
        out.next_horizon = Some(kk - c + 1);
        Ok((Some((PairKind::Barred, next)), out))
    }
}

pub fn d_rel(n: u128, angle: &AngleDescriptor, beta: &Elem) -> Result<DiscrepancyBreakdown> {
    Evaluator::new(angle)?.d_rel(n, beta)
}

/// C(α,n) = α·sgn R_1 − R_1 f_1 + Σ (−1)^h c_h f_h, in the angle's own field.
pub fn c_constant(n: u128, angle: &AngleDescriptor) -> Result<Elem> {
    if n == 0 {
        return Err(Error::OutOfRange("horizon n must be ≥ 1".into()));
    }
    let field = Field::new(angle);
    let num = Numeration::new(angle, n)?;
    let d = num.decompose(n - 1)?;
    let alpha = field.alpha();
    let a1 = num.a(1) as i64;
    let f1 = alpha.mul_int(-a1).add_int(1);
    let mut acc = if d.r1 > 0 { alpha.clone() } else { field.int(0) };
    acc = &acc - &f1.mul_int(d.r1 as i64);
    // (−1)^h f_h = q_h α − p_h
    for (h, &ch) in d.peak_rep.coeffs().iter().enumerate() {
        if ch > 0 {
            let term = &(&alpha * &field.big(BigInt::from(num.q(h)))) - &field.big(BigInt::from(num.p(h)));
            acc = &acc + &term.mul_int(ch as i64);
        }
    }
    Ok(acc)
}

/// A point rα − k of the orbit, kept as an integer pair.
#[derive(Clone, Copy, Debug)]
struct OrbitPoint {
    r: i128,
    k: i128,
}

fn cmp_points(cmp: &Comparator, x: &OrbitPoint, y: &OrbitPoint) -> Result<Ordering> {
    // (x.r α − x.k) − (y.r α − y.k)
    cmp.sign_affine_int(y.k - x.k, x.r - y.r)
}

/// A − Bα with its absolute value orientation.
fn abs_form(cmp: &Comparator, a: i128, b: i128) -> Result<(i128, i128)> {
    Ok(if cmp.sign_affine_int(a, -b)? == Ordering::Less { (-a, -b) } else { (a, b) })
}

fn sup_over_sorted(cmp: &Comparator, sorted: &[OrbitPoint]) -> Result<(i128, i128)> {
    let n = sorted.len() as i128;
    let mut best = (0i128, 0i128);
    let mut consider = |a: i128, b: i128| -> Result<()> {
        let (a, b) = abs_form(cmp, a, b)?;
        // a − bα > best.0 − best.1 α
        if cmp.sign_affine_int(a - best.0, best.1 - b)? == Ordering::Greater {
            best = (a, b);
        }
        Ok(())
    };
    for (i, y) in sorted.iter().enumerate() {
        let i = i as i128;
        // i + 1 − n·y_i
        consider(i + 1 + n * y.k, n * y.r)?;
        if i > 0 {
            // i − n·y_i, right end of the previous piece
            consider(i + n * y.k, n * y.r)?;
        }
    }
    Ok(best)
}

/// nD_n* = sup_β |d_n(α,β)| from the sorted orbit points.
pub fn d_star_exact(n: u128, angle: &AngleDescriptor) -> Result<Elem> {
    if n == 0 {
        return Err(Error::OutOfRange("horizon n must be ≥ 1".into()));
    }
    angle.check_index(n)?;
    let cmp = Comparator::new(angle);
    let mut pts = Vec::with_capacity(n as usize);
    for r in 0..n {
        pts.push(OrbitPoint { r: r as i128, k: cmp.floor_mul(r)? as i128 });
    }
    let mut err = None;
    pts.sort_by(|x, y| {
        cmp_points(&cmp, x, y).unwrap_or_else(|e| {
            err.get_or_insert(e);
            Ordering::Equal
        })
    });
    if let Some(e) = err {
        return Err(e);
    }
    let (a, b) = sup_over_sorted(&cmp, &pts)?;
    let field = Field::new(angle);
    Ok(field.linear(BigInt::from(a), BigInt::from(-b), BigInt::one()))
}

/// nD_n* for n = 1..=n_max by incremental insertion.
pub fn d_star_series(n_max: u128, angle: &AngleDescriptor) -> Result<Vec<Elem>> {
    angle.check_index(n_max)?;
    let cmp = Comparator::new(angle);
    let field = Field::new(angle);
    let mut sorted: Vec<OrbitPoint> = Vec::new();
    let mut out = Vec::with_capacity(n_max as usize);
    for r in 0..n_max {
        let p = OrbitPoint { r: r as i128, k: cmp.floor_mul(r)? as i128 };
        let (mut lo, mut hi) = (0, sorted.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if cmp_points(&cmp, &sorted[mid], &p)? == Ordering::Less {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        sorted.insert(lo, p);
        let (a, b) = sup_over_sorted(&cmp, &sorted)?;
        out.push(field.linear(BigInt::from(a), BigInt::from(-b), BigInt::one()));
    }
    Ok(out)
}

/// 1 + 3N + ¼ Σ_{m=1}^{N+1} a_m with N = ord(n−1).
pub fn pinner_bound(n: u128, angle: &AngleDescriptor) -> Result<BigRational> {
    let order = order_before(n, angle)?;
    let s = quotient_sum(angle, order + 1)?;
    Ok(rat(1 + 3 * order as i128) + BigRational::new(BigInt::from(s), BigInt::from(4)))
}

#[derive(Clone, Debug)]
pub struct BirkhoffDeviation {
    pub direct: Elem,
    pub via_identity: Elem,
    /// 2 Σ_{m=1}^{N} (3 + a_m/4) with N = ord(n−1).
    pub bound: BigRational,
}

/// Σ_{k<n} χ_{[γ,δ)}({kα+β}) − n(δ−γ), directly and as d_n(α,{δ−β}) − d_n(α,{γ−β}).
pub fn birkhoff_dev(n: u128, angle: &AngleDescriptor, beta: &Elem, gamma: &Elem, delta: &Elem) -> Result<BirkhoffDeviation> {
    let field = beta.field().clone();
    if gamma.is_negative()? || !gamma.lt(delta)? || delta.cmp_exact(&field.int(1))? == Ordering::Greater {
        return Err(Error::OutOfRange("interval must satisfy 0 ≤ γ < δ ≤ 1".into()));
    }
    let ev = Evaluator::new(angle)?;
    let direct = crate::oracle::oracle_birkhoff(n, angle, beta, gamma, delta)?;
    let d = |x: &Elem| -> Result<Elem> {
        let f = x.frac()?;
        if f.is_zero() {
            return Ok(field.int(0));
        }
        Ok(ev.d_rel(n, &f)?.value)
    };
    let via_identity = &d(&(delta - beta))? - &d(&(gamma - beta))?;
    let order = order_before(n, angle)?;
    let s = quotient_sum(angle, order)?;
    let bound = rat(6 * order as i128) + BigRational::new(BigInt::from(s), BigInt::from(2));
    Ok(BirkhoffDeviation { direct, via_identity, bound })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainKind {
    Even,
    Odd,
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub beta: Elem,
    pub digits: Vec<u64>,
    /// All chain digits vanish; β falls back to a single f_k.
    pub degenerate: bool,
}

/// β = Σ b_k f_k with b near half the local quotient along one parity chain.
pub fn witness_beta(angle: &AngleDescriptor, kind: ChainKind, depth: usize) -> Result<Witness> {
    if depth == 0 {
        return Err(Error::OutOfRange("depth must be ≥ 1".into()));
    }
    let field = Field::new(angle);
    let mut digits = vec![0u64; depth];
    match kind {
        ChainKind::Even => {
            for k in (0..depth).step_by(2) {
                digits[k] = angle.quotient(k + 1)? / 2;
            }
        }
        ChainKind::Odd => {
            for k in (1..depth).step_by(2) {
                let half = angle.quotient(k + 1)? / 2;
                digits[k] = if k == 1 { half.max(1) } else { half };
            }
        }
    }
    let degenerate = digits.iter().all(|&b| b == 0);
    if degenerate {
        let k = match kind {
            ChainKind::Even => (depth.saturating_sub(1) & !1).max(2),
            ChainKind::Odd => (depth.saturating_sub(1) | 1).max(1),
        };
        digits = vec![0u64; k + 1];
        digits[k] = 1;
    }
    let beta = from_digits(&field, &digits)?;
    Ok(Witness { beta, digits, degenerate })
}

/// Checks that the witness digits are the greedy expansion of β.
pub fn witness_is_admissible(w: &Witness, angle: &AngleDescriptor) -> Result<bool> {
    let e = expand(&w.beta, angle, w.digits.len())?;
    e.verify_digits()?;
    Ok(e.coeffs() == w.digits.as_slice())
}

#[derive(Clone, Debug)]
pub struct ReportRow {
    pub n: u128,
    pub n_dstar: Elem,
    pub order: usize,
    /// Σ_{m=1}^{N+1} a_m with N = ord(n−1).
    pub sum_a: u64,
    /// nD_n* / Σ a_m.
    pub ratio: f64,
    /// nD_n* / (Σ a_m + 4 + 12N): the Pinner bound divided by 4·(this denominator) is 1/4.
    pub normalized: f64,
    pub ell_e: f64,
    pub ell_o: f64,
}

/// Finite-horizon ratios of nD_n* against the partial-quotient sums.
pub fn asymptotic_report(angle: &AngleDescriptor, grid: &[u128]) -> Result<Vec<ReportRow>> {
    let mut rows = Vec::with_capacity(grid.len());
    for &n in grid {
        let nd = d_star_exact(n, angle)?;
        let order = order_before(n, angle)?;
        let qs = angle.quotients(order + 1)?;
        let sum_a: u64 = qs.iter().sum();
        let even: u64 = qs.iter().skip(1).step_by(2).sum();
        let odd: u64 = qs.iter().step_by(2).sum();
        let x = nd.to_f64();
        rows.push(ReportRow {
            n,
            n_dstar: nd,
            order,
            sum_a,
            ratio: x / sum_a as f64,
            normalized: x / (sum_a as f64 + 4.0 + 12.0 * order as f64),
            ell_e: even as f64 / sum_a as f64,
            ell_o: odd as f64 / sum_a as f64,
        });
    }
    Ok(rows)
}
