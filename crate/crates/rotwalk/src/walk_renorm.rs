//! Walk sums S_n(α) by renormalization, their extrema, and S_n(α,β).

use std::cmp::Ordering;
use std::sync::{Arc, OnceLock, Weak};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exact_reals::{AngleDescriptor, Comparator, Elem, Field};
use crate::ostrowski::{Numeration, StructuredIndex};

/// How a stage was reached from its parent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StageKind {
    Root,
    /// α_2 of the parent.
    Plain,
    /// ᾱ_1 of the parent, reduced mod 1.
    Barred,
}

/// One renormalization stage: the angle, its comparison kernel and numeration.
#[derive(Debug)]
pub struct Stage {
    angle: AngleDescriptor,
    cmp: Comparator,
    num: Numeration,
    kind: StageKind,
    depth: usize,
    /// Quotients of the root consumed to reach this stage.
    shift: usize,
    field: Arc<Field>,
    parent: Weak<Stage>,
    gamma: OnceLock<Result<Elem>>,
    plain: OnceLock<Result<Arc<Stage>>>,
    barred: OnceLock<Result<Arc<Stage>>>,
}

fn horizon_error(e: Error, stage: &Stage) -> Error {
    match e {
        Error::TruncationExceeded { .. } | Error::TableTooShallow(_) => Error::ValidityHorizon {
            index: stage.shift as u128,
            horizon: stage.angle.known_depth().unwrap_or(0) as u128,
        },
        e => e,
    }
}

impl Stage {
    pub fn root(angle: &AngleDescriptor) -> Result<Arc<Stage>> {
        let field = Field::new(angle);
        let stage = Stage::build(angle.clone(), StageKind::Root, 0, 0, field.clone(), Weak::new())?;
        let _ = stage.gamma.set(Ok(field.alpha()));
        Ok(Arc::new(stage))
    }

    fn build(
        angle: AngleDescriptor,
        kind: StageKind,
        depth: usize,
        shift: usize,
        field: Arc<Field>,
        parent: Weak<Stage>,
    ) -> Result<Stage> {
        let num = Numeration::full(&angle)?;
        Ok(Stage {
            cmp: Comparator::new(&angle),
            angle,
            num,
            kind,
            depth,
            shift,
            field,
            parent,
            gamma: OnceLock::new(),
            plain: OnceLock::new(),
            barred: OnceLock::new(),
        })
    }

    pub fn angle(&self) -> &AngleDescriptor {
        &self.angle
    }

    pub fn comparator(&self) -> &Comparator {
        &self.cmp
    }

    pub fn numeration(&self) -> &Numeration {
        &self.num
    }

    pub fn kind(&self) -> StageKind {
        self.kind
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn shift(&self) -> usize {
        self.shift
    }

    /// The root field the stage angle is expressed in.
    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn a(&self, h: usize) -> Result<u64> {
        self.num.a_checked(h).map_err(|e| horizon_error(e, self))
    }

    pub fn q(&self, h: usize) -> Result<u128> {
        if h > self.num.depth() {
            return Err(horizon_error(Error::TableTooShallow(h as u128), self));
        }
        Ok(self.num.q(h))
    }

    /// The stage angle as an element of the root field.
    pub fn gamma(&self) -> Result<Elem> {
        self.gamma
            .get_or_init(|| {
                let parent = self.parent.upgrade().ok_or(Error::OutOfRange("detached stage".into()))?;
                let g = parent.gamma()?;
                let a1 = parent.a(1)? as i64;
                let a2 = parent.a(2)? as i64;
                let zero = || Error::OutOfRange("vanishing stage angle".into());
                match self.kind {
                    StageKind::Plain => {
                        let y = g.recip().ok_or_else(zero)?.add_int(-a1);
                        Ok(y.recip().ok_or_else(zero)?.add_int(-a2))
                    }
                    StageKind::Barred => {
                        let f1 = g.mul_int(-a1).add_int(1);
                        let x = f1.checked_div(&(&g - &f1)).ok_or_else(zero)?;
                        let fl = if a2 == 1 { parent.a(3)? as i64 } else { 0 };
                        Ok(x.add_int(-fl))
                    }
                    StageKind::Root => unreachable!(),
                }
            })
            .clone()
    }

    /// Stage for α_2.
    pub fn plain(self: &Arc<Self>) -> Result<Arc<Stage>> {
        self.plain
            .get_or_init(|| {
                let angle = self.angle.gauss_shift(2).map_err(|e| horizon_error(e, self))?;
                let s = Stage::build(angle, StageKind::Plain, self.depth + 1, self.shift + 2, self.field.clone(), Arc::downgrade(self))
                    .map_err(|e| horizon_error(e, self))?;
                Ok(Arc::new(s))
            })
            .clone()
    }

    /// Stage for {ᾱ_1}: [a_2 − 1, a_3, ...], or α_3 when a_2 = 1.
    pub fn barred(self: &Arc<Self>) -> Result<Arc<Stage>> {
        self.barred
            .get_or_init(|| {
                let angle = self.angle.bar_shift(1).map_err(|e| horizon_error(e, self))?;
                let step = if self.a(2)? == 1 { 3 } else { 1 };
                let s = Stage::build(angle, StageKind::Barred, self.depth + 1, self.shift + step, self.field.clone(), Arc::downgrade(self))
                    .map_err(|e| horizon_error(e, self))?;
                Ok(Arc::new(s))
            })
            .clone()
    }

    /// s(iγ) for the stage angle γ.
    pub fn s(&self, i: u128) -> Result<i64> {
        if i == 0 {
            return Ok(1);
        }
        let k = self.cmp.floor_mul(i)?;
        let (n, m) = (2 * k as i128 + 1, 2 * i as i128);
        Ok(if self.cmp.cmp(n, m)? == Ordering::Less { 1 } else { -1 })
    }

    pub fn decompose(&self, r: u128) -> Result<StructuredIndex> {
        self.num.decompose(r).map_err(|e| horizon_error(e, self))
    }
}

/// The window of indices summed by S̃(r).
pub fn window(d: &StructuredIndex, r: u128) -> std::ops::RangeInclusive<u128> {
    if d.r1 > 0 {
        r - d.r0 + 1..=r
    } else {
        r - d.r0..=r
    }
}

/// s(x) = +1 iff {x} < 1/2.
pub fn s_of(x: &Elem) -> Result<i64> {
    let f = x.frac()?;
    let half = x.field().ratio(1, 2);
    match f.cmp_exact(&half)? {
        Ordering::Less => Ok(1),
        Ordering::Greater => Ok(-1),
        Ordering::Equal => Err(Error::EqualityDetected("{x} = 1/2".into())),
    }
}

fn window_sum(stage: &Stage, d: &StructuredIndex, r: u128) -> Result<i64> {
    window(d, r).map(|i| stage.s(i)).sum()
}

pub fn tilde_s(r: u128, angle: &AngleDescriptor) -> Result<i64> {
    angle.check_index(r)?;
    let stage = Stage::root(angle)?;
    let d = stage.decompose(r)?;
    window_sum(&stage, &d, r)
}

/// One frame of the walk recursion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenormFrame {
    pub stage: usize,
    pub kind: StageKind,
    pub shift: usize,
    pub a1: u64,
    /// +1 when the frame's sum enters with positive sign.
    pub orientation: i8,
    /// Constant collected at this frame: S̃ plus the reflection term on odd stages.
    pub offset: i64,
    pub index: u128,
}

/// Renormalized walk evaluator with a cached stage tree.
#[derive(Debug, Clone)]
pub struct Walker {
    root: Arc<Stage>,
    /// Indices below max(q_2, base) are summed directly; 0 disables the direct base.
    base: u128,
}

pub const DEFAULT_WALK_BASE: u128 = 32;

impl Walker {
    pub fn new(angle: &AngleDescriptor) -> Result<Walker> {
        Ok(Walker { root: Stage::root(angle)?, base: DEFAULT_WALK_BASE })
    }

    pub fn with_base(angle: &AngleDescriptor, base: u128) -> Result<Walker> {
        Ok(Walker { root: Stage::root(angle)?, base })
    }

    pub fn root(&self) -> &Arc<Stage> {
        &self.root
    }

    fn direct(stage: &Stage, r: u128) -> Result<i64> {
        (0..=r).map(|i| stage.s(i)).sum()
    }

    fn below_base(&self, stage: &Stage, r: u128) -> Result<bool> {
        Ok(self.base > 0 && r < self.base.max(stage.q(2)?))
    }

    /// S_n(α).
    pub fn walk(&self, n: u128) -> Result<i64> {
        self.root.angle.check_index(n)?;
        Ok(self.trace(n)?.1)
    }

    /// S_n(α) together with the frames visited.
    pub fn trace(&self, n: u128) -> Result<(Vec<RenormFrame>, i64)> {
        let mut frames = Vec::new();
        let mut stage = self.root.clone();
        let mut r = n;
        let mut sign = 1i64;
        let mut total = 0i64;
        loop {
            let a1 = stage.a(1)?;
            if r == 0 || self.below_base(&stage, r)? {
                let direct = Self::direct(&stage, r)?;
                total += sign * direct;
                frames.push(RenormFrame {
                    stage: stage.depth,
                    kind: stage.kind,
                    shift: stage.shift,
                    a1,
                    orientation: sign as i8,
                    offset: direct,
                    index: r,
                });
                return Ok((frames, total));
            }
            let d = stage.decompose(r)?;
            let w = window_sum(&stage, &d, r)?;
            let c = d.j + u128::from(d.r1 > 0);
            let offset = if a1 % 2 == 0 { w } else { w + 1 };
            frames.push(RenormFrame {
                stage: stage.depth,
                kind: stage.kind,
                shift: stage.shift,
                a1,
                orientation: sign as i8,
                offset,
                index: r,
            });
            total += sign * offset;
            if a1 % 2 == 0 {
                if c == 0 {
                    return Ok((frames, total));
                }
                r = c - 1;
                stage = stage.plain()?;
            } else {
                // S_I(−ᾱ) − 1 = 1 − S_I(ᾱ)
                r = d.k + d.r1 - c;
                sign = -sign;
                stage = stage.barred()?;
            }
        }
    }

    /// Exact running extrema with the renormalized data.
    pub fn extrema(&self, r: u128) -> Result<Extrema> {
        self.root.angle.check_index(r)?;
        let s = summary(&self.root, r)?;
        let a1 = self.root.a(1)?;
        let renorm = if a1 % 2 == 0 {
            let d = self.root.decompose(r)?;
            let j = (d.j + u128::from(d.r1 > 0)).saturating_sub(1);
            let sub = summary(&self.root.plain()?, j)?;
            Some(RenormExtrema { j, max: sub.runmax, min: sub.runmin, r1: d.r1, r0: d.r0 })
        } else {
            None
        };
        Ok(Extrema { max: s.runmax, min: s.runmin, a1, renorm })
    }
}

pub fn walk_zero(n: u128, angle: &AngleDescriptor) -> Result<i64> {
    Walker::new(angle)?.walk(n)
}

/// S_n(−α) = 2 − S_n(α).
pub fn walk_negative(n: u128, angle: &AngleDescriptor) -> Result<i64> {
    Ok(2 - walk_zero(n, angle)?)
}

/// max/min_{m ≤ j} S_m(α_2) for even a_1, with j = max(j(r), 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenormExtrema {
    pub j: u128,
    pub max: i64,
    pub min: i64,
    pub r1: u128,
    pub r0: u128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extrema {
    pub max: i64,
    pub min: i64,
    pub a1: u64,
    pub renorm: Option<RenormExtrema>,
}

pub fn extrema(r: u128, angle: &AngleDescriptor) -> Result<Extrema> {
    Walker::new(angle)?.extrema(r)
}

#[derive(Clone, Copy, Debug)]
struct Summary {
    s: i64,
    runmax: i64,
    runmin: i64,
    /// Extrema of the prefix ending at the last complete block, when there is one.
    bnd: Option<(i64, i64)>,
}

fn prefix_ext(vals: &[i64]) -> Option<(i64, i64)> {
    let mut t = 0;
    let mut ext: Option<(i64, i64)> = None;
    for v in vals {
        t += v;
        ext = Some(match ext {
            None => (t, t),
            Some((mx, mn)) => (mx.max(t), mn.min(t)),
        });
    }
    ext
}

fn summary(stage: &Arc<Stage>, r: u128) -> Result<Summary> {
    if r == 0 {
        return Ok(Summary { s: 1, runmax: 1, runmin: 1, bnd: None });
    }
    let d = stage.decompose(r)?;
    let a1 = stage.a(1)?;
    let w: Vec<i64> = window(&d, r).map(|i| stage.s(i)).collect::<Result<_>>()?;
    let c = d.j + u128::from(d.r1 > 0);
    let mut maxs = Vec::new();
    let mut mins = Vec::new();
    let (lead, bnd);
    if a1 % 2 == 0 {
        if c > 0 {
            let nx = summary(&stage.plain()?, c - 1)?;
            lead = nx.s;
            maxs.push(a1 as i64 / 2 + nx.runmax);
            mins.push(nx.runmin);
            bnd = Some((nx.runmax, nx.runmin));
        } else {
            lead = 0;
            bnd = None;
        }
    } else {
        let h = (a1 as i64 - 1) / 2;
        let i = d.k + d.r1 - c;
        let barred = stage.barred()?;
        let nx = summary(&barred, i)?;
        lead = 1 - nx.s;
        if c > 0 {
            bnd = Some((1 - nx.runmin, 1 - nx.runmax));
            mins.push(1 - nx.runmax);
            if i >= 1 {
                maxs.push(h + 1 - nx.runmin);
            }
            let kc = if c - 1 == d.j { d.k } else { stage.decompose(d.peak - 1)?.k };
            let m = kc - (c - 1);
            let low = summary(&barred, m)?;
            let mn = if stage.a(2)? == 1 { low.runmin } else { low.bnd.map_or(1, |b| b.1.min(1)) };
            maxs.push(h + 2 - mn);
        } else {
            bnd = None;
        }
    }
    if let Some((wmx, wmn)) = prefix_ext(&w) {
        maxs.push(lead + wmx);
        mins.push(lead + wmn);
    }
    Ok(Summary {
        s: lead + w.iter().sum::<i64>(),
        runmax: *maxs.iter().max().expect("nonempty"),
        runmin: *mins.iter().min().expect("nonempty"),
        bnd,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxPariBounds {
    pub order: usize,
    pub lower: BigRational,
    pub upper: BigRational,
    pub min: i64,
}

/// Bounds on max_{n≤r} S_n when every a_{2i+1} is even.
pub fn maxpari_bounds(r: u128, angle: &AngleDescriptor) -> Result<MaxPariBounds> {
    angle.check_index(r)?;
    let num = Numeration::new(angle, r)?;
    let order = num.order(r)?;
    let mut h = 1;
    while h <= order.max(1) {
        let a = angle.quotient(h)?;
        if a % 2 == 1 {
            return Err(Error::Hypothesis(format!("a_{h} = {a} is odd")));
        }
        h += 2;
    }
    let mut sum = 0u64;
    if order >= 2 {
        for i in 0..=(order - 2) / 2 {
            sum += angle.quotient(2 * i + 1)?;
        }
    }
    let lower = BigRational::new(BigInt::from(sum), BigInt::from(2));
    let upper = &lower + BigRational::new(BigInt::from(order), BigInt::from(2));
    Ok(MaxPariBounds { order, lower, upper, min: 1 })
}

/// |S_n| + 6 Σ_{m=1}^{N} (3 + a_m/4) with N = ord(n).
pub fn linf_bound(n: u128, angle: &AngleDescriptor) -> Result<BigRational> {
    let s = walk_zero(n, angle)?;
    let order = Numeration::new(angle, n)?.order(n)?;
    let mut acc = BigRational::from_integer(BigInt::from(s.abs()));
    for m in 1..=order {
        let a = angle.quotient(m)?;
        acc += BigRational::new(BigInt::from(6 * (12 + a)), BigInt::from(4));
    }
    Ok(acc)
}

/// S_n(α,β) through the discrepancy identity.
pub fn walk_general(n: u128, angle: &AngleDescriptor, beta: &Elem) -> Result<i64> {
    walk_general_with(&Walker::new(angle)?, n, beta)
}

pub fn walk_general_with(walker: &Walker, n: u128, beta: &Elem) -> Result<i64> {
    let field = beta.field().clone();
    if field.angle() != walker.root.angle() {
        return Err(Error::MixedField("offset belongs to a different angle".into()));
    }
    if beta.is_negative()? || !beta.lt(&field.int(1))? {
        return Err(Error::OutOfRange(format!("offset {beta} must lie in [0,1)")));
    }
    let half = field.ratio(1, 2);
    if !beta.lt(&half)? {
        return Ok(-walk_general_with(walker, n, &(beta - &half))?);
    }
    let s = walker.walk(n)?;
    let r = general_remainder(walker, n, beta)?;
    let r = r.as_integer().ok_or_else(|| Error::OutOfRange("non-integral remainder".into()))?;
    let r: i64 = r.try_into().map_err(|_| Error::OutOfRange("remainder overflow".into()))?;
    Ok(s + r)
}

/// R_n = 2[d_{n+1}(½−β) − d_{n+1}(1−β) − d_{n+1}(½)] for β ∈ [0, ½).
pub fn general_remainder(walker: &Walker, n: u128, beta: &Elem) -> Result<Elem> {
    let field = beta.field().clone();
    let half = field.ratio(1, 2);
    let ev = crate::discrepancy::Evaluator::from_stage(walker.root.clone());
    let d = |x: &Elem| -> Result<Elem> {
        if x.is_zero() || x.exact_eq(&field.int(1)) {
            return Ok(field.int(0));
        }
        Ok(ev.d_rel(n + 1, x)?.value)
    };
    let one_minus = &field.int(1) - beta;
    let t = &(&d(&(&half - beta))? - &d(&one_minus)?) - &d(&half)?;
    Ok(t.mul_int(2))
}
