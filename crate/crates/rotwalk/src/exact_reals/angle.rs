use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::interval::RationalInterval;
use super::surd::QuadraticSurd;
use crate::error::{Error, Result};

pub const DEFAULT_RULE_CAP: usize = 10_000;

type Generator = Arc<dyn Fn(usize) -> u64 + Send + Sync>;

/// Named generator of partial quotients a_h (h ≥ 1).
#[derive(Clone)]
pub struct Rule {
    name: Arc<str>,
    generator: Generator,
    cap: usize,
}

impl Rule {
    pub fn new(name: &str, cap: usize, generator: impl Fn(usize) -> u64 + Send + Sync + 'static) -> Rule {
        Rule { name: name.into(), generator: Arc::new(generator), cap }
    }

    pub fn e_minus_two() -> Rule {
        Rule::new("em2", DEFAULT_RULE_CAP, |h| if h % 3 == 2 { 2 * (h as u64 / 3 + 1) } else { 1 })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn cap(&self) -> usize {
        self.cap
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Rule").field("name", &self.name).field("cap", &self.cap).finish()
    }
}

impl PartialEq for Rule {
    fn eq(&self, other: &Rule) -> bool {
        self.name == other.name && self.cap == other.cap
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AngleKind {
    Periodic { preperiod: Vec<u64>, period: Vec<u64> },
    /// Quotients `head` followed by the rule's a_{offset+1}, a_{offset+2}, ...
    Rule { rule: Rule, head: Vec<u64>, offset: usize },
    Truncated { quotients: Vec<u64> },
}

/// An irrational angle in (0,1) given by its partial quotients.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleDescriptor {
    kind: AngleKind,
    surd: Option<QuadraticSurd>,
}

fn check_quotients(qs: &[u64]) -> Result<()> {
    if qs.iter().any(|&a| a == 0) {
        return Err(Error::Parse("partial quotients must be at least 1".into()));
    }
    Ok(())
}

fn minimal_period(period: &[u64]) -> Vec<u64> {
    let n = period.len();
    for len in 1..=n {
        if n % len == 0 && (len..n).all(|i| period[i] == period[i - len]) {
            return period[..len].to_vec();
        }
    }
    period.to_vec()
}

impl AngleDescriptor {
    pub fn periodic(preperiod: Vec<u64>, period: Vec<u64>) -> Result<AngleDescriptor> {
        if period.is_empty() {
            return Err(Error::Parse("period must be nonempty".into()));
        }
        check_quotients(&preperiod)?;
        check_quotients(&period)?;
        let (preperiod, period) = normalize_periodic(preperiod, period);
        let surd = periodic_surd(&preperiod, &period);
        Ok(AngleDescriptor { kind: AngleKind::Periodic { preperiod, period }, surd: Some(surd) })
    }

    pub fn rule(rule: Rule) -> AngleDescriptor {
        AngleDescriptor { kind: AngleKind::Rule { rule, head: Vec::new(), offset: 0 }, surd: None }
    }

    pub fn truncated(quotients: Vec<u64>) -> Result<AngleDescriptor> {
        check_quotients(&quotients)?;
        Ok(AngleDescriptor { kind: AngleKind::Truncated { quotients }, surd: None })
    }

    pub fn golden() -> AngleDescriptor {
        Self::periodic(vec![], vec![1]).unwrap()
    }

    pub fn sqrt2m1() -> AngleDescriptor {
        Self::periodic(vec![], vec![2]).unwrap()
    }

    pub fn sqrt13m3over2() -> AngleDescriptor {
        Self::periodic(vec![], vec![3]).unwrap()
    }

    pub fn em2() -> AngleDescriptor {
        Self::rule(Rule::e_minus_two())
    }

    pub fn kind(&self) -> &AngleKind {
        &self.kind
    }

    pub fn surd(&self) -> Option<&QuadraticSurd> {
        self.surd.as_ref()
    }

    /// First `m` quotients as a truncated descriptor.
    pub fn truncate(&self, m: usize) -> Result<AngleDescriptor> {
        AngleDescriptor::truncated(self.quotients(m)?)
    }

    /// Partial quotient a_h, h ≥ 1.
    pub fn quotient(&self, h: usize) -> Result<u64> {
        assert!(h >= 1, "partial quotients are indexed from 1");
        match &self.kind {
            AngleKind::Periodic { preperiod, period } => {
                if h <= preperiod.len() {
                    Ok(preperiod[h - 1])
                } else {
                    Ok(period[(h - 1 - preperiod.len()) % period.len()])
                }
            }
            AngleKind::Rule { rule, head, offset } => {
                if h <= head.len() {
                    Ok(head[h - 1])
                } else {
                    let idx = offset + h - head.len();
                    if idx > rule.cap {
                        return Err(Error::DepthCap(rule.cap));
                    }
                    Ok((rule.generator)(idx))
                }
            }
            AngleKind::Truncated { quotients } => quotients
                .get(h - 1)
                .copied()
                .ok_or(Error::TruncationExceeded { index: h, available: quotients.len() }),
        }
    }

    pub fn quotients(&self, m: usize) -> Result<Vec<u64>> {
        (1..=m).map(|h| self.quotient(h)).collect()
    }

    pub fn is_truncated(&self) -> bool {
        matches!(self.kind, AngleKind::Truncated { .. })
    }

    /// Number of known quotients, if finite.
    pub fn known_depth(&self) -> Option<usize> {
        match &self.kind {
            AngleKind::Periodic { .. } => None,
            AngleKind::Rule { rule, head, offset } => Some((rule.cap + head.len()).saturating_sub(*offset)),
            AngleKind::Truncated { quotients } => Some(quotients.len()),
        }
    }

    /// For truncated descriptors, q_N: orbit indices below it are certified.
    pub fn validity_horizon(&self) -> Option<u128> {
        match &self.kind {
            AngleKind::Truncated { quotients } => {
                let (mut q0, mut q1) = (0u128, 1u128);
                for &a in quotients {
                    let next = (a as u128).checked_mul(q1).and_then(|x| x.checked_add(q0));
                    match next {
                        Some(n) => {
                            q0 = q1;
                            q1 = n;
                        }
                        None => return Some(u128::MAX),
                    }
                }
                Some(q1)
            }
            _ => None,
        }
    }

    pub fn check_index(&self, max_index: u128) -> Result<()> {
        if let Some(h) = self.validity_horizon() {
            if max_index >= h {
                return Err(Error::ValidityHorizon { index: max_index, horizon: h });
            }
        }
        Ok(())
    }

    /// α_m = [a_{m+1}, a_{m+2}, ...].
    pub fn gauss_shift(&self, m: usize) -> Result<AngleDescriptor> {
        if m == 0 {
            return Ok(self.clone());
        }
        let kind = match &self.kind {
            AngleKind::Periodic { preperiod, period } => {
                let mut pre = preperiod.clone();
                let mut per = period.clone();
                if m <= pre.len() {
                    pre.drain(..m);
                } else {
                    let extra = (m - pre.len()) % per.len();
                    pre.clear();
                    per.rotate_left(extra);
                }
                let (pre, per) = normalize_periodic(pre, per);
                AngleKind::Periodic { preperiod: pre, period: per }
            }
            AngleKind::Rule { rule, head, offset } => {
                if m <= head.len() {
                    AngleKind::Rule { rule: rule.clone(), head: head[m..].to_vec(), offset: *offset }
                } else {
                    let off = offset + m - head.len();
                    if off > rule.cap {
                        return Err(Error::DepthCap(rule.cap));
                    }
                    AngleKind::Rule { rule: rule.clone(), head: Vec::new(), offset: off }
                }
            }
            AngleKind::Truncated { quotients } => {
                if m > quotients.len() {
                    return Err(Error::TruncationExceeded { index: m, available: quotients.len() });
                }
                AngleKind::Truncated { quotients: quotients[m..].to_vec() }
            }
        };
        let surd = match &self.surd {
            Some(s) => {
                let mut x = s.clone();
                for h in 1..=m {
                    x = x.recip()?.add_int(-(self.quotient(h)? as i64));
                }
                Some(x)
            }
            None => None,
        };
        Ok(AngleDescriptor { kind, surd })
    }

    /// ᾱ_m = [a_{m+1} − 1, a_{m+2}, ...], which is α_{m+2} when a_{m+1} = 1.
    pub fn bar_shift(&self, m: usize) -> Result<AngleDescriptor> {
        let a = self.quotient(m + 1)?;
        if a == 1 {
            return self.gauss_shift(m + 2);
        }
        let shifted = self.gauss_shift(m)?;
        let kind = match shifted.kind {
            AngleKind::Periodic { mut preperiod, mut period } => {
                if preperiod.is_empty() {
                    preperiod.push(period[0] - 1);
                    period.rotate_left(1);
                } else {
                    preperiod[0] -= 1;
                }
                let (pre, per) = normalize_periodic(preperiod, period);
                AngleKind::Periodic { preperiod: pre, period: per }
            }
            AngleKind::Rule { rule, mut head, offset } => {
                if head.is_empty() {
                    head.push(a - 1);
                    AngleKind::Rule { rule, head, offset: offset + 1 }
                } else {
                    head[0] -= 1;
                    AngleKind::Rule { rule, head, offset }
                }
            }
            AngleKind::Truncated { mut quotients } => {
                quotients[0] -= 1;
                AngleKind::Truncated { quotients }
            }
        };
        let surd = match shifted.surd {
            Some(x) => {
                let one = QuadraticSurd::from_integer(BigInt::one());
                Some(x.div(&one.sub(&x)?)?)
            }
            None => None,
        };
        Ok(AngleDescriptor { kind, surd })
    }

    /// Exact comparison of α with num/den (den > 0).
    pub fn cmp_rational(&self, num: &BigInt, den: &BigInt) -> Result<Ordering> {
        debug_assert!(den.is_positive());
        match &self.surd {
            Some(s) => Ok(s.cmp_rational(num, den)),
            None => self.cmp_rational_cf(num, den),
        }
    }

    /// Comparison with num/den through the partial quotients alone.
    pub fn cmp_rational_cf(&self, num: &BigInt, den: &BigInt) -> Result<Ordering> {
        if num.is_negative() || num.is_zero() {
            return Ok(Ordering::Greater);
        }
        if num >= den {
            return Ok(Ordering::Less);
        }
        if let (Some(n), Some(d)) = (num.to_u128(), den.to_u128()) {
            return self.cf_walk(n, d);
        }
        let (mut top, mut bot) = (num.clone(), den.clone());
        let mut i = 1usize;
        loop {
            let (b, rem) = bot.div_rem(&top);
            let b = b.to_u64().unwrap_or(u64::MAX);
            let last = rem.is_zero();
            if let Some(o) = self.cf_step(i, b, last)? {
                return Ok(o);
            }
            bot = top;
            top = rem;
            i += 1;
        }
    }

    fn cf_walk(&self, num: u128, den: u128) -> Result<Ordering> {
        let (mut top, mut bot) = (num, den);
        let mut i = 1usize;
        loop {
            let b = bot / top;
            let rem = bot % top;
            let b = u64::try_from(b).unwrap_or(u64::MAX);
            if let Some(o) = self.cf_step(i, b, rem == 0)? {
                return Ok(o);
            }
            bot = top;
            top = rem;
            i += 1;
        }
    }

    fn cf_step(&self, i: usize, b: u64, last: bool) -> Result<Option<Ordering>> {
        let a = self.quotient(i).map_err(|e| match e {
            Error::TruncationExceeded { .. } | Error::DepthCap(_) => {
                Error::Undecidable(format!("comparison needs a_{i}: {e}"))
            }
            other => other,
        })?;
        let alpha_term_bigger = if last {
            a >= b
        } else if a == b {
            return Ok(None);
        } else {
            a > b
        };
        // a bigger term at an odd position makes the value smaller
        let less = alpha_term_bigger == (i % 2 == 1);
        Ok(Some(if less { Ordering::Less } else { Ordering::Greater }))
    }

    /// Floating approximation, for estimates only.
    pub fn approx_f64(&self) -> f64 {
        if let Some(s) = &self.surd {
            return s.to_f64();
        }
        let depth = self.known_depth().unwrap_or(40).min(40);
        let (mut p0, mut q0, mut p1, mut q1) = (1f64, 0f64, 0f64, 1f64);
        for h in 1..=depth {
            let Ok(a) = self.quotient(h) else { break };
            let a = a as f64;
            let (p2, q2) = (a * p1 + p0, a * q1 + q0);
            p0 = p1;
            q0 = q1;
            p1 = p2;
            q1 = q2;
            if q1 > 1e17 {
                break;
            }
        }
        p1 / q1
    }

    /// ⌊rα⌋.
    pub fn floor_mul(&self, r: u128) -> Result<u128> {
        if r == 0 {
            return Ok(0);
        }
        let rb = BigInt::from(r);
        let mut k: u128 = if r < (1u128 << 50) {
            (r as f64 * self.approx_f64()).floor().max(0.0) as u128
        } else {
            self.floor_estimate_big(r)?
        };
        while k > 0 && self.cmp_rational(&BigInt::from(k), &rb)? == Ordering::Less {
            k -= 1;
        }
        while self.cmp_rational(&BigInt::from(k + 1), &rb)? != Ordering::Less {
            k += 1;
        }
        Ok(k)
    }

    fn floor_estimate_big(&self, r: u128) -> Result<u128> {
        let (mut p0, mut q0, mut p1, mut q1) = (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one());
        let rb = BigInt::from(r);
        let mut h = 1;
        while q1 <= rb {
            let a = match self.quotient(h) {
                Ok(a) => BigInt::from(a),
                Err(_) => break,
            };
            let (p2, q2) = (&a * &p1 + &p0, &a * &q1 + &q0);
            p0 = std::mem::replace(&mut p1, p2);
            q0 = std::mem::replace(&mut q1, q2);
            h += 1;
        }
        Ok((rb * p1 / q1).to_u128().unwrap_or(0))
    }

    /// Rational interval containing α, from the first `depth` quotients.
    pub fn enclosure(&self, depth: usize) -> Result<RationalInterval> {
        let depth = depth.max(1);
        let (mut p0, mut q0, mut p1, mut q1) = (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one());
        for h in 1..=depth {
            let a = BigInt::from(self.quotient(h)?);
            let (p2, q2) = (&a * &p1 + &p0, &a * &q1 + &q0);
            p0 = std::mem::replace(&mut p1, p2);
            q0 = std::mem::replace(&mut q1, q2);
        }
        let a = BigRational::new(p1.clone(), q1.clone());
        let b = BigRational::new(&p1 + &p0, &q1 + &q0);
        Ok(RationalInterval::new(a, b))
    }

    /// Canonical textual form accepted by the parser.
    pub fn describe(&self) -> String {
        let join = |v: &[u64]| v.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",");
        match &self.kind {
            AngleKind::Periodic { preperiod, period } if preperiod.is_empty() => {
                format!("periodic:{}", join(period))
            }
            AngleKind::Periodic { preperiod, period } => {
                format!("periodic:{};{}", join(preperiod), join(period))
            }
            AngleKind::Rule { rule, head, offset } => {
                if head.is_empty() && *offset == 0 {
                    rule.name().to_string()
                } else {
                    format!("{}[head={},offset={}]", rule.name(), join(head), offset)
                }
            }
            AngleKind::Truncated { quotients } => format!("list:{}", join(quotients)),
        }
    }
}

impl fmt::Display for AngleDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

fn normalize_periodic(mut pre: Vec<u64>, per: Vec<u64>) -> (Vec<u64>, Vec<u64>) {
    let mut per = minimal_period(&per);
    while let Some(&last) = pre.last() {
        if last == *per.last().unwrap() {
            pre.pop();
            per.rotate_right(1);
        } else {
            break;
        }
    }
    (pre, per)
}

/// Convergent numerators/denominators (p_k, q_k, p_{k-1}, q_{k-1}) of a finite quotient list.
fn convergent_pair(qs: &[u64]) -> (BigInt, BigInt, BigInt, BigInt) {
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one());
    for &a in qs {
        let a = BigInt::from(a);
        let (p2, q2) = (&a * &p1 + &p0, &a * &q1 + &q0);
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
    }
    (p1, q1, p0, q0)
}

/// [pre; period] as an exact surd.
fn periodic_surd(pre: &[u64], period: &[u64]) -> QuadraticSurd {
    // tail y = (p_k + y p_{k-1})/(q_k + y q_{k-1})
    let (pk, qk, pk1, qk1) = convergent_pair(period);
    let b = &qk - &pk1;
    let disc = &b * &b + BigInt::from(4) * &qk1 * &pk;
    let y = QuadraticSurd::new(-b, BigInt::one(), disc, BigInt::from(2) * &qk1).unwrap();
    if pre.is_empty() {
        return y;
    }
    let (pm, qm, pm1, qm1) = convergent_pair(pre);
    let num = y.mul(&QuadraticSurd::from_integer(pm1)).unwrap().add(&QuadraticSurd::from_integer(pm)).unwrap();
    let den = y.mul(&QuadraticSurd::from_integer(qm1)).unwrap().add(&QuadraticSurd::from_integer(qm)).unwrap();
    num.div(&den).unwrap()
}

fn floor_surd_state(p: &BigInt, q: &BigInt, root: &BigInt) -> BigInt {
    // floor((p + √D)/q) for irrational √D with floor root
    if q.is_positive() {
        (p + root).div_floor(q)
    } else {
        let nq: BigInt = -q;
        let f: BigInt = (p + root).div_floor(&nq);
        -(f + BigInt::one())
    }
}

/// Eventually periodic expansion of an irrational quadratic surd in (0,1).
pub fn surd_to_cf(surd: &QuadraticSurd) -> Result<AngleDescriptor> {
    if surd.is_rational() {
        return Err(Error::RationalInput);
    }
    if surd.signum() != Ordering::Greater || surd.cmp_rational(&BigInt::one(), &BigInt::one()) != Ordering::Less {
        return Err(Error::OutOfRange(format!("{surd} is not in (0,1)")));
    }
    let s = if surd.q().is_negative() { BigInt::from(-1) } else { BigInt::one() };
    let mut dd = surd.q() * surd.q() * surd.d();
    let mut pp = &s * surd.p();
    let mut qq = &s * surd.r();
    if !((&dd - &pp * &pp) % &qq).is_zero() {
        let aq = qq.abs();
        pp *= &aq;
        dd *= &qq * &qq;
        qq *= &aq;
    }
    let root = dd.sqrt();
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut terms: Vec<u64> = Vec::new();
    let mut idx = 0usize;
    loop {
        if idx > 0 {
            if let Some(&start) = seen.get(&(pp.clone(), qq.clone())) {
                let pre = terms[..start - 1].to_vec();
                let per = terms[start - 1..].to_vec();
                let mut out = AngleDescriptor::periodic(pre, per)?;
                out.surd = Some(surd.clone());
                return Ok(out);
            }
            seen.insert((pp.clone(), qq.clone()), idx);
        }
        let a = floor_surd_state(&pp, &qq, &root);
        if idx > 0 {
            terms.push(a.to_u64().ok_or_else(|| Error::OutOfRange("partial quotient overflow".into()))?);
        }
        let p_next = &a * &qq - &pp;
        let q_next = (&dd - &p_next * &p_next) / &qq;
        pp = p_next;
        qq = q_next;
        idx += 1;
        if idx > 100_000 {
            return Err(Error::DepthCap(100_000));
        }
    }
}
