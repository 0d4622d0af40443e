use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::angle::{surd_to_cf, AngleDescriptor};
use super::convergents::ConvergentTable;
use super::field::{Elem, Field};
use super::surd::QuadraticSurd;
use crate::error::{Error, Result};

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_ints(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|_| perr(format!("bad integer '{t}'"))))
        .collect()
}

fn parse_big(s: &str) -> Result<BigInt> {
    s.trim().parse::<BigInt>().map_err(|_| perr(format!("bad integer '{s}'")))
}

/// Parses `(p+q*sqrt(d))/r`; the sign between p and q may be `+`, `-` or `+-`.
pub fn parse_surd(s: &str) -> Result<QuadraticSurd> {
    let s = s.trim();
    let bad = || perr(format!("bad surd '{s}', expected (p+q*sqrt(d))/r"));
    let rest = s.strip_prefix('(').ok_or_else(bad)?;
    let close = rest.rfind(")/").ok_or_else(bad)?;
    let (inner, r) = (&rest[..close], &rest[close + 2..]);
    if r.contains(|c: char| c == '+' || c == '-' && !r.starts_with('-')) {
        return Err(bad());
    }
    let r = parse_big(r)?;
    let inner = inner.strip_suffix(')').ok_or_else(bad)?;
    let sq = inner.find("*sqrt(").ok_or_else(bad)?;
    let d = parse_big(&inner[sq + 6..])?;
    let head = &inner[..sq];
    let split = head[1..].find(['+', '-']).map(|i| i + 1).ok_or_else(bad)?;
    let p = parse_big(&head[..split])?;
    let qs = &head[split..];
    let q = if let Some(t) = qs.strip_prefix('+') { parse_big(t)? } else { parse_big(qs)? };
    if d.is_negative() {
        return Err(bad());
    }
    QuadraticSurd::new(p, q, d, r).map_err(|e| perr(e.to_string()))
}

/// Parses the angle grammar: `periodic:[pre;]period`, `surd:(p+q*sqrt(d))/r`, `list:ints` or a name.
pub fn parse_angle(s: &str) -> Result<AngleDescriptor> {
    let s = s.trim();
    match s {
        "golden" => return Ok(AngleDescriptor::golden()),
        "sqrt2m1" => return Ok(AngleDescriptor::sqrt2m1()),
        "sqrt13m3over2" => return Ok(AngleDescriptor::sqrt13m3over2()),
        "em2" => return Ok(AngleDescriptor::em2()),
        _ => {}
    }
    if let Some(body) = s.strip_prefix("periodic:") {
        let (pre, per) = match body.split_once(';') {
            Some((a, b)) => (parse_ints(a)?, parse_ints(b)?),
            None => (Vec::new(), parse_ints(body)?),
        };
        return AngleDescriptor::periodic(pre, per).map_err(|e| perr(e.to_string()));
    }
    if let Some(body) = s.strip_prefix("surd:") {
        let surd = parse_surd(body)?;
        return surd_to_cf(&surd).map_err(|e| perr(e.to_string()));
    }
    if let Some(body) = s.strip_prefix("list:") {
        return AngleDescriptor::truncated(parse_ints(body)?).map_err(|e| perr(e.to_string()));
    }
    Err(perr(format!("unknown angle descriptor '{s}'")))
}

/// An offset as written on the command line, before binding to an angle.
#[derive(Clone, Debug, PartialEq)]
pub enum BetaSpec {
    Rational(BigRational),
    Surd(QuadraticSurd),
    FSum(Vec<usize>),
}

pub fn parse_beta(s: &str) -> Result<BetaSpec> {
    let s = s.trim();
    if let Some(body) = s.strip_prefix("rat:") {
        let (n, d) = body.split_once('/').unwrap_or((body, "1"));
        let d = parse_big(d)?;
        if d.is_zero() {
            return Err(perr("zero denominator"));
        }
        return Ok(BetaSpec::Rational(BigRational::new(parse_big(n)?, d)));
    }
    if let Some(body) = s.strip_prefix("surd:") {
        return Ok(BetaSpec::Surd(parse_surd(body)?));
    }
    if let Some(body) = s.strip_prefix("fsum:") {
        let ks = body
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| perr(format!("bad index '{t}'"))))
            .collect::<Result<Vec<_>>>()?;
        return Ok(BetaSpec::FSum(ks));
    }
    Err(perr(format!("unknown offset descriptor '{s}'")))
}

impl BetaSpec {
    /// The exact value in the angle's field; must lie in [0,1).
    pub fn to_elem(&self, field: &Arc<Field>) -> Result<Elem> {
        let v = match self {
            BetaSpec::Rational(x) => field.rational(x.clone()),
            BetaSpec::Surd(s) => field.from_surd(s)?,
            BetaSpec::FSum(ks) => {
                let depth = ks.iter().copied().max().unwrap_or(0);
                let t = ConvergentTable::new(field.angle(), depth.max(1))?;
                let mut acc = field.int(0);
                for &k in ks {
                    acc = &acc + &t.f_elem(field, k as i64);
                }
                acc
            }
        };
        if v.is_negative()? || !v.lt(&field.int(1))? {
            return Err(Error::OutOfRange(format!("offset {v} not in [0,1)")));
        }
        Ok(v)
    }
}
