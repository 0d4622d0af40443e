use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::angle::AngleDescriptor;
use super::interval::RationalInterval;
use super::poly::Poly;
use super::surd::QuadraticSurd;
use crate::error::{Error, Result};

#[derive(Debug)]
struct Quadratic {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    surd: QuadraticSurd,
}

/// The number field ℚ(α) of a base angle; values are kept as expressions in α.
#[derive(Debug)]
pub struct Field {
    angle: AngleDescriptor,
    quad: Option<Quadratic>,
}

impl Field {
    pub fn new(angle: &AngleDescriptor) -> Arc<Field> {
        let quad = angle.surd().and_then(|s| {
            s.minimal_polynomial().map(|(a, b, c)| Quadratic { a, b, c, surd: s.clone() })
        });
        Arc::new(Field { angle: angle.clone(), quad })
    }

    pub fn angle(&self) -> &AngleDescriptor {
        &self.angle
    }

    pub fn is_quadratic(&self) -> bool {
        self.quad.is_some()
    }

    pub fn int(self: &Arc<Self>, k: i64) -> Elem {
        self.rational(BigRational::from_integer(k.into()))
    }

    pub fn big(self: &Arc<Self>, k: BigInt) -> Elem {
        self.rational(BigRational::from_integer(k))
    }

    pub fn ratio(self: &Arc<Self>, n: i64, d: i64) -> Elem {
        self.rational(BigRational::new(n.into(), d.into()))
    }

    pub fn rational(self: &Arc<Self>, x: BigRational) -> Elem {
        let (n, d) = (x.numer().clone(), x.denom().clone());
        self.linear(n, BigInt::zero(), d)
    }

    pub fn alpha(self: &Arc<Self>) -> Elem {
        self.linear(BigInt::zero(), BigInt::one(), BigInt::one())
    }

    /// (u + v·α)/w.
    pub fn linear(self: &Arc<Self>, u: BigInt, v: BigInt, w: BigInt) -> Elem {
        assert!(!w.is_zero());
        let repr = if self.quad.is_some() {
            Repr::Quad { u, v, w }.normalized_quad()
        } else {
            Repr::Func { num: Poly::linear(u, v), den: Den::constant(w) }.normalized_func()
        };
        Elem { field: self.clone(), repr }
    }

    /// Embeds a surd of the same quadratic field.
    pub fn from_surd(self: &Arc<Self>, s: &QuadraticSurd) -> Result<Elem> {
        if s.is_rational() {
            return Ok(self.rational(s.to_rational().unwrap()));
        }
        let Some(quad) = &self.quad else {
            return Err(Error::MixedField(format!("{s} in a non-quadratic angle field")));
        };
        let a = &quad.surd;
        if a.d() != s.d() {
            return Err(Error::MixedField(format!("sqrt({}) vs sqrt({})", s.d(), a.d())));
        }
        // √d = (r_a α − p_a)/q_a
        let (pa, qa, ra) = (a.p(), a.q(), a.r());
        let (ps, qs, rs) = (s.p(), s.q(), s.r());
        let u = ps * qa - qs * pa;
        let v = qs * ra;
        let w = rs * qa;
        Ok(self.linear(u, v, w))
    }

    /// f_h for h ≥ −1: f_{−1} = 1, f_h = (−1)^h (q_h α − p_h).
    pub fn f(self: &Arc<Self>, h: i64, p: &BigInt, q: &BigInt) -> Elem {
        if h < 0 {
            return self.int(1);
        }
        let e = self.linear(-p.clone(), q.clone(), BigInt::one());
        if h % 2 == 0 {
            e
        } else {
            -e
        }
    }

    fn sign_poly(&self, p: &Poly) -> Result<Ordering> {
        match p.coeffs().len() {
            0 => Ok(Ordering::Equal),
            1 => Ok(p.coeffs()[0].sign().cmp_zero()),
            2 => {
                let (c0, c1) = (&p.coeffs()[0], &p.coeffs()[1]);
                let o = self.cmp_alpha(&-c0.clone(), c1)?;
                Ok(if c1.is_negative() { o.reverse() } else { o })
            }
            _ => self.sign_poly_interval(p),
        }
    }

    /// Sign of c1·α − n via α vs n/c1.
    fn cmp_alpha(&self, n: &BigInt, d: &BigInt) -> Result<Ordering> {
        if d.is_negative() {
            self.angle.cmp_rational(&-n.clone(), &-d.clone())
        } else {
            self.angle.cmp_rational(n, d)
        }
    }

    fn sign_poly_interval(&self, p: &Poly) -> Result<Ordering> {
        let max = self.angle.known_depth().unwrap_or(4096);
        let mut depth = 24usize.min(max.max(1));
        loop {
            let enc = self.angle.enclosure(depth).map_err(|e| Error::Undecidable(e.to_string()))?;
            if let Some(s) = p.eval_interval(&enc).strict_sign() {
                return Ok(s);
            }
            if depth >= max {
                return Err(Error::Undecidable(format!(
                    "sign of {p} not certified with {depth} partial quotients"
                )));
            }
            depth = (depth * 2).min(max);
        }
    }

    fn same(&self, other: &Field) -> bool {
        std::ptr::eq(self, other) || self.angle == other.angle
    }
}

trait SignExt {
    fn cmp_zero(&self) -> Ordering;
}

impl SignExt for num_bigint::Sign {
    fn cmp_zero(&self) -> Ordering {
        match self {
            num_bigint::Sign::Minus => Ordering::Less,
            num_bigint::Sign::NoSign => Ordering::Equal,
            num_bigint::Sign::Plus => Ordering::Greater,
        }
    }
}

/// Denominator c·∏ f_i^{e_i} with c > 0 and primitive factors of positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Den {
    c: BigInt,
    factors: Vec<(Poly, u32)>,
}

impl Den {
    fn constant(c: BigInt) -> Den {
        Den { c, factors: Vec::new() }
    }

    fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }

    fn expand(&self) -> Poly {
        let mut out = Poly::constant(self.c.clone());
        for (f, e) in &self.factors {
            for _ in 0..*e {
                out = out.mul(f);
            }
        }
        out
    }

    fn mult(&self, f: &Poly) -> u32 {
        self.factors.iter().find(|(g, _)| g == f).map_or(0, |(_, e)| *e)
    }

    fn set(&mut self, f: &Poly, e: u32) {
        if let Some(slot) = self.factors.iter_mut().find(|(g, _)| g == f) {
            slot.1 = e;
        } else if e > 0 {
            self.factors.push((f.clone(), e));
        }
        self.factors.retain(|(_, e)| *e > 0);
        self.factors.sort();
    }

    fn lcm(&self, other: &Den) -> Den {
        let mut out = Den { c: self.c.lcm(&other.c), factors: self.factors.clone() };
        for (f, e) in &other.factors {
            if out.mult(f) < *e {
                out.set(f, *e);
            }
        }
        out
    }

    /// self / other where other divides self.
    fn quotient(&self, other: &Den) -> Den {
        let mut out = Den { c: &self.c / &other.c, factors: self.factors.clone() };
        for (f, e) in &other.factors {
            let m = out.mult(f);
            out.set(f, m - e);
        }
        out
    }

    fn product(&self, other: &Den) -> Den {
        let mut out = Den { c: &self.c * &other.c, factors: self.factors.clone() };
        for (f, e) in &other.factors {
            let m = out.mult(f);
            out.set(f, m + e);
        }
        out
    }

    fn gcd(&self, other: &Den) -> Den {
        let mut out = Den { c: self.c.gcd(&other.c), factors: Vec::new() };
        for (f, e) in &self.factors {
            let m = other.mult(f).min(*e);
            out.set(f, m);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    /// (u + v·α)/w in a quadratic field, w > 0, gcd 1.
    Quad { u: BigInt, v: BigInt, w: BigInt },
    /// num(α)/den(α) with α treated as transcendental.
    Func { num: Poly, den: Den },
}

impl Repr {
    fn normalized_quad(self) -> Repr {
        let Repr::Quad { mut u, mut v, mut w } = self else { unreachable!() };
        if w.is_negative() {
            u = -u;
            v = -v;
            w = -w;
        }
        if u.is_zero() && v.is_zero() {
            return Repr::Quad { u, v, w: BigInt::one() };
        }
        let g = u.gcd(&v).gcd(&w);
        if !g.is_one() {
            u /= &g;
            v /= &g;
            w /= &g;
        }
        Repr::Quad { u, v, w }
    }

    fn normalized_func(self) -> Repr {
        let Repr::Func { mut num, mut den } = self else { unreachable!() };
        if num.is_zero() {
            return Repr::Func { num, den: Den::constant(BigInt::one()) };
        }
        // cancel den factors dividing the numerator
        if !den.is_constant() && num.degree() >= 1 {
            let factors = den.factors.clone();
            for (f, e) in factors {
                let mut e = e;
                while e > 0 && num.degree() >= f.degree() {
                    match num.div_exact(&f) {
                        Some(q) => {
                            num = q;
                            e -= 1;
                        }
                        None => break,
                    }
                }
                den.set(&f, e);
            }
        }
        let g = num.content().gcd(&den.c);
        if !g.is_one() {
            num = num.div_scalar_exact(&g);
            den.c /= &g;
        }
        Repr::Func { num, den }
    }
}

/// An exact element of ℚ(α).
#[derive(Clone)]
pub struct Elem {
    field: Arc<Field>,
    repr: Repr,
}

impl Elem {
    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    fn with(&self, repr: Repr) -> Elem {
        Elem { field: self.field.clone(), repr }
    }

    fn check(&self, other: &Elem) {
        assert!(self.field.same(&other.field), "elements from different angle fields");
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Quad { u, v, .. } => u.is_zero() && v.is_zero(),
            Repr::Func { num, .. } => num.is_zero(),
        }
    }

    pub fn sign(&self) -> Result<Ordering> {
        match &self.repr {
            Repr::Quad { u, v, .. } => self.field.sign_poly(&Poly::linear(u.clone(), v.clone())),
            Repr::Func { num, den } => {
                let mut s = self.field.sign_poly(num)?;
                for (f, e) in &den.factors {
                    if e % 2 == 1 && self.field.sign_poly(f)? == Ordering::Less {
                        s = s.reverse();
                    }
                }
                Ok(s)
            }
        }
    }

    pub fn cmp_exact(&self, other: &Elem) -> Result<Ordering> {
        (self - other).sign()
    }

    pub fn lt(&self, other: &Elem) -> Result<bool> {
        Ok(self.cmp_exact(other)? == Ordering::Less)
    }

    pub fn is_negative(&self) -> Result<bool> {
        Ok(self.sign()? == Ordering::Less)
    }

    pub fn abs(&self) -> Result<Elem> {
        Ok(if self.is_negative()? { -self } else { self.clone() })
    }

    pub fn exact_eq(&self, other: &Elem) -> bool {
        (self - other).is_zero()
    }

    /// Linear form (u, v) with value u + v·α, when the element has one.
    pub fn as_linear(&self) -> Option<(BigRational, BigRational)> {
        match &self.repr {
            Repr::Quad { u, v, w } => Some((BigRational::new(u.clone(), w.clone()), BigRational::new(v.clone(), w.clone()))),
            Repr::Func { num, den } if den.is_constant() && num.degree() <= 1 => Some((
                BigRational::new(num.coeff(0), den.c.clone()),
                BigRational::new(num.coeff(1), den.c.clone()),
            )),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.as_linear() {
            Some((u, v)) if v.is_zero() => Some(u),
            _ => None,
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|x| x.is_integer()).map(|x| x.to_integer())
    }

    pub fn to_surd(&self) -> Option<QuadraticSurd> {
        if let Some(x) = self.as_rational() {
            return Some(QuadraticSurd::from_rational(&x));
        }
        let quad = self.field.quad.as_ref()?;
        let Repr::Quad { u, v, w } = &self.repr else { return None };
        let s = &quad.surd;
        // (u + v (p + q√d)/r)/w
        QuadraticSurd::new(u * s.r() + v * s.p(), v * s.q(), s.d().clone(), w * s.r()).ok()
    }

    /// Enclosure of the value from `depth` quotients of α.
    pub fn enclose(&self, depth: usize) -> Result<RationalInterval> {
        let enc = self.field.angle.enclosure(depth)?;
        let (num, den) = self.num_den();
        let n = num.eval_interval(&enc);
        let d = den.eval_interval(&enc);
        let Some(ds) = d.strict_sign() else {
            return Err(Error::Undecidable("denominator enclosure contains zero".into()));
        };
        let (dlo, dhi) = (d.lo().clone(), d.hi().clone());
        let inv = if ds == Ordering::Greater {
            RationalInterval::new(dhi.recip(), dlo.recip())
        } else {
            RationalInterval::new(dlo.recip(), dhi.recip())
        };
        Ok(n.mul(&inv))
    }

    fn num_den(&self) -> (Poly, Poly) {
        match &self.repr {
            Repr::Quad { u, v, w } => (Poly::linear(u.clone(), v.clone()), Poly::constant(w.clone())),
            Repr::Func { num, den } => (num.clone(), den.expand()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        if let Some(s) = self.to_surd() {
            return s.to_f64();
        }
        let depth = self.field.angle.known_depth().unwrap_or(40).min(40);
        match self.enclose(depth) {
            Ok(i) => {
                let m = i.midpoint();
                m.numer().to_f64().unwrap_or(f64::NAN) / m.denom().to_f64().unwrap_or(f64::NAN)
            }
            Err(_) => f64::NAN,
        }
    }

    pub fn floor(&self) -> Result<BigInt> {
        if let Some(x) = self.as_rational() {
            return Ok(x.floor().to_integer());
        }
        if let Some(s) = self.to_surd() {
            return Ok(s.floor());
        }
        let approx = self.to_f64();
        let mut k = if approx.is_finite() { BigInt::from(approx.floor() as i64) } else { BigInt::zero() };
        while (self - &self.field.big(k.clone())).is_negative()? {
            k -= 1;
        }
        while !(self - &self.field.big(&k + 1)).is_negative()? {
            k += 1;
        }
        Ok(k)
    }

    pub fn frac(&self) -> Result<Elem> {
        let k = self.floor()?;
        Ok(self - &self.field.big(k))
    }

    pub fn recip(&self) -> Option<Elem> {
        if self.is_zero() {
            return None;
        }
        Some(match &self.repr {
            Repr::Quad { u, v, w } => {
                let q = self.field.quad.as_ref().unwrap();
                let norm = &q.a * u * u - &q.b * u * v + &q.c * v * v;
                let nu = w * (&q.a * u - &q.b * v);
                let nv = -(w * &q.a * v);
                self.with(Repr::Quad { u: nu, v: nv, w: norm }.normalized_quad())
            }
            Repr::Func { num, den } => {
                let (g, prim) = num.primitive();
                let mut new_den = Den::constant(g.abs());
                if prim.degree() >= 1 {
                    new_den.set(&prim, 1);
                }
                let mut new_num = den.expand();
                if g.is_negative() {
                    new_num = new_num.neg();
                }
                self.with(Repr::Func { num: new_num, den: new_den }.normalized_func())
            }
        })
    }

    pub fn checked_div(&self, other: &Elem) -> Option<Elem> {
        self.check(other);
        if other.is_zero() {
            return None;
        }
        match (&self.repr, &other.repr) {
            (Repr::Func { num: n1, den: d1 }, Repr::Func { num: n2, den: d2 }) => {
                let common = d1.gcd(d2);
                let keep1 = d1.quotient(&common);
                let mult2 = d2.quotient(&common).expand();
                let (g, prim) = n2.primitive();
                let mut den = keep1.product(&Den::constant(g.abs()));
                if prim.degree() >= 1 {
                    let m = den.mult(&prim);
                    den.set(&prim, m + 1);
                }
                let mut num = n1.mul(&mult2);
                if g.is_negative() {
                    num = num.neg();
                }
                Some(self.with(Repr::Func { num, den }.normalized_func()))
            }
            _ => Some(self * &other.recip()?),
        }
    }

    pub fn mul_int(&self, k: i64) -> Elem {
        self * &self.field.int(k)
    }

    pub fn add_int(&self, k: i64) -> Elem {
        self + &self.field.int(k)
    }

    /// Display in `p/q`, `(p+q*sqrt(d))/r`, or rational-function-of-`a` form.
    pub fn render(&self) -> String {
        if let Some(s) = self.to_surd() {
            return s.to_string();
        }
        match &self.repr {
            Repr::Func { num, den } => {
                let d = den.expand();
                if d == Poly::one() {
                    format!("({num})")
                } else {
                    format!("({num})/({d})")
                }
            }
            Repr::Quad { .. } => unreachable!(),
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Elem({})", self.render())
    }
}

impl PartialEq for Elem {
    fn eq(&self, other: &Elem) -> bool {
        self.exact_eq(other)
    }
}

fn add_repr(field: &Field, a: &Repr, b: &Repr, negate_b: bool) -> Repr {
    let _ = field;
    match (a, b) {
        (Repr::Quad { u: u1, v: v1, w: w1 }, Repr::Quad { u: u2, v: v2, w: w2 }) => {
            let (u2, v2) = if negate_b { (-u2, -v2) } else { (u2.clone(), v2.clone()) };
            if w1 == w2 {
                return Repr::Quad { u: u1 + u2, v: v1 + v2, w: w1.clone() }.normalized_quad();
            }
            Repr::Quad { u: u1 * w2 + u2 * w1, v: v1 * w2 + v2 * w1, w: w1 * w2 }.normalized_quad()
        }
        (Repr::Func { num: n1, den: d1 }, Repr::Func { num: n2, den: d2 }) => {
            let n2 = if negate_b { n2.neg() } else { n2.clone() };
            if d1 == d2 {
                return Repr::Func { num: n1.add(&n2), den: d1.clone() }.normalized_func();
            }
            let l = d1.lcm(d2);
            let a = n1.mul(&l.quotient(d1).expand());
            let b = n2.mul(&l.quotient(d2).expand());
            Repr::Func { num: a.add(&b), den: l }.normalized_func()
        }
        _ => unreachable!("mixed representations"),
    }
}

fn mul_repr(field: &Field, a: &Repr, b: &Repr) -> Repr {
    match (a, b) {
        (Repr::Quad { u: u1, v: v1, w: w1 }, Repr::Quad { u: u2, v: v2, w: w2 }) => {
            let q = field.quad.as_ref().unwrap();
            let c0 = u1 * u2;
            let c1 = u1 * v2 + u2 * v1;
            let c2 = v1 * v2;
            if c2.is_zero() {
                return Repr::Quad { u: c0, v: c1, w: w1 * w2 }.normalized_quad();
            }
            // α² = −(b α + c)/a
            let u = &q.a * &c0 - &c2 * &q.c;
            let v = &q.a * &c1 - &c2 * &q.b;
            Repr::Quad { u, v, w: w1 * w2 * &q.a }.normalized_quad()
        }
        (Repr::Func { num: n1, den: d1 }, Repr::Func { num: n2, den: d2 }) => {
            Repr::Func { num: n1.mul(n2), den: d1.product(d2) }.normalized_func()
        }
        _ => unreachable!("mixed representations"),
    }
}

impl<'a> Add<&'a Elem> for &'a Elem {
    type Output = Elem;
    fn add(self, rhs: &Elem) -> Elem {
        self.check(rhs);
        self.with(add_repr(&self.field, &self.repr, &rhs.repr, false))
    }
}

impl<'a> Sub<&'a Elem> for &'a Elem {
    type Output = Elem;
    fn sub(self, rhs: &Elem) -> Elem {
        self.check(rhs);
        self.with(add_repr(&self.field, &self.repr, &rhs.repr, true))
    }
}

impl<'a> Mul<&'a Elem> for &'a Elem {
    type Output = Elem;
    fn mul(self, rhs: &Elem) -> Elem {
        self.check(rhs);
        self.with(mul_repr(&self.field, &self.repr, &rhs.repr))
    }
}

impl<'a> Div<&'a Elem> for &'a Elem {
    type Output = Elem;
    fn div(self, rhs: &Elem) -> Elem {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        let repr = match &self.repr {
            Repr::Quad { u, v, w } => Repr::Quad { u: -u, v: -v, w: w.clone() },
            Repr::Func { num, den } => Repr::Func { num: num.neg(), den: den.clone() },
        };
        self.with(repr)
    }
}

impl Neg for Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        -&self
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Elem> for Elem {
            type Output = Elem;
            fn $m(self, rhs: Elem) -> Elem { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Elem> for Elem {
            type Output = Elem;
            fn $m(self, rhs: &Elem) -> Elem { (&self).$m(rhs) }
        }
        impl<'a> $tr<Elem> for &'a Elem {
            type Output = Elem;
            fn $m(self, rhs: Elem) -> Elem { self.$m(&rhs) }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul, Div div);
