//! Outward-rounded interval arithmetic over dyadic rationals.
//!
//! A [`Dyadic`] is `mant * 2^exp` and is exact under addition and
//! multiplication. An [`Interval`] is a pair of dyadics that is guaranteed to
//! enclose the real value it stands for; every rounding moves the lower end
//! down and the upper end up. `exp` and `ln` are evaluated by Taylor series with
//! an explicit tail bound folded into the enclosure, so the only source of
//! inexactness is controlled and certified.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

#[derive(Clone, Debug)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        Dyadic { mant, exp }
    }

    pub fn zero() -> Self {
        Dyadic::new(BigInt::zero(), 0)
    }

    pub fn one() -> Self {
        Dyadic::from_int(BigInt::one())
    }

    pub fn from_int(n: BigInt) -> Self {
        Dyadic::new(n, 0)
    }

    pub fn from_i64(n: i64) -> Self {
        Dyadic::from_int(BigInt::from(n))
    }

    /// Exact value of a finite double.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if biased == 0 { (frac, -1074) } else { (frac | (1u64 << 52), biased - 1075) };
        Some(Dyadic::new(BigInt::from(m) * sign, e))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = self.exp.min(other.exp);
        (&self.mant << (self.exp - e) as usize, &other.mant << (other.exp - e) as usize, e)
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b, e) = self.aligned(other);
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic::new(-&self.mant, self.exp)
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic::new(self.mant.abs(), self.exp)
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    /// `self * 2^s`, exact.
    pub fn mul_pow2(&self, s: i64) -> Dyadic {
        Dyadic::new(self.mant.clone(), self.exp + s)
    }

    /// Rounds to at most `prec` significant bits in direction `dir`.
    pub fn round(&self, prec: u64, dir: Round) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec {
            return self.clone();
        }
        let s = bits - prec;
        Dyadic::new(shift_right(&self.mant, s, dir), self.exp + s as i64)
    }

    /// `self / other` rounded in direction `dir` to about `prec` bits.
    pub fn div(&self, other: &Dyadic, prec: u64, dir: Round) -> Dyadic {
        assert!(!other.is_zero(), "dyadic division by zero");
        let s = (prec as i64 + other.mant.bits() as i64 - self.mant.bits() as i64 + 2).max(0);
        let num = &self.mant << s as usize;
        let q = match dir {
            Round::Down => num.div_floor(&other.mant),
            Round::Up => -(-num).div_floor(&other.mant),
        };
        Dyadic::new(q, self.exp - other.exp - s).round(prec, dir)
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as usize
        } else {
            shift_right(&self.mant, (-self.exp) as u64, Round::Down)
        }
    }

    pub fn ceil(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as usize
        } else {
            shift_right(&self.mant, (-self.exp) as u64, Round::Up)
        }
    }

    /// Nearest integer (ties toward +inf).
    pub fn round_to_int(&self) -> BigInt {
        self.add(&Dyadic::new(BigInt::one(), -1)).floor()
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    /// Nearest-ish double; only for reporting.
    pub fn to_f64(&self) -> f64 {
        let bits = self.mant.bits();
        let (m, e) = if bits > 64 {
            (shift_right(&self.mant, bits - 64, Round::Down), self.exp + (bits - 64) as i64)
        } else {
            (self.mant.clone(), self.exp)
        };
        ldexp(m.to_f64().unwrap_or(0.0), e)
    }

    /// Floor of `log2 |self|` for nonzero values.
    pub fn ilog2(&self) -> i64 {
        self.mant.bits() as i64 - 1 + self.exp
    }
}

fn shift_right(m: &BigInt, s: u64, dir: Round) -> BigInt {
    let d = BigInt::one() << s as usize;
    match dir {
        Round::Down => m.div_floor(&d),
        Round::Up => -(-m).div_floor(&d),
    }
}

fn ldexp(x: f64, e: i64) -> f64 {
    let e = e.clamp(-3000, 3000) as i32;
    let mut y = x;
    let mut rest = e;
    while rest > 1000 {
        y *= 2f64.powi(1000);
        rest -= 1000;
    }
    while rest < -1000 {
        y *= 2f64.powi(-1000);
        rest += 1000;
    }
    y * 2f64.powi(rest)
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.mant.sign(), other.mant.sign()) {
            (a, b) if a != b => sign_rank(a).cmp(&sign_rank(b)),
            (Sign::NoSign, _) => Ordering::Equal,
            _ => {
                let (a, b, _) = self.aligned(other);
                a.cmp(&b)
            }
        }
    }
}

fn sign_rank(s: Sign) -> i8 {
    match s {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

/// Closed interval `[lo, hi]` known to contain some real quantity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Interval { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn from_i64(n: i64) -> Self {
        Interval::point(Dyadic::from_i64(n))
    }

    pub fn from_int(n: BigInt) -> Self {
        Interval::point(Dyadic::from_int(n))
    }

    /// The exact value of a finite double.
    pub fn from_f64(x: f64) -> Result<Self> {
        Dyadic::from_f64(x)
            .map(Interval::point)
            .ok_or_else(|| Error::InvalidArgument(format!("non-finite real {x}")))
    }

    fn rounded(lo: Dyadic, hi: Dyadic, prec: u64) -> Self {
        Interval { lo: lo.round(prec, Round::Down), hi: hi.round(prec, Round::Up) }
    }

    pub fn add(&self, o: &Interval, prec: u64) -> Interval {
        Interval::rounded(self.lo.add(&o.lo), self.hi.add(&o.hi), prec)
    }

    pub fn sub(&self, o: &Interval, prec: u64) -> Interval {
        Interval::rounded(self.lo.sub(&o.hi), self.hi.sub(&o.lo), prec)
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn mul(&self, o: &Interval, prec: u64) -> Interval {
        let products = [self.lo.mul(&o.lo), self.lo.mul(&o.hi), self.hi.mul(&o.lo), self.hi.mul(&o.hi)];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        Interval::rounded(lo, hi, prec)
    }

    pub fn mul_pow2(&self, s: i64) -> Interval {
        Interval { lo: self.lo.mul_pow2(s), hi: self.hi.mul_pow2(s) }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn div(&self, o: &Interval, prec: u64) -> Result<Interval> {
        if o.contains_zero() {
            return Err(Error::InvalidArgument("interval division by an interval containing 0".into()));
        }
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&o.lo, &o.hi] {
                let down = a.div(b, prec, Round::Down);
                let up = a.div(b, prec, Round::Up);
                lo = Some(match lo {
                    Some(l) if l <= down => l,
                    _ => down,
                });
                hi = Some(match hi {
                    Some(h) if h >= up => h,
                    _ => up,
                });
            }
        }
        Ok(Interval { lo: lo.unwrap(), hi: hi.unwrap() })
    }

    pub fn div_u64(&self, d: u64, prec: u64) -> Interval {
        let d = Dyadic::from_int(BigInt::from(d));
        Interval { lo: self.lo.div(&d, prec, Round::Down), hi: self.hi.div(&d, prec, Round::Up) }
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> Dyadic {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    /// Widens by `[-t, t]`.
    pub fn widen(&self, t: &Dyadic) -> Interval {
        Interval { lo: self.lo.sub(t), hi: self.hi.add(t) }
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn exp(&self, prec: u64) -> Result<Interval> {
        Ok(Interval { lo: exp_point(&self.lo, prec)?.lo, hi: exp_point(&self.hi, prec)?.hi })
    }

    pub fn ln(&self, prec: u64) -> Result<Interval> {
        if !self.lo.is_positive() {
            return Err(Error::InvalidArgument("logarithm of a non-positive interval".into()));
        }
        Ok(Interval { lo: ln_point(&self.lo, prec).lo, hi: ln_point(&self.hi, prec).hi })
    }

    /// `self^y = exp(y ln self)` for a positive base.
    pub fn pow(&self, y: &Interval, prec: u64) -> Result<Interval> {
        self.ln(prec)?.mul(y, prec).exp(prec)
    }

    pub fn max(&self, o: &Interval) -> Interval {
        Interval { lo: self.lo.clone().max(o.lo.clone()), hi: self.hi.clone().max(o.hi.clone()) }
    }

    /// `floor(x)` if it is the same for every point in the interval.
    pub fn floor_certified(&self) -> Option<BigInt> {
        let a = self.lo.floor();
        (a == self.hi.floor()).then_some(a)
    }

    /// `ceil(x)` if it is the same for every point in the interval.
    pub fn ceil_certified(&self) -> Option<BigInt> {
        let a = self.lo.ceil();
        (a == self.hi.ceil()).then_some(a)
    }

    pub fn mid_f64(&self) -> f64 {
        self.lo.add(&self.hi).mul_pow2(-1).to_f64()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Largest `|x|` accepted by `exp`; larger arguments would need an
/// astronomically large result anyway.
const EXP_ARG_LIMIT: i64 = 1 << 40;

/// Enclosure of `e^x` for a point `x`, relative accuracy about `2^-prec`.
pub fn exp_point(x: &Dyadic, prec: u64) -> Result<Interval> {
    let n = x.round_to_int();
    let n = n
        .to_i64()
        .filter(|n| n.abs() <= EXP_ARG_LIMIT)
        .ok_or_else(|| Error::InvalidArgument(format!("exp argument too large: {x}")))?;
    let r = x.sub(&Dyadic::from_i64(n));
    let guard = 2 * (64 - n.unsigned_abs().leading_zeros() as u64) + 24;
    let w = prec + guard;
    let mut result = exp_small(&r, w);
    if n != 0 {
        let e = exp_small(&Dyadic::one(), w);
        let en = pow_positive(&e, n.unsigned_abs(), w);
        result = if n > 0 { result.mul(&en, w) } else { result.div(&en, w)? };
    }
    Ok(Interval::rounded(result.lo, result.hi, prec))
}

/// Taylor series for `|r| <= 1`.
fn exp_small(r: &Dyadic, w: u64) -> Interval {
    let rr = Interval::point(r.clone());
    let mut sum = Interval::from_i64(1);
    let mut term = Interval::from_i64(1);
    let eps = Dyadic::new(BigInt::one(), -(w as i64) - 2);
    let mut i = 1u64;
    loop {
        term = term.mul(&rr, w).div_u64(i, w);
        sum = sum.add(&term, w);
        // sum_{j>i} |r|^j/j! <= 2 |r|^(i+1)/(i+1)! <= 2 |term_i| for |r| <= 1
        let tail = term.mag().mul_pow2(1);
        if tail <= eps || term.mag().is_zero() {
            return sum.widen(&tail.round(32, Round::Up));
        }
        i += 1;
    }
}

fn pow_positive(base: &Interval, mut e: u64, w: u64) -> Interval {
    let mut acc = Interval::from_i64(1);
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&b, w);
        }
        e >>= 1;
        if e > 0 {
            b = b.mul(&b, w);
        }
    }
    acc
}

/// Enclosure of `ln x` for a positive point `x`.
pub fn ln_point(x: &Dyadic, prec: u64) -> Interval {
    assert!(x.is_positive(), "ln of non-positive value");
    let bits = x.mantissa().bits();
    // x = y * 2^j with y in [1, 2)
    let j = x.exponent() + bits as i64 - 1;
    let y = Dyadic::new(x.mantissa().clone(), -(bits as i64 - 1));
    let guard = 64 - j.unsigned_abs().leading_zeros() as u64 + 24;
    let w = prec + guard;
    let one = Interval::from_i64(1);
    let yi = Interval::point(y);
    let t = yi.sub(&one, w).div(&yi.add(&one, w), w).expect("y + 1 > 0");
    let mut result = atanh_series(&t, w).mul_pow2(1);
    if j != 0 {
        let ln2 = ln2(w);
        result = result.add(&ln2.mul(&Interval::from_i64(j), w), w);
    }
    Interval::rounded(result.lo, result.hi, prec)
}

/// `ln 2 = 2 atanh(1/3)`.
pub fn ln2(prec: u64) -> Interval {
    let third = Interval::from_i64(1).div_u64(3, prec + 8);
    let r = atanh_series(&third, prec + 8).mul_pow2(1);
    Interval::rounded(r.lo, r.hi, prec)
}

/// `atanh t = sum t^(2i+1)/(2i+1)` for `0 <= t <= 1/3`.
fn atanh_series(t: &Interval, w: u64) -> Interval {
    let t2 = t.mul(t, w);
    let mut pow = t.clone();
    let mut sum = t.clone();
    let eps = Dyadic::new(BigInt::one(), -(w as i64) - 2);
    let mut i = 1u64;
    loop {
        // Remainder after the last included power t^(2i-1):
        // sum_{m>=i} t^(2m+1)/(2m+1) <= t^(2i+1) / (1 - t^2) <= 2 t^(2i-1) t^2.
        let tail = pow.mag().mul(&t2.mag()).mul_pow2(1);
        if tail <= eps || tail.is_zero() {
            return sum.widen(&tail.round(32, Round::Up));
        }
        pow = pow.mul(&t2, w);
        sum = sum.add(&pow.div_u64(2 * i + 1, w), w);
        i += 1;
    }
}
