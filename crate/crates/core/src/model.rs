//! The random model: `f_n` is uniform on the integers of
//! `S_n = [A(n)(1 - eps_n), A(n)(1 + eps_n)]`.
//!
//! Interval endpoints are obtained from certified enclosures of `A(n)` and
//! `eps_n`, with precision doubled until `ceil`/`floor` of the endpoints are
//! unambiguous. Probabilities are exact rationals; the analytic bounds are
//! evaluated with outward rounding so they can be compared exactly.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::power::{count_perfect_powers_up_to, delta_k, iroot, is_perfect_power};
use crate::real::{ln_point, Dyadic, Interval};
use crate::{AsymptoticParams, Error, Natural, Result};

/// Hard cap on working precision when certifying interval endpoints.
pub const PRECISION_CAP: u64 = 1_000_000;
/// Largest number of candidate powers [`prob_delta`] will enumerate.
pub const CANDIDATE_CAP: u64 = 10_000_000;
/// Largest `n` [`expectation`] will sum to.
pub const EXPECTATION_N_CAP: u64 = 100_000;

/// The integer interval `S_n` together with the enclosures it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelInterval {
    pub n: u64,
    /// `max(1, ceil(A(1 - eps)))`.
    pub lo: Natural,
    /// `floor(A(1 + eps))`.
    pub hi: Natural,
    pub card: Natural,
    /// `ceil(A(1 - eps))` before clamping; may be `<= 0`.
    pub raw_lo: BigInt,
    pub a_value: Interval,
    pub eps: Interval,
}

impl ModelInterval {
    pub fn clamped(&self) -> bool {
        self.raw_lo < BigInt::one()
    }

    pub fn eps_f64(&self) -> f64 {
        self.eps.mid_f64()
    }
}

/// Something that yields an interval `S_n` for each `n`.
pub trait IntervalFamily: Sync {
    fn interval(&self, n: u64) -> Result<ModelInterval>;
}

impl IntervalFamily for AsymptoticParams {
    fn interval(&self, n: u64) -> Result<ModelInterval> {
        interval_s(self, n)
    }
}

/// `A(n) = center` and `eps_n = eps` for every `n`; used to check the sampler
/// against hand-computable probabilities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstantFamily {
    pub center: f64,
    pub eps: f64,
}

impl IntervalFamily for ConstantFamily {
    fn interval(&self, n: u64) -> Result<ModelInterval> {
        let a = Interval::from_f64(self.center)?;
        let eps = Interval::from_f64(self.eps)?;
        let (raw_lo, hi) = certified_endpoints(&a, &eps, 64)
            .ok_or_else(|| Error::InvalidArgument("endpoint of the constant interval is an exact integer".into()))?;
        finish(n, raw_lo, hi, a, eps)
    }
}

/// `(ceil(A(1 - eps)), floor(A(1 + eps)))` if both are certified.
fn certified_endpoints(a: &Interval, eps: &Interval, prec: u64) -> Option<(BigInt, BigInt)> {
    let one = Interval::from_i64(1);
    let lo = a.mul(&one.sub(eps, prec), prec);
    let hi = a.mul(&one.add(eps, prec), prec);
    Some((lo.ceil_certified()?, hi.floor_certified()?))
}

fn finish(n: u64, raw_lo: BigInt, hi: BigInt, a_value: Interval, eps: Interval) -> Result<ModelInterval> {
    let lo = raw_lo.clone().max(BigInt::one());
    if hi < lo {
        return Err(Error::EmptyInterval { n });
    }
    let card = (&hi - &lo + 1u32).to_biguint().expect("nonempty");
    Ok(ModelInterval {
        n,
        lo: lo.to_biguint().expect("lo >= 1"),
        hi: hi.to_biguint().expect("hi >= lo >= 1"),
        card,
        raw_lo,
        a_value,
        eps,
    })
}

/// Enclosures of `A(n)` and `eps_n` at working precision `prec`.
pub fn eval_a_eps(params: &AsymptoticParams, n: u64, prec: u64) -> Result<(Interval, Interval)> {
    let w = prec + 32;
    let ln_n = ln_point(&Dyadic::from_i64(n as i64), w);
    let beta = Interval::from_f64(params.beta)?;
    let n_beta_ln = ln_n.mul(&beta, w);
    let n_beta = n_beta_ln.exp(w)?;
    let ln_a = ln_point(&Dyadic::from_f64(params.a).expect("validated"), w);
    let exponent = ln_a
        .sub(&ln_n.mul(&Interval::from_f64(params.b)?, w), w)
        .add(&n_beta.mul(&Interval::from_f64(params.c)?, w), w);
    let a = exponent.exp(prec)?;
    let eps = Interval::from_f64(params.eps_const)?.mul(&n_beta_ln.neg().exp(w)?, prec);
    Ok((a, eps))
}

/// Starting precision: enough bits for the integer part of `A(n)` plus 64.
fn initial_precision(params: &AsymptoticParams, n: u64) -> u64 {
    let bits = params.c * (n as f64).powf(params.beta) / std::f64::consts::LN_2;
    bits.max(0.0).ceil() as u64 + 64
}

/// Certified raw endpoints and the enclosures used.
fn raw_interval(params: &AsymptoticParams, n: u64) -> Result<(BigInt, BigInt, Interval, Interval)> {
    params.validate()?;
    if n == 0 {
        return Err(Error::InvalidArgument("model index n must be >= 1".into()));
    }
    let mut prec = initial_precision(params, n);
    loop {
        if prec > PRECISION_CAP {
            return Err(Error::PrecisionCapExceeded { n, cap: PRECISION_CAP });
        }
        let (a, eps) = eval_a_eps(params, n, prec)?;
        if let Some((raw_lo, hi)) = certified_endpoints(&a, &eps, prec) {
            return Ok((raw_lo, hi, a, eps));
        }
        prec *= 2;
    }
}

/// `S_n` for the given parameters, with `lo` clamped to 1.
pub fn interval_s(params: &AsymptoticParams, n: u64) -> Result<ModelInterval> {
    let (raw_lo, hi, a, eps) = raw_interval(params, n)?;
    finish(n, raw_lo, hi, a, eps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PowerMode {
    Kth(u32),
    AnyPerfect,
}

/// Number of `k`-th powers (or of perfect powers) in `[lo, hi]`.
pub fn count_powers_in_interval(iv: &ModelInterval, mode: PowerMode) -> Result<Natural> {
    count_powers_between(&iv.lo, &iv.hi, mode)
}

fn count_powers_between(lo: &Natural, hi: &Natural, mode: PowerMode) -> Result<Natural> {
    let below = lo - 1u32;
    Ok(match mode {
        PowerMode::Kth(k) => iroot(hi, k)? - iroot(&below, k)?,
        PowerMode::AnyPerfect => count_perfect_powers_up_to(hi) - count_perfect_powers_up_to(&below),
    })
}

/// Exact `P(Delta_k(f_n) <= d)`: the share of `[lo, hi]` within `d` of a
/// `k`-th power.
pub fn prob_delta(iv: &ModelInterval, k: u32, d: &Natural) -> Result<BigRational> {
    let count = near_power_count(&iv.lo, &iv.hi, k, d, false)?;
    Ok(ratio(count, &iv.card))
}

/// Like [`prob_delta`] but always merges the windows explicitly.
pub fn prob_delta_merged(iv: &ModelInterval, k: u32, d: &Natural) -> Result<BigRational> {
    let count = near_power_count(&iv.lo, &iv.hi, k, d, true)?;
    Ok(ratio(count, &iv.card))
}

fn ratio(count: Natural, card: &Natural) -> BigRational {
    BigRational::new(BigInt::from(count), BigInt::from(card.clone()))
}

/// Candidate roots `m >= 1` whose window `[m^k - d, m^k + d]` can meet `[lo, hi]`.
fn candidate_roots(lo: &Natural, hi: &Natural, k: u32, d: &Natural) -> Result<(Natural, Natural)> {
    let m_lo = if lo > &(d + 1u32) { iroot(&(lo - d - 1u32), k)? + 1u32 } else { BigUint::one() };
    let m_hi = iroot(&(hi + d), k)?;
    Ok((m_lo, m_hi))
}

fn window_overlap(center: &Natural, d: &Natural, lo: &Natural, hi: &Natural) -> Natural {
    let a = if center > d { center - d } else { BigUint::zero() };
    let a = a.max(lo.clone());
    let b = (center + d).min(hi.clone());
    if b >= a {
        b - a + 1u32
    } else {
        BigUint::zero()
    }
}

fn near_power_count(lo: &Natural, hi: &Natural, k: u32, d: &Natural, force_merge: bool) -> Result<Natural> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("power exponent k must be >= 2, got {k}")));
    }
    let (m_lo, m_hi) = candidate_roots(lo, hi, k, d)?;
    if m_hi < m_lo {
        return Ok(BigUint::zero());
    }
    let candidates = &m_hi - &m_lo + 1u32;
    let two_d = d * 2u32;
    let separated = (&m_lo + 1u32).pow(k) - m_lo.pow(k) > two_d;
    if separated && !force_merge {
        // Interior windows lie wholly inside [lo, hi]; only the two ends clip.
        let first = window_overlap(&m_lo.pow(k), d, lo, hi);
        if m_hi == m_lo {
            return Ok(first);
        }
        let last = window_overlap(&m_hi.pow(k), d, lo, hi);
        let interior = &candidates - 2u32;
        return Ok(first + last + interior * (&two_d + 1u32));
    }
    if candidates > BigUint::from(CANDIDATE_CAP) {
        return Err(Error::DenseWindow { candidates: candidates.to_string() });
    }
    let windows = (0..candidates.to_u64().expect("capped")).map(|i| {
        let c = (&m_lo + i).pow(k);
        let a = if &c > d { &c - d } else { BigUint::zero() };
        (a, c + d)
    });
    Ok(union_length(windows, lo, hi))
}

/// Size of `[lo, hi]` intersected with a union of windows sorted by start.
fn union_length(windows: impl Iterator<Item = (Natural, Natural)>, lo: &Natural, hi: &Natural) -> Natural {
    let mut total = BigUint::zero();
    let mut cur: Option<(Natural, Natural)> = None;
    let flush = |a: Natural, b: Natural, total: &mut Natural| {
        let a = a.max(lo.clone());
        let b = b.min(hi.clone());
        if b >= a {
            *total += b - a + 1u32;
        }
    };
    for (a, b) in windows {
        cur = match cur {
            Some((ca, cb)) if a <= &cb + 1u32 => Some((ca, cb.max(b))),
            Some((ca, cb)) => {
                flush(ca, cb, &mut total);
                Some((a, b))
            }
            None => Some((a, b)),
        };
    }
    if let Some((a, b)) = cur {
        flush(a, b, &mut total);
    }
    total
}

/// Exact `P(f_n` is within `d` of some perfect power`)`.
pub fn prob_delta_any(iv: &ModelInterval, d: &Natural) -> Result<BigRational> {
    let top = &iv.hi + d;
    let mut windows = Vec::new();
    let mut budget = CANDIDATE_CAP;
    for k in 2..top.bits().max(2) as u32 + 1 {
        let (m_lo, m_hi) = candidate_roots(&iv.lo, &iv.hi, k, d)?;
        if m_hi < m_lo {
            continue;
        }
        let count = (&m_hi - &m_lo + 1u32).to_u64().filter(|&c| c <= budget).ok_or_else(|| {
            Error::DenseWindow { candidates: (&m_hi - &m_lo + 1u32).to_string() }
        })?;
        budget -= count;
        for i in 0..count {
            let c = (&m_lo + i).pow(k);
            let a = if &c > d { &c - d } else { BigUint::zero() };
            windows.push((a, c + d));
        }
    }
    windows.sort();
    let count = union_length(windows.into_iter(), &iv.lo, &iv.hi);
    Ok(ratio(count, &iv.card))
}

/// The analytic bounds on `P(Delta <= d)` and whether their hypotheses hold.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaBounds {
    #[serde(serialize_with = "serialize_rational")]
    pub lower: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub upper: BigRational,
    pub applicable: bool,
    pub reasons: Vec<String>,
}

fn serialize_rational<S: serde::Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(v.to_f64().unwrap_or(f64::NAN))
}

/// Evaluates the lemma bounds for `S_n`. Inapplicability is reported, not
/// raised: `applicable` is true only when every hypothesis of the proof is
/// certified for this `n`.
pub fn lemma_bounds(params: &AsymptoticParams, n: u64, mode: PowerMode, d: u64) -> Result<LemmaBounds> {
    let mut reasons = Vec::new();
    let (raw_lo, hi, _, _) = raw_interval(params, n)?;
    let w = initial_precision(params, n) + 64;
    let (a, eps) = eval_a_eps(params, n, w)?;
    let iv = |x: u64| Interval::from_int(BigInt::from(x));
    let dd = iv(2 * d + 1);
    let eps_a = eps.mul(&a, w);
    let second_denominator = eps_a.mul_pow2(1); // 2 eps A

    let (lower, upper) = match mode {
        PowerMode::Kth(k) => {
            if k < 2 {
                return Err(Error::InvalidArgument(format!("power exponent k must be >= 2, got {k}")));
            }
            let root = Interval::from_i64(1).sub(&Interval::from_i64(1).div_u64(u64::from(k), w), w);
            let a_pow = a.pow(&root, w)?; // A^(1 - 1/k)
            let t1 = dd.div(&a_pow.mul(&iv(u64::from(k)), w), w)?;
            let t2 = iv(6 * d + 3).div(&second_denominator, w)?;
            let t3 = iv(8 * d + 4).mul(&eps.mul(&eps, w), w).div(&a_pow, w)?;
            let lower = t1.sub(&iv(10 * d + 3).div(&second_denominator, w)?, w);
            (lower, t1.add(&t2, w).add(&t3, w))
        }
        PowerMode::AnyPerfect => {
            let half = Interval::point(Dyadic::new(BigInt::one(), -1));
            let sqrt_a = a.pow(&half, w)?;
            let a23 = a.pow(&Interval::from_i64(2).div_u64(3, w), w)?;
            let log2_a = a.ln(w)?.div(&crate::real::ln2(w), w)?;
            let u1 = dd.div(&sqrt_a.mul_pow2(1), w)?;
            let u2 = dd.div(&a23, w)?;
            let u3 = iv(8 * d + 5).mul(&eps.mul(&eps, w), w).div(&sqrt_a, w)?;
            let u4 = iv(6 * d + 3).mul(&log2_a, w).div(&second_denominator, w)?;
            let lower = u1.sub(&iv(10 * d + 3).div(&second_denominator, w)?, w);
            (lower, u1.add(&u2, w).add(&u3, w).add(&u4, w))
        }
    };

    // Hypotheses, each checked on the whole enclosure.
    let half = Dyadic::new(BigInt::one(), -1);
    if eps.hi > half {
        reasons.push("eps_n > 1/2".to_string());
    }
    if eps_a.lo <= Dyadic::one() {
        reasons.push("eps_n A(n) <= 1".to_string());
    }
    if a.lo <= Dyadic::one() {
        reasons.push("A(n) <= 1".to_string());
    }
    let ten_dd = 10 * (2 * d + 1);
    if a.lo <= Dyadic::from_int(BigInt::from(ten_dd) * BigInt::from(ten_dd)) {
        reasons.push(format!("sqrt A(n) <= {ten_dd}"));
    }
    let lo = raw_lo.clone().max(BigInt::one());
    if hi < lo {
        reasons.push("S_n is empty".to_string());
    } else {
        // Powers at the low end of S_n must be more than 2d apart.
        let k = match mode {
            PowerMode::Kth(k) => k,
            PowerMode::AnyPerfect => 2,
        };
        let lo_n = lo.to_biguint().expect("lo >= 1");
        let t = iroot(&(lo_n - 1u32), k)? + 1u32;
        if t.pow(k) - (&t - 1u32).pow(k) < BigUint::from(2 * d + 1) {
            reasons.push("powers near the lower end of S_n are within 2d of each other".to_string());
        }
    }
    if mode == PowerMode::AnyPerfect {
        if a.lo <= Dyadic::from_int(BigInt::from(2 * (1 + d))) {
            reasons.push("A(n)/2 <= 1 + d".to_string());
        }
        let a12 = a.pow(&Interval::from_i64(1).div_u64(12, w), w)?;
        let log2_ad = a.add(&iv(d), w).ln(w)?.div(&crate::real::ln2(w), w)?;
        if a12.lo <= log2_ad.hi {
            reasons.push("A(n)^(1/12) <= log2(A(n) + d)".to_string());
        }
    }

    Ok(LemmaBounds {
        lower: lower.lo.to_rational(),
        upper: upper.hi.to_rational(),
        applicable: reasons.is_empty(),
        reasons,
    })
}

/// How `S_n` is counted when `A(n)(1 - eps_n) < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Support {
    /// `card = floor(A(1+eps)) - ceil(A(1-eps)) + 1` over all integers; only
    /// positive members can be perfect powers.
    Unclamped,
    /// `lo` clamped to 1, as in [`interval_s`].
    Clamped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Expectation {
    /// `sum_{n <= n_max} E[#perfect powers hit at n]`.
    pub value: f64,
    /// Bound on the neglected terms `n > n_max`.
    pub tail_bound: f64,
    pub n_max: u64,
}

/// Expected number of `n` for which `f_n` is a perfect power.
pub fn expectation(params: &AsymptoticParams, tol: f64, support: Support) -> Result<Expectation> {
    params.validate()?;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let mut value = 0.0;
    for n in 1..=EXPECTATION_N_CAP {
        value += expected_perfect_powers(params, n, support)?;
        if let Some(tail) = tail_bound(params, n) {
            if tail < tol {
                return Ok(Expectation { value, tail_bound: tail, n_max: n });
            }
        }
    }
    Err(Error::ToleranceUnreachable { tol, cap: EXPECTATION_N_CAP })
}

/// `P(f_n` is a perfect power`)` under the chosen support convention.
pub fn expected_perfect_powers(params: &AsymptoticParams, n: u64, support: Support) -> Result<f64> {
    let (raw_lo, hi, _, _) = raw_interval(params, n)?;
    let lo = match support {
        Support::Clamped => raw_lo.clone().max(BigInt::one()),
        Support::Unclamped => raw_lo.clone(),
    };
    if hi < lo || hi.sign() != Sign::Plus {
        return Ok(0.0);
    }
    let card = &hi - &lo + 1u32;
    let pos_lo = lo.max(BigInt::one()).to_biguint().expect("positive");
    let count = count_powers_between(&pos_lo, &hi.to_biguint().expect("positive"), PowerMode::AnyPerfect)?;
    Ok(BigRational::new(BigInt::from(count), card).to_f64().unwrap_or(0.0))
}

/// Bound on `sum_{m > n} 1.1 / (2 sqrt(A(m)(1 - eps_m)))`, or `None` while
/// the estimates behind it are not yet valid at `n`.
pub fn tail_bound(params: &AsymptoticParams, n: u64) -> Option<f64> {
    let x = n as f64;
    let eps = params.eps_n(x);
    let (bp, cp, beta) = (params.b / 2.0, params.c / 2.0, params.beta);
    if eps >= 1.0 {
        return None;
    }
    // t^b' exp(-c' t^beta) must be decreasing beyond n ...
    if x.powf(beta) <= bp / (cp * beta) {
        return None;
    }
    // ... and the incomplete-gamma estimate needs z >= 2(s - 1).
    let s = (bp + 1.0) / beta;
    let z = cp * x.powf(beta);
    if z < 2.0 * (s - 1.0) {
        return None;
    }
    let g = (bp * x.ln() - z).exp();
    let integral = 2.0 / (beta * cp) * ((bp + 1.0 - beta) * x.ln() - z).exp();
    let constant = 1.1 / (2.0 * (params.a * (1.0 - eps)).sqrt());
    Some(constant * (g + integral))
}

/// Outcome of [`simulate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimulationReport {
    pub trials: u64,
    pub seed: u64,
    pub k: u32,
    #[serde(serialize_with = "serialize_natural")]
    pub d: Natural,
    /// `(n, #trials with Delta_k(f_n) <= d)`.
    pub hits: Vec<(u64, u64)>,
    /// Realised `M_k(d)` within the range (`None`: no qualifying `n`) -> trials.
    #[serde(serialize_with = "serialize_m_histogram")]
    pub m_histogram: BTreeMap<Option<u64>, u64>,
    /// Number of `n` with `f_n` a perfect power -> trials.
    pub perfect_power_histogram: BTreeMap<u64, u64>,
}

/// As a list of `{"m": .., "trials": ..}`, since JSON keys must be strings.
fn serialize_m_histogram<S: serde::Serializer>(
    v: &BTreeMap<Option<u64>, u64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Bin {
        m: Option<u64>,
        trials: u64,
    }
    s.collect_seq(v.iter().map(|(&m, &trials)| Bin { m, trials }))
}

pub(crate) fn serialize_natural<S: serde::Serializer>(v: &Natural, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Keystream words reserved for each `(trial, n)` draw.
const WORDS_PER_DRAW_LOG2: u32 = 24;

/// Samples the model `trials` times over `n_lo..=n_hi`. Each `(trial, n)`
/// pair draws from its own region of a ChaCha20 keystream, so the result does
/// not depend on scheduling.
pub fn simulate<F: IntervalFamily>(
    family: &F,
    n_lo: u64,
    n_hi: u64,
    k: u32,
    d: &Natural,
    trials: u64,
    seed: u64,
) -> Result<SimulationReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    if n_lo == 0 || n_hi < n_lo {
        return Err(Error::InvalidArgument(format!("bad n range {n_lo}..={n_hi}")));
    }
    if k < 2 {
        return Err(Error::InvalidArgument(format!("power exponent k must be >= 2, got {k}")));
    }
    let intervals: Vec<ModelInterval> = (n_lo..=n_hi).map(|n| family.interval(n)).collect::<Result<_>>()?;
    let width = intervals.len();

    #[derive(Clone)]
    struct Acc {
        hits: Vec<u64>,
        m: BTreeMap<Option<u64>, u64>,
        pp: BTreeMap<u64, u64>,
    }
    let empty = || Acc { hits: vec![0; width], m: BTreeMap::new(), pp: BTreeMap::new() };
    let merge = |mut a: Acc, b: Acc| {
        for (x, y) in a.hits.iter_mut().zip(b.hits) {
            *x += y;
        }
        for (key, v) in b.m {
            *a.m.entry(key).or_insert(0) += v;
        }
        for (key, v) in b.pp {
            *a.pp.entry(key).or_insert(0) += v;
        }
        a
    };

    let acc = (0..trials)
        .into_par_iter()
        .try_fold(empty, |mut acc, trial| -> Result<Acc> {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(trial);
            let mut realized_m = None;
            let mut powers = 0u64;
            for (i, iv) in intervals.iter().enumerate() {
                rng.set_word_pos((i as u128) << WORDS_PER_DRAW_LOG2);
                let x = &iv.lo + uniform_below(&mut rng, &iv.card);
                if &delta_k(&x, k)?.delta <= d {
                    acc.hits[i] += 1;
                    realized_m = Some(iv.n);
                }
                if is_perfect_power(&x).is_some() {
                    powers += 1;
                }
            }
            *acc.m.entry(realized_m).or_insert(0) += 1;
            *acc.pp.entry(powers).or_insert(0) += 1;
            Ok(acc)
        })
        .try_reduce(empty, |a, b| Ok(merge(a, b)))?;

    Ok(SimulationReport {
        trials,
        seed,
        k,
        d: d.clone(),
        hits: intervals.iter().map(|iv| iv.n).zip(acc.hits).collect(),
        m_histogram: acc.m,
        perfect_power_histogram: acc.pp,
    })
}

/// Unbiased uniform integer in `[0, bound)` by masking to the bit length and
/// rejecting.
pub fn uniform_below<R: RngCore>(rng: &mut R, bound: &Natural) -> Natural {
    assert!(!bound.is_zero(), "empty range");
    let bits = bound.bits();
    let words = bits.div_ceil(32) as usize;
    let top_bits = bits - 32 * (words as u64 - 1);
    let mask = if top_bits == 32 { u32::MAX } else { (1u32 << top_bits) - 1 };
    let mut buf = vec![0u32; words];
    loop {
        for w in buf.iter_mut() {
            *w = rng.next_u32();
        }
        buf[words - 1] &= mask;
        let x = BigUint::from_slice(&buf);
        if &x < bound {
            return x;
        }
    }
}
