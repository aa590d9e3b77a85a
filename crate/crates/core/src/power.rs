//! Integer roots, distances to powers and perfect-power counting.

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::{Error, Natural, Result};

/// Which neighbouring power realises the distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Below,
    Above,
    Exact,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Below => "below",
            Side::Above => "above",
            Side::Exact => "exact",
        }
    }
}

/// Distance from `value` to the nearest `k`-th power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerDistance {
    pub value: Natural,
    pub k: u32,
    pub floor_root: Natural,
    pub delta: Natural,
    pub nearest: Natural,
    pub side: Side,
}

/// Distance from a value to the nearest power `base^exponent`, `exponent >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TildeDistance {
    pub delta: Natural,
    pub exponent: u32,
    pub power: Natural,
}

/// `floor(x^(1/k))`.
pub fn iroot(x: &BigUint, k: u32) -> Result<BigUint> {
    Ok(iroot_bracket(x, k)?.0)
}

/// Returns `(r, r^k, (r+1)^k)` with `r^k <= x < (r+1)^k`, verified by exact
/// powering.
pub fn iroot_bracket(x: &BigUint, k: u32) -> Result<(BigUint, BigUint, BigUint)> {
    if k == 0 {
        return Err(Error::ZeroExponent);
    }
    let mut r = x.nth_root(k);
    let mut lo = r.pow(k);
    // Newton's iterate is exact in num-bigint, but the contract is checked
    // rather than trusted.
    while &lo > x {
        r -= 1u32;
        lo = r.pow(k);
    }
    let mut hi = (&r + 1u32).pow(k);
    while &hi <= x {
        r += 1u32;
        lo = hi;
        hi = (&r + 1u32).pow(k);
    }
    Ok((r, lo, hi))
}

/// Nearest `k`-th power to `x`. Ties resolve to the power below.
pub fn delta_k(x: &BigUint, k: u32) -> Result<PowerDistance> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("power exponent k must be >= 2, got {k}")));
    }
    let (r, lo, hi) = iroot_bracket(x, k)?;
    let below = x - &lo;
    let above = &hi - x;
    let (delta, nearest, side) = if below.is_zero() {
        (below, lo, Side::Exact)
    } else if below <= above {
        (below, lo, Side::Below)
    } else {
        (above, hi, Side::Above)
    };
    Ok(PowerDistance { value: x.clone(), k, floor_root: r, delta, nearest, side })
}

/// Nearest power of `base` to `x`, where `base^0 = 1` is a candidate. Ties
/// resolve to the smaller power.
pub fn delta_tilde(x: &BigUint, base: u64) -> Result<TildeDistance> {
    if base < 2 {
        return Err(Error::InvalidBase(base));
    }
    let (exponent, lo) = floor_log(x, base);
    if x.is_zero() {
        return Ok(TildeDistance { delta: BigUint::one(), exponent: 0, power: BigUint::one() });
    }
    let hi = &lo * base;
    let below = x - &lo;
    let above = &hi - x;
    Ok(if below <= above {
        TildeDistance { delta: below, exponent, power: lo }
    } else {
        TildeDistance { delta: above, exponent: exponent + 1, power: hi }
    })
}

/// Largest `(e, base^e)` with `base^e <= max(x, 1)`.
fn floor_log(x: &BigUint, base: u64) -> (u32, BigUint) {
    if x.is_zero() {
        return (0, BigUint::one());
    }
    // Start from a bit-length estimate one below the truth, then walk up.
    let bits = x.bits();
    let log2_base = 64 - u64::from(base.leading_zeros()); // ceil-ish: base < 2^log2_base
    let mut e = ((bits - 1) / log2_base) as u32;
    let mut p = BigUint::from(base).pow(e);
    debug_assert!(&p <= x);
    loop {
        let next = &p * base;
        if &next > x {
            return (e, p);
        }
        p = next;
        e += 1;
    }
}

/// Möbius function of a small integer.
pub fn mobius(mut n: u64) -> i8 {
    if n == 0 {
        return 0;
    }
    let mut sign = 1i8;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Number of perfect powers `m <= x` (1 counted once), by Möbius
/// inclusion-exclusion over the root exponents.
pub fn count_perfect_powers_up_to(x: &BigUint) -> BigUint {
    match x.to_u64() {
        Some(small) => BigUint::from(count_perfect_powers_u64(small)),
        None => count_perfect_powers_big(x),
    }
}

fn count_perfect_powers_big(x: &BigUint) -> BigUint {
    if x.is_zero() {
        return BigUint::zero();
    }
    let bits = x.bits();
    let mut pos = BigUint::one();
    let mut neg = BigUint::zero();
    for j in 2..bits {
        let mu = mobius(j);
        if mu == 0 {
            continue;
        }
        let r = x.nth_root(j as u32);
        if mu < 0 {
            pos += r - 1u32;
        } else {
            neg += r - 1u32;
        }
    }
    pos - neg
}

/// [`count_perfect_powers_up_to`] for machine-size arguments.
pub fn count_perfect_powers_u64(x: u64) -> u64 {
    if x == 0 {
        return 0;
    }
    let bits = 64 - u64::from(x.leading_zeros());
    let mut total: i64 = 1;
    for j in 2..bits {
        let mu = mobius(j);
        if mu != 0 {
            total -= i64::from(mu) * (x.nth_root(j as u32) as i64 - 1);
        }
    }
    total as u64
}

/// Canonical representation `x = m^k` with maximal `k >= 2`, if any.
/// `1` is reported as `(1, 2)`.
pub fn is_perfect_power(x: &BigUint) -> Option<(BigUint, u32)> {
    if x.is_zero() || x.is_one() {
        return Some((x.clone(), 2));
    }
    let bits = x.bits();
    for p in (2..bits).filter(|&p| is_prime_small(p)) {
        let r = x.nth_root(p as u32);
        if &r.pow(p as u32) == x {
            return Some(match is_perfect_power(&r) {
                Some((m, e)) if !r.is_one() => (m, e * p as u32),
                _ => (r, p as u32),
            });
        }
    }
    None
}

fn is_prime_small(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn n(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn iroot_examples() {
        assert_eq!(iroot(&n(27), 3).unwrap(), n(3));
        assert_eq!(iroot(&n(26), 3).unwrap(), n(2));
        assert_eq!(iroot(&n(0), 5).unwrap(), n(0));
        assert_eq!(iroot(&n(7), 1).unwrap(), n(7));
        assert!(matches!(iroot(&n(7), 0), Err(Error::ZeroExponent)));
        let big = BigUint::from(10u32).pow(300);
        assert_eq!(iroot(&big, 3).unwrap(), BigUint::from(10u32).pow(100));
        assert_eq!(iroot(&(&big - 1u32), 3).unwrap(), BigUint::from(10u32).pow(100) - 1u32);
    }

    #[test]
    fn delta_k_examples() {
        let d = delta_k(&n(42), 2).unwrap();
        assert_eq!((d.delta, d.nearest, d.side), (n(6), n(36), Side::Below));
        let d = delta_k(&n(627), 2).unwrap();
        assert_eq!((d.delta, d.nearest), (n(2), n(625)));
        let d = delta_k(&n(8), 3).unwrap();
        assert_eq!((d.delta, d.side), (n(0), Side::Exact));
        let d = delta_k(&n(4), 3).unwrap();
        assert_eq!((d.delta, d.nearest), (n(3), n(1)));
        let d = delta_k(&n(47), 2).unwrap();
        assert_eq!((d.delta, d.nearest, d.side), (n(2), n(49), Side::Above));
        assert!(delta_k(&n(4), 1).is_err());
    }

    #[test]
    fn delta_tilde_examples() {
        let t = delta_tilde(&n(42), 2).unwrap();
        assert_eq!((t.delta, t.power, t.exponent), (n(10), n(32), 5));
        let t = delta_tilde(&n(627), 5).unwrap();
        assert_eq!((t.delta, t.power), (n(2), n(625)));
        let t = delta_tilde(&n(5604), 3).unwrap();
        assert_eq!((t.delta, t.power, t.exponent), (n(957), n(6561), 8));
        // a^0 = 1 is a candidate.
        let t = delta_tilde(&n(2), 5).unwrap();
        assert_eq!((t.delta, t.exponent), (n(1), 0));
        assert!(matches!(delta_tilde(&n(2), 1), Err(Error::InvalidBase(1))));
    }

    #[test]
    fn perfect_power_counts() {
        assert_eq!(count_perfect_powers_u64(1), 1);
        assert_eq!(count_perfect_powers_u64(100), 13);
        assert_eq!(count_perfect_powers_u64(0), 0);
        for x in (0..5000u64).chain([1 << 40, (1 << 40) - 1, u64::MAX]) {
            assert_eq!(count_perfect_powers_big(&n(x)), n(count_perfect_powers_u64(x)), "x = {x}");
        }
    }

    #[test]
    fn perfect_power_detection() {
        assert_eq!(is_perfect_power(&n(64)), Some((n(2), 6)));
        assert_eq!(is_perfect_power(&n(36)), Some((n(6), 2)));
        assert_eq!(is_perfect_power(&n(7)), None);
        assert_eq!(is_perfect_power(&n(1)), Some((n(1), 2)));
        assert_eq!(is_perfect_power(&n(1 << 30)), Some((n(2), 30)));
        assert_eq!(is_perfect_power(&n(216)), Some((n(6), 3)));
    }

    #[test]
    fn mobius_values() {
        let mu: Vec<i8> = (1..=10).map(mobius).collect();
        assert_eq!(mu, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    }

    proptest! {
        #[test]
        fn bracketing_holds(x in 0u64..=1_000_000, k in 1u32..=20) {
            let (r, lo, hi) = iroot_bracket(&n(x), k).unwrap();
            prop_assert_eq!(r.pow(k), lo.clone());
            prop_assert!(lo <= n(x) && n(x) < hi);
        }

        #[test]
        fn delta_is_min_distance(x in 1u64..=1_000_000, k in 2u32..=20) {
            let d = delta_k(&n(x), k).unwrap();
            let r = d.floor_root.to_u64().unwrap();
            let lo = r.pow(k);
            let hi = (r + 1).checked_pow(k).unwrap_or(u64::MAX);
            prop_assert_eq!(d.delta.to_u64().unwrap(), (x - lo).min(hi - x));
            prop_assert_eq!(d.side == Side::Exact, d.delta.is_zero());
        }

        #[test]
        fn delta_stabilizes(x in 1u64..=100_000) {
            // 2^(k-1) >= x makes 1 the nearest k-th power.
            let k = 65 - x.leading_zeros();
            let d = delta_k(&n(x), k.max(2)).unwrap();
            prop_assert_eq!(d.delta, n(x - 1));
        }

        #[test]
        fn coarser_powers_are_farther(x in 1u64..=1_000_000, k in 2u32..=6, j in 2u32..=4, m in 1u64..=40) {
            let d = delta_k(&n(x), k).unwrap().delta;
            let p = n(m).pow(j * k);
            let dist = if p > n(x) { &p - n(x) } else { n(x) - &p };
            prop_assert!(dist >= d);
        }

        #[test]
        fn detection_matches_delta(x in 1u64..=200_000) {
            let bits = 64 - x.leading_zeros();
            let some_exact = (2..bits.max(3)).any(|k| delta_k(&n(x), k).unwrap().delta.is_zero());
            prop_assert_eq!(is_perfect_power(&n(x)).is_some(), some_exact || x == 1);
            if let Some((m, k)) = is_perfect_power(&n(x)) {
                prop_assert_eq!(m.pow(k), n(x));
            }
        }

        #[test]
        fn tilde_is_min_over_powers(x in 1u64..=10_000_000, base in 2u64..=12) {
            let t = delta_tilde(&n(x), base).unwrap();
            let mut best = u64::MAX;
            let mut p = 1u64;
            while p <= x.saturating_mul(base) {
                best = best.min(p.abs_diff(x));
                p *= base;
            }
            prop_assert_eq!(t.delta.to_u64().unwrap(), best);
            prop_assert_eq!(t.power, n(base).pow(t.exponent));
        }
    }
}
