//! Bounded searches over a coefficient table: `M_{f,k}(d)`, its fixed-base
//! analogue, `L_f(d)`, `N_{f,d}` estimates, and the closed-form bounds that
//! accompany them.
//!
//! Distances are computed once per `n` (in parallel) and a whole sorted grid of
//! `d` values is then answered by one reverse pass over `n`.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::power::{delta_k, delta_tilde, iroot};
use crate::{AsymptoticParams, CoeffTable, Error, Natural, Result};

/// Fixed-point bits used when bounding `f(n)^(1/k)` from above.
const HALF_GAP_BITS: u64 = 64;

/// One answer of a bounded search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    /// `k` for `M`, the base `a` for `M~`.
    pub param: u64,
    #[serde(serialize_with = "serialize_decimal")]
    pub d: Natural,
    /// Largest qualifying `n <= bound`, or `None` if no `n <= bound` qualifies.
    pub m: Option<u64>,
    pub bound: u64,
    /// The distance realised at `m`.
    #[serde(serialize_with = "serialize_opt_decimal")]
    pub witness_delta: Option<Natural>,
    /// Values are maxima over `n <= bound` only; the true maximum is conjectural.
    pub conjectural: bool,
}

fn serialize_decimal<S: serde::Serializer>(v: &Natural, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn serialize_opt_decimal<S: serde::Serializer>(v: &Option<Natural>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

fn check_bound(table: &CoeffTable, bound: u64) -> Result<()> {
    if bound as usize > table.n_max() {
        return Err(Error::BoundExceedsTable { bound, len: table.n_max() as u64 });
    }
    if bound == 0 {
        return Err(Error::InvalidArgument("scan bound must be >= 1".into()));
    }
    Ok(())
}

/// `Delta_{f,k}(n)` for `n = 1..=bound` (index `n - 1`).
pub fn delta_profile(table: &CoeffTable, k: u32, bound: u64) -> Result<Vec<Natural>> {
    check_bound(table, bound)?;
    table.values()[1..=bound as usize]
        .par_iter()
        .map(|v| delta_k(v, k).map(|d| d.delta))
        .collect()
}

/// `Delta~_a(n)` for `n = 1..=bound`.
pub fn delta_tilde_profile(table: &CoeffTable, base: u64, bound: u64) -> Result<Vec<Natural>> {
    check_bound(table, bound)?;
    table.values()[1..=bound as usize]
        .par_iter()
        .map(|v| delta_tilde(v, base).map(|d| d.delta))
        .collect()
}

/// For each `d` in the sorted `grid`, the largest `n` with `profile[n-1] <= d`.
pub fn resolve_grid(profile: &[Natural], grid: &[Natural]) -> Vec<Option<u64>> {
    debug_assert!(grid.windows(2).all(|w| w[0] < w[1]), "grid must be sorted and distinct");
    let mut out = vec![None; grid.len()];
    // Every grid index >= `resolved` already has its answer.
    let mut resolved = grid.len();
    for n in (1..=profile.len()).rev() {
        if resolved == 0 {
            break;
        }
        let first = grid.partition_point(|d| d < &profile[n - 1]);
        if first < resolved {
            for slot in &mut out[first..resolved] {
                *slot = Some(n as u64);
            }
            resolved = first;
        }
    }
    out
}

fn rows(param: u64, profile: &[Natural], grid: &[Natural], bound: u64) -> Vec<ScanRow> {
    resolve_grid(profile, grid)
        .into_iter()
        .zip(grid)
        .map(|(m, d)| ScanRow {
            param,
            d: d.clone(),
            m,
            bound,
            witness_delta: m.map(|n| profile[n as usize - 1].clone()),
            conjectural: true,
        })
        .collect()
}

fn check_grid(grid: &[Natural]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("d grid must be nonempty".into()));
    }
    if !grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument("d grid must be sorted and distinct".into()));
    }
    Ok(())
}

/// `M_{f,k}(d) = max{n <= bound : Delta_{f,k}(n) <= d}` for every `d` in `grid`.
pub fn scan_m(table: &CoeffTable, k: u32, grid: &[Natural], bound: u64) -> Result<Vec<ScanRow>> {
    check_grid(grid)?;
    let profile = delta_profile(table, k, bound)?;
    Ok(rows(u64::from(k), &profile, grid, bound))
}

/// `M~_{f,a}(d) = max{n <= bound : Delta~_a(n) <= d}`.
pub fn scan_m_tilde(table: &CoeffTable, base: u64, grid: &[Natural], bound: u64) -> Result<Vec<ScanRow>> {
    check_grid(grid)?;
    let profile = delta_tilde_profile(table, base, bound)?;
    Ok(rows(base, &profile, grid, bound))
}

/// As [`scan_m_tilde`] but an exact hit (`f(n) = a^k`, distance 0) never
/// qualifies: only near misses `0 < Delta~_a(n) <= d` count, so `p(4) = 5`
/// does not make `M~_5(1) >= 4`. This matches the reference `M~` values for
/// `p`. Only `f(n) <= a` can be affected for `p`, since no larger `p(n)` is
/// known to be a perfect power.
pub fn scan_m_tilde_near_miss(table: &CoeffTable, base: u64, grid: &[Natural], bound: u64) -> Result<Vec<ScanRow>> {
    check_grid(grid)?;
    let never = grid.last().expect("nonempty grid") + 1u32;
    let profile: Vec<Natural> = delta_tilde_profile(table, base, bound)?
        .into_iter()
        .map(|d| if d.bits() == 0 { never.clone() } else { d })
        .collect();
    Ok(rows(base, &profile, grid, bound))
}

/// Integer `h >= ((x+1)^k - x^k) / 2` with `x = f^(1/k)`, tight to within one
/// unit for the sizes used here; `h <= d` is then a conservative test of the
/// half-gap condition.
pub fn half_gap_ceil(f: &BigUint, k: u32) -> Result<BigUint> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("power exponent k must be >= 2, got {k}")));
    }
    let p = HALF_GAP_BITS as usize;
    let kp = k as usize * p;
    let scaled = f << kp;
    // (r + 1) / 2^P >= x
    let r = iroot(&scaled, k)? + 1u32;
    let one = BigUint::from(1u32) << p;
    // (x+1)^k - x^k = (x+1)^k - f  <=  ((r + 2^P) / 2^P)^k - f
    let num = (r + one).pow(k) - scaled;
    let den = BigUint::from(1u32) << (kp + 1);
    Ok((&num + &den - 1u32) / den)
}

/// Largest `n <= bound` whose half gap `(1/2) sum_{i=1}^k C(k,i) f(n)^((k-i)/k)`
/// is at most `d`, for each `d` in `grid`. Evaluation rounds up, so a reported
/// `n` always satisfies the exact inequality.
pub fn half_gap_lower_scan(table: &CoeffTable, k: u32, grid: &[Natural], bound: u64) -> Result<Vec<Option<u64>>> {
    check_grid(grid)?;
    check_bound(table, bound)?;
    let profile: Vec<Natural> = table.values()[1..=bound as usize]
        .par_iter()
        .map(|v| half_gap_ceil(v, k))
        .collect::<Result<_>>()?;
    Ok(resolve_grid(&profile, grid))
}

/// `L_f(d) = max{n : f(n) <= d + 1}` on a table nondecreasing from `n = 1`.
pub fn l_of(table: &CoeffTable, d: &Natural) -> Result<u64> {
    if let Some(n) = table.first_descent() {
        return Err(Error::NonMonotoneTable { n: n as u64 });
    }
    l_of_sorted(table.values(), d, table.n_max())
}

/// `L_f(d)` for any table: computed on the suffix minima
/// `g(n) = min_{m >= n} f(m)`, which is nondecreasing and has the same
/// `max{n : f(n) <= d + 1}`. Returns whether the transform changed anything,
/// i.e. whether the table was non-monotone.
pub fn l_of_any(table: &CoeffTable, d: &Natural) -> Result<(u64, bool)> {
    if table.first_descent().is_none() {
        return Ok((l_of_sorted(table.values(), d, table.n_max())?, false));
    }
    let mut g = table.values().to_vec();
    for n in (1..g.len() - 1).rev() {
        if g[n + 1] < g[n] {
            g[n] = g[n + 1].clone();
        }
    }
    Ok((l_of_sorted(&g, d, table.n_max())?, true))
}

fn l_of_sorted(values: &[Natural], d: &Natural, n_max: usize) -> Result<u64> {
    let limit = d + 1u32;
    if n_max == 0 || values[1] > limit {
        return Err(Error::NoQualifyingIndex { d: d.to_string() });
    }
    if values[n_max] <= limit {
        return Err(Error::TableExhausted { d: d.to_string(), n_max: n_max as u64 });
    }
    // values[1..] is sorted; count the entries <= d + 1.
    Ok(values[1..].partition_point(|v| v <= &limit) as u64)
}

/// Scan-based estimate of `N_{f,d}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NdEstimate {
    /// Smallest `k0` with `M_{f,k}(d) = L_f(d)` for all `k0 <= k <= k_max`;
    /// `k_max + 1` when even `k_max` disagrees.
    pub k0: u32,
    /// False when `M_{f,k_max}(d) != L_f(d)`, i.e. the estimate is unreliable.
    pub stable: bool,
    pub l: u64,
    /// `(k, M_{f,k}(d))` for `k = 2..=k_max`.
    pub m_by_k: Vec<(u32, Option<u64>)>,
    /// `floor(log2 d) + 1`, the proven lower bound (for `d >= 1`).
    pub nd_lower1: Option<u64>,
}

pub fn estimate_nd(table: &CoeffTable, d: &Natural, k_max: u32, bound: u64) -> Result<NdEstimate> {
    if k_max < 2 {
        return Err(Error::InvalidArgument(format!("k_max must be >= 2, got {k_max}")));
    }
    check_bound(table, bound)?;
    let (l, _) = l_of_any(table, d)?;
    let grid = [d.clone()];
    let m_by_k: Vec<(u32, Option<u64>)> = (2..=k_max)
        .into_par_iter()
        .map(|k| Ok((k, delta_profile(table, k, bound).map(|p| resolve_grid(&p, &grid)[0])?)))
        .collect::<Result<_>>()?;
    let agrees = |m: &Option<u64>| *m == Some(l);
    let stable = agrees(&m_by_k.last().expect("k_max >= 2").1);
    let k0 = m_by_k
        .iter()
        .rev()
        .take_while(|(_, m)| agrees(m))
        .last()
        .map_or(k_max + 1, |(k, _)| *k);
    Ok(NdEstimate { k0, stable, l, m_by_k, nd_lower1: nd_lower1(d) })
}

/// `floor(log2 d) + 1` for `d >= 1`.
pub fn nd_lower1(d: &Natural) -> Option<u64> {
    (!d.is_zero()).then(|| d.bits())
}

/// Natural logarithm of a big integer in double precision.
pub fn ln_natural(d: &Natural) -> f64 {
    let bits = d.bits();
    if bits <= 64 {
        return d.to_f64().unwrap_or(0.0).ln();
    }
    let shift = bits - 64;
    let top = (d >> shift).to_f64().unwrap_or(0.0);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Closed-form bounds at one `(k, d)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundFormulas {
    /// `(k / (c (k-1)))^(1/beta) (ln d)^(1/beta)`.
    pub m_lower_leading: f64,
    /// `2^(1/beta)` times the leading lower term.
    pub m_heuristic_upper: f64,
    pub nd_lower1: u64,
    /// `log2 d + A ln ln d`, when a valid `A` was supplied.
    pub nd_lower2: Option<f64>,
}

pub fn bound_formulas(params: &AsymptoticParams, k: u32, d: &Natural, a_const: Option<f64>) -> Result<BoundFormulas> {
    params.validate()?;
    if k < 2 {
        return Err(Error::InvalidArgument(format!("power exponent k must be >= 2, got {k}")));
    }
    if *d < BigUint::from(2u32) {
        return Err(Error::InvalidArgument("bound formulas need d >= 2".into()));
    }
    let ln_d = ln_natural(d);
    let leading = m_lower_constant(params, k) * ln_d.powf(1.0 / params.beta);
    let nd_lower2 = match a_const {
        None => None,
        Some(a) => {
            let limit = (1.0 - params.beta) / (params.beta * std::f64::consts::LN_2);
            if !(a > 0.0 && a < limit) {
                return Err(Error::InvalidArgument(format!(
                    "A must lie in (0, (1-beta)/(beta ln 2)) = (0, {limit}), got {a}"
                )));
            }
            Some(ln_d / std::f64::consts::LN_2 + a * ln_d.ln())
        }
    };
    Ok(BoundFormulas {
        m_lower_leading: leading,
        m_heuristic_upper: 2f64.powf(1.0 / params.beta) * leading,
        nd_lower1: d.bits(),
        nd_lower2,
    })
}

/// `(k / (c (k-1)))^(1/beta)`, the constant in front of `(ln d)^(1/beta)`.
pub fn m_lower_constant(params: &AsymptoticParams, k: u32) -> f64 {
    let kf = f64::from(k);
    (kf / (params.c * (kf - 1.0))).powf(1.0 / params.beta)
}

/// `(k/2) A(n)^((k-1)/k)`, the leading size of half the gap between
/// consecutive `k`-th powers around `f(n)`.
pub fn half_gap_approx(params: &AsymptoticParams, k: u32, n: f64) -> f64 {
    let kf = f64::from(k);
    let ln_a = params.a.ln() - params.b * n.ln() + params.c * n.powf(params.beta);
    ((kf / 2.0).ln() + (kf - 1.0) / kf * ln_a).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgrid::parse_dgrid;
    use crate::Builtin;
    use proptest::prelude::*;

    fn n(x: u64) -> BigUint {
        BigUint::from(x)
    }

    fn p_table(n: usize) -> CoeffTable {
        CoeffTable::build_builtin(&Builtin::P, n).unwrap()
    }

    /// Direct definition, no shared code with the reverse pass.
    fn naive_m(profile: &[Natural], d: &Natural) -> Option<u64> {
        (1..=profile.len()).rev().find(|&n| &profile[n - 1] <= d).map(|n| n as u64)
    }

    #[test]
    fn scan_examples() {
        let t = p_table(10_000);
        let rows = scan_m(&t, 2, &[n(0)], 10_000).unwrap();
        assert_eq!(rows[0].m, Some(1));
        assert_eq!(rows[0].witness_delta, Some(n(0)));
        assert_eq!(scan_m(&t, 2, &[n(0)], 1).unwrap()[0].m, Some(1));
        let grid = parse_dgrid("pow2:0:10").unwrap();
        let rows = scan_m(&t, 3, &grid, 100).unwrap();
        assert!(rows.windows(2).all(|w| w[0].m <= w[1].m));
        assert!(matches!(scan_m(&t, 2, &[n(0)], 10_001), Err(Error::BoundExceedsTable { .. })));
    }

    #[test]
    fn tilde_examples() {
        let t = p_table(200);
        assert_eq!(scan_m_tilde(&t, 2, &[n(1)], 200).unwrap()[0].m, Some(7));
        assert_eq!(scan_m_tilde(&t, 10, &[n(1)], 200).unwrap()[0].m, Some(13));
        // p(4) = 5 is an exact hit
        assert_eq!(scan_m_tilde(&t, 5, &[n(1)], 200).unwrap()[0].m, Some(4));
        let near = scan_m_tilde_near_miss(&t, 5, &[n(0), n(1)], 200).unwrap();
        assert_eq!((near[0].m, near[1].m), (None, Some(2)));
        assert_eq!(near[1].witness_delta, Some(n(1)));
    }

    #[test]
    fn l_examples() {
        let t = p_table(50);
        assert_eq!(l_of(&t, &n(0)).unwrap(), 1);
        assert_eq!(l_of(&t, &n(1)).unwrap(), 2);
        assert_eq!(l_of(&t, &n(4)).unwrap(), 4);
        assert!(matches!(l_of(&t, &n(10_000_000)), Err(Error::TableExhausted { .. })));

        let sc = CoeffTable::build_builtin(&Builtin::SelfConjugate, 60).unwrap();
        assert!(matches!(l_of(&sc, &n(0)), Err(Error::NonMonotoneTable { n: 1 })));
        // sc = 1,1,0,1,1,1,1,1,2,2,2,2,3,... ; f(n) <= 1 last holds at n = 7
        let (l, transformed) = l_of_any(&sc, &n(0)).unwrap();
        assert!(transformed);
        let literal = (1..=60).rev().find(|&m| sc.values()[m] <= n(1)).unwrap() as u64;
        assert_eq!(l, literal);
    }

    #[test]
    fn l_repetition() {
        // #{d : L(d) = n} = f(n+1) - f(n)
        let t = CoeffTable::build_builtin(&Builtin::Overpartition, 12).unwrap();
        let top = u64::try_from(&t.values()[12]).unwrap() - 2;
        let start = u64::try_from(&t.values()[1]).unwrap() - 1;
        let ls: Vec<u64> = (start..=top).map(|d| l_of(&t, &n(d)).unwrap()).collect();
        for m in 1..=10u64 {
            let count = ls.iter().filter(|&&l| l == m).count() as u64;
            let gap = u64::try_from(&t.values()[m as usize + 1] - &t.values()[m as usize]).unwrap();
            assert_eq!(count, gap, "n = {m}");
        }
    }

    #[test]
    fn half_gap_examples() {
        let t = p_table(100);
        assert_eq!(half_gap_lower_scan(&t, 2, &[n(0)], 100).unwrap(), vec![None]);
        assert_eq!(half_gap_lower_scan(&t, 2, &[n(10)], 100).unwrap(), vec![Some(12)]);
        let huge = [n(10).pow(40)];
        assert_eq!(half_gap_lower_scan(&t, 2, &huge, 100).unwrap(), vec![Some(100)]);
        // x = 9 exactly: ((x+1)^2 - x^2)/2 = 9.5, so h = 10.
        assert_eq!(half_gap_ceil(&n(81), 2).unwrap(), n(10));
    }

    #[test]
    fn nd_examples() {
        let t = p_table(10_000);
        let est = estimate_nd(&t, &n(0), 20, 10_000).unwrap();
        assert_eq!((est.k0, est.stable, est.l), (2, true, 1));
        assert_eq!(est.nd_lower1, None);
        let est = estimate_nd(&t, &n(1), 40, 10_000).unwrap();
        assert_eq!(est.nd_lower1, Some(1));
        assert!(est.stable);
        assert!(u64::from(est.k0) >= est.nd_lower1.unwrap());

        let over = CoeffTable::build_builtin(&Builtin::Overpartition, 10_000).unwrap();
        let est = estimate_nd(&over, &n(10), 30, 10_000).unwrap();
        assert!(est.stable);
        assert!(est.k0 > 4);
    }

    #[test]
    fn leading_constants() {
        let p = AsymptoticParams::builtin(&Builtin::P).unwrap();
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((m_lower_constant(&p, 2) - 6.0 / pi2).abs() < 1e-12);
        let over = AsymptoticParams::builtin(&Builtin::Overpartition).unwrap();
        assert!((m_lower_constant(&over, 2) - 4.0 / pi2).abs() < 1e-12);

        let b = bound_formulas(&p, 2, &n(1024), None).unwrap();
        assert_eq!(b.nd_lower1, 11);
        assert!((b.m_heuristic_upper / b.m_lower_leading - 4.0).abs() < 1e-12);
        let b = bound_formulas(&p, 2, &n(1024), Some(0.5)).unwrap();
        assert!((b.nd_lower2.unwrap() - (10.0 + 0.5 * (1024f64).ln().ln())).abs() < 1e-9);
        assert!(bound_formulas(&p, 2, &n(1024), Some(2.0)).is_err());
        assert!(bound_formulas(&p, 2, &n(1), None).is_err());
    }

    #[test]
    fn ln_of_big_values() {
        let d = n(2).pow(400);
        assert!((ln_natural(&d) - 400.0 * std::f64::consts::LN_2).abs() < 1e-9);
        assert!((ln_natural(&n(1000)) - 1000f64.ln()).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn reverse_pass_matches_definition(
            profile in prop::collection::vec(0u64..50, 1..60),
            grid in prop::collection::btree_set(0u64..60, 1..20),
        ) {
            let profile: Vec<Natural> = profile.into_iter().map(n).collect();
            let grid: Vec<Natural> = grid.into_iter().map(n).collect();
            let fast = resolve_grid(&profile, &grid);
            for (d, m) in grid.iter().zip(&fast) {
                prop_assert_eq!(*m, naive_m(&profile, d));
            }
        }

        #[test]
        fn half_gap_is_an_upper_bound(x in 1u64..1_000_000_000, k in 2u32..6) {
            let h = half_gap_ceil(&n(x), k).unwrap();
            // Compare against a float evaluation with generous slack.
            let r = (x as f64).powf(1.0 / f64::from(k));
            let exact = ((r + 1.0).powi(k as i32) - x as f64) / 2.0;
            let h = h.to_f64().unwrap();
            prop_assert!(h >= exact - 1e-6 * exact.max(1.0));
            prop_assert!(h <= exact + 1.0 + 1e-6 * exact);
            // The real distance never exceeds the half gap.
            prop_assert!(delta_k(&n(x), k).unwrap().delta.to_f64().unwrap() <= h);
        }
    }
}
