//! Brute-force enumeration of the combinatorial objects behind each builtin.
//!
//! Deliberately independent of [`crate::series`]: nothing here touches
//! generating functions, so agreement between the two is a real check.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::{Builtin, Error, Natural, Result};

/// Largest `n` accepted by [`brute_force`].
pub const MAX_N: u64 = 40;

/// Counts the objects of size `n` for `b` by direct enumeration.
pub fn brute_force(b: &Builtin, n: u64) -> Result<Natural> {
    if n > MAX_N {
        return Err(Error::OracleTooLarge { n, max: MAX_N });
    }
    let n = n as u32;
    let count = match b {
        Builtin::P => count_partitions(n, |_| true),
        Builtin::Strict => count_partitions(n, |parts| parts.windows(2).all(|w| w[0] != w[1])),
        Builtin::NonUnitary => count_partitions(n, |parts| !parts.contains(&1)),
        Builtin::SelfConjugate => count_partitions(n, |parts| conjugate(parts) == parts),
        Builtin::Overpartition => {
            // The first occurrence of each distinct part may be overlined.
            let mut total = BigUint::zero();
            for_each_partition(n, n, &mut Vec::new(), &mut |parts| {
                let mut distinct = parts.to_vec();
                distinct.dedup();
                total += BigUint::from(1u32) << distinct.len();
            });
            return Ok(total);
        }
        Builtin::Plane => return Ok(BigUint::from(count_plane(n))),
        Builtin::Colored(r) => {
            if *r == 0 {
                return Err(Error::InvalidArgument("number of colors must be >= 1".into()));
            }
            // r-tuples of ordinary partitions with sizes summing to n.
            let p: Vec<BigUint> = (0..=n).map(|j| BigUint::from(count_partitions(j, |_| true))).collect();
            let mut conv = vec![BigUint::zero(); n as usize + 1];
            conv[0] = BigUint::from(1u32);
            for _ in 0..*r {
                let mut next = vec![BigUint::zero(); n as usize + 1];
                for (i, c) in conv.iter().enumerate() {
                    for (j, pj) in p.iter().enumerate().take(n as usize + 1 - i) {
                        next[i + j] += c * pj;
                    }
                }
                conv = next;
            }
            return Ok(conv.swap_remove(n as usize));
        }
        Builtin::PartsFromSet(set) => {
            count_partitions(n, |parts| parts.iter().all(|&a| set.contains(&u64::from(a))))
        }
    };
    Ok(BigUint::from(count))
}

fn count_partitions(n: u32, mut keep: impl FnMut(&[u32]) -> bool) -> u64 {
    let mut count = 0u64;
    for_each_partition(n, n, &mut Vec::new(), &mut |parts| {
        if keep(parts) {
            count += 1;
        }
    });
    count
}

/// Visits every partition of `n` into parts `<= max_part`, parts nonincreasing.
fn for_each_partition(n: u32, max_part: u32, stack: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
    if n == 0 {
        visit(stack);
        return;
    }
    for part in (1..=max_part.min(n)).rev() {
        stack.push(part);
        for_each_partition(n - part, part, stack, visit);
        stack.pop();
    }
}

fn conjugate(parts: &[u32]) -> Vec<u32> {
    let width = parts.first().copied().unwrap_or(0);
    (1..=width).map(|i| parts.iter().filter(|&&p| p >= i).count() as u32).collect()
}

/// Plane partitions of `n`: stacks of rows, each a partition dominated
/// entrywise by the row above.
fn count_plane(n: u32) -> u64 {
    fn rows_below(remaining: u32, above: &[u32], memo: &mut HashMap<(u32, Vec<u32>), u64>) -> u64 {
        if remaining == 0 {
            return 1;
        }
        if let Some(&c) = memo.get(&(remaining, above.to_vec())) {
            return c;
        }
        let mut total = 0u64;
        let mut row = Vec::new();
        dominated_rows(remaining, above, &mut row, &mut |row| {
            let used: u32 = row.iter().sum();
            total += rows_below(remaining - used, row, memo);
        });
        memo.insert((remaining, above.to_vec()), total);
        total
    }

    // Nonempty rows `row` with row[i] <= above[i], nonincreasing, sum <= budget.
    fn dominated_rows(budget: u32, above: &[u32], row: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
        if !row.is_empty() {
            visit(row);
        }
        let i = row.len();
        if i == above.len() {
            return;
        }
        let cap = above[i].min(row.last().copied().unwrap_or(u32::MAX)).min(budget);
        for v in 1..=cap {
            row.push(v);
            dominated_rows(budget - v, above, row, visit);
            row.pop();
        }
    }

    if n == 0 {
        return 1;
    }
    let top = vec![n; n as usize];
    rows_below(n, &top, &mut HashMap::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bf(b: Builtin, n: u64) -> u64 {
        u64::try_from(brute_force(&b, n).unwrap()).unwrap()
    }

    #[test]
    fn spec_examples() {
        assert_eq!(bf(Builtin::Strict, 10), 10);
        assert_eq!(bf(Builtin::SelfConjugate, 8), 2);
        assert_eq!(bf(Builtin::NonUnitary, 10), 12);
        assert_eq!(bf(Builtin::Overpartition, 4), 14);
        assert_eq!((0..=4).map(|n| bf(Builtin::Plane, n)).collect::<Vec<_>>(), vec![1, 1, 3, 6, 13]);
        assert_eq!(bf(Builtin::P, 10), 42);
    }

    #[test]
    fn small_known_sequences() {
        // Plane partitions and 2-colored partitions, first terms from the literature.
        let pl: Vec<u64> = (0..=10).map(|n| bf(Builtin::Plane, n)).collect();
        assert_eq!(pl, vec![1, 1, 3, 6, 13, 24, 48, 86, 160, 282, 500]);
        let p2: Vec<u64> = (0..=6).map(|n| bf(Builtin::Colored(2), n)).collect();
        assert_eq!(p2, vec![1, 2, 5, 10, 20, 36, 65]);
        let parts: Builtin = "parts:1,2".parse().unwrap();
        assert_eq!(bf(parts, 7), 4);
    }

    #[test]
    fn size_limit() {
        assert!(matches!(brute_force(&Builtin::P, 41), Err(Error::OracleTooLarge { n: 41, max: 40 })));
    }

    #[test]
    fn conjugate_is_involution() {
        let mut checked = 0;
        for_each_partition(12, 12, &mut Vec::new(), &mut |parts| {
            assert_eq!(conjugate(&conjugate(parts)), parts);
            checked += 1;
        });
        assert_eq!(checked, 77);
    }
}
