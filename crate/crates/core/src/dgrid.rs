//! Parsing of big-integer arguments and distance grids.
//!
//! Accepted forms: decimal (`12345`), powers (`10^200`, `2^450`), comma lists
//! of either, and the ranges `pow2:LO:HI` / `pow10:LO:HI` (inclusive).

use num_bigint::BigUint;

use crate::{Error, Natural, Result};

/// Parses one nonnegative integer: decimal or `a^k`.
pub fn parse_natural(token: &str) -> Result<Natural> {
    let t = token.trim();
    if let Some((base, exp)) = t.split_once('^') {
        let base: BigUint = base
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad base in `{t}`")))?;
        let exp: u32 = exp
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad exponent in `{t}`")))?;
        return Ok(base.pow(exp));
    }
    if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("expected a nonnegative integer, got `{t}`")));
    }
    Ok(t.parse().expect("validated digits"))
}

/// Parses a grid expression into a sorted list of distinct values.
pub fn parse_dgrid(expr: &str) -> Result<Vec<Natural>> {
    let e = expr.trim();
    let mut values = if let Some(rest) = e.strip_prefix("pow2:") {
        power_range(2, rest)?
    } else if let Some(rest) = e.strip_prefix("pow10:") {
        power_range(10, rest)?
    } else {
        e.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(parse_natural)
            .collect::<Result<Vec<_>>>()?
    };
    if values.is_empty() {
        return Err(Error::Parse(format!("empty d grid `{e}`")));
    }
    values.sort();
    values.dedup();
    Ok(values)
}

fn power_range(base: u32, range: &str) -> Result<Vec<Natural>> {
    let (lo, hi) = range
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("expected LO:HI, got `{range}`")))?;
    let parse = |s: &str| -> Result<u32> {
        s.trim().parse().map_err(|_| Error::Parse(format!("bad exponent `{s}` in range")))
    };
    let (lo, hi) = (parse(lo)?, parse(hi)?);
    if lo > hi {
        return Err(Error::Parse(format!("empty exponent range {lo}:{hi}")));
    }
    let b = BigUint::from(base);
    Ok((lo..=hi).map(|k| b.pow(k)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn single_values() {
        assert_eq!(parse_natural("10^0").unwrap(), n(1));
        assert_eq!(parse_natural("2^10").unwrap(), n(1024));
        assert_eq!(parse_natural(" 42 ").unwrap(), n(42));
        assert_eq!(parse_natural("10^200").unwrap().to_string().len(), 201);
        for bad in ["", "-1", "1.5", "x^2", "2^x", "1e5"] {
            assert!(parse_natural(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn grids() {
        assert_eq!(parse_dgrid("pow2:0:3").unwrap(), vec![n(1), n(2), n(4), n(8)]);
        assert_eq!(parse_dgrid("pow10:1:2").unwrap(), vec![n(10), n(100)]);
        assert_eq!(parse_dgrid("100,2^3,10^1,8").unwrap(), vec![n(8), n(10), n(100)]);
        assert_eq!(parse_dgrid("pow2:0:450").unwrap().len(), 451);
        assert!(parse_dgrid("pow2:3:1").is_err());
        assert!(parse_dgrid("pow3:1:2").is_err());
        assert!(parse_dgrid(",").is_err());
    }
}
