//! Exact coefficients of `prod_{a>=1} (1 - x^a)^(-e_a)`.
//!
//! A [`ProductSpec`] describes the exponent sequence `e_a` with periodic affine
//! rules plus pointwise overrides. [`CoeffTable::build`] expands the product
//! with the log-derivative recurrence
//!
//! ```text
//! n f(n) = sum_{j=1}^{n} g(j) f(n-j),   g(j) = sum_{a | j} a e_a,
//! ```
//!
//! which works for every spec, and switches to Euler's pentagonal-number
//! recurrence for the plain partition function.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Natural, Result};

/// Adds `u + v*a` to `e_a` for every `a ≡ residue (mod modulus)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentRule {
    #[serde(rename = "mod")]
    pub modulus: u64,
    #[serde(rename = "res")]
    pub residue: u64,
    pub u: i64,
    pub v: i64,
}

impl ExponentRule {
    pub fn new(modulus: u64, residue: u64, u: i64, v: i64) -> Self {
        ExponentRule { modulus, residue, u, v }
    }

    fn contribution(&self, a: u64) -> i64 {
        if a % self.modulus == self.residue {
            self.u + self.v * a as i64
        } else {
            0
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductSpec {
    pub name: String,
    pub rules: Vec<ExponentRule>,
    /// Pointwise deltas added to `e_a`.
    #[serde(default)]
    pub overrides: BTreeMap<u64, i64>,
}

impl ProductSpec {
    pub fn new(name: impl Into<String>, rules: Vec<ExponentRule>) -> Self {
        ProductSpec { name: name.into(), rules, overrides: BTreeMap::new() }
    }

    pub fn with_override(mut self, index: u64, delta: i64) -> Self {
        *self.overrides.entry(index).or_insert(0) += delta;
        self
    }

    /// Effective exponent `e_a` for `a >= 1`.
    pub fn exponent(&self, a: u64) -> i64 {
        let base: i64 = self.rules.iter().map(|r| r.contribution(a)).sum();
        base + self.overrides.get(&a).copied().unwrap_or(0)
    }

    pub fn validate(&self) -> Result<()> {
        for r in &self.rules {
            if r.modulus == 0 {
                return Err(Error::InvalidSpec(format!("rule modulus must be >= 1 in `{}`", self.name)));
            }
            if r.residue >= r.modulus {
                return Err(Error::InvalidSpec(format!(
                    "rule residue {} not below modulus {} in `{}`",
                    r.residue, r.modulus, self.name
                )));
            }
        }
        if self.overrides.contains_key(&0) {
            return Err(Error::InvalidSpec("override index must be >= 1".into()));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ProductSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// True when `e_a = 1` for every `a`, i.e. the ordinary partition function.
    pub fn is_euler_product(&self) -> bool {
        let normalized: Vec<_> = self.rules.iter().filter(|r| r.u != 0 || r.v != 0).collect();
        let overrides_trivial = self.overrides.values().all(|&d| d == 0);
        overrides_trivial
            && normalized.len() == 1
            && normalized[0] == &ExponentRule::new(1, 0, 1, 0)
    }
}

/// The built-in partition functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    P,
    Overpartition,
    Strict,
    SelfConjugate,
    NonUnitary,
    Plane,
    /// `r`-colored partitions; `Colored(2)` is the 2-colored case.
    Colored(u32),
    PartsFromSet(BTreeSet<u64>),
}

impl Builtin {
    /// The functions checked against brute-force enumeration.
    pub const CORE: [Builtin; 7] = [
        Builtin::P,
        Builtin::Overpartition,
        Builtin::Strict,
        Builtin::SelfConjugate,
        Builtin::NonUnitary,
        Builtin::Plane,
        Builtin::Colored(2),
    ];

    pub fn name(&self) -> String {
        match self {
            Builtin::P => "p".into(),
            Builtin::Overpartition => "overpartition".into(),
            Builtin::Strict => "strict".into(),
            Builtin::SelfConjugate => "selfconj".into(),
            Builtin::NonUnitary => "nonunitary".into(),
            Builtin::Plane => "plane".into(),
            Builtin::Colored(2) => "colored2".into(),
            Builtin::Colored(r) => format!("colored:{r}"),
            Builtin::PartsFromSet(set) => {
                let parts: Vec<String> = set.iter().map(|a| a.to_string()).collect();
                format!("parts:{}", parts.join(","))
            }
        }
    }

    pub fn spec(&self) -> Result<ProductSpec> {
        let name = self.name();
        let spec = match self {
            Builtin::P => ProductSpec::new(name, vec![ExponentRule::new(1, 0, 1, 0)]),
            // (1 + x^a)/(1 - x^a) = (1 - x^{2a}) / (1 - x^a)^2
            Builtin::Overpartition => ProductSpec::new(
                name,
                vec![ExponentRule::new(1, 0, 2, 0), ExponentRule::new(2, 0, -1, 0)],
            ),
            Builtin::Strict => ProductSpec::new(name, vec![ExponentRule::new(2, 1, 1, 0)]),
            // prod_{a odd} (1 + x^a) = prod_{a odd} (1 - x^{2a}) / (1 - x^a)
            Builtin::SelfConjugate => ProductSpec::new(
                name,
                vec![ExponentRule::new(2, 1, 1, 0), ExponentRule::new(4, 2, -1, 0)],
            ),
            Builtin::NonUnitary => {
                ProductSpec::new(name, vec![ExponentRule::new(1, 0, 1, 0)]).with_override(1, -1)
            }
            Builtin::Plane => ProductSpec::new(name, vec![ExponentRule::new(1, 0, 0, 1)]),
            Builtin::Colored(r) => {
                if *r == 0 {
                    return Err(Error::InvalidArgument("number of colors must be >= 1".into()));
                }
                ProductSpec::new(name, vec![ExponentRule::new(1, 0, i64::from(*r), 0)])
            }
            Builtin::PartsFromSet(set) => {
                if set.is_empty() {
                    return Err(Error::InvalidArgument("part set must be nonempty".into()));
                }
                if set.contains(&0) {
                    return Err(Error::InvalidArgument("parts must be positive".into()));
                }
                let mut spec = ProductSpec::new(name, Vec::new());
                for &a in set {
                    spec = spec.with_override(a, 1);
                }
                spec
            }
        };
        Ok(spec)
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Builtin {
    type Err = Error;

    /// Accepts the canonical names plus the short symbols `q`, `sc`, `r`,
    /// `pl`, `pbar`, `p2`; `colored:R` and `parts:a,b,c` take arguments.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let b = match s {
            "p" => Builtin::P,
            "overpartition" | "pbar" => Builtin::Overpartition,
            "strict" | "q" => Builtin::Strict,
            "selfconj" | "sc" => Builtin::SelfConjugate,
            "nonunitary" | "r" => Builtin::NonUnitary,
            "plane" | "pl" => Builtin::Plane,
            "colored2" | "p2" => Builtin::Colored(2),
            _ => {
                if let Some(rest) = s.strip_prefix("colored:") {
                    let r: i64 = rest
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad color count in `{s}`")))?;
                    if r <= 0 {
                        return Err(Error::InvalidArgument(format!("color count must be >= 1, got {r}")));
                    }
                    Builtin::Colored(r as u32)
                } else if let Some(rest) = s.strip_prefix("parts:") {
                    let mut set = BTreeSet::new();
                    for tok in rest.split(',').filter(|t| !t.trim().is_empty()) {
                        let a: u64 = tok
                            .trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad part `{tok}` in `{s}`")))?;
                        set.insert(a);
                    }
                    let b = Builtin::PartsFromSet(set);
                    b.spec()?;
                    b
                } else {
                    return Err(Error::UnknownFunction(s.to_string()));
                }
            }
        };
        Ok(b)
    }
}

/// Exact table `f(0..=N)` for one spec. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffTable {
    spec: ProductSpec,
    values: Vec<Natural>,
}

impl CoeffTable {
    /// Builds `f(0..=n_max)`, using the pentagonal recurrence when the spec is
    /// the Euler product.
    pub fn build(spec: &ProductSpec, n_max: usize) -> Result<Self> {
        spec.validate()?;
        if spec.is_euler_product() {
            Ok(Self::build_pentagonal(spec.clone(), n_max))
        } else {
            Self::build_generic(spec, n_max)
        }
    }

    pub fn build_builtin(b: &Builtin, n_max: usize) -> Result<Self> {
        Self::build(&b.spec()?, n_max)
    }

    /// Log-derivative recurrence; valid for any spec.
    pub fn build_generic(spec: &ProductSpec, n_max: usize) -> Result<Self> {
        spec.validate()?;
        let g = log_derivative_weights(spec, n_max);

        let mut values: Vec<Natural> = Vec::with_capacity(n_max + 1);
        values.push(BigUint::one());
        let mut pos = BigUint::zero();
        let mut neg = BigUint::zero();
        for n in 1..=n_max {
            pos.set_zero();
            neg.set_zero();
            for j in 1..=n {
                let w = g[j];
                if w == 0 {
                    continue;
                }
                let prev = &values[n - j];
                if prev.is_zero() {
                    continue;
                }
                let mag = w.unsigned_abs();
                let acc = if w > 0 { &mut pos } else { &mut neg };
                match u64::try_from(mag) {
                    Ok(m) => *acc += prev * m,
                    Err(_) => *acc += prev * BigUint::from(mag),
                }
            }
            if pos < neg {
                return Err(Error::NegativeCoefficient { name: spec.name.clone(), n });
            }
            let total = &pos - &neg;
            let (q, r) = total.div_rem(&BigUint::from(n));
            if !r.is_zero() {
                return Err(Error::NonExactDivision { n });
            }
            values.push(q);
        }
        Ok(CoeffTable { spec: spec.clone(), values })
    }

    /// Euler's pentagonal-number recurrence for `p(n)`, `O(N^{3/2})` additions.
    /// The caller is responsible for `spec` actually being the Euler product.
    pub fn build_pentagonal(spec: ProductSpec, n_max: usize) -> Self {
        let mut values: Vec<Natural> = Vec::with_capacity(n_max + 1);
        values.push(BigUint::one());
        let mut pos = BigUint::zero();
        let mut neg = BigUint::zero();
        for n in 1..=n_max {
            pos.set_zero();
            neg.set_zero();
            let mut k = 1usize;
            loop {
                let g1 = k * (3 * k - 1) / 2;
                if g1 > n {
                    break;
                }
                let acc = if k % 2 == 1 { &mut pos } else { &mut neg };
                *acc += &values[n - g1];
                let g2 = k * (3 * k + 1) / 2;
                if g2 <= n {
                    *acc += &values[n - g2];
                }
                k += 1;
            }
            // The alternating sum is p(n) >= 0, so this never underflows.
            values.push(&pos - &neg);
        }
        CoeffTable { spec, values }
    }

    /// Wraps externally supplied values (e.g. a re-ingested CSV).
    pub fn from_values(spec: ProductSpec, values: Vec<Natural>) -> Result<Self> {
        if values.first().is_none_or(|v| !v.is_one()) {
            return Err(Error::InvalidArgument("coefficient tables must start with f(0) = 1".into()));
        }
        Ok(CoeffTable { spec, values })
    }

    pub fn spec(&self) -> &ProductSpec {
        &self.spec
    }

    /// Largest index `N` held by the table.
    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[Natural] {
        &self.values
    }

    pub fn get(&self, n: usize) -> Option<&Natural> {
        self.values.get(n)
    }

    /// Index of the first `n >= 1` with `f(n+1) < f(n)`, if any.
    pub fn first_descent(&self) -> Option<usize> {
        (1..self.n_max()).find(|&n| self.values[n + 1] < self.values[n])
    }

    /// Writes the `n,value` CSV.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "n,value")?;
        for (n, v) in self.values.iter().enumerate() {
            writeln!(w, "{n},{v}")?;
        }
        Ok(())
    }

    /// Reads an `n,value` CSV produced by [`CoeffTable::write_csv`]. Rows must
    /// be contiguous from `n = 0`.
    pub fn read_csv<R: BufRead>(spec: ProductSpec, r: R) -> Result<Self> {
        let mut values = Vec::new();
        for (line_no, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || (line_no == 0 && line.starts_with('n')) {
                continue;
            }
            let (n, v) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("line {}: expected `n,value`", line_no + 1)))?;
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad index `{n}`", line_no + 1)))?;
            if n != values.len() {
                return Err(Error::Parse(format!(
                    "line {}: expected index {}, found {n}",
                    line_no + 1,
                    values.len()
                )));
            }
            let v: BigUint = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad value", line_no + 1)))?;
            values.push(v);
        }
        Self::from_values(spec, values)
    }
}

/// `g(j) = sum_{a | j} a e_a` for `j = 0..=n_max` (index 0 unused).
fn log_derivative_weights(spec: &ProductSpec, n_max: usize) -> Vec<i128> {
    let mut g = vec![0i128; n_max + 1];
    for a in 1..=n_max {
        let e = spec.exponent(a as u64);
        if e == 0 {
            continue;
        }
        let w = a as i128 * i128::from(e);
        for j in (a..=n_max).step_by(a) {
            g[j] += w;
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(b: Builtin, n: usize) -> Vec<u64> {
        CoeffTable::build_builtin(&b, n)
            .unwrap()
            .values()
            .iter()
            .map(|v| u64::try_from(v).unwrap())
            .collect()
    }

    #[test]
    fn builtin_exponents() {
        let p = Builtin::P.spec().unwrap();
        assert_eq!(p.rules, vec![ExponentRule::new(1, 0, 1, 0)]);
        let plane = Builtin::Plane.spec().unwrap();
        assert_eq!(plane.rules, vec![ExponentRule::new(1, 0, 0, 1)]);
        assert_eq!((1..=5).map(|a| plane.exponent(a)).collect::<Vec<_>>(), vec![1, 2, 3, 4, 5]);

        let sc = Builtin::SelfConjugate.spec().unwrap();
        let e: Vec<i64> = (1..=6).map(|a| sc.exponent(a)).collect();
        assert_eq!(e, vec![1, -1, 1, 0, 1, -1]);

        let over = Builtin::Overpartition.spec().unwrap();
        assert_eq!((1..=4).map(|a| over.exponent(a)).collect::<Vec<_>>(), vec![2, 1, 2, 1]);

        let nonunit = Builtin::NonUnitary.spec().unwrap();
        assert_eq!(nonunit.exponent(1), 0);
        assert_eq!(nonunit.exponent(2), 1);

        let parts = Builtin::PartsFromSet([2, 5].into_iter().collect()).spec().unwrap();
        assert!(parts.rules.is_empty());
        assert_eq!((1..=6).map(|a| parts.exponent(a)).collect::<Vec<_>>(), vec![0, 1, 0, 0, 1, 0]);
    }

    #[test]
    fn builtin_errors() {
        assert!(matches!("nope".parse::<Builtin>(), Err(Error::UnknownFunction(_))));
        assert!("colored:0".parse::<Builtin>().is_err());
        assert!("colored:-3".parse::<Builtin>().is_err());
        assert!("parts:".parse::<Builtin>().is_err());
        assert!(Builtin::Colored(0).spec().is_err());
        assert!(Builtin::PartsFromSet(BTreeSet::new()).spec().is_err());
        assert_eq!("colored:3".parse::<Builtin>().unwrap(), Builtin::Colored(3));
        assert_eq!("sc".parse::<Builtin>().unwrap(), Builtin::SelfConjugate);
    }

    #[test]
    fn known_values() {
        let p = table(Builtin::P, 50);
        assert_eq!(p[10], 42);
        assert_eq!(p[50], 204226);
        assert_eq!(table(Builtin::Plane, 4), vec![1, 1, 3, 6, 13]);
        assert_eq!(table(Builtin::Overpartition, 4)[4], 14);
        assert_eq!(table(Builtin::P, 0), vec![1]);
        assert_eq!(table(Builtin::Strict, 10)[10], 10);
        assert_eq!(table(Builtin::SelfConjugate, 8)[8], 2);
        assert_eq!(table(Builtin::NonUnitary, 10)[10], 12);
    }

    #[test]
    fn generic_matches_pentagonal() {
        let spec = Builtin::P.spec().unwrap();
        let fast = CoeffTable::build_pentagonal(spec.clone(), 2000);
        let slow = CoeffTable::build_generic(&spec, 2000).unwrap();
        assert_eq!(fast.values(), slow.values());
    }

    #[test]
    fn euler_product_detection() {
        assert!(Builtin::P.spec().unwrap().is_euler_product());
        assert!(!Builtin::NonUnitary.spec().unwrap().is_euler_product());
        assert!(!Builtin::Colored(2).spec().unwrap().is_euler_product());
    }

    #[test]
    fn negative_spec_is_rejected() {
        // prod (1 - x^a): signed coefficients, not a counting function.
        let spec = ProductSpec::new("euler-phi", vec![ExponentRule::new(1, 0, -1, 0)]);
        let err = CoeffTable::build(&spec, 5).unwrap_err();
        assert!(matches!(err, Error::NegativeCoefficient { n: 1, .. }));
    }

    #[test]
    fn spec_validation() {
        let bad = ProductSpec::new("bad", vec![ExponentRule::new(2, 2, 1, 0)]);
        assert!(bad.validate().is_err());
        let bad = ProductSpec::new("bad", vec![ExponentRule::new(0, 0, 1, 0)]);
        assert!(bad.validate().is_err());
    }

    #[test]
    fn json_format() {
        let text = r#"{"name": "odd", "rules": [{"mod": 2, "res": 1, "u": 1, "v": 0}], "overrides": {"4": 1}}"#;
        let spec = ProductSpec::from_json(text).unwrap();
        assert_eq!(spec.exponent(4), 1);
        assert_eq!(spec.exponent(3), 1);
        assert_eq!(spec.exponent(2), 0);
        let back = ProductSpec::from_json(&spec.to_json().unwrap()).unwrap();
        assert_eq!(back, spec);
        // overrides may be omitted
        let spec = ProductSpec::from_json(r#"{"name": "p", "rules": [{"mod": 1, "res": 0, "u": 1, "v": 0}]}"#).unwrap();
        assert!(spec.is_euler_product());
    }

    #[test]
    fn csv_roundtrip() {
        let t = CoeffTable::build_builtin(&Builtin::Plane, 30).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("n,value\n0,1\n1,1\n2,3\n"));
        let back = CoeffTable::read_csv(t.spec().clone(), buf.as_slice()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn csv_rejects_gaps() {
        let text = "n,value\n0,1\n2,2\n";
        assert!(CoeffTable::read_csv(Builtin::P.spec().unwrap(), text.as_bytes()).is_err());
        let text = "n,value\n0,2\n";
        assert!(CoeffTable::read_csv(Builtin::P.spec().unwrap(), text.as_bytes()).is_err());
    }
}
