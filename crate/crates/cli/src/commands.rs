use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use num_traits::ToPrimitive;
use ppl_core::dgrid::{parse_dgrid, parse_natural};
use ppl_core::equidist::{decade_grid, frac_samples, histogram, ks_series};
use ppl_core::model::{
    expectation, interval_s, lemma_bounds, prob_delta, prob_delta_any, simulate, ConstantFamily, IntervalFamily,
    PowerMode, Support,
};
use ppl_core::power::{delta_k, delta_tilde};
use ppl_core::scan::{
    bound_formulas, estimate_nd, half_gap_approx, half_gap_lower_scan, scan_m, scan_m_tilde, scan_m_tilde_near_miss,
};
use ppl_core::{AsymptoticParams, BigRational, Builtin, CoeffTable, Natural, ProductSpec};
use serde_json::json;

use crate::args::{Command, EquidistReport, ModelSource, Source, SupportArg};
use crate::output::{Cell, Output, Table};
use crate::CliError;

pub fn run(command: Command) -> Result<Output, CliError> {
    match command {
        Command::Gen { source, n_max } => gen(&source, n_max),
        Command::Delta { source, k, n, n_range, max_digits } => {
            let (lo, hi) = index_range(n, n_range.as_deref())?;
            let table = load(&source, hi as usize)?;
            let mut t = Table::new(&["n", "k", "value_digits", "delta", "side"]);
            for i in lo..=hi {
                let v = value_at(&table, i)?;
                let pd = delta_k(v, k)?;
                t.push(vec![
                    Cell::Int(i),
                    Cell::Int(u64::from(k)),
                    Cell::Big(elide(v, max_digits)),
                    Cell::Big(pd.delta.to_string()),
                    Cell::Text(pd.side.as_str().into()),
                ]);
            }
            Ok(t.into())
        }
        Command::DeltaTilde { source, base, n, n_range, max_digits } => {
            let (lo, hi) = index_range(n, n_range.as_deref())?;
            let table = load(&source, hi as usize)?;
            let mut t = Table::new(&["n", "a", "value_digits", "delta", "exponent"]);
            for i in lo..=hi {
                let v = value_at(&table, i)?;
                let td = delta_tilde(v, base)?;
                t.push(vec![
                    Cell::Int(i),
                    Cell::Int(base),
                    Cell::Big(elide(v, max_digits)),
                    Cell::Big(td.delta.to_string()),
                    Cell::Int(u64::from(td.exponent)),
                ]);
            }
            Ok(t.into())
        }
        Command::ScanM { source, k, d, bound } => {
            let ks = parse_list(&k, "k")?;
            let grid = parse_dgrid(&d)?;
            let table = load(&source, bound as usize)?;
            let params = source_params(&source);
            let mut t = Table::new(&["k", "d", "M", "lower_halfgap", "asymptotic_leading"]);
            let mut rows_json = Vec::new();
            for k in ks {
                let k = to_u32(k, "k")?;
                let rows = scan_m(&table, k, &grid, bound)?;
                let half = half_gap_lower_scan(&table, k, &grid, bound)?;
                for (row, h) in rows.iter().zip(half) {
                    let leading = params
                        .as_ref()
                        .and_then(|p| bound_formulas(p, k, &row.d, None).ok())
                        .map_or(Cell::Empty, |b| Cell::Float(b.m_lower_leading));
                    rows_json.push(json!({
                        "k": k,
                        "d": row.d.to_string(),
                        "M": row.m,
                        "bound": row.bound,
                        "witness_delta": row.witness_delta.as_ref().map(|w| w.to_string()),
                        "conjectural": row.conjectural,
                        "lower_halfgap": h,
                        "asymptotic_leading": match &leading { Cell::Float(x) => json!(x), _ => json!(null) },
                    }));
                    t.push(vec![
                        Cell::Int(u64::from(k)),
                        Cell::Big(row.d.to_string()),
                        Cell::opt_int(row.m),
                        Cell::opt_int(h),
                        leading,
                    ]);
                }
            }
            Ok(Output { table: t, json: Some(json!(rows_json)) })
        }
        Command::ScanMtilde { source, base, d, bound, exclude_exact } => {
            let bases = parse_list(&base, "base")?;
            let grid = parse_dgrid(&d)?;
            let table = load(&source, bound as usize)?;
            let mut t = Table::new(&["a", "d", "M"]);
            let mut rows_json = Vec::new();
            for a in bases {
                let rows = if exclude_exact {
                    scan_m_tilde_near_miss(&table, a, &grid, bound)?
                } else {
                    scan_m_tilde(&table, a, &grid, bound)?
                };
                for row in rows {
                    t.push(vec![Cell::Int(a), Cell::Big(row.d.to_string()), Cell::opt_int(row.m)]);
                    rows_json.push(json!({
                        "a": a,
                        "d": row.d.to_string(),
                        "M": row.m,
                        "bound": row.bound,
                        "witness_delta": row.witness_delta.as_ref().map(|w| w.to_string()),
                        "conjectural": row.conjectural,
                    }));
                }
            }
            Ok(Output { table: t, json: Some(json!(rows_json)) })
        }
        Command::ScanNd { source, d, k_max, bound } => {
            let grid = parse_dgrid(&d)?;
            let table = load(&source, bound as usize)?;
            let mut t = Table::new(&["d", "k0", "stable", "L", "nd_lower1", "k_max", "bound"]);
            for d in &grid {
                let e = estimate_nd(&table, d, k_max, bound)?;
                t.push(vec![
                    Cell::Big(d.to_string()),
                    Cell::Int(u64::from(e.k0)),
                    Cell::Bool(e.stable),
                    Cell::Int(e.l),
                    Cell::opt_int(e.nd_lower1),
                    Cell::Int(u64::from(k_max)),
                    Cell::Int(bound),
                ]);
            }
            Ok(t.into())
        }
        Command::Bounds { model, k, d, a_const, n } => {
            let params = model_params(&model)?;
            let ks = parse_list(&k, "k")?;
            let grid = parse_dgrid(&d)?;
            let mut t = Table::new(&[
                "k",
                "d",
                "m_lower_leading",
                "m_heuristic_upper",
                "nd_lower1",
                "nd_lower2",
                "half_gap_approx",
            ]);
            for k in ks {
                let k = to_u32(k, "k")?;
                for d in &grid {
                    let b = bound_formulas(&params, k, d, a_const)?;
                    t.push(vec![
                        Cell::Int(u64::from(k)),
                        Cell::Big(d.to_string()),
                        Cell::Float(b.m_lower_leading),
                        Cell::Float(b.m_heuristic_upper),
                        Cell::Int(b.nd_lower1),
                        b.nd_lower2.map_or(Cell::Empty, Cell::Float),
                        n.map_or(Cell::Empty, |n| Cell::Float(half_gap_approx(&params, k, n))),
                    ]);
                }
            }
            Ok(t.into())
        }
        Command::Equidist { source, k, n_max, bins, report } => {
            let ks: Vec<u32> = parse_list(&k, "k")?.into_iter().map(|k| to_u32(k, "k")).collect::<Result<_, _>>()?;
            let table = load(&source, n_max as usize)?;
            if report != EquidistReport::Ks && ks.len() != 1 {
                return Err(CliError::Usage("--report samples/histogram take a single --k".into()));
            }
            if bins == 0 {
                return Err(CliError::Usage("--bins must be >= 1".into()));
            }
            match report {
                EquidistReport::Samples => {
                    let mut t = Table::new(&["n", "frac"]);
                    for s in frac_samples(&table, ks[0], n_max)? {
                        t.push(vec![Cell::Int(s.n), Cell::Text(s.frac_decimal())]);
                    }
                    Ok(t.into())
                }
                EquidistReport::Histogram => {
                    let samples = frac_samples(&table, ks[0], n_max)?;
                    let mut t = Table::new(&["bin_lo", "bin_hi", "count"]);
                    for (i, c) in histogram(&samples, bins).into_iter().enumerate() {
                        t.push(vec![
                            Cell::Float(i as f64 / bins as f64),
                            Cell::Float((i + 1) as f64 / bins as f64),
                            Cell::Int(c),
                        ]);
                    }
                    Ok(t.into())
                }
                EquidistReport::Ks => {
                    let grid = decade_grid(n_max);
                    let mut t = Table::new(&["N", "k", "D"]);
                    for k in ks {
                        for (n, d) in ks_series(&table, k, &grid)? {
                            t.push(vec![Cell::Int(n), Cell::Int(u64::from(k)), Cell::Float(d)]);
                        }
                    }
                    Ok(t.into())
                }
            }
        }
        Command::ModelExpect { function, params, eps_const, tol, support } => {
            let support = match support {
                SupportArg::Unclamped => Support::Unclamped,
                SupportArg::Clamped => Support::Clamped,
            };
            let sets: Vec<(String, AsymptoticParams)> = match params {
                Some(p) => vec![("custom".into(), with_eps(parse_params(&p)?, eps_const)?)],
                None => function
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|f| {
                        let b: Builtin = f.parse()?;
                        Ok((b.name(), with_eps(AsymptoticParams::builtin(&b)?, eps_const)?))
                    })
                    .collect::<Result<_, CliError>>()?,
            };
            let mut t = Table::new(&["name", "E", "tail_bound", "n_max"]);
            for (name, p) in sets {
                let e = expectation(&p, tol, support)?;
                t.push(vec![Cell::Text(name), Cell::Float(e.value), Cell::Float(e.tail_bound), Cell::Int(e.n_max)]);
            }
            Ok(t.into())
        }
        Command::ModelProb { model, n_range, k, any, d } => {
            let params = model_params(&model)?;
            let (lo, hi) = parse_range(&n_range)?;
            let d_val = parse_natural(&d)?;
            let d_small = d_val
                .to_u64()
                .filter(|&d| d <= u64::MAX / 16)
                .ok_or_else(|| CliError::Usage(format!("--d too large for the bound formulas: {d}")))?;
            let mode = match k {
                Some(k) => PowerMode::Kth(k),
                None => PowerMode::AnyPerfect,
            };
            debug_assert!(any || k.is_some());
            let mut t = Table::new(&["n", "exactP", "lower", "upper", "applicable"]);
            for n in lo..=hi {
                let iv = interval_s(&params, n)?;
                let p = match mode {
                    PowerMode::Kth(k) => prob_delta(&iv, k, &d_val)?,
                    PowerMode::AnyPerfect => prob_delta_any(&iv, &d_val)?,
                };
                let b = lemma_bounds(&params, n, mode, d_small)?;
                t.push(vec![
                    Cell::Int(n),
                    Cell::Text(p.to_string()),
                    Cell::Float(rational_f64(&b.lower)),
                    Cell::Float(rational_f64(&b.upper)),
                    Cell::Bool(b.applicable),
                ]);
            }
            Ok(t.into())
        }
        Command::ModelSimulate { model, synthetic, n_range, k, d, trials, seed } => {
            let (lo, hi) = parse_range(&n_range)?;
            let d = parse_natural(&d)?;
            match synthetic {
                Some(s) => {
                    let (center, eps) = s
                        .split_once(':')
                        .and_then(|(c, e)| Some((c.trim().parse().ok()?, e.trim().parse().ok()?)))
                        .ok_or_else(|| CliError::Usage(format!("--synthetic expects CENTER:EPS, got `{s}`")))?;
                    simulate_output(&ConstantFamily { center, eps }, lo, hi, k, &d, trials, seed)
                }
                None => simulate_output(&model_params(&model)?, lo, hi, k, &d, trials, seed),
            }
        }
    }
}

fn simulate_output<F: IntervalFamily>(
    family: &F,
    lo: u64,
    hi: u64,
    k: u32,
    d: &Natural,
    trials: u64,
    seed: u64,
) -> Result<Output, CliError> {
    let report = simulate(family, lo, hi, k, d, trials, seed)?;
    let mut t = Table::new(&["n", "trials", "hits", "freq", "exactP"]);
    let mut exact = Vec::new();
    for &(n, hits) in &report.hits {
        let p = prob_delta(&family.interval(n)?, k, d)?;
        t.push(vec![
            Cell::Int(n),
            Cell::Int(trials),
            Cell::Int(hits),
            Cell::Float(hits as f64 / trials as f64),
            Cell::Text(p.to_string()),
        ]);
        exact.push(json!({ "n": n, "exactP": p.to_string() }));
    }
    let json = json!({ "report": report, "exact": exact });
    Ok(Output { table: t, json: Some(json) })
}

fn gen(source: &Source, n_max: usize) -> Result<Output, CliError> {
    let table = load(source, n_max)?;
    let mut t = Table::new(&["n", "value"]);
    for (n, v) in table.values().iter().take(n_max + 1).enumerate() {
        t.push(vec![Cell::Int(n as u64), Cell::Big(v.to_string())]);
    }
    Ok(t.into())
}

fn value_at(table: &CoeffTable, n: u64) -> Result<&Natural, CliError> {
    table
        .get(n as usize)
        .ok_or_else(|| CliError::Core(ppl_core::Error::BoundExceedsTable { bound: n, len: table.n_max() as u64 }))
}

fn elide(v: &Natural, max_digits: Option<usize>) -> String {
    let s = v.to_string();
    match max_digits {
        Some(m) if s.len() > m => format!("[{} digits]", s.len()),
        _ => s,
    }
}

fn spec_of(source: &Source) -> Result<Option<ProductSpec>, CliError> {
    if let Some(f) = &source.function {
        return Ok(Some(f.parse::<Builtin>()?.spec()?));
    }
    if let Some(path) = &source.spec_file {
        let text = std::fs::read_to_string(path)?;
        return Ok(Some(ProductSpec::from_json(&text)?));
    }
    Ok(None)
}

/// The table `f(0..=n_max)`: read from `--values-file` or computed.
fn load(source: &Source, n_max: usize) -> Result<CoeffTable, CliError> {
    let spec = spec_of(source)?;
    if let Some(path) = &source.values_file {
        let spec = spec.unwrap_or_else(|| ProductSpec::new(file_stem(path), Vec::new()));
        let table = CoeffTable::read_csv(spec, BufReader::new(File::open(path)?))?;
        if table.n_max() < n_max {
            return Err(CliError::Core(ppl_core::Error::BoundExceedsTable {
                bound: n_max as u64,
                len: table.n_max() as u64,
            }));
        }
        return Ok(table);
    }
    let spec = spec.ok_or_else(|| CliError::Usage("one of --function, --spec-file, --values-file is required".into()))?;
    Ok(CoeffTable::build(&spec, n_max)?)
}

fn file_stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| "values".into(), |s| s.to_string_lossy().into_owned())
}

/// Asymptotic parameters for `--function`, when known (used for optional columns).
fn source_params(source: &Source) -> Option<AsymptoticParams> {
    let b: Builtin = source.function.as_ref()?.parse().ok()?;
    AsymptoticParams::builtin(&b).ok()
}

fn model_params(m: &ModelSource) -> Result<AsymptoticParams, CliError> {
    let params = match (&m.function, &m.params) {
        (Some(f), _) => AsymptoticParams::builtin(&f.parse()?)?,
        (None, Some(p)) => parse_params(p)?,
        (None, None) => return Err(CliError::Usage("one of --function or --params is required".into())),
    };
    with_eps(params, m.eps_const)
}

fn with_eps(p: AsymptoticParams, eps_const: Option<f64>) -> Result<AsymptoticParams, CliError> {
    Ok(match eps_const {
        Some(e) => p.with_eps_const(e)?,
        None => p,
    })
}

fn parse_params(s: &str) -> Result<AsymptoticParams, CliError> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("--params expects a,b,c,beta,eps_const, got `{s}`")))?;
    match v[..] {
        [a, b, c, beta, eps] => Ok(AsymptoticParams::new(a, b, c, beta, eps)?),
        _ => Err(CliError::Usage(format!("--params expects five numbers, got {}", v.len()))),
    }
}

fn rational_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `LO:HI` (inclusive) or a single index.
fn parse_range(s: &str) -> Result<(u64, u64), CliError> {
    let bad = || CliError::Usage(format!("expected LO:HI, got `{s}`"));
    let (lo, hi) = match s.split_once(':') {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(CliError::Usage(format!("empty range `{s}`")));
    }
    Ok((lo, hi))
}

fn index_range(n: Option<u64>, range: Option<&str>) -> Result<(u64, u64), CliError> {
    match (n, range) {
        (Some(n), _) => Ok((n, n)),
        (None, Some(r)) => parse_range(r),
        (None, None) => Err(CliError::Usage("one of --n or --n-range is required".into())),
    }
}

/// `2`, `2,3,5` or `2:6`.
fn parse_list(s: &str, what: &str) -> Result<Vec<u64>, CliError> {
    let bad = || CliError::Usage(format!("bad --{what} list `{s}`"));
    if let Some((lo, hi)) = s.split_once(':') {
        let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    let v: Vec<u64> = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    if v.is_empty() {
        return Err(bad());
    }
    Ok(v)
}

fn to_u32(v: u64, what: &str) -> Result<u32, CliError> {
    u32::try_from(v).map_err(|_| CliError::Usage(format!("--{what} {v} out of range")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_ranges() {
        assert_eq!(parse_list("2:5", "k").unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(parse_list("2,7", "k").unwrap(), vec![2, 7]);
        assert!(parse_list("x", "k").is_err());
        assert!(parse_list("5:2", "k").is_err());
        assert_eq!(parse_range("3:9").unwrap(), (3, 9));
        assert_eq!(parse_range("4").unwrap(), (4, 4));
        assert!(parse_range("9:3").is_err());
    }

    #[test]
    fn params_parsing() {
        let p = parse_params("1,1,1,0.5,0.1").unwrap();
        assert_eq!(p.beta, 0.5);
        assert!(parse_params("1,1,1").is_err());
        assert!(parse_params("1,1,1,2,0.1").is_err());
    }

    #[test]
    fn elision() {
        let v: Natural = "123456".parse().unwrap();
        assert_eq!(elide(&v, Some(3)), "[6 digits]");
        assert_eq!(elide(&v, Some(6)), "123456");
        assert_eq!(elide(&v, None), "123456");
    }
}
