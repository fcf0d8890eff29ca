//! Command implementations behind the `cantrees` binary. Every command returns
//! its output as a string so that it can be tested without a process.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use cantrees::asymptotics::{self, ConstantsOptions, ConstantsReport, TableCheck};
use cantrees::bigdp::{self, DpError, Stat};
use cantrees::locallimit::{self, Mode, ScanReport};
use cantrees::model::{Arity, ModelError};
use cantrees::{series, width, Interval};

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments; exit code 2.
    #[error("{0}")]
    Usage(String),
    /// A check ran and failed; exit code 1.
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Dp(#[from] DpError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Dp(_) | CliError::Model(_) => 2,
            _ => 1,
        }
    }
}

fn other(e: impl std::fmt::Display) -> CliError {
    CliError::Other(e.to_string())
}

/// Parses `"3"`, `"2..10"` or `"2..=10"` (both inclusive).
pub fn parse_t_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let parse = |x: &str| x.trim().parse::<u32>().map_err(|e| format!("bad arity {x:?}: {e}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let a = parse(s)?;
            (a, a)
        }
    };
    if a < 2 || b < a {
        return Err(format!("arity range {s:?} must satisfy 2 <= lo <= hi"));
    }
    Ok(a..=b)
}

pub fn arity(t: u32) -> Result<Arity, CliError> {
    Arity::new(t).map_err(|e| CliError::Usage(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Table,
}

fn json<T: Serialize>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(other)?;
    s.push('\n');
    Ok(s)
}

pub fn cmd_count(t: u32, n: usize) -> Result<String, CliError> {
    Ok(format!("{}\n", bigdp::count(arity(t)?, n)?))
}

pub fn cmd_dist(t: u32, n: usize, stat: Stat, format: Format, digits: usize) -> Result<String, CliError> {
    let d = bigdp::dist(arity(t)?, n, stat)?;
    match format {
        Format::Csv => Ok(d.to_csv(digits)),
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                value: u64,
                count: String,
                probability: String,
            }
            let rows: Vec<Row> = d
                .entries
                .iter()
                .map(|(v, c)| Row {
                    value: *v,
                    count: c.to_string(),
                    probability: bigdp::decimal_string(c, &d.total, digits),
                })
                .collect();
            json(&rows)
        }
        Format::Table => {
            let mut out = String::new();
            for (v, c) in &d.entries {
                let _ = writeln!(out, "{v:>8}  {c:>30}  {}", bigdp::decimal_string(c, &d.total, digits));
            }
            Ok(out)
        }
    }
}

pub fn cmd_moments(t: u32, n: usize, stat: Stat, format: Format) -> Result<String, CliError> {
    let m = bigdp::moments(arity(t)?, n, stat)?;
    match format {
        Format::Json => json(&m),
        _ => Ok(format!(
            "mean,{}\nvariance,{}\nmean_decimal,{}\nvariance_decimal,{}\n",
            m.mean,
            m.variance,
            bigdp::decimal_string_rational(&m.mean, 12),
            bigdp::decimal_string_rational(&m.variance, 12)
        )),
    }
}

pub fn cmd_sample(t: u32, n: usize, seed: u64) -> Result<String, CliError> {
    let p = bigdp::sample_uniform(arity(t)?, n, seed)?;
    Ok(format!("{}\n", serde_json::to_string(p.levels()).map_err(other)?))
}

pub fn cmd_series(t: u32, order: usize, which: &str) -> Result<String, CliError> {
    let a = arity(t)?;
    let s = match which {
        "a" => series::series_a(a, order),
        "b" => series::series_b(a, order),
        "h" | "H" => series::series_h(a, order),
        _ => return Err(CliError::Usage(format!("unknown series {which:?} (expected a, b or h)"))),
    };
    Ok(s.to_csv())
}

/// Options of the `constants` command.
#[derive(Debug, Clone, Copy)]
pub struct ConstantsArgs {
    pub j: Option<u32>,
    pub j_sigma: Option<u32>,
    pub p_count: usize,
    pub check_tables: bool,
    pub json: bool,
}

#[derive(Serialize)]
struct ConstantsOut<'a> {
    reports: &'a [ConstantsReport],
    #[serde(skip_serializing_if = "Option::is_none")]
    checks: Option<&'a [TableCheck]>,
}

pub fn cmd_constants(ts: RangeInclusive<u32>, args: ConstantsArgs) -> Result<String, CliError> {
    let opts = ConstantsOptions { j: args.j, j_sigma: args.j_sigma, p_count: args.p_count, ..Default::default() };
    let mut reports = Vec::new();
    for t in ts {
        let r = asymptotics::constants_report(arity(t)?, &opts).map_err(|e| other(format!("t={t}: {e}")))?;
        reports.push(r);
    }
    let checks: Vec<TableCheck> = if args.check_tables { reports.iter().flat_map(asymptotics::check_tables).collect() } else { Vec::new() };
    let mut out = if args.json {
        json(&ConstantsOut { reports: &reports, checks: args.check_tables.then_some(&checks) })?
    } else {
        asymptotics::format_table(&reports)
    };
    if args.check_tables {
        let failed: Vec<&TableCheck> = checks.iter().filter(|c| !c.passed()).collect();
        if !args.json {
            let _ = writeln!(out, "{} of {} published values enclosed", checks.len() - failed.len(), checks.len());
        }
        if !failed.is_empty() {
            let mut msg = out;
            for c in failed {
                let _ = writeln!(msg, "t={} {}: published {} not within {} (width {:.2e})", c.t, c.name, c.published, c.enclosure, c.enclosure.width());
            }
            return Err(CliError::Verification(msg));
        }
    }
    Ok(out)
}

fn normal_density(x: f64, mean: f64, var: f64) -> f64 {
    (-(x - mean).powi(2) / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt()
}

/// One row of the comparison between the exact law and its limit.
#[derive(Debug, Clone)]
pub struct CompareRow {
    pub value: u64,
    pub exact_probability: BigRational,
    pub asymptotic: f64,
}

/// Exact distribution next to the limiting curve: a normal density with
/// main-term mean and variance, or `p_m` for the last-level leaves.
pub fn compare_rows(t: u32, n: usize, stat: Stat) -> Result<Vec<CompareRow>, CliError> {
    let a = arity(t)?;
    let d = bigdp::dist(a, n, stat)?;
    let opts = ConstantsOptions { p_count: 0, ..Default::default() };
    let report = asymptotics::constants_report(a, &opts).map_err(other)?;
    let nf = n as f64;
    let curve: Box<dyn Fn(u64) -> f64> = match stat {
        Stat::Height => {
            let (m, v) = (report.mu_h.mid() * nf, report.sigma2_h.mid() * nf);
            Box::new(move |x| normal_density(x as f64, m, v))
        }
        Stat::DistinctDepths => {
            let (m, v) = (report.mu_d.mid() * nf, report.sigma2_d.mid() * nf);
            Box::new(move |x| normal_density(x as f64, m, v))
        }
        Stat::TotalPathLength => {
            // path lengths are even, so the lattice step is 2
            let (m, v) = (report.mu_tpl.mid() * nf * nf, report.sigma2_tpl.mid() * nf * nf * nf);
            Box::new(move |x| 2.0 * normal_density(x as f64, m, v))
        }
        Stat::LastLevelLeaves => {
            let top = d.entries.keys().max().copied().unwrap_or(0) as usize / t as usize + 1;
            let p = series::p_table(a, report.q0, top.max(1)).map_err(other)?;
            let tt = t as u64;
            Box::new(move |x| {
                if x == 0 || x % tt != 0 {
                    0.0
                } else {
                    p.get((x / tt) as usize - 1).map(Interval::mid).unwrap_or(0.0)
                }
            })
        }
        Stat::Width => {
            return Err(CliError::Usage("width has no normal limit; use `width-mean` instead".into()));
        }
    };
    Ok(d
        .entries
        .keys()
        .map(|&v| CompareRow { value: v, exact_probability: d.probability(v), asymptotic: curve(v) })
        .collect())
}

pub fn cmd_compare(t: u32, n: usize, stat: Stat, digits: usize) -> Result<String, CliError> {
    let rows = compare_rows(t, n, stat)?;
    let mut out = String::from("value,exact_probability,asymptotic_density\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{}",
            r.value,
            bigdp::decimal_string_rational(&r.exact_probability, digits),
            cantrees::interval::fmt17(r.asymptotic)
        );
    }
    Ok(out)
}

pub fn cmd_width_caps(t: u32, k: u64, n_max: usize) -> Result<String, CliError> {
    let s = width::width_capped_counts(arity(t)?, k, n_max).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut out = String::from("n,count\n");
    for (n, c) in s.coeffs.iter().enumerate() {
        let _ = writeln!(out, "{n},{c}");
    }
    Ok(out)
}

pub fn cmd_qk(t: u32, k: u64, precision: f64) -> Result<String, CliError> {
    let c = width::solve_qk(arity(t)?, k, precision).map_err(other)?;
    json(&c)
}

pub fn cmd_width_mean(t: u32, n: usize, tol: f64) -> Result<String, CliError> {
    let tol = BigRational::from_float(tol).ok_or_else(|| CliError::Usage("tolerance must be finite".into()))?;
    let m = width::width_mean(arity(t)?, n, &tol).map_err(|e| CliError::Usage(e.to_string()))?;
    json(&m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lll,
    Width,
    Series,
    All,
}

/// One named check of a verification suite.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub t: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub scans: Vec<ScanReport>,
}

fn series_checks(t: u32, order: usize) -> Result<Vec<Check>, CliError> {
    let a = arity(t)?;
    let dp = bigdp::counts_upto(a, order)?;
    let h = series::series_h(a, order);
    let bad = dp.iter().enumerate().find(|(n, c)| *h.coeff(*n) != BigRational::from_integer(BigInt::from((*c).clone())));
    let passed = bad.is_none();
    let detail = match bad {
        None => format!("[q^n]H = count(n) for n <= {order}"),
        Some((n, _)) => format!("mismatch at n = {n}"),
    };
    Ok(vec![Check { suite: "series", t, name: "coefficients".into(), passed, detail }])
}

fn width_checks(t: u32) -> Result<Vec<Check>, CliError> {
    let a = arity(t)?;
    let tt = t as u64;
    let mut out = Vec::new();
    let order_b = 3 * tt as usize + 40;
    let b = series::series_b(a, order_b);
    for k in [3 * tt, 5 * tt, 7 * tt] {
        let tm = width::TransferMatrix::new(a, k).map_err(other)?;
        let upto = (k / tt) as usize;
        let det = tm.det_series(upto);
        let mismatch = (0..=upto).find(|&i| {
            let one_minus_b = if i == 0 { BigRational::from_integer(1.into()) - b.coeff(0) } else { -b.coeff(i).clone() };
            BigRational::from_integer(det[i].clone()) != one_minus_b
        });
        out.push(Check {
            suite: "width",
            t,
            name: format!("determinant K={k}"),
            passed: mismatch.is_none(),
            detail: match mismatch {
                None => format!("det(I - M_K) = 1 - b through q^{upto}"),
                Some(i) => format!("differs at q^{i}"),
            },
        });
    }
    let cert = asymptotics::solve_q0(a, 0.0, cantrees::genfun::default_j(a)).map_err(other)?;
    for k in [4 * tt, 8 * tt] {
        let n = width::dimension(a, k);
        let p = series::p_table(a, cert.q0, n + 2).map_err(other)?;
        let rows = width::eigenvector_check(a, k, cert.q0, &p).map_err(other)?;
        let bad = rows.iter().find(|r| !r.ok);
        out.push(Check {
            suite: "width",
            t,
            name: format!("eigenvector K={k}"),
            passed: bad.is_none(),
            detail: match bad {
                None => format!("{} rows within the p-tail bound", rows.len()),
                Some(r) => format!("row {} residual {} above {:e}", r.r, r.residual, r.bound),
            },
        });
    }
    let n_max = 60;
    let caps: Vec<_> = (tt..=tt + 12).map(|k| width::width_capped_counts(a, k, n_max)).collect::<Result<_, _>>().map_err(other)?;
    let monotone = caps.windows(2).all(|w| w[0].coeffs.iter().zip(&w[1].coeffs).all(|(x, y)| x <= y));
    out.push(Check {
        suite: "width",
        t,
        name: "capped counts monotone in K".into(),
        passed: monotone,
        detail: format!("K = {tt}..{}, n <= {n_max}", tt + 12),
    });
    Ok(out)
}

fn lll_checks(t: u32) -> Result<(Vec<Check>, Vec<ScanReport>), CliError> {
    let a = arity(t)?;
    let mut checks = Vec::new();
    let mut scans = Vec::new();
    for mode in [Mode::Height, Mode::Depths] {
        let r = locallimit::verify_unique_min(a, mode).map_err(other)?;
        let passed = r.verified() && r.covers_full_range();
        checks.push(Check {
            suite: "lll",
            t,
            name: format!("unique minimum ({mode})"),
            passed,
            detail: format!(
                "central radius {:.6}, {} central and {} outer cells",
                r.central_radius,
                r.central_cells.len(),
                r.outer_cells.len()
            ),
        });
        scans.push(r);
    }
    Ok((checks, scans))
}

pub fn run_verify(suite: Suite, ts: RangeInclusive<u32>, series_order: usize, keep_scans: bool) -> Result<Verdict, CliError> {
    let mut checks = Vec::new();
    let mut scans = Vec::new();
    for t in ts {
        if matches!(suite, Suite::Series | Suite::All) {
            checks.extend(series_checks(t, series_order)?);
        }
        if matches!(suite, Suite::Width | Suite::All) {
            checks.extend(width_checks(t)?);
        }
        if matches!(suite, Suite::Lll | Suite::All) {
            let (c, s) = lll_checks(t)?;
            checks.extend(c);
            if keep_scans {
                scans.extend(s);
            }
        }
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(Verdict { passed, checks, scans })
}

pub fn cmd_verify(suite: Suite, ts: RangeInclusive<u32>, series_order: usize, keep_scans: bool) -> Result<String, CliError> {
    let v = run_verify(suite, ts, series_order, keep_scans)?;
    let out = json(&v)?;
    if v.passed {
        Ok(out)
    } else {
        let failed: Vec<String> = v.checks.iter().filter(|c| !c.passed).map(|c| format!("t={} {}: {}", c.t, c.name, c.detail)).collect();
        Err(CliError::Verification(format!("{out}{}", failed.join("\n"))))
    }
}

/// Largest gap between the exact probabilities and the limiting curve.
pub fn sup_distance(rows: &[CompareRow]) -> f64 {
    rows.iter()
        .map(|r| (r.exact_probability.to_f64().unwrap_or(f64::NAN) - r.asymptotic).abs())
        .fold(0.0, f64::max)
}
