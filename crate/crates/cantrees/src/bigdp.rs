//! Exact counting, distributions, moments and uniform sampling through the
//! level-expansion recursion.
//!
//! Rows are indexed by the number `s` of internal vertices placed so far and
//! columns by the number `j` of internal vertices on the last placed level.
//! A row is stored as suffix sums `S[s][k] = Σ_{j ≥ k} F[s][j]`, because the
//! expansion step `(s, j) → (s + j', j')` is allowed exactly when
//! `j ≥ ⌈j'/t⌉`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::model::{Arity, LevelProfile};
use crate::width;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DpError {
    #[error("size n={n} exceeds the cap {cap} for {what}")]
    CapExceeded { what: &'static str, n: usize, cap: usize },
    #[error("unknown statistic {0:?}")]
    UnknownStat(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stat {
    Height,
    DistinctDepths,
    LastLevelLeaves,
    Width,
    TotalPathLength,
}

impl Stat {
    pub const ALL: [Stat; 5] = [
        Stat::Height,
        Stat::DistinctDepths,
        Stat::LastLevelLeaves,
        Stat::Width,
        Stat::TotalPathLength,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stat::Height => "height",
            Stat::DistinctDepths => "distinct_depths",
            Stat::LastLevelLeaves => "last_level_leaves",
            Stat::Width => "width",
            Stat::TotalPathLength => "total_path_length",
        }
    }

    pub fn of(self, p: &crate::model::ParameterVector) -> u64 {
        match self {
            Stat::Height => p.h,
            Stat::DistinctDepths => p.d,
            Stat::LastLevelLeaves => p.m,
            Stat::Width => p.w,
            Stat::TotalPathLength => p.ell,
        }
    }
}

impl std::str::FromStr for Stat {
    type Err = DpError;
    fn from_str(s: &str) -> Result<Self, DpError> {
        Stat::ALL
            .into_iter()
            .find(|st| st.name() == s || st.name().replace('_', "-") == s)
            .ok_or_else(|| DpError::UnknownStat(s.to_string()))
    }
}

impl std::fmt::Display for Stat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Size limits guarding against runaway memory use.
#[derive(Debug, Clone, Copy)]
pub struct Caps {
    pub count: usize,
    pub dist: usize,
    pub dist_path_length: usize,
    pub dist_width: usize,
    pub moments: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            count: 4000,
            dist: 400,
            dist_path_length: 60,
            dist_width: 300,
            moments: 2000,
        }
    }
}

fn check_cap(what: &'static str, n: usize, cap: usize) -> Result<(), DpError> {
    if n > cap {
        Err(DpError::CapExceeded { what, n, cap })
    } else {
        Ok(())
    }
}

trait Weight: Clone {
    fn empty() -> Self;
    fn add_assign(&mut self, other: &Self);
    /// `self - other`, where `other` is known to be dominated by `self`.
    fn minus(&self, other: &Self) -> Self;
    /// Multiply by `x^delta`.
    fn shifted(&self, delta: u64) -> Self;
}

impl Weight for BigUint {
    fn empty() -> Self {
        Zero::zero()
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn shifted(&self, _delta: u64) -> Self {
        self.clone()
    }
}

/// Polynomial `Σ c_i x^{off+i}` with non-negative integer coefficients.
#[derive(Clone, Debug, Default)]
struct Poly {
    off: u64,
    c: Vec<BigUint>,
}

impl Poly {
    fn one() -> Self {
        Poly { off: 0, c: vec![BigUint::one()] }
    }
}

impl Weight for Poly {
    fn empty() -> Self {
        Poly::default()
    }
    fn add_assign(&mut self, other: &Self) {
        if other.c.is_empty() {
            return;
        }
        if self.c.is_empty() {
            *self = other.clone();
            return;
        }
        let lo = self.off.min(other.off);
        let hi = (self.off + self.c.len() as u64).max(other.off + other.c.len() as u64);
        if lo < self.off {
            let pad = (self.off - lo) as usize;
            let mut c = vec![BigUint::zero(); pad];
            c.append(&mut self.c);
            self.c = c;
            self.off = lo;
        }
        self.c.resize((hi - lo) as usize, BigUint::zero());
        let base = (other.off - lo) as usize;
        for (i, x) in other.c.iter().enumerate() {
            self.c[base + i] += x;
        }
    }
    fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, x) in other.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let e = other.off + i as u64;
            let k = (e - out.off) as usize;
            out.c[k] -= x;
        }
        out.trim();
        out
    }
    fn shifted(&self, delta: u64) -> Self {
        Poly { off: self.off + delta, c: self.c.clone() }
    }
}

impl Poly {
    fn trim(&mut self) {
        while self.c.last().is_some_and(|x| x.is_zero()) {
            self.c.pop();
        }
        let lead = self.c.iter().take_while(|x| x.is_zero()).count();
        if lead == self.c.len() {
            self.c.clear();
            self.off = 0;
        } else if lead > 0 {
            self.c.drain(..lead);
            self.off += lead as u64;
        }
    }
}

/// Power sums `P_k = Σ c·x^k` for `k ≤ order`.
#[derive(Clone, Debug)]
struct PowerSums(Vec<BigUint>);

const MAX_ORDER: usize = 4;

impl PowerSums {
    fn one() -> Self {
        let mut v = vec![BigUint::zero(); MAX_ORDER + 1];
        v[0] = BigUint::one();
        PowerSums(v)
    }
}

fn binom(n: usize, k: usize) -> u64 {
    let mut r = 1u64;
    for i in 0..k {
        r = r * (n - i) as u64 / (i + 1) as u64;
    }
    r
}

impl Weight for PowerSums {
    fn empty() -> Self {
        PowerSums(vec![BigUint::zero(); MAX_ORDER + 1])
    }
    fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
    }
    fn minus(&self, other: &Self) -> Self {
        PowerSums(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
    fn shifted(&self, delta: u64) -> Self {
        if delta == 0 || self.0[0].is_zero() {
            return self.clone();
        }
        let d = BigUint::from(delta);
        let mut dpow = vec![BigUint::one()];
        for i in 1..=MAX_ORDER {
            let next = &dpow[i - 1] * &d;
            dpow.push(next);
        }
        let mut out = Vec::with_capacity(MAX_ORDER + 1);
        for k in 0..=MAX_ORDER {
            let mut s = BigUint::zero();
            for i in 0..=k {
                s += &self.0[i] * &dpow[k - i] * binom(k, i);
            }
            out.push(s);
        }
        PowerSums(out)
    }
}

#[derive(Clone, Copy)]
enum Mode {
    Plain,
    Height,
    Depths,
    /// Tracks the internal path length for trees of the given total size.
    InternalPath(usize),
}

/// Suffix-sum table for sizes `1..=n`.
struct Table<W> {
    t: usize,
    rows: Vec<Vec<W>>,
}

impl<W: Weight> Table<W> {
    fn get(&self, s: usize, k: usize) -> W {
        self.rows[s].get(k).cloned().unwrap_or_else(W::empty)
    }
    fn point(&self, s: usize, j: usize) -> W {
        match (self.rows[s].get(j), self.rows[s].get(j + 1)) {
            (Some(a), Some(b)) => a.minus(b),
            (Some(a), None) => a.clone(),
            _ => W::empty(),
        }
    }
}

fn build<W: Weight>(t: Arity, n: usize, base: W, mode: Mode, prune: bool) -> Table<W> {
    let t = t.as_usize();
    let mut rows: Vec<Vec<W>> = Vec::with_capacity(n + 1);
    rows.push(Vec::new());
    if n == 0 {
        return Table { t, rows };
    }
    rows.push(vec![W::empty(), base.clone(), W::empty()]);
    let mut freed = vec![1usize; n + 1];
    for s in 2..=n {
        let mut f: Vec<W> = vec![W::empty(); s + 1];
        for jp in 1..s {
            let r = s - jp;
            let k = jp.div_ceil(t);
            let row = &rows[r];
            if k + 1 >= row.len() {
                continue;
            }
            f[jp] = match mode {
                Mode::Plain => row[k].clone(),
                Mode::Height => row[k].shifted(1),
                Mode::InternalPath(total) => row[k].shifted((total - r) as u64),
                Mode::Depths => {
                    if jp % t != 0 {
                        row[k].shifted(1)
                    } else {
                        let mut w = row[k + 1].shifted(1);
                        w.add_assign(&row[k].minus(&row[k + 1]));
                        w
                    }
                }
            };
        }
        // f[s] stays zero and pads the row
        for j in (1..f.len() - 1).rev() {
            let (a, b) = f.split_at_mut(j + 1);
            a[j].add_assign(&b[0]);
        }
        rows.push(f);
        if prune {
            // After row s, row r is only read at columns ≥ ⌈(s + 1 − r)/t⌉.
            for r in 1..s {
                let need = (s + 1 - r).div_ceil(t);
                let row = &mut rows[r];
                while freed[r] < need.min(row.len().saturating_sub(1)) {
                    row[freed[r]] = W::empty();
                    freed[r] += 1;
                }
            }
        }
    }
    Table { t, rows }
}

/// Number of canonical trees with `n` internal vertices.
pub fn count(t: Arity, n: usize) -> Result<BigUint, DpError> {
    count_with_caps(t, n, &Caps::default())
}

pub fn count_with_caps(t: Arity, n: usize, caps: &Caps) -> Result<BigUint, DpError> {
    check_cap("count", n, caps.count)?;
    if n == 0 {
        return Ok(BigUint::one());
    }
    let table = build(t, n, BigUint::one(), Mode::Plain, true);
    Ok(table.get(n, 1))
}

/// Counts for every size `0..=n`.
pub fn counts_upto(t: Arity, n: usize) -> Result<Vec<BigUint>, DpError> {
    check_cap("count", n, Caps::default().count)?;
    let table = build(t, n, BigUint::one(), Mode::Plain, false);
    let mut out = vec![BigUint::one()];
    for s in 1..=n {
        out.push(table.get(s, 1));
    }
    Ok(out)
}

/// Counts split by the number `j` of internal vertices on the deepest
/// internal level; the last level then carries `t·j` leaves.
pub fn count_by_last(t: Arity, n: usize) -> Result<BTreeMap<u64, BigUint>, DpError> {
    check_cap("count", n, Caps::default().count)?;
    let mut out = BTreeMap::new();
    if n == 0 {
        out.insert(0, BigUint::one());
        return Ok(out);
    }
    let table = build(t, n, BigUint::one(), Mode::Plain, true);
    for j in 1..table.rows[n].len() {
        let c = table.point(n, j);
        if !c.is_zero() {
            out.insert(j as u64, c);
        }
    }
    Ok(out)
}

/// Exact distribution of a statistic over all trees of size `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistTable {
    pub stat: Stat,
    pub t: Arity,
    pub n: usize,
    pub entries: BTreeMap<u64, BigUint>,
    pub total: BigUint,
}

impl DistTable {
    fn from_entries(stat: Stat, t: Arity, n: usize, entries: BTreeMap<u64, BigUint>) -> Self {
        let entries: BTreeMap<u64, BigUint> =
            entries.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let total = entries.values().fold(BigUint::zero(), |a, b| a + b);
        DistTable { stat, t, n, entries, total }
    }

    pub fn probability(&self, value: u64) -> BigRational {
        let c = self.entries.get(&value).cloned().unwrap_or_default();
        BigRational::new(c.into(), self.total.clone().into())
    }

    /// Raw moment `E[X^k]`.
    pub fn raw_moment(&self, k: u32) -> BigRational {
        let mut s = BigUint::zero();
        for (&v, c) in &self.entries {
            s += c * num_traits::pow(BigUint::from(v), k as usize);
        }
        BigRational::new(s.into(), self.total.clone().into())
    }

    pub fn moments(&self) -> ExactMoments {
        ExactMoments::from_raw(self.raw_moment(1), self.raw_moment(2))
    }

    /// CSV with columns `value,count,probability`.
    pub fn to_csv(&self, digits: usize) -> String {
        let mut out = String::from("value,count,probability\n");
        for (v, c) in &self.entries {
            let _ = writeln!(out, "{},{},{}", v, c, decimal_string(c, &self.total, digits));
        }
        out
    }
}

impl Serialize for DistTable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Row {
            value: u64,
            count: String,
        }
        #[derive(Serialize)]
        struct Out<'a> {
            stat: &'a str,
            t: u32,
            n: usize,
            total: String,
            entries: Vec<Row>,
        }
        Out {
            stat: self.stat.name(),
            t: self.t.get(),
            n: self.n,
            total: self.total.to_string(),
            entries: self
                .entries
                .iter()
                .map(|(v, c)| Row { value: *v, count: c.to_string() })
                .collect(),
        }
        .serialize(s)
    }
}

/// `num/den` rounded half-up to `digits` decimals.
pub fn decimal_string(num: &BigUint, den: &BigUint, digits: usize) -> String {
    let scale = num_traits::pow(BigUint::from(10u32), digits);
    let scaled = num * &scale * 2u32 + den;
    let q = scaled / (den * 2u32);
    let (int, frac) = q.div_rem(&scale);
    if digits == 0 {
        return int.to_string();
    }
    let f = frac.to_string();
    format!("{}.{}{}", int, "0".repeat(digits - f.len()), f)
}

/// Signed variant of [`decimal_string`] for rationals.
pub fn decimal_string_rational(x: &BigRational, digits: usize) -> String {
    let neg = x < &BigRational::zero();
    let a = if neg { -x.clone() } else { x.clone() };
    let num = a.numer().to_biguint().expect("non-negative");
    let den = a.denom().to_biguint().expect("positive");
    let s = decimal_string(&num, &den, digits);
    if neg && s.chars().any(|c| c.is_ascii_digit() && c != '0') {
        format!("-{s}")
    } else {
        s
    }
}

pub fn dist(t: Arity, n: usize, stat: Stat) -> Result<DistTable, DpError> {
    dist_with_caps(t, n, stat, &Caps::default())
}

pub fn dist_with_caps(t: Arity, n: usize, stat: Stat, caps: &Caps) -> Result<DistTable, DpError> {
    let cap = match stat {
        Stat::TotalPathLength => caps.dist_path_length,
        Stat::Width => caps.dist_width,
        _ => caps.dist,
    };
    check_cap("dist", n, cap)?;
    let tt = t.as_u64();
    if n == 0 {
        let v = match stat {
            Stat::Height | Stat::TotalPathLength => 0,
            _ => 1,
        };
        let mut e = BTreeMap::new();
        e.insert(v, BigUint::one());
        return Ok(DistTable::from_entries(stat, t, 0, e));
    }
    let mut entries = BTreeMap::new();
    match stat {
        Stat::LastLevelLeaves => {
            for (j, c) in count_by_last(t, n)? {
                entries.insert(j * tt, c);
            }
        }
        Stat::Width => {
            let mut prev = BigUint::zero();
            let kmax = 1 + n as u64 * (tt - 1);
            for k in 1..=kmax {
                let c = width::capped_count(t, k, n);
                if c > prev {
                    entries.insert(k, &c - &prev);
                }
                prev = c;
            }
        }
        Stat::Height | Stat::DistinctDepths | Stat::TotalPathLength => {
            let (base, mode, offset, scale) = match stat {
                Stat::Height => (Poly::one().shifted(1), Mode::Height, 0, 1),
                Stat::DistinctDepths => (Poly::one(), Mode::Depths, 1, 1),
                _ => (Poly::one(), Mode::InternalPath(n), tt * n as u64, tt),
            };
            let table = build(t, n, base, mode, true);
            let p = table.get(n, 1);
            for (i, c) in p.c.iter().enumerate() {
                if !c.is_zero() {
                    let x = p.off + i as u64;
                    entries.insert(scale * x + offset, c.clone());
                }
            }
        }
    }
    Ok(DistTable::from_entries(stat, t, n, entries))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMoments {
    pub mean: BigRational,
    pub second_moment: BigRational,
    pub variance: BigRational,
}

impl ExactMoments {
    fn from_raw(mean: BigRational, second_moment: BigRational) -> Self {
        let variance = &second_moment - &mean * &mean;
        ExactMoments { mean, second_moment, variance }
    }

    pub fn mean_f64(&self) -> f64 {
        self.mean.to_f64().unwrap_or(f64::NAN)
    }
    pub fn variance_f64(&self) -> f64 {
        self.variance.to_f64().unwrap_or(f64::NAN)
    }
}

impl Serialize for ExactMoments {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out {
            mean: String,
            second_moment: String,
            variance: String,
            mean_decimal: String,
            variance_decimal: String,
        }
        Out {
            mean: self.mean.to_string(),
            second_moment: self.second_moment.to_string(),
            variance: self.variance.to_string(),
            mean_decimal: decimal_string_rational(&self.mean, 12),
            variance_decimal: decimal_string_rational(&self.variance, 12),
        }
        .serialize(s)
    }
}

pub fn moments(t: Arity, n: usize, stat: Stat) -> Result<ExactMoments, DpError> {
    let raw = raw_moments_with_caps(t, n, stat, &Caps::default())?;
    Ok(ExactMoments::from_raw(raw[1].clone(), raw[2].clone()))
}

/// Raw moments `E[X^k]` for `k = 0..=4`.
pub fn raw_moments(t: Arity, n: usize, stat: Stat) -> Result<Vec<BigRational>, DpError> {
    raw_moments_with_caps(t, n, stat, &Caps::default())
}

pub fn raw_moments_with_caps(
    t: Arity,
    n: usize,
    stat: Stat,
    caps: &Caps,
) -> Result<Vec<BigRational>, DpError> {
    let tt = t.as_u64();
    let sums: Vec<BigUint> = match stat {
        Stat::LastLevelLeaves | Stat::Width => {
            let d = dist_with_caps(t, n, stat, caps)?;
            return Ok((0..=MAX_ORDER as u32).map(|k| d.raw_moment(k)).collect());
        }
        _ if n == 0 => {
            let d = dist_with_caps(t, 0, stat, caps)?;
            return Ok((0..=MAX_ORDER as u32).map(|k| d.raw_moment(k)).collect());
        }
        _ => {
            check_cap("moments", n, caps.moments)?;
            let (base, mode, offset, scale) = match stat {
                Stat::Height => (PowerSums::one().shifted(1), Mode::Height, 0, 1),
                Stat::DistinctDepths => (PowerSums::one(), Mode::Depths, 1, 1),
                _ => (PowerSums::one(), Mode::InternalPath(n), tt * n as u64, tt),
            };
            let table = build(t, n, base, mode, true);
            affine(&table.get(n, 1).0, scale, offset)
        }
    };
    let total = sums[0].clone();
    Ok(sums
        .into_iter()
        .map(|s| BigRational::new(s.into(), total.clone().into()))
        .collect())
}

/// Power sums of `a·x + b` from power sums of `x`.
fn affine(p: &[BigUint], a: u64, b: u64) -> Vec<BigUint> {
    let a = BigUint::from(a);
    let b = BigUint::from(b);
    (0..p.len())
        .map(|k| {
            let mut s = BigUint::zero();
            for i in 0..=k {
                s += &p[i]
                    * num_traits::pow(a.clone(), i)
                    * num_traits::pow(b.clone(), k - i)
                    * binom(k, i);
            }
            s
        })
        .collect()
}

/// Exact uniform sampler over trees of a fixed size.
pub struct Sampler {
    t: Arity,
    n: usize,
    table: Table<BigUint>,
}

impl Sampler {
    pub fn new(t: Arity, n: usize) -> Result<Self, DpError> {
        check_cap("sample", n, Caps::default().moments)?;
        let table = build(t, n, BigUint::one(), Mode::Plain, false);
        Ok(Sampler { t, n, table })
    }

    pub fn total(&self) -> BigUint {
        if self.n == 0 {
            BigUint::one()
        } else {
            self.table.get(self.n, 1)
        }
    }

    pub fn sample<R: RngCore>(&self, rng: &mut R) -> LevelProfile {
        if self.n == 0 {
            return LevelProfile::empty();
        }
        let mut x = uniform_below(&self.total(), rng);
        let tt = self.table.t;
        let mut rev = Vec::new();
        let mut s = self.n;
        let mut kmin = 1;
        loop {
            let mut chosen = None;
            for j in kmin..self.table.rows[s].len() {
                let c = self.table.point(s, j);
                if x < c {
                    chosen = Some(j);
                    break;
                }
                x -= c;
            }
            let j = chosen.expect("draw below the total");
            rev.push(j as u64);
            if s == j {
                break;
            }
            s -= j;
            kmin = j.div_ceil(tt);
        }
        rev.reverse();
        let p = LevelProfile::new(rev);
        debug_assert!(crate::model::validate_profile(&p, self.t));
        p
    }
}

pub fn sample_uniform(t: Arity, n: usize, seed: u64) -> Result<LevelProfile, DpError> {
    let sampler = Sampler::new(t, n)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    Ok(sampler.sample(&mut rng))
}

/// Uniform integer in `[0, bound)` by rejection from 32-bit blocks.
pub fn uniform_below<R: RngCore>(bound: &BigUint, rng: &mut R) -> BigUint {
    assert!(!bound.is_zero(), "empty range");
    let bits = bound.bits();
    let words = bits.div_ceil(32) as usize;
    let top_bits = bits - 32 * (words as u64 - 1);
    let mask: u32 = if top_bits == 32 { u32::MAX } else { (1u32 << top_bits) - 1 };
    loop {
        let mut digits: Vec<u32> = (0..words).map(|_| rng.next_u32()).collect();
        if let Some(last) = digits.last_mut() {
            *last &= mask;
        }
        let x = BigUint::new(digits);
        if &x < bound {
            return x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t2() -> Arity {
        Arity::new(2).unwrap()
    }

    #[test]
    fn small_counts() {
        assert_eq!(count(t2(), 4).unwrap(), BigUint::from(3u32));
        assert_eq!(count(t2(), 0).unwrap(), BigUint::one());
        assert_eq!(count(Arity::new(7).unwrap(), 0).unwrap(), BigUint::one());
    }

    #[test]
    fn size_four_distributions() {
        let h = dist(t2(), 4, Stat::Height).unwrap();
        let want: BTreeMap<u64, BigUint> =
            [(3, BigUint::from(2u32)), (4, BigUint::one())].into_iter().collect();
        assert_eq!(h.entries, want);
        let d = dist(t2(), 4, Stat::DistinctDepths).unwrap();
        let want: BTreeMap<u64, BigUint> =
            [(2, BigUint::from(2u32)), (4, BigUint::one())].into_iter().collect();
        assert_eq!(d.entries, want);
    }

    #[test]
    fn height_mean_at_four() {
        let m = moments(t2(), 4, Stat::Height).unwrap();
        assert_eq!(m.mean, BigRational::new(10.into(), 3.into()));
    }

    #[test]
    fn empty_tree_moments() {
        let m = moments(t2(), 0, Stat::Height).unwrap();
        assert!(m.mean.is_zero() && m.variance.is_zero());
    }

    #[test]
    fn decimal_rounding() {
        let three = BigUint::from(3u32);
        assert_eq!(decimal_string(&BigUint::from(2u32), &three, 4), "0.6667");
        assert_eq!(decimal_string(&three, &three, 2), "1.00");
        assert_eq!(decimal_string(&BigUint::one(), &BigUint::from(8u32), 2), "0.13");
    }

    #[test]
    fn star_is_the_only_size_one_tree() {
        for seed in 0..5 {
            assert_eq!(sample_uniform(t2(), 1, seed).unwrap(), LevelProfile::new(vec![1]));
        }
    }
}
