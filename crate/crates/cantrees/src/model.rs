//! Canonical t-ary trees as level profiles, and the equivalent code-word and
//! partition views.
//!
//! A profile `(n_0, …, n_{h-1})` lists the number of internal vertices on each
//! level. Level `k` then holds `v_k = t·n_{k-1}` vertices (`v_0 = 1`), of which
//! `v_k - n_k` are leaves.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("arity must be at least 2, got {0}")]
    Arity(u32),
    #[error("invalid level profile for t={t}: {reason}")]
    Profile { t: u32, reason: String },
    #[error("invalid code: {0}")]
    Code(String),
    #[error("invalid partition: {0}")]
    Partition(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Arity(u32);

impl Arity {
    pub fn new(t: u32) -> Result<Self, ModelError> {
        if t >= 2 {
            Ok(Arity(t))
        } else {
            Err(ModelError::Arity(t))
        }
    }
    pub fn get(self) -> u32 {
        self.0
    }
    pub fn as_u64(self) -> u64 {
        self.0 as u64
    }
    pub fn as_usize(self) -> usize {
        self.0 as usize
    }
}

impl TryFrom<u32> for Arity {
    type Error = ModelError;
    fn try_from(t: u32) -> Result<Self, ModelError> {
        Arity::new(t)
    }
}

impl From<Arity> for u32 {
    fn from(a: Arity) -> u32 {
        a.0
    }
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `hp(j) = 1 + t + … + t^{j-1}`.
pub fn hp(t: u64, j: u32) -> u64 {
    let mut s = 0u64;
    for _ in 0..j {
        s = s.checked_mul(t).and_then(|x| x.checked_add(1)).expect("hp overflow");
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct LevelProfile(pub Vec<u64>);

impl LevelProfile {
    pub fn new(levels: Vec<u64>) -> Self {
        LevelProfile(levels)
    }
    pub fn empty() -> Self {
        LevelProfile(Vec::new())
    }
    pub fn levels(&self) -> &[u64] {
        &self.0
    }
    pub fn height(&self) -> usize {
        self.0.len()
    }
    pub fn size(&self) -> u64 {
        self.0.iter().sum()
    }
    /// Vertex counts `v_0, …, v_h`.
    pub fn vertices(&self, t: Arity) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(1);
        for &n in &self.0 {
            v.push(t.as_u64() * n);
        }
        v
    }
    /// Leaf counts per level `0..=h`.
    pub fn leaves(&self, t: Arity) -> Vec<u64> {
        let v = self.vertices(t);
        v.iter()
            .enumerate()
            .map(|(k, &vk)| vk - self.0.get(k).copied().unwrap_or(0))
            .collect()
    }
}

impl fmt::Display for LevelProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "]")
    }
}

pub fn validate_profile(p: &LevelProfile, t: Arity) -> bool {
    check_profile(p, t).is_ok()
}

fn check_profile(p: &LevelProfile, t: Arity) -> Result<(), ModelError> {
    let err = |reason: String| ModelError::Profile { t: t.get(), reason };
    let lv = p.levels();
    if lv.is_empty() {
        return Ok(());
    }
    if lv[0] != 1 {
        return Err(err(format!("root level has {} internal vertices", lv[0])));
    }
    for (i, w) in lv.windows(2).enumerate() {
        if w[1] == 0 {
            return Err(err(format!("level {} is empty", i + 1)));
        }
        if w[1] > t.as_u64() * w[0] {
            return Err(err(format!("level {} has {} > {}·{}", i + 1, w[1], t, w[0])));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParameterVector {
    pub n: u64,
    pub tau: u64,
    pub h: u64,
    pub d: u64,
    pub w: u64,
    pub m: u64,
    pub ell: u64,
    pub ell_int: u64,
    pub ell_ext: u64,
}

pub fn parameters(p: &LevelProfile, t: Arity) -> Result<ParameterVector, ModelError> {
    check_profile(p, t)?;
    let tt = t.as_u64();
    let n = p.size();
    let v = p.vertices(t);
    let leaves = p.leaves(t);
    let h = p.height() as u64;
    let m = *leaves.last().expect("level 0 exists");
    let d = leaves.iter().filter(|&&l| l > 0).count() as u64;
    let w = leaves.iter().copied().max().unwrap_or(0);
    let ell: u64 = v.iter().enumerate().map(|(k, &vk)| k as u64 * vk).sum();
    let ell_int: u64 = p.levels().iter().enumerate().map(|(k, &nk)| k as u64 * nk).sum();
    let ell_ext: u64 = leaves.iter().enumerate().map(|(k, &l)| k as u64 * l).sum();
    debug_assert_eq!(ell_int * tt + tt * n, ell);
    Ok(ParameterVector {
        n,
        tau: 1 + n * (tt - 1),
        h,
        d,
        w,
        m,
        ell,
        ell_int,
        ell_ext,
    })
}

/// Prefix-free, compact, canonical code over `{1, …, t}`. Symbols are stored
/// as numbers; `Display` and serialization render them as base-36 digits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeWordSet {
    pub t: Arity,
    pub words: Vec<Vec<u32>>,
}

fn symbol_char(s: u32) -> char {
    std::char::from_digit(s, 36).expect("symbol below 36")
}

impl CodeWordSet {
    pub fn to_strings(&self) -> Vec<String> {
        self.words
            .iter()
            .map(|w| w.iter().map(|&s| symbol_char(s)).collect())
            .collect()
    }

    pub fn from_strings(t: Arity, words: &[String]) -> Result<Self, ModelError> {
        let mut out = Vec::with_capacity(words.len());
        for w in words {
            let mut word = Vec::with_capacity(w.len());
            for c in w.chars() {
                let s = c
                    .to_digit(36)
                    .filter(|&s| s >= 1 && s <= t.get())
                    .ok_or_else(|| ModelError::Code(format!("bad symbol {c:?} in {w:?}")))?;
                word.push(s);
            }
            out.push(word);
        }
        Ok(CodeWordSet { t, words: out })
    }
}

impl Serialize for CodeWordSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

pub fn to_code(p: &LevelProfile, t: Arity) -> Result<CodeWordSet, ModelError> {
    check_profile(p, t)?;
    if t.get() > 35 {
        return Err(ModelError::Code("code words are limited to t ≤ 35".into()));
    }
    let mut words = Vec::new();
    let mut level: Vec<Vec<u32>> = vec![Vec::new()];
    let levels = p.levels();
    for k in 0..=levels.len() {
        let nk = levels.get(k).copied().unwrap_or(0) as usize;
        let leaf_count = level.len() - nk;
        words.extend(level[..leaf_count].iter().cloned());
        let mut next = Vec::with_capacity(nk * t.as_usize());
        for parent in &level[leaf_count..] {
            for s in 1..=t.get() {
                let mut w = parent.clone();
                w.push(s);
                next.push(w);
            }
        }
        level = next;
    }
    Ok(CodeWordSet { t, words })
}

pub fn from_code(code: &CodeWordSet) -> Result<LevelProfile, ModelError> {
    let t = code.t;
    let mut seen = BTreeSet::new();
    for w in &code.words {
        if w.iter().any(|&s| s == 0 || s > t.get()) {
            return Err(ModelError::Code("symbol outside alphabet".into()));
        }
        if !seen.insert(w.clone()) {
            return Err(ModelError::Code("duplicate word".into()));
        }
    }
    let mut lengths: Vec<u32> = code.words.iter().map(|w| w.len() as u32).collect();
    lengths.sort_unstable();
    let p = from_partition(&Partition { exponents: lengths }, t)
        .map_err(|e| ModelError::Code(format!("not compact: {e}")))?;
    let canon = to_code(&p, t)?;
    let canon: BTreeSet<_> = canon.words.into_iter().collect();
    if canon != seen {
        return Err(ModelError::Code("prefix-free compact code is not canonical".into()));
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    pub exponents: Vec<u32>,
}

impl Partition {
    pub fn kraft_sum(&self, t: Arity) -> BigRational {
        let tt = BigInt::from(t.get());
        self.exponents
            .iter()
            .map(|&x| BigRational::new(BigInt::one(), num_traits::pow(tt.clone(), x as usize)))
            .fold(BigRational::zero(), |a, b| a + b)
    }
}

pub fn to_partition(p: &LevelProfile, t: Arity) -> Result<Partition, ModelError> {
    check_profile(p, t)?;
    let mut exponents = Vec::new();
    for (k, l) in p.leaves(t).into_iter().enumerate() {
        exponents.extend(std::iter::repeat_n(k as u32, l as usize));
    }
    Ok(Partition { exponents })
}

pub fn from_partition(part: &Partition, t: Arity) -> Result<LevelProfile, ModelError> {
    let xs = &part.exponents;
    if xs.is_empty() {
        return Err(ModelError::Partition("empty partition".into()));
    }
    if xs.windows(2).any(|w| w[0] > w[1]) {
        return Err(ModelError::Partition("exponents must be non-decreasing".into()));
    }
    if !part.kraft_sum(t).is_one() {
        return Err(ModelError::Partition("Σ t^(-x_i) ≠ 1".into()));
    }
    let depth = *xs.last().expect("non-empty") as usize;
    let mut per_level = vec![0u64; depth + 1];
    for &x in xs {
        per_level[x as usize] += 1;
    }
    let mut levels = Vec::new();
    let mut v = 1u64;
    for (k, &l) in per_level.iter().enumerate() {
        if l > v {
            return Err(ModelError::Partition(format!("too many parts at depth {k}")));
        }
        let n = v - l;
        if k == depth {
            if n != 0 {
                return Err(ModelError::Partition("unused vertices at last depth".into()));
            }
            break;
        }
        levels.push(n);
        v = n * t.as_u64();
    }
    let p = LevelProfile(levels);
    check_profile(&p, t).map_err(|e| ModelError::Partition(e.to_string()))?;
    Ok(p)
}

/// Every profile of size `n`, in lexicographic order.
pub fn enumerate_all(t: Arity, n: u64) -> impl Iterator<Item = LevelProfile> {
    let mut out = Vec::new();
    if n == 0 {
        out.push(LevelProfile::empty());
    } else {
        let mut cur = vec![1u64];
        extend(t.as_u64(), n - 1, &mut cur, &mut out);
    }
    out.into_iter()
}

fn extend(t: u64, remaining: u64, cur: &mut Vec<u64>, out: &mut Vec<LevelProfile>) {
    if remaining == 0 {
        out.push(LevelProfile(cur.clone()));
        return;
    }
    let last = *cur.last().expect("non-empty");
    for next in 1..=remaining.min(t * last) {
        cur.push(next);
        extend(t, remaining - next, cur, out);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t2() -> Arity {
        Arity::new(2).unwrap()
    }

    #[test]
    fn validation_examples() {
        assert!(validate_profile(&LevelProfile(vec![1, 2, 4]), t2()));
        assert!(!validate_profile(&LevelProfile(vec![1, 3]), t2()));
        assert!(!validate_profile(&LevelProfile(vec![2, 1]), t2()));
        assert!(Arity::new(1).is_err());
    }

    #[test]
    fn size_four_parameters() {
        let a = parameters(&LevelProfile(vec![1, 1, 1, 1]), t2()).unwrap();
        assert_eq!((a.h, a.m, a.d, a.w, a.n), (4, 2, 4, 2, 4));
        let b = parameters(&LevelProfile(vec![1, 1, 2]), t2()).unwrap();
        assert_eq!((b.h, b.m, b.d, b.w, b.n), (3, 4, 2, 4, 4));
    }

    #[test]
    fn path_lengths_of_third_tree() {
        // leaves: three at depth 2, two at depth 3; internal depths 0,1,1,2
        let c = parameters(&LevelProfile(vec![1, 2, 1]), t2()).unwrap();
        assert_eq!(c.ell, 16);
        assert_eq!(c.ell_ext, 12);
        assert_eq!(c.ell_int, 4);
        assert_eq!(c.w, 3);
    }

    #[test]
    fn single_leaf() {
        let t = Arity::new(5).unwrap();
        let e = parameters(&LevelProfile::empty(), t).unwrap();
        assert_eq!((e.n, e.tau, e.h, e.m, e.d, e.w, e.ell), (0, 1, 0, 1, 1, 1, 0));
    }

    #[test]
    fn star_code_and_partition() {
        let p = LevelProfile(vec![1]);
        assert_eq!(to_code(&p, t2()).unwrap().to_strings(), vec!["1", "2"]);
        assert_eq!(to_partition(&p, t2()).unwrap().exponents, vec![1, 1]);
        let q = LevelProfile(vec![1, 1, 2]);
        assert_eq!(to_partition(&q, t2()).unwrap().exponents, vec![1, 3, 3, 3, 3]);
    }

    #[test]
    fn enumeration_counts() {
        let all: Vec<_> = enumerate_all(t2(), 4).collect();
        assert_eq!(
            all,
            vec![
                LevelProfile(vec![1, 1, 1, 1]),
                LevelProfile(vec![1, 1, 2]),
                LevelProfile(vec![1, 2, 1]),
            ]
        );
        assert_eq!(enumerate_all(t2(), 0).count(), 1);
        assert_eq!(enumerate_all(t2(), 5).count(), 5);
    }

    #[test]
    fn non_canonical_code_rejected() {
        let t = t2();
        let bad = CodeWordSet::from_strings(t, &["2".into(), "11".into(), "12".into()]).unwrap();
        assert!(from_code(&bad).is_err());
        let good = CodeWordSet::from_strings(t, &["1".into(), "21".into(), "22".into()]).unwrap();
        assert_eq!(from_code(&good).unwrap(), LevelProfile(vec![1, 1]));
    }

    #[test]
    fn hp_values() {
        assert_eq!(hp(2, 0), 0);
        assert_eq!(hp(2, 4), 15);
        assert_eq!(hp(10, 3), 111);
    }
}
