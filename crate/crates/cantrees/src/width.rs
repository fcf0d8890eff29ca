//! Width-capped enumeration.
//!
//! A tree of inner width at most `K` whose last internal level carries `r`
//! vertices is obtained from a smaller one (last internal level `s`) by
//! expanding `r` of its `s·t` last-level leaves; the `s·t − r` leaves left
//! behind must fit under the cap. This gives the linear system
//! `W_{K,r} = q[r=1] + Σ_s q^r [r/t ≤ s ≤ (r+K)/t] W_{K,s}` with matrix
//! `M_K(q)`, which we iterate as big-integer power series.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::interval::Interval;
use crate::model::Arity;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WidthError {
    #[error("width cap K = {k} is below the arity t = {t}; only the single leaf has width < t")]
    CapBelowArity { k: u64, t: u32 },
    #[error("size {n} exceeds the width-mean cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("could not certify q_K for K = {k}: {reason}")]
    Witness { k: u64, reason: String },
}

/// Dimension `N(K) = ⌈K/(t−1)⌉ − 1` of the transfer matrix.
pub fn dimension(t: Arity, k: u64) -> usize {
    let t1 = t.as_u64() - 1;
    (k.div_ceil(t1)).saturating_sub(1) as usize
}

/// Column range `[⌈r/t⌉, min(⌊(r+K)/t⌋, N)]` of row `r` (1-based).
fn row_range(t: u64, k: u64, r: usize, n: usize) -> (usize, usize) {
    let r64 = r as u64;
    let lo = r64.div_ceil(t) as usize;
    let hi = (((r64 + k) / t) as usize).min(n);
    (lo, hi)
}

/// The matrix `M_K(q)` in symbolic form.
#[derive(Debug, Clone, Serialize)]
pub struct TransferMatrix {
    pub t: Arity,
    pub k: u64,
    pub n: usize,
}

impl TransferMatrix {
    pub fn new(t: Arity, k: u64) -> Result<Self, WidthError> {
        if k < t.as_u64() {
            return Err(WidthError::CapBelowArity { k, t: t.get() });
        }
        Ok(TransferMatrix { t, k, n: dimension(t, k) })
    }

    /// Whether entry `(r, s)` (1-based) is non-zero; its value is then `q^r`.
    pub fn support(&self, r: usize, s: usize) -> bool {
        let (lo, hi) = row_range(self.t.as_u64(), self.k, r, self.n);
        lo <= s && s <= hi
    }

    pub fn eval_f64(&self, q: f64) -> Vec<Vec<f64>> {
        (1..=self.n)
            .map(|r| {
                let qr = q.powi(r as i32);
                (1..=self.n).map(|s| if self.support(r, s) { qr } else { 0.0 }).collect()
            })
            .collect()
    }

    /// `det(I − M_K(q))` as a power series up to `q^order`.
    pub fn det_series(&self, order: usize) -> Vec<BigInt> {
        let len = order + 1;
        let n = self.n;
        let mut a: Vec<Vec<Vec<BigInt>>> = (1..=n)
            .map(|r| {
                (1..=n)
                    .map(|s| {
                        let mut e = vec![BigInt::zero(); len];
                        if r == s {
                            e[0] = BigInt::one();
                        }
                        if self.support(r, s) && r < len {
                            e[r] -= BigInt::one();
                        }
                        e
                    })
                    .collect()
            })
            .collect();
        let mut det = one_series(len);
        for p in 0..n {
            // Every pivot is 1 mod q, since M_K has no constant terms.
            let inv = series_inverse(&a[p][p]);
            det = series_mul(&det, &a[p][p]);
            for i in p + 1..n {
                if a[i][p].iter().all(Zero::is_zero) {
                    continue;
                }
                let f = series_mul(&a[i][p], &inv);
                for j in p..n {
                    let sub = series_mul(&f, &a[p][j]);
                    for (x, y) in a[i][j].iter_mut().zip(sub) {
                        *x -= y;
                    }
                }
            }
        }
        det
    }
}

fn one_series(len: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); len];
    v[0] = BigInt::one();
    v
}

fn series_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let len = a.len();
    let mut c = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().take(len - i).enumerate() {
            if !y.is_zero() {
                c[i + j] += x * y;
            }
        }
    }
    c
}

/// Inverse of a series with constant term 1.
fn series_inverse(a: &[BigInt]) -> Vec<BigInt> {
    debug_assert!(a[0].is_one());
    let len = a.len();
    let mut r = vec![BigInt::zero(); len];
    r[0] = BigInt::one();
    for k in 1..len {
        let mut s = BigInt::zero();
        for i in 1..=k {
            s += &a[i] * &r[k - i];
        }
        r[k] = -s;
    }
    r
}

/// Exact coefficients of `W_K(q)`: trees of size `n` with width at most `K`.
#[derive(Debug, Clone)]
pub struct WidthCapSeries {
    pub t: Arity,
    pub k: u64,
    pub coeffs: Vec<BigUint>,
}

impl Serialize for WidthCapSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("WidthCapSeries", 3)?;
        st.serialize_field("t", &self.t)?;
        st.serialize_field("K", &self.k)?;
        let c: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        st.serialize_field("coeffs", &c)?;
        st.end()
    }
}

pub fn width_capped_counts(t: Arity, k: u64, n_max: usize) -> Result<WidthCapSeries, WidthError> {
    if k < t.as_u64() {
        return Err(WidthError::CapBelowArity { k, t: t.get() });
    }
    Ok(WidthCapSeries { t, k, coeffs: iterate(t, k, n_max) })
}

/// `[q^n] W_K` for any `K ≥ 0`, including the degenerate caps below `t`.
pub fn capped_count(t: Arity, k: u64, n: usize) -> BigUint {
    if k == 0 {
        BigUint::zero()
    } else if k < t.as_u64() {
        if n == 0 {
            BigUint::one()
        } else {
            BigUint::zero()
        }
    } else {
        iterate(t, k, n).pop().unwrap_or_default()
    }
}

fn iterate(t: Arity, k: u64, n_max: usize) -> Vec<BigUint> {
    let tt = t.as_u64();
    let dim = dimension(t, k).min(n_max);
    let top = ((k / tt) as usize).min(dim);
    // pref[m][s] = Σ_{s' ≤ s} [q^m] W_{K,s'}
    let mut pref: Vec<Vec<BigUint>> = Vec::with_capacity(n_max + 1);
    pref.push(vec![BigUint::zero(); dim + 1]);
    let mut out = vec![BigUint::zero(); n_max + 1];
    out[0] = BigUint::one();
    for m in 1..=n_max {
        let mut row = vec![BigUint::zero(); dim + 1];
        let mut acc = BigUint::zero();
        for r in 1..=dim.min(m) {
            let (lo, hi) = row_range(tt, k, r, dim);
            let hi = hi.min(m - r);
            let mut w = if lo <= hi {
                let prev = &pref[m - r];
                &prev[hi] - &prev[lo - 1]
            } else {
                BigUint::zero()
            };
            if r == 1 && m == 1 {
                w += 1u32;
            }
            acc += &w;
            row[r] = acc.clone();
        }
        for r in dim.min(m) + 1..=dim {
            row[r] = acc.clone();
        }
        out[m] = row[top].clone();
        pref.push(row);
    }
    out
}

/// Enclosure of `E(w)` at size `n`, as exact rationals.
#[derive(Debug, Clone)]
pub struct WidthMean {
    pub t: Arity,
    pub n: usize,
    pub lower: BigRational,
    pub upper: BigRational,
    /// Largest cap whose count was evaluated.
    pub k_max: u64,
}

impl WidthMean {
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }
    pub fn mid_f64(&self) -> f64 {
        ((&self.lower + &self.upper) / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN)
    }
}

impl Serialize for WidthMean {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("WidthMean", 5)?;
        st.serialize_field("t", &self.t)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("lower", &self.lower.to_string())?;
        st.serialize_field("upper", &self.upper.to_string())?;
        st.serialize_field("k_max", &self.k_max)?;
        st.end()
    }
}

pub const WIDTH_MEAN_CAP: usize = 4000;

/// `E(w) = Σ_{K≥0} P(w > K)`, summed exactly until either every tree fits
/// under the cap or the remaining terms are certifiably below `tol`.
///
/// The remainder after cap `k` has at most `τ − k − 1` terms, each at most
/// `P(w > k)`, since `w ≤ τ`. With `tol = 0` the result is exact.
pub fn width_mean(t: Arity, n: usize, tol: &BigRational) -> Result<WidthMean, WidthError> {
    if n > WIDTH_MEAN_CAP {
        return Err(WidthError::CapExceeded { n, cap: WIDTH_MEAN_CAP });
    }
    let total = crate::bigdp::count(t, n).map_err(|_| WidthError::CapExceeded { n, cap: WIDTH_MEAN_CAP })?;
    let tau = 1 + n as u64 * (t.as_u64() - 1);
    let total_q = BigRational::from_integer(BigInt::from(total.clone()));
    let mut above = BigUint::zero();
    let mut k = 0u64;
    loop {
        let c = capped_count(t, k, n);
        let miss = &total - &c;
        if miss.is_zero() {
            let lower = BigRational::new(BigInt::from(above), BigInt::from(total));
            return Ok(WidthMean { t, n, upper: lower.clone(), lower, k_max: k });
        }
        above += &miss;
        let rest = BigRational::from_integer(BigInt::from(tau - k - 1)) * BigRational::from_integer(BigInt::from(miss))
            / &total_q;
        if tol.is_positive() && rest < *tol {
            let lower = BigRational::from_integer(BigInt::from(above)) / &total_q;
            return Ok(WidthMean { t, n, upper: &lower + rest, lower, k_max: k });
        }
        k += 1;
    }
}

/// Certified enclosure of `q_K`, the point where `λ_max(M_K(q)) = 1`.
#[derive(Debug, Clone)]
pub struct QKCert {
    pub k: u64,
    pub qk: Interval,
    /// Positive vector with `M_K(lo)·x ≤ x`.
    pub x_lo: Vec<BigRational>,
    /// Positive vector with `M_K(hi)·x ≥ x`.
    pub x_hi: Vec<BigRational>,
}

impl Serialize for QKCert {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QKCert", 4)?;
        st.serialize_field("K", &self.k)?;
        st.serialize_field("qK", &self.qk)?;
        let f = |v: &[BigRational]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        st.serialize_field("x_lo", &f(&self.x_lo))?;
        st.serialize_field("x_hi", &f(&self.x_hi))?;
        st.end()
    }
}

/// Perron vector and Collatz–Wielandt bounds `(min_i (Mx)_i/x_i, max_i …)`.
fn perron(m: &[Vec<f64>], start: Option<&[f64]>) -> (Vec<f64>, f64, f64) {
    let n = m.len();
    let mut x: Vec<f64> = start.map(|s| s.to_vec()).unwrap_or_else(|| vec![1.0; n]);
    let mut bounds = (0.0, f64::INFINITY);
    for it in 0..200_000 {
        let y: Vec<f64> = m.iter().map(|row| row.iter().zip(&x).map(|(a, b)| a * b).sum()).collect();
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for (a, b) in y.iter().zip(&x) {
            let r = a / b;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        bounds = (lo, hi);
        let norm = y.iter().cloned().fold(0.0, f64::max);
        x = y.iter().map(|v| v / norm).collect();
        if it > 8 && hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }
    (x, bounds.0, bounds.1)
}

fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

/// Exact test of `M_K(q)x ≤ x` (`upper = false`) or `M_K(q)x ≥ x`.
pub fn check_witness(tm: &TransferMatrix, q: &BigRational, x: &[BigRational], upper: bool) -> bool {
    if x.len() != tm.n || x.iter().any(|v| !v.is_positive()) {
        return false;
    }
    let mut qr = BigRational::one();
    let mut pref = vec![BigRational::zero(); tm.n + 1];
    for s in 1..=tm.n {
        pref[s] = &pref[s - 1] + &x[s - 1];
    }
    for r in 1..=tm.n {
        qr *= q;
        let (lo, hi) = row_range(tm.t.as_u64(), tm.k, r, tm.n);
        let sum = if lo <= hi { &pref[hi] - &pref[lo - 1] } else { BigRational::zero() };
        let y = &qr * sum;
        let ok = if upper { y >= x[r - 1] } else { y <= x[r - 1] };
        if !ok {
            return false;
        }
    }
    true
}

pub fn solve_qk(t: Arity, k: u64, precision: f64) -> Result<QKCert, WidthError> {
    let tm = TransferMatrix::new(t, k)?;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut x: Option<Vec<f64>> = None;
    while hi - lo > precision.min(1e-15).max(f64::EPSILON * hi) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (v, cl, ch) = perron(&tm.eval_f64(mid), x.as_deref());
        if ch < 1.0 {
            lo = mid;
        } else if cl > 1.0 {
            hi = mid;
        } else {
            x = Some(v);
            break;
        }
        x = Some(v);
    }
    // Certify both endpoints exactly, widening outwards as needed.
    let mut delta = f64::EPSILON;
    let certify = |q: f64, upper: bool, seed: Option<&[f64]>| -> Option<Vec<BigRational>> {
        let (v, _, _) = perron(&tm.eval_f64(q), seed);
        let xr: Vec<BigRational> = v.iter().map(|&e| rational(e)).collect();
        check_witness(&tm, &rational(q), &xr, upper).then_some(xr)
    };
    let mut lo_c = lo;
    let x_lo = loop {
        if let Some(w) = certify(lo_c, false, x.as_deref()) {
            break w;
        }
        delta *= 2.0;
        lo_c = lo - delta;
        if delta > 1e-6 || lo_c <= 0.0 {
            return Err(WidthError::Witness { k, reason: "lower witness failed".into() });
        }
    };
    delta = f64::EPSILON;
    let mut hi_c = hi;
    let x_hi = loop {
        if let Some(w) = certify(hi_c, true, x.as_deref()) {
            break w;
        }
        delta *= 2.0;
        hi_c = hi + delta;
        if delta > 1e-6 {
            return Err(WidthError::Witness { k, reason: "upper witness failed".into() });
        }
    };
    let qk = Interval::new(lo_c, hi_c).map_err(|e| WidthError::Witness { k, reason: e.to_string() })?;
    if qk.width() > precision.max(1e-12) {
        return Err(WidthError::Witness { k, reason: format!("enclosure width {} above target", qk.width()) });
    }
    Ok(QKCert { k, qk, x_lo, x_hi })
}

/// One row of the eigenvector check `p_r ≈ q₀^r Σ_s p_s`.
#[derive(Debug, Clone, Serialize)]
pub struct EigenRow {
    pub r: usize,
    pub residual: Interval,
    pub bound: f64,
    pub ok: bool,
}

/// Row-wise residuals of `M_K(q₀) p = p` for the truncated `p` vector.
///
/// The missing columns `s > ⌊(r+K)/t⌋` carry mass at most `q₀^{S+1}/(1−q₀)`
/// because `p_s ≤ q₀^s`.
pub fn eigenvector_check(t: Arity, k: u64, q0: Interval, p: &[Interval]) -> Result<Vec<EigenRow>, WidthError> {
    let tm = TransferMatrix::new(t, k)?;
    let tt = t.as_u64();
    let mut rows = Vec::new();
    for r in 1..=tm.n.min(p.len()) {
        let lo = (r as u64).div_ceil(tt) as usize;
        let hi = (((r as u64 + k) / tt) as usize).min(p.len());
        let mut sum = Interval::ZERO;
        for s in lo..=hi {
            sum = sum + p[s - 1];
        }
        let qr = q0.pow_int(r as u64);
        let residual = qr * sum - p[r - 1];
        let tail = (qr * q0.pow_int(hi as u64 + 1))
            .div(Interval::ONE - q0)
            .map(|v| v.hi())
            .unwrap_or(f64::INFINITY);
        let ok = residual.mig() <= tail;
        rows.push(EigenRow { r, residual, bound: tail, ok });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t2() -> Arity {
        Arity::new(2).unwrap()
    }

    #[test]
    fn size_four_caps() {
        assert_eq!(capped_count(t2(), 2, 4), BigUint::from(1u32));
        assert_eq!(capped_count(t2(), 3, 4), BigUint::from(2u32));
        assert_eq!(capped_count(t2(), 5, 4), BigUint::from(3u32));
    }

    #[test]
    fn small_caps() {
        let t3 = Arity::new(3).unwrap();
        assert_eq!(capped_count(t3, 2, 0), BigUint::one());
        assert_eq!(capped_count(t3, 2, 1), BigUint::zero());
        assert!(width_capped_counts(t3, 2, 5).is_err());
    }

    #[test]
    fn mean_at_four() {
        let m = width_mean(t2(), 4, &BigRational::zero()).unwrap();
        assert_eq!(m.lower, BigRational::from_integer(3.into()));
        assert!(m.is_exact());
        let m = width_mean(t2(), 1, &BigRational::zero()).unwrap();
        assert_eq!(m.lower, BigRational::from_integer(2.into()));
    }

    #[test]
    fn star_cap_has_q_one() {
        let c = solve_qk(t2(), 2, 1e-13).unwrap();
        assert!(c.qk.contains(1.0));
    }
}
