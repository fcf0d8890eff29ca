//! Exact power series of `a(q,1,1,1)`, `b(q,1,1,1)` and `H = a/(1−b)`, and
//! the `p_m = [u^{mt}] b(q₀,u,1,1)` table.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::interval::{Interval, Scalar};
use crate::model::{hp, Arity};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("q0 enclosure {0} is not inside (0, 1)")]
    BadQ0(Interval),
    #[error("q0 enclosure of width {0:e} is too wide for the p_m table")]
    WideQ0(f64),
}

/// Truncated power series in `q` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesQ {
    pub coeffs: Vec<BigRational>,
}

impl SeriesQ {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn zero(order: usize) -> Self {
        SeriesQ { coeffs: vec![BigRational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigRational::one();
        s
    }

    pub fn from_ints(c: &[BigInt]) -> Self {
        SeriesQ { coeffs: c.iter().map(|x| BigRational::from_integer(x.clone())).collect() }
    }

    pub fn coeff(&self, n: usize) -> &BigRational {
        &self.coeffs[n]
    }

    pub fn add(&self, o: &Self) -> Self {
        SeriesQ { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        SeriesQ { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let len = self.coeffs.len().min(o.coeffs.len());
        let mut c = vec![BigRational::zero(); len];
        for (i, a) in self.coeffs.iter().take(len).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().take(len - i).enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        SeriesQ { coeffs: c }
    }

    /// Multiplicative inverse; `None` if the constant term vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let c0 = self.coeffs[0].clone();
        if c0.is_zero() {
            return None;
        }
        let len = self.coeffs.len();
        let inv0 = c0.recip();
        let mut r = vec![BigRational::zero(); len];
        r[0] = inv0.clone();
        for k in 1..len {
            let mut s = BigRational::zero();
            for i in 1..=k {
                s += &self.coeffs[i] * &r[k - i];
            }
            r[k] = -s * &inv0;
        }
        Some(SeriesQ { coeffs: r })
    }

    /// CSV with columns `n,coefficient`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,coefficient\n");
        for (n, c) in self.coeffs.iter().enumerate() {
            let _ = writeln!(out, "{n},{c}");
        }
        out
    }
}

impl Serialize for SeriesQ {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }
}

/// `hp(j)` paired with its index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HpIndex {
    pub j: u32,
    pub value: u64,
}

impl HpIndex {
    pub fn new(t: Arity, j: u32) -> Self {
        HpIndex { j, value: hp(t.as_u64(), j) }
    }
    pub fn next(self, t: Arity) -> Self {
        HpIndex { j: self.j + 1, value: 1 + t.as_u64() * self.value }
    }
}

// Integer series helpers; every series here has integer coefficients.

fn imul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
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

/// `x/(1−x)` with `x = q^e`, i.e. `Σ_{k≥1} q^{ke}`.
fn geometric(e: usize, len: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); len];
    let mut k = e;
    while k < len {
        v[k] = BigInt::one();
        k += e;
    }
    v
}

/// Products `P_j = Π_{i≤j} x_i/(1−x_i)` at `u = 1`, for all `j` with
/// valuation `≤ order`, starting from `P_0 = 1`.
fn products(t: Arity, order: usize) -> Vec<Vec<BigInt>> {
    let len = order + 1;
    let mut p = vec![vec![BigInt::zero(); len]];
    p[0][0] = BigInt::one();
    let mut val = 0u64;
    let mut h = HpIndex::new(t, 0);
    loop {
        h = h.next(t);
        val += h.value;
        if val > order as u64 {
            break;
        }
        let last = p.last().unwrap();
        let next = imul(last, &geometric(h.value as usize, len));
        p.push(next);
    }
    p
}

fn b_ints(t: Arity, order: usize) -> Vec<BigInt> {
    let p = products(t, order);
    let mut b = vec![BigInt::zero(); order + 1];
    for (j, pj) in p.iter().enumerate().skip(1) {
        for (x, y) in b.iter_mut().zip(pj) {
            if j % 2 == 1 {
                *x += y;
            } else {
                *x -= y;
            }
        }
    }
    b
}

fn a_ints(t: Arity, order: usize) -> Vec<BigInt> {
    let p = products(t, order);
    let mut a = vec![BigInt::zero(); order + 1];
    for (j, pj) in p.iter().enumerate() {
        let shift = hp(t.as_u64(), j as u32) as usize;
        for k in 0..=order.saturating_sub(shift) {
            if shift + k > order {
                break;
            }
            if j % 2 == 0 {
                a[shift + k] += &pj[k];
            } else {
                a[shift + k] -= &pj[k];
            }
        }
    }
    a
}

/// `b(q,1,1,1)` to order `N`.
pub fn series_b(t: Arity, order: usize) -> SeriesQ {
    SeriesQ::from_ints(&b_ints(t, order))
}

/// `a(q,1,1,1)` to order `N`.
pub fn series_a(t: Arity, order: usize) -> SeriesQ {
    SeriesQ::from_ints(&a_ints(t, order))
}

/// `H(q,1,1,1) = a/(1−b)` to order `N`.
pub fn series_h(t: Arity, order: usize) -> SeriesQ {
    let a = a_ints(t, order);
    let mut d: Vec<BigInt> = b_ints(t, order).into_iter().map(|x| -x).collect();
    d[0] += 1;
    // 1 − b has constant term 1, so the quotient stays integral.
    let len = order + 1;
    let mut h = vec![BigInt::zero(); len];
    for k in 0..len {
        let mut s = a[k].clone();
        for i in 1..=k {
            s -= &d[i] * &h[k - i];
        }
        h[k] = s;
    }
    SeriesQ::from_ints(&h)
}

/// Upper bound for `Σ_{m>M} p_m`, from `p_m ≤ q₀^m`.
pub fn p_tail(q0: Interval, m: usize) -> f64 {
    (q0.pow_int(m as u64 + 1).div(Interval::ONE - q0)).map(|v| v.hi()).unwrap_or(f64::INFINITY)
}

/// Enclosures of `p_1, …, p_M`.
///
/// Every `j`-term of `b(q₀,u,1,1)` is expanded in `u` up to `u^{Mt}`. Terms
/// with `t + t² + … + t^j > Mt` have no coefficient in that range, so the
/// finite sum is exact and no truncation tail enters.
pub fn p_table(t: Arity, q0: Interval, m: usize) -> Result<Vec<Interval>, SeriesError> {
    if !(q0.lo() > 0.0 && q0.hi() < 1.0) {
        return Err(SeriesError::BadQ0(q0));
    }
    if q0.width() > 1e-6 {
        return Err(SeriesError::WideQ0(q0.width()));
    }
    let tt = t.as_u64() as usize;
    let deg = m * tt;
    let len = deg + 1;
    let mut prod = vec![Interval::ZERO; len];
    prod[0] = Interval::ONE;
    let mut b = vec![Interval::ZERO; len];
    let mut val = 0usize;
    let mut tj = 1usize;
    for j in 1u32.. {
        tj *= tt;
        val += tj;
        if val > deg {
            break;
        }
        // x_j/(1−x_j) = Σ_k q₀^{k·hp(j)} u^{k·t^j}
        let qh = q0.pow_int(hp(t.as_u64(), j));
        let mut fac = vec![Interval::ZERO; len];
        let mut k = 1;
        let mut c = qh;
        while k * tj < len {
            fac[k * tj] = c;
            c = c * qh;
            k += 1;
        }
        let mut next = vec![Interval::ZERO; len];
        for (i, a) in prod.iter().enumerate() {
            if a.is_exactly(0.0) {
                continue;
            }
            for (l, f) in fac.iter().enumerate().take(len - i) {
                if !f.is_exactly(0.0) {
                    next[i + l] = next[i + l] + *a * *f;
                }
            }
        }
        prod = next;
        for (x, y) in b.iter_mut().zip(&prod) {
            *x = if j % 2 == 1 { *x + *y } else { *x - *y };
        }
    }
    Ok((1..=m).map(|i| b[i * tt]).collect())
}

/// All `u`-coefficients of `b(q₀,u,1,1)` up to `u^{deg}`.
pub fn b_u_coefficients(t: Arity, q0: Interval, deg: usize) -> Result<Vec<Interval>, SeriesError> {
    let tt = t.as_u64() as usize;
    let m = deg.div_ceil(tt);
    let p = p_table(t, q0, m)?;
    let mut out = vec![Interval::ZERO; deg + 1];
    for (i, v) in p.iter().enumerate() {
        let d = (i + 1) * tt;
        if d <= deg {
            out[d] = *v;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn low_orders() {
        let t = Arity::new(2).unwrap();
        let h = series_h(t, 6);
        assert_eq!(h.coeff(0), &big(1));
        assert_eq!(h.coeff(1), &big(1));
        assert_eq!(h.coeff(4), &big(3));
        assert_eq!(h.coeff(5), &big(5));
        let b = series_b(t, 6);
        assert_eq!(b.coeff(0), &big(0));
        assert_eq!(b.coeff(1), &big(1));
    }

    #[test]
    fn quotient_identity() {
        let t = Arity::new(3).unwrap();
        let n = 40;
        let h = series_h(t, n);
        let lhs = h.mul(&SeriesQ::one(n).sub(&series_b(t, n)));
        assert_eq!(lhs, series_a(t, n));
        let inv = SeriesQ::one(n).sub(&series_b(t, n)).inverse().unwrap();
        assert_eq!(series_a(t, n).mul(&inv), h);
    }
}
