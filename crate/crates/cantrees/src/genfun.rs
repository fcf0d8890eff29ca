//! Certified evaluation of the truncated sums `b_J`, `D_J` and their partial
//! derivatives up to total order two, with explicit tail bounds.
//!
//! Derivatives of the finite part are propagated exactly with second-order
//! Taylor jets in three variables `(q, u, w)`; the third slot carries `v` for
//! the distinct-depths denominator.

use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;
use thiserror::Error;

use crate::interval::{ComplexBox, Interval, IntervalError, Scalar};
use crate::model::Arity;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenfunError {
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("tail ratio {ratio} ≥ 1 in the {which} bound; increase J (currently {j})")]
    TailRatio { which: &'static str, ratio: f64, j: u32 },
    #[error("derivative order ({0},{1},{2}) not supported (total order must be ≤ 2)")]
    Order(u8, u8, u8),
    #[error("truncation order J = {0} overflows the exponent range")]
    Overflow(u32),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// Default truncation order for arity `t`.
pub fn default_j(t: Arity) -> u32 {
    match t.get() {
        2 => 14,
        3 => 9,
        4 => 7,
        5 => 6,
        6 | 7 => 5,
        _ => 4,
    }
}

fn hpc(t: u64, j: u32) -> Option<u64> {
    let mut s = 0u64;
    for _ in 0..j {
        s = s.checked_mul(t)?.checked_add(1)?;
    }
    Some(s)
}

fn hp_or(t: u64, j: u32, jj: u32) -> Result<u64, GenfunError> {
    hpc(t, j).ok_or(GenfunError::Overflow(jj))
}

fn tpow(t: u64, j: u32, jj: u32) -> Result<u64, GenfunError> {
    t.checked_pow(j).ok_or(GenfunError::Overflow(jj))
}

/// Partial derivative orders in `(q, u, w)` (or `(q, u, v)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DerivOrder {
    pub alpha: u8,
    pub beta: u8,
    pub gamma: u8,
}

impl DerivOrder {
    pub const VALUE: DerivOrder = DerivOrder { alpha: 0, beta: 0, gamma: 0 };

    pub fn new(alpha: u8, beta: u8, gamma: u8) -> Result<Self, GenfunError> {
        if alpha + beta + gamma > 2 {
            return Err(GenfunError::Order(alpha, beta, gamma));
        }
        Ok(DerivOrder { alpha, beta, gamma })
    }

    /// Shorthand for orders known to be valid.
    pub const fn of(alpha: u8, beta: u8, gamma: u8) -> Self {
        DerivOrder { alpha, beta, gamma }
    }

    pub fn total(self) -> u8 {
        self.alpha + self.beta + self.gamma
    }

    /// All orders of total degree ≤ 2.
    pub fn all() -> [DerivOrder; 10] {
        let mut out = [DerivOrder::VALUE; 10];
        for (k, o) in out.iter_mut().enumerate() {
            *o = order_of(k);
        }
        out
    }

    fn index(self) -> usize {
        match (self.alpha, self.beta, self.gamma) {
            (0, 0, 0) => 0,
            (1, 0, 0) => 1,
            (0, 1, 0) => 2,
            (0, 0, 1) => 3,
            (2, 0, 0) => 4,
            (0, 2, 0) => 5,
            (0, 0, 2) => 6,
            (1, 1, 0) => 7,
            (1, 0, 1) => 8,
            (0, 1, 1) => 9,
            _ => unreachable!("validated order"),
        }
    }

    /// `α!·β!·γ!`.
    fn factorials(self) -> f64 {
        let f = |k: u8| if k == 2 { 2.0 } else { 1.0 };
        f(self.alpha) * f(self.beta) * f(self.gamma)
    }
}

fn order_of(k: usize) -> DerivOrder {
    const T: [(u8, u8, u8); 10] = [
        (0, 0, 0),
        (1, 0, 0),
        (0, 1, 0),
        (0, 0, 1),
        (2, 0, 0),
        (0, 2, 0),
        (0, 0, 2),
        (1, 1, 0),
        (1, 0, 1),
        (0, 1, 1),
    ];
    let (a, b, c) = T[k];
    DerivOrder::of(a, b, c)
}

/// Index of the mixed coefficient for first-order slots `x < y` (1-based).
const fn mixed(x: usize, y: usize) -> usize {
    match (x, y) {
        (1, 2) => 7,
        (1, 3) => 8,
        _ => 9,
    }
}

/// Taylor coefficients of total degree ≤ 2 in three variables, ordered
/// `1, q, u, w, q², u², w², qu, qw, uw`.
#[derive(Debug, Clone, Copy)]
pub struct Jet<S> {
    pub c: [S; 10],
}

impl<S: Scalar> Jet<S> {
    pub fn constant(x: S) -> Self {
        let mut c = [S::zero(); 10];
        c[0] = x;
        Jet { c }
    }

    /// `x^e` in variable slot `var` (1, 2 or 3) around the value `x`.
    pub fn power(x: S, e: u64, var: usize) -> Self {
        let mut j = Jet::constant(S::zero());
        j.c[0] = x.pow_u(e);
        if e >= 1 {
            j.c[var] = x.pow_u(e - 1).scale_int(e);
        }
        if e >= 2 {
            j.c[var + 3] = x.pow_u(e - 2).scale_int(e * (e - 1) / 2);
        }
        j
    }

    pub fn value(&self) -> S {
        self.c[0]
    }

    /// The partial derivative `∂^{α+β+γ}` at the expansion point.
    pub fn deriv(&self, d: DerivOrder) -> S {
        let c = self.c[d.index()];
        let f = d.factorials();
        if f == 1.0 {
            c
        } else {
            c.scale_int(f as u64)
        }
    }

    pub fn recip(&self) -> Result<Self, IntervalError> {
        let a = &self.c;
        let r0 = S::one().checked_div(a[0])?;
        let mut r = [S::zero(); 10];
        r[0] = r0;
        for x in 1..=3 {
            r[x] = -(a[x] * r0 * r0);
        }
        for x in 1..=3 {
            r[x + 3] = -((a[x] * r[x] + a[x + 3] * r0) * r0);
        }
        for x in 1..=3 {
            for y in x + 1..=3 {
                let m = mixed(x, y);
                r[m] = -((a[x] * r[y] + a[y] * r[x] + a[m] * r0) * r0);
            }
        }
        Ok(Jet { c: r })
    }

    pub fn scale(&self, k: S) -> Self {
        let mut c = self.c;
        for v in c.iter_mut() {
            *v = *v * k;
        }
        Jet { c }
    }
}

impl<S: Scalar> Add for Jet<S> {
    type Output = Jet<S>;
    fn add(self, rhs: Jet<S>) -> Jet<S> {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(rhs.c) {
            *a = *a + b;
        }
        Jet { c }
    }
}

impl<S: Scalar> Sub for Jet<S> {
    type Output = Jet<S>;
    fn sub(self, rhs: Jet<S>) -> Jet<S> {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(rhs.c) {
            *a = *a - b;
        }
        Jet { c }
    }
}

impl<S: Scalar> Neg for Jet<S> {
    type Output = Jet<S>;
    fn neg(self) -> Jet<S> {
        let mut c = self.c;
        for a in c.iter_mut() {
            *a = -*a;
        }
        Jet { c }
    }
}

impl<S: Scalar> Mul for Jet<S> {
    type Output = Jet<S>;
    fn mul(self, rhs: Jet<S>) -> Jet<S> {
        let (a, b) = (&self.c, &rhs.c);
        let mut c = [S::zero(); 10];
        c[0] = a[0] * b[0];
        for x in 1..=3 {
            c[x] = a[0] * b[x] + a[x] * b[0];
            c[x + 3] = a[0] * b[x + 3] + a[x] * b[x] + a[x + 3] * b[0];
        }
        for x in 1..=3 {
            for y in x + 1..=3 {
                let m = mixed(x, y);
                c[m] = a[0] * b[m] + a[x] * b[y] + a[y] * b[x] + a[m] * b[0];
            }
        }
        Jet { c }
    }
}

/// Enclosure of the finite part together with a bound on the neglected tail.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CertifiedValue<S> {
    pub enclosure: S,
    pub tail_bound: f64,
    pub j: u32,
}

impl<S: Scalar> CertifiedValue<S> {
    /// Enclosure of the exact infinite-sum value.
    pub fn value(&self) -> S {
        self.enclosure.inflate(self.tail_bound)
    }
}

/// All derivatives of total order ≤ 2 with one tail bound per order.
#[derive(Debug, Clone, Copy)]
pub struct CertifiedJet<S> {
    pub jet: Jet<S>,
    pub tails: [f64; 10],
    pub j: u32,
}

impl<S: Scalar> CertifiedJet<S> {
    pub fn get(&self, d: DerivOrder) -> CertifiedValue<S> {
        CertifiedValue { enclosure: self.jet.deriv(d), tail_bound: self.tails[d.index()], j: self.j }
    }

    /// Certified enclosure of the exact derivative.
    pub fn at(&self, d: DerivOrder) -> S {
        self.get(d).value()
    }

    fn negate_plus_one(mut self) -> Self {
        self.jet = -self.jet;
        self.jet.c[0] = S::one() + self.jet.c[0];
        self
    }
}

fn pt(x: f64) -> Interval {
    Interval::point(x)
}

fn upper(x: Interval) -> f64 {
    x.hi()
}

/// `|x_i|` upper bound for `x_i = q^{hp(i)} u^{t^i}` from the moduli, written as
/// `(|q|·|u|^{t−1})^{hp(i)}·|u|` to avoid overflow.
fn x_mod(t: u64, qm: f64, um: f64, i: u32, jj: u32) -> Result<Interval, GenfunError> {
    let base = pt(qm) * pt(um).pow_int(t - 1);
    Ok(base.pow_int(hp_or(t, i, jj)?) * pt(um))
}

/// Ratio `|w|·X/(1−X)`, `X = |q|^{hp(J+1)}|u|^{t^{J+1}}`, of the value tail.
pub fn tail_ratio_uw(t: Arity, qm: f64, um: f64, wm: f64, j: u32) -> Result<f64, GenfunError> {
    let x = x_mod(t.as_u64(), qm, um, j + 1, j)?;
    let den = Interval::ONE - x;
    if den.lo() <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(upper((pt(wm) * x).div(den)?))
}

/// Value tail `|b − b_J|` for moduli bounds `(qm, um, wm)`.
///
/// `denoms[i-1]` may supply lower bounds for `|1 − x_i|`; otherwise `1 − |x_i|`
/// is used, which makes the bound monotone in every modulus.
fn tail_value_uw(t: Arity, qm: f64, um: f64, wm: f64, j: u32, denoms: Option<&[f64]>) -> Result<f64, GenfunError> {
    let tt = t.as_u64();
    if !(upper(pt(qm) * pt(um).pow_int(tt - 1)) < 1.0) {
        return Err(GenfunError::Hypothesis(format!("|q·u^(t−1)| < 1 fails for |q| ≤ {qm}, |u| ≤ {um}")));
    }
    let ratio = tail_ratio_uw(t, qm, um, wm, j)?;
    if !(ratio < 1.0) {
        return Err(GenfunError::TailRatio { which: "value tail", ratio, j });
    }
    let mut prod = pt(wm).pow_int(j as u64);
    for i in 1..=j {
        let x = x_mod(tt, qm, um, i, j)?;
        let d = match denoms {
            Some(d) => pt(d[i as usize - 1]),
            None => Interval::ONE - x,
        };
        if d.lo() <= 0.0 {
            return Err(GenfunError::Hypothesis(format!("1 − |x_{i}| is not positive")));
        }
        prod = (prod * x).div(pt(d.lo()))?;
    }
    Ok(upper(prod.div(Interval::ONE - pt(ratio))?))
}

/// Literal derivative tail for `u ≡ 1`, `β = 0`, `|q| ≤ 2/3`, `|w| ≤ 3/2`.
fn tail_deriv_u1(t: Arity, d: DerivOrder, j: u32) -> Result<f64, GenfunError> {
    let tt = t.as_u64();
    let five_sixths = Interval::ratio(5, 6)?;
    // 1/((6/5)^h − 1) = (5/6)^h / (1 − (5/6)^h)
    let f = |h: u64| -> Result<Interval, GenfunError> {
        let p = five_sixths.pow_int(h);
        Ok(p.div(Interval::ONE - p)?)
    };
    let five_thirds = Interval::ratio(5, 3)?;
    let ratio = five_thirds * f(hp_or(tt, j + 1, j)?)?;
    if !(ratio.hi() < 1.0) {
        return Err(GenfunError::TailRatio { which: "derivative tail", ratio: ratio.hi(), j });
    }
    let mut prod = five_thirds.pow_int(j as u64);
    for i in 1..=j {
        prod = prod * f(hp_or(tt, i, j)?)?;
    }
    let k = d.factorials() * 6f64.powi((d.alpha + d.gamma) as i32);
    Ok(upper((prod * pt(k)).div(Interval::ONE - ratio)?))
}

/// Cauchy radii in `q`, `u`, `w`.
fn radii(t: Arity) -> (f64, f64, f64) {
    let tt = t.as_u64() as f64;
    // ln√2 / t², rounded down
    let ru = (std::f64::consts::LN_2 / 2.0 / (tt * tt)) * (1.0 - 1e-12);
    (1.0 / 6.0, ru, 1.0 / 6.0)
}

/// Derivative tail via Cauchy's estimate on a polydisc around the moduli:
/// `α!β!γ!/(ρ_q^α ρ_u^β ρ_w^γ) · sup |b − b_J|` over the enlarged moduli.
fn tail_deriv_cauchy<F>(d: DerivOrder, rad: (f64, f64, f64), m: (f64, f64, f64), value_tail: F) -> Result<f64, GenfunError>
where
    F: Fn(f64, f64, f64) -> Result<f64, GenfunError>,
{
    let grow = |x: f64, r: f64, k: u8| if k > 0 { upper(pt(x) + pt(r)) } else { x };
    let sup = value_tail(grow(m.0, rad.0, d.alpha), grow(m.1, rad.1, d.beta), grow(m.2, rad.2, d.gamma))?;
    let mut den = Interval::ONE;
    den = den * pt(rad.0).pow_int(d.alpha as u64);
    den = den * pt(rad.1).pow_int(d.beta as u64);
    den = den * pt(rad.2).pow_int(d.gamma as u64);
    Ok(upper((pt(sup) * pt(d.factorials())).div(den)?))
}

/// Finite part `b_J(q,u,1,w) = Σ_{1≤j<J} (−1)^{j−1} w^j Π_{i≤j} x_i/(1−x_i)`
/// as a jet, and the lower bounds of `|1 − x_i|` for `i ≤ J`.
fn b_finite<S: Scalar>(t: Arity, q: S, u: S, w: S, j: u32) -> Result<(Jet<S>, Vec<f64>), GenfunError> {
    let tt = t.as_u64();
    let mut sum = Jet::constant(S::zero());
    let mut prod = Jet::constant(S::one());
    let mut denoms = Vec::with_capacity(j as usize);
    for i in 1..=j {
        let x = Jet::power(q, hp_or(tt, i, j)?, 1) * Jet::power(u, tpow(tt, i, j)?, 2);
        let one_minus = Jet::constant(S::one()) - x;
        denoms.push(one_minus.c[0].mig());
        if i == j {
            break;
        }
        prod = prod * x * one_minus.recip()?;
        let term = prod * Jet::power(w, i as u64, 3);
        sum = if i % 2 == 1 { sum + term } else { sum - term };
    }
    Ok((sum, denoms))
}

fn check_finite<S: Scalar>(jet: &Jet<S>) -> Result<(), GenfunError> {
    if jet.c.iter().all(|c| c.mag().is_finite()) {
        Ok(())
    } else {
        Err(GenfunError::Hypothesis("evaluation overflowed; arguments outside the convergence region".into()))
    }
}

/// `b(q,u,1,w)` and all its derivatives of total order ≤ 2.
pub fn eval_b_jet<S: Scalar>(t: Arity, q: S, u: S, w: S, j: u32) -> Result<CertifiedJet<S>, GenfunError> {
    if j == 0 {
        return Err(GenfunError::TailRatio { which: "value tail", ratio: f64::INFINITY, j });
    }
    let (qm, um, wm) = (q.mag(), u.mag(), w.mag());
    let (jet, denoms) = b_finite(t, q, u, w, j)?;
    check_finite(&jet)?;
    let mut tails = [0.0; 10];
    tails[0] = tail_value_uw(t, qm, um, wm, j, Some(&denoms))?;
    let u_pinned = u.is_exactly(1.0);
    let rad = radii(t);
    for k in 1..10 {
        let d = order_of(k);
        let cauchy = tail_deriv_cauchy(d, rad, (qm, um, wm), |a, b, c| tail_value_uw(t, a, b, c, j, None));
        let literal = if u_pinned && d.beta == 0 && qm <= 2.0 / 3.0 && wm <= 1.5 {
            Some(tail_deriv_u1(t, d, j))
        } else {
            None
        };
        tails[k] = match (literal, cauchy) {
            (Some(Ok(a)), Ok(b)) => a.min(b),
            (Some(Ok(a)), Err(_)) => a,
            (_, Ok(b)) => b,
            // no usable bound here; the enclosure of this entry is unbounded
            (_, Err(_)) => f64::INFINITY,
        };
    }
    Ok(CertifiedJet { jet, tails, j })
}

/// One derivative of `b(q,u,1,w)`.
pub fn eval_b<S: Scalar>(t: Arity, q: S, u: S, w: S, deriv: DerivOrder, j: u32) -> Result<CertifiedValue<S>, GenfunError> {
    let d = DerivOrder::new(deriv.alpha, deriv.beta, deriv.gamma)?;
    Ok(eval_b_jet(t, q, u, w, j)?.get(d))
}

/// `D(q,w) = 1 − b(q,1,1,w)` with all derivatives (slot 2 unused).
pub fn eval_d_height_jet<S: Scalar>(t: Arity, q: S, w: S, j: u32) -> Result<CertifiedJet<S>, GenfunError> {
    Ok(eval_b_jet(t, q, S::one(), w, j)?.negate_plus_one())
}

pub fn eval_d_height<S: Scalar>(t: Arity, q: S, w: S, deriv: DerivOrder, j: u32) -> Result<CertifiedValue<S>, GenfunError> {
    if deriv.beta != 0 {
        return Err(GenfunError::Hypothesis("β must be 0 when u is pinned to 1".into()));
    }
    let d = DerivOrder::new(deriv.alpha, 0, deriv.gamma)?;
    Ok(eval_d_height_jet(t, q, w, j)?.get(d))
}

/// Ratio `|q|^{t^J}(1 + |v|/(1 − |q|^{hp(J)}))` of the depths tail.
pub fn tail_ratio_v(t: Arity, qm: f64, vm: f64, j: u32) -> Result<f64, GenfunError> {
    let tt = t.as_u64();
    let qh = pt(qm).pow_int(hp_or(tt, j, j)?);
    let den = Interval::ONE - qh;
    if den.lo() <= 0.0 {
        return Ok(f64::INFINITY);
    }
    let r = pt(qm).pow_int(tpow(tt, j, j)?) * (Interval::ONE + pt(vm).div(den)?);
    Ok(upper(r))
}

fn tail_value_v(t: Arity, qm: f64, vm: f64, j: u32, denoms: Option<&[f64]>) -> Result<f64, GenfunError> {
    let tt = t.as_u64();
    if !(qm < 1.0) {
        return Err(GenfunError::Hypothesis(format!("|q| < 1 fails for |q| ≤ {qm}")));
    }
    let ratio = tail_ratio_v(t, qm, vm, j)?;
    if !(ratio < 1.0) {
        return Err(GenfunError::TailRatio { which: "depths value tail", ratio, j });
    }
    let den = |i: u32| -> Result<Interval, GenfunError> {
        let d = match denoms {
            Some(d) => pt(d[i as usize - 1]),
            None => Interval::ONE - pt(qm).pow_int(hp_or(tt, i, j)?),
        };
        if d.lo() <= 0.0 {
            return Err(GenfunError::Hypothesis(format!("1 − |q|^hp({i}) is not positive")));
        }
        Ok(pt(d.lo()))
    };
    let mut b = (pt(vm) * pt(qm).pow_int(hp_or(tt, j, j)?)).div(den(j)?)?;
    for i in 1..j {
        b = b * (Interval::ONE + pt(vm).div(den(i)?)?);
    }
    Ok(upper(b.div(Interval::ONE - pt(ratio))?))
}

/// Literal depths derivative tail for `|q| ≤ 2/3`, `|v| ≤ 3/2`.
fn tail_deriv_v_literal(t: Arity, d: DerivOrder, j: u32) -> Result<f64, GenfunError> {
    let tt = t.as_u64();
    let s = Interval::ratio(5, 6)?;
    let ft = Interval::ratio(5, 3)?;
    let ph = s.pow_int(hp_or(tt, j, j)?);
    let ratio = s.pow_int(tpow(tt, j, j)?) * (Interval::ONE + ft.div(Interval::ONE - ph)?);
    if !(ratio.hi() < 1.0) {
        return Err(GenfunError::TailRatio { which: "depths derivative tail", ratio: ratio.hi(), j });
    }
    // (5/3)/((6/5)^h − 1) = (5/3)(5/6)^h/(1 − (5/6)^h)
    let mut b = (ft * ph).div(Interval::ONE - ph)?;
    for i in 1..j {
        let p = s.pow_int(hp_or(tt, i, j)?);
        b = b * (Interval::ONE + ft.div(Interval::ONE - p)?);
    }
    let k = d.factorials() * 6f64.powi((d.alpha + d.gamma) as i32);
    Ok(upper((b * pt(k)).div(Interval::ONE - ratio)?))
}

/// Finite part `b_J(q,1,v,1) = Σ_{1≤j<J} v x_j/(1−x_j) Π_{i<j} (1−v−x_i)/(1−x_i)`.
fn depths_finite<S: Scalar>(t: Arity, q: S, v: S, j: u32) -> Result<(Jet<S>, Vec<f64>), GenfunError> {
    let tt = t.as_u64();
    let vj = Jet::power(v, 1, 3);
    let one = Jet::constant(S::one());
    let mut sum = Jet::constant(S::zero());
    let mut prod = one;
    let mut denoms = Vec::with_capacity(j as usize);
    for i in 1..=j {
        let x = Jet::power(q, hp_or(tt, i, j)?, 1);
        let om = one - x;
        denoms.push(om.c[0].mig());
        if i == j {
            break;
        }
        let inv = om.recip()?;
        sum = sum + prod * vj * x * inv;
        prod = prod * (one - vj - x) * inv;
    }
    Ok((sum, denoms))
}

/// `D(q,v) = 1 − b(q,1,v,1)`; the `v`-derivatives sit in the third slot.
pub fn eval_d_depths_jet<S: Scalar>(t: Arity, q: S, v: S, j: u32) -> Result<CertifiedJet<S>, GenfunError> {
    if j == 0 {
        return Err(GenfunError::TailRatio { which: "depths value tail", ratio: f64::INFINITY, j });
    }
    let (qm, vm) = (q.mag(), v.mag());
    let (jet, denoms) = depths_finite(t, q, v, j)?;
    check_finite(&jet)?;
    let mut tails = [0.0; 10];
    tails[0] = tail_value_v(t, qm, vm, j, Some(&denoms))?;
    let rad = radii(t);
    for k in 1..10 {
        let d = order_of(k);
        if d.beta > 0 {
            // b(q,1,v,1) does not depend on the u-slot
            tails[k] = 0.0;
            continue;
        }
        let cauchy = tail_deriv_cauchy(d, rad, (qm, 1.0, vm), |a, _, c| tail_value_v(t, a, c, j, None));
        let literal = if qm <= 2.0 / 3.0 && vm <= 1.5 { Some(tail_deriv_v_literal(t, d, j)) } else { None };
        tails[k] = match (literal, cauchy) {
            (Some(Ok(a)), Ok(b)) => a.min(b),
            (Some(Ok(a)), Err(_)) => a,
            (_, Ok(b)) => b,
            (_, Err(_)) => f64::INFINITY,
        };
    }
    Ok(CertifiedJet { jet, tails, j }.negate_plus_one())
}

pub fn eval_d_depths<S: Scalar>(t: Arity, q: S, v: S, deriv: DerivOrder, j: u32) -> Result<CertifiedValue<S>, GenfunError> {
    if deriv.beta != 0 {
        return Err(GenfunError::Hypothesis("β must be 0 for the depths denominator".into()));
    }
    let d = DerivOrder::new(deriv.alpha, 0, deriv.gamma)?;
    Ok(eval_d_depths_jet(t, q, v, j)?.get(d))
}

/// `D(q,w) = 1 − b(q,1,1,w)` without derivatives; cheaper than the jet for
/// zero-exclusion sweeps.
pub fn eval_d_height_value<S: Scalar>(t: Arity, q: S, w: S, j: u32) -> Result<CertifiedValue<S>, GenfunError> {
    if j == 0 {
        return Err(GenfunError::TailRatio { which: "value tail", ratio: f64::INFINITY, j });
    }
    let tt = t.as_u64();
    let mut sum = S::zero();
    let mut prod = S::one();
    let mut denoms = Vec::with_capacity(j as usize);
    for i in 1..=j {
        let x = q.pow_u(hp_or(tt, i, j)?);
        let om = S::one() - x;
        denoms.push(om.mig());
        if i == j {
            break;
        }
        prod = prod * x.checked_div(om)?;
        let term = prod * w.pow_u(i as u64);
        sum = if i % 2 == 1 { sum + term } else { sum - term };
    }
    if !sum.mag().is_finite() {
        return Err(GenfunError::Hypothesis("evaluation overflowed; arguments outside the convergence region".into()));
    }
    let tail = tail_value_uw(t, q.mag(), 1.0, w.mag(), j, Some(&denoms))?;
    Ok(CertifiedValue { enclosure: S::one() - sum, tail_bound: tail, j })
}

/// `D(q,v) = 1 − b(q,1,v,1)` without derivatives.
pub fn eval_d_depths_value<S: Scalar>(t: Arity, q: S, v: S, j: u32) -> Result<CertifiedValue<S>, GenfunError> {
    if j == 0 {
        return Err(GenfunError::TailRatio { which: "depths value tail", ratio: f64::INFINITY, j });
    }
    let tt = t.as_u64();
    let mut sum = S::zero();
    let mut prod = S::one();
    let mut denoms = Vec::with_capacity(j as usize);
    for i in 1..=j {
        let x = q.pow_u(hp_or(tt, i, j)?);
        let om = S::one() - x;
        denoms.push(om.mig());
        if i == j {
            break;
        }
        sum = sum + (prod * v * x).checked_div(om)?;
        prod = (prod * (S::one() - v - x)).checked_div(om)?;
    }
    if !sum.mag().is_finite() {
        return Err(GenfunError::Hypothesis("evaluation overflowed; arguments outside the convergence region".into()));
    }
    let tail = tail_value_v(t, q.mag(), v.mag(), j, Some(&denoms))?;
    Ok(CertifiedValue { enclosure: S::one() - sum, tail_bound: tail, j })
}

/// Upper bound `1/U − ln√2/t²` of the admissible `|u|` for shifted
/// arguments, with `U = 1 − 19 ln 2/80` for `t = 2` and `1 − ln 2/t²` otherwise.
pub fn u_domain_radius(t: Arity) -> Interval {
    let ln2 = Interval::new(std::f64::consts::LN_2, std::f64::consts::LN_2.next_up()).expect("ordered");
    let tt = t.as_u64() as f64;
    let t2 = pt(tt * tt);
    let u = if t.get() == 2 {
        Interval::ONE - ln2 * Interval::ratio(19, 80).expect("nonzero")
    } else {
        Interval::ONE - ln2.div(t2).expect("nonzero")
    };
    u.recip().expect("positive") - ln2.scale(0.5).div(t2).expect("nonzero")
}

/// Derivatives of `b` at `(q, q^{hp(j)}, 1)`, for the shifted sums.
pub fn eval_b_at_shifted_u_jet(t: Arity, q: Interval, level: u32, j: u32) -> Result<CertifiedJet<Interval>, GenfunError> {
    let u = if level == 0 { Interval::ONE } else { q.pow_int(hp_or(t.as_u64(), level, j)?) };
    if !(u.mag() < u_domain_radius(t).lo()) {
        return Err(GenfunError::Hypothesis(format!("shifted u = q^hp({level}) lies outside |u| < 1/U − ln√2/t²")));
    }
    eval_b_jet(t, q, u, Interval::ONE, j)
}

pub fn eval_b_at_shifted_u(t: Arity, q: Interval, level: u32, deriv: DerivOrder, j: u32) -> Result<CertifiedValue<Interval>, GenfunError> {
    let d = DerivOrder::new(deriv.alpha, deriv.beta, deriv.gamma)?;
    Ok(eval_b_at_shifted_u_jet(t, q, level, j)?.get(d))
}

/// `a(q,1,1,1) = Σ_{j≥0} (−1)^j q^{hp(j)} Π_{i≤j} x_i/(1−x_i)` for real `q`.
///
/// The ratio of consecutive terms beyond `J` is at most
/// `|q|^{t^J}·X/(1−X)` with `X = |q|^{hp(J+1)}`.
pub fn eval_a(t: Arity, q: Interval, j: u32) -> Result<CertifiedValue<Interval>, GenfunError> {
    let tt = t.as_u64();
    let mut sum = Interval::ZERO;
    let mut prod = Interval::ONE;
    for i in 0..j {
        if i > 0 {
            let x = q.pow_int(hp_or(tt, i, j)?);
            prod = prod * x.div(Interval::ONE - x)?;
        }
        let term = q.pow_int(hp_or(tt, i, j)?) * prod;
        sum = if i % 2 == 0 { sum + term } else { sum - term };
    }
    let qm = q.mag();
    let x = |i: u32| -> Result<Interval, GenfunError> { Ok(pt(qm).pow_int(hp_or(tt, i, j)?)) };
    let xj1 = x(j + 1)?;
    let ratio = pt(qm).pow_int(tpow(tt, j, j)?) * xj1.div(Interval::ONE - xj1)?;
    if !(ratio.hi() < 1.0) {
        return Err(GenfunError::TailRatio { which: "numerator tail", ratio: ratio.hi(), j });
    }
    let mut first = x(j)?;
    for i in 1..=j {
        let xi = x(i)?;
        first = first * xi.div(Interval::ONE - xi)?;
    }
    let tail = upper(first.div(Interval::ONE - ratio)?);
    Ok(CertifiedValue { enclosure: sum, tail_bound: tail, j })
}

/// Convenience for complex arguments on the unit circle.
pub fn eval_d_height_complex(t: Arity, q: ComplexBox, w: ComplexBox, j: u32) -> Result<CertifiedValue<ComplexBox>, GenfunError> {
    eval_d_height(t, q, w, DerivOrder::VALUE, j)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t2() -> Arity {
        Arity::new(2).unwrap()
    }

    #[test]
    fn zero_arguments() {
        let z = Interval::ZERO;
        let c = eval_b(t2(), z, z, z, DerivOrder::VALUE, 14).unwrap();
        assert!(c.value().contains(0.0));
        let d = eval_d_height(t2(), z, Interval::ONE, DerivOrder::VALUE, 14).unwrap();
        assert!(d.value().contains(1.0));
    }

    #[test]
    fn jet_reciprocal_roundtrip() {
        let q = Interval::point(0.3);
        let j = Jet::power(q, 3, 1) * Jet::power(Interval::point(0.7), 2, 3) + Jet::constant(Interval::ONE);
        let p = j * j.recip().unwrap();
        assert!(p.c[0].contains(1.0));
        for k in 1..10 {
            assert!(p.c[k].contains(0.0), "{k}: {}", p.c[k]);
        }
    }

    #[test]
    fn depths_at_v_one_matches_height() {
        let q = Interval::point(0.5);
        let a = eval_d_depths(t2(), q, Interval::ONE, DerivOrder::VALUE, 10).unwrap().value();
        let b = eval_d_height(t2(), q, Interval::ONE, DerivOrder::VALUE, 10).unwrap().value();
        assert!(a.overlaps(&b));
    }

    #[test]
    fn value_paths_match_jets() {
        let q = ComplexBox::point(0.31, -0.2);
        let w = ComplexBox::point(0.6, 0.8);
        let a = eval_d_height_value(t2(), q, w, 12).unwrap().value();
        let b = eval_d_height(t2(), q, w, DerivOrder::VALUE, 12).unwrap().value();
        assert!(a.overlaps(&b));
        let a = eval_d_depths_value(t2(), q, w, 12).unwrap().value();
        let b = eval_d_depths(t2(), q, w, DerivOrder::VALUE, 12).unwrap().value();
        assert!(a.overlaps(&b));
    }

    #[test]
    fn order_limit() {
        assert!(DerivOrder::new(2, 1, 0).is_err());
    }
}
