//! Certified dominant singularity and the asymptotic constants of mean and
//! variance for every analysed parameter.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::genfun::{self, CertifiedJet, DerivOrder, GenfunError};
use crate::interval::{Interval, IntervalError};
use crate::model::{hp, Arity};
use crate::series::{self, SeriesError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymptoticsError {
    #[error("could not certify the sign of D(q) at q = {q}: the tail bound {tail:e} of the J = {j} truncation is not below |D_J| = {value:e}; increase J")]
    SignUndecided { q: f64, tail: f64, value: f64, j: u32 },
    #[error("bracket for q0 reached width {width:e} above the target {target:e}; increase J")]
    Precision { width: f64, target: f64 },
    #[error("derivative of D is not certified negative on the q0 enclosure")]
    NotSimple,
    #[error("{0} enclosure is not strictly positive")]
    NonPositive(&'static str),
    #[error("shifted sum ratio {0} is not below 1/t; increase J_sigma")]
    SigmaRatio(f64),
    #[error(transparent)]
    Genfun(#[from] GenfunError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Published reference values, `t = 2..10`, kept verbatim as decimal strings.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Published {
    pub t: u32,
    pub q0: &'static str,
    pub q_region: &'static str,
    pub mu_h: &'static str,
    pub sigma2_h: &'static str,
    pub mu_d: &'static str,
    pub sigma2_d: &'static str,
    pub mu_tpl: &'static str,
    pub sigma2_tpl: &'static str,
    pub mu_w: &'static str,
    pub mu_m: &'static str,
    pub sigma2_m: &'static str,
}

pub const PUBLISHED: [Published; 9] = [
    Published {
        t: 2,
        q0: "0.5573678720139932",
        q_region: "0.7131795784312742",
        mu_h: "0.5517980333242771",
        sigma2_h: "0.3191028720021838",
        mu_d: "0.4151957394337730",
        sigma2_d: "0.2449371766120133",
        mu_tpl: "0.5517980333242771",
        sigma2_tpl: "0.4254704960029117",
        mu_w: "1.710776751014961",
        mu_m: "3.3008907135661046",
        sigma2_m: "3.4340283494347781",
    },
    Published {
        t: 3,
        q0: "0.5206401166257250",
        q_region: "0.6307447647757403",
        mu_h: "0.5330219170893142",
        sigma2_h: "0.2640876574238174",
        mu_d: "0.4869093777539261",
        sigma2_d: "0.2893609775712220",
        mu_tpl: "0.7995328756339714",
        sigma2_tpl: "0.7922629722714524",
        mu_w: "0.7660531443158307",
        mu_m: "5.4223250580971105",
        sigma2_m: "10.9926467981432752",
    },
    Published {
        t: 4,
        q0: "0.5090030531391631",
        q_region: "0.5930691701039086",
        mu_h: "0.5216130806307567",
        sigma2_h: "0.2465933142213578",
        mu_d: "0.5024588321518999",
        sigma2_d: "0.2741197923680785",
        mu_tpl: "1.0432261612615134",
        sigma2_tpl: "1.3151643425139087",
        mu_w: "0.4936068552417457",
        mu_m: "7.5391743055684431",
        sigma2_m: "23.0048877906448059",
    },
    Published {
        t: 5,
        q0: "0.5042116835293617",
        q_region: "0.5720078345052473",
        mu_h: "0.5137644952434437",
        sigma2_h: "0.2404182939877220",
        mu_d: "0.5050331956677906",
        sigma2_d: "0.2607084483093273",
        mu_tpl: "1.2844112381086093",
        sigma2_tpl: "2.0034857832310170",
        mu_w: "0.3650919029615249",
        mu_m: "9.6531072700455410",
        sigma2_m: "39.9382006717564049",
    },
    Published {
        t: 6,
        q0: "0.5020339464245723",
        q_region: "0.559428931713329",
        mu_h: "0.5084950082062925",
        sigma2_h: "0.2396633993742431",
        mu_d: "0.5043408269340902",
        sigma2_d: "0.2530808413006747",
        mu_tpl: "1.5254850246188775",
        sigma2_tpl: "2.8759607924909180",
        mu_w: "0.2902388863790219",
        mu_m: "11.7525465927985450",
        sigma2_m: "61.9509728363450114",
    },
    Published {
        t: 7,
        q0: "0.5009982119507272",
        q_region: "0.550735002693058",
        mu_h: "0.5051047365215813",
        sigma2_h: "0.2411570855092153",
        mu_d: "0.5030838633817897",
        sigma2_d: "0.2495578056054622",
        mu_tpl: "1.7678665778255347",
        sigma2_tpl: "3.9388990633171834",
        mu_w: "0.2411430286905858",
        mu_m: "13.8311837210749625",
        sigma2_m: "88.8290211521323761",
    },
    Published {
        t: 8,
        q0: "0.5004941016343997",
        q_region: "0.544259198784997",
        mu_h: "0.5030001253275540",
        sigma2_h: "0.2432575483836212",
        mu_d: "0.5020050053196332",
        sigma2_d: "0.2483362931739359",
        mu_tpl: "2.0120005013102160",
        sigma2_tpl: "5.1894943655172528",
        mu_w: "0.2063933963643483",
        mu_m: "15.8889617566427750",
        sigma2_m: "120.2125697911546141",
    },
    Published {
        t: 9,
        q0: "0.500245704703080",
        q_region: "0.539248917438516",
        mu_h: "0.5017308605343554",
        sigma2_h: "0.2452173961787762",
        mu_d: "0.5012375070905982",
        sigma2_d: "0.2482103208441571",
        mu_tpl: "2.2577888724045994",
        sigma2_tpl: "6.6208696968269586",
        mu_w: "0.1804647899046739",
        mu_m: "17.9291240142580452",
        sigma2_m: "155.7621950801096596",
    },
    Published {
        t: 10,
        q0: "0.5001224896234884",
        q_region: "0.535257359027998",
        mu_h: "0.5009832278618640",
        sigma2_h: "0.2467757623911673",
        mu_d: "0.5007377066674932",
        sigma2_d: "0.2485046286268308",
        mu_tpl: "2.5049161393093200",
        sigma2_tpl: "8.2258587463722461",
        mu_w: "0.1603561167643597",
        mu_m: "19.9558689242933884",
        sigma2_m: "195.2366537978909468",
    },
];

pub fn published(t: Arity) -> Option<&'static Published> {
    PUBLISHED.iter().find(|p| p.t == t.get())
}

/// Exact value of a decimal literal such as `"0.5573678720139932"`.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let den = num_traits::pow(BigInt::from(10u32), frac.len());
    let r = BigRational::new(digits, den);
    Some(if neg { -r } else { r })
}

/// Certified simple zero of `D(q) = 1 − b(q,1,1,1)`.
#[derive(Debug, Clone, Serialize)]
pub struct SingularityCert {
    pub t: Arity,
    pub q0: Interval,
    pub j_used: u32,
    /// `D` at the left endpoint (positive).
    pub d_left: Interval,
    /// `D` at the right endpoint (negative).
    pub d_right: Interval,
    /// `∂D/∂q` over the whole enclosure (negative).
    pub dq: Interval,
}

pub const DEFAULT_PRECISION: f64 = 1e-13;

/// q₀ precision used for the constants tables: the tightest certifiable
/// bracket, since the variances amplify the q₀ width by up to ~10⁴.
pub const REPORT_PRECISION: f64 = 0.0;

fn d_at(t: Arity, q: f64, j: u32) -> Result<Interval, AsymptoticsError> {
    let c = genfun::eval_d_height(t, Interval::point(q), Interval::ONE, DerivOrder::VALUE, j)?;
    Ok(c.value())
}

/// Bisection on the certified sign of `D(q)` starting from `[1/2, 1 − 0.72/t]`.
///
/// A `precision` of zero asks for the tightest bracket the evaluation of `D`
/// can certify; otherwise the result has width at most `precision`.
pub fn solve_q0(t: Arity, precision: f64, j: u32) -> Result<SingularityCert, AsymptoticsError> {
    let mut lo = 0.5;
    let mut hi = 1.0 - 0.72 / t.as_u64() as f64;
    let mut d_lo = d_at(t, lo, j)?;
    let mut d_hi = d_at(t, hi, j)?;
    let undecided = |q: f64| -> AsymptoticsError {
        match genfun::eval_d_height(t, Interval::point(q), Interval::ONE, DerivOrder::VALUE, j) {
            Ok(c) => AsymptoticsError::SignUndecided { q, tail: c.tail_bound, value: c.enclosure.mag(), j },
            Err(e) => e.into(),
        }
    };
    if !d_lo.is_positive() {
        return Err(undecided(lo));
    }
    if !d_hi.is_negative() {
        return Err(undecided(hi));
    }
    let mut stuck = None;
    while hi - lo > precision {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let d = d_at(t, mid, j)?;
        if d.is_positive() {
            lo = mid;
            d_lo = d;
        } else if d.is_negative() {
            hi = mid;
            d_hi = d;
        } else {
            stuck = Some(mid);
            break;
        }
    }
    if let Some(m) = stuck {
        // Shrink each side towards the undecided point separately.
        let (mut a, mut b) = (lo, m);
        while b - a > 0.0 {
            let c = 0.5 * (a + b);
            if c <= a || c >= b {
                break;
            }
            let d = d_at(t, c, j)?;
            if d.is_positive() {
                a = c;
                d_lo = d;
            } else {
                b = c;
            }
        }
        lo = a;
        let (mut a, mut b) = (m, hi);
        while b - a > 0.0 {
            let c = 0.5 * (a + b);
            if c <= a || c >= b {
                break;
            }
            let d = d_at(t, c, j)?;
            if d.is_negative() {
                b = c;
                d_hi = d;
            } else {
                a = c;
            }
        }
        hi = b;
    }
    if precision > 0.0 && hi - lo > precision {
        return Err(AsymptoticsError::Precision { width: hi - lo, target: precision });
    }
    let q0 = Interval::new(lo, hi)?;
    let dq = genfun::eval_d_height(t, q0, Interval::ONE, DerivOrder::of(1, 0, 0), j)?.value();
    if !dq.is_negative() {
        return Err(AsymptoticsError::NotSimple);
    }
    Ok(SingularityCert { t, q0, j_used: j, d_left: d_lo, d_right: d_hi, dq })
}

/// `(μ, σ²)` from the derivatives `c_{αγ}` of a denominator at `(q₀, 1)`.
fn mean_variance(jet: &CertifiedJet<Interval>, q: Interval, what: &'static str) -> Result<(Interval, Interval), AsymptoticsError> {
    let c10 = jet.at(DerivOrder::of(1, 0, 0));
    let c01 = jet.at(DerivOrder::of(0, 0, 1));
    let c20 = jet.at(DerivOrder::of(2, 0, 0));
    let c02 = jet.at(DerivOrder::of(0, 0, 2));
    let c11 = jet.at(DerivOrder::of(1, 0, 1));
    let mu = c01.div(c10 * q)?;
    let num = c01.sqr() * c20 * q + c01 * c10.sqr() * q - (c01 * c10 * c11 * q).scale(2.0)
        + c02 * c10.sqr() * q
        + c01.sqr() * c10;
    let s2 = num.div(c10.pow_int(3) * q.sqr())?;
    if !s2.is_positive() {
        return Err(AsymptoticsError::NonPositive(what));
    }
    Ok((mu, s2))
}

pub fn constants_height(cert: &SingularityCert, j: u32) -> Result<(Interval, Interval), AsymptoticsError> {
    let jet = genfun::eval_d_height_jet(cert.t, cert.q0, Interval::ONE, j)?;
    mean_variance(&jet, cert.q0, "sigma2_h")
}

pub fn constants_depths(cert: &SingularityCert, j: u32) -> Result<(Interval, Interval), AsymptoticsError> {
    let jet = genfun::eval_d_depths_jet(cert.t, cert.q0, Interval::ONE, j)?;
    mean_variance(&jet, cert.q0, "sigma2_d")
}

/// Mean and variance of `m` from `b_u` and `b_uu` at `(q₀, 1)`.
pub fn constants_m(cert: &SingularityCert, j: u32) -> Result<(Interval, Interval), AsymptoticsError> {
    let jet = genfun::eval_b_jet(cert.t, cert.q0, Interval::ONE, Interval::ONE, j)?;
    let bu = jet.at(DerivOrder::of(0, 1, 0));
    let buu = jet.at(DerivOrder::of(0, 2, 0));
    let s2 = buu + bu - bu.sqr();
    if !s2.is_positive() {
        return Err(AsymptoticsError::NonPositive("sigma2_m"));
    }
    Ok((bu, s2))
}

/// `μ_w = −1/((t−1) ln q₀)`.
pub fn constant_width(cert: &SingularityCert) -> Result<Interval, AsymptoticsError> {
    let t1 = Interval::point((cert.t.as_u64() - 1) as f64);
    Ok((-Interval::ONE).div(t1 * cert.q0.ln()?)?)
}

/// Operators `Φ_z = z ∂/∂z` applied to `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PhiOp {
    /// `Φ_u`
    U,
    /// `Φ_u²`
    UU,
    /// `Φ_q Φ_u`
    QU,
    /// `Φ_u Φ_w`
    UW,
}

/// Weights `M(j)` of the shifted sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SigmaWeight {
    One,
    J,
    Hp,
    HpNext,
    TwoHpNextMinusOne,
    /// `r_j = Σ_{i≤j} hp(i)/(1−q^{hp(i)})`
    R,
    TR,
    TwoTR,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SigmaSpec {
    pub weight: SigmaWeight,
    pub op: PhiOp,
}

impl SigmaSpec {
    pub const fn new(weight: SigmaWeight, op: PhiOp) -> Self {
        SigmaSpec { weight, op }
    }

    /// The pairs entering the path-length variance.
    pub const SUPPORTED: [SigmaSpec; 8] = [
        SigmaSpec::new(SigmaWeight::One, PhiOp::U),
        SigmaSpec::new(SigmaWeight::One, PhiOp::QU),
        SigmaSpec::new(SigmaWeight::Hp, PhiOp::UU),
        SigmaSpec::new(SigmaWeight::R, PhiOp::U),
        SigmaSpec::new(SigmaWeight::TwoHpNextMinusOne, PhiOp::UU),
        SigmaSpec::new(SigmaWeight::TwoTR, PhiOp::U),
        SigmaSpec::new(SigmaWeight::One, PhiOp::UW),
        SigmaSpec::new(SigmaWeight::J, PhiOp::U),
    ];
}

fn apply_phi(jet: &CertifiedJet<Interval>, op: PhiOp, q: Interval, u: Interval, w: Interval) -> Interval {
    let d = |a, b, c| jet.at(DerivOrder::of(a, b, c));
    match op {
        PhiOp::U => u * d(0, 1, 0),
        PhiOp::UU => u * d(0, 1, 0) + u.sqr() * d(0, 2, 0),
        PhiOp::QU => q * u * d(1, 1, 0),
        PhiOp::UW => u * w * d(0, 1, 1),
    }
}

/// `Σ(q₀, M, Φ) = Σ_{j≥0} (−1)^j M(j) (Φb)(q₀, q₀^{hp(j)}, 1) P_j`, with
/// `P_j = Π_{i≤j} x_i/(1−x_i)`, `x_i = q₀^{hp(i)}`.
///
/// Terms `j ≥ J_Σ` are bounded by `sup|Φb| · P_J · Σ_k M(J+k) Q^k` with
/// `Q = x_{J+1}/(1−x_{J+1})`, the sup taken over `u ∈ [0, q₀^{hp(J)}]`.
pub fn sigma_sum(t: Arity, q0: Interval, spec: SigmaSpec, j_sigma: u32, j: u32) -> Result<Interval, AsymptoticsError> {
    let tt = t.as_u64();
    let tf = Interval::point(tt as f64);
    let x = |i: u32| q0.pow_int(hp(tt, i));
    let mut sum = Interval::ZERO;
    let mut p = Interval::ONE;
    let mut r = Interval::ZERO;
    for jj in 0..j_sigma {
        if jj > 0 {
            let xi = x(jj);
            let om = Interval::ONE - xi;
            p = p * xi.div(om)?;
            r = r + Interval::point(hp(tt, jj) as f64).div(om)?;
        }
        let weight = match spec.weight {
            SigmaWeight::One => Interval::ONE,
            SigmaWeight::J => Interval::point(jj as f64),
            SigmaWeight::Hp => Interval::point(hp(tt, jj) as f64),
            SigmaWeight::HpNext => Interval::point(hp(tt, jj + 1) as f64),
            SigmaWeight::TwoHpNextMinusOne => Interval::point((2 * hp(tt, jj + 1) - 1) as f64),
            SigmaWeight::R => r,
            SigmaWeight::TR => tf * r,
            SigmaWeight::TwoTR => tf.scale(2.0) * r,
        };
        let jet = genfun::eval_b_at_shifted_u_jet(t, q0, jj, j)?;
        let u = if jj == 0 { Interval::ONE } else { x(jj) };
        let phi = apply_phi(&jet, spec.op, q0, u, Interval::ONE);
        let term = weight * phi * p;
        sum = if jj % 2 == 0 { sum + term } else { sum - term };
    }
    // tail
    let big_j = j_sigma;
    let xj = x(big_j);
    let p_j = p * xj.div(Interval::ONE - xj)?;
    let xn = x(big_j + 1);
    let ratio = xn.div(Interval::ONE - xn)?;
    let one_minus = Interval::ONE - ratio;
    let one_minus_t = Interval::ONE - tf * ratio;
    if !(one_minus_t.lo() > 0.0) {
        return Err(AsymptoticsError::SigmaRatio(ratio.hi()));
    }
    let jf = Interval::point(big_j as f64);
    let tj = tf.pow_int(big_j as u64);
    let tm1 = Interval::point((tt - 1) as f64);
    let r_coef = tf.div(tm1.sqr() * (Interval::ONE - q0))?;
    let majorant = match spec.weight {
        SigmaWeight::One => Interval::ONE.div(one_minus)?,
        SigmaWeight::J => jf.div(one_minus)? + ratio.div(one_minus.sqr())?,
        SigmaWeight::Hp => tj.div(tm1 * one_minus_t)?,
        SigmaWeight::HpNext => (tj * tf).div(tm1 * one_minus_t)?,
        SigmaWeight::TwoHpNextMinusOne => (tj * tf).scale(2.0).div(tm1 * one_minus_t)?,
        SigmaWeight::R => (r_coef * tj).div(one_minus_t)?,
        SigmaWeight::TR => (tf * r_coef * tj).div(one_minus_t)?,
        SigmaWeight::TwoTR => (tf.scale(2.0) * r_coef * tj).div(one_minus_t)?,
    };
    let u_box = Interval::new(0.0, xj.hi())?;
    let jet = genfun::eval_b_jet(t, q0, u_box, Interval::ONE, j)?;
    let sup = apply_phi(&jet, spec.op, q0, u_box, Interval::ONE).mag();
    let tail = (Interval::point(sup) * p_j * majorant).hi();
    Ok(sum.inflate(tail))
}

/// Derivative-based quantities of `b` at `(q₀,1,1)` used by the path length.
struct PhiAtOne {
    pq: Interval,
    pw: Interval,
    pqq: Interval,
    pqw: Interval,
    pww: Interval,
}

fn phi_at_one(t: Arity, q0: Interval, j: u32) -> Result<PhiAtOne, AsymptoticsError> {
    let jet = genfun::eval_b_jet(t, q0, Interval::ONE, Interval::ONE, j)?;
    let d = |a, b, c| jet.at(DerivOrder::of(a, b, c));
    Ok(PhiAtOne {
        pq: q0 * d(1, 0, 0),
        pw: d(0, 0, 1),
        pqq: q0 * d(1, 0, 0) + q0.sqr() * d(2, 0, 0),
        pqw: q0 * d(1, 0, 1),
        pww: d(0, 0, 1) + d(0, 0, 2),
    })
}

/// Path-length constants; also returns `Σ(1, Φ_u)` for the identity check
/// `Σ(1, Φ_u) = t·Φ_q b`.
#[derive(Debug, Clone, Serialize)]
pub struct TplConstants {
    pub mu: Interval,
    pub sigma2: Interval,
    pub s1: Interval,
    pub t_phi_q: Interval,
}

pub fn constants_tpl(cert: &SingularityCert, j: u32, j_sigma: u32) -> Result<TplConstants, AsymptoticsError> {
    let t = cert.t;
    let q = cert.q0;
    let f = phi_at_one(t, q, j)?;
    let sig = |w, op| sigma_sum(t, q, SigmaSpec::new(w, op), j_sigma, j);
    use PhiOp::*;
    use SigmaWeight::*;
    let s1 = sig(One, U)?;
    let tf = Interval::point(t.as_u64() as f64);
    let mu = (tf.scale(0.5) * f.pw).div(f.pq)?;
    let three = Interval::point(3.0);
    let (pq, pw) = (f.pq, f.pw);
    let s2 = (f.pqq * pw.sqr() * s1.sqr()).div(pq.pow_int(5))?
        - (f.pqw * pw * s1.sqr()).div(pq.pow_int(4))?
        - (pw.sqr() * s1 * (sig(One, QU)? + sig(Hp, UU)? + sig(R, U)?)).div(pq.pow_int(4))?
        + (pw.sqr() * (sig(TwoHpNextMinusOne, UU)? + sig(TwoTR, U)?)).div(three * pq.pow_int(3))?
        + (f.pww * s1.sqr()).div(three * pq.pow_int(3))?
        + (pw * s1 * (sig(One, UW)? + sig(J, U)?)).div(three * pq.pow_int(3))?;
    if !s2.is_positive() {
        return Err(AsymptoticsError::NonPositive("sigma2_tpl"));
    }
    Ok(TplConstants { mu, sigma2: s2, s1, t_phi_q: tf * pq })
}

/// `ν(1) = a(q₀,1,1,1) / (q₀ ∂b/∂q(q₀,1,1,1))`.
pub fn nu1(cert: &SingularityCert, j: u32) -> Result<Interval, AsymptoticsError> {
    let a = genfun::eval_a(cert.t, cert.q0, j)?.value();
    let bq = genfun::eval_b(cert.t, cert.q0, Interval::ONE, Interval::ONE, DerivOrder::of(1, 0, 0), j)?.value();
    Ok(a.div(cert.q0 * bq)?)
}

/// `ν(1)/q₀ⁿ`.
pub fn predicted_count(cert: &SingularityCert, nu: Interval, n: u64) -> Result<Interval, AsymptoticsError> {
    Ok(nu.div(cert.q0.pow_int(n))?)
}

/// Enclosure of `count / (ν(1)/q₀ⁿ)`.
pub fn count_ratio(cert: &SingularityCert, nu: Interval, n: u64, count: &BigUint) -> Result<Interval, AsymptoticsError> {
    let c = Interval::from_int(&BigInt::from(count.clone()));
    Ok(c.div(predicted_count(cert, nu, n)?)?)
}

/// Truncation settings for a constants run.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConstantsOptions {
    pub j: Option<u32>,
    pub j_sigma: Option<u32>,
    pub precision: f64,
    pub p_count: usize,
}

impl Default for ConstantsOptions {
    fn default() -> Self {
        ConstantsOptions { j: None, j_sigma: None, precision: REPORT_PRECISION, p_count: 20 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstantsReport {
    pub t: Arity,
    pub j: u32,
    pub j_sigma: u32,
    pub q0: Interval,
    pub nu1: Interval,
    pub mu_h: Interval,
    pub sigma2_h: Interval,
    pub mu_d: Interval,
    pub sigma2_d: Interval,
    pub mu_m: Interval,
    pub sigma2_m: Interval,
    pub mu_w: Interval,
    pub mu_tpl: Interval,
    pub sigma2_tpl: Interval,
    pub b_at_q0: Interval,
    pub p_m: Vec<Interval>,
}

pub fn constants_report(t: Arity, opts: &ConstantsOptions) -> Result<ConstantsReport, AsymptoticsError> {
    let j = opts.j.unwrap_or_else(|| genfun::default_j(t));
    let js = opts.j_sigma.unwrap_or(j);
    let cert = solve_q0(t, opts.precision, j)?;
    let (mu_h, sigma2_h) = constants_height(&cert, j)?;
    let (mu_d, sigma2_d) = constants_depths(&cert, j)?;
    let (mu_m, sigma2_m) = constants_m(&cert, j)?;
    let mu_w = constant_width(&cert)?;
    let tpl = constants_tpl(&cert, j, js)?;
    let nu = nu1(&cert, j)?;
    let b = genfun::eval_b(t, cert.q0, Interval::ONE, Interval::ONE, DerivOrder::VALUE, j)?.value();
    let p_m = if opts.p_count > 0 { series::p_table(t, cert.q0, opts.p_count)? } else { Vec::new() };
    Ok(ConstantsReport {
        t,
        j,
        j_sigma: js,
        q0: cert.q0,
        nu1: nu,
        mu_h,
        sigma2_h,
        mu_d,
        sigma2_d,
        mu_m,
        sigma2_m,
        mu_w,
        mu_tpl: tpl.mu,
        sigma2_tpl: tpl.sigma2,
        b_at_q0: b,
        p_m,
    })
}

impl ConstantsReport {
    /// `(name, enclosure)` for every tabulated constant.
    pub fn fields(&self) -> Vec<(&'static str, Interval)> {
        vec![
            ("q0", self.q0),
            ("mu_h", self.mu_h),
            ("sigma2_h", self.sigma2_h),
            ("mu_d", self.mu_d),
            ("sigma2_d", self.sigma2_d),
            ("mu_tpl", self.mu_tpl),
            ("sigma2_tpl", self.sigma2_tpl),
            ("mu_w", self.mu_w),
            ("mu_m", self.mu_m),
            ("sigma2_m", self.sigma2_m),
            ("nu1", self.nu1),
        ]
    }
}

/// Plain-text table: one line per constant with midpoint and width.
pub fn format_table(reports: &[ConstantsReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:>3}  {:<10}  {:>24}  {:>9}", "t", "constant", "midpoint", "width");
    for r in reports {
        for (name, v) in r.fields() {
            let _ = writeln!(out, "{:>3}  {:<10}  {:>24}  {:>9.2e}", r.t.get(), name, crate::interval::fmt17(v.mid()), v.width());
        }
    }
    out
}

/// Outcome of comparing one published value with its enclosure.
#[derive(Debug, Clone, Serialize)]
pub struct TableCheck {
    pub t: u32,
    pub name: &'static str,
    pub published: &'static str,
    pub enclosure: Interval,
    pub contained: bool,
    pub width_ok: bool,
}

impl TableCheck {
    pub fn passed(&self) -> bool {
        self.contained && self.width_ok
    }
}

/// Maximum enclosure width accepted for a table entry.
pub fn width_tolerance(name: &str) -> f64 {
    if name == "sigma2_tpl" {
        1e-8
    } else {
        1e-10
    }
}

pub fn check_tables(r: &ConstantsReport) -> Vec<TableCheck> {
    let Some(p) = published(r.t) else { return Vec::new() };
    let pairs: [(&'static str, &'static str, Interval); 10] = [
        ("q0", p.q0, r.q0),
        ("mu_h", p.mu_h, r.mu_h),
        ("sigma2_h", p.sigma2_h, r.sigma2_h),
        ("mu_d", p.mu_d, r.mu_d),
        ("sigma2_d", p.sigma2_d, r.sigma2_d),
        ("mu_tpl", p.mu_tpl, r.mu_tpl),
        ("sigma2_tpl", p.sigma2_tpl, r.sigma2_tpl),
        ("mu_w", p.mu_w, r.mu_w),
        ("mu_m", p.mu_m, r.mu_m),
        ("sigma2_m", p.sigma2_m, r.sigma2_m),
    ];
    pairs
        .iter()
        .map(|&(name, s, enc)| {
            let v = parse_decimal(s).expect("valid literal");
            TableCheck {
                t: r.t.get(),
                name,
                published: s,
                enclosure: enc,
                contained: enc.contains_rational(&v),
                width_ok: enc.width() <= width_tolerance(name),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    #[test]
    fn decimals() {
        assert_eq!(parse_decimal("1.25").unwrap(), BigRational::new(5.into(), 4.into()));
        assert_eq!(parse_decimal("-3").unwrap(), BigRational::from_integer((-3).into()));
        assert!(parse_decimal("0.1").unwrap() < BigRational::one());
        assert!(!parse_decimal("0").unwrap().is_positive_helper());
    }

    trait Pos {
        fn is_positive_helper(&self) -> bool;
    }
    impl Pos for BigRational {
        fn is_positive_helper(&self) -> bool {
            *self > BigRational::zero()
        }
    }

    #[test]
    fn q0_for_two() {
        let t = Arity::new(2).unwrap();
        let c = solve_q0(t, DEFAULT_PRECISION, 14).unwrap();
        assert!(c.q0.contains(0.5573678720139932));
        assert!(c.q0.width() <= DEFAULT_PRECISION);
    }
}
