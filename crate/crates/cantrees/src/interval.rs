//! Outward-rounded interval arithmetic over binary64.
//!
//! Every endpoint is computed in round-to-nearest and then moved one ulp
//! outward. `ln`, `exp`, `sin` and `cos` rely on the platform libm being
//! faithfully rounded and are widened by two ulps instead.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("division by an interval containing zero")]
    DivisionByZero,
    #[error("logarithm of an interval that is not strictly positive")]
    LogDomain,
    #[error("square root of a negative interval")]
    SqrtDomain,
    #[error("empty interval (lo > hi)")]
    Empty,
}

fn down(x: f64) -> f64 {
    if x.is_nan() {
        f64::NEG_INFINITY
    } else if x == f64::NEG_INFINITY {
        x
    } else {
        x.next_down()
    }
}

fn up(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else if x == f64::INFINITY {
        x
    } else {
        x.next_up()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };
    /// Contains π.
    pub const PI: Interval = Interval {
        lo: std::f64::consts::PI,
        hi: 3.1415926535897936,
    };

    pub fn new(lo: f64, hi: f64) -> Result<Self, IntervalError> {
        if lo <= hi {
            Ok(Interval { lo, hi })
        } else {
            Err(IntervalError::Empty)
        }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Interval `[-r, r]`.
    pub fn symmetric(r: f64) -> Self {
        let r = r.abs();
        Interval { lo: -r, hi: r }
    }

    /// Enclosure of an exact rational.
    pub fn from_rational(r: &BigRational) -> Self {
        let x = r.to_f64().unwrap_or(f64::NAN);
        if !x.is_finite() {
            return if r.is_zero() {
                Self::ZERO
            } else if r.is_negative() {
                Interval { lo: f64::NEG_INFINITY, hi: up(f64::MIN) }
            } else {
                Interval { lo: down(f64::MAX), hi: f64::INFINITY }
            };
        }
        let lo = down(down(x));
        let hi = up(up(x));
        Interval { lo, hi }
    }

    pub fn from_int(n: &BigInt) -> Self {
        Self::from_rational(&BigRational::from_integer(n.clone()))
    }

    /// Enclosure of `num/den` for integers that need not be exact in f64.
    pub fn ratio(num: i64, den: i64) -> Result<Self, IntervalError> {
        Self::point(num as f64).div(Self::point(den as f64))
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }
    pub fn hi(&self) -> f64 {
        self.hi
    }
    pub fn mid(&self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }
    pub fn width(&self) -> f64 {
        up(self.hi - self.lo)
    }
    pub fn rad(&self) -> f64 {
        up(0.5 * self.width())
    }
    /// Upper bound of |x| over the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }
    /// Lower bound of |x| over the interval.
    pub fn mig(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }
    pub fn contains_rational(&self, r: &BigRational) -> bool {
        let lo = BigRational::from_float(self.lo);
        let hi = BigRational::from_float(self.hi);
        match (lo, hi) {
            (Some(lo), Some(hi)) => &lo <= r && r <= &hi,
            (None, Some(hi)) => self.lo == f64::NEG_INFINITY && r <= &hi,
            (Some(lo), None) => self.hi == f64::INFINITY && &lo <= r,
            (None, None) => self.lo == f64::NEG_INFINITY && self.hi == f64::INFINITY,
        }
    }
    pub fn subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }
    pub fn interior_of(&self, other: &Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }
    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
    pub fn is_positive(&self) -> bool {
        self.lo > 0.0
    }
    pub fn is_negative(&self) -> bool {
        self.hi < 0.0
    }
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }
    /// Widen by `r` on both sides.
    pub fn inflate(&self, r: f64) -> Interval {
        if r == 0.0 {
            return *self;
        }
        Interval {
            lo: down(self.lo - r),
            hi: up(self.hi + r),
        }
    }

    pub fn div(self, rhs: Interval) -> Result<Interval, IntervalError> {
        if rhs.contains_zero() {
            return Err(IntervalError::DivisionByZero);
        }
        let c = [
            self.lo / rhs.lo,
            self.lo / rhs.hi,
            self.hi / rhs.lo,
            self.hi / rhs.hi,
        ];
        Ok(from_candidates(&c))
    }

    pub fn recip(self) -> Result<Interval, IntervalError> {
        Interval::ONE.div(self)
    }

    pub fn sqr(self) -> Interval {
        let a = self.lo * self.lo;
        let b = self.hi * self.hi;
        if self.contains_zero() {
            Interval { lo: 0.0, hi: up(a.max(b)) }
        } else {
            Interval {
                lo: down(a.min(b)).max(0.0),
                hi: up(a.max(b)),
            }
        }
    }

    pub fn pow_int(self, n: u64) -> Interval {
        if n == 0 {
            return Interval::ONE;
        }
        if self.lo >= 0.0 {
            return pow_nonneg(self, n);
        }
        if self.hi <= 0.0 {
            let p = pow_nonneg(-self, n);
            return if n % 2 == 0 { p } else { -p };
        }
        if n % 2 == 0 {
            let m = pow_nonneg(Interval::point(self.mag()), n);
            Interval { lo: 0.0, hi: m.hi }
        } else {
            let a = pow_nonneg(Interval::point(-self.lo), n);
            let b = pow_nonneg(Interval::point(self.hi), n);
            Interval { lo: -a.hi, hi: b.hi }
        }
    }

    pub fn abs(self) -> Interval {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            -self
        } else {
            Interval { lo: 0.0, hi: self.mag() }
        }
    }

    pub fn sqrt(self) -> Result<Interval, IntervalError> {
        if self.hi < 0.0 {
            return Err(IntervalError::SqrtDomain);
        }
        let lo = if self.lo <= 0.0 { 0.0 } else { down(self.lo.sqrt()).max(0.0) };
        Ok(Interval { lo, hi: up(self.hi.sqrt()) })
    }

    pub fn ln(self) -> Result<Interval, IntervalError> {
        if self.lo <= 0.0 {
            return Err(IntervalError::LogDomain);
        }
        Ok(Interval {
            lo: down(down(self.lo.ln())),
            hi: up(up(self.hi.ln())),
        })
    }

    pub fn exp(self) -> Interval {
        Interval {
            lo: down(down(self.lo.exp())).max(0.0),
            hi: up(up(self.hi.exp())),
        }
    }

    pub fn cos(self) -> Interval {
        trig(self, f64::cos, 0.0)
    }

    pub fn sin(self) -> Interval {
        trig(self, f64::sin, 0.5)
    }

    pub fn scale(self, k: f64) -> Interval {
        self * Interval::point(k)
    }

    pub fn max(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.max(other.lo),
            hi: self.hi.max(other.hi),
        }
    }
}

fn from_candidates(c: &[f64; 4]) -> Interval {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &x in c {
        if x.is_nan() {
            return Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };
        }
        lo = lo.min(x);
        hi = hi.max(x);
    }
    Interval { lo: down(lo), hi: up(hi) }
}

fn pow_nonneg(x: Interval, mut n: u64) -> Interval {
    let mut base = x;
    let mut acc = Interval::ONE;
    while n > 0 {
        if n & 1 == 1 {
            acc = acc * base;
        }
        n >>= 1;
        if n > 0 {
            base = base.sqr();
        }
    }
    Interval { lo: acc.lo.max(0.0), hi: acc.hi }
}

/// `f` is cos or sin; the extrema of `f` sit at multiples of π shifted by
/// `shift` half-turns (0 for cos, 1/2 for sin).
fn trig(x: Interval, f: fn(f64) -> f64, shift: f64) -> Interval {
    if !(x.lo.is_finite() && x.hi.is_finite()) || x.hi - x.lo >= 6.0 {
        return Interval { lo: -1.0, hi: 1.0 };
    }
    let a = f(x.lo);
    let b = f(x.hi);
    let mut lo = down(down(a.min(b)));
    let mut hi = up(up(a.max(b)));
    // Extrema at (k + shift)·π. Scan candidate k conservatively using both
    // bounds of π.
    let pi_lo = Interval::PI.lo;
    let pi_hi = Interval::PI.hi;
    let kmin = (x.lo / pi_lo).min(x.lo / pi_hi).floor() as i64 - 2;
    let kmax = (x.hi / pi_lo).max(x.hi / pi_hi).ceil() as i64 + 2;
    for k in kmin..=kmax {
        let c = k as f64 + shift;
        let (p_lo, p_hi) = if c >= 0.0 {
            (c * pi_lo, c * pi_hi)
        } else {
            (c * pi_hi, c * pi_lo)
        };
        if p_hi >= x.lo && p_lo <= x.hi {
            // value at this critical point is ±1
            let even = (k.rem_euclid(2)) == 0;
            if even {
                hi = 1.0;
            } else {
                lo = -1.0;
            }
        }
    }
    Interval { lo: lo.max(-1.0), hi: hi.min(1.0) }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: down(self.lo + rhs.lo),
            hi: up(self.hi + rhs.hi),
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval {
            lo: down(self.lo - rhs.hi),
            hi: up(self.hi - rhs.lo),
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        if self == Interval::ONE {
            return rhs;
        }
        if rhs == Interval::ONE {
            return self;
        }
        if self == Interval::ZERO || rhs == Interval::ZERO {
            return Interval::ZERO;
        }
        let c = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        from_candidates(&c)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

/// 17 significant digits, plain notation for moderate exponents.
pub fn fmt17(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let s = format!("{:.16e}", x);
    let (mant, exp) = s.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if !(-5..=16).contains(&exp) {
        return s;
    }
    let neg = mant.starts_with('-');
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if exp < 0 {
        out.push_str("0.");
        for _ in 0..(-exp - 1) {
            out.push('0');
        }
        out.push_str(&digits);
    } else {
        let p = (exp + 1) as usize;
        out.push_str(&digits[..p]);
        if p < digits.len() {
            out.push('.');
            out.push_str(&digits[p..]);
        }
    }
    out
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", fmt17(self.lo), fmt17(self.hi))
    }
}

/// Axis-aligned rectangle in the complex plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexBox {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexBox {
    pub const ZERO: ComplexBox = ComplexBox { re: Interval::ZERO, im: Interval::ZERO };
    pub const ONE: ComplexBox = ComplexBox { re: Interval::ONE, im: Interval::ZERO };

    pub fn new(re: Interval, im: Interval) -> Self {
        ComplexBox { re, im }
    }
    pub fn real(re: Interval) -> Self {
        ComplexBox { re, im: Interval::ZERO }
    }
    pub fn point(re: f64, im: f64) -> Self {
        ComplexBox { re: Interval::point(re), im: Interval::point(im) }
    }
    pub fn conj(self) -> Self {
        ComplexBox { re: self.re, im: -self.im }
    }
    pub fn norm_sqr(self) -> Interval {
        self.re.sqr() + self.im.sqr()
    }
    pub fn abs(self) -> Interval {
        if self.im == Interval::ZERO {
            return self.re.abs();
        }
        if self.re == Interval::ZERO {
            return self.im.abs();
        }
        self.norm_sqr().sqrt().expect("norm is non-negative")
    }
    pub fn mag(&self) -> f64 {
        self.abs().hi()
    }
    pub fn mig(&self) -> f64 {
        self.abs().lo()
    }
    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }
    pub fn contains(&self, re: f64, im: f64) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }
    pub fn subset_of(&self, other: &ComplexBox) -> bool {
        self.re.subset_of(&other.re) && self.im.subset_of(&other.im)
    }
    pub fn interior_of(&self, other: &ComplexBox) -> bool {
        self.re.interior_of(&other.re) && self.im.interior_of(&other.im)
    }
    pub fn overlaps(&self, other: &ComplexBox) -> bool {
        self.re.overlaps(&other.re) && self.im.overlaps(&other.im)
    }
    pub fn hull(&self, other: &ComplexBox) -> ComplexBox {
        ComplexBox { re: self.re.hull(&other.re), im: self.im.hull(&other.im) }
    }
    pub fn mid(&self) -> (f64, f64) {
        (self.re.mid(), self.im.mid())
    }
    pub fn inflate(&self, r: f64) -> ComplexBox {
        ComplexBox { re: self.re.inflate(r), im: self.im.inflate(r) }
    }
    pub fn scale(self, k: Interval) -> ComplexBox {
        ComplexBox { re: self.re * k, im: self.im * k }
    }
    pub fn sqr(self) -> ComplexBox {
        let re = self.re.sqr() - self.im.sqr();
        let im = (self.re * self.im).scale(2.0);
        ComplexBox { re, im }
    }
    pub fn pow_int(self, mut n: u64) -> ComplexBox {
        if self.im == Interval::ZERO {
            return ComplexBox::real(self.re.pow_int(n));
        }
        let mut base = self;
        let mut acc = ComplexBox::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            n >>= 1;
            if n > 0 {
                base = base.sqr();
            }
        }
        acc
    }
    pub fn div(self, rhs: ComplexBox) -> Result<ComplexBox, IntervalError> {
        if rhs.im == Interval::ZERO {
            return Ok(ComplexBox { re: self.re.div(rhs.re)?, im: self.im.div(rhs.re)? });
        }
        let d = rhs.norm_sqr();
        let n = self * rhs.conj();
        Ok(ComplexBox { re: n.re.div(d)?, im: n.im.div(d)? })
    }
}

impl Add for ComplexBox {
    type Output = ComplexBox;
    fn add(self, rhs: ComplexBox) -> ComplexBox {
        ComplexBox { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl Sub for ComplexBox {
    type Output = ComplexBox;
    fn sub(self, rhs: ComplexBox) -> ComplexBox {
        ComplexBox { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Mul for ComplexBox {
    type Output = ComplexBox;
    fn mul(self, rhs: ComplexBox) -> ComplexBox {
        if self.im == Interval::ZERO && rhs.im == Interval::ZERO {
            return ComplexBox::real(self.re * rhs.re);
        }
        ComplexBox {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl Neg for ComplexBox {
    type Output = ComplexBox;
    fn neg(self) -> ComplexBox {
        ComplexBox { re: -self.re, im: -self.im }
    }
}

impl fmt::Display for ComplexBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + i{}", self.re, self.im)
    }
}

/// Box containing `cos φ + i sin φ` for every φ in `phi`.
pub fn unit_circle_point(phi: Interval) -> ComplexBox {
    ComplexBox { re: phi.cos(), im: phi.sin() }
}

/// Ring operations shared by real intervals and complex boxes, so that the
/// generating-function evaluators can be written once.
pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_interval(x: Interval) -> Self;
    fn checked_div(self, rhs: Self) -> Result<Self, IntervalError>;
    fn pow_u(self, n: u64) -> Self;
    /// Upper bound of the modulus.
    fn mag(&self) -> f64;
    /// Lower bound of the modulus.
    fn mig(&self) -> f64;
    /// Widen every component by `r`.
    fn inflate(&self, r: f64) -> Self;
    fn is_exactly(&self, x: f64) -> bool;

    fn scale_int(self, k: u64) -> Self {
        self * Self::from_interval(Interval::point(k as f64))
    }
}

impl Scalar for Interval {
    fn zero() -> Self {
        Interval::ZERO
    }
    fn one() -> Self {
        Interval::ONE
    }
    fn from_interval(x: Interval) -> Self {
        x
    }
    fn checked_div(self, rhs: Self) -> Result<Self, IntervalError> {
        self.div(rhs)
    }
    fn pow_u(self, n: u64) -> Self {
        self.pow_int(n)
    }
    fn mag(&self) -> f64 {
        Interval::mag(self)
    }
    fn mig(&self) -> f64 {
        Interval::mig(self)
    }
    fn inflate(&self, r: f64) -> Self {
        Interval::inflate(self, r)
    }
    fn is_exactly(&self, x: f64) -> bool {
        self.lo == x && self.hi == x
    }
}

impl Scalar for ComplexBox {
    fn zero() -> Self {
        ComplexBox::ZERO
    }
    fn one() -> Self {
        ComplexBox::ONE
    }
    fn from_interval(x: Interval) -> Self {
        ComplexBox::real(x)
    }
    fn checked_div(self, rhs: Self) -> Result<Self, IntervalError> {
        self.div(rhs)
    }
    fn pow_u(self, n: u64) -> Self {
        self.pow_int(n)
    }
    fn mag(&self) -> f64 {
        ComplexBox::mag(self)
    }
    fn mig(&self) -> f64 {
        ComplexBox::mig(self)
    }
    fn inflate(&self, r: f64) -> Self {
        ComplexBox::inflate(self, r)
    }
    fn is_exactly(&self, x: f64) -> bool {
        self.re.is_exactly(x) && self.im.is_exactly(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_points() {
        let s = Interval::point(1.0) + Interval::point(2.0);
        assert!(s.contains(3.0));
        assert!(s.width() < 1e-15);
    }

    #[test]
    fn abs_of_minus_one() {
        let z = ComplexBox::point(-1.0, 0.0);
        assert!(z.abs().contains(1.0));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let r = Interval::ONE.div(Interval::new(-1.0, 1.0).unwrap());
        assert_eq!(r, Err(IntervalError::DivisionByZero));
        assert_eq!(Interval::ZERO.ln(), Err(IntervalError::LogDomain));
    }

    #[test]
    fn display_uses_17_digits() {
        let x = Interval::point(0.1);
        assert_eq!(x.to_string(), "[0.10000000000000001, 0.10000000000000001]");
        assert_eq!(fmt17(-1234.5), "-1234.5000000000000");
    }

    #[test]
    fn cos_and_sin_cover_extrema() {
        let x = Interval::new(-0.1, 0.1).unwrap();
        assert_eq!(x.cos().hi(), 1.0);
        let y = Interval::new(1.5, 1.7).unwrap();
        assert_eq!(y.sin().hi(), 1.0);
        let z = Interval::new(3.0, 3.3).unwrap();
        assert_eq!(z.cos().lo(), -1.0);
    }
}
