//! Certified check that `φ ↦ |q₀(e^{iφ})|` has a unique minimum at `φ = 0`,
//! where `q₀(w)` is the root of `D(q,w) = 0` continuing the real `q₀`.
//!
//! Two phases cover `(0, π]`. Near `0` the second derivative of
//! `|q₀(e^{iφ})|²` is certified positive on a central interval `[0, φ_c]`;
//! since the function is even this makes it strictly increasing there. On the
//! rest, each `φ`-cell is certified by showing that `D(·, e^{iφ})` has no zero
//! in the closed disk `|q| ≤ q₀⁺`, with `q₀⁺` the upper end of the real
//! enclosure.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::asymptotics::{self, AsymptoticsError, SingularityCert};
use crate::genfun::{self, CertifiedJet, DerivOrder, GenfunError};
use crate::interval::{unit_circle_point, ComplexBox, Interval, IntervalError};
use crate::model::Arity;

/// Which denominator is scanned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `D(q,w) = 1 − b(q,1,1,w)`
    Height,
    /// `D(q,v) = 1 − b(q,1,v,1)`
    Depths,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Height => "height",
            Mode::Depths => "depths",
        })
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "height" => Ok(Mode::Height),
            "depths" => Ok(Mode::Depths),
            _ => Err(format!("unknown mode {s:?} (expected height or depths)")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LocalLimitError {
    #[error("Krawczyk test failed on phi in {0}; shrink the phi step")]
    Krawczyk(Interval),
    #[error("Newton iteration did not converge on phi in {0}")]
    Newton(Interval),
    #[error(transparent)]
    Genfun(#[from] GenfunError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error(transparent)]
    Asymptotics(#[from] AsymptoticsError),
}

/// Upper end of the scanned range; the f64 nearest π lies below π.
pub fn pi_upper() -> f64 {
    PI.next_up()
}

fn d_jet(mode: Mode, t: Arity, q: ComplexBox, w: ComplexBox, j: u32) -> Result<CertifiedJet<ComplexBox>, GenfunError> {
    match mode {
        Mode::Height => genfun::eval_d_height_jet(t, q, w, j),
        Mode::Depths => genfun::eval_d_depths_jet(t, q, w, j),
    }
}

fn d_value(mode: Mode, t: Arity, q: ComplexBox, w: ComplexBox, j: u32) -> Result<ComplexBox, GenfunError> {
    Ok(match mode {
        Mode::Height => genfun::eval_d_height_value(t, q, w, j)?.value(),
        Mode::Depths => genfun::eval_d_depths_value(t, q, w, j)?.value(),
    })
}

fn mid_point(b: ComplexBox) -> ComplexBox {
    let (x, y) = b.mid();
    ComplexBox::point(x, y)
}

fn square(c: ComplexBox, r: f64) -> ComplexBox {
    c.inflate(r)
}

/// Root `q₀(w)` for all `w = e^{iφ}`, `φ ∈ phi`, and its implicit derivatives
/// over that box.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ImplicitDerivs {
    pub q0w: ComplexBox,
    pub q0w_prime: ComplexBox,
    pub q0w_doubleprime: ComplexBox,
}

/// Box containing the unique root of `D(·,w)` near `guess` for every `w` on the
/// arc `phi`, certified by the Krawczyk operator.
pub fn q0_of_w_from(mode: Mode, t: Arity, phi: Interval, guess: (f64, f64), j: u32) -> Result<ComplexBox, LocalLimitError> {
    let w = unit_circle_point(phi);
    let wc = mid_point(w);
    let mut c = ComplexBox::point(guess.0, guess.1);
    let mut converged = false;
    // Newton on the finite part only; the Krawczyk step below accounts for tails.
    let mut best = f64::INFINITY;
    for _ in 0..60 {
        let jet = d_jet(mode, t, c, wc, j)?.jet;
        let step = jet.deriv(DerivOrder::VALUE).div(jet.deriv(DerivOrder::of(1, 0, 0)))?;
        let next = mid_point(c - step);
        let moved = (next - c).mag();
        c = next;
        if moved <= 4.0 * f64::EPSILON * c.mag().max(1e-300) || (moved >= best && moved < 1e-12) {
            converged = true;
            break;
        }
        best = best.min(moved);
    }
    if !converged {
        return Err(LocalLimitError::Newton(phi));
    }
    let jc = d_jet(mode, t, c, wc, j)?.jet;
    let y = mid_point(ComplexBox::ONE.div(jc.deriv(DerivOrder::of(1, 0, 0)))?);
    let dcw = d_value(mode, t, c, w, j)?;
    let mut r = 2.0 * (y * dcw).mag() + 1e-15;
    for _ in 0..12 {
        let qbox = square(c, r);
        let dq = d_jet(mode, t, qbox, w, j)?.at(DerivOrder::of(1, 0, 0));
        let k = c - y * dcw + (ComplexBox::ONE - y * dq) * (qbox - c);
        if k.interior_of(&qbox) {
            return Ok(k);
        }
        r *= 2.0;
    }
    Err(LocalLimitError::Krawczyk(phi))
}

/// Root box for the arc `phi`, continuing from the real `q₀`.
pub fn q0_of_w(mode: Mode, t: Arity, phi: Interval, cert: &SingularityCert) -> Result<ComplexBox, LocalLimitError> {
    q0_of_w_from(mode, t, phi, (cert.q0.mid(), 0.0), cert.j_used)
}

/// Root box at the single angle `phi_end`, reached by continuation from
/// `φ = 0`; the step halves on failure and doubles after a success. Fails
/// where the root branch meets another one (for `t = 2` near `φ ≈ 1.64`).
pub fn q0_continued(mode: Mode, t: Arity, phi_end: f64, cert: &SingularityCert) -> Result<ComplexBox, LocalLimitError> {
    let j = cert.j_used;
    let mut guess = (cert.q0.mid(), 0.0);
    let mut at = 0.0f64;
    let mut step = phi_end / 8.0;
    let mut last = q0_of_w_from(mode, t, Interval::point(0.0), guess, j)?;
    while at != phi_end {
        let next = if (phi_end - at).abs() <= step.abs() { phi_end } else { at + step };
        match q0_of_w_from(mode, t, Interval::point(next), guess, j) {
            Ok(b) if (b.mid().0 - guess.0).hypot(b.mid().1 - guess.1) <= 4.0 * (next - at).abs() => {
                guess = b.mid();
                last = b;
                at = next;
                step *= 2.0;
            }
            _ => {
                step *= 0.5;
                if step.abs() < 1e-9 {
                    return Err(LocalLimitError::Newton(Interval::point(next)));
                }
            }
        }
    }
    Ok(last)
}

/// Implicit derivatives `q₀′(w) = −D_w/D_q` and
/// `q₀″(w) = (2 D_qw D_w D_q − D_qq D_w² − D_ww D_q²)/D_q³` over `q0w × w`.
pub fn implicit_derivs(mode: Mode, t: Arity, q0w: ComplexBox, phi: Interval, j: u32) -> Result<ImplicitDerivs, LocalLimitError> {
    let w = unit_circle_point(phi);
    let jet = d_jet(mode, t, q0w, w, j)?;
    let d = |a, c| jet.at(DerivOrder::of(a, 0, c));
    let (dq, dw, dqq, dqw, dww) = (d(1, 0), d(0, 1), d(2, 0), d(1, 1), d(0, 2));
    let p1 = (-dw).div(dq)?;
    let two = ComplexBox::point(2.0, 0.0);
    let num = two * dqw * dw * dq - dqq * dw.sqr() - dww * dq.sqr();
    let p2 = num.div(dq.pow_int(3))?;
    Ok(ImplicitDerivs { q0w, q0w_prime: p1, q0w_doubleprime: p2 })
}

/// `d²/dφ² |q₀(e^{iφ})|² = 2(x′² + y′² + x x″ + y y″)` from the implicit
/// derivatives, with `x′ + iy′ = i w q₀′` and `x″ + iy″ = −w q₀′ − w² q₀″`.
pub fn second_derivative_from(d: &ImplicitDerivs, phi: Interval) -> Interval {
    let w = unit_circle_point(phi);
    let i = ComplexBox::point(0.0, 1.0);
    let q1 = i * w * d.q0w_prime;
    let q2 = -(w * d.q0w_prime) - w.sqr() * d.q0w_doubleprime;
    let q = d.q0w;
    (q1.re.sqr() + q1.im.sqr() + q.re * q2.re + q.im * q2.im).scale(2.0)
}

pub fn second_derivative_abs(mode: Mode, t: Arity, phi: Interval, cert: &SingularityCert) -> Result<Interval, LocalLimitError> {
    let q = q0_of_w(mode, t, phi, cert)?;
    let d = implicit_derivs(mode, t, q, phi, cert.j_used)?;
    Ok(second_derivative_from(&d, phi))
}

#[derive(Debug, Clone, Serialize)]
pub struct CentralCell {
    pub phi: Interval,
    pub q0_box: ComplexBox,
    pub second_derivative: Interval,
}

#[derive(Debug, Clone, Serialize)]
pub struct OuterCell {
    pub phi: Interval,
    /// `D(·, e^{iφ})` has no zero in `|q| ≤ radius`.
    pub radius: f64,
    pub boxes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum ScanStatus {
    Verified,
    Failed { phi: Interval, reason: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub t: Arity,
    pub mode: Mode,
    pub j: u32,
    pub q0: Interval,
    pub central_radius: f64,
    pub central_cells: Vec<CentralCell>,
    pub outer_cells: Vec<OuterCell>,
    pub status: ScanStatus,
}

impl ScanReport {
    pub fn verified(&self) -> bool {
        self.status == ScanStatus::Verified
    }

    /// Central cells tile `[0, φ_c]` and outer cells tile `[φ_c, π⁺]`, with
    /// matching endpoints.
    pub fn covers_full_range(&self) -> bool {
        let chain = |cells: &mut dyn Iterator<Item = Interval>, from: f64, to: f64| {
            let mut at = from;
            for c in cells {
                if c.lo() != at {
                    return false;
                }
                at = c.hi();
            }
            at == to
        };
        chain(&mut self.central_cells.iter().map(|c| c.phi), 0.0, self.central_radius)
            && chain(&mut self.outer_cells.iter().map(|c| c.phi), self.central_radius, pi_upper())
    }

    /// Lower bound of `|q₀(e^{iφ})|` over all outer cells minus `q₀⁺`.
    pub fn outer_margin(&self) -> f64 {
        self.outer_cells.iter().map(|c| c.radius).fold(f64::INFINITY, f64::min) - self.q0.hi()
    }
}

/// Limits of the two phases.
#[derive(Debug, Clone, Copy)]
pub struct ScanOptions {
    pub j: Option<u32>,
    /// Halvings of the central radius before giving up.
    pub central_halvings: u32,
    /// Minimum central cell width, relative to the central radius.
    pub central_depth: u32,
    pub outer_initial_cells: usize,
    pub outer_min_width: f64,
    pub quadtree_depth: u32,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            j: None,
            central_halvings: 12,
            central_depth: 10,
            outer_initial_cells: 16,
            outer_min_width: 1e-6,
            quadtree_depth: 18,
        }
    }
}

fn certify_central_cell(mode: Mode, t: Arity, phi: Interval, guess: (f64, f64), j: u32) -> Option<CentralCell> {
    let q = q0_of_w_from(mode, t, phi, guess, j).ok()?;
    let d = implicit_derivs(mode, t, q, phi, j).ok()?;
    let s = second_derivative_from(&d, phi);
    s.is_positive().then_some(CentralCell { phi, q0_box: q, second_derivative: s })
}

/// Cover `[0, φ_c]` with cells on which the second derivative is positive.
fn central_cover(mode: Mode, t: Arity, phi_c: f64, q0: f64, j: u32, depth: u32) -> Option<Vec<CentralCell>> {
    let min_width = phi_c / (1u64 << depth) as f64;
    let mut out = Vec::new();
    let mut stack = vec![(0.0, phi_c)];
    let mut guess = (q0, 0.0);
    while let Some((a, b)) = stack.pop() {
        let phi = Interval::new(a, b).ok()?;
        match certify_central_cell(mode, t, phi, guess, j) {
            Some(c) => {
                guess = c.q0_box.mid();
                out.push(c);
            }
            None => {
                if b - a <= min_width {
                    return None;
                }
                let m = 0.5 * (a + b);
                stack.push((m, b));
                stack.push((a, m));
            }
        }
    }
    Some(out)
}

/// Quadtree proof that `D(·, w)` has no zero in `|q| ≤ radius` for all `w` on
/// the arc `phi`; returns the number of boxes evaluated.
pub fn exclude_zeros(mode: Mode, t: Arity, phi: Interval, radius: f64, j: u32, max_depth: u32) -> Result<usize, Interval> {
    let w = unit_circle_point(phi);
    let side = Interval::new(-radius, radius).expect("ordered");
    let mut stack = vec![(ComplexBox::new(side, side), 0u32)];
    let mut count = 0;
    while let Some((b, depth)) = stack.pop() {
        if b.mig() > radius {
            continue;
        }
        count += 1;
        let ok = matches!(d_value(mode, t, b, w, j), Ok(v) if !v.contains_zero());
        if ok {
            continue;
        }
        if depth >= max_depth {
            return Err(phi);
        }
        let (xm, ym) = b.mid();
        let (x0, x1) = (b.re.lo(), b.re.hi());
        let (y0, y1) = (b.im.lo(), b.im.hi());
        for (xa, xb) in [(x0, xm), (xm, x1)] {
            for (ya, yb) in [(y0, ym), (ym, y1)] {
                let bx = ComplexBox::new(Interval::new(xa, xb).expect("ordered"), Interval::new(ya, yb).expect("ordered"));
                stack.push((bx, depth + 1));
            }
        }
    }
    Ok(count)
}

fn outer_cover(mode: Mode, t: Arity, from: f64, radius: f64, j: u32, opts: &ScanOptions) -> Result<Vec<OuterCell>, Interval> {
    let to = pi_upper();
    let n = opts.outer_initial_cells.max(1);
    let mut edges: Vec<f64> = (0..n).map(|k| from + (to - from) * k as f64 / n as f64).collect();
    edges.push(to);
    let cells: Vec<(f64, f64)> = edges.windows(2).map(|e| (e[0], e[1])).collect();
    let parts: Vec<Result<Vec<OuterCell>, Interval>> = cells
        .par_iter()
        .map(|&(a, b)| {
            let mut out = Vec::new();
            let mut stack = vec![(a, b)];
            while let Some((a, b)) = stack.pop() {
                let phi = Interval::new(a, b).expect("ordered");
                match exclude_zeros(mode, t, phi, radius, j, opts.quadtree_depth) {
                    Ok(boxes) => out.push(OuterCell { phi, radius, boxes }),
                    Err(_) if b - a > opts.outer_min_width => {
                        let m = 0.5 * (a + b);
                        stack.push((m, b));
                        stack.push((a, m));
                    }
                    Err(p) => return Err(p),
                }
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for p in parts {
        all.extend(p?);
    }
    Ok(all)
}

/// Two-phase scan of `(0, π]`.
pub fn verify_unique_min_with(t: Arity, mode: Mode, opts: &ScanOptions) -> Result<ScanReport, LocalLimitError> {
    let j = opts.j.unwrap_or_else(|| genfun::default_j(t));
    let cert = asymptotics::solve_q0(t, asymptotics::DEFAULT_PRECISION, j)?;
    let mut report = ScanReport {
        t,
        mode,
        j,
        q0: cert.q0,
        central_radius: 0.0,
        central_cells: Vec::new(),
        outer_cells: Vec::new(),
        status: ScanStatus::Verified,
    };
    let mut phi_c = pi_upper();
    let mut central = None;
    for _ in 0..=opts.central_halvings {
        if let Some(c) = central_cover(mode, t, phi_c, cert.q0.mid(), j, opts.central_depth) {
            central = Some(c);
            break;
        }
        phi_c *= 0.5;
    }
    let Some(central) = central else {
        report.status = ScanStatus::Failed {
            phi: Interval::new(0.0, phi_c).expect("ordered"),
            reason: "second derivative not certified positive near 0".into(),
        };
        return Ok(report);
    };
    report.central_radius = phi_c;
    report.central_cells = central;
    if phi_c < pi_upper() {
        match outer_cover(mode, t, phi_c, cert.q0.hi(), j, opts) {
            Ok(cells) => report.outer_cells = cells,
            Err(phi) => {
                report.status = ScanStatus::Failed { phi, reason: "zero of D not excluded from |q| <= q0".into() };
            }
        }
    }
    Ok(report)
}

pub fn verify_unique_min(t: Arity, mode: Mode) -> Result<ScanReport, LocalLimitError> {
    verify_unique_min_with(t, mode, &ScanOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_at_zero_angle_is_real() {
        let t = Arity::new(2).unwrap();
        let cert = asymptotics::solve_q0(t, 1e-13, 14).unwrap();
        let b = q0_of_w(Mode::Height, t, Interval::point(0.0), &cert).unwrap();
        assert!(b.re.overlaps(&cert.q0));
        assert!(b.im.contains(0.0));
    }

    #[test]
    fn half_turn_has_no_root_inside() {
        let t = Arity::new(2).unwrap();
        let cert = asymptotics::solve_q0(t, 1e-13, 14).unwrap();
        let phi = Interval::point(PI);
        assert!(exclude_zeros(Mode::Height, t, phi, cert.q0.hi(), 14, 12).is_ok());
    }

    #[test]
    fn continuation_moves_away_from_q0() {
        let t = Arity::new(2).unwrap();
        let cert = asymptotics::solve_q0(t, 1e-13, 14).unwrap();
        let b = q0_continued(Mode::Height, t, 1.0, &cert).unwrap();
        assert!(b.abs().lo() > cert.q0.hi());
    }

    #[test]
    fn exclusion_fails_at_the_minimum() {
        let t = Arity::new(2).unwrap();
        let phi = Interval::new(-0.01, 0.01).unwrap();
        assert!(exclude_zeros(Mode::Height, t, phi, 0.5573678720139933, 14, 8).is_err());
    }
}
