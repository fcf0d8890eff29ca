//! Acceptance criteria 1–9. Runs as a plain binary so that every criterion
//! prints one PASS/FAIL line; the process fails if any criterion fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use cantrees::asymptotics::{self, ConstantsOptions};
use cantrees::bigdp::{self, Sampler, Stat};
use cantrees::genfun::{self, DerivOrder};
use cantrees::locallimit::{self, Mode};
use cantrees::model::{self, enumerate_all, parameters};
use cantrees::{series, width, Arity, Interval};

type Outcome = Result<String, String>;

fn arity(t: u32) -> Arity {
    Arity::new(t).expect("valid arity")
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut cells = 0;
    for t in 2..=10 {
        let r = asymptotics::constants_report(arity(t), &ConstantsOptions::default()).map_err(|e| format!("t={t}: {e}"))?;
        for c in asymptotics::check_tables(&r) {
            cells += 1;
            ensure(
                c.passed(),
                format!("t={t} {}: published {} vs {} (width {:.2e})", c.name, c.published, c.enclosure, c.enclosure.width()),
            )?;
        }
    }
    let el = start.elapsed();
    ensure(el < Duration::from_secs(120), format!("took {el:?}"))?;
    Ok(format!("{cells} published values enclosed, {el:.1?}"))
}

fn criterion_2() -> Outcome {
    for t in 2..=5 {
        let a = arity(t);
        let dp = bigdp::counts_upto(a, 120).map_err(|e| e.to_string())?;
        let h = series::series_h(a, 120);
        for (n, c) in dp.iter().enumerate() {
            let s = h.coeff(n);
            ensure(s.is_integer() && s.to_integer() == (*c).clone().into(), format!("t={t} n={n}"))?;
        }
    }
    ensure(bigdp::count(arity(2), 4).map_err(|e| e.to_string())? == BigUint::from(3u32), "count(2,4) != 3")?;
    for t in [2, 3] {
        for n in 0..=12u64 {
            let brute = enumerate_all(arity(t), n).count();
            let dp = bigdp::count(arity(t), n as usize).map_err(|e| e.to_string())?;
            ensure(dp == BigUint::from(brute), format!("brute force t={t} n={n}: {brute} vs {dp}"))?;
        }
    }
    Ok("DP = [q^n]H for n <= 120, t = 2..5; brute force n <= 12".into())
}

fn criterion_3() -> Outcome {
    let t = arity(2);
    let cert = asymptotics::solve_q0(t, 0.0, 14).map_err(|e| e.to_string())?;
    let nu = asymptotics::nu1(&cert, 14).map_err(|e| e.to_string())?;
    let mut prev = f64::INFINITY;
    let mut last = 0.0;
    for n in (20..=100).step_by(20) {
        let c = bigdp::count(t, n).map_err(|e| e.to_string())?;
        let r = asymptotics::count_ratio(&cert, nu, n as u64, &c).map_err(|e| e.to_string())?;
        let dev = (r - Interval::ONE).mag();
        ensure(dev < prev, format!("|ratio - 1| not decreasing at n={n}: {dev:e} after {prev:e}"))?;
        prev = dev;
        last = dev;
    }
    ensure(last <= 1e-6, format!("|ratio(100) - 1| <= {last:e}"))?;
    Ok(format!("|ratio(100) - 1| <= {last:.1e}"))
}

fn criterion_4() -> Outcome {
    let t = arity(2);
    let n = 60;
    let cert = asymptotics::solve_q0(t, 0.0, 14).map_err(|e| e.to_string())?;
    let big_m = n;
    let p = series::p_table(t, cert.q0, big_m).map_err(|e| e.to_string())?;
    let d = bigdp::dist(t, n, Stat::LastLevelLeaves).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    let mut l1 = 0.0;
    let mut covered = BigRational::zero();
    for m in 1..=big_m {
        let exact = d.probability((2 * m) as u64);
        covered += &exact;
        let diff = (Interval::from_rational(&exact) - p[m - 1]).mag();
        if m <= 10 {
            worst = worst.max(diff);
        }
        l1 += diff;
    }
    // exact mass outside the table plus the p-tail
    let outside = (BigRational::one() - covered).to_f64().unwrap_or(f64::NAN).abs();
    let tv = 0.5 * (l1 + outside + series::p_tail(cert.q0, big_m));
    ensure(worst <= 1e-3, format!("max |P(m) - p_m| = {worst:e}"))?;
    ensure(tv <= 1e-3, format!("total variation <= {tv:e}"))?;
    Ok(format!("max pointwise {worst:.1e}, total variation <= {tv:.1e}"))
}

fn criterion_5() -> Outcome {
    let t = arity(2);
    let tol = BigRational::new(1.into(), 1_000_000_000i64.into());
    let ns = [250usize, 500, 1000, 2000, 4000];
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &n in &ns {
        let m = width::width_mean(t, n, &tol).map_err(|e| e.to_string())?;
        xs.push((n as f64).ln());
        ys.push(m.mid_f64());
    }
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let cert = asymptotics::solve_q0(t, 0.0, 14).map_err(|e| e.to_string())?;
    let mu_w = asymptotics::constant_width(&cert).map_err(|e| e.to_string())?.mid();
    ensure((slope / mu_w - 1.0).abs() <= 0.1, format!("slope {slope} vs mu_w {mu_w}"))?;

    let mut prev: Option<Interval> = None;
    for kk in 2..=40 {
        let q = width::solve_qk(t, kk, 1e-12).map_err(|e| format!("K={kk}: {e}"))?.qk;
        ensure(q.lo() > cert.q0.hi(), format!("q_{kk} = {q} not above q0"))?;
        if let Some(p) = prev {
            ensure(q.hi() < p.lo(), format!("q_{kk} = {q} not below {p}"))?;
        }
        prev = Some(q);
    }

    for tt in [2, 3] {
        for n in 0..=12u64 {
            let mut brute: BTreeMap<u64, u64> = BTreeMap::new();
            for p in enumerate_all(arity(tt), n) {
                *brute.entry(parameters(&p, arity(tt)).map_err(|e| e.to_string())?.w).or_default() += 1;
            }
            let d = bigdp::dist(arity(tt), n as usize, Stat::Width).map_err(|e| e.to_string())?;
            let dp: BTreeMap<u64, u64> = d.entries.iter().map(|(k, v)| (*k, v.to_u64().unwrap_or(u64::MAX))).collect();
            ensure(dp == brute, format!("width distribution t={tt} n={n}"))?;
        }
    }
    Ok(format!("slope {slope:.4} vs mu_w {mu_w:.4}; q_K decreasing for K <= 40; width = brute force"))
}

fn criterion_6() -> Outcome {
    let mut worst = Duration::ZERO;
    for t in 2..=10 {
        let start = Instant::now();
        for mode in [Mode::Height, Mode::Depths] {
            let r = locallimit::verify_unique_min(arity(t), mode).map_err(|e| format!("t={t} {mode}: {e}"))?;
            ensure(r.verified(), format!("t={t} {mode}: {:?}", r.status))?;
            ensure(r.covers_full_range(), format!("t={t} {mode}: coverage gap"))?;
        }
        let el = start.elapsed();
        if t == 2 {
            ensure(el < Duration::from_secs(600), format!("t=2 took {el:?}"))?;
        }
        worst = worst.max(el);
    }
    Ok(format!("t = 2..10 verified in both modes, slowest t {worst:.1?}"))
}

fn normal_cdf(z: f64) -> f64 {
    0.5 * (1.0 + libm::erf(z / std::f64::consts::SQRT_2))
}

fn ks_distance(t: Arity, n: usize, stat: Stat) -> Result<f64, String> {
    let d = bigdp::dist(t, n, stat).map_err(|e| e.to_string())?;
    let m = d.moments();
    let (mu, sd) = (m.mean_f64(), m.variance_f64().sqrt());
    let mut cdf = 0.0;
    let mut best: f64 = 0.0;
    for v in d.entries.keys() {
        let phi = normal_cdf((*v as f64 - mu) / sd);
        best = best.max((cdf - phi).abs());
        cdf += d.probability(*v).to_f64().unwrap_or(f64::NAN);
        best = best.max((cdf - phi).abs());
    }
    Ok(best)
}

fn standardized_shape(raw: &[BigRational]) -> (f64, f64) {
    let r = |k: i64| BigRational::from_integer(k.into());
    let m = &raw[1];
    let c2 = &raw[2] - m * m;
    let c3 = &raw[3] - r(3) * m * &raw[2] + r(2) * m * m * m;
    let c4 = &raw[4] - r(4) * m * &raw[3] + r(6) * m * m * &raw[2] - r(3) * m * m * m * m;
    let v = c2.to_f64().unwrap_or(f64::NAN);
    (c3.to_f64().unwrap_or(f64::NAN) / v.powf(1.5), c4.to_f64().unwrap_or(f64::NAN) / (v * v) - 3.0)
}

fn criterion_7() -> Outcome {
    let t = arity(2);
    let mut notes = Vec::new();
    for stat in [Stat::Height, Stat::DistinctDepths] {
        let ks: Vec<f64> = [50, 100, 200].iter().map(|&n| ks_distance(t, n, stat)).collect::<Result<_, _>>()?;
        ensure(ks[0] > ks[1] && ks[1] > ks[2], format!("{stat}: KS {ks:?} not decreasing"))?;
        notes.push(format!("{stat} KS {:.3}", ks[2]));
    }
    let raw = bigdp::raw_moments(t, 200, Stat::TotalPathLength).map_err(|e| e.to_string())?;
    let (skew, kurt) = standardized_shape(&raw);
    ensure(skew.abs() <= 0.2 && kurt.abs() <= 0.3, format!("path length skewness {skew}, excess kurtosis {kurt}"))?;
    notes.push(format!("path length skewness {skew:.3}, excess kurtosis {kurt:.3}"));
    Ok(notes.join("; "))
}

fn criterion_8() -> Outcome {
    let mut checks = 0;
    for t in [2, 3] {
        for q in [0.3, 0.5, 0.6] {
            let qi = Interval::point(q);
            for j in 2..=5 {
                let lo = genfun::eval_b_jet(arity(t), qi, Interval::ONE, Interval::ONE, j).map_err(|e| e.to_string())?;
                let hi = genfun::eval_b_jet(arity(t), qi, Interval::ONE, Interval::ONE, j + 6).map_err(|e| e.to_string())?;
                for d in DerivOrder::all() {
                    let a = lo.get(d);
                    let b = hi.get(d);
                    // certified lower bound of the distance between the two finite sums
                    let diff = (a.enclosure - b.enclosure).mig();
                    let allowed = a.tail_bound + b.tail_bound;
                    ensure(
                        diff <= allowed,
                        format!("t={t} q={q} J={j} {d:?}: |b_J - b_J+6| = {diff:e} > {allowed:e}"),
                    )?;
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{checks} grid points within their tail bounds"))
}

fn criterion_9() -> Outcome {
    for t in 2..=10 {
        let r = asymptotics::constants_report(arity(t), &ConstantsOptions { p_count: 0, ..Default::default() })
            .map_err(|e| e.to_string())?;
        let half = r.mu_h * Interval::point(t as f64 / 2.0);
        ensure(r.mu_tpl.overlaps(&half), format!("t={t}: mu_tpl {} vs (t/2) mu_h {half}", r.mu_tpl))?;
        ensure(r.b_at_q0.contains(1.0), format!("t={t}: b(q0) = {}", r.b_at_q0))?;
    }
    let mut rng = ChaCha20Rng::seed_from_u64(0x5eed);
    let mut sampled = 0;
    for t in [2, 3, 4] {
        for n in 1..=40usize {
            let s = Sampler::new(arity(t), n).map_err(|e| e.to_string())?;
            let per = 100_000 / 120 + 1;
            for _ in 0..per {
                let p = s.sample(&mut rng);
                let part = model::to_partition(&p, arity(t)).map_err(|e| e.to_string())?;
                ensure(part.kraft_sum(arity(t)).is_one(), format!("Kraft sum != 1 for {:?}", p.levels()))?;
                sampled += 1;
            }
        }
    }
    ensure(sampled >= 100_000, format!("only {sampled} samples"))?;
    Ok(format!("mu_tpl ~ (t/2) mu_h and b(q0) = 1 for t = 2..10; Kraft equality on {sampled} samples"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("table reproduction", criterion_1),
        ("counting cross-check", criterion_2),
        ("asymptotic count law", criterion_3),
        ("last-level-leaves limit law", criterion_4),
        ("width", criterion_5),
        ("local limit verification", criterion_6),
        ("normality", criterion_7),
        ("certified-evaluation soundness", criterion_8),
        ("identity checks", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match f() {
            Ok(msg) => println!("criterion {}: PASS ({name}) {msg} [{:.1?}]", i + 1, start.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL ({name}) {msg} [{:.1?}]", i + 1, start.elapsed());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
