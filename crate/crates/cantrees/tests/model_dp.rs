use std::collections::{BTreeMap, HashSet};

use cantrees::bigdp::{self, Stat};
use cantrees::model::{self, enumerate_all, parameters, Arity, LevelProfile};
use cantrees::series;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn arity(t: u32) -> Arity {
    Arity::new(t).unwrap()
}

#[test]
fn every_profile_is_a_complete_code() {
    for t in 2..=4 {
        let a = arity(t);
        for n in 0..=15u64 {
            let mut seen = HashSet::new();
            for p in enumerate_all(a, n) {
                assert!(model::validate_profile(&p, a), "{p} invalid");
                assert!(seen.insert(p.clone()), "{p} repeated");
                let part = model::to_partition(&p, a).unwrap();
                assert_eq!(part.kraft_sum(a), BigRational::one());
                assert_eq!(model::from_partition(&part, a).unwrap(), p);
                let pv = parameters(&p, a).unwrap();
                let tt = t as u64;
                assert_eq!(pv.tau, 1 + n * (tt - 1));
                assert_eq!(pv.ell_ext + pv.ell_int, pv.ell);
                // ell_ext = (t-1)/t * ell + n, cleared of denominators
                assert_eq!(tt * pv.ell_ext, (tt - 1) * pv.ell + tt * n);
            }
        }
    }
}

#[test]
fn code_round_trip() {
    for t in 2..=3 {
        let a = arity(t);
        for n in 0..=9u64 {
            for p in enumerate_all(a, n) {
                let code = model::to_code(&p, a).unwrap();
                assert_eq!(model::from_code(&code).unwrap(), p);
                let again = model::CodeWordSet::from_strings(a, &code.to_strings()).unwrap();
                assert_eq!(again, code);
            }
        }
    }
}

/// Lengths of a random complete t-ary code, built by splitting leaves.
fn random_profile(t: u32, splits: &[usize]) -> LevelProfile {
    let mut depths = vec![0u32];
    for &s in splits {
        let i = s % depths.len();
        let d = depths.swap_remove(i);
        depths.extend(std::iter::repeat(d + 1).take(t as usize));
    }
    depths.sort_unstable();
    let p = model::Partition { exponents: depths };
    model::from_partition(&p, arity(t)).unwrap()
}

proptest! {
    #[test]
    fn random_trees_have_unit_kraft_sum(t in 2u32..=5, splits in proptest::collection::vec(0usize..1000, 0..40)) {
        let a = arity(t);
        let p = random_profile(t, &splits);
        prop_assert!(model::validate_profile(&p, a));
        prop_assert_eq!(p.size(), splits.len() as u64);
        let part = model::to_partition(&p, a).unwrap();
        prop_assert_eq!(part.kraft_sum(a), BigRational::one());
        prop_assert_eq!(model::from_partition(&part, a).unwrap(), p);
    }

    #[test]
    fn corrupted_profiles_are_rejected(t in 2u32..=4, splits in proptest::collection::vec(0usize..1000, 1..20), bump in 1u64..5) {
        let a = arity(t);
        let mut levels = random_profile(t, &splits).0;
        let last = levels.len() - 1;
        levels[last] += bump * t as u64 * levels.iter().sum::<u64>();
        prop_assert!(!model::validate_profile(&LevelProfile(levels), a));
    }

    #[test]
    fn sampler_is_reproducible(t in 2u32..=4, n in 0usize..80, seed in any::<u64>()) {
        let a = arity(t);
        let x = bigdp::sample_uniform(a, n, seed).unwrap();
        prop_assert_eq!(&x, &bigdp::sample_uniform(a, n, seed).unwrap());
        prop_assert!(model::validate_profile(&x, a));
        prop_assert_eq!(x.size(), n as u64);
    }
}

#[test]
fn last_level_split_sums_to_count() {
    for t in 2..=5 {
        let a = arity(t);
        let counts = bigdp::counts_upto(a, 200).unwrap();
        for n in (0..=200).step_by(13) {
            let by_m = bigdp::count_by_last(a, n).unwrap();
            let s = by_m.values().fold(BigUint::zero(), |x, y| x + y);
            assert_eq!(s, counts[n], "t={t} n={n}");
        }
    }
}

#[test]
fn counts_match_series() {
    for t in 2..=5 {
        let a = arity(t);
        let h = series::series_h(a, 120);
        let counts = bigdp::counts_upto(a, 120).unwrap();
        for (n, c) in counts.iter().enumerate() {
            assert_eq!(h.coeff(n), &BigRational::from_integer(c.clone().into()), "t={t} n={n}");
        }
    }
}

#[test]
fn distributions_match_brute_force() {
    for t in 2..=3 {
        let a = arity(t);
        for n in 0..=12usize {
            let profiles: Vec<_> = enumerate_all(a, n as u64).collect();
            let count = bigdp::count(a, n).unwrap();
            assert_eq!(count, BigUint::from(profiles.len()));
            for stat in Stat::ALL {
                let mut brute: BTreeMap<u64, BigUint> = BTreeMap::new();
                for p in &profiles {
                    *brute.entry(stat.of(&parameters(p, a).unwrap())).or_default() += 1u32;
                }
                let d = bigdp::dist(a, n, stat).unwrap();
                assert_eq!(d.entries, brute, "t={t} n={n} {stat}");
                assert_eq!(d.total, count);
            }
        }
    }
}

#[test]
fn moments_match_distributions() {
    for t in 2..=3 {
        let a = arity(t);
        for n in [1usize, 7, 20, 45] {
            for stat in Stat::ALL {
                if stat == Stat::TotalPathLength && n > 20 {
                    continue;
                }
                let d = bigdp::dist(a, n, stat).unwrap();
                let raw = bigdp::raw_moments(a, n, stat).unwrap();
                for (k, r) in raw.iter().enumerate() {
                    assert_eq!(r, &d.raw_moment(k as u32), "t={t} n={n} {stat} k={k}");
                }
                assert_eq!(bigdp::moments(a, n, stat).unwrap(), d.moments());
            }
        }
    }
}

#[test]
fn last_level_leaves_are_multiples_of_t() {
    for t in 2..=4 {
        let a = arity(t);
        for n in 1..=40 {
            let d = bigdp::dist(a, n, Stat::LastLevelLeaves).unwrap();
            assert!(d.entries.keys().all(|m| m % t as u64 == 0), "t={t} n={n}");
        }
    }
}
