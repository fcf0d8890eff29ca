use cantrees::interval::{unit_circle_point, ComplexBox, Interval};
use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap()
}

fn encloses(i: Interval, r: &BigRational) -> bool {
    exact(i.lo()) <= *r && *r <= exact(i.hi())
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e6..1e6f64, -1.0..1.0f64, -1e-8..1e-8f64]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20_000))]

    #[test]
    fn ring_operations_contain_exact_results(a in finite(), b in finite()) {
        let (x, y) = (Interval::point(a), Interval::point(b));
        let (ra, rb) = (exact(a), exact(b));
        prop_assert!(encloses(x + y, &(&ra + &rb)));
        prop_assert!(encloses(x - y, &(&ra - &rb)));
        prop_assert!(encloses(x * y, &(&ra * &rb)));
        prop_assert!(encloses(x.sqr(), &(&ra * &ra)));
        prop_assert!(encloses(-x, &-&ra));
        prop_assert!(encloses(x.abs(), &ra.abs()));
        if b != 0.0 {
            prop_assert!(encloses(x.div(y).unwrap(), &(&ra / &rb)));
        }
    }

    #[test]
    fn operations_on_wide_intervals(a in finite(), w in 0.0..10.0f64, b in finite(), v in 0.0..10.0f64, s in 0.0..=1.0f64, u in 0.0..=1.0f64) {
        let x = Interval::new(a, a + w).unwrap();
        let y = Interval::new(b, b + v).unwrap();
        let px = exact(a) + exact(w * s);
        let py = exact(b) + exact(v * u);
        // points chosen inside the exact intervals
        prop_assume!(px <= exact(x.hi()) && py <= exact(y.hi()));
        prop_assert!(encloses(x * y, &(&px * &py)));
        prop_assert!(encloses(x + y, &(&px + &py)));
        prop_assert!(encloses(x.pow_int(3), &(&px * &px * &px)));
    }

    #[test]
    fn sqrt_is_bracketed(a in 0.0..1e6f64) {
        let r = Interval::point(a).sqrt().unwrap();
        let ra = exact(a);
        prop_assert!(exact(r.lo()) * exact(r.lo()) <= ra);
        prop_assert!(exact(r.hi()) * exact(r.hi()) >= ra);
    }

    #[test]
    fn transcendental_functions_contain_reference(a in -30.0..30.0f64) {
        let x = Interval::point(a);
        prop_assert!(x.exp().contains(libm::exp(a)));
        prop_assert!(x.cos().contains(libm::cos(a)));
        prop_assert!(x.sin().contains(libm::sin(a)));
        if a > 0.0 {
            prop_assert!(x.ln().unwrap().contains(libm::log(a)));
        }
    }

    #[test]
    fn multiplication_near_one_stays_tight(a in 0.9..1.1f64, b in 0.9..1.1f64, k in 1u32..40) {
        let eps = f64::powi(2.0, -(k as i32));
        let x = Interval::new(a, a + eps).unwrap();
        let y = Interval::new(b, b + eps).unwrap();
        prop_assert!((x * y).width() <= 3.0 * eps);
    }

    #[test]
    fn complex_products_contain_exact_results(a in finite(), b in finite(), c in finite(), d in finite()) {
        let z = ComplexBox::point(a, b) * ComplexBox::point(c, d);
        let (ra, rb, rc, rd) = (exact(a), exact(b), exact(c), exact(d));
        prop_assert!(encloses(z.re, &(&ra * &rc - &rb * &rd)));
        prop_assert!(encloses(z.im, &(&ra * &rd + &rb * &rc)));
    }

    #[test]
    fn unit_circle_at_dyadic_angles(k in -4096i32..=4096) {
        let phi = k as f64 / 1024.0;
        let z = unit_circle_point(Interval::point(phi));
        prop_assert!(z.contains(libm::cos(phi), libm::sin(phi)));
        prop_assert!(z.norm_sqr().contains(1.0));
    }
}
