use biriesz::fieldgrid::{dft, idft, lp_norm, parseval_scale, GridFunction, GridSpec, Space};
use biriesz::indices::{a_n, alpha, b_n, critical_delta, region_classify, ExponentTriple, Q};
use biriesz::C64;
use proptest::prelude::*;

fn grid_samples(len: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), len)
        .prop_map(|v| v.into_iter().map(|(re, im)| C64::new(re, im)).collect())
}

fn unit_rational() -> impl Strategy<Value = Q> {
    (0i128..=60).prop_map(|k| Q::new(k, 60))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dft_round_trip_and_parseval(samples in grid_samples(16 * 16)) {
        let spec = GridSpec::new(2, 16, 3.0).unwrap();
        let f = GridFunction::new(spec, Space::Physical, samples).unwrap();
        let hat = dft(&f).unwrap();
        let back = idft(&hat).unwrap();
        let err = f.samples().iter().zip(back.samples()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-12);
        let lhs = lp_norm(&f, 2.0).unwrap().powi(2);
        let rhs = parseval_scale(&spec) * hat.samples().iter().map(|v| v.norm_sqr()).sum::<f64>();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.max(1.0));
    }

    #[test]
    fn lp_norms_are_ordered_on_a_unit_box(samples in grid_samples(64)) {
        // Side 1, so the measure is a probability and ‖f‖_p grows with p.
        let f = GridFunction::new(GridSpec::new(1, 64, 1.0).unwrap(), Space::Physical, samples).unwrap();
        let norms: Vec<f64> = [1.0, 2.0, 4.0, f64::INFINITY].iter().map(|&p| lp_norm(&f, p).unwrap()).collect();
        for w in norms.windows(2) {
            prop_assert!(w[0] <= w[1] * (1.0 + 1e-12));
        }
    }

    #[test]
    fn regions_and_verdicts_are_swap_symmetric(x in unit_rational(), y in unit_rational(), n in 1u32..=3) {
        prop_assert_eq!(region_classify(n, x, y), region_classify(n, y, x));
        let t = ExponentTriple::from_inverses(x, y).unwrap();
        let key = |t: &ExponentTriple| {
            let mut v: Vec<(String, String)> = critical_delta(n, t)
                .iter()
                .map(|v| (v.condition(), v.source.to_string()))
                .collect();
            v.sort();
            v
        };
        prop_assert_eq!(key(&t), key(&t.swapped()));
    }

    #[test]
    fn alpha_is_monotone_in_eps(kx in 1i128..=15, ky in 1i128..=15, e in 0i128..10) {
        // 1/p_i = 3/4 + k/60 ranges over (a_2, 1].
        let n = 2;
        let (x, y) = (a_n(n) + Q::new(kx, 60), a_n(n) + Q::new(ky, 60));
        let lo = alpha(n, x, y, Q::new(e, 10)).unwrap();
        let hi = alpha(n, x, y, Q::new(e + 1, 10)).unwrap();
        if x < b_n(n) && y < b_n(n) {
            prop_assert_eq!(hi, lo);
        } else {
            prop_assert!(hi > lo);
        }
    }
}
