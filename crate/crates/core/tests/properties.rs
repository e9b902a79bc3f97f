use proptest::prelude::*;

use wishart_nc::partition::{alpha, alpha_inverse, enumerate_noncrossing, PairPartition, Partition};
use wishart_nc::rational::{frac, parse_rational, Rational};
use wishart_nc::series::Distribution;
use wishart_nc::words::make_w;
use wishart_nc::{CumulantSequence, FormalPowerSeries, LabelPattern};

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=6).prop_map(|(a, b)| frac(a, b))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (1i64..=9, 1i64..=6, any::<bool>()).prop_map(|(a, b, neg)| frac(if neg { -a } else { a }, b))
}

/// Noncrossing partition of `[n]` picked by index.
fn noncrossing(max_n: usize) -> impl Strategy<Value = Partition> {
    (1..=max_n, any::<prop::sample::Index>()).prop_map(|(n, i)| {
        let all = enumerate_noncrossing(n, 24).unwrap();
        all[i.index(all.len())].clone()
    })
}

fn distribution(order: usize) -> impl Strategy<Value = Distribution> {
    (nonzero_rational(), prop::collection::vec(rational(), order - 1)).prop_map(|(m1, rest)| {
        let mut m = vec![m1];
        m.extend(rest);
        Distribution::from_moments(m)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compositional_inverse_round_trip(c1 in nonzero_rational(), rest in prop::collection::vec(rational(), 7)) {
        let mut coeffs = vec![Rational::from_integer(0.into()), c1];
        coeffs.extend(rest);
        let f = FormalPowerSeries::new(coeffs);
        let g = f.compositional_inverse().unwrap();
        prop_assert_eq!(f.compose(&g).unwrap(), FormalPowerSeries::z(f.order()));
        prop_assert_eq!(g.compose(&f).unwrap(), FormalPowerSeries::z(f.order()));
    }

    #[test]
    fn reciprocal_round_trip(c0 in nonzero_rational(), rest in prop::collection::vec(rational(), 8)) {
        let mut coeffs = vec![c0];
        coeffs.extend(rest);
        let f = FormalPowerSeries::new(coeffs);
        prop_assert_eq!(&f * &f.reciprocal().unwrap(), FormalPowerSeries::one(f.order()));
    }

    #[test]
    fn moments_cumulants_round_trip(r in prop::collection::vec(rational(), 1..=12)) {
        let k = r.len();
        let c = CumulantSequence::new(r);
        let d = Distribution::from_cumulants(&c, k).unwrap();
        prop_assert_eq!(d.cumulants().unwrap(), c);
    }

    #[test]
    fn s_transform_round_trip(d in distribution(7)) {
        let s = d.s_transform().unwrap();
        prop_assert_eq!(Distribution::from_s_transform(&s).unwrap(), d.truncate(s.order() + 1));
    }

    #[test]
    fn box_times_commutes_and_associates(a in distribution(6), b in distribution(6), c in distribution(6)) {
        prop_assert_eq!(a.box_times(&b).unwrap(), b.box_times(&a).unwrap());
        prop_assert_eq!(
            a.box_times(&b).unwrap().box_times(&c).unwrap(),
            a.box_times(&b.box_times(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn v_transform_composes(d in distribution(6), s in 1i64..=5, t in 1i64..=5) {
        let (s, t) = (frac(s, 2), frac(3, t));
        prop_assert_eq!(
            d.v_transform(&s).unwrap().v_transform(&t).unwrap(),
            d.v_transform(&(&s * &t)).unwrap()
        );
    }

    #[test]
    fn partition_text_round_trip(p in noncrossing(10)) {
        prop_assert_eq!(p.to_string().parse::<Partition>().unwrap(), p);
    }

    #[test]
    fn kreweras_block_counts_sum_to_n_plus_one(p in noncrossing(10)) {
        let k = p.kreweras_complement().unwrap();
        prop_assert!(k.is_noncrossing());
        prop_assert_eq!(p.num_blocks() + k.num_blocks(), p.n() + 1);
    }

    #[test]
    fn alpha_round_trip(p in noncrossing(10)) {
        let s = alpha(&p).unwrap();
        prop_assert!(s.is_noncrossing());
        prop_assert_eq!(s.n(), 2 * p.n());
        prop_assert_eq!(alpha_inverse(&s).unwrap(), p.clone());
        prop_assert_eq!(s.to_string().parse::<PairPartition>().unwrap(), s);
    }

    #[test]
    fn adapted_partitions_are_even_and_agree_with_reduction(
        p in 1usize..=3,
        k in 1usize..=2,
        distinct in any::<bool>(),
        i in any::<prop::sample::Index>(),
    ) {
        let pat = if distinct { LabelPattern::Distinct } else { LabelPattern::Same };
        let w = make_w(p, &pat.labels(p).unwrap()).unwrap().power(k);
        let all = w.enumerate_adapted(24).unwrap();
        let pi = &all[i.index(all.len())];
        prop_assert!(pi.blocks().iter().all(|b| b.len() % 2 == 0));
        prop_assert!(w.is_color_adapted_by_reduction(pi).unwrap());
    }

    #[test]
    fn rational_text_round_trip(q in rational()) {
        prop_assert_eq!(parse_rational(&q.to_string()).unwrap(), q);
    }
}
