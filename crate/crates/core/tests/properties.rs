mod common;

use common::random_landscape;
use fitland::features::epistasis::{classify_squares, for_each_square, idiosyncrasy_index, pairwise_r2};
use fitland::features::navigability::neutrality;
use fitland::generators::{generate, GeneratorConfig, Model};
use fitland::perturb::subsample;
use fitland::{analyze, AnalysisOptions, Feature};
use proptest::prelude::*;

fn completeness() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), Just(0.8), Just(0.5)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fraction_identities(seed in any::<u64>(), c in completeness()) {
        let l = random_landscape(seed, c, 1024);
        if let Ok(e) = classify_squares(&l, 1e-9) {
            if e.counts.epistatic > 0 {
                prop_assert!((e.eps_mag + e.eps_sign + e.eps_reci - 1.0).abs() < 1e-12);
                prop_assert!((e.eps_pos + e.eps_neg - 1.0).abs() < 1e-12);
            }
            prop_assert!(e.counts.epistatic <= e.counts.total);
        }
    }

    #[test]
    fn feature_ranges(seed in any::<u64>(), c in completeness()) {
        let l = random_landscape(seed, c, 512);
        let opts = AnalysisOptions { walks: 50, sigma: Some(0.05), ..Default::default() };
        let r = analyze(&l, &opts).unwrap();
        use Feature::*;
        for (f, v) in r.features() {
            let Some(v) = v else { continue };
            prop_assert!(v.is_finite());
            match f {
                RhoA | Gamma | Nfc | EpsDr | EpsIc | Fdc | BfcAcc | BfcGreedy => {
                    prop_assert!((-1.0..=1.0).contains(&v), "{f} = {v}")
                }
                RsRatio | IId => prop_assert!(v >= 0.0, "{f} = {v}"),
                _ => prop_assert!((0.0..=1.0).contains(&v), "{f} = {v}"),
            }
        }
        prop_assert!(r.alpha_go.unwrap() > 0.0);
    }

    #[test]
    fn neutrality_monotone_in_sigma(seed in any::<u64>(), c in completeness(), s in 0.0f64..2.0, ds in 0.0f64..1.0) {
        let l = random_landscape(seed, c, 1024);
        if let (Some(a), Some(b)) = (neutrality(&l, s), neutrality(&l, s + ds)) {
            prop_assert!(b >= a);
        }
    }

    #[test]
    fn deletion_never_grows_accessible_basin(seed in any::<u64>(), alpha in 0.0f64..0.9, sub_seed in any::<u64>()) {
        let l = random_landscape(seed, 1.0, 1024);
        let (gstar, _) = l.global_optimum();
        let full = l.accessible_basin(gstar).unwrap().len();
        let sub = subsample(&l, alpha, true, sub_seed).unwrap();
        let g = sub.node_of(l.code(gstar)).unwrap();
        prop_assert_eq!(sub.global_optimum().0, g);
        prop_assert!(sub.accessible_basin(g).unwrap().len() <= full);
    }

    #[test]
    fn greedy_walks_climb(seed in any::<u64>(), c in completeness(), start in any::<prop::sample::Index>()) {
        let l = random_landscape(seed, c, 2048);
        let s = start.index(l.node_count());
        let w = l.greedy_walk(l.code(s)).unwrap();
        prop_assert!(w.endpoint_fitness >= l.fitness()[s]);
        prop_assert!(w.steps <= l.node_count());
        prop_assert!(l.is_sink(l.node_of(w.endpoint).unwrap()));
    }

    #[test]
    fn additive_landscapes_have_no_epistasis(seed in any::<u64>(), sizes in prop::collection::vec(2usize..=4, 2..=5)) {
        let cfg = GeneratorConfig {
            model: Model::Additive { mu_a: 0.3, sigma_a: 1.0 },
            alphabet_sizes: sizes,
            seed,
        };
        let l = generate(&cfg).unwrap();
        let mut worst = 0.0f64;
        for_each_square(&l, 0..l.node_count(), |sq| worst = worst.max(sq.epsilon().abs()));
        prop_assert!(worst <= 1e-9);
        prop_assert!(idiosyncrasy_index(&l).unwrap().unwrap() <= 1e-9);
        prop_assert!((pairwise_r2(&l, 100_000, 0).unwrap().r2.unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn eggbox_squares_are_reciprocal(n in 2usize..=8, base in -5.0f64..5.0, amp in 0.1f64..5.0) {
        let cfg = GeneratorConfig::binary(Model::Eggbox { base, amplitude: amp }, n, 0);
        let e = classify_squares(&generate(&cfg).unwrap(), 1e-9).unwrap();
        prop_assert_eq!(e.eps_reci, 1.0);
    }
}
