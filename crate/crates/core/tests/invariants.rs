use proptest::prelude::*;

use portscreen::harness::{calibrate_threshold, derive_scenario, Scenario};
use portscreen::model::{simulate, Mode, ModelConfig, SpeedUp};

fn config_strategy() -> impl Strategy<Value = ModelConfig> {
    (
        (0.2f64..3.0, 20_000f64..600_000.0, 0.0f64..1.0, 0.0f64..0.2),
        (1usize..5, 1usize..6, 1usize..10, 0.0f64..1.0, 1usize..6, 0.0f64..1.0),
        (0.0f64..1.0, 0.0f64..0.1, 5.0f64..90.0, 1usize..300, any::<bool>()),
        (proptest::option::of(1usize..12), proptest::option::of((1usize..8, 0.3f64..1.0, 0.3f64..1.0))),
    )
        .prop_map(|(a, s, f, i)| {
            let mut c = ModelConfig::default();
            (c.horizon_days, c.arrivals.annual_lorries, c.arrivals.soft_sided_fraction, c.arrivals.positive_fraction) = a;
            c.stations.french_soft.servers = s.0;
            c.stations.french_hard.servers = s.1;
            c.stations.uk_shed.servers = s.2;
            c.stations.uk_shed.search_fraction = s.3;
            c.stations.berth.servers = s.4;
            c.stations.berth.search_fraction = s.5;
            c.sensors.shed_mixed.true_positive = f.0;
            c.sensors.pmmw.false_positive = f.1;
            c.sensors.shed_mixed.false_positive = f.1;
            c.ferry.headway = f.2;
            c.ferry.capacity = f.3;
            c.ferry.interrupt = f.4;
            c.interventions.queue_bypass = i.0;
            c.interventions.speed_up = i.1.map(|(q, cy, d)| SpeedUp {
                queue_threshold: q,
                cycle_multiplier: cy,
                detection_multiplier: d,
            });
            c
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lorries_and_positives_are_conserved(c in config_strategy(), seed in any::<u64>()) {
        let r = simulate(&c, seed).unwrap();
        prop_assert_eq!(r.admitted, r.boarded + r.found_total + r.in_system);
        prop_assert_eq!(r.marked, r.plf_total() + r.plm.unwrap() + r.marked_in_system);
        prop_assert_eq!(r.found_unmarked, 0);
        prop_assert!(r.service_problem >= 0.0 && r.service_problem <= 1.0);
        for u in [r.util_french_soft, r.util_french_hard, r.util_co2, r.util_sheds, r.util_berth] {
            prop_assert!((0.0..=1.0).contains(&u));
        }
    }

    #[test]
    fn bypass_bounds_the_shed_queue(c in config_strategy(), k in 1usize..8, seed in any::<u64>()) {
        let mut c = c;
        c.interventions.queue_bypass = Some(k);
        let r = simulate(&c, seed).unwrap();
        prop_assert!(r.max_queue_sheds as usize <= k);
    }

    #[test]
    fn process_mode_conserves_lorries(c in config_strategy(), seed in any::<u64>()) {
        let mut c = c;
        c.mode = Mode::Po;
        let r = simulate(&c, seed).unwrap();
        prop_assert_eq!(r.admitted, r.boarded + r.found_total + r.in_system);
        prop_assert_eq!(r.plm, None);
        prop_assert_eq!(r.marked, 0);
    }

    #[test]
    fn scenario_derivation_composes(tg1 in -0.5f64..1.0, sg1 in -0.5f64..1.0, tg2 in -0.5f64..1.0, sg2 in -0.5f64..1.0, plg in -0.5f64..1.0) {
        let base = ModelConfig::default();
        let a = Scenario::new("a", tg1, sg1);
        let b = Scenario::new("b", tg2, sg2).with_plg(plg);
        let first = derive_scenario(&base, &a);
        let twice = derive_scenario(&first, &b);
        let once = derive_scenario(&base, &a.then(&b));
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(1.0);
        prop_assert!(close(twice.arrivals.annual_lorries, once.arrivals.annual_lorries));
        // Clamping at 1 breaks exact composition, so only compare unclamped fractions.
        if [&first, &once, &twice].iter().all(|c| c.stations.berth.search_fraction < 1.0) {
            prop_assert!(close(twice.stations.berth.search_fraction, once.stations.berth.search_fraction));
        }
        if [&first, &once, &twice].iter().all(|c| c.arrivals.positive_fraction < 1.0) {
            prop_assert!(close(twice.arrivals.positive_fraction, once.arrivals.positive_fraction));
        }
    }

    #[test]
    fn threshold_leaves_at_most_the_share_above(samples in proptest::collection::vec(0.0f64..500.0, 2..400), share in 0.01f64..0.5) {
        prop_assume!(samples.iter().any(|&x| x != samples[0]));
        let t = calibrate_threshold(&samples, share).unwrap();
        let above = samples.iter().filter(|&&x| x > t).count() as f64 / samples.len() as f64;
        prop_assert!(above <= share + 1e-12);
        let at_least = samples.iter().filter(|&&x| x >= t).count() as f64 / samples.len() as f64;
        prop_assert!(at_least >= share - 1e-12);
    }
}
