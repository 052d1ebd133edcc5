use proptest::prelude::*;
use uqdp::config::OneOrMany;
use uqdp::output::{num, Table};
use uqdp::{ExperimentConfig, ExperimentKind};

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
        -1e3f64..1e3,
        Just(0.0),
        Just(-0.0),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn numbers_round_trip_through_text(x in finite()) {
        let back: f64 = num(x).parse().unwrap();
        prop_assert_eq!(back.to_bits(), x.to_bits());
    }

    #[test]
    fn tables_round_trip_through_csv(cells in prop::collection::vec(prop::collection::vec(finite(), 3), 0..20)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let t = Table {
            header: vec!["a [s]".into(), "b [1]".into(), "c".into()],
            rows: cells.iter().map(|r| r.iter().map(|x| num(*x)).collect()).collect(),
        };
        t.write_csv(&path).unwrap();
        let back = Table::read_csv(&path).unwrap();
        prop_assert_eq!(&back, &t);
        let col = back.numbers("b [1]").unwrap();
        for (r, v) in cells.iter().zip(col) {
            prop_assert_eq!(r[1].to_bits(), v.to_bits());
        }
    }

    #[test]
    fn configs_survive_serialization(
        n in 100usize..5000,
        seed in 0..=uqdp::config::MAX_SEED,
        em in prop::collection::vec(0.01f64..2.0, 1..4),
        points in 1usize..20,
    ) {
        let mut c = ExperimentConfig::new(ExperimentKind::Dephasing);
        c.ensemble.n = n;
        c.ensemble.base_seed = seed;
        c.model.em_over_ez = OneOrMany::Many(em);
        c.noise.eta_points = points;
        let back = ExperimentConfig::from_toml(&c.to_toml(), &[]).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn overrides_win_over_the_file(n in 100usize..100_000, name in "[a-z]{1,12}") {
        let c = ExperimentConfig::from_toml(
            "experiment = \"gate-ux\"\n[ensemble]\nn = 250\n",
            &[format!("ensemble.n={n}"), format!("output.name={name}")],
        )
        .unwrap();
        prop_assert_eq!(c.ensemble.n, n);
        prop_assert_eq!(c.output.name, name);
    }
}

#[test]
fn exponent_form_outside_the_plain_range() {
    assert_eq!(num(3.3e-8), "3.3e-8");
    assert_eq!(num(0.5), "0.5");
    assert_eq!(num(2e15), "2e15");
    assert_eq!(num(f64::NAN), "NaN");
}

#[test]
fn seeds_beyond_toml_integers_are_rejected() {
    let mut c = ExperimentConfig::new(ExperimentKind::GateUx);
    c.ensemble.base_seed = uqdp::config::MAX_SEED + 1;
    assert_eq!(c.resolve().unwrap_err().field, "ensemble.base_seed");
}
