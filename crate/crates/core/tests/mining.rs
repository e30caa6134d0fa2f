mod common;

use esmamds::data::cover;
use esmamds::eval::{compute_metrics, export_subgroup_set, import_subgroup_set};
use esmamds::search::{Preset, SearchParams};
use esmamds::set::{is_in, run_esmamds, StopReason};
use esmamds::stats::{score_extent, BaselineMode};

fn params(preset: Preset, seed: u64) -> SearchParams {
    SearchParams {
        seed,
        ..SearchParams::preset(preset)
    }
}

#[test]
fn same_seed_same_run() {
    let ds = common::toy();
    for preset in [Preset::Pop, Preset::Cpm] {
        let a = run_esmamds(&ds, &params(preset, 7)).unwrap();
        let b = run_esmamds(&ds, &params(preset, 7)).unwrap();
        assert_eq!(a.colonies, b.colonies);
        assert_eq!(a.set.members, b.set.members);
        assert_eq!(a.usage_counts, b.usage_counts);
    }
}

#[test]
fn finished_runs_satisfy_set_invariants() {
    let datasets = [common::toy(), common::veteran()];
    for ds in &datasets {
        for preset in [Preset::Pop, Preset::Cpm] {
            for seed in 0..4 {
                let p = params(preset, seed);
                let report = run_esmamds(ds, &p).unwrap();
                let members = &report.set.members;
                for (i, m) in members.iter().enumerate() {
                    // stored extents and scores are current
                    assert_eq!(m.extent(), &cover(m.description(), ds).extent);
                    assert_eq!(m.score, score_extent(m.extent(), p.baseline, ds));
                    assert!(m.score.p_value <= p.alpha, "non-exceptional member kept");
                    assert!(!m.description().is_empty());
                    for other in &members[i + 1..] {
                        assert_ne!(m.description(), other.description());
                    }
                }
                // uncovered set agrees with the last colony log
                let covered = report.set.covered(ds);
                let last = report.colonies.last().unwrap();
                assert_eq!(last.uncovered, ds.n_records() - covered.len());
                assert_eq!(last.set_size, members.len());
                match report.stop {
                    StopReason::AllCovered => assert_eq!(last.uncovered, 0),
                    StopReason::Stagnation => assert!(last.stagnation > p.max_stag),
                }
                // every found subgroup feeds the usage counts
                let used: usize = report
                    .colonies
                    .iter()
                    .filter_map(|c| c.found.as_ref())
                    .map(|d| d.n_items())
                    .sum();
                assert_eq!(report.usage_counts.iter().sum::<usize>(), used);
            }
        }
    }
}

#[test]
fn zero_stagnation_budget_stops_after_first_flat_colony() {
    let ds = common::toy();
    let p = SearchParams {
        max_stag: 0,
        ..params(Preset::Pop, 3)
    };
    let report = run_esmamds(&ds, &p).unwrap();
    let (last, earlier) = report.colonies.split_last().unwrap();
    assert!(earlier.iter().all(|c| c.stagnation == 0));
    match report.stop {
        StopReason::Stagnation => assert_eq!(last.stagnation, 1),
        StopReason::AllCovered => assert_eq!((last.stagnation, last.uncovered), (0, 0)),
    }
}

#[test]
fn export_import_round_trip_preserves_metrics() {
    let ds = common::veteran();
    for preset in [Preset::Pop, Preset::Cpm] {
        let report = run_esmamds(&ds, &params(preset, 11)).unwrap();
        let file = export_subgroup_set(&report.set, &ds, serde_json::json!({"seed": 11}));
        let text = serde_json::to_string_pretty(&file).unwrap();
        let back = import_subgroup_set(&text, &ds).unwrap();
        assert_eq!(back.members, report.set.members);
        let before = compute_metrics(&report.set.members, &ds, report.set.alpha).unwrap();
        let after = compute_metrics(&back.members, &ds, back.alpha).unwrap();
        assert_eq!(before, after);
    }
}

#[test]
fn hand_computed_metrics_for_a_two_member_file() {
    // {a=1}: 20 short-lived records. {a in 0,1}: the same 20 plus 20 long
    // ones, which reproduces the population's time distribution exactly.
    let ds = common::four_groups();
    let text = r#"{
        "schema_version": 1,
        "baseline": "population",
        "alpha": 0.05,
        "subgroups": [
            {"conditions": [{"attribute": "a", "values": ["1"]}]},
            {"description": "a IN {\"0\", \"1\"}"}
        ]
    }"#;
    let set = import_subgroup_set(text, &ds).unwrap();
    assert_eq!(set.baseline, BaselineMode::Population);
    assert_eq!(set.members[1].score.p_value, 1.0);
    let m = compute_metrics(&set.members, &ds, set.alpha).unwrap();
    assert_eq!(m.num_subgroups, 2);
    assert_eq!(m.epsilon, Some(0.5));
    assert_eq!(m.avg_length, Some(1.0));
    assert_eq!(m.sg_cov, Some(0.375));
    assert_eq!(m.db_cov, 0.5);
    // overlap coefficients: one shared item over the smaller size 1,
    // 20 shared records over the smaller extent of 20
    assert_eq!(m.rho_d, Some(1.0));
    assert_eq!(m.rho_c, Some(1.0));
    assert_eq!(m.rho_m, Some(0.0));
    // g = 2 on 20 records, 1 on 20, 0 on 40; mean 0.75
    assert_eq!(m.g_hat, 0.75);
    let cr = (20.0 * 1.25 + 20.0 * 0.25 + 40.0 * 0.75) / 0.75 / 80.0;
    assert!((m.cr.unwrap() - cr).abs() < 1e-12);
    assert!(is_in(
        set.members[0].description(),
        set.members[1].description()
    ));
}

#[test]
fn import_errors_name_the_location() {
    let ds = common::four_groups();
    let text = r#"{"schema_version": 1, "baseline": "population", "alpha": 0.05,
        "subgroups": [{"conditions": [{"attribute": "a", "values": ["9"]}]}]}"#;
    let err = import_subgroup_set(text, &ds).unwrap_err().to_string();
    assert!(err.contains("subgroups[0].conditions[0]"), "{err}");
    assert!(err.contains("`9`"), "{err}");
    let err = import_subgroup_set(r#"{"schema_version": 2}"#, &ds)
        .unwrap_err()
        .to_string();
    assert!(
        err.contains("line") || err.contains("schema_version"),
        "{err}"
    );
}
