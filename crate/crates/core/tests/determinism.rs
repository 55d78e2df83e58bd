use prc::verify::{run_all, run_scenario, ReportCheck, ScenarioParams, SCENARIOS};

fn checks(name: &str, params: &ScenarioParams) -> Vec<ReportCheck> {
    run_scenario(name, params).expect("valid parameters").checks
}

#[test]
fn same_seed_same_report() {
    let params = ScenarioParams { seed: 1234, ..ScenarioParams::default() };
    for name in SCENARIOS {
        assert_eq!(checks(name, &params), checks(name, &params), "{name}");
    }
}

#[test]
fn run_all_matches_individual_runs() {
    let params = ScenarioParams { p: 3, precision: 48, ..ScenarioParams::default() };
    let all = run_all(&params).unwrap();
    for (report, name) in all.iter().zip(SCENARIOS) {
        assert_eq!(report.scenario, name);
        assert_eq!(report.checks, checks(name, &params));
    }
}

#[test]
fn seeds_change_random_samples() {
    let a = checks("tensor", &ScenarioParams { seed: 1, ..ScenarioParams::default() });
    let b = checks("tensor", &ScenarioParams { seed: 2, ..ScenarioParams::default() });
    assert_ne!(a, b);
}
