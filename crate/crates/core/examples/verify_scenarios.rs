//! Runs every verification scenario and prints the text reports, as
//! `prc verify --scenario all --format text` does.

use prc::verify::{run_all, run_scenario, ScenarioParams};

fn main() {
    let params = ScenarioParams { p: 3, precision: 48, ..ScenarioParams::default() };
    for report in run_all(&params).unwrap() {
        print!("{}", report.to_text());
    }

    // a single scenario as JSON
    let r = run_scenario("chain", &ScenarioParams::default()).unwrap();
    println!("{}", r.to_json());
    println!("exit code would be {}", r.exit_code());
}
