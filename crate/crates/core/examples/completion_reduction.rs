//! The completion of R[w_j] is k[[T]][Z]/(Z^p - w_j^p), which is not reduced.

use prc::model::{ModelRing, StreamElem};
use prc::tower::{reduction_of_completion, ModelTower};

fn main() {
    let p = 3;
    let ring = ModelRing::new(p, 1).unwrap();
    let w = StreamElem::nagata(p, 0);
    let t = ModelTower::new(ring).adjoin(StreamElem::frob(1, w.clone()), 1, Some(w)).unwrap();

    // input precision p * 32 leaves 32 terms after the p-th root
    let completed = t.completion_to(p as usize * 32, 32).unwrap();
    let report = reduction_of_completion(&completed).unwrap();

    println!("precision: mod T^{}", report.precision);
    for (i, (order, sharp)) in report.nilpotency_orders.iter().enumerate() {
        println!("Z_{} - b_{}: nilpotent of order {order}, lower power nonzero: {sharp}", i + 1, i + 1);
    }
    for c in &report.checks {
        println!("[{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail);
    }
    println!("e over R = {}, e over the completion = {}", t.invariants().unwrap().e, completed.invariants().unwrap().e);
}
