//! The chain R[w_0] < R[w_1] < R[w_2] < ... inside the closure of R_1.

use prc::model::{ModelRing, StreamElem};
use prc::tower::ModelTower;
use prc::verify::subalgebra_membership;

fn main() {
    let p = 2;
    let ring = ModelRing::new(p, 1).unwrap();
    let tower = |j: usize| {
        let w = StreamElem::nagata(p, j);
        ModelTower::new(ring.clone()).adjoin(StreamElem::frob(1, w.clone()), 1, Some(w)).unwrap()
    };
    for j in 0..3 {
        let a = tower(j);
        let next = tower(j + 1);
        let w = StreamElem::nagata(p, j);
        let w_next = StreamElem::nagata(p, j + 1);
        let down = subalgebra_membership(&w, &next, 128);
        let up = subalgebra_membership(&w_next, &a, 128);
        println!("w_{j} in R[w_{}]: {:?} ({})", j + 1, down.status, down.witness);
        println!("w_{} in R[w_{j}]: {:?} ({})", j + 1, up.status, up.witness);
    }
}
