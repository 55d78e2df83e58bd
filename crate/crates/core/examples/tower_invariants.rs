//! Purely inseparable towers over R_mu and the invariants (e, f, n).

use prc::model::{ModelRing, StreamElem};
use prc::tower::ModelTower;

fn main() {
    for (p, mu, nu) in [(2, 1, 1), (3, 1, 1), (2, 2, 2), (3, 2, 1)] {
        let ring = ModelRing::new(p, mu).unwrap();
        // b = w_0^(p^(mu - nu)) satisfies b^(p^nu) in R_mu
        let w = StreamElem::nagata(p, 0);
        let b = if mu > nu { StreamElem::frob(mu - nu, w) } else { w };
        let t = ModelTower::new(ring).adjoin(StreamElem::frob(nu, b.clone()), nu, Some(b)).unwrap();
        let inv = t.invariants().unwrap();
        let fiber = t.special_fiber();
        println!(
            "p={p} mu={mu} nu={nu}: rank {}, (e, f, n) = ({}, {}, {}), nilradical dim {}, filtration {:?}",
            t.degree(),
            inv.e,
            inv.f,
            inv.n,
            fiber.nilradical().len(),
            fiber.radical_filtration().unwrap()
        );
    }

    // towers serialize to JSON and back
    let ring = ModelRing::new(2, 1).unwrap();
    let w = StreamElem::nagata(2, 1);
    let t = ModelTower::new(ring).adjoin(StreamElem::frob(1, w.clone()), 1, Some(w)).unwrap();
    let json = t.to_json();
    println!("{json}");
    println!("roundtrip invariants: {:?}", ModelTower::from_json(&json).unwrap().invariants().unwrap());
}
