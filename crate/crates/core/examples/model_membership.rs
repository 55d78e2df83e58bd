//! Deciding membership in R_mu = k^(p^mu)[[T]][k] for rule-defined streams.

use prc::field::FieldElem;
use prc::model::{in_model, verify_verdict, ModelRing, StreamElem};

fn show(name: &str, b: &StreamElem, ring: &ModelRing) {
    let v = in_model(b, ring);
    let checked = verify_verdict(b, ring, &v).map(|_| "verified").unwrap_or("not verified");
    println!("{name}: {} ({checked})", v.summary());
}

fn main() {
    let p = 2;
    let ring = ModelRing::new(p, 1).unwrap().with_precision(64);

    // z = sum t_i T^i has p-independent coefficients
    let z = StreamElem::nagata(p, 0);
    show("z", &z, &ring);

    // its square has coefficients in k^2
    show("z^2", &StreamElem::frob(1, z.clone()), &ring);

    // polynomials in T over k are always members
    let poly = StreamElem::polynomial(p, vec![FieldElem::var(0, p), FieldElem::one(p), FieldElem::var(5, p)]);
    show("t0 + T + t5 T^2", &poly, &ring);

    // t3 * z^2 + T^2: members are closed under k-scaling and sums
    let mixed = StreamElem::sum(vec![
        StreamElem::scalar_mul(FieldElem::var(3, p), StreamElem::frob(1, z.clone())),
        StreamElem::t_power(p, 2),
    ]);
    show("t3 z^2 + T^2", &mixed, &ring);

    // over R_2 the square of z is no longer enough
    let ring2 = ModelRing::new(p, 2).unwrap().with_precision(64);
    show("z^2 over R_2", &StreamElem::frob(1, z.clone()), &ring2);
    show("z^4 over R_2", &StreamElem::frob(2, z), &ring2);
}
