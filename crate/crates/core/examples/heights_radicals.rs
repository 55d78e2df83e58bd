//! Heights of elements over R_mu and radicals found from their equations.

use prc::model::{ModelRing, StreamElem};
use prc::pradical::{detect_purely_inseparable, filtration_member, height, radical_from_equation, RPolynomial};

fn main() {
    let p = 2;
    let z = StreamElem::nagata(p, 0);
    for mu in 1..=3 {
        let ring = ModelRing::new(p, mu).unwrap();
        let levels: Vec<String> = (0..=3).map(|n| format!("{:?}", filtration_member(&z, n, &ring))).collect();
        println!("mu={mu}: height(z) = {:?}, z in B_0..B_3: {}", height(&z, &ring, 4).status, levels.join(" "));
    }

    // z is a root of X^4 - z^4 over R_2
    let ring = ModelRing::new(p, 2).unwrap().with_precision(64);
    let z4 = StreamElem::frob(2, z.clone());
    let mut coeffs = vec![StreamElem::zero(p); 5];
    coeffs[0] = z4.neg();
    coeffs[4] = StreamElem::one(p);
    let f = RPolynomial::new(coeffs, &ring).unwrap();
    println!("f(z) = 0 mod T^64: {}", f.evaluate(&z, 64).is_zero());
    println!("shape: {:?}", detect_purely_inseparable(&f).unwrap());
    let verdict = radical_from_equation(&f, &z, &ring).unwrap();
    println!("{}", serde_json::to_string_pretty(&verdict).unwrap());

    // X^2 + X - z^4 is separable
    let g = RPolynomial::new(vec![z4.neg(), StreamElem::one(p), StreamElem::one(p)], &ring).unwrap();
    println!("X^2 + X - z^4: {:?}", detect_purely_inseparable(&g).unwrap());
}
