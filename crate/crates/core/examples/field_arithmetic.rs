//! Arithmetic in k = F_p(t_0, t_1, ...) and p-independence over k^(p^mu).

use prc::field::{p_decompose, p_span_rank, FieldElem, PSpan};

fn main() {
    let p = 3;
    let x = FieldElem::parse("t0^2*t1 + 2*t2", p).unwrap();
    let y = FieldElem::parse("t0 + 1 / t1", p).unwrap();

    println!("x = {x}");
    println!("y = {y}");
    println!("x * y = {}", x.mul(&y));
    println!("x / y = {}", x.div(&y).unwrap());

    // Frobenius is injective and p-th roots invert it
    let x3 = x.frobenius(1);
    println!("x^3 = {x3}");
    println!("cube root of x^3 = {}", x3.pth_root(1).unwrap());
    println!("cube root of x exists: {}", x.pth_root(1).is_some());

    // x in coordinates over k^3: x = sum c_m^3 * m over p-reduced monomials m
    for (m, c) in p_decompose(&x, 1) {
        println!("  monomial {m:?}: coefficient {c}");
    }

    // distinct variables are p-independent, t0^3 is not new
    let vars: Vec<FieldElem> = (0..4).map(|i| FieldElem::var(i, p)).collect();
    println!("rank of t0..t3 over k^3: {}", p_span_rank(&vars, 1));
    let mut span = PSpan::new(1);
    for v in &vars {
        span.insert(v);
    }
    let inside = vars[0].mul(&vars[1].frobenius(1)).add(&vars[2]);
    println!("t0*t1^3 + t2 in span of t0..t3: {}", span.contains(&inside));
    println!("t0*t1 in span of t0..t3: {}", span.contains(&vars[0].mul(&vars[1])));
}
