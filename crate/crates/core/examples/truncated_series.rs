//! Truncated power series over k: products, inverses, Frobenius and p-th roots.

use prc::series::Series;

fn main() {
    let p = 2;
    let n = 8;
    let a = Series::parse("1 + (t0)*T + (t1)*T^3 + O(T^8)", p).unwrap();
    let b = Series::parse("(t2)*T + (1)*T^2 + O(T^8)", p).unwrap();

    println!("a = {a}");
    println!("b = {b}");
    println!("a * b = {}", a.mul(&b));
    println!("valuation of b: {:?}", b.valuation());

    let inv = a.invert().unwrap();
    println!("1 / a = {inv}");
    println!("a * (1 / a) = 1: {}", a.mul(&inv).eq_mod(&Series::one(p, n)));

    // a^(p^nu) needs p^nu * n input terms to keep n after the root
    let a4 = a.frobenius_to(2, 4 * n);
    println!("a^4 has precision {}", a4.precision());
    let back = a4.pth_root(2).unwrap();
    println!("fourth root recovers a: {}", back.eq_mod(&a));
    println!("a itself has a square root: {}", a.pth_root(1).is_some());
}
