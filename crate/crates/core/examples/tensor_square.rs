//! For a finite purely inseparable field extension C/B, C ⊗_B C modulo its
//! nilradical is C again.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use prc::tower::{random_field_tower, tensor_square_reduced_check};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (p, mu) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
        let c = random_field_tower(&mut rng, p, mu);
        let r = tensor_square_reduced_check(&c, &mut rng);
        println!(
            "p={p} mu={mu}: [C:B] = {}, dim C⊗C = {}, nilradical {}, reduced {} ({})",
            r.degree,
            r.dim_over_base,
            r.nil_dim_over_base,
            r.reduced_dim_over_base,
            if r.passed() { "all checks pass" } else { "checks failed" }
        );
        for k in r.checks.iter().filter(|k| !k.passed) {
            println!("  failed: {} {}", k.name, k.detail);
        }
    }
}
