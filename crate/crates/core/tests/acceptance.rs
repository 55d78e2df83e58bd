//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! Expected values are computed here from closed forms (`p^nu`, ranks of
//! distinct variables, heights of Frobenius twists), not read back from the
//! library.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use prc::field::{p_span_rank, FieldElem};
use prc::model::{in_model, verify_verdict, MembershipStatus, ModelRing, StreamElem, Witness};
use prc::pradical::{filtration_member, height, HeightStatus, RPolynomial};
use prc::series::Series;
use prc::tower::{
    random_field_tower, reduction_of_completion, tensor_square_reduced_check, CompletedTower, InvariantTriple,
    ModelTower, TowerError,
};
use prc::verify::{random_member, subalgebra_membership};

/// Wall-clock limit for one reduction configuration.
const CONFIG_LIMIT: Duration = Duration::from_secs(10);
/// Wall-clock limit for the whole run.
const SUITE_LIMIT: Duration = Duration::from_secs(300);
/// Precision at which completed towers are compared.
const OUTPUT_PRECISION: usize = 64;
const MEMBER_PRECISION: usize = 64;
const MEMBER_SAMPLES: usize = 200;
const ROUNDTRIPS: usize = 500;
const TENSOR_TOWERS_PER_PRIME: usize = 10;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn from_failures(failures: Vec<String>, summary: String) -> Self {
        if failures.is_empty() {
            Outcome { passed: true, detail: summary }
        } else {
            let shown: Vec<&str> = failures.iter().take(3).map(String::as_str).collect();
            Outcome { passed: false, detail: format!("{} failures: {}", failures.len(), shown.join("; ")) }
        }
    }
}

fn run(id: u32, title: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let tag = if out.passed { "PASS" } else { "FAIL" };
    println!("[{tag}] {id} {title}: {} ({:.2?})", out.detail, start.elapsed());
    out.passed
}

/// One tower `R_mu[b]`, `b = w_j^(p^(mu - nu))`, with its completion.
struct Config {
    p: u32,
    mu: u32,
    nu: u32,
    j: usize,
    tower: Result<(ModelTower, CompletedTower), TowerError>,
    elapsed: Duration,
}

impl Config {
    fn label(&self) -> String {
        format!("p={} mu={} nu={} j={}", self.p, self.mu, self.nu, self.j)
    }

    fn q(&self) -> usize {
        self.p.pow(self.nu) as usize
    }
}

fn twist(d: u32, x: StreamElem) -> StreamElem {
    if d == 0 {
        x
    } else {
        StreamElem::frob(d, x)
    }
}

fn chain_root(ring: &ModelRing, j: usize, nu: u32) -> StreamElem {
    twist(ring.mu() - nu, StreamElem::nagata(ring.p(), j))
}

fn build_config(p: u32, mu: u32, nu: u32, j: usize) -> Config {
    let start = Instant::now();
    let q = p.pow(nu) as usize;
    let tower = ModelRing::new(p, mu).map_err(TowerError::from).and_then(|ring| {
        let b = chain_root(&ring, j, nu);
        let t = ModelTower::new(ring).adjoin(StreamElem::frob(nu, b.clone()), nu, Some(b))?;
        let c = t.completion_to(OUTPUT_PRECISION * q, OUTPUT_PRECISION)?;
        Ok((t, c))
    });
    Config { p, mu, nu, j, tower, elapsed: start.elapsed() }
}

fn expected_triple(q: usize) -> InvariantTriple {
    InvariantTriple { e: q, f: 1, n: q }
}

fn criterion_reduction(configs: &mut [Config]) -> Outcome {
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    for c in configs.iter_mut() {
        let start = Instant::now();
        let verdict = match &c.tower {
            Ok((_, completed)) => match reduction_of_completion(completed) {
                Ok(r) => {
                    let sharp = r.nilpotency_orders.iter().all(|&(order, nonzero)| order == c.q() && nonzero);
                    let failed: Vec<&str> = r.checks.iter().filter(|k| !k.passed).map(|k| k.name.as_str()).collect();
                    if !failed.is_empty() {
                        Err(format!("failed {}", failed.join(", ")))
                    } else if !sharp {
                        Err(format!("nilpotency orders {:?}", r.nilpotency_orders))
                    } else if r.precision != OUTPUT_PRECISION {
                        Err(format!("output precision {}", r.precision))
                    } else {
                        Ok(())
                    }
                }
                Err(e) => Err(e.to_string()),
            },
            Err(e) => Err(e.to_string()),
        };
        c.elapsed += start.elapsed();
        slowest = slowest.max(c.elapsed);
        if let Err(e) = verdict {
            failures.push(format!("{}: {e}", c.label()));
        }
        if c.elapsed > CONFIG_LIMIT {
            failures.push(format!("{}: {:.2?} exceeds {:?}", c.label(), c.elapsed, CONFIG_LIMIT));
        }
    }
    Outcome::from_failures(
        failures,
        format!(
            "{} configurations, input N = 64 p^nu, checked mod T^{OUTPUT_PRECISION}, slowest {slowest:.2?} (limit {CONFIG_LIMIT:?})",
            configs.len()
        ),
    )
}

fn nested_tower(p: u32, mu: u32, nu: u32, j: usize) -> Result<ModelTower, TowerError> {
    let ring = ModelRing::new(p, mu)?;
    let b = chain_root(&ring, j, nu);
    let mut t = ModelTower::new(ring).adjoin(StreamElem::frob(nu, b.clone()), 1, Some(twist(nu - 1, b.clone())))?;
    for i in 2..=nu {
        // Z_i^p = Z_(i-1)
        let mut rel = vec![StreamElem::zero(p); t.degree()];
        rel[(p as usize).pow(i - 2)] = StreamElem::one(p);
        t = t.adjoin_relation(rel, 1, Some(twist(nu - i, b.clone())))?;
    }
    Ok(t)
}

/// `R_2[w_0^p, w_1^p]`: two independent degree-p adjunctions.
fn two_generator_tower(p: u32) -> Result<ModelTower, TowerError> {
    let ring = ModelRing::new(p, 2)?;
    let b0 = StreamElem::frob(1, StreamElem::nagata(p, 0));
    let b1 = StreamElem::frob(1, StreamElem::nagata(p, 1));
    ModelTower::new(ring)
        .adjoin(StreamElem::frob(1, b0.clone()), 1, Some(b0))?
        .adjoin(StreamElem::frob(1, b1.clone()), 1, Some(b1))
}

fn criterion_invariants(configs: &[Config]) -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    let mut check = |label: String, q: usize, t: Result<ModelTower, TowerError>| {
        count += 1;
        match t.and_then(|t| t.invariants()) {
            Ok(inv) if inv == expected_triple(q) && inv.e * inv.f == inv.n => {}
            Ok(inv) => failures.push(format!("{label}: got ({}, {}, {}), expected ({q}, 1, {q})", inv.e, inv.f, inv.n)),
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    };
    for c in configs {
        let t = c.tower.as_ref().map(|(t, _)| t.clone()).map_err(Clone::clone);
        check(c.label(), c.q(), t);
    }
    for p in [2, 3] {
        for j in 0..3 {
            check(format!("nested p={p} mu=2 nu=2 j={j}"), (p * p) as usize, nested_tower(p, 2, 2, j));
        }
        check(format!("two generators p={p} mu=2"), (p * p) as usize, two_generator_tower(p));
    }
    Outcome::from_failures(failures, format!("{count} towers have (e, f, n) = (p^nu, 1, p^nu) and e f = n"))
}

fn criterion_completion(configs: &[Config]) -> Outcome {
    let mut failures = Vec::new();
    for c in configs {
        let res = c.tower.as_ref().map_err(|e| e.to_string()).and_then(|(t, completed)| {
            let over_r = t.invariants().map_err(|e| e.to_string())?;
            let over_hat = completed.invariants().map_err(|e| e.to_string())?;
            Ok((over_r.e, over_hat.e))
        });
        match res {
            Ok((a, b)) if a == b && a == c.q() => {}
            Ok((a, b)) => failures.push(format!("{}: e = {a} over R, {b} over the completion", c.label())),
            Err(e) => failures.push(format!("{}: {e}", c.label())),
        }
    }
    Outcome::from_failures(failures, format!("{} towers, e agrees at precision {OUTPUT_PRECISION}", configs.len()))
}

fn criterion_tensor() -> Outcome {
    let mut failures = Vec::new();
    let mut ranks = Vec::new();
    for p in [2u32, 3] {
        let mut rng = ChaCha8Rng::seed_from_u64(0x7e45 + p as u64);
        for i in 0..TENSOR_TOWERS_PER_PRIME {
            let mu = 1 + (i % 2) as u32;
            let c = random_field_tower(&mut rng, p, mu);
            let n = c.degree();
            ranks.push(n);
            let r = tensor_square_reduced_check(&c, &mut rng);
            let label = format!("p={p} mu={mu} tower {i} (rank {n})");
            if n > (p * p) as usize {
                failures.push(format!("{label}: rank exceeds p^2"));
            }
            if r.dim_over_base != n * n || r.reduced_dim_over_base != n {
                failures.push(format!("{label}: dims {} / {}", r.dim_over_base, r.reduced_dim_over_base));
            }
            for k in r.checks.iter().filter(|k| !k.passed) {
                failures.push(format!("{label}: {}", k.name));
            }
        }
    }
    ranks.sort_unstable();
    ranks.dedup();
    Outcome::from_failures(
        failures,
        format!("{} towers, ranks {ranks:?}, dim C⊗C = n^2, reduced dim = n", 2 * TENSOR_TOWERS_PER_PRIME),
    )
}

fn criterion_membership() -> Outcome {
    let mut failures = Vec::new();
    let combos = [(2u32, 1u32), (2, 2), (3, 1), (3, 2)];
    let mut decided = 0;
    for (k, &(p, mu)) in combos.iter().enumerate() {
        let ring = ModelRing::new(p, mu).expect("valid ring").with_precision(MEMBER_PRECISION);
        let mut rng = ChaCha8Rng::seed_from_u64(0x3e3b + k as u64);
        for i in 0..MEMBER_SAMPLES / combos.len() {
            let x = random_member(&mut rng, &ring, 2);
            let v = in_model(&x, &ring);
            if !v.is_yes() {
                failures.push(format!("p={p} mu={mu} sample {i}: {}", v.summary()));
                continue;
            }
            decided += 1;
            if let Err(e) = verify_verdict(&x, &ring, &v) {
                failures.push(format!("p={p} mu={mu} sample {i}: {e}"));
            }
            // a member plus a fresh z-stream: whatever is decided must survive its own check
            let y = StreamElem::sum(vec![x, StreamElem::nagata(p, rng.gen_range(0..4))]);
            let w = in_model(&y, &ring);
            if w.status != MembershipStatus::Unknown {
                if let Err(e) = verify_verdict(&y, &ring, &w) {
                    failures.push(format!("p={p} mu={mu} perturbed sample {i}: {e}"));
                }
            }
        }
    }
    let p = 2;
    let ring = ModelRing::new(p, 1).expect("valid ring").with_precision(MEMBER_PRECISION);
    let z = StreamElem::nagata(p, 0);
    let v = in_model(&z, &ring);
    let zs = z.eval(32);
    for m in [8usize, 16, 32] {
        // the first m coefficients are the distinct variables t_0, ..., t_(m-1)
        let vars: Vec<FieldElem> = (0..m as u32).map(|i| FieldElem::var(i, p)).collect();
        if zs.coeffs()[..m] != vars[..] {
            failures.push(format!("z coefficients below T^{m} are not t_0..t_{}", m - 1));
        }
        if p_span_rank(&vars, 1) != m {
            failures.push(format!("rank of t_0..t_{} is not {m}", m - 1));
        }
    }
    match &v.witness {
        Witness::RankGrowth { ranks, .. } if v.is_no() && *ranks == vec![(8, 8), (16, 16), (32, 32)] => {}
        _ => failures.push(format!("z: {}", v.summary())),
    }
    if let Err(e) = verify_verdict(&z, &ring, &v) {
        failures.push(format!("z: {e}"));
    }
    Outcome::from_failures(
        failures,
        format!("{decided}/{MEMBER_SAMPLES} members verified mod T^{MEMBER_PRECISION}, z has ranks 8/16/32"),
    )
}

fn criterion_height() -> Outcome {
    let p = 2;
    let mut failures = Vec::new();
    let z = StreamElem::nagata(p, 0);
    for mu in 1..=3u32 {
        let ring = ModelRing::new(p, mu).expect("valid ring");
        let h = height(&z, &ring, 4);
        if h.status != HeightStatus::Finite(mu) {
            failures.push(format!("mu={mu}: height {:?}", h.status));
        }
        let levels: Vec<MembershipStatus> = (0..=4).map(|n| filtration_member(&z, n, &ring)).collect();
        let expected: Vec<MembershipStatus> =
            (0..=4).map(|n| if n >= mu { MembershipStatus::Yes } else { MembershipStatus::No }).collect();
        if levels != expected {
            failures.push(format!("mu={mu}: filtration {levels:?}"));
        }
        for d in 1..=mu {
            let hd = height(&StreamElem::frob(d, z.clone()), &ring, 4);
            if hd.status != HeightStatus::Finite(mu - d) {
                failures.push(format!("mu={mu}: height of z^(2^{d}) is {:?}", hd.status));
            }
        }
    }
    Outcome::from_failures(failures, "height(z) = mu, B_n monotone, each Frobenius lowers height by 1".into())
}

fn criterion_chain() -> Outcome {
    let p = 2;
    let n = 256;
    let mut failures = Vec::new();
    let ring = ModelRing::new(p, 1).expect("valid ring");
    let tower = |j: usize| {
        let w = StreamElem::nagata(p, j);
        ModelTower::new(ring.clone()).adjoin(StreamElem::frob(1, w.clone()), 1, Some(w))
    };
    for j in 0..3usize {
        let w_next = StreamElem::nagata(p, j + 1);
        let w = StreamElem::nagata(p, j);
        let f = RPolynomial::new(
            vec![StreamElem::frob(1, w_next.clone()).neg(), StreamElem::zero(p), StreamElem::one(p)],
            &ring,
        );
        match f {
            Ok(f) if f.evaluate(&w_next, n).is_zero() => {}
            Ok(_) => failures.push(format!("j={j}: X^2 - w_{}^2 does not vanish", j + 1)),
            Err(e) => failures.push(format!("j={j}: {e}")),
        }
        let (a_j, a_next) = match (tower(j), tower(j + 1)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                failures.push(format!("j={j}: {e}"));
                continue;
            }
        };
        let out = subalgebra_membership(&w_next, &a_j, n);
        if out.status != MembershipStatus::No {
            failures.push(format!("j={j}: w_{} in R[w_{j}] is {:?}", j + 1, out.status));
        }
        let inside = subalgebra_membership(&w, &a_next, n);
        if inside.status != MembershipStatus::Yes {
            failures.push(format!("j={j}: w_{j} in R[w_{}] is {:?}", j + 1, inside.status));
        }
        match a_j.completion(OUTPUT_PRECISION).and_then(|c| reduction_of_completion(&c)) {
            Ok(r) if r.passed() && r.nilpotency_orders.iter().all(|&(_, nonzero)| nonzero) => {}
            Ok(r) => failures.push(format!("j={j}: completion report {:?}", r.nilpotency_orders)),
            Err(e) => failures.push(format!("j={j}: {e}")),
        }
    }
    Outcome::from_failures(failures, "R[w_0] < R[w_1] < R[w_2] < R[w_3], each completion non-reduced".into())
}

fn criterion_roundtrips() -> Outcome {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x2047);
    for i in 0..ROUNDTRIPS {
        let p = if i % 2 == 0 { 2 } else { 3 };
        let nu = rng.gen_range(1..=2);
        let x = FieldElem::random_nonzero(&mut rng, p);
        if x.frobenius(nu).pth_root(nu).as_ref() != Some(&x) {
            failures.push(format!("field {i}: ({x})^(p^{nu}) does not return"));
        }
        let s = Series::random(&mut rng, p, OUTPUT_PRECISION, 4);
        let q = p.pow(nu) as usize;
        match s.frobenius_to(nu, q * OUTPUT_PRECISION).pth_root(nu) {
            Some(r) if r.precision() == OUTPUT_PRECISION && r.eq_mod(&s) => {}
            _ => failures.push(format!("series {i}: Frobenius roundtrip failed")),
        }
        let u = Series::random_unit(&mut rng, p, OUTPUT_PRECISION);
        match u.invert() {
            Ok(v) if u.mul(&v).eq_mod(&Series::one(p, OUTPUT_PRECISION)) => {}
            _ => failures.push(format!("unit {i}: a a^(-1) != 1 mod T^{OUTPUT_PRECISION}")),
        }
    }
    Outcome::from_failures(
        failures,
        format!("{ROUNDTRIPS} field + {ROUNDTRIPS} series roundtrips, {ROUNDTRIPS} unit inversions mod T^{OUTPUT_PRECISION}"),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut configs = Vec::new();
    for p in [2u32, 3] {
        for mu in 1..=2u32 {
            for nu in 1..=mu {
                for j in 0..3 {
                    configs.push(build_config(p, mu, nu, j));
                }
            }
        }
    }
    let results = [
        run(1, "reduction of the completion", || criterion_reduction(&mut configs)),
        run(2, "numerical invariants", || criterion_invariants(&configs)),
        run(3, "ramification index under completion", || criterion_completion(&configs)),
        run(4, "tensor square is reduced to C", criterion_tensor),
        run(5, "membership oracle soundness", criterion_membership),
        run(6, "height filtration", criterion_height),
        run(7, "non-finite normalization chain", criterion_chain),
        run(8, "kernel roundtrips", || {
            let mut out = criterion_roundtrips();
            let total = start.elapsed();
            if total > SUITE_LIMIT {
                out.passed = false;
                out.detail = format!("suite took {total:.2?}, limit {SUITE_LIMIT:?}; {}", out.detail);
            } else {
                out.detail = format!("{}; suite total {total:.2?} (limit {SUITE_LIMIT:?})", out.detail);
            }
            out
        }),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
