use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::FieldElem;
use crate::model::{in_model, verify_verdict, MembershipStatus, ModelRing, StreamElem, Witness};
use crate::pradical::{
    detect_purely_inseparable, filtration_member, height, radical_from_equation, HeightStatus, RPolynomial,
    RadicalVerdict, DEFAULT_HEIGHT_BOUND,
};
use crate::series::Series;
use crate::tower::{
    random_field_tower, reduction_of_completion, tensor_square_reduced_check, FieldTower, InvariantTriple,
    ModelTower, TowerError,
};

use super::subalgebra::subalgebra_membership;
use super::{CheckStatus, Checks, ScenarioParams};

pub const TENSOR_SAMPLES: usize = 10;
pub const MEMBER_SAMPLES: usize = 200;
pub const ROUNDTRIP_SAMPLES: usize = 500;
const SOUNDNESS_PRECISION: usize = 64;

fn ring(params: &ScenarioParams) -> ModelRing {
    ModelRing::new(params.p, params.mu).expect("validated parameters")
}

/// `R_mu[b]` with `b = w_j^(p^(mu - nu))`, a root of `Z^(p^nu) = w_j^(p^mu)`.
fn chain_tower(ring: &ModelRing, j: usize, nu: u32) -> Result<ModelTower, TowerError> {
    let base = ModelTower::new(ring.clone());
    if nu == 0 {
        return Ok(base);
    }
    let w = ring.witness_chain(0, j);
    let b = frob(ring.mu() - nu, w);
    base.adjoin(StreamElem::frob(nu, b.clone()), nu, Some(b))
}

/// The same algebra as [`chain_tower`] built from `nu` stages `Z_i^p = Z_(i-1)`.
fn nested_chain_tower(ring: &ModelRing, j: usize, nu: u32) -> Result<ModelTower, TowerError> {
    let p = ring.p();
    let w = ring.witness_chain(0, j);
    let b = frob(ring.mu() - nu, w);
    let mut t = ModelTower::new(ring.clone()).adjoin(StreamElem::frob(nu, b.clone()), 1, Some(frob(nu - 1, b.clone())))?;
    for i in 2..=nu {
        let mut rel = vec![StreamElem::zero(p); t.degree()];
        rel[(p as usize).pow(i - 2)] = StreamElem::one(p);
        t = t.adjoin_relation(rel, 1, Some(frob(nu - i, b.clone())))?;
    }
    Ok(t)
}

fn frob(nu: u32, x: StreamElem) -> StreamElem {
    if nu == 0 {
        x
    } else {
        StreamElem::frob(nu, x)
    }
}

fn tower_label(j: usize, twist: u32) -> String {
    if twist == 0 {
        format!("R[w_{j}]")
    } else {
        format!("R[w_{j}^(p^{twist})]")
    }
}

fn triple(t: &InvariantTriple) -> String {
    format!("(e, f, n) = ({}, {}, {})", t.e, t.f, t.n)
}

pub(super) fn invariants(params: &ScenarioParams, checks: &mut Checks) {
    let ring = ring(params);
    let q = params.p.pow(params.nu) as usize;
    let expected = InvariantTriple { e: q, f: 1, n: q };
    for j in 0..params.depth.min(3) {
        let name = format!("invariants of {}", tower_label(j, params.mu - params.nu));
        match chain_tower(&ring, j, params.nu).and_then(|t| t.invariants()) {
            Ok(inv) => checks.bool(name, inv == expected, triple(&inv)),
            Err(e) => checks.push(name, CheckStatus::Fail, e.to_string()),
        }
    }
    if params.nu >= 2 {
        let name = format!("invariants of the {}-stage nested tower", params.nu);
        match nested_chain_tower(&ring, 0, params.nu).and_then(|t| t.invariants()) {
            Ok(inv) => checks.bool(name, inv == expected, triple(&inv)),
            Err(e) => checks.push(name, CheckStatus::Fail, e.to_string()),
        }
    }
    let name = "e over R equals e over the completion";
    let res = chain_tower(&ring, 0, params.nu).and_then(|t| {
        let over_r = t.invariants()?;
        let over_hat = t.completion(16)?.invariants()?;
        Ok((over_r, over_hat))
    });
    match res {
        Ok((a, b)) => checks.bool(name, a == b, format!("{} vs {}", triple(&a), triple(&b))),
        Err(e) => checks.push(name, CheckStatus::Fail, e.to_string()),
    }
}

pub(super) fn reduction(params: &ScenarioParams, checks: &mut Checks) {
    let ring = ring(params);
    let q = params.p.pow(params.nu) as usize;
    let out = params.precision / q;
    let towers = if params.nu == 0 { 1 } else { params.depth.min(3) };
    for j in 0..towers {
        let label = if params.nu == 0 { "R".to_string() } else { tower_label(j, params.mu - params.nu) };
        let res = chain_tower(&ring, j, params.nu).and_then(|t| {
            let c = t.completion_to(params.precision, out)?;
            let report = reduction_of_completion(&c)?;
            Ok((t.invariants()?, c.invariants()?, report))
        });
        match res {
            Ok((inv, inv_hat, report)) => {
                for c in &report.checks {
                    let detail = if c.detail.is_empty() || c.detail.starts_with("mod") {
                        format!("mod T^{}", report.precision)
                    } else {
                        format!("mod T^{}, {}", report.precision, c.detail)
                    };
                    checks.bool(format!("{label}: {}", c.name), c.passed, detail);
                }
                checks.bool(
                    format!("{label}: ramification index unchanged by completion"),
                    inv.e == inv_hat.e,
                    format!("{} vs {}", triple(&inv), triple(&inv_hat)),
                );
                if params.nu == 0 {
                    checks.bool(format!("{label}: no nil generators"), report.nil_gens.is_empty(), "trivial tower");
                } else {
                    let nonreduced = !report.nil_gens.is_empty() && report.nilpotency_orders.iter().all(|&(_, nz)| nz);
                    checks.bool(
                        format!("{label}: completion is non-reduced"),
                        nonreduced,
                        format!("(Z - b)^{} != 0 mod T^{}", q - 1, report.precision),
                    );
                }
            }
            Err(e) => checks.push(format!("{label}: reduction"), CheckStatus::Fail, e.to_string()),
        }
    }
}

fn tensor_check(checks: &mut Checks, name: String, c: &FieldTower, rng: &mut ChaCha8Rng) {
    let r = tensor_square_reduced_check(c, rng);
    let n = r.degree;
    let dims_ok = r.dim_over_base == n * n && r.reduced_dim_over_base == n;
    let failed: Vec<&str> = r.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    checks.bool(
        name,
        r.passed() && dims_ok,
        format!(
            "[C:B] = {n}, dim C⊗C = {}, nil = {}, reduced = {}{}",
            r.dim_over_base,
            r.nil_dim_over_base,
            r.reduced_dim_over_base,
            if failed.is_empty() { String::new() } else { format!("; failed: {}", failed.join(", ")) }
        ),
    );
}

pub(super) fn tensor(params: &ScenarioParams, checks: &mut Checks) {
    let p = params.p;
    let mu = params.mu;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 0x7e45);
    let trivial = FieldTower::new(p, mu);
    tensor_check(checks, "C = B".into(), &trivial, &mut rng);
    let simple = FieldTower::new(p, mu)
        .adjoin(FieldElem::var(0, p).frobenius(mu - 1), 1)
        .expect("t0^(p^(mu-1)) has degree p");
    tensor_check(checks, "C = B(t0^(p^(mu-1)))".into(), &simple, &mut rng);
    for i in 0..TENSOR_SAMPLES {
        let c = random_field_tower(&mut rng, p, mu);
        tensor_check(checks, format!("random tower {i} of rank {}", c.degree()), &c, &mut rng);
    }
}

pub(super) fn chain(params: &ScenarioParams, checks: &mut Checks) {
    let ring = ring(params);
    let p = params.p;
    let mu = params.mu;
    let n = params.precision;
    let towers: Vec<Result<ModelTower, TowerError>> = (0..=params.depth).map(|j| chain_tower(&ring, j, mu)).collect();
    for j in 0..params.depth {
        let w_next = ring.witness_chain(0, j + 1);
        let w = ring.witness_chain(0, j);
        // X^(p^mu) - w_(j+1)^(p^mu)
        let q = p.pow(mu) as usize;
        let mut coeffs = vec![StreamElem::zero(p); q + 1];
        coeffs[0] = StreamElem::frob(mu, w_next.clone()).neg();
        coeffs[q] = StreamElem::one(p);
        let name = format!("w_{} is integral over R", j + 1);
        match RPolynomial::new(coeffs, &ring) {
            Ok(f) => checks.bool(name, f.evaluate(&w_next, n).is_zero(), format!("monic of degree {q}, f(w) = 0 mod T^{n}")),
            Err(e) => checks.push(name, CheckStatus::Fail, e.to_string()),
        }
        let (a_j, a_next) = match (&towers[j], &towers[j + 1]) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                checks.push(format!("R[w_{j}] tower"), CheckStatus::Fail, e.to_string());
                continue;
            }
        };
        let v = subalgebra_membership(&w_next, a_j, n);
        checks.push(format!("w_{} not in R[w_{j}]", j + 1), status_for(v.status, MembershipStatus::No), v.witness);
        let v = subalgebra_membership(&w, a_next, n);
        checks.push(format!("w_{j} in R[w_{}]", j + 1), status_for(v.status, MembershipStatus::Yes), v.witness);
        let name = format!("completion of R[w_{j}] is non-reduced");
        match a_j.completion(16).and_then(|c| reduction_of_completion(&c)) {
            Ok(r) => {
                let ok = r.passed() && r.nilpotency_orders.iter().all(|&(_, nz)| nz);
                checks.bool(name, ok, format!("Z - w_{j} is nilpotent of order {q}, nonzero at order {}", q - 1));
            }
            Err(e) => checks.push(name, CheckStatus::Fail, e.to_string()),
        }
    }
    checks.push(
        "evidence: strictly ascending chain",
        CheckStatus::Pass,
        format!("R[w_0] < ... < R[w_{}] inside the normalization; finite evidence only", params.depth),
    );
}

fn status_for(got: MembershipStatus, want: MembershipStatus) -> CheckStatus {
    if got == want {
        CheckStatus::Pass
    } else if got == MembershipStatus::Unknown {
        CheckStatus::Unknown
    } else {
        CheckStatus::Fail
    }
}

/// A seeded element of `R_mu` built from polynomials, `p^mu`-th powers of
/// arbitrary streams, scalars, sums and products.
pub fn random_member<R: Rng + ?Sized>(rng: &mut R, ring: &ModelRing, depth: u32) -> StreamElem {
    let p = ring.p();
    let mu = ring.mu();
    let leaf = depth == 0;
    match rng.gen_range(0..if leaf { 2 } else { 5 }) {
        0 => {
            let len = rng.gen_range(1..=3);
            let coeffs = (0..len).map(|_| FieldElem::random_poly(rng, p, 3, FieldElem::random_exp_bound(p), 8)).collect();
            StreamElem::polynomial(p, coeffs)
        }
        1 => {
            let s = rng.gen_range(0..6);
            let z = StreamElem::nagata(p, s);
            let inner = match rng.gen_range(0..3) {
                0 => z,
                1 => StreamElem::scalar_mul(FieldElem::random_nonzero(rng, p), z),
                _ => StreamElem::sum(vec![z, StreamElem::constant(FieldElem::random_poly(rng, p, 2, FieldElem::random_exp_bound(p), 8))]),
            };
            StreamElem::frob(mu + rng.gen_range(0..2), inner)
        }
        2 => StreamElem::scalar_mul(FieldElem::random_nonzero(rng, p), random_member(rng, ring, depth - 1)),
        3 => StreamElem::sum(vec![random_member(rng, ring, depth - 1), random_member(rng, ring, depth - 1)]),
        _ => StreamElem::product(vec![random_member(rng, ring, depth - 1), random_member(rng, ring, 0)]),
    }
}

pub(super) fn closure(params: &ScenarioParams, checks: &mut Checks) {
    let ring = ring(params);
    let p = params.p;
    let mu = params.mu;
    let z = StreamElem::nagata(p, 0);

    let h = height(&z, &ring, DEFAULT_HEIGHT_BOUND);
    let chain: Vec<String> = h.evidence.iter().map(|s| format!("{:?}", s.status)).collect();
    checks.bool(
        format!("height(z, R_{mu}) = {mu}"),
        h.status == HeightStatus::Finite(mu),
        format!("{:?} via [{}]", h.status, chain.join(", ")),
    );
    for d in 1..=mu {
        let hd = height(&StreamElem::frob(d, z.clone()), &ring, DEFAULT_HEIGHT_BOUND);
        checks.bool(
            format!("height(z^(p^{d})) = {}", mu - d),
            hd.status == HeightStatus::Finite(mu - d),
            format!("{:?}", hd.status),
        );
    }
    let levels: Vec<MembershipStatus> = (0..=DEFAULT_HEIGHT_BOUND).map(|n| filtration_member(&z, n, &ring)).collect();
    let expected: Vec<MembershipStatus> = (0..=DEFAULT_HEIGHT_BOUND)
        .map(|n| if n >= mu { MembershipStatus::Yes } else { MembershipStatus::No })
        .collect();
    checks.bool("filtration B_n is monotone on z", levels == expected, format!("{levels:?}"));
    let poly = StreamElem::polynomial(p, vec![FieldElem::var(1, p), FieldElem::one(p)]);
    checks.bool(
        "polynomials have height 0",
        height(&poly, &ring, DEFAULT_HEIGHT_BOUND).status == HeightStatus::Finite(0),
        "t1 + T",
    );

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 0xc105);
    let mut collapse = true;
    for _ in 0..8 {
        let x = StreamElem::sum(vec![
            StreamElem::scalar_mul(FieldElem::random_nonzero(&mut rng, p), StreamElem::nagata(p, rng.gen_range(0..6))),
            StreamElem::polynomial(p, vec![FieldElem::random_poly(&mut rng, p, 2, FieldElem::random_exp_bound(p), 8)]),
        ]);
        collapse &= matches!(height(&x, &ring, DEFAULT_HEIGHT_BOUND).status, HeightStatus::Finite(h) if h <= mu);
    }
    let note = if mu == 1 { "; for mu = 1 every element of k[[T]] lies in the closure" } else { "" };
    checks.bool(format!("heights are at most {mu}"), collapse, format!("8 seeded streams{note}"));

    let q = p.pow(mu) as usize;
    let t0 = FieldElem::var(0, p);
    for (label, c) in [("1", FieldElem::one(p)), ("t0", t0.clone())] {
        let mut coeffs = vec![StreamElem::zero(p); q + 1];
        coeffs[0] = StreamElem::scalar_mul(c.clone(), StreamElem::frob(mu, z.clone())).neg();
        coeffs[q] = StreamElem::constant(c.clone());
        let name = format!("radical from {label}*(X^{q} - z^{q})");
        let res = RPolynomial::new(coeffs, &ring).and_then(|f| radical_from_equation(&f, &z, &ring));
        match res {
            Ok(RadicalVerdict::Confirmed { element, nu, certificate, rule }) => {
                let hb = height(&element, &ring, DEFAULT_HEIGHT_BOUND).status;
                let ok = nu == mu && matches!(hb, HeightStatus::Finite(h) if h <= nu);
                checks.bool(name, ok, format!("cb = {rule}, height {hb:?}; {certificate}"));
            }
            Ok(other) => checks.push(name, CheckStatus::Unknown, format!("{other:?}")),
            Err(e) => checks.push(name, CheckStatus::Fail, e.to_string()),
        }
    }
    // scaling by the unit t1 + T does not change the verdict
    let unit = StreamElem::polynomial(p, vec![FieldElem::var(1, p), FieldElem::one(p)]);
    let base: Vec<StreamElem> = {
        let mut v = vec![StreamElem::zero(p); q + 1];
        v[0] = StreamElem::frob(mu, z.clone());
        v[q] = StreamElem::one(p);
        v
    };
    let scaled: Vec<StreamElem> = base
        .iter()
        .map(|c| if c.as_polynomial().map_or(false, |cs| cs.iter().all(FieldElem::is_zero)) { c.clone() } else { StreamElem::product(vec![unit.clone(), c.clone()]) })
        .collect();
    let verdicts = RPolynomial::new(base, &ring)
        .and_then(|f| detect_purely_inseparable(&f))
        .and_then(|a| Ok((a, detect_purely_inseparable(&RPolynomial::new(scaled, &ring)?)?)));
    match verdicts {
        Ok((a, b)) => checks.bool("inseparability verdict invariant under units", a == b, format!("{a:?} / {b:?}")),
        Err(e) => checks.push("inseparability verdict invariant under units", CheckStatus::Fail, e.to_string()),
    }

    let sring = ring.clone().with_precision(SOUNDNESS_PRECISION);
    let mut decided = 0;
    let mut contradictions = Vec::new();
    for i in 0..MEMBER_SAMPLES {
        let x = random_member(&mut rng, &sring, 2);
        let v = in_model(&x, &sring);
        if v.is_yes() {
            decided += 1;
        }
        if v.status != MembershipStatus::Unknown {
            if let Err(e) = verify_verdict(&x, &sring, &v) {
                contradictions.push(format!("sample {i}: {e}"));
            }
        }
    }
    checks.bool(
        "membership witnesses reconstruct",
        decided == MEMBER_SAMPLES && contradictions.is_empty(),
        format!(
            "{decided}/{MEMBER_SAMPLES} decided Yes, {} contradicted mod T^{SOUNDNESS_PRECISION}{}",
            contradictions.len(),
            contradictions.first().map(|c| format!(" ({c})")).unwrap_or_default()
        ),
    );
    let v = in_model(&z, &sring);
    let ranks_ok = matches!(&v.witness, Witness::RankGrowth { ranks, .. }
        if ranks.iter().all(|&(m, r)| m == r) && ranks.iter().map(|&(m, _)| m).collect::<Vec<_>>() == [8, 16, 32]);
    let consistent = verify_verdict(&z, &sring, &v).is_ok();
    checks.bool("z is outside R with full rank growth", v.is_no() && ranks_ok && consistent, v.summary());
}

pub(super) fn roundtrips(params: &ScenarioParams, checks: &mut Checks) {
    let p = params.p;
    let n = params.precision;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 0x2047);
    let mut field_bad = 0;
    for _ in 0..ROUNDTRIP_SAMPLES {
        let x = FieldElem::random_nonzero(&mut rng, p);
        let nu = rng.gen_range(1..=2);
        if x.frobenius(nu).pth_root(nu).as_ref() != Some(&x) {
            field_bad += 1;
        }
    }
    checks.bool(
        "field Frobenius roundtrips",
        field_bad == 0,
        format!("{}/{ROUNDTRIP_SAMPLES} exact", ROUNDTRIP_SAMPLES - field_bad),
    );
    let mut series_bad = 0;
    for _ in 0..ROUNDTRIP_SAMPLES {
        let s = Series::random(&mut rng, p, n, 6);
        let nu = rng.gen_range(1..=2);
        let q = p.pow(nu) as usize;
        match s.frobenius_to(nu, q * n).pth_root(nu) {
            Some(r) if r == s => {}
            _ => series_bad += 1,
        }
    }
    checks.bool(
        "series Frobenius roundtrips",
        series_bad == 0,
        format!("{}/{ROUNDTRIP_SAMPLES} exact at precision {n}", ROUNDTRIP_SAMPLES - series_bad),
    );
    let mut inv_bad = 0;
    let one = Series::one(p, n);
    for _ in 0..ROUNDTRIP_SAMPLES {
        let u = Series::random_unit(&mut rng, p, n);
        match u.invert() {
            Ok(v) if u.mul(&v).eq_mod(&one) => {}
            _ => inv_bad += 1,
        }
    }
    checks.bool(
        "series unit inversions",
        inv_bad == 0,
        format!("{}/{ROUNDTRIP_SAMPLES} satisfy a * a^-1 = 1 mod T^{n}", ROUNDTRIP_SAMPLES - inv_bad),
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_and_single_towers_agree() {
        let ring = ModelRing::new(2, 2).unwrap();
        let a = chain_tower(&ring, 1, 2).unwrap();
        let b = nested_chain_tower(&ring, 1, 2).unwrap();
        assert_eq!(a.invariants().unwrap(), b.invariants().unwrap());
        assert_eq!(b.num_gens(), 2);
    }

    #[test]
    fn random_members_are_members() {
        let ring = ModelRing::new(3, 1).unwrap().with_precision(16);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let x = random_member(&mut rng, &ring, 2);
            let v = in_model(&x, &ring);
            assert!(v.is_yes(), "{x:?}");
            verify_verdict(&x, &ring, &v).unwrap();
        }
    }
}
