//! Sound three-valued membership in `R_mu = k^(p^mu)[[T]] (x) k`.
//!
//! `b` lies in `R_mu` exactly when its coefficients span a finite-dimensional
//! `k^(p^mu)`-subspace of `k`. The analysis below only decides rules whose
//! structure proves one side:
//!
//! * members carry a finite spanning set for the coefficient span;
//! * non-members have the shape `u * z_s^(p^d) + r` with `u, r` in `R_mu`,
//!   `u != 0` and `d < mu`. The coefficients `t_{s+i}^(p^d)` of the core are
//!   `k^(p^mu)`-independent, so the core is not in `R_mu`; and since
//!   `R_mu = k[[T]] ∩ Frac(R_mu)`, multiplying a non-member by a nonzero member
//!   cannot land in `R_mu`.
//!
//! Everything else is `Unknown`.

use serde::Serialize;

use super::{ModelRing, Rule, StreamElem};
use crate::field::{p_span_rank, FieldElem, PSpan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MembershipStatus {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// Every coefficient lies in the `k^(p^mu)`-span of these elements.
    Span { generators: Vec<FieldElem> },
    /// The core stream `z_start^(p^depth)` has `p_span_rank` of its first `m`
    /// coefficients equal to `m` for each recorded `(m, rank)`.
    RankGrowth {
        depth: u32,
        start: usize,
        coefficients: Vec<FieldElem>,
        ranks: Vec<(usize, usize)>,
        argument: String,
    },
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MembershipVerdict {
    pub status: MembershipStatus,
    pub witness: Witness,
}

impl MembershipVerdict {
    pub fn is_yes(&self) -> bool {
        self.status == MembershipStatus::Yes
    }

    pub fn is_no(&self) -> bool {
        self.status == MembershipStatus::No
    }

    fn unknown() -> Self {
        MembershipVerdict { status: MembershipStatus::Unknown, witness: Witness::None }
    }

    pub fn summary(&self) -> String {
        match &self.witness {
            Witness::Span { generators } => format!("Yes: span of {} generator(s)", generators.len()),
            Witness::RankGrowth { depth, start, ranks, .. } => format!(
                "No: core z_{start}^(p^{depth}) ranks {:?}",
                ranks.iter().map(|&(_, r)| r).collect::<Vec<_>>()
            ),
            Witness::None => "Unknown".to_string(),
        }
    }
}

#[derive(Clone, Debug)]
struct NonMemberForm {
    depth: u32,
    start: usize,
    unit_gens: Vec<FieldElem>,
    offset_gens: Vec<FieldElem>,
}

#[derive(Clone, Debug)]
enum Analysis {
    Member(Vec<FieldElem>),
    NonMember(NonMemberForm),
    Unknown,
}

fn prune(gens: impl IntoIterator<Item = FieldElem>, mu: u32) -> Vec<FieldElem> {
    let mut span = PSpan::new(mu);
    for g in gens {
        span.insert(&g);
    }
    span.basis().to_vec()
}

fn products(a: &[FieldElem], b: &[FieldElem], mu: u32) -> Vec<FieldElem> {
    prune(a.iter().flat_map(|x| b.iter().map(move |y| x.mul(y))), mu)
}

fn frob_all(gens: &[FieldElem], nu: u32, mu: u32) -> Vec<FieldElem> {
    prune(gens.iter().map(|g| g.frobenius(nu)), mu)
}

/// `Some(true)` if certainly nonzero, `Some(false)` if certainly zero.
fn nonzero(b: &StreamElem, ring: &ModelRing) -> Option<bool> {
    if let Some(cs) = b.as_polynomial() {
        return Some(cs.iter().any(|c| !c.is_zero()));
    }
    if !b.eval(ring.precision()).is_zero() {
        Some(true)
    } else {
        None
    }
}

fn analyze(b: &StreamElem, ring: &ModelRing) -> Analysis {
    let mu = ring.mu();
    let p = ring.p();
    match b.rule() {
        Rule::Polynomial(cs) => Analysis::Member(prune(cs.iter().filter(|c| !c.is_zero()).cloned(), mu)),
        Rule::Nagata { start } => Analysis::NonMember(NonMemberForm {
            depth: 0,
            start: *start,
            unit_gens: vec![FieldElem::one(p)],
            offset_gens: Vec::new(),
        }),
        Rule::Frob { nu, inner } => {
            let mut total = *nu;
            let mut x = inner;
            while let Rule::Frob { nu, inner } = x.rule() {
                total += nu;
                x = inner;
            }
            if total >= mu {
                // every coefficient is a p^mu-th power
                return Analysis::Member(vec![FieldElem::one(p)]);
            }
            match analyze(x, ring) {
                Analysis::Member(g) => Analysis::Member(frob_all(&g, total, mu)),
                Analysis::NonMember(f) if f.depth + total < mu => Analysis::NonMember(NonMemberForm {
                    depth: f.depth + total,
                    start: f.start,
                    unit_gens: frob_all(&f.unit_gens, total, mu),
                    offset_gens: frob_all(&f.offset_gens, total, mu),
                }),
                Analysis::NonMember(f) => {
                    // u^Q z^(p^(d+total)) + r^Q with the middle factor spanned by 1
                    let mut g = frob_all(&f.unit_gens, total, mu);
                    g.extend(frob_all(&f.offset_gens, total, mu));
                    Analysis::Member(prune(g, mu))
                }
                Analysis::Unknown => Analysis::Unknown,
            }
        }
        Rule::ScalarMul { scalar, inner } => {
            if scalar.is_zero() {
                return Analysis::Member(Vec::new());
            }
            let s = [scalar.clone()];
            match analyze(inner, ring) {
                Analysis::Member(g) => Analysis::Member(products(&g, &s, mu)),
                Analysis::NonMember(f) => Analysis::NonMember(NonMemberForm {
                    unit_gens: products(&f.unit_gens, &s, mu),
                    offset_gens: products(&f.offset_gens, &s, mu),
                    ..f
                }),
                Analysis::Unknown => Analysis::Unknown,
            }
        }
        Rule::Sum(terms) => {
            let mut acc = Analysis::Member(Vec::new());
            for t in terms {
                acc = match (acc, analyze(t, ring)) {
                    (Analysis::Unknown, _) | (_, Analysis::Unknown) => return Analysis::Unknown,
                    (Analysis::Member(a), Analysis::Member(b)) => {
                        Analysis::Member(prune(a.into_iter().chain(b), mu))
                    }
                    (Analysis::Member(g), Analysis::NonMember(f))
                    | (Analysis::NonMember(f), Analysis::Member(g)) => {
                        Analysis::NonMember(NonMemberForm {
                            offset_gens: prune(f.offset_gens.into_iter().chain(g), mu),
                            ..f
                        })
                    }
                    // two non-members may cancel
                    (Analysis::NonMember(_), Analysis::NonMember(_)) => return Analysis::Unknown,
                };
            }
            acc
        }
        Rule::Product(factors) => {
            let parts: Vec<Analysis> = factors.iter().map(|f| analyze(f, ring)).collect();
            // a certified zero factor decides everything
            for (f, a) in factors.iter().zip(&parts) {
                if let Analysis::Member(_) = a {
                    if nonzero(f, ring) == Some(false) {
                        return Analysis::Member(Vec::new());
                    }
                }
            }
            let mut member_gens = vec![FieldElem::one(p)];
            let mut member_nonzero = true;
            let mut non_member: Option<NonMemberForm> = None;
            for (f, a) in factors.iter().zip(parts) {
                match a {
                    Analysis::Unknown => return Analysis::Unknown,
                    Analysis::Member(g) => {
                        member_gens = products(&member_gens, &g, mu);
                        member_nonzero &= nonzero(f, ring) == Some(true);
                    }
                    Analysis::NonMember(form) => {
                        if non_member.is_some() {
                            return Analysis::Unknown;
                        }
                        non_member = Some(form);
                    }
                }
            }
            match non_member {
                None => Analysis::Member(member_gens),
                Some(_) if !member_nonzero => Analysis::Unknown,
                Some(f) => Analysis::NonMember(NonMemberForm {
                    unit_gens: products(&f.unit_gens, &member_gens, mu),
                    offset_gens: products(&f.offset_gens, &member_gens, mu),
                    ..f
                }),
            }
        }
    }
}

fn core_stream(p: u32, depth: u32, start: usize) -> StreamElem {
    let z = StreamElem::nagata(p, start);
    if depth == 0 {
        z
    } else {
        StreamElem::frob(depth, z)
    }
}

/// Ranks over `k^(p^mu)` of the first `m` coefficients of the core, for each threshold.
fn core_ranks(p: u32, mu: u32, depth: u32, start: usize, thresholds: &[usize]) -> (Vec<FieldElem>, Vec<(usize, usize)>) {
    let max = thresholds.iter().copied().max().unwrap_or(0);
    // the core's nonzero coefficients sit at multiples of p^depth
    let coeffs: Vec<FieldElem> = (0..max)
        .map(|i| FieldElem::var((start + i) as u32, p).frobenius(depth))
        .collect();
    let mut span = PSpan::new(mu);
    let mut ranks = Vec::new();
    let mut sorted = thresholds.to_vec();
    sorted.sort_unstable();
    let mut next = 0;
    for (i, c) in coeffs.iter().enumerate() {
        span.insert(c);
        while next < sorted.len() && sorted[next] == i + 1 {
            ranks.push((i + 1, span.rank()));
            next += 1;
        }
    }
    (coeffs, ranks)
}

/// Decides `b ∈ R_mu` on the certified fragment.
pub fn in_model(b: &StreamElem, ring: &ModelRing) -> MembershipVerdict {
    match analyze(b, ring) {
        Analysis::Member(generators) => MembershipVerdict {
            status: MembershipStatus::Yes,
            witness: Witness::Span { generators },
        },
        Analysis::NonMember(f) => {
            let (coefficients, ranks) =
                core_ranks(ring.p(), ring.mu(), f.depth, f.start, ring.rank_thresholds());
            if ranks.iter().any(|&(m, r)| m != r) {
                return MembershipVerdict::unknown();
            }
            MembershipVerdict {
                status: MembershipStatus::No,
                witness: Witness::RankGrowth {
                    depth: f.depth,
                    start: f.start,
                    coefficients,
                    ranks,
                    argument: format!(
                        "b = u*z_{}^(p^{}) + r with u != 0 and u, r in R_{}; distinct t_i^(p^{}) are k^(p^{})-independent, \
                         so the core span is infinite; a nonzero member times a non-member is a non-member",
                        f.start, f.depth, ring.mu(), f.depth, ring.mu()
                    ),
                },
            }
        }
        Analysis::Unknown => MembershipVerdict::unknown(),
    }
}

/// Rechecks a verdict against its own witness at the ring's precision.
pub fn verify_verdict(b: &StreamElem, ring: &ModelRing, verdict: &MembershipVerdict) -> Result<(), String> {
    match (&verdict.status, &verdict.witness) {
        (MembershipStatus::Yes, Witness::Span { generators }) => {
            let mut span = PSpan::new(ring.mu());
            for g in generators {
                span.insert(g);
            }
            let s = b.eval(ring.precision());
            for (i, c) in s.coeffs().iter().enumerate() {
                if !span.contains(c) {
                    return Err(format!("coefficient {i} ({c}) escapes the witnessed span"));
                }
            }
            Ok(())
        }
        (MembershipStatus::No, Witness::RankGrowth { depth, start, coefficients, ranks, .. }) => {
            if *depth >= ring.mu() {
                return Err(format!("core depth {depth} is not below mu = {}", ring.mu()));
            }
            let core = core_stream(ring.p(), *depth, *start).eval(ring.p().pow(*depth) as usize * coefficients.len().max(1));
            let q = ring.p().pow(*depth) as usize;
            for (i, c) in coefficients.iter().enumerate() {
                if core.coeff(i * q) != c {
                    return Err(format!("witness coefficient {i} does not match the core stream"));
                }
            }
            for &(m, r) in ranks {
                let got = p_span_rank(&coefficients[..m], ring.mu());
                if got != r || r != m {
                    return Err(format!("rank witness at m = {m}: recorded {r}, recomputed {got}"));
                }
            }
            Ok(())
        }
        (MembershipStatus::Unknown, _) => Ok(()),
        _ => Err("verdict carries a witness of the wrong kind".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u32, mu: u32) -> ModelRing {
        ModelRing::new(p, mu).unwrap().with_precision(64)
    }

    #[test]
    fn nagata_stream_is_not_in_r1() {
        let r = ring(2, 1);
        let z = StreamElem::nagata(2, 0);
        let v = in_model(&z, &r);
        assert_eq!(v.status, MembershipStatus::No);
        let Witness::RankGrowth { ranks, .. } = &v.witness else { panic!() };
        assert_eq!(ranks, &vec![(8, 8), (16, 16), (32, 32)]);
        verify_verdict(&z, &r, &v).unwrap();
    }

    #[test]
    fn nagata_rank_matches_independent_oracle() {
        // oracle: rank of t_0..t_{m-1} computed straight from p_span_rank
        for m in [4usize, 8, 16, 32] {
            let elems: Vec<_> = (0..m as u32).map(|i| FieldElem::var(i, 2)).collect();
            assert_eq!(p_span_rank(&elems, 1), m);
        }
    }

    #[test]
    fn frobenius_collapse() {
        let r1 = ring(2, 1);
        let r2 = ring(2, 2);
        let z = StreamElem::nagata(2, 0);
        assert!(in_model(&StreamElem::frob(1, z.clone()), &r1).is_yes());
        assert!(in_model(&StreamElem::frob(1, z.clone()), &r2).is_no());
        assert!(in_model(&StreamElem::frob(2, z.clone()), &r2).is_yes());
        let v = in_model(&StreamElem::frob(1, z.clone()), &r2);
        verify_verdict(&StreamElem::frob(1, z), &r2, &v).unwrap();
    }

    #[test]
    fn perturbed_and_scaled_streams_stay_out() {
        let p = 3;
        let r = ring(p, 1);
        let z = StreamElem::nagata(p, 2);
        let poly = StreamElem::polynomial(p, vec![FieldElem::var(0, p), FieldElem::one(p)]);
        let b = StreamElem::sum(vec![
            StreamElem::scalar_mul(FieldElem::var(5, p), z.clone()),
            poly.clone(),
        ]);
        assert!(in_model(&b, &r).is_no());
        let tz = StreamElem::product(vec![StreamElem::t_power(p, 1), z.clone()]);
        assert!(in_model(&tz, &r).is_no());
        // two non-members may cancel: undecided
        assert_eq!(in_model(&StreamElem::sum(vec![z.clone(), z.clone()]), &r).status, MembershipStatus::Unknown);
        assert_eq!(in_model(&StreamElem::product(vec![z.clone(), z]), &r).status, MembershipStatus::Unknown);
    }

    #[test]
    fn zero_factor_makes_a_member() {
        let p = 2;
        let r = ring(p, 1);
        let b = StreamElem::product(vec![StreamElem::zero(p), StreamElem::nagata(p, 0)]);
        assert!(in_model(&b, &r).is_yes());
    }

    #[test]
    fn yes_witness_reconstructs_products() {
        let p = 2;
        let r = ring(p, 1);
        let a = StreamElem::polynomial(p, vec![FieldElem::var(0, p), FieldElem::var(1, p)]);
        let b = StreamElem::frob(1, StreamElem::nagata(p, 3));
        let prod = StreamElem::product(vec![a, b]);
        let v = in_model(&prod, &r);
        assert!(v.is_yes());
        verify_verdict(&prod, &r, &v).unwrap();
    }

    #[test]
    fn tampered_witness_is_rejected() {
        let p = 2;
        let r = ring(p, 1);
        let z = StreamElem::nagata(p, 0);
        let bogus = MembershipVerdict {
            status: MembershipStatus::Yes,
            witness: Witness::Span { generators: vec![FieldElem::one(p)] },
        };
        assert!(verify_verdict(&z, &r, &bogus).is_err());
    }
}
