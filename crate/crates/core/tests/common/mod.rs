//! Shared corpora and certificate mutations for the integration tests.
#![allow(dead_code)]

use mwpb_core::certificate::{verify, BlossomKind, Certificate, Tag};
use mwpb_core::field::{rat, BigRational};
use mwpb_core::instance::{gen_random, gen_sparse, Instance};
use mwpb_core::linalg::VertexId;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

/// Dense random instances covering every `(p, m, n)` combination with
/// `p ∈ {2, 7, 10007}`, `m ∈ {2, 4, 6, 8}` and even `n` from `max(m, 4)` to 20.
pub fn dense_corpus(count: u64, wmax: u64) -> Vec<Instance> {
    let mut shapes = Vec::new();
    for p in [2u64, 7, 10007] {
        for m in [2usize, 4, 6, 8] {
            for n in (m.max(4)..=20).step_by(2) {
                shapes.push((p, m, n));
            }
        }
    }
    (0..count)
        .map(|seed| {
            let (p, m, n) = shapes[seed as usize % shapes.len()];
            gen_random(seed, m, n, p, wmax).expect("generator shape is valid")
        })
        .collect()
}

/// Sparse instances over tiny fields, which tend to create blossoms.
pub fn sparse_corpus(seeds: std::ops::Range<u64>, max_n: usize) -> Vec<Instance> {
    seeds
        .filter_map(|seed| {
            let p = [2u64, 3, 5, 10007][(seed % 4) as usize];
            let m = 2 + 2 * ((seed / 4) % 3) as usize;
            let n = (m + 2 + 2 * ((seed / 12) % 4) as usize).min(max_n);
            let density = [0.2, 0.3, 0.45][(seed % 3) as usize];
            gen_sparse(seed, m, n.max(m), p, density, 6)
        })
        .collect()
}

/// A single-field change to a certificate.
#[derive(Debug, Clone)]
pub enum Mutation {
    Digest,
    ColumnCount,
    DropPotential(VertexId),
    DropFromBase(VertexId),
    AddToBase(VertexId),
    ToggleBaseLine(usize),
    ShiftRealPotential(VertexId, BigRational),
    ShiftDummyPotential(VertexId),
    NegativeCharge(usize),
    RaiseCharge(usize),
    DropMember(usize, VertexId),
    FlipKind(usize),
    DropBlossom(usize),
    ChangeEntry(VertexId, VertexId, u64),
    OpenEdge(VertexId, VertexId),
}

impl Mutation {
    /// The condition the verifier must report for this mutation.
    pub fn expected(&self) -> Tag {
        match self {
            Mutation::Digest => Tag::Digest,
            Mutation::ColumnCount
            | Mutation::DropPotential(_)
            | Mutation::DropFromBase(_)
            | Mutation::AddToBase(_) => Tag::Format,
            Mutation::ToggleBaseLine(_) => Tag::Base,
            Mutation::ShiftRealPotential(..) => Tag::DF1,
            Mutation::ShiftDummyPotential(_) | Mutation::RaiseCharge(_) => Tag::DF3,
            Mutation::NegativeCharge(_) => Tag::QNonneg,
            Mutation::DropMember(..) | Mutation::FlipKind(_) | Mutation::DropBlossom(_) => {
                Tag::Laminar
            }
            Mutation::ChangeEntry(..) => Tag::BT1,
            Mutation::OpenEdge(..) => Tag::DF2,
        }
    }

    fn kind(&self) -> usize {
        match self {
            Mutation::Digest => 0,
            Mutation::ColumnCount => 1,
            Mutation::DropPotential(_) => 2,
            Mutation::DropFromBase(_) => 3,
            Mutation::AddToBase(_) => 4,
            Mutation::ToggleBaseLine(_) => 5,
            Mutation::ShiftRealPotential(..) => 6,
            Mutation::ShiftDummyPotential(_) => 7,
            Mutation::NegativeCharge(_) => 8,
            Mutation::RaiseCharge(_) => 9,
            Mutation::DropMember(..) => 10,
            Mutation::FlipKind(_) => 11,
            Mutation::DropBlossom(_) => 12,
            Mutation::ChangeEntry(..) => 13,
            Mutation::OpenEdge(..) => 14,
        }
    }

    /// Returns the mutated certificate.
    pub fn apply(&self, cert: &Certificate) -> Certificate {
        let mut c = cert.clone();
        match self {
            Mutation::Digest => {
                let flipped = if c.digest.starts_with('0') { '1' } else { '0' };
                c.digest.replace_range(0..1, &flipped.to_string());
            }
            Mutation::ColumnCount => c.n += 2,
            Mutation::DropPotential(v) => {
                c.potential.remove(v);
            }
            Mutation::DropFromBase(v) => {
                c.bstar.remove(v);
            }
            Mutation::AddToBase(v) => {
                c.bstar.insert(*v);
            }
            Mutation::ToggleBaseLine(k) => {
                if let Some(i) = c.base_lines.iter().position(|x| x == k) {
                    c.base_lines.remove(i);
                } else {
                    c.base_lines.push(*k);
                }
            }
            Mutation::ShiftRealPotential(v, d) => *c.potential.get_mut(v).unwrap() += d,
            Mutation::ShiftDummyPotential(v) => *c.potential.get_mut(v).unwrap() += rat(1),
            Mutation::NegativeCharge(i) => c.blossoms[*i].q = -(&c.blossoms[*i].q + rat(1)),
            Mutation::RaiseCharge(i) => c.blossoms[*i].q += rat(1),
            Mutation::DropMember(i, v) => {
                c.blossoms[*i].members.remove(v);
            }
            Mutation::FlipKind(i) => c.blossoms[*i].kind = BlossomKind::Source,
            Mutation::DropBlossom(i) => {
                c.blossoms.remove(*i);
            }
            Mutation::ChangeEntry(u, v, x) => c.cstar.set_entry(*u, *v, *x).unwrap(),
            Mutation::OpenEdge(u, v) => c.cstar.set_entry(*u, *v, 1).unwrap(),
        }
        c
    }
}

/// Every applicable mutation of `cert`.
pub fn candidates(inst: &Instance, cert: &Certificate) -> Vec<Mutation> {
    let p = inst.field().modulus();
    let pot = |v: &VertexId| cert.potential[v].clone();
    let mut out = vec![Mutation::Digest, Mutation::ColumnCount];
    for &v in &cert.vstar {
        out.push(Mutation::DropPotential(v));
        if cert.bstar.contains(&v) {
            out.push(Mutation::DropFromBase(v));
        } else {
            out.push(Mutation::AddToBase(v));
        }
        if cert.is_real(v) {
            for d in [rat(1), rat(-1), BigRational::new(1.into(), 2.into())] {
                out.push(Mutation::ShiftRealPotential(v, d));
            }
        } else {
            out.push(Mutation::ShiftDummyPotential(v));
        }
    }
    for k in 0..inst.num_lines() {
        out.push(Mutation::ToggleBaseLine(k));
    }
    for (i, b) in cert.blossoms.iter().enumerate() {
        out.push(Mutation::NegativeCharge(i));
        out.push(Mutation::FlipKind(i));
        out.push(Mutation::DropBlossom(i));
        if b.bud_tip.is_some() {
            out.push(Mutation::RaiseCharge(i));
        }
        for &v in b.members.iter().filter(|v| cert.is_real(**v)) {
            out.push(Mutation::DropMember(i, v));
        }
    }
    let c = &cert.cstar;
    for &u in c.row_labels() {
        for &v in c.col_labels() {
            let x = c.entry(u, v).unwrap();
            let slack = pot(&v) - pot(&u) - cert.q_between(u, v);
            if x == 0 && slack < BigRational::from_integer(0.into()) {
                out.push(Mutation::OpenEdge(u, v));
            }
            if !(cert.is_real(u) && cert.is_real(v)) {
                continue;
            }
            if x != 0 && p > 2 {
                out.push(Mutation::ChangeEntry(u, v, x % (p - 1) + 1));
            } else if x == 0 && slack >= BigRational::from_integer(0.into()) {
                out.push(Mutation::ChangeEntry(u, v, 1));
            }
        }
    }
    out
}

/// Up to `count` mutations of distinct values, spread over the kinds
/// available for `cert`.
pub fn pick(
    inst: &Instance,
    cert: &Certificate,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Mutation> {
    let mut by_kind: Vec<Vec<Mutation>> = vec![Vec::new(); 15];
    for m in candidates(inst, cert) {
        by_kind[m.kind()].push(m);
    }
    by_kind.retain(|k| !k.is_empty());
    by_kind.shuffle(rng);
    for k in &mut by_kind {
        k.shuffle(rng);
    }
    let mut out = Vec::new();
    while out.len() < count && by_kind.iter().any(|k| !k.is_empty()) {
        for k in &mut by_kind {
            if out.len() == count {
                break;
            }
            if let Some(m) = k.pop() {
                out.push(m);
            }
        }
    }
    out
}

/// Applies each mutation and returns the ones not rejected with their
/// expected tag, with what the verifier said instead.
pub fn misjudged(
    inst: &Instance,
    cert: &Certificate,
    muts: &[Mutation],
) -> Vec<(Mutation, Option<Tag>)> {
    muts.iter()
        .filter_map(|m| {
            let got = verify(inst, &m.apply(cert)).tag();
            (got != Some(m.expected())).then(|| (m.clone(), got))
        })
        .collect()
}
