mod common;

use std::collections::HashSet;

use mwpb_core::certificate::{parse_certificate, verify, Tag};
use mwpb_core::solver::{solve, Outcome};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn optimal_certificates() -> Vec<(
    mwpb_core::instance::Instance,
    mwpb_core::certificate::Certificate,
)> {
    let mut corpus = common::dense_corpus(150, 50);
    corpus.extend(common::sparse_corpus(0..300, 12));
    corpus
        .into_iter()
        .filter_map(|inst| match solve(&inst).unwrap() {
            Outcome::Optimal(s) => Some((inst, s.certificate)),
            Outcome::Infeasible(_) => None,
        })
        .collect()
}

#[test]
fn optimal_certificates_are_accepted_and_survive_text() {
    let certs = optimal_certificates();
    assert!(certs.len() > 200);
    for (inst, cert) in &certs {
        assert!(verify(inst, cert).is_accept(), "{}", inst.to_text());
        let back = parse_certificate(&cert.to_text(), inst).unwrap();
        assert_eq!(&back, cert);
    }
}

#[test]
fn single_field_mutations_are_rejected_with_their_tag() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut tags = HashSet::new();
    for (inst, cert) in optimal_certificates() {
        let muts = common::pick(&inst, &cert, 10, &mut rng);
        assert_eq!(muts.len(), 10);
        let bad = common::misjudged(&inst, &cert, &muts);
        assert!(
            bad.is_empty(),
            "{bad:?}\n{}\n{}",
            inst.to_text(),
            cert.to_text()
        );
        tags.extend(muts.iter().map(|m| m.expected()));
    }
    for t in [
        Tag::Digest,
        Tag::Format,
        Tag::Base,
        Tag::Laminar,
        Tag::QNonneg,
        Tag::DF1,
        Tag::DF2,
        Tag::DF3,
        Tag::BT1,
    ] {
        assert!(tags.contains(&t), "no mutation exercised {t}");
    }
}

#[test]
fn every_candidate_mutation_is_rejected_on_blossom_certificates() {
    let mut seen = 0;
    for (inst, cert) in optimal_certificates()
        .into_iter()
        .filter(|(_, c)| !c.blossoms.is_empty())
        .take(20)
    {
        let all = common::candidates(&inst, &cert);
        let bad = common::misjudged(&inst, &cert, &all);
        assert!(bad.is_empty(), "{bad:?}");
        seen += 1;
    }
    assert!(seen > 0);
}
