mod common;

use mwpb_core::oracle::brute_force;
use mwpb_core::solver::{solve_with, SolveOptions};

#[test]
fn checked_dense_runs_match_brute_force() {
    for inst in common::dense_corpus(400, 9)
        .into_iter()
        .filter(|i| i.n() <= 12)
    {
        let out = solve_with(&inst, &SolveOptions::checked()).unwrap();
        assert_eq!(
            out.weight(),
            brute_force(&inst).unwrap().weight(),
            "{}",
            inst.to_text()
        );
    }
}

#[test]
fn checked_sparse_runs_match_brute_force() {
    let corpus = common::sparse_corpus(0..600, 14);
    assert!(corpus.len() > 300);
    let mut blossoms = 0;
    let mut grafts = 0;
    for inst in corpus {
        let out = solve_with(&inst, &SolveOptions::checked()).unwrap();
        assert_eq!(
            out.weight(),
            brute_force(&inst).unwrap().weight(),
            "{}",
            inst.to_text()
        );
        blossoms += out.stats().blossoms_created;
        grafts += out.stats().grafts;
    }
    assert!(blossoms > 0);
    assert!(grafts > 0);
}

#[test]
fn large_instances_produce_accepted_certificates() {
    use mwpb_core::certificate::verify;
    use mwpb_core::instance::gen_random;
    use mwpb_core::solver::{solve, Outcome};
    for seed in 0..6 {
        let p = [2u64, 3, 10007][(seed % 3) as usize];
        let inst = gen_random(seed, 20, 60, p, 100).unwrap();
        if let Outcome::Optimal(s) = solve(&inst).unwrap() {
            assert!(verify(&inst, &s.certificate).is_accept(), "seed {seed}");
        }
    }
}
