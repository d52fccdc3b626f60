//! Solving integer matrices over ℚ by solving over several small primes.
//!
//! Every `m × m` minor of an integer matrix with entries bounded by `γ` has
//! absolute value at most `(mγ)^m`. With `N = ⌈m·log₂(mγ)⌉` the product of the
//! `N` smallest primes exceeds that bound, so each minor that is nonzero over
//! ℚ stays nonzero modulo at least one of them. Solving modulo each prime and
//! keeping the lightest result therefore yields the optimum over ℚ.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::field::{BigRational, PrimeField};
use crate::instance::{Instance, IntegerInstance};
use crate::solver::{solve_with, Outcome, SolveError, SolveOptions};

/// Failure of the multi-prime driver.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalError {
    /// The matrix has dependent rows over ℚ, so it loses rank modulo every prime.
    #[error("integer matrix does not have full row rank over the rationals")]
    RankDeficient,
    /// The solver failed on one of the primes.
    #[error("solving modulo {prime}: {source}")]
    Solve {
        /// The prime of the failing run.
        prime: u64,
        /// The solver error.
        source: SolveError,
    },
}

/// What happened modulo one prime.
#[derive(Debug, Clone)]
pub enum PrimeStatus {
    /// The reduced matrix lost row rank; the prime was skipped.
    RankLost,
    /// The reduced instance has no parity base.
    Infeasible,
    /// The reduced instance has a parity base of this minimum weight.
    Optimal(BigRational),
}

/// One per-prime run.
#[derive(Debug, Clone)]
pub struct PrimeRun {
    /// The modulus.
    pub prime: u64,
    /// Its result.
    pub status: PrimeStatus,
}

/// Result of [`solve_rational`].
#[derive(Debug, Clone)]
pub struct RationalSolution {
    /// The best outcome over all primes. Infeasible when no prime found a base.
    pub outcome: Outcome,
    /// The prime that produced `outcome`, when optimal.
    pub prime: Option<u64>,
    /// The reduced instance that produced `outcome`, when optimal. Its
    /// certificate is checked against this instance.
    pub instance: Option<Instance>,
    /// Every run, in prime order.
    pub runs: Vec<PrimeRun>,
}

/// The first `count` primes, ascending, by the sieve of Eratosthenes.
pub fn smallest_primes(count: usize) -> Vec<u64> {
    if count == 0 {
        return Vec::new();
    }
    let mut limit = 16usize;
    if count >= 6 {
        let c = count as f64;
        limit = (c * (c.ln() + c.ln().ln())).ceil() as usize + 3;
    }
    loop {
        let mut composite = vec![false; limit + 1];
        let mut primes = Vec::with_capacity(count);
        for i in 2..=limit {
            if composite[i] {
                continue;
            }
            primes.push(i as u64);
            if primes.len() == count {
                return primes;
            }
            for j in (i * i..=limit).step_by(i) {
                composite[j] = true;
            }
        }
        limit *= 2;
    }
}

/// `⌈m·log₂(mγ)⌉`, computed exactly as the least `N` with `2^N ≥ (mγ)^m`,
/// and at least 1.
pub fn prime_count(m: usize, gamma: &BigInt) -> usize {
    let base: BigInt = gamma * BigInt::from(m);
    if base <= BigInt::one() {
        return 1;
    }
    let bound: BigInt = Pow::pow(&base, m as u32);
    let bits = bound.bits() as usize;
    let power_of_two = (&bound & (&bound - BigInt::one())).is_zero();
    let n = if power_of_two { bits - 1 } else { bits };
    n.max(1)
}

/// A prime, its reduced instance (if rank survived) and the solver result.
type PrimeResult = (u64, Option<Instance>, Result<Option<Outcome>, SolveError>);

/// Solves an integer instance over ℚ with default solver options.
pub fn solve_rational(inst: &IntegerInstance) -> Result<RationalSolution, RationalError> {
    solve_rational_with(inst, &SolveOptions::default())
}

/// Solves an integer instance over ℚ. The per-prime runs execute in
/// parallel; the lightest result wins, ties going to the smallest prime.
pub fn solve_rational_with(
    inst: &IntegerInstance,
    opts: &SolveOptions,
) -> Result<RationalSolution, RationalError> {
    let primes = smallest_primes(prime_count(inst.m(), &inst.gamma()));
    let results: Vec<PrimeResult> = primes
        .par_iter()
        .map(|&p| {
            let field = PrimeField::new(p).expect("sieve output is prime");
            match inst.reduce(field) {
                None => (p, None, Ok(None)),
                Some(reduced) => {
                    let out = solve_with(&reduced, opts).map(Some);
                    (p, Some(reduced), out)
                }
            }
        })
        .collect();

    let mut runs = Vec::with_capacity(results.len());
    let mut best: Option<(u64, Instance, Outcome)> = None;
    let mut fallback: Option<Outcome> = None;
    for (prime, reduced, res) in results {
        let out = res.map_err(|source| RationalError::Solve { prime, source })?;
        let status = match (&out, reduced) {
            (None, _) | (Some(_), None) => PrimeStatus::RankLost,
            (Some(o @ Outcome::Infeasible(_)), _) => {
                fallback.get_or_insert_with(|| o.clone());
                PrimeStatus::Infeasible
            }
            (Some(o @ Outcome::Optimal(s)), Some(reduced)) => {
                let better = best
                    .as_ref()
                    .is_none_or(|(_, _, b)| s.weight < *b.weight().expect("optimal"));
                if better {
                    best = Some((prime, reduced, o.clone()));
                }
                PrimeStatus::Optimal(s.weight.clone())
            }
        };
        runs.push(PrimeRun { prime, status });
    }
    match (best, fallback) {
        (Some((prime, reduced, outcome)), _) => Ok(RationalSolution {
            outcome,
            prime: Some(prime),
            instance: Some(reduced),
            runs,
        }),
        (None, Some(outcome)) => Ok(RationalSolution {
            outcome,
            prime: None,
            instance: None,
            runs,
        }),
        (None, None) => Err(RationalError::RankDeficient),
    }
}

/// A 2 × 4 instance whose optimum is invisible modulo 2.
///
/// The light line has determinant 2 and the heavy line determinant 1, so the
/// optimum over ℚ is 0 while the instance reduced modulo 2 only admits the
/// heavy line.
pub fn engineered_instance() -> IntegerInstance {
    let rows = vec![
        vec![1, 0, 1, 0].into_iter().map(BigInt::from).collect(),
        vec![1, 2, 0, 1].into_iter().map(BigInt::from).collect(),
    ];
    IntegerInstance {
        rows,
        weights: vec![BigRational::zero(), BigRational::from_integer(10.into())],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::is_prime;
    use crate::instance::gen_random_integer;
    use crate::oracle::{brute_force_integer, integer_determinant};
    use proptest::prelude::*;

    fn naive_primes(count: usize) -> Vec<u64> {
        (2u64..).filter(|&k| is_prime(k)).take(count).collect()
    }

    #[test]
    fn first_prime_is_two() {
        assert_eq!(smallest_primes(1), vec![2]);
    }

    #[test]
    fn first_five_primes() {
        assert_eq!(smallest_primes(5), vec![2, 3, 5, 7, 11]);
    }

    #[test]
    fn hundredth_prime_is_541() {
        let ps = smallest_primes(100);
        assert_eq!(ps.len(), 100);
        assert_eq!(*ps.last().unwrap(), 541);
        assert_eq!(ps, naive_primes(100));
    }

    #[test]
    fn sieve_matches_primality_test() {
        for c in [0, 2, 6, 7, 30, 1000] {
            assert_eq!(smallest_primes(c), naive_primes(c));
        }
    }

    #[test]
    fn prime_count_uses_base_two() {
        assert_eq!(prime_count(2, &BigInt::from(2)), 4);
        assert_eq!(prime_count(2, &BigInt::from(3)), 6);
        assert_eq!(prime_count(1, &BigInt::from(1)), 1);
        assert_eq!(prime_count(4, &BigInt::from(5)), 18);
        assert_eq!(prime_count(0, &BigInt::from(7)), 1);
    }

    #[test]
    fn identity_same_answer_for_every_prime() {
        let inst = IntegerInstance {
            rows: vec![
                vec![1, 0].into_iter().map(BigInt::from).collect(),
                vec![0, 1].into_iter().map(BigInt::from).collect(),
            ],
            weights: vec![BigRational::from_integer(5.into())],
        };
        let sol = solve_rational(&inst).unwrap();
        assert_eq!(
            sol.outcome.weight(),
            Some(&BigRational::from_integer(5.into()))
        );
        assert_eq!(sol.prime, Some(2));
        assert!(sol.runs.iter().all(|r| matches!(&r.status, PrimeStatus::Optimal(w) if *w == BigRational::from_integer(5.into()))));
    }

    #[test]
    fn engineered_optimum_found_through_three() {
        let inst = engineered_instance();
        let truth = brute_force_integer(&inst).unwrap();
        assert_eq!(truth.weight(), Some(&BigRational::zero()));
        let sol = solve_rational(&inst).unwrap();
        assert_eq!(sol.outcome.weight(), Some(&BigRational::zero()));
        assert_eq!(sol.prime, Some(3));
        let two = &sol.runs[0];
        assert_eq!(two.prime, 2);
        assert!(
            matches!(&two.status, PrimeStatus::Optimal(w) if *w == BigRational::from_integer(10.into()))
        );
    }

    #[test]
    fn dependent_rows_are_reported() {
        let inst = IntegerInstance {
            rows: vec![
                vec![1, 2, 3, 4].into_iter().map(BigInt::from).collect(),
                vec![2, 4, 6, 8].into_iter().map(BigInt::from).collect(),
            ],
            weights: vec![BigRational::zero(), BigRational::zero()],
        };
        assert_eq!(
            solve_rational(&inst).unwrap_err(),
            RationalError::RankDeficient
        );
    }

    #[test]
    fn random_instances_match_rational_enumeration() {
        for seed in 0..40 {
            let inst = gen_random_integer(seed, 2 + 2 * (seed as usize % 2), 8, 5, 20);
            let truth = brute_force_integer(&inst).unwrap();
            match solve_rational(&inst) {
                Ok(sol) => assert_eq!(sol.outcome.weight(), truth.weight(), "seed {seed}"),
                Err(RationalError::RankDeficient) => assert!(truth.weight().is_none()),
                Err(e) => panic!("seed {seed}: {e}"),
            }
        }
    }

    fn minors_agree(rows: &[Vec<i64>]) {
        let m = rows.len();
        let n = rows[0].len();
        let gamma = rows.iter().flatten().map(|x| x.abs()).max().unwrap();
        let primes = smallest_primes(prime_count(m, &BigInt::from(gamma)));
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != m {
                continue;
            }
            let cols: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
            let sub: Vec<BigInt> = (0..m)
                .flat_map(|i| cols.iter().map(move |&j| BigInt::from(rows[i][j])))
                .collect();
            let det = integer_determinant(m, &sub);
            let seen = primes.iter().any(|&p| !(&det % BigInt::from(p)).is_zero());
            assert_eq!(!det.is_zero(), seen, "columns {cols:?}");
        }
    }

    proptest! {
        #[test]
        fn nonzero_minor_survives_some_prime(
            half in 1usize..=2,
            entries in proptest::collection::vec(-5i64..=5, 24),
        ) {
            let m = 2 * half;
            let n = 6;
            let rows: Vec<Vec<i64>> = (0..m).map(|i| entries[i * n..(i + 1) * n].to_vec()).collect();
            prop_assume!(rows.iter().flatten().any(|&x| x != 0));
            minors_agree(&rows);
        }

        #[test]
        fn sieve_is_ascending_and_prime(count in 1usize..300) {
            let ps = smallest_primes(count);
            prop_assert_eq!(ps.len(), count);
            prop_assert!(ps.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(ps.iter().all(|&p| is_prime(p)));
        }
    }
}
