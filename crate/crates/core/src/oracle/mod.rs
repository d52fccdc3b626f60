//! Independent ground truth for the solver.
//!
//! [`brute_force`] enumerates every set of `m/2` lines. [`pfaffian_degree`]
//! computes the θ-degree of the Pfaffian of the skew-symmetric matrix
//! `Φ_A(θ) = [[O, A], [−Aᵀ, D(θ)]]`, where `D(θ)` is block diagonal with one
//! block `[[0, −τθ^w], [τθ^w, 0]]` per line and random `τ`. The minimum weight
//! of a parity base equals the total weight minus that degree, and the
//! Pfaffian vanishes exactly when no parity base exists.

pub mod ext;

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::{BigRational, PrimeField};
use crate::instance::{Instance, IntegerInstance};
use crate::linalg::determinant;

use ext::{EvalField, PolyExt, PrimeEval};

/// Default minimum size of the evaluation field, `2^31 − 1`.
pub const DEFAULT_QFIELD: u64 = 2_147_483_647;
/// Default number of independent trials.
pub const DEFAULT_TRIALS: usize = 3;
/// Largest number of lines accepted by the enumeration oracle.
pub const BRUTE_FORCE_MAX_LINES: usize = 14;

/// Errors raised by the oracles.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    /// The instance is too large for exhaustive enumeration.
    #[error("instance has {0} lines; enumeration is capped at {BRUTE_FORCE_MAX_LINES}")]
    TooLarge(usize),
    /// The evaluation field cannot separate the polynomials involved.
    #[error("evaluation field of size {size} is too small (need more than {needed})")]
    QfieldTooSmall { size: u128, needed: u128 },
    /// Weights must be integers for the degree formulation.
    #[error("Pfaffian oracle requires integer weights")]
    NonIntegerWeights,
    /// The interpolated determinant has odd degree, which a square cannot have.
    #[error("determinant degree {0} is odd")]
    OddDegree(u64),
}

/// Result of the enumeration oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BruteForce {
    /// Minimum weight and the lexicographically smallest optimal line set.
    Optimal {
        weight: BigRational,
        lines: Vec<usize>,
    },
    /// No parity base exists.
    Infeasible,
}

impl BruteForce {
    /// Optimal weight, if any.
    pub fn weight(&self) -> Option<&BigRational> {
        match self {
            BruteForce::Optimal { weight, .. } => Some(weight),
            BruteForce::Infeasible => None,
        }
    }
}

/// Calls `visit` on every `r`-subset of `0..n` in lexicographic order.
fn for_each_subset(n: usize, r: usize, mut visit: impl FnMut(&[usize])) {
    if r > n {
        return;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        visit(&idx);
        let Some(i) = (0..r).rev().find(|&i| idx[i] < n - r + i) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn keep_best(best: &mut Option<(BigRational, Vec<usize>)>, w: BigRational, lines: &[usize]) {
    if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
        *best = Some((w, lines.to_vec()));
    }
}

/// Exhaustive minimum-weight parity base over GF(p).
pub fn brute_force(inst: &Instance) -> Result<BruteForce, OracleError> {
    let nl = inst.num_lines();
    if nl > BRUTE_FORCE_MAX_LINES {
        return Err(OracleError::TooLarge(nl));
    }
    let m = inst.m();
    if m % 2 == 1 {
        return Ok(BruteForce::Infeasible);
    }
    let a = inst.matrix();
    let f = inst.field();
    let mut best = None;
    for_each_subset(nl, m / 2, |lines| {
        let mut sub = Vec::with_capacity(m * m);
        for i in 0..m {
            for &k in lines {
                sub.push(a.get(i, 2 * k));
                sub.push(a.get(i, 2 * k + 1));
            }
        }
        if determinant(f, m, &sub) != 0 {
            keep_best(&mut best, inst.weight_of(lines), lines);
        }
    });
    Ok(match best {
        Some((weight, lines)) => BruteForce::Optimal { weight, lines },
        None => BruteForce::Infeasible,
    })
}

/// Exact determinant of an integer matrix by fraction-free elimination.
pub fn integer_determinant(k: usize, data: &[BigInt]) -> BigInt {
    if k == 0 {
        return BigInt::one();
    }
    let mut a = data.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for c in 0..k {
        let Some(piv) = (c..k).find(|&i| !a[i * k + c].is_zero()) else {
            return BigInt::zero();
        };
        if piv != c {
            for j in 0..k {
                a.swap(piv * k + j, c * k + j);
            }
            sign = -sign;
        }
        for i in c + 1..k {
            for j in c + 1..k {
                let v = &a[c * k + c] * &a[i * k + j] - &a[i * k + c] * &a[c * k + j];
                a[i * k + j] = v / &prev;
            }
            a[i * k + c] = BigInt::zero();
        }
        prev = a[c * k + c].clone();
    }
    sign * &a[k * k - 1]
}

/// Exhaustive minimum-weight parity base of an integer matrix over ℚ.
pub fn brute_force_integer(inst: &IntegerInstance) -> Result<BruteForce, OracleError> {
    let nl = inst.weights.len();
    if nl > BRUTE_FORCE_MAX_LINES {
        return Err(OracleError::TooLarge(nl));
    }
    let m = inst.m();
    if m % 2 == 1 {
        return Ok(BruteForce::Infeasible);
    }
    let mut best = None;
    for_each_subset(nl, m / 2, |lines| {
        let mut sub = Vec::with_capacity(m * m);
        for i in 0..m {
            for &k in lines {
                sub.push(inst.rows[i][2 * k].clone());
                sub.push(inst.rows[i][2 * k + 1].clone());
            }
        }
        if !integer_determinant(m, &sub).is_zero() {
            let w = lines
                .iter()
                .fold(BigRational::zero(), |acc, &k| acc + &inst.weights[k]);
            keep_best(&mut best, w, lines);
        }
    });
    Ok(match best {
        Some((weight, lines)) => BruteForce::Optimal { weight, lines },
        None => BruteForce::Infeasible,
    })
}

/// The data of one degree computation: base-field rows, nonnegative integer
/// weights, and the shift that was applied to make them nonnegative.
struct DegreeProblem {
    rows: Vec<Vec<u64>>,
    weights: Vec<u64>,
    shift: i64,
    base: PrimeField,
}

fn integer_weights(ws: &[BigRational]) -> Result<(Vec<u64>, i64), OracleError> {
    if ws.iter().any(|w| !w.denom().is_one()) {
        return Err(OracleError::NonIntegerWeights);
    }
    let ints: Vec<i64> = ws
        .iter()
        .map(|w| w.numer().to_i64().ok_or(OracleError::NonIntegerWeights))
        .collect::<Result<_, _>>()?;
    let shift = ints.iter().copied().min().unwrap_or(0).min(0);
    Ok((ints.iter().map(|&w| (w - shift) as u64).collect(), shift))
}

/// Degree bounds `(low, high)` on `deg det Φ_A(θ)`: every parity base `B`
/// contributes `2·w(L ∖ B)`, which lies between twice the sum of the
/// `(n−m)/2` smallest weights and twice the total minus the `m/2` smallest.
fn degree_window(weights: &[u64], m: usize) -> (u64, u64) {
    let mut sorted = weights.to_vec();
    sorted.sort_unstable();
    let total: u64 = sorted.iter().sum();
    let outside = sorted.len() - m / 2;
    let low: u64 = sorted[..outside].iter().sum();
    let smallest_inside: u64 = sorted[..m / 2].iter().sum();
    (2 * low, 2 * (total - smallest_inside))
}

/// One randomized evaluation/interpolation of `det Φ_A(θ)`; returns its
/// degree or `None` when every evaluation vanished.
fn degree_trial<F: EvalField, R: Rng>(
    ef: &F,
    prob: &DegreeProblem,
    rng: &mut R,
) -> Result<Option<u64>, OracleError> {
    let m = prob.rows.len();
    let nl = prob.weights.len();
    let (low, high) = degree_window(&prob.weights, m);
    let npts = (high - low + 1) as usize;
    if ef.size() <= 4 * npts as u128 {
        return Err(OracleError::QfieldTooSmall {
            size: ef.size(),
            needed: 4 * npts as u128,
        });
    }
    let p = prob.base;
    // Skew blocks a_v a_v̄ᵀ − a_v̄ a_vᵀ of each line, embedded in the field.
    let blocks: Vec<Vec<F::E>> = (0..nl)
        .map(|k| {
            let mut s = Vec::with_capacity(m * m);
            for i in 0..m {
                for j in 0..m {
                    let x = p.mul(prob.rows[i][2 * k], prob.rows[j][2 * k + 1]);
                    let y = p.mul(prob.rows[i][2 * k + 1], prob.rows[j][2 * k]);
                    s.push(ef.from_base(p.sub(x, y)));
                }
            }
            s
        })
        .collect();
    let tau: Vec<F::E> = (0..nl).map(|_| ef.random_nonzero(rng)).collect();
    let tau_inv: Vec<F::E> = tau.iter().map(|&t| ef.inv(t)).collect();
    let tau_sq = tau
        .iter()
        .fold(ef.one(), |acc, &t| ef.mul(acc, ef.mul(t, t)));
    let total: u64 = prob.weights.iter().sum();
    let wmax = prob.weights.iter().copied().max().unwrap_or(0) as usize;
    // Geometric evaluation points g, g², …, which must be pairwise distinct.
    let g = loop {
        let g = ef.random_nonzero(rng);
        let mut seen = HashSet::with_capacity(npts);
        let mut x = g;
        let mut ok = true;
        for _ in 0..npts {
            if !seen.insert(x) {
                ok = false;
                break;
            }
            x = ef.mul(x, g);
        }
        if ok {
            break g;
        }
    };
    let mut values = Vec::with_capacity(npts);
    let mut x = g;
    for _ in 0..npts {
        // det Φ(x) = det D(x) · det(A D(x)⁻¹ Aᵀ) with
        // det D(x) = Π τ² x^{2w} and A D⁻¹ Aᵀ = Σ (τ x^w)⁻¹ (a_v a_v̄ᵀ − a_v̄ a_vᵀ).
        let xinv = ef.inv(x);
        let mut pw = Vec::with_capacity(wmax + 1);
        pw.push(ef.one());
        for w in 1..=wmax {
            pw.push(ef.mul(pw[w - 1], xinv));
        }
        let mut mat = vec![ef.zero(); m * m];
        for k in 0..nl {
            let c = ef.mul(tau_inv[k], pw[prob.weights[k] as usize]);
            for (e, &s) in mat.iter_mut().zip(&blocks[k]) {
                if !ef.is_zero(s) {
                    *e = ef.add(*e, ef.mul(c, s));
                }
            }
        }
        let d = ext_determinant(ef, m, mat);
        let scale = ef.mul(tau_sq, ef.pow(x, (2 * total - low) as u128));
        values.push(ef.mul(d, scale));
        x = ef.mul(x, g);
    }
    // Newton divided differences; x_i − x_j = g^{j+1} (g^{i−j} − 1).
    let ginv = ef.inv(g);
    let mut ginv_pow = Vec::with_capacity(npts + 1);
    ginv_pow.push(ef.one());
    for j in 1..=npts {
        ginv_pow.push(ef.mul(ginv_pow[j - 1], ginv));
    }
    let mut gd = g;
    let mut diff_inv = vec![ef.zero(); npts];
    for slot in diff_inv.iter_mut().skip(1) {
        *slot = ef.inv(ef.sub(gd, ef.one()));
        gd = ef.mul(gd, g);
    }
    let mut c = values;
    for level in 1..npts {
        for i in (level..npts).rev() {
            let j = i - level;
            let num = ef.sub(c[i], c[i - 1]);
            let inv = ef.mul(ginv_pow[j + 1], diff_inv[level]);
            c[i] = ef.mul(num, inv);
        }
    }
    Ok(c.iter()
        .rposition(|&v| !ef.is_zero(v))
        .map(|d| d as u64 + low))
}

fn ext_determinant<F: EvalField>(ef: &F, k: usize, mut a: Vec<F::E>) -> F::E {
    let mut det = ef.one();
    for c in 0..k {
        let Some(piv) = (c..k).find(|&i| !ef.is_zero(a[i * k + c])) else {
            return ef.zero();
        };
        if piv != c {
            for j in 0..k {
                a.swap(piv * k + j, c * k + j);
            }
            det = ef.sub(ef.zero(), det);
        }
        let pv = a[c * k + c];
        det = ef.mul(det, pv);
        let inv = ef.inv(pv);
        for i in c + 1..k {
            let fct = a[i * k + c];
            if ef.is_zero(fct) {
                continue;
            }
            let g = ef.mul(fct, inv);
            for j in c..k {
                a[i * k + j] = ef.sub(a[i * k + j], ef.mul(g, a[c * k + j]));
            }
        }
    }
    det
}

/// Evaluates `det Φ_A(θ)` at one point by expanding the full `(m+n)`-order
/// matrix; used to cross-check the block elimination of the oracle.
pub fn det_phi_direct(inst: &Instance, tau: &[u64], theta: u64) -> u64 {
    let f = inst.field();
    let (m, n) = (inst.m(), inst.n());
    let size = m + n;
    let mut phi = vec![0u64; size * size];
    for i in 0..m {
        for j in 0..n {
            let a = inst.matrix().get(i, j);
            phi[i * size + m + j] = a;
            phi[(m + j) * size + i] = f.neg(a);
        }
    }
    for (k, w) in inst.weights().iter().enumerate() {
        let w = w.numer().to_u64().expect("nonnegative integer weight");
        let t = f.mul(tau[k], f.pow(theta, w));
        let (v, vb) = (m + 2 * k, m + 2 * k + 1);
        phi[v * size + vb] = f.neg(t);
        phi[vb * size + v] = t;
    }
    determinant(f, size, &phi)
}

/// Evaluates `det Φ_A(θ)` at one point through the Schur complement of the
/// weight block, the same route the oracle uses.
pub fn det_phi_schur(inst: &Instance, tau: &[u64], theta: u64) -> u64 {
    let f = inst.field();
    let ef = PrimeEval(f);
    let m = inst.m();
    let mut mat = vec![0u64; m * m];
    let mut det_d = 1u64;
    for (k, w) in inst.weights().iter().enumerate() {
        let w = w.numer().to_u64().expect("nonnegative integer weight");
        let t = f.mul(tau[k], f.pow(theta, w));
        det_d = f.mul(det_d, f.mul(t, t));
        let c = f.inv(t).expect("nonzero block");
        for i in 0..m {
            for j in 0..m {
                let a = inst.matrix();
                let s = f.sub(
                    f.mul(a.get(i, 2 * k), a.get(j, 2 * k + 1)),
                    f.mul(a.get(i, 2 * k + 1), a.get(j, 2 * k)),
                );
                mat[i * m + j] = f.add(mat[i * m + j], f.mul(c, s));
            }
        }
    }
    f.mul(det_d, ext_determinant(&ef, m, mat))
}

fn run_trials(
    prob: &DegreeProblem,
    trials: usize,
    min_size: u128,
    seed: u64,
) -> Result<Option<i64>, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = prob.base.modulus();
    let k = ext::extension_degree(p, min_size);
    let mut best: Option<u64> = None;
    for _ in 0..trials.max(1) {
        let d = if k == 1 {
            degree_trial(&PrimeEval(prob.base), prob, &mut rng)?
        } else if p == 2 {
            let poly = ext::random_irreducible(prob.base, k, &mut rng);
            let bits = poly
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &c)| acc | (c << i));
            degree_trial(&ext::Binary::new(k as u32, bits), prob, &mut rng)?
        } else {
            let poly = ext::random_irreducible(prob.base, k, &mut rng);
            degree_trial(&PolyExt::new(prob.base, &poly), prob, &mut rng)?
        };
        if let Some(d) = d {
            if d % 2 == 1 {
                return Err(OracleError::OddDegree(d));
            }
            best = Some(best.map_or(d, |b| b.max(d)));
        }
    }
    // Undo the weight shift: each of the (n−m)/2 lines outside a base gained `−shift`.
    let outside = (prob.weights.len() - prob.rows.len() / 2) as i64;
    Ok(best.map(|d| d as i64 / 2 + prob.shift * outside))
}

/// Randomized `deg_θ Pf Φ_A(θ)` for an instance over GF(p).
///
/// Evaluation happens in GF(p^k) for the smallest `k` with `p^k ≥ qfield`,
/// so small characteristics keep their own matroid. Returns `None` for an
/// identically vanishing Pfaffian (no parity base). The answer never exceeds
/// the true degree, and equals it unless every trial hits a root of the
/// leading coefficient.
pub fn pfaffian_degree(
    inst: &Instance,
    trials: usize,
    qfield: u64,
    seed: u64,
) -> Result<Option<i64>, OracleError> {
    let (weights, shift) = integer_weights(inst.weights())?;
    if inst.m() % 2 == 1 {
        return Ok(None);
    }
    let prob = DegreeProblem {
        rows: inst.rows(),
        weights,
        shift,
        base: inst.field(),
    };
    run_trials(&prob, trials, qfield as u128, seed)
}

/// Randomized `deg_θ Pf Φ_A(θ)` for an integer matrix, evaluated over the
/// prime field GF(`qfield`).
///
/// The prime must exceed the Hadamard-type bound `(mγ)^m` on all `m × m`
/// minors so that reduction modulo it preserves the matroid.
pub fn pfaffian_degree_integer(
    inst: &IntegerInstance,
    trials: usize,
    qfield: u64,
    seed: u64,
) -> Result<Option<i64>, OracleError> {
    let base = PrimeField::new(qfield).map_err(|_| OracleError::QfieldTooSmall {
        size: qfield as u128,
        needed: 0,
    })?;
    let m = inst.m();
    let bound = (BigInt::from(m as u64) * inst.gamma()).pow(m as u32);
    if bound >= BigInt::from(qfield) {
        return Err(OracleError::QfieldTooSmall {
            size: qfield as u128,
            needed: bound.to_u128().unwrap_or(u128::MAX),
        });
    }
    let (weights, shift) = integer_weights(&inst.weights)?;
    if m % 2 == 1 {
        return Ok(None);
    }
    let rows = inst
        .rows
        .iter()
        .map(|r| r.iter().map(|x| base.reduce_big(x)).collect())
        .collect();
    let prob = DegreeProblem {
        rows,
        weights,
        shift,
        base,
    };
    run_trials(&prob, trials, qfield as u128, seed)
}

/// Optimal weight predicted by the Pfaffian degree: `Σw − deg Pf`.
pub fn pfaffian_optimum(total_weight: &BigRational, degree: Option<i64>) -> Option<BigRational> {
    degree.map(|d| total_weight - BigRational::from_integer(BigInt::from(d)))
}

/// True if a value is a nonnegative integer (helper for callers building
/// direct Pfaffian evaluations).
pub fn is_nonnegative_integer(r: &BigRational) -> bool {
    r.denom().is_one() && !r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;
    use crate::instance::gen_random;

    #[test]
    fn subsets_enumerated_in_order() {
        let mut seen = Vec::new();
        for_each_subset(4, 2, |s| seen.push(s.to_vec()));
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        let mut count = 0;
        for_each_subset(3, 0, |_| count += 1);
        assert_eq!(count, 1);
        for_each_subset(2, 3, |_| panic!("no subsets"));
    }

    #[test]
    fn integer_determinants() {
        let d = integer_determinant(3, &[2, 0, 1, 1, 3, 2, 1, 1, 1].map(BigInt::from));
        assert_eq!(d, BigInt::from(2 + (1 - 3)));
        assert_eq!(
            integer_determinant(2, &[0, 1, 1, 0].map(BigInt::from)),
            BigInt::from(-1)
        );
    }

    #[test]
    fn identity_one_line() {
        let f = PrimeField::new(7).unwrap();
        let inst = Instance::new(f, &[vec![1, 0], vec![0, 1]], vec![rat(5)]).unwrap();
        assert_eq!(
            pfaffian_degree(&inst, 3, DEFAULT_QFIELD, 1).unwrap(),
            Some(0)
        );
        assert_eq!(
            brute_force(&inst).unwrap(),
            BruteForce::Optimal {
                weight: rat(5),
                lines: vec![0]
            }
        );
    }

    fn duplicated_unit_columns() -> Instance {
        let f = PrimeField::new(7).unwrap();
        Instance::new(
            f,
            &[vec![1, 1, 0, 0], vec![0, 0, 1, 1]],
            vec![rat(1), rat(2)],
        )
        .unwrap()
    }

    #[test]
    fn duplicated_columns_have_no_parity_base() {
        let inst = duplicated_unit_columns();
        assert_eq!(brute_force(&inst).unwrap(), BruteForce::Infeasible);
        assert_eq!(pfaffian_degree(&inst, 3, DEFAULT_QFIELD, 5).unwrap(), None);
    }

    #[test]
    fn identity_pfaffian_optimum_is_five() {
        let f = PrimeField::new(7).unwrap();
        let inst = Instance::new(f, &[vec![1, 0], vec![0, 1]], vec![rat(5)]).unwrap();
        let d = pfaffian_degree(&inst, 3, DEFAULT_QFIELD, 2).unwrap();
        assert_eq!(pfaffian_optimum(&inst.total_weight(), d), Some(rat(5)));
    }

    #[test]
    fn enumeration_size_cap() {
        let inst = gen_random(0, 2, 2 * (BRUTE_FORCE_MAX_LINES + 1), 7, 5).unwrap();
        assert_eq!(
            brute_force(&inst),
            Err(OracleError::TooLarge(BRUTE_FORCE_MAX_LINES + 1))
        );
    }

    #[test]
    fn fractional_weights_rejected_by_degree_oracle() {
        let f = PrimeField::new(7).unwrap();
        let inst = Instance::new(
            f,
            &[vec![1, 0], vec![0, 1]],
            vec![BigRational::new(1.into(), 2.into())],
        )
        .unwrap();
        assert_eq!(
            pfaffian_degree(&inst, 1, DEFAULT_QFIELD, 0),
            Err(OracleError::NonIntegerWeights)
        );
    }

    #[test]
    fn lexicographically_smallest_witness() {
        let f = PrimeField::new(7).unwrap();
        let inst = Instance::new(
            f,
            &[vec![1, 0, 1, 0], vec![0, 1, 0, 1]],
            vec![rat(4), rat(4)],
        )
        .unwrap();
        assert_eq!(
            brute_force(&inst).unwrap(),
            BruteForce::Optimal {
                weight: rat(4),
                lines: vec![0]
            }
        );
    }

    #[test]
    fn direct_and_schur_determinants_agree() {
        use rand::{Rng, SeedableRng};
        for seed in 0..40 {
            let inst = gen_random(seed, 4, 10, 10007, 6).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let tau: Vec<u64> = (0..5).map(|_| rng.gen_range(1..10007)).collect();
            let theta = rng.gen_range(1..10007);
            assert_eq!(
                det_phi_direct(&inst, &tau, theta),
                det_phi_schur(&inst, &tau, theta)
            );
        }
    }

    #[test]
    fn degree_matches_enumeration_over_prime_fields() {
        for seed in 0..60 {
            let p = [2, 3, 7, 10007][seed as usize % 4];
            let m = 2 + 2 * (seed as usize % 3);
            let inst = gen_random(seed, m, m + 4, p, 12).unwrap();
            let truth = brute_force(&inst).unwrap();
            let d = pfaffian_degree(&inst, DEFAULT_TRIALS, DEFAULT_QFIELD, seed).unwrap();
            assert_eq!(
                pfaffian_optimum(&inst.total_weight(), d).as_ref(),
                truth.weight(),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn negative_weights_are_shifted_back() {
        for seed in 0..20 {
            let base = gen_random(seed, 4, 10, 7, 9).unwrap();
            let rows = base.rows();
            let ws: Vec<BigRational> = base.weights().iter().map(|w| w - rat(5)).collect();
            let inst = Instance::new(base.field(), &rows, ws).unwrap();
            let truth = brute_force(&inst).unwrap();
            let d = pfaffian_degree(&inst, DEFAULT_TRIALS, DEFAULT_QFIELD, seed).unwrap();
            assert_eq!(
                pfaffian_optimum(&inst.total_weight(), d).as_ref(),
                truth.weight(),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn degree_matches_enumeration_over_rationals() {
        for seed in 0..30 {
            let inst = crate::instance::gen_random_integer(seed, 4, 10, 5, 20);
            let truth = brute_force_integer(&inst).unwrap();
            let d = pfaffian_degree_integer(&inst, DEFAULT_TRIALS, DEFAULT_QFIELD, seed).unwrap();
            let total: BigRational = inst.weights.iter().sum();
            assert_eq!(
                pfaffian_optimum(&total, d).as_ref(),
                truth.weight(),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn integer_degree_needs_a_large_prime() {
        let inst = crate::instance::gen_random_integer(0, 4, 8, 5, 3);
        assert!(matches!(
            pfaffian_degree_integer(&inst, 1, 10007, 0),
            Err(OracleError::QfieldTooSmall { .. })
        ));
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(40))]
        #[test]
        fn degree_never_exceeds_truth_with_one_trial(seed in 0u64..100_000) {
            let inst = gen_random(seed, 4, 10, 7, 20).unwrap();
            let truth = brute_force(&inst).unwrap();
            let d = pfaffian_degree(&inst, 1, DEFAULT_QFIELD, seed).unwrap();
            match (truth.weight(), d) {
                (None, d) => proptest::prop_assert_eq!(d, None),
                (Some(w), Some(d)) => proptest::prop_assert!(rat(d) <= inst.total_weight() - w),
                (Some(_), None) => {}
            }
        }
    }
}
