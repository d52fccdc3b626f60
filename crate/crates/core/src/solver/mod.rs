//! The primal–dual algorithm for minimum-weight parity bases.
//!
//! The solver keeps a base of an extended matroid on `V*` (instance columns
//! plus bud/tip vertices of blossoms) as the fundamental cocircuit matrix
//! `C*`, together with potentials on `V*` and charges on blossoms. Each round
//! either finds an augmenting path and flips the base along it, or moves the
//! duals. When no line is split by the base, the columns in the base form a
//! minimum-weight parity base and the final state is emitted as a
//! [`Certificate`].

mod augment;
mod checks;
mod dual;
mod order;
mod search;
mod state;

use num_traits::Zero;
use thiserror::Error;

use crate::certificate::{verify, Certificate, Rejection};
use crate::field::{ops, BigRational};
use crate::instance::Instance;
use crate::linalg::{LinalgError, VertexId};

use search::Search;
use state::State;

/// Failure of the solver itself (never a property of the instance).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    /// A step of the algorithm met a state its invariants rule out.
    #[error("internal error: {0}")]
    Internal(String),
    /// A maintained invariant was found violated by the runtime checker.
    #[error("invariant violated: {0}")]
    Invariant(Rejection),
    /// Matrix operation failed.
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    /// The iteration guard tripped.
    #[error("iteration limit of {0} rounds exceeded")]
    IterationLimit(u64),
}

impl SolveError {
    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        SolveError::Internal(msg.into())
    }
}

/// Counters collected during a run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stats {
    /// Augmentations performed.
    pub augmentations: u64,
    /// Dual updates in the outer loop.
    pub dual_updates: u64,
    /// Dual updates inside blossoms after augmentations.
    pub inner_dual_updates: u64,
    /// Largest number of outer dual updates between two augmentations.
    pub max_dual_updates_per_augmentation: u64,
    /// Blossoms created (including by grafting).
    pub blossoms_created: u64,
    /// Grafting steps.
    pub grafts: u64,
    /// Blossom expansions.
    pub expansions: u64,
    /// Field operations charged by matrix routines.
    pub field_ops: u64,
    /// Largest size of the extended universe seen.
    pub max_universe: usize,
}

/// Tuning and debugging switches.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Re-check all maintained invariants after every step. Slow.
    pub check_invariants: bool,
    /// Upper bound on outer rounds before giving up.
    pub max_rounds: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            check_invariants: false,
            max_rounds: 1_000_000,
        }
    }
}

impl SolveOptions {
    /// Options with every runtime invariant check enabled.
    pub fn checked() -> Self {
        SolveOptions {
            check_invariants: true,
            ..Self::default()
        }
    }
}

/// An optimal parity base together with its witness.
#[derive(Debug, Clone)]
pub struct Solution {
    /// Line indices of the base, ascending.
    pub lines: Vec<usize>,
    /// Total weight of those lines.
    pub weight: BigRational,
    /// Optimality certificate for the base.
    pub certificate: Certificate,
    /// Counters.
    pub stats: Stats,
}

/// Result of a solve.
#[derive(Debug, Clone)]
pub enum Outcome {
    /// A minimum-weight parity base.
    Optimal(Solution),
    /// The instance has no parity base.
    Infeasible(Stats),
}

impl Outcome {
    /// The optimal weight, or `None` when infeasible.
    pub fn weight(&self) -> Option<&BigRational> {
        match self {
            Outcome::Optimal(s) => Some(&s.weight),
            Outcome::Infeasible(_) => None,
        }
    }

    /// Counters of the run.
    pub fn stats(&self) -> &Stats {
        match self {
            Outcome::Optimal(s) => &s.stats,
            Outcome::Infeasible(s) => s,
        }
    }
}

/// Solves `inst` with default options.
pub fn solve(inst: &Instance) -> Result<Outcome, SolveError> {
    solve_with(inst, &SolveOptions::default())
}

/// Solves `inst`.
pub fn solve_with(inst: &Instance, opts: &SolveOptions) -> Result<Outcome, SolveError> {
    let ops_start = ops::read();
    let mut stats = Stats::default();
    if inst.parity_infeasible() {
        return Ok(Outcome::Infeasible(stats));
    }
    let mut st = State::new(inst)?;
    stats.max_universe = st.alive().count();
    let mut since_aug = 0u64;
    let mut rounds = 0u64;
    if opts.check_invariants {
        checks::state(&st)?;
    }
    while st.has_source_line() {
        rounds += 1;
        if rounds > opts.max_rounds {
            return Err(SolveError::IterationLimit(opts.max_rounds));
        }
        let mut search = Search::new(None, opts.check_invariants);
        match search.run(&mut st, &mut stats)? {
            Some(path) => {
                if opts.check_invariants {
                    checks::augmenting_path(&st, &path)?;
                }
                let positive = augment::augment(&mut st, &path, &mut stats)?;
                if opts.check_invariants {
                    checks::state(&st)?;
                    let kept: Vec<_> = st
                        .alive_blossoms()
                        .filter(|h| !positive.contains(h))
                        .collect();
                    for h in kept {
                        checks::routing(&st, h)?;
                    }
                }
                for h in positive {
                    augment::reroute(&mut st, h, &mut stats, opts.check_invariants)?;
                }
                stats.augmentations += 1;
                since_aug = 0;
            }
            None => {
                if !dual::update(&mut st, &search)? {
                    stats.field_ops = ops::read() - ops_start;
                    return Ok(Outcome::Infeasible(stats));
                }
                dual::expand_zero_maximal(&mut st, &mut stats)?;
                stats.dual_updates += 1;
                since_aug += 1;
                stats.max_dual_updates_per_augmentation =
                    stats.max_dual_updates_per_augmentation.max(since_aug);
            }
        }
        stats.max_universe = stats.max_universe.max(st.alive().count());
        if opts.check_invariants {
            checks::state(&st)?;
        }
    }
    let certificate = st.to_certificate();
    if opts.check_invariants {
        if let Some(r) = verify(inst, &certificate).rejection() {
            return Err(SolveError::Invariant(r));
        }
    }
    let lines: Vec<usize> = (0..inst.num_lines())
        .filter(|&k| st.in_base(VertexId(2 * k as u32)))
        .collect();
    let mut weight = BigRational::zero();
    for &k in &lines {
        weight += &inst.weights()[k];
    }
    stats.field_ops = ops::read() - ops_start;
    Ok(Outcome::Optimal(Solution {
        lines,
        weight,
        certificate,
        stats,
    }))
}
