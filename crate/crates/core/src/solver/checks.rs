//! Runtime invariant checks, enabled by [`super::SolveOptions::check_invariants`].
//!
//! The state checks reuse the certificate verifier in live mode. Routing and
//! path checks enumerate tight perfect matchings and are only run on small
//! vertex sets.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_traits::Signed;

use super::state::{BlossomId, State};
use super::SolveError;
use crate::certificate::{
    check, check_keyodd, check_tight_matchings, BlossomKind, CheckMode, KeyOddError, Rejection, Tag,
};
use crate::linalg::VertexId;

/// Largest vertex set on which matchings are enumerated.
const ENUM_LIMIT: usize = 16;
/// Largest universe on which the odd-crossing inequality is checked exhaustively.
const KEYODD_LIMIT: usize = 10;

fn violated<T>(tag: Tag, detail: String) -> Result<T, SolveError> {
    Err(SolveError::Invariant(Rejection { tag, detail }))
}

fn internal<T>(msg: String) -> Result<T, SolveError> {
    Err(SolveError::Internal(msg))
}

/// Checks feasibility, the bud/tip structure and laminarity of the state.
pub(crate) fn state(st: &State) -> Result<(), SolveError> {
    state_in(st, CheckMode::Live)
}

/// As [`state`], with the given checker mode.
pub(crate) fn state_in(st: &State, mode: CheckMode) -> Result<(), SolveError> {
    let cert = st.to_certificate();
    check(st.inst, &cert, mode).map_err(SolveError::Invariant)?;
    let all: Vec<VertexId> = cert.vstar.iter().copied().collect();
    if all.len() <= KEYODD_LIMIT {
        for mask in 1u32..(1 << all.len()) {
            let x: Vec<VertexId> = (0..all.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| all[i])
                .collect();
            match check_keyodd(&cert, &x) {
                Ok(true) | Err(KeyOddError::Singular) => {}
                Ok(false) => {
                    return violated(Tag::DF2, format!("odd-crossing inequality fails on {x:?}"))
                }
                Err(e) => return internal(e.to_string()),
            }
            match check_tight_matchings(&cert, &x) {
                Ok(true) => {}
                Ok(false) => {
                    return internal(format!(
                        "{x:?} has both tight and non-tight perfect matchings"
                    ))
                }
                Err(e) => return internal(e.to_string()),
            }
        }
    }
    Ok(())
}

/// Number of tight perfect matchings of `set`, capped at `cap`.
pub(crate) fn count_tight_matchings(st: &State, set: &[VertexId], cap: usize) -> usize {
    let positive: Vec<BlossomId> = st
        .alive_blossoms()
        .filter(|&h| st.bl(h).q.is_positive())
        .collect();
    let inside: HashMap<VertexId, Vec<bool>> = set
        .iter()
        .map(|&x| (x, positive.iter().map(|&h| st.contains(h, x)).collect()))
        .collect();
    let mut adj: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
    for &a in set {
        let nb = set
            .iter()
            .copied()
            .filter(|&b| b != a && st.tight_in(a, b, None))
            .collect();
        adj.insert(a, nb);
    }
    fn go(
        free: &mut BTreeSet<VertexId>,
        adj: &HashMap<VertexId, Vec<VertexId>>,
        inside: &HashMap<VertexId, Vec<bool>>,
        crossing: &mut [u8],
        cap: usize,
    ) -> usize {
        let Some(&a) = free.iter().next() else {
            return 1;
        };
        free.remove(&a);
        let mut total = 0;
        for &b in &adj[&a] {
            if !free.contains(&b) {
                continue;
            }
            let cross: Vec<usize> = (0..crossing.len())
                .filter(|&k| inside[&a][k] != inside[&b][k])
                .collect();
            if cross.iter().any(|&k| crossing[k] >= 1) {
                continue;
            }
            for &k in &cross {
                crossing[k] += 1;
            }
            free.remove(&b);
            total += go(free, adj, inside, crossing, cap - total);
            free.insert(b);
            for &k in &cross {
                crossing[k] -= 1;
            }
            if total >= cap {
                break;
            }
        }
        free.insert(a);
        total
    }
    let mut free: BTreeSet<VertexId> = set.iter().copied().collect();
    let mut crossing = vec![0u8; positive.len()];
    go(&mut free, &adj, &inside, &mut crossing, cap)
}

/// Checks the routing properties of blossom `h`.
pub(crate) fn routing(st: &State, h: BlossomId) -> Result<(), SolveError> {
    let bl = st.bl(h);
    let members: HashSet<VertexId> = st.members(h).into_iter().collect();
    let minus: HashSet<VertexId> = st.h_minus(h).into_iter().collect();
    let rank: HashMap<VertexId, usize> =
        bl.order.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let positive: Vec<BlossomId> = st
        .alive_blossoms()
        .filter(|&g| st.bl(g).q.is_positive())
        .collect();
    for (&x, route) in &bl.routes {
        let rset: HashSet<VertexId> = route.iter().copied().collect();
        if !rset.contains(&x) || !rset.iter().all(|y| members.contains(y)) {
            return internal(format!(
                "blossom {h}: routing of {x} leaves the blossom or misses {x}"
            ));
        }
        let head = route[0];
        let head_ok = match bl.kind {
            BlossomKind::Normal => Some(head) == bl.tip,
            BlossomKind::Source => st.is_source_line(head),
        };
        let unpaired: Vec<VertexId> = route
            .iter()
            .copied()
            .filter(|y| !rset.contains(&st.mate(*y)))
            .collect();
        if !head_ok || unpaired != [head] {
            return internal(format!(
                "blossom {h}: routing of {x} is not lines plus its head"
            ));
        }
        for g in st.alive_blossoms() {
            let (Some(bg), Some(tg)) = (st.bl(g).bud, st.bl(g).tip) else {
                continue;
            };
            if g == h || !st.contains(h, tg) {
                continue;
            }
            if route.iter().any(|&y| st.contains(g, y))
                && !(rset.contains(&bg) && rset.contains(&tg))
            {
                return internal(format!(
                    "blossom {h}: routing of {x} enters blossom {g} without its pair"
                ));
            }
        }
        if route.len() > ENUM_LIMIT {
            continue;
        }
        let rest: Vec<VertexId> = route.iter().copied().filter(|&y| y != x).collect();
        if count_tight_matchings(st, &rest, 2) != 1 {
            return internal(format!(
                "blossom {h}: routing of {x} minus {x} lacks a unique tight matching"
            ));
        }
        if !minus.contains(&x) {
            continue;
        }
        let Some(&rx) = rank.get(&x) else {
            return internal(format!("blossom {h}: {x} has a routing but no rank"));
        };
        let cands: Vec<VertexId> = route
            .iter()
            .copied()
            .filter(|z| minus.contains(z) && rank.get(z).is_some_and(|&r| r >= rx))
            .collect();
        for mask in 1u32..(1 << cands.len()) {
            let z: Vec<VertexId> = (0..cands.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| cands[i])
                .collect();
            if z == [x] || z.len().is_multiple_of(2) {
                continue;
            }
            if positive
                .iter()
                .any(|&g| z.iter().filter(|&&y| st.contains(g, y)).count() > 1)
            {
                continue;
            }
            let left: Vec<VertexId> = route.iter().copied().filter(|y| !z.contains(y)).collect();
            if count_tight_matchings(st, &left, 1) != 0 {
                return internal(format!(
                    "blossom {h}: routing of {x} minus {z:?} has a tight matching"
                ));
            }
        }
    }
    Ok(())
}

/// Checks that `path` is an augmenting path.
pub(crate) fn augmenting_path(st: &State, path: &[VertexId]) -> Result<(), SolveError> {
    let pset: HashSet<VertexId> = path.iter().copied().collect();
    if pset.len() != path.len() {
        return internal("augmenting path repeats a vertex".into());
    }
    let unpaired: Vec<VertexId> = path
        .iter()
        .copied()
        .filter(|y| !pset.contains(&st.mate(*y)))
        .collect();
    let ok = unpaired.len() == 2
        && unpaired.iter().all(|&y| st.is_source_line(y))
        && unpaired[0].min(st.mate(unpaired[0])) != unpaired[1].min(st.mate(unpaired[1]));
    if !ok {
        return internal("augmenting path is not lines plus two source vertices".into());
    }
    for h in st.alive_blossoms() {
        let inter: BTreeSet<VertexId> = path
            .iter()
            .copied()
            .filter(|&y| st.contains(h, y))
            .collect();
        if inter.is_empty() {
            continue;
        }
        let matches = st
            .bl(h)
            .routes
            .values()
            .any(|r| r.iter().copied().collect::<BTreeSet<_>>() == inter);
        if !matches {
            return internal(format!(
                "augmenting path meets blossom {h} outside any routing"
            ));
        }
    }
    if path.len() <= ENUM_LIMIT + 4 && count_tight_matchings(st, path, 2) != 1 {
        return internal("augmenting path lacks a unique tight perfect matching".into());
    }
    Ok(())
}
