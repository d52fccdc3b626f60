//! Augmentation along a path and the rebuilding of routings afterwards.

use std::collections::HashSet;

use num_traits::{Signed, Zero};

use super::checks;
use super::dual;
use super::search::Search;
use super::state::{BlossomId, State};
use super::{SolveError, Stats};
use crate::certificate::CheckMode;
use crate::field::BigRational;
use crate::linalg::VertexId;

fn err<T>(msg: impl Into<String>) -> Result<T, SolveError> {
    Err(SolveError::internal(msg))
}

/// A perfect matching of tight edges on `set`, as `(row, column)` pairs.
pub(crate) fn tight_matching(st: &State, set: &[VertexId]) -> Option<Vec<(VertexId, VertexId)>> {
    let rows: Vec<VertexId> = set.iter().copied().filter(|&x| st.in_base(x)).collect();
    let cols: Vec<VertexId> = set.iter().copied().filter(|&x| !st.in_base(x)).collect();
    if rows.len() != cols.len() {
        return None;
    }
    let adj: Vec<Vec<usize>> = rows
        .iter()
        .map(|&r| {
            (0..cols.len())
                .filter(|&j| st.tight_in(r, cols[j], None))
                .collect()
        })
        .collect();
    let mut mate_col: Vec<Option<usize>> = vec![None; cols.len()];
    fn try_row(
        i: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        mate_col: &mut [Option<usize>],
    ) -> bool {
        for &j in &adj[i] {
            if seen[j] {
                continue;
            }
            seen[j] = true;
            if mate_col[j].is_none_or(|k| try_row(k, adj, seen, mate_col)) {
                mate_col[j] = Some(i);
                return true;
            }
        }
        false
    }
    for i in 0..rows.len() {
        let mut seen = vec![false; cols.len()];
        if !try_row(i, &adj, &mut seen, &mut mate_col) {
            return None;
        }
    }
    Some(
        mate_col
            .iter()
            .enumerate()
            .map(|(j, i)| (rows[i.expect("perfect")], cols[j]))
            .collect(),
    )
}

/// Blossoms sorted so that every blossom precedes those containing it.
fn inner_first(st: &State, mut hs: Vec<BlossomId>) -> Vec<BlossomId> {
    hs.sort_by_key(|&h| (st.members(h).len(), h));
    hs
}

/// Flips the base along `path`. Returns the positive blossoms met by the
/// path, inner first; each must be rerouted and expanded afterwards.
pub(crate) fn augment(
    st: &mut State,
    path: &[VertexId],
    stats: &mut Stats,
) -> Result<Vec<BlossomId>, SolveError> {
    let pset: HashSet<VertexId> = path.iter().copied().collect();
    let meets = |st: &State, h: BlossomId| st.members(h).iter().any(|x| pset.contains(x));
    let exposed = |st: &State, h: BlossomId| {
        let mut up = st.bl(h).parent;
        while let Some(g) = up {
            if !meets(st, g) {
                return false;
            }
            up = st.bl(g).parent;
        }
        true
    };
    loop {
        let next = st
            .alive_blossoms()
            .find(|&h| st.bl(h).q.is_zero() && !meets(st, h) && exposed(st, h));
        let Some(h) = next else { break };
        st.expand(h)?;
        stats.expansions += 1;
    }
    let met: Vec<BlossomId> = st.alive_blossoms().filter(|&h| meets(st, h)).collect();
    let positive = inner_first(
        st,
        met.iter()
            .copied()
            .filter(|&h| st.bl(h).q.is_positive())
            .collect(),
    );
    let Some(matching) = tight_matching(st, path) else {
        return err("augmenting path has no tight perfect matching");
    };

    let mut hats = Vec::new();
    for &h in &positive {
        let crossing: Vec<(VertexId, VertexId)> = matching
            .iter()
            .filter_map(|&(a, b)| match (st.contains(h, a), st.contains(h, b)) {
                (true, false) => Some((a, b)),
                (false, true) => Some((b, a)),
                _ => None,
            })
            .collect();
        let [(x, y)] = crossing[..] else {
            return err(format!(
                "blossom {h} crossed by {} matching edges",
                crossing.len()
            ));
        };
        let parent = st.bl(h).parent;
        let bh = st.fresh(BigRational::zero(), parent);
        let th = st.fresh(BigRational::zero(), Some(h));
        let inside = |st: &State, z: VertexId| st.contains(h, z);
        if st.in_base(x) && !st.in_base(y) {
            st.c.push_row(bh)?;
            st.c.push_col(th)?;
            for z in st.c.col_labels().to_vec() {
                if z != th && !inside(st, z) {
                    let e = st.c.entry(x, z).unwrap_or(0);
                    st.c.set_entry(bh, z, e)?;
                }
            }
            for z in st.c.row_labels().to_vec() {
                if z != bh && inside(st, z) {
                    let e = st.c.entry(z, y).unwrap_or(0);
                    st.c.set_entry(z, th, e)?;
                }
            }
            st.vm(bh).p = st.p(y) - st.q_between(bh, y);
            st.vm(th).p = st.p(x) + st.q_between(x, th);
        } else if !st.in_base(x) && st.in_base(y) {
            st.c.push_row(th)?;
            st.c.push_col(bh)?;
            for z in st.c.row_labels().to_vec() {
                if z != th && !inside(st, z) {
                    let e = st.c.entry(z, x).unwrap_or(0);
                    st.c.set_entry(z, bh, e)?;
                }
            }
            for z in st.c.col_labels().to_vec() {
                if z != bh && inside(st, z) {
                    let e = st.c.entry(y, z).unwrap_or(0);
                    st.c.set_entry(th, z, e)?;
                }
            }
            st.vm(bh).p = st.p(y) + st.q_between(bh, y);
            st.vm(th).p = st.p(x) - st.q_between(x, th);
        } else {
            return err("matching edge inside one side of the base");
        }
        hats.push((h, bh, th));
    }

    let mut pstar: Vec<VertexId> = path.to_vec();
    for &(_, b, t) in &hats {
        pstar.extend([b, t]);
    }
    st.pivot(&pstar)?;

    for &h in met.iter().rev() {
        if !st.bl(h).q.is_positive() {
            st.dissolve(h)?;
        }
    }
    for &(h, b, t) in &hats {
        if let (Some(ob), Some(ot)) = (st.bl(h).bud, st.bl(h).tip) {
            st.kill(ob)?;
            st.kill(ot)?;
        }
        st.set_bud_tip(h, b, t);
    }

    for sweep in [positive.clone(), positive.iter().rev().copied().collect()] {
        let mut fresh = Vec::new();
        for h in sweep {
            fresh.push((h, replace_pair(st, h)?));
        }
        for (h, (b2, t2)) in fresh {
            let ob = st.bl(h).bud.expect("normal");
            let ot = st.bl(h).tip.expect("normal");
            st.kill(ob)?;
            st.kill(ot)?;
            st.set_bud_tip(h, b2, t2);
        }
    }
    loop {
        let next = st
            .alive_blossoms()
            .find(|&h| !positive.contains(&h) && bud_leaks(st, h));
        let Some(h) = next else { break };
        let ob = st.bl(h).bud.expect("normal");
        let ot = st.bl(h).tip.expect("normal");
        let (b2, t2) = replace_pair(st, h)?;
        st.kill(ob)?;
        st.kill(ot)?;
        st.set_bud_tip(h, b2, t2);
        st.rename(&[(ob, b2), (ot, t2)]);
    }
    Ok(positive)
}

/// True if the bud of the normal blossom `h` has an `F*` edge into `h`
/// other than to its tip.
fn bud_leaks(st: &State, h: BlossomId) -> bool {
    let (Some(b), Some(t)) = (st.bl(h).bud, st.bl(h).tip) else {
        return false;
    };
    st.neighbors(b)
        .into_iter()
        .any(|y| y != t && st.contains(h, y))
}

/// Introduces a replacement bud/tip pair for `h` and pivots both pairs.
fn replace_pair(st: &mut State, h: BlossomId) -> Result<(VertexId, VertexId), SolveError> {
    let b = st.bl(h).bud.expect("normal");
    let t = st.bl(h).tip.expect("normal");
    let parent = st.bl(h).parent;
    let b2 = st.fresh(BigRational::zero(), parent);
    let t2 = st.fresh(BigRational::zero(), Some(h));
    let inside = |st: &State, z: VertexId| st.contains(h, z);
    match (st.in_base(b), st.in_base(t)) {
        (true, false) => {
            st.c.push_row(t2)?;
            st.c.push_col(b2)?;
            for z in st.c.row_labels().to_vec() {
                if z != t2 && !inside(st, z) {
                    let e = st.c.entry(z, t).unwrap_or(0);
                    st.c.set_entry(z, b2, e)?;
                }
            }
            for z in st.c.col_labels().to_vec() {
                if z != b2 && inside(st, z) {
                    let e = st.c.entry(b, z).unwrap_or(0);
                    st.c.set_entry(t2, z, e)?;
                }
            }
            st.vm(b2).p = st.p(t) - st.q_between(b2, t);
            st.vm(t2).p = st.p(b) + st.q_between(b, t2);
        }
        (false, true) => {
            st.c.push_row(b2)?;
            st.c.push_col(t2)?;
            for z in st.c.col_labels().to_vec() {
                if z != t2 && !inside(st, z) {
                    let e = st.c.entry(t, z).unwrap_or(0);
                    st.c.set_entry(b2, z, e)?;
                }
            }
            for z in st.c.row_labels().to_vec() {
                if z != b2 && inside(st, z) {
                    let e = st.c.entry(z, b).unwrap_or(0);
                    st.c.set_entry(z, t2, e)?;
                }
            }
            st.vm(b2).p = st.p(t) + st.q_between(b2, t);
            st.vm(t2).p = st.p(b) - st.q_between(b, t2);
        }
        _ => {
            return err(format!(
                "bud and tip of blossom {h} on the same side of the base"
            ))
        }
    }
    st.pivot(&[b, t, b2, t2])?;
    Ok((b2, t2))
}

/// Rebuilds routings inside `h` by repeated confined searches, moving its
/// charge onto the blossoms found inside, then expands `h`.
pub(crate) fn reroute(
    st: &mut State,
    h: BlossomId,
    stats: &mut Stats,
    check: bool,
) -> Result<(), SolveError> {
    while st.bl(h).q.is_positive() {
        while let Some(g) = st
            .maximal_in(Some(h))
            .into_iter()
            .find(|&g| st.bl(g).q.is_zero())
        {
            st.expand(g)?;
            stats.expansions += 1;
        }
        let mut s = Search::new(Some(h), check);
        if s.run(st, stats)?.is_some() {
            return err(format!("augmenting path found inside blossom {h}"));
        }
        dual::update_inside(st, &s)?;
        stats.inner_dual_updates += 1;
        if check {
            checks::state_in(st, CheckMode::Rebuild)?;
        }
    }
    st.expand(h)?;
    stats.expansions += 1;
    Ok(())
}
