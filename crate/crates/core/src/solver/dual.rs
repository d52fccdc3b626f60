//! Dual updates after a search ends without an augmenting path.

use std::collections::HashMap;

use num_traits::{Signed, Zero};

use super::search::{Search, Sign};
use super::state::State;
use super::{SolveError, Stats};
use crate::field::BigRational;
use crate::linalg::VertexId;

/// Position of a vertex relative to the labels of a finished search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Class {
    /// Labeled, outside every blossom.
    ReachedPlus,
    /// Examined but unlabeled, outside every blossom.
    ReachedMinus,
    /// Inside a maximal ⊕ blossom.
    InPlus,
    /// Inside a maximal ⊖ blossom.
    InMinus,
    /// Untouched by the search.
    Other,
}

impl Class {
    fn plus(self) -> bool {
        matches!(self, Class::ReachedPlus | Class::InPlus)
    }
}

fn classify(st: &State, s: &Search) -> HashMap<VertexId, Class> {
    s.universe(st)
        .into_iter()
        .map(|x| {
            let c = match st.top_in(x, s.scope) {
                Some(h) => match s.sign.get(&h) {
                    Some(Sign::Plus) => Class::InPlus,
                    Some(Sign::Minus) => Class::InMinus,
                    None => Class::Other,
                },
                None if s.labeled(x) => Class::ReachedPlus,
                None if s.rho.contains_key(&x) => Class::ReachedMinus,
                None => Class::Other,
            };
            (x, c)
        })
        .collect()
}

fn min_opt(a: &mut Option<BigRational>, b: BigRational) {
    if a.as_ref().is_none_or(|x| b < *x) {
        *a = Some(b);
    }
}

/// The largest step keeping the duals feasible, or `None` if unbounded.
fn step(st: &State, s: &Search, class: &HashMap<VertexId, Class>) -> Option<BigRational> {
    let two = BigRational::from_integer(2.into());
    let mut eps: Option<BigRational> = None;
    let c = &st.c;
    for (i, &u) in c.row_labels().iter().enumerate() {
        let Some(&cu) = class.get(&u) else { continue };
        for (j, &v) in c.col_labels().iter().enumerate() {
            if c.get(i, j) == 0 {
                continue;
            }
            let Some(&cv) = class.get(&v) else { continue };
            let bound = if cu.plus() && cv.plus() {
                if s.group(st, u) == s.group(st, v) {
                    continue;
                }
                s.slack(st, u, v) / &two
            } else if (cu.plus() && cv == Class::Other) || (cu == Class::Other && cv.plus()) {
                s.slack(st, u, v)
            } else {
                continue;
            };
            min_opt(&mut eps, bound);
        }
    }
    for h in st.maximal_in(s.scope) {
        if s.sign.get(&h) == Some(&Sign::Minus) {
            min_opt(&mut eps, st.bl(h).q.clone());
        }
    }
    eps
}

/// Moves the duals of the whole instance. Returns `false` when the step is
/// unbounded, which proves that no parity base exists.
pub(crate) fn update(st: &mut State, s: &Search) -> Result<bool, SolveError> {
    let class = classify(st, s);
    let Some(eps) = step(st, s, &class) else {
        return Ok(false);
    };
    if eps.is_negative() || eps.is_zero() {
        return Err(SolveError::internal(format!(
            "non-positive dual step {eps}"
        )));
    }
    for (&x, &c) in &class {
        let up = match (c, st.in_base(x)) {
            (Class::ReachedPlus, true) | (Class::ReachedMinus, false) => true,
            (Class::ReachedPlus, false) | (Class::ReachedMinus, true) => false,
            _ => continue,
        };
        if up {
            st.vm(x).p += &eps;
        } else {
            st.vm(x).p -= &eps;
        }
    }
    for h in st.maximal_in(s.scope) {
        match s.sign.get(&h) {
            Some(Sign::Plus) => st.blossoms[h].q += &eps,
            Some(Sign::Minus) => st.blossoms[h].q -= &eps,
            None => {}
        }
    }
    Ok(true)
}

/// Expands maximal blossoms whose charge dropped to zero, repeatedly.
pub(crate) fn expand_zero_maximal(st: &mut State, stats: &mut Stats) -> Result<(), SolveError> {
    while let Some(h) = st
        .maximal_in(None)
        .into_iter()
        .find(|&h| st.bl(h).q.is_zero())
    {
        st.expand(h)?;
        stats.expansions += 1;
    }
    Ok(())
}

/// Dual update after a search confined to the blossom `s.scope`: moves the
/// tip of the scope, the charges of its maximal sub-blossoms and their buds,
/// and lowers the charge of the scope.
pub(crate) fn update_inside(st: &mut State, s: &Search) -> Result<(), SolveError> {
    let scope = s.scope.expect("search inside a blossom");
    let class = classify(st, s);
    let tip = st.bl(scope).tip.expect("normal");
    for (&x, &c) in &class {
        let expected = if x == tip || Some(x) == st.bl(scope).bud {
            c == Class::ReachedPlus
        } else {
            c == Class::InPlus || (c == Class::ReachedMinus && !st.is_column(x))
        };
        if !expected {
            return Err(SolveError::internal(format!(
                "search inside blossom {scope} left vertex {x} as {c:?}"
            )));
        }
    }
    let qs = st.bl(scope).q.clone();
    let eps = match step(st, s, &class) {
        Some(e) if e < qs => e,
        _ => qs,
    };
    if !eps.is_positive() {
        return Err(SolveError::internal(format!(
            "non-positive inner dual step {eps}"
        )));
    }
    if st.in_base(tip) {
        st.vm(tip).p += &eps;
    } else {
        st.vm(tip).p -= &eps;
    }
    st.blossoms[scope].q -= &eps;
    for h in st.maximal_in(Some(scope)) {
        st.blossoms[h].q += &eps;
        let b = st
            .bl(h)
            .bud
            .expect("sub-blossoms of a normal blossom are normal");
        if st.in_base(b) {
            st.vm(b).p -= &eps;
        } else {
            st.vm(b).p += &eps;
        }
    }
    Ok(())
}
