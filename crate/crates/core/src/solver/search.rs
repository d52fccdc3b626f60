//! Breadth-first search for augmenting paths, creating and grafting
//! blossoms along the way.
//!
//! A search runs either on the whole universe or inside one normal blossom
//! (its *scope*), where the bud/tip pair of that blossom acts as the only
//! source line and only blossoms strictly inside it are visible.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use num_traits::{Signed, Zero};

use super::checks;
use super::order::Order;
use super::state::{BlossomId, Role, State};
use super::{SolveError, Stats};
use crate::certificate::{BlossomKind, CheckMode};
use crate::field::BigRational;
use crate::linalg::VertexId;

/// Label carried by a blossom during a search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Sign {
    Plus,
    Minus,
}

/// The component of the current partition containing a vertex: a line, or
/// a maximal blossom together with its bud.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Group {
    Line(VertexId),
    Blossom(BlossomId),
}

#[derive(Debug, Clone)]
pub(crate) struct Search {
    pub scope: Option<BlossomId>,
    pub path: HashMap<VertexId, Vec<VertexId>>,
    pub rho: HashMap<VertexId, VertexId>,
    pub sign: HashMap<BlossomId, Sign>,
    queue: VecDeque<VertexId>,
    order: Order,
    checks: bool,
}

fn err<T>(msg: impl Into<String>) -> Result<T, SolveError> {
    Err(SolveError::internal(msg))
}

/// Suffix of `p` after the first occurrence of `x` (exclusive).
fn after(p: &[VertexId], x: VertexId) -> Result<&[VertexId], SolveError> {
    match p.iter().position(|&y| y == x) {
        Some(i) => Ok(&p[i + 1..]),
        None => err(format!("vertex {x} missing from a search path")),
    }
}

impl Search {
    pub fn new(scope: Option<BlossomId>, checks: bool) -> Self {
        Search {
            scope,
            path: HashMap::new(),
            rho: HashMap::new(),
            sign: HashMap::new(),
            queue: VecDeque::new(),
            order: Order::default(),
            checks,
        }
    }

    fn check_mode(&self) -> CheckMode {
        match self.scope {
            None => CheckMode::Live,
            Some(_) => CheckMode::Rebuild,
        }
    }

    pub fn labeled(&self, x: VertexId) -> bool {
        self.path.contains_key(&x)
    }

    pub fn group(&self, st: &State, x: VertexId) -> Group {
        if let Some(h) = st.top_in(x, self.scope) {
            return Group::Blossom(h);
        }
        if let Role::Bud(h) = st.v(x).role {
            let b = st.bl(h);
            if b.alive && b.parent == self.scope {
                return Group::Blossom(h);
            }
        }
        Group::Line(x.min(st.mate(x)))
    }

    fn group_members(st: &State, g: Group) -> Vec<VertexId> {
        match g {
            Group::Line(x) => vec![x, st.mate(x)],
            Group::Blossom(h) => {
                let mut m = st.members(h);
                m.extend(st.bl(h).bud);
                m
            }
        }
    }

    /// True if `x` belongs to the vertex set the search runs on.
    pub fn in_universe(&self, st: &State, x: VertexId) -> bool {
        match self.scope {
            None => st.v(x).alive,
            Some(s) => st.contains(s, x) || st.bl(s).bud == Some(x),
        }
    }

    pub fn universe(&self, st: &State) -> Vec<VertexId> {
        st.alive().filter(|&x| self.in_universe(st, x)).collect()
    }

    fn neighbors(&self, st: &State, x: VertexId) -> Vec<VertexId> {
        st.neighbors(x)
            .into_iter()
            .filter(|&y| self.in_universe(st, y))
            .collect()
    }

    pub fn tight(&self, st: &State, u: VertexId, v: VertexId) -> bool {
        st.tight_in(u, v, self.scope)
    }

    pub fn slack(&self, st: &State, u: VertexId, v: VertexId) -> BigRational {
        st.slack_in(u, v, self.scope)
    }

    fn source_lines(&self, st: &State) -> Vec<(VertexId, VertexId)> {
        match self.scope {
            None => (0..st.inst.num_lines())
                .map(|k| st.inst.line(k))
                .filter(|&(x, _)| st.is_source_line(x))
                .collect(),
            Some(s) => {
                let b = st.bl(s);
                vec![(
                    b.bud.expect("scope is normal"),
                    b.tip.expect("scope is normal"),
                )]
            }
        }
    }

    fn is_source_vertex(&self, st: &State, x: VertexId) -> bool {
        match self.scope {
            None => st.is_source_line(x),
            Some(s) => st.bl(s).bud == Some(x) || st.bl(s).tip == Some(x),
        }
    }

    fn label(&mut self, x: VertexId, p: Vec<VertexId>) {
        self.path.insert(x, p);
        self.order.push(x);
        self.queue.push_back(x);
    }

    fn root_line(&self, st: &State, x: VertexId) -> VertexId {
        let r = self.path[&x][0];
        r.min(st.mate(r))
    }

    /// Runs the search. Returns an augmenting path, or `None` when the queue
    /// empties (the labels then drive the dual update).
    pub fn run(
        &mut self,
        st: &mut State,
        stats: &mut Stats,
    ) -> Result<Option<Vec<VertexId>>, SolveError> {
        let sources = self.source_lines(st);
        for &(x, y) in &sources {
            for z in [x, y] {
                if matches!(self.group(st, z), Group::Line(_)) && !self.labeled(z) {
                    self.label(z, vec![z]);
                }
            }
        }
        for &(x, y) in &sources {
            let single = matches!(self.group(st, x), Group::Line(_));
            if single && self.tight(st, x, y) {
                if self.scope.is_some() {
                    return err("the bud/tip pair of the scope is tight in its own search");
                }
                let h = st.add_blossom(None, &[x, y].into_iter().collect(), BlossomKind::Source);
                let b = &mut st.blossoms[h];
                b.order = vec![x.min(y), x.max(y)];
                b.routes.insert(x, vec![x]);
                b.routes.insert(y, vec![y]);
                self.sign.insert(h, Sign::Plus);
                stats.blossoms_created += 1;
            }
        }
        for h in st.maximal_in(self.scope) {
            if st.bl(h).kind == BlossomKind::Source && !self.sign.contains_key(&h) {
                self.sign.insert(h, Sign::Plus);
                for x in st.h_bullet_ordered(h)? {
                    let r = st.bl(h).routes[&x].clone();
                    self.label(x, r);
                }
            }
        }
        while let Some(v) = self.queue.pop_front() {
            loop {
                let gv = self.group(st, v);
                let mut best: Option<(u64, VertexId)> = None;
                for u in self.neighbors(st, v) {
                    if self.labeled(u) && self.group(st, u) != gv && self.tight(st, u, v) {
                        let k = self.order.key(u);
                        if best.is_none_or(|(bk, _)| k < bk) {
                            best = Some((k, u));
                        }
                    }
                }
                let Some((_, u)) = best else { break };
                if self.root_line(st, v) != self.root_line(st, u) {
                    let mut p = self.path[&v].clone();
                    p.extend(self.path[&u].iter().rev());
                    return Ok(Some(p));
                }
                self.blossom(st, v, u, stats)?;
            }
            loop {
                let gv = self.group(st, v);
                let cand = self.neighbors(st, v).into_iter().find(|&u| {
                    !self.labeled(u)
                        && !self.rho.contains_key(&u)
                        && self.group(st, u) != gv
                        && self.tight(st, u, v)
                });
                let Some(u) = cand else { break };
                match self.group(st, u) {
                    Group::Line(_) => {
                        let ub = st.mate(u);
                        if self.labeled(ub) {
                            return err(format!(
                                "mate {ub} of examined vertex {u} already labeled"
                            ));
                        }
                        self.rho.insert(u, v);
                        let mut p = self.path[&v].clone();
                        p.extend([u, ub]);
                        self.label(ub, p);
                        if self.tight(st, v, ub) {
                            self.blossom(st, ub, v, stats)?;
                        }
                    }
                    Group::Blossom(h) => {
                        if st.bl(h).kind == BlossomKind::Source || self.sign.contains_key(&h) {
                            return err(format!(
                                "unlabeled vertex {u} in a labeled or source blossom"
                            ));
                        }
                        let bud = st.bl(h).bud.expect("normal blossom");
                        if self.tight(st, v, bud) {
                            self.graft(st, v, h, stats)?;
                        } else {
                            let hb = st.h_bullet_ordered(h)?;
                            let Some(&y) = hb.iter().find(|&&y| self.tight(st, v, y)) else {
                                return err(format!(
                                    "no routable vertex of blossom {h} adjacent to {v}"
                                ));
                            };
                            self.sign.insert(h, Sign::Minus);
                            let mut p = self.path[&v].clone();
                            p.extend(st.bl(h).routes[&y].iter().rev());
                            p.push(bud);
                            self.label(bud, p);
                            for x in hb {
                                if !self.labeled(x) {
                                    self.rho.insert(x, v);
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    /// Attaches a fresh bud/tip pair to the new blossom on `hset`, entered
    /// from `r` through `g`, and pivots the pair in. Returns the new blossom.
    fn new_normal_blossom(
        &self,
        st: &mut State,
        r: VertexId,
        g: VertexId,
        hset: &BTreeSet<VertexId>,
    ) -> Result<(BlossomId, VertexId, VertexId), SolveError> {
        let b = st.fresh(BigRational::zero(), self.scope);
        let t = st.fresh(BigRational::zero(), self.scope);
        let mut members = hset.clone();
        members.insert(t);
        let h = st.add_blossom(self.scope, &members, BlossomKind::Normal);
        st.set_bud_tip(h, b, t);
        let inside = |x: &VertexId| members.contains(x);
        match (st.in_base(r), st.in_base(g)) {
            (true, false) => {
                let crg = st.c.entry(r, g).unwrap_or(0);
                if crg == 0 {
                    return err(format!("entry vertex {r} not adjacent to {g}"));
                }
                st.c.push_row(b)?;
                st.c.push_col(t)?;
                for y in st.c.col_labels().to_vec() {
                    if y != t && inside(&y) {
                        let e = st.c.entry(r, y).unwrap_or(0);
                        st.c.set_entry(b, y, e)?;
                    }
                }
                for x in st.c.row_labels().to_vec() {
                    if x != b && !inside(&x) {
                        let e = st.c.entry(x, g).unwrap_or(0);
                        st.c.set_entry(x, t, e)?;
                    }
                }
                st.c.set_entry(b, t, crg)?;
                let p = st.p(r) + st.q_between(r, b);
                st.vm(b).p = p.clone();
                st.vm(t).p = p;
            }
            (false, true) => {
                let cgr = st.c.entry(g, r).unwrap_or(0);
                if cgr == 0 {
                    return err(format!("entry vertex {r} not adjacent to {g}"));
                }
                st.c.push_row(t)?;
                st.c.push_col(b)?;
                for y in st.c.col_labels().to_vec() {
                    if y != b && !inside(&y) {
                        let e = st.c.entry(g, y).unwrap_or(0);
                        st.c.set_entry(t, y, e)?;
                    }
                }
                for x in st.c.row_labels().to_vec() {
                    if x != t && inside(&x) {
                        let e = st.c.entry(x, r).unwrap_or(0);
                        st.c.set_entry(x, b, e)?;
                    }
                }
                st.c.set_entry(t, b, cgr)?;
                let p = st.p(r) - st.q_between(r, b);
                st.vm(b).p = p.clone();
                st.vm(t).p = p;
            }
            _ => return err(format!("entry pair ({r}, {g}) is not split by the base")),
        }
        st.pivot(&[b, t])?;
        Ok((h, b, t))
    }

    /// Merges the paths to `v` and `u` into a new blossom.
    fn blossom(
        &mut self,
        st: &mut State,
        v: VertexId,
        u: VertexId,
        stats: &mut Stats,
    ) -> Result<(), SolveError> {
        let pv = self.path[&v].clone();
        let pu = self.path[&u].clone();
        let groups_u: HashSet<Group> = pu.iter().map(|&x| self.group(st, x)).collect();
        let Some(ci) = pv
            .iter()
            .rposition(|&x| groups_u.contains(&self.group(st, x)))
        else {
            return err("paths of one source line share no group");
        };
        let c = pv[ci];
        let gc = self.group(st, c);
        let di = pu
            .iter()
            .rposition(|&x| self.group(st, x) == gc)
            .expect("group shared");
        let d = pu[di];
        let tail_v = pv[ci + 1..].to_vec();
        let tail_u = pu[di + 1..].to_vec();
        let mut groups: Vec<Group> = Vec::new();
        for &x in tail_v.iter().chain(tail_u.iter()) {
            let g = self.group(st, x);
            if !groups.contains(&g) {
                groups.push(g);
            }
        }
        if c != d && !groups.contains(&gc) {
            groups.push(gc);
        }
        let mut hset = BTreeSet::new();
        for &g in &groups {
            hset.extend(Self::group_members(st, g));
        }
        let old_group: HashMap<VertexId, Group> =
            hset.iter().map(|&x| (x, self.group(st, x))).collect();
        let source = hset.iter().any(|&x| self.is_source_vertex(st, x));
        let mut pair = None;
        let mut entry = None;
        let mut gh = None;
        let h = if source {
            if c == d {
                return err("source blossom without a shared vertex group");
            }
            if pv.iter().any(|x| !hset.contains(x)) {
                return err("source blossom with an entry vertex");
            }
            st.add_blossom(self.scope, &hset, BlossomKind::Source)
        } else {
            let Some(ri) = pv.iter().rposition(|x| !hset.contains(x)) else {
                return err("normal blossom without an entry vertex");
            };
            let r = pv[ri];
            let g = pv[ri + 1];
            let (h, b, t) = self.new_normal_blossom(st, r, g, &hset)?;
            let pr = self.path[&r].clone();
            if pr.iter().any(|x| hset.contains(x)) {
                return err("path to the entry vertex meets the new blossom");
            }
            let keys: Vec<VertexId> = self.path.keys().copied().collect();
            for x in keys {
                let px = &self.path[&x];
                if px.iter().any(|y| hset.contains(y)) {
                    let mut np = pr.clone();
                    np.extend([b, t]);
                    np.extend_from_slice(after(px, r)?);
                    self.path.insert(x, np);
                }
            }
            let mut pt = pr;
            pt.extend([b, t]);
            self.path.insert(t, pt);
            self.order.insert_after(r, t);
            for x in hset.iter() {
                if self.rho.get(x) == Some(&r) {
                    self.rho.insert(*x, t);
                }
            }
            self.rho.insert(b, r);
            if r == c && c == d && d != u {
                let hh = *after(&self.path[&u], t)?
                    .first()
                    .ok_or_else(|| SolveError::internal("empty path tail"))?;
                gh = Some((g, hh));
            }
            pair = Some((b, t));
            entry = Some(r);
            h
        };
        stats.blossoms_created += 1;

        // Label the routable vertices that are still unlabeled. An end that
        // is the entry vertex itself is reached through the new tip.
        let through = |x: VertexId| match (entry, pair) {
            (Some(r), Some((_, t))) if r == x => self.path[&t].clone(),
            _ => self.path[&x].clone(),
        };
        let pv = through(v);
        let pu = through(u);
        let mut cands: Vec<(VertexId, Vec<VertexId>)> = Vec::new();
        for x in st.h_bullet(h) {
            if self.labeled(x) {
                continue;
            }
            let gx = old_group[&x];
            let sub_sign = match gx {
                Group::Blossom(j) => self.sign.get(&j).copied(),
                Group::Line(_) => None,
            };
            let direct = match gx {
                Group::Line(_) => true,
                Group::Blossom(j) => sub_sign == Some(Sign::Plus) && st.bl(j).bud == Some(x),
            };
            let p = if direct {
                if tail_u.contains(&x) {
                    let mut p = pv.clone();
                    p.extend(after(&pu, x)?.iter().rev());
                    p.push(x);
                    p
                } else if tail_v.contains(&x) {
                    let mut p = pu.clone();
                    p.extend(after(&pv, x)?.iter().rev());
                    p.push(x);
                    p
                } else {
                    return err(format!(
                        "unlabeled vertex {x} of a new blossom lies on neither path"
                    ));
                }
            } else if let (Group::Blossom(j), Some(Sign::Minus)) = (gx, sub_sign) {
                let tj = st.bl(j).tip.expect("normal");
                let Some(route) = st.bl(j).routes.get(&x).cloned() else {
                    return err(format!("vertex {x} has no routing in blossom {j}"));
                };
                let mut p;
                if tail_u.contains(&tj) {
                    p = pv.clone();
                    p.extend(after(&pu, tj)?.iter().rev());
                } else if tail_v.contains(&tj) {
                    p = pu.clone();
                    p.extend(after(&pv, tj)?.iter().rev());
                } else {
                    return err(format!("tip of blossom {j} lies on neither path"));
                }
                p.extend(route);
                p
            } else {
                return err(format!(
                    "unlabeled vertex {x} of a new blossom fits no labeling rule"
                ));
            };
            cands.push((x, p));
        }
        let chosen = self.arrange(st, cands, &old_group, gh)?;
        for (x, p) in chosen {
            self.label(x, p);
        }
        self.finish_blossom(st, h, pair.map(|(b, _)| b))?;
        if self.checks {
            checks::routing(st, h)?;
            checks::state_in(st, self.check_mode())?;
        }
        Ok(())
    }

    /// Orders newly reachable vertices: later examiners first, blossom
    /// members in routing order, and the two vertices next to the new tip
    /// kept adjacent when the blossom closes at its entry vertex.
    fn arrange(
        &self,
        st: &State,
        cands: Vec<(VertexId, Vec<VertexId>)>,
        old_group: &HashMap<VertexId, Group>,
        gh: Option<(VertexId, VertexId)>,
    ) -> Result<Vec<(VertexId, Vec<VertexId>)>, SolveError> {
        let mut by_rho: Vec<(u64, Vec<(VertexId, Vec<VertexId>)>)> = Vec::new();
        for (x, p) in cands {
            let Some(&r) = self.rho.get(&x) else {
                return err(format!(
                    "unlabeled vertex {x} of a new blossom was never examined"
                ));
            };
            let k = self.order.key(r);
            match by_rho.iter_mut().find(|(kk, _)| *kk == k) {
                Some((_, v)) => v.push((x, p)),
                None => by_rho.push((k, vec![(x, p)])),
            }
        }
        by_rho.sort_by_key(|e| std::cmp::Reverse(e.0));
        let rank = |x: VertexId| -> usize {
            match old_group[&x] {
                Group::Blossom(j) => st
                    .bl(j)
                    .order
                    .iter()
                    .position(|&y| y == x)
                    .unwrap_or(usize::MAX),
                Group::Line(_) => 0,
            }
        };
        let mut out = Vec::new();
        for (_, mut items) in by_rho {
            items.sort_by_key(|(x, _)| (old_group[x], rank(*x), *x));
            let mut blocks: Vec<Vec<(VertexId, Vec<VertexId>)>> = Vec::new();
            for it in items {
                match blocks.last_mut() {
                    Some(b) if old_group[&b[0].0] == old_group[&it.0] => b.push(it),
                    _ => blocks.push(vec![it]),
                }
            }
            let find = |blocks: &Vec<Vec<(VertexId, Vec<VertexId>)>>, x: VertexId| {
                blocks.iter().position(|b| b.iter().any(|(y, _)| *y == x))
            };
            if let Some((g, h)) = gh {
                if let (Some(bg), Some(bh)) = (find(&blocks, g), find(&blocks, h)) {
                    if bg != bh {
                        let (lo, hi) = (bg.min(bh), bg.max(bh));
                        let b_hi = blocks.remove(hi);
                        let b_lo = blocks.remove(lo);
                        let (kg, kh) = if bg < bh { (b_lo, b_hi) } else { (b_hi, b_lo) };
                        let split = |b: Vec<(VertexId, Vec<VertexId>)>, x: VertexId| {
                            let i = b.iter().position(|(y, _)| *y == x).expect("present");
                            let mut b = b;
                            let rest = b.split_off(i + 1);
                            let me = b.pop().expect("present");
                            (b, me, rest)
                        };
                        let (g_pre, g_me, g_post) = split(kg, g);
                        let (h_pre, h_me, h_post) = split(kh, h);
                        let mut merged = h_pre;
                        merged.extend(g_pre);
                        merged.push(g_me);
                        merged.push(h_me);
                        merged.extend(g_post);
                        merged.extend(h_post);
                        blocks.insert(0, merged);
                    }
                }
            }
            for b in blocks {
                out.extend(b);
            }
        }
        Ok(out)
    }

    /// Labels `h` with ⊕ and records its routings and routing order.
    fn finish_blossom(
        &mut self,
        st: &mut State,
        h: BlossomId,
        bud: Option<VertexId>,
    ) -> Result<(), SolveError> {
        self.sign.insert(h, Sign::Plus);
        let mut hb: Vec<VertexId> = st.h_bullet(h).into_iter().collect();
        if let Some(x) = hb.iter().find(|x| !self.labeled(**x)) {
            return err(format!("routable vertex {x} of new blossom {h} unlabeled"));
        }
        hb.sort_by_key(|&x| self.order.key(x));
        let mut routes = HashMap::new();
        for &x in &hb {
            let px = &self.path[&x];
            let r = match bud {
                Some(b) => after(px, b)?.to_vec(),
                None => px.clone(),
            };
            routes.insert(x, r);
        }
        let bl = &mut st.blossoms[h];
        bl.order = hb;
        bl.routes = routes;
        Ok(())
    }

    /// Replaces the unlabeled normal blossom `hi` by a new blossom entered from `v`.
    fn graft(
        &mut self,
        st: &mut State,
        v: VertexId,
        hi: BlossomId,
        stats: &mut Stats,
    ) -> Result<(), SolveError> {
        let bi = st.bl(hi).bud.expect("normal");
        let ti = st.bl(hi).tip.expect("normal");
        let hb = st.h_bullet_ordered(hi)?;
        let mut hset: BTreeSet<VertexId> = st.members(hi).into_iter().collect();
        hset.insert(bi);
        let (h, b, t) = self.new_normal_blossom(st, v, bi, &hset)?;
        let mut pt = self.path[&v].clone();
        pt.extend([b, t]);
        self.path.insert(t, pt.clone());
        self.order.insert_after(v, t);
        self.rho.insert(b, v);
        for x in hb {
            let mut p = pt.clone();
            p.push(bi);
            p.extend(st.bl(hi).routes[&x].iter().copied());
            self.label(x, p);
        }
        self.finish_blossom(st, h, Some(b))?;
        let eps = st.bl(hi).q.clone();
        st.blossoms[hi].q = BigRational::zero();
        st.blossoms[h].q = eps.clone();
        if st.in_base(bi) {
            st.vm(bi).p += &eps;
        } else {
            st.vm(bi).p -= &eps;
        }
        if st.in_base(t) {
            st.vm(t).p -= &eps;
        } else {
            st.vm(t).p += &eps;
        }
        st.expand(hi)?;
        stats.expansions += 1;
        let drop = |p: &mut Vec<VertexId>| p.retain(|&x| x != bi && x != ti);
        for p in self.path.values_mut() {
            drop(p);
        }
        let bl = &mut st.blossoms[h];
        for r in bl.routes.values_mut() {
            drop(r);
        }
        bl.order.retain(|&x| x != bi && x != ti);
        bl.routes.remove(&bi);
        bl.routes.remove(&ti);
        stats.grafts += 1;
        stats.blossoms_created += 1;
        if eps.is_negative() {
            return err("negative blossom charge");
        }
        if self.checks {
            checks::routing(st, h)?;
            checks::state_in(st, self.check_mode())?;
        }
        Ok(())
    }
}
