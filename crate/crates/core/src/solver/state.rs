//! Primal–dual state: the extended universe `V*`, the blossom family, the
//! potentials and the matrix `C*`.

use std::collections::{BTreeSet, HashMap};

use num_traits::Zero;

use super::SolveError;
use crate::certificate::{BlossomKind, CertBlossom, Certificate};
use crate::field::BigRational;
use crate::instance::Instance;
use crate::linalg::{cocircuit_matrix, greedy_min_base, pivot_around, DenseMatrix, VertexId};

/// Index of a blossom; indices follow creation order.
pub(crate) type BlossomId = usize;

/// What a vertex of `V*` stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Role {
    /// An instance column.
    Column,
    /// Bud of the given blossom.
    Bud(BlossomId),
    /// Tip of the given blossom.
    Tip(BlossomId),
    /// A freshly created dummy vertex that is not yet attached as bud or tip.
    Spare,
}

#[derive(Debug, Clone)]
pub(crate) struct Vertex {
    pub alive: bool,
    pub role: Role,
    pub mate: VertexId,
    pub p: BigRational,
    /// Innermost blossom containing the vertex.
    pub inner: Option<BlossomId>,
}

#[derive(Debug, Clone)]
pub(crate) struct Blossom {
    pub alive: bool,
    pub parent: Option<BlossomId>,
    pub kind: BlossomKind,
    pub bud: Option<VertexId>,
    pub tip: Option<VertexId>,
    pub q: BigRational,
    /// Routable vertices in routing order.
    pub order: Vec<VertexId>,
    /// Routing path from the tip (or the source vertex) to each routable vertex.
    pub routes: HashMap<VertexId, Vec<VertexId>>,
}

/// The full solver state.
#[derive(Debug, Clone)]
pub(crate) struct State<'a> {
    pub inst: &'a Instance,
    pub verts: Vec<Vertex>,
    pub blossoms: Vec<Blossom>,
    pub c: DenseMatrix,
}

impl<'a> State<'a> {
    /// Initial state: potentials split evenly, greedy minimum base, no blossoms.
    pub fn new(inst: &'a Instance) -> Result<Self, SolveError> {
        let n = inst.n();
        let two = BigRational::from_integer(2.into());
        let verts: Vec<Vertex> = (0..n)
            .map(|j| Vertex {
                alive: true,
                role: Role::Column,
                mate: VertexId((j ^ 1) as u32),
                p: &inst.weights()[j / 2] / &two,
                inner: None,
            })
            .collect();
        let p: Vec<BigRational> = verts.iter().map(|v| v.p.clone()).collect();
        let base = greedy_min_base(inst.matrix(), &p)?;
        let base: Vec<VertexId> = base.into_iter().map(|j| VertexId(j as u32)).collect();
        let c = cocircuit_matrix(inst.matrix(), &base)?;
        Ok(State {
            inst,
            verts,
            blossoms: Vec::new(),
            c,
        })
    }

    pub fn v(&self, x: VertexId) -> &Vertex {
        &self.verts[x.index()]
    }

    pub fn vm(&mut self, x: VertexId) -> &mut Vertex {
        &mut self.verts[x.index()]
    }

    pub fn p(&self, x: VertexId) -> &BigRational {
        &self.verts[x.index()].p
    }

    pub fn mate(&self, x: VertexId) -> VertexId {
        self.v(x).mate
    }

    pub fn in_base(&self, x: VertexId) -> bool {
        self.c.has_row(x)
    }

    pub fn is_column(&self, x: VertexId) -> bool {
        x.index() < self.inst.n()
    }

    pub fn alive(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.verts
            .iter()
            .enumerate()
            .filter(|(_, v)| v.alive)
            .map(|(i, _)| VertexId(i as u32))
    }

    pub fn bl(&self, h: BlossomId) -> &Blossom {
        &self.blossoms[h]
    }

    pub fn alive_blossoms(&self) -> impl Iterator<Item = BlossomId> + '_ {
        self.blossoms
            .iter()
            .enumerate()
            .filter(|(_, b)| b.alive)
            .map(|(i, _)| i)
    }

    /// Blossoms directly below `scope` (the whole family when `scope` is `None`).
    pub fn maximal_in(&self, scope: Option<BlossomId>) -> Vec<BlossomId> {
        self.alive_blossoms()
            .filter(|&h| self.bl(h).parent == scope)
            .collect()
    }

    /// True if the line `{x, x̄}` is made of columns and splits `B*`.
    pub fn is_source_line(&self, x: VertexId) -> bool {
        self.is_column(x) && self.in_base(x) != self.in_base(self.mate(x))
    }

    /// True if some line of columns still splits `B*`.
    pub fn has_source_line(&self) -> bool {
        (0..self.inst.n())
            .step_by(2)
            .any(|j| self.is_source_line(VertexId(j as u32)))
    }

    /// Blossoms containing `x` strictly below `scope`, innermost first.
    pub fn chain_in(&self, x: VertexId, scope: Option<BlossomId>) -> Vec<BlossomId> {
        let mut out = Vec::new();
        let mut cur = self.v(x).inner;
        while let Some(h) = cur {
            if Some(h) == scope {
                return out;
            }
            out.push(h);
            cur = self.bl(h).parent;
        }
        if scope.is_some() {
            out.clear();
        }
        out
    }

    pub fn contains(&self, h: BlossomId, x: VertexId) -> bool {
        let mut cur = self.v(x).inner;
        while let Some(g) = cur {
            if g == h {
                return true;
            }
            cur = self.bl(g).parent;
        }
        false
    }

    /// Outermost blossom containing `x` strictly below `scope`.
    pub fn top_in(&self, x: VertexId, scope: Option<BlossomId>) -> Option<BlossomId> {
        self.chain_in(x, scope).last().copied()
    }

    /// Sum of `q` over blossoms below `scope` containing exactly one of `u`, `v`.
    pub fn q_between_in(&self, u: VertexId, v: VertexId, scope: Option<BlossomId>) -> BigRational {
        let cu = self.chain_in(u, scope);
        let cv = self.chain_in(v, scope);
        let mut iu = cu.len();
        let mut iv = cv.len();
        while iu > 0 && iv > 0 && cu[iu - 1] == cv[iv - 1] {
            iu -= 1;
            iv -= 1;
        }
        let mut s = BigRational::zero();
        for &h in cu[..iu].iter().chain(cv[..iv].iter()) {
            s += &self.bl(h).q;
        }
        s
    }

    pub fn q_between(&self, u: VertexId, v: VertexId) -> BigRational {
        self.q_between_in(u, v, None)
    }

    /// `(row, column)` orientation of a pair with exactly one end in `B*`.
    pub fn orient(&self, u: VertexId, v: VertexId) -> Option<(VertexId, VertexId)> {
        match (self.in_base(u), self.in_base(v)) {
            (true, false) => Some((u, v)),
            (false, true) => Some((v, u)),
            _ => None,
        }
    }

    /// True if `{u, v}` is an edge of `F*`.
    pub fn is_edge(&self, u: VertexId, v: VertexId) -> bool {
        match self.orient(u, v) {
            Some((r, c)) => self.c.entry(r, c).is_some_and(|x| x != 0),
            None => false,
        }
    }

    /// Reduced cost `p(col) − p(row) − Q` with `Q` restricted to `scope`.
    pub fn slack_in(&self, u: VertexId, v: VertexId, scope: Option<BlossomId>) -> BigRational {
        let (r, c) = self.orient(u, v).expect("slack of a pair inside one side");
        self.p(c) - self.p(r) - self.q_between_in(r, c, scope)
    }

    /// True if `{u, v}` is a tight edge with `Q` restricted to `scope`.
    pub fn tight_in(&self, u: VertexId, v: VertexId, scope: Option<BlossomId>) -> bool {
        self.is_edge(u, v) && self.slack_in(u, v, scope).is_zero()
    }

    /// Neighbours of `x` in `F*`.
    pub fn neighbors(&self, x: VertexId) -> Vec<VertexId> {
        let c = &self.c;
        if let Some(i) = c.row_index(x) {
            c.row(i)
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(j, _)| c.col_labels()[j])
                .collect()
        } else if let Some(j) = c.col_index(x) {
            (0..c.rows())
                .filter(|&i| c.get(i, j) != 0)
                .map(|i| c.row_labels()[i])
                .collect()
        } else {
            Vec::new()
        }
    }

    /// Vertices of `h`.
    pub fn members(&self, h: BlossomId) -> Vec<VertexId> {
        self.alive().filter(|&x| self.contains(h, x)).collect()
    }

    /// Members of `h` other than its tip with an `F*` edge leaving `h`.
    pub fn h_minus(&self, h: BlossomId) -> Vec<VertexId> {
        let tip = self.bl(h).tip;
        self.members(h)
            .into_iter()
            .filter(|&x| Some(x) != tip)
            .filter(|&x| self.neighbors(x).into_iter().any(|y| !self.contains(h, y)))
            .collect()
    }

    /// Routable vertices of `h`: `H⁻ ∪ (H ∩ V)`.
    pub fn h_bullet(&self, h: BlossomId) -> BTreeSet<VertexId> {
        let mut s: BTreeSet<VertexId> = self.h_minus(h).into_iter().collect();
        s.extend(self.members(h).into_iter().filter(|&x| self.is_column(x)));
        s
    }

    /// Routable vertices of `h` in routing order.
    pub fn h_bullet_ordered(&self, h: BlossomId) -> Result<Vec<VertexId>, SolveError> {
        let cur = self.h_bullet(h);
        let b = self.bl(h);
        let out: Vec<VertexId> = b
            .order
            .iter()
            .copied()
            .filter(|x| cur.contains(x))
            .collect();
        if out.len() != cur.len() {
            return Err(SolveError::internal(format!(
                "blossom {h} has routable vertices without a routing"
            )));
        }
        Ok(out)
    }

    /// Allocates a dummy vertex.
    pub fn fresh(&mut self, p: BigRational, inner: Option<BlossomId>) -> VertexId {
        let id = VertexId(self.verts.len() as u32);
        self.verts.push(Vertex {
            alive: true,
            role: Role::Spare,
            mate: id,
            p,
            inner,
        });
        id
    }

    /// Deletes a dummy vertex together with its row or column of `C*`.
    pub fn kill(&mut self, x: VertexId) -> Result<(), SolveError> {
        self.c.remove_label(x)?;
        self.vm(x).alive = false;
        Ok(())
    }

    pub fn pivot(&mut self, s: &[VertexId]) -> Result<(), SolveError> {
        self.c = pivot_around(&self.c, s)?;
        Ok(())
    }

    /// Registers a new blossom below `parent` made of `verts`; maximal
    /// blossoms below `parent` whose vertices all lie in `verts` become
    /// children.
    pub fn add_blossom(
        &mut self,
        parent: Option<BlossomId>,
        verts: &BTreeSet<VertexId>,
        kind: BlossomKind,
    ) -> BlossomId {
        let id = self.blossoms.len();
        let children: Vec<BlossomId> = self
            .maximal_in(parent)
            .into_iter()
            .filter(|&g| self.members(g).iter().all(|x| verts.contains(x)))
            .collect();
        self.blossoms.push(Blossom {
            alive: true,
            parent,
            kind,
            bud: None,
            tip: None,
            q: BigRational::zero(),
            order: Vec::new(),
            routes: HashMap::new(),
        });
        for g in children {
            self.blossoms[g].parent = Some(id);
        }
        for &x in verts {
            if self.v(x).inner == parent {
                self.vm(x).inner = Some(id);
            }
        }
        id
    }

    /// Removes `h` from the family without touching `C*`; its bud and tip
    /// (if any) are deleted.
    pub fn dissolve(&mut self, h: BlossomId) -> Result<(), SolveError> {
        let parent = self.bl(h).parent;
        for g in 0..self.blossoms.len() {
            if self.blossoms[g].alive && self.blossoms[g].parent == Some(h) {
                self.blossoms[g].parent = parent;
            }
        }
        for v in self.verts.iter_mut() {
            if v.alive && v.inner == Some(h) {
                v.inner = parent;
            }
        }
        if let (Some(b), Some(t)) = (self.bl(h).bud, self.bl(h).tip) {
            self.kill(b)?;
            self.kill(t)?;
        }
        self.blossoms[h].alive = false;
        Ok(())
    }

    /// Removes a blossom with zero charge, pivoting its bud and tip out.
    pub fn expand(&mut self, h: BlossomId) -> Result<(), SolveError> {
        if !self.bl(h).q.is_zero() {
            return Err(SolveError::internal(format!(
                "expanding blossom {h} with positive charge"
            )));
        }
        if let (Some(b), Some(t)) = (self.bl(h).bud, self.bl(h).tip) {
            self.pivot(&[b, t])?;
        }
        self.dissolve(h)
    }

    /// Substitutes vertices in every routing and routing order.
    pub fn rename(&mut self, pairs: &[(VertexId, VertexId)]) {
        let sub = |x: &mut VertexId| {
            if let Some(&(_, y)) = pairs.iter().find(|(o, _)| o == x) {
                *x = y;
            }
        };
        for bl in self.blossoms.iter_mut().filter(|b| b.alive) {
            bl.order.iter_mut().for_each(sub);
            let routes = std::mem::take(&mut bl.routes);
            for (mut k, mut r) in routes {
                sub(&mut k);
                r.iter_mut().for_each(sub);
                bl.routes.insert(k, r);
            }
        }
    }

    /// Attaches `b`, `t` as bud and tip of `h` and pairs them.
    pub fn set_bud_tip(&mut self, h: BlossomId, b: VertexId, t: VertexId) {
        self.vm(b).role = Role::Bud(h);
        self.vm(t).role = Role::Tip(h);
        self.vm(b).mate = t;
        self.vm(t).mate = b;
        let bl = &mut self.blossoms[h];
        bl.bud = Some(b);
        bl.tip = Some(t);
        bl.kind = BlossomKind::Normal;
    }

    /// Snapshot of the state in certificate form.
    pub fn to_certificate(&self) -> Certificate {
        let vstar: BTreeSet<VertexId> = self.alive().collect();
        let bstar: BTreeSet<VertexId> = self.c.row_labels().iter().copied().collect();
        let mut ids: Vec<(usize, BlossomId)> = self
            .alive_blossoms()
            .map(|h| (self.members(h).len(), h))
            .collect();
        ids.sort_unstable();
        let mut blossoms = Vec::new();
        for (_, h) in ids {
            let b = self.bl(h);
            blossoms.push(CertBlossom {
                members: self.members(h).into_iter().collect(),
                kind: b.kind,
                bud_tip: b.bud.zip(b.tip),
                q: b.q.clone(),
            });
        }
        let base_lines: Vec<usize> = (0..self.inst.num_lines())
            .filter(|&k| {
                self.in_base(VertexId(2 * k as u32)) && self.in_base(VertexId(2 * k as u32 + 1))
            })
            .collect();
        Certificate {
            digest: self.inst.digest(),
            n: self.inst.n(),
            base_lines,
            vstar: vstar.clone(),
            bstar,
            blossoms,
            cstar: self.c.clone(),
            potential: vstar.iter().map(|&v| (v, self.p(v).clone())).collect(),
        }
    }
}
