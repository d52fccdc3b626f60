//! Optimality certificates and their independent verifier.
//!
//! A certificate records the final base, the extended universe `V*` with its
//! bud/tip vertices, the extended base `B*`, the matrix `C*`, the laminar
//! blossom family with charges `q`, and vertex potentials `p`. Verification
//! is pure linear algebra plus inequality checks and never consults the
//! solver. The same checker, run in [`CheckMode::Live`], validates
//! intermediate solver states.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::{self, Write as _};

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::field::{format_rational, parse_rational, BigRational};
use crate::instance::Instance;
use crate::linalg::{
    cocircuit_matrix, is_nonsingular_sub, pivot_around, DenseMatrix, LinalgError, VertexId,
};

/// Kind of a blossom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlossomKind {
    /// Contains exactly one source line and has no bud or tip.
    Source,
    /// Carries a bud outside and a tip inside.
    Normal,
}

impl fmt::Display for BlossomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlossomKind::Source => "source",
            BlossomKind::Normal => "normal",
        })
    }
}

/// One member of the laminar family as recorded in a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertBlossom {
    /// Member vertices (including the tip, excluding the bud).
    pub members: BTreeSet<VertexId>,
    /// Source or normal.
    pub kind: BlossomKind,
    /// Bud and tip for normal blossoms.
    pub bud_tip: Option<(VertexId, VertexId)>,
    /// Dual charge `q`.
    pub q: BigRational,
}

/// A serialized optimality witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    /// Digest of the instance this certificate belongs to.
    pub digest: String,
    /// Number of instance columns; vertices `0..n` are columns, the rest
    /// are buds and tips.
    pub n: usize,
    /// Lines of the base (0-based line indices).
    pub base_lines: Vec<usize>,
    /// The extended universe `V*`.
    pub vstar: BTreeSet<VertexId>,
    /// The extended base `B*`.
    pub bstar: BTreeSet<VertexId>,
    /// Blossoms in index order.
    pub blossoms: Vec<CertBlossom>,
    /// `C*` with rows `B*` and columns `V* ∖ B*`.
    pub cstar: DenseMatrix,
    /// Potentials `p`.
    pub potential: BTreeMap<VertexId, BigRational>,
}

/// Condition violated by a rejected certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tag {
    /// Inconsistent labeling (unknown vertices, wrong matrix axes, …).
    Format,
    /// The certificate belongs to another instance.
    Digest,
    /// The base is not a parity base of the matroid.
    Base,
    /// Blossom family is not laminar or violates the bud/tip structure.
    Laminar,
    /// Some blossom has negative charge.
    QNonneg,
    /// Line potentials do not sum to the line weight.
    DF1,
    /// Some nonzero entry of `C*` has negative slack.
    DF2,
    /// Some bud/tip pair is not tight at the blossom charge.
    DF3,
    /// Pivoting around the buds and tips does not recover the cocircuit matrix.
    BT1,
    /// Bud/tip zero pattern violated.
    BT2,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tag::Format => "FORMAT",
            Tag::Digest => "DIGEST",
            Tag::Base => "BASE",
            Tag::Laminar => "LAMINAR",
            Tag::QNonneg => "QNONNEG",
            Tag::DF1 => "DF1",
            Tag::DF2 => "DF2",
            Tag::DF3 => "DF3",
            Tag::BT1 => "BT1",
            Tag::BT2 => "BT2",
        })
    }
}

/// A rejection: the violated condition and a human-readable location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub tag: Tag,
    pub detail: String,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.tag, self.detail)
    }
}

/// Outcome of verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(Rejection),
}

impl Verdict {
    /// True for [`Verdict::Accept`].
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }

    /// The rejection, if any.
    pub fn rejection(&self) -> Option<Rejection> {
        match self {
            Verdict::Accept => None,
            Verdict::Reject(r) => Some(r.clone()),
        }
    }

    /// The rejection tag, if any.
    pub fn tag(&self) -> Option<Tag> {
        match self {
            Verdict::Accept => None,
            Verdict::Reject(r) => Some(r.tag),
        }
    }
}

/// Which state the checker expects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    /// A final state: `B` must be a parity base and no source blossom may remain.
    Final,
    /// An intermediate state: `B` is any base; source lines and source
    /// blossoms are allowed.
    Live,
    /// An intermediate state while routings inside a blossom are rebuilt:
    /// as [`CheckMode::Live`], and nested blossoms may share their columns.
    Rebuild,
}

fn reject<T>(tag: Tag, detail: impl Into<String>) -> Result<T, Rejection> {
    Err(Rejection {
        tag,
        detail: detail.into(),
    })
}

/// Errors from [`check_keyodd`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KeyOddError {
    /// `C*[X]` is singular, so the inequality does not apply.
    #[error("C*[X] is singular")]
    Singular,
    /// A vertex of `X` is not in `V*`.
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl Certificate {
    /// True if `v` is an instance column.
    pub fn is_real(&self, v: VertexId) -> bool {
        v.index() < self.n
    }

    /// Sum of `q` over blossoms containing exactly one of `u`, `v`.
    pub fn q_between(&self, u: VertexId, v: VertexId) -> BigRational {
        let mut s = BigRational::zero();
        for b in &self.blossoms {
            if b.members.contains(&u) != b.members.contains(&v) {
                s += &b.q;
            }
        }
        s
    }

    fn pot(&self, v: VertexId) -> &BigRational {
        &self.potential[&v]
    }

    /// Buds and tips, i.e. `V* ∖ V`.
    pub fn dummies(&self) -> Vec<VertexId> {
        self.vstar
            .iter()
            .copied()
            .filter(|&v| !self.is_real(v))
            .collect()
    }

    /// Serializes to the certificate text format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let ids = |it: &mut dyn Iterator<Item = VertexId>| {
            it.map(|v| v.0.to_string()).collect::<Vec<_>>().join(" ")
        };
        writeln!(s, "mwpb-certificate 1").unwrap();
        writeln!(s, "digest {}", self.digest).unwrap();
        writeln!(s, "columns {}", self.n).unwrap();
        let bl: Vec<String> = self.base_lines.iter().map(|l| l.to_string()).collect();
        writeln!(s, "base {}", bl.join(" ")).unwrap();
        writeln!(s, "vstar {}", ids(&mut self.vstar.iter().copied())).unwrap();
        writeln!(s, "bstar {}", ids(&mut self.bstar.iter().copied())).unwrap();
        writeln!(s, "blossoms {}", self.blossoms.len()).unwrap();
        for (i, b) in self.blossoms.iter().enumerate() {
            writeln!(
                s,
                "blossom {i} {} {} {}",
                b.kind,
                format_rational(&b.q),
                ids(&mut b.members.iter().copied())
            )
            .unwrap();
        }
        let tips: Vec<(usize, VertexId, VertexId)> = self
            .blossoms
            .iter()
            .enumerate()
            .filter_map(|(i, b)| b.bud_tip.map(|(bu, t)| (i, bu, t)))
            .collect();
        writeln!(s, "tips {}", tips.len()).unwrap();
        for (i, bu, t) in tips {
            writeln!(s, "tip {i} {bu} {t}").unwrap();
        }
        let c = &self.cstar;
        writeln!(s, "cstar {} {}", c.rows(), c.cols()).unwrap();
        writeln!(
            s,
            "columns-of-cstar {}",
            ids(&mut c.col_labels().iter().copied())
        )
        .unwrap();
        for (i, r) in c.row_labels().iter().enumerate() {
            let vals: Vec<String> = c.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(s, "row {r} {}", vals.join(" ")).unwrap();
        }
        writeln!(s, "potential {}", self.potential.len()).unwrap();
        for (v, p) in &self.potential {
            writeln!(s, "p {v} {}", format_rational(p)).unwrap();
        }
        writeln!(s, "end").unwrap();
        s
    }
}

/// Error raised when certificate text cannot be parsed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("certificate line {line}: {msg}")]
pub struct CertParseError {
    pub line: usize,
    pub msg: String,
}

/// Parses a certificate for an instance over `field`.
pub fn parse_certificate(text: &str, inst: &Instance) -> Result<Certificate, CertParseError> {
    let lines: Vec<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .filter_map(|(i, l)| {
            let l = l.split('#').next().unwrap_or("");
            let t: Vec<&str> = l.split_whitespace().collect();
            (!t.is_empty()).then_some((i + 1, t))
        })
        .collect();
    let mut pos = 0;
    let err = |line: usize, msg: &str| CertParseError {
        line,
        msg: msg.to_string(),
    };
    let mut next = |kw: &str| -> Result<(usize, Vec<&str>), CertParseError> {
        let (ln, t) = lines
            .get(pos)
            .cloned()
            .ok_or_else(|| err(0, "unexpected end of certificate"))?;
        pos += 1;
        if t[0] != kw {
            return Err(err(ln, &format!("expected `{kw}`, found `{}`", t[0])));
        }
        Ok((ln, t[1..].to_vec()))
    };
    let num = |ln: usize, s: &str| -> Result<usize, CertParseError> {
        s.parse().map_err(|_| err(ln, &format!("bad number `{s}`")))
    };
    let vid = |ln: usize, s: &str| -> Result<VertexId, CertParseError> {
        s.parse::<u32>()
            .map(VertexId)
            .map_err(|_| err(ln, &format!("bad vertex `{s}`")))
    };
    let (ln, v) = next("mwpb-certificate")?;
    if v != ["1"] {
        return Err(err(ln, "unsupported certificate version"));
    }
    let (ln, d) = next("digest")?;
    let digest = d
        .first()
        .ok_or_else(|| err(ln, "missing digest"))?
        .to_string();
    let (ln, c) = next("columns")?;
    let n = num(
        ln,
        c.first().ok_or_else(|| err(ln, "missing column count"))?,
    )?;
    let (ln, b) = next("base")?;
    let base_lines = b.iter().map(|s| num(ln, s)).collect::<Result<_, _>>()?;
    let (ln, vs) = next("vstar")?;
    let vstar = vs.iter().map(|s| vid(ln, s)).collect::<Result<_, _>>()?;
    let (ln, bs) = next("bstar")?;
    let bstar = bs.iter().map(|s| vid(ln, s)).collect::<Result<_, _>>()?;
    let (ln, bc) = next("blossoms")?;
    let nb = num(ln, bc.first().ok_or_else(|| err(ln, "missing count"))?)?;
    let mut blossoms = Vec::with_capacity(nb);
    for i in 0..nb {
        let (ln, t) = next("blossom")?;
        if t.len() < 3 || num(ln, t[0])? != i {
            return Err(err(ln, "expected `blossom <index> <kind> <q> <members…>`"));
        }
        let kind = match t[1] {
            "source" => BlossomKind::Source,
            "normal" => BlossomKind::Normal,
            k => return Err(err(ln, &format!("unknown blossom kind `{k}`"))),
        };
        let q = parse_rational(t[2]).map_err(|e| err(ln, &e.to_string()))?;
        let members = t[3..]
            .iter()
            .map(|s| vid(ln, s))
            .collect::<Result<_, _>>()?;
        blossoms.push(CertBlossom {
            members,
            kind,
            bud_tip: None,
            q,
        });
    }
    let (ln, tc) = next("tips")?;
    let nt = num(ln, tc.first().ok_or_else(|| err(ln, "missing count"))?)?;
    for _ in 0..nt {
        let (ln, t) = next("tip")?;
        if t.len() != 3 {
            return Err(err(ln, "expected `tip <blossom> <bud> <tip>`"));
        }
        let i = num(ln, t[0])?;
        let slot = blossoms
            .get_mut(i)
            .ok_or_else(|| err(ln, "tip refers to an unknown blossom"))?;
        slot.bud_tip = Some((vid(ln, t[1])?, vid(ln, t[2])?));
    }
    let (ln, cs) = next("cstar")?;
    if cs.len() != 2 {
        return Err(err(ln, "expected `cstar <rows> <cols>`"));
    }
    let (rows, cols) = (num(ln, cs[0])?, num(ln, cs[1])?);
    let (ln, cl) = next("columns-of-cstar")?;
    let col_labels: Vec<VertexId> = cl.iter().map(|s| vid(ln, s)).collect::<Result<_, _>>()?;
    if col_labels.len() != cols {
        return Err(err(ln, "column label count mismatch"));
    }
    let mut row_labels = Vec::with_capacity(rows);
    let mut data = Vec::with_capacity(rows);
    for _ in 0..rows {
        let (ln, t) = next("row")?;
        if t.len() != cols + 1 {
            return Err(err(ln, "row length mismatch"));
        }
        row_labels.push(vid(ln, t[0])?);
        let vals: Vec<u64> = t[1..]
            .iter()
            .map(|s| s.parse::<u64>().map_err(|_| err(ln, "bad matrix entry")))
            .collect::<Result<_, _>>()?;
        data.push(vals);
    }
    let mut cstar = DenseMatrix::zeros(inst.field(), row_labels, col_labels)
        .map_err(|e| err(ln, &e.to_string()))?;
    let p = inst.field().modulus();
    for (i, r) in data.iter().enumerate() {
        for (j, &x) in r.iter().enumerate() {
            if x >= p {
                return Err(err(ln, "matrix entry not reduced"));
            }
            cstar.set(i, j, x);
        }
    }
    let (ln, pc) = next("potential")?;
    let np = num(ln, pc.first().ok_or_else(|| err(ln, "missing count"))?)?;
    let mut potential = BTreeMap::new();
    for _ in 0..np {
        let (ln, t) = next("p")?;
        if t.len() != 2 {
            return Err(err(ln, "expected `p <vertex> <value>`"));
        }
        let v = vid(ln, t[0])?;
        let val = parse_rational(t[1]).map_err(|e| err(ln, &e.to_string()))?;
        if potential.insert(v, val).is_some() {
            return Err(err(ln, "duplicate potential"));
        }
    }
    next("end")?;
    Ok(Certificate {
        digest,
        n,
        base_lines,
        vstar,
        bstar,
        blossoms,
        cstar,
        potential,
    })
}

/// Verifies a final certificate: acceptance proves that its base is a
/// minimum-weight parity base of `inst`.
pub fn verify(inst: &Instance, cert: &Certificate) -> Verdict {
    match check(inst, cert, CheckMode::Final) {
        Ok(()) => Verdict::Accept,
        Err(r) => Verdict::Reject(r),
    }
}

/// Runs every check and reports the first violation.
pub fn check(inst: &Instance, cert: &Certificate, mode: CheckMode) -> Result<(), Rejection> {
    check_format(inst, cert)?;
    if mode == CheckMode::Final && cert.digest != inst.digest() {
        return reject(
            Tag::Digest,
            "certificate digest does not match the instance",
        );
    }
    let base = check_base(inst, cert, mode)?;
    check_laminar(inst, cert, mode)?;
    for (i, b) in cert.blossoms.iter().enumerate() {
        if b.q.is_negative() {
            return reject(
                Tag::QNonneg,
                format!("q(H_{i}) = {} < 0", format_rational(&b.q)),
            );
        }
    }
    check_df1(inst, cert)?;
    check_df3(cert)?;
    check_df2(cert)?;
    check_bt1(inst, cert, &base)?;
    check_bt2(cert)?;
    Ok(())
}

fn check_format(inst: &Instance, cert: &Certificate) -> Result<(), Rejection> {
    if cert.n != inst.n() {
        return reject(
            Tag::Format,
            format!("column count {} ≠ {}", cert.n, inst.n()),
        );
    }
    for v in 0..inst.n() as u32 {
        if !cert.vstar.contains(&VertexId(v)) {
            return reject(Tag::Format, format!("column {v} missing from V*"));
        }
    }
    if let Some(v) = cert.bstar.iter().find(|v| !cert.vstar.contains(v)) {
        return reject(Tag::Format, format!("B* vertex {v} not in V*"));
    }
    let c = &cert.cstar;
    let rows: BTreeSet<VertexId> = c.row_labels().iter().copied().collect();
    let cols: BTreeSet<VertexId> = c.col_labels().iter().copied().collect();
    let nonbase: BTreeSet<VertexId> = cert.vstar.difference(&cert.bstar).copied().collect();
    if rows != cert.bstar || cols != nonbase {
        return reject(Tag::Format, "C* axes are not (B*, V* ∖ B*)");
    }
    if cert.potential.len() != cert.vstar.len()
        || cert.vstar.iter().any(|v| !cert.potential.contains_key(v))
    {
        return reject(Tag::Format, "potentials do not cover V* exactly");
    }
    Ok(())
}

/// Checks the base and returns it as a sorted list of columns.
fn check_base(
    inst: &Instance,
    cert: &Certificate,
    mode: CheckMode,
) -> Result<Vec<VertexId>, Rejection> {
    let base: Vec<VertexId> = cert
        .bstar
        .iter()
        .copied()
        .filter(|&v| cert.is_real(v))
        .collect();
    if base.len() != inst.m() {
        return reject(
            Tag::Base,
            format!("|B| = {} ≠ m = {}", base.len(), inst.m()),
        );
    }
    let a = inst.matrix();
    let idx: Vec<usize> = base.iter().map(|v| v.index()).collect();
    let sub = a.submatrix(&(0..inst.m()).collect::<Vec<_>>(), &idx);
    if crate::linalg::determinant(inst.field(), inst.m(), &sub) == 0 {
        return reject(Tag::Base, "B is not a base of the column matroid");
    }
    if mode == CheckMode::Final {
        let mut lines: Vec<usize> = Vec::new();
        for k in 0..inst.num_lines() {
            let (v, vb) = inst.line(k);
            match (cert.bstar.contains(&v), cert.bstar.contains(&vb)) {
                (true, true) => lines.push(k),
                (false, false) => {}
                _ => return reject(Tag::Base, format!("line {k} is split by B")),
            }
        }
        let mut declared = cert.base_lines.clone();
        declared.sort_unstable();
        if declared != lines {
            return reject(Tag::Base, "declared base lines differ from B* ∩ V");
        }
    }
    Ok(base)
}

fn check_laminar(inst: &Instance, cert: &Certificate, mode: CheckMode) -> Result<(), Rejection> {
    let bl = &cert.blossoms;
    let mut dummy_owner: HashMap<VertexId, usize> = HashMap::new();
    for (i, b) in bl.iter().enumerate() {
        if let Some(v) = b.members.iter().find(|v| !cert.vstar.contains(v)) {
            return reject(Tag::Laminar, format!("H_{i} member {v} not in V*"));
        }
        match (b.kind, b.bud_tip) {
            (BlossomKind::Normal, Some((bu, t))) => {
                for d in [bu, t] {
                    if cert.is_real(d) || !cert.vstar.contains(&d) {
                        return reject(
                            Tag::Laminar,
                            format!("H_{i}: bud/tip {d} is not a dummy vertex"),
                        );
                    }
                    if dummy_owner.insert(d, i).is_some() {
                        return reject(Tag::Laminar, format!("dummy vertex {d} used twice"));
                    }
                }
                if b.members.contains(&bu) || !b.members.contains(&t) {
                    return reject(
                        Tag::Laminar,
                        format!("H_{i}: bud must be outside, tip inside"),
                    );
                }
                if cert.bstar.contains(&bu) == cert.bstar.contains(&t) {
                    return reject(
                        Tag::Laminar,
                        format!("H_{i}: exactly one of bud/tip must be in B*"),
                    );
                }
            }
            (BlossomKind::Source, None) => {
                if mode == CheckMode::Final {
                    return reject(
                        Tag::Laminar,
                        format!("H_{i} is a source blossom in a final state"),
                    );
                }
                let sources = (0..inst.num_lines())
                    .filter(|&k| {
                        let (v, vb) = inst.line(k);
                        b.members.contains(&v)
                            && cert.bstar.contains(&v) != cert.bstar.contains(&vb)
                    })
                    .count();
                if sources != 1 {
                    return reject(
                        Tag::Laminar,
                        format!("source blossom H_{i} has {sources} source lines"),
                    );
                }
            }
            _ => return reject(Tag::Laminar, format!("H_{i}: kind and bud/tip disagree")),
        }
        let real: BTreeSet<VertexId> = b
            .members
            .iter()
            .copied()
            .filter(|&v| cert.is_real(v))
            .collect();
        if real.is_empty() {
            return reject(Tag::Laminar, format!("H_{i} contains no column"));
        }
        if real.iter().any(|v| !real.contains(&VertexId(v.0 ^ 1))) {
            return reject(Tag::Laminar, format!("H_{i} ∩ V is not a union of lines"));
        }
    }
    if let Some(d) = cert
        .dummies()
        .into_iter()
        .find(|d| !dummy_owner.contains_key(d))
    {
        return reject(
            Tag::Laminar,
            format!("dummy vertex {d} belongs to no blossom"),
        );
    }
    let mut seen_real: HashSet<BTreeSet<VertexId>> = HashSet::new();
    for (i, b) in bl.iter().enumerate() {
        let real: BTreeSet<VertexId> = b
            .members
            .iter()
            .copied()
            .filter(|&v| cert.is_real(v))
            .collect();
        if mode != CheckMode::Rebuild && !seen_real.insert(real) {
            return reject(Tag::Laminar, format!("H_{i} ∩ V repeats another blossom"));
        }
        for (j, c) in bl.iter().enumerate().skip(i + 1) {
            let disjoint = b.members.is_disjoint(&c.members);
            let nested = b.members.is_subset(&c.members) && b.members != c.members;
            if !disjoint && !nested {
                return reject(
                    Tag::Laminar,
                    format!("H_{i} and H_{j} violate the laminar index order"),
                );
            }
        }
    }
    for (i, b) in bl.iter().enumerate() {
        for (j, c) in bl.iter().enumerate() {
            let Some((bj, tj)) = c.bud_tip else { continue };
            let sub = c.members.is_subset(&b.members);
            let strict = sub && c.members != b.members;
            if b.members.contains(&tj) != sub {
                return reject(
                    Tag::Laminar,
                    format!("tip of H_{j} vs H_{i}: membership ≠ containment"),
                );
            }
            if b.members.contains(&bj) != strict {
                return reject(
                    Tag::Laminar,
                    format!("bud of H_{j} vs H_{i}: membership ≠ strict containment"),
                );
            }
        }
    }
    Ok(())
}

fn check_df1(inst: &Instance, cert: &Certificate) -> Result<(), Rejection> {
    for k in 0..inst.num_lines() {
        let (v, vb) = inst.line(k);
        if cert.pot(v) + cert.pot(vb) != inst.weights()[k] {
            return reject(Tag::DF1, format!("line {k}: p({v}) + p({vb}) ≠ w"));
        }
    }
    Ok(())
}

fn check_df3(cert: &Certificate) -> Result<(), Rejection> {
    for (i, b) in cert.blossoms.iter().enumerate() {
        let Some((bu, t)) = b.bud_tip else { continue };
        let (u, v) = if cert.bstar.contains(&bu) {
            (bu, t)
        } else {
            (t, bu)
        };
        if cert.pot(v) - cert.pot(u) != b.q {
            return reject(Tag::DF3, format!("H_{i}: bud/tip pair not tight at q"));
        }
    }
    Ok(())
}

fn check_df2(cert: &Certificate) -> Result<(), Rejection> {
    let c = &cert.cstar;
    for (i, &u) in c.row_labels().iter().enumerate() {
        for (j, &v) in c.col_labels().iter().enumerate() {
            if c.get(i, j) == 0 {
                continue;
            }
            if cert.pot(v) - cert.pot(u) < cert.q_between(u, v) {
                return reject(Tag::DF2, format!("edge ({u}, {v}) has negative slack"));
            }
        }
    }
    Ok(())
}

fn check_bt1(inst: &Instance, cert: &Certificate, base: &[VertexId]) -> Result<(), Rejection> {
    let t = cert.dummies();
    let pivoted = match pivot_around(&cert.cstar, &t) {
        Ok(m) => m,
        Err(_) => return reject(Tag::BT1, "C*[T] is singular"),
    };
    let expected = cocircuit_matrix(inst.matrix(), base).expect("base checked nonsingular");
    for &r in expected.row_labels() {
        for &col in expected.col_labels() {
            if pivoted.entry(r, col) != expected.entry(r, col) {
                return reject(
                    Tag::BT1,
                    format!("entry ({r}, {col}) differs from the cocircuit matrix"),
                );
            }
        }
    }
    Ok(())
}

fn check_bt2(cert: &Certificate) -> Result<(), Rejection> {
    let c = &cert.cstar;
    for (i, b) in cert.blossoms.iter().enumerate() {
        let Some((bu, t)) = b.bud_tip else { continue };
        let inside = |v: &VertexId| b.members.contains(v);
        if cert.bstar.contains(&bu) {
            if c.entry(bu, t) == Some(0) {
                return reject(Tag::BT2, format!("H_{i}: C*[bud, tip] = 0"));
            }
            for &v in c.col_labels() {
                if v != t && inside(&v) && c.entry(bu, v) != Some(0) {
                    return reject(Tag::BT2, format!("H_{i}: bud row nonzero at {v}"));
                }
            }
            for &u in c.row_labels() {
                if u != bu && !inside(&u) && c.entry(u, t) != Some(0) {
                    return reject(Tag::BT2, format!("H_{i}: tip column nonzero at {u}"));
                }
            }
        } else {
            if c.entry(t, bu) == Some(0) {
                return reject(Tag::BT2, format!("H_{i}: C*[tip, bud] = 0"));
            }
            for &u in c.row_labels() {
                if u != t && inside(&u) && c.entry(u, bu) != Some(0) {
                    return reject(Tag::BT2, format!("H_{i}: bud column nonzero at {u}"));
                }
            }
            for &v in c.col_labels() {
                if v != bu && !inside(&v) && c.entry(t, v) != Some(0) {
                    return reject(Tag::BT2, format!("H_{i}: tip row nonzero at {v}"));
                }
            }
        }
    }
    Ok(())
}

/// The odd-crossing inequality: for `X` with `C*[X]` nonsingular,
/// `p(X ∖ B*) − p(X ∩ B*)` is at least the total charge of blossoms meeting
/// `X` in an odd number of vertices.
pub fn check_keyodd(cert: &Certificate, x: &[VertexId]) -> Result<bool, KeyOddError> {
    if !is_nonsingular_sub(&cert.cstar, x)? {
        return Err(KeyOddError::Singular);
    }
    let mut lhs = BigRational::zero();
    for v in x {
        if cert.bstar.contains(v) {
            lhs -= cert.pot(*v);
        } else {
            lhs += cert.pot(*v);
        }
    }
    let mut rhs = BigRational::zero();
    for b in &cert.blossoms {
        if x.iter().filter(|v| b.members.contains(v)).count() % 2 == 1 {
            rhs += &b.q;
        }
    }
    Ok(lhs >= rhs)
}

/// The tight-matching property on `X`: if `G*[X]` has a perfect matching
/// whose edges are all tight and which crosses every positive blossom at
/// most once, then every perfect matching of `G*[X]` has that form.
/// Returns `false` exactly when `X` has both kinds of perfect matching.
pub fn check_tight_matchings(cert: &Certificate, x: &[VertexId]) -> Result<bool, KeyOddError> {
    let (ri, ci) = cert.cstar.block(x)?;
    if ri.len() != ci.len() {
        return Ok(true);
    }
    let positive: Vec<&CertBlossom> = cert.blossoms.iter().filter(|b| b.q.is_positive()).collect();
    let rows: Vec<VertexId> = ri.iter().map(|&i| cert.cstar.row_labels()[i]).collect();
    let cols: Vec<VertexId> = ci.iter().map(|&j| cert.cstar.col_labels()[j]).collect();
    let edge_tight = |a: usize, b: usize| {
        cert.pot(cols[b]) - cert.pot(rows[a]) == cert.q_between(rows[a], cols[b])
    };
    let crosses = |a: usize, b: usize, h: &CertBlossom| {
        h.members.contains(&rows[a]) != h.members.contains(&cols[b])
    };

    struct Walk {
        nonzero: Vec<Vec<bool>>,
        tight: Vec<Vec<bool>>,
        cross: Vec<Vec<Vec<bool>>>,
        used: Vec<bool>,
        crossing: Vec<u32>,
        seen_tight: bool,
        seen_loose: bool,
    }
    impl Walk {
        fn go(&mut self, a: usize, all_tight: bool) {
            if self.seen_tight && self.seen_loose {
                return;
            }
            if a == self.nonzero.len() {
                let consistent = self.crossing.iter().all(|&c| c <= 1);
                if all_tight && consistent {
                    self.seen_tight = true;
                } else {
                    self.seen_loose = true;
                }
                return;
            }
            for b in 0..self.used.len() {
                if self.used[b] || !self.nonzero[a][b] {
                    continue;
                }
                self.used[b] = true;
                for (k, &c) in self.cross[a][b].iter().enumerate() {
                    self.crossing[k] += c as u32;
                }
                let t = all_tight && self.tight[a][b];
                self.go(a + 1, t);
                for (k, &c) in self.cross[a][b].iter().enumerate() {
                    self.crossing[k] -= c as u32;
                }
                self.used[b] = false;
            }
        }
    }
    let k = rows.len();
    let mut w = Walk {
        nonzero: (0..k)
            .map(|a| (0..k).map(|b| cert.cstar.get(ri[a], ci[b]) != 0).collect())
            .collect(),
        tight: (0..k)
            .map(|a| (0..k).map(|b| edge_tight(a, b)).collect())
            .collect(),
        cross: (0..k)
            .map(|a| {
                (0..k)
                    .map(|b| positive.iter().map(|h| crosses(a, b, h)).collect())
                    .collect()
            })
            .collect(),
        used: vec![false; k],
        crossing: vec![0; positive.len()],
        seen_tight: false,
        seen_loose: false,
    };
    w.go(0, true);
    Ok(!(w.seen_tight && w.seen_loose))
}
