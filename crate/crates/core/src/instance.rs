//! Problem instances: text format, random generation and the matching reduction.
//!
//! An instance is an `m × n` matrix `A` over GF(p) whose columns are grouped
//! into lines `{2k, 2k+1}` (0-based), each carrying a rational weight. A field
//! declared as `field 0` denotes an integer matrix to be solved over the
//! rationals; such text is parsed by [`parse_integer_instance`].

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::{format_rational, parse_rational, rat, BigRational, FieldError, PrimeField};
use crate::linalg::{rank, DenseMatrix, VertexId};

/// Errors raised while reading or validating an instance.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    /// Syntactically malformed text.
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    /// The declared field is not a prime field.
    #[error(transparent)]
    Field(#[from] FieldError),
    /// The representation matrix does not have full row rank.
    #[error("representation matrix has rank {rank} < {rows} rows")]
    RankDeficient { rank: usize, rows: usize },
    /// The requested shape cannot be realized.
    #[error("impossible shape: {0}")]
    Shape(String),
    /// An integer instance was given to a prime-field reader or vice versa.
    #[error("expected {expected} instance")]
    WrongKind { expected: &'static str },
}

/// A validated instance over a prime field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    field: PrimeField,
    a: DenseMatrix,
    weights: Vec<BigRational>,
}

impl Instance {
    /// Builds an instance from rows of residues and one weight per line.
    ///
    /// Fails on odd `n`, mismatched weight count, or rank deficiency. An odd
    /// row count is accepted: [`Instance::parity_infeasible`] reports it.
    pub fn new(
        field: PrimeField,
        rows: &[Vec<u64>],
        weights: Vec<BigRational>,
    ) -> Result<Self, InstanceError> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != n) {
            return Err(InstanceError::Shape("ragged rows".into()));
        }
        if !n.is_multiple_of(2) {
            return Err(InstanceError::Shape(format!("n = {n} is odd")));
        }
        if weights.len() != n / 2 {
            return Err(InstanceError::Shape(format!(
                "{} weights for {} lines",
                weights.len(),
                n / 2
            )));
        }
        let a = DenseMatrix::from_rows(field, rows);
        let r = rank(&a);
        if r < m {
            return Err(InstanceError::RankDeficient { rank: r, rows: m });
        }
        Ok(Instance { field, a, weights })
    }

    /// The field GF(p).
    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// The representation matrix with row labels `0..m`, column labels `0..n`.
    pub fn matrix(&self) -> &DenseMatrix {
        &self.a
    }

    /// Number of rows `m`.
    pub fn m(&self) -> usize {
        self.a.rows()
    }

    /// Number of columns `n`.
    pub fn n(&self) -> usize {
        self.a.cols()
    }

    /// Number of lines `n/2`.
    pub fn num_lines(&self) -> usize {
        self.weights.len()
    }

    /// Line weights, indexed by line.
    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    /// The two columns of line `k`.
    pub fn line(&self, k: usize) -> (VertexId, VertexId) {
        (VertexId(2 * k as u32), VertexId(2 * k as u32 + 1))
    }

    /// Line containing column `v`.
    pub fn line_of(&self, v: VertexId) -> usize {
        v.index() / 2
    }

    /// True when `m` is odd, in which case no parity base exists.
    pub fn parity_infeasible(&self) -> bool {
        self.m() % 2 == 1
    }

    /// Total weight of a set of lines.
    pub fn weight_of(&self, lines: &[usize]) -> BigRational {
        lines
            .iter()
            .fold(BigRational::zero(), |acc, &k| acc + &self.weights[k])
    }

    /// Sum of all line weights.
    pub fn total_weight(&self) -> BigRational {
        self.weights.iter().fold(BigRational::zero(), |a, w| a + w)
    }

    /// Matrix rows as residues.
    pub fn rows(&self) -> Vec<Vec<u64>> {
        (0..self.m()).map(|i| self.a.row(i).to_vec()).collect()
    }

    /// Serializes to the text format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "mwpb 1").unwrap();
        writeln!(s, "field {}", self.field.modulus()).unwrap();
        writeln!(s, "size {} {}", self.m(), self.n()).unwrap();
        write_weights(&mut s, &self.weights);
        for i in 0..self.m() {
            let row: Vec<String> = self.a.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(s, "{}", row.join(" ")).unwrap();
        }
        s
    }

    /// A short digest identifying this instance (SHA-256 of its text form).
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let h = Sha256::digest(self.to_text().as_bytes());
        h.iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn write_weights(s: &mut String, weights: &[BigRational]) {
    let ws: Vec<String> = weights.iter().map(format_rational).collect();
    if ws.is_empty() {
        writeln!(s, "weights").unwrap();
    } else {
        writeln!(s, "weights {}", ws.join(" ")).unwrap();
    }
}

/// An instance with integer entries, to be solved over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerInstance {
    /// Row-major integer matrix.
    pub rows: Vec<Vec<BigInt>>,
    /// Line weights.
    pub weights: Vec<BigRational>,
}

impl IntegerInstance {
    /// Number of rows.
    pub fn m(&self) -> usize {
        self.rows.len()
    }

    /// Number of columns.
    pub fn n(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    /// Maximum absolute entry.
    pub fn gamma(&self) -> BigInt {
        self.rows
            .iter()
            .flatten()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Reduction modulo a prime, or `None` when the reduced matrix loses rank.
    pub fn reduce(&self, field: PrimeField) -> Option<Instance> {
        let rows: Vec<Vec<u64>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| field.reduce_big(x)).collect())
            .collect();
        Instance::new(field, &rows, self.weights.clone()).ok()
    }

    /// Serializes to the text format with `field 0`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "mwpb 1").unwrap();
        writeln!(s, "field 0").unwrap();
        writeln!(s, "size {} {}", self.m(), self.n()).unwrap();
        write_weights(&mut s, &self.weights);
        for r in &self.rows {
            let row: Vec<String> = r.iter().map(|v| v.to_string()).collect();
            writeln!(s, "{}", row.join(" ")).unwrap();
        }
        s
    }
}

/// Either kind of parsed instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedInstance {
    /// Matrix over GF(p).
    Prime(Instance),
    /// Integer matrix (declared `field 0`).
    Integer(IntegerInstance),
}

struct Tokens<'a> {
    lines: Vec<(usize, Vec<&'a str>)>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .filter_map(|(i, l)| {
                let l = l.split('#').next().unwrap_or("");
                let toks: Vec<&str> = l.split_whitespace().collect();
                (!toks.is_empty()).then_some((i + 1, toks))
            })
            .collect();
        Tokens { lines, pos: 0 }
    }

    fn next_line(&mut self) -> Result<(usize, Vec<&'a str>), InstanceError> {
        let r = self
            .lines
            .get(self.pos)
            .cloned()
            .ok_or(InstanceError::Malformed {
                line: self.lines.last().map_or(0, |l| l.0),
                msg: "unexpected end of input".into(),
            })?;
        self.pos += 1;
        Ok(r)
    }

    fn keyword(&mut self, kw: &str) -> Result<(usize, Vec<&'a str>), InstanceError> {
        let (ln, toks) = self.next_line()?;
        if toks[0] != kw {
            return Err(InstanceError::Malformed {
                line: ln,
                msg: format!("expected `{kw}`, found `{}`", toks[0]),
            });
        }
        Ok((ln, toks[1..].to_vec()))
    }

    fn remaining(&self) -> Option<usize> {
        self.lines.get(self.pos).map(|l| l.0)
    }
}

fn malformed(line: usize, msg: impl Into<String>) -> InstanceError {
    InstanceError::Malformed {
        line,
        msg: msg.into(),
    }
}

fn parse_usize(line: usize, s: &str) -> Result<usize, InstanceError> {
    s.parse()
        .map_err(|_| malformed(line, format!("expected a count, found `{s}`")))
}

/// Parses either kind of instance from text.
pub fn parse_any(text: &str) -> Result<ParsedInstance, InstanceError> {
    let mut t = Tokens::new(text);
    let (ln, magic) = t.keyword("mwpb")?;
    if magic != ["1"] {
        return Err(malformed(ln, "unsupported format version"));
    }
    let (ln, f) = t.keyword("field")?;
    if f.len() != 1 {
        return Err(malformed(ln, "expected `field <p>`"));
    }
    let p: u64 = f[0]
        .parse()
        .map_err(|_| malformed(ln, format!("bad modulus `{}`", f[0])))?;
    let (ln, sz) = t.keyword("size")?;
    if sz.len() != 2 {
        return Err(malformed(ln, "expected `size <m> <n>`"));
    }
    let m = parse_usize(ln, sz[0])?;
    let n = parse_usize(ln, sz[1])?;
    if n % 2 != 0 {
        return Err(malformed(ln, format!("n = {n} must be even")));
    }
    if m > n {
        return Err(malformed(ln, format!("m = {m} exceeds n = {n}")));
    }
    let (ln, ws) = t.keyword("weights")?;
    if ws.len() != n / 2 {
        return Err(malformed(
            ln,
            format!("expected {} weights, found {}", n / 2, ws.len()),
        ));
    }
    let weights = ws
        .iter()
        .map(|w| parse_rational(w).map_err(|e| malformed(ln, e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, toks) = t.next_line()?;
        if toks.len() != n {
            return Err(malformed(
                ln,
                format!("expected {n} entries, found {}", toks.len()),
            ));
        }
        rows.push(
            toks.iter()
                .map(|x| parse_rational(x).map_err(|e| malformed(ln, e.to_string())))
                .collect::<Result<_, _>>()?,
        );
    }
    if let Some(ln) = t.remaining() {
        return Err(malformed(ln, "trailing content after matrix rows"));
    }
    if p == 0 {
        // Clear denominators row by row; scaling a row keeps the matroid.
        let rows = rows
            .into_iter()
            .map(|r| {
                let l = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                r.into_iter()
                    .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
                    .collect()
            })
            .collect();
        return Ok(ParsedInstance::Integer(IntegerInstance { rows, weights }));
    }
    let field = PrimeField::new(p)?;
    let mut res = Vec::with_capacity(m);
    for r in rows {
        let mut out = Vec::with_capacity(n);
        for x in r {
            let num = field.reduce_big(x.numer());
            let den = field.reduce_big(x.denom());
            let inv = field
                .inv(den)
                .map_err(|_| malformed(0, "entry denominator divisible by the field size"))?;
            out.push(field.mul(num, inv));
        }
        res.push(out);
    }
    Ok(ParsedInstance::Prime(Instance::new(field, &res, weights)?))
}

/// Parses a prime-field instance.
pub fn parse_instance(text: &str) -> Result<Instance, InstanceError> {
    match parse_any(text)? {
        ParsedInstance::Prime(i) => Ok(i),
        ParsedInstance::Integer(_) => Err(InstanceError::WrongKind {
            expected: "prime-field",
        }),
    }
}

/// Parses an integer instance (`field 0`).
pub fn parse_integer_instance(text: &str) -> Result<IntegerInstance, InstanceError> {
    match parse_any(text)? {
        ParsedInstance::Integer(i) => Ok(i),
        ParsedInstance::Prime(_) => Err(InstanceError::WrongKind {
            expected: "integer (`field 0`)",
        }),
    }
}

/// Deterministic random instance with uniform entries and integer weights in
/// `[0, wmax]`, redrawn until the matrix has full row rank.
pub fn gen_random(
    seed: u64,
    m: usize,
    n: usize,
    p: u64,
    wmax: u64,
) -> Result<Instance, InstanceError> {
    if !n.is_multiple_of(2) || m > n {
        return Err(InstanceError::Shape(format!("m = {m}, n = {n}")));
    }
    let field = PrimeField::new(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..10_000 {
        let rows: Vec<Vec<u64>> = (0..m)
            .map(|_| (0..n).map(|_| rng.gen_range(0..p)).collect())
            .collect();
        let weights: Vec<BigRational> = (0..n / 2)
            .map(|_| rat(rng.gen_range(0..=wmax) as i64))
            .collect();
        match Instance::new(field, &rows, weights) {
            Ok(i) => return Ok(i),
            Err(InstanceError::RankDeficient { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(InstanceError::Shape(format!(
        "no full-rank {m}×{n} matrix found over GF({p})"
    )))
}

/// Deterministic random instance in which each entry is nonzero with
/// probability `density`, integer weights in `[0, wmax]`. Redrawn until the
/// matrix has full row rank; `None` if no draw succeeds.
pub fn gen_sparse(
    seed: u64,
    m: usize,
    n: usize,
    p: u64,
    density: f64,
    wmax: u64,
) -> Option<Instance> {
    if !n.is_multiple_of(2) || m > n || p < 2 {
        return None;
    }
    let field = PrimeField::new(p).ok()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        let rows: Vec<Vec<u64>> = (0..m)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        if rng.gen_bool(density) {
                            rng.gen_range(1..p)
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();
        let weights: Vec<BigRational> = (0..n / 2)
            .map(|_| rat(rng.gen_range(0..=wmax) as i64))
            .collect();
        if let Ok(i) = Instance::new(field, &rows, weights) {
            return Some(i);
        }
    }
    None
}

/// Deterministic random integer instance with entries in `[-amax, amax]`.
pub fn gen_random_integer(seed: u64, m: usize, n: usize, amax: i64, wmax: u64) -> IntegerInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..m)
        .map(|_| {
            (0..n)
                .map(|_| BigInt::from(rng.gen_range(-amax..=amax)))
                .collect()
        })
        .collect();
    let weights = (0..n / 2)
        .map(|_| rat(rng.gen_range(0..=wmax) as i64))
        .collect();
    IntegerInstance { rows, weights }
}

/// An undirected graph with rational edge weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    /// Number of vertices.
    pub vertices: usize,
    /// Edges `(u, v, w)` with `u ≠ v`, 0-based endpoints.
    pub edges: Vec<(usize, usize, BigRational)>,
}

impl WeightedGraph {
    /// Builds a graph, rejecting self-loops and out-of-range endpoints.
    pub fn new(
        vertices: usize,
        edges: Vec<(usize, usize, BigRational)>,
    ) -> Result<Self, InstanceError> {
        for (i, (u, v, _)) in edges.iter().enumerate() {
            if u == v || *u >= vertices || *v >= vertices {
                return Err(InstanceError::Shape(format!("bad edge #{i}: ({u}, {v})")));
            }
        }
        Ok(WeightedGraph { vertices, edges })
    }

    /// Parses `graph <n> <e>` followed by `e` lines `u v w` (0-based endpoints).
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        let mut t = Tokens::new(text);
        let (ln, hdr) = t.keyword("graph")?;
        if hdr.len() != 2 {
            return Err(malformed(ln, "expected `graph <n> <e>`"));
        }
        let nv = parse_usize(ln, hdr[0])?;
        let ne = parse_usize(ln, hdr[1])?;
        let mut edges = Vec::with_capacity(ne);
        for _ in 0..ne {
            let (ln, toks) = t.next_line()?;
            if toks.len() != 3 {
                return Err(malformed(ln, "expected `u v w`"));
            }
            let u = parse_usize(ln, toks[0])?;
            let v = parse_usize(ln, toks[1])?;
            let w = parse_rational(toks[2]).map_err(|e| malformed(ln, e.to_string()))?;
            edges.push((u, v, w));
        }
        if let Some(ln) = t.remaining() {
            return Err(malformed(ln, "trailing content after edges"));
        }
        Self::new(nv, edges)
    }

    /// Serializes to the graph text format.
    pub fn to_text(&self) -> String {
        let mut s = format!("graph {} {}\n", self.vertices, self.edges.len());
        for (u, v, w) in &self.edges {
            writeln!(s, "{u} {v} {}", format_rational(w)).unwrap();
        }
        s
    }

    /// Minimum weight of a perfect matching by exhaustive search, or `None`.
    pub fn min_perfect_matching(&self) -> Option<BigRational> {
        fn rec(g: &WeightedGraph, used: &mut Vec<bool>) -> Option<BigRational> {
            let Some(u) = used.iter().position(|&b| !b) else {
                return Some(BigRational::zero());
            };
            used[u] = true;
            let mut best: Option<BigRational> = None;
            for (a, b, w) in &g.edges {
                let v = if *a == u {
                    *b
                } else if *b == u {
                    *a
                } else {
                    continue;
                };
                if used[v] {
                    continue;
                }
                used[v] = true;
                if let Some(rest) = rec(g, used) {
                    let tot = rest + w;
                    if best.as_ref().is_none_or(|b| tot < *b) {
                        best = Some(tot);
                    }
                }
                used[v] = false;
            }
            used[u] = false;
            best
        }
        rec(self, &mut vec![false; self.vertices])
    }
}

/// Random graph on `vertices` vertices with each pair present with
/// probability `density`, integer weights in `[0, wmax]`.
pub fn gen_random_graph(seed: u64, vertices: usize, density: f64, wmax: u64) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..vertices {
        for v in u + 1..vertices {
            if rng.gen_bool(density) {
                edges.push((u, v, rat(rng.gen_range(0..=wmax) as i64)));
            }
        }
    }
    WeightedGraph { vertices, edges }
}

/// Encodes perfect matching as parity bases over GF(`p`).
///
/// Edge `e = (u, v)` becomes the line of columns `χ_u`, `χ_v`. A graph vertex
/// covered by no edge gives a zero row, so the instance is rejected with
/// [`InstanceError::RankDeficient`]; such a graph has no perfect matching.
pub fn reduce_matching_over(g: &WeightedGraph, p: u64) -> Result<Instance, InstanceError> {
    let field = PrimeField::new(p)?;
    let m = g.vertices;
    let n = 2 * g.edges.len();
    let mut rows = vec![vec![0u64; n]; m];
    for (k, (u, v, _)) in g.edges.iter().enumerate() {
        rows[*u][2 * k] = 1;
        rows[*v][2 * k + 1] = 1;
    }
    let weights = g.edges.iter().map(|e| e.2.clone()).collect();
    Instance::new(field, &rows, weights)
}

/// Matching reduction over the default field GF(2).
pub fn reduce_matching(g: &WeightedGraph) -> Result<Instance, InstanceError> {
    reduce_matching_over(g, 2)
}

/// Converts a small rational to `f64` for display purposes only.
pub fn approx_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_instance_parses() {
        let t = "mwpb 1\nfield 7\nsize 2 2\nweights 5\n1 0\n0 1\n";
        let i = parse_instance(t).unwrap();
        assert_eq!(i.m(), 2);
        assert_eq!(i.weights(), &[rat(5)]);
        assert!(!i.parity_infeasible());
        assert_eq!(parse_instance(&i.to_text()).unwrap(), i);
    }

    #[test]
    fn odd_rows_flagged() {
        let t = "mwpb 1\nfield 2\nsize 3 4\nweights 1 1\n1 0 0 0\n0 1 0 0\n0 0 1 0\n";
        assert!(parse_instance(t).unwrap().parity_infeasible());
    }

    #[test]
    fn malformed_inputs_rejected() {
        assert!(parse_instance("mwpb 2\n").is_err());
        assert!(parse_instance("mwpb 1\nfield 6\nsize 2 2\nweights 1\n1 0\n0 1\n").is_err());
        assert!(matches!(
            parse_instance("mwpb 1\nfield 7\nsize 2 2\nweights 1\n1 0\n2 0\n"),
            Err(InstanceError::RankDeficient { .. })
        ));
        assert!(parse_instance("mwpb 1\nfield 7\nsize 2 2\nweights 1 2\n1 0\n0 1\n").is_err());
    }

    #[test]
    fn integer_instance_clears_denominators() {
        let t = "mwpb 1\nfield 0\nsize 2 2\nweights 1/2\n1/2 1\n0 -3\n";
        let i = parse_integer_instance(t).unwrap();
        assert_eq!(i.rows[0], vec![BigInt::from(1), BigInt::from(2)]);
        assert_eq!(i.rows[1], vec![BigInt::from(0), BigInt::from(-3)]);
    }

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn generation_is_deterministic() {
        assert_eq!(
            gen_random(11, 4, 10, 7, 50).unwrap(),
            gen_random(11, 4, 10, 7, 50).unwrap()
        );
        assert_ne!(
            gen_random(11, 4, 10, 7, 50).unwrap(),
            gen_random(12, 4, 10, 7, 50).unwrap()
        );
        assert_eq!(
            gen_random_integer(3, 2, 6, 5, 9),
            gen_random_integer(3, 2, 6, 5, 9)
        );
        assert_eq!(
            gen_random_graph(5, 6, 0.5, 9),
            gen_random_graph(5, 6, 0.5, 9)
        );
    }

    #[test]
    fn generated_matrices_have_full_rank() {
        for seed in 0..20 {
            let i = gen_random(seed, 4, 12, 7, 50).unwrap();
            assert_eq!(crate::linalg::rank(i.matrix()), 4);
            assert!(i.weights().iter().all(|w| *w >= rat(0) && *w <= rat(50)));
        }
        assert!(gen_random(0, 5, 4, 7, 1).is_err());
        assert!(gen_random(0, 2, 5, 7, 1).is_err());
    }

    #[test]
    fn optimal_line_pairs_cover_all_supports() {
        let mut seen = std::collections::BTreeSet::new();
        for seed in 0..100 {
            let i = gen_random(seed, 4, 12, 7, 50).unwrap();
            if let crate::oracle::BruteForce::Optimal { lines, .. } =
                crate::oracle::brute_force(&i).unwrap()
            {
                seen.insert(lines);
            }
        }
        assert_eq!(seen.len(), 15);
    }

    #[test]
    fn single_edge_reduces_to_its_weight() {
        let g = WeightedGraph::new(2, vec![(0, 1, rat(3))]).unwrap();
        let i = reduce_matching(&g).unwrap();
        assert_eq!((i.m(), i.n()), (2, 2));
        assert_eq!(
            crate::oracle::brute_force(&i).unwrap().weight(),
            Some(&rat(3))
        );
    }

    #[test]
    fn triangle_is_parity_infeasible() {
        let g =
            WeightedGraph::new(3, vec![(0, 1, rat(1)), (1, 2, rat(1)), (0, 2, rat(1))]).unwrap();
        assert!(reduce_matching(&g).unwrap().parity_infeasible());
        assert_eq!(g.min_perfect_matching(), None);
    }

    #[test]
    fn k4_matches_its_three_perfect_matchings() {
        let g = gen_random_graph(9, 4, 1.0, 30);
        assert_eq!(g.edges.len(), 6);
        let w = |a: usize, b: usize| {
            g.edges
                .iter()
                .find(|e| (e.0, e.1) == (a.min(b), a.max(b)))
                .unwrap()
                .2
                .clone()
        };
        let best = [w(0, 1) + w(2, 3), w(0, 2) + w(1, 3), w(0, 3) + w(1, 2)]
            .into_iter()
            .min()
            .unwrap();
        assert_eq!(g.min_perfect_matching(), Some(best.clone()));
        let i = reduce_matching(&g).unwrap();
        assert_eq!(
            crate::oracle::brute_force(&i).unwrap().weight(),
            Some(&best)
        );
    }

    #[test]
    fn uncovered_vertex_is_rank_deficient() {
        let g = WeightedGraph::new(4, vec![(0, 1, rat(1)), (1, 2, rat(1))]).unwrap();
        assert!(matches!(
            reduce_matching(&g),
            Err(InstanceError::RankDeficient { .. })
        ));
    }

    #[test]
    fn graph_text_round_trip() {
        let g = gen_random_graph(4, 7, 0.6, 20);
        assert_eq!(WeightedGraph::parse(&g.to_text()).unwrap(), g);
        assert!(WeightedGraph::parse("graph 2 1\n0 0 1\n").is_err());
        assert!(WeightedGraph::parse("graph 2 1\n0 1 1\n0 1 1\n").is_err());
    }

    #[test]
    fn comments_and_fractions_accepted() {
        let t = "# header\nmwpb 1\nfield 5\nsize 2 4 # shape\nweights 1/2 -3\n1 0 1 2\n0 1 4 4\n";
        let i = parse_instance(t).unwrap();
        assert_eq!(
            i.weights(),
            &[BigRational::new(1.into(), 2.into()), rat(-3)]
        );
        assert_eq!(i.field(), gf(5));
        assert_eq!(i.line(1), (VertexId(2), VertexId(3)));
        assert_eq!(i.line_of(VertexId(3)), 1);
    }

    #[test]
    fn kind_mismatch_reported() {
        let t = "mwpb 1\nfield 0\nsize 2 2\nweights 1\n1 0\n0 1\n";
        assert!(matches!(
            parse_instance(t),
            Err(InstanceError::WrongKind { .. })
        ));
        let t = "mwpb 1\nfield 7\nsize 2 2\nweights 1\n1 0\n0 1\n";
        assert!(matches!(
            parse_integer_instance(t),
            Err(InstanceError::WrongKind { .. })
        ));
    }

    #[test]
    fn digest_tracks_content() {
        let a = gen_random(1, 2, 6, 7, 9).unwrap();
        let b = gen_random(2, 2, 6, 7, 9).unwrap();
        assert_eq!(a.digest(), parse_instance(&a.to_text()).unwrap().digest());
        assert_ne!(a.digest(), b.digest());
    }

    proptest::proptest! {
        #[test]
        fn text_round_trip(seed in 0u64..10_000, half in 1usize..=4, extra in 0usize..=4, p in proptest::sample::select(vec![2u64, 7, 10007])) {
            let m = 2 * half;
            let i = gen_random(seed, m, m + 2 * extra, p, 50).unwrap();
            proptest::prop_assert_eq!(parse_instance(&i.to_text()).unwrap(), i);
        }

        #[test]
        fn integer_text_round_trip(seed in 0u64..10_000, m in 1usize..=4, n in 2usize..=5) {
            let i = gen_random_integer(seed, m, 2 * n, 5, 20);
            proptest::prop_assert_eq!(parse_integer_instance(&i.to_text()).unwrap(), i);
        }
    }
}
