//! Dense matrices over GF(p) with labeled axes.
//!
//! Rows and columns carry stable [`VertexId`] labels so that bud and tip
//! vertices can be added and deleted without renumbering anything else.
//! The central operation is [`pivot_around`], which moves a fundamental
//! cocircuit matrix from a base `B` to the base `B △ S`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::field::{ops, BigRational, PrimeField};

/// Stable identifier of a vertex (a matrix column of the instance, or an
/// auxiliary bud/tip vertex created by the solver).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

impl VertexId {
    /// The identifier as an index.
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Errors raised by the linear-algebra layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    /// A square submatrix that must be invertible is singular.
    #[error("singular submatrix")]
    Singular,
    /// A label is not present on the expected axis.
    #[error("unknown label {0}")]
    UnknownLabel(VertexId),
    /// A label appears twice on one axis.
    #[error("duplicate label {0}")]
    DuplicateLabel(VertexId),
    /// The matrix does not have full row rank.
    #[error("matrix has rank {rank} but {rows} rows")]
    RankDeficient { rank: usize, rows: usize },
    /// The pivot set does not split into equally many row and column labels.
    #[error("pivot set is not square: {rows} row labels vs {cols} column labels")]
    NotSquare { rows: usize, cols: usize },
}

/// A dense row-major matrix over a prime field with labeled rows and columns.
#[derive(Clone)]
pub struct DenseMatrix {
    field: PrimeField,
    data: Vec<u64>,
    row_labels: Vec<VertexId>,
    col_labels: Vec<VertexId>,
    row_pos: HashMap<VertexId, usize>,
    col_pos: HashMap<VertexId, usize>,
}

impl PartialEq for DenseMatrix {
    /// Two matrices are equal when they have the same label sets and agree on
    /// every labeled entry, regardless of the physical order of the axes.
    fn eq(&self, other: &Self) -> bool {
        if self.field != other.field || self.rows() != other.rows() || self.cols() != other.cols() {
            return false;
        }
        for &r in &self.row_labels {
            if !other.row_pos.contains_key(&r) {
                return false;
            }
        }
        for &c in &self.col_labels {
            if !other.col_pos.contains_key(&c) {
                return false;
            }
        }
        self.row_labels.iter().all(|&r| {
            self.col_labels
                .iter()
                .all(|&c| self.entry(r, c) == other.entry(r, c))
        })
    }
}

impl Eq for DenseMatrix {}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix over GF({})", self.field.modulus())?;
        write!(f, "      ")?;
        for c in &self.col_labels {
            write!(f, "{:>5}", c.0)?;
        }
        writeln!(f)?;
        for (i, r) in self.row_labels.iter().enumerate() {
            write!(f, "{:>5}:", r.0)?;
            for j in 0..self.cols() {
                write!(f, "{:>5}", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn position_map(labels: &[VertexId]) -> Result<HashMap<VertexId, usize>, LinalgError> {
    let mut map = HashMap::with_capacity(labels.len());
    for (i, &l) in labels.iter().enumerate() {
        if map.insert(l, i).is_some() {
            return Err(LinalgError::DuplicateLabel(l));
        }
    }
    Ok(map)
}

impl DenseMatrix {
    /// A zero matrix with the given labels.
    pub fn zeros(
        field: PrimeField,
        row_labels: Vec<VertexId>,
        col_labels: Vec<VertexId>,
    ) -> Result<Self, LinalgError> {
        let row_pos = position_map(&row_labels)?;
        let col_pos = position_map(&col_labels)?;
        Ok(DenseMatrix {
            field,
            data: vec![0; row_labels.len() * col_labels.len()],
            row_labels,
            col_labels,
            row_pos,
            col_pos,
        })
    }

    /// Builds a matrix from rows of residues with labels `0..m` and `0..n`.
    pub fn from_rows(field: PrimeField, rows: &[Vec<u64>]) -> Self {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        let mut out = Self::zeros(
            field,
            (0..m as u32).map(VertexId).collect(),
            (0..n as u32).map(VertexId).collect(),
        )
        .expect("fresh labels are distinct");
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                out.set(i, j, v % field.modulus());
            }
        }
        out
    }

    /// The underlying field.
    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.row_labels.len()
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.col_labels.len()
    }

    /// Row labels in physical order.
    pub fn row_labels(&self) -> &[VertexId] {
        &self.row_labels
    }

    /// Column labels in physical order.
    pub fn col_labels(&self) -> &[VertexId] {
        &self.col_labels
    }

    /// Physical index of a row label.
    #[inline]
    pub fn row_index(&self, l: VertexId) -> Option<usize> {
        self.row_pos.get(&l).copied()
    }

    /// Physical index of a column label.
    #[inline]
    pub fn col_index(&self, l: VertexId) -> Option<usize> {
        self.col_pos.get(&l).copied()
    }

    /// True if `l` labels a row.
    #[inline]
    pub fn has_row(&self, l: VertexId) -> bool {
        self.row_pos.contains_key(&l)
    }

    /// True if `l` labels a column.
    #[inline]
    pub fn has_col(&self, l: VertexId) -> bool {
        self.col_pos.contains_key(&l)
    }

    /// Entry by physical position.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.col_labels.len() + j]
    }

    /// Sets an entry by physical position.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        let n = self.col_labels.len();
        self.data[i * n + j] = v;
    }

    /// Entry by labels, or `None` if either label is absent.
    pub fn entry(&self, r: VertexId, c: VertexId) -> Option<u64> {
        Some(self.get(self.row_index(r)?, self.col_index(c)?))
    }

    /// Sets an entry by labels.
    pub fn set_entry(&mut self, r: VertexId, c: VertexId, v: u64) -> Result<(), LinalgError> {
        let i = self.row_index(r).ok_or(LinalgError::UnknownLabel(r))?;
        let j = self.col_index(c).ok_or(LinalgError::UnknownLabel(c))?;
        self.set(i, j, v);
        Ok(())
    }

    /// A physical row as a slice.
    pub fn row(&self, i: usize) -> &[u64] {
        let n = self.cols();
        &self.data[i * n..(i + 1) * n]
    }

    /// Appends a zero row with label `l`.
    pub fn push_row(&mut self, l: VertexId) -> Result<usize, LinalgError> {
        if self.row_pos.contains_key(&l) || self.col_pos.contains_key(&l) {
            return Err(LinalgError::DuplicateLabel(l));
        }
        let i = self.row_labels.len();
        self.row_labels.push(l);
        self.row_pos.insert(l, i);
        self.data
            .extend(std::iter::repeat_n(0, self.col_labels.len()));
        Ok(i)
    }

    /// Appends a zero column with label `l`.
    pub fn push_col(&mut self, l: VertexId) -> Result<usize, LinalgError> {
        if self.row_pos.contains_key(&l) || self.col_pos.contains_key(&l) {
            return Err(LinalgError::DuplicateLabel(l));
        }
        let n = self.col_labels.len();
        let m = self.row_labels.len();
        let mut data = Vec::with_capacity(m * (n + 1));
        for i in 0..m {
            data.extend_from_slice(&self.data[i * n..(i + 1) * n]);
            data.push(0);
        }
        self.data = data;
        self.col_labels.push(l);
        self.col_pos.insert(l, n);
        Ok(n)
    }

    /// Deletes the row or column carrying label `l`.
    pub fn remove_label(&mut self, l: VertexId) -> Result<(), LinalgError> {
        if let Some(i) = self.row_index(l) {
            let n = self.cols();
            self.data.drain(i * n..(i + 1) * n);
            self.row_labels.remove(i);
            self.row_pos = position_map(&self.row_labels)?;
            Ok(())
        } else if let Some(j) = self.col_index(l) {
            let n = self.cols();
            let m = self.rows();
            let mut data = Vec::with_capacity(m * (n - 1));
            for i in 0..m {
                for jj in 0..n {
                    if jj != j {
                        data.push(self.data[i * n + jj]);
                    }
                }
            }
            self.data = data;
            self.col_labels.remove(j);
            self.col_pos = position_map(&self.col_labels)?;
            Ok(())
        } else {
            Err(LinalgError::UnknownLabel(l))
        }
    }

    /// The square block `C[X ∩ rows, X ∖ rows]` as a dense row-major array,
    /// with row labels and column labels each sorted ascending.
    pub fn block(&self, x: &[VertexId]) -> Result<(Vec<usize>, Vec<usize>), LinalgError> {
        let mut ri = Vec::new();
        let mut ci = Vec::new();
        let mut xs: Vec<VertexId> = x.to_vec();
        xs.sort_unstable();
        xs.dedup();
        for &l in &xs {
            if let Some(i) = self.row_index(l) {
                ri.push(i);
            } else if let Some(j) = self.col_index(l) {
                ci.push(j);
            } else {
                return Err(LinalgError::UnknownLabel(l));
            }
        }
        Ok((ri, ci))
    }

    /// Extracts the submatrix with the given physical row and column indices.
    pub fn submatrix(&self, ri: &[usize], ci: &[usize]) -> Vec<u64> {
        let mut out = Vec::with_capacity(ri.len() * ci.len());
        for &i in ri {
            for &j in ci {
                out.push(self.get(i, j));
            }
        }
        out
    }

    /// Raw row-major storage.
    pub fn data(&self) -> &[u64] {
        &self.data
    }
}

/// Rank of a `rows × cols` row-major array over `field`.
pub fn rank_of(field: PrimeField, rows: usize, cols: usize, data: &[u64]) -> usize {
    let mut a = data.to_vec();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        if piv != r {
            for j in 0..cols {
                a.swap(piv * cols + j, r * cols + j);
            }
        }
        let inv = field.inv(a[r * cols + c]).expect("nonzero pivot");
        for i in r + 1..rows {
            let f = a[i * cols + c];
            if f == 0 {
                continue;
            }
            let g = field.mul(f, inv);
            for j in c..cols {
                let t = field.mul(g, a[r * cols + j]);
                a[i * cols + j] = field.sub(a[i * cols + j], t);
            }
        }
        ops::charge(((rows - r) * (cols - c)) as u64);
        r += 1;
    }
    r
}

/// Rank of a labeled matrix.
pub fn rank(m: &DenseMatrix) -> usize {
    rank_of(m.field, m.rows(), m.cols(), &m.data)
}

/// Determinant of a `k × k` row-major array.
pub fn determinant(field: PrimeField, k: usize, data: &[u64]) -> u64 {
    let mut a = data.to_vec();
    let mut det = 1u64;
    for c in 0..k {
        let Some(piv) = (c..k).find(|&i| a[i * k + c] != 0) else {
            return 0;
        };
        if piv != c {
            for j in 0..k {
                a.swap(piv * k + j, c * k + j);
            }
            det = field.neg(det);
        }
        let p = a[c * k + c];
        det = field.mul(det, p);
        let inv = field.inv(p).expect("nonzero pivot");
        for i in c + 1..k {
            let f = a[i * k + c];
            if f == 0 {
                continue;
            }
            let g = field.mul(f, inv);
            for j in c..k {
                let t = field.mul(g, a[c * k + j]);
                a[i * k + j] = field.sub(a[i * k + j], t);
            }
        }
        ops::charge(((k - c) * (k - c)) as u64);
    }
    det
}

/// Inverse of a `k × k` row-major array, or `None` if it is singular.
pub fn inverse(field: PrimeField, k: usize, data: &[u64]) -> Option<Vec<u64>> {
    let w = 2 * k;
    let mut a = vec![0u64; k * w];
    for i in 0..k {
        a[i * w..i * w + k].copy_from_slice(&data[i * k..(i + 1) * k]);
        a[i * w + k + i] = 1;
    }
    for c in 0..k {
        let piv = (c..k).find(|&i| a[i * w + c] != 0)?;
        if piv != c {
            for j in 0..w {
                a.swap(piv * w + j, c * w + j);
            }
        }
        let inv = field.inv(a[c * w + c]).ok()?;
        for j in 0..w {
            a[c * w + j] = field.mul(a[c * w + j], inv);
        }
        for i in 0..k {
            if i == c {
                continue;
            }
            let f = a[i * w + c];
            if f == 0 {
                continue;
            }
            for j in 0..w {
                let t = field.mul(f, a[c * w + j]);
                a[i * w + j] = field.sub(a[i * w + j], t);
            }
        }
        ops::charge((k * w) as u64);
    }
    let mut out = vec![0u64; k * k];
    for i in 0..k {
        out[i * k..(i + 1) * k].copy_from_slice(&a[i * w + k..(i + 1) * w]);
    }
    Some(out)
}

/// Greedy minimum-potential base of the column matroid of `a`.
///
/// Columns are scanned by increasing `p`, ties by increasing column index,
/// and kept whenever they are independent of the columns kept so far.
/// Returns physical column indices in ascending order.
pub fn greedy_min_base(a: &DenseMatrix, p: &[BigRational]) -> Result<Vec<usize>, LinalgError> {
    let m = a.rows();
    let n = a.cols();
    assert_eq!(p.len(), n, "one potential per column");
    let f = a.field;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| p[i].cmp(&p[j]).then(i.cmp(&j)));
    // Reduced basis vectors, each with a distinct pivot coordinate.
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut chosen = Vec::new();
    for &j in &order {
        if chosen.len() == m {
            break;
        }
        let mut v: Vec<u64> = (0..m).map(|i| a.get(i, j)).collect();
        for (piv, b) in &basis {
            let c = v[*piv];
            if c != 0 {
                for i in 0..m {
                    let t = f.mul(c, b[i]);
                    v[i] = f.sub(v[i], t);
                }
            }
        }
        ops::charge((basis.len() * m) as u64);
        if let Some(piv) = (0..m).find(|&i| v[i] != 0) {
            let inv = f.inv(v[piv]).expect("nonzero");
            for x in v.iter_mut() {
                *x = f.mul(*x, inv);
            }
            basis.push((piv, v));
            chosen.push(j);
        }
    }
    if chosen.len() < m {
        return Err(LinalgError::RankDeficient {
            rank: chosen.len(),
            rows: m,
        });
    }
    chosen.sort_unstable();
    Ok(chosen)
}

/// Fundamental cocircuit matrix `A[U,B]⁻¹ A[U, V∖B]`.
///
/// `base` lists column labels of `a`. The result has row labels `base` (in
/// the given order) and column labels `V ∖ B` in the column order of `a`.
pub fn cocircuit_matrix(a: &DenseMatrix, base: &[VertexId]) -> Result<DenseMatrix, LinalgError> {
    let m = a.rows();
    let f = a.field;
    if base.len() != m {
        return Err(LinalgError::Singular);
    }
    let bidx: Vec<usize> = base
        .iter()
        .map(|&l| a.col_index(l).ok_or(LinalgError::UnknownLabel(l)))
        .collect::<Result<_, _>>()?;
    let ab = a.submatrix(&(0..m).collect::<Vec<_>>(), &bidx);
    let inv = inverse(f, m, &ab).ok_or(LinalgError::Singular)?;
    let in_base: std::collections::HashSet<usize> = bidx.iter().copied().collect();
    let nonbase: Vec<usize> = (0..a.cols()).filter(|j| !in_base.contains(j)).collect();
    let col_labels: Vec<VertexId> = nonbase.iter().map(|&j| a.col_labels[j]).collect();
    let mut out = DenseMatrix::zeros(f, base.to_vec(), col_labels)?;
    for i in 0..m {
        for (jj, &j) in nonbase.iter().enumerate() {
            let mut s = 0u64;
            for k in 0..m {
                s = f.add(s, f.mul(inv[i * m + k], a.get(k, j)));
            }
            out.set(i, jj, s);
        }
    }
    ops::charge((m * m * nonbase.len()) as u64);
    Ok(out)
}

/// Pivoting around `S` (block inverse of the square block `C[S]`).
///
/// With `α = C[S∩rows, S∖rows]` the result maps rows `(S∖rows) ∪ (rows∖S)`
/// and columns `(S∩rows) ∪ (cols∖S)` to
/// `[[α⁻¹, α⁻¹β], [−γα⁻¹, δ − γα⁻¹β]]`. Physical positions of the pivoted
/// rows are reused for the incoming labels in ascending label order.
pub fn pivot_around(c: &DenseMatrix, s: &[VertexId]) -> Result<DenseMatrix, LinalgError> {
    let (ri, ci) = c.block(s)?;
    if ri.len() != ci.len() {
        return Err(LinalgError::NotSquare {
            rows: ri.len(),
            cols: ci.len(),
        });
    }
    let k = ri.len();
    if k == 0 {
        return Ok(c.clone());
    }
    let f = c.field;
    let alpha = c.submatrix(&ri, &ci);
    // ainv is indexed (column of α) × (row of α).
    let ainv = inverse(f, k, &alpha).ok_or(LinalgError::Singular)?;
    let m = c.rows();
    let n = c.cols();
    let mut is_piv_row = vec![usize::MAX; m];
    for (a, &i) in ri.iter().enumerate() {
        is_piv_row[i] = a;
    }
    let mut is_piv_col = vec![usize::MAX; n];
    for (b, &j) in ci.iter().enumerate() {
        is_piv_col[j] = b;
    }
    // x = α⁻¹ · C[S∩rows, *]  (k × n), indexed by pivot column slot.
    let mut x = vec![0u64; k * n];
    for a in 0..k {
        for j in 0..n {
            let mut s = 0u64;
            for b in 0..k {
                let v = c.get(ri[b], j);
                if v != 0 {
                    s = f.add(s, f.mul(ainv[a * k + b], v));
                }
            }
            x[a * n + j] = s;
        }
    }
    let mut out = c.clone();
    for (a, &i) in ri.iter().enumerate() {
        out.row_labels[i] = c.col_labels[ci[a]];
    }
    for (b, &j) in ci.iter().enumerate() {
        out.col_labels[j] = c.row_labels[ri[b]];
    }
    out.row_pos = position_map(&out.row_labels)?;
    out.col_pos = position_map(&out.col_labels)?;
    for i in 0..m {
        let pa = is_piv_row[i];
        for j in 0..n {
            let pb = is_piv_col[j];
            let v = match (pa != usize::MAX, pb != usize::MAX) {
                // row ci[pa] of α⁻¹ in the new layout: new row label = column
                // label ci[pa]; new column label = old row label ri[pb].
                (true, true) => ainv[pa * k + pb],
                (true, false) => x[pa * n + j],
                (false, true) => {
                    let mut s = 0u64;
                    for a in 0..k {
                        let g = c.get(i, ci[a]);
                        if g != 0 {
                            s = f.add(s, f.mul(g, ainv[a * k + pb]));
                        }
                    }
                    f.neg(s)
                }
                (false, false) => {
                    let mut s = c.get(i, j);
                    for a in 0..k {
                        let g = c.get(i, ci[a]);
                        if g != 0 {
                            s = f.sub(s, f.mul(g, x[a * n + j]));
                        }
                    }
                    s
                }
            };
            out.set(i, j, v);
        }
    }
    ops::charge((k * k * k + 2 * k * m * n) as u64);
    Ok(out)
}

/// Decides whether `C[X ∩ rows, X ∖ rows]` is square and nonsingular.
pub fn is_nonsingular_sub(c: &DenseMatrix, x: &[VertexId]) -> Result<bool, LinalgError> {
    let (ri, ci) = c.block(x)?;
    if ri.len() != ci.len() {
        return Ok(false);
    }
    if ri.is_empty() {
        return Ok(true);
    }
    let sub = c.submatrix(&ri, &ci);
    Ok(determinant(c.field, ri.len(), &sub) != 0)
}
