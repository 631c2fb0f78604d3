//! Quasi-cyclic base matrices, expanded sparse parity check matrices and
//! syndromes.
//!
//! A [`BaseMatrix`] is the compact description of a quasi-cyclic LDPC code: a
//! grid of circulant shift values over an expansion factor `z`. Expanding it
//! with [`expand_base`] yields a [`ParityCheckMatrix`], which stores the Tanner
//! graph as compressed row and column adjacency lists.
//!
//! Circulant convention: a block with shift `s` has a one at local position
//! `(r, (r + s) mod z)` for every local row `r`, i.e. the identity cyclically
//! shifted to the right by `s`.

mod alist;
mod text;

pub use alist::{parse_alist, write_alist};
pub use text::{load_base_matrix, parse_base_matrix, write_base_matrix};

use thiserror::Error;

/// Errors raised while constructing or parsing matrices.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("base matrix dimensions must be positive (got {rows}x{cols}, z={z})")]
    EmptyBase { rows: usize, cols: usize, z: usize },
    #[error("base matrix has {got} entries, expected {expected}")]
    EntryCount { expected: usize, got: usize },
    #[error("shift {shift} at block ({row}, {col}) is outside [0, {z})")]
    ShiftOutOfRange {
        row: usize,
        col: usize,
        shift: usize,
        z: usize,
    },
    #[error("incidence ({row}, {col}) outside a {m}x{n} matrix")]
    IncidenceOutOfRange {
        row: usize,
        col: usize,
        m: usize,
        n: usize,
    },
    #[error("input has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for MatrixError {
    fn from(e: std::io::Error) -> Self {
        MatrixError::Io(e.to_string())
    }
}

/// Grid of circulant shifts describing a quasi-cyclic code.
///
/// `None` entries are null blocks (the `z x z` zero matrix).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaseMatrix {
    rows: usize,
    cols: usize,
    z: usize,
    entries: Vec<Option<usize>>,
}

impl BaseMatrix {
    /// Builds a base matrix from row-major entries, validating dimensions and
    /// shift ranges.
    pub fn new(
        rows: usize,
        cols: usize,
        z: usize,
        entries: Vec<Option<usize>>,
    ) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 || z == 0 {
            return Err(MatrixError::EmptyBase { rows, cols, z });
        }
        if entries.len() != rows * cols {
            return Err(MatrixError::EntryCount {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        for (i, e) in entries.iter().enumerate() {
            if let Some(shift) = *e {
                if shift >= z {
                    return Err(MatrixError::ShiftOutOfRange {
                        row: i / cols,
                        col: i % cols,
                        shift,
                        z,
                    });
                }
            }
        }
        Ok(BaseMatrix {
            rows,
            cols,
            z,
            entries,
        })
    }

    /// Builds a base matrix from signed rows where `-1` marks a null block.
    pub fn from_signed_rows(z: usize, rows: &[Vec<i64>]) -> Result<Self, MatrixError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != ncols {
                return Err(MatrixError::EntryCount {
                    expected: nrows * ncols,
                    got: rows.iter().map(Vec::len).sum(),
                });
            }
            for (c, &v) in row.iter().enumerate() {
                entries.push(match v {
                    -1 => None,
                    v if v >= 0 => Some(v as usize),
                    v => {
                        return Err(MatrixError::Parse {
                            line: r + 1,
                            column: c + 1,
                            message: format!("negative shift {v} (only -1 marks a null block)"),
                        })
                    }
                });
            }
        }
        BaseMatrix::new(nrows, ncols, z, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Expansion factor.
    pub fn z(&self) -> usize {
        self.z
    }

    /// Shift at block `(row, col)`, `None` for a null block.
    pub fn get(&self, row: usize, col: usize) -> Option<usize> {
        self.entries[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, shift: Option<usize>) {
        if let Some(s) = shift {
            assert!(s < self.z, "shift {s} out of range for z={}", self.z);
        }
        self.entries[row * self.cols + col] = shift;
    }

    pub fn entries(&self) -> &[Option<usize>] {
        &self.entries
    }

    /// Number of non-null blocks.
    pub fn nonnull_count(&self) -> usize {
        self.entries.iter().filter(|e| e.is_some()).count()
    }

    /// Iterates over `(row, col, shift)` for non-null blocks, row-major.
    pub fn iter_nonnull(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter_map(move |(i, e)| e.map(|s| (i / self.cols, i % self.cols, s)))
    }
}

/// Sparse binary parity check matrix stored as a Tanner graph.
///
/// Rows (check nodes) and columns (variable nodes) are both kept in
/// compressed form. Edges are numbered in row-major order; `col_edges` maps
/// each column entry to its edge number so that decoders can address
/// per-edge message storage from either side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    m: usize,
    n: usize,
    row_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    col_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    col_edges: Vec<usize>,
}

impl ParityCheckMatrix {
    /// Builds a matrix from a list of `(row, col)` incidences. Duplicates are
    /// merged.
    pub fn from_incidences(
        m: usize,
        n: usize,
        incidences: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, MatrixError> {
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (r, c) in incidences {
            if r >= m || c >= n {
                return Err(MatrixError::IncidenceOutOfRange { row: r, col: c, m, n });
            }
            rows[r].push(c);
        }
        for row in rows.iter_mut() {
            row.sort_unstable();
            row.dedup();
        }
        Ok(Self::from_sorted_rows(m, n, &rows))
    }

    fn from_sorted_rows(m: usize, n: usize, rows: &[Vec<usize>]) -> Self {
        let mut row_ptr = Vec::with_capacity(m + 1);
        let mut row_idx = Vec::new();
        row_ptr.push(0);
        for row in rows {
            row_idx.extend_from_slice(row);
            row_ptr.push(row_idx.len());
        }
        let mut col_count = vec![0usize; n];
        for &c in &row_idx {
            col_count[c] += 1;
        }
        let mut col_ptr = Vec::with_capacity(n + 1);
        col_ptr.push(0);
        for c in 0..n {
            col_ptr.push(col_ptr[c] + col_count[c]);
        }
        let mut fill = col_ptr[..n].to_vec();
        let mut col_idx = vec![0usize; row_idx.len()];
        let mut col_edges = vec![0usize; row_idx.len()];
        for r in 0..m {
            for e in row_ptr[r]..row_ptr[r + 1] {
                let c = row_idx[e];
                col_idx[fill[c]] = r;
                col_edges[fill[c]] = e;
                fill[c] += 1;
            }
        }
        ParityCheckMatrix {
            m,
            n,
            row_ptr,
            row_idx,
            col_ptr,
            col_idx,
            col_edges,
        }
    }

    /// Number of check nodes (rows).
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of variable nodes (columns).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of ones (Tanner graph edges).
    pub fn num_edges(&self) -> usize {
        self.row_idx.len()
    }

    /// Sorted column indices of row `r`.
    pub fn row(&self, r: usize) -> &[usize] {
        &self.row_idx[self.row_ptr[r]..self.row_ptr[r + 1]]
    }

    /// Sorted row indices of column `c`.
    pub fn col(&self, c: usize) -> &[usize] {
        &self.col_idx[self.col_ptr[c]..self.col_ptr[c + 1]]
    }

    /// Edge range of row `r` in row-major edge numbering.
    pub fn row_edge_range(&self, r: usize) -> std::ops::Range<usize> {
        self.row_ptr[r]..self.row_ptr[r + 1]
    }

    /// Edge numbers incident to column `c`, in increasing row order.
    pub fn col_edges(&self, c: usize) -> &[usize] {
        &self.col_edges[self.col_ptr[c]..self.col_ptr[c + 1]]
    }

    /// Column index of edge `e`.
    pub fn edge_col(&self, e: usize) -> usize {
        self.row_idx[e]
    }

    pub fn contains(&self, r: usize, c: usize) -> bool {
        self.row(r).binary_search(&c).is_ok()
    }

    /// Iterates over all `(row, col)` incidences in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.m).flat_map(move |r| self.row(r).iter().map(move |&c| (r, c)))
    }

    /// Sub-matrix made of the first `rows` rows restricted to the first `cols`
    /// columns.
    pub fn leading_submatrix(&self, rows: usize, cols: usize) -> Self {
        assert!(rows <= self.m && cols <= self.n);
        let kept: Vec<Vec<usize>> = (0..rows)
            .map(|r| self.row(r).iter().copied().filter(|&c| c < cols).collect())
            .collect();
        Self::from_sorted_rows(rows, cols, &kept)
    }

    /// Copy of this matrix with the incidence `(r, c)` toggled.
    pub fn with_toggled(&self, r: usize, c: usize) -> Self {
        let mut rows: Vec<Vec<usize>> = (0..self.m).map(|i| self.row(i).to_vec()).collect();
        match rows[r].binary_search(&c) {
            Ok(pos) => {
                rows[r].remove(pos);
            }
            Err(pos) => rows[r].insert(pos, c),
        }
        Self::from_sorted_rows(self.m, self.n, &rows)
    }

    /// Checks that the column view is the transpose of the row view.
    pub fn is_transpose_consistent(&self) -> bool {
        let mut rebuilt: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for (r, c) in self.iter() {
            rebuilt[c].push(r);
        }
        rebuilt
            .iter()
            .enumerate()
            .all(|(c, rows)| rows.as_slice() == self.col(c))
            && (0..self.n).all(|c| {
                self.col_edges(c)
                    .iter()
                    .all(|&e| self.edge_col(e) == c)
            })
    }
}

/// Expands a base matrix into its binary parity check matrix.
pub fn expand_base(base: &BaseMatrix) -> ParityCheckMatrix {
    let z = base.z;
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); base.rows * z];
    for br in 0..base.rows {
        for bc in 0..base.cols {
            if let Some(s) = base.get(br, bc) {
                for r in 0..z {
                    rows[br * z + r].push(bc * z + (r + s) % z);
                }
            }
        }
    }
    // block columns are visited in order, so every row is already sorted
    ParityCheckMatrix::from_sorted_rows(base.rows * z, base.cols * z, &rows)
}

/// Result of multiplying a word by the transpose of a parity check matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Syndrome {
    bits: Vec<u8>,
    weight: usize,
}

impl Syndrome {
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// Number of unsatisfied checks.
    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn is_zero(&self) -> bool {
        self.weight == 0
    }
}

/// Computes `H c^T` over GF(2). `bits` holds one bit per byte (0 or 1).
pub fn syndrome(h: &ParityCheckMatrix, bits: &[u8]) -> Result<Syndrome, MatrixError> {
    if bits.len() != h.n {
        return Err(MatrixError::LengthMismatch {
            expected: h.n,
            got: bits.len(),
        });
    }
    let out: Vec<u8> = (0..h.m)
        .map(|r| h.row(r).iter().fold(0u8, |acc, &c| acc ^ (bits[c] & 1)))
        .collect();
    let weight = out.iter().filter(|&&b| b != 0).count();
    Ok(Syndrome { bits: out, weight })
}

/// Syndrome weight only, without allocating the syndrome vector.
pub fn syndrome_weight(h: &ParityCheckMatrix, bits: &[u8]) -> usize {
    debug_assert_eq!(bits.len(), h.n);
    (0..h.m)
        .filter(|&r| h.row(r).iter().fold(0u8, |acc, &c| acc ^ bits[c]) != 0)
        .count()
}

/// Per-row and per-column incidence counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeProfile {
    pub row_weights: Vec<usize>,
    pub col_weights: Vec<usize>,
}

pub fn degree_profile(h: &ParityCheckMatrix) -> DegreeProfile {
    DegreeProfile {
        row_weights: (0..h.m).map(|r| h.row(r).len()).collect(),
        col_weights: (0..h.n).map(|c| h.col(c).len()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(z: usize, rows: &[&[i64]]) -> BaseMatrix {
        BaseMatrix::from_signed_rows(z, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn null_block_expands_to_zero() {
        let h = expand_base(&base(3, &[&[-1]]));
        assert_eq!((h.m(), h.n(), h.num_edges()), (3, 3, 0));
    }

    #[test]
    fn zero_shift_is_identity() {
        let h = expand_base(&base(3, &[&[0]]));
        let inc: Vec<_> = h.iter().collect();
        assert_eq!(inc, vec![(0, 0), (1, 1), (2, 2)]);
    }

    #[test]
    fn right_shift_convention() {
        let h = expand_base(&base(3, &[&[0, 1]]));
        assert_eq!(h.row(0), &[0, 4]);
        assert_eq!(h.row(1), &[1, 5]);
        assert_eq!(h.row(2), &[2, 3]);
        assert!(h.is_transpose_consistent());
    }

    #[test]
    fn rejects_invalid_base() {
        assert!(matches!(
            BaseMatrix::new(1, 1, 4, vec![Some(4)]),
            Err(MatrixError::ShiftOutOfRange { shift: 4, .. })
        ));
        assert!(BaseMatrix::new(0, 1, 4, vec![]).is_err());
        assert!(BaseMatrix::new(1, 2, 4, vec![None]).is_err());
    }

    #[test]
    fn syndrome_examples() {
        let h = ParityCheckMatrix::from_incidences(1, 2, [(0, 0), (0, 1)]).unwrap();
        assert_eq!(syndrome(&h, &[0, 0]).unwrap().weight(), 0);
        let s = syndrome(&h, &[1, 1]).unwrap();
        assert_eq!((s.bits(), s.weight()), (&[0u8][..], 0));
        let s = syndrome(&h, &[1, 0]).unwrap();
        assert_eq!((s.bits(), s.weight()), (&[1u8][..], 1));
        assert!(matches!(
            syndrome(&h, &[1]),
            Err(MatrixError::LengthMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn degree_profiles() {
        let id = expand_base(&base(3, &[&[0]]));
        let p = degree_profile(&id);
        assert_eq!(p.row_weights, vec![1; 3]);
        assert_eq!(p.col_weights, vec![1; 3]);

        let h = expand_base(&base(3, &[&[0, 1]]));
        let p = degree_profile(&h);
        assert_eq!(p.row_weights, vec![2; 3]);
        assert_eq!(p.col_weights, vec![1; 6]);

        let empty = ParityCheckMatrix::from_incidences(2, 3, []).unwrap();
        let p = degree_profile(&empty);
        assert_eq!(p.row_weights, vec![0; 2]);
        assert_eq!(p.col_weights, vec![0; 3]);
    }

    #[test]
    fn leading_submatrix_and_toggle() {
        let h = expand_base(&base(2, &[&[0, 1], &[1, -1]]));
        let sub = h.leading_submatrix(2, 2);
        assert_eq!(sub.iter().collect::<Vec<_>>(), vec![(0, 0), (1, 1)]);
        let t = h.with_toggled(0, 0);
        assert!(!t.contains(0, 0));
        assert!(t.with_toggled(0, 0) == h);
        assert!(t.is_transpose_consistent());
    }

    #[test]
    fn duplicate_incidences_are_merged() {
        let h = ParityCheckMatrix::from_incidences(1, 3, [(0, 2), (0, 2), (0, 0)]).unwrap();
        assert_eq!(h.row(0), &[0, 2]);
        assert!(ParityCheckMatrix::from_incidences(1, 3, [(0, 3)]).is_err());
    }
}
