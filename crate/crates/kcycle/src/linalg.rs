//! Dense exact linear algebra over GF(2^64): determinants by Gaussian
//! elimination, and the block elimination that shrinks a matrix with a
//! symbolic top-left corner while preserving its determinant exactly.

use crate::field::FieldElement;
use std::ops::{Index, IndexMut};
use thiserror::Error;

/// Square row-major matrix of field elements. Rows and columns are
/// 0-indexed here; callers working with 1-indexed vertices convert.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    n: usize,
    cells: Vec<FieldElement>,
}

impl DenseMatrix {
    pub fn zero(n: usize) -> DenseMatrix {
        DenseMatrix { n, cells: vec![FieldElement::ZERO; n * n] }
    }

    pub fn identity(n: usize) -> DenseMatrix {
        let mut m = DenseMatrix::zero(n);
        for i in 0..n {
            m[(i, i)] = FieldElement::ONE;
        }
        m
    }

    pub fn from_rows(rows: &[&[FieldElement]]) -> DenseMatrix {
        let n = rows.len();
        let mut m = DenseMatrix::zero(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "row {i} has wrong length");
            m.cells[i * n..(i + 1) * n].copy_from_slice(row);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Exact determinant; the receiver is not modified. The 0x0 matrix
    /// has determinant 1 (empty product).
    pub fn determinant(&self) -> FieldElement {
        self.clone().into_determinant()
    }

    /// Determinant consuming the matrix, for hot loops that build a
    /// fresh matrix per evaluation anyway.
    pub fn into_determinant(mut self) -> FieldElement {
        let n = self.n;
        let cells = &mut self.cells;
        let mut det = FieldElement::ONE;
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !cells[r * n + col].is_zero()) else {
                return FieldElement::ZERO;
            };
            if pivot != col {
                for c in 0..n {
                    cells.swap(pivot * n + c, col * n + c);
                }
            }
            let p = cells[col * n + col];
            det *= p;
            let pinv = p.inv();
            let (pivot_rows, rest) = cells.split_at_mut((col + 1) * n);
            let pivot_row = &pivot_rows[col * n..];
            for r in 0..(n - col - 1) {
                let row = &mut rest[r * n..(r + 1) * n];
                let f = row[col] * pinv;
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    row[c] += f * pivot_row[c];
                }
            }
        }
        det
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = DenseMatrix::zero(n);
        for i in 0..n {
            for l in 0..n {
                let a = self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(l, j)];
                }
            }
        }
        out
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = FieldElement;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &FieldElement {
        &self.cells[r * self.n + c]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut FieldElement {
        &mut self.cells[r * self.n + c]
    }
}

/// One matrix entry of the form `c0 + c1 * a_var`, affine in at most one
/// orientation variable. `var: None` forces `c1 = 0`: a concrete entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AffineEntry {
    pub var: Option<usize>,
    pub c1: FieldElement,
    pub c0: FieldElement,
}

impl AffineEntry {
    pub fn concrete(c0: FieldElement) -> AffineEntry {
        AffineEntry { var: None, c1: FieldElement::ZERO, c0 }
    }

    pub const ZERO: AffineEntry = AffineEntry {
        var: None,
        c1: FieldElement::ZERO,
        c0: FieldElement::ZERO,
    };

    pub fn is_concrete(&self) -> bool {
        self.var.is_none()
    }

    /// Value under a 0/1 assignment of the orientation variables.
    #[inline]
    pub fn value(&self, assign: impl Fn(usize) -> bool) -> FieldElement {
        match self.var {
            Some(v) if assign(v) => self.c0 + self.c1,
            _ => self.c0,
        }
    }
}

/// Square matrix of affine entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMatrix {
    n: usize,
    entries: Vec<AffineEntry>,
}

impl AffineMatrix {
    pub fn zero(n: usize) -> AffineMatrix {
        AffineMatrix { n, entries: vec![AffineEntry::ZERO; n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Evaluates every entry under a 0/1 assignment of the orientation
    /// variables.
    pub fn instantiate(&self, assign: impl Fn(usize) -> bool + Copy) -> DenseMatrix {
        let mut out = DenseMatrix::zero(self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                out[(r, c)] = self[(r, c)].value(assign);
            }
        }
        out
    }

    /// Multiplies every entry of one row by a constant.
    pub fn scale_row(&mut self, r: usize, f: FieldElement) {
        for c in 0..self.n {
            let e = &mut self[(r, c)];
            e.c0 *= f;
            e.c1 *= f;
        }
    }
}

impl Index<(usize, usize)> for AffineMatrix {
    type Output = AffineEntry;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &AffineEntry {
        &self.entries[r * self.n + c]
    }
}

impl IndexMut<(usize, usize)> for AffineMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut AffineEntry {
        &mut self.entries[r * self.n + c]
    }
}

/// The trailing block that should carry the concrete pivots is singular;
/// the caller should resample its randomness and rebuild.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("trailing concrete block is singular")]
pub struct SingularBlock;

/// Reduces an n x n matrix whose entries outside the leading s x s block
/// are all concrete, to its leading s x s block plus the determinant of
/// the rest, using only determinant-preserving row and column operations.
///
/// Returns `(top_left, det_c)` with
/// `det(input at any assignment) = det(top_left at that assignment) * det_c`.
///
/// Order of operations: the trailing block is diagonalized with row
/// operations confined to the last n-s rows; the bottom-left block is
/// cleared with column operations (leading column += factor * trailing
/// column); the top-right block is cleared with row operations. Each
/// step only ever adds concrete constants to leading-block entries, so
/// their affine form survives untouched.
pub fn block_eliminate(
    mut m: AffineMatrix,
    s: usize,
) -> Result<(AffineMatrix, FieldElement), SingularBlock> {
    let n = m.n();
    assert!(s <= n, "split {s} beyond dimension {n}");
    for r in 0..n {
        for c in 0..n {
            if r >= s || c >= s {
                assert!(
                    m[(r, c)].is_concrete() && m[(r, c)].c1.is_zero(),
                    "symbolic entry at ({r}, {c}) outside the leading {s}x{s} block"
                );
            }
        }
    }

    // Diagonalize the trailing block with row operations on rows s..n.
    // These touch only concrete entries (the full width of those rows).
    for col in s..n {
        let Some(pivot) = (col..n).find(|&r| !m[(r, col)].c0.is_zero()) else {
            return Err(SingularBlock);
        };
        if pivot != col {
            for c in 0..n {
                let tmp = m[(pivot, c)];
                m[(pivot, c)] = m[(col, c)];
                m[(col, c)] = tmp;
            }
        }
        let pinv = m[(col, col)].c0.inv();
        for r in s..n {
            if r == col {
                continue;
            }
            let f = m[(r, col)].c0 * pinv;
            if f.is_zero() {
                continue;
            }
            for c in 0..n {
                let add = f * m[(col, c)].c0;
                m[(r, c)].c0 += add;
            }
        }
    }
    let mut det_c = FieldElement::ONE;
    for d in s..n {
        det_c *= m[(d, d)].c0;
    }

    // Clear the bottom-left block: column j += factor * column r. Only
    // row r changes among the trailing rows (the trailing block is
    // diagonal), and leading rows receive concrete top-right values.
    for r in s..n {
        let dinv = m[(r, r)].c0.inv();
        for j in 0..s {
            let f = m[(r, j)].c0 * dinv;
            if f.is_zero() {
                continue;
            }
            for i in 0..n {
                let add = f * m[(i, r)].c0;
                debug_assert!(i < s || m[(i, r)].c1.is_zero());
                m[(i, j)].c0 += add;
            }
            debug_assert!(m[(r, j)].c0.is_zero());
        }
    }

    // Clear the top-right block: row i += factor * row c. Row c is zero
    // everywhere except its diagonal entry now, so only (i, c) changes.
    for i in 0..s {
        for c in s..n {
            if m[(i, c)].c0.is_zero() {
                continue;
            }
            debug_assert!((0..n).all(|j| j == c || m[(c, j)].c0.is_zero()));
            m[(i, c)].c0 = FieldElement::ZERO;
        }
    }

    let mut top_left = AffineMatrix::zero(s);
    for r in 0..s {
        for c in 0..s {
            top_left[(r, c)] = m[(r, c)];
        }
    }
    Ok((top_left, det_c))
}
