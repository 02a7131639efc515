//! Finite truncations of integer matrices: the strictly associative block sum
//! against the interleaving sum, which is associative only up to the
//! permutation given by the associator of the naturals model.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("operand is {rows}x{cols}; interleaving to size {size} needs at least {needed}x{needed}")]
    InsufficientTruncation { rows: usize, cols: usize, size: usize, needed: usize },
    #[error("cannot multiply {0}x{1} by {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
}

/// A dense `rows x cols` integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl TruncMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        TruncMatrix { rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn empty() -> Self {
        Self::zeros(0, 0)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |x, y| i64::from(x == y))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> i64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for x in 0..rows {
            for y in 0..cols {
                m.entries[x * cols + y] = f(x, y);
            }
        }
        m
    }

    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |x, y| rows[x][y])
    }

    /// Seeded matrix with entries drawn uniformly from `lo..=hi`.
    pub fn random(seed: u64, rows: usize, cols: usize, lo: i64, hi: i64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = Self::zeros(rows, cols);
        for e in &mut m.entries {
            *e = rng.gen_range(lo..=hi);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, x: usize, y: usize) -> Option<i64> {
        (x < self.rows && y < self.cols).then(|| self.entries[x * self.cols + y])
    }

    fn at(&self, x: usize, y: usize) -> i64 {
        self.entries[x * self.cols + y]
    }

    pub fn set(&mut self, x: usize, y: usize, v: i64) {
        assert!(x < self.rows && y < self.cols, "index out of range");
        self.entries[x * self.cols + y] = v;
    }

    /// The top-left `rows x cols` corner.
    pub fn truncate(&self, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows.min(self.rows), cols.min(self.cols), |x, y| self.at(x, y))
    }

    /// Cauchy product `self · other`.
    pub fn mul(&self, other: &TruncMatrix) -> Result<TruncMatrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::ShapeMismatch(self.rows, self.cols, other.rows, other.cols));
        }
        Ok(Self::from_fn(self.rows, other.cols, |x, y| {
            (0..self.cols).map(|i| self.at(x, i) * other.at(i, y)).sum()
        }))
    }
}

/// Block diagonal sum.
pub fn block_sum(m: &TruncMatrix, n: &TruncMatrix) -> TruncMatrix {
    TruncMatrix::from_fn(m.rows + n.rows, m.cols + n.cols, |x, y| {
        if x < m.rows && y < m.cols {
            m.at(x, y)
        } else if x >= m.rows && y >= m.cols {
            n.at(x - m.rows, y - m.cols)
        } else {
            0
        }
    })
}

/// The `size x size` truncation of the interleaving sum: `a` on even
/// row/column pairs, `b` on odd pairs, zero elsewhere.
pub fn interleave_sum(a: &TruncMatrix, b: &TruncMatrix, size: usize) -> Result<TruncMatrix, MatrixError> {
    let needed = size.div_ceil(2);
    for m in [a, b] {
        if m.rows < needed || m.cols < needed {
            return Err(MatrixError::InsufficientTruncation { rows: m.rows, cols: m.cols, size, needed });
        }
    }
    Ok(TruncMatrix::from_fn(size, size, |x, y| match (x % 2, y % 2) {
        (0, 0) => a.at(x / 2, y / 2),
        (1, 1) => b.at((x - 1) / 2, (y - 1) / 2),
        _ => 0,
    }))
}

/// `(a ⊕ b) ⊕ c` and `a ⊕ (b ⊕ c)` under the interleaving sum, both at `size`.
pub fn both_nestings(
    a: &TruncMatrix,
    b: &TruncMatrix,
    c: &TruncMatrix,
    size: usize,
) -> Result<(TruncMatrix, TruncMatrix), MatrixError> {
    let half = size.div_ceil(2);
    let left = interleave_sum(&interleave_sum(a, b, half)?, c, size)?;
    let right = interleave_sum(a, &interleave_sum(b, c, half)?, size)?;
    Ok((left, right))
}

/// Whether the two nestings of a seeded random 0/1 triple differ at `size`.
pub fn non_strictness_witness(seed: u64, size: usize) -> bool {
    assert!(size >= 8, "witness needs truncation size of at least 8");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || TruncMatrix::random(rng.gen(), size, size, 0, 1);
    let (a, b, c) = (draw(), draw(), draw());
    let (left, right) = both_nestings(&a, &b, &c, size).expect("operands are full size");
    left != right
}

/// The index permutation relating the nestings: for each index `i` of
/// `a ⊕ (b ⊕ c)`, the index of the same diagonal entry in `(a ⊕ b) ⊕ c`,
/// if it appears within the truncation.
///
/// Uses diagonal matrices with pairwise distinct entries so each diagonal
/// position identifies its source uniquely.
pub fn nesting_permutation(size: usize) -> Vec<Option<usize>> {
    let tag = |which: i64| move |x: usize, y: usize| if x == y { 3 * x as i64 + which } else { 0 };
    let a = TruncMatrix::from_fn(size, size, tag(1));
    let b = TruncMatrix::from_fn(size, size, tag(2));
    let c = TruncMatrix::from_fn(size, size, tag(3));
    let (left, right) = both_nestings(&a, &b, &c, size).expect("operands are full size");
    (0..size)
        .map(|i| {
            let v = right.at(i, i);
            (0..size).find(|&j| left.at(j, j) == v && v != 0)
        })
        .collect()
}
