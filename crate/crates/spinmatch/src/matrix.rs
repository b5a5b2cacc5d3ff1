//! Dense real square matrices and their symmetric refinement.
//!
//! Matrices are read from and written to JSON as
//! `{"n": <int>, "entries": [<row-major reals>]}`.

use std::fs;
use std::ops::{Deref, Index};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::SubsetIndex;

/// A dense `n × n` real matrix in row-major order. `n = 0` is the empty matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixFile", into = "MatrixFile")]
pub struct SquareMatrix {
    n: usize,
    entries: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    n: usize,
    entries: Vec<f64>,
}

impl TryFrom<MatrixFile> for SquareMatrix {
    type Error = Error;

    fn try_from(file: MatrixFile) -> Result<Self> {
        SquareMatrix::new(file.n, file.entries)
    }
}

impl From<SquareMatrix> for MatrixFile {
    fn from(m: SquareMatrix) -> Self {
        MatrixFile {
            n: m.n,
            entries: m.entries,
        }
    }
}

impl SquareMatrix {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::EntryCount {
                n,
                expected: n * n,
                found: entries.len(),
            });
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("matrix entry"));
        }
        Ok(SquareMatrix { n, entries })
    }

    /// Builds a matrix from rows; ragged input is a dimension error.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (row, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::NotSquare {
                    row: row + 1,
                    found: r.len(),
                    expected: n,
                });
            }
            entries.extend_from_slice(r);
        }
        SquareMatrix::new(n, entries)
    }

    pub fn zeros(n: usize) -> Self {
        SquareMatrix {
            n,
            entries: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SquareMatrix::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        SquareMatrix { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Entry at 0-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.entries[i * self.n + j] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn transpose(&self) -> Self {
        SquareMatrix::from_fn(self.n, |i, j| self.get(j, i))
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// Largest `|m[i][j] - m[j][i]|` and its 0-based position `(i, j)` with `i < j`.
    pub fn max_asymmetry(&self) -> Option<(usize, usize, f64)> {
        let mut worst: Option<(usize, usize, f64)> = None;
        for i in 0..self.n {
            for j in i + 1..self.n {
                let d = (self.get(i, j) - self.get(j, i)).abs();
                if d > 0.0 && worst.is_none_or(|w| d > w.2) {
                    worst = Some((i, j, d));
                }
            }
        }
        worst
    }

    /// Rows and columns restricted to the members of `s`, in increasing order.
    pub fn principal_submatrix(&self, s: SubsetIndex) -> Self {
        let idx: Vec<usize> = s.indices().map(|i| i - 1).collect();
        SquareMatrix::from_fn(idx.len(), |a, b| self.get(idx[a], idx[b]))
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        SquareMatrix::from_json_str(&fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serialization is infallible")
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.entries[i * self.n + j]
    }
}

/// A real symmetric matrix; symmetry is checked with exact equality.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SquareMatrix", into = "SquareMatrix")]
pub struct SymmetricMatrix(SquareMatrix);

impl TryFrom<SquareMatrix> for SymmetricMatrix {
    type Error = Error;

    fn try_from(m: SquareMatrix) -> Result<Self> {
        if let Some((i, j, deviation)) = m.max_asymmetry() {
            return Err(Error::Asymmetric {
                i: i + 1,
                j: j + 1,
                deviation,
            });
        }
        Ok(SymmetricMatrix(m))
    }
}

impl From<SymmetricMatrix> for SquareMatrix {
    fn from(m: SymmetricMatrix) -> Self {
        m.0
    }
}

impl SymmetricMatrix {
    pub fn new(m: SquareMatrix) -> Result<Self> {
        SymmetricMatrix::try_from(m)
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        SymmetricMatrix::new(SquareMatrix::from_rows(rows)?)
    }

    /// Builds `m[i][j] = m[j][i] = f(min, max)` from the upper triangle.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = SquareMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        SymmetricMatrix(m)
    }

    pub fn as_square(&self) -> &SquareMatrix {
        &self.0
    }

    pub fn has_zero_diagonal(&self) -> bool {
        (0..self.dim()).all(|i| self.get(i, i) == 0.0)
    }

    /// The principal submatrix `A_S`, which stays symmetric.
    pub fn principal(&self, s: SubsetIndex) -> SymmetricMatrix {
        SymmetricMatrix(self.0.principal_submatrix(s))
    }

    /// Reorders rows and columns: `out[a][b] = self[perm[a]][perm[b]]`.
    pub fn permuted(&self, perm: &[usize]) -> SymmetricMatrix {
        assert_eq!(perm.len(), self.dim());
        SymmetricMatrix(SquareMatrix::from_fn(self.dim(), |a, b| {
            self.get(perm[a], perm[b])
        }))
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        SymmetricMatrix::new(SquareMatrix::from_json_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        SymmetricMatrix::new(SquareMatrix::load(path)?)
    }
}

impl Deref for SymmetricMatrix {
    type Target = SquareMatrix;

    fn deref(&self) -> &SquareMatrix {
        &self.0
    }
}
