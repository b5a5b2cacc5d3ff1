//! Permanent, hafnian and loop-hafnian.
//!
//! Each function has a fast path and a literal enumeration used as an
//! independent oracle:
//!
//! | function      | fast path                                  | oracle                         |
//! |---------------|--------------------------------------------|--------------------------------|
//! | permanent     | Ryser inclusion–exclusion in Gray-code order | sum over all permutations    |
//! | hafnian       | memoized subset recursion                  | sum over all pair partitions   |
//! | loop-hafnian  | subset sum over the memoized hafnian table | subset sum over `hafnian_enum` |
//!
//! Empty matrices have permanent, hafnian and loop-hafnian equal to 1.

use crate::error::{Error, Result};
use crate::matrix::{SquareMatrix, SymmetricMatrix};
use crate::subset::SubsetIndex;

pub const PERMANENT_LIMIT: usize = 32;
pub const PERMANENT_ENUM_LIMIT: usize = 10;
pub const HAFNIAN_ENUM_LIMIT: usize = 12;
pub const LOOP_HAFNIAN_ENUM_LIMIT: usize = 12;
/// Index cap of [`HafnianTable`]; the table holds `2^n` doubles.
pub const HAFNIAN_TABLE_LIMIT: usize = 26;

fn check_size(what: &'static str, size: usize, limit: usize) -> Result<()> {
    if size > limit {
        return Err(Error::SizeLimit { what, size, limit });
    }
    Ok(())
}

/// Permanent via Ryser's formula with Gray-code updates of the row sums,
/// `O(2^n · n)` operations.
pub fn permanent(b: &SquareMatrix) -> Result<f64> {
    let n = b.dim();
    check_size("permanent", n, PERMANENT_LIMIT)?;
    if n == 0 {
        return Ok(1.0);
    }
    // perm(B) = (-1)^n Σ_{S ⊆ cols} (-1)^{|S|} Π_i Σ_{j∈S} B[i][j]
    let mut row_sums = vec![0.0; n];
    let mut total = 0.0;
    let mut gray = 0u64;
    for step in 1u64..(1u64 << n) {
        let col = step.trailing_zeros() as usize;
        gray ^= 1 << col;
        let sign = if gray & (1 << col) != 0 { 1.0 } else { -1.0 };
        for (i, s) in row_sums.iter_mut().enumerate() {
            *s += sign * b.get(i, col);
        }
        let prod: f64 = row_sums.iter().product();
        if gray.count_ones() % 2 == 1 {
            total -= prod;
        } else {
            total += prod;
        }
    }
    Ok(if n % 2 == 1 { -total } else { total })
}

/// Permanent as the literal sum over all `n!` permutations.
pub fn permanent_enum(b: &SquareMatrix) -> Result<f64> {
    let n = b.dim();
    check_size("permanent_enum", n, PERMANENT_ENUM_LIMIT)?;

    fn walk(b: &SquareMatrix, row: usize, used: u32, acc: f64) -> f64 {
        if row == b.dim() {
            return acc;
        }
        (0..b.dim())
            .filter(|col| used & (1 << col) == 0)
            .map(|col| walk(b, row + 1, used | (1 << col), acc * b.get(row, col)))
            .sum()
    }
    Ok(walk(b, 0, 0, 1.0))
}

/// Hafnian as the literal sum over all `(2n - 1)!!` pair partitions.
/// Diagonal entries never enter.
pub fn hafnian_enum(m: &SymmetricMatrix) -> Result<f64> {
    let n = m.dim();
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    check_size("hafnian_enum", n, HAFNIAN_ENUM_LIMIT)?;

    // Pair the lowest unpaired index with every other unpaired index.
    fn walk(m: &SymmetricMatrix, unpaired: u64) -> f64 {
        if unpaired == 0 {
            return 1.0;
        }
        let i = unpaired.trailing_zeros() as usize;
        let rest = unpaired & !(1 << i);
        let mut sum = 0.0;
        let mut others = rest;
        while others != 0 {
            let j = others.trailing_zeros() as usize;
            others &= others - 1;
            sum += m.get(i, j) * walk(m, rest & !(1 << j));
        }
        sum
    }
    Ok(walk(m, SubsetIndex::full(n).mask()))
}

/// Hafnians of every principal submatrix `haf(A_S)`, indexed by the mask of `S`.
///
/// Filled bottom-up with
/// `haf(A_V) = 1/(k+1) · Σ_{i<j ∈ V} A_ij · haf(A_{V∖{i,j}})` for `|V| = 2k + 2`.
/// Odd-size subsets hold 0. Read-only after construction, so one table can be
/// shared between threads.
#[derive(Clone, Debug)]
pub struct HafnianTable {
    n: usize,
    values: Vec<f64>,
}

impl HafnianTable {
    pub fn new(m: &SymmetricMatrix) -> Result<Self> {
        let n = m.dim();
        check_size("hafnian table", n, HAFNIAN_TABLE_LIMIT)?;
        let size = 1usize << n;
        let mut values = vec![0.0; size];
        values[0] = 1.0;
        let mut members = Vec::with_capacity(n);
        for mask in 1..size {
            let pop = mask.count_ones() as usize;
            if pop % 2 == 1 {
                continue;
            }
            members.clear();
            members.extend((0..n).filter(|&i| mask & (1 << i) != 0));
            let mut sum = 0.0;
            for (a, &i) in members.iter().enumerate() {
                let row = m.row(i);
                for &j in &members[a + 1..] {
                    let w = row[j];
                    if w != 0.0 {
                        sum += w * values[mask & !(1 << i) & !(1 << j)];
                    }
                }
            }
            values[mask] = sum / (pop / 2) as f64;
        }
        Ok(HafnianTable { n, values })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `haf(A_S)`; 0 when `|S|` is odd.
    pub fn get(&self, s: SubsetIndex) -> f64 {
        self.values[s.mask() as usize]
    }

    pub fn full(&self) -> f64 {
        self.values[self.values.len() - 1]
    }
}

/// Hafnian through [`HafnianTable`]: `O(2^n · n²)` time, `O(2^n)` memory.
pub fn hafnian(m: &SymmetricMatrix) -> Result<f64> {
    if m.dim() % 2 == 1 {
        return Err(Error::OddDimension(m.dim()));
    }
    Ok(HafnianTable::new(m)?.full())
}

/// Loop-hafnian `Σ_S (Π_{i∉S} M_ii) · haf(M_S)` over even-size `S`.
pub fn loop_hafnian(m: &SymmetricMatrix) -> Result<f64> {
    if m.has_zero_diagonal() {
        // Only S = {1..n} survives.
        return if m.dim().is_multiple_of(2) {
            hafnian(m)
        } else {
            Ok(0.0)
        };
    }
    let table = HafnianTable::new(m)?;
    Ok(loop_hafnian_with_table(m, &table))
}

/// Loop-hafnian reusing a prebuilt table for `m`.
pub fn loop_hafnian_with_table(m: &SymmetricMatrix, table: &HafnianTable) -> f64 {
    assert_eq!(m.dim(), table.dim(), "table built for a different matrix");
    let n = m.dim();
    let diag = m.diagonal();
    let mut sum = 0.0;
    for mask in 0..1u64 << n {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let s = SubsetIndex::from_mask(mask);
        let h = table.get(s);
        if h == 0.0 {
            continue;
        }
        let loops: f64 = s.complement(n).indices().map(|i| diag[i - 1]).product();
        sum += loops * h;
    }
    sum
}

/// Loop-hafnian as the literal double sum over subset sizes and subsets,
/// with every hafnian taken from [`hafnian_enum`]. Odd-size subsets have
/// no perfect matching and contribute 0.
pub fn loop_hafnian_enum(m: &SymmetricMatrix) -> Result<f64> {
    let n = m.dim();
    check_size("loop_hafnian_enum", n, LOOP_HAFNIAN_ENUM_LIMIT)?;
    let mut sum = 0.0;
    for k in 0..=n {
        for mask in 0..1u64 << n {
            if mask.count_ones() as usize != k {
                continue;
            }
            let s = SubsetIndex::from_mask(mask);
            let h = if k % 2 == 0 {
                hafnian_enum(&m.principal(s))?
            } else {
                0.0
            };
            let loops: f64 = s
                .complement(n)
                .indices()
                .map(|i| m.get(i - 1, i - 1))
                .product();
            sum += loops * h;
        }
    }
    Ok(sum)
}

/// The bipartite block matrix `[[O, B], [Bᵀ, O]]`, whose hafnian is `perm(B)`.
pub fn embed_bipartite(b: &SquareMatrix) -> SymmetricMatrix {
    let n = b.dim();
    SymmetricMatrix::from_upper(2 * n, |i, j| {
        if i < n && j >= n {
            b.get(i, j - n)
        } else {
            0.0
        }
    })
}
