//! Index subsets `S ⊂ {1, …, n}` stored as bitmasks.
//!
//! Index `i` (1-based) lives in bit `i - 1`. The same encoding names a spin
//! configuration: the spins in `S` are up, every other spin is down.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest index count a mask can address.
pub const MAX_INDICES: usize = 63;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetIndex(u64);

impl SubsetIndex {
    pub const EMPTY: SubsetIndex = SubsetIndex(0);

    pub const fn from_mask(mask: u64) -> Self {
        SubsetIndex(mask)
    }

    /// `{1, …, n}`.
    pub fn full(n: usize) -> Self {
        SubsetIndex(low_bits(n))
    }

    /// Builds a subset from 1-based indices. Repeated indices are rejected.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Result<Self> {
        let mut mask = 0u64;
        for i in indices {
            if i == 0 || i > MAX_INDICES {
                return Err(Error::InvalidArgument(format!(
                    "index {i} is outside 1..={MAX_INDICES}"
                )));
            }
            let bit = 1u64 << (i - 1);
            if mask & bit != 0 {
                return Err(Error::InvalidArgument(format!("index {i} is repeated")));
            }
            mask |= bit;
        }
        Ok(SubsetIndex(mask))
    }

    pub const fn mask(self) -> u64 {
        self.0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Whether the 1-based index `i` is a member.
    pub fn contains(self, i: usize) -> bool {
        (1..=MAX_INDICES).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    /// `{1, …, n} \ S`.
    pub fn complement(self, n: usize) -> Self {
        SubsetIndex(!self.0 & low_bits(n))
    }

    /// Fails unless every member is at most `n`.
    pub fn check_within(self, n: usize) -> Result<()> {
        if self.0 & !low_bits(n) != 0 {
            return Err(Error::SubsetOutOfRange { mask: self.0, n });
        }
        Ok(())
    }

    /// Members in increasing order, 1-based.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i + 1)
        })
    }
}

impl fmt::Display for SubsetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (pos, i) in self.indices().enumerate() {
            if pos > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

/// Parses a comma-separated list of 1-based indices such as `"1,3,4"`.
/// The empty string (or `{}`) is the empty set.
impl FromStr for SubsetIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .trim()
            .trim_start_matches('{')
            .trim_end_matches('}')
            .trim();
        if body.is_empty() {
            return Ok(SubsetIndex::EMPTY);
        }
        let indices = body
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad subset index {part:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        SubsetIndex::from_indices(indices)
    }
}

pub(crate) fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// All masks over `n` indices with exactly `k` bits set, in increasing order.
pub fn masks_with_popcount(n: usize, k: usize) -> impl Iterator<Item = u64> {
    // Gosper's hack.
    let limit = if n >= 64 { u64::MAX } else { 1u64 << n };
    let mut next = if k > n {
        None
    } else if k == 0 {
        Some(0)
    } else {
        Some(low_bits(k))
    };
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let succ = (((r ^ cur) >> 2) / c) | r;
            (r != 0 && succ < limit).then_some(succ)
        };
        (n >= 64 || cur < limit).then_some(cur)
    })
}
