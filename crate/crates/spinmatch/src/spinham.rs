//! Commuting-XX Ising Hamiltonians built from a symmetric matrix.
//!
//! For a `2N × 2N` matrix `A` the model lives on `4N` spins:
//!
//! * `H₁ = Σ_{i<j} A_ij X_i X_j` on spins `1..=2N`,
//! * `H₂ = Σ_{i<j} A_ii A_jj X_{2N+i} X_{2N+j}` on spins `2N+1..=4N`,
//! * `H = H₁ + H₂`.
//!
//! Each unordered pair carries one term with the full coefficient. Terms with a
//! zero coefficient are dropped.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::SymmetricMatrix;

/// `coeff · X_i X_j` with 1-based spin indices `i < j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XXTerm {
    pub i: usize,
    pub j: usize,
    pub coeff: f64,
}

impl XXTerm {
    /// Bitmask of the two spins the term flips.
    pub fn flip_mask(&self) -> u64 {
        (1u64 << (self.i - 1)) | (1u64 << (self.j - 1))
    }
}

/// A sum of two-spin XX terms. Every pair of terms commutes.
#[derive(Clone, Debug, PartialEq)]
pub struct XXHamiltonian {
    num_spins: usize,
    terms: Vec<XXTerm>,
}

#[derive(Serialize)]
struct HamiltonianDump {
    num_spins: usize,
    terms: Vec<(usize, usize, f64)>,
}

impl XXHamiltonian {
    pub fn new(num_spins: usize, terms: Vec<XXTerm>) -> Result<Self> {
        let mut seen = HashSet::new();
        for t in &terms {
            if !(1 <= t.i && t.i < t.j && t.j <= num_spins) {
                return Err(Error::InvalidArgument(format!(
                    "term ({}, {}) needs 1 <= i < j <= {num_spins}",
                    t.i, t.j
                )));
            }
            if !t.coeff.is_finite() {
                return Err(Error::NonFinite("term coefficient"));
            }
            if !seen.insert((t.i, t.j)) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate term ({}, {})",
                    t.i, t.j
                )));
            }
        }
        Ok(XXHamiltonian { num_spins, terms })
    }

    pub fn empty(num_spins: usize) -> Self {
        XXHamiltonian {
            num_spins,
            terms: Vec::new(),
        }
    }

    pub fn num_spins(&self) -> usize {
        self.num_spins
    }

    pub fn terms(&self) -> &[XXTerm] {
        &self.terms
    }

    /// Same terms with every index moved up by `offset`, on `num_spins` spins.
    pub fn shifted(&self, offset: usize, num_spins: usize) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|t| XXTerm {
                i: t.i + offset,
                j: t.j + offset,
                coeff: t.coeff,
            })
            .collect();
        XXHamiltonian::new(num_spins, terms)
    }

    /// Same terms in a different order.
    pub fn with_term_order(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.terms.len());
        XXHamiltonian {
            num_spins: self.num_spins,
            terms: order.iter().map(|&k| self.terms[k]).collect(),
        }
    }

    /// `{"num_spins": n, "terms": [[i, j, coeff], ...]}` with 1-based indices.
    pub fn to_json(&self) -> String {
        let dump = HamiltonianDump {
            num_spins: self.num_spins,
            terms: self.terms.iter().map(|t| (t.i, t.j, t.coeff)).collect(),
        };
        serde_json::to_string(&dump).expect("hamiltonian serialization is infallible")
    }
}

fn check_even(a: &SymmetricMatrix) -> Result<()> {
    if a.dim() % 2 == 1 {
        return Err(Error::OddDimension(a.dim()));
    }
    Ok(())
}

fn pair_terms(n: usize, offset: usize, coeff: impl Fn(usize, usize) -> f64) -> Vec<XXTerm> {
    let mut terms = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let c = coeff(i, j);
            if c != 0.0 {
                terms.push(XXTerm {
                    i: offset + i + 1,
                    j: offset + j + 1,
                    coeff: c,
                });
            }
        }
    }
    terms
}

/// `H₁ = Σ_{i<j} A_ij X_i X_j` on `2N` spins.
pub fn build_h1(a: &SymmetricMatrix) -> Result<XXHamiltonian> {
    check_even(a)?;
    let n = a.dim();
    XXHamiltonian::new(n, pair_terms(n, 0, |i, j| a.get(i, j)))
}

/// `H₂ = Σ_{i<j} A_ii A_jj X_{2N+i} X_{2N+j}` on `4N` spins.
pub fn build_h2(a: &SymmetricMatrix) -> Result<XXHamiltonian> {
    check_even(a)?;
    let n = a.dim();
    XXHamiltonian::new(2 * n, pair_terms(n, n, |i, j| a.get(i, i) * a.get(j, j)))
}

/// `H = H₁ + H₂` on `4N` spins: `H₁` terms first, then `H₂` terms.
pub fn build_full(a: &SymmetricMatrix) -> Result<XXHamiltonian> {
    let n = a.dim();
    let mut terms = build_h1(a)?.terms;
    terms.extend(build_h2(a)?.terms);
    XXHamiltonian::new(2 * n, terms)
}

/// `Σ |coeff|`.
pub fn one_norm(h: &XXHamiltonian) -> f64 {
    h.terms.iter().map(|t| t.coeff.abs()).sum()
}
