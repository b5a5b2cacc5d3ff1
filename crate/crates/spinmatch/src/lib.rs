//! Exact simulation of commuting-XX Ising models whose transition amplitudes
//! encode the permanent, hafnian and loop-hafnian of a real symmetric matrix.
//!
//! For a `2N × 2N` symmetric matrix `A`:
//!
//! * `⟨S|H₁ᵏ|∅⟩ = k! · haf(A_S)` whenever `|S| = 2k`, where
//!   `H₁ = Σ_{i<j} A_ij X_i X_j` (see [`spinham::build_h1`]);
//! * on `4N` spins, with the diagonal encoded by a second register,
//!   `⟨φ₁|H^N|∅,∅⟩ = N!/L_N · lhaf(A)` (see [`targetstates::phi1_state`]);
//! * a bipartite `A = [[O, B], [Bᵀ, O]]` turns the hafnian into `perm(B)`.
//!
//! The crate checks each of these against brute-force combinatorial oracles,
//! synthesizes the circuits that realize them (exact `exp(-iHt)` and the
//! `|φ₁⟩` preparation), and estimates the loop-hafnian from short-time
//! overlaps.
//!
//! ```
//! use spinmatch::{matfun, spinham, statesim, SubsetIndex, SymmetricMatrix};
//!
//! let a = SymmetricMatrix::from_rows(&[
//!     [0.0, 1.0, 2.0, 3.0],
//!     [1.0, 0.0, 4.0, 5.0],
//!     [2.0, 4.0, 0.0, 6.0],
//!     [3.0, 5.0, 6.0, 0.0],
//! ])?;
//! let h = spinham::build_h1(&a)?;
//! let amp = statesim::transition_amplitude(&h, 2, SubsetIndex::full(4), SubsetIndex::EMPTY)?;
//! // haf = 1·6 + 2·5 + 3·4 = 28, and 2! · 28 = 56.
//! assert_eq!(matfun::hafnian(&a)?, 28.0);
//! assert_eq!(amp, 56.0);
//! # Ok::<(), spinmatch::Error>(())
//! ```

pub mod circuits;
pub mod cli;
pub mod error;
pub mod estimate;
pub mod matfun;
pub mod matrix;
pub mod spinham;
pub mod statesim;
pub mod subset;
pub mod targetstates;

pub use error::{Error, Result};
pub use matrix::{SquareMatrix, SymmetricMatrix};
pub use spinham::{XXHamiltonian, XXTerm};
pub use statesim::StateVector;
pub use subset::SubsetIndex;
