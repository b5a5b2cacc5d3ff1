//! The guide's chapters, compiled as doc comments so that `cargo test` runs
//! every snippet in the book.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/matrix-functions.md")]
pub mod matrix_functions {}

#[doc = include_str!("../../../book/src/spin-hamiltonians.md")]
pub mod spin_hamiltonians {}

#[doc = include_str!("../../../book/src/transition-amplitudes.md")]
pub mod transition_amplitudes {}

#[doc = include_str!("../../../book/src/readout-state.md")]
pub mod readout_state {}

#[doc = include_str!("../../../book/src/circuits.md")]
pub mod circuits {}

#[doc = include_str!("../../../book/src/estimation.md")]
pub mod estimation {}

#[doc = include_str!("../../../book/src/command-line.md")]
pub mod command_line {}
