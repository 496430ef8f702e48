//! The guide's chapters, compiled as doctests so every snippet in `book/`
//! runs under `cargo test`. One module per chapter, to tell failures apart.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/scenario.md")]
pub mod scenario {}

#[doc = include_str!("../../../book/src/interference.md")]
pub mod interference {}

#[doc = include_str!("../../../book/src/beamforming.md")]
pub mod beamforming {}

#[doc = include_str!("../../../book/src/power-allocation.md")]
pub mod power_allocation {}

#[doc = include_str!("../../../book/src/imperfect-csi.md")]
pub mod imperfect_csi {}

#[doc = include_str!("../../../book/src/selection.md")]
pub mod selection {}

#[doc = include_str!("../../../book/src/simulation.md")]
pub mod simulation {}
