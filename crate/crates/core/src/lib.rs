//! Exact statistical-mechanics engine for moments of brickwork random quantum circuits.
//!
//! The crate maps the k-th frame potential of a 1D brickwork circuit of Haar-random
//! two-qudit gates onto a classical lattice model with `S_k` spins and evaluates it:
//!
//! - [`permutations`] and [`characters`]: symmetric-group machinery (cycle types,
//!   transposition distance, Murnaghan–Nakayama characters, content polynomials).
//! - [`exact_algebra`]: univariate polynomials and rational functions over `Q`.
//! - [`weingarten`]: Weingarten functions, symbolically in `d` and by Gram inversion.
//! - [`plaquette`]: the three-spin weights `J^{σ1}_{σ2σ3}(q)` and their rules.
//! - [`circuit_lattice`]: brickwork geometry and exact frame potentials, computed both
//!   on the hexagonal `(σ, τ)` model and by a transfer sweep over plaquettes.
//! - [`montecarlo`]: Haar sampling of circuits as an independent floating-point check.
//! - [`bounds`]: domain-wall counting, frame-potential bounds and design depths.
//! - [`cli`]: machine-readable command surface used by the `rqc` binary.
//!
//! Runnable walkthroughs for each capability live in `examples/`.

pub mod bounds;
pub mod characters;
pub mod circuit_lattice;
pub mod cli;
pub mod error;
pub mod exact_algebra;
pub mod montecarlo;
pub mod permutations;
pub mod plaquette;
pub mod weingarten;

pub use error::{Error, Result};
pub use exact_algebra::{Polynomial, RationalFunction};
pub use permutations::{CycleType, Permutation};
