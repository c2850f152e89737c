//! Power graphs of torsion-free abelian groups on finite windows.
//!
//! The crate materializes finite windows of the power graph `P(G)` and the
//! directed power graph of ℤ, ℤⁿ, ℚ, ℚⁿ and unitary subgroups of ℚ (given by
//! height functions), and implements the computable criteria around them:
//!
//! - [`graphs`]: window graphs, S-sets (windowed and exact for ℤ), the
//!   complement structure of neighbourhoods, components and small automorphism orbits;
//! - [`orient`]: orientation recovery from the undirected graph alone, and the
//!   preserve-or-reverse test for vertex maps, including `x ↦ a²/x`;
//! - [`heights`]: height-function membership, scaling, equivalence and the
//!   prime-swap isomorphism `G_p → G_q`;
//! - [`checks`]: the named invariant suite run by `powergraph verify`.
//!
//! All arithmetic is exact. Graph construction and the per-edge loops run on
//! rayon when the default `parallel` feature is on; see [`exec::Exec`].
//!
//! The relation `~` inside S-sets is reflexive (`x ~ x`); the power graph
//! itself has no loops.

pub mod arith;
pub mod checks;
pub mod error;
pub mod exec;
pub mod graphs;
pub mod groups;
pub mod heights;
pub mod io;
pub mod orient;
pub mod window;

pub use arith::ReducedRational;
pub use error::{Error, Result};
pub use exec::Exec;
pub use graphs::{SSetResult, WindowGraph};
pub use groups::{Element, GroupDescriptor};
pub use heights::{HeightFunction, HeightValue};
pub use window::{build_window, Window, WindowSpec};
