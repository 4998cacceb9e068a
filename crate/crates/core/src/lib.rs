//! Hilbert modules over finite direct sums of full matrix algebras.
//!
//! The coefficient algebra `A = M_{n_1} ⊕ … ⊕ M_{n_k}` is a finite model of a
//! locally C*-algebra: its C*-seminorms are indexed by subsets of blocks, and
//! localizing at a seminorm drops the blocks outside its support. On top of
//! that sit free Hilbert modules `Aⁿ`, adjointable module maps, and a
//! randomized harness that checks operator identities against localization.

pub mod algebra;
pub mod cli;
pub mod document;
pub mod error;
pub mod harness;
pub mod hilbmod;
pub mod invsys;
pub mod linalg;
pub mod opmap;
pub mod random;

pub use error::{Error, Result};
