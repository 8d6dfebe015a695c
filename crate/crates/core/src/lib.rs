//! Quandle colorings, 2-cocycle invariants and cocycle quiver invariants of
//! oriented knots and links.
//!
//! Elements, arcs and cochain indices are 0-based throughout the Rust API.
//! The text and JSON formats, `Display` output and error witnesses are
//! 1-based, matching standard operation-table notation.

pub mod algebra;
pub mod batch;
pub mod chain;
pub mod coloring;
pub mod corpus;
pub mod diagram;
pub mod error;
pub mod exec;
pub mod matinv;
pub mod poly;
pub mod quiver;
pub mod zmat;

pub use algebra::{Quandle, QuandleMap};
pub use chain::{CocycleCheck, Cochain1, Cochain2};
pub use diagram::{Crossing, LinkDiagram, Sign};
pub use error::{Error, Result};
pub use exec::Execution;
pub use poly::{IntPolynomial, QuiverPolynomial, WeightPolynomial};
pub use quiver::CocycleQuiver;
pub use zmat::ZmMatrix;
