//! Cohomological and metric constructions on invariant-form models of compact
//! complex manifolds: Bott-Chern, Aeppli, d_h and h-Aeppli cohomology,
//! ω-minimal d-closed representatives, co-polarised deformation subspaces,
//! Weil-Petersson and period-map metrics, and detection of Gauduchon, SKT,
//! balanced and (h-)strongly Gauduchon structures.
//!
//! Everything is finite-dimensional linear algebra on the subcomplex of
//! left-invariant forms of a Lie group quotient. The README discusses what
//! this models and what it does not.

pub mod catalog;
pub mod chart;
pub mod cli;
pub mod cohomology;
pub mod deformation;
pub mod error;
pub mod form;
pub mod index;
pub mod linalg;
pub mod metric;
pub mod model;
pub mod report;
pub mod representatives;
pub mod schema;
pub mod structures;

pub use error::{Error, Result};
