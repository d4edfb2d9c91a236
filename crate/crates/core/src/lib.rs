//! Computable Morse theory on Higgs-bundle moduli spaces.
//!
//! The library is organized around eight subsystems:
//!
//! - [`algebra`]: exact-integer univariate polynomials and truncated power series;
//! - [`curve`]: Riemann-Roch cohomology calculus on a genus-g curve;
//! - [`groups`]: Cartan data of the supported real reductive groups;
//! - [`critical`]: enumeration of S¹-fixed Hodge-bundle critical strata;
//! - [`morse`]: deformation complexes, Morse indices, Poincaré assembly and the
//!   rank-2 equivariant difference series;
//! - [`census`]: connected-component counting (Milnor-Wood bound, Cayley partner,
//!   Sp component decompositions, σ-pair chambers, Hitchin-base dimension);
//! - [`flow`]: a discretized Yang-Mills-Higgs metric heat flow on a flat lattice
//!   torus with identity, convergence and real-form-restriction verification;
//! - [`cli`]: the command-line front end (see the `higgsmorse` binary).

pub mod algebra;
pub mod census;
pub mod cli;
pub mod cmatrix;
pub mod config;
pub mod critical;
pub mod curve;
pub mod flow;
pub mod groups;
pub mod morse;
pub mod records;
