//! baode: a finite-model engine for Boolean algebras with operators in
//! cylindric-polyadic signatures. Frames and complex algebras, zigzag
//! products and superamalgamation, filter and witness constructions, and a
//! dilation toolkit, all exhaustively verifiable at small scale.

pub mod amalgam;
pub mod bao;
pub mod boolean;
pub mod campaign;
pub mod cli;
pub mod dilation;
pub mod error;
pub mod frame;
pub mod gen;
pub mod io;
pub mod limits;
pub mod report;
pub mod schema;
pub mod term;

pub use error::{Error, Result};
