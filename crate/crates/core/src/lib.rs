//! Exact computations for quantum cluster varieties of a marked disk.
//!
//! The crate works over `Z[w, w^-1]` with `q = w^4` and covers polygon
//! triangulations, quantum tori and their doubles, the skein algebra of the
//! disk, quantum cluster expansions, laminations, the duality maps and the
//! quantum dilogarithm identities behind mutation.

pub mod classical;
pub mod cli;
pub mod cluster;
pub mod coeff;
pub mod dilog;
pub mod double;
pub mod duality;
pub mod error;
pub mod lamination;
pub mod polygon;
pub mod skein;
pub mod torus;
pub mod verify;

pub use coeff::{OmegaLaurent, OmegaRational};
pub use error::{Error, Result};
pub use polygon::{Chord, ExchangeData, IntMatrix, MarkedDisk, Triangulation};
pub use torus::{SkewForm, TorusElement};
