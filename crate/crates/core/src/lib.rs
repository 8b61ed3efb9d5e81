//! Tiles, partial tilings and Heesch numbers on Cayley graphs of finitely
//! generated groups, with certificate-producing exhaustive search and a
//! constructor for connected tiles with prescribed surroundings.

pub mod cli;
pub mod construct;
pub mod error;
pub mod export;
pub mod group;
pub mod heesch;
pub mod subgroup;
pub mod tiling;

pub use error::{Error, Result};
pub use group::{Element, ElementSet, GroupDoc, GroupSpec};
pub use heesch::{heesch_eval, heesch_ge, verify_certificate, EvalOptions, GeOutcome, HeeschCertificate, SearchOptions, Verdict};
pub use tiling::{PartialTiling, Tile, TileDoc};
