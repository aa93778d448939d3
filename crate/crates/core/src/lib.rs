//! Canonical colorings of complete bipartite graphs.
//!
//! Every edge coloring of a large enough `K_{n,n}` contains a copy of
//! `K_{m,m}` that is monochromatic, left-colored, right-colored or rainbow.
//! This crate makes that statement executable:
//!
//! * [`canonical`]: pattern classification and witness checking,
//! * [`generators`]: dense and procedural coloring sources, file formats,
//! * [`oracle`]: exhaustive search and counting, canonical pigeonhole,
//! * [`finder`]: the constructive upper-bound pipeline,
//! * [`bounds`]: rigorous exact/interval checks of the numeric inequalities,
//! * [`experiments`]: expectations and Monte-Carlo for random colorings.

pub mod bounds;
pub mod canonical;
pub mod combinatorics;
pub mod error;
pub mod experiments;
pub mod finder;
pub mod generators;
pub mod oracle;
pub mod prf;

pub use canonical::{classify_grid, classify_singletons, restrict, verify_witness};
pub use canonical::{CanonicalPattern, ColorId, Grid, PatternSet, SingletonPattern, Witness};
pub use error::{Error, ErrorKind, Result};
pub use generators::{instantiate, materialize, ColoringSource, ColoringSpec, Family};
