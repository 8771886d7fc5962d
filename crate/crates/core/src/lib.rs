//! Explicit paths between proper `k`-colourings of sparse graphs.
//!
//! For a graph whose maximum average degree is at most `d - epsilon` and a
//! palette of `k >= d + 1` colours, any two proper colourings are joined by a
//! sequence of single-vertex recolourings, every intermediate colouring
//! proper, whose length is polynomial in the number of vertices. This crate
//! builds such sequences and the pieces they rest on:
//!
//! * [`density`]: exact maximum average degree via a min-cut densest
//!   subgraph search, and the parameters `d`, `epsilon`, `c` it induces.
//! * [`decompose`]: special independent sets and the peeling they induce.
//! * [`recolor`]: the recolouring construction, a replay validator, and the
//!   exact length budget.
//! * [`oracle`]: exhaustive search of the reconfiguration graph for tiny
//!   instances.
//!
//! ```
//! use recolour::{generate, GraphKind, Colouring, mad, derive_params, recolor, verify_sequence};
//!
//! let g = generate(GraphKind::Path(3)).unwrap();
//! let params = derive_params(mad(&g).unwrap(), 3).unwrap();
//! let alpha = Colouring::new(vec![1, 2, 1], 3).unwrap();
//! let beta = Colouring::new(vec![2, 1, 2], 3).unwrap();
//! let seq = recolor(&g, &alpha, &beta, &params).unwrap();
//! assert!(verify_sequence(&g, &alpha, &beta, &seq.steps).is_ok());
//! ```

pub mod bench;
pub mod colouring;
pub mod decompose;
pub mod density;
pub mod flow;
pub mod generate;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod rational;
pub mod recolor;

pub use colouring::{is_proper, random_proper_colouring, Colour, Colouring, ColouringError};
pub use decompose::{
    low_degree_set, max_layers, peel, special_independent_set, CertificateViolation, DecomposeError, Peeling,
    SpecialSetCertificate,
};
pub use density::{
    densest_subgraph, derive_params, diameter_exponent, mad, mad_bruteforce, params_with_override, DensestResult,
    DensityError, Params,
};
pub use generate::{generate, GraphKind};
pub use graph::{Graph, GraphError, VertexSubset};
pub use oracle::{bfs_distance, diameter_check, is_frozen, summarize, DiameterReport, OracleError, ReconfSummary};
pub use rational::Rational;
pub use recolor::{
    free_colour, length_bound, recolor, recolor_over, verify_sequence, FailureReason, LengthBudget, RecolorError,
    RecolourSequence, RecolourStep, SequenceFailure,
};
