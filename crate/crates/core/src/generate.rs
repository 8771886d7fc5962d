//! Deterministic instance generators.

use std::fmt;
use std::str::FromStr;

use petgraph::unionfind::UnionFind;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, GraphError};

/// The families [`generate`] can build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Path(usize),
    Cycle(usize),
    Complete(usize),
    Grid {
        rows: usize,
        cols: usize,
    },
    /// `K_{1,n-1}` with centre 0.
    Star(usize),
    /// Edge union of `forests` random spanning trees on `n` vertices.
    /// Arboricity is at most `forests`, so the maximum average degree is
    /// strictly below `2 * forests`.
    ForestUnion {
        n: usize,
        forests: usize,
        seed: u64,
    },
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GraphKind::Path(n) => write!(f, "path:{n}"),
            GraphKind::Cycle(n) => write!(f, "cycle:{n}"),
            GraphKind::Complete(n) => write!(f, "complete:{n}"),
            GraphKind::Grid { rows, cols } => write!(f, "grid:{rows}:{cols}"),
            GraphKind::Star(n) => write!(f, "star:{n}"),
            GraphKind::ForestUnion { n, forests, seed } => write!(f, "forest_union:{n}:{forests}:{seed}"),
        }
    }
}

/// Parses the colon-separated form produced by `Display`, e.g. `grid:3:4`
/// or `forest_union:50:2:7`.
impl FromStr for GraphKind {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::InvalidArgument(format!("unrecognised graph kind `{s}`"));
        let mut parts = s.split(':');
        let name = parts.next().ok_or_else(bad)?;
        let args: Vec<u64> = parts
            .map(|p| p.parse::<u64>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        let kind = match (name, args.as_slice()) {
            ("path", &[n]) => GraphKind::Path(n as usize),
            ("cycle", &[n]) => GraphKind::Cycle(n as usize),
            ("complete", &[n]) => GraphKind::Complete(n as usize),
            ("grid", &[r, c]) => GraphKind::Grid {
                rows: r as usize,
                cols: c as usize,
            },
            ("star", &[n]) => GraphKind::Star(n as usize),
            ("forest_union", &[n, t, seed]) => GraphKind::ForestUnion {
                n: n as usize,
                forests: t as usize,
                seed,
            },
            _ => return Err(bad()),
        };
        Ok(kind)
    }
}

pub fn generate(kind: GraphKind) -> Result<Graph, GraphError> {
    let invalid = |msg: &str| Err(GraphError::InvalidArgument(format!("{kind}: {msg}")));
    match kind {
        GraphKind::Path(n) | GraphKind::Complete(n) | GraphKind::Star(n) if n == 0 => invalid("n must be at least 1"),
        GraphKind::Cycle(n) if n < 3 => invalid("a simple cycle needs at least 3 vertices"),
        GraphKind::Grid { rows, cols } if rows == 0 || cols == 0 => invalid("rows and cols must be at least 1"),
        GraphKind::ForestUnion { n, forests, .. } if n == 0 || forests == 0 => {
            invalid("n and the forest count must be at least 1")
        }
        GraphKind::Path(n) => Graph::from_edges(n, (1..n).map(|v| (v - 1, v))),
        GraphKind::Cycle(n) => Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))),
        GraphKind::Complete(n) => Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))),
        GraphKind::Star(n) => Graph::from_edges(n, (1..n).map(|v| (0, v))),
        GraphKind::Grid { rows, cols } => {
            let at = |r: usize, c: usize| r * cols + c;
            let horizontal = (0..rows).flat_map(move |r| (1..cols).map(move |c| (at(r, c - 1), at(r, c))));
            let vertical = (1..rows).flat_map(move |r| (0..cols).map(move |c| (at(r - 1, c), at(r, c))));
            Graph::from_edges(rows * cols, horizontal.chain(vertical))
        }
        GraphKind::ForestUnion { n, forests, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut edges = Vec::with_capacity(forests * n.saturating_sub(1));
            for _ in 0..forests {
                random_spanning_tree(n, &mut rng, &mut edges);
            }
            Graph::from_edges(n, edges)
        }
    }
}

/// Appends the edges of a spanning tree built by inserting uniformly random
/// vertex pairs and rejecting those that would close a cycle.
fn random_spanning_tree(n: usize, rng: &mut ChaCha8Rng, out: &mut Vec<(usize, usize)>) {
    let mut components = UnionFind::<usize>::new(n);
    let mut added = 0;
    while added + 1 < n {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if components.union(u, v) {
            out.push((u, v));
            added += 1;
        }
    }
}
