//! Simple undirected graphs over the vertex set `0..n` and vertex subsets.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Errors raised when building graphs or subsets from untrusted input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate vertex {0} in subset")]
    DuplicateVertex(usize),
    #[error("invalid generator argument: {0}")]
    InvalidArgument(String),
}

/// A simple undirected graph with sorted adjacency lists.
///
/// Symmetry, absence of self-loops and absence of duplicate neighbours are
/// enforced by every constructor, so the type never holds a multigraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list. Repeated edges (in either
    /// orientation) collapse into one; self-loops are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Ok(Self::from_edges_counting(n, edges)?.0)
    }

    /// Like [`Graph::from_edges`] but also reports how many input edges were
    /// duplicates of an earlier one.
    pub(crate) fn from_edges_counting<I>(n: usize, edges: I) -> Result<(Self, usize), GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adjacency = vec![Vec::new(); n];
        let mut given = 0usize;
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
            given += 1;
        }
        let mut twice_m = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            twice_m += list.len();
        }
        let m = twice_m / 2;
        Ok((Graph { adjacency, m }, given - m))
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Neighbours of `v` in ascending order.
    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Each edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Number of edges with both ends in `subset`.
    pub fn induced_edge_count(&self, subset: &VertexSubset) -> usize {
        let mut inside = vec![false; self.n()];
        for &v in subset.iter() {
            inside[v] = true;
        }
        subset
            .iter()
            .map(|&v| self.adjacency[v].iter().filter(|&&w| inside[w] && v < w).count())
            .sum()
    }

    /// Returns `G[keep]` together with the map from old to new indices
    /// (`None` for dropped vertices). New indices follow ascending old order.
    pub fn induced_subgraph(&self, keep: &VertexSubset) -> Result<(Graph, Vec<Option<usize>>), GraphError> {
        if let Some(&last) = keep.as_slice().last() {
            if last >= self.n() {
                return Err(GraphError::VertexOutOfRange {
                    vertex: last,
                    n: self.n(),
                });
            }
        }
        let mut map = vec![None; self.n()];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = Some(new);
        }
        let mut m = 0;
        let adjacency: Vec<Vec<usize>> = keep
            .iter()
            .map(|&old| {
                // old-order neighbours map to ascending new indices
                let list: Vec<usize> = self.adjacency[old].iter().filter_map(|&w| map[w]).collect();
                m += list.len();
                list
            })
            .collect();
        Ok((Graph { adjacency, m: m / 2 }, map))
    }

    /// Vertices in smallest-last (degeneracy) order, together with the
    /// degeneracy: the largest degree a vertex had when it was removed.
    pub fn degeneracy_order(&self) -> (Vec<usize>, usize) {
        let n = self.n();
        let mut degree: Vec<usize> = self.adjacency.iter().map(Vec::len).collect();
        let max_deg = self.max_degree();
        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); max_deg + 1];
        for v in 0..n {
            buckets[degree[v]].push(v);
        }
        let mut removed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut degeneracy = 0;
        let mut low = 0;
        while order.len() < n {
            while buckets[low].is_empty() {
                low += 1;
            }
            let v = buckets[low].pop().unwrap();
            // lazy deletion: stale bucket entries are skipped
            if removed[v] || degree[v] != low {
                continue;
            }
            removed[v] = true;
            degeneracy = degeneracy.max(low);
            order.push(v);
            for &w in &self.adjacency[v] {
                if !removed[w] {
                    degree[w] -= 1;
                    buckets[degree[w]].push(w);
                    low = low.min(degree[w]);
                }
            }
        }
        (order, degeneracy)
    }
}

/// A set of vertices stored as a strictly ascending index list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct VertexSubset(Vec<usize>);

impl VertexSubset {
    /// Validates `members` against a host on `n` vertices. Order does not
    /// matter; duplicates do.
    pub fn new(n: usize, mut members: Vec<usize>) -> Result<Self, GraphError> {
        members.sort_unstable();
        for pair in members.windows(2) {
            if pair[0] == pair[1] {
                return Err(GraphError::DuplicateVertex(pair[0]));
            }
        }
        if let Some(&last) = members.last() {
            if last >= n {
                return Err(GraphError::VertexOutOfRange { vertex: last, n });
            }
        }
        Ok(VertexSubset(members))
    }

    /// All of `0..n`.
    pub fn full(n: usize) -> Self {
        VertexSubset((0..n).collect())
    }

    /// Members of a boolean mask.
    pub fn from_mask(mask: &[bool]) -> Self {
        VertexSubset(mask.iter().enumerate().filter(|(_, &b)| b).map(|(v, _)| v).collect())
    }

    /// Caller guarantees ascending, duplicate-free input.
    pub(crate) fn from_sorted_unchecked(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|p| p[0] < p[1]));
        VertexSubset(members)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, usize> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    /// Membership mask over a host with `n` vertices.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &v in &self.0 {
            mask[v] = true;
        }
        mask
    }

    pub fn is_subset_of(&self, other: &VertexSubset) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }
}

impl<'a> IntoIterator for &'a VertexSubset {
    type Item = &'a usize;
    type IntoIter = std::slice::Iter<'a, usize>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Formats 1-indexed, space separated, the way every user-facing listing does.
impl fmt::Display for VertexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", v + 1)?;
        }
        Ok(())
    }
}
