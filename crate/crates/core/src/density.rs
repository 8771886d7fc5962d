//! Exact maximum average degree and the parameters it induces.
//!
//! The densest subgraph is found with the classical min-cut construction:
//! for a guess `g`, a network with a source arc of capacity `m` into every
//! vertex, a sink arc of capacity `m + 2g - deg(v)` out of every vertex and a
//! unit arc each way along every edge has a minimum cut below `m * n` exactly
//! when some vertex set `S` satisfies `|E(S)| / |S| > g`; the source side of
//! that cut is such a set. Guesses are kept on the grid `t / n^2`, which is
//! finer than the smallest gap between two distinct densities `e / v` with
//! `v <= n`, so the binary search terminates on the exact optimum without
//! any floating point.

use serde::Serialize;
use thiserror::Error;

use crate::flow::FlowNetwork;
use crate::graph::{Graph, VertexSubset};
use crate::rational::Rational;

/// Vertex limit of [`mad_bruteforce`].
pub const BRUTEFORCE_MAX_N: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DensityError {
    #[error("the graph has no vertices")]
    EmptyGraph,
    #[error("brute force is limited to {BRUTEFORCE_MAX_N} vertices, got {0}")]
    TooLarge(usize),
    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(Rational),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// A maximiser of `|E(H)| / |V(H)|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensestResult {
    pub subset: VertexSubset,
    pub density: Rational,
    pub mad: Rational,
}

pub fn densest_subgraph(g: &Graph) -> Result<DensestResult, DensityError> {
    let n = g.n();
    if n == 0 {
        return Err(DensityError::EmptyGraph);
    }
    if g.m() == 0 {
        return Ok(DensestResult {
            subset: VertexSubset::full(1),
            density: Rational::ZERO,
            mad: Rational::ZERO,
        });
    }
    let scale = (n as i128) * (n as i128);
    // Invariants: some set is denser than lo/scale, none is denser than hi/scale.
    let mut lo: i128 = 0;
    let mut hi: i128 = ((n as i128 - 1) * scale + 1) / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if denser_than(g, mid, scale).is_some() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let subset = denser_than(g, lo, scale).expect("lower end of the search stays feasible");
    let density = Rational::new(g.induced_edge_count(&subset) as i64, subset.len() as i64);
    Ok(DensestResult {
        subset,
        density,
        mad: density * Rational::integer(2),
    })
}

/// A vertex set of density strictly above `numerator / scale`, if any.
fn denser_than(g: &Graph, numerator: i128, scale: i128) -> Option<VertexSubset> {
    let n = g.n();
    let m = g.m() as i128;
    let (source, sink) = (n, n + 1);
    let mut net = FlowNetwork::<i128>::new(n + 2);
    for v in 0..n {
        net.add_arc(source, v, m * scale);
        net.add_arc(v, sink, m * scale + 2 * numerator - g.degree(v) as i128 * scale);
    }
    for (u, v) in g.edges() {
        net.add_pair(u, v, scale, scale);
    }
    let flow = net.max_flow(source, sink);
    if flow >= m * n as i128 * scale {
        return None;
    }
    let side = net.source_side(source);
    let subset = VertexSubset::from_mask(&side[..n]);
    debug_assert!(!subset.is_empty());
    Some(subset)
}

/// Maximum average degree: twice the largest subgraph density.
pub fn mad(g: &Graph) -> Result<Rational, DensityError> {
    Ok(densest_subgraph(g)?.mad)
}

/// Maximum average degree by enumerating every nonempty vertex subset.
pub fn mad_bruteforce(g: &Graph) -> Result<Rational, DensityError> {
    let n = g.n();
    if n == 0 {
        return Err(DensityError::EmptyGraph);
    }
    if n > BRUTEFORCE_MAX_N {
        return Err(DensityError::TooLarge(n));
    }
    let adjacency: Vec<u32> = (0..n)
        .map(|v| g.neighbours(v).iter().fold(0u32, |acc, &w| acc | 1 << w))
        .collect();
    let mut best = Rational::ZERO;
    for mask in 1u32..(1u32 << n) {
        let mut twice_edges = 0;
        let mut bits = mask;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            twice_edges += (adjacency[v] & mask).count_ones();
            bits &= bits - 1;
        }
        let value = Rational::new(twice_edges as i64, mask.count_ones() as i64);
        if value > best {
            best = value;
        }
    }
    Ok(best)
}

/// The hypothesis of the recolouring theorem instantiated for one graph:
/// `mad <= d - epsilon` and `k >= d + 1`, with the exponent `c` of the
/// polynomial diameter bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Params {
    pub d: usize,
    pub epsilon: Rational,
    pub k: usize,
    pub c: f64,
}

impl Params {
    pub fn new(d: usize, epsilon: Rational, k: usize) -> Result<Self, DensityError> {
        if d == 0 {
            return Err(DensityError::InvalidParams("d must be positive".into()));
        }
        if !epsilon.is_positive() {
            return Err(DensityError::NonPositiveEpsilon(epsilon));
        }
        if epsilon > Rational::from(d) {
            return Err(DensityError::InvalidParams(format!(
                "epsilon {epsilon} exceeds d = {d}"
            )));
        }
        if k < d + 1 {
            return Err(DensityError::InvalidParams(format!(
                "k = {k} is below d + 1 = {}",
                d + 1
            )));
        }
        let c = diameter_exponent(d, epsilon)?;
        Ok(Params { d, epsilon, k, c })
    }

    /// Whether a graph with maximum average degree `madval` satisfies
    /// `madval <= d - epsilon`.
    pub fn admits(&self, madval: Rational) -> bool {
        madval <= Rational::from(self.d) - self.epsilon
    }
}

/// Smallest integer `d` with `madval < d <= k - 1`, and `epsilon = d - madval`.
/// `None` when `madval >= k - 1`.
pub fn derive_params(madval: Rational, k: usize) -> Option<Params> {
    let d = (madval.floor() + 1).max(1) as usize;
    if d + 1 > k {
        return None;
    }
    let epsilon = Rational::from(d) - madval;
    Params::new(d, epsilon, k).ok()
}

/// Parameters for an explicit `d` (and optionally `epsilon`) chosen by the
/// caller instead of [`derive_params`]. Without `epsilon`, the largest
/// admissible slack `d - madval` is used.
pub fn params_with_override(
    madval: Rational,
    k: usize,
    d: usize,
    epsilon: Option<Rational>,
) -> Result<Params, DensityError> {
    let slack = Rational::from(d) - madval;
    let epsilon = epsilon.unwrap_or(slack);
    if epsilon > slack {
        return Err(DensityError::InvalidParams(format!(
            "mad {madval} exceeds d - epsilon = {}",
            Rational::from(d) - epsilon
        )));
    }
    Params::new(d, epsilon, k)
}

/// Exponent `c` of the `O(n^c)` per-vertex recolouring count, from the
/// recurrence `f(n) = (d-1) f((d^2 - epsilon) n / d^2) + 1`:
/// `ln(d-1) / ln(d^2 / (d^2 - epsilon))` for `d >= 3`, and `0` when the
/// branching factor `d - 1` is at most one (the count is then logarithmic).
pub fn diameter_exponent(d: usize, epsilon: Rational) -> Result<f64, DensityError> {
    if !epsilon.is_positive() {
        return Err(DensityError::NonPositiveEpsilon(epsilon));
    }
    if d <= 2 {
        return Ok(0.0);
    }
    let d2 = (d * d) as f64;
    let shrink = d2 / (d2 - epsilon.to_f64());
    Ok(((d - 1) as f64).ln() / shrink.ln())
}
