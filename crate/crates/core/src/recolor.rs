//! Recolouring sequences between two proper colourings.
//!
//! The construction runs over a [`Peeling`] from the innermost layer
//! outwards. Given a valid sequence for the graph `H` induced on layers
//! `j+1..`, it is replayed on `H + I_j`: whenever an inner step moves `v` to
//! colour `c` and some `u` in `I_j` adjacent to `v` currently holds `c`, `u`
//! is first moved to the smallest colour that no neighbour uses and that is
//! not `c`. Since `u` has at most `d - 1` neighbours and `k >= d + 1`, such a
//! colour always exists. Once the replay ends, `H` carries `beta`, and every
//! vertex of `I_j` is moved to its `beta` colour directly.
//!
//! A vertex of `I_j` is recoloured at most once per inner step of one of its
//! (at most `d - 1`) neighbours plus once at the end, which gives the
//! recurrence behind [`length_bound`].

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::colouring::{Colour, Colouring, ColouringError};
use crate::decompose::{peel, DecomposeError, Peeling};
use crate::density::Params;
use crate::graph::Graph;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecolorError {
    #[error(transparent)]
    Colouring(#[from] ColouringError),
    #[error("the start colouring is not proper (edge {0}-{1})")]
    ImproperStart(usize, usize),
    #[error("the target colouring is not proper (edge {0}-{1})")]
    ImproperTarget(usize, usize),
    #[error("palette mismatch: colourings use k = {colourings}, parameters k = {params}")]
    PaletteMismatch { colourings: usize, params: usize },
    #[error("k = {k} is below d + 1 = {}", d + 1)]
    PaletteTooSmall { k: usize, d: usize },
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error("peeling covers {peeling} vertices but the graph has {graph}")]
    PeelingMismatch { peeling: usize, graph: usize },
    #[error("no free colour for vertex {0}: a certificate is broken")]
    NoFreeColour(usize),
}

/// Move `vertex` to `colour`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RecolourStep {
    pub vertex: usize,
    pub colour: Colour,
}

impl RecolourStep {
    pub fn new(vertex: usize, colour: Colour) -> Self {
        RecolourStep { vertex, colour }
    }
}

/// A walk in the reconfiguration graph from `start` to `end`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecolourSequence {
    pub start: Colouring,
    pub end: Colouring,
    pub steps: Vec<RecolourStep>,
}

impl RecolourSequence {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// How many times each vertex is recoloured.
    pub fn recolour_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.start.len()];
        for step in &self.steps {
            counts[step.vertex] += 1;
        }
        counts
    }

    pub fn max_recolourings(&self) -> usize {
        self.recolour_counts().into_iter().max().unwrap_or(0)
    }
}

/// Smallest colour in `1..=k` used by no neighbour of `u` and different from
/// `forbidden`.
pub fn free_colour(g: &Graph, current: &Colouring, u: usize, forbidden: Colour) -> Result<Colour, RecolorError> {
    free_colour_among(g.neighbours(u).iter().copied(), current, u, forbidden)
}

fn free_colour_among(
    neighbours: impl Iterator<Item = usize>,
    current: &Colouring,
    u: usize,
    forbidden: Colour,
) -> Result<Colour, RecolorError> {
    let k = current.k();
    let mut taken: Vec<Colour> = neighbours.map(|w| current.colour(w)).collect();
    taken.push(forbidden);
    taken.sort_unstable();
    taken.dedup();
    let mut candidate = 1;
    for c in taken {
        if c == candidate {
            candidate += 1;
        } else if c > candidate {
            break;
        }
    }
    if candidate > k {
        return Err(RecolorError::NoFreeColour(u));
    }
    Ok(candidate)
}

/// Peels `g` with `params` and builds the sequence from `alpha` to `beta`.
pub fn recolor(
    g: &Graph,
    alpha: &Colouring,
    beta: &Colouring,
    params: &Params,
) -> Result<RecolourSequence, RecolorError> {
    if alpha.k() != params.k || beta.k() != params.k {
        return Err(RecolorError::PaletteMismatch {
            colourings: alpha.k().max(beta.k()),
            params: params.k,
        });
    }
    check_endpoints(g, alpha, beta)?;
    let peeling = peel(g, params.d, params.epsilon)?;
    recolor_over(g, &peeling, alpha, beta)
}

fn check_endpoints(g: &Graph, alpha: &Colouring, beta: &Colouring) -> Result<(), RecolorError> {
    alpha.check_len(g)?;
    beta.check_len(g)?;
    if alpha.k() != beta.k() {
        return Err(RecolorError::PaletteMismatch {
            colourings: alpha.k(),
            params: beta.k(),
        });
    }
    if let Some((u, v)) = alpha.conflict(g) {
        return Err(RecolorError::ImproperStart(u, v));
    }
    if let Some((u, v)) = beta.conflict(g) {
        return Err(RecolorError::ImproperTarget(u, v));
    }
    Ok(())
}

/// Builds the sequence over a peeling computed earlier.
pub fn recolor_over(
    g: &Graph,
    peeling: &Peeling,
    alpha: &Colouring,
    beta: &Colouring,
) -> Result<RecolourSequence, RecolorError> {
    check_endpoints(g, alpha, beta)?;
    if peeling.levels().len() != g.n() {
        return Err(RecolorError::PeelingMismatch {
            peeling: peeling.levels().len(),
            graph: g.n(),
        });
    }
    let k = alpha.k();
    if k < peeling.d + 1 {
        return Err(RecolorError::PaletteTooSmall { k, d: peeling.d });
    }
    let level = peeling.levels();

    // Vertices by descending level: the graph at level j is a prefix.
    let mut by_level: Vec<usize> = (0..g.n()).collect();
    by_level.sort_by_key(|&v| std::cmp::Reverse(level[v]));

    let mut current = alpha.clone();
    let mut steps: Vec<RecolourStep> = Vec::new();
    let mut prefix = 0;
    for j in (0..peeling.len()).rev() {
        while prefix < by_level.len() && level[by_level[prefix]] >= j {
            prefix += 1;
        }
        for &v in &by_level[..prefix] {
            current.set(v, alpha.colour(v));
        }
        let mut replay = Vec::with_capacity(steps.len() + peeling.layer(j).len());
        for step in steps {
            for &u in g.neighbours(step.vertex) {
                if level[u] == j && current.colour(u) == step.colour {
                    let inner = g.neighbours(u).iter().copied().filter(|&w| level[w] > j);
                    let colour = free_colour_among(inner, &current, u, step.colour)?;
                    current.set(u, colour);
                    replay.push(RecolourStep::new(u, colour));
                }
            }
            current.set(step.vertex, step.colour);
            replay.push(step);
        }
        for &u in peeling.layer(j) {
            if current.colour(u) != beta.colour(u) {
                current.set(u, beta.colour(u));
                replay.push(RecolourStep::new(u, beta.colour(u)));
            }
        }
        steps = replay;
    }
    Ok(RecolourSequence {
        start: alpha.clone(),
        end: beta.clone(),
        steps,
    })
}

/// Why a sequence is not a valid walk from `alpha` to `beta`.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum FailureReason {
    #[error("colourings have different lengths or palettes")]
    Shape,
    #[error("start colouring is not proper (edge {0}-{1})")]
    ImproperStart(usize, usize),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("colour {0} out of range")]
    ColourOutOfRange(Colour),
    #[error("vertex {vertex} already has colour {colour}")]
    NoOp { vertex: usize, colour: Colour },
    #[error("edge {0}-{1} becomes monochromatic")]
    Monochromatic(usize, usize),
    #[error("final colouring differs from the target at vertex {0}")]
    EndMismatch(usize),
}

/// The first violation found while replaying; `step` is `None` for problems
/// with the endpoints themselves.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("{}: {reason}", match step { Some(i) => format!("step {i}"), None => "sequence".to_string() })]
pub struct SequenceFailure {
    pub step: Option<usize>,
    pub reason: FailureReason,
}

/// Replays `steps` from `alpha`, checking each step is a move in the
/// reconfiguration graph, and that the walk ends at `beta`.
pub fn verify_sequence(
    g: &Graph,
    alpha: &Colouring,
    beta: &Colouring,
    steps: &[RecolourStep],
) -> Result<(), SequenceFailure> {
    let fail = |step, reason| Err(SequenceFailure { step, reason });
    if alpha.len() != g.n() || beta.len() != g.n() || alpha.k() != beta.k() {
        return fail(None, FailureReason::Shape);
    }
    if let Some((u, v)) = alpha.conflict(g) {
        return fail(None, FailureReason::ImproperStart(u, v));
    }
    let k = alpha.k();
    let mut current = alpha.clone();
    for (i, step) in steps.iter().enumerate() {
        let RecolourStep { vertex, colour } = *step;
        if vertex >= g.n() {
            return fail(Some(i), FailureReason::VertexOutOfRange(vertex));
        }
        if colour == 0 || colour > k {
            return fail(Some(i), FailureReason::ColourOutOfRange(colour));
        }
        if current.colour(vertex) == colour {
            return fail(Some(i), FailureReason::NoOp { vertex, colour });
        }
        if let Some(&w) = g.neighbours(vertex).iter().find(|&&w| current.colour(w) == colour) {
            return fail(Some(i), FailureReason::Monochromatic(vertex.min(w), vertex.max(w)));
        }
        current.set(vertex, colour);
    }
    if let Some(v) = (0..g.n()).find(|&v| current.colour(v) != beta.colour(v)) {
        return fail(None, FailureReason::EndMismatch(v));
    }
    Ok(())
}

/// Exact a-priori budget: `levels` is the layer count when every layer
/// removes `ceil(epsilon * h / d^2)` of the `h` remaining vertices,
/// `per_vertex_max` unrolls `T <- (d - 1) T + 1` that many times, and
/// `total_bound = n * per_vertex_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LengthBudget {
    pub levels: usize,
    #[serde(serialize_with = "as_decimal")]
    pub per_vertex_max: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub total_bound: BigUint,
}

fn as_decimal<S: serde::Serializer>(value: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(value)
}

impl LengthBudget {
    /// `length <= total_bound`.
    pub fn admits(&self, length: usize) -> bool {
        BigUint::from(length) <= self.total_bound
    }

    /// `count <= per_vertex_max`.
    pub fn admits_per_vertex(&self, count: usize) -> bool {
        BigUint::from(count) <= self.per_vertex_max
    }
}

pub fn length_bound(n: usize, d: usize, epsilon: Rational) -> LengthBudget {
    let d2 = Rational::from(d * d);
    let mut levels = 0;
    let mut h = n;
    while h > 0 {
        let removed = (epsilon * Rational::from(h) / d2).ceil().max(1) as usize;
        h = h.saturating_sub(removed);
        levels += 1;
    }
    let branching = BigUint::from(d.saturating_sub(1));
    let mut per_vertex_max = BigUint::zero();
    for _ in 0..levels {
        per_vertex_max = &per_vertex_max * &branching + 1u32;
    }
    let total_bound = &per_vertex_max * BigUint::from(n);
    LengthBudget {
        levels,
        per_vertex_max,
        total_bound,
    }
}
