//! Ground truth by exhaustive search of the reconfiguration graph `R_k(G)`:
//! nodes are the proper `k`-colourings, edges join colourings that differ on
//! exactly one vertex. Only usable while `k^n` stays below [`STATE_LIMIT`].

use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::colouring::{Colour, Colouring};
use crate::density::{mad, Params};
use crate::graph::Graph;
use crate::recolor::{length_bound, LengthBudget};

/// Largest admissible `k^n`.
pub const STATE_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("k^n = {k}^{n} exceeds the state limit {STATE_LIMIT}")]
    TooLarge { n: usize, k: usize },
    #[error("colouring does not match the graph ({0})")]
    Shape(String),
    #[error("endpoint colouring is not proper")]
    ImproperEndpoint,
}

/// Positional base-`k` encoding of colourings of an `n`-vertex graph.
struct Codec<'g> {
    g: &'g Graph,
    k: usize,
    powers: Vec<u64>,
}

impl<'g> Codec<'g> {
    fn new(g: &'g Graph, k: usize) -> Result<Self, OracleError> {
        let too_large = OracleError::TooLarge { n: g.n(), k };
        let total = (k as u64).checked_pow(g.n() as u32).ok_or(too_large.clone())?;
        if total > STATE_LIMIT || k == 0 {
            return Err(too_large);
        }
        let powers = (0..g.n()).map(|v| (k as u64).pow(v as u32)).collect();
        Ok(Codec { g, k, powers })
    }

    fn encode(&self, colours: &[Colour]) -> u64 {
        colours
            .iter()
            .zip(&self.powers)
            .map(|(&c, &p)| (c as u64 - 1) * p)
            .sum()
    }

    fn decode(&self, code: u64, out: &mut [Colour]) {
        let mut rest = code;
        for slot in out.iter_mut() {
            *slot = (rest % self.k as u64) as usize + 1;
            rest /= self.k as u64;
        }
    }

    /// Codes of all colourings one proper move away from `colours`.
    fn for_each_move(&self, code: u64, colours: &[Colour], mut visit: impl FnMut(u64)) {
        for v in 0..self.g.n() {
            let current = colours[v];
            for c in 1..=self.k {
                if c == current || self.g.neighbours(v).iter().any(|&w| colours[w] == c) {
                    continue;
                }
                let next = code - (current as u64 - 1) * self.powers[v] + (c as u64 - 1) * self.powers[v];
                visit(next);
            }
        }
    }

    /// Every proper colouring, by backtracking, as sorted codes.
    fn enumerate(&self) -> Vec<u64> {
        let n = self.g.n();
        let mut colours = vec![0; n];
        let mut out = Vec::new();
        self.extend(0, &mut colours, &mut out);
        out.sort_unstable();
        out
    }

    fn extend(&self, v: usize, colours: &mut [Colour], out: &mut Vec<u64>) {
        if v == colours.len() {
            out.push(self.encode(colours));
            return;
        }
        for c in 1..=self.k {
            if self.g.neighbours(v).iter().any(|&w| w < v && colours[w] == c) {
                continue;
            }
            colours[v] = c;
            self.extend(v + 1, colours, out);
        }
        colours[v] = 0;
    }
}

fn check_endpoint(g: &Graph, k: usize, f: &Colouring) -> Result<(), OracleError> {
    if f.len() != g.n() || f.k() != k {
        return Err(OracleError::Shape(format!("{} colours over k = {}", f.len(), f.k())));
    }
    if f.conflict(g).is_some() {
        return Err(OracleError::ImproperEndpoint);
    }
    Ok(())
}

/// Shortest path length between two proper colourings in `R_k(G)`, or
/// `None` when they lie in different components.
pub fn bfs_distance(g: &Graph, k: usize, alpha: &Colouring, beta: &Colouring) -> Result<Option<usize>, OracleError> {
    let codec = Codec::new(g, k)?;
    check_endpoint(g, k, alpha)?;
    check_endpoint(g, k, beta)?;
    let source = codec.encode(alpha.as_slice());
    let target = codec.encode(beta.as_slice());
    let mut dist: HashMap<u64, usize> = HashMap::from([(source, 0)]);
    let mut queue = VecDeque::from([source]);
    let mut colours = vec![0; g.n()];
    while let Some(code) = queue.pop_front() {
        let here = dist[&code];
        if code == target {
            return Ok(Some(here));
        }
        codec.decode(code, &mut colours);
        codec.for_each_move(code, &colours, |next| {
            dist.entry(next).or_insert_with(|| {
                queue.push_back(next);
                here + 1
            });
        });
    }
    Ok(None)
}

/// `R_k(G)` as an explicit adjacency structure over sorted codes.
struct Reconfiguration {
    adjacency: Vec<Vec<u32>>,
}

impl Reconfiguration {
    fn build(g: &Graph, k: usize) -> Result<Self, OracleError> {
        let codec = Codec::new(g, k)?;
        let codes = codec.enumerate();
        let adjacency = codes
            .par_iter()
            .map_init(
                || vec![0; g.n()],
                |colours, &code| {
                    codec.decode(code, colours);
                    let mut list = Vec::new();
                    codec.for_each_move(code, colours, |next| {
                        let idx = codes.binary_search(&next).expect("moves stay proper");
                        list.push(idx as u32);
                    });
                    list
                },
            )
            .collect();
        Ok(Reconfiguration { adjacency })
    }

    fn bfs(&self, source: usize, dist: &mut [u32]) -> (Vec<usize>, u32) {
        dist.iter_mut().for_each(|d| *d = u32::MAX);
        dist[source] = 0;
        let mut order = vec![source];
        let mut head = 0;
        let mut far = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &w in &self.adjacency[u] {
                let w = w as usize;
                if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    far = far.max(dist[w]);
                    order.push(w);
                }
            }
        }
        (order, far)
    }

    /// Components as node lists, in order of their smallest node.
    fn components(&self) -> Vec<Vec<usize>> {
        let mut dist = vec![u32::MAX; self.adjacency.len()];
        let mut assigned = vec![false; self.adjacency.len()];
        let mut out = Vec::new();
        for s in 0..self.adjacency.len() {
            if assigned[s] {
                continue;
            }
            let (members, _) = self.bfs(s, &mut dist);
            for &v in &members {
                assigned[v] = true;
            }
            out.push(members);
        }
        out
    }

    fn diameter(&self, component: &[usize]) -> usize {
        component
            .par_iter()
            .map_init(|| vec![u32::MAX; self.adjacency.len()], |dist, &s| self.bfs(s, dist).1)
            .max()
            .unwrap_or(0) as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReconfSummary {
    pub colouring_count: usize,
    pub component_count: usize,
    pub component_diameters: Vec<usize>,
    pub frozen_count: usize,
}

impl ReconfSummary {
    pub fn is_connected(&self) -> bool {
        self.component_count <= 1
    }

    pub fn diameter(&self) -> usize {
        self.component_diameters.iter().copied().max().unwrap_or(0)
    }
}

/// Counts, components, per-component diameters and frozen colourings of
/// `R_k(G)`.
pub fn summarize(g: &Graph, k: usize) -> Result<ReconfSummary, OracleError> {
    let r = Reconfiguration::build(g, k)?;
    let components = r.components();
    let component_diameters = components.iter().map(|c| r.diameter(c)).collect();
    Ok(ReconfSummary {
        colouring_count: r.adjacency.len(),
        component_count: components.len(),
        component_diameters,
        frozen_count: r.adjacency.iter().filter(|a| a.is_empty()).count(),
    })
}

/// Whether a colouring admits no single-vertex proper recolouring.
pub fn is_frozen(g: &Graph, f: &Colouring) -> bool {
    (0..g.n()).all(|v| (1..=f.k()).all(|c| c == f.colour(v) || g.neighbours(v).iter().any(|&w| f.colour(w) == c)))
}

/// Outcome of checking the polynomial diameter bound against ground truth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiameterReport {
    pub n: usize,
    pub k: usize,
    pub colourings: usize,
    pub components: usize,
    pub connected: bool,
    pub diameter: usize,
    pub budget: LengthBudget,
    /// `mad(G) <= d - epsilon` and `k >= d + 1`.
    pub hypothesis_holds: bool,
    pub within_bound: bool,
}

impl DiameterReport {
    /// Connected with diameter inside the budget.
    pub fn passed(&self) -> bool {
        self.connected && self.within_bound
    }
}

/// Reports connectivity of `R_k(G)` and compares its diameter with
/// `length_bound(n, d, epsilon).total_bound`. Failures are reported in the
/// returned value rather than as errors.
pub fn diameter_check(g: &Graph, k: usize, params: &Params) -> Result<DiameterReport, OracleError> {
    let summary = summarize(g, k)?;
    let budget = length_bound(g.n(), params.d, params.epsilon);
    let hypothesis_holds = k > params.d && (g.is_empty() || params.admits(mad(g).expect("nonempty graph")));
    let diameter = summary.diameter();
    Ok(DiameterReport {
        n: g.n(),
        k,
        colourings: summary.colouring_count,
        components: summary.component_count,
        connected: summary.is_connected(),
        diameter,
        within_bound: budget.admits(diameter),
        budget,
        hypothesis_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GraphKind};
    use crate::rational::Rational;

    fn col(c: &[usize], k: usize) -> Colouring {
        Colouring::new(c.to_vec(), k).unwrap()
    }

    /// Proper colourings by filtering every tuple, independent of the
    /// backtracking enumerator.
    fn count_by_filter(g: &Graph, k: usize) -> usize {
        let n = g.n();
        (0..(k as u64).pow(n as u32))
            .filter(|&code| {
                let colours: Vec<u64> = (0..n).map(|v| code / (k as u64).pow(v as u32) % k as u64).collect();
                g.edges().all(|(u, v)| colours[u] != colours[v])
            })
            .count()
    }

    #[test]
    fn p3_distance() {
        let g = generate(GraphKind::Path(3)).unwrap();
        let d = bfs_distance(&g, 3, &col(&[1, 2, 1], 3), &col(&[2, 1, 2], 3)).unwrap();
        assert_eq!(d, Some(4));
    }

    #[test]
    fn identical_endpoints() {
        let g = generate(GraphKind::Cycle(5)).unwrap();
        let a = col(&[1, 2, 1, 2, 3], 3);
        assert_eq!(bfs_distance(&g, 3, &a, &a).unwrap(), Some(0));
    }

    #[test]
    fn k2_is_frozen() {
        let g = generate(GraphKind::Path(2)).unwrap();
        assert_eq!(bfs_distance(&g, 2, &col(&[1, 2], 2), &col(&[2, 1], 2)).unwrap(), None);
        assert!(is_frozen(&g, &col(&[1, 2], 2)));
        let s = summarize(&g, 2).unwrap();
        assert_eq!(
            s,
            ReconfSummary {
                colouring_count: 2,
                component_count: 2,
                component_diameters: vec![0, 0],
                frozen_count: 2
            }
        );
    }

    #[test]
    fn single_vertex_summary() {
        let s = summarize(&Graph::empty(1), 3).unwrap();
        assert_eq!(
            s,
            ReconfSummary {
                colouring_count: 3,
                component_count: 1,
                component_diameters: vec![1],
                frozen_count: 0
            }
        );
    }

    #[test]
    fn c4_two_colourings_frozen() {
        let g = generate(GraphKind::Cycle(4)).unwrap();
        let s = summarize(&g, 2).unwrap();
        assert_eq!((s.colouring_count, s.component_count, s.frozen_count), (2, 2, 2));
    }

    #[test]
    fn diameter_check_examples() {
        let p3 = generate(GraphKind::Path(3)).unwrap();
        let report = diameter_check(&p3, 3, &Params::new(2, Rational::new(1, 2), 3).unwrap()).unwrap();
        assert!(report.connected && report.within_bound && report.hypothesis_holds);
        assert_eq!(report.diameter, 4);
        assert_eq!(report.budget.total_bound, 9u32.into());

        let edge = generate(GraphKind::Path(2)).unwrap();
        let report = diameter_check(&edge, 3, &Params::new(2, Rational::integer(1), 3).unwrap()).unwrap();
        assert_eq!((report.colourings, report.connected, report.diameter), (6, true, 3));

        let pair = Graph::empty(2);
        let report = diameter_check(&pair, 2, &Params::new(1, Rational::integer(1), 2).unwrap()).unwrap();
        assert_eq!((report.connected, report.diameter), (true, 2));
    }

    #[test]
    fn enumeration_matches_filtering() {
        for kind in [
            GraphKind::Cycle(5),
            GraphKind::Complete(4),
            GraphKind::Star(5),
            GraphKind::Grid { rows: 2, cols: 3 },
        ] {
            let g = generate(kind).unwrap();
            for k in 1..=4 {
                assert_eq!(
                    summarize(&g, k).unwrap().colouring_count,
                    count_by_filter(&g, k),
                    "{kind} k={k}"
                );
            }
        }
    }

    #[test]
    fn guard_and_shape_errors() {
        let g = Graph::empty(30);
        let a = col(&[1; 30], 2);
        assert!(matches!(bfs_distance(&g, 2, &a, &a), Err(OracleError::TooLarge { .. })));
        let p3 = generate(GraphKind::Path(3)).unwrap();
        assert_eq!(
            bfs_distance(&p3, 3, &col(&[1, 1, 2], 3), &col(&[1, 2, 1], 3)),
            Err(OracleError::ImproperEndpoint)
        );
        assert!(matches!(
            bfs_distance(&p3, 3, &col(&[1, 2], 3), &col(&[1, 2, 1], 3)),
            Err(OracleError::Shape(_))
        ));
    }

    #[test]
    fn distance_is_symmetric() {
        let g = generate(GraphKind::Cycle(5)).unwrap();
        let colourings = [
            col(&[1, 2, 1, 2, 3], 3),
            col(&[2, 3, 2, 3, 1], 3),
            col(&[1, 3, 1, 2, 3], 3),
        ];
        for a in &colourings {
            for b in &colourings {
                assert_eq!(bfs_distance(&g, 3, a, b).unwrap(), bfs_distance(&g, 3, b, a).unwrap());
            }
        }
    }
}
