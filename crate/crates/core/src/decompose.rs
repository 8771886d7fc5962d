//! Special independent sets and the peeling they induce.
//!
//! A special independent set of a host graph on `h` vertices is an
//! independent set of at least `epsilon * h / d^2` vertices, each with at
//! most `d - 1` neighbours in the host. When the host has maximum average
//! degree at most `d - epsilon`, the set `S` of vertices of degree below `d`
//! has at least `epsilon * h / d` members, and any maximal independent
//! subset `I` of `S` satisfies `d * |I| >= |S|`: each vertex of `S \ I` has a
//! neighbour in `I`, and each vertex of `I` has at most `d - 1` neighbours.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, VertexSubset};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("no vertex of degree < {d} among the {remaining} remaining vertices")]
    NoLowDegreeVertex { d: usize, remaining: usize },
    #[error("the graph has no vertices")]
    EmptyGraph,
    #[error("invalid parameters: d = {d}, epsilon = {epsilon} (need d >= 1 and 0 < epsilon <= d)")]
    InvalidParams { d: usize, epsilon: Rational },
}

/// A structural defect found by [`SpecialSetCertificate::check`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateViolation {
    #[error("host has {actual} vertices but the certificate records {recorded}")]
    HostOrder { recorded: usize, actual: usize },
    #[error("vertex {0} is not in the host")]
    OutsideHost(usize),
    #[error("low-degree set disagrees with the host at vertex {0}")]
    LowDegreeSet(usize),
    #[error("vertex {0} of I is not in S")]
    NotInLowDegreeSet(usize),
    #[error("I contains the edge {0}-{1}")]
    NotIndependent(usize, usize),
    #[error("vertex {vertex} of I has host degree {degree} > d - 1")]
    DegreeTooLarge { vertex: usize, degree: usize },
    #[error("vertex {0} of S \\ I has no neighbour in I")]
    NotMaximal(usize),
}

/// `I`, `S`, `h`, `d`, `epsilon` for one extraction, with vertex indices
/// taken from the graph the host lives in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecialSetCertificate {
    pub independent: VertexSubset,
    pub low_degree: VertexSubset,
    pub host_order: usize,
    pub d: usize,
    pub epsilon: Rational,
}

impl SpecialSetCertificate {
    /// `epsilon * h / d^2`.
    pub fn size_threshold(&self) -> Rational {
        self.epsilon * Rational::from(self.host_order) / Rational::from(self.d * self.d)
    }

    /// `epsilon * h / d`.
    pub fn low_degree_threshold(&self) -> Rational {
        self.epsilon * Rational::from(self.host_order) / Rational::from(self.d)
    }

    /// `|I| >= epsilon * h / d^2`.
    pub fn size_bound_met(&self) -> bool {
        Rational::from(self.independent.len()) >= self.size_threshold()
    }

    /// `|S| >= epsilon * h / d`.
    pub fn low_degree_bound_met(&self) -> bool {
        Rational::from(self.low_degree.len()) >= self.low_degree_threshold()
    }

    /// Too few low-degree vertices: the host cannot have maximum average
    /// degree at most `d - epsilon`.
    pub fn hypothesis_violated(&self) -> bool {
        !self.low_degree_bound_met()
    }

    /// Re-derives every structural property against `g[host]`: `S` is exactly
    /// the set of host vertices of host degree `<= d - 1`, `I` is a subset of
    /// `S`, independent, and maximal within `S`. The size bounds are reported
    /// separately by [`Self::size_bound_met`] and [`Self::low_degree_bound_met`].
    pub fn check(&self, g: &Graph, host: &VertexSubset) -> Result<(), CertificateViolation> {
        if host.len() != self.host_order {
            return Err(CertificateViolation::HostOrder {
                recorded: self.host_order,
                actual: host.len(),
            });
        }
        let in_host = host.mask(g.n());
        let host_degree = |v: usize| g.neighbours(v).iter().filter(|&&w| in_host[w]).count();
        for &v in self.independent.iter().chain(self.low_degree.iter()) {
            if v >= g.n() || !in_host[v] {
                return Err(CertificateViolation::OutsideHost(v));
            }
        }
        for &v in host {
            if (host_degree(v) < self.d) != self.low_degree.contains(v) {
                return Err(CertificateViolation::LowDegreeSet(v));
            }
        }
        let in_i = self.independent.mask(g.n());
        for &u in &self.independent {
            if !self.low_degree.contains(u) {
                return Err(CertificateViolation::NotInLowDegreeSet(u));
            }
            let degree = host_degree(u);
            if degree + 1 > self.d {
                return Err(CertificateViolation::DegreeTooLarge { vertex: u, degree });
            }
            if let Some(&w) = g.neighbours(u).iter().find(|&&w| in_i[w]) {
                return Err(CertificateViolation::NotIndependent(u.min(w), u.max(w)));
            }
        }
        for &v in &self.low_degree {
            if !in_i[v] && !g.neighbours(v).iter().any(|&w| in_i[w]) {
                return Err(CertificateViolation::NotMaximal(v));
            }
        }
        Ok(())
    }
}

fn validate(d: usize, epsilon: Rational) -> Result<(), DecomposeError> {
    if d == 0 || !epsilon.is_positive() || epsilon > Rational::from(d) {
        return Err(DecomposeError::InvalidParams { d, epsilon });
    }
    Ok(())
}

/// Vertices of degree at most `d - 1`.
pub fn low_degree_set(g: &Graph, d: usize) -> VertexSubset {
    VertexSubset::from_sorted_unchecked((0..g.n()).filter(|&v| g.degree(v) < d).collect())
}

/// Greedy maximal independent subset of the low-degree set, scanned in
/// ascending `(degree, index)` order.
pub fn special_independent_set(
    g: &Graph,
    d: usize,
    epsilon: Rational,
) -> Result<SpecialSetCertificate, DecomposeError> {
    validate(d, epsilon)?;
    if g.is_empty() {
        return Err(DecomposeError::EmptyGraph);
    }
    let degree: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    let alive: Vec<usize> = (0..g.n()).collect();
    let mut scratch = Scratch::new(g.n());
    extract(g, &alive, &degree, d, epsilon, &mut scratch)
}

/// Reusable marks so repeated extractions cost time proportional to the
/// remaining graph, not to `n`.
struct Scratch {
    blocked: Vec<u32>,
    stamp: u32,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch {
            blocked: vec![0; n],
            stamp: 0,
        }
    }
}

/// One extraction on the host formed by the `alive` vertices, whose current
/// host degrees are given in `degree`.
fn extract(
    g: &Graph,
    alive: &[usize],
    degree: &[usize],
    d: usize,
    epsilon: Rational,
    scratch: &mut Scratch,
) -> Result<SpecialSetCertificate, DecomposeError> {
    let mut candidates: Vec<usize> = alive.iter().copied().filter(|&v| degree[v] < d).collect();
    if candidates.is_empty() {
        return Err(DecomposeError::NoLowDegreeVertex {
            d,
            remaining: alive.len(),
        });
    }
    let low_degree = {
        let mut sorted = candidates.clone();
        sorted.sort_unstable();
        VertexSubset::from_sorted_unchecked(sorted)
    };
    candidates.sort_unstable_by_key(|&v| (degree[v], v));

    scratch.stamp += 1;
    let stamp = scratch.stamp;
    let mut chosen = Vec::new();
    for v in candidates {
        if scratch.blocked[v] == stamp {
            continue;
        }
        chosen.push(v);
        for &w in g.neighbours(v) {
            scratch.blocked[w] = stamp;
        }
    }
    chosen.sort_unstable();
    Ok(SpecialSetCertificate {
        independent: VertexSubset::from_sorted_unchecked(chosen),
        low_degree,
        host_order: alive.len(),
        d,
        epsilon,
    })
}

/// Layers `I_0, I_1, ...` where `I_j` is the special independent set
/// extracted from the graph induced on layers `j..`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Peeling {
    pub d: usize,
    pub epsilon: Rational,
    certificates: Vec<SpecialSetCertificate>,
    #[serde(skip)]
    level: Vec<usize>,
}

impl Peeling {
    pub fn len(&self) -> usize {
        self.certificates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.certificates.is_empty()
    }

    pub fn layer(&self, j: usize) -> &VertexSubset {
        &self.certificates[j].independent
    }

    pub fn layers(&self) -> impl Iterator<Item = &VertexSubset> {
        self.certificates.iter().map(|c| &c.independent)
    }

    pub fn certificates(&self) -> &[SpecialSetCertificate] {
        &self.certificates
    }

    /// Index of the layer containing `v`.
    pub fn level_of(&self, v: usize) -> usize {
        self.level[v]
    }

    pub fn levels(&self) -> &[usize] {
        &self.level
    }

    /// Vertices of the host graph layer `j` was extracted from.
    pub fn host(&self, j: usize) -> VertexSubset {
        VertexSubset::from_sorted_unchecked((0..self.level.len()).filter(|&v| self.level[v] >= j).collect())
    }

    /// Whether every layer met `|I| >= epsilon * h / d^2`.
    pub fn all_size_bounds_met(&self) -> bool {
        self.certificates.iter().all(SpecialSetCertificate::size_bound_met)
    }

    /// Whether some layer had too few low-degree vertices for the host to
    /// satisfy the density hypothesis.
    pub fn hypothesis_violated(&self) -> bool {
        self.certificates.iter().any(SpecialSetCertificate::hypothesis_violated)
    }
}

/// Repeatedly removes a special independent set until nothing is left.
pub fn peel(g: &Graph, d: usize, epsilon: Rational) -> Result<Peeling, DecomposeError> {
    validate(d, epsilon)?;
    let n = g.n();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut level = vec![usize::MAX; n];
    let mut scratch = Scratch::new(n);
    let mut certificates = Vec::new();
    while !alive.is_empty() {
        let cert = extract(g, &alive, &degree, d, epsilon, &mut scratch)?;
        let j = certificates.len();
        for &u in &cert.independent {
            level[u] = j;
        }
        for &u in &cert.independent {
            for &w in g.neighbours(u) {
                if level[w] == usize::MAX {
                    degree[w] -= 1;
                }
            }
        }
        alive.retain(|&v| level[v] == usize::MAX);
        certificates.push(cert);
    }
    Ok(Peeling {
        d,
        epsilon,
        certificates,
        level,
    })
}

/// `ceil(ln n / ln(d^2 / (d^2 - epsilon))) + 1`: the most layers a peeling of
/// an `n`-vertex graph can have when every layer meets its size bound.
pub fn max_layers(n: usize, d: usize, epsilon: Rational) -> usize {
    if n <= 1 {
        return n;
    }
    let d2 = Rational::from(d * d);
    if epsilon >= d2 {
        return 1;
    }
    let shrink = (d2 / (d2 - epsilon)).to_f64();
    ((n as f64).ln() / shrink.ln()).ceil() as usize + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::mad;
    use crate::generate::{generate, GraphKind};

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    fn subset(v: &[usize]) -> VertexSubset {
        VertexSubset::new(usize::MAX, v.to_vec()).unwrap()
    }

    #[test]
    fn low_degree_examples() {
        assert_eq!(
            low_degree_set(&generate(GraphKind::Star(4)).unwrap(), 2),
            subset(&[1, 2, 3])
        );
        assert!(low_degree_set(&generate(GraphKind::Complete(4)).unwrap(), 3).is_empty());
        assert_eq!(
            low_degree_set(&generate(GraphKind::Path(3)).unwrap(), 2),
            subset(&[0, 2])
        );
    }

    #[test]
    fn special_set_of_star() {
        let g = generate(GraphKind::Star(4)).unwrap();
        let cert = special_independent_set(&g, 2, r(1, 2)).unwrap();
        assert_eq!(cert.independent, subset(&[1, 2, 3]));
        assert_eq!(cert.size_threshold(), r(1, 2));
        assert!(cert.size_bound_met());
        assert_eq!(cert.check(&g, &VertexSubset::full(4)), Ok(()));
    }

    #[test]
    fn special_set_small_cases() {
        let p3 = generate(GraphKind::Path(3)).unwrap();
        assert_eq!(
            special_independent_set(&p3, 2, r(1, 2)).unwrap().independent,
            subset(&[0, 2])
        );
        let single = Graph::empty(1);
        assert_eq!(
            special_independent_set(&single, 1, r(1, 1)).unwrap().independent,
            subset(&[0])
        );
    }

    #[test]
    fn special_set_errors() {
        let k4 = generate(GraphKind::Complete(4)).unwrap();
        assert_eq!(
            special_independent_set(&k4, 3, r(1, 1)),
            Err(DecomposeError::NoLowDegreeVertex { d: 3, remaining: 4 })
        );
        assert!(special_independent_set(&k4, 3, Rational::ZERO).is_err());
        assert!(special_independent_set(&k4, 3, r(4, 1)).is_err());
        assert_eq!(
            special_independent_set(&Graph::empty(0), 1, r(1, 1)),
            Err(DecomposeError::EmptyGraph)
        );
    }

    #[test]
    fn hypothesis_violation_is_flagged_not_fatal() {
        // K4 minus the edge 2-3: with d = 3 and epsilon = 3 the counting argument
        // needs 4 low-degree vertices, only 2 exist.
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let cert = special_independent_set(&g, 3, r(3, 1)).unwrap();
        assert!(cert.hypothesis_violated());
        assert_eq!(cert.low_degree, subset(&[2, 3]));
        assert_eq!(cert.independent, subset(&[2, 3]));
    }

    #[test]
    fn greedy_prefers_low_degree() {
        // Path 0-1-2-3 plus pendant 4 on 1. With d = 3, S = {0, 2, 3, 4};
        // the leaves come first and 3 blocks 2.
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (1, 4)]).unwrap();
        let cert = special_independent_set(&g, 3, r(1, 1)).unwrap();
        assert_eq!(cert.independent, subset(&[0, 3, 4]));
        assert_eq!(cert.check(&g, &VertexSubset::full(5)), Ok(()));
    }

    #[test]
    fn check_catches_defects() {
        let g = generate(GraphKind::Path(3)).unwrap();
        let host = VertexSubset::full(3);
        let good = special_independent_set(&g, 2, r(1, 2)).unwrap();
        let mut bad = good.clone();
        bad.independent = subset(&[0]);
        assert_eq!(bad.check(&g, &host), Err(CertificateViolation::NotMaximal(2)));
        let mut bad = good.clone();
        bad.d = 3;
        bad.low_degree = subset(&[0, 1, 2]);
        bad.independent = subset(&[0, 1]);
        assert_eq!(bad.check(&g, &host), Err(CertificateViolation::NotIndependent(0, 1)));
        let mut bad = good;
        bad.host_order = 2;
        assert!(matches!(
            bad.check(&g, &host),
            Err(CertificateViolation::HostOrder { .. })
        ));
    }

    #[test]
    fn peel_examples() {
        let p3 = generate(GraphKind::Path(3)).unwrap();
        let peeling = peel(&p3, 2, r(1, 2)).unwrap();
        let layers: Vec<_> = peeling.layers().cloned().collect();
        assert_eq!(layers, vec![subset(&[0, 2]), subset(&[1])]);
        assert_eq!(peeling.host(1), subset(&[1]));

        let edgeless = peel(&Graph::empty(5), 1, r(1, 1)).unwrap();
        assert_eq!(edgeless.len(), 1);
        assert_eq!(edgeless.layer(0), &VertexSubset::full(5));

        let k4 = generate(GraphKind::Complete(4)).unwrap();
        assert!(matches!(
            peel(&k4, 3, r(1, 1)),
            Err(DecomposeError::NoLowDegreeVertex { .. })
        ));

        assert!(peel(&Graph::empty(0), 2, r(1, 1)).unwrap().is_empty());
    }

    #[test]
    fn peel_fails_exactly_on_non_degenerate_graphs() {
        for seed in 0..30 {
            let g = generate(GraphKind::ForestUnion {
                n: 25,
                forests: 3,
                seed,
            })
            .unwrap();
            let (_, degeneracy) = g.degeneracy_order();
            for d in 1..=6 {
                assert_eq!(peel(&g, d, r(1, 1)).is_ok(), degeneracy < d, "seed {seed} d {d}");
            }
        }
    }

    #[test]
    fn peeling_layers_are_certified_on_sparse_graphs() {
        for seed in 0..40 {
            let g = generate(GraphKind::ForestUnion {
                n: 40,
                forests: 2,
                seed,
            })
            .unwrap();
            let madval = mad(&g).unwrap();
            let d = (madval.floor() + 1) as usize;
            let eps = Rational::from(d) - madval;
            let peeling = peel(&g, d, eps).unwrap();
            let mut seen = vec![0usize; g.n()];
            let mut remaining = g.n();
            for (j, cert) in peeling.certificates().iter().enumerate() {
                let host = peeling.host(j);
                assert_eq!(cert.check(&g, &host), Ok(()));
                assert!(cert.low_degree_bound_met());
                assert!(cert.size_bound_met());
                let after = remaining - cert.independent.len();
                let shrink = Rational::from(1usize) - eps / Rational::from(d * d);
                assert!(Rational::from(after) <= shrink * Rational::from(remaining));
                remaining = after;
                for &v in &cert.independent {
                    seen[v] += 1;
                }
            }
            assert!(seen.iter().all(|&c| c == 1));
            assert!(peeling.len() <= max_layers(g.n(), d, eps));
        }
    }
}
