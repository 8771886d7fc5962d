//! Maximum flow by blocking flows on level graphs (Dinic's algorithm) with
//! integer capacities.

use std::collections::VecDeque;

use num_traits::{PrimInt, Signed};

#[derive(Debug, Clone)]
struct Arc<C> {
    to: usize,
    rev: usize,
    residual: C,
}

/// A flow network over nodes `0..len`. Arcs are stored with their reverse
/// residual arc, so after [`FlowNetwork::max_flow`] the residual graph is
/// available for extracting a minimum cut.
#[derive(Debug, Clone)]
pub struct FlowNetwork<C> {
    arcs: Vec<Vec<Arc<C>>>,
    level: Vec<usize>,
    cursor: Vec<usize>,
}

impl<C: PrimInt + Signed> FlowNetwork<C> {
    pub fn new(len: usize) -> Self {
        FlowNetwork {
            arcs: vec![Vec::new(); len],
            level: vec![0; len],
            cursor: vec![0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Adds `from -> to` with `capacity`, and the zero-capacity reverse arc.
    pub fn add_arc(&mut self, from: usize, to: usize, capacity: C) {
        self.add_pair(from, to, capacity, C::zero());
    }

    /// Adds a pair of opposite arcs sharing one residual pair, with the
    /// given capacities in each direction.
    pub fn add_pair(&mut self, a: usize, b: usize, forward: C, backward: C) {
        debug_assert!(forward >= C::zero() && backward >= C::zero());
        let rev_a = self.arcs[b].len() + usize::from(a == b);
        let rev_b = self.arcs[a].len();
        self.arcs[a].push(Arc {
            to: b,
            rev: rev_a,
            residual: forward,
        });
        self.arcs[b].push(Arc {
            to: a,
            rev: rev_b,
            residual: backward,
        });
    }

    /// Pushes a maximum flow from `source` to `sink` and returns its value.
    /// Calling it again continues from the current residual state.
    pub fn max_flow(&mut self, source: usize, sink: usize) -> C {
        let mut total = C::zero();
        if source == sink {
            return total;
        }
        while self.build_levels(source, sink) {
            self.cursor.iter_mut().for_each(|c| *c = 0);
            loop {
                let pushed = self.augment(source, sink, C::max_value());
                if pushed.is_zero() {
                    break;
                }
                total = total + pushed;
            }
        }
        total
    }

    /// Nodes reachable from `source` in the residual graph: the source side
    /// of a minimum cut once [`FlowNetwork::max_flow`] has run.
    pub fn source_side(&self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([source]);
        seen[source] = true;
        while let Some(u) = queue.pop_front() {
            for arc in &self.arcs[u] {
                if arc.residual > C::zero() && !seen[arc.to] {
                    seen[arc.to] = true;
                    queue.push_back(arc.to);
                }
            }
        }
        seen
    }

    fn build_levels(&mut self, source: usize, sink: usize) -> bool {
        const UNSEEN: usize = usize::MAX;
        self.level.iter_mut().for_each(|l| *l = UNSEEN);
        self.level[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for arc in &self.arcs[u] {
                if arc.residual > C::zero() && self.level[arc.to] == UNSEEN {
                    self.level[arc.to] = self.level[u] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        self.level[sink] != UNSEEN
    }

    /// One augmenting path in the level graph, found by iterative DFS with
    /// per-node arc cursors so dead ends are never rescanned within a phase.
    fn augment(&mut self, source: usize, sink: usize, limit: C) -> C {
        let mut path: Vec<(usize, usize)> = Vec::new();
        let mut u = source;
        loop {
            if u == sink {
                let bottleneck = path
                    .iter()
                    .map(|&(node, idx)| self.arcs[node][idx].residual)
                    .fold(limit, |acc, r| acc.min(r));
                for &(node, idx) in &path {
                    let (to, rev) = {
                        let arc = &mut self.arcs[node][idx];
                        arc.residual = arc.residual - bottleneck;
                        (arc.to, arc.rev)
                    };
                    let back = &mut self.arcs[to][rev];
                    back.residual = back.residual + bottleneck;
                }
                return bottleneck;
            }
            let mut advanced = false;
            while self.cursor[u] < self.arcs[u].len() {
                let arc = &self.arcs[u][self.cursor[u]];
                if arc.residual > C::zero() && self.level[arc.to] == self.level[u] + 1 {
                    path.push((u, self.cursor[u]));
                    u = arc.to;
                    advanced = true;
                    break;
                }
                self.cursor[u] += 1;
            }
            if !advanced {
                // dead end: retreat and skip the arc that led here
                self.level[u] = usize::MAX - 1;
                match path.pop() {
                    Some((prev, _)) => {
                        self.cursor[prev] += 1;
                        u = prev;
                    }
                    None => return C::zero(),
                }
            }
        }
    }
}
