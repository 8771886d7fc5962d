//! Colour assignments and the properness predicate.

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;

/// Colours are `1..=k`.
pub type Colour = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColouringError {
    #[error("colour {colour} of vertex {vertex} is outside 1..={k}")]
    OutOfPalette { vertex: usize, colour: Colour, k: usize },
    #[error("palette size must be at least 1")]
    EmptyPalette,
    #[error("colouring has {got} entries but the graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
}

/// A total assignment of colours in `1..=k`. Properness is not part of the
/// type; see [`Colouring::is_proper`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Colouring {
    colours: Vec<Colour>,
    k: usize,
}

impl Colouring {
    pub fn new(colours: Vec<Colour>, k: usize) -> Result<Self, ColouringError> {
        if k == 0 {
            return Err(ColouringError::EmptyPalette);
        }
        if let Some((vertex, &colour)) = colours.iter().enumerate().find(|(_, &c)| c == 0 || c > k) {
            return Err(ColouringError::OutOfPalette { vertex, colour, k });
        }
        Ok(Colouring { colours, k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.colours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colours.is_empty()
    }

    pub fn colour(&self, v: usize) -> Colour {
        self.colours[v]
    }

    pub fn as_slice(&self) -> &[Colour] {
        &self.colours
    }

    /// Restriction to the listed vertices, in the given order.
    pub fn restrict(&self, vertices: &[usize]) -> Colouring {
        Colouring {
            colours: vertices.iter().map(|&v| self.colours[v]).collect(),
            k: self.k,
        }
    }

    /// Number of vertices on which the two colourings differ.
    pub fn hamming(&self, other: &Colouring) -> usize {
        self.colours.iter().zip(&other.colours).filter(|(a, b)| a != b).count()
    }

    /// True iff no edge of `g` is monochromatic.
    pub fn is_proper(&self, g: &Graph) -> Result<bool, ColouringError> {
        self.check_len(g)?;
        Ok(g.edges().all(|(u, v)| self.colours[u] != self.colours[v]))
    }

    /// First monochromatic edge, if any.
    pub fn conflict(&self, g: &Graph) -> Option<(usize, usize)> {
        g.edges().find(|&(u, v)| self.colours[u] == self.colours[v])
    }

    pub(crate) fn check_len(&self, g: &Graph) -> Result<(), ColouringError> {
        if self.colours.len() != g.n() {
            return Err(ColouringError::LengthMismatch {
                expected: g.n(),
                got: self.colours.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn set(&mut self, v: usize, c: Colour) {
        debug_assert!((1..=self.k).contains(&c));
        self.colours[v] = c;
    }
}

/// Free-function form of [`Colouring::is_proper`].
pub fn is_proper(g: &Graph, f: &Colouring) -> Result<bool, ColouringError> {
    f.is_proper(g)
}

/// A seeded random proper `k`-colouring, built greedily along the reverse
/// of a smallest-last order with a uniform pick among the free colours.
/// Returns `None` when `k` does not exceed the degeneracy of `g`.
pub fn random_proper_colouring(g: &Graph, k: usize, seed: u64) -> Option<Colouring> {
    let (order, degeneracy) = g.degeneracy_order();
    if k <= degeneracy {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut colours = vec![0; g.n()];
    let mut used = vec![false; k + 1];
    let mut free = Vec::with_capacity(k);
    for &v in order.iter().rev() {
        for &w in g.neighbours(v) {
            used[colours[w]] = true;
        }
        free.clear();
        free.extend((1..=k).filter(|&c| !used[c]));
        for &w in g.neighbours(v) {
            used[colours[w]] = false;
        }
        colours[v] = *free.choose(&mut rng)?;
    }
    Some(Colouring { colours, k })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn properness_examples() {
        let triangle = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(is_proper(&triangle, &Colouring::new(vec![1, 2, 3], 3).unwrap()).unwrap());

        let edge = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert!(!is_proper(&edge, &Colouring::new(vec![1, 1], 2).unwrap()).unwrap());

        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert!(is_proper(&p3, &Colouring::new(vec![1, 2, 1], 2).unwrap()).unwrap());
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let edge = Graph::from_edges(2, [(0, 1)]).unwrap();
        let f = Colouring::new(vec![1, 2, 1], 2).unwrap();
        assert_eq!(
            f.is_proper(&edge),
            Err(ColouringError::LengthMismatch { expected: 2, got: 3 })
        );
    }

    #[test]
    fn palette_is_enforced() {
        assert!(matches!(
            Colouring::new(vec![1, 0], 2),
            Err(ColouringError::OutOfPalette { vertex: 1, .. })
        ));
        assert!(matches!(
            Colouring::new(vec![3], 2),
            Err(ColouringError::OutOfPalette { colour: 3, .. })
        ));
        assert_eq!(Colouring::new(vec![], 0), Err(ColouringError::EmptyPalette));
    }

    #[test]
    fn random_colouring_is_proper_and_reproducible() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]).unwrap();
        let a = random_proper_colouring(&g, 3, 11).unwrap();
        assert!(a.is_proper(&g).unwrap());
        assert_eq!(a, random_proper_colouring(&g, 3, 11).unwrap());
        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(random_proper_colouring(&k4, 3, 0).is_none());
    }
}
