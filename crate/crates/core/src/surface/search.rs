use std::collections::HashMap;
use std::hash::Hash;

use super::{DecoratedTriangulation, IdealTriangulation, Move, Permutation, SurfaceError};

/// Default breadth-first depth for [`find_move_path`].
pub const DEFAULT_SEARCH_DEPTH: usize = 12;

/// A triangulation type whose moves can be searched.
pub trait FlipGraph: Sized + Clone {
    type Key: Eq + Hash + Clone;

    /// Identifies states for the search. Two states with equal keys are
    /// treated as the same vertex of the move graph.
    fn search_key(&self) -> Self::Key;

    /// Every move the search may try from this state, in a fixed order.
    fn candidate_moves(&self) -> Vec<Move>;

    fn step(&self, mv: &Move) -> Result<Self, SurfaceError>;

    fn same_surface(&self, other: &Self) -> bool;
}

impl FlipGraph for IdealTriangulation {
    type Key = Vec<[usize; 3]>;

    fn search_key(&self) -> Self::Key {
        self.canonical_key()
    }

    fn candidate_moves(&self) -> Vec<Move> {
        let n = self.num_edges();
        let mut out: Vec<Move> = (0..n).filter(|&e| !self.is_self_folded(e)).map(Move::DiagonalExchange).collect();
        for a in 0..n {
            for b in a + 1..n {
                out.push(Move::Reindex(Permutation::transposition(n, a, b)));
            }
        }
        out
    }

    fn step(&self, mv: &Move) -> Result<Self, SurfaceError> {
        self.apply(mv)
    }

    fn same_surface(&self, other: &Self) -> bool {
        self.topology() == other.topology()
    }
}

impl FlipGraph for DecoratedTriangulation {
    type Key = Vec<[usize; 3]>;

    fn search_key(&self) -> Self::Key {
        self.decoration_key()
    }

    fn candidate_moves(&self) -> Vec<Move> {
        let n = self.num_triangles();
        let mut out: Vec<Move> = (0..n).map(Move::MarkRotation).collect();
        for i in 0..n {
            for j in i + 1..n {
                if self.exchange_applies(i, j) {
                    out.push(Move::KashaevExchange(i, j));
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                out.push(Move::Reindex(Permutation::transposition(n, a, b)));
            }
        }
        out
    }

    fn step(&self, mv: &Move) -> Result<Self, SurfaceError> {
        self.apply(mv)
    }

    fn same_surface(&self, other: &Self) -> bool {
        self.topology() == other.topology()
    }
}

/// Each discovered key with its BFS depth and every (parent, move) edge
/// reaching it from the previous layer.
type Parents<K> = HashMap<K, (usize, Vec<(K, Move)>)>;

/// A shortest move sequence from `from` to a state with the same search key
/// as `to`.
pub fn find_move_path<T: FlipGraph>(from: &T, to: &T, max_depth: usize) -> Result<Vec<Move>, SurfaceError> {
    let mut paths = find_move_paths(from, to, max_depth, 1)?;
    Ok(paths.pop().expect("at least one path"))
}

/// Up to `limit` distinct shortest move sequences from `from` to `to`.
pub fn find_move_paths<T: FlipGraph>(
    from: &T,
    to: &T,
    max_depth: usize,
    limit: usize,
) -> Result<Vec<Vec<Move>>, SurfaceError> {
    if !from.same_surface(to) {
        return Err(SurfaceError::DifferentSurfaces);
    }
    let target = to.search_key();
    let start = from.search_key();
    if start == target {
        return Ok(vec![Vec::new()]);
    }

    // For each discovered key: its BFS depth and every (parent, move) edge that
    // reaches it from the previous layer.
    let mut parents: Parents<T::Key> = HashMap::new();
    parents.insert(start.clone(), (0, Vec::new()));
    let mut layer = vec![from.clone()];

    for depth in 1..=max_depth {
        let mut next = Vec::new();
        for state in &layer {
            let key = state.search_key();
            for mv in state.candidate_moves() {
                let Ok(child) = state.step(&mv) else { continue };
                let ck = child.search_key();
                match parents.get_mut(&ck) {
                    Some((d, edges)) if *d == depth => edges.push((key.clone(), mv)),
                    Some(_) => {}
                    None => {
                        parents.insert(ck, (depth, vec![(key.clone(), mv)]));
                        next.push(child);
                    }
                }
            }
        }
        if parents.contains_key(&target) {
            return Ok(unwind(&parents, &start, &target, limit));
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }
    Err(SurfaceError::SearchBoundExceeded(max_depth))
}

fn unwind<K: Eq + Hash + Clone>(parents: &Parents<K>, start: &K, target: &K, limit: usize) -> Vec<Vec<Move>> {
    let mut out = Vec::new();
    // Depth-first over parent edges, building paths back to front.
    let mut stack: Vec<(K, Vec<Move>)> = vec![(target.clone(), Vec::new())];
    while let Some((key, suffix)) = stack.pop() {
        if out.len() >= limit {
            break;
        }
        if &key == start {
            let mut path = suffix;
            path.reverse();
            out.push(path);
            continue;
        }
        let (_, edges) = &parents[&key];
        for (parent, mv) in edges.iter().rev() {
            let mut s = suffix.clone();
            s.push(mv.clone());
            stack.push((parent.clone(), s));
        }
    }
    out
}
