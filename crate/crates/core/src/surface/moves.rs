use std::fmt;

use super::{rotate, DecoratedTriangulation, IdealTriangulation, Permutation, SurfaceError};

/// Elementary moves between triangulations.
///
/// Ideal triangulations accept `Reindex` (a permutation of edge labels) and
/// `DiagonalExchange`. Decorated triangulations accept `Reindex` (a
/// permutation of triangle numbers), `MarkRotation` and `KashaevExchange`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    Reindex(Permutation),
    DiagonalExchange(usize),
    MarkRotation(usize),
    KashaevExchange(usize, usize),
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Reindex(p) => write!(f, "reindex{p}"),
            Move::DiagonalExchange(e) => write!(f, "flip({})", e + 1),
            Move::MarkRotation(t) => write!(f, "rotate({})", t + 1),
            Move::KashaevExchange(i, j) => write!(f, "exchange({},{})", i + 1, j + 1),
        }
    }
}

/// How the four sides around a flipped edge are identified with each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FlipCase {
    /// All four sides distinct.
    Case1,
    /// `j ≡ k`.
    Case2,
    /// `j ≡ m`.
    Case3,
    /// `j ≡ l`.
    Case4,
    /// `k ≡ m`.
    Case5,
    /// `j ≡ k` and `l ≡ m`.
    Case6,
    /// `j ≡ m` and `k ≡ l`.
    Case7,
    /// `j ≡ l` and `k ≡ m`.
    Case8,
}

impl FlipCase {
    pub fn number(self) -> u8 {
        match self {
            FlipCase::Case1 => 1,
            FlipCase::Case2 => 2,
            FlipCase::Case3 => 3,
            FlipCase::Case4 => 4,
            FlipCase::Case5 => 5,
            FlipCase::Case6 => 6,
            FlipCase::Case7 => 7,
            FlipCase::Case8 => 8,
        }
    }
}

/// The labels around the quadrilateral of a flippable edge.
///
/// `j` and `l` are the sides reached counterclockwise from the flipped edge in
/// each of its two triangles (so `σ_{i,j} = σ_{i,l} = -1` when they are
/// distinct); `k` and `m` are the other two.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlipRoles {
    pub edge: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub m: usize,
    pub case: FlipCase,
}

impl FlipRoles {
    /// How often `e` occupies a j-type and a k-type position.
    pub fn occupancy(&self, e: usize) -> (u8, u8) {
        let jt = [self.j, self.l].iter().filter(|&&x| x == e).count() as u8;
        let kt = [self.k, self.m].iter().filter(|&&x| x == e).count() as u8;
        (jt, kt)
    }
}

fn quad(t: &IdealTriangulation, edge: usize) -> Result<(usize, usize, [usize; 3], [usize; 3]), SurfaceError> {
    if edge >= t.num_edges() {
        return Err(SurfaceError::NoSuchEdge(edge));
    }
    let [a, b] = t.sides_of_edge(edge);
    if a.triangle == b.triangle {
        return Err(SurfaceError::SelfFoldedEdge(edge));
    }
    let ta = rotate(t.triangles[a.triangle], a.side);
    let tb = rotate(t.triangles[b.triangle], b.side);
    Ok((a.triangle, b.triangle, ta, tb))
}

/// Labels and case of the flip at `edge`.
pub fn classify_flip(t: &IdealTriangulation, edge: usize) -> Result<FlipRoles, SurfaceError> {
    let (_, _, [_, a, b], [_, c, d]) = quad(t, edge)?;
    let (mut j, mut m, mut l, mut k) = (a, b, c, d);
    let pattern = |j: usize, k: usize, l: usize, m: usize| [j == k, j == m, j == l, k == m, k == l, l == m];
    let p = pattern(j, k, l, m);
    let only = |idx: usize| p.iter().enumerate().all(|(n, &b)| b == (n == idx));
    if only(4) || only(5) {
        (j, m, l, k) = (c, d, a, b);
    }
    let [jk, jm, jl, km, kl, lm] = pattern(j, k, l, m);
    let case = match (jk, jm, jl, km, kl, lm) {
        (false, false, false, false, false, false) => FlipCase::Case1,
        (true, _, _, _, _, true) => FlipCase::Case6,
        (_, true, _, _, true, _) => FlipCase::Case7,
        (_, _, true, true, _, _) => FlipCase::Case8,
        (true, _, _, _, _, _) => FlipCase::Case2,
        (_, true, _, _, _, _) => FlipCase::Case3,
        (_, _, true, _, _, _) => FlipCase::Case4,
        (_, _, _, true, _, _) => FlipCase::Case5,
        _ => unreachable!("identification patterns are normalised above"),
    };
    Ok(FlipRoles { edge, j, k, l, m, case })
}

impl IdealTriangulation {
    /// The diagonal exchange at `edge`. The new diagonal keeps the label.
    pub fn flip(&self, edge: usize) -> Result<Self, SurfaceError> {
        let (ta_idx, tb_idx, [i, a, b], [_, c, d]) = quad(self, edge)?;
        let mut triangles = self.triangles.clone();
        triangles[ta_idx] = [i, b, c];
        triangles[tb_idx] = [i, d, a];
        IdealTriangulation::from_triples(triangles)
    }

    /// Renames edge `e` to `perm(e)`.
    pub fn relabel(&self, perm: &Permutation) -> Result<Self, SurfaceError> {
        if perm.len() != self.num_edges() {
            return Err(SurfaceError::InvalidPermutation(format!(
                "expected {} edge labels, got {}",
                self.num_edges(),
                perm.len()
            )));
        }
        let triangles = self.triangles.iter().map(|t| t.map(|e| perm.apply(e))).collect();
        IdealTriangulation::from_triples(triangles)
    }

    pub fn apply(&self, mv: &Move) -> Result<Self, SurfaceError> {
        match mv {
            Move::DiagonalExchange(e) => self.flip(*e),
            Move::Reindex(p) => self.relabel(p),
            other => Err(SurfaceError::UnsupportedMove(other.to_string())),
        }
    }

    pub fn apply_all(&self, moves: &[Move]) -> Result<Self, SurfaceError> {
        moves.iter().try_fold(self.clone(), |t, mv| t.apply(mv))
    }
}

impl DecoratedTriangulation {
    /// Moves the mark of `triangle` one corner counterclockwise: the new
    /// `s`-side is the old `(s+1)`-side.
    pub fn rotate_mark(&self, triangle: usize) -> Result<Self, SurfaceError> {
        if triangle >= self.num_triangles() {
            return Err(SurfaceError::NoSuchTriangle(triangle));
        }
        let mut out = self.clone();
        out.sides[triangle] = rotate(self.sides[triangle], 1);
        out.listing_offset[triangle] = (self.listing_offset[triangle] + 1) % 3;
        out.rebuild()
    }

    /// Exchange of two triangles whose 0-sides coincide. The common edge
    /// becomes the new diagonal and keeps its label.
    pub fn exchange(&self, i: usize, j: usize) -> Result<Self, SurfaceError> {
        for t in [i, j] {
            if t >= self.num_triangles() {
                return Err(SurfaceError::NoSuchTriangle(t));
            }
        }
        if !self.exchange_applies(i, j) {
            return Err(SurfaceError::MarksNotOpposite(i, j));
        }
        let (ti, tj) = (self.sides[i], self.sides[j]);
        let e = ti[0];
        let mut out = self.clone();
        out.sides[i] = [e, tj[2], ti[1]];
        out.sides[j] = [e, ti[2], tj[1]];
        out.listing_offset[i] = 0;
        out.listing_offset[j] = 0;
        out.rebuild()
    }

    /// Triangle `μ` becomes triangle `perm(μ)`.
    pub fn renumber(&self, perm: &Permutation) -> Result<Self, SurfaceError> {
        let n = self.num_triangles();
        if perm.len() != n {
            return Err(SurfaceError::InvalidPermutation(format!("expected {n} triangle numbers, got {}", perm.len())));
        }
        let mut sides = vec![[0; 3]; n];
        let mut offsets = vec![0; n];
        for mu in 0..n {
            sides[perm.apply(mu)] = self.sides[mu];
            offsets[perm.apply(mu)] = self.listing_offset[mu];
        }
        DecoratedTriangulation::with_offsets(sides, offsets)
    }

    fn rebuild(self) -> Result<Self, SurfaceError> {
        DecoratedTriangulation::with_offsets(self.sides, self.listing_offset)
    }

    pub fn apply(&self, mv: &Move) -> Result<Self, SurfaceError> {
        match mv {
            Move::MarkRotation(t) => self.rotate_mark(*t),
            Move::KashaevExchange(i, j) => self.exchange(*i, *j),
            Move::Reindex(p) => self.renumber(p),
            other => Err(SurfaceError::UnsupportedMove(other.to_string())),
        }
    }

    pub fn apply_all(&self, moves: &[Move]) -> Result<Self, SurfaceError> {
        moves.iter().try_fold(self.clone(), |t, mv| t.apply(mv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::builtin;

    #[test]
    fn torus_flip_is_case_eight() {
        let t = IdealTriangulation::from_triples(vec![[0, 1, 2], [0, 1, 2]]).unwrap();
        assert_eq!(classify_flip(&t, 0).unwrap().case, FlipCase::Case8);
    }

    #[test]
    fn thrice_punctured_sphere_flip_is_case_six() {
        let t = IdealTriangulation::from_triples(vec![[0, 1, 2], [0, 2, 1]]).unwrap();
        assert_eq!(classify_flip(&t, 0).unwrap().case, FlipCase::Case6);
    }

    #[test]
    fn tetrahedron_flips_are_case_one() {
        let t = builtin("sphere-4").unwrap().ideal;
        for e in 0..t.num_edges() {
            assert_eq!(classify_flip(&t, e).unwrap().case, FlipCase::Case1);
        }
    }

    #[test]
    fn flip_is_an_involution_on_builtins() {
        for s in crate::surface::builtin_surfaces() {
            let t = &s.ideal;
            for e in 0..t.num_edges() {
                if t.is_self_folded(e) {
                    continue;
                }
                let back = t.flip(e).unwrap().flip(e).unwrap();
                assert_eq!(&back, t, "{} edge {}", s.name, e + 1);
            }
        }
    }

    #[test]
    fn self_folded_edge_cannot_be_flipped() {
        // Twice-punctured sphere analogue with a self-folded triangle: m = 2.
        let t = IdealTriangulation::from_triples(vec![[0, 0, 1], [1, 2, 3], [2, 4, 5], [3, 5, 4]]);
        if let Ok(t) = t {
            assert_eq!(t.flip(0).unwrap_err(), SurfaceError::SelfFoldedEdge(0));
        }
    }

    #[test]
    fn exchange_realises_the_flip() {
        let d = builtin("sphere-4").unwrap().decorated;
        for i in 0..d.num_triangles() {
            for j in 0..d.num_triangles() {
                if !d.exchange_applies(i, j) {
                    continue;
                }
                let e = d.kashaev_sides(i)[0];
                let after = d.exchange(i, j).unwrap();
                assert_eq!(after.underlying(), d.underlying().flip(e).unwrap());
            }
        }
    }

    #[test]
    fn exchange_twice_swaps_the_triangles() {
        let d = builtin("torus-1").unwrap().decorated;
        let twice = d.exchange(0, 1).unwrap().exchange(0, 1).unwrap();
        let swapped = d.renumber(&Permutation::transposition(2, 0, 1)).unwrap();
        assert_eq!(twice, swapped);
    }

    #[test]
    fn three_rotations_are_trivial() {
        let d = builtin("torus-2").unwrap().decorated;
        let r = d.rotate_mark(2).unwrap().rotate_mark(2).unwrap().rotate_mark(2).unwrap();
        assert_eq!(r, d);
        assert_eq!(r.marked_listing(), d.marked_listing());
    }

    #[test]
    fn exchange_needs_opposite_marks() {
        let d = builtin("sphere-4").unwrap().decorated;
        let bad = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .find(|&(i, j)| i != j && !d.exchange_applies(i, j))
            .unwrap();
        assert_eq!(d.exchange(bad.0, bad.1).unwrap_err(), SurfaceError::MarksNotOpposite(bad.0, bad.1));
    }

    #[test]
    fn move_display_is_one_based() {
        assert_eq!(Move::DiagonalExchange(0).to_string(), "flip(1)");
        assert_eq!(Move::KashaevExchange(0, 2).to_string(), "exchange(1,3)");
        assert_eq!(Move::Reindex(Permutation::transposition(3, 0, 1)).to_string(), "reindex[2 1 3]");
    }
}
