//! Combinatorial punctured surfaces.
//!
//! A triangulation is stored as a list of triangles, each carrying the labels of
//! its three sides in counterclockwise order. Every edge label occurs on exactly
//! two sides and those two sides are glued (with opposite directions), so the
//! label table alone determines the oriented surface. Triangles may be
//! self-folded (an edge occurring twice in one triangle).
//!
//! Decorated triangulations additionally number their triangles and mark one
//! corner of each. They are stored in *Kashaev order*: side 0 is the side
//! opposite the marked corner, followed by sides 1 and 2 counterclockwise.

mod catalog;
mod format;
mod moves;
mod pentagon;
mod search;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use catalog::{builtin, builtin_surfaces, flip_case_instances, BuiltinSurface, FlipCaseInstance};
pub use format::{parse_triangulation, write_decorated, write_ideal, AnyTriangulation, GluingSpec, SideRecord};
pub use moves::{classify_flip, FlipCase, FlipRoles, Move};
pub use pentagon::{flip_pentagon_paths, flip_pentagons, kashaev_pentagon_paths, kashaev_pentagons, omega};
pub use search::{find_move_path, find_move_paths, FlipGraph, DEFAULT_SEARCH_DEPTH};

/// Errors raised while building or transforming triangulations.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("m = 2g - 2 + p must be positive (g = {genus}, p = {punctures})")]
    NonPositiveComplexity { genus: i64, punctures: i64 },
    #[error("expected an even, positive number of triangles, found {0}")]
    TriangleCount(usize),
    #[error("triangle {triangle} side {side} is glued to itself")]
    SideGluedToItself { triangle: usize, side: usize },
    #[error("gluing is not an involution at triangle {triangle} side {side}")]
    NonInvolutiveGluing { triangle: usize, side: usize },
    #[error("glued sides disagree on edge label at triangle {triangle} side {side}")]
    LabelMismatch { triangle: usize, side: usize },
    #[error("expected {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("edge label {label} occurs {count} times (must occur exactly twice)")]
    EdgeMultiplicity { label: usize, count: usize },
    #[error("the glued surface is disconnected")]
    Disconnected,
    #[error("declared (g, p) = ({declared_genus}, {declared_punctures}) but gluing gives ({genus}, {punctures})")]
    TopologyMismatch { declared_genus: u32, declared_punctures: u32, genus: u32, punctures: u32 },
    #[error("marks must be given for every triangle or for none")]
    PartialMarks,
    #[error("edge {0} does not exist")]
    NoSuchEdge(usize),
    #[error("triangle {0} does not exist")]
    NoSuchTriangle(usize),
    #[error("edge {0} is self-folded and cannot be flipped")]
    SelfFoldedEdge(usize),
    #[error("triangles {0} and {1} do not share an edge opposite both marked corners")]
    MarksNotOpposite(usize, usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("move {0} does not apply to this kind of triangulation")]
    UnsupportedMove(String),
    #[error("the triangulations live on different surfaces")]
    DifferentSurfaces,
    #[error("no move path found within depth {0}")]
    SearchBoundExceeded(usize),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// One side of one triangle. `side` is 0, 1 or 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SideRef {
    pub triangle: usize,
    pub side: usize,
}

impl SideRef {
    pub fn new(triangle: usize, side: usize) -> Self {
        Self { triangle, side }
    }
}

/// A bijection of `{0, .., n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, SurfaceError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(SurfaceError::InvalidPermutation(format!("{images:?}")));
            }
            seen[i] = true;
        }
        Ok(Self(images))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        Self(images)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Self(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Self {
        Self(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Topological type computed from a gluing table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Topology {
    pub genus: u32,
    pub punctures: u32,
}

impl Topology {
    /// `m = 2g - 2 + p`.
    pub fn complexity(&self) -> usize {
        (2 * self.genus as i64 - 2 + self.punctures as i64) as usize
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut cur = x;
        while self.0[cur] != root {
            let next = self.0[cur];
            self.0[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }

    fn classes(&mut self) -> usize {
        let n = self.0.len();
        (0..n).filter(|&i| self.find(i) == i).count()
    }
}

/// Checks the label table and returns the two sides carrying each edge plus the
/// surface topology.
fn analyse(triangles: &[[usize; 3]]) -> Result<(Vec<[SideRef; 2]>, Topology), SurfaceError> {
    let n = triangles.len();
    if n == 0 || !n.is_multiple_of(2) {
        return Err(SurfaceError::TriangleCount(n));
    }
    let m = n / 2;
    let edges = 3 * m;
    let mut occ: Vec<Vec<SideRef>> = vec![Vec::new(); edges];
    for (t, tri) in triangles.iter().enumerate() {
        for (s, &e) in tri.iter().enumerate() {
            if e >= edges {
                return Err(SurfaceError::EdgeCount { expected: edges, found: e + 1 });
            }
            occ[e].push(SideRef::new(t, s));
        }
    }
    let mut sides_of_edge = Vec::with_capacity(edges);
    for (label, o) in occ.into_iter().enumerate() {
        if o.len() != 2 {
            return Err(SurfaceError::EdgeMultiplicity { label: label + 1, count: o.len() });
        }
        sides_of_edge.push([o[0], o[1]]);
    }

    // Vertex v of a triangle is where side v starts; side s runs v_s -> v_{s+1}.
    let slot = |t: usize, v: usize| 3 * t + (v % 3);
    let mut vertices = UnionFind::new(3 * n);
    let mut components = UnionFind::new(n);
    for [a, b] in &sides_of_edge {
        vertices.union(slot(a.triangle, a.side), slot(b.triangle, b.side + 1));
        vertices.union(slot(a.triangle, a.side + 1), slot(b.triangle, b.side));
        components.union(a.triangle, b.triangle);
    }
    if components.classes() != 1 {
        return Err(SurfaceError::Disconnected);
    }
    let punctures = vertices.classes() as i64;
    let twice_genus = 2 - punctures + m as i64;
    debug_assert!(twice_genus >= 0 && twice_genus % 2 == 0);
    Ok((sides_of_edge, Topology { genus: (twice_genus / 2) as u32, punctures: punctures as u32 }))
}

fn rotate(tri: [usize; 3], by: usize) -> [usize; 3] {
    [tri[by % 3], tri[(by + 1) % 3], tri[(by + 2) % 3]]
}

fn min_rotation(tri: [usize; 3]) -> [usize; 3] {
    (0..3).map(|r| rotate(tri, r)).min().unwrap()
}

/// An ideal triangulation with labeled edges `0..3m`.
///
/// Triangles are unlabeled; equality and hashing ignore the order in which
/// triangles are stored and the side at which each triangle's listing starts.
#[derive(Clone, Debug)]
pub struct IdealTriangulation {
    triangles: Vec<[usize; 3]>,
    sides_of_edge: Vec<[SideRef; 2]>,
    topology: Topology,
}

impl IdealTriangulation {
    /// Builds a triangulation from counterclockwise edge-label triples.
    pub fn from_triples(triangles: Vec<[usize; 3]>) -> Result<Self, SurfaceError> {
        let (sides_of_edge, topology) = analyse(&triangles)?;
        Ok(Self { triangles, sides_of_edge, topology })
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn genus(&self) -> u32 {
        self.topology.genus
    }

    pub fn punctures(&self) -> u32 {
        self.topology.punctures
    }

    /// `m = 2g - 2 + p`; there are `2m` triangles and `3m` edges.
    pub fn complexity(&self) -> usize {
        self.triangles.len() / 2
    }

    pub fn num_edges(&self) -> usize {
        3 * self.complexity()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    /// The two sides carrying `edge`, in storage order.
    pub fn sides_of_edge(&self, edge: usize) -> [SideRef; 2] {
        self.sides_of_edge[edge]
    }

    pub fn edge_at(&self, side: SideRef) -> usize {
        self.triangles[side.triangle][side.side]
    }

    pub fn is_self_folded(&self, edge: usize) -> bool {
        let [a, b] = self.sides_of_edge[edge];
        a.triangle == b.triangle
    }

    /// Whether two edges bound a common triangle.
    pub fn share_triangle(&self, e: usize, f: usize) -> bool {
        self.triangles.iter().any(|t| t.contains(&e) && t.contains(&f))
    }

    /// Lexicographically minimal encoding: each triple rotated to its least
    /// rotation, then the triples sorted.
    pub fn canonical_key(&self) -> Vec<[usize; 3]> {
        let mut key: Vec<[usize; 3]> = self.triangles.iter().map(|&t| min_rotation(t)).collect();
        key.sort_unstable();
        key
    }

    /// `a_ij`: the number of corners with edge `i` on the left and edge `j` on
    /// the right, seen from inside the triangle looking into the corner.
    ///
    /// The corner between sides `s` and `s + 1` has side `s + 1` on its left.
    pub fn corner_counts(&self) -> Vec<Vec<i64>> {
        let n = self.num_edges();
        let mut a = vec![vec![0i64; n]; n];
        for tri in &self.triangles {
            for s in 0..3 {
                a[tri[(s + 1) % 3]][tri[s]] += 1;
            }
        }
        a
    }

    /// `σ_ij = a_ij - a_ji`.
    pub fn skew_form(&self) -> SkewForm {
        let a = self.corner_counts();
        let n = a.len();
        let entries = (0..n).map(|i| (0..n).map(|j| a[i][j] - a[j][i]).collect()).collect();
        SkewForm { entries }
    }

    /// Edges sharing a triangle with `edge`.
    pub fn neighbours_of_edge(&self, edge: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for tri in self.triangles.iter().filter(|t| t.contains(&edge)) {
            out.extend(tri.iter().copied().filter(|&e| e != edge));
        }
        out
    }
}

impl PartialEq for IdealTriangulation {
    fn eq(&self, other: &Self) -> bool {
        self.canonical_key() == other.canonical_key()
    }
}

impl Eq for IdealTriangulation {}

/// A decorated ideal triangulation: numbered triangles with a marked corner.
///
/// Each triangle is stored in Kashaev order (0-side opposite the mark).
/// Edge labels ride along so that the underlying ideal triangulation has a
/// well-defined labeling; moves transport them (an exchange keeps the label of
/// the common edge on the new diagonal).
#[derive(Clone, Debug)]
pub struct DecoratedTriangulation {
    sides: Vec<[usize; 3]>,
    /// Position of the 0-side in the geometric listing the triangulation was
    /// read from. Presentation only.
    listing_offset: Vec<u8>,
    sides_of_edge: Vec<[SideRef; 2]>,
    topology: Topology,
}

impl DecoratedTriangulation {
    /// Builds from Kashaev-ordered triples (side 0 opposite the mark).
    pub fn from_kashaev_triples(sides: Vec<[usize; 3]>) -> Result<Self, SurfaceError> {
        let offsets = vec![0; sides.len()];
        Self::with_offsets(sides, offsets)
    }

    /// Builds from counterclockwise triples and, for each triangle, the
    /// listing position of the side opposite its marked corner.
    pub fn from_marked_triples(geometric: Vec<[usize; 3]>, marks: Vec<u8>) -> Result<Self, SurfaceError> {
        if geometric.len() != marks.len() {
            return Err(SurfaceError::PartialMarks);
        }
        let sides = geometric.iter().zip(&marks).map(|(&t, &mk)| rotate(t, mk as usize)).collect();
        Self::with_offsets(sides, marks)
    }

    fn with_offsets(sides: Vec<[usize; 3]>, listing_offset: Vec<u8>) -> Result<Self, SurfaceError> {
        let (sides_of_edge, topology) = analyse(&sides)?;
        Ok(Self { sides, listing_offset, sides_of_edge, topology })
    }

    pub fn kashaev_sides(&self, triangle: usize) -> [usize; 3] {
        self.sides[triangle]
    }

    pub fn all_kashaev_sides(&self) -> &[[usize; 3]] {
        &self.sides
    }

    /// The triangles as listed (counterclockwise, starting where the source
    /// listing started) together with the listing position of each 0-side.
    pub fn marked_listing(&self) -> Vec<([usize; 3], u8)> {
        self.sides.iter().zip(&self.listing_offset).map(|(&k, &off)| (rotate(k, (3 - off as usize) % 3), off)).collect()
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn complexity(&self) -> usize {
        self.sides.len() / 2
    }

    pub fn num_triangles(&self) -> usize {
        self.sides.len()
    }

    pub fn num_edges(&self) -> usize {
        3 * self.complexity()
    }

    /// The two (triangle, Kashaev side) pairs carrying `edge`.
    pub fn sides_of_edge(&self, edge: usize) -> [SideRef; 2] {
        self.sides_of_edge[edge]
    }

    pub fn underlying(&self) -> IdealTriangulation {
        IdealTriangulation {
            triangles: self.sides.clone(),
            sides_of_edge: self.sides_of_edge.clone(),
            topology: self.topology,
        }
    }

    /// Whether the exchange `φ_ij` applies: the 0-sides of `i` and `j` are the
    /// same edge.
    pub fn exchange_applies(&self, i: usize, j: usize) -> bool {
        i != j && i < self.sides.len() && j < self.sides.len() && self.sides[i][0] == self.sides[j][0]
    }

    /// Kashaev-ordered triples with edge labels renamed in order of first
    /// appearance; equal exactly when the decorations agree up to edge labels.
    pub fn decoration_key(&self) -> Vec<[usize; 3]> {
        let mut rename = vec![usize::MAX; self.num_edges()];
        let mut next = 0;
        self.sides
            .iter()
            .map(|tri| {
                let mut out = [0; 3];
                for (s, &e) in tri.iter().enumerate() {
                    if rename[e] == usize::MAX {
                        rename[e] = next;
                        next += 1;
                    }
                    out[s] = rename[e];
                }
                out
            })
            .collect()
    }

    pub fn same_decoration(&self, other: &Self) -> bool {
        self.decoration_key() == other.decoration_key()
    }
}

impl PartialEq for DecoratedTriangulation {
    fn eq(&self, other: &Self) -> bool {
        self.sides == other.sides
    }
}

impl Eq for DecoratedTriangulation {}

/// An antisymmetric integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewForm {
    entries: Vec<Vec<i64>>,
}

impl SkewForm {
    pub fn from_entries(entries: Vec<Vec<i64>>) -> Option<Self> {
        let n = entries.len();
        let ok =
            entries.iter().all(|r| r.len() == n) && (0..n).all(|i| (0..n).all(|j| entries[i][j] == -entries[j][i]));
        ok.then_some(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn max_abs(&self) -> i64 {
        self.entries.iter().flatten().map(|v| v.abs()).max().unwrap_or(0)
    }

    /// The form of the side elements of one triangle:
    /// `σ_10 = σ_02 = σ_21 = 1`.
    pub fn side_form() -> Self {
        let mut entries = vec![vec![0; 3]; 3];
        for s in 0..3 {
            entries[(s + 1) % 3][s] = 1;
            entries[s][(s + 1) % 3] = -1;
        }
        Self { entries }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus() -> IdealTriangulation {
        IdealTriangulation::from_triples(vec![[0, 1, 2], [0, 1, 2]]).unwrap()
    }

    #[test]
    fn once_punctured_torus_topology() {
        let t = torus();
        assert_eq!(t.topology(), Topology { genus: 1, punctures: 1 });
        assert_eq!(t.complexity(), 1);
    }

    #[test]
    fn thrice_punctured_sphere_topology() {
        let t = IdealTriangulation::from_triples(vec![[0, 1, 2], [0, 2, 1]]).unwrap();
        assert_eq!(t.topology(), Topology { genus: 0, punctures: 3 });
    }

    #[test]
    fn corner_counts_total_six_m() {
        let t = torus();
        let total: i64 = t.corner_counts().iter().flatten().sum();
        assert_eq!(total, 6);
    }

    #[test]
    fn torus_corner_counts_by_enumeration() {
        // Each triangle (1,2,3) has corners (left,right) = (2,1), (3,2), (1,3).
        let a = torus().corner_counts();
        let expected = vec![vec![0, 0, 2], vec![2, 0, 0], vec![0, 2, 0]];
        assert_eq!(a, expected);
    }

    #[test]
    fn torus_skew_form_entries_have_modulus_two() {
        let s = torus().skew_form();
        for i in 0..3 {
            assert_eq!(s.get(i, i), 0);
            for j in 0..3 {
                if i != j {
                    assert_eq!(s.get(i, j).abs(), 2);
                }
            }
        }
    }

    #[test]
    fn wrong_multiplicity_is_rejected() {
        let err = IdealTriangulation::from_triples(vec![[0, 0, 0], [1, 2, 2]]).unwrap_err();
        assert!(matches!(err, SurfaceError::EdgeMultiplicity { .. }));
    }

    #[test]
    fn odd_triangle_count_is_rejected() {
        assert_eq!(IdealTriangulation::from_triples(vec![[0, 0, 1]]).unwrap_err(), SurfaceError::TriangleCount(1));
    }

    #[test]
    fn disconnected_gluing_is_rejected() {
        // Two separate thrice-punctured spheres.
        let err = IdealTriangulation::from_triples(vec![[0, 1, 2], [0, 2, 1], [3, 4, 5], [3, 5, 4]]).unwrap_err();
        assert_eq!(err, SurfaceError::Disconnected);
    }

    #[test]
    fn equality_ignores_triangle_order_and_rotation() {
        let a = IdealTriangulation::from_triples(vec![[0, 1, 2], [0, 2, 1]]).unwrap();
        let b = IdealTriangulation::from_triples(vec![[1, 0, 2], [2, 0, 1]]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn permutation_compose_applies_right_first() {
        let a = Permutation::new(vec![1, 2, 0]).unwrap();
        let b = Permutation::transposition(3, 0, 1);
        let ab = a.compose(&b);
        assert_eq!(ab.apply(0), a.apply(b.apply(0)));
        assert!(a.compose(&a.inverse()).is_identity());
        assert!(Permutation::new(vec![0, 0]).is_err());
    }

    #[test]
    fn decoration_key_ignores_edge_labels() {
        let a = DecoratedTriangulation::from_kashaev_triples(vec![[0, 1, 2], [0, 1, 2]]).unwrap();
        let b = DecoratedTriangulation::from_kashaev_triples(vec![[2, 0, 1], [2, 0, 1]]).unwrap();
        assert_ne!(a, b);
        assert!(a.same_decoration(&b));
    }

    #[test]
    fn marked_listing_round_trips() {
        let d = DecoratedTriangulation::from_marked_triples(vec![[0, 1, 2], [2, 0, 1]], vec![1, 2]).unwrap();
        assert_eq!(d.kashaev_sides(0), [1, 2, 0]);
        assert_eq!(d.kashaev_sides(1), [1, 2, 0]);
        assert_eq!(d.marked_listing(), vec![([0, 1, 2], 1), ([2, 0, 1], 2)]);
    }
}
