//! The linear maps between log coordinates and the exact sequence
//! `0 → H₁(S) → K_τ → T̃_λ → ℝ → 0`.

use std::sync::OnceLock;

use super::{ClassicalError, KashaevVector, ShearVector, SideValues};
use crate::linalg::IntMatrix;
use crate::surface::{builtin, DecoratedTriangulation, SideRef};

/// An integer matrix acting on log coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMapMatrix {
    pub name: &'static str,
    pub matrix: IntMatrix,
}

impl LinearMapMatrix {
    pub fn domain(&self) -> usize {
        self.matrix.cols()
    }

    pub fn codomain(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.domain(), "{}: dimension mismatch", self.name);
        (0..self.codomain()).map(|r| self.matrix.row(r).iter().zip(v).map(|(&a, &x)| a as f64 * x).sum()).collect()
    }
}

/// `(ln y, ln z) ↦ (ln h⁰, ln h¹, ln h²)` per triangle.
pub fn map_m(k: &KashaevVector) -> SideValues {
    SideValues::from_log(
        (0..k.num_triangles())
            .map(|mu| {
                let (ly, lz) = (k.log_y(mu), k.log_z(mu));
                [ly - lz, lz, -ly]
            })
            .collect(),
    )
}

/// `ln x_i = ln h^s_μ + ln h^t_ν` over the two sides carrying edge `i`.
pub fn map_f2(h: &SideValues, tau: &DecoratedTriangulation) -> ShearVector {
    ShearVector::from_log(
        (0..tau.num_edges()).map(|e| tau.sides_of_edge(e).iter().map(|s| h.get(s.triangle, s.side)).sum()).collect(),
    )
}

pub fn map_f1(x: &ShearVector) -> f64 {
    x.log().iter().sum()
}

/// `f₂ ∘ M`: the shear coordinates of the underlying triangulation.
pub fn shear_of_kashaev(k: &KashaevVector, tau: &DecoratedTriangulation) -> ShearVector {
    map_f2(&map_m(k), tau)
}

/// Dual edge `i` runs from the smaller of its two sides to the larger.
fn dual_ends(tau: &DecoratedTriangulation, edge: usize) -> (SideRef, SideRef) {
    let [a, b] = tau.sides_of_edge(edge);
    (a.min(b), a.max(b))
}

/// Side values of the dual chain `Σ c_i λ_i*`. Fails unless the chain is a
/// cycle.
pub fn map_f3(c: &[f64], tau: &DecoratedTriangulation) -> Result<SideValues, ClassicalError> {
    if c.len() != tau.num_edges() {
        return Err(ClassicalError::Length { expected: tau.num_edges(), got: c.len() });
    }
    let mut h = vec![[0.0; 3]; tau.num_triangles()];
    for (e, &ci) in c.iter().enumerate() {
        let (from, to) = dual_ends(tau, e);
        h[from.triangle][from.side] = -ci;
        h[to.triangle][to.side] = ci;
    }
    let scale = c.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    if let Some(mu) = h.iter().position(|t| (t[0] + t[1] + t[2]).abs() > 1e-12 * scale) {
        return Err(ClassicalError::NotACycle(mu));
    }
    Ok(SideValues::from_log(h))
}

pub fn matrix_m(triangles: usize) -> LinearMapMatrix {
    let mut m = IntMatrix::zeros(3 * triangles, 2 * triangles);
    for mu in 0..triangles {
        let (y, z) = (2 * mu, 2 * mu + 1);
        m[(3 * mu, y)] = 1;
        m[(3 * mu, z)] = -1;
        m[(3 * mu + 1, z)] = 1;
        m[(3 * mu + 2, y)] = -1;
    }
    LinearMapMatrix { name: "M", matrix: m }
}

/// `f₂` on side values (3m × 6m).
pub fn matrix_f2(tau: &DecoratedTriangulation) -> LinearMapMatrix {
    let mut m = IntMatrix::zeros(tau.num_edges(), 3 * tau.num_triangles());
    for e in 0..tau.num_edges() {
        for s in tau.sides_of_edge(e) {
            m[(e, 3 * s.triangle + s.side)] += 1;
        }
    }
    LinearMapMatrix { name: "f2", matrix: m }
}

pub fn matrix_f1(edges: usize) -> LinearMapMatrix {
    LinearMapMatrix { name: "f1", matrix: IntMatrix::from_rows(&[vec![1; edges]]) }
}

/// Integer coefficient vectors of a basis of dual-graph cycles.
///
/// The spanning tree grows from triangle 0 by always adding the
/// lowest-labeled edge that reaches a new triangle; each remaining edge closes
/// one fundamental cycle, traversed along that edge's orientation.
pub fn cycle_basis(tau: &DecoratedTriangulation) -> Vec<Vec<i64>> {
    let (n, edges) = (tau.num_triangles(), tau.num_edges());
    let mut in_tree = vec![false; n];
    in_tree[0] = true;
    // parent[x] = (parent triangle, edge)
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut tree_edge = vec![false; edges];
    loop {
        let next = (0..edges).find_map(|e| {
            let [a, b] = tau.sides_of_edge(e);
            match (in_tree[a.triangle], in_tree[b.triangle]) {
                (true, false) => Some((e, a.triangle, b.triangle)),
                (false, true) => Some((e, b.triangle, a.triangle)),
                _ => None,
            }
        });
        let Some((e, old, new)) = next else { break };
        in_tree[new] = true;
        parent[new] = Some((old, e));
        tree_edge[e] = true;
    }
    debug_assert!(in_tree.iter().all(|&t| t), "dual graph is connected");

    // Coefficients of the tree path from `x` up to the root.
    let to_root = |mut x: usize, sign: i64, c: &mut Vec<i64>| {
        while let Some((p, e)) = parent[x] {
            let (from, _) = dual_ends(tau, e);
            c[e] += if from.triangle == x { sign } else { -sign };
            x = p;
        }
    };
    (0..edges)
        .filter(|&e| !tree_edge[e])
        .map(|e| {
            let mut c = vec![0; edges];
            let (from, to) = dual_ends(tau, e);
            c[e] = 1;
            to_root(to.triangle, 1, &mut c);
            to_root(from.triangle, -1, &mut c);
            c
        })
        .collect()
}

/// `f₃` on the cycle basis, written in `(ln y, ln z)` coordinates (4m × (m+1)).
pub fn matrix_f3(tau: &DecoratedTriangulation) -> LinearMapMatrix {
    let basis = cycle_basis(tau);
    let mut m = IntMatrix::zeros(2 * tau.num_triangles(), basis.len());
    for (col, c) in basis.iter().enumerate() {
        let cf: Vec<f64> = c.iter().map(|&v| v as f64).collect();
        let h = map_f3(&cf, tau).expect("fundamental cycles are cycles");
        for mu in 0..tau.num_triangles() {
            m[(2 * mu, col)] = -h.get(mu, 2) as i64;
            m[(2 * mu + 1, col)] = h.get(mu, 1) as i64;
        }
    }
    LinearMapMatrix { name: "f3", matrix: m }
}

/// Ranks and composites of the exact sequence, computed exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessReport {
    pub edges: usize,
    pub kashaev_dim: usize,
    /// `2g + p − 1`.
    pub homology_dim: usize,
    pub cycle_basis_len: usize,
    pub f1_rank: usize,
    pub f2_rank: usize,
    pub f2_kernel_dim: usize,
    pub f3_rank: usize,
    pub f1_after_f2_zero: bool,
    pub f2_after_f3_zero: bool,
}

impl ExactnessReport {
    pub fn f1_surjective(&self) -> bool {
        self.f1_rank == 1
    }

    pub fn exact_at_shear(&self) -> bool {
        self.f1_after_f2_zero && self.f2_rank + 1 == self.edges
    }

    pub fn exact_at_kashaev(&self) -> bool {
        self.f2_after_f3_zero && self.f2_kernel_dim == self.f3_rank
    }

    pub fn f3_injective(&self) -> bool {
        self.f3_rank == self.cycle_basis_len && self.cycle_basis_len == self.homology_dim
    }

    pub fn holds(&self) -> bool {
        self.f1_surjective() && self.exact_at_shear() && self.exact_at_kashaev() && self.f3_injective()
    }
}

pub fn verify_exact_sequence(tau: &DecoratedTriangulation) -> ExactnessReport {
    let topo = tau.topology();
    let l = matrix_f2(tau).matrix.mul(&matrix_m(tau.num_triangles()).matrix);
    let f1 = matrix_f1(tau.num_edges()).matrix;
    let f3 = matrix_f3(tau).matrix;
    let f2_rank = l.rank();
    ExactnessReport {
        edges: tau.num_edges(),
        kashaev_dim: l.cols(),
        homology_dim: (2 * topo.genus + topo.punctures - 1) as usize,
        cycle_basis_len: f3.cols(),
        f1_rank: f1.rank(),
        f2_rank,
        f2_kernel_dim: l.cols() - f2_rank,
        f3_rank: f3.rank(),
        f1_after_f2_zero: f1.mul(&l).is_zero(),
        f2_after_f3_zero: l.mul(&f3).is_zero(),
    }
}

/// Both sides of `L Π Lᵀ = c σ`.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonReport {
    pub constant: Option<i64>,
    pub pushforward: IntMatrix,
    pub sigma: IntMatrix,
}

impl PoissonReport {
    pub fn holds(&self) -> bool {
        self.constant.is_some_and(|c| self.pushforward == self.sigma.scale(c))
    }
}

fn pushforward(tau: &DecoratedTriangulation) -> (IntMatrix, IntMatrix) {
    let n = tau.num_triangles();
    let l = matrix_f2(tau).matrix.mul(&matrix_m(n).matrix);
    let mut pi = IntMatrix::zeros(2 * n, 2 * n);
    for mu in 0..n {
        pi[(2 * mu, 2 * mu + 1)] = 1;
        pi[(2 * mu + 1, 2 * mu)] = -1;
    }
    let lhs = l.mul(&pi).mul(&l.transpose());
    let sigma = IntMatrix::from_rows(tau.underlying().skew_form().entries());
    (lhs, sigma)
}

/// The constant `c` with `L Π Lᵀ = c σ`, found once on the once-punctured
/// torus among `±1, ±2`.
pub fn poisson_constant() -> Option<i64> {
    static CONSTANT: OnceLock<Option<i64>> = OnceLock::new();
    *CONSTANT.get_or_init(|| {
        let tau = builtin("torus-1").expect("bundled surface").decorated;
        let (lhs, sigma) = pushforward(&tau);
        [1, 2, -1, -2].into_iter().find(|&c| lhs == sigma.scale(c))
    })
}

pub fn poisson_check(tau: &DecoratedTriangulation) -> PoissonReport {
    let (pushforward, sigma) = pushforward(tau);
    PoissonReport { constant: poisson_constant(), pushforward, sigma }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{builtin_surfaces, Permutation};
    use proptest::prelude::*;

    #[test]
    fn m_examples() {
        let h = map_m(&KashaevVector::from_log(vec![0.0, 0.0, 1.0, 2.0]));
        assert_eq!(h.triangles(), &[[0.0, 0.0, 0.0], [-1.0, 2.0, -1.0]]);
    }

    #[test]
    fn torus_all_ones_gives_unit_shears() {
        let tau = builtin("torus-1").unwrap().decorated;
        let x = shear_of_kashaev(&KashaevVector::ones(2), &tau);
        assert!(x.log().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn f1_examples() {
        assert_eq!(map_f1(&ShearVector::from_log(vec![0.0; 3])), 0.0);
        assert_eq!(map_f1(&ShearVector::from_log(vec![0.0, 1.0, 0.0])), 1.0);
    }

    #[test]
    fn cycle_basis_has_m_plus_one_elements() {
        for s in builtin_surfaces() {
            let tau = &s.decorated;
            let basis = cycle_basis(tau);
            assert_eq!(basis.len(), tau.complexity() + 1, "{}", s.name);
            for c in basis {
                let cf: Vec<f64> = c.iter().map(|&v| v as f64).collect();
                let h = map_f3(&cf, tau).unwrap();
                assert!(h.triangles().iter().any(|t| t.iter().any(|&v| v != 0.0)));
                let x = map_f2(&h, tau);
                assert!(x.log().iter().all(|&v| v == 0.0), "{}", s.name);
            }
        }
    }

    #[test]
    fn zero_chain_maps_to_zero_and_non_cycles_are_rejected() {
        let tau = builtin("sphere-4").unwrap().decorated;
        assert_eq!(map_f3(&[0.0; 6], &tau).unwrap(), SideValues::zeros(4));
        let mut c = vec![0.0; 6];
        c[0] = 1.0;
        assert!(matches!(map_f3(&c, &tau), Err(ClassicalError::NotACycle(_))));
    }

    #[test]
    fn exactness_on_bundled_surfaces() {
        for s in builtin_surfaces() {
            let r = verify_exact_sequence(&s.decorated);
            assert!(r.holds(), "{}: {r:?}", s.name);
        }
        let r = verify_exact_sequence(&builtin("torus-1").unwrap().decorated);
        assert_eq!(r.f2_kernel_dim, 2);
        let r = verify_exact_sequence(&builtin("sphere-3").unwrap().decorated);
        assert_eq!(r.f2_kernel_dim, 2);
        let r = verify_exact_sequence(&builtin("sphere-4").unwrap().decorated);
        assert_eq!(r.f2_rank, 5);
    }

    #[test]
    fn poisson_identity_on_bundled_surfaces() {
        assert!(poisson_constant().is_some());
        for s in builtin_surfaces() {
            let r = poisson_check(&s.decorated);
            assert!(r.holds(), "{}: {r:?}", s.name);
            assert_eq!(r.pushforward.transpose(), r.pushforward.scale(-1));
        }
    }

    #[test]
    fn poisson_identity_survives_renumbering() {
        let tau = builtin("torus-2").unwrap().decorated;
        let p = Permutation::new(vec![2, 0, 3, 1]).unwrap();
        let a = poisson_check(&tau);
        let b = poisson_check(&tau.renumber(&p).unwrap());
        assert!(b.holds());
        // Edge labels are untouched by renumbering triangles.
        assert_eq!(a.pushforward, b.pushforward);
    }

    #[test]
    fn matrices_agree_with_maps() {
        let tau = builtin("torus-2").unwrap().decorated;
        let k = KashaevVector::from_log((0..8).map(|i| (i as f64 * 0.37).sin()).collect());
        let via_matrix = matrix_f2(&tau).apply(&matrix_m(4).apply(k.log()));
        let direct = shear_of_kashaev(&k, &tau);
        for (a, b) in via_matrix.iter().zip(direct.log()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn side_values_sum_to_zero(log in prop::collection::vec(-5.0f64..5.0, 8)) {
            let h = map_m(&KashaevVector::from_log(log));
            prop_assert!(h.max_triangle_sum() < 1e-12);
        }

        #[test]
        fn f2_image_lies_in_kernel_of_f1(log in prop::collection::vec(-5.0f64..5.0, 8)) {
            let tau = builtin("sphere-4").unwrap().decorated;
            let x = shear_of_kashaev(&KashaevVector::from_log(log), &tau);
            prop_assert!(map_f1(&x).abs() < 1e-9);
        }
    }
}
