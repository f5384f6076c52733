//! Locating pentagon configurations and the move sequences on both sides of
//! the pentagon relations.

use super::{DecoratedTriangulation, IdealTriangulation, Move, Permutation};

/// Pairs `(i, j)` of edges that are the two diagonals of an embedded pentagon:
/// they share one triangle and their other triangles are distinct from it and
/// from each other.
pub fn flip_pentagons(t: &IdealTriangulation) -> Vec<(usize, usize)> {
    let n = t.num_edges();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if t.is_self_folded(i) || t.is_self_folded(j) {
                continue;
            }
            let ti = t.sides_of_edge(i).map(|s| s.triangle);
            let tj = t.sides_of_edge(j).map(|s| s.triangle);
            let shared: Vec<usize> = ti.iter().copied().filter(|x| tj.contains(x)).collect();
            if shared.len() != 1 {
                continue;
            }
            let mid = shared[0];
            let oi = if ti[0] == mid { ti[1] } else { ti[0] };
            let oj = if tj[0] == mid { tj[1] } else { tj[0] };
            if oi != oj && oi != mid && oj != mid {
                out.push((i, j));
            }
        }
    }
    out
}

/// The two sides of `Δ_i Δ_j Δ_i Δ_j Δ_i = α_{i↔j}` as move sequences.
pub fn flip_pentagon_paths(t: &IdealTriangulation, i: usize, j: usize) -> (Vec<Move>, Vec<Move>) {
    let lhs = [i, j, i, j, i].into_iter().map(Move::DiagonalExchange).collect();
    let rhs = vec![Move::Reindex(Permutation::transposition(t.num_edges(), i, j))];
    (lhs, rhs)
}

/// `ω_μν = ρ_μ ∘ φ_μν ∘ ρ_ν`, listed in the order the moves are applied.
pub fn omega(mu: usize, nu: usize) -> Vec<Move> {
    vec![Move::MarkRotation(nu), Move::KashaevExchange(mu, nu), Move::MarkRotation(mu)]
}

/// Triples `(i, j, k)` of distinct triangles forming a pentagon with marks
/// placed so that `ω_ij`, `ω_ik`, `ω_jk` apply in turn: the 0-side of `τ_i`
/// is the 1-side of `τ_j`, and the 0-side of `τ_j` is the 1-side of `τ_k`.
pub fn kashaev_pentagons(d: &DecoratedTriangulation) -> Vec<(usize, usize, usize)> {
    let n = d.num_triangles();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                let (ti, tj, tk) = (d.kashaev_sides(i), d.kashaev_sides(j), d.kashaev_sides(k));
                if ti[0] == tj[1] && tj[0] == tk[1] {
                    out.push((i, j, k));
                }
            }
        }
    }
    out
}

/// The two sides of `ω_jk ∘ ω_ik ∘ ω_ij = ω_ij ∘ ω_jk`, in application order.
pub fn kashaev_pentagon_paths(i: usize, j: usize, k: usize) -> (Vec<Move>, Vec<Move>) {
    let lhs = [omega(i, j), omega(i, k), omega(j, k)].concat();
    let rhs = [omega(j, k), omega(i, j)].concat();
    (lhs, rhs)
}
