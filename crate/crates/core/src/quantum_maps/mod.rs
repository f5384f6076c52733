//! Quantum coordinate changes between the algebras of neighbouring
//! triangulations.
//!
//! Every elementary map goes from the algebra of the *new* triangulation to
//! the algebra of the *old* one. Composing along a move sequence therefore
//! substitutes each later map into the earlier ones: the map of the path
//! `t₀ → t₁ → t₂` is `A₁ ∘ A₂`, with `A₂` written over `t₁` and `A₁` over
//! `t₀`.

mod linking;
mod suites;

use std::fmt;

use thiserror::Error;

use crate::qtorus::{CoeffPoly, Signature};
use crate::rational::{
    pairs_equal, substitute_memo, EqualityPolicy, Expr, RationalError, Substitution, SubstitutionMemo, Verdict,
};
use crate::surface::{classify_flip, DecoratedTriangulation, IdealTriangulation, Move, Permutation, SurfaceError};

pub use linking::{central_h, check_diagram, f_tau, f_tau_elements, CompatReport};
pub use suites::{
    cf_relation_instances, check_relation, kashaev_relation_instances, path_independence, PathIndependence,
    RelationInstance, RelationOutcome, StartState,
};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum MapError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Rational(#[from] RationalError),
    #[error("parameter {0} must be nonzero")]
    ZeroParameter(&'static str),
    #[error("maps do not compose: inner target has {inner} generators, outer source has {outer}")]
    Incompatible { inner: usize, outer: usize },
    #[error("move sequence does not reach the requested triangulation")]
    PathMismatch,
}

/// The scalars `a` (mark rotation) and `b` (exchange), kept as Laurent
/// polynomials in `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KashaevParams {
    pub a: CoeffPoly,
    pub b: CoeffPoly,
}

impl KashaevParams {
    pub fn new(a: CoeffPoly, b: CoeffPoly) -> Result<Self, MapError> {
        if a.is_zero() {
            return Err(MapError::ZeroParameter("a"));
        }
        if b.is_zero() {
            return Err(MapError::ZeroParameter("b"));
        }
        Ok(Self { a, b })
    }

    /// `a = q^ka`, `b = q^kb`.
    pub fn q_powers(ka: i32, kb: i32) -> Self {
        Self { a: CoeffPoly::q_pow(ka), b: CoeffPoly::q_pow(kb) }
    }

    /// `(q⁻², q³)`, the only values making the linking map compatible.
    pub fn compatible() -> Self {
        Self::q_powers(-2, 3)
    }
}

impl Default for KashaevParams {
    fn default() -> Self {
        Self::compatible()
    }
}

impl fmt::Display for KashaevParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a={},b={}", self.a, self.b)
    }
}

/// Images of the source generators, written over the target algebra.
#[derive(Clone, Debug)]
pub struct GeneratorMap {
    source: Signature,
    target: Signature,
    images: Vec<Expr>,
    moves: Vec<Move>,
}

impl GeneratorMap {
    /// Panics if the number of images differs from the source rank.
    pub fn new(source: Signature, target: Signature, images: Vec<Expr>, moves: Vec<Move>) -> Self {
        assert_eq!(source.len(), images.len(), "one image per source generator");
        Self { source, target, images, moves }
    }

    pub fn identity(sig: &Signature) -> Self {
        Self::new(sig.clone(), sig.clone(), (0..sig.len()).map(Expr::gen).collect(), Vec::new())
    }

    pub fn source(&self) -> &Signature {
        &self.source
    }

    pub fn target(&self) -> &Signature {
        &self.target
    }

    pub fn image(&self, generator: usize) -> &Expr {
        &self.images[generator]
    }

    pub fn images(&self) -> &[Expr] {
        &self.images
    }

    /// The moves this map was composed from, in application order.
    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    /// `outer ∘ inner`: apply `inner`, then rewrite its images with `outer`.
    pub fn compose(outer: &GeneratorMap, inner: &GeneratorMap) -> Result<GeneratorMap, MapError> {
        if inner.target.len() != outer.source.len() {
            return Err(MapError::Incompatible { inner: inner.target.len(), outer: outer.source.len() });
        }
        let subst = Substitution::from_images(outer.images.clone());
        let mut memo = SubstitutionMemo::default();
        let images = inner.images.iter().map(|e| substitute_memo(e, &subst, &mut memo)).collect::<Result<_, _>>()?;
        Ok(GeneratorMap {
            source: inner.source.clone(),
            target: outer.target.clone(),
            images,
            moves: [outer.moves.clone(), inner.moves.clone()].concat(),
        })
    }

    /// Image of an arbitrary expression over the source algebra.
    pub fn apply(&self, e: &Expr) -> Result<Expr, MapError> {
        let subst = Substitution::from_images(self.images.clone());
        Ok(substitute_memo(e, &subst, &mut SubstitutionMemo::default())?)
    }

    /// Whether the images satisfy the source relations
    /// `G_i G_j = q^{2ε_ij} G_j G_i` inside the target algebra.
    pub fn respects_relations(&self, policy: &EqualityPolicy) -> Verdict {
        let n = self.source.len();
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (&self.images[i], &self.images[j]);
                let lhs = a.mul(b);
                let rhs = Expr::product(vec![Expr::q_pow(2 * self.source.eps(i, j) as i32), b.clone(), a.clone()]);
                pairs.push((lhs, rhs));
            }
        }
        pairs_equal(&pairs, &self.target, policy)
    }

    /// One `name' -> image` line per generator.
    pub fn to_text(&self) -> String {
        self.images
            .iter()
            .enumerate()
            .map(|(g, e)| format!("{}' -> {}\n", self.source.generator_name(g), e.to_text(&self.target)))
            .collect()
    }
}

/// Decides whether two maps with the same source and target agree on every
/// generator.
pub fn maps_equal(a: &GeneratorMap, b: &GeneratorMap, policy: &EqualityPolicy) -> Verdict {
    assert_eq!(a.source.len(), b.source.len(), "maps with different sources");
    let pairs: Vec<(Expr, Expr)> = a.images.iter().cloned().zip(b.images.iter().cloned()).collect();
    pairs_equal(&pairs, &a.target, policy)
}

fn one_plus_q_times(k: i32, x: Expr) -> Expr {
    Expr::one().add(&Expr::q_pow(k).mul(&x))
}

/// The flip at `edge`, from the algebra of `Δ(λ)` to that of `λ`.
pub fn delta_hat(lambda: &IdealTriangulation, edge: usize) -> Result<GeneratorMap, MapError> {
    let roles = classify_flip(lambda, edge)?;
    let after = lambda.flip(edge)?;
    let n = lambda.num_edges();
    let x = Expr::gen(edge);
    let x_inv = Expr::gen_inverse(edge);
    let mut images: Vec<Expr> = (0..n).map(Expr::gen).collect();
    images[edge] = x_inv.clone();
    for e in [roles.j, roles.k, roles.l, roles.m] {
        if e == edge {
            continue;
        }
        let xe = Expr::gen(e);
        images[e] = match roles.occupancy(e) {
            (1, 0) => one_plus_q_times(1, x.clone()).mul(&xe),
            (0, 1) => one_plus_q_times(1, x_inv.clone()).inverse()?.mul(&xe),
            (2, 0) => Expr::product(vec![one_plus_q_times(1, x.clone()), one_plus_q_times(3, x.clone()), xe]),
            (0, 2) => Expr::product(vec![
                one_plus_q_times(1, x_inv.clone()).inverse()?,
                one_plus_q_times(3, x_inv.clone()).inverse()?,
                xe,
            ]),
            (1, 1) => x.mul(&xe),
            other => unreachable!("edge occupies {other:?} positions around a square"),
        };
    }
    Ok(GeneratorMap::new(
        Signature::chekhov_fock(&after),
        Signature::chekhov_fock(lambda),
        images,
        vec![Move::DiagonalExchange(edge)],
    ))
}

/// Relabeling edge `e` as `perm(e)`: `X'_{perm(e)} ↦ X_e`.
pub fn alpha_hat_edges(lambda: &IdealTriangulation, perm: &Permutation) -> Result<GeneratorMap, MapError> {
    let after = lambda.relabel(perm)?;
    let inv = perm.inverse();
    Ok(GeneratorMap::new(
        Signature::chekhov_fock(&after),
        Signature::chekhov_fock(lambda),
        (0..perm.len()).map(|k| Expr::gen(inv.apply(k))).collect(),
        vec![Move::Reindex(perm.clone())],
    ))
}

/// Renumbering triangle `μ` as `perm(μ)`: `Y'_{perm(μ)} ↦ Y_μ`, likewise `Z`.
pub fn alpha_hat_triangles(perm: &Permutation) -> GeneratorMap {
    let sig = Signature::kashaev(perm.len());
    let inv = perm.inverse();
    let images = (0..sig.len()).map(|g| Expr::gen(2 * inv.apply(g / 2) + g % 2)).collect();
    GeneratorMap::new(sig.clone(), sig, images, vec![Move::Reindex(perm.clone())])
}

/// Mark rotation in triangle `mu`: `Y' ↦ a Y⁻¹ Z`, `Z' ↦ Y⁻¹`.
pub fn rho_hat(tau: &DecoratedTriangulation, mu: usize, params: &KashaevParams) -> Result<GeneratorMap, MapError> {
    tau.rotate_mark(mu)?;
    let sig = Signature::kashaev(tau.num_triangles());
    let (y, z) = (2 * mu, 2 * mu + 1);
    let mut images: Vec<Expr> = (0..sig.len()).map(Expr::gen).collect();
    images[y] = Expr::product(vec![Expr::scalar(params.a.clone()), Expr::gen_inverse(y), Expr::gen(z)]);
    images[z] = Expr::gen_inverse(y);
    Ok(GeneratorMap::new(sig.clone(), sig, images, vec![Move::MarkRotation(mu)]))
}

/// Exchange of triangles `i`, `j` with common left factor
/// `D⁻¹ = (b Y_i Y_j + Z_i Z_j)⁻¹`.
pub fn phi_hat(
    tau: &DecoratedTriangulation,
    i: usize,
    j: usize,
    params: &KashaevParams,
) -> Result<GeneratorMap, MapError> {
    tau.exchange(i, j)?;
    let sig = Signature::kashaev(tau.num_triangles());
    let (yi, zi, yj, zj) = (Expr::gen(2 * i), Expr::gen(2 * i + 1), Expr::gen(2 * j), Expr::gen(2 * j + 1));
    let b = Expr::scalar(params.b.clone());
    let d_inv = Expr::product(vec![b.clone(), yi.clone(), yj.clone()]).add(&zi.mul(&zj)).inverse()?;
    let mut images: Vec<Expr> = (0..sig.len()).map(Expr::gen).collect();
    images[2 * i] = d_inv.mul(&zj);
    images[2 * i + 1] = Expr::product(vec![b.clone(), d_inv.clone(), yi]);
    images[2 * j] = d_inv.mul(&zi);
    images[2 * j + 1] = Expr::product(vec![b, d_inv, yj]);
    Ok(GeneratorMap::new(sig.clone(), sig, images, vec![Move::KashaevExchange(i, j)]))
}

pub fn ideal_move_map(lambda: &IdealTriangulation, mv: &Move) -> Result<GeneratorMap, MapError> {
    match mv {
        Move::DiagonalExchange(e) => delta_hat(lambda, *e),
        Move::Reindex(p) => alpha_hat_edges(lambda, p),
        other => Err(SurfaceError::UnsupportedMove(other.to_string()).into()),
    }
}

pub fn decorated_move_map(
    tau: &DecoratedTriangulation,
    mv: &Move,
    params: &KashaevParams,
) -> Result<GeneratorMap, MapError> {
    match mv {
        Move::MarkRotation(mu) => rho_hat(tau, *mu, params),
        Move::KashaevExchange(i, j) => phi_hat(tau, *i, *j, params),
        Move::Reindex(p) => {
            tau.renumber(p)?;
            Ok(alpha_hat_triangles(p))
        }
        other => Err(SurfaceError::UnsupportedMove(other.to_string()).into()),
    }
}

/// The map of a move sequence from `from`, and the triangulation it ends at.
pub fn compose_ideal_path(
    from: &IdealTriangulation,
    moves: &[Move],
) -> Result<(GeneratorMap, IdealTriangulation), MapError> {
    let mut acc = GeneratorMap::identity(&Signature::chekhov_fock(from));
    let mut cur = from.clone();
    for mv in moves {
        acc = GeneratorMap::compose(&acc, &ideal_move_map(&cur, mv)?)?;
        cur = cur.apply(mv)?;
    }
    Ok((acc, cur))
}

pub fn compose_decorated_path(
    from: &DecoratedTriangulation,
    moves: &[Move],
    params: &KashaevParams,
) -> Result<(GeneratorMap, DecoratedTriangulation), MapError> {
    let mut acc = GeneratorMap::identity(&Signature::kashaev(from.num_triangles()));
    let mut cur = from.clone();
    for mv in moves {
        acc = GeneratorMap::compose(&acc, &decorated_move_map(&cur, mv, params)?)?;
        cur = cur.apply(mv)?;
    }
    Ok((acc, cur))
}

/// `Φ_{λλ'}` along `moves`, which must carry `from` to `to`.
pub fn compose_path_ideal(
    from: &IdealTriangulation,
    to: &IdealTriangulation,
    moves: &[Move],
) -> Result<GeneratorMap, MapError> {
    let (map, end) = compose_ideal_path(from, moves)?;
    if &end != to {
        return Err(MapError::PathMismatch);
    }
    Ok(map)
}

/// `Ψ_{ττ'}(a, b)` along `moves`, which must carry `from` to `to` (edge
/// labels are not part of the Kashaev algebra and are ignored).
pub fn compose_path_decorated(
    from: &DecoratedTriangulation,
    to: &DecoratedTriangulation,
    moves: &[Move],
    params: &KashaevParams,
) -> Result<GeneratorMap, MapError> {
    let (map, end) = compose_decorated_path(from, moves, params)?;
    if !end.same_decoration(to) {
        return Err(MapError::PathMismatch);
    }
    Ok(map)
}
