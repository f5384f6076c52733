//! Relations between coordinate changes, each stated as two move sequences
//! from a common start that must reach the same triangulation and induce the
//! same map.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{compose_decorated_path, compose_ideal_path, maps_equal, GeneratorMap, KashaevParams, MapError};
use crate::rational::{EqualityPolicy, Verdict};
use crate::surface::{
    find_move_paths, flip_pentagon_paths, flip_pentagons, kashaev_pentagon_paths, kashaev_pentagons,
    DecoratedTriangulation, IdealTriangulation, Move, Permutation,
};

#[derive(Clone, Debug)]
pub enum StartState {
    Ideal(IdealTriangulation),
    Decorated(DecoratedTriangulation),
}

impl StartState {
    fn map_of(&self, moves: &[Move], params: &KashaevParams) -> Result<(GeneratorMap, StartState), MapError> {
        Ok(match self {
            StartState::Ideal(t) => {
                let (m, end) = compose_ideal_path(t, moves)?;
                (m, StartState::Ideal(end))
            }
            StartState::Decorated(t) => {
                let (m, end) = compose_decorated_path(t, moves, params)?;
                (m, StartState::Decorated(end))
            }
        })
    }

    /// Same labeled ideal triangulation, or same decoration.
    fn same_as(&self, other: &StartState) -> bool {
        match (self, other) {
            (StartState::Ideal(a), StartState::Ideal(b)) => a == b,
            (StartState::Decorated(a), StartState::Decorated(b)) => a.same_decoration(b),
            _ => false,
        }
    }
}

/// One instance of a relation: `lhs` and `rhs` are applied to `start` in
/// order.
#[derive(Clone, Debug)]
pub struct RelationInstance {
    pub relation: &'static str,
    pub start: StartState,
    pub lhs: Vec<Move>,
    pub rhs: Vec<Move>,
}

impl RelationInstance {
    pub fn label(&self) -> String {
        let show = |ms: &[Move]| {
            if ms.is_empty() {
                "id".to_string()
            } else {
                ms.iter().map(Move::to_string).collect::<Vec<_>>().join(".")
            }
        };
        format!("{} = {}", show(&self.lhs), show(&self.rhs))
    }
}

#[derive(Clone, Debug)]
pub struct RelationOutcome {
    /// Both sequences end at the same triangulation.
    pub endpoints_agree: bool,
    /// Equality of the two composed maps.
    pub verdict: Verdict,
}

impl RelationOutcome {
    pub fn passes(&self) -> bool {
        self.endpoints_agree && self.verdict.is_equal()
    }
}

pub fn check_relation(
    inst: &RelationInstance,
    params: &KashaevParams,
    policy: &EqualityPolicy,
) -> Result<RelationOutcome, MapError> {
    let (lhs, end_l) = inst.start.map_of(&inst.lhs, params)?;
    let (rhs, end_r) = inst.start.map_of(&inst.rhs, params)?;
    Ok(RelationOutcome { endpoints_agree: end_l.same_as(&end_r), verdict: maps_equal(&lhs, &rhs, policy) })
}

fn random_permutation<R: Rng>(n: usize, rng: &mut R) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Permutation::new(images).expect("shuffled identity is a permutation")
}

/// Instances of the five flip relations on `lambda`. Permutations are drawn
/// from `rng`.
pub fn cf_relation_instances<R: Rng>(lambda: &IdealTriangulation, rng: &mut R) -> Vec<RelationInstance> {
    let n = lambda.num_edges();
    let start = StartState::Ideal(lambda.clone());
    let inst = |relation, lhs, rhs| RelationInstance { relation, start: start.clone(), lhs, rhs };
    let flippable: Vec<usize> = (0..n).filter(|&e| !lambda.is_self_folded(e)).collect();
    let mut out = Vec::new();
    for _ in 0..2 {
        let (a, b) = (random_permutation(n, rng), random_permutation(n, rng));
        out.push(inst(
            "reindex-composition",
            vec![Move::Reindex(b.clone()), Move::Reindex(a.clone())],
            vec![Move::Reindex(a.compose(&b))],
        ));
    }
    for &i in &flippable {
        out.push(inst("flip-involution", vec![Move::DiagonalExchange(i); 2], vec![]));
    }
    for &i in &flippable {
        let a = random_permutation(n, rng);
        out.push(inst(
            "reindex-flip-naturality",
            vec![Move::DiagonalExchange(i), Move::Reindex(a.clone())],
            vec![Move::Reindex(a.clone()), Move::DiagonalExchange(a.apply(i))],
        ));
    }
    for (x, &i) in flippable.iter().enumerate() {
        for &j in &flippable[x + 1..] {
            if !lambda.share_triangle(i, j) {
                out.push(inst(
                    "distant-flips-commute",
                    vec![Move::DiagonalExchange(i), Move::DiagonalExchange(j)],
                    vec![Move::DiagonalExchange(j), Move::DiagonalExchange(i)],
                ));
            }
        }
    }
    for (i, j) in flip_pentagons(lambda) {
        let (lhs, rhs) = flip_pentagon_paths(lambda, i, j);
        out.push(inst("pentagon-quantum", lhs, rhs));
    }
    out
}

/// Every decoration of `tau`'s triangles reachable by mark rotations alone.
fn all_markings(tau: &DecoratedTriangulation) -> Vec<DecoratedTriangulation> {
    let mut out = vec![tau.clone()];
    for mu in 0..tau.num_triangles() {
        out = out
            .into_iter()
            .flat_map(|t| {
                let once = t.rotate_mark(mu).expect("triangle exists");
                let twice = once.rotate_mark(mu).expect("triangle exists");
                [t, once, twice]
            })
            .collect();
    }
    out
}

fn exchanges(tau: &DecoratedTriangulation) -> Vec<(usize, usize)> {
    let n = tau.num_triangles();
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| tau.exchange_applies(i, j)).collect()
}

/// Instances of the eight Kashaev relations. Exchange relations are taken
/// from the first markings of `tau` (in rotation order) where they apply.
pub fn kashaev_relation_instances<R: Rng>(tau: &DecoratedTriangulation, rng: &mut R) -> Vec<RelationInstance> {
    let n = tau.num_triangles();
    let inst = |relation, start: &DecoratedTriangulation, lhs, rhs| RelationInstance {
        relation,
        start: StartState::Decorated(start.clone()),
        lhs,
        rhs,
    };
    let markings = all_markings(tau);
    let with_exchange = markings.iter().find(|t| !exchanges(t).is_empty());
    let mut out = Vec::new();

    for _ in 0..2 {
        let (a, b) = (random_permutation(n, rng), random_permutation(n, rng));
        out.push(inst(
            "reindex-composition",
            tau,
            vec![Move::Reindex(b.clone()), Move::Reindex(a.clone())],
            vec![Move::Reindex(a.compose(&b))],
        ));
    }
    if let Some(t) = with_exchange {
        for (i, j) in exchanges(t) {
            out.push(inst(
                "exchange-squared",
                t,
                vec![Move::KashaevExchange(i, j); 2],
                vec![Move::Reindex(Permutation::transposition(n, i, j))],
            ));
            let a = random_permutation(n, rng);
            out.push(inst(
                "reindex-exchange-naturality",
                t,
                vec![Move::KashaevExchange(i, j), Move::Reindex(a.clone())],
                vec![Move::Reindex(a.clone()), Move::KashaevExchange(a.apply(i), a.apply(j))],
            ));
        }
    }
    let disjoint = markings.iter().find_map(|t| {
        let ex = exchanges(t);
        ex.iter().enumerate().find_map(|(x, &(i, j))| {
            ex[x + 1..]
                .iter()
                .find(|&&(k, l)| ![k, l].contains(&i) && ![k, l].contains(&j))
                .map(|&(k, l)| (t, (i, j), (k, l)))
        })
    });
    if let Some((t, (i, j), (k, l))) = disjoint {
        out.push(inst(
            "exchanges-commute",
            t,
            vec![Move::KashaevExchange(i, j), Move::KashaevExchange(k, l)],
            vec![Move::KashaevExchange(k, l), Move::KashaevExchange(i, j)],
        ));
    }
    for (i, j, k) in kashaev_pentagons(tau) {
        let (lhs, rhs) = kashaev_pentagon_paths(i, j, k);
        out.push(inst("pentagon-omega", tau, lhs, rhs));
    }
    for mu in 0..n {
        out.push(inst("rotation-cubed", tau, vec![Move::MarkRotation(mu); 3], vec![]));
    }
    for i in 0..n {
        for j in i + 1..n {
            out.push(inst(
                "rotations-commute",
                tau,
                vec![Move::MarkRotation(i), Move::MarkRotation(j)],
                vec![Move::MarkRotation(j), Move::MarkRotation(i)],
            ));
        }
    }
    for mu in 0..n {
        let a = random_permutation(n, rng);
        out.push(inst(
            "reindex-rotation-naturality",
            tau,
            vec![Move::MarkRotation(mu), Move::Reindex(a.clone())],
            vec![Move::Reindex(a.clone()), Move::MarkRotation(a.apply(mu))],
        ));
    }
    out
}

/// Every shortest path found between two triangulations, and the verdict
/// comparing each path's map with the first path's.
#[derive(Clone, Debug)]
pub struct PathIndependence {
    pub paths: Vec<Vec<Move>>,
    pub verdicts: Vec<Verdict>,
}

impl PathIndependence {
    pub fn passes(&self) -> bool {
        self.paths.len() >= 2 && self.verdicts.iter().all(Verdict::is_equal)
    }
}

pub fn path_independence(
    from: &StartState,
    to: &StartState,
    depth: usize,
    limit: usize,
    params: &KashaevParams,
    policy: &EqualityPolicy,
) -> Result<PathIndependence, MapError> {
    let paths = match (from, to) {
        (StartState::Ideal(a), StartState::Ideal(b)) => find_move_paths(a, b, depth, limit)?,
        (StartState::Decorated(a), StartState::Decorated(b)) => find_move_paths(a, b, depth, limit)?,
        _ => return Err(MapError::PathMismatch),
    };
    let maps = paths.iter().map(|p| from.map_of(p, params).map(|(m, _)| m)).collect::<Result<Vec<_>, _>>()?;
    let verdicts = maps[1..].iter().map(|m| maps_equal(&maps[0], m, policy)).collect();
    Ok(PathIndependence { paths, verdicts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::builtin;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn run_all(instances: &[RelationInstance]) {
        let (params, policy) = (KashaevParams::q_powers(1, -1), EqualityPolicy::default());
        for inst in instances {
            let out = check_relation(inst, &params, &policy).unwrap();
            assert!(out.passes(), "{} {}: {out:?}", inst.relation, inst.label());
        }
    }

    #[test]
    fn flip_relations_on_the_four_punctured_sphere() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let inst = cf_relation_instances(&builtin("sphere-4").unwrap().ideal, &mut rng);
        for rel in ["reindex-composition", "flip-involution", "distant-flips-commute", "pentagon-quantum"] {
            assert!(inst.iter().any(|i| i.relation == rel), "{rel}");
        }
        run_all(&inst);
    }

    #[test]
    fn kashaev_relations_for_generic_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let inst = kashaev_relation_instances(&builtin("torus-2").unwrap().decorated, &mut rng);
        for rel in ["exchange-squared", "exchanges-commute", "pentagon-omega", "rotation-cubed"] {
            assert!(inst.iter().any(|i| i.relation == rel), "{rel}");
        }
        run_all(&inst);
    }

    #[test]
    fn a_false_relation_is_caught() {
        let lambda = builtin("sphere-4").unwrap().ideal;
        let bogus = RelationInstance {
            relation: "bogus",
            start: StartState::Ideal(lambda),
            lhs: vec![Move::DiagonalExchange(0)],
            rhs: vec![],
        };
        let out = check_relation(&bogus, &KashaevParams::compatible(), &EqualityPolicy::default()).unwrap();
        assert!(!out.endpoints_agree);
    }

    #[test]
    fn commuting_rotations_give_path_independent_maps() {
        let tau = builtin("torus-2").unwrap().decorated;
        let target = tau.rotate_mark(0).unwrap().rotate_mark(2).unwrap();
        let r = path_independence(
            &StartState::Decorated(tau),
            &StartState::Decorated(target),
            4,
            8,
            &KashaevParams::compatible(),
            &EqualityPolicy::default(),
        )
        .unwrap();
        assert_eq!(r.paths.len(), 2);
        assert!(r.passes(), "{r:?}");
    }

    #[test]
    fn symmetric_triangulations_have_paths_differing_by_a_symmetry() {
        // The tetrahedral triangulation has combinatorial symmetries, so some
        // shortest paths to the same labeled state induce different maps.
        let lambda = builtin("sphere-4").unwrap().ideal;
        let target = lambda.flip(0).unwrap().flip(5).unwrap();
        let r = path_independence(
            &StartState::Ideal(lambda),
            &StartState::Ideal(target),
            4,
            8,
            &KashaevParams::compatible(),
            &EqualityPolicy::default(),
        )
        .unwrap();
        let same = r.paths.iter().skip(1).zip(&r.verdicts).filter(|(_, v)| v.is_equal()).count();
        assert_eq!(same, 1, "only the reordered pair of flips agrees");
        assert!(r.verdicts.iter().any(Verdict::is_unequal));
    }
}
