use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use teich_core::classical::{
    diagram_check_classical, kashaev_change, poisson_check, poisson_constant, shear_change, shear_flip,
    verify_exact_sequence, KashaevVector, ShearVector,
};
use teich_core::qtorus::{CoeffPoly, Element, Signature};
use teich_core::quantum_maps::{
    central_h, cf_relation_instances, check_diagram, check_relation, decorated_move_map, delta_hat, f_tau_elements,
    ideal_move_map, kashaev_relation_instances, path_independence, KashaevParams, RelationInstance, StartState,
};
use teich_core::rational::{eval_q1, expr_equal, EqualityPolicy, Expr, Verdict};
use teich_core::surface::{classify_flip, DecoratedTriangulation, IdealTriangulation, Move, Permutation};

use crate::config::{Suite, SuiteConfig};
use crate::report::Status;

pub struct Outcome {
    pub status: Status,
    pub witness: Option<String>,
    pub detail: String,
}

impl Outcome {
    fn pass(detail: impl Into<String>) -> Self {
        Outcome { status: Status::Pass, witness: None, detail: detail.into() }
    }

    fn fail(witness: String, detail: impl Into<String>) -> Self {
        Outcome { status: Status::Fail, witness: Some(witness), detail: detail.into() }
    }

    fn from_verdict(v: &Verdict, detail: impl Into<String>) -> Self {
        match v {
            Verdict::Equal { checks, exact, .. } => {
                let how = if *exact { "exact".to_string() } else { format!("{checks} numeric checks") };
                Outcome::pass(format!("{}; {how}", detail.into()))
            }
            Verdict::Unequal(w) => Outcome::fail(w.to_string(), detail),
            Verdict::Inconclusive { reason, .. } => Outcome::fail(format!("inconclusive: {reason}"), detail),
        }
    }

    fn from_error(e: impl std::fmt::Display) -> Self {
        Outcome::fail(format!("error: {e}"), "")
    }
}

pub struct Check {
    pub id: String,
    pub anchor: &'static str,
    pub run: Box<dyn Fn() -> Outcome + Send + Sync>,
}

fn check(id: String, anchor: &'static str, run: impl Fn() -> Outcome + Send + Sync + 'static) -> Check {
    Check { id, anchor, run: Box::new(run) }
}

/// Seed for a check's own random stream, fixed by the run seed and the id.
fn stream_seed(seed: u64, id: &str) -> u64 {
    let mut h = DefaultHasher::new();
    (seed, id).hash(&mut h);
    h.finish()
}

/// The decorated triangulation and each state one mark rotation away, so
/// that exchanges are available on every bundled surface.
fn decorated_states(tau: &DecoratedTriangulation) -> Vec<(String, DecoratedTriangulation)> {
    let mut out = vec![("base".to_string(), tau.clone())];
    out.extend((0..tau.num_triangles()).map(|t| (format!("rot{}", t + 1), tau.rotate_mark(t).unwrap())));
    out
}

fn cycle(n: usize) -> Permutation {
    Permutation::new((1..n).chain([0]).collect()).expect("a cycle is a permutation")
}

fn decorated_moves(tau: &DecoratedTriangulation) -> Vec<Move> {
    let n = tau.num_triangles();
    let mut out: Vec<Move> = (0..n).map(Move::MarkRotation).collect();
    for i in 0..n {
        for j in 0..n {
            if tau.exchange_applies(i, j) {
                out.push(Move::KashaevExchange(i, j));
            }
        }
    }
    out.push(Move::Reindex(cycle(n)));
    out
}

fn ideal_moves(lambda: &IdealTriangulation) -> Vec<Move> {
    let n = lambda.num_edges();
    let mut out: Vec<Move> = (0..n).filter(|&e| !lambda.is_self_folded(e)).map(Move::DiagonalExchange).collect();
    out.push(Move::Reindex(cycle(n)));
    out
}

fn worst_relative(got: &[f64], want: &[f64]) -> f64 {
    got.iter().zip(want).map(|(g, w)| ((g - w) / w).abs()).fold(0.0, f64::max)
}

const SAMPLES_FLIP: usize = 100;
const SAMPLES_DIAGRAM: usize = 50;

fn classical_flip(cfg: &SuiteConfig, out: &mut Vec<Check>) {
    let lambda = cfg.surface.ideal.clone();
    for edge in (0..lambda.num_edges()).filter(|&e| !lambda.is_self_folded(e)) {
        let id = format!("classical-flip/e{}", edge + 1);
        let seed = stream_seed(cfg.policy.seed, &id);
        let lambda = lambda.clone();
        out.push(check(id, "flip-involution", move || {
            let case = match classify_flip(&lambda, edge) {
                Ok(r) => r.case.number(),
                Err(e) => return Outcome::from_error(e),
            };
            let flipped = lambda.flip(edge).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut worst: f64 = 0.0;
            for sample in 0..SAMPLES_FLIP {
                let x = ShearVector::random(lambda.num_edges(), 2.0, &mut rng);
                let back = shear_flip(&x, &lambda, edge).and_then(|y| shear_flip(&y, &flipped, edge));
                let err = match back {
                    Ok(b) => b.relative_distance(&x),
                    Err(e) => return Outcome::from_error(e),
                };
                if err > 1e-12 {
                    return Outcome::fail(
                        format!("q1(seed={seed},sample={sample});residual={err:e}"),
                        format!("case {case}"),
                    );
                }
                worst = worst.max(err);
            }
            Outcome::pass(format!("case {case}; {SAMPLES_FLIP} vectors; worst {worst:.1e}"))
        }));
    }
}

fn classical_diagram(cfg: &SuiteConfig, out: &mut Vec<Check>) {
    for (state, tau) in decorated_states(&cfg.surface.decorated) {
        for mv in decorated_moves(&tau) {
            let id = format!("classical-diagram/{state}/{mv}");
            let seed = stream_seed(cfg.policy.seed, &id);
            let tau = tau.clone();
            out.push(check(id, "classical-compat", move || {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut worst: f64 = 0.0;
                for sample in 0..SAMPLES_DIAGRAM {
                    let k = KashaevVector::random(tau.num_triangles(), 1.5, &mut rng);
                    let v = match diagram_check_classical(&tau, &mv, &k, 1e-10) {
                        Ok(v) => v,
                        Err(e) => return Outcome::from_error(e),
                    };
                    if !v.holds() {
                        return Outcome::fail(format!("q1(seed={seed},sample={sample});residual={:e}", v.error), "");
                    }
                    worst = worst.max(v.error);
                }
                Outcome::pass(format!("{SAMPLES_DIAGRAM} vectors; worst {worst:.1e}"))
            }));
        }
    }
}

fn exact_sequence(cfg: &SuiteConfig, out: &mut Vec<Check>) {
    let tau = cfg.surface.decorated.clone();
    out.push(check("exact-sequence".into(), "exact-sequence", move || {
        let r = verify_exact_sequence(&tau);
        let detail =
            format!("rank f2={} ker f2={} rank f3={} 2g+p-1={}", r.f2_rank, r.f2_kernel_dim, r.f3_rank, r.homology_dim);
        if r.holds() {
            Outcome::pass(detail)
        } else {
            Outcome::fail("exact".into(), detail)
        }
    }));
}

fn poisson(cfg: &SuiteConfig, out: &mut Vec<Check>) {
    let tau = cfg.surface.decorated.clone();
    out.push(check("poisson".into(), "poisson-pushforward", move || {
        let Some(c) = poisson_constant() else {
            return Outcome::fail("exact".into(), "no constant fits the once-punctured torus");
        };
        if poisson_check(&tau).holds() {
            Outcome::pass(format!("L Pi L^T = {c} sigma"))
        } else {
            Outcome::fail("exact".into(), format!("L Pi L^T != {c} sigma"))
        }
    }));
}

fn relation_checks(
    instances: Vec<RelationInstance>,
    prefix: &str,
    keep: impl Fn(&RelationInstance) -> bool,
    params: &[KashaevParams],
    policy: &EqualityPolicy,
    out: &mut Vec<Check>,
) {
    for (k, inst) in instances.into_iter().enumerate() {
        if !keep(&inst) {
            continue;
        }
        for p in params {
            let suffix = if params.len() > 1 || prefix == "kashaev" { format!("/{p}") } else { String::new() };
            let id = format!("{prefix}/{}/{:02}{suffix}", inst.relation, k + 1);
            let (inst, p, policy) = (inst.clone(), p.clone(), policy.clone());
            out.push(check(id, inst.relation, move || match check_relation(&inst, &p, &policy) {
                Ok(o) if !o.endpoints_agree => Outcome::fail("endpoints differ".into(), inst.label()),
                Ok(o) => Outcome::from_verdict(&o.verdict, inst.label()),
                Err(e) => Outcome::from_error(e),
            }));
        }
    }
}

fn cf_relations(cfg: &SuiteConfig, keep: impl Fn(&RelationInstance) -> bool, out: &mut Vec<Check>) {
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(cfg.policy.seed, "cf"));
    let instances = cf_relation_instances(&cfg.surface.ideal, &mut rng);
    relation_checks(instances, "cf", keep, &[KashaevParams::compatible()], &cfg.policy, out);
}

fn kashaev_relations(cfg: &SuiteConfig, keep: impl Fn(&RelationInstance) -> bool, out: &mut Vec<Check>) {
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(cfg.policy.seed, "kashaev"));
    let instances = kashaev_relation_instances(&cfg.surface.decorated, &mut rng);
    relation_checks(instances, "kashaev", keep, &cfg.params, &cfg.policy, out);
}

fn compat(cfg: &SuiteConfig, out: &mut Vec<Check>) {
    for p in &cfg.params {
        for (state, tau) in decorated_states(&cfg.surface.decorated) {
            for mv in decorated_moves(&tau) {
                let anchor = match mv {
                    Move::MarkRotation(_) => "compat-rotation",
                    Move::KashaevExchange(..) => "compat-exchange",
                    _ => "compat-reindex",
                };
                let id = format!("compat/{p}/{state}/{mv}");
                let (tau, p, policy) = (tau.clone(), p.clone(), cfg.policy.clone());
                out.push(check(id, anchor, move || match check_diagram(&tau, &mv, &p, &policy) {
                    Ok(r) => match r.failures().next() {
                        None => Outcome::pass(format!("{} generators", r.verdicts.len())),
                        Some((g, v)) => {
                            let mut o = Outcome::from_verdict(v, "");
                            o.detail = format!("generator X{} differs", g + 1);
                            o
                        }
                    },
                    Err(e) => Outcome::from_error(e),
                }));
            }
        }
    }
}

fn homomorphism(cfg: &SuiteConfig, out: &mut Vec<Check>) {
    let tau = cfg.surface.decorated.clone();
    let t = tau.clone();
    out.push(check("homomorphism/relations".into(), "linking-homomorphism", move || {
        let sig = Signature::kashaev(t.num_triangles());
        let sigma = t.underlying().skew_form();
        let f = f_tau_elements(&t);
        for i in 0..f.len() {
            for j in 0..f.len() {
                let lhs = f[i].mul(&f[j], &sig);
                let rhs = f[j].mul(&f[i], &sig).scale(&CoeffPoly::q_pow(2 * sigma.get(i, j) as i32));
                if lhs != rhs {
                    return Outcome::fail("exact".into(), format!("generators X{}, X{}", i + 1, j + 1));
                }
            }
        }
        Outcome::pass(format!("{} generator pairs; exact", f.len() * f.len()))
    }));
    let lambda = tau.underlying();
    out.push(check("homomorphism/central".into(), "central-element", move || {
        let sig = Signature::chekhov_fock(&lambda);
        let h = central_h(&lambda);
        for i in 0..sig.len() {
            let g = Element::generator(sig.len(), i);
            if h.mul(&g, &sig) != g.mul(&h, &sig) {
                return Outcome::fail("exact".into(), format!("H does not commute with X{}", i + 1));
            }
        }
        Outcome::pass("exact")
    }));
    let t = tau.clone();
    out.push(check("homomorphism/quotient".into(), "central-element", move || {
        let sig = Signature::kashaev(t.num_triangles());
        let h = central_h(&t.underlying());
        let (_, c) = h.as_term().expect("H is a single term");
        let image = f_tau_elements(&t).iter().fold(Element::scalar(sig.len(), c.clone()), |acc, x| acc.mul(x, &sig));
        let m = t.complexity() as i32;
        if image == Element::scalar(sig.len(), CoeffPoly::q_pow(2 * m)) {
            Outcome::pass(format!("F(H) = q^{}", 2 * m))
        } else {
            Outcome::fail("exact".into(), format!("F(H) = {}", image.display(&sig)))
        }
    }));
    let lambda = tau.underlying();
    let policy = cfg.policy.clone();
    if let Some(edge) = (0..lambda.num_edges()).find(|&e| !lambda.is_self_folded(e)) {
        out.push(check("homomorphism/flip-invariance".into(), "central-element", move || {
            let after = lambda.flip(edge).unwrap();
            let image = match delta_hat(&lambda, edge).and_then(|m| m.apply(&Expr::from_element(&central_h(&after)))) {
                Ok(e) => e,
                Err(e) => return Outcome::from_error(e),
            };
            let v = expr_equal(
                &image,
                &Expr::from_element(&central_h(&lambda)),
                &Signature::chekhov_fock(&lambda),
                &policy,
            );
            Outcome::from_verdict(&v, format!("flip at X{}", edge + 1))
        }));
    }
}

fn q1_consistency(cfg: &SuiteConfig, out: &mut Vec<Check>) {
    let lambda = cfg.surface.ideal.clone();
    for mv in ideal_moves(&lambda) {
        let id = format!("q1-consistency/ideal/{mv}");
        let seed = stream_seed(cfg.policy.seed, &id);
        let lambda = lambda.clone();
        out.push(check(id, "q1-specialization", move || {
            let map = match ideal_move_map(&lambda, &mv) {
                Ok(m) => m,
                Err(e) => return Outcome::from_error(e),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut worst: f64 = 0.0;
            for sample in 0..SAMPLES_DIAGRAM {
                let x = ShearVector::random(lambda.num_edges(), 1.5, &mut rng);
                let want = shear_change(&x, &lambda, &mv).unwrap().exp();
                let point = x.exp();
                let got: Vec<f64> = map.images().iter().map(|e| eval_q1(e, &point).unwrap_or(f64::NAN)).collect();
                let err = worst_relative(&got, &want);
                if err.is_nan() || err > 1e-10 {
                    return Outcome::fail(format!("q1(seed={seed},sample={sample});residual={err:e}"), "");
                }
                worst = worst.max(err);
            }
            Outcome::pass(format!("{SAMPLES_DIAGRAM} points; worst {worst:.1e}"))
        }));
    }
    for (state, tau) in decorated_states(&cfg.surface.decorated) {
        for mv in decorated_moves(&tau) {
            let id = format!("q1-consistency/decorated/{state}/{mv}");
            let seed = stream_seed(cfg.policy.seed, &id);
            let tau = tau.clone();
            out.push(check(id, "q1-specialization", move || {
                let map = match decorated_move_map(&tau, &mv, &KashaevParams::compatible()) {
                    Ok(m) => m,
                    Err(e) => return Outcome::from_error(e),
                };
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut worst: f64 = 0.0;
                for sample in 0..SAMPLES_DIAGRAM {
                    let k = KashaevVector::random(tau.num_triangles(), 1.5, &mut rng);
                    let point: Vec<f64> = k.log().iter().map(|v| v.exp()).collect();
                    let want: Vec<f64> = kashaev_change(&k, &tau, &mv).unwrap().log().iter().map(|v| v.exp()).collect();
                    let got: Vec<f64> = map.images().iter().map(|e| eval_q1(e, &point).unwrap_or(f64::NAN)).collect();
                    let err = worst_relative(&got, &want);
                    if err.is_nan() || err > 1e-10 {
                        return Outcome::fail(format!("q1(seed={seed},sample={sample});residual={err:e}"), "");
                    }
                    worst = worst.max(err);
                }
                Outcome::pass(format!("{SAMPLES_DIAGRAM} points; worst {worst:.1e}"))
            }));
        }
    }
}

/// Shortest paths between a decorated triangulation and the result of two
/// mark rotations.
fn path_checks(cfg: &SuiteConfig, out: &mut Vec<Check>) {
    let tau = cfg.surface.decorated.clone();
    let n = tau.num_triangles();
    for i in 0..n {
        for j in i + 1..n {
            let id = format!("path-independence/rot{}-rot{}", i + 1, j + 1);
            let (tau, policy, depth) = (tau.clone(), cfg.policy.clone(), cfg.depth);
            let params = cfg.params[0].clone();
            out.push(check(id, "path-independence", move || {
                let target = tau.rotate_mark(i).and_then(|t| t.rotate_mark(j)).unwrap();
                let r = match path_independence(
                    &StartState::Decorated(tau.clone()),
                    &StartState::Decorated(target),
                    depth,
                    8,
                    &params,
                    &policy,
                ) {
                    Ok(r) => r,
                    Err(e) => return Outcome::from_error(e),
                };
                let agree = r.verdicts.iter().filter(|v| v.is_equal()).count() + 1;
                let detail = format!("{} paths; {agree} agree with the first", r.paths.len());
                match r.verdicts.iter().find(|v| !v.is_equal()) {
                    None if r.paths.len() >= 2 => Outcome::pass(detail),
                    None => Outcome::pass(format!("{detail}; nothing to compare")),
                    Some(v) => Outcome::from_verdict(v, detail),
                }
            }));
        }
    }
}

/// Every check selected by `cfg`, unsorted and possibly with repeated ids.
pub fn build_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for suite in &cfg.suites {
        match suite {
            Suite::ClassicalFlip => classical_flip(cfg, &mut out),
            Suite::ClassicalDiagram => classical_diagram(cfg, &mut out),
            Suite::ExactSequence => exact_sequence(cfg, &mut out),
            Suite::Poisson => poisson(cfg, &mut out),
            Suite::CfRelations => cf_relations(cfg, |_| true, &mut out),
            Suite::PentagonQuantum => cf_relations(cfg, |i| i.relation == "pentagon-quantum", &mut out),
            Suite::KashaevRelations => kashaev_relations(cfg, |_| true, &mut out),
            Suite::PentagonOmega => kashaev_relations(cfg, |i| i.relation == "pentagon-omega", &mut out),
            Suite::Compat => compat(cfg, &mut out),
            Suite::Homomorphism => homomorphism(cfg, &mut out),
            Suite::Q1Consistency => q1_consistency(cfg, &mut out),
            Suite::PathIndependence => path_checks(cfg, &mut out),
        }
    }
    out
}
