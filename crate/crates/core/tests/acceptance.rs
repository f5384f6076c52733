//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use teich_core::classical::{
    diagram_check_classical, kashaev_change, poisson_check, poisson_constant, shear_change, shear_flip,
    verify_exact_sequence, KashaevVector, ShearVector,
};
use teich_core::qtorus::{matrix_rep, monomial_mul, root_q, CoeffPoly, Element, Monomial, Naming, Signature};
use teich_core::quantum_maps::{
    central_h, cf_relation_instances, check_diagram, check_relation, decorated_move_map, delta_hat, f_tau,
    f_tau_elements, ideal_move_map, kashaev_relation_instances, path_independence, KashaevParams, RelationInstance,
    StartState,
};
use teich_core::rational::{eval_q1, expr_equal, to_element, EqualityPolicy, Expr, Verdict};
use teich_core::surface::{
    builtin, builtin_surfaces, flip_case_instances, DecoratedTriangulation, IdealTriangulation, Move, Permutation,
};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

const PENTAGON_SURFACES: [&str; 2] = ["sphere-4", "torus-2"];

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// The bundled decorated triangulation and every state one mark rotation
/// away, so that each surface offers some exchange.
fn decorated_states(tau: &DecoratedTriangulation) -> Vec<DecoratedTriangulation> {
    let mut out = vec![tau.clone()];
    out.extend((0..tau.num_triangles()).map(|t| tau.rotate_mark(t).unwrap()));
    out
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
    out.push(Move::Reindex(Permutation::new((1..n).chain([0]).collect()).unwrap()));
    out
}

fn ideal_moves(lambda: &IdealTriangulation) -> Vec<Move> {
    let n = lambda.num_edges();
    let mut out: Vec<Move> = (0..n).filter(|&e| !lambda.is_self_folded(e)).map(Move::DiagonalExchange).collect();
    out.push(Move::Reindex(Permutation::new((1..n).chain([0]).collect()).unwrap()));
    out
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut count = 0;
    for name in PENTAGON_SURFACES {
        let s = builtin(name).unwrap();
        let mut instances: Vec<RelationInstance> = cf_relation_instances(&s.ideal, &mut rng);
        instances.extend(kashaev_relation_instances(&s.decorated, &mut rng));
        for inst in &instances {
            let agree = match &inst.start {
                StartState::Ideal(t) => t.apply_all(&inst.lhs).unwrap() == t.apply_all(&inst.rhs).unwrap(),
                // Edges carry no labels in a decorated triangulation.
                StartState::Decorated(t) => {
                    t.apply_all(&inst.lhs).unwrap().same_decoration(&t.apply_all(&inst.rhs).unwrap())
                }
            };
            ensure(agree, || format!("{name} {}: {}", inst.relation, inst.label()))?;
            count += 1;
        }
        for rel in [
            "flip-involution",
            "exchange-squared",
            "rotation-cubed",
            "distant-flips-commute",
            "pentagon-quantum",
            "pentagon-omega",
        ] {
            ensure(instances.iter().any(|i| i.relation == rel), || format!("{name}: no {rel} instance"))?;
        }
    }
    Ok(format!("{count} labeled relation instances"))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    let cases = flip_case_instances();
    for c in &cases {
        let lambda = &c.triangulation;
        let flipped = lambda.flip(c.edge).unwrap();
        for _ in 0..100 {
            let x = ShearVector::random(lambda.num_edges(), 2.0, &mut rng);
            let once = shear_flip(&x, lambda, c.edge).unwrap();
            let back = shear_flip(&once, &flipped, c.edge).unwrap();
            let err = back.relative_distance(&x);
            worst = worst.max(err);
            ensure(err <= 1e-12, || format!("case {} on {}: error {err:e}", c.case, c.surface))?;
        }
    }
    Ok(format!("{} cases x 100 vectors, worst {worst:.1e}", cases.len()))
}

fn criterion_3() -> Outcome {
    for s in builtin_surfaces() {
        let r = verify_exact_sequence(&s.decorated);
        let m = s.decorated.complexity();
        ensure(r.holds() && r.f2_rank == 3 * m - 1 && r.f2_kernel_dim == r.homology_dim, || {
            format!("{}: {r:?}", s.name)
        })?;
    }
    Ok("all bundled surfaces".into())
}

fn criterion_4() -> Outcome {
    let c = poisson_constant().ok_or("no constant fits the once-punctured torus")?;
    for s in builtin_surfaces() {
        let r = poisson_check(&s.decorated);
        ensure(r.holds(), || format!("{}: pushforward is not {c} sigma", s.name))?;
    }
    Ok(format!("c = {c}"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut count, mut worst) = (0, 0.0f64);
    for s in builtin_surfaces() {
        for tau in decorated_states(&s.decorated) {
            for mv in decorated_moves(&tau) {
                for _ in 0..50 {
                    let k = KashaevVector::random(tau.num_triangles(), 1.5, &mut rng);
                    let v = diagram_check_classical(&tau, &mv, &k, 1e-10).unwrap();
                    worst = worst.max(v.error);
                    ensure(v.holds(), || format!("{} {mv}: error {:e}", s.name, v.error))?;
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} moves x 50 vectors, worst {worst:.1e}"))
}

/// Normal-orders a word of signed generator letters by adjacent swaps,
/// accumulating the q-power of each swap.
fn brute_force_product(a: &Monomial, b: &Monomial, sig: &Signature) -> (i64, Monomial) {
    let mut word: Vec<(usize, i64)> = Vec::new();
    for m in [a, b] {
        for (g, &e) in m.0.iter().enumerate() {
            let sign = e.signum() as i64;
            word.extend(std::iter::repeat_n((g, sign), e.unsigned_abs() as usize));
        }
    }
    let mut power = 0;
    for end in (1..word.len()).rev() {
        for p in 0..end {
            let ((i, s), (j, t)) = (word[p], word[p + 1]);
            if i > j {
                // G_i^s G_j^t = q^{2 s t eps_ij} G_j^t G_i^s
                power += 2 * s * t * sig.eps(i, j);
                word.swap(p, p + 1);
            }
        }
    }
    let mut exps = vec![0; sig.len()];
    for (g, s) in word {
        exps[g] += s as i32;
    }
    (power, Monomial(exps))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for trial in 0..500 {
        let n = rng.gen_range(2..=6);
        let mut eps = vec![vec![0i64; n]; n];
        for (i, j) in (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))) {
            let e = rng.gen_range(-2..=2);
            (eps[i][j], eps[j][i]) = (e, -e);
        }
        let sig = Signature::new(eps, Naming::Plain).unwrap();
        let mut mono = || Monomial((0..n).map(|_| rng.gen_range(-3..=3)).collect());
        let (a, b) = (mono(), mono());
        let got = monomial_mul(&a, &b, &sig);
        let want = brute_force_product(&a, &b, &sig);
        ensure(got == want, || format!("pair {trial}: {got:?} vs {want:?}"))?;
    }
    Ok("500 random pairs".into())
}

fn criterion_7() -> Outcome {
    let mut sigs: Vec<(String, Signature)> = builtin_surfaces()
        .into_iter()
        .map(|s| (format!("{} edges", s.name), Signature::chekhov_fock(&s.ideal)))
        .collect();
    sigs.push(("kashaev(2)".into(), Signature::kashaev(2)));
    sigs.push(("kashaev(4)".into(), Signature::kashaev(4)));
    let mut worst: f64 = 0.0;
    for (name, sig) in &sigs {
        for order in [3, 5] {
            let gens = matrix_rep(sig, order).map_err(|e| format!("{name}: {e}"))?;
            let q = root_q(order);
            for i in 0..gens.len() {
                for j in 0..gens.len() {
                    let lhs = gens[i].mul(&gens[j]);
                    let rhs = gens[j].mul(&gens[i]).scale(q.powi(2 * sig.eps(i, j) as i32));
                    let r = lhs.distance(&rhs);
                    worst = worst.max(r);
                    ensure(r < 1e-12, || format!("{name} N={order} ({i},{j}): {r:e}"))?;
                }
            }
        }
    }
    Ok(format!("{} signatures, worst {worst:.1e}", sigs.len()))
}

fn record(v: &Verdict, what: impl FnOnce() -> String) -> Result<(), String> {
    match v {
        Verdict::Equal { .. } => Ok(()),
        other => Err(format!("{}: {other:?}", what())),
    }
}

fn criterion_8(policy: &EqualityPolicy) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let generic = KashaevParams::q_powers(1, -1);
    let mut count = 0;
    for name in PENTAGON_SURFACES {
        let s = builtin(name).unwrap();
        let mut instances = cf_relation_instances(&s.ideal, &mut rng);
        instances.extend(kashaev_relation_instances(&s.decorated, &mut rng));
        for inst in &instances {
            for params in [&generic, &KashaevParams::compatible()] {
                let out = check_relation(inst, params, policy).map_err(|e| e.to_string())?;
                ensure(out.endpoints_agree, || format!("{name} {}: endpoints differ", inst.relation))?;
                record(&out.verdict, || format!("{name} {} {} ({params})", inst.relation, inst.label()))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} relation checks"))
}

fn criterion_9(policy: &EqualityPolicy) -> Outcome {
    let pairs = [("sphere-4", 0, 1), ("sphere-4", 2, 3), ("torus-2", 0, 2), ("torus-2", 1, 3)];
    let params = KashaevParams::compatible();
    for (name, i, j) in pairs {
        let tau = builtin(name).unwrap().decorated;
        let target = tau.rotate_mark(i).unwrap().rotate_mark(j).unwrap();
        let r = path_independence(&StartState::Decorated(tau), &StartState::Decorated(target), 4, 8, &params, policy)
            .map_err(|e| e.to_string())?;
        ensure(r.paths.len() >= 2, || format!("{name} ({i},{j}): only {} path", r.paths.len()))?;
        for v in &r.verdicts {
            record(v, || format!("{name} ({i},{j})"))?;
        }
    }
    Ok(format!("{} pairs", pairs.len()))
}

fn criterion_10(policy: &EqualityPolicy) -> Outcome {
    let wrong = [("a=1,b=q^3", 0, 3), ("a=q^-2,b=q", -2, 1), ("a=1,b=1", 0, 0)];
    let mut caught = [false; 3];
    let mut count = 0;
    for s in builtin_surfaces() {
        for tau in decorated_states(&s.decorated) {
            for mv in decorated_moves(&tau) {
                let good = check_diagram(&tau, &mv, &KashaevParams::compatible(), policy).map_err(|e| e.to_string())?;
                for (g, v) in good.verdicts.iter().enumerate() {
                    record(v, || format!("{} {mv} generator {g}", s.name))?;
                }
                count += 1;
                for (slot, &(_, ka, kb)) in wrong.iter().enumerate() {
                    if caught[slot] {
                        continue;
                    }
                    let bad = check_diagram(&tau, &mv, &KashaevParams::q_powers(ka, kb), policy)
                        .map_err(|e| e.to_string())?;
                    caught[slot] = bad.verdicts.iter().any(|v| v.is_unequal() && v.witness().is_some());
                }
            }
        }
    }
    for (slot, (label, _, _)) in wrong.iter().enumerate() {
        ensure(caught[slot], || format!("{label} never produced a witness"))?;
    }
    Ok(format!("{count} moves commute at a=q^-2,b=q^3; each wrong pair has a witness"))
}

fn criterion_11(policy: &EqualityPolicy) -> Outcome {
    for s in builtin_surfaces() {
        let tau = &s.decorated;
        let lambda = tau.underlying();
        let ksig = Signature::kashaev(tau.num_triangles());
        let sigma = lambda.skew_form();
        let f = f_tau_elements(tau);
        for i in 0..f.len() {
            for j in 0..f.len() {
                let lhs = f[i].mul(&f[j], &ksig);
                let rhs = f[j].mul(&f[i], &ksig).scale(&CoeffPoly::q_pow(2 * sigma.get(i, j) as i32));
                ensure(lhs == rhs, || format!("{}: generators {i},{j}", s.name))?;
            }
        }
        let csig = Signature::chekhov_fock(&lambda);
        let h = central_h(&lambda);
        for i in 0..csig.len() {
            let g = Element::generator(csig.len(), i);
            ensure(h.mul(&g, &csig) == g.mul(&h, &csig), || format!("{}: H not central at {i}", s.name))?;
        }
        let image = f_tau(tau).apply(&Expr::from_element(&h)).map_err(|e| e.to_string())?;
        let image = to_element(&image, &ksig).ok_or("F(H) is not a Laurent polynomial")?;
        let m = tau.complexity() as i32;
        ensure(image == Element::scalar(ksig.len(), CoeffPoly::q_pow(2 * m)), || {
            format!("{}: F(H) = {}", s.name, image.display(&ksig))
        })?;
    }
    for name in PENTAGON_SURFACES {
        let lambda = builtin(name).unwrap().ideal;
        let after = lambda.flip(0).unwrap();
        let image = delta_hat(&lambda, 0)
            .and_then(|m| m.apply(&Expr::from_element(&central_h(&after))))
            .map_err(|e| e.to_string())?;
        let v = expr_equal(&image, &Expr::from_element(&central_h(&lambda)), &Signature::chekhov_fock(&lambda), policy);
        record(&v, || format!("{name}: H not invariant under a flip"))?;
    }
    Ok("exact on all bundled surfaces; H invariant under a flip".into())
}

fn relative_error(got: &[f64], want: &[f64]) -> f64 {
    got.iter().zip(want).map(|(g, w)| ((g - w) / w).abs()).fold(0.0, f64::max)
}

fn criterion_12() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let params = KashaevParams::compatible();
    let (mut count, mut worst) = (0, 0.0f64);
    for s in builtin_surfaces() {
        let lambda = &s.ideal;
        for mv in ideal_moves(lambda) {
            let map = ideal_move_map(lambda, &mv).map_err(|e| e.to_string())?;
            for _ in 0..50 {
                let x = ShearVector::random(lambda.num_edges(), 1.5, &mut rng);
                let point = x.exp();
                let want = shear_change(&x, lambda, &mv).unwrap().exp();
                let got: Vec<f64> = map.images().iter().map(|e| eval_q1(e, &point).unwrap()).collect();
                let err = relative_error(&got, &want);
                worst = worst.max(err);
                ensure(err <= 1e-10, || format!("{} {mv}: {err:e}", s.name))?;
            }
            count += 1;
        }
        for tau in decorated_states(&s.decorated) {
            for mv in decorated_moves(&tau) {
                let map = decorated_move_map(&tau, &mv, &params).map_err(|e| e.to_string())?;
                for _ in 0..50 {
                    let k = KashaevVector::random(tau.num_triangles(), 1.5, &mut rng);
                    let point: Vec<f64> = k.log().iter().map(|v| v.exp()).collect();
                    let want: Vec<f64> = kashaev_change(&k, &tau, &mv).unwrap().log().iter().map(|v| v.exp()).collect();
                    let got: Vec<f64> = map.images().iter().map(|e| eval_q1(e, &point).unwrap()).collect();
                    let err = relative_error(&got, &want);
                    worst = worst.max(err);
                    ensure(err <= 1e-10, || format!("{} {mv}: {err:e}", s.name))?;
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} maps x 50 points, worst {worst:.1e}"))
}

fn main() -> ExitCode {
    let policy = EqualityPolicy::default();
    let criteria: Vec<Criterion> = vec![
        ("combinatorial relations", Box::new(criterion_1)),
        ("classical flip involution", Box::new(criterion_2)),
        ("exact sequence", Box::new(criterion_3)),
        ("Poisson pushforward", Box::new(criterion_4)),
        ("classical compatibility", Box::new(criterion_5)),
        ("quantum torus normal form", Box::new(criterion_6)),
        ("matrix representation residuals", Box::new(criterion_7)),
        ("quantum relation suites", Box::new(|| criterion_8(&policy))),
        ("path independence", Box::new(|| criterion_9(&policy))),
        ("compatibility exactly at a=q^-2, b=q^3", Box::new(|| criterion_10(&policy))),
        ("homomorphism and central element", Box::new(|| criterion_11(&policy))),
        ("q=1 consistency", Box::new(criterion_12)),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.1}s)", n + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
