use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::eval::{eval_q1, to_element, MatrixEvaluator};
use super::{Expr, RationalError};
use crate::qtorus::{compact_rep, Signature};

/// Which evaluations [`expr_equal`] performs.
#[derive(Clone, Debug, PartialEq)]
pub struct EqualityPolicy {
    /// Random positive points at `q = 1`, log-uniform in `[0.1, 10]`.
    pub q1_points: usize,
    /// Odd orders `N` of the root-of-unity representations.
    pub rou_levels: Vec<usize>,
    /// Relative error above which two values are declared different.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for EqualityPolicy {
    fn default() -> Self {
        Self { q1_points: 8, rou_levels: vec![3, 5], tolerance: 1e-9, seed: 0 }
    }
}

impl EqualityPolicy {
    pub fn validate(&self) -> Result<(), RationalError> {
        if self.q1_points == 0 && self.rou_levels.is_empty() {
            return Err(RationalError::InvalidPolicy("no checks enabled".into()));
        }
        if let Some(&n) = self.rou_levels.iter().find(|&&n| n < 3 || n % 2 == 0) {
            return Err(RationalError::InvalidPolicy(format!("order {n} is not odd and at least 3")));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(RationalError::InvalidPolicy("tolerance must be positive".into()));
        }
        Ok(())
    }

    fn rou_seed(&self, order: usize) -> u64 {
        self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(order as u64)
    }
}

/// Where two expressions were told apart.
#[derive(Clone, Debug, PartialEq)]
pub enum WitnessContext {
    /// Normal forms differ in this many monomials; no numeric context did.
    Exact { differing_terms: usize },
    /// Sample `sample` of the `q = 1` stream seeded with `seed`.
    Q1 { seed: u64, sample: usize, point: Vec<f64> },
    /// The order-`N` representation drawn from `seed` on the generators of the
    /// failing item.
    RootOfUnity { order: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub context: WitnessContext,
    /// Relative residual in that context.
    pub residual: f64,
    /// Index of the offending pair when several were compared at once.
    pub item: usize,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.context {
            WitnessContext::Exact { differing_terms } => write!(f, "exact(differing_terms={differing_terms})")?,
            WitnessContext::Q1 { seed, sample, .. } => write!(f, "q1(seed={seed},sample={sample})")?,
            WitnessContext::RootOfUnity { order, seed } => write!(f, "rou(N={order},seed={seed})")?,
        }
        write!(f, ";item={};residual={:.3e}", self.item, self.residual)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Equal {
        /// Decided by comparing normal forms.
        exact: bool,
        checks: usize,
        skipped: usize,
    },
    Unequal(Witness),
    Inconclusive {
        skipped: usize,
        reason: String,
    },
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal { .. })
    }

    pub fn is_unequal(&self) -> bool {
        matches!(self, Verdict::Unequal(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Unequal(w) => Some(w),
            _ => None,
        }
    }
}

fn relative(diff: f64, a: f64, b: f64) -> f64 {
    let scale = a.max(b);
    if diff == 0.0 {
        0.0
    } else if scale == 0.0 || !scale.is_finite() {
        f64::INFINITY
    } else {
        diff / scale
    }
}

/// Decides `a = b` in the fraction algebra of `sig`.
pub fn expr_equal(a: &Expr, b: &Expr, sig: &Signature, policy: &EqualityPolicy) -> Verdict {
    pairs_equal(&[(a.clone(), b.clone())], sig, policy)
}

/// Decides every pair at once, sharing evaluation contexts and work on common
/// subexpressions. Unequal as soon as one pair differs.
pub fn pairs_equal(pairs: &[(Expr, Expr)], sig: &Signature, policy: &EqualityPolicy) -> Verdict {
    if let Err(e) = policy.validate() {
        return Verdict::Inconclusive { skipped: 0, reason: e.to_string() };
    }

    // Exact layer.
    let mut unknown = Vec::new();
    let mut differing = Vec::new();
    for (idx, (a, b)) in pairs.iter().enumerate() {
        match (to_element(a, sig), to_element(b, sig)) {
            (Some(x), Some(y)) if x == y => {}
            (Some(x), Some(y)) => differing.push((idx, x.sub(&y).num_terms())),
            _ => unknown.push(idx),
        }
    }
    if !differing.is_empty() {
        let subset: Vec<usize> = differing.iter().map(|d| d.0).collect();
        return match numeric(pairs, &subset, sig, policy) {
            Verdict::Unequal(w) => Verdict::Unequal(w),
            _ => Verdict::Unequal(Witness {
                context: WitnessContext::Exact { differing_terms: differing[0].1 },
                residual: f64::INFINITY,
                item: differing[0].0,
            }),
        };
    }
    if unknown.is_empty() {
        return Verdict::Equal { exact: true, checks: pairs.len(), skipped: 0 };
    }
    numeric(pairs, &unknown, sig, policy)
}

fn numeric(pairs: &[(Expr, Expr)], subset: &[usize], sig: &Signature, policy: &EqualityPolicy) -> Verdict {
    let mut checks = 0;
    let mut skipped = 0;

    let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
    let (lo, hi) = (0.1f64.ln(), 10.0f64.ln());
    'points: for sample in 0..policy.q1_points {
        let point: Vec<f64> = (0..sig.len()).map(|_| rng.gen_range(lo..hi).exp()).collect();
        let mut worst: Option<(usize, f64)> = None;
        for &idx in subset {
            let (a, b) = &pairs[idx];
            let (x, y) = match (eval_q1(a, &point), eval_q1(b, &point)) {
                (Ok(x), Ok(y)) => (x, y),
                _ => {
                    skipped += 1;
                    continue 'points;
                }
            };
            let r = relative((x - y).abs(), x.abs(), y.abs());
            if r > policy.tolerance && worst.is_none_or(|w| r > w.1) {
                worst = Some((idx, r));
            }
        }
        checks += 1;
        if let Some((item, residual)) = worst {
            return Verdict::Unequal(Witness {
                context: WitnessContext::Q1 { seed: policy.seed, sample, point },
                residual,
                item,
            });
        }
    }

    // Pairs are grouped by the generators they involve, and each group gets
    // its own representation, which stays small when the pairs are local.
    let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for &idx in subset {
        let (a, b) = &pairs[idx];
        let gens: BTreeSet<usize> = a.generators().into_iter().chain(b.generators()).collect();
        groups.entry(gens.into_iter().collect()).or_default().push(idx);
    }
    let mut rou_checks = 0;
    'levels: for &order in &policy.rou_levels {
        let seed = policy.rou_seed(order);
        let mut worst: Option<(usize, f64)> = None;
        for (gens, members) in &groups {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let Ok(rep) = compact_rep(sig, gens, order, &mut rng) else {
                skipped += 1;
                continue 'levels;
            };
            let mut ev = MatrixEvaluator::new(&rep);
            for &idx in members {
                let (a, b) = &pairs[idx];
                let (x, y) = match (ev.eval(a), ev.eval(b)) {
                    (Ok(x), Ok(y)) => (x, y),
                    _ => {
                        skipped += 1;
                        continue 'levels;
                    }
                };
                let r = relative((&x - &y).norm(), x.norm(), y.norm());
                if r > policy.tolerance && worst.is_none_or(|w| r > w.1) {
                    worst = Some((idx, r));
                }
            }
        }
        checks += 1;
        rou_checks += 1;
        if let Some((item, residual)) = worst {
            return Verdict::Unequal(Witness { context: WitnessContext::RootOfUnity { order, seed }, residual, item });
        }
    }
    if rou_checks == 0 {
        return Verdict::Inconclusive { skipped, reason: "no root-of-unity representation could be evaluated".into() };
    }
    Verdict::Equal { exact: false, checks, skipped }
}
