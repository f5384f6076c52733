//! The homomorphism `F_τ` from the Chekhov–Fock algebra of the underlying
//! triangulation into the Kashaev algebra, and the central element `H`.

use super::{decorated_move_map, delta_hat, GeneratorMap, KashaevParams, MapError};
use crate::qtorus::{side_elements, CoeffPoly, Element, Monomial, Signature};
use crate::rational::{expr_equal, EqualityPolicy, Expr, Verdict};
use crate::surface::{DecoratedTriangulation, IdealTriangulation, Move, SkewForm};

/// `F_τ(X_i) = q^{δ_μν σ_ts} H^s_μ H^t_ν` for each edge, as exact elements.
pub fn f_tau_elements(tau: &DecoratedTriangulation) -> Vec<Element> {
    let sig = Signature::kashaev(tau.num_triangles());
    let sides = SkewForm::side_form();
    (0..tau.num_edges())
        .map(|e| {
            let [a, b] = tau.sides_of_edge(e);
            let hs = &side_elements(&sig, a.triangle)[a.side];
            let ht = &side_elements(&sig, b.triangle)[b.side];
            let prod = hs.mul(ht, &sig);
            if a.triangle == b.triangle {
                prod.scale(&CoeffPoly::q_pow(sides.get(b.side, a.side) as i32))
            } else {
                prod
            }
        })
        .collect()
}

pub fn f_tau(tau: &DecoratedTriangulation) -> GeneratorMap {
    GeneratorMap::new(
        Signature::chekhov_fock(&tau.underlying()),
        Signature::kashaev(tau.num_triangles()),
        f_tau_elements(tau).iter().map(Expr::from_element).collect(),
        Vec::new(),
    )
}

/// `H = q^{-Σ_{i<j} σ_ij} X_1 X_2 ⋯ X_n`.
pub fn central_h(lambda: &IdealTriangulation) -> Element {
    let sigma = lambda.skew_form();
    let n = sigma.dim();
    let shift: i64 = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| sigma.get(i, j)).sum();
    // The ascending product is already in normal order.
    Element::term(n, CoeffPoly::q_pow(-shift as i32), Monomial(vec![1; n]))
}

/// Per-generator comparison of the two ways round the compatibility square
/// for one move.
#[derive(Clone, Debug)]
pub struct CompatReport {
    pub mv: Move,
    pub params: KashaevParams,
    /// One verdict per Chekhov–Fock generator of the new triangulation.
    pub verdicts: Vec<Verdict>,
}

impl CompatReport {
    pub fn passes(&self) -> bool {
        self.verdicts.iter().all(Verdict::is_equal)
    }

    /// Generators whose images differ, with their witnesses.
    pub fn failures(&self) -> impl Iterator<Item = (usize, &Verdict)> {
        self.verdicts.iter().enumerate().filter(|(_, v)| !v.is_equal())
    }
}

/// Compares `F_τ ∘ (shear map)` with `(Kashaev map) ∘ F_τ'` on every
/// generator. The shear map is the identity for mark rotations and
/// renumberings and the flip of the common edge for an exchange.
pub fn check_diagram(
    tau: &DecoratedTriangulation,
    mv: &Move,
    params: &KashaevParams,
    policy: &EqualityPolicy,
) -> Result<CompatReport, MapError> {
    let next = tau.apply(mv)?;
    let lambda = tau.underlying();
    let shear = match mv {
        Move::KashaevExchange(i, _) => delta_hat(&lambda, tau.kashaev_sides(*i)[0])?,
        _ => GeneratorMap::identity(&Signature::chekhov_fock(&lambda)),
    };
    let via_shear = GeneratorMap::compose(&f_tau(tau), &shear)?;
    let via_kashaev = GeneratorMap::compose(&decorated_move_map(tau, mv, params)?, &f_tau(&next))?;
    let sig = via_shear.target().clone();
    let verdicts = (0..via_shear.source().len())
        .map(|g| expr_equal(via_shear.image(g), via_kashaev.image(g), &sig, policy))
        .collect();
    Ok(CompatReport { mv: mv.clone(), params: params.clone(), verdicts })
}
