use super::{kashaev_change, shear_flip, shear_of_kashaev, ClassicalError, KashaevVector, ShearVector};
use crate::surface::{DecoratedTriangulation, Move};

/// The two ways round the square relating Kashaev and shear changes.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagramVerdict {
    /// Change Kashaev coordinates first, then project.
    pub via_kashaev: ShearVector,
    /// Project first, then change shear coordinates.
    pub via_shear: ShearVector,
    /// Largest relative difference between the two.
    pub error: f64,
    pub tolerance: f64,
}

impl DiagramVerdict {
    pub fn holds(&self) -> bool {
        self.error <= self.tolerance
    }
}

/// Compares `f₂M(change(k))` with `shear_change(f₂M(k))` for one move.
///
/// Mark rotations and renumberings leave the underlying triangulation and its
/// edge labels alone, so their shear change is the identity. A Kashaev
/// exchange of `τ_i, τ_j` induces the diagonal exchange at their common edge.
pub fn diagram_check_classical(
    tau: &DecoratedTriangulation,
    mv: &Move,
    k: &KashaevVector,
    tolerance: f64,
) -> Result<DiagramVerdict, ClassicalError> {
    let next = tau.apply(mv)?;
    let via_kashaev = shear_of_kashaev(&kashaev_change(k, tau, mv)?, &next);
    let x = shear_of_kashaev(k, tau);
    let via_shear = match mv {
        Move::KashaevExchange(i, _) => shear_flip(&x, &tau.underlying(), tau.kashaev_sides(*i)[0])?,
        _ => x,
    };
    let error = via_kashaev.relative_distance(&via_shear);
    Ok(DiagramVerdict { via_kashaev, via_shear, error, tolerance })
}

/// Carries Kashaev coordinates along a move sequence.
pub fn transport(
    k: &KashaevVector,
    tau: &DecoratedTriangulation,
    moves: &[Move],
) -> Result<(KashaevVector, DecoratedTriangulation), ClassicalError> {
    let mut cur = (k.clone(), tau.clone());
    for mv in moves {
        let next_k = kashaev_change(&cur.0, &cur.1, mv)?;
        cur = (next_k, cur.1.apply(mv)?);
    }
    Ok(cur)
}
