//! Root-of-unity representations built from clock and shift matrices.
//!
//! Every matrix produced here is a generalized permutation matrix, so it is
//! stored as a permutation plus one phase per column.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use super::{QTorusError, Signature};
use crate::linalg::{skew_normal_form, IntMatrix};

/// Dense evaluation is capped at this dimension.
pub const MAX_DENSE_DIM: usize = 729;
/// Sparse construction is capped at this dimension.
pub const MAX_MONOMIAL_DIM: usize = 1 << 21;

/// `M e_j = phase[j] · e_{perm[j]}`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialMatrix {
    perm: Vec<usize>,
    phase: Vec<Complex64>,
}

impl MonomialMatrix {
    pub fn identity(dim: usize) -> Self {
        Self { perm: (0..dim).collect(), phase: vec![Complex64::new(1.0, 0.0); dim] }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn mul(&self, other: &MonomialMatrix) -> MonomialMatrix {
        let perm = other.perm.iter().map(|&p| self.perm[p]).collect();
        let phase = other.perm.iter().zip(&other.phase).map(|(&p, &ph)| ph * self.phase[p]).collect();
        MonomialMatrix { perm, phase }
    }

    pub fn scale(&self, c: Complex64) -> MonomialMatrix {
        MonomialMatrix { perm: self.perm.clone(), phase: self.phase.iter().map(|p| p * c).collect() }
    }

    pub fn inverse(&self) -> MonomialMatrix {
        let n = self.dim();
        let mut perm = vec![0; n];
        let mut phase = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            perm[self.perm[j]] = j;
            phase[self.perm[j]] = 1.0 / self.phase[j];
        }
        MonomialMatrix { perm, phase }
    }

    pub fn pow(&self, e: i64) -> MonomialMatrix {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = MonomialMatrix::identity(self.dim());
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for j in 0..n {
            m[(self.perm[j], j)] = self.phase[j];
        }
        m
    }

    /// An upper bound on the operator norm of `self - other`; exact when the
    /// two permutations agree.
    pub fn distance(&self, other: &MonomialMatrix) -> f64 {
        let n = self.dim();
        if self.perm == other.perm {
            return (0..n).map(|j| (self.phase[j] - other.phase[j]).norm()).fold(0.0, f64::max);
        }
        // ‖A‖₂ ≤ sqrt(‖A‖₁ ‖A‖∞).
        let mut col = vec![0.0f64; n];
        let mut row = vec![0.0f64; n];
        for j in 0..n {
            if self.perm[j] == other.perm[j] {
                let d = (self.phase[j] - other.phase[j]).norm();
                col[j] += d;
                row[self.perm[j]] += d;
            } else {
                col[j] += self.phase[j].norm() + other.phase[j].norm();
                row[self.perm[j]] += self.phase[j].norm();
                row[other.perm[j]] += other.phase[j].norm();
            }
        }
        let c = col.iter().copied().fold(0.0, f64::max);
        let r = row.iter().copied().fold(0.0, f64::max);
        (c * r).sqrt()
    }
}

fn check_order(order: usize) -> Result<(), QTorusError> {
    if order < 3 || order.is_multiple_of(2) {
        return Err(QTorusError::UnsupportedOrder(order));
    }
    Ok(())
}

/// `q = e^{iπ/N}`, so that `q² = e^{2πi/N}` is a primitive `N`-th root.
pub fn root_q(order: usize) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::PI / order as f64)
}

/// Clock (`factor` ↦ phase `ζ^{d·power}`) or shift (`d ↦ d + power`) on one
/// tensor factor of `(ℂ^N)^{⊗factors}`.
fn clock_shift(order: usize, factors: usize, factor: usize, clock: i64, shift: i64) -> MonomialMatrix {
    let dim = order.pow(factors as u32);
    let stride = order.pow(factor as u32);
    let zeta = root_q(order).powi(2);
    let mut perm = Vec::with_capacity(dim);
    let mut phase = Vec::with_capacity(dim);
    let n = order as i64;
    for idx in 0..dim {
        let d = ((idx / stride) % order) as i64;
        let nd = (d + shift).rem_euclid(n) as usize;
        perm.push(idx - (d as usize) * stride + nd * stride);
        phase.push(zeta.powi(((d * clock).rem_euclid(n)) as i32));
    }
    MonomialMatrix { perm, phase }
}

/// One clock/shift pair per generator on `(ℂ^N)^{⊗n}`:
/// `G_i = S_i · Π_{k>i} C_k^{eps_ik}`, so that `G_i G_j = ζ^{eps_ij} G_j G_i`
/// with `ζ = q²`.
pub fn matrix_rep(sig: &Signature, order: usize) -> Result<Vec<MonomialMatrix>, QTorusError> {
    check_order(order)?;
    let n = sig.len();
    let dim = (order as u128).pow(n as u32);
    if dim > MAX_MONOMIAL_DIM as u128 {
        return Err(QTorusError::TooLarge(dim.min(usize::MAX as u128) as usize));
    }
    Ok((0..n)
        .map(|i| {
            let mut g = clock_shift(order, n, i, 0, 1);
            for k in i + 1..n {
                let c = sig.eps(i, k);
                if c != 0 {
                    g = g.mul(&clock_shift(order, n, k, c, 0));
                }
            }
            g
        })
        .collect())
}

/// A small dense representation of the generators in `generators`, with a
/// random central character.
#[derive(Clone, Debug)]
pub struct CompactRep {
    pub order: usize,
    pub q: Complex64,
    pub generators: Vec<usize>,
    pub matrices: Vec<DMatrix<Complex64>>,
    pub inverses: Vec<DMatrix<Complex64>>,
}

impl CompactRep {
    pub fn dim(&self) -> usize {
        self.matrices.first().map_or(1, |m| m.nrows())
    }

    /// Position of an original generator index in this representation.
    pub fn slot(&self, generator: usize) -> Option<usize> {
        self.generators.iter().position(|&g| g == generator)
    }
}

/// Irreducible-size representation of the subalgebra generated by
/// `generators`.
///
/// The restricted form is brought to `P eps Pᵀ = ⊕ d_k J ⊕ 0`; each block
/// becomes a clock/shift pair `(C^{d_k}, S)` on one tensor factor and each
/// generator is the product of block generators prescribed by `P⁻¹`, times a
/// random positive scalar.
pub fn compact_rep<R: Rng>(
    sig: &Signature,
    generators: &[usize],
    order: usize,
    rng: &mut R,
) -> Result<CompactRep, QTorusError> {
    check_order(order)?;
    for &g in generators {
        if g >= sig.len() {
            return Err(QTorusError::NoSuchGenerator { index: g, count: sig.len() });
        }
    }
    let r = generators.len();
    let eps = IntMatrix::from_rows(sig.restrict(generators).eps_matrix());
    let nf = skew_normal_form(&eps);
    let factors = nf.blocks.len();
    let dim = (order as u128).pow(factors as u32);
    if dim > MAX_DENSE_DIM as u128 {
        return Err(QTorusError::TooLarge(dim.min(usize::MAX as u128) as usize));
    }
    let dim = dim as usize;
    let w: Vec<MonomialMatrix> = (0..r)
        .map(|row| {
            let b = row / 2;
            if b >= factors {
                MonomialMatrix::identity(dim)
            } else if row % 2 == 0 {
                clock_shift(order, factors, b, nf.blocks[b], 0)
            } else {
                clock_shift(order, factors, b, 0, 1)
            }
        })
        .collect();
    let mut matrices = Vec::with_capacity(r);
    let mut inverses = Vec::with_capacity(r);
    for i in 0..r {
        let mut g = MonomialMatrix::identity(dim);
        for (row, wr) in w.iter().enumerate() {
            let e = nf.q[(i, row)];
            if e != 0 {
                g = g.mul(&wr.pow(e));
            }
        }
        let lambda: f64 = rng.gen_range(-1.6f64..1.6).exp();
        let g = g.scale(Complex64::new(lambda, 0.0));
        inverses.push(g.inverse().to_dense());
        matrices.push(g.to_dense());
    }
    Ok(CompactRep { order, q: root_q(order), generators: generators.to_vec(), matrices, inverses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qtorus::Naming;
    use crate::surface::builtin;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn relation_residual(gens: &[MonomialMatrix], sig: &Signature, order: usize) -> f64 {
        let zeta = root_q(order).powi(2);
        let mut worst = 0.0f64;
        for i in 0..gens.len() {
            for j in 0..gens.len() {
                let lhs = gens[i].mul(&gens[j]);
                let rhs = gens[j].mul(&gens[i]).scale(zeta.powi(sig.eps(i, j) as i32));
                worst = worst.max(lhs.distance(&rhs));
            }
        }
        worst
    }

    #[test]
    fn clock_and_shift_pair_for_n_two() {
        let sig = Signature::new(vec![vec![0, 1], vec![-1, 0]], Naming::Plain).unwrap();
        let g = matrix_rep(&sig, 3).unwrap();
        assert_eq!(g[0].dim(), 9);
        assert!(relation_residual(&g, &sig, 3) < 1e-12);
        let u = g[0].to_dense();
        let v = g[1].to_dense();
        let zeta = root_q(3).powi(2);
        assert!((&u * &v - (&v * &u) * zeta).norm() < 1e-12);
    }

    #[test]
    fn commuting_pair_is_diagonalisable_and_commutes() {
        let sig = Signature::commutative(2);
        let g = matrix_rep(&sig, 5).unwrap();
        let (a, b) = (g[0].to_dense(), g[1].to_dense());
        assert!((&a * &b - &b * &a).norm() < 1e-12);
    }

    #[test]
    fn torus_chekhov_fock_rep_is_27_dimensional() {
        let sig = Signature::chekhov_fock(&builtin("torus-1").unwrap().ideal);
        let g = matrix_rep(&sig, 3).unwrap();
        assert_eq!(g[0].dim(), 27);
        assert!(relation_residual(&g, &sig, 3) < 1e-12);
    }

    #[test]
    fn even_or_small_orders_are_rejected() {
        let sig = Signature::commutative(1);
        assert_eq!(matrix_rep(&sig, 4).unwrap_err(), QTorusError::UnsupportedOrder(4));
        assert_eq!(matrix_rep(&sig, 1).unwrap_err(), QTorusError::UnsupportedOrder(1));
    }

    #[test]
    fn compact_rep_satisfies_relations() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for s in crate::surface::builtin_surfaces() {
            let sig = Signature::chekhov_fock(&s.ideal);
            let gens: Vec<usize> = (0..sig.len()).collect();
            for order in [3, 5] {
                let rep = compact_rep(&sig, &gens, order, &mut rng).unwrap();
                let zeta = rep.q.powi(2);
                for i in 0..gens.len() {
                    let inv_err =
                        (&rep.matrices[i] * &rep.inverses[i] - DMatrix::identity(rep.dim(), rep.dim())).norm();
                    assert!(inv_err < 1e-10);
                    for j in 0..gens.len() {
                        let lhs = &rep.matrices[i] * &rep.matrices[j];
                        let rhs = (&rep.matrices[j] * &rep.matrices[i]) * zeta.powi(sig.eps(i, j) as i32);
                        assert!((lhs - rhs).norm() < 1e-9, "{} {i} {j}", s.name);
                    }
                }
            }
        }
    }
}
