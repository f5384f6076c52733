//! Quantum tori: Laurent polynomials in generators `G_1, …, G_n` with
//! `G_i G_j = q^{2 eps_ij} G_j G_i`, coefficients integer Laurent polynomials
//! in the formal variable `q`.
//!
//! Elements are kept in normal order `G_1^{e_1} ⋯ G_n^{e_n}`.

mod coeff;
mod rep;

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::surface::{IdealTriangulation, SkewForm};

pub use coeff::CoeffPoly;
pub use rep::{compact_rep, matrix_rep, root_q, CompactRep, MonomialMatrix, MAX_MONOMIAL_DIM};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum QTorusError {
    #[error("root-of-unity order must be odd and at least 3, got {0}")]
    UnsupportedOrder(usize),
    #[error("generator {index} out of range for a signature with {count} generators")]
    NoSuchGenerator { index: usize, count: usize },
    #[error("element is not a unit monomial")]
    NotAUnit,
    #[error("point has {found} coordinates, signature has {expected} generators")]
    PointDimension { expected: usize, found: usize },
    #[error("the representation would have dimension {0}, which is too large")]
    TooLarge(usize),
}

/// How generators are named when printed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Naming {
    /// `X1, X2, …` (one per edge).
    Edge,
    /// `Y1, Z1, Y2, Z2, …` (two per triangle, `Y_μ` at index `2μ`).
    Kashaev,
    /// `G1, G2, …`.
    Plain,
}

/// The integer skew form fixing the commutation relations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    eps: Vec<Vec<i64>>,
    naming: Naming,
}

impl Signature {
    pub fn new(eps: Vec<Vec<i64>>, naming: Naming) -> Option<Self> {
        SkewForm::from_entries(eps.clone())?;
        Some(Self { eps, naming })
    }

    pub fn commutative(n: usize) -> Self {
        Self { eps: vec![vec![0; n]; n], naming: Naming::Plain }
    }

    /// Chekhov–Fock algebra of an ideal triangulation: `eps = σ`.
    pub fn chekhov_fock(t: &IdealTriangulation) -> Self {
        Self { eps: t.skew_form().entries().to_vec(), naming: Naming::Edge }
    }

    /// Kashaev algebra on `triangles` triangles: `Z_μ Y_μ = q² Y_μ Z_μ`,
    /// generators of distinct triangles commute.
    pub fn kashaev(triangles: usize) -> Self {
        let n = 2 * triangles;
        let mut eps = vec![vec![0; n]; n];
        for mu in 0..triangles {
            eps[2 * mu + 1][2 * mu] = 1;
            eps[2 * mu][2 * mu + 1] = -1;
        }
        Self { eps, naming: Naming::Kashaev }
    }

    pub fn len(&self) -> usize {
        self.eps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eps.is_empty()
    }

    pub fn eps(&self, i: usize, j: usize) -> i64 {
        self.eps[i][j]
    }

    pub fn eps_matrix(&self) -> &[Vec<i64>] {
        &self.eps
    }

    pub fn naming(&self) -> Naming {
        self.naming
    }

    pub fn generator_name(&self, i: usize) -> String {
        match self.naming {
            Naming::Edge => format!("X{}", i + 1),
            Naming::Kashaev => format!("{}{}", if i.is_multiple_of(2) { 'Y' } else { 'Z' }, i / 2 + 1),
            Naming::Plain => format!("G{}", i + 1),
        }
    }

    /// Restriction of the form to the listed generators, in that order.
    pub fn restrict(&self, gens: &[usize]) -> Signature {
        let eps = gens.iter().map(|&i| gens.iter().map(|&j| self.eps[i][j]).collect()).collect();
        Signature { eps, naming: Naming::Plain }
    }
}

/// A normal-ordered monomial `G_1^{e_1} ⋯ G_n^{e_n}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<i32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn generator(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self(e)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn exponents(&self) -> &[i32] {
        &self.0
    }
}

/// `a · b = q^k · (normal-ordered monomial)`; returns `(k, monomial)`.
///
/// Moving `G_j^{b_j}` left past `G_i^{a_i}` (for `i > j`) contributes
/// `q^{2 a_i b_j eps_ij}`.
pub fn monomial_mul(a: &Monomial, b: &Monomial, sig: &Signature) -> (i64, Monomial) {
    let n = sig.len();
    debug_assert!(a.0.len() == n && b.0.len() == n);
    let mut k = 0i64;
    for i in 0..n {
        if a.0[i] == 0 {
            continue;
        }
        for j in 0..i {
            if b.0[j] != 0 {
                k += 2 * a.0[i] as i64 * b.0[j] as i64 * sig.eps[i][j];
            }
        }
    }
    let e = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
    (k, Monomial(e))
}

/// `q^k` with `(G^e)^{-1} = q^k G^{-e}`.
pub fn monomial_inverse(a: &Monomial, sig: &Signature) -> (i64, Monomial) {
    let neg = Monomial(a.0.iter().map(|x| -x).collect());
    let (k, _) = monomial_mul(a, &neg, sig);
    (-k, neg)
}

/// A finite sum of monomials with `CoeffPoly` coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element {
    n: usize,
    terms: BTreeMap<Monomial, CoeffPoly>,
}

impl Element {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, CoeffPoly::one())
    }

    pub fn scalar(n: usize, c: CoeffPoly) -> Self {
        Self::term(n, c, Monomial::one(n))
    }

    pub fn generator(n: usize, i: usize) -> Self {
        Self::term(n, CoeffPoly::one(), Monomial::generator(n, i))
    }

    /// `G_i^{-1}`.
    pub fn generator_inverse(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = -1;
        Self::term(n, CoeffPoly::one(), Monomial(e))
    }

    pub fn term(n: usize, c: CoeffPoly, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { n, terms }
    }

    pub fn num_generators(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CoeffPoly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Element) -> Element {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Element {
        Element { n: self.n, terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    fn add_term(&mut self, m: Monomial, c: CoeffPoly) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&m) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
    }

    pub fn mul(&self, other: &Element, sig: &Signature) -> Element {
        let mut out = Element::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let (k, m) = monomial_mul(ma, mb, sig);
                out.add_term(m, ca.mul(cb).shift(k as i32));
            }
        }
        out
    }

    pub fn scale(&self, c: &CoeffPoly) -> Element {
        let mut out = Element::zero(self.n);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x.mul(c));
        }
        out
    }

    /// The single term, if there is exactly one.
    pub fn as_term(&self) -> Option<(&Monomial, &CoeffPoly)> {
        (self.terms.len() == 1).then(|| self.terms.iter().next().unwrap())
    }

    /// Inverse of a unit monomial `± q^k G^e`.
    pub fn unit_inverse(&self, sig: &Signature) -> Result<Element, QTorusError> {
        let (m, c) = self.as_term().ok_or(QTorusError::NotAUnit)?;
        let (sign, k) = c.as_unit().ok_or(QTorusError::NotAUnit)?;
        let (k2, inv) = monomial_inverse(m, sig);
        Ok(Element::term(self.n, CoeffPoly::monomial(sign, (k2 - k as i64) as i32), inv))
    }

    /// Evaluation at `q = 1`, generator `i` set to `point[i]`.
    pub fn eval_q1(&self, point: &[f64]) -> Result<f64, QTorusError> {
        if point.len() != self.n {
            return Err(QTorusError::PointDimension { expected: self.n, found: point.len() });
        }
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| {
                let v: f64 = m.0.iter().zip(point).map(|(&e, &x)| x.powi(e)).product();
                c.eval_q1() as f64 * v
            })
            .sum())
    }

    /// Evaluation with the coefficients specialised at a complex `q` and
    /// generators sent to the given matrices (with their inverses).
    pub fn eval_matrices(
        &self,
        q: Complex64,
        gens: &[nalgebra::DMatrix<Complex64>],
        inverses: &[nalgebra::DMatrix<Complex64>],
    ) -> nalgebra::DMatrix<Complex64> {
        let dim = gens.first().map_or(1, |g| g.nrows());
        let mut out = nalgebra::DMatrix::<Complex64>::zeros(dim, dim);
        for (m, c) in &self.terms {
            let mut acc = nalgebra::DMatrix::<Complex64>::identity(dim, dim);
            for (i, &e) in m.0.iter().enumerate() {
                let g = if e >= 0 { &gens[i] } else { &inverses[i] };
                for _ in 0..e.unsigned_abs() {
                    acc = &acc * g;
                }
            }
            out += acc * c.eval(q);
        }
        out
    }

    pub fn display(&self, sig: &Signature) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> =
            self.terms
                .iter()
                .map(|(m, c)| {
                    let gens: Vec<String> =
                        m.0.iter()
                            .enumerate()
                            .filter(|(_, &e)| e != 0)
                            .map(|(i, &e)| {
                                if e == 1 {
                                    sig.generator_name(i)
                                } else {
                                    format!("{}^{}", sig.generator_name(i), e)
                                }
                            })
                            .collect();
                    if gens.is_empty() {
                        format!("({c})")
                    } else {
                        format!("({c})*{}", gens.join("*"))
                    }
                })
                .collect();
        parts.join(" + ")
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(&Signature::commutative(self.n)))
    }
}

/// The side elements `(H⁰, H¹, H²) = (Y Z⁻¹, Z, Y⁻¹)` of triangle `mu` in the
/// Kashaev algebra.
pub fn side_elements(sig: &Signature, mu: usize) -> [Element; 3] {
    let n = sig.len();
    let (y, z) = (2 * mu, 2 * mu + 1);
    let mut h0 = vec![0; n];
    h0[y] = 1;
    h0[z] = -1;
    [Element::term(n, CoeffPoly::one(), Monomial(h0)), Element::generator(n, z), Element::generator_inverse(n, y)]
}

/// Exponent vectors of the side elements, for monomial bookkeeping.
pub fn side_monomial(n: usize, mu: usize, side: usize) -> Monomial {
    let mut e = vec![0; n];
    match side {
        0 => {
            e[2 * mu] = 1;
            e[2 * mu + 1] = -1;
        }
        1 => e[2 * mu + 1] = 1,
        _ => e[2 * mu] = -1,
    }
    Monomial(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sig2() -> Signature {
        Signature::new(vec![vec![0, 1], vec![-1, 0]], Naming::Edge).unwrap()
    }

    /// Normal-orders a word of generator letters by bubble sort, counting the
    /// q-power from each adjacent transposition.
    fn bubble_sort_power(word: &[(usize, i32)], sig: &Signature) -> (i64, Vec<i32>) {
        // Expand powers into single letters with sign.
        let mut letters: Vec<(usize, i32)> = Vec::new();
        for &(g, e) in word {
            for _ in 0..e.unsigned_abs() {
                letters.push((g, e.signum()));
            }
        }
        let mut k = 0i64;
        let mut swapped = true;
        while swapped {
            swapped = false;
            for p in 1..letters.len() {
                let (a, b) = (letters[p - 1], letters[p]);
                if a.0 > b.0 {
                    // G_a^s G_b^t = q^{2 s t eps_ab} G_b^t G_a^s
                    k += 2 * (a.1 * b.1) as i64 * sig.eps(a.0, b.0);
                    letters.swap(p - 1, p);
                    swapped = true;
                }
            }
        }
        let mut e = vec![0; sig.len()];
        for (g, s) in letters {
            e[g] += s;
        }
        (k, e)
    }

    fn word_of(m: &Monomial) -> Vec<(usize, i32)> {
        m.0.iter().enumerate().map(|(i, &e)| (i, e)).collect()
    }

    #[test]
    fn reversed_pair_picks_up_inverse_q_square() {
        let s = sig2();
        let (k, m) = monomial_mul(&Monomial(vec![0, 1]), &Monomial(vec![1, 0]), &s);
        assert_eq!((k, m), (-2, Monomial(vec![1, 1])));
    }

    #[test]
    fn kashaev_z_times_y() {
        let s = Signature::kashaev(1);
        let zy = Element::generator(2, 1).mul(&Element::generator(2, 0), &s);
        assert_eq!(zy, Element::term(2, CoeffPoly::q_pow(2), Monomial(vec![1, 1])));
    }

    #[test]
    fn monomial_times_inverse_is_one() {
        let s = sig2();
        let a = Element::term(2, CoeffPoly::q_pow(3), Monomial(vec![2, -1]));
        let inv = a.unit_inverse(&s).unwrap();
        assert_eq!(a.mul(&inv, &s), Element::one(2));
        assert_eq!(inv.mul(&a, &s), Element::one(2));
    }

    #[test]
    fn commutative_difference_of_squares() {
        let s = Signature::commutative(1);
        let x = Element::term(1, CoeffPoly::q_pow(1), Monomial(vec![1]));
        let lhs = Element::one(1).add(&x).mul(&Element::one(1).sub(&x), &s);
        let expect = Element::one(1).sub(&Element::term(1, CoeffPoly::q_pow(2), Monomial(vec![2])));
        assert_eq!(lhs, expect);
    }

    #[test]
    fn side_elements_relations() {
        let s = Signature::kashaev(2);
        let [h0, h1, h2] = side_elements(&s, 0);
        let q2 = CoeffPoly::q_pow(2);
        assert_eq!(h1.mul(&h0, &s), h0.mul(&h1, &s).scale(&q2));
        assert_eq!(h0.mul(&h2, &s), h2.mul(&h0, &s).scale(&q2));
        assert_eq!(h2.mul(&h1, &s), h1.mul(&h2, &s).scale(&q2));
        let prod = h0.mul(&h1, &s).mul(&h2, &s);
        let (m, c) = prod.as_term().unwrap();
        assert!(m.is_one());
        assert_eq!(c, &CoeffPoly::one());
        let other = side_elements(&s, 1);
        for a in [&h0, &h1, &h2] {
            for b in &other {
                assert_eq!(a.mul(b, &s), b.mul(a, &s));
            }
        }
    }

    #[test]
    fn q1_evaluation_of_h0() {
        let s = Signature::kashaev(1);
        let [h0, _, _] = side_elements(&s, 0);
        assert!((h0.eval_q1(&[2.0, 6.0]).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    fn arb_sig(n: usize) -> impl Strategy<Value = Signature> {
        prop::collection::vec(-2i64..=2, n * n).prop_map(move |v| {
            let mut eps = vec![vec![0; n]; n];
            for i in 0..n {
                for j in i + 1..n {
                    eps[i][j] = v[i * n + j];
                    eps[j][i] = -v[i * n + j];
                }
            }
            Signature::new(eps, Naming::Plain).unwrap()
        })
    }

    fn arb_element(n: usize) -> impl Strategy<Value = Element> {
        prop::collection::vec((prop::collection::vec(-3i32..=3, n), -2i64..=2, -3i32..=3), 1..4).prop_map(
            move |terms| {
                let mut e = Element::zero(n);
                for (m, c, k) in terms {
                    e = e.add(&Element::term(n, CoeffPoly::monomial(c, k), Monomial(m)));
                }
                e
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn q_power_matches_bubble_sort(
            sig in arb_sig(4),
            a in prop::collection::vec(-3i32..=3, 4),
            b in prop::collection::vec(-3i32..=3, 4),
        ) {
            let (ma, mb) = (Monomial(a), Monomial(b));
            let (k, m) = monomial_mul(&ma, &mb, &sig);
            let word: Vec<(usize, i32)> = word_of(&ma).into_iter().chain(word_of(&mb)).collect();
            let (k2, e2) = bubble_sort_power(&word, &sig);
            prop_assert_eq!(k, k2);
            prop_assert_eq!(m.0, e2);
        }

        #[test]
        fn multiplication_is_associative(sig in arb_sig(3), a in arb_element(3), b in arb_element(3), c in arb_element(3)) {
            prop_assert_eq!(a.mul(&b, &sig).mul(&c, &sig), a.mul(&b.mul(&c, &sig), &sig));
        }

        #[test]
        fn multiplication_distributes(sig in arb_sig(3), a in arb_element(3), b in arb_element(3), c in arb_element(3)) {
            prop_assert_eq!(a.mul(&b.add(&c), &sig), a.mul(&b, &sig).add(&a.mul(&c, &sig)));
            prop_assert_eq!(b.add(&c).mul(&a, &sig), b.mul(&a, &sig).add(&c.mul(&a, &sig)));
        }

        #[test]
        fn self_difference_is_empty(a in arb_element(3)) {
            let z = a.sub(&a);
            prop_assert!(z.is_zero());
            prop_assert_eq!(z.num_terms(), 0);
        }
    }
}
