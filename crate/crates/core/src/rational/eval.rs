use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{Expr, Node, RationalError};
use crate::qtorus::{CompactRep, Element, Signature};

/// Normal forms larger than this are abandoned by [`to_element`].
const MAX_TERMS: usize = 4096;

fn excerpt(e: &Expr) -> String {
    let sig = Signature::commutative(e.generators().last().map_or(0, |g| g + 1));
    let mut s = e.to_text(&sig);
    if s.len() > 160 {
        let mut cut = 157;
        while !s.is_char_boundary(cut) {
            cut -= 1;
        }
        s.truncate(cut);
        s.push_str("...");
    }
    s
}

/// Evaluation at `q = 1` with generator `i` set to `point[i]`.
pub fn eval_q1(e: &Expr, point: &[f64]) -> Result<f64, RationalError> {
    fn go(e: &Expr, point: &[f64], memo: &mut HashMap<usize, f64>) -> Result<f64, RationalError> {
        if let Some(&v) = memo.get(&e.key()) {
            return Ok(v);
        }
        let v = match e.node() {
            Node::Gen(i) => *point.get(*i).ok_or(RationalError::UnboundGenerator(*i))?,
            Node::Scalar(c) => c.eval_q1() as f64,
            Node::Sum(c) => c.iter().map(|x| go(x, point, memo)).sum::<Result<f64, _>>()?,
            Node::Product(c) => c.iter().map(|x| go(x, point, memo)).product::<Result<f64, _>>()?,
            Node::Inverse(c) => {
                let x = go(c, point, memo)?;
                if x == 0.0 || !x.is_finite() || !(1.0 / x).is_finite() {
                    return Err(RationalError::Singular { context: "q=1 point".into(), expr: excerpt(c) });
                }
                1.0 / x
            }
        };
        memo.insert(e.key(), v);
        Ok(v)
    }
    go(e, point, &mut HashMap::new())
}

/// Evaluates expressions in a root-of-unity representation, sharing work
/// across calls.
pub struct MatrixEvaluator<'a> {
    rep: &'a CompactRep,
    slots: HashMap<usize, usize>,
    memo: HashMap<usize, (Expr, DMatrix<Complex64>)>,
}

impl<'a> MatrixEvaluator<'a> {
    pub fn new(rep: &'a CompactRep) -> Self {
        let slots = rep.generators.iter().enumerate().map(|(s, &g)| (g, s)).collect();
        Self { rep, slots, memo: HashMap::new() }
    }

    pub fn eval(&mut self, e: &Expr) -> Result<DMatrix<Complex64>, RationalError> {
        if let Some((_, m)) = self.memo.get(&e.key()) {
            return Ok(m.clone());
        }
        let dim = self.rep.dim();
        let m = match e.node() {
            Node::Gen(i) => {
                let s = *self.slots.get(i).ok_or(RationalError::UnboundGenerator(*i))?;
                self.rep.matrices[s].clone()
            }
            Node::Scalar(c) => DMatrix::identity(dim, dim) * c.eval(self.rep.q),
            Node::Sum(c) => {
                let mut acc = DMatrix::zeros(dim, dim);
                for x in c {
                    acc += self.eval(x)?;
                }
                acc
            }
            Node::Product(c) => {
                let mut acc = DMatrix::identity(dim, dim);
                for x in c {
                    acc *= self.eval(x)?;
                }
                acc
            }
            Node::Inverse(c) => {
                if let Node::Gen(i) = c.node() {
                    let s = *self.slots.get(i).ok_or(RationalError::UnboundGenerator(*i))?;
                    self.rep.inverses[s].clone()
                } else {
                    let a = self.eval(c)?;
                    self.invert(&a).ok_or_else(|| RationalError::Singular {
                        context: format!("root-of-unity representation N={}", self.rep.order),
                        expr: excerpt(c),
                    })?
                }
            }
        };
        self.memo.insert(e.key(), (e.clone(), m.clone()));
        Ok(m)
    }

    fn invert(&self, a: &DMatrix<Complex64>) -> Option<DMatrix<Complex64>> {
        let inv = a.clone().try_inverse()?;
        let dim = a.nrows();
        let err = (a * &inv - DMatrix::<Complex64>::identity(dim, dim)).norm() / (dim as f64).sqrt();
        (err.is_finite() && err < 1e-8).then_some(inv)
    }
}

pub fn eval_matrix(e: &Expr, rep: &CompactRep) -> Result<DMatrix<Complex64>, RationalError> {
    MatrixEvaluator::new(rep).eval(e)
}

/// Normal form as a quantum torus element, when every inverse in the DAG is
/// the inverse of a unit monomial `± q^k G^e`.
pub fn to_element(e: &Expr, sig: &Signature) -> Option<Element> {
    fn go(e: &Expr, sig: &Signature, memo: &mut HashMap<usize, Option<Element>>) -> Option<Element> {
        if let Some(v) = memo.get(&e.key()) {
            return v.clone();
        }
        let n = sig.len();
        let v = (|| match e.node() {
            Node::Gen(i) => (*i < n).then(|| Element::generator(n, *i)),
            Node::Scalar(c) => Some(Element::scalar(n, c.clone())),
            Node::Sum(c) => {
                let mut acc = Element::zero(n);
                for x in c {
                    acc = acc.add(&go(x, sig, memo)?);
                }
                (acc.num_terms() <= MAX_TERMS).then_some(acc)
            }
            Node::Product(c) => {
                let mut acc = Element::one(n);
                for x in c {
                    let f = go(x, sig, memo)?;
                    if acc.num_terms() * f.num_terms() > MAX_TERMS {
                        return None;
                    }
                    acc = acc.mul(&f, sig);
                }
                Some(acc)
            }
            Node::Inverse(c) => go(c, sig, memo)?.unit_inverse(sig).ok(),
        })();
        memo.insert(e.key(), v.clone());
        v
    }
    go(e, sig, &mut HashMap::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qtorus::{compact_rep, CoeffPoly, Monomial};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sig2() -> Signature {
        Signature::new(vec![vec![0, 1], vec![-1, 0]], crate::qtorus::Naming::Edge).unwrap()
    }

    #[test]
    fn inverse_times_self_is_identity() {
        let sig = sig2();
        let x = Expr::one().add(&Expr::q_pow(1).mul(&Expr::gen(0)));
        let e = x.inverse().unwrap().mul(&x);
        let rep = compact_rep(&sig, &[0, 1], 3, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let m = eval_matrix(&e, &rep).unwrap();
        let d = rep.dim();
        assert!((m - DMatrix::identity(d, d)).norm() < 1e-10);
    }

    #[test]
    fn case_one_image_at_q_one() {
        // (1 + X_i) X_j at x = 1 is 2 x_j.
        let e = Expr::one().add(&Expr::q_pow(1).mul(&Expr::gen(0))).mul(&Expr::gen(1));
        assert!((eval_q1(&e, &[1.0, 3.5]).unwrap() - 7.0).abs() < 1e-12);
    }

    #[test]
    fn monomial_expressions_agree_with_element_evaluation() {
        let sig = sig2();
        let el = Element::term(2, CoeffPoly::q_pow(3), Monomial(vec![2, -1]));
        let e = Expr::from_element(&el);
        let rep = compact_rep(&sig, &[0, 1], 5, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let direct = el.eval_matrices(rep.q, &rep.matrices, &rep.inverses);
        assert!((eval_matrix(&e, &rep).unwrap() - direct).norm() < 1e-10);
        assert_eq!(to_element(&e, &sig).unwrap(), el);
    }

    #[test]
    fn reversed_product_is_q_minus_two_times_ordered() {
        let sig = sig2();
        let rep = compact_rep(&sig, &[0, 1], 3, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let x21 = eval_matrix(&Expr::gen(1).mul(&Expr::gen(0)), &rep).unwrap();
        let x12 = eval_matrix(&Expr::gen(0).mul(&Expr::gen(1)), &rep).unwrap();
        assert!((x21 - x12 * rep.q.powi(-2)).norm() < 1e-10);
    }

    #[test]
    fn division_by_zero_at_q_one_is_reported() {
        let e = Expr::one().add(&Expr::scalar(CoeffPoly::constant(-1)).mul(&Expr::gen(0)));
        let err = eval_q1(&e.inverse().unwrap(), &[1.0]).unwrap_err();
        assert!(matches!(err, RationalError::Singular { .. }));
    }

    #[test]
    fn non_unit_inverse_has_no_normal_form() {
        let sig = sig2();
        let e = Expr::one().add(&Expr::gen(0)).inverse().unwrap();
        assert!(to_element(&e, &sig).is_none());
    }
}
