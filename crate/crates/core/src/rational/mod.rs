//! Noncommutative rational expressions over a quantum torus.
//!
//! Expressions are immutable DAGs with shared subterms. Nothing is simplified
//! on construction; equality questions go through [`expr_equal`].

mod equal;
mod eval;
mod text;

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::qtorus::{CoeffPoly, Element, Signature};

pub use equal::{expr_equal, pairs_equal, EqualityPolicy, Verdict, Witness, WitnessContext};
pub use eval::{eval_matrix, eval_q1, to_element, MatrixEvaluator};
pub use text::parse_expr;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum RationalError {
    #[error("inverse of the zero scalar")]
    InverseOfZero,
    #[error("substitution has no image for generator {0}")]
    MissingImage(usize),
    #[error("singular value under inverse in {context}: {expr}")]
    Singular { context: String, expr: String },
    #[error("generator {0} has no value in this context")]
    UnboundGenerator(usize),
    #[error("invalid equality policy: {0}")]
    InvalidPolicy(String),
    #[error("parse error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
}

#[derive(Debug, PartialEq)]
pub enum Node {
    Gen(usize),
    Scalar(CoeffPoly),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Inverse(Expr),
}

/// A shared handle to an expression node.
#[derive(Clone, Debug, PartialEq)]
pub struct Expr(Arc<Node>);

impl Expr {
    pub fn node(&self) -> &Node {
        &self.0
    }

    pub(crate) fn key(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn gen(i: usize) -> Expr {
        Expr(Arc::new(Node::Gen(i)))
    }

    pub fn scalar(c: CoeffPoly) -> Expr {
        Expr(Arc::new(Node::Scalar(c)))
    }

    pub fn q_pow(k: i32) -> Expr {
        Expr::scalar(CoeffPoly::q_pow(k))
    }

    pub fn one() -> Expr {
        Expr::scalar(CoeffPoly::one())
    }

    pub fn sum(children: Vec<Expr>) -> Expr {
        Expr(Arc::new(Node::Sum(children)))
    }

    /// Ordered product; `children[0]` is leftmost.
    pub fn product(children: Vec<Expr>) -> Expr {
        Expr(Arc::new(Node::Product(children)))
    }

    pub fn inverse(&self) -> Result<Expr, RationalError> {
        if let Node::Scalar(c) = self.node() {
            if c.is_zero() {
                return Err(RationalError::InverseOfZero);
            }
        }
        Ok(Expr(Arc::new(Node::Inverse(self.clone()))))
    }

    /// `G_i^{-1}`.
    pub fn gen_inverse(i: usize) -> Expr {
        Expr(Arc::new(Node::Inverse(Expr::gen(i))))
    }

    pub fn add(&self, other: &Expr) -> Expr {
        Expr::sum(vec![self.clone(), other.clone()])
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        Expr::product(vec![self.clone(), other.clone()])
    }

    /// The expression of a quantum torus element: a sum of scalar-times-word
    /// products with negative powers written as inverses.
    pub fn from_element(e: &Element) -> Expr {
        let terms: Vec<Expr> = e
            .terms()
            .map(|(m, c)| {
                let mut factors = vec![Expr::scalar(c.clone())];
                for (i, &p) in m.exponents().iter().enumerate() {
                    let g = if p >= 0 { Expr::gen(i) } else { Expr::gen_inverse(i) };
                    factors.extend(std::iter::repeat_n(g, p.unsigned_abs() as usize));
                }
                if factors.len() == 1 {
                    factors.pop().unwrap()
                } else {
                    Expr::product(factors)
                }
            })
            .collect();
        match terms.len() {
            0 => Expr::scalar(CoeffPoly::zero()),
            1 => terms.into_iter().next().unwrap(),
            _ => Expr::sum(terms),
        }
    }

    /// Generator indices occurring in the expression.
    pub fn generators(&self) -> BTreeSet<usize> {
        let mut seen = std::collections::HashSet::new();
        let mut out = BTreeSet::new();
        let mut stack = vec![self.clone()];
        while let Some(e) = stack.pop() {
            if !seen.insert(e.key()) {
                continue;
            }
            match e.node() {
                Node::Gen(i) => {
                    out.insert(*i);
                }
                Node::Scalar(_) => {}
                Node::Sum(c) | Node::Product(c) => stack.extend(c.iter().cloned()),
                Node::Inverse(c) => stack.push(c.clone()),
            }
        }
        out
    }

    /// Number of distinct nodes in the DAG.
    pub fn dag_size(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(e) = stack.pop() {
            if !seen.insert(e.key()) {
                continue;
            }
            match e.node() {
                Node::Sum(c) | Node::Product(c) => stack.extend(c.iter().cloned()),
                Node::Inverse(c) => stack.push(c.clone()),
                _ => {}
            }
        }
        seen.len()
    }

    pub fn to_text(&self, sig: &Signature) -> String {
        text::write_expr(self, sig)
    }
}

/// Images of generators; applied as an algebra homomorphism.
#[derive(Clone, Debug, Default)]
pub struct Substitution {
    images: HashMap<usize, Expr>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_images(images: Vec<Expr>) -> Self {
        Self { images: images.into_iter().enumerate().collect() }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_images((0..n).map(Expr::gen).collect())
    }

    pub fn set(&mut self, generator: usize, image: Expr) {
        self.images.insert(generator, image);
    }

    pub fn get(&self, generator: usize) -> Option<&Expr> {
        self.images.get(&generator)
    }
}

/// Replaces every generator by its image, preserving the DAG structure.
pub fn substitute(e: &Expr, s: &Substitution) -> Result<Expr, RationalError> {
    let mut memo = SubstitutionMemo::default();
    substitute_memo(e, s, &mut memo)
}

/// Rewritten nodes keyed by source node. Holds the sources so their
/// addresses stay valid for the lifetime of the table.
#[derive(Default)]
pub struct SubstitutionMemo(HashMap<usize, (Expr, Expr)>);

/// [`substitute`] with a caller-held memo table, so that several expressions
/// sharing subterms are rewritten once.
pub fn substitute_memo(e: &Expr, s: &Substitution, memo: &mut SubstitutionMemo) -> Result<Expr, RationalError> {
    if let Some((_, done)) = memo.0.get(&e.key()) {
        return Ok(done.clone());
    }
    let out = match e.node() {
        Node::Gen(i) => s.get(*i).cloned().ok_or(RationalError::MissingImage(*i))?,
        Node::Scalar(_) => e.clone(),
        Node::Sum(c) => Expr::sum(c.iter().map(|x| substitute_memo(x, s, memo)).collect::<Result<_, _>>()?),
        Node::Product(c) => Expr::product(c.iter().map(|x| substitute_memo(x, s, memo)).collect::<Result<_, _>>()?),
        Node::Inverse(c) => substitute_memo(c, s, memo)?.inverse()?,
    };
    memo.0.insert(e.key(), (e.clone(), out.clone()));
    Ok(out)
}

/// Structural equality of two DAGs (ignores sharing).
pub fn structurally_equal(a: &Expr, b: &Expr) -> bool {
    a == b
}
