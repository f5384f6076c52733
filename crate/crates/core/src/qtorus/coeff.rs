use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

/// An integer Laurent polynomial in `q`. Zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoeffPoly(BTreeMap<i32, i64>);

impl CoeffPoly {
    pub fn zero() -> Self {
        Self(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c · q^k`.
    pub fn monomial(c: i64, k: i32) -> Self {
        let mut m = BTreeMap::new();
        if c != 0 {
            m.insert(k, c);
        }
        Self(m)
    }

    pub fn q_pow(k: i32) -> Self {
        Self::monomial(1, k)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, i64)>) -> Self {
        let mut out = Self::zero();
        for (k, c) in terms {
            out.add_assign_term(k, c);
        }
        out
    }

    fn add_assign_term(&mut self, k: i32, c: i64) {
        let v = self.0.get(&k).copied().unwrap_or(0) + c;
        if v == 0 {
            self.0.remove(&k);
        } else {
            self.0.insert(k, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.0.iter().map(|(&k, &c)| (k, c))
    }

    pub fn add(&self, other: &CoeffPoly) -> CoeffPoly {
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.add_assign_term(k, c);
        }
        out
    }

    pub fn neg(&self) -> CoeffPoly {
        Self(self.0.iter().map(|(&k, &c)| (k, -c)).collect())
    }

    pub fn sub(&self, other: &CoeffPoly) -> CoeffPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &CoeffPoly) -> CoeffPoly {
        let mut out = Self::zero();
        for (k1, c1) in self.terms() {
            for (k2, c2) in other.terms() {
                out.add_assign_term(k1 + k2, c1 * c2);
            }
        }
        out
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: i32) -> CoeffPoly {
        Self(self.0.iter().map(|(&e, &c)| (e + k, c)).collect())
    }

    /// `(±1, k)` when the polynomial is `±q^k`.
    pub fn as_unit(&self) -> Option<(i64, i32)> {
        match self.0.iter().next() {
            Some((&k, &c)) if self.0.len() == 1 && c.abs() == 1 => Some((c, k)),
            _ => None,
        }
    }

    /// The exponent `k` when the polynomial is exactly `q^k`.
    pub fn as_q_power(&self) -> Option<i32> {
        match self.as_unit() {
            Some((1, k)) => Some(k),
            _ => None,
        }
    }

    pub fn eval(&self, q: Complex64) -> Complex64 {
        self.terms().map(|(k, c)| q.powi(k) * c as f64).sum()
    }

    pub fn eval_q1(&self) -> i64 {
        self.0.values().sum()
    }
}

impl fmt::Display for CoeffPoly {
    /// Terms in decreasing degree, e.g. `2q^3 - q + 1 - q^-2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (n, (&k, &c)) in self.0.iter().rev().enumerate() {
            let mag = c.unsigned_abs();
            if n == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c < 0 { '-' } else { '+' })?;
            }
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if mag != 1 {
                        write!(f, "{mag}")?;
                    }
                    if k == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CoeffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoeffPoly({self})")
    }
}
