//! Exact integer matrices: rank by fraction-free elimination and the
//! congruence normal form of skew-symmetric forms.

use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self { rows: r, cols: c, data: rows.iter().flatten().copied().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn scale(&self, c: i64) -> IntMatrix {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Exact rank by Bareiss elimination in 128-bit arithmetic.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<i128>> = (0..self.rows).map(|i| self.row(i).iter().map(|&v| v as i128).collect()).collect();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        let mut prev: i128 = 1;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&r| a[r][col] != 0) else { continue };
            a.swap(rank, p);
            let pivot = a[rank][col];
            for r in rank + 1..rows {
                for c in col + 1..cols {
                    a[r][c] = (a[r][c] * pivot - a[r][col] * a[rank][c]) / prev;
                }
                a[r][col] = 0;
            }
            prev = pivot;
            rank += 1;
        }
        rank
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// `P · A · Pᵀ = diag(d₁J, …, d_kJ, 0, …, 0)` with `J = [[0,1],[-1,0]]`,
/// `P` unimodular and `Q = P⁻¹`.
#[derive(Clone, Debug)]
pub struct SkewNormalForm {
    pub p: IntMatrix,
    pub q: IntMatrix,
    /// Positive block entries `d_k`, one per 2×2 block.
    pub blocks: Vec<i64>,
}

impl SkewNormalForm {
    pub fn rank(&self) -> usize {
        2 * self.blocks.len()
    }
}

struct Congruence {
    a: IntMatrix,
    p: IntMatrix,
    q: IntMatrix,
}

impl Congruence {
    fn swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        let n = self.a.rows;
        for c in 0..n {
            self.a.data.swap(i * n + c, j * n + c);
            self.p.data.swap(i * n + c, j * n + c);
        }
        for r in 0..n {
            self.a.data.swap(r * n + i, r * n + j);
            self.q.data.swap(r * n + i, r * n + j);
        }
    }

    /// Row and column `dst` -= `k` times row and column `src`.
    fn subtract(&mut self, dst: usize, src: usize, k: i64) {
        if k == 0 {
            return;
        }
        let n = self.a.rows;
        for c in 0..n {
            self.a[(dst, c)] -= k * self.a[(src, c)];
            self.p[(dst, c)] -= k * self.p[(src, c)];
        }
        for r in 0..n {
            self.a[(r, dst)] -= k * self.a[(r, src)];
        }
        // Q ← Q E⁻¹ where E = I - k e_dst e_srcᵀ, E⁻¹ = I + k e_dst e_srcᵀ.
        for r in 0..n {
            self.q[(r, src)] += k * self.q[(r, dst)];
        }
    }
}

/// Congruence normal form of an antisymmetric integer matrix.
pub fn skew_normal_form(a: &IntMatrix) -> SkewNormalForm {
    let n = a.rows;
    assert_eq!(n, a.cols, "square matrix expected");
    let mut st = Congruence { a: a.clone(), p: IntMatrix::identity(n), q: IntMatrix::identity(n) };
    let mut blocks = Vec::new();
    let mut k = 0;
    while k + 1 < n {
        // Smallest nonzero entry of the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in k..n {
            for j in k..n {
                let v = st.a[(i, j)];
                if v > 0 && best.is_none_or(|(bi, bj)| v < st.a[(bi, bj)]) {
                    best = Some((i, j));
                }
            }
        }
        let Some((i, j)) = best else { break };
        st.swap(k, i);
        let j = if j == k { i } else { j };
        st.swap(k + 1, j);
        debug_assert!(st.a[(k, k + 1)] > 0);
        let d = st.a[(k, k + 1)];
        let mut clean = true;
        for l in k + 2..n {
            // a[k][l] -= t * a[k][k+1] via column l -= t col k+1.
            let t = st.a[(k, l)].div_euclid(d);
            st.subtract(l, k + 1, t);
            // a[k+1][l] -= t * a[k+1][k] = -t d via column l -= t col k.
            let t = (-st.a[(k + 1, l)]).div_euclid(d);
            st.subtract(l, k, t);
            if st.a[(k, l)] != 0 || st.a[(k + 1, l)] != 0 {
                clean = false;
            }
        }
        if clean {
            blocks.push(d);
            k += 2;
        }
    }
    SkewNormalForm { p: st.p, q: st.q, blocks }
}
