//! Real coordinates at `q = 1`.
//!
//! Shear coordinates live on edges, Kashaev coordinates on triangles. Both are
//! stored as logarithms so that the linear maps between them are honest
//! integer matrices and long move sequences do not overflow.

mod diagram;
mod linear;

use std::fmt::Write;

use rand::Rng;
use thiserror::Error;

use crate::surface::{classify_flip, DecoratedTriangulation, IdealTriangulation, Move, SurfaceError};

pub use diagram::{diagram_check_classical, transport, DiagramVerdict};
pub use linear::{
    cycle_basis, map_f1, map_f2, map_f3, map_m, matrix_f1, matrix_f2, matrix_f3, matrix_m, poisson_check,
    poisson_constant, shear_of_kashaev, verify_exact_sequence, ExactnessReport, LinearMapMatrix, PoissonReport,
};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ClassicalError {
    #[error("coordinate {index} must be strictly positive, got {value}")]
    NonPositive { index: usize, value: f64 },
    #[error("expected {expected} coordinates, got {got}")]
    Length { expected: usize, got: usize },
    #[error("dual chain is not a cycle (boundary at triangle {0} is nonzero)")]
    NotACycle(usize),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

fn check_positive(values: &[f64]) -> Result<(), ClassicalError> {
    match values.iter().position(|&v| !(v > 0.0 && v.is_finite())) {
        Some(index) => Err(ClassicalError::NonPositive { index, value: values[index] }),
        None => Ok(()),
    }
}

/// `ln(1 + e^t)` without overflow.
pub(crate) fn ln_1p_exp(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

/// Exponential shear coordinates, one per edge.
#[derive(Clone, Debug, PartialEq)]
pub struct ShearVector {
    log: Vec<f64>,
}

impl ShearVector {
    pub fn from_exp(values: &[f64]) -> Result<Self, ClassicalError> {
        check_positive(values)?;
        Ok(Self { log: values.iter().map(|v| v.ln()).collect() })
    }

    pub fn from_log(log: Vec<f64>) -> Self {
        Self { log }
    }

    pub fn log(&self) -> &[f64] {
        &self.log
    }

    pub fn exp(&self) -> Vec<f64> {
        self.log.iter().map(|v| v.exp()).collect()
    }

    pub fn len(&self) -> usize {
        self.log.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log.is_empty()
    }

    /// Log-uniform entries in `[e^-spread, e^spread]`.
    pub fn random<R: Rng>(edges: usize, spread: f64, rng: &mut R) -> Self {
        Self::from_log((0..edges).map(|_| rng.gen_range(-spread..=spread)).collect())
    }

    /// Largest relative difference of the exponential entries.
    pub fn relative_distance(&self, other: &ShearVector) -> f64 {
        relative_distance(&self.log, &other.log)
    }

    /// One `edge value` record per line, edges numbered from 1.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, v) in self.exp().iter().enumerate() {
            let _ = writeln!(out, "{} {v:e}", i + 1);
        }
        out
    }

    pub fn parse(text: &str, edges: usize) -> Result<Self, ClassicalError> {
        let rows = parse_records(text, edges, 1)?;
        Self::from_exp(&rows.into_iter().map(|r| r[0]).collect::<Vec<_>>())
    }
}

/// Exponential Kashaev coordinates `(y_μ, z_μ)`, one pair per triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct KashaevVector {
    /// `ln y_0, ln z_0, ln y_1, ...`
    log: Vec<f64>,
}

impl KashaevVector {
    pub fn from_exp(pairs: &[(f64, f64)]) -> Result<Self, ClassicalError> {
        let flat: Vec<f64> = pairs.iter().flat_map(|&(y, z)| [y, z]).collect();
        check_positive(&flat)?;
        Ok(Self { log: flat.iter().map(|v| v.ln()).collect() })
    }

    /// Panics if `log` has odd length.
    pub fn from_log(log: Vec<f64>) -> Self {
        assert!(log.len().is_multiple_of(2), "Kashaev coordinates come in pairs");
        Self { log }
    }

    pub fn ones(triangles: usize) -> Self {
        Self::from_log(vec![0.0; 2 * triangles])
    }

    pub fn random<R: Rng>(triangles: usize, spread: f64, rng: &mut R) -> Self {
        Self::from_log((0..2 * triangles).map(|_| rng.gen_range(-spread..=spread)).collect())
    }

    pub fn num_triangles(&self) -> usize {
        self.log.len() / 2
    }

    pub fn log(&self) -> &[f64] {
        &self.log
    }

    pub fn log_y(&self, mu: usize) -> f64 {
        self.log[2 * mu]
    }

    pub fn log_z(&self, mu: usize) -> f64 {
        self.log[2 * mu + 1]
    }

    pub fn pair(&self, mu: usize) -> (f64, f64) {
        (self.log_y(mu).exp(), self.log_z(mu).exp())
    }

    pub fn relative_distance(&self, other: &KashaevVector) -> f64 {
        relative_distance(&self.log, &other.log)
    }

    fn set(&mut self, mu: usize, ly: f64, lz: f64) {
        self.log[2 * mu] = ly;
        self.log[2 * mu + 1] = lz;
    }

    /// One `triangle y z` record per line, triangles numbered from 1.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for mu in 0..self.num_triangles() {
            let (y, z) = self.pair(mu);
            let _ = writeln!(out, "{} {y:e} {z:e}", mu + 1);
        }
        out
    }

    pub fn parse(text: &str, triangles: usize) -> Result<Self, ClassicalError> {
        let rows = parse_records(text, triangles, 2)?;
        Self::from_exp(&rows.into_iter().map(|r| (r[0], r[1])).collect::<Vec<_>>())
    }
}

fn relative_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let (ex, ey) = (x.exp(), y.exp());
            (ex - ey).abs() / ex.max(ey)
        })
        .fold(if a.len() == b.len() { 0.0 } else { f64::INFINITY }, f64::max)
}

/// Reads `label v1 [v2]` records, one per label, in any order.
fn parse_records(text: &str, count: usize, width: usize) -> Result<Vec<Vec<f64>>, ClassicalError> {
    let mut rows: Vec<Option<Vec<f64>>> = vec![None; count];
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| ClassicalError::Parse { line: n + 1, message };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != width + 1 {
            return Err(err(format!("expected a label and {width} value(s)")));
        }
        let label: usize = fields[0].parse().map_err(|_| err(format!("bad label `{}`", fields[0])))?;
        if label == 0 || label > count {
            return Err(err(format!("label {label} out of range 1..={count}")));
        }
        let values = fields[1..]
            .iter()
            .map(|f| f.parse::<f64>().map_err(|_| err(format!("bad number `{f}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(v) = values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(err(format!("coordinate {v} is not strictly positive")));
        }
        if rows[label - 1].replace(values).is_some() {
            return Err(err(format!("label {label} given twice")));
        }
    }
    rows.into_iter()
        .enumerate()
        .map(|(i, r)| r.ok_or(ClassicalError::Parse { line: 0, message: format!("label {} missing", i + 1) }))
        .collect()
}

/// Side values `ln h^s_μ`, indexed by Kashaev side.
#[derive(Clone, Debug, PartialEq)]
pub struct SideValues {
    log: Vec<[f64; 3]>,
}

impl SideValues {
    pub fn from_log(log: Vec<[f64; 3]>) -> Self {
        Self { log }
    }

    pub fn zeros(triangles: usize) -> Self {
        Self::from_log(vec![[0.0; 3]; triangles])
    }

    pub fn get(&self, mu: usize, side: usize) -> f64 {
        self.log[mu][side]
    }

    pub fn triangles(&self) -> &[[f64; 3]] {
        &self.log
    }

    /// Largest `|ln h⁰ + ln h¹ + ln h²|` over triangles.
    pub fn max_triangle_sum(&self) -> f64 {
        self.log.iter().map(|h| (h[0] + h[1] + h[2]).abs()).fold(0.0, f64::max)
    }
}

/// The shear change of the diagonal exchange at `edge`, applied in log form.
///
/// Each of the four surrounding edges picks up a factor `(1+x_i)` for every
/// j-type position it occupies and `(1+x_i⁻¹)⁻¹` for every k-type position,
/// which reproduces the eight cases of the flip table.
pub fn shear_flip(x: &ShearVector, lambda: &IdealTriangulation, edge: usize) -> Result<ShearVector, ClassicalError> {
    if x.len() != lambda.num_edges() {
        return Err(ClassicalError::Length { expected: lambda.num_edges(), got: x.len() });
    }
    let roles = classify_flip(lambda, edge)?;
    let t = x.log[edge];
    let grow = ln_1p_exp(t);
    let shrink = ln_1p_exp(-t);
    let mut out = x.log.clone();
    let mut seen = Vec::new();
    for e in [roles.j, roles.k, roles.l, roles.m] {
        if seen.contains(&e) {
            continue;
        }
        seen.push(e);
        let (jt, kt) = roles.occupancy(e);
        out[e] += jt as f64 * grow - kt as f64 * shrink;
    }
    out[edge] = -t;
    Ok(ShearVector::from_log(out))
}

/// Shear coordinates on `lambda.apply(mv)` of the same point.
pub fn shear_change(x: &ShearVector, lambda: &IdealTriangulation, mv: &Move) -> Result<ShearVector, ClassicalError> {
    match mv {
        Move::DiagonalExchange(e) => shear_flip(x, lambda, *e),
        Move::Reindex(p) => {
            lambda.relabel(p)?;
            let mut out = x.log.clone();
            for (e, &v) in x.log.iter().enumerate() {
                out[p.apply(e)] = v;
            }
            Ok(ShearVector::from_log(out))
        }
        other => Err(SurfaceError::UnsupportedMove(other.to_string()).into()),
    }
}

/// Kashaev coordinates on `tau.apply(mv)` of the same point.
pub fn kashaev_change(
    k: &KashaevVector,
    tau: &DecoratedTriangulation,
    mv: &Move,
) -> Result<KashaevVector, ClassicalError> {
    let n = tau.num_triangles();
    if k.num_triangles() != n {
        return Err(ClassicalError::Length { expected: 2 * n, got: k.log.len() });
    }
    // Validates the move.
    tau.apply(mv)?;
    let mut out = k.clone();
    match mv {
        Move::Reindex(p) => {
            for mu in 0..n {
                out.set(p.apply(mu), k.log_y(mu), k.log_z(mu));
            }
        }
        Move::MarkRotation(i) => {
            let (ly, lz) = (k.log_y(*i), k.log_z(*i));
            out.set(*i, lz - ly, -ly);
        }
        Move::KashaevExchange(i, j) => {
            let (yi, zi, yj, zj) = (k.log_y(*i), k.log_z(*i), k.log_y(*j), k.log_z(*j));
            let (a, b) = (yi + yj, zi + zj);
            let d = a.max(b) + ln_1p_exp(-(a - b).abs());
            out.set(*i, zj - d, yi - d);
            out.set(*j, zi - d, yj - d);
        }
        Move::DiagonalExchange(_) => unreachable!("rejected by apply"),
    }
    Ok(out)
}
