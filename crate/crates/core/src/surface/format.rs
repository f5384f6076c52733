//! Versioned text format for triangulations.
//!
//! ```text
//! teich-triangulation v1
//! genus 1
//! punctures 1
//! triangle 1: (1, 2, 0) (2, 2, 1) (3, 2, 2) mark 0
//! triangle 2: (1, 1, 0) (2, 1, 1) (3, 1, 2) mark 0
//! ```
//!
//! Each triangle lists its sides counterclockwise as
//! `(edge label, partner triangle, partner side)`. Edge labels and triangle
//! numbers start at 1; sides are numbered 0, 1, 2 in listing order. The
//! optional `mark s` names the listed side opposite the marked corner; marks
//! must be present on every triangle or on none. `#` starts a comment.

use super::{DecoratedTriangulation, IdealTriangulation, SideRef, SurfaceError};

const HEADER: &str = "teich-triangulation v1";

/// One side record as written in a file (0-based internally).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SideRecord {
    pub edge: usize,
    pub partner: SideRef,
}

/// Raw gluing data as read from a file, before validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingSpec {
    pub genus: u32,
    pub punctures: u32,
    pub triangles: Vec<[SideRecord; 3]>,
    pub marks: Option<Vec<u8>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyTriangulation {
    Ideal(IdealTriangulation),
    Decorated(DecoratedTriangulation),
}

impl AnyTriangulation {
    pub fn ideal(&self) -> IdealTriangulation {
        match self {
            AnyTriangulation::Ideal(t) => t.clone(),
            AnyTriangulation::Decorated(d) => d.underlying(),
        }
    }
}

impl GluingSpec {
    /// Validates the gluing and builds the triangulation it describes.
    pub fn build(&self) -> Result<AnyTriangulation, SurfaceError> {
        let m2 = 2 * self.genus as i64 - 2 + self.punctures as i64;
        if m2 <= 0 {
            return Err(SurfaceError::NonPositiveComplexity {
                genus: self.genus as i64,
                punctures: self.punctures as i64,
            });
        }
        let m = m2 as usize;
        if self.triangles.len() != 2 * m {
            return Err(SurfaceError::TriangleCount(self.triangles.len()));
        }
        let n = self.triangles.len();
        for (t, tri) in self.triangles.iter().enumerate() {
            for (s, rec) in tri.iter().enumerate() {
                let p = rec.partner;
                if p.triangle >= n || p.side > 2 {
                    return Err(SurfaceError::NonInvolutiveGluing { triangle: t + 1, side: s });
                }
                if p == SideRef::new(t, s) {
                    return Err(SurfaceError::SideGluedToItself { triangle: t + 1, side: s });
                }
                let back = self.triangles[p.triangle][p.side];
                if back.partner != SideRef::new(t, s) {
                    return Err(SurfaceError::NonInvolutiveGluing { triangle: t + 1, side: s });
                }
                if back.edge != rec.edge {
                    return Err(SurfaceError::LabelMismatch { triangle: t + 1, side: s });
                }
            }
        }
        let distinct: std::collections::BTreeSet<usize> = self.triangles.iter().flatten().map(|r| r.edge).collect();
        if distinct.len() != 3 * m || distinct.iter().any(|&e| e >= 3 * m) {
            return Err(SurfaceError::EdgeCount { expected: 3 * m, found: distinct.len() });
        }
        let triples: Vec<[usize; 3]> = self.triangles.iter().map(|t| t.map(|r| r.edge)).collect();
        let built = match &self.marks {
            None => AnyTriangulation::Ideal(IdealTriangulation::from_triples(triples)?),
            Some(marks) => {
                AnyTriangulation::Decorated(DecoratedTriangulation::from_marked_triples(triples, marks.clone())?)
            }
        };
        let topo = match &built {
            AnyTriangulation::Ideal(t) => t.topology(),
            AnyTriangulation::Decorated(d) => d.topology(),
        };
        if topo.genus != self.genus || topo.punctures != self.punctures {
            return Err(SurfaceError::TopologyMismatch {
                declared_genus: self.genus,
                declared_punctures: self.punctures,
                genus: topo.genus,
                punctures: topo.punctures,
            });
        }
        Ok(built)
    }

    fn from_listing(triples: &[[usize; 3]], marks: Option<Vec<u8>>, genus: u32, punctures: u32) -> Self {
        let mut where_is: Vec<Vec<SideRef>> = vec![Vec::new(); 3 * triples.len() / 2];
        for (t, tri) in triples.iter().enumerate() {
            for (s, &e) in tri.iter().enumerate() {
                where_is[e].push(SideRef::new(t, s));
            }
        }
        let triangles = triples
            .iter()
            .enumerate()
            .map(|(t, tri)| {
                let mut recs = [SideRecord { edge: 0, partner: SideRef::new(0, 0) }; 3];
                for (s, &e) in tri.iter().enumerate() {
                    let me = SideRef::new(t, s);
                    let partner = *where_is[e].iter().find(|&&r| r != me).expect("edge occurs twice");
                    recs[s] = SideRecord { edge: e, partner };
                }
                recs
            })
            .collect();
        Self { genus, punctures, triangles, marks }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{HEADER}\ngenus {}\npunctures {}\n", self.genus, self.punctures);
        for (t, tri) in self.triangles.iter().enumerate() {
            out.push_str(&format!("triangle {}:", t + 1));
            for r in tri {
                out.push_str(&format!(" ({}, {}, {})", r.edge + 1, r.partner.triangle + 1, r.partner.side));
            }
            if let Some(marks) = &self.marks {
                out.push_str(&format!(" mark {}", marks[t]));
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, SurfaceError> {
        let err = |line: usize, message: &str| SurfaceError::Parse { line, message: message.to_string() };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        match lines.next() {
            Some((_, l)) if l == HEADER => {}
            Some((n, _)) => return Err(err(n, &format!("expected header `{HEADER}`"))),
            None => return Err(err(0, "empty input")),
        }
        let mut keyed = |key: &str| -> Result<u32, SurfaceError> {
            let (n, l) = lines.next().ok_or_else(|| err(0, &format!("missing `{key}`")))?;
            let rest = l.strip_prefix(key).ok_or_else(|| err(n, &format!("expected `{key} <n>`")))?;
            rest.trim().parse().map_err(|_| err(n, &format!("bad {key} value")))
        };
        let genus = keyed("genus")?;
        let punctures = keyed("punctures")?;

        let mut triangles = Vec::new();
        let mut marks = Vec::new();
        for (n, l) in lines {
            let rest = l.strip_prefix("triangle").ok_or_else(|| err(n, "expected `triangle k: ...`"))?;
            let (idx, body) = rest.split_once(':').ok_or_else(|| err(n, "missing `:`"))?;
            let idx: usize = idx.trim().parse().map_err(|_| err(n, "bad triangle number"))?;
            if idx != triangles.len() + 1 {
                return Err(err(n, "triangles must be numbered 1, 2, ... in order"));
            }
            let (records, mark) = parse_triangle_body(body).map_err(|m| err(n, &m))?;
            triangles.push(records);
            marks.push(mark);
        }
        let marks = if marks.iter().all(Option::is_some) && !marks.is_empty() {
            Some(marks.into_iter().map(Option::unwrap).collect())
        } else if marks.iter().all(Option::is_none) {
            None
        } else {
            return Err(SurfaceError::PartialMarks);
        };
        Ok(Self { genus, punctures, triangles, marks })
    }
}

fn parse_triangle_body(body: &str) -> Result<([SideRecord; 3], Option<u8>), String> {
    let mut records = Vec::new();
    let mut rest = body.trim();
    while let Some(stripped) = rest.strip_prefix('(') {
        let (inner, after) = stripped.split_once(')').ok_or("unclosed `(`")?;
        let nums: Vec<&str> = inner.split(',').map(str::trim).collect();
        if nums.len() != 3 {
            return Err("side record needs three entries".into());
        }
        let edge: usize = nums[0].parse().map_err(|_| "bad edge label")?;
        let tri: usize = nums[1].parse().map_err(|_| "bad partner triangle")?;
        let side: usize = nums[2].parse().map_err(|_| "bad partner side")?;
        if edge == 0 || tri == 0 {
            return Err("edge labels and triangle numbers start at 1".into());
        }
        if side > 2 {
            return Err("sides are numbered 0, 1, 2".into());
        }
        records.push(SideRecord { edge: edge - 1, partner: SideRef::new(tri - 1, side) });
        rest = after.trim_start();
    }
    if records.len() != 3 {
        return Err("a triangle has exactly three sides".into());
    }
    let mark = if rest.is_empty() {
        None
    } else {
        let m = rest.strip_prefix("mark").ok_or("unexpected trailing text")?;
        let m: u8 = m.trim().parse().map_err(|_| "bad mark")?;
        if m > 2 {
            return Err("mark must be 0, 1 or 2".into());
        }
        Some(m)
    };
    Ok(([records[0], records[1], records[2]], mark))
}

pub fn parse_triangulation(text: &str) -> Result<AnyTriangulation, SurfaceError> {
    GluingSpec::parse(text)?.build()
}

pub fn write_ideal(t: &IdealTriangulation) -> String {
    let topo = t.topology();
    GluingSpec::from_listing(t.triangles(), None, topo.genus, topo.punctures).to_text()
}

pub fn write_decorated(d: &DecoratedTriangulation) -> String {
    let topo = d.topology();
    let (triples, marks): (Vec<[usize; 3]>, Vec<u8>) = d.marked_listing().into_iter().unzip();
    GluingSpec::from_listing(&triples, Some(marks), topo.genus, topo.punctures).to_text()
}
