use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use teich_core::quantum_maps::KashaevParams;
use teich_core::rational::EqualityPolicy;
use teich_core::surface::{
    builtin, parse_triangulation, AnyTriangulation, DecoratedTriangulation, IdealTriangulation, SurfaceError,
    DEFAULT_SEARCH_DEPTH,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Surface {
        path: String,
        #[source]
        source: SurfaceError,
    },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("invalid policy: {0}")]
    Policy(String),
    #[error("--a and --b must be given the same number of times")]
    UnpairedParams,
}

/// A group of checks selectable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    ClassicalFlip,
    ClassicalDiagram,
    ExactSequence,
    Poisson,
    CfRelations,
    KashaevRelations,
    PentagonQuantum,
    PentagonOmega,
    Compat,
    Homomorphism,
    Q1Consistency,
    PathIndependence,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::ClassicalFlip,
        Suite::ClassicalDiagram,
        Suite::ExactSequence,
        Suite::Poisson,
        Suite::CfRelations,
        Suite::KashaevRelations,
        Suite::PentagonQuantum,
        Suite::PentagonOmega,
        Suite::Compat,
        Suite::Homomorphism,
        Suite::Q1Consistency,
        Suite::PathIndependence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ClassicalFlip => "classical-flip",
            Suite::ClassicalDiagram => "classical-diagram",
            Suite::ExactSequence => "exact-sequence",
            Suite::Poisson => "poisson",
            Suite::CfRelations => "cf-relations",
            Suite::KashaevRelations => "kashaev-relations",
            Suite::PentagonQuantum => "pentagon-quantum",
            Suite::PentagonOmega => "pentagon-omega",
            Suite::Compat => "compat",
            Suite::Homomorphism => "homomorphism",
            Suite::Q1Consistency => "q1-consistency",
            Suite::PathIndependence => "path-independence",
        }
    }

    /// Expands a suite name or group name.
    ///
    /// `path-independence` is left out of `all`: BFS compares labeled
    /// combinatorics, and combinatorially equal endpoints can still differ by
    /// a mapping class, which shows up as disagreeing paths.
    pub fn expand(name: &str) -> Result<Vec<Suite>, HarnessError> {
        use Suite::*;
        Ok(match name {
            "classical-all" => vec![ClassicalFlip, ClassicalDiagram, ExactSequence, Poisson],
            "quantum-all" => vec![CfRelations, KashaevRelations, Compat, Homomorphism, Q1Consistency],
            "all" => Suite::expand("classical-all")?.into_iter().chain(Suite::expand("quantum-all")?).collect(),
            other => vec![other.parse()?],
        })
    }
}

impl FromStr for Suite {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|suite| suite.name() == s).ok_or_else(|| HarnessError::UnknownSuite(s.to_string()))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A surface with both an ideal and a decorated triangulation. Files that
/// carry no marks are decorated with mark 0 on every triangle.
#[derive(Clone, Debug)]
pub struct Surface {
    pub name: String,
    pub ideal: IdealTriangulation,
    pub decorated: DecoratedTriangulation,
    /// Whether the marks came from the source rather than the default.
    pub marked: bool,
}

impl Surface {
    /// Loads a bundled surface by name, or else a triangulation file.
    pub fn load(source_name: &str) -> Result<Surface, HarnessError> {
        if let Some(b) = builtin(source_name) {
            return Ok(Surface { name: b.name.to_string(), ideal: b.ideal, decorated: b.decorated, marked: true });
        }
        let text = std::fs::read_to_string(source_name)
            .map_err(|source| HarnessError::Io { path: PathBuf::from(source_name), source })?;
        let wrap = |source| HarnessError::Surface { path: source_name.to_string(), source };
        let (ideal, decorated, marked) = match parse_triangulation(&text).map_err(wrap)? {
            AnyTriangulation::Decorated(d) => (d.underlying(), d, true),
            AnyTriangulation::Ideal(t) => {
                let marks = vec![0; t.num_triangles()];
                let d = DecoratedTriangulation::from_marked_triples(t.triangles().to_vec(), marks).map_err(wrap)?;
                (t, d, false)
            }
        };
        let name =
            Path::new(source_name).file_stem().map_or(source_name.to_string(), |s| s.to_string_lossy().into_owned());
        Ok(Surface { name, ideal, decorated, marked })
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub surface: Surface,
    pub suites: Vec<Suite>,
    pub policy: EqualityPolicy,
    /// Parameter pairs for the Kashaev-side suites.
    pub params: Vec<KashaevParams>,
    pub depth: usize,
    pub out: Option<PathBuf>,
}

impl SuiteConfig {
    pub fn new(surface: Surface) -> Self {
        Self {
            surface,
            suites: Vec::new(),
            policy: EqualityPolicy::default(),
            params: vec![KashaevParams::compatible()],
            depth: DEFAULT_SEARCH_DEPTH,
            out: None,
        }
    }

    /// Parses suite and group names, dropping repeats.
    pub fn with_suites<S: AsRef<str>>(mut self, names: &[S]) -> Result<Self, HarnessError> {
        for name in names {
            for s in Suite::expand(name.as_ref())? {
                if !self.suites.contains(&s) {
                    self.suites.push(s);
                }
            }
        }
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        self.policy.validate().map_err(|e| HarnessError::Policy(e.to_string()))?;
        if self.params.is_empty() {
            return Err(HarnessError::Policy("no (a, b) pair given".into()));
        }
        Ok(())
    }
}
