use super::{DecoratedTriangulation, IdealTriangulation};

/// A bundled desk-scale surface with an ideal and a decorated triangulation.
#[derive(Clone, Debug)]
pub struct BuiltinSurface {
    pub name: &'static str,
    pub description: &'static str,
    pub ideal: IdealTriangulation,
    pub decorated: DecoratedTriangulation,
}

struct Entry {
    name: &'static str,
    description: &'static str,
    triangles: &'static [[usize; 3]],
    marks: &'static [u8],
}

const ENTRIES: &[Entry] = &[
    Entry {
        name: "torus-1",
        description: "once-punctured torus (g=1, p=1, m=1)",
        triangles: &[[0, 1, 2], [0, 1, 2]],
        marks: &[0, 0],
    },
    Entry {
        name: "sphere-3",
        description: "thrice-punctured sphere (g=0, p=3, m=1)",
        triangles: &[[0, 1, 2], [0, 2, 1]],
        marks: &[0, 0],
    },
    Entry {
        name: "sphere-4",
        description: "four-punctured sphere, tetrahedral triangulation (g=0, p=4, m=2)",
        triangles: &[[1, 3, 0], [0, 4, 2], [2, 5, 1], [3, 5, 4]],
        marks: &[0, 0, 1, 0],
    },
    Entry {
        name: "torus-2",
        description: "twice-punctured torus (g=1, p=2, m=2)",
        triangles: &[[0, 1, 2], [0, 4, 3], [1, 5, 4], [2, 3, 5]],
        marks: &[1, 2, 0, 0],
    },
];

fn build(e: &Entry) -> BuiltinSurface {
    let ideal = IdealTriangulation::from_triples(e.triangles.to_vec()).expect("bundled triangulation is valid");
    let decorated = DecoratedTriangulation::from_marked_triples(e.triangles.to_vec(), e.marks.to_vec())
        .expect("bundled triangulation is valid");
    BuiltinSurface { name: e.name, description: e.description, ideal, decorated }
}

pub fn builtin_surfaces() -> Vec<BuiltinSurface> {
    ENTRIES.iter().map(build).collect()
}

pub fn builtin(name: &str) -> Option<BuiltinSurface> {
    ENTRIES.iter().find(|e| e.name == name).map(build)
}

/// One triangulation and edge for each of the eight flip cases, numbered as
/// in [`super::FlipCase::number`].
const FLIP_CASES: &[(u8, &str, &[[usize; 3]], usize)] = &[
    (1, "sphere-4", &[[1, 3, 0], [0, 4, 2], [2, 5, 1], [3, 5, 4]], 0),
    (2, "sphere-4", &[[0, 3, 4], [0, 2, 1], [2, 5, 1], [3, 5, 4]], 1),
    (3, "sphere-4", &[[0, 3, 4], [1, 2, 2], [1, 5, 0], [3, 5, 4]], 1),
    (4, "sphere-4", &[[4, 3, 3], [1, 2, 2], [1, 5, 0], [4, 5, 0]], 5),
    (5, "sphere-4", &[[4, 3, 3], [1, 2, 2], [1, 5, 0], [4, 5, 0]], 0),
    (6, "sphere-3", &[[0, 1, 2], [0, 2, 1]], 0),
    (7, "sphere-3", &[[0, 2, 2], [0, 1, 1]], 0),
    (8, "torus-1", &[[0, 1, 2], [0, 1, 2]], 0),
];

/// A triangulation together with an edge whose flip falls in the given case.
#[derive(Clone, Debug)]
pub struct FlipCaseInstance {
    pub case: u8,
    pub surface: &'static str,
    pub triangulation: IdealTriangulation,
    pub edge: usize,
}

pub fn flip_case_instances() -> Vec<FlipCaseInstance> {
    FLIP_CASES
        .iter()
        .map(|&(case, surface, triangles, edge)| FlipCaseInstance {
            case,
            surface,
            triangulation: IdealTriangulation::from_triples(triangles.to_vec()).expect("valid triangulation"),
            edge,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::classify_flip;

    #[test]
    fn flip_case_table_is_classified_as_listed() {
        let all = flip_case_instances();
        assert_eq!(all.iter().map(|c| c.case).collect::<Vec<_>>(), (1..=8).collect::<Vec<_>>());
        for c in all {
            let roles = classify_flip(&c.triangulation, c.edge).unwrap();
            assert_eq!(roles.case.number(), c.case);
            assert_eq!(c.triangulation.topology(), builtin(c.surface).unwrap().ideal.topology());
        }
    }
    use crate::surface::{parse_triangulation, write_decorated, write_ideal, AnyTriangulation, Topology};

    #[test]
    fn catalog_has_four_surfaces() {
        assert_eq!(builtin_surfaces().len(), 4);
    }

    #[test]
    fn declared_topologies_match() {
        let expect = [("torus-1", 1, 1), ("sphere-3", 0, 3), ("sphere-4", 0, 4), ("torus-2", 1, 2)];
        for (name, g, p) in expect {
            let s = builtin(name).unwrap();
            assert_eq!(s.ideal.topology(), Topology { genus: g, punctures: p }, "{name}");
            assert!(s.ideal.complexity() > 0);
        }
    }

    #[test]
    fn entries_round_trip_through_text() {
        for s in builtin_surfaces() {
            let back = parse_triangulation(&write_ideal(&s.ideal)).unwrap();
            assert_eq!(back, AnyTriangulation::Ideal(s.ideal.clone()));
            let text = write_decorated(&s.decorated);
            let back = parse_triangulation(&text).unwrap();
            assert_eq!(back, AnyTriangulation::Decorated(s.decorated.clone()));
            let AnyTriangulation::Decorated(d) = back else { unreachable!() };
            assert_eq!(write_decorated(&d), text);
        }
    }
}
