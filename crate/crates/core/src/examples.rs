//! Small worked examples used by tests, the acceptance harness and the
//! fixture files.

use crate::build::trinity_from_bipartite;
use crate::error::Result;
use crate::map::PlaneGraph;
use crate::trinity::Trinity;

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn numbered(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Two vertices joined by three parallel edges.
pub fn theta() -> PlaneGraph {
    PlaneGraph::with_generated_darts(numbered("v", 2), numbered("e", 3), vec![vec![0, 2, 4], vec![5, 3, 1]])
        .expect("theta is a valid map")
}

/// A single edge.
pub fn k2() -> PlaneGraph {
    PlaneGraph::with_generated_darts(numbered("v", 2), numbered("e", 1), vec![vec![0], vec![1]]).expect("K2 is a valid map")
}

/// Four vertices, five edges: a 4-cycle v1 v2 v3 v4 with the chord v2v4.
pub fn tour_example() -> PlaneGraph {
    let coords = [(8.0, 0.0), (4.0, 1.2), (0.0, 0.0), (4.0, -1.2)];
    let edges = [("e1", 0, 1), ("e2", 1, 2), ("e3", 2, 3), ("e4", 3, 0), ("e5", 1, 3)];
    let edges: Vec<(String, usize, usize)> = edges.iter().map(|&(id, a, b)| (id.to_string(), a, b)).collect();
    PlaneGraph::from_straight_line(strings(&["v1", "v2", "v3", "v4"]), &coords, &edges)
        .expect("tour example is a valid map")
}

/// The spanning tree {e1, e3, e5} of [`tour_example`].
pub fn tour_example_tree() -> Vec<bool> {
    vec![true, false, true, false, true]
}

/// The expected tour of [`tour_example_tree`] from v1 along e1.
pub const TOUR_EXAMPLE_TRACE: &str = "v1e1, v2e2, v2e5, v4e3, v3e2, v3e3, v4e4, v4e5, v2e1, v1e4";

/// The break divisor of [`tour_example_tree`] on (v1, v2, v3, v4).
pub const TOUR_EXAMPLE_DIVISOR: [i64; 4] = [0, 1, 0, 1];

/// Names of the edges of [`jaeger_example_graph`].
pub const JAEGER_EXAMPLE_EDGES: [&str; 9] =
    ["C-ec", "ec-A", "C-ed", "C-eb", "A-eb", "A-ea", "ea-B", "B-eb", "B-ed"];

/// A plane bipartite graph with violet A, B, C and emerald ec, ed, eb, ea,
/// with the violet mask.
pub fn jaeger_example_graph() -> (PlaneGraph, Vec<bool>) {
    let ids = strings(&["A", "B", "C", "ec", "ed", "eb", "ea"]);
    let coords = [(14.0, 2.0), (22.0, 2.0), (18.0, 8.5), (14.0, 6.5), (22.0, 6.5), (18.0, 4.0), (18.0, 0.0)];
    let index = |name: &str| ids.iter().position(|x| x == name).unwrap();
    let edges: Vec<(String, usize, usize)> = JAEGER_EXAMPLE_EDGES
        .iter()
        .map(|e| {
            let (a, b) = e.split_once('-').unwrap();
            (e.to_string(), index(a), index(b))
        })
        .collect();
    let g = PlaneGraph::from_straight_line(ids, &coords, &edges).expect("jaeger example is a valid map");
    (g, vec![true, true, true, false, false, false, false])
}

/// The trinity with G_R equal to [`jaeger_example_graph`].
pub fn jaeger_example() -> Result<Trinity> {
    let (g, violet) = jaeger_example_graph();
    trinity_from_bipartite(&g, &violet, None)
}

/// The seven V-cut Jaeger trees for base A along A-ea, each with its
/// hypertree on (ec, ed, eb, ea).
pub fn jaeger_example_panels() -> Vec<(Vec<&'static str>, [i64; 4])> {
    vec![
        (vec!["C-ed", "C-eb", "ec-A", "A-eb", "A-ea", "ea-B"], [0, 0, 1, 1]),
        (vec!["ec-A", "C-ed", "A-eb", "A-ea", "ea-B", "B-ed"], [0, 1, 0, 1]),
        (vec!["ec-A", "C-ed", "A-eb", "ea-B", "B-eb", "B-ed"], [0, 1, 1, 0]),
        (vec!["C-ec", "ec-A", "C-ed", "C-eb", "A-ea", "ea-B"], [1, 0, 0, 1]),
        (vec!["C-ec", "ec-A", "C-ed", "C-eb", "ea-B", "B-eb"], [1, 0, 1, 0]),
        (vec!["C-ec", "ec-A", "C-ed", "ea-B", "B-eb", "B-ed"], [1, 1, 0, 0]),
        (vec!["ec-A", "C-ed", "C-eb", "A-eb", "ea-B", "B-eb"], [0, 0, 2, 0]),
    ]
}

/// A spanning tree of [`jaeger_example_graph`] that is not a Jaeger tree.
pub const JAEGER_EXAMPLE_NON_JAEGER: [&str; 6] = ["C-ec", "ec-A", "C-ed", "C-eb", "A-ea", "B-eb"];

/// An edge mask of [`jaeger_example_graph`] from edge names.
pub fn jaeger_example_mask(names: &[&str]) -> Vec<bool> {
    JAEGER_EXAMPLE_EDGES.iter().map(|e| names.contains(e)).collect()
}
