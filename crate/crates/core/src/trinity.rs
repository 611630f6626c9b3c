//! Trinities: properly three-colored triangulations of the sphere whose
//! triangles are tagged white or black, and the six graphs derived from
//! them.
//!
//! Orientation convention: in a white triangle the colors red, violet,
//! emerald follow each other counterclockwise; in a black triangle red,
//! emerald, violet do.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::map::{PlaneGraph, RibbonDigraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    R,
    E,
    V,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::R, Color::E, Color::V];

    pub fn index(self) -> usize {
        match self {
            Color::R => 0,
            Color::E => 1,
            Color::V => 2,
        }
    }

    /// The two other colors in the order used for the derived bipartite
    /// graph: G_R is on (V, E), G_E on (R, V), G_V on (E, R).
    pub fn others(self) -> (Color, Color) {
        match self {
            Color::R => (Color::V, Color::E),
            Color::E => (Color::R, Color::V),
            Color::V => (Color::E, Color::R),
        }
    }

    pub fn third(a: Color, b: Color) -> Color {
        debug_assert_ne!(a, b);
        Color::ALL.into_iter().find(|&c| c != a && c != b).unwrap()
    }

    pub fn name(self) -> &'static str {
        match self {
            Color::R => "R",
            Color::E => "E",
            Color::V => "V",
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Color {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "R" => Ok(Color::R),
            "E" => Ok(Color::E),
            "V" => Ok(Color::V),
            _ => Err(format!("unknown color {s:?} (expected R, E or V)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tag {
    White,
    Black,
}

impl Tag {
    pub fn flipped(self) -> Tag {
        match self {
            Tag::White => Tag::Black,
            Tag::Black => Tag::White,
        }
    }

    /// Counterclockwise color order of a triangle with this tag.
    pub fn ccw_colors(self) -> [Color; 3] {
        match self {
            Tag::White => [Color::R, Color::V, Color::E],
            Tag::Black => [Color::R, Color::E, Color::V],
        }
    }
}

/// Id-level description of a trinity, as read from or written to a file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TrinityData {
    pub nodes: Vec<(String, Color)>,
    pub edges: Vec<(String, String, String)>,
    pub triangles: Vec<([String; 3], Tag)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub problems: Vec<String>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.problems.is_empty()
    }

    pub fn mentions(&self, needle: &str) -> bool {
        self.problems.iter().any(|p| p.contains(needle))
    }

    fn push(&mut self, msg: String) {
        self.problems.push(msg);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.problems {
            writeln!(f, "  - {p}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Trinity {
    data: TrinityData,
    node_color: Vec<Color>,
    node_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
    edge_ends: Vec<[usize; 2]>,
    edge_color: Vec<Color>,
    tri_edges: Vec<[usize; 3]>,
    tri_tag: Vec<Tag>,
    /// triangle corners indexed by `Color::index`
    tri_nodes: Vec<[usize; 3]>,
    /// [white, black] triangle of each edge
    edge_tris: Vec<[usize; 2]>,
    /// counterclockwise triangle sequence around each node
    node_tris: Vec<Vec<usize>>,
    class: [Vec<usize>; 3],
}

struct Resolved {
    node_color: Vec<Color>,
    node_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
    edge_ends: Vec<[usize; 2]>,
    edge_color: Vec<Color>,
    tri_edges: Vec<[usize; 3]>,
    tri_tag: Vec<Tag>,
    tri_nodes: Vec<[usize; 3]>,
}

/// Check every trinity invariant and list all violations.
pub fn validate_trinity(data: &TrinityData) -> ValidationReport {
    match analyze(data) {
        Ok(_) => ValidationReport::default(),
        Err(report) => report,
    }
}

fn analyze(data: &TrinityData) -> std::result::Result<Trinity, ValidationReport> {
    let mut report = ValidationReport::default();
    let Some(res) = resolve(data, &mut report) else {
        return Err(report);
    };
    let n = res.node_color.len();
    let e = res.edge_ends.len();
    let t = res.tri_edges.len();

    // each edge in exactly one white and one black triangle
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); e];
    for (ti, es) in res.tri_edges.iter().enumerate() {
        for &k in es {
            incident[k].push(ti);
        }
    }
    let mut edge_tris = vec![[usize::MAX; 2]; e];
    let mut coverage_ok = true;
    for k in 0..e {
        let tris = &incident[k];
        if tris.len() != 2 {
            report.push(format!(
                "edge coverage: edge {} lies in {} triangles, expected 2",
                data.edges[k].0,
                tris.len()
            ));
            coverage_ok = false;
            continue;
        }
        let (a, b) = (tris[0], tris[1]);
        if res.tri_tag[a] == res.tri_tag[b] {
            report.push(format!(
                "tag alternation: edge with two same-tag triangles ({}, both {:?})",
                data.edges[k].0, res.tri_tag[a]
            ));
            coverage_ok = false;
            continue;
        }
        edge_tris[k] = if res.tri_tag[a] == Tag::White { [a, b] } else { [b, a] };
    }

    if 2 * e != 3 * t {
        report.push(format!("Euler: {e} edges and {t} triangles violate e = 3t/2"));
    }
    let chi = n as i64 - e as i64 + t as i64;
    if chi != 2 {
        report.push(format!("Euler: nodes - edges + triangles = {chi}, expected 2"));
    }

    // connectivity of the 1-skeleton
    if n > 0 {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &[a, b] in &res.edge_ends {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            report.push(format!("connectivity: node {} is not reachable", data.nodes[v].0));
        }
    } else {
        report.push("connectivity: no nodes".into());
    }

    // rotation around each node must be a single cycle through all its triangles
    let mut node_tris: Vec<Vec<usize>> = vec![Vec::new(); n];
    if coverage_ok {
        let mut at_node: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (ti, corners) in res.tri_nodes.iter().enumerate() {
            for &v in corners {
                at_node[v].push(ti);
            }
        }
        for v in 0..n {
            let tris = &at_node[v];
            if tris.is_empty() {
                report.push(format!("link: node {} lies in no triangle", data.nodes[v].0));
                continue;
            }
            let mut cycle = Vec::with_capacity(tris.len());
            let mut cur = tris[0];
            loop {
                cycle.push(cur);
                let out = out_edge(&res, cur, v);
                let [w, b] = edge_tris[out];
                let next = if w == cur { b } else { w };
                if next == tris[0] || cycle.len() > tris.len() {
                    break;
                }
                cur = next;
            }
            if cycle.len() != tris.len() {
                report.push(format!(
                    "link: the triangles around node {} do not form a single disk",
                    data.nodes[v].0
                ));
                continue;
            }
            node_tris[v] = cycle;
        }
    }

    if !report.is_empty() {
        return Err(report);
    }
    let mut class: [Vec<usize>; 3] = Default::default();
    for (v, c) in res.node_color.iter().enumerate() {
        class[c.index()].push(v);
    }
    Ok(Trinity {
        data: data.clone(),
        node_color: res.node_color,
        node_index: res.node_index,
        edge_index: res.edge_index,
        edge_ends: res.edge_ends,
        edge_color: res.edge_color,
        tri_edges: res.tri_edges,
        tri_tag: res.tri_tag,
        tri_nodes: res.tri_nodes,
        edge_tris,
        node_tris,
        class,
    })
}

/// Resolve ids and check coloring and triangle shape. Returns None when
/// the data is too broken to continue.
fn resolve(data: &TrinityData, report: &mut ValidationReport) -> Option<Resolved> {
    let mut node_index = HashMap::new();
    let mut node_color = Vec::new();
    for (id, c) in &data.nodes {
        if node_index.insert(id.clone(), node_color.len()).is_some() {
            report.push(format!("duplicate node id {id}"));
        }
        node_color.push(*c);
    }
    let mut edge_index = HashMap::new();
    let mut edge_ends = Vec::new();
    let mut edge_color = Vec::new();
    for (id, a, b) in &data.edges {
        if edge_index.insert(id.clone(), edge_ends.len()).is_some() {
            report.push(format!("duplicate edge id {id}"));
        }
        let (Some(&ia), Some(&ib)) = (node_index.get(a), node_index.get(b)) else {
            report.push(format!("edge {id} references an unknown node"));
            edge_ends.push([usize::MAX; 2]);
            edge_color.push(Color::R);
            continue;
        };
        let (ca, cb) = (node_color[ia], node_color[ib]);
        if ca == cb {
            report.push(format!("coloring: edge {id} joins two {ca} nodes"));
            edge_color.push(ca);
        } else {
            edge_color.push(Color::third(ca, cb));
        }
        edge_ends.push([ia, ib]);
    }
    if !report.is_empty() {
        return None;
    }
    let mut tri_edges = Vec::new();
    let mut tri_tag = Vec::new();
    let mut tri_nodes = Vec::new();
    for (ti, (es, tag)) in data.triangles.iter().enumerate() {
        let mut idx = [0usize; 3];
        let mut ok = true;
        for (i, eid) in es.iter().enumerate() {
            match edge_index.get(eid) {
                Some(&k) => idx[i] = k,
                None => {
                    report.push(format!("triangle {} references unknown edge {eid}", ti + 1));
                    ok = false;
                }
            }
        }
        if !ok {
            continue;
        }
        if idx[0] == idx[1] || idx[1] == idx[2] || idx[0] == idx[2] {
            report.push(format!("triangle {} repeats an edge", ti + 1));
            continue;
        }
        // one edge of each color, and they must close up
        let mut by_color = [usize::MAX; 3];
        for &k in &idx {
            by_color[edge_color[k].index()] = k;
        }
        if by_color.contains(&usize::MAX) {
            report.push(format!("triangle {} does not have one edge of each color", ti + 1));
            continue;
        }
        let mut corners = [usize::MAX; 3];
        let mut closed = true;
        for &k in &idx {
            for &v in &edge_ends[k] {
                let slot = &mut corners[node_color[v].index()];
                if *slot == usize::MAX {
                    *slot = v;
                } else if *slot != v {
                    closed = false;
                }
            }
        }
        if !closed {
            report.push(format!("triangle {} is not a closed triple of edges", ti + 1));
            continue;
        }
        tri_edges.push(idx);
        tri_tag.push(*tag);
        tri_nodes.push(corners);
    }
    if !report.is_empty() {
        return None;
    }
    Some(Resolved {
        node_color,
        node_index,
        edge_index,
        edge_ends,
        edge_color,
        tri_edges,
        tri_tag,
        tri_nodes,
    })
}

/// In triangle `t` with counterclockwise corners (v, b, c), the edge vc:
/// the edge crossed when turning counterclockwise around `v`.
fn out_edge(res: &Resolved, t: usize, v: usize) -> usize {
    let ccw = res.tri_tag[t].ccw_colors();
    let cv = res.node_color[v];
    let pos = ccw.iter().position(|&c| c == cv).unwrap();
    let c = ccw[(pos + 2) % 3];
    // edge joining v and the corner of color c has the remaining color
    let want = Color::third(cv, c);
    res.tri_edges[t].into_iter().find(|&k| res.edge_color[k] == want).unwrap()
}

impl Trinity {
    pub fn new(data: TrinityData) -> Result<Self> {
        analyze(&data).map_err(Error::InvalidTrinity)
    }

    pub fn data(&self) -> &TrinityData {
        &self.data
    }

    pub fn n_nodes(&self) -> usize {
        self.node_color.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edge_ends.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.tri_edges.len()
    }

    pub fn node_id(&self, v: usize) -> &str {
        &self.data.nodes[v].0
    }

    pub fn edge_id(&self, k: usize) -> &str {
        &self.data.edges[k].0
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.node_index.get(id).copied()
    }

    pub fn node(&self, id: &str) -> Result<usize> {
        self.node_index(id).ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    pub fn color(&self, v: usize) -> Color {
        self.node_color[v]
    }

    /// Color of an edge: the color missing from its endpoints.
    pub fn edge_color(&self, k: usize) -> Color {
        self.edge_color[k]
    }

    pub fn edge_ends(&self, k: usize) -> [usize; 2] {
        self.edge_ends[k]
    }

    /// Endpoint of edge `k` of color `c`.
    pub fn edge_end(&self, k: usize, c: Color) -> usize {
        let [a, b] = self.edge_ends[k];
        if self.node_color[a] == c {
            a
        } else {
            debug_assert_eq!(self.node_color[b], c);
            b
        }
    }

    pub fn tag(&self, t: usize) -> Tag {
        self.tri_tag[t]
    }

    pub fn triangle_edges(&self, t: usize) -> [usize; 3] {
        self.tri_edges[t]
    }

    pub fn corner(&self, t: usize, c: Color) -> usize {
        self.tri_nodes[t][c.index()]
    }

    pub fn white_triangle(&self, k: usize) -> usize {
        self.edge_tris[k][0]
    }

    pub fn black_triangle(&self, k: usize) -> usize {
        self.edge_tris[k][1]
    }

    pub fn white_triangles(&self) -> Vec<usize> {
        (0..self.n_triangles()).filter(|&t| self.tri_tag[t] == Tag::White).collect()
    }

    /// Nodes of color `c` in node order.
    pub fn class(&self, c: Color) -> &[usize] {
        &self.class[c.index()]
    }

    /// Triangles around `v` in counterclockwise order.
    pub fn triangles_around(&self, v: usize) -> &[usize] {
        &self.node_tris[v]
    }

    /// The edge of triangle `t` at `v` through which the counterclockwise
    /// walk around `v` enters `t`.
    fn in_edge(&self, t: usize, v: usize) -> usize {
        let ccw = self.tri_tag[t].ccw_colors();
        let cv = self.node_color[v];
        let pos = ccw.iter().position(|&c| c == cv).unwrap();
        let b = ccw[(pos + 1) % 3];
        let want = Color::third(cv, b);
        self.tri_edges[t].into_iter().find(|&k| self.edge_color[k] == want).unwrap()
    }

    /// Edges at `v` in counterclockwise order.
    pub fn edges_around(&self, v: usize) -> Vec<usize> {
        self.node_tris[v].iter().map(|&t| self.in_edge(t, v)).collect()
    }

    /// Edges of color `c`, in edge order.
    pub fn edges_of_color(&self, c: Color) -> Vec<usize> {
        (0..self.n_edges()).filter(|&k| self.edge_color[k] == c).collect()
    }

    /// Vertex list of G_c: the first class of `c.others()` in node order,
    /// followed by the second.
    pub fn bipartite_vertices(&self, c: Color) -> Vec<usize> {
        let (a, b) = c.others();
        self.class(a).iter().chain(self.class(b)).copied().collect()
    }

    /// G_c: the nodes of the two other colors joined by the edges of color
    /// `c`, with the rotation read off the triangulation. Vertex order is
    /// [`Trinity::bipartite_vertices`], edge order is
    /// [`Trinity::edges_of_color`]; dart `2k` of edge `k` sits at its
    /// endpoint in the first class.
    pub fn derived_bipartite(&self, c: Color) -> PlaneGraph {
        let verts = self.bipartite_vertices(c);
        let edges = self.edges_of_color(c);
        let first = c.others().0;
        let mut local_edge = vec![usize::MAX; self.n_edges()];
        for (i, &k) in edges.iter().enumerate() {
            local_edge[k] = i;
        }
        let vertex_darts = verts
            .iter()
            .map(|&v| {
                self.edges_around(v)
                    .into_iter()
                    .filter(|&k| self.edge_color[k] == c)
                    .map(|k| 2 * local_edge[k] + usize::from(self.node_color[v] != first))
                    .collect()
            })
            .collect();
        let vertex_ids = verts.iter().map(|&v| self.node_id(v).to_string()).collect();
        let edge_ids = edges.iter().map(|&k| self.edge_id(k).to_string()).collect();
        PlaneGraph::with_generated_darts(vertex_ids, edge_ids, vertex_darts)
            .expect("derived bipartite graph of a valid trinity is a valid map")
    }

    /// D_c: the nodes of color `c`, with an arc for each edge of color `c`
    /// from the `c`-corner of its black triangle to the `c`-corner of its
    /// white triangle. Vertex order is [`Trinity::class`], arc order
    /// [`Trinity::edges_of_color`].
    pub fn derived_digraph(&self, c: Color) -> RibbonDigraph {
        let verts = self.class(c);
        let edges = self.edges_of_color(c);
        let mut local_edge = vec![usize::MAX; self.n_edges()];
        for (i, &k) in edges.iter().enumerate() {
            local_edge[k] = i;
        }
        let vertex_darts = verts
            .iter()
            .map(|&v| {
                self.node_tris[v]
                    .iter()
                    .map(|&t| {
                        let opposite = self.tri_edges[t]
                            .into_iter()
                            .find(|&k| self.edge_color[k] == c)
                            .unwrap();
                        2 * local_edge[opposite] + usize::from(self.tri_tag[t] == Tag::White)
                    })
                    .collect()
            })
            .collect();
        let vertex_ids = verts.iter().map(|&v| self.node_id(v).to_string()).collect();
        let edge_ids = edges.iter().map(|&k| self.edge_id(k).to_string()).collect();
        let map = PlaneGraph::with_generated_darts(vertex_ids, edge_ids, vertex_darts)
            .expect("derived digraph of a valid trinity is a valid map");
        RibbonDigraph::new(map)
    }
}
