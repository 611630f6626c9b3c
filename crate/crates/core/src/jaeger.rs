//! Bernardi tours, break divisors, Jaeger trees and the Bernardi process.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hypertree::{is_spanning_tree, spanning_trees, Bipartite};
use crate::map::PlaneGraph;
use crate::sandpile::{Arborescence, ChipConfig, Direction};
use crate::trinity::{Color, Trinity};

/// Default guard on spanning-tree enumeration.
pub const TREE_LIMIT: usize = 1_000_000;

/// A base vertex `b0` and a base edge incident to it. The other end of the
/// edge is `b1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Base {
    pub b0: usize,
    pub edge: usize,
}

impl Base {
    pub fn new(g: &PlaneGraph, b0: usize, edge: usize) -> Result<Self> {
        let base = Base { b0, edge };
        base.dart(g)?;
        Ok(base)
    }

    /// Look up a base by ids; `edge` may be omitted when `b0` and `b1` are
    /// joined by a single edge.
    pub fn from_ids(g: &PlaneGraph, b0: &str, b1: &str, edge: Option<&str>) -> Result<Self> {
        let v0 = g.vertex(b0)?;
        let v1 = g.vertex(b1)?;
        let k = match edge {
            Some(id) => g.edge(id)?,
            None => {
                let joining: Vec<usize> = (0..g.n_edges())
                    .filter(|&k| {
                        let (a, b) = g.endpoints(k);
                        (a, b) == (v0, v1) || (a, b) == (v1, v0)
                    })
                    .collect();
                match joining.as_slice() {
                    [k] => *k,
                    [] => return Err(Error::InvalidBase(format!("no edge joins {b0} and {b1}"))),
                    _ => {
                        return Err(Error::InvalidBase(format!(
                            "several edges join {b0} and {b1}; name one"
                        )))
                    }
                }
            }
        };
        let (a, b) = g.endpoints(k);
        if !((a, b) == (v0, v1) || (a, b) == (v1, v0)) {
            return Err(Error::InvalidBase(format!("edge {} does not join {b0} and {b1}", g.edge_id(k))));
        }
        Base::new(g, v0, k)
    }

    /// The dart of the base edge at `b0`.
    pub fn dart(&self, g: &PlaneGraph) -> Result<usize> {
        if self.b0 >= g.n_vertices() || self.edge >= g.n_edges() {
            return Err(Error::InvalidBase("index out of range".into()));
        }
        [2 * self.edge, 2 * self.edge + 1]
            .into_iter()
            .find(|&d| g.vertex_of(d) == self.b0)
            .ok_or_else(|| {
                Error::InvalidBase(format!(
                    "edge {} is not incident to {}",
                    g.edge_id(self.edge),
                    g.vertex_id(self.b0)
                ))
            })
    }

    pub fn b1(&self, g: &PlaneGraph) -> Result<usize> {
        Ok(g.vertex_of(self.dart(g)? ^ 1))
    }

    /// All bases of `g`, one per dart, in dart order.
    pub fn all(g: &PlaneGraph) -> Vec<Base> {
        (0..g.n_darts()).map(|d| Base { b0: g.vertex_of(d), edge: d / 2 }).collect()
    }
}

/// The steps of a tour and the edges it cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TourRecord {
    /// (current vertex, current edge) per step.
    pub steps: Vec<(usize, usize)>,
    /// (non-tree edge, vertex where it was cut), in cutting order.
    pub cuts: Vec<(usize, usize)>,
}

impl TourRecord {
    /// The trace `v1e1, v2e2, ...`.
    pub fn trace(&self, g: &PlaneGraph) -> String {
        self.steps
            .iter()
            .map(|&(v, k)| format!("{}{}", g.vertex_id(v), g.edge_id(k)))
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// The vertex at which `edge` was cut, if it was.
    pub fn cut_at(&self, edge: usize) -> Option<usize> {
        self.cuts.iter().find(|&&(k, _)| k == edge).map(|&(_, v)| v)
    }
}

/// The tour of a spanning tree: a tree edge is crossed and the walk goes on
/// with the next edge around the far end; a non-tree edge is cut through
/// and the walk goes on with the next edge around the current vertex.
pub fn tour(g: &PlaneGraph, tree: &[bool], base: Base) -> Result<TourRecord> {
    if !is_spanning_tree(g, tree) {
        return Err(Error::InvalidBase("the edge set is not a spanning tree".into()));
    }
    let start = base.dart(g)?;
    let mut steps = Vec::with_capacity(g.n_darts());
    let mut cuts = Vec::new();
    let mut cut = vec![false; g.n_edges()];
    let mut d = start;
    loop {
        let (v, k) = (g.vertex_of(d), d / 2);
        steps.push((v, k));
        d = if tree[k] {
            g.rot(d ^ 1)
        } else {
            if !cut[k] {
                cut[k] = true;
                cuts.push((k, v));
            }
            g.rot(d)
        };
        if d == start {
            break;
        }
    }
    Ok(TourRecord { steps, cuts })
}

/// Drop a chip at the current vertex whenever the tour cuts a non-tree
/// edge.
pub fn bernardi_break_divisor(g: &PlaneGraph, tree: &[bool], base: Base) -> Result<ChipConfig> {
    let rec = tour(g, tree, base)?;
    let mut x = ChipConfig::zero(g.n_vertices());
    for &(_, v) in &rec.cuts {
        x.values_mut()[v] += 1;
    }
    Ok(x)
}

/// Whether every non-tree edge is cut at an endpoint in `cut`.
pub fn is_jaeger_tree(g: &PlaneGraph, tree: &[bool], base: Base, cut: &[bool]) -> Result<bool> {
    let rec = tour(g, tree, base)?;
    Ok(rec.cuts.iter().all(|&(_, v)| cut[v]))
}

/// All spanning trees of `g` that are Jaeger trees for the cut class.
pub fn jaeger_trees(g: &PlaneGraph, base: Base, cut: &[bool], limit: usize) -> Result<Vec<Vec<bool>>> {
    base.dart(g)?;
    let mut out = Vec::new();
    for t in spanning_trees(g, limit)? {
        if is_jaeger_tree(g, &t, base, cut)? {
            out.push(t);
        }
    }
    Ok(out)
}

/// The Bernardi process for a hypertree `f` on the side of `h`: walk as in
/// a tour; an unvisited edge met first at a vertex of the other class is
/// removed whenever `f` stays a hypertree without it. The edges left form
/// the unique Jaeger tree, cut at the other class, realizing `f`.
pub fn bernardi_process(h: &Bipartite, f: &[i64], base: Base) -> Result<Vec<bool>> {
    let g = h.graph();
    if !h.is_hypertree(f) {
        return Err(Error::NotAHypertree(format!("{f:?}")));
    }
    let start = base.dart(g)?;
    let mut alive = vec![true; g.n_edges()];
    let mut fixed = vec![false; g.n_edges()];
    let mut seen = vec![false; g.n_darts()];
    let next_alive = |alive: &[bool], mut x: usize| {
        for _ in 0..g.n_darts() {
            if alive[x / 2] {
                return x;
            }
            x = g.rot(x);
        }
        unreachable!("f stays realizable so no vertex loses all its edges")
    };
    let mut d = start;
    while !seen[d] {
        seen[d] = true;
        let k = d / 2;
        if !h.in_side(g.vertex_of(d)) && !fixed[k] {
            alive[k] = false;
            if h.is_hypertree_in(f, Some(&alive)) {
                d = next_alive(&alive, g.rot(d));
                continue;
            }
            alive[k] = true;
        }
        fixed[k] = true;
        d = next_alive(&alive, g.rot(d ^ 1));
    }
    debug_assert!(is_spanning_tree(g, &alive));
    debug_assert_eq!(h.degrees_minus_one(&alive), f);
    Ok(alive)
}

/// The Bernardi bijection for one base: each hypertree on the side of `h`
/// is sent, through its Jaeger tree, to the hypertree of that tree on the
/// other class.
#[derive(Clone, Debug)]
pub struct BernardiTable {
    forward: BTreeMap<Vec<i64>, Vec<i64>>,
    backward: BTreeMap<Vec<i64>, Vec<i64>>,
    trees: BTreeMap<Vec<i64>, Vec<bool>>,
}

impl BernardiTable {
    pub fn new(h: &Bipartite, base: Base, limit: usize) -> Result<Self> {
        let other = Bipartite::new(h.graph(), h.other().to_vec())?;
        let mut forward = BTreeMap::new();
        let mut backward = BTreeMap::new();
        let mut trees = BTreeMap::new();
        for f in h.enumerate(limit)? {
            let t = bernardi_process(h, &f, base)?;
            let g = other.degrees_minus_one(&t);
            backward.insert(g.clone(), f.clone());
            forward.insert(f.clone(), g);
            trees.insert(f, t);
        }
        Ok(BernardiTable { forward, backward, trees })
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    /// Side hypertree to other-class hypertree.
    pub fn image(&self, f: &[i64]) -> Result<&[i64]> {
        self.forward.get(f).map(Vec::as_slice).ok_or_else(|| Error::NotAHypertree(format!("{f:?}")))
    }

    /// Other-class hypertree back to the side.
    pub fn preimage(&self, g: &[i64]) -> Result<&[i64]> {
        self.backward.get(g).map(Vec::as_slice).ok_or_else(|| Error::NotAHypertree(format!("{g:?}")))
    }

    pub fn jaeger_tree(&self, f: &[i64]) -> Result<&[bool]> {
        self.trees.get(f).map(Vec::as_slice).ok_or_else(|| Error::NotAHypertree(format!("{f:?}")))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i64>, &Vec<i64>)> {
        self.forward.iter()
    }
}

/// Which way [`bernardi_bijection`] maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BijectionDirection {
    /// From the side of the bipartite graph to the cut class.
    Forward,
    /// From the cut class back to the side.
    Backward,
}

/// β for a single hypertree. The backward direction builds the full table.
pub fn bernardi_bijection(h: &Bipartite, f: &[i64], base: Base, direction: BijectionDirection) -> Result<Vec<i64>> {
    match direction {
        BijectionDirection::Forward => {
            let t = bernardi_process(h, f, base)?;
            Ok(Bipartite::new(h.graph(), h.other().to_vec())?.degrees_minus_one(&t))
        }
        BijectionDirection::Backward => Ok(BernardiTable::new(h, base, TREE_LIMIT)?.preimage(f)?.to_vec()),
    }
}

/// A base of a trinity: nodes `b0`, `b1` and the trinity edge joining them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TrinityBase {
    pub b0: usize,
    pub b1: usize,
    pub edge: usize,
}

impl TrinityBase {
    pub fn new(t: &Trinity, b0: usize, edge: usize) -> Result<Self> {
        let [a, b] = t.edge_ends(edge);
        let b1 = if a == b0 {
            b
        } else if b == b0 {
            a
        } else {
            return Err(Error::InvalidBase(format!("edge {} does not touch {}", t.edge_id(edge), t.node_id(b0))));
        };
        Ok(TrinityBase { b0, b1, edge })
    }

    /// Parse `b0:b1:edge` or `b0:b1`.
    pub fn parse(t: &Trinity, text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let (b0, b1) = match parts.as_slice() {
            [a, b] | [a, b, _] => (t.node(a)?, t.node(b)?),
            _ => return Err(Error::InvalidBase(format!("expected b0:b1[:edge], got {text:?}"))),
        };
        let edge = match parts.get(2) {
            Some(id) => t.edge_index(id).ok_or_else(|| Error::UnknownEdge(id.to_string()))?,
            None => {
                let joining: Vec<usize> = (0..t.n_edges())
                    .filter(|&k| {
                        let [a, b] = t.edge_ends(k);
                        (a, b) == (b0, b1) || (a, b) == (b1, b0)
                    })
                    .collect();
                match joining.as_slice() {
                    [k] => *k,
                    _ => return Err(Error::InvalidBase(format!("{text:?} does not name a single edge"))),
                }
            }
        };
        let base = TrinityBase::new(t, b0, edge)?;
        if base.b1 != b1 {
            return Err(Error::InvalidBase(format!("edge does not join the nodes of {text:?}")));
        }
        Ok(base)
    }

    /// The color of the derived graph the base lives in.
    pub fn color(&self, t: &Trinity) -> Color {
        t.edge_color(self.edge)
    }

    /// The same base as a base of G_c.
    pub fn in_derived(&self, t: &Trinity) -> Result<Base> {
        let c = t.edge_color(self.edge);
        let v = t
            .bipartite_vertices(c)
            .iter()
            .position(|&x| x == self.b0)
            .expect("edge endpoints lie in the derived graph");
        let k = t.edges_of_color(c).iter().position(|&x| x == self.edge).unwrap();
        let g = t.derived_bipartite(c);
        Base::new(&g, v, k)
    }

    /// A default base of G_c: the first edge of color `c`, from its end in
    /// the first class of `c.others()`.
    pub fn default_for(t: &Trinity, c: Color) -> Result<Self> {
        let k = *t.edges_of_color(c).first().ok_or(Error::Empty)?;
        TrinityBase::new(t, t.edge_end(k, c.others().0), k)
    }

    /// All bases of G_c.
    pub fn all(t: &Trinity, c: Color) -> Vec<Self> {
        let mut out = Vec::new();
        for k in t.edges_of_color(c) {
            for v in t.edge_ends(k) {
                out.push(TrinityBase::new(t, v, k).unwrap());
            }
        }
        out
    }

    /// The red node `s0` of the triangle on the base edge that is black if
    /// `b0` is violet and white if `b0` is emerald. Only meaningful for
    /// bases of G_R.
    pub fn s0(&self, t: &Trinity) -> Result<usize> {
        if t.edge_color(self.edge) != Color::R {
            return Err(Error::InvalidBase("s0 is defined for bases of G_R".into()));
        }
        let tri = match t.color(self.b0) {
            Color::V => t.black_triangle(self.edge),
            _ => t.white_triangle(self.edge),
        };
        Ok(t.corner(tri, Color::R))
    }
}

/// Positions of the nodes of class `side` in the vertex list of G_c.
pub fn side_positions(t: &Trinity, c: Color, side: Color) -> Vec<usize> {
    let verts = t.bipartite_vertices(c);
    t.class(side).iter().map(|&v| verts.iter().position(|&x| x == v).unwrap()).collect()
}

/// `f* = d|_E - 1 - f`, sending hypertrees on E in G_R to hypertrees on E
/// in G_V and back. Emerald degrees agree in both graphs.
pub fn dual_hypertree(t: &Trinity, f: &[i64], from: Color) -> Result<Vec<i64>> {
    let g = t.derived_bipartite(from);
    let h = Bipartite::new(&g, side_positions(t, from, Color::E))?;
    if !h.is_hypertree(f) {
        return Err(Error::NotAHypertree(format!("{f:?}")));
    }
    Ok(h.degree_vector_minus_one().iter().zip(f).map(|(d, x)| d - x).collect())
}

/// The non-tree edges of a spanning tree of G_R as arcs of D_R, with the
/// root `s0` of the base. Arc `k` of D_R is edge `k` of G_R.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualArcs {
    /// index of s0 in the red class
    pub root: usize,
    pub arcs: Vec<usize>,
}

impl DualArcs {
    /// The arcs as an arborescence of D_R in the given direction, if they
    /// form one.
    pub fn arborescence(&self, t: &Trinity, dir: Direction) -> Option<Arborescence> {
        Arborescence::from_arcs(&t.derived_digraph(Color::R), self.root, &self.arcs, dir).ok()
    }
}

pub fn jaeger_arborescence_dual(t: &Trinity, tree: &[bool], base: TrinityBase) -> Result<DualArcs> {
    let g = t.derived_bipartite(Color::R);
    if !is_spanning_tree(&g, tree) {
        return Err(Error::InvalidBase("the edge set is not a spanning tree of G_R".into()));
    }
    let s0 = base.s0(t)?;
    let root = t.class(Color::R).iter().position(|&x| x == s0).unwrap();
    let arcs = (0..g.n_edges()).filter(|&k| !tree[k]).collect();
    Ok(DualArcs { root, arcs })
}
