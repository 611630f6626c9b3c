//! Combinatorial maps: embedded graphs and digraphs as darts, a rotation
//! permutation and the pairing `d <-> d ^ 1`.
//!
//! Edge `k` owns darts `2k` and `2k + 1`. The rotation sends a dart to the
//! next dart counterclockwise around its vertex. The face permutation is
//! `phi(d) = rot(d ^ 1)`; its orbits are the faces, and the orbit of `d` is
//! the face on the right of `d` when walking away from its vertex.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};

/// Return `base`, or `base` with underscores appended, so that the result
/// is not yet in `used`. The returned id is inserted into `used`.
pub fn unique_id(base: &str, used: &mut HashSet<String>) -> String {
    let mut id = base.to_string();
    while used.contains(&id) {
        id.push('_');
    }
    used.insert(id.clone());
    id
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneGraph {
    vertex_ids: Vec<String>,
    edge_ids: Vec<String>,
    dart_names: Vec<String>,
    vertex_darts: Vec<Vec<usize>>,
    dart_vertex: Vec<usize>,
    rot: Vec<usize>,
    rot_inv: Vec<usize>,
    face_of: Vec<usize>,
    faces: Vec<Vec<usize>>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
}

impl PlaneGraph {
    /// Build a map from its counterclockwise dart lists.
    ///
    /// `vertex_darts[v]` lists the darts at vertex `v` in counterclockwise
    /// order; every dart `0..2 * edge_ids.len()` must occur exactly once.
    pub fn new(
        vertex_ids: Vec<String>,
        edge_ids: Vec<String>,
        dart_names: Vec<String>,
        vertex_darts: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n_darts = 2 * edge_ids.len();
        if vertex_darts.len() != vertex_ids.len() {
            return Err(Error::InvalidMap("one dart list per vertex required".into()));
        }
        if dart_names.len() != n_darts {
            return Err(Error::InvalidMap("one name per dart required".into()));
        }
        let vertex_index = index_of(&vertex_ids, "vertex")?;
        let edge_index = index_of(&edge_ids, "edge")?;
        index_of(&dart_names, "dart")?;

        let mut dart_vertex = vec![usize::MAX; n_darts];
        let mut rot = vec![usize::MAX; n_darts];
        for (v, darts) in vertex_darts.iter().enumerate() {
            for (i, &d) in darts.iter().enumerate() {
                if d >= n_darts {
                    return Err(Error::InvalidMap(format!("dart index {d} out of range")));
                }
                if dart_vertex[d] != usize::MAX {
                    return Err(Error::InvalidMap(format!(
                        "dart {} listed twice",
                        dart_names[d]
                    )));
                }
                dart_vertex[d] = v;
                rot[d] = darts[(i + 1) % darts.len()];
            }
        }
        if let Some(d) = dart_vertex.iter().position(|&v| v == usize::MAX) {
            return Err(Error::InvalidMap(format!("dart {} not attached to a vertex", dart_names[d])));
        }
        let mut rot_inv = vec![0; n_darts];
        for d in 0..n_darts {
            rot_inv[rot[d]] = d;
        }

        let mut face_of = vec![usize::MAX; n_darts];
        let mut faces = Vec::new();
        for start in 0..n_darts {
            if face_of[start] != usize::MAX {
                continue;
            }
            let f = faces.len();
            let mut orbit = Vec::new();
            let mut d = start;
            while face_of[d] == usize::MAX {
                face_of[d] = f;
                orbit.push(d);
                d = rot[d ^ 1];
            }
            faces.push(orbit);
        }

        Ok(PlaneGraph {
            vertex_ids,
            edge_ids,
            dart_names,
            vertex_darts,
            dart_vertex,
            rot,
            rot_inv,
            face_of,
            faces,
            vertex_index,
            edge_index,
        })
    }

    /// Like [`PlaneGraph::new`] with dart names `<edge>a` / `<edge>b`.
    pub fn with_generated_darts(
        vertex_ids: Vec<String>,
        edge_ids: Vec<String>,
        vertex_darts: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let dart_names = generated_dart_names(&edge_ids);
        Self::new(vertex_ids, edge_ids, dart_names, vertex_darts)
    }

    /// A straight-line drawing: darts are ordered around each vertex by the
    /// angle of the segment leaving it. Edge `k` runs from `edges[k].1`
    /// (dart `2k`) to `edges[k].2`.
    pub fn from_straight_line(
        vertex_ids: Vec<String>,
        coords: &[(f64, f64)],
        edges: &[(String, usize, usize)],
    ) -> Result<Self> {
        if coords.len() != vertex_ids.len() {
            return Err(Error::InvalidMap("one coordinate pair per vertex required".into()));
        }
        let mut around: Vec<Vec<(f64, usize)>> = vec![Vec::new(); vertex_ids.len()];
        for (k, &(_, a, b)) in edges.iter().enumerate() {
            if a >= coords.len() || b >= coords.len() {
                return Err(Error::InvalidMap(format!("edge {} has an unknown endpoint", edges[k].0)));
            }
            let angle = |from: usize, to: usize| {
                (coords[to].1 - coords[from].1).atan2(coords[to].0 - coords[from].0)
            };
            around[a].push((angle(a, b), 2 * k));
            around[b].push((angle(b, a), 2 * k + 1));
        }
        let vertex_darts = around
            .into_iter()
            .map(|mut list| {
                list.sort_by(|x, y| x.0.total_cmp(&y.0));
                list.into_iter().map(|(_, d)| d).collect()
            })
            .collect();
        let edge_ids = edges.iter().map(|e| e.0.clone()).collect();
        Self::with_generated_darts(vertex_ids, edge_ids, vertex_darts)
    }

    pub fn n_vertices(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn n_darts(&self) -> usize {
        2 * self.edge_ids.len()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertex_ids
    }

    pub fn edge_ids(&self) -> &[String] {
        &self.edge_ids
    }

    pub fn dart_names(&self) -> &[String] {
        &self.dart_names
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertex_ids[v]
    }

    pub fn edge_id(&self, e: usize) -> &str {
        &self.edge_ids[e]
    }

    pub fn dart_name(&self, d: usize) -> &str {
        &self.dart_names[d]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    pub fn vertex(&self, id: &str) -> Result<usize> {
        self.vertex_index(id).ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn edge(&self, id: &str) -> Result<usize> {
        self.edge_index(id).ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    /// Darts at `v` in counterclockwise order.
    pub fn darts_at(&self, v: usize) -> &[usize] {
        &self.vertex_darts[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.vertex_darts[v].len()
    }

    pub fn vertex_of(&self, d: usize) -> usize {
        self.dart_vertex[d]
    }

    pub fn rot(&self, d: usize) -> usize {
        self.rot[d]
    }

    pub fn rot_inv(&self, d: usize) -> usize {
        self.rot_inv[d]
    }

    pub fn phi(&self, d: usize) -> usize {
        self.rot[d ^ 1]
    }

    /// Face on the right of `d`.
    pub fn face_right(&self, d: usize) -> usize {
        self.face_of[d]
    }

    /// Face on the left of `d`; also the face containing the corner
    /// between `d` and `rot(d)`.
    pub fn face_left(&self, d: usize) -> usize {
        self.face_of[d ^ 1]
    }

    /// Darts of face `f` in face-permutation order, starting from the
    /// smallest dart. Faces are numbered by their smallest dart.
    pub fn face_darts(&self, f: usize) -> &[usize] {
        &self.faces[f]
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        (self.dart_vertex[2 * e], self.dart_vertex[2 * e + 1])
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices() as i64 - self.n_edges() as i64 + self.n_faces() as i64
    }

    pub fn is_connected(&self) -> bool {
        if self.n_vertices() == 0 {
            return false;
        }
        let mut seen = vec![false; self.n_vertices()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &d in self.darts_at(v) {
                let w = self.dart_vertex[d ^ 1];
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n_vertices()
    }

    /// Genus-0 check. Only meaningful for connected maps.
    pub fn is_planar(&self) -> bool {
        self.euler_characteristic() == 2
    }

    /// Err unless the map is connected and of genus 0.
    pub fn check_plane(&self) -> Result<()> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        if !self.is_planar() {
            return Err(Error::NonPlanar(self.euler_characteristic()));
        }
        Ok(())
    }

    /// The same map with every rotation reversed (the mirror image).
    pub fn mirror(&self) -> PlaneGraph {
        let vertex_darts = self
            .vertex_darts
            .iter()
            .map(|ds| {
                let mut r: Vec<usize> = ds.iter().rev().copied().collect();
                r.rotate_right(1);
                r
            })
            .collect();
        PlaneGraph::new(self.vertex_ids.clone(), self.edge_ids.clone(), self.dart_names.clone(), vertex_darts)
            .expect("mirror of a valid map")
    }

    /// Planar dual with the rotation of the negative orientation: dart `d`
    /// of the dual sits at the face on the right of `d`, and the dual
    /// rotation is the face permutation. Dual vertices are named `f1`, `f2`,
    /// ... in the order of their smallest dart.
    pub fn planar_dual(&self) -> Result<PlaneGraph> {
        self.check_plane()?;
        let vertex_ids = (0..self.n_faces()).map(|f| format!("f{}", f + 1)).collect();
        let vertex_darts = self.faces.clone();
        PlaneGraph::new(vertex_ids, self.edge_ids.clone(), self.dart_names.clone(), vertex_darts)
    }
}

fn index_of(ids: &[String], what: &str) -> Result<HashMap<String, usize>> {
    let mut map = HashMap::with_capacity(ids.len());
    for (i, id) in ids.iter().enumerate() {
        if map.insert(id.clone(), i).is_some() {
            return Err(Error::InvalidMap(format!("duplicate {what} id {id}")));
        }
    }
    Ok(map)
}

pub(crate) fn generated_dart_names(edge_ids: &[String]) -> Vec<String> {
    edge_ids
        .iter()
        .flat_map(|e| [format!("{e}a"), format!("{e}b")])
        .collect()
}

/// An embedded digraph. Arc `k` of the underlying map has its tail dart at
/// `2k` and its head dart at `2k + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RibbonDigraph {
    map: PlaneGraph,
}

impl RibbonDigraph {
    pub fn new(map: PlaneGraph) -> Self {
        RibbonDigraph { map }
    }

    /// Every edge of `g` becomes two opposite arcs. The arc leaving along
    /// dart `d` of `g` gets index `d` and the name of that dart; at each
    /// vertex the out-dart precedes the in-dart counterclockwise.
    pub fn bidirect(g: &PlaneGraph) -> Result<Self> {
        let arc_ids: Vec<String> = g.dart_names().to_vec();
        let vertex_darts = (0..g.n_vertices())
            .map(|v| g.darts_at(v).iter().flat_map(|&d| [2 * d, 2 * (d ^ 1) + 1]).collect())
            .collect();
        let map = PlaneGraph::with_generated_darts(g.vertex_ids().to_vec(), arc_ids, vertex_darts)?;
        Ok(RibbonDigraph { map })
    }

    pub fn map(&self) -> &PlaneGraph {
        &self.map
    }

    pub fn n_vertices(&self) -> usize {
        self.map.n_vertices()
    }

    pub fn n_arcs(&self) -> usize {
        self.map.n_edges()
    }

    pub fn tail(&self, a: usize) -> usize {
        self.map.vertex_of(2 * a)
    }

    pub fn head(&self, a: usize) -> usize {
        self.map.vertex_of(2 * a + 1)
    }

    pub fn is_tail_dart(d: usize) -> bool {
        d % 2 == 0
    }

    /// Out-arcs of `v` in the cyclic order inherited from the rotation.
    pub fn out_arcs(&self, v: usize) -> Vec<usize> {
        self.map.darts_at(v).iter().filter(|&&d| d % 2 == 0).map(|&d| d / 2).collect()
    }

    pub fn in_arcs(&self, v: usize) -> Vec<usize> {
        self.map.darts_at(v).iter().filter(|&&d| d % 2 == 1).map(|&d| d / 2).collect()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.map.darts_at(v).iter().filter(|&&d| d % 2 == 0).count()
    }

    /// First vertex at which tail and head darts fail to alternate.
    pub fn unbalanced_vertex(&self) -> Option<usize> {
        (0..self.n_vertices()).find(|&v| {
            let darts = self.map.darts_at(v);
            let k = darts.len();
            k % 2 == 1 || (0..k).any(|i| darts[i] % 2 == darts[(i + 1) % k] % 2)
        })
    }

    pub fn is_balanced(&self) -> bool {
        self.unbalanced_vertex().is_none()
    }

    pub fn is_eulerian(&self) -> bool {
        (0..self.n_vertices()).all(|v| {
            let out = self.out_degree(v);
            out * 2 == self.map.degree(v)
        })
    }
}

/// Whether two maps are isomorphic as oriented maps: a dart bijection
/// commuting with rotation and pairing. When `directed`, tail darts must
/// map to tail darts. Vertex and edge names are ignored.
pub fn maps_isomorphic(a: &PlaneGraph, b: &PlaneGraph, directed: bool) -> bool {
    if a.n_vertices() != b.n_vertices() || a.n_edges() != b.n_edges() {
        return false;
    }
    if a.n_darts() == 0 {
        return true;
    }
    if !a.is_connected() || !b.is_connected() {
        return false;
    }
    let n = a.n_darts();
    'outer: for target in 0..n {
        if directed && target % 2 != 0 {
            continue;
        }
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        let mut stack = vec![(0usize, target)];
        while let Some((x, y)) = stack.pop() {
            if map[x] != usize::MAX {
                if map[x] != y {
                    continue 'outer;
                }
                continue;
            }
            if used[y] || (directed && x % 2 != y % 2) {
                continue 'outer;
            }
            map[x] = y;
            used[y] = true;
            stack.push((a.rot(x), b.rot(y)));
            stack.push((x ^ 1, y ^ 1));
        }
        return true;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(prefix: &str, n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("{prefix}{i}")).collect()
    }

    pub(crate) fn theta() -> PlaneGraph {
        PlaneGraph::with_generated_darts(ids("v", 2), ids("e", 3), vec![vec![0, 2, 4], vec![5, 3, 1]]).unwrap()
    }

    #[test]
    fn theta_faces_and_dual() {
        let g = theta();
        assert_eq!(g.n_faces(), 3);
        assert!(g.is_planar());
        let d = g.planar_dual().unwrap();
        assert_eq!(d.n_vertices(), 3);
        assert!((0..3).all(|v| d.degree(v) == 2));
        let dd = d.planar_dual().unwrap();
        assert!(maps_isomorphic(&g, &dd, false));
        for dart in 0..g.n_darts() {
            assert_eq!(dd.rot(dart), g.rot(dart));
        }
    }

    #[test]
    fn k2_dual_is_a_loop() {
        let g = PlaneGraph::with_generated_darts(ids("v", 2), ids("e", 1), vec![vec![0], vec![1]]).unwrap();
        let d = g.planar_dual().unwrap();
        assert_eq!(d.n_vertices(), 1);
        assert_eq!(d.endpoints(0), (0, 0));
    }

    #[test]
    fn non_planar_rotation_is_flagged() {
        // theta with one rotation reversed lives on the torus
        let g = PlaneGraph::with_generated_darts(ids("v", 2), ids("e", 3), vec![vec![0, 2, 4], vec![1, 3, 5]]).unwrap();
        assert_eq!(g.n_faces(), 1);
        assert!(matches!(g.check_plane(), Err(Error::NonPlanar(0))));
    }

    #[test]
    fn rejects_malformed_maps() {
        assert!(PlaneGraph::with_generated_darts(ids("v", 2), ids("e", 1), vec![vec![0], vec![0]]).is_err());
        assert!(PlaneGraph::with_generated_darts(ids("v", 2), ids("e", 1), vec![vec![0], vec![]]).is_err());
        assert!(PlaneGraph::with_generated_darts(vec!["v".into(), "v".into()], ids("e", 1), vec![vec![0], vec![1]]).is_err());
    }

    #[test]
    fn bidirected_theta_is_balanced() {
        let d = RibbonDigraph::bidirect(&theta()).unwrap();
        assert_eq!(d.n_arcs(), 6);
        assert!(d.is_balanced());
        assert!(d.is_eulerian());
        assert!(d.map().is_planar());
        for a in 0..6 {
            assert_ne!(d.tail(a), d.head(a));
        }
    }

    #[test]
    fn isomorphism_ignores_names_and_start() {
        let g = theta();
        let h = PlaneGraph::with_generated_darts(ids("x", 2), ids("y", 3), vec![vec![3, 5, 1], vec![2, 0, 4]]).unwrap();
        assert!(maps_isomorphic(&g, &h, false));
        let mirror = PlaneGraph::with_generated_darts(ids("v", 2), ids("e", 3), vec![vec![0, 4, 2], vec![5, 1, 3]]).unwrap();
        assert!(mirror.is_planar());
        assert_eq!(mirror, g.mirror());
        // the mirror of theta is isomorphic to theta (it is symmetric)
        assert!(maps_isomorphic(&g, &mirror, false));
    }
}
