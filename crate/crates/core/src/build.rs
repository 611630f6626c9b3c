//! Constructing trinities from plane bipartite graphs, plane graphs and
//! balanced plane digraphs.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::map::{unique_id, PlaneGraph, RibbonDigraph};
use crate::trinity::{Color, Tag, Trinity, TrinityData};

/// bip(G): subdivide every edge of `g` by a new node named after the edge.
///
/// Vertices of `g` come first, then one subdivision node per edge. The
/// half of edge `k` at the end of dart `d` becomes edge `d` of the result,
/// named after dart `d`, with its dart `2d` at the original vertex.
pub fn subdivide(g: &PlaneGraph) -> Result<(PlaneGraph, Vec<bool>)> {
    let mut used: HashSet<String> = g.vertex_ids().iter().cloned().collect();
    let mut vertex_ids = g.vertex_ids().to_vec();
    for e in g.edge_ids() {
        vertex_ids.push(unique_id(e, &mut used));
    }
    let edge_ids = g.dart_names().to_vec();
    let mut vertex_darts: Vec<Vec<usize>> = (0..g.n_vertices())
        .map(|v| g.darts_at(v).iter().map(|&d| 2 * d).collect())
        .collect();
    for k in 0..g.n_edges() {
        vertex_darts.push(vec![2 * (2 * k) + 1, 2 * (2 * k + 1) + 1]);
    }
    let is_first = (0..vertex_ids.len()).map(|v| v < g.n_vertices()).collect();
    let bip = PlaneGraph::with_generated_darts(vertex_ids, edge_ids, vertex_darts)?;
    Ok((bip, is_first))
}

/// The trinity whose G_R is the plane bipartite graph `g`, with `violet[v]`
/// telling the violet class apart from the emerald one. Red nodes are the
/// faces of `g`, named by `face_names` (indexed like `g`'s faces) or
/// `f1`, `f2`, ... when absent.
pub fn trinity_from_bipartite(
    g: &PlaneGraph,
    violet: &[bool],
    face_names: Option<&[String]>,
) -> Result<Trinity> {
    if g.n_edges() == 0 {
        return Err(Error::Empty);
    }
    g.check_plane()?;
    for k in 0..g.n_edges() {
        let (a, b) = g.endpoints(k);
        if violet[a] == violet[b] {
            return Err(Error::NotBipartite(format!("edge {} joins two nodes of one class", g.edge_id(k))));
        }
    }
    let mut used = HashSet::new();
    let mut data = TrinityData::default();
    let mut node_names = Vec::new();
    for v in 0..g.n_vertices() {
        let id = unique_id(g.vertex_id(v), &mut used);
        let c = if violet[v] { Color::V } else { Color::E };
        data.nodes.push((id.clone(), c));
        node_names.push(id);
    }
    let mut face_ids = Vec::new();
    for f in 0..g.n_faces() {
        let base = match face_names {
            Some(names) => names[f].clone(),
            None => format!("f{}", f + 1),
        };
        let id = unique_id(&base, &mut used);
        data.nodes.push((id.clone(), Color::R));
        face_ids.push(id);
    }

    let mut edge_used = HashSet::new();
    let red: Vec<String> = (0..g.n_edges()).map(|k| unique_id(g.edge_id(k), &mut edge_used)).collect();
    for k in 0..g.n_edges() {
        let (a, b) = g.endpoints(k);
        data.edges.push((red[k].clone(), node_names[a].clone(), node_names[b].clone()));
    }
    // corner edge c(d): vertex(d) to the face holding the corner (d, rot d)
    let corner: Vec<String> = (0..g.n_darts())
        .map(|d| unique_id(&format!("c_{}", g.dart_name(d)), &mut edge_used))
        .collect();
    for d in 0..g.n_darts() {
        data.edges.push((
            corner[d].clone(),
            node_names[g.vertex_of(d)].clone(),
            face_ids[g.face_left(d)].clone(),
        ));
    }
    for k in 0..g.n_edges() {
        let d = if violet[g.vertex_of(2 * k)] { 2 * k } else { 2 * k + 1 };
        let black = [red[k].clone(), corner[g.rot_inv(d)].clone(), corner[d ^ 1].clone()];
        let white = [red[k].clone(), corner[d].clone(), corner[g.rot_inv(d ^ 1)].clone()];
        data.triangles.push((white, Tag::White));
        data.triangles.push((black, Tag::Black));
    }
    Trinity::new(data)
}

/// The trinity of a plane graph: violet nodes are its vertices, emerald
/// nodes its edges and red nodes its faces. Red nodes carry the names the
/// planar dual gives to the faces.
pub fn trinity_from_plane_graph(g: &PlaneGraph) -> Result<Trinity> {
    if g.n_edges() == 0 {
        return Err(Error::Empty);
    }
    g.check_plane()?;
    let (bip, violet) = subdivide(g)?;
    let names: Vec<String> = (0..bip.n_faces())
        .map(|f| {
            let d = *bip.face_darts(f).iter().find(|&&d| d % 2 == 0).expect("face meets an original vertex");
            format!("f{}", g.face_right(d / 2) + 1)
        })
        .collect();
    trinity_from_bipartite(&bip, &violet, Some(&names))
}

/// The trinity of a balanced plane digraph `d`, whose D_V is `d`.
///
/// Faces on the right of the arcs become red nodes (`r1`, ...), faces on
/// the left emerald nodes (`e1`, ...). Each arc becomes a violet edge with
/// the arc's id.
pub fn trinity_from_balanced_digraph(d: &RibbonDigraph) -> Result<Trinity> {
    let g = d.map();
    if g.n_edges() == 0 {
        return Err(Error::Empty);
    }
    if let Some(v) = d.unbalanced_vertex() {
        return Err(Error::NotBalanced(g.vertex_id(v).to_string()));
    }
    g.check_plane()?;

    let mut used = HashSet::new();
    let mut data = TrinityData::default();
    let mut vname = Vec::new();
    for v in 0..g.n_vertices() {
        let id = unique_id(g.vertex_id(v), &mut used);
        data.nodes.push((id.clone(), Color::V));
        vname.push(id);
    }
    // faces made of tail darts are red, faces of head darts emerald
    let mut fname = vec![String::new(); g.n_faces()];
    let (mut nr, mut ne) = (0, 0);
    for f in 0..g.n_faces() {
        let first = g.face_darts(f)[0];
        let (base, color) = if first % 2 == 0 {
            nr += 1;
            (format!("r{nr}"), Color::R)
        } else {
            ne += 1;
            (format!("e{ne}"), Color::E)
        };
        let id = unique_id(&base, &mut used);
        data.nodes.push((id.clone(), color));
        fname[f] = id;
    }

    let mut edge_used = HashSet::new();
    let violet: Vec<String> = (0..g.n_edges()).map(|a| unique_id(g.edge_id(a), &mut edge_used)).collect();
    for a in 0..g.n_edges() {
        let (t, h) = (2 * a, 2 * a + 1);
        data.edges.push((violet[a].clone(), fname[g.face_right(t)].clone(), fname[g.face_right(h)].clone()));
    }
    let corner: Vec<String> = (0..g.n_darts())
        .map(|x| unique_id(&format!("c_{}", g.dart_name(x)), &mut edge_used))
        .collect();
    for x in 0..g.n_darts() {
        data.edges.push((
            corner[x].clone(),
            vname[g.vertex_of(x)].clone(),
            fname[g.face_right(g.rot(x))].clone(),
        ));
    }
    for a in 0..g.n_edges() {
        let (t, h) = (2 * a, 2 * a + 1);
        let black = [violet[a].clone(), corner[g.rot_inv(t)].clone(), corner[t].clone()];
        let white = [violet[a].clone(), corner[h].clone(), corner[g.rot_inv(h)].clone()];
        data.triangles.push((white, Tag::White));
        data.triangles.push((black, Tag::Black));
    }
    Trinity::new(data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::maps_isomorphic;

    fn ids(prefix: &str, n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("{prefix}{i}")).collect()
    }

    fn k2() -> PlaneGraph {
        PlaneGraph::with_generated_darts(ids("v", 2), ids("e", 1), vec![vec![0], vec![1]]).unwrap()
    }

    fn theta() -> PlaneGraph {
        PlaneGraph::with_generated_darts(ids("v", 2), ids("e", 3), vec![vec![0, 2, 4], vec![5, 3, 1]]).unwrap()
    }

    fn count_tags(t: &Trinity) -> (usize, usize) {
        let w = (0..t.n_triangles()).filter(|&i| t.tag(i) == Tag::White).count();
        (w, t.n_triangles() - w)
    }

    #[test]
    fn k2_trinity_counts() {
        let t = trinity_from_plane_graph(&k2()).unwrap();
        assert_eq!(t.class(Color::V).len(), 2);
        assert_eq!(t.class(Color::E).len(), 1);
        assert_eq!(t.class(Color::R).len(), 1);
        assert_eq!(count_tags(&t), (2, 2));
    }

    #[test]
    fn theta_trinity_counts() {
        let t = trinity_from_plane_graph(&theta()).unwrap();
        assert_eq!(t.n_nodes(), 8);
        assert_eq!(t.n_triangles(), 12);
        let gr = t.derived_bipartite(Color::R);
        assert_eq!(gr.n_edges(), 6);
        // K_{2,3}: every violet node sees every emerald node
        for &v in t.class(Color::V) {
            let deg = t.edges_around(v).iter().filter(|&&k| t.edge_color(k) == Color::R).count();
            assert_eq!(deg, 3);
        }
    }

    #[test]
    fn plane_graph_dv_is_bidirection() {
        for g in [k2(), theta()] {
            let t = trinity_from_plane_graph(&g).unwrap();
            let dv = t.derived_digraph(Color::V);
            let bi = RibbonDigraph::bidirect(&g).unwrap();
            assert!(maps_isomorphic(dv.map(), bi.map(), true));
        }
    }

    #[test]
    fn plane_graph_dr_is_bidirected_dual() {
        let g = theta();
        let t = trinity_from_plane_graph(&g).unwrap();
        let dr = t.derived_digraph(Color::R);
        let dual = g.planar_dual().unwrap();
        // the dual carries the negative orientation; bidirecting it and
        // mirroring back gives D_R
        let bi = RibbonDigraph::bidirect(&dual).unwrap().map().mirror();
        assert!(maps_isomorphic(dr.map(), &bi, true));
        let mut names: Vec<_> = dr.map().vertex_ids().to_vec();
        names.sort();
        let mut dual_names = dual.vertex_ids().to_vec();
        dual_names.sort();
        assert_eq!(names, dual_names);
    }

    #[test]
    fn digraph_round_trip() {
        for g in [k2(), theta()] {
            let d = RibbonDigraph::bidirect(&g).unwrap();
            let t = trinity_from_balanced_digraph(&d).unwrap();
            let back = t.derived_digraph(Color::V);
            assert!(maps_isomorphic(back.map(), d.map(), true));
        }
    }

    #[test]
    fn directed_two_cycle() {
        let g = PlaneGraph::with_generated_darts(ids("v", 2), ids("a", 2), vec![vec![0, 3], vec![1, 2]]).unwrap();
        let d = RibbonDigraph::new(g);
        assert!(d.is_balanced());
        let t = trinity_from_balanced_digraph(&d).unwrap();
        assert_eq!(t.class(Color::V).len(), 2);
        assert_eq!(t.class(Color::R).len(), 1);
        assert_eq!(t.class(Color::E).len(), 1);
    }

    #[test]
    fn unbalanced_digraph_is_rejected() {
        let g = PlaneGraph::with_generated_darts(ids("v", 2), ids("a", 2), vec![vec![0, 2], vec![1, 3]]).unwrap();
        let d = RibbonDigraph::new(g);
        assert!(matches!(trinity_from_balanced_digraph(&d), Err(Error::NotBalanced(_))));
    }

    #[test]
    fn derived_digraphs_are_balanced_and_degrees_match_tags() {
        let t = trinity_from_plane_graph(&theta()).unwrap();
        for c in Color::ALL {
            let d = t.derived_digraph(c);
            assert!(d.is_balanced(), "D_{c} unbalanced");
            for (i, &v) in t.class(c).iter().enumerate() {
                let black = t.triangles_around(v).iter().filter(|&&x| t.tag(x) == Tag::Black).count();
                assert_eq!(d.out_degree(i), black);
            }
        }
    }
}
