//! Seeded generators for plane multigraphs and trinities.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::build::{trinity_from_bipartite, trinity_from_plane_graph};
use crate::error::{Error, Result};
use crate::map::PlaneGraph;
use crate::trinity::Trinity;

/// A connected plane multigraph without loops on `n_vertices` vertices
/// and `n_edges` edges, deterministic in `seed`.
///
/// A random tree is grown by attaching each new vertex into a random
/// corner; further edges join two corners at distinct vertices of a
/// random face, which keeps the embedding planar.
pub fn random_plane_graph(n_vertices: usize, n_edges: usize, seed: u64) -> Result<PlaneGraph> {
    if n_vertices < 2 {
        return Err(Error::Infeasible("at least two vertices are needed".into()));
    }
    if n_edges + 1 < n_vertices {
        return Err(Error::Infeasible(format!(
            "{n_edges} edges cannot connect {n_vertices} vertices"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rot: Vec<Vec<usize>> = vec![Vec::new(); n_vertices];
    let mut k = 0;
    for v in 1..n_vertices {
        let u = rng.gen_range(0..v);
        let pos = rng.gen_range(0..=rot[u].len());
        rot[u].insert(pos, 2 * k);
        rot[v].push(2 * k + 1);
        k += 1;
    }
    while k < n_edges {
        let g = assemble(&rot, k)?;
        let f = rng.gen_range(0..g.n_faces());
        let darts = g.face_darts(f);
        let x = *darts.choose(&mut rng).unwrap();
        let others: Vec<usize> =
            darts.iter().copied().filter(|&y| g.vertex_of(y) != g.vertex_of(x)).collect();
        let y = *others.choose(&mut rng).expect("a face of a loopless map meets two vertices");
        // the corner of face f at vertex(x) lies just before x in the rotation
        for (dart, new) in [(x, 2 * k), (y, 2 * k + 1)] {
            let v = g.vertex_of(dart);
            let pos = rot[v].iter().position(|&z| z == dart).unwrap();
            rot[v].insert(pos, new);
        }
        k += 1;
    }
    assemble(&rot, k)
}

fn assemble(rot: &[Vec<usize>], n_edges: usize) -> Result<PlaneGraph> {
    let vertex_ids = (1..=rot.len()).map(|i| format!("v{i}")).collect();
    let edge_ids = (1..=n_edges).map(|i| format!("e{i}")).collect();
    PlaneGraph::with_generated_darts(vertex_ids, edge_ids, rot.to_vec())
}

/// The trinity of a random plane graph.
pub fn random_plane_trinity(n_vertices: usize, n_edges: usize, seed: u64) -> Result<Trinity> {
    trinity_from_plane_graph(&random_plane_graph(n_vertices, n_edges, seed)?)
}

/// A trinity whose D_V is in general not a bidirected graph.
///
/// A random plane graph is two-colored along a BFS tree; edges joining two
/// vertices of one class are subdivided by a node of the other class. The
/// resulting plane bipartite graph serves as G_R.
pub fn random_general_trinity(n_vertices: usize, n_edges: usize, seed: u64) -> Result<Trinity> {
    let g = random_plane_graph(n_vertices, n_edges, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut side = vec![None; g.n_vertices()];
    side[0] = Some(rng.gen_bool(0.5));
    let mut queue = std::collections::VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for &d in g.darts_at(v) {
            let w = g.vertex_of(d ^ 1);
            if side[w].is_none() {
                side[w] = Some(!side[v].unwrap());
                queue.push_back(w);
            }
        }
    }
    let side: Vec<bool> = side.into_iter().map(Option::unwrap).collect();

    // subdivide monochromatic edges
    let mut vertex_ids: Vec<String> = g.vertex_ids().to_vec();
    let mut violet = side.clone();
    let mut rot: Vec<Vec<usize>> = (0..g.n_vertices()).map(|v| g.darts_at(v).to_vec()).collect();
    let mut edge_ids: Vec<String> = g.edge_ids().to_vec();
    for k in 0..g.n_edges() {
        let (a, b) = g.endpoints(k);
        if side[a] != side[b] {
            continue;
        }
        vertex_ids.push(format!("s{}", k + 1));
        violet.push(!side[a]);
        let new = edge_ids.len();
        edge_ids.push(format!("{}x", g.edge_id(k)));
        // edge k now ends at the midpoint; the new edge runs from the
        // midpoint to b, taking over dart 2k + 1's slot at b
        let pos = rot[b].iter().position(|&z| z == 2 * k + 1).unwrap();
        rot[b][pos] = 2 * new + 1;
        rot.push(vec![2 * k + 1, 2 * new]);
    }
    let bip = PlaneGraph::with_generated_darts(vertex_ids, edge_ids, rot)?;
    trinity_from_bipartite(&bip, &violet, None)
}
