//! Rotor-routing on balanced plane digraphs and the transport of in-arborescences
//! of D_V to hypertrees.

use crate::error::{Error, Result};
use crate::hypertree::{is_spanning_tree, Bipartite};
use crate::jaeger::{dual_hypertree, side_positions};
use crate::map::RibbonDigraph;
use crate::sandpile::{Arborescence, ChipConfig, Direction, SandpileGroup};
use crate::trinity::{Color, Trinity};

/// The out-arc following `a` at its tail in the ribbon order.
pub fn next_out_arc(d: &RibbonDigraph, a: usize) -> usize {
    let g = d.map();
    let mut x = g.rot(2 * a);
    while x % 2 != 0 {
        x = g.rot(x);
    }
    x / 2
}

/// A rotor at each non-root vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RotorConfig {
    root: usize,
    rotors: Vec<Option<usize>>,
}

impl RotorConfig {
    pub fn new(d: &RibbonDigraph, root: usize, rotors: Vec<Option<usize>>) -> Result<Self> {
        if rotors.len() != d.n_vertices() || root >= d.n_vertices() || rotors[root].is_some() {
            return Err(Error::InvalidArborescence("rotor list does not match the vertices".into()));
        }
        for (v, r) in rotors.iter().enumerate() {
            match r {
                Some(a) if *a < d.n_arcs() && d.tail(*a) == v => {}
                None if v == root => {}
                _ => {
                    return Err(Error::InvalidArborescence(format!(
                        "rotor at {} is not an out-arc of it",
                        d.map().vertex_id(v)
                    )))
                }
            }
        }
        Ok(RotorConfig { root, rotors })
    }

    pub fn from_arborescence(a: &Arborescence) -> Result<Self> {
        if a.direction() != Direction::In {
            return Err(Error::InvalidArborescence("rotors need an in-arborescence".into()));
        }
        Ok(RotorConfig { root: a.root(), rotors: (0..a.n_vertices()).map(|v| a.arc_at(v)).collect() })
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn rotor(&self, v: usize) -> Option<usize> {
        self.rotors[v]
    }

    /// The rotors as an in-arborescence, if they form one.
    pub fn to_arborescence(&self, d: &RibbonDigraph) -> Option<Arborescence> {
        let arcs: Vec<usize> = self.rotors.iter().flatten().copied().collect();
        Arborescence::from_arcs(d, self.root, &arcs, Direction::In).ok()
    }
}

/// Chips together with rotors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameState {
    pub chips: ChipConfig,
    pub rotors: RotorConfig,
}

/// Advance the rotor at `v` and send one chip along it.
pub fn rotor_route_step(d: &RibbonDigraph, s: &GameState, v: usize) -> Result<GameState> {
    let name = || d.map().vertex_id(v).to_string();
    if v == s.rotors.root {
        return Err(Error::RootRouting(name()));
    }
    if s.chips[v] <= 0 {
        return Err(Error::NoChip(name()));
    }
    let mut next = s.clone();
    let a = next_out_arc(d, s.rotors.rotors[v].expect("non-root vertex has a rotor"));
    next.rotors.rotors[v] = Some(a);
    next.chips.values_mut()[v] -= 1;
    next.chips.values_mut()[d.head(a)] += 1;
    Ok(next)
}

/// Route a single chip from `v` until it reaches the root, in place.
fn walk_chip(d: &RibbonDigraph, rotors: &mut [Option<usize>], root: usize, mut v: usize, limit: u64) -> Result<()> {
    let mut steps = 0u64;
    while v != root {
        let a = next_out_arc(d, rotors[v].expect("non-root vertex has a rotor"));
        rotors[v] = Some(a);
        v = d.head(a);
        steps += 1;
        if steps > limit {
            return Err(Error::StepLimit(limit));
        }
    }
    Ok(())
}

/// Step bound for one single-chip game.
fn step_limit(d: &RibbonDigraph, order: i128) -> u64 {
    (d.n_vertices() as u64) * (d.n_arcs() as u64) * (order.max(0) as u64 + 1)
}

/// `(1_v - 1_root)` acting on an in-arborescence rooted at `root`.
pub fn rotor_act_unit(d: &RibbonDigraph, group: &SandpileGroup, v: usize, a: &Arborescence) -> Result<Arborescence> {
    let root = a.root();
    let mut rotors: Vec<Option<usize>> = (0..d.n_vertices()).map(|w| a.arc_at(w)).collect();
    walk_chip(d, &mut rotors, root, v, step_limit(d, group.order()))?;
    let arcs: Vec<usize> = rotors.iter().flatten().copied().collect();
    Arborescence::from_arcs(d, root, &arcs, Direction::In)
}

/// The rotor-routing action of `[x]` on an in-arborescence. `x` is written
/// as `Σ x(v) (1_v - 1_root)`; each coefficient is taken modulo the order
/// of its class so that only forward games are played.
pub fn rotor_act(d: &RibbonDigraph, group: &SandpileGroup, x: &ChipConfig, a: &Arborescence) -> Result<Arborescence> {
    if x.degree() != 0 {
        return Err(Error::DegreeNonzero(x.degree()));
    }
    if a.direction() != Direction::In || !a.is_valid(d) {
        return Err(Error::InvalidArborescence("expected a valid in-arborescence".into()));
    }
    let root = a.root();
    let n = d.n_vertices();
    let mut cur = a.clone();
    for v in 0..n {
        if v == root || x[v] == 0 {
            continue;
        }
        let unit = group.canonical(&ChipConfig::difference(n, v, root))?;
        let order = group.class_order(&unit)?;
        let times = (x[v] as i128).rem_euclid(order);
        for _ in 0..times {
            cur = rotor_act_unit(d, group, v, &cur)?;
        }
    }
    Ok(cur)
}

/// The hypertree on E in G_R of an in-arborescence of D_V: the arcs off the
/// arborescence are a spanning tree T of G_V, and the result is
/// `d_{G_V}|_E - 1 - f_E(T)`.
pub fn arborescence_to_hypertree(t: &Trinity, a: &Arborescence) -> Result<Vec<i64>> {
    let d = t.derived_digraph(Color::V);
    if !a.is_valid(&d) {
        return Err(Error::InvalidArborescence("not an arborescence of D_V".into()));
    }
    let gv = t.derived_bipartite(Color::V);
    let mut tree = vec![true; gv.n_edges()];
    for k in a.arcs() {
        tree[k] = false;
    }
    if !is_spanning_tree(&gv, &tree) {
        return Err(Error::InvalidArborescence("the complementary edges are not a spanning tree of G_V".into()));
    }
    let fstar = Bipartite::new(&gv, side_positions(t, Color::V, Color::E))?.degrees_minus_one(&tree);
    dual_hypertree(t, &fstar, Color::V)
}

/// A sequence of in-arborescences from `a` to `b`, each differing from the
/// previous one at a single vertex. At every stage the vertex changed is a
/// disagreeing vertex not reachable in the current arborescence from any
/// other disagreeing vertex (smallest index first).
pub fn arborescence_exchange_path(d: &RibbonDigraph, a: &Arborescence, b: &Arborescence) -> Result<Vec<Arborescence>> {
    if a.root() != b.root() || a.direction() != b.direction() {
        return Err(Error::RootMismatch);
    }
    if a.direction() != Direction::In {
        return Err(Error::InvalidArborescence("exchange paths are built for in-arborescences".into()));
    }
    let n = d.n_vertices();
    let mut path = vec![a.clone()];
    let mut cur = a.clone();
    loop {
        let diff: Vec<usize> = (0..n).filter(|&v| cur.arc_at(v) != b.arc_at(v)).collect();
        if diff.is_empty() {
            return Ok(path);
        }
        let w = *diff
            .iter()
            .find(|&&w| !diff.iter().any(|&u| u != w && cur.leads_to(d, u, w)))
            .expect("a finite partial order has a maximal element");
        let arcs: Vec<usize> =
            (0..n).filter_map(|v| if v == w { b.arc_at(v) } else { cur.arc_at(v) }).collect();
        cur = Arborescence::from_arcs(d, a.root(), &arcs, Direction::In)?;
        path.push(cur.clone());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::PlaneGraph;
    use crate::sandpile::enumerate_arborescences;

    fn ids(prefix: &str, n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("{prefix}{i}")).collect()
    }

    fn bidirected(vertex_darts: Vec<Vec<usize>>, n_edges: usize) -> RibbonDigraph {
        let g = PlaneGraph::with_generated_darts(ids("v", vertex_darts.len()), ids("e", n_edges), vertex_darts).unwrap();
        RibbonDigraph::bidirect(&g).unwrap()
    }

    #[test]
    fn k2_single_step() {
        let d = bidirected(vec![vec![0], vec![1]], 1);
        let root = 0;
        let arb = enumerate_arborescences(&d, root, Direction::In, 10).unwrap().remove(0);
        let s = GameState { chips: ChipConfig::difference(2, 1, 0), rotors: RotorConfig::from_arborescence(&arb).unwrap() };
        let s2 = rotor_route_step(&d, &s, 1).unwrap();
        assert!(s2.chips.is_zero());
        assert!(matches!(rotor_route_step(&d, &s2, 1), Err(Error::NoChip(_))));
        assert!(matches!(rotor_route_step(&d, &s, 0), Err(Error::RootRouting(_))));
    }

    #[test]
    fn theta_step_advances_rotor() {
        let d = bidirected(vec![vec![0, 2, 4], vec![5, 3, 1]], 3);
        // arc 0 is e1 leaving v1
        let rotors = RotorConfig::new(&d, 1, vec![Some(0), None]).unwrap();
        let s = GameState { chips: ChipConfig::difference(2, 0, 1), rotors };
        let s2 = rotor_route_step(&d, &s, 0).unwrap();
        assert_eq!(s2.rotors.rotor(0), Some(2));
        assert_eq!(s2.chips.values(), &[0, 0]);
        assert_eq!(s2.chips.degree(), s.chips.degree());
    }

    #[test]
    fn rotor_action_orbits() {
        let d = bidirected(vec![vec![0, 2, 4], vec![5, 3, 1]], 3);
        let group = SandpileGroup::new(&d).unwrap();
        let arbs = enumerate_arborescences(&d, 0, Direction::In, 10).unwrap();
        let x = ChipConfig::difference(2, 1, 0);
        for a in &arbs {
            let mut cur = a.clone();
            for _ in 0..3 {
                cur = rotor_act(&d, &group, &x, &cur).unwrap();
                assert!(cur.is_valid(&d));
            }
            assert_eq!(&cur, a);
            assert_eq!(&rotor_act(&d, &group, &ChipConfig::zero(2), a).unwrap(), a);
        }
    }

    #[test]
    fn c3_exchange_path() {
        let d = bidirected(vec![vec![0, 5], vec![1, 2], vec![3, 4]], 3);
        let arbs = enumerate_arborescences(&d, 0, Direction::In, 10).unwrap();
        assert_eq!(arbs.len(), 3);
        for a in &arbs {
            assert_eq!(arborescence_exchange_path(&d, a, a).unwrap(), vec![a.clone()]);
            for b in &arbs {
                let path = arborescence_exchange_path(&d, a, b).unwrap();
                assert_eq!(path.last().unwrap(), b);
                for w in path.windows(2) {
                    let changed = (0..3).filter(|&v| w[0].arc_at(v) != w[1].arc_at(v)).count();
                    assert_eq!(changed, 1);
                }
                if a != b {
                    assert!(path.len() >= 2);
                }
            }
        }
    }
}
