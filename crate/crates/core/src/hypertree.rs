//! Hypertrees of plane bipartite graphs.
//!
//! A hypertree on a class U is a vector `f` with `f(u) = d_T(u) - 1` for
//! some spanning tree T. Equivalently `f >= 0`, `f(U) = |W| - 1` and
//! `f(S) <= |Γ(S)| - 1` for every nonempty `S ⊆ U`, where W is the other
//! class. The last condition is decided by bipartite b-matching: for each
//! `u0`, demands `f + 1_{u0}` must be satisfiable with every node of W
//! used at most once.

use crate::error::{Error, Result};
use crate::map::PlaneGraph;

/// A plane bipartite graph with a chosen class U (the "side").
#[derive(Clone, Debug)]
pub struct Bipartite<'g> {
    graph: &'g PlaneGraph,
    side: Vec<usize>,
    other: Vec<usize>,
    in_side: Vec<bool>,
    /// per edge: (position in side, position in other)
    ends: Vec<(usize, usize)>,
}

impl<'g> Bipartite<'g> {
    /// `side` lists the vertices of U; the hypertree vectors are indexed
    /// in this order. The other class is every remaining vertex in vertex
    /// order.
    pub fn new(graph: &'g PlaneGraph, side: Vec<usize>) -> Result<Self> {
        let n = graph.n_vertices();
        let mut in_side = vec![false; n];
        let mut pos = vec![usize::MAX; n];
        for (i, &u) in side.iter().enumerate() {
            if u >= n || in_side[u] {
                return Err(Error::NotBipartite("bad side list".into()));
            }
            in_side[u] = true;
            pos[u] = i;
        }
        let other: Vec<usize> = (0..n).filter(|&v| !in_side[v]).collect();
        for (i, &w) in other.iter().enumerate() {
            pos[w] = i;
        }
        let mut ends = Vec::with_capacity(graph.n_edges());
        for k in 0..graph.n_edges() {
            let (a, b) = graph.endpoints(k);
            match (in_side[a], in_side[b]) {
                (true, false) => ends.push((pos[a], pos[b])),
                (false, true) => ends.push((pos[b], pos[a])),
                _ => {
                    return Err(Error::NotBipartite(format!(
                        "edge {} does not join the two classes",
                        graph.edge_id(k)
                    )))
                }
            }
        }
        Ok(Bipartite { graph, side, other, in_side, ends })
    }

    pub fn graph(&self) -> &'g PlaneGraph {
        self.graph
    }

    pub fn side(&self) -> &[usize] {
        &self.side
    }

    pub fn other(&self) -> &[usize] {
        &self.other
    }

    pub fn in_side(&self, v: usize) -> bool {
        self.in_side[v]
    }

    /// Mask of the vertices in the other class.
    pub fn other_mask(&self) -> Vec<bool> {
        self.in_side.iter().map(|&s| !s).collect()
    }

    fn neighbors(&self, alive: Option<&[bool]>) -> Vec<Vec<usize>> {
        let mut nb: Vec<Vec<usize>> = vec![Vec::new(); self.side.len()];
        for (k, &(u, w)) in self.ends.iter().enumerate() {
            if alive.map_or(true, |a| a[k]) {
                nb[u].push(w);
            }
        }
        for list in &mut nb {
            list.sort_unstable();
            list.dedup();
        }
        nb
    }

    /// `d_T(u) - 1` on the side, for a spanning tree given as an edge mask.
    pub fn degrees_minus_one(&self, tree: &[bool]) -> Vec<i64> {
        let mut f = vec![-1i64; self.side.len()];
        for (k, &(u, _)) in self.ends.iter().enumerate() {
            if tree[k] {
                f[u] += 1;
            }
        }
        f
    }

    /// `d_G(u) - 1` on the side.
    pub fn degree_vector_minus_one(&self) -> Vec<i64> {
        self.degrees_minus_one(&vec![true; self.ends.len()])
    }

    pub fn is_hypertree(&self, f: &[i64]) -> bool {
        self.is_hypertree_in(f, None)
    }

    /// Hypertree test in the subgraph of edges with `alive[k]`.
    pub fn is_hypertree_in(&self, f: &[i64], alive: Option<&[bool]>) -> bool {
        if f.len() != self.side.len() || f.iter().any(|&x| x < 0) {
            return false;
        }
        if f.iter().sum::<i64>() != self.other.len() as i64 - 1 {
            return false;
        }
        let nb = self.neighbors(alive);
        let mut m = Matching::new(self.side.len(), self.other.len());
        for u in 0..self.side.len() {
            for _ in 0..f[u] {
                if !m.augment(u, &nb) {
                    return false;
                }
            }
        }
        (0..self.side.len()).all(|u0| m.clone().augment(u0, &nb))
    }

    /// The subset characterization checked directly over all nonempty
    /// subsets of the side. Intended as an oracle for small sides.
    pub fn satisfies_subset_condition(&self, f: &[i64]) -> bool {
        assert!(self.side.len() <= 20, "subset oracle limited to 20 side vertices");
        if f.len() != self.side.len() || f.iter().any(|&x| x < 0) {
            return false;
        }
        if f.iter().sum::<i64>() != self.other.len() as i64 - 1 {
            return false;
        }
        let nb = self.neighbors(None);
        let words = self.other.len().div_ceil(64).max(1);
        let masks: Vec<Vec<u64>> = nb
            .iter()
            .map(|list| {
                let mut m = vec![0u64; words];
                for &w in list {
                    m[w / 64] |= 1 << (w % 64);
                }
                m
            })
            .collect();
        let n = self.side.len();
        for s in 1u32..(1u32 << n) {
            let mut union = vec![0u64; words];
            let mut fs = 0;
            for u in 0..n {
                if s >> u & 1 == 1 {
                    fs += f[u];
                    for (a, b) in union.iter_mut().zip(&masks[u]) {
                        *a |= b;
                    }
                }
            }
            let gamma: i64 = union.iter().map(|x| x.count_ones() as i64).sum();
            if fs > gamma - 1 {
                return false;
            }
        }
        true
    }

    /// All hypertrees on the side, in lexicographic order.
    pub fn enumerate(&self, limit: usize) -> Result<Vec<Vec<i64>>> {
        let nb = self.neighbors(None);
        let n = self.side.len();
        let total = self.other.len() as i64 - 1;
        let caps: Vec<i64> = nb.iter().map(|l| l.len() as i64 - 1).collect();
        if caps.iter().any(|&c| c < 0) {
            return Ok(Vec::new());
        }
        let mut suffix = vec![0i64; n + 1];
        for i in (0..n).rev() {
            suffix[i] = suffix[i + 1] + caps[i];
        }
        let mut out = Vec::new();
        let mut f = vec![0i64; n];
        let m = Matching::new(n, self.other.len());
        enumerate_rec(0, 0, total, &caps, &suffix, &nb, &m, &mut f, &mut out, limit)?;
        Ok(out)
    }

    /// A spanning tree realizing `f`, as an edge mask, found by deleting
    /// edges greedily while `f` stays a hypertree.
    pub fn realize(&self, f: &[i64]) -> Option<Vec<bool>> {
        if !self.is_hypertree(f) {
            return None;
        }
        let mut alive = vec![true; self.ends.len()];
        for k in 0..self.ends.len() {
            alive[k] = false;
            if !self.is_hypertree_in(f, Some(&alive)) {
                alive[k] = true;
            }
        }
        Some(alive)
    }
}

#[allow(clippy::too_many_arguments)]
fn enumerate_rec(
    i: usize,
    sum: i64,
    total: i64,
    caps: &[i64],
    suffix: &[i64],
    nb: &[Vec<usize>],
    m: &Matching,
    f: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
    limit: usize,
) -> Result<()> {
    let n = caps.len();
    if i == n {
        if sum == total {
            if out.len() >= limit {
                return Err(Error::TooLarge(format!("more than {limit} hypertrees")));
            }
            out.push(f.clone());
        }
        return Ok(());
    }
    let need = total - sum;
    let lo = (need - suffix[i + 1]).max(0);
    let hi = caps[i].min(need);
    for value in lo..=hi {
        let mut next = m.clone();
        if !(0..value).all(|_| next.augment(i, nb)) {
            break;
        }
        f[i] = value;
        if (0..=i).all(|u0| next.clone().augment(u0, nb)) {
            enumerate_rec(i + 1, sum + value, total, caps, suffix, nb, &next, f, out, limit)?;
        } else {
            // larger values at i only make the prefix condition harder
            break;
        }
    }
    f[i] = 0;
    Ok(())
}

/// b-matching between side vertices (any capacity) and other-class
/// vertices (capacity one).
#[derive(Clone, Debug)]
struct Matching {
    owner: Vec<Option<usize>>,
}

impl Matching {
    fn new(_n_side: usize, n_other: usize) -> Self {
        Matching { owner: vec![None; n_other] }
    }

    /// Give `u` one more partner, rerouting along an alternating path.
    fn augment(&mut self, u: usize, nb: &[Vec<usize>]) -> bool {
        let mut seen = vec![false; self.owner.len()];
        self.try_from(u, nb, &mut seen)
    }

    fn try_from(&mut self, u: usize, nb: &[Vec<usize>], seen: &mut [bool]) -> bool {
        for &w in &nb[u] {
            if seen[w] || self.owner[w] == Some(u) {
                continue;
            }
            seen[w] = true;
            match self.owner[w] {
                None => {
                    self.owner[w] = Some(u);
                    return true;
                }
                Some(v) => {
                    if self.try_from(v, nb, seen) {
                        self.owner[w] = Some(u);
                        return true;
                    }
                }
            }
        }
        false
    }
}

/// All spanning trees of `g` as edge masks, by branching on edges in index
/// order (include or exclude).
pub fn spanning_trees(g: &PlaneGraph, limit: usize) -> Result<Vec<Vec<bool>>> {
    let n = g.n_vertices();
    let m = g.n_edges();
    let ends: Vec<(usize, usize)> = (0..m).map(|k| g.endpoints(k)).collect();
    let mut out = Vec::new();
    let mut chosen = vec![false; m];
    let dsu: Vec<usize> = (0..n).collect();

    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }

    fn still_connectable(n: usize, ends: &[(usize, usize)], parent: &[usize], from: usize) -> bool {
        let mut p = parent.to_vec();
        let mut comps = (0..n).filter(|&v| find(&mut p.clone(), v) == v).count();
        for &(a, b) in &ends[from..] {
            let (ra, rb) = (find(&mut p, a), find(&mut p, b));
            if ra != rb {
                p[ra] = rb;
                comps -= 1;
            }
        }
        comps == 1
    }

    #[allow(clippy::too_many_arguments)]
    fn rec(
        k: usize,
        used: usize,
        n: usize,
        ends: &[(usize, usize)],
        parent: Vec<usize>,
        chosen: &mut Vec<bool>,
        out: &mut Vec<Vec<bool>>,
        limit: usize,
    ) -> Result<()> {
        if used + 1 == n {
            if out.len() >= limit {
                return Err(Error::TooLarge(format!("more than {limit} spanning trees")));
            }
            out.push(chosen.clone());
            return Ok(());
        }
        if k == ends.len() || used + (ends.len() - k) + 1 < n {
            return Ok(());
        }
        let (a, b) = ends[k];
        let mut p = parent.clone();
        let (ra, rb) = (find(&mut p, a), find(&mut p, b));
        if ra != rb {
            p[ra] = rb;
            chosen[k] = true;
            rec(k + 1, used + 1, n, ends, p, chosen, out, limit)?;
            chosen[k] = false;
        }
        if still_connectable(n, ends, &parent, k + 1) {
            rec(k + 1, used, n, ends, parent, chosen, out, limit)?;
        }
        Ok(())
    }

    if n == 0 || !g.is_connected() {
        return Ok(out);
    }
    rec(0, 0, n, &ends, dsu, &mut chosen, &mut out, limit)?;
    Ok(out)
}

/// Whether an edge mask is a spanning tree of `g`.
pub fn is_spanning_tree(g: &PlaneGraph, tree: &[bool]) -> bool {
    let n = g.n_vertices();
    if tree.len() != g.n_edges() || tree.iter().filter(|&&t| t).count() + 1 != n {
        return false;
    }
    let mut p: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for k in 0..g.n_edges() {
        if tree[k] {
            let (a, b) = g.endpoints(k);
            let (ra, rb) = (find(&mut p, a), find(&mut p, b));
            if ra == rb {
                return false;
            }
            p[ra] = rb;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build::subdivide;

    fn ids(prefix: &str, n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("{prefix}{i}")).collect()
    }

    /// K_{2,3} as G_R of the theta graph: violet v1, v2 and emerald e1..e3.
    fn k23() -> PlaneGraph {
        let theta = PlaneGraph::with_generated_darts(ids("v", 2), ids("e", 3), vec![vec![0, 2, 4], vec![5, 3, 1]]).unwrap();
        subdivide(&theta).unwrap().0
    }

    fn c3_bip() -> PlaneGraph {
        let c3 = PlaneGraph::with_generated_darts(ids("v", 3), ids("e", 3), vec![vec![0, 5], vec![1, 2], vec![3, 4]]).unwrap();
        subdivide(&c3).unwrap().0
    }

    #[test]
    fn k23_violet_hypertrees() {
        let g = k23();
        let b = Bipartite::new(&g, vec![0, 1]).unwrap();
        assert_eq!(b.enumerate(100).unwrap(), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert!(!b.is_hypertree(&[3, -1]));
        assert!(!b.is_hypertree(&[1, 0]));
        let trees = spanning_trees(&g, 1000).unwrap();
        assert_eq!(trees.len(), 12);
        let mut from_trees: Vec<Vec<i64>> = trees.iter().map(|t| b.degrees_minus_one(t)).collect();
        from_trees.sort();
        from_trees.dedup();
        assert_eq!(from_trees, b.enumerate(100).unwrap());
    }

    #[test]
    fn star_plus_edge() {
        let g = k23();
        let b = Bipartite::new(&g, vec![0, 1]).unwrap();
        // all three edges at v1 plus one edge at v2
        let mut tree = vec![false; g.n_edges()];
        for &d in g.darts_at(0) {
            tree[d / 2] = true;
        }
        tree[g.darts_at(1)[0] / 2] = true;
        assert!(is_spanning_tree(&g, &tree));
        assert_eq!(b.degrees_minus_one(&tree), vec![2, 0]);
    }

    #[test]
    fn c3_emerald_hypertrees_are_tree_vectors() {
        let g = c3_bip();
        let b = Bipartite::new(&g, vec![3, 4, 5]).unwrap();
        assert_eq!(b.enumerate(100).unwrap(), vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
    }

    #[test]
    fn realization_matches_vector() {
        let g = k23();
        for side in [vec![0, 1], vec![2, 3, 4]] {
            let b = Bipartite::new(&g, side).unwrap();
            for f in b.enumerate(100).unwrap() {
                let t = b.realize(&f).unwrap();
                assert!(is_spanning_tree(&g, &t));
                assert_eq!(b.degrees_minus_one(&t), f);
                assert!(b.satisfies_subset_condition(&f));
            }
        }
    }

    #[test]
    fn not_bipartite_side() {
        let g = k23();
        assert!(Bipartite::new(&g, vec![0]).is_err());
    }
}
