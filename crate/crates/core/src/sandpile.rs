//! Chip configurations, Laplacians, linear equivalence and the sandpile
//! group of an Eulerian digraph.
//!
//! Laplacian convention: `L(u, v) = d(v, u)` for `u != v` and
//! `L(v, v) = -d+(v)`, so firing `v` adds column `v` to a configuration.
//! Self-arcs cancel on the diagonal.

use std::ops::{Add, Index, Neg, Sub};

use crate::error::{Error, Result};
use crate::linalg::{ColumnHermite, IntMatrix, Smith};
use crate::map::RibbonDigraph;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChipConfig {
    values: Vec<i64>,
}

impl ChipConfig {
    pub fn new(values: Vec<i64>) -> Self {
        ChipConfig { values }
    }

    pub fn zero(n: usize) -> Self {
        ChipConfig { values: vec![0; n] }
    }

    /// `1_v`
    pub fn unit(n: usize, v: usize) -> Self {
        let mut x = Self::zero(n);
        x.values[v] = 1;
        x
    }

    /// `1_v - 1_q`
    pub fn difference(n: usize, v: usize, q: usize) -> Self {
        let mut x = Self::zero(n);
        x.values[v] += 1;
        x.values[q] -= 1;
        x
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.values.iter().sum()
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [i64] {
        &mut self.values
    }

    pub fn scale(&self, k: i64) -> ChipConfig {
        ChipConfig { values: self.values.iter().map(|x| x * k).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0)
    }

    pub(crate) fn wide(&self) -> Vec<i128> {
        self.values.iter().map(|&x| x as i128).collect()
    }
}

impl Index<usize> for ChipConfig {
    type Output = i64;
    fn index(&self, v: usize) -> &i64 {
        &self.values[v]
    }
}

impl Add for &ChipConfig {
    type Output = ChipConfig;
    fn add(self, rhs: &ChipConfig) -> ChipConfig {
        assert_eq!(self.len(), rhs.len());
        ChipConfig { values: self.values.iter().zip(&rhs.values).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &ChipConfig {
    type Output = ChipConfig;
    fn sub(self, rhs: &ChipConfig) -> ChipConfig {
        assert_eq!(self.len(), rhs.len());
        ChipConfig { values: self.values.iter().zip(&rhs.values).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &ChipConfig {
    type Output = ChipConfig;
    fn neg(self) -> ChipConfig {
        self.scale(-1)
    }
}

pub fn laplacian(d: &RibbonDigraph) -> IntMatrix {
    let n = d.n_vertices();
    let mut l = IntMatrix::zeros(n, n);
    for a in 0..d.n_arcs() {
        let (t, h) = (d.tail(a), d.head(a));
        if t != h {
            l[(h, t)] += 1;
            l[(t, t)] -= 1;
        }
    }
    l
}

/// `x + L 1_v`
pub fn fire(d: &RibbonDigraph, x: &ChipConfig, v: usize) -> Result<ChipConfig> {
    if v >= d.n_vertices() {
        return Err(Error::UnknownVertex(format!("#{v}")));
    }
    let mut y = x.clone();
    for a in 0..d.n_arcs() {
        if d.tail(a) == v && d.head(a) != v {
            y.values[v] -= 1;
            y.values[d.head(a)] += 1;
        }
    }
    Ok(y)
}

/// Linear equivalence class with its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PicClass {
    rep: ChipConfig,
}

impl PicClass {
    pub fn degree(&self) -> i64 {
        self.rep.degree()
    }

    pub fn representative(&self) -> &ChipConfig {
        &self.rep
    }
}

/// Sandpile group data of a connected Eulerian digraph, computed once.
///
/// The reduced Laplacian deletes the first vertex. Classes are canonical
/// through the column Hermite form of the reduced Laplacian: the
/// representative's coordinates off the deleted vertex lie in the box
/// `0 <= x_i < H_ii`.
#[derive(Clone, Debug)]
pub struct SandpileGroup {
    n: usize,
    laplacian: IntMatrix,
    hermite: ColumnHermite,
    smith: Smith,
    order: i128,
}

impl SandpileGroup {
    pub fn new(d: &RibbonDigraph) -> Result<Self> {
        if !d.map().is_connected() {
            return Err(Error::Disconnected);
        }
        if !d.is_eulerian() {
            return Err(Error::NotBalanced("digraph is not Eulerian".into()));
        }
        let n = d.n_vertices();
        let laplacian = laplacian(d);
        let reduced = laplacian.minor(0, 0);
        let hermite = ColumnHermite::new(&reduced)?;
        debug_assert_eq!(hermite.rank(), n - 1);
        let smith = Smith::new(&reduced)?;
        let mut order: i128 = 1;
        for j in 0..hermite.rank() {
            order = order.checked_mul(hermite.pivot_value(j)).ok_or(crate::linalg::LinalgError::Overflow)?;
        }
        Ok(SandpileGroup { n, laplacian, hermite, smith, order })
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn laplacian(&self) -> &IntMatrix {
        &self.laplacian
    }

    /// The vertex whose row and column are deleted.
    pub fn deleted_vertex(&self) -> usize {
        0
    }

    /// Order of Pic^0: `|det L'|`.
    pub fn order(&self) -> i128 {
        self.order
    }

    /// Invariant factors greater than one.
    pub fn invariant_factors(&self) -> Vec<i128> {
        self.smith.torsion()
    }

    pub fn canonical(&self, x: &ChipConfig) -> Result<PicClass> {
        if x.len() != self.n {
            return Err(Error::InvalidMap(format!("chip vector of length {} on {} vertices", x.len(), self.n)));
        }
        let deg = x.degree();
        let tail = x.wide()[1..].to_vec();
        let reduced = self.hermite.reduce(&tail)?;
        let mut values = Vec::with_capacity(self.n);
        values.push(0);
        for v in reduced {
            values.push(i64::try_from(v).map_err(|_| crate::linalg::LinalgError::Overflow)?);
        }
        values[0] = deg - values[1..].iter().sum::<i64>();
        Ok(PicClass { rep: ChipConfig::new(values) })
    }

    pub fn equivalent(&self, x: &ChipConfig, y: &ChipConfig) -> Result<bool> {
        if x.degree() != y.degree() {
            return Ok(false);
        }
        let diff = (x - y).wide();
        Ok(self.hermite.contains(&diff[1..])?)
    }

    /// An integer firing vector `z` with `y = x + L z`, if one exists.
    pub fn firing_witness(&self, x: &ChipConfig, y: &ChipConfig) -> Result<Option<Vec<i128>>> {
        if x.degree() != y.degree() {
            return Ok(None);
        }
        let diff = (y - x).wide();
        let Some(z) = self.hermite.solve(&diff[1..])? else {
            return Ok(None);
        };
        let mut full = vec![0i128];
        full.extend(z);
        Ok(Some(full))
    }

    pub fn zero(&self) -> PicClass {
        PicClass { rep: ChipConfig::zero(self.n) }
    }

    pub fn add(&self, a: &PicClass, b: &PicClass) -> Result<PicClass> {
        self.canonical(&(&a.rep + &b.rep))
    }

    pub fn neg(&self, a: &PicClass) -> Result<PicClass> {
        self.canonical(&-&a.rep)
    }

    pub fn scale(&self, a: &PicClass, k: i64) -> Result<PicClass> {
        self.canonical(&a.rep.scale(k))
    }

    /// Order of a degree-0 class.
    pub fn class_order(&self, a: &PicClass) -> Result<i128> {
        let zero = self.zero();
        let mut acc = a.clone();
        let mut k = 1;
        while acc != zero {
            acc = self.add(&acc, a)?;
            k += 1;
        }
        Ok(k)
    }

    /// All classes of degree 0, in increasing order of representatives'
    /// box coordinates.
    pub fn elements(&self) -> Vec<PicClass> {
        let radices: Vec<i64> = (0..self.hermite.rank()).map(|j| self.hermite.pivot_value(j) as i64).collect();
        let mut out = Vec::with_capacity(self.order as usize);
        let mut coords = vec![0i64; radices.len()];
        loop {
            let mut values = vec![-coords.iter().sum::<i64>()];
            values.extend(&coords);
            out.push(PicClass { rep: ChipConfig::new(values) });
            let mut i = radices.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                coords[i] += 1;
                if coords[i] < radices[i] {
                    break;
                }
                coords[i] = 0;
            }
        }
    }

    /// Degree-0 generators `[1_v - 1_q]` with `q` the deleted vertex.
    pub fn generators(&self) -> Vec<ChipConfig> {
        (1..self.n).map(|v| ChipConfig::difference(self.n, v, 0)).collect()
    }
}

/// Convenience wrapper: linear equivalence in `d`.
pub fn linearly_equivalent(d: &RibbonDigraph, x: &ChipConfig, y: &ChipConfig) -> Result<bool> {
    SandpileGroup::new(d)?.equivalent(x, y)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    In,
    Out,
}

/// A spanning arborescence: each non-root vertex has one chosen arc, its
/// out-arc for in-arborescences and its in-arc for out-arborescences.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arborescence {
    root: usize,
    choice: Vec<Option<usize>>,
    inward: bool,
}

impl Arborescence {
    pub fn root(&self) -> usize {
        self.root
    }

    pub fn direction(&self) -> Direction {
        if self.inward {
            Direction::In
        } else {
            Direction::Out
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.choice.len()
    }

    /// The arc chosen at `v` (None at the root).
    pub fn arc_at(&self, v: usize) -> Option<usize> {
        self.choice[v]
    }

    pub fn arcs(&self) -> Vec<usize> {
        let mut a: Vec<usize> = self.choice.iter().flatten().copied().collect();
        a.sort_unstable();
        a
    }

    /// Build from an arc set, checking every invariant.
    pub fn from_arcs(d: &RibbonDigraph, root: usize, arcs: &[usize], dir: Direction) -> Result<Self> {
        let n = d.n_vertices();
        if root >= n {
            return Err(Error::InvalidArborescence("root out of range".into()));
        }
        if arcs.len() + 1 != n {
            return Err(Error::InvalidArborescence(format!("{} arcs on {} vertices", arcs.len(), n)));
        }
        let mut choice = vec![None; n];
        for &a in arcs {
            if a >= d.n_arcs() {
                return Err(Error::InvalidArborescence(format!("arc #{a} out of range")));
            }
            let v = match dir {
                Direction::In => d.tail(a),
                Direction::Out => d.head(a),
            };
            if v == root || choice[v].is_some() {
                return Err(Error::InvalidArborescence(format!(
                    "vertex {} has a wrong number of {} arcs",
                    d.map().vertex_id(v),
                    if dir == Direction::In { "out" } else { "in" }
                )));
            }
            choice[v] = Some(a);
        }
        let arb = Arborescence { root, choice, inward: dir == Direction::In };
        if !arb.is_valid(d) {
            return Err(Error::InvalidArborescence("arcs contain a cycle".into()));
        }
        Ok(arb)
    }

    pub(crate) fn from_choice(root: usize, choice: Vec<Option<usize>>, dir: Direction) -> Self {
        Arborescence { root, choice, inward: dir == Direction::In }
    }

    fn step(&self, d: &RibbonDigraph, v: usize) -> Option<usize> {
        self.choice[v].map(|a| if self.inward { d.head(a) } else { d.tail(a) })
    }

    /// Every vertex leads to the root along the chosen arcs.
    pub fn is_valid(&self, d: &RibbonDigraph) -> bool {
        let n = d.n_vertices();
        if self.choice.len() != n || self.choice[self.root].is_some() {
            return false;
        }
        for v in 0..n {
            match self.choice[v] {
                None if v != self.root => return false,
                Some(a) => {
                    let at = if self.inward { d.tail(a) } else { d.head(a) };
                    if at != v {
                        return false;
                    }
                }
                _ => {}
            }
        }
        for start in 0..n {
            let mut v = start;
            let mut steps = 0;
            while v != self.root {
                match self.step(d, v) {
                    Some(w) => v = w,
                    None => return false,
                }
                steps += 1;
                if steps > n {
                    return false;
                }
            }
        }
        true
    }

    /// Whether `w` can be reached from `v` along chosen arcs.
    pub fn leads_to(&self, d: &RibbonDigraph, mut v: usize, w: usize) -> bool {
        let mut steps = 0;
        loop {
            if v == w {
                return true;
            }
            match self.step(d, v) {
                Some(x) if steps <= d.n_vertices() => {
                    v = x;
                    steps += 1;
                }
                _ => return false,
            }
        }
    }
}

/// All spanning arborescences with the given root and direction, in
/// lexicographic order of their arc choices.
pub fn enumerate_arborescences(
    d: &RibbonDigraph,
    root: usize,
    dir: Direction,
    limit: usize,
) -> Result<Vec<Arborescence>> {
    let n = d.n_vertices();
    if root >= n {
        return Err(Error::UnknownVertex(format!("#{root}")));
    }
    let mut options: Vec<Vec<usize>> = vec![Vec::new(); n];
    for a in 0..d.n_arcs() {
        let (t, h) = (d.tail(a), d.head(a));
        if t == h {
            continue;
        }
        match dir {
            Direction::In => options[t].push(a),
            Direction::Out => options[h].push(a),
        }
    }
    let next = |a: usize| match dir {
        Direction::In => d.head(a),
        Direction::Out => d.tail(a),
    };
    let order: Vec<usize> = (0..n).filter(|&v| v != root).collect();
    let mut choice: Vec<Option<usize>> = vec![None; n];
    let mut out = Vec::new();

    fn rec(
        i: usize,
        order: &[usize],
        options: &[Vec<usize>],
        choice: &mut Vec<Option<usize>>,
        next: &dyn Fn(usize) -> usize,
        root: usize,
        dir: Direction,
        out: &mut Vec<Arborescence>,
        limit: usize,
    ) -> Result<()> {
        if i == order.len() {
            if out.len() >= limit {
                return Err(Error::TooLarge(format!("more than {limit} arborescences")));
            }
            out.push(Arborescence::from_choice(root, choice.clone(), dir));
            return Ok(());
        }
        let v = order[i];
        for &a in &options[v] {
            // reject a cycle through v among the assigned vertices
            let mut w = next(a);
            let mut cyclic = false;
            while w != root {
                if w == v {
                    cyclic = true;
                    break;
                }
                match choice[w] {
                    Some(b) => w = next(b),
                    None => break,
                }
            }
            if cyclic {
                continue;
            }
            choice[v] = Some(a);
            rec(i + 1, order, options, choice, next, root, dir, out, limit)?;
            choice[v] = None;
        }
        Ok(())
    }

    rec(0, &order, &options, &mut choice, &next, root, dir, &mut out, limit)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::PlaneGraph;

    fn ids(prefix: &str, n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("{prefix}{i}")).collect()
    }

    fn bidirected(n: usize, rot: Vec<Vec<usize>>) -> RibbonDigraph {
        let m = rot.iter().map(Vec::len).sum::<usize>() / 2;
        let g = PlaneGraph::with_generated_darts(ids("v", n), ids("e", m), rot).unwrap();
        RibbonDigraph::bidirect(&g).unwrap()
    }

    fn k2() -> RibbonDigraph {
        bidirected(2, vec![vec![0], vec![1]])
    }

    fn theta() -> RibbonDigraph {
        bidirected(2, vec![vec![0, 2, 4], vec![5, 3, 1]])
    }

    fn c3() -> RibbonDigraph {
        bidirected(3, vec![vec![0, 5], vec![1, 2], vec![3, 4]])
    }

    fn rows(m: &IntMatrix) -> Vec<Vec<i128>> {
        (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
    }

    #[test]
    fn laplacians_of_small_graphs() {
        assert_eq!(rows(&laplacian(&k2())), vec![vec![-1, 1], vec![1, -1]]);
        assert_eq!(rows(&laplacian(&theta())), vec![vec![-3, 3], vec![3, -3]]);
        let l = laplacian(&c3());
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(l[(i, j)], if i == j { -2 } else { 1 });
            }
        }
    }

    #[test]
    fn firing() {
        let x = ChipConfig::new(vec![1, 0]);
        assert_eq!(fire(&k2(), &x, 0).unwrap().values(), &[0, 1]);
        let x = ChipConfig::new(vec![3, 0]);
        assert_eq!(fire(&theta(), &x, 0).unwrap().values(), &[0, 3]);
        let d = c3();
        let x = ChipConfig::new(vec![4, -1, 2]);
        let mut y = x.clone();
        for v in 0..3 {
            y = fire(&d, &y, v).unwrap();
        }
        assert_eq!(x, y);
        assert!(fire(&d, &x, 7).is_err());
    }

    #[test]
    fn equivalence_and_classes() {
        let d = theta();
        let g = SandpileGroup::new(&d).unwrap();
        let x = ChipConfig::new(vec![2, 0]);
        let y = ChipConfig::new(vec![-1, 3]);
        assert!(g.equivalent(&x, &y).unwrap());
        assert!(!g.equivalent(&x, &ChipConfig::new(vec![1, 1])).unwrap());
        assert!(!g.equivalent(&x, &ChipConfig::new(vec![1, 0])).unwrap());
        assert_eq!(g.canonical(&x).unwrap(), g.canonical(&y).unwrap());
        let z = g.firing_witness(&x, &y).unwrap().unwrap();
        let lz = g.laplacian().mul_vec(&z).unwrap();
        for v in 0..2 {
            assert_eq!(x[v] as i128 + lz[v], y[v] as i128);
        }

        let gen = g.canonical(&ChipConfig::new(vec![1, -1])).unwrap();
        let thrice = g.scale(&gen, 3).unwrap();
        assert_eq!(thrice, g.zero());
        assert_eq!(g.class_order(&gen).unwrap(), 3);
    }

    #[test]
    fn group_orders() {
        let g = SandpileGroup::new(&k2()).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.invariant_factors().is_empty());
        let g = SandpileGroup::new(&theta()).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.invariant_factors(), vec![3]);
        assert_eq!(g.elements().len(), 3);
        let g = SandpileGroup::new(&c3()).unwrap();
        assert_eq!(g.order(), 3);
    }

    #[test]
    fn arborescence_counts() {
        for (d, expected) in [(k2(), 1), (theta(), 3), (c3(), 3)] {
            for root in 0..d.n_vertices() {
                for dir in [Direction::In, Direction::Out] {
                    let arbs = enumerate_arborescences(&d, root, dir, 1000).unwrap();
                    assert_eq!(arbs.len(), expected);
                    for a in &arbs {
                        assert!(a.is_valid(&d));
                        let again = Arborescence::from_arcs(&d, root, &a.arcs(), dir).unwrap();
                        assert_eq!(&again, a);
                    }
                }
            }
        }
        assert!(matches!(
            enumerate_arborescences(&theta(), 0, Direction::In, 2),
            Err(Error::TooLarge(_))
        ));
    }
}
