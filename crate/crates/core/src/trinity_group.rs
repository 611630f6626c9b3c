//! White-triangle equivalence, the trinity sandpile group A_W and the
//! canonical isomorphisms between the sandpile groups of D_R, D_E and D_V.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::linalg::{ColumnHermite, IntMatrix, LinalgError, Smith};
use crate::map::{PlaneGraph, RibbonDigraph};
use crate::sandpile::{ChipConfig, PicClass, SandpileGroup};
use crate::trinity::{Color, Trinity};

/// Chips on all three classes, each part indexed in class order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriChipConfig {
    parts: [ChipConfig; 3],
}

impl TriChipConfig {
    pub fn zero(t: &Trinity) -> Self {
        TriChipConfig { parts: Color::ALL.map(|c| ChipConfig::zero(t.class(c).len())) }
    }

    /// `x` on class `c`, zero elsewhere.
    pub fn single(t: &Trinity, c: Color, x: ChipConfig) -> Self {
        let mut out = Self::zero(t);
        out.parts[c.index()] = x;
        out
    }

    pub fn part(&self, c: Color) -> &ChipConfig {
        &self.parts[c.index()]
    }

    pub fn part_mut(&mut self, c: Color) -> &mut ChipConfig {
        &mut self.parts[c.index()]
    }

    /// The vector indexed by trinity node.
    pub fn node_vector(&self, t: &Trinity) -> Vec<i128> {
        let mut out = vec![0i128; t.n_nodes()];
        for c in Color::ALL {
            for (i, &v) in t.class(c).iter().enumerate() {
                out[v] = self.parts[c.index()][i] as i128;
            }
        }
        out
    }

    pub fn sub(&self, other: &TriChipConfig) -> TriChipConfig {
        TriChipConfig { parts: Color::ALL.map(|c| &self.parts[c.index()] - &other.parts[c.index()]) }
    }
}

/// One column per white triangle, holding the characteristic vector of its
/// three nodes, with the Hermite form of the column lattice.
#[derive(Clone, Debug)]
pub struct WhiteTriangleMatrix {
    white: Vec<usize>,
    matrix: IntMatrix,
    hermite: ColumnHermite,
}

impl WhiteTriangleMatrix {
    pub fn new(t: &Trinity) -> Result<Self> {
        let white = t.white_triangles();
        let mut matrix = IntMatrix::zeros(t.n_nodes(), white.len());
        for (j, &tri) in white.iter().enumerate() {
            for c in Color::ALL {
                matrix[(t.corner(tri, c), j)] = 1;
            }
        }
        let hermite = ColumnHermite::new(&matrix)?;
        Ok(WhiteTriangleMatrix { white, matrix, hermite })
    }

    /// White triangles in column order.
    pub fn triangles(&self) -> &[usize] {
        &self.white
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn contains(&self, v: &[i128]) -> Result<bool> {
        Ok(self.hermite.contains(v)?)
    }
}

/// Free rank and torsion of A_W.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AwStructure {
    pub free_rank: usize,
    pub torsion: Vec<i128>,
}

/// A white-triangle combination moving chips off one class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transport {
    /// coefficient per white triangle, in [`WhiteTriangleMatrix`] column order
    pub coefficients: Vec<i64>,
    /// the chips the combination leaves on the target class
    pub target: ChipConfig,
}

/// The three sandpile groups of a trinity together with the white-triangle
/// lattice and the images `φ(1_v - 1_q)` for each ordered color pair.
#[derive(Clone, Debug)]
pub struct TrinityGroup {
    trinity: Trinity,
    white: WhiteTriangleMatrix,
    digraphs: [RibbonDigraph; 3],
    groups: [SandpileGroup; 3],
    images: HashMap<(Color, Color), Vec<ChipConfig>>,
}

impl TrinityGroup {
    pub fn new(t: &Trinity) -> Result<Self> {
        let white = WhiteTriangleMatrix::new(t)?;
        let digraphs = Color::ALL.map(|c| t.derived_digraph(c));
        let groups = [
            SandpileGroup::new(&digraphs[0])?,
            SandpileGroup::new(&digraphs[1])?,
            SandpileGroup::new(&digraphs[2])?,
        ];
        let mut images = HashMap::new();
        for a in Color::ALL {
            for b in Color::ALL {
                if a != b {
                    images.insert((a, b), basis_images(t, &white, a, b)?);
                }
            }
        }
        Ok(TrinityGroup { trinity: t.clone(), white, digraphs, groups, images })
    }

    pub fn trinity(&self) -> &Trinity {
        &self.trinity
    }

    pub fn white(&self) -> &WhiteTriangleMatrix {
        &self.white
    }

    pub fn digraph(&self, c: Color) -> &RibbonDigraph {
        &self.digraphs[c.index()]
    }

    pub fn group(&self, c: Color) -> &SandpileGroup {
        &self.groups[c.index()]
    }

    pub fn white_triangle_equivalent(&self, a: &TriChipConfig, b: &TriChipConfig) -> Result<bool> {
        self.white.contains(&a.sub(b).node_vector(&self.trinity))
    }

    /// `φ_{a→b}([x]) = [y]` where `(x on a, 0, 0) ≈_W (-y on b, 0)`.
    pub fn phi(&self, a: Color, b: Color, x: &ChipConfig) -> Result<PicClass> {
        self.group(b).canonical(&self.phi_raw(a, b, x)?)
    }

    /// `ψ = -φ`: `(x on a, 0, 0) ≈_W (y on b, 0)`.
    pub fn psi(&self, a: Color, b: Color, x: &ChipConfig) -> Result<PicClass> {
        self.group(b).canonical(&-&self.phi_raw(a, b, x)?)
    }

    /// A representative of `φ_{a→b}([x])`, not reduced.
    pub fn phi_raw(&self, a: Color, b: Color, x: &ChipConfig) -> Result<ChipConfig> {
        if a == b {
            return Err(Error::InvalidMap("φ needs two distinct colors".into()));
        }
        check_degree_zero(x, self.trinity.class(a).len())?;
        let images = &self.images[&(a, b)];
        let mut y = ChipConfig::zero(self.trinity.class(b).len());
        for (v, &xv) in x.values().iter().enumerate().skip(1) {
            if xv != 0 {
                y = &y + &images[v - 1].scale(xv);
            }
        }
        Ok(y)
    }

    /// Move the chips of `x` off class `a` along paths in G_b, giving
    /// weights +1 and -1 alternately to the white triangles on each path.
    /// Paths are shortest with smallest-index tie-breaks.
    pub fn chip_transport(&self, a: Color, b: Color, x: &ChipConfig) -> Result<Transport> {
        let t = &self.trinity;
        check_degree_zero(x, t.class(a).len())?;
        let class_a = t.class(a);
        let mut pos = vec![usize::MAX; t.n_nodes()];
        for c in Color::ALL {
            for (i, &v) in t.class(c).iter().enumerate() {
                pos[v] = i;
            }
        }
        let column: HashMap<usize, usize> =
            self.white.triangles().iter().enumerate().map(|(j, &tri)| (tri, j)).collect();
        // adjacency of G_b on trinity nodes, neighbors by edge index
        let mut adj: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
        for k in t.edges_of_color(b) {
            let [p, q] = t.edge_ends(k);
            adj.entry(p).or_default().push((k, q));
            adj.entry(q).or_default().push((k, p));
        }
        let mut rest = x.clone();
        let mut coefficients = vec![0i64; self.white.triangles().len()];
        while let Some(u) = rest.values().iter().position(|&c| c > 0) {
            let w = rest.values().iter().position(|&c| c < 0).expect("degree zero");
            let path = bfs_path(&adj, class_a[u], class_a[w])
                .ok_or_else(|| Error::NotFound("no path in the derived graph".into()))?;
            for (i, &k) in path.iter().enumerate() {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                coefficients[column[&t.white_triangle(k)]] += sign;
            }
            rest.values_mut()[u] -= 1;
            rest.values_mut()[w] += 1;
        }
        let mut target = ChipConfig::zero(t.class(b).len());
        for (j, &tri) in self.white.triangles().iter().enumerate() {
            if coefficients[j] != 0 {
                target.values_mut()[pos[t.corner(tri, b)]] += coefficients[j];
            }
        }
        Ok(Transport { coefficients, target })
    }

    /// Smith form of the white-triangle matrix.
    pub fn aw_structure(&self) -> Result<AwStructure> {
        let smith = Smith::new(self.white.matrix())?;
        Ok(AwStructure { free_rank: smith.cokernel_free_rank(), torsion: smith.torsion() })
    }
}

fn check_degree_zero(x: &ChipConfig, n: usize) -> Result<()> {
    if x.len() != n {
        return Err(Error::InvalidMap(format!("chip vector of length {} on {n} vertices", x.len())));
    }
    if x.degree() != 0 {
        return Err(Error::DegreeNonzero(x.degree()));
    }
    Ok(())
}

/// Edge sequence of a shortest path from `s` to `g`.
fn bfs_path(adj: &HashMap<usize, Vec<(usize, usize)>>, s: usize, g: usize) -> Option<Vec<usize>> {
    let mut prev: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut queue = VecDeque::from([s]);
    let mut seen = std::collections::HashSet::from([s]);
    while let Some(v) = queue.pop_front() {
        if v == g {
            let mut path = Vec::new();
            let mut cur = g;
            while cur != s {
                let (k, p) = prev[&cur];
                path.push(k);
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for &(k, w) in adj.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
            if seen.insert(w) {
                prev.insert(w, (k, v));
                queue.push_back(w);
            }
        }
    }
    None
}

/// `y` with `W k = (1_v - 1_q on a, y on b, 0 on c)`, for each `v` after
/// the first node `q` of class `a`.
fn basis_images(t: &Trinity, white: &WhiteTriangleMatrix, a: Color, b: Color) -> Result<Vec<ChipConfig>> {
    let c = Color::third(a, b);
    let rows: Vec<usize> = t.class(a).iter().chain(t.class(c)).copied().collect();
    let m = white.matrix();
    let sub = IntMatrix::from_rows(&rows.iter().map(|&r| m.row(r).to_vec()).collect::<Vec<_>>());
    let hermite = ColumnHermite::new(&sub)?;
    let na = t.class(a).len();
    let mut out = Vec::with_capacity(na.saturating_sub(1));
    for v in 1..na {
        let mut rhs = vec![0i128; rows.len()];
        rhs[v] = 1;
        rhs[0] = -1;
        let k = hermite
            .solve(&rhs)?
            .ok_or_else(|| Error::NotFound(format!("no white-triangle combination for {a}→{b}")))?;
        let y: Vec<i64> = t
            .class(b)
            .iter()
            .map(|&node| {
                let s: i128 = m.row(node).iter().zip(&k).map(|(w, kj)| w * kj).sum();
                i64::try_from(s).map_err(|_| Error::from(LinalgError::Overflow))
            })
            .collect::<Result<_>>()?;
        out.push(ChipConfig::new(y));
    }
    Ok(out)
}

/// The Cori–Rossin map from the sandpile group of the bidirected plane
/// graph `g` to that of its bidirected dual. Edge `k` is oriented from the
/// end of dart `2k` unless `flipped[k]`; its dual runs from the face on
/// the left to the face on the right. Dual vertices are the faces of `g`.
pub fn cori_rossin_iso(g: &PlaneGraph, x: &ChipConfig, flipped: Option<&[bool]>) -> Result<ChipConfig> {
    g.check_plane()?;
    check_degree_zero(x, g.n_vertices())?;
    let m = g.n_edges();
    let mut incidence = IntMatrix::zeros(g.n_vertices(), m);
    for k in 0..m {
        let flip = flipped.is_some_and(|f| f[k]);
        let (tail, head) = if flip { (2 * k + 1, 2 * k) } else { (2 * k, 2 * k + 1) };
        incidence[(g.vertex_of(head), k)] += 1;
        incidence[(g.vertex_of(tail), k)] -= 1;
    }
    let a = ColumnHermite::new(&incidence)?
        .solve(&x.wide())?
        .ok_or_else(|| Error::NotFound("no integer flow for the chip vector".into()))?;
    let mut y = vec![0i64; g.n_faces()];
    for k in 0..m {
        let flip = flipped.is_some_and(|f| f[k]);
        let tail = if flip { 2 * k + 1 } else { 2 * k };
        let ak = i64::try_from(a[k]).map_err(|_| Error::from(LinalgError::Overflow))?;
        y[g.face_right(tail)] += ak;
        y[g.face_left(tail)] -= ak;
    }
    Ok(ChipConfig::new(y))
}

/// The sandpile group of the bidirected planar dual, for reducing the
/// output of [`cori_rossin_iso`].
pub fn dual_group(g: &PlaneGraph) -> Result<SandpileGroup> {
    SandpileGroup::new(&RibbonDigraph::bidirect(&g.planar_dual()?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build::trinity_from_plane_graph;

    fn ids(prefix: &str, n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("{prefix}{i}")).collect()
    }

    fn theta() -> PlaneGraph {
        PlaneGraph::with_generated_darts(ids("v", 2), ids("e", 3), vec![vec![0, 2, 4], vec![5, 3, 1]]).unwrap()
    }

    fn k2() -> PlaneGraph {
        PlaneGraph::with_generated_darts(ids("v", 2), ids("e", 1), vec![vec![0], vec![1]]).unwrap()
    }

    #[test]
    fn aw_structure_small() {
        let tg = TrinityGroup::new(&trinity_from_plane_graph(&k2()).unwrap()).unwrap();
        assert_eq!(tg.aw_structure().unwrap(), AwStructure { free_rank: 2, torsion: vec![] });
        let tg = TrinityGroup::new(&trinity_from_plane_graph(&theta()).unwrap()).unwrap();
        assert_eq!(tg.aw_structure().unwrap(), AwStructure { free_rank: 2, torsion: vec![3] });
    }

    #[test]
    fn single_white_triangle_is_equivalent_to_zero() {
        let t = trinity_from_plane_graph(&theta()).unwrap();
        let tg = TrinityGroup::new(&t).unwrap();
        let tri = tg.white().triangles()[0];
        let mut a = TriChipConfig::zero(&t);
        for c in Color::ALL {
            let i = t.class(c).iter().position(|&v| v == t.corner(tri, c)).unwrap();
            a.part_mut(c).values_mut()[i] = 1;
        }
        assert!(tg.white_triangle_equivalent(&a, &TriChipConfig::zero(&t)).unwrap());
        assert!(tg.white_triangle_equivalent(&a, &a).unwrap());
    }

    #[test]
    fn theta_phi_preserves_order_and_matches_transport() {
        let t = trinity_from_plane_graph(&theta()).unwrap();
        let tg = TrinityGroup::new(&t).unwrap();
        let x = ChipConfig::new(vec![1, -1]);
        let y = tg.phi(Color::V, Color::E, &x).unwrap();
        assert_eq!(tg.group(Color::E).class_order(&y).unwrap(), 3);
        let tr = tg.chip_transport(Color::V, Color::E, &x).unwrap();
        assert!(tg.group(Color::E).equivalent(&tr.target, y.representative()).unwrap());
        let z = tg.psi(Color::V, Color::E, &x).unwrap();
        assert_eq!(tg.group(Color::E).add(&y, &z).unwrap(), tg.group(Color::E).zero());
    }

    #[test]
    fn degree_checked() {
        let tg = TrinityGroup::new(&trinity_from_plane_graph(&theta()).unwrap()).unwrap();
        assert!(matches!(tg.phi(Color::V, Color::E, &ChipConfig::new(vec![1, 0])), Err(Error::DegreeNonzero(1))));
    }

    #[test]
    fn cori_rossin_on_theta_agrees_with_phi() {
        let g = theta();
        let t = trinity_from_plane_graph(&g).unwrap();
        let tg = TrinityGroup::new(&t).unwrap();
        let x = ChipConfig::new(vec![1, -1]);
        let y = cori_rossin_iso(&g, &x, None).unwrap();
        assert!(tg.group(Color::R).equivalent(&y, tg.phi(Color::V, Color::R, &x).unwrap().representative()).unwrap());
    }
}
