//! The sandpile action ⊕ on hypertrees and the three ways of computing the
//! action of Pic⁰(D_V) on B_E(G_R): canonical, classical (through a
//! Bernardi bijection) and rotor-routing.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::hypertree::Bipartite;
use crate::jaeger::{side_positions, BernardiTable, TrinityBase, TREE_LIMIT};
use crate::rotor::{arborescence_to_hypertree, next_out_arc};
use crate::sandpile::{enumerate_arborescences, ChipConfig, Direction, SandpileGroup};
use crate::trinity::Color;
use crate::trinity_group::TrinityGroup;

/// Hypertrees on class `cls` of G_host indexed by their class in
/// Pic(D_cls). Vectors are in class order, like chip configurations of
/// D_cls.
#[derive(Clone, Debug)]
pub struct HypertreeTable {
    cls: Color,
    host: Color,
    hypertrees: Vec<Vec<i64>>,
    by_class: HashMap<ChipConfig, usize>,
    collisions: Vec<(usize, usize)>,
}

impl HypertreeTable {
    pub fn new(tg: &TrinityGroup, cls: Color, host: Color, limit: usize) -> Result<Self> {
        if cls == host {
            return Err(Error::NotBipartite(format!("{cls} is not a class of G_{host}")));
        }
        let t = tg.trinity();
        let g = t.derived_bipartite(host);
        let h = Bipartite::new(&g, side_positions(t, host, cls))?;
        let hypertrees = h.enumerate(limit)?;
        let group = tg.group(cls);
        let mut by_class = HashMap::new();
        let mut collisions = Vec::new();
        for (i, f) in hypertrees.iter().enumerate() {
            let key = group.canonical(&ChipConfig::new(f.clone()))?.representative().clone();
            if let Some(j) = by_class.insert(key, i) {
                collisions.push((j, i));
            }
        }
        Ok(HypertreeTable { cls, host, hypertrees, by_class, collisions })
    }

    pub fn class(&self) -> Color {
        self.cls
    }

    pub fn host(&self) -> Color {
        self.host
    }

    pub fn hypertrees(&self) -> &[Vec<i64>] {
        &self.hypertrees
    }

    pub fn len(&self) -> usize {
        self.hypertrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hypertrees.is_empty()
    }

    /// Pairs of hypertrees found linearly equivalent; empty when the
    /// hypertrees are pairwise inequivalent.
    pub fn collisions(&self) -> &[(usize, usize)] {
        &self.collisions
    }

    pub fn contains(&self, f: &[i64]) -> bool {
        self.hypertrees.binary_search_by(|g| g.as_slice().cmp(f)).is_ok()
    }

    /// The hypertree linearly equivalent to `y`.
    pub fn representative(&self, group: &SandpileGroup, y: &ChipConfig) -> Result<&[i64]> {
        let key = group.canonical(y)?;
        self.by_class
            .get(key.representative())
            .map(|&i| self.hypertrees[i].as_slice())
            .ok_or_else(|| Error::NotFound(format!("no hypertree equivalent to {:?}", y.values())))
    }

    /// `x ⊕ f`: the hypertree equivalent to `x + f`.
    pub fn act(&self, group: &SandpileGroup, x: &ChipConfig, f: &[i64]) -> Result<Vec<i64>> {
        if x.degree() != 0 {
            return Err(Error::DegreeNonzero(x.degree()));
        }
        if !self.contains(f) {
            return Err(Error::NotAHypertree(format!("{f:?}")));
        }
        Ok(self.representative(group, &(x + &ChipConfig::new(f.to_vec())))?.to_vec())
    }
}

/// `x ⊕ f` for `x` of degree 0 on class `cls` and `f` a hypertree on `cls`
/// in G_host.
pub fn sandpile_act(tg: &TrinityGroup, cls: Color, host: Color, x: &ChipConfig, f: &[i64]) -> Result<Vec<i64>> {
    HypertreeTable::new(tg, cls, host, TREE_LIMIT)?.act(tg.group(cls), x, f)
}

/// A way of computing the action of Pic⁰(D_V) on B_E(G_R).
pub trait PicAction: Send + Sync {
    fn name(&self) -> &'static str;
    /// `x · f` for `x` of degree 0 on the violet class.
    fn act(&self, x: &ChipConfig, f: &[i64]) -> Result<Vec<i64>>;
}

/// Options shared by the action constructors.
#[derive(Clone, Debug, Default)]
pub struct ActionOptions {
    pub base: Option<TrinityBase>,
    /// index of the root in the violet class
    pub root: Option<usize>,
}

type Constructor = for<'a> fn(&'a TrinityGroup, &ActionOptions) -> Result<Box<dyn PicAction + 'a>>;

/// The registered actions by name.
pub const ACTIONS: [(&str, Constructor); 3] = [
    ("canonical", |tg, _| Ok(Box::new(CanonicalAction::new(tg)?))),
    ("classical", |tg, o| {
        let base = match o.base {
            Some(b) => b,
            None => TrinityBase::default_for(tg.trinity(), Color::R)?,
        };
        Ok(Box::new(ClassicalAction::new(tg, base)?))
    }),
    ("rotor", |tg, o| Ok(Box::new(RotorAction::new(tg, o.root.unwrap_or(0))?))),
];

pub fn action_names() -> Vec<&'static str> {
    ACTIONS.iter().map(|(n, _)| *n).collect()
}

pub fn make_action<'a>(name: &str, tg: &'a TrinityGroup, options: &ActionOptions) -> Result<Box<dyn PicAction + 'a>> {
    let (_, make) = ACTIONS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::NotFound(format!("unknown action {name:?}")))?;
    make(tg, options)
}

/// `x · f = φ_{V→E}(x) ⊕ f`.
pub struct CanonicalAction<'a> {
    tg: &'a TrinityGroup,
    table: HypertreeTable,
}

impl<'a> CanonicalAction<'a> {
    pub fn new(tg: &'a TrinityGroup) -> Result<Self> {
        Ok(CanonicalAction { tg, table: HypertreeTable::new(tg, Color::E, Color::R, TREE_LIMIT)? })
    }
}

impl PicAction for CanonicalAction<'_> {
    fn name(&self) -> &'static str {
        "canonical"
    }

    fn act(&self, x: &ChipConfig, f: &[i64]) -> Result<Vec<i64>> {
        let y = self.tg.phi(Color::V, Color::E, x)?;
        self.table.act(self.tg.group(Color::E), y.representative(), f)
    }
}

/// `x · f = β⁻¹(x ⊕ β(f))` with β the Bernardi bijection of a base of G_R.
pub struct ClassicalAction<'a> {
    tg: &'a TrinityGroup,
    violet: HypertreeTable,
    beta: BernardiTable,
}

impl<'a> ClassicalAction<'a> {
    pub fn new(tg: &'a TrinityGroup, base: TrinityBase) -> Result<Self> {
        let t = tg.trinity();
        if base.color(t) != Color::R {
            return Err(Error::InvalidBase("the base must be an edge of G_R".into()));
        }
        let g = t.derived_bipartite(Color::R);
        let h = Bipartite::new(&g, side_positions(t, Color::R, Color::E))?;
        let beta = BernardiTable::new(&h, base.in_derived(t)?, TREE_LIMIT)?;
        Ok(ClassicalAction { tg, violet: HypertreeTable::new(tg, Color::V, Color::R, TREE_LIMIT)?, beta })
    }

    /// β: B_E(G_R) → B_V(G_R).
    pub fn beta(&self) -> &BernardiTable {
        &self.beta
    }
}

impl PicAction for ClassicalAction<'_> {
    fn name(&self) -> &'static str {
        "classical"
    }

    fn act(&self, x: &ChipConfig, f: &[i64]) -> Result<Vec<i64>> {
        let g = self.beta.image(f)?;
        let moved = self.violet.act(self.tg.group(Color::V), x, g)?;
        Ok(self.beta.preimage(&moved)?.to_vec())
    }
}

/// Rotor-routing on in-arborescences of D_V at a root, carried to B_E(G_R)
/// by [`arborescence_to_hypertree`]. The rotor action of `[x]` corresponds
/// to the Bernardi action of `[-x]`, so `act` plays the game for `-x`.
///
/// The permutation of the arborescences induced by each `1_v - 1_root` is
/// computed once; negative coefficients use the inverse permutation.
pub struct RotorAction {
    root: usize,
    hypertrees: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    /// `unit[v][i]`: arborescence index after acting by `1_v - 1_root`
    unit: Vec<Vec<usize>>,
    inverse: Vec<Vec<usize>>,
}

impl RotorAction {
    pub fn new(tg: &TrinityGroup, root: usize) -> Result<Self> {
        let t = tg.trinity();
        let d = tg.digraph(Color::V);
        if root >= d.n_vertices() {
            return Err(Error::UnknownVertex(format!("#{root}")));
        }
        let arbs = enumerate_arborescences(d, root, Direction::In, TREE_LIMIT)?;
        let hypertrees: Vec<Vec<i64>> =
            arbs.iter().map(|a| arborescence_to_hypertree(t, a)).collect::<Result<_>>()?;
        let index: HashMap<Vec<i64>, usize> = hypertrees.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        if index.len() != hypertrees.len() {
            return Err(Error::NotFound("two arborescences share a hypertree".into()));
        }
        let arb_index: HashMap<Vec<Option<usize>>, usize> = arbs
            .iter()
            .enumerate()
            .map(|(i, a)| ((0..d.n_vertices()).map(|v| a.arc_at(v)).collect(), i))
            .collect();
        let limit = (d.n_vertices() * d.n_arcs()) as u64 * (tg.group(Color::V).order() as u64 + 1);
        let mut unit = vec![Vec::new(); d.n_vertices()];
        let mut inverse = vec![Vec::new(); d.n_vertices()];
        for v in 0..d.n_vertices() {
            if v == root {
                continue;
            }
            let mut perm = Vec::with_capacity(arbs.len());
            for a in &arbs {
                let mut rotors: Vec<Option<usize>> = (0..d.n_vertices()).map(|w| a.arc_at(w)).collect();
                let mut at = v;
                let mut steps = 0u64;
                while at != root {
                    let next = next_out_arc(d, rotors[at].unwrap());
                    rotors[at] = Some(next);
                    at = d.head(next);
                    steps += 1;
                    if steps > limit {
                        return Err(Error::StepLimit(limit));
                    }
                }
                let j = *arb_index
                    .get(&rotors)
                    .ok_or_else(|| Error::InvalidArborescence("rotor game ended off an arborescence".into()))?;
                perm.push(j);
            }
            let mut inv = vec![0; perm.len()];
            for (i, &j) in perm.iter().enumerate() {
                inv[j] = i;
            }
            unit[v] = perm;
            inverse[v] = inv;
        }
        Ok(RotorAction { root, hypertrees, index, unit, inverse })
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Hypertrees of the in-arborescences at the root, in arborescence order.
    pub fn hypertrees(&self) -> &[Vec<i64>] {
        &self.hypertrees
    }

    /// The rotor action of `[x]` itself, transported to hypertrees.
    pub fn rotor(&self, x: &ChipConfig, f: &[i64]) -> Result<Vec<i64>> {
        if x.degree() != 0 {
            return Err(Error::DegreeNonzero(x.degree()));
        }
        let mut i = *self.index.get(f).ok_or_else(|| Error::NotAHypertree(format!("{f:?}")))?;
        for (v, &c) in x.values().iter().enumerate() {
            if v == self.root {
                continue;
            }
            let perm = if c >= 0 { &self.unit[v] } else { &self.inverse[v] };
            for _ in 0..c.unsigned_abs() {
                i = perm[i];
            }
        }
        Ok(self.hypertrees[i].clone())
    }
}

impl PicAction for RotorAction {
    fn name(&self) -> &'static str {
        "rotor"
    }

    fn act(&self, x: &ChipConfig, f: &[i64]) -> Result<Vec<i64>> {
        self.rotor(&-x, f)
    }
}

/// The Bernardi action `x · f`: canonical when `base` is absent, classical
/// through the Bernardi bijection of `base` otherwise.
pub fn bernardi_act(tg: &TrinityGroup, x: &ChipConfig, f: &[i64], base: Option<TrinityBase>) -> Result<Vec<i64>> {
    match base {
        None => CanonicalAction::new(tg)?.act(x, f),
        Some(b) => ClassicalAction::new(tg, b)?.act(x, f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build::trinity_from_plane_graph;
    use crate::map::PlaneGraph;

    fn theta_group() -> TrinityGroup {
        let ids = |p: &str, n: usize| (1..=n).map(|i| format!("{p}{i}")).collect::<Vec<_>>();
        let g = PlaneGraph::with_generated_darts(ids("v", 2), ids("e", 3), vec![vec![0, 2, 4], vec![5, 3, 1]]).unwrap();
        TrinityGroup::new(&trinity_from_plane_graph(&g).unwrap()).unwrap()
    }

    #[test]
    fn theta_generator_cycles_violet_hypertrees() {
        let tg = theta_group();
        let x = ChipConfig::new(vec![-1, 1]);
        let mut f = vec![2, 0];
        let mut seen = vec![f.clone()];
        for _ in 0..2 {
            f = sandpile_act(&tg, Color::V, Color::R, &x, &f).unwrap();
            seen.push(f.clone());
        }
        assert_eq!(sandpile_act(&tg, Color::V, Color::R, &x, &f).unwrap(), vec![2, 0]);
        seen.sort();
        assert_eq!(seen, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(sandpile_act(&tg, Color::V, Color::R, &ChipConfig::zero(2), &[1, 1]).unwrap(), vec![1, 1]);
    }

    #[test]
    fn strategies_agree_on_theta() {
        let tg = theta_group();
        let table = HypertreeTable::new(&tg, Color::E, Color::R, 100).unwrap();
        let mut actions: Vec<Box<dyn PicAction>> = Vec::new();
        for name in action_names() {
            actions.push(make_action(name, &tg, &ActionOptions::default()).unwrap());
        }
        actions.push(Box::new(RotorAction::new(&tg, 1).unwrap()));
        for x in tg.group(Color::V).generators() {
            for f in table.hypertrees() {
                let want = actions[0].act(&x, f).unwrap();
                for a in &actions[1..] {
                    assert_eq!(a.act(&x, f).unwrap(), want, "{}", a.name());
                }
            }
        }
    }

    #[test]
    fn unknown_action() {
        let tg = theta_group();
        assert!(make_action("nope", &tg, &ActionOptions::default()).is_err());
    }
}
