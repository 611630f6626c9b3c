//! Exhaustive verification of the structural theorems on seeded corpora of
//! small trinities.
//!
//! Each check is a [`Check`] trait object in [`registry`]; a run over a
//! corpus fans out over instances and reports one row per check in a fixed
//! order.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::actions::{CanonicalAction, ClassicalAction, HypertreeTable, PicAction, RotorAction};
use crate::build::subdivide;
use crate::error::{Error, Result};
use crate::format::write_trinity;
use crate::hypertree::{is_spanning_tree, spanning_trees, Bipartite};
use crate::jaeger::{
    bernardi_break_divisor, dual_hypertree, is_jaeger_tree, jaeger_arborescence_dual, jaeger_trees, side_positions,
    tour, Base, BernardiTable, TrinityBase, TREE_LIMIT,
};
use crate::map::PlaneGraph;
use crate::random::{random_general_trinity, random_plane_graph};
use crate::rotor::rotor_act;
use crate::sandpile::{enumerate_arborescences, ChipConfig, Direction, SandpileGroup};
use crate::build::trinity_from_plane_graph;
use crate::trinity::{Color, Trinity};
use crate::trinity_group::{cori_rossin_iso, dual_group, TriChipConfig, TrinityGroup};

/// A trinity to verify, with the plane graph it came from when there is
/// one.
#[derive(Clone, Debug)]
pub struct Instance {
    pub label: String,
    pub seed: u64,
    pub trinity: Trinity,
    pub plane: Option<PlaneGraph>,
}

impl Instance {
    pub fn from_plane_graph(label: impl Into<String>, seed: u64, g: PlaneGraph) -> Result<Self> {
        Ok(Instance { label: label.into(), seed, trinity: trinity_from_plane_graph(&g)?, plane: Some(g) })
    }

    pub fn from_trinity(label: impl Into<String>, seed: u64, t: Trinity) -> Self {
        Instance { label: label.into(), seed, trinity: t, plane: None }
    }
}

/// `count` instances alternating between trinities of random plane graphs
/// and general trinities, each drawn from at most `max_vertices` vertices
/// and `max_edges` edges.
pub fn corpus(seed: u64, count: usize, max_vertices: usize, max_edges: usize) -> Result<Vec<Instance>> {
    if max_vertices < 2 || max_edges + 1 < 2 {
        return Err(Error::Infeasible("corpus needs room for at least two vertices and one edge".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let n = rng.gen_range(2..=max_vertices.min(max_edges + 1));
        let m = rng.gen_range(n - 1..=max_edges);
        let s: u64 = rng.gen();
        if i % 2 == 0 {
            let g = random_plane_graph(n, m, s)?;
            out.push(Instance::from_plane_graph(format!("plane#{i} n={n} m={m} seed={s}"), s, g)?);
        } else {
            let t = random_general_trinity(n, m, s)?;
            out.push(Instance::from_trinity(format!("general#{i} n={n} m={m} seed={s}"), s, t));
        }
    }
    Ok(out)
}

/// Per-instance data shared between checks, built on first use.
pub struct Context<'i> {
    pub instance: &'i Instance,
    pub tg: TrinityGroup,
    tables: [OnceLock<std::result::Result<HypertreeTable, String>>; 9],
}

impl<'i> Context<'i> {
    pub fn new(instance: &'i Instance) -> Result<Self> {
        Ok(Context {
            instance,
            tg: TrinityGroup::new(&instance.trinity)?,
            tables: Default::default(),
        })
    }

    pub fn trinity(&self) -> &Trinity {
        &self.instance.trinity
    }

    /// Hypertrees on `cls` in G_host, keyed by class.
    pub fn table(&self, cls: Color, host: Color) -> Result<&HypertreeTable> {
        let slot = cls.index() * 3 + host.index();
        self.tables[slot]
            .get_or_init(|| HypertreeTable::new(&self.tg, cls, host, TREE_LIMIT).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|e| Error::NotFound(e.clone()))
    }

    /// Up to four distinct bases of G_R spread over the base list.
    pub fn bases(&self) -> Vec<TrinityBase> {
        let all = TrinityBase::all(self.trinity(), Color::R);
        let n = all.len();
        let mut picks: Vec<usize> = vec![0, 1, n / 2, n - 1];
        picks.retain(|&i| i < n);
        picks.sort_unstable();
        picks.dedup();
        picks.into_iter().map(|i| all[i]).collect()
    }
}

/// Result of one check on one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass { cases: u64 },
    Fail { cases: u64, detail: String },
    Skip(String),
}

/// Accumulates cases and the first failure.
#[derive(Default)]
struct Tally {
    cases: u64,
    failure: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(detail());
        }
    }

    fn finish(self) -> Outcome {
        match self.failure {
            None => Outcome::Pass { cases: self.cases },
            Some(detail) => Outcome::Fail { cases: self.cases, detail },
        }
    }
}

pub trait Check: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn run(&self, cx: &Context) -> Result<Outcome>;
}

/// All checks in report order.
pub fn registry() -> Vec<Box<dyn Check>> {
    vec![
        Box::new(LaplacianCounts),
        Box::new(HypertreeRepresentatives),
        Box::new(ActionLaws),
        Box::new(PhiPsi),
        Box::new(AwStructureCheck),
        Box::new(CommutingDiagram),
        Box::new(BaseIndependence),
        Box::new(Duality),
        Box::new(RotorBernardi),
        Box::new(CoriRossin),
        Box::new(TourInvariant),
        Box::new(HypertreeCharacterization),
        Box::new(BreakDivisors),
        Box::new(DualHypertree),
        Box::new(BernardiBijection),
        Box::new(JaegerArborescence),
        Box::new(YuenInvariance),
    ]
}

/// The checks with the given names, in registry order.
pub fn select(names: &[String]) -> Result<Vec<Box<dyn Check>>> {
    let all = registry();
    for n in names {
        if !all.iter().any(|c| c.name() == n) {
            return Err(Error::NotFound(format!("unknown check {n:?}")));
        }
    }
    Ok(all.into_iter().filter(|c| names.iter().any(|n| n == c.name())).collect())
}

/// One row of a [`VerificationReport`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckRow {
    pub name: String,
    pub instances: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub cases: u64,
    /// the smallest failing instance: label, detail and the instance as a
    /// trinity file
    pub first_failure: Option<(String, String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub rows: Vec<CheckRow>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.failed == 0)
    }

    pub fn row(&self, name: &str) -> Option<&CheckRow> {
        self.rows.iter().find(|r| r.name == name)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<28} {:>9} {:>9} {:>7} {:>12}  result", "check", "instances", "skipped", "failed", "cases")?;
        for r in &self.rows {
            let result = if r.failed > 0 { "FAIL" } else { "pass" };
            writeln!(f, "{:<28} {:>9} {:>9} {:>7} {:>12}  {result}", r.name, r.instances, r.skipped, r.failed, r.cases)?;
        }
        for r in &self.rows {
            if let Some((label, detail, trinity)) = &r.first_failure {
                writeln!(f, "\ncounterexample for {} on {label}: {detail}", r.name)?;
                write!(f, "{trinity}")?;
            }
        }
        Ok(())
    }
}

fn run_instance(inst: &Instance, checks: &[Box<dyn Check>]) -> Vec<Outcome> {
    let cx = match Context::new(inst) {
        Ok(cx) => cx,
        Err(e) => {
            return checks.iter().map(|_| Outcome::Fail { cases: 0, detail: format!("setup failed: {e}") }).collect()
        }
    };
    checks
        .iter()
        .map(|c| c.run(&cx).unwrap_or_else(|e| Outcome::Fail { cases: 0, detail: format!("error: {e}") }))
        .collect()
}

/// Run `checks` on every instance with `jobs` worker threads (0 for the
/// default). Output does not depend on `jobs`.
pub fn verify_corpus(instances: &[Instance], checks: &[Box<dyn Check>], jobs: usize) -> Result<VerificationReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Infeasible(format!("thread pool: {e}")))?;
    let outcomes: Vec<Vec<Outcome>> = pool.install(|| instances.par_iter().map(|i| run_instance(i, checks)).collect());
    let mut rows: Vec<CheckRow> = checks
        .iter()
        .map(|c| CheckRow {
            name: c.name().to_string(),
            instances: 0,
            passed: 0,
            failed: 0,
            skipped: 0,
            cases: 0,
            first_failure: None,
        })
        .collect();
    // smallest failing instance per check, by trinity edge count
    let mut smallest: Vec<Option<usize>> = vec![None; checks.len()];
    for (inst, per_check) in instances.iter().zip(&outcomes) {
        for ((row, outcome), best) in rows.iter_mut().zip(per_check).zip(smallest.iter_mut()) {
            row.instances += 1;
            match outcome {
                Outcome::Pass { cases } => {
                    row.passed += 1;
                    row.cases += cases;
                }
                Outcome::Fail { cases, detail } => {
                    row.failed += 1;
                    row.cases += cases;
                    let size = inst.trinity.n_edges();
                    if best.map_or(true, |b| size < b) {
                        *best = Some(size);
                        row.first_failure =
                            Some((inst.label.clone(), detail.clone(), write_trinity(&inst.trinity)));
                    }
                }
                Outcome::Skip(_) => row.skipped += 1,
            }
        }
    }
    Ok(VerificationReport { rows })
}

/// Every check on a single trinity.
pub fn verify_theorems(t: &Trinity, seed: u64) -> Result<VerificationReport> {
    let inst = Instance::from_trinity("input", seed, t.clone());
    verify_corpus(std::slice::from_ref(&inst), &registry(), 1)
}

fn all_degree_zero(group: &SandpileGroup) -> Vec<ChipConfig> {
    group.elements().into_iter().map(|c| c.representative().clone()).collect()
}

fn negate(x: &ChipConfig) -> ChipConfig {
    -x
}

// ---------------------------------------------------------------------------

/// Reduced-Laplacian determinant, invariant-factor product and in-arborescence
/// counts at every root agree, for D_R, D_E and D_V.
struct LaplacianCounts;

impl Check for LaplacianCounts {
    fn name(&self) -> &'static str {
        "laplacian-counts"
    }
    fn description(&self) -> &'static str {
        "|det reduced Laplacian| = product of invariant factors = in-arborescences at every root"
    }
    fn run(&self, cx: &Context) -> Result<Outcome> {
        let mut tally = Tally::default();
        for c in Color::ALL {
            let d = cx.tg.digraph(c);
            let group = cx.tg.group(c);
            let product: i128 = group.invariant_factors().iter().product();
            tally.check(product == group.order(), || format!("D_{c}: factors {:?} vs order {}", group.invariant_factors(), group.order()));
            let l = group.laplacian();
            for r in 0..d.n_vertices() {
                let det = l.minor(r, r).determinant()?.abs();
                let count = enumerate_arborescences(d, r, Direction::In, TREE_LIMIT)?.len() as i128;
                tally.check(det == group.order() && count == det, || {
                    format!("D_{c} root {}: det {det}, arborescences {count}, order {}", d.map().vertex_id(r), group.order())
                });
            }
        }
        Ok(tally.finish())
    }
}

fn random_chips(rng: &mut ChaCha8Rng, n: usize, degree: i64) -> ChipConfig {
    let mut v: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=4)).collect();
    let s: i64 = v.iter().sum();
    v[n - 1] += degree - s;
    ChipConfig::new(v)
}

/// Hypertrees on V in G_R (and on E) represent each class of the right
/// degree exactly once.
struct HypertreeRepresentatives;

impl Check for HypertreeRepresentatives {
    fn name(&self) -> &'static str {
        "hypertree-representatives"
    }
    fn description(&self) -> &'static str {
        "|B_V(G_R)| = |Pic0(D_V)|, hypertrees pairwise inequivalent, random configurations hit exactly one"
    }
    fn run(&self, cx: &Context) -> Result<Outcome> {
        let mut tally = Tally::default();
        let mut rng = ChaCha8Rng::seed_from_u64(cx.instance.seed ^ 0x5151);
        let t = cx.trinity();
        for (cls, host) in [(Color::V, Color::R), (Color::E, Color::R)] {
            let table = cx.table(cls, host)?;
            let group = cx.tg.group(cls);
            tally.check(table.len() as i128 == group.order(), || {
                format!("|B_{cls}(G_{host})| = {} but |Pic0(D_{cls})| = {}", table.len(), group.order())
            });
            tally.check(table.collisions().is_empty(), || format!("equivalent hypertrees {:?}", table.collisions()[0]));
            let degree = t.class(Color::third(cls, host)).len() as i64 - 1;
            for _ in 0..20 {
                let x = random_chips(&mut rng, t.class(cls).len(), degree);
                let mut hits = 0;
                for f in table.hypertrees() {
                    if group.equivalent(&x, &ChipConfig::new(f.clone()))? {
                        hits += 1;
                    }
                }
                tally.check(hits == 1, || format!("{:?} is equivalent to {hits} hypertrees on {cls}", x.values()));
            }
        }
        Ok(tally.finish())
    }
}

/// ⊕ is a free transitive action on each hypertree set.
struct ActionLaws;

impl Check for ActionLaws {
    fn name(&self) -> &'static str {
        "action-laws"
    }
    fn description(&self) -> &'static str {
        "x ⊕ (y ⊕ f) = (x + y) ⊕ f on generators; the orbit of a hypertree is everything"
    }
    fn run(&self, cx: &Context) -> Result<Outcome> {
        let mut tally = Tally::default();
        for (cls, host) in [(Color::V, Color::R), (Color::E, Color::R), (Color::E, Color::V), (Color::R, Color::V)] {
            let table = cx.table(cls, host)?;
            let group = cx.tg.group(cls);
            let gens = group.generators();
            for f in table.hypertrees() {
                for x in &gens {
                    for y in &gens {
                        let lhs = table.act(group, x, &table.act(group, y, f)?)?;
                        let rhs = table.act(group, &(x + y), f)?;
                        tally.check(lhs == rhs, || format!("{cls} in G_{host}: composition fails at f={f:?}"));
                    }
                }
            }
            let f = &table.hypertrees()[0];
            let orbit: BTreeSet<Vec<i64>> =
                all_degree_zero(group).iter().map(|x| table.act(group, x, f)).collect::<Result<_>>()?;
            tally.check(orbit.len() == table.len(), || {
                format!("{cls} in G_{host}: orbit of {f:?} has {} of {} hypertrees", orbit.len(), table.len())
            });
        }
        Ok(tally.finish())
    }
}

/// φ and ψ are isomorphisms with φ = -ψ and φ_{R→E}∘φ_{V→R} = ψ_{V→E};
/// the lattice solution agrees with the path construction.
struct PhiPsi;

impl Check for PhiPsi {
    fn name(&self) -> &'static str {
        "phi-psi"
    }
    fn description(&self) -> &'static str {
        "phi bijective and additive, phi = -psi, phi(R->E) o phi(V->R) = psi(V->E), path transport agrees"
    }
    fn run(&self, cx: &Context) -> Result<Outcome> {
        let tg = &cx.tg;
        let t = cx.trinity();
        let mut tally = Tally::default();
        for a in Color::ALL {
            for b in Color::ALL {
                if a == b {
                    continue;
                }
                let (ga, gb) = (tg.group(a), tg.group(b));
                let images: BTreeSet<_> =
                    all_degree_zero(ga).iter().map(|x| tg.phi(a, b, x)).collect::<Result<_>>()?;
                tally.check(images.len() as i128 == ga.order() && ga.order() == gb.order(), || {
                    format!("phi {a}->{b} hits {} classes; orders {} and {}", images.len(), ga.order(), gb.order())
                });
                let gens = ga.generators();
                for x in &gens {
                    let px = tg.phi(a, b, x)?;
                    let sx = tg.psi(a, b, x)?;
                    tally.check(gb.add(&px, &sx)? == gb.zero(), || format!("phi {a}->{b} + psi != 0 at {:?}", x.values()));
                    for y in &gens {
                        let lhs = tg.phi(a, b, &(x + y))?;
                        let rhs = gb.add(&px, &tg.phi(a, b, y)?)?;
                        tally.check(lhs == rhs, || format!("phi {a}->{b} not additive at {:?}, {:?}", x.values(), y.values()));
                    }
                    let tr = tg.chip_transport(a, b, x)?;
                    tally.check(gb.equivalent(&tr.target, px.representative())?, || {
                        format!("path transport {a}->{b} disagrees at {:?}", x.values())
                    });
                    let lhs = TriChipConfig::single(t, a, x.clone());
                    let rhs = TriChipConfig::single(t, b, negate(&tr.target));
                    tally.check(tg.white_triangle_equivalent(&lhs, &rhs)?, || {
                        format!("transport witness {a}->{b} not white-triangle equivalent")
                    });
                }
            }
        }
        for x in all_degree_zero(tg.group(Color::V)) {
            let via_r = tg.phi(Color::V, Color::R, &x)?;
            let lhs = tg.phi(Color::R, Color::E, via_r.representative())?;
            let rhs = tg.psi(Color::V, Color::E, &x)?;
            tally.check(lhs == rhs, || format!("composition law fails at {:?}", x.values()));
        }
        Ok(tally.finish())
    }
}

/// A_W has free rank 2 and the torsion of Pic⁰(D_V).
struct AwStructureCheck;

impl Check for AwStructureCheck {
    fn name(&self) -> &'static str {
        "aw-structure"
    }
    fn description(&self) -> &'static str {
        "A_W = Z^2 x Pic0(D_V)"
    }
    fn run(&self, cx: &Context) -> Result<Outcome> {
        let mut tally = Tally::default();
        let aw = cx.tg.aw_structure()?;
        for c in Color::ALL {
            let factors = cx.tg.group(c).invariant_factors();
            tally.check(aw.free_rank == 2 && aw.torsion == factors, || {
                format!("A_W free rank {} torsion {:?}; Pic0(D_{c}) factors {factors:?}", aw.free_rank, aw.torsion)
            });
        }
        Ok(tally.finish())
    }
}

/// β(φ_{V→E}(x) ⊕ f) = x ⊕ β(f) for every base tried.
struct CommutingDiagram;

impl Check for CommutingDiagram {
    fn name(&self) -> &'static str {
        "commuting-diagram"
    }
    fn description(&self) -> &'static str {
        "beta(phi_{V->E}(x) + f) = x + beta(f) over generators, hypertrees and bases"
    }
    fn run(&self, cx: &Context) -> Result<Outcome> {
        let mut tally = Tally::default();
        let e_table = cx.table(Color::E, Color::R)?;
        let v_table = cx.table(Color::V, Color::R)?;
        let (ge, gv) = (cx.tg.group(Color::E), cx.tg.group(Color::V));
        for base in cx.bases() {
            let classical = ClassicalAction::new(&cx.tg, base)?;
            let beta = classical.beta();
            for x in gv.generators() {
                let y = cx.tg.phi(Color::V, Color::E, &x)?;
                for f in e_table.hypertrees() {
                    let lhs = beta.image(&e_table.act(ge, y.representative(), f)?)?.to_vec();
                    let rhs = v_table.act(gv, &x, beta.image(f)?)?;
                    tally.check(lhs == rhs, || format!("base {base:?}, x={:?}, f={f:?}", x.values()));
                }
            }
        }
        Ok(tally.finish())
    }
}

/// The classical action does not depend on the base and equals the
/// canonical one.
struct BaseIndependence;

impl Check for BaseIndependence {
    fn name(&self) -> &'static str {
        "base-independence"
    }
    fn description(&self) -> &'static str {
        "classical action through any base = canonical action"
    }
    fn run(&self, cx: &Context) -> Result<Outcome> {
        let mut tally = Tally::default();
        let canonical = CanonicalAction::new(&cx.tg)?;
        let e_table = cx.table(Color::E, Color::R)?;
        let gens = cx.tg.group(Color::V).generators();
        for base in cx.bases() {
            let classical = ClassicalAction::new(&cx.tg, base)?;
            for x in &gens {
                for f in e_table.hypertrees() {
                    let a = canonical.act(x, f)?;
                    let b = classical.act(x, f)?;
                    tally.check(a == b, || format!("base {base:?}, x={:?}, f={f:?}: {a:?} vs {b:?}", x.values()));
                }
            }
        }
        Ok(tally.finish())
    }
}

/// `(x ⊕ f)* = (-x) ⊕ f*` and `(x · f)* = φ_{V→R}(x) · f*`.
struct Duality;

impl Check for Duality {
    fn name(&self) -> &'static str {
        "duality"
    }
    fn description(&self) -> &'static str {
        "(x + f)* = (-x) + f* for D_E, and (x.f)* = phi_{V->R}(x).f*"
    }
    fn run(&self, cx: &Context) -> Result<Outcome> {
        let mut tally = Tally::default();
        let t = cx.trinity();
        let r_table = cx.table(Color::E, Color::R)?;
        let v_table = cx.table(Color::E, Color::V)?;
        let ge = cx.tg.group(Color::E);
        let canonical = CanonicalAction::new(&cx.tg)?;
        for f in r_table.hypertrees() {
            let fs = dual_hypertree(t, f, Color::R)?;
            for x in ge.generators() {
                let lhs = dual_hypertree(t, &r_table.act(ge, &x, f)?, Color::R)?;
                let rhs = v_table.act(ge, &negate(&x), &fs)?;
                tally.check(lhs == rhs, || format!("sandpile duality at x={:?}, f={f:?}", x.values()));
            }
            for x in cx.tg.group(Color::V).generators() {
                let lhs = dual_hypertree(t, &canonical.act(&x, f)?, Color::R)?;
                // the Bernardi action of Pic0(D_R) on B_E(G_V)
                let y = cx.tg.phi(Color::V, Color::R, &x)?;
                let z = cx.tg.phi(Color::R, Color::E, y.representative())?;
                let rhs = v_table.act(ge, z.representative(), &fs)?;
                tally.check(lhs == rhs, || format!("Bernardi duality at x={:?}, f={f:?}", x.values()));
            }
        }
        Ok(tally.finish())
    }
}

/// The rotor action at every root, carried to hypertrees, is the Bernardi
/// action of the negated class.
struct RotorBernardi;

impl Check for RotorBernardi {
    fn name(&self) -> &'static str {
        "rotor-bernardi"
    }
    fn description(&self) -> &'static str {
        "rotor action of x at every root = Bernardi action of -x, on every arborescence"
    }
    fn run(&self, cx: &Context) -> Result<Outcome> {
        let mut tally = Tally::default();
        let canonical = CanonicalAction::new(&cx.tg)?;
        let e_table = cx.table(Color::E, Color::R)?;
        let d = cx.tg.digraph(Color::V);
        let gv = cx.tg.group(Color::V);
        for root in 0..d.n_vertices() {
            let rotor = RotorAction::new(&cx.tg, root)?;
            let mut hs = rotor.hypertrees().to_vec();
            hs.sort();
            tally.check(hs == e_table.hypertrees(), || format!("root {root}: arborescence hypertrees differ from B_E(G_R)"));
            for x in gv.generators() {
                let minus = negate(&x);
                for f in rotor.hypertrees() {
                    let a = rotor.rotor(&x, f)?;
                    let b = canonical.act(&minus, f)?;
                    tally.check(a == b, || format!("root {root}, x={:?}, f={f:?}: rotor {a:?}, Bernardi {b:?}", x.values()));
                }
            }
            // the forward-only game agrees with the permutation tables
            let arbs = enumerate_arborescences(d, root, Direction::In, TREE_LIMIT)?;
            let h0 = crate::rotor::arborescence_to_hypertree(cx.trinity(), &arbs[0])?;
            for x in gv.generators() {
                let moved = rotor_act(d, gv, &x, &arbs[0])?;
                let via_game = crate::rotor::arborescence_to_hypertree(cx.trinity(), &moved)?;
                tally.check(via_game == rotor.rotor(&x, &h0)?, || format!("root {root}: rotor_act disagrees at {:?}", x.values()));
            }
        }
        Ok(tally.finish())
    }
}

/// Index maps from class nodes to the vertices of a map, by id.
fn index_by_name(t: &Trinity, c: Color, g: &PlaneGraph) -> Result<Vec<usize>> {
    t.class(c)
        .iter()
        .map(|&v| g.vertex(t.node_id(v)))
        .collect::<Result<Vec<_>>>()
}

/// Cori–Rossin's isomorphism agrees with φ_{V→R} and ignores the reference
/// orientation.
struct CoriRossin;

impl Check for CoriRossin {
    fn name(&self) -> &'static str {
        "cori-rossin"
    }
    fn description(&self) -> &'static str {
        "Cori-Rossin map = phi_{V->R}, independent of the orientation of any single edge"
    }
    fn run(&self, cx: &Context) -> Result<Outcome> {
        let Some(g) = &cx.instance.plane else {
            return Ok(Outcome::Skip("not built from a plane graph".into()));
        };
        let t = cx.trinity();
        let dual = g.planar_dual()?;
        let dgroup = dual_group(g)?;
        let v_pos = index_by_name(t, Color::V, g)?;
        let r_pos = index_by_name(t, Color::R, &dual)?;
        let mut tally = Tally::default();
        let n = g.n_vertices();
        for v in 1..n {
            let x = ChipConfig::difference(n, v, 0);
            let cr = cori_rossin_iso(g, &x, None)?;
            let x_t = ChipConfig::new(v_pos.iter().map(|&p| x[p]).collect());
            let phi = cx.tg.phi(Color::V, Color::R, &x_t)?;
            let cr_t = ChipConfig::new(r_pos.iter().map(|&p| cr[p]).collect());
            tally.check(cx.tg.group(Color::R).equivalent(&cr_t, phi.representative())?, || {
                format!("x = 1_{} - 1_{}: Cori-Rossin {:?}, phi {:?}", g.vertex_id(v), g.vertex_id(0), cr_t.values(), phi.representative().values())
            });
            for k in 0..g.n_edges() {
                let mut flip = vec![false; g.n_edges()];
                flip[k] = true;
                let other = cori_rossin_iso(g, &x, Some(&flip))?;
                tally.check(dgroup.equivalent(&cr, &other)?, || format!("flipping {} changes the class", g.edge_id(k)));
            }
        }
        Ok(tally.finish())
    }
}

/// Every edge is current exactly twice in a tour, once from each end.
struct TourInvariant;

fn tour_twice(g: &PlaneGraph, tree: &[bool], base: Base) -> Result<bool> {
    let rec = tour(g, tree, base)?;
    let mut seen: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(v, k) in &rec.steps {
        seen.entry(k).or_default().push(v);
    }
    Ok((0..g.n_edges()).all(|k| {
        let (a, b) = g.endpoints(k);
        let mut want = vec![a, b];
        want.sort_unstable();
        let mut got = seen.get(&k).cloned().unwrap_or_default();
        got.sort_unstable();
        got == want
    }))
}

impl Check for TourInvariant {
    fn name(&self) -> &'static str {
        "tour-invariant"
    }
    fn description(&self) -> &'static str {
        "every edge is current twice in a tour, once per endpoint"
    }
    fn run(&self, cx: &Context) -> Result<Outcome> {
        let mut tally = Tally::default();
        let mut graphs = vec![cx.trinity().derived_bipartite(Color::R)];
        if let Some(g) = &cx.instance.plane {
            graphs.push(g.clone());
        }
        for g in &graphs {
            let trees = spanning_trees(g, TREE_LIMIT)?;
            let bases = Base::all(g);
            for (i, tree) in trees.iter().enumerate().step_by((trees.len() / 40).max(1)) {
                for base in bases.iter().skip(i % 3).step_by(3) {
                    tally.check(tour_twice(g, tree, *base)?, || format!("tree #{i} from base {base:?}"));
                }
            }
        }
        Ok(tally.finish())
    }
}

/// All vectors `0 <= f(u) <= |Γ(u)|` of the right total, lexicographically,
/// at most `cap` of them.
fn candidate_vectors(caps: &[i64], total: i64, cap: usize) -> Vec<Vec<i64>> {
    fn rec(i: usize, left: i64, caps: &[i64], cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>, cap: usize) {
        if out.len() >= cap {
            return;
        }
        if i == caps.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let rest: i64 = caps[i + 1..].iter().sum();
        for v in (left - rest).max(0)..=caps[i].min(left) {
            cur.push(v);
            rec(i + 1, left - v, caps, cur, out, cap);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, total, caps, &mut Vec::new(), &mut out, cap);
    out
}

/// The matching test, the subset condition and realization agree.
struct HypertreeCharacterization;

impl Check for HypertreeCharacterization {
    fn name(&self) -> &'static str {
        "hypertree-characterization"
    }
    fn description(&self) -> &'static str {
        "subset condition <=> realizable <=> matching test, for sides of at most 10 nodes"
    }
    fn run(&self, cx: &Context) -> Result<Outcome> {
        let t = cx.trinity();
        let mut tally = Tally::default();
        let mut ran = false;
        for host in Color::ALL {
            let g = t.derived_bipartite(host);
            let (a, b) = host.others();
            for side in [a, b] {
                let h = Bipartite::new(&g, side_positions(t, host, side))?;
                if h.side().len() > 10 {
                    continue;
                }
                ran = true;
                let caps: Vec<i64> = h.side().iter().map(|&u| {
                    let mut nb: Vec<usize> = g.darts_at(u).iter().map(|&d| g.vertex_of(d ^ 1)).collect();
                    nb.sort_unstable();
                    nb.dedup();
                    nb.len() as i64
                }).collect();
                let total = h.other().len() as i64 - 1;
                let mut candidates = candidate_vectors(&caps, total, 3000);
                candidates.extend(h.enumerate(TREE_LIMIT)?);
                for f in &candidates {
                    let subset = h.satisfies_subset_condition(f);
                    let realized = h.realize(f).is_some_and(|tr| is_spanning_tree(&g, &tr) && h.degrees_minus_one(&tr) == *f);
                    let matching = h.is_hypertree(f);
                    tally.check(subset == realized && realized == matching, || {
                        format!("G_{host} side {side}, f={f:?}: subset {subset}, realization {realized}, matching {matching}")
                    });
                }
            }
        }
        if !ran {
            return Ok(Outcome::Skip("every side has more than 10 nodes".into()));
        }
        Ok(tally.finish())
    }
}

/// Break divisors of a plane graph are `d - 1 - f` for hypertrees `f` of
/// its subdivision on the vertices, and the tour produces them
/// bijectively from spanning trees.
struct BreakDivisors;

impl Check for BreakDivisors {
    fn name(&self) -> &'static str {
        "break-divisors"
    }
    fn description(&self) -> &'static str {
        "x is a break divisor iff d - 1 - x is a hypertree of the subdivision; tours give each once"
    }
    fn run(&self, cx: &Context) -> Result<Outcome> {
        let Some(g) = &cx.instance.plane else {
            return Ok(Outcome::Skip("not built from a plane graph".into()));
        };
        let n = g.n_vertices();
        let genus = g.n_edges() + 1 - n;
        if genus > 8 {
            return Ok(Outcome::Skip("too many non-tree edges".into()));
        }
        let trees = spanning_trees(g, TREE_LIMIT)?;
        // oracle: every tree with every choice of endpoint per non-tree edge
        let mut oracle: BTreeSet<Vec<i64>> = BTreeSet::new();
        for tree in &trees {
            let off: Vec<usize> = (0..g.n_edges()).filter(|&k| !tree[k]).collect();
            for mask in 0u32..(1 << off.len()) {
                let mut x = vec![0i64; n];
                for (i, &k) in off.iter().enumerate() {
                    let (a, b) = g.endpoints(k);
                    x[if mask >> i & 1 == 0 { a } else { b }] += 1;
                }
                oracle.insert(x);
            }
        }
        let (bip, first) = subdivide(g)?;
        let side: Vec<usize> = (0..bip.n_vertices()).filter(|&v| first[v]).collect();
        let h = Bipartite::new(&bip, side.clone())?;
        let degree: Vec<i64> = side.iter().map(|&v| bip.degree(v) as i64).collect();
        let mut tally = Tally::default();
        let caps = vec![genus as i64; n];
        for x in candidate_vectors(&caps, genus as i64, usize::MAX) {
            let f: Vec<i64> = degree.iter().zip(&x).map(|(d, xi)| d - 1 - xi).collect();
            let is_break = oracle.contains(&x);
            tally.check(is_break == h.is_hypertree(&f), || format!("x={x:?}: break divisor {is_break}"));
        }
        for base in Base::all(g).into_iter().take(3) {
            let mut produced = BTreeSet::new();
            for tree in &trees {
                let x = bernardi_break_divisor(g, tree, base)?.values().to_vec();
                tally.check(oracle.contains(&x), || format!("tour divisor {x:?} is not a break divisor"));
                produced.insert(x);
            }
            tally.check(produced.len() == trees.len() && produced == oracle, || {
                format!("base {base:?}: {} divisors from {} trees, {} break divisors", produced.len(), trees.len(), oracle.len())
            });
        }
        Ok(tally.finish())
    }
}

/// `f -> d - 1 - f` is an involution from B_E(G_R) onto B_E(G_V); on a
/// plane graph it sends a tree to the dual of its complement.
struct DualHypertree;

impl Check for DualHypertree {
    fn name(&self) -> &'static str {
        "dual-hypertree"
    }
    fn description(&self) -> &'static str {
        "f* is an involution onto B_E(G_V); planar-dual trees on plane graphs"
    }
    fn run(&self, cx: &Context) -> Result<Outcome> {
        let t = cx.trinity();
        let r_table = cx.table(Color::E, Color::R)?;
        let v_table = cx.table(Color::E, Color::V)?;
        let mut tally = Tally::default();
        let mut images = BTreeSet::new();
        for f in r_table.hypertrees() {
            let fs = dual_hypertree(t, f, Color::R)?;
            tally.check(v_table.contains(&fs), || format!("f*={fs:?} is not a hypertree of G_V"));
            tally.check(dual_hypertree(t, &fs, Color::V)? == *f, || format!("f**!=f at {f:?}"));
            images.insert(fs);
        }
        tally.check(images.len() == v_table.len(), || "f -> f* is not onto".to_string());
        if let Some(g) = &cx.instance.plane {
            let dual = g.planar_dual()?;
            for f in r_table.hypertrees() {
                let fs = dual_hypertree(t, f, Color::R)?;
                let mut primal = vec![false; g.n_edges()];
                let mut dual_tree = vec![false; g.n_edges()];
                for (i, &node) in t.class(Color::E).iter().enumerate() {
                    let k = g.edge(t.node_id(node))?;
                    primal[k] = f[i] == 1;
                    dual_tree[k] = fs[i] == 1;
                }
                let ok = is_spanning_tree(g, &primal)
                    && is_spanning_tree(&dual, &dual_tree)
                    && primal.iter().zip(&dual_tree).all(|(a, b)| a != b);
                tally.check(ok, || format!("f={f:?} and f*={fs:?} are not dual spanning trees"));
            }
        }
        Ok(tally.finish())
    }
}

/// For each base the Bernardi process returns Jaeger trees realizing their
/// hypertree, and β is a bijection B_E(G_R) -> B_V(G_R).
struct BernardiBijection;

impl Check for BernardiBijection {
    fn name(&self) -> &'static str {
        "bernardi-bijection"
    }
    fn description(&self) -> &'static str {
        "Bernardi process yields Jaeger trees; beta is a bijection, unique Jaeger tree per hypertree"
    }
    fn run(&self, cx: &Context) -> Result<Outcome> {
        let t = cx.trinity();
        let g = t.derived_bipartite(Color::R);
        let h = Bipartite::new(&g, side_positions(t, Color::R, Color::E))?;
        let hv = Bipartite::new(&g, side_positions(t, Color::R, Color::V))?;
        let cut = h.other_mask();
        let v_table = cx.table(Color::V, Color::R)?;
        let mut tally = Tally::default();
        let small = spanning_trees(&g, 20_000).ok();
        for base in cx.bases() {
            let gb = base.in_derived(t)?;
            let table = BernardiTable::new(&h, gb, TREE_LIMIT)?;
            let mut images = BTreeSet::new();
            for (f, image) in table.iter() {
                let tree = table.jaeger_tree(f)?;
                tally.check(is_jaeger_tree(&g, tree, gb, &cut)?, || format!("process tree for {f:?} is not Jaeger"));
                tally.check(h.degrees_minus_one(tree) == *f, || format!("process tree does not realize {f:?}"));
                tally.check(hv.degrees_minus_one(tree) == *image, || "image mismatch".to_string());
                tally.check(table.preimage(image)? == f.as_slice(), || "preimage mismatch".to_string());
                images.insert(image.clone());
            }
            let all_v: BTreeSet<Vec<i64>> = v_table.hypertrees().iter().cloned().collect();
            tally.check(images == all_v, || format!("base {base:?}: beta is not onto B_V(G_R)"));
            if small.is_some() {
                let jaeger = jaeger_trees(&g, gb, &cut, TREE_LIMIT)?;
                let by_process: BTreeSet<Vec<bool>> = table.iter().map(|(f, _)| table.jaeger_tree(f).map(<[bool]>::to_vec)).collect::<Result<_>>()?;
                let by_search: BTreeSet<Vec<bool>> = jaeger.into_iter().collect();
                tally.check(by_process == by_search, || {
                    format!("base {base:?}: {} Jaeger trees by search, {} by the process", by_search.len(), by_process.len())
                });
            }
        }
        Ok(tally.finish())
    }
}

/// A spanning tree of G_R is a V-cut Jaeger tree exactly when the arcs of
/// D_R off the tree form an out-arborescence rooted at s0.
struct JaegerArborescence;

impl Check for JaegerArborescence {
    fn name(&self) -> &'static str {
        "jaeger-arborescence"
    }
    fn description(&self) -> &'static str {
        "T is V-cut Jaeger iff the complementary arcs form an out-arborescence of D_R at s0"
    }
    fn run(&self, cx: &Context) -> Result<Outcome> {
        let t = cx.trinity();
        let g = t.derived_bipartite(Color::R);
        let h = Bipartite::new(&g, side_positions(t, Color::R, Color::E))?;
        let cut = h.other_mask();
        let dr = t.derived_digraph(Color::R);
        let mut tally = Tally::default();
        let trees = spanning_trees(&g, 20_000).ok();
        for base in cx.bases() {
            let gb = base.in_derived(t)?;
            let s0_node = base.s0(t)?;
            let s0 = t.class(Color::R).iter().position(|&x| x == s0_node).expect("s0 is a red node");
            let arbs = enumerate_arborescences(&dr, s0, Direction::Out, TREE_LIMIT)?;
            let table = BernardiTable::new(&h, gb, TREE_LIMIT)?;
            tally.check(arbs.len() == table.len(), || {
                format!("base {base:?}: {} Jaeger trees, {} arborescences at s0", table.len(), arbs.len())
            });
            let mut duals = BTreeSet::new();
            for (f, _) in table.iter() {
                let d = jaeger_arborescence_dual(t, table.jaeger_tree(f)?, base)?;
                tally.check(d.arborescence(t, Direction::Out).is_some(), || format!("dual of the Jaeger tree of {f:?} is not an arborescence"));
                duals.insert(d.arcs);
            }
            let all: BTreeSet<Vec<usize>> = arbs.iter().map(|a| a.arcs()).collect();
            tally.check(duals == all, || format!("base {base:?}: duals of Jaeger trees are not all arborescences"));
            if let Some(trees) = &trees {
                for tree in trees {
                    let jaeger = is_jaeger_tree(&g, tree, gb, &cut)?;
                    let arb = jaeger_arborescence_dual(t, tree, base)?.arborescence(t, Direction::Out).is_some();
                    tally.check(jaeger == arb, || format!("base {base:?}: Jaeger {jaeger} but arborescence {arb}"));
                }
            }
        }
        Ok(tally.finish())
    }
}

/// Bases with violet `b0` and the same `s0` have the same Jaeger trees.
struct YuenInvariance;

impl Check for YuenInvariance {
    fn name(&self) -> &'static str {
        "yuen-invariance"
    }
    fn description(&self) -> &'static str {
        "bases with violet b0 and equal s0 give equal sets of V-cut Jaeger trees"
    }
    fn run(&self, cx: &Context) -> Result<Outcome> {
        let t = cx.trinity();
        let g = t.derived_bipartite(Color::R);
        let h = Bipartite::new(&g, side_positions(t, Color::R, Color::E))?;
        let mut groups: BTreeMap<usize, Vec<TrinityBase>> = BTreeMap::new();
        for base in TrinityBase::all(t, Color::R) {
            if t.color(base.b0) == Color::V {
                groups.entry(base.s0(t)?).or_default().push(base);
            }
        }
        let mut tally = Tally::default();
        let mut compared = 0;
        for bases in groups.values().filter(|b| b.len() > 1).take(4) {
            let mut reference: Option<HashSet<Vec<bool>>> = None;
            for base in bases.iter().take(3) {
                let table = BernardiTable::new(&h, base.in_derived(t)?, TREE_LIMIT)?;
                let set: HashSet<Vec<bool>> =
                    table.iter().map(|(f, _)| table.jaeger_tree(f).map(<[bool]>::to_vec)).collect::<Result<_>>()?;
                match &reference {
                    None => reference = Some(set),
                    Some(r) => {
                        compared += 1;
                        tally.check(*r == set, || format!("bases {:?} and {base:?} share s0 but not Jaeger trees", bases[0]));
                    }
                }
            }
        }
        if compared == 0 {
            return Ok(Outcome::Skip("no two violet bases share s0".into()));
        }
        Ok(tally.finish())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names_are_unique() {
        let names: BTreeSet<&str> = registry().iter().map(|c| c.name()).collect();
        assert_eq!(names.len(), registry().len());
        assert!(select(&["phi-psi".to_string()]).unwrap().len() == 1);
        assert!(select(&["nope".to_string()]).is_err());
    }

    #[test]
    fn corpus_is_deterministic() {
        let a = corpus(3, 6, 5, 8).unwrap();
        let b = corpus(3, 6, 5, 8).unwrap();
        assert_eq!(a.iter().map(|i| i.label.clone()).collect::<Vec<_>>(), b.iter().map(|i| i.label.clone()).collect::<Vec<_>>());
        assert!(a[0].plane.is_some() && a[1].plane.is_none());
    }
}
