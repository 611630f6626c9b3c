//! Property tests over seeded random plane graphs and trinities.

use proptest::prelude::*;

use trinity_core::actions::{make_action, ActionOptions, HypertreeTable, RotorAction};
use trinity_core::build::{subdivide, trinity_from_plane_graph};
use trinity_core::format::{
    parse_plane_digraph, parse_plane_graph, parse_trinity, write_plane_digraph, write_plane_graph, write_trinity,
};
use trinity_core::hypertree::{spanning_trees, Bipartite};
use trinity_core::jaeger::{bernardi_break_divisor, dual_hypertree, side_positions, tour, Base, TREE_LIMIT};
use trinity_core::map::{maps_isomorphic, PlaneGraph};
use trinity_core::random::{random_general_trinity, random_plane_graph};
use trinity_core::sandpile::{fire, ChipConfig};
use trinity_core::trinity::{Color, Trinity};
use trinity_core::trinity_group::TrinityGroup;
use trinity_core::verify::{verify_theorems, Instance};

fn plane_graph() -> impl Strategy<Value = PlaneGraph> {
    (2usize..=6, 0usize..=4, any::<u64>()).prop_map(|(n, extra, seed)| random_plane_graph(n, n - 1 + extra, seed).unwrap())
}

fn any_trinity() -> impl Strategy<Value = Trinity> {
    (2usize..=5, 0usize..=4, any::<u64>(), any::<bool>()).prop_map(|(n, extra, seed, plane)| {
        if plane {
            trinity_from_plane_graph(&random_plane_graph(n, n - 1 + extra, seed).unwrap()).unwrap()
        } else {
            random_general_trinity(n, n - 1 + extra, seed).unwrap()
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn formats_round_trip(g in plane_graph()) {
        let text = write_plane_graph(&g);
        prop_assert_eq!(write_plane_graph(&parse_plane_graph(&text).unwrap()), text.clone());
        let t = trinity_from_plane_graph(&g).unwrap();
        let tt = write_trinity(&t);
        prop_assert_eq!(write_trinity(&parse_trinity(&tt).unwrap()), tt);
        let d = t.derived_digraph(Color::V);
        let dt = write_plane_digraph(&d);
        prop_assert_eq!(write_plane_digraph(&parse_plane_digraph(&dt).unwrap()), dt);
    }

    #[test]
    fn plane_trinity_structure(g in plane_graph()) {
        let t = trinity_from_plane_graph(&g).unwrap();
        prop_assert_eq!(t.class(Color::V).len(), g.n_vertices());
        prop_assert_eq!(t.class(Color::E).len(), g.n_edges());
        prop_assert_eq!(t.class(Color::R).len(), g.n_faces());
        prop_assert_eq!(t.n_triangles(), 4 * g.n_edges());
        let (bip, _) = subdivide(&g).unwrap();
        prop_assert!(maps_isomorphic(&t.derived_bipartite(Color::R), &bip, false));
        for c in Color::ALL {
            let d = t.derived_digraph(c);
            prop_assert!(d.is_balanced());
            prop_assert!(d.map().is_planar());
        }
    }

    #[test]
    fn dual_of_dual_is_the_graph(g in plane_graph()) {
        let dd = g.planar_dual().unwrap().planar_dual().unwrap();
        prop_assert!(maps_isomorphic(&g, &dd, false));
    }

    #[test]
    fn tours_visit_each_edge_twice_and_give_break_divisors(g in plane_graph(), pick in any::<prop::sample::Index>()) {
        let trees = spanning_trees(&g, TREE_LIMIT).unwrap();
        let tree = &trees[pick.index(trees.len())];
        for base in Base::all(&g) {
            let rec = tour(&g, tree, base).unwrap();
            let mut seen = vec![0usize; g.n_edges()];
            for &(_, k) in &rec.steps {
                seen[k] += 1;
            }
            prop_assert!(seen.iter().all(|&c| c == 2), "{:?}", seen);
            let x = bernardi_break_divisor(&g, tree, base).unwrap();
            prop_assert_eq!(x.degree(), (g.n_edges() + 1 - g.n_vertices()) as i64);
            // d - 1 - x is a hypertree on V in bip(G)
            let (bip, first) = subdivide(&g).unwrap();
            let side: Vec<usize> = (0..bip.n_vertices()).filter(|&v| first[v]).collect();
            let f: Vec<i64> = side.iter().zip(x.values()).map(|(&v, xi)| bip.degree(v) as i64 - 1 - xi).collect();
            prop_assert!(Bipartite::new(&bip, side).unwrap().is_hypertree(&f));
        }
    }

    #[test]
    fn hypertree_tests_agree(t in any_trinity(), raw in prop::collection::vec(0i64..3, 12)) {
        for c in Color::ALL {
            let g = t.derived_bipartite(c);
            let (a, _) = c.others();
            let h = Bipartite::new(&g, side_positions(&t, c, a)).unwrap();
            if h.side().len() > 10 {
                continue;
            }
            let f: Vec<i64> = raw.iter().cycle().take(h.side().len()).copied().collect();
            let by_matching = h.is_hypertree(&f);
            prop_assert_eq!(by_matching, h.satisfies_subset_condition(&f));
            prop_assert_eq!(by_matching, h.realize(&f).is_some());
        }
    }

    #[test]
    fn dual_hypertree_is_an_involution(t in any_trinity()) {
        let g = t.derived_bipartite(Color::R);
        let h = Bipartite::new(&g, side_positions(&t, Color::R, Color::E)).unwrap();
        for f in h.enumerate(TREE_LIMIT).unwrap() {
            let fs = dual_hypertree(&t, &f, Color::R).unwrap();
            prop_assert_eq!(dual_hypertree(&t, &fs, Color::V).unwrap(), f);
        }
    }

    #[test]
    fn firing_preserves_class(t in any_trinity(), v in any::<prop::sample::Index>(), raw in prop::collection::vec(-3i64..4, 8)) {
        let tg = TrinityGroup::new(&t).unwrap();
        for c in Color::ALL {
            let d = tg.digraph(c);
            let n = d.n_vertices();
            let mut x: Vec<i64> = raw.iter().cycle().take(n).copied().collect();
            let s: i64 = x.iter().sum();
            x[0] -= s;
            let x = ChipConfig::new(x);
            let y = fire(d, &x, v.index(n)).unwrap();
            prop_assert_eq!(y.degree(), 0);
            let group = tg.group(c);
            prop_assert!(group.equivalent(&x, &y).unwrap());
            prop_assert_eq!(group.canonical(&x).unwrap(), group.canonical(&y).unwrap());
        }
    }

    #[test]
    fn phi_is_additive_and_composes(t in any_trinity(), raw in prop::collection::vec(-2i64..3, 16)) {
        let tg = TrinityGroup::new(&t).unwrap();
        let n = t.class(Color::V).len();
        let mk = |off: usize| {
            let mut x: Vec<i64> = (0..n).map(|i| raw[(i + off) % raw.len()]).collect();
            let s: i64 = x.iter().sum();
            x[n - 1] -= s;
            ChipConfig::new(x)
        };
        let (x, y) = (mk(0), mk(5));
        let sum = tg.phi(Color::V, Color::R, &(&x + &y)).unwrap();
        let parts = tg.group(Color::R).add(&tg.phi(Color::V, Color::R, &x).unwrap(), &tg.phi(Color::V, Color::R, &y).unwrap()).unwrap();
        prop_assert_eq!(sum, parts);
        let two_step = tg.phi(Color::R, Color::E, tg.phi(Color::V, Color::R, &x).unwrap().representative()).unwrap();
        prop_assert_eq!(two_step, tg.psi(Color::V, Color::E, &x).unwrap());
    }

    #[test]
    fn actions_agree_and_invert(t in any_trinity(), raw in prop::collection::vec(-2i64..3, 8)) {
        let tg = TrinityGroup::new(&t).unwrap();
        let n = t.class(Color::V).len();
        let mut x: Vec<i64> = raw.iter().cycle().take(n).copied().collect();
        let s: i64 = x.iter().sum();
        x[0] -= s;
        let x = ChipConfig::new(x);
        let table = HypertreeTable::new(&tg, Color::E, Color::R, TREE_LIMIT).unwrap();
        let actions: Vec<_> = ["canonical", "classical", "rotor"]
            .iter()
            .map(|m| make_action(m, &tg, &ActionOptions::default()).unwrap())
            .collect();
        let rotor = RotorAction::new(&tg, n - 1).unwrap();
        for f in table.hypertrees() {
            let g = actions[0].act(&x, f).unwrap();
            for a in &actions[1..] {
                prop_assert_eq!(&a.act(&x, f).unwrap(), &g, "{}", a.name());
            }
            prop_assert_eq!(&actions[0].act(&-&x, &g).unwrap(), f);
            prop_assert_eq!(rotor.rotor(&-&x, f).unwrap(), g);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn every_check_passes(t in any_trinity(), seed in any::<u64>()) {
        let report = verify_theorems(&t, seed).unwrap();
        prop_assert!(report.all_passed(), "{}", report);
    }
}

#[test]
fn plane_instances_carry_their_graph() {
    let g = random_plane_graph(4, 6, 11).unwrap();
    let inst = Instance::from_plane_graph("p", 11, g).unwrap();
    let report = verify_theorems(&inst.trinity, 11).unwrap();
    assert!(report.all_passed(), "{report}");
}
