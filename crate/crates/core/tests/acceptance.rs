//! Acceptance suite: one pass/fail line per criterion, non-zero exit on any
//! failure. Run with `cargo test -p trinity-core --test acceptance`.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use trinity_core::examples::{
    jaeger_example_graph, jaeger_example_mask, jaeger_example_panels, tour_example, tour_example_tree,
    JAEGER_EXAMPLE_NON_JAEGER, TOUR_EXAMPLE_DIVISOR, TOUR_EXAMPLE_TRACE,
};
use trinity_core::hypertree::Bipartite;
use trinity_core::jaeger::{bernardi_break_divisor, is_jaeger_tree, tour, Base, BernardiTable, TrinityBase, TREE_LIMIT};
use trinity_core::trinity::Color;
use trinity_core::verify::{corpus, select, verify_corpus, Context, Instance, VerificationReport};

const SEED: u64 = 20_240_601;

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict { ok, detail: detail.into() }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Verdict) -> (Verdict, Duration) {
    let start = Instant::now();
    let mut v = f();
    let took = start.elapsed();
    if let Some(limit) = limit {
        if took > limit {
            v.ok = false;
            v.detail = format!("{} (took {took:.1?}, limit {limit:?})", v.detail);
        }
    }
    (v, took)
}

fn report_verdict(report: &VerificationReport, checks: &[&str], min_passed: usize) -> Verdict {
    let mut parts = Vec::new();
    let mut ok = true;
    for name in checks {
        let row = report.row(name).expect("check is registered");
        ok &= row.failed == 0 && row.passed >= min_passed;
        parts.push(format!("{name}: {}/{} passed, {} skipped, {} cases", row.passed, row.instances, row.skipped, row.cases));
        if let Some((label, detail, _)) = &row.first_failure {
            parts.push(format!("first failure on {label}: {detail}"));
        }
    }
    verdict(ok, parts.join("; "))
}

fn run_checks(instances: &[Instance], checks: &[&str]) -> VerificationReport {
    let names: Vec<String> = checks.iter().map(|s| s.to_string()).collect();
    verify_corpus(instances, &select(&names).expect("known checks"), 0).expect("verification runs")
}

fn tour_example_criterion() -> Verdict {
    let g = tour_example();
    let base = Base::from_ids(&g, "v1", "v2", Some("e1")).unwrap();
    let rec = tour(&g, &tour_example_tree(), base).unwrap();
    let trace = rec.trace(&g);
    let x = bernardi_break_divisor(&g, &tour_example_tree(), base).unwrap();
    verdict(
        trace == TOUR_EXAMPLE_TRACE && x.values() == TOUR_EXAMPLE_DIVISOR,
        format!("tour [{trace}], divisor {:?}", x.values()),
    )
}

fn jaeger_example_criterion() -> Verdict {
    let (g, violet) = jaeger_example_graph();
    let base = Base::from_ids(&g, "A", "ea", Some("A-ea")).unwrap();
    let h = Bipartite::new(&g, vec![3, 4, 5, 6]).unwrap();
    let table = BernardiTable::new(&h, base, TREE_LIMIT).unwrap();
    let hypertrees = h.enumerate(TREE_LIMIT).unwrap();
    let mut ok = table.len() == 7 && hypertrees.len() == 7;
    let sources: BTreeSet<Vec<i64>> = table.iter().map(|(f, _)| f.to_vec()).collect();
    let images: BTreeSet<Vec<i64>> = table.iter().map(|(_, g)| g.to_vec()).collect();
    ok &= sources == hypertrees.iter().cloned().collect() && images.len() == 7;
    for (names, f) in jaeger_example_panels() {
        let mask = jaeger_example_mask(&names);
        ok &= is_jaeger_tree(&g, &mask, base, &violet).unwrap() && table.jaeger_tree(&f).ok() == Some(&mask[..]);
    }
    let bad = jaeger_example_mask(&JAEGER_EXAMPLE_NON_JAEGER);
    let rejected = !is_jaeger_tree(&g, &bad, base, &violet).unwrap();
    ok &= rejected;
    verdict(
        ok,
        format!("{} Jaeger trees, {} hypertrees on E, non-Jaeger tree rejected: {rejected}", table.len(), hypertrees.len()),
    )
}

fn main() -> ExitCode {
    let mut results: Vec<(u32, &str, Verdict, Duration)> = Vec::new();

    let (v, d) = timed(Some(Duration::from_secs(1)), tour_example_criterion);
    results.push((1, "tour example: trace and break divisor", v, d));
    let (v, d) = timed(Some(Duration::from_secs(1)), jaeger_example_criterion);
    results.push((2, "Jaeger example: 7 V-cut Jaeger trees, bijection with B_E", v, d));

    let big = corpus(SEED, 200, 7, 12).expect("corpus");
    let (v, d) = timed(Some(Duration::from_secs(120)), || {
        report_verdict(&run_checks(&big, &["laplacian-counts"]), &["laplacian-counts"], 200)
    });
    results.push((3, "determinant = invariant factors = arborescence counts", v, d));

    let checks = ["hypertree-representatives", "phi-psi", "aw-structure"];
    let start = Instant::now();
    let report = run_checks(&big, &checks);
    let shared = start.elapsed();
    results.push((4, "hypertrees represent Pic0(D_V) exactly once", report_verdict(&report, &checks[..1], 200), shared));
    results.push((5, "phi/psi isomorphisms and composition law", report_verdict(&report, &checks[1..2], 200), shared));

    let (v, d) = timed(None, || {
        let min_bases = big
            .iter()
            .map(|i| Context::new(i).map(|cx| cx.bases().len()).unwrap_or(0))
            .min()
            .unwrap_or(0);
        let available = big.iter().map(|i| TrinityBase::all(&i.trinity, Color::R).len()).min().unwrap_or(0);
        let names = ["commuting-diagram", "base-independence", "duality"];
        let mut v = report_verdict(&run_checks(&big, &names), &names, 200);
        v.ok &= min_bases >= 3.min(available);
        v.detail = format!("{}; fewest bases per instance {min_bases}", v.detail);
        v
    });
    results.push((6, "commuting diagram, base independence, duality", v, d));
    let (v, d) = timed(None, || report_verdict(&run_checks(&big, &["rotor-bernardi"]), &["rotor-bernardi"], 200));
    results.push((7, "rotor action = Bernardi action of the negated class", v, d));

    let plane: Vec<Instance> = corpus(SEED ^ 2, 120, 7, 12).expect("corpus").into_iter().filter(|i| i.plane.is_some()).collect();
    let (v, d) = timed(None, || report_verdict(&run_checks(&plane, &["cori-rossin"]), &["cori-rossin"], 50));
    results.push((8, "Cori-Rossin map = phi_{V->R}, orientation independent", v, d));

    results.push((9, "A_W = Z^2 x Pic0(D_V)", report_verdict(&report, &checks[2..], 200), shared));

    let props = [
        "tour-invariant",
        "hypertree-characterization",
        "break-divisors",
        "dual-hypertree",
        "yuen-invariance",
        "bernardi-bijection",
        "jaeger-arborescence",
        "action-laws",
    ];
    let props_corpus = corpus(SEED ^ 3, 100, 6, 10).expect("corpus");
    let (v, d) = timed(Some(Duration::from_secs(600)), || {
        let report = run_checks(&props_corpus, &props);
        let mut v = report_verdict(&report, &props, 0);
        // Yuen invariance may be vacuous on an instance; it must bite somewhere
        let yuen = report.row("yuen-invariance").unwrap();
        v.ok &= yuen.passed > 0;
        v
    });
    results.push((10, "property suite", v, d));

    let mut all = true;
    for (n, title, v, d) in &results {
        all &= v.ok;
        println!("[{}] criterion {n:>2}: {title} ({d:.1?}): {}", if v.ok { "PASS" } else { "FAIL" }, v.detail);
    }
    println!("acceptance: {}", if all { "all criteria passed" } else { "FAILED" });
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
