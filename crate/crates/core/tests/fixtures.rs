//! The files under `fixtures/` are the serialized worked examples. Set
//! `UPDATE_FIXTURES=1` to rewrite them.

use std::path::PathBuf;

use trinity_core::build::trinity_from_plane_graph;
use trinity_core::examples::{jaeger_example, k2, theta, tour_example};
use trinity_core::format::{parse_plane_graph, parse_trinity, write_plane_graph, write_trinity};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn expected() -> Vec<(&'static str, String)> {
    vec![
        ("tour_example.planegraph", write_plane_graph(&tour_example())),
        ("theta.planegraph", write_plane_graph(&theta())),
        ("k2.planegraph", write_plane_graph(&k2())),
        ("theta.trinity", write_trinity(&trinity_from_plane_graph(&theta()).unwrap())),
        ("k2.trinity", write_trinity(&trinity_from_plane_graph(&k2()).unwrap())),
        ("jaeger_example.trinity", write_trinity(&jaeger_example().unwrap())),
    ]
}

#[test]
fn fixtures_match_examples() {
    let update = std::env::var_os("UPDATE_FIXTURES").is_some();
    for (name, text) in expected() {
        let path = fixture(name);
        if update {
            std::fs::create_dir_all(path.parent().unwrap()).unwrap();
            std::fs::write(&path, &text).unwrap();
        }
        let on_disk = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(on_disk, text, "{name} is stale; rerun with UPDATE_FIXTURES=1");
    }
}

#[test]
fn fixtures_round_trip() {
    for (name, text) in expected() {
        let again = if name.ends_with(".trinity") {
            write_trinity(&parse_trinity(&text).unwrap())
        } else {
            write_plane_graph(&parse_plane_graph(&text).unwrap())
        };
        assert_eq!(again, text, "{name}");
    }
}
