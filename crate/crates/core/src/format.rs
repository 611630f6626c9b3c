//! Text formats for plane graphs, balanced plane digraphs, trinities, chip
//! configurations, hypertrees and arborescences.
//!
//! Everything after `#` on a line is a comment. The first non-blank line
//! is a header naming the format. Ids are ASCII letters, digits, `_`, `-`
//! and `.`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::map::{PlaneGraph, RibbonDigraph};
use crate::sandpile::{Arborescence, ChipConfig, Direction};
use crate::trinity::{Color, Tag, Trinity, TrinityData};

fn syntax(line: usize, col: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, col, message: message.into() }
}

struct Line<'a> {
    no: usize,
    tokens: Vec<(usize, &'a str)>,
}

impl<'a> Line<'a> {
    fn col(&self, i: usize) -> usize {
        self.tokens.get(i).map_or(1, |t| t.0)
    }

    fn err(&self, i: usize, message: impl Into<String>) -> Error {
        syntax(self.no, self.col(i), message)
    }

    fn end_col(&self) -> usize {
        self.tokens.last().map_or(1, |(c, s)| c + s.len())
    }
}

fn lines(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (j, ch) in content.char_indices() {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    tokens.push((s + 1, &content[s..j]));
                }
            } else if start.is_none() {
                start = Some(j);
            }
        }
        if let Some(s) = start {
            tokens.push((s + 1, &content[s..]));
        }
        if !tokens.is_empty() {
            out.push(Line { no: i + 1, tokens });
        }
    }
    out
}

fn is_id(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

fn id_at<'a>(line: &Line<'a>, i: usize) -> Result<&'a str> {
    let (_, tok) = *line.tokens.get(i).ok_or_else(|| syntax(line.no, line.end_col(), "missing id"))?;
    if !is_id(tok) {
        return Err(line.err(i, format!("invalid id {tok:?}")));
    }
    Ok(tok)
}

/// The id in a token of the form `<id>:`.
fn labelled_id<'a>(line: &Line<'a>, i: usize) -> Result<&'a str> {
    let (_, tok) = *line.tokens.get(i).ok_or_else(|| syntax(line.no, line.end_col(), "missing id"))?;
    let id = tok.strip_suffix(':').ok_or_else(|| line.err(i, format!("expected `<id>:`, found {tok:?}")))?;
    if !is_id(id) {
        return Err(line.err(i, format!("invalid id {id:?}")));
    }
    Ok(id)
}

fn expect_header<'a, 'b>(ls: &'b [Line<'a>], header: &str) -> Result<&'b [Line<'a>]> {
    let first = ls.first().ok_or_else(|| syntax(1, 1, format!("empty input, expected `{header}`")))?;
    let words: Vec<&str> = first.tokens.iter().map(|t| t.1).collect();
    if words.join(" ") != header {
        return Err(first.err(0, format!("expected header `{header}`")));
    }
    Ok(&ls[1..])
}

/// Which format a text is in, judging by its header.
pub fn header_of(text: &str) -> Option<String> {
    lines(text).first().map(|l| l.tokens.iter().map(|t| t.1).collect::<Vec<_>>().join(" "))
}

struct RawMap {
    vertex_ids: Vec<String>,
    vertex_darts: Vec<Vec<(usize, usize, String)>>,
    edge_ids: Vec<String>,
    dart_names: Vec<String>,
}

fn parse_map_body(body: &[Line<'_>], edge_word: &str) -> Result<PlaneGraph> {
    let mut raw = RawMap { vertex_ids: Vec::new(), vertex_darts: Vec::new(), edge_ids: Vec::new(), dart_names: Vec::new() };
    for line in body {
        match line.tokens[0].1 {
            "vertex" => {
                raw.vertex_ids.push(labelled_id(line, 1)?.to_string());
                let mut darts = Vec::new();
                for i in 2..line.tokens.len() {
                    darts.push((line.no, line.col(i), id_at(line, i)?.to_string()));
                }
                raw.vertex_darts.push(darts);
            }
            w if w == edge_word => {
                raw.edge_ids.push(labelled_id(line, 1)?.to_string());
                if line.tokens.len() != 4 {
                    return Err(line.err(0, format!("`{edge_word}` takes exactly two darts")));
                }
                raw.dart_names.push(id_at(line, 2)?.to_string());
                raw.dart_names.push(id_at(line, 3)?.to_string());
            }
            other => return Err(line.err(0, format!("unknown keyword {other:?}"))),
        }
    }
    let index: std::collections::HashMap<&str, usize> =
        raw.dart_names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let mut vertex_darts = Vec::new();
    for darts in &raw.vertex_darts {
        let mut list = Vec::new();
        for (no, col, name) in darts {
            let d = *index.get(name.as_str()).ok_or_else(|| syntax(*no, *col, format!("unknown dart {name:?}")))?;
            list.push(d);
        }
        vertex_darts.push(list);
    }
    PlaneGraph::new(raw.vertex_ids, raw.edge_ids, raw.dart_names, vertex_darts)
}

fn write_map_body(out: &mut String, g: &PlaneGraph, edge_word: &str) {
    for v in 0..g.n_vertices() {
        let _ = write!(out, "vertex {}:", g.vertex_id(v));
        for &d in g.darts_at(v) {
            let _ = write!(out, " {}", g.dart_name(d));
        }
        out.push('\n');
    }
    for k in 0..g.n_edges() {
        let _ = writeln!(out, "{edge_word} {}: {} {}", g.edge_id(k), g.dart_name(2 * k), g.dart_name(2 * k + 1));
    }
}

pub fn parse_plane_graph(text: &str) -> Result<PlaneGraph> {
    let ls = lines(text);
    parse_map_body(expect_header(&ls, "planegraph v1")?, "edge")
}

pub fn write_plane_graph(g: &PlaneGraph) -> String {
    let mut out = String::from("planegraph v1\n");
    write_map_body(&mut out, g, "edge");
    out
}

/// A plane digraph; arcs list their tail dart first.
pub fn parse_plane_digraph(text: &str) -> Result<RibbonDigraph> {
    let ls = lines(text);
    Ok(RibbonDigraph::new(parse_map_body(expect_header(&ls, "planedigraph v1")?, "arc")?))
}

pub fn write_plane_digraph(d: &RibbonDigraph) -> String {
    let mut out = String::from("planedigraph v1\n");
    write_map_body(&mut out, d.map(), "arc");
    out
}

/// The id-level content of a trinity file, without validation.
pub fn parse_trinity_data(text: &str) -> Result<TrinityData> {
    let ls = lines(text);
    let body = expect_header(&ls, "trinity v1")?;
    let mut data = TrinityData::default();
    for line in body {
        match line.tokens[0].1 {
            "node" => {
                if line.tokens.len() != 3 {
                    return Err(line.err(0, "expected `node <id> <R|E|V>`"));
                }
                let id = id_at(line, 1)?;
                let c: Color = line.tokens[2].1.parse().map_err(|e: String| line.err(2, e))?;
                data.nodes.push((id.to_string(), c));
            }
            "edge" => {
                if line.tokens.len() != 4 {
                    return Err(line.err(0, "expected `edge <id>: <node> <node>`"));
                }
                let id = labelled_id(line, 1)?;
                data.edges.push((id.to_string(), id_at(line, 2)?.to_string(), id_at(line, 3)?.to_string()));
            }
            "triangle:" => {
                if line.tokens.len() != 5 {
                    return Err(line.err(0, "expected `triangle: <edge> <edge> <edge> <W|B>`"));
                }
                let edges = [id_at(line, 1)?.to_string(), id_at(line, 2)?.to_string(), id_at(line, 3)?.to_string()];
                let tag = match line.tokens[4].1 {
                    "W" => Tag::White,
                    "B" => Tag::Black,
                    other => return Err(line.err(4, format!("unknown tag {other:?} (expected W or B)"))),
                };
                data.triangles.push((edges, tag));
            }
            other => return Err(line.err(0, format!("unknown keyword {other:?}"))),
        }
    }
    Ok(data)
}

pub fn parse_trinity(text: &str) -> Result<Trinity> {
    Trinity::new(parse_trinity_data(text)?)
}

pub fn write_trinity(t: &Trinity) -> String {
    write_trinity_data(t.data())
}

pub fn write_trinity_data(data: &TrinityData) -> String {
    let mut out = String::from("trinity v1\n");
    for (id, c) in &data.nodes {
        let _ = writeln!(out, "node {id} {c}");
    }
    for (id, a, b) in &data.edges {
        let _ = writeln!(out, "edge {id}: {a} {b}");
    }
    for ([a, b, c], tag) in &data.triangles {
        let tag = if *tag == Tag::White { "W" } else { "B" };
        let _ = writeln!(out, "triangle: {a} {b} {c} {tag}");
    }
    out
}

/// `id=value` pairs following a header token.
fn parse_assignments(line: &Line<'_>, from: usize) -> Result<Vec<(String, i64)>> {
    let mut out = Vec::new();
    for i in from..line.tokens.len() {
        let tok = line.tokens[i].1;
        let (id, value) = tok.split_once('=').ok_or_else(|| line.err(i, format!("expected `<id>=<integer>`, found {tok:?}")))?;
        if !is_id(id) {
            return Err(line.err(i, format!("invalid id {id:?}")));
        }
        let value: i64 = value.parse().map_err(|_| line.err(i, format!("invalid integer {value:?}")))?;
        if out.iter().any(|(x, _)| x == id) {
            return Err(line.err(i, format!("{id} assigned twice")));
        }
        out.push((id.to_string(), value));
    }
    Ok(out)
}

fn single_line<'a, 'b>(ls: &'b [Line<'a>], what: &str) -> Result<&'b Line<'a>> {
    match ls {
        [line] => Ok(line),
        [] => Err(syntax(1, 1, format!("empty input, expected a {what} line"))),
        [_, extra, ..] => Err(extra.err(0, format!("a {what} file holds a single line"))),
    }
}

/// `chips: v1=3 v2=-1`.
pub fn parse_chips(text: &str) -> Result<Vec<(String, i64)>> {
    let ls = lines(text);
    let line = single_line(&ls, "chips")?;
    if line.tokens[0].1 != "chips:" {
        return Err(line.err(0, "expected `chips:`"));
    }
    parse_assignments(line, 1)
}

/// Lay out id/value pairs over `ids`; absent ids get 0.
pub fn assign(ids: &[String], pairs: &[(String, i64)]) -> Result<Vec<i64>> {
    let mut values = vec![0; ids.len()];
    for (id, v) in pairs {
        let i = ids.iter().position(|x| x == id).ok_or_else(|| Error::UnknownVertex(id.clone()))?;
        values[i] = *v;
    }
    Ok(values)
}

pub fn chips_on(ids: &[String], pairs: &[(String, i64)]) -> Result<ChipConfig> {
    Ok(ChipConfig::new(assign(ids, pairs)?))
}

fn write_assignments(out: &mut String, ids: &[String], values: &[i64]) {
    for (id, v) in ids.iter().zip(values) {
        let _ = write!(out, " {id}={v}");
    }
    out.push('\n');
}

pub fn write_chips(ids: &[String], x: &ChipConfig) -> String {
    let mut out = String::from("chips:");
    write_assignments(&mut out, ids, x.values());
    out
}

/// `hypertree side=E: e1=0 e2=1`.
pub fn parse_hypertree(text: &str) -> Result<(Color, Vec<(String, i64)>)> {
    let ls = lines(text);
    let line = single_line(&ls, "hypertree")?;
    if line.tokens[0].1 != "hypertree" {
        return Err(line.err(0, "expected `hypertree side=<R|E|V>:`"));
    }
    let side = line
        .tokens
        .get(1)
        .and_then(|t| t.1.strip_prefix("side="))
        .and_then(|s| s.strip_suffix(':'))
        .ok_or_else(|| syntax(line.no, line.col(1), "expected `side=<R|E|V>:`"))?;
    let c: Color = side.parse().map_err(|e: String| line.err(1, e))?;
    Ok((c, parse_assignments(line, 2)?))
}

pub fn write_hypertree(side: Color, ids: &[String], f: &[i64]) -> String {
    let mut out = format!("hypertree side={side}:");
    write_assignments(&mut out, ids, f);
    out
}

/// `arborescence root=v: a1 a2` (arc ids).
pub fn parse_arborescence(text: &str) -> Result<(String, Vec<String>)> {
    let ls = lines(text);
    let line = single_line(&ls, "arborescence")?;
    if line.tokens[0].1 != "arborescence" {
        return Err(line.err(0, "expected `arborescence root=<id>:`"));
    }
    let root = line
        .tokens
        .get(1)
        .and_then(|t| t.1.strip_prefix("root="))
        .and_then(|s| s.strip_suffix(':'))
        .filter(|s| is_id(s))
        .ok_or_else(|| syntax(line.no, line.col(1), "expected `root=<id>:`"))?;
    let mut arcs = Vec::new();
    for i in 2..line.tokens.len() {
        arcs.push(id_at(line, i)?.to_string());
    }
    Ok((root.to_string(), arcs))
}

/// Resolve a parsed arborescence against a digraph.
pub fn arborescence_in(d: &RibbonDigraph, root: &str, arcs: &[String], dir: Direction) -> Result<Arborescence> {
    let g = d.map();
    let r = g.vertex(root)?;
    let arcs: Vec<usize> = arcs.iter().map(|a| g.edge(a)).collect::<Result<_>>()?;
    Arborescence::from_arcs(d, r, &arcs, dir)
}

pub fn write_arborescence(d: &RibbonDigraph, a: &Arborescence) -> String {
    let g = d.map();
    let mut out = format!("arborescence root={}:", g.vertex_id(a.root()));
    for k in a.arcs() {
        let _ = write!(out, " {}", g.edge_id(k));
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const K2_DIGRAPH: &str = "planedigraph v1\nvertex v1: a1t a2h\nvertex v2: a1h a2t\narc a1: a1t a1h\narc a2: a2t a2h\n";

    #[test]
    fn digraph_round_trip() {
        let d = parse_plane_digraph(K2_DIGRAPH).unwrap();
        assert_eq!(d.n_vertices(), 2);
        assert_eq!(d.n_arcs(), 2);
        assert!(d.is_balanced());
        assert_eq!(write_plane_digraph(&d), K2_DIGRAPH);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# bidirected K2\n\nplanedigraph v1   # header\nvertex v1: a1t a2h\nvertex v2: a1h a2t\narc a1: a1t a1h\narc a2: a2t a2h\n";
        assert_eq!(write_plane_digraph(&parse_plane_digraph(text).unwrap()), K2_DIGRAPH);
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_plane_digraph("planedigraph v1\nvertex v1: a1t zz\narc a1: a1t a1h\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, col: 16, .. }), "{err}");
        let err = parse_plane_graph("planegraph v2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, col: 1, .. }));
        let err = parse_chips("chips: v1=x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, col: 8, .. }));
    }

    #[test]
    fn chips_and_hypertrees() {
        let pairs = parse_chips("chips: v1=2 v2=-2").unwrap();
        let ids = vec!["v1".to_string(), "v2".to_string()];
        let x = chips_on(&ids, &pairs).unwrap();
        assert_eq!(x.degree(), 0);
        assert_eq!(write_chips(&ids, &x), "chips: v1=2 v2=-2\n");
        let (c, pairs) = parse_hypertree("hypertree side=E: e1=0 e2=1\n").unwrap();
        assert_eq!(c, Color::E);
        assert_eq!(pairs, vec![("e1".into(), 0), ("e2".into(), 1)]);
        assert!(chips_on(&ids, &[("v9".into(), 1)]).is_err());
    }

    #[test]
    fn dangling_triangle_edge() {
        let text = "trinity v1\nnode a V\nnode b E\nnode c R\nedge x: a b\nedge y: b c\nedge z: c a\ntriangle: x y w W\ntriangle: x y z B\n";
        assert!(parse_trinity_data(text).is_ok());
        assert!(matches!(parse_trinity(text), Err(Error::InvalidTrinity(_))));
    }
}
