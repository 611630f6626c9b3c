//! The `trinity` command-line tool.
//!
//! File grammar. Every format is line based; `#` starts a comment running to
//! the end of the line and blank lines are ignored. Ids are ASCII letters,
//! digits, `_`, `-` and `.`. The first line names the format.
//!
//! ```text
//! planegraph v1                      planedigraph v1
//! vertex <id>: <dart> <dart> ...     vertex <id>: <dart> <dart> ...
//! edge <id>: <dart> <dart>           arc <id>: <tail-dart> <head-dart>
//!
//! trinity v1
//! node <id> <R|E|V>
//! edge <id>: <node> <node>
//! triangle: <edge> <edge> <edge> <W|B>
//!
//! chips: <id>=<n> ...                (unlisted ids hold 0)
//! hypertree side=<R|E|V>: <id>=<n> ...
//! arborescence root=<id>: <arc> ...
//! ```
//!
//! Darts around a vertex are listed counterclockwise.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use trinity_core::actions::{action_names, make_action, ActionOptions, HypertreeTable};
use trinity_core::build::{trinity_from_balanced_digraph, trinity_from_plane_graph};
use trinity_core::format::{
    arborescence_in, assign, chips_on, header_of, parse_arborescence, parse_chips, parse_hypertree,
    parse_plane_digraph, parse_plane_graph, parse_trinity, parse_trinity_data, write_arborescence,
    write_hypertree, write_trinity,
};
use trinity_core::jaeger::{TrinityBase, TREE_LIMIT};
use trinity_core::map::PlaneGraph;
use trinity_core::rotor::rotor_act;
use trinity_core::sandpile::{enumerate_arborescences, Direction};
use trinity_core::trinity::{validate_trinity, Color, Tag, Trinity};
use trinity_core::trinity_group::TrinityGroup;
use trinity_core::verify::{corpus, registry, select, verify_corpus, verify_theorems, VerificationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "trinity", version, about = "Sandpile groups, hypertrees and the Bernardi and rotor-routing actions of trinities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a trinity from a plane graph or a balanced plane digraph.
    Build {
        #[arg(long, value_enum)]
        from: Source,
        input: PathBuf,
        /// Write here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check any supported file, reporting every problem found.
    Validate { input: PathBuf },
    /// Order and invariant factors of Pic0(D_color).
    Group {
        trinity: PathBuf,
        #[arg(long, value_parser = parse_color)]
        color: Color,
    },
    /// All hypertrees on one class in a derived bipartite graph.
    Hypertrees {
        trinity: PathBuf,
        #[arg(long, value_parser = parse_color)]
        class: Color,
        #[arg(long, value_parser = parse_color)]
        host: Color,
    },
    /// The V-cut Jaeger trees of G_R for a base, with the Bernardi bijection.
    Jaeger {
        trinity: PathBuf,
        /// `b0:b1[:edge]`; defaults to the first red edge.
        #[arg(long)]
        base: Option<String>,
    },
    /// The Bernardi action of Pic0(D_V) on hypertrees on E in G_R.
    Bernardi {
        #[command(subcommand)]
        command: BernardiCommand,
    },
    /// The rotor-routing action of Pic0(D_V) on in-arborescences of D_V.
    Rotor {
        #[command(subcommand)]
        command: RotorCommand,
    },
    /// Check the theorems on seeded random instances or on one trinity.
    Verify {
        /// Verify this trinity instead of a random corpus.
        trinity: Option<PathBuf>,
        #[arg(long, env = "TRINITY_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        instances: usize,
        #[arg(long, default_value_t = 6)]
        max_vertices: usize,
        #[arg(long, default_value_t = 10)]
        max_edges: usize,
        /// Worker threads; 0 uses one per core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Comma-separated check names; all checks when absent.
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
        /// Print the check names and exit.
        #[arg(long)]
        list: bool,
        /// Write each counterexample to `<dir>/<check>.trinity`.
        #[arg(long)]
        save_counterexamples: Option<PathBuf>,
    },
    /// Export to other formats.
    Export {
        #[command(subcommand)]
        command: ExportCommand,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Source {
    Planegraph,
    Digraph,
}

#[derive(Subcommand, Debug)]
enum BernardiCommand {
    /// Act with a chip configuration on V on a hypertree on E.
    Act {
        trinity: PathBuf,
        #[arg(long)]
        chips: PathBuf,
        #[arg(long)]
        hypertree: PathBuf,
        /// `b0:b1[:edge]`, for the classical method.
        #[arg(long)]
        base: Option<String>,
        #[arg(long, default_value = "canonical")]
        method: String,
        /// Violet root, for the rotor method.
        #[arg(long)]
        root: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum RotorCommand {
    /// Play the rotor-routing game of a chip configuration on V.
    Act {
        trinity: PathBuf,
        #[arg(long)]
        root: String,
        #[arg(long)]
        chips: PathBuf,
        #[arg(long)]
        arb: PathBuf,
    },
    /// List the in-arborescences of D_V rooted at a violet node.
    List {
        trinity: PathBuf,
        #[arg(long)]
        root: String,
    },
}

#[derive(Subcommand, Debug)]
enum ExportCommand {
    /// Graphviz DOT for a plane graph, plane digraph or trinity file.
    Dot { input: PathBuf },
}

fn parse_color(s: &str) -> Result<Color, String> {
    s.parse()
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure { code: EXIT_INVALID, message: e.to_string() }
    }
}

type Outcome = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure { code: EXIT_INVALID, message: format!("{}: {e}", path.display()) })
}

/// Parse errors name the file they come from.
fn in_file<T>(path: &Path, r: trinity_core::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure { code: EXIT_INVALID, message: format!("{}: {e}", path.display()) })
}

fn load_trinity(path: &Path) -> Result<Trinity, Failure> {
    in_file(path, parse_trinity(&read(path)?))
}

fn class_ids(t: &Trinity, c: Color) -> Vec<String> {
    t.class(c).iter().map(|&v| t.node_id(v).to_string()).collect()
}

/// Run the tool on `argv` (program name first), writing to `out` and `err`.
/// Returns the exit code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let (code, text) = match dispatch(cli.command) {
        Ok(text) => (EXIT_OK, text),
        Err(Failure { code, message }) => (code, message),
    };
    let mut text = text;
    if !text.is_empty() && !text.ends_with('\n') {
        text.push('\n');
    }
    let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
    code
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Build { from, input, output } => build(from, &input, output.as_deref()),
        Command::Validate { input } => validate(&input),
        Command::Group { trinity, color } => group(&trinity, color),
        Command::Hypertrees { trinity, class, host } => hypertrees(&trinity, class, host),
        Command::Jaeger { trinity, base } => jaeger(&trinity, base.as_deref()),
        Command::Bernardi { command: BernardiCommand::Act { trinity, chips, hypertree, base, method, root } } => {
            bernardi_act(&trinity, &chips, &hypertree, base.as_deref(), &method, root.as_deref())
        }
        Command::Rotor { command: RotorCommand::Act { trinity, root, chips, arb } } => {
            rotor(&trinity, &root, &chips, &arb)
        }
        Command::Rotor { command: RotorCommand::List { trinity, root } } => {
            let t = load_trinity(&trinity)?;
            let r = violet_index(&t, &root)?;
            let d = t.derived_digraph(Color::V);
            let arbs = enumerate_arborescences(&d, r, Direction::In, TREE_LIMIT)?;
            Ok(arbs.iter().map(|a| write_arborescence(&d, a)).collect())
        }
        Command::Verify { trinity, seed, instances, max_vertices, max_edges, jobs, checks, list, save_counterexamples } => {
            if list {
                let mut s = String::new();
                for c in registry() {
                    let _ = writeln!(s, "{:<28} {}", c.name(), c.description());
                }
                return Ok(s);
            }
            let report = match trinity {
                Some(path) => {
                    let t = load_trinity(&path)?;
                    if checks.is_empty() {
                        verify_theorems(&t, seed)?
                    } else {
                        let inst = trinity_core::verify::Instance::from_trinity(path.display().to_string(), seed, t);
                        verify_corpus(std::slice::from_ref(&inst), &select(&checks)?, jobs)?
                    }
                }
                None => {
                    let checks = if checks.is_empty() { registry() } else { select(&checks)? };
                    let instances = corpus(seed, instances, max_vertices, max_edges)?;
                    verify_corpus(&instances, &checks, jobs)?
                }
            };
            finish_verify(report, save_counterexamples.as_deref())
        }
        Command::Export { command: ExportCommand::Dot { input } } => export_dot(&input),
    }
}

fn build(from: Source, input: &Path, output: Option<&Path>) -> Outcome {
    let text = read(input)?;
    let t = match from {
        Source::Planegraph => trinity_from_plane_graph(&in_file(input, parse_plane_graph(&text))?)?,
        Source::Digraph => trinity_from_balanced_digraph(&in_file(input, parse_plane_digraph(&text))?)?,
    };
    let written = write_trinity(&t);
    match output {
        Some(path) => {
            std::fs::write(path, written).map_err(|e| format!("{}: {e}", path.display()))?;
            Ok(String::new())
        }
        None => Ok(written),
    }
}

fn validate(input: &Path) -> Outcome {
    let text = read(input)?;
    let header = header_of(&text).unwrap_or_default();
    let summary = match header.as_str() {
        "planegraph v1" => {
            let g = in_file(input, parse_plane_graph(&text))?;
            in_file(input, g.check_plane())?;
            format!("plane graph: {} vertices, {} edges, {} faces", g.n_vertices(), g.n_edges(), g.n_faces())
        }
        "planedigraph v1" => {
            let d = in_file(input, parse_plane_digraph(&text))?;
            in_file(input, d.map().check_plane())?;
            let balanced = if d.is_balanced() { "balanced" } else { "not balanced" };
            format!("plane digraph: {} vertices, {} arcs, {balanced}", d.n_vertices(), d.n_arcs())
        }
        "trinity v1" => {
            let data = in_file(input, parse_trinity_data(&text))?;
            let report = validate_trinity(&data);
            if !report.is_empty() {
                return Err(Failure { code: EXIT_INVALID, message: format!("{}: invalid trinity:\n{report}", input.display()) });
            }
            let t = Trinity::new(data)?;
            let counts: Vec<String> = Color::ALL.iter().map(|&c| format!("{}{c}", t.class(c).len())).collect();
            format!(
                "trinity: {} nodes ({}), {} edges, {} triangles",
                t.n_nodes(),
                counts.join(" "),
                t.n_edges(),
                t.n_triangles()
            )
        }
        _ => {
            return Err(Failure {
                code: EXIT_INVALID,
                message: format!("{}: line 1: unrecognised header {header:?}", input.display()),
            })
        }
    };
    Ok(format!("ok: {summary}\n"))
}

fn group(path: &Path, color: Color) -> Outcome {
    let t = load_trinity(path)?;
    let d = t.derived_digraph(color);
    let g = trinity_core::sandpile::SandpileGroup::new(&d)?;
    let factors: Vec<String> = g.invariant_factors().iter().map(|f| f.to_string()).collect();
    Ok(format!("order={} factors=[{}]\n", g.order(), factors.join(",")))
}

fn hypertrees(path: &Path, class: Color, host: Color) -> Outcome {
    if class == host {
        return Err(Failure { code: EXIT_INVALID, message: "--class and --host must differ".into() });
    }
    let t = load_trinity(path)?;
    let tg = TrinityGroup::new(&t)?;
    let table = HypertreeTable::new(&tg, class, host, TREE_LIMIT)?;
    let ids = class_ids(&t, class);
    Ok(table.hypertrees().iter().map(|f| write_hypertree(class, &ids, f)).collect())
}

fn resolve_base(t: &Trinity, base: Option<&str>) -> Result<TrinityBase, Failure> {
    let b = match base {
        Some(text) => TrinityBase::parse(t, text)?,
        None => TrinityBase::default_for(t, Color::R)?,
    };
    if b.color(t) != Color::R {
        return Err(Failure { code: EXIT_INVALID, message: "the base edge must be a red edge (an edge of G_R)".into() });
    }
    Ok(b)
}

fn jaeger(path: &Path, base: Option<&str>) -> Outcome {
    let t = load_trinity(path)?;
    let tg = TrinityGroup::new(&t)?;
    let b = resolve_base(&t, base)?;
    let classical = trinity_core::actions::ClassicalAction::new(&tg, b)?;
    let beta = classical.beta();
    let red_edges = t.edges_of_color(Color::R);
    let (e_ids, v_ids) = (class_ids(&t, Color::E), class_ids(&t, Color::V));
    let mut s = String::new();
    for (f, g) in beta.iter() {
        let tree = beta.jaeger_tree(f)?;
        let edges: Vec<&str> =
            red_edges.iter().zip(tree).filter(|(_, &inside)| inside).map(|(&k, _)| t.edge_id(k)).collect();
        let _ = write!(s, "tree: {} |", edges.join(" "));
        for (id, n) in e_ids.iter().zip(f) {
            let _ = write!(s, " {id}={n}");
        }
        s.push_str(" |");
        for (id, n) in v_ids.iter().zip(g) {
            let _ = write!(s, " {id}={n}");
        }
        s.push('\n');
    }
    Ok(s)
}

fn load_chips(t: &Trinity, path: &Path) -> Result<trinity_core::sandpile::ChipConfig, Failure> {
    let pairs = in_file(path, parse_chips(&read(path)?))?;
    let x = in_file(path, chips_on(&class_ids(t, Color::V), &pairs))?;
    if x.degree() != 0 {
        return Err(Failure { code: EXIT_INVALID, message: format!("{}: chips have degree {}, expected 0", path.display(), x.degree()) });
    }
    Ok(x)
}

fn violet_index(t: &Trinity, id: &str) -> Result<usize, Failure> {
    let v = t.node(id)?;
    t.class(Color::V)
        .iter()
        .position(|&w| w == v)
        .ok_or_else(|| Failure { code: EXIT_INVALID, message: format!("{id} is not a violet node") })
}

fn bernardi_act(
    path: &Path,
    chips: &Path,
    hypertree: &Path,
    base: Option<&str>,
    method: &str,
    root: Option<&str>,
) -> Outcome {
    let t = load_trinity(path)?;
    let tg = TrinityGroup::new(&t)?;
    let x = load_chips(&t, chips)?;
    let (side, pairs) = in_file(hypertree, parse_hypertree(&read(hypertree)?))?;
    if side != Color::E {
        return Err(Failure { code: EXIT_INVALID, message: format!("{}: expected a hypertree on E", hypertree.display()) });
    }
    let e_ids = class_ids(&t, Color::E);
    let f = in_file(hypertree, assign(&e_ids, &pairs))?;
    if !action_names().contains(&method) {
        return Err(Failure {
            code: EXIT_INVALID,
            message: format!("unknown method {method:?} (expected one of {})", action_names().join(", ")),
        });
    }
    let options = ActionOptions {
        base: if method == "classical" || base.is_some() { Some(resolve_base(&t, base)?) } else { None },
        root: root.map(|r| violet_index(&t, r)).transpose()?,
    };
    let action = make_action(method, &tg, &options)?;
    let g = action.act(&x, &f)?;
    Ok(write_hypertree(Color::E, &e_ids, &g))
}

fn rotor(path: &Path, root: &str, chips: &Path, arb: &Path) -> Outcome {
    let t = load_trinity(path)?;
    let x = load_chips(&t, chips)?;
    let d = t.derived_digraph(Color::V);
    let (arb_root, arcs) = in_file(arb, parse_arborescence(&read(arb)?))?;
    if arb_root != root {
        return Err(Failure {
            code: EXIT_INVALID,
            message: format!("{}: arborescence is rooted at {arb_root}, not {root}", arb.display()),
        });
    }
    violet_index(&t, root)?;
    let a = in_file(arb, arborescence_in(&d, root, &arcs, Direction::In))?;
    let group = trinity_core::sandpile::SandpileGroup::new(&d)?;
    let moved = rotor_act(&d, &group, &x, &a)?;
    Ok(write_arborescence(&d, &moved))
}

fn finish_verify(report: VerificationReport, save: Option<&Path>) -> Outcome {
    let mut text = report.to_string();
    if let Some(dir) = save {
        std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
        for row in &report.rows {
            if let Some((_, _, trinity)) = &row.first_failure {
                let file = dir.join(format!("{}.trinity", row.name));
                std::fs::write(&file, trinity).map_err(|e| format!("{}: {e}", file.display()))?;
                let _ = writeln!(text, "wrote {}", file.display());
            }
        }
    }
    if report.all_passed() {
        text.push_str("all checks passed\n");
        Ok(text)
    } else {
        Err(Failure { code: EXIT_VERIFY_FAILED, message: text })
    }
}

fn export_dot(input: &Path) -> Outcome {
    let text = read(input)?;
    match header_of(&text).unwrap_or_default().as_str() {
        "planegraph v1" => Ok(map_dot(&in_file(input, parse_plane_graph(&text))?, false)),
        "planedigraph v1" => Ok(map_dot(in_file(input, parse_plane_digraph(&text))?.map(), true)),
        "trinity v1" => Ok(trinity_dot(&load_trinity(input)?)),
        other => Err(Failure { code: EXIT_INVALID, message: format!("{}: cannot export {other:?}", input.display()) }),
    }
}

fn map_dot(g: &PlaneGraph, directed: bool) -> String {
    let (kind, link) = if directed { ("digraph", "->") } else { ("graph", "--") };
    let mut s = format!("{kind} G {{\n");
    for v in 0..g.n_vertices() {
        let _ = writeln!(s, "  \"{}\";", g.vertex_id(v));
    }
    for k in 0..g.n_edges() {
        let (a, b) = g.endpoints(k);
        let _ = writeln!(s, "  \"{}\" {link} \"{}\" [label=\"{}\"];", g.vertex_id(a), g.vertex_id(b), g.edge_id(k));
    }
    s.push_str("}\n");
    s
}

fn dot_color(c: Color) -> &'static str {
    match c {
        Color::R => "red",
        Color::E => "green",
        Color::V => "violet",
    }
}

/// Nodes colored by class; each white triangle is drawn as a dashed
/// outline through a point at its center.
fn trinity_dot(t: &Trinity) -> String {
    let mut s = String::from("graph trinity {\n");
    for v in 0..t.n_nodes() {
        let _ = writeln!(s, "  \"{}\" [style=filled, fillcolor={}];", t.node_id(v), dot_color(t.color(v)));
    }
    for k in 0..t.n_edges() {
        let [a, b] = t.edge_ends(k);
        let _ = writeln!(s, "  \"{}\" -- \"{}\" [label=\"{}\"];", t.node_id(a), t.node_id(b), t.edge_id(k));
    }
    for (i, tri) in (0..t.n_triangles()).filter(|&x| t.tag(x) == Tag::White).enumerate() {
        let _ = writeln!(s, "  \"white{}\" [shape=point];", i + 1);
        for c in Color::ALL {
            let _ = writeln!(s, "  \"white{}\" -- \"{}\" [style=dashed];", i + 1, t.node_id(t.corner(tri, c)));
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("trinity").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_str(&["group"]).0, EXIT_INVALID);
        assert_eq!(run_str(&["frobnicate"]).0, EXIT_INVALID);
        let (code, out, _) = run_str(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("verify"));
    }

    #[test]
    fn missing_file_is_a_validation_error() {
        let (code, _, err) = run_str(&["validate", "/nonexistent/file"]);
        assert_eq!(code, EXIT_INVALID);
        assert!(err.contains("/nonexistent/file"));
    }

    #[test]
    fn failed_verification_exits_two_and_saves_the_counterexample() {
        let row = trinity_core::verify::CheckRow {
            name: "phi-psi".into(),
            instances: 1,
            passed: 0,
            failed: 1,
            skipped: 0,
            cases: 3,
            first_failure: Some(("input".into(), "mismatch".into(), "trinity v1\n".into())),
        };
        let dir = std::env::temp_dir().join(format!("trinity-cli-test-{}", std::process::id()));
        let Err(f) = finish_verify(VerificationReport { rows: vec![row] }, Some(&dir)) else { panic!("expected failure") };
        assert_eq!(f.code, EXIT_VERIFY_FAILED);
        assert!(f.message.contains("counterexample for phi-psi on input: mismatch"));
        assert_eq!(std::fs::read_to_string(dir.join("phi-psi.trinity")).unwrap(), "trinity v1\n");
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn check_list() {
        let (code, out, _) = run_str(&["verify", "--list"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.lines().count(), registry().len());
    }
}
