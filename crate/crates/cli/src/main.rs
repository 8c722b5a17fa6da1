use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::json;

use surfsplit::dp::{count_colorful, Coloring};
use surfsplit::engine::{engine, IsomorphCounter, ENGINES};
use surfsplit::oracle::{brute_count, brute_list};
use surfsplit::ssd::{construct_ssd, decompose};
use surfsplit::{Error, Graph, Map, Subgraph};

mod corpus;

#[derive(Parser)]
#[command(name = "surfsplit", version, about = "Count and list pattern subgraphs of embedded graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Vertex, edge and face counts, genus and eccentricity of a map.
    Stats {
        #[arg(long)]
        host: PathBuf,
        #[arg(long, default_value_t = 0)]
        root: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Emit a surface split decomposition in BD format.
    Decompose {
        #[arg(long)]
        host: PathBuf,
        #[arg(long, default_value_t = 0)]
        root: usize,
    },
    /// Count subgraphs of the host isomorphic to the pattern.
    Count(Query),
    /// List subgraphs of the host isomorphic to the pattern.
    List(Query),
    /// Count copies of the pattern using every color of a vertex coloring.
    CountColorful {
        #[command(flatten)]
        query: Query,
        /// File of `color <v> <c>` lines.
        #[arg(long)]
        colors: PathBuf,
    },
    /// Brute-force count, cross-checked by two independent methods.
    OracleCount(Query),
    /// Brute-force listing.
    OracleList(Query),
    /// Compare the layered engine with the oracle on the bundled corpus.
    Selftest {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args)]
struct Query {
    #[arg(long)]
    host: PathBuf,
    #[arg(long)]
    pattern: PathBuf,
    /// Count induced subgraphs only.
    #[arg(long)]
    induced: bool,
    /// Stop listing after this many isomorphs (0 lists all).
    #[arg(long, default_value_t = 0)]
    limit: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// BFS root for the layering.
    #[arg(long, default_value_t = 0)]
    root: usize,
    #[arg(long, default_value = "layered", value_parser = clap::builder::PossibleValuesParser::new(ENGINES))]
    engine: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Failures carry the exit code they map to.
enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type Outcome = std::result::Result<String, Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: surfsplit::Result<T>) -> std::result::Result<T, Failure> {
    r.map_err(|e| match Failure::from(e) {
        Failure::Input(m) => Failure::Input(format!("{}: {m}", path.display())),
        internal => internal,
    })
}

fn load_map(path: &Path) -> std::result::Result<Map, Failure> {
    with_path(path, Map::parse(&read(path)?))
}

fn load_graph(path: &Path) -> std::result::Result<Graph, Failure> {
    with_path(path, Graph::parse(&read(path)?))
}

fn count_output(count: &BigUint, format: Format) -> String {
    match format {
        Format::Text => format!("{count}\n"),
        Format::Json => format!("{}\n", json!({ "count": count.to_string() })),
    }
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn list_output(list: &[Subgraph], format: Format) -> String {
    match format {
        Format::Text => list.iter().fold(String::new(), |mut s, g| {
            let _ = writeln!(s, "vertices={} edges={}", join(&g.vertices), join(&g.edges));
            s
        }),
        Format::Json => {
            let items: Vec<_> = list
                .iter()
                .map(|g| json!({ "vertices": g.vertices, "edges": g.edges }))
                .collect();
            format!("{}\n", json!({ "isomorphs": items }))
        }
    }
}

fn stats(host: &Path, root: usize, format: Format) -> Outcome {
    let map = load_map(host)?;
    if root >= map.vertex_count() {
        return Err(Failure::Input(format!("root {root} out of range 0..{}", map.vertex_count())));
    }
    let (n, m, f) = (map.vertex_count(), map.edge_count(), map.face_count());
    let genus = map.genus()?;
    let ecc = map.bfs_layers(root).eccentricity();
    Ok(match format {
        Format::Text => format!("n={n} m={m} f={f} genus={genus} ecc={ecc}\n"),
        Format::Json => format!(
            "{}\n",
            json!({ "n": n, "m": m, "f": f, "genus": genus, "eccentricity": ecc, "root": root })
        ),
    })
}

fn decompose_cmd(host: &Path, root: usize) -> Outcome {
    let map = load_map(host)?;
    let ssd = construct_ssd(&map, root)?;
    Ok(format!(
        "# width={} genus={} ecc={} bound={}\n{}",
        ssd.width(),
        ssd.genus,
        ssd.eccentricity,
        ssd.bound(),
        ssd.bd.to_text(Some(&ssd.mids))
    ))
}

fn counter(q: &Query) -> std::result::Result<Box<dyn IsomorphCounter>, Failure> {
    Ok(engine(&q.engine, q.root)?)
}

fn count(q: &Query) -> Outcome {
    let (map, pattern) = (load_map(&q.host)?, load_graph(&q.pattern)?);
    Ok(count_output(&counter(q)?.count(&map, &pattern, q.induced)?, q.format))
}

fn list(q: &Query) -> Outcome {
    let (map, pattern) = (load_map(&q.host)?, load_graph(&q.pattern)?);
    Ok(list_output(&counter(q)?.list(&map, &pattern, q.induced, q.limit)?, q.format))
}

fn colorful(q: &Query, colors: &Path) -> Outcome {
    let (map, pattern) = (load_map(&q.host)?, load_graph(&q.pattern)?);
    let coloring = with_path(colors, Coloring::parse(&read(colors)?, map.vertex_count()))?;
    if q.root >= map.vertex_count() {
        return Err(Failure::Input(format!("root {} out of range", q.root)));
    }
    if !map.is_simple() {
        return Err(Failure::Input("the host must be a simple graph".into()));
    }
    let bd = decompose(&map, q.root)?;
    let n = count_colorful(&map.underlying(), &bd, &coloring, &pattern, q.induced)?;
    Ok(count_output(&n, q.format))
}

fn oracle_count(q: &Query) -> Outcome {
    let (map, pattern) = (load_map(&q.host)?, load_graph(&q.pattern)?);
    let host = map.underlying();
    let by_maps = brute_count(&host, &pattern, q.induced);
    let by_subsets = BigUint::from(brute_list(&host, &pattern, q.induced).len());
    if by_maps != by_subsets {
        return Err(Failure::Internal(format!(
            "oracle methods disagree: {by_maps} by embeddings, {by_subsets} by enumeration"
        )));
    }
    Ok(count_output(&by_maps, q.format))
}

fn oracle_list(q: &Query) -> Outcome {
    let (map, pattern) = (load_map(&q.host)?, load_graph(&q.pattern)?);
    let all = brute_list(&map.underlying(), &pattern, q.induced);
    let take = if q.limit == 0 { all.len() } else { q.limit };
    let list: Vec<Subgraph> = all.into_iter().take(take).collect();
    Ok(list_output(&list, q.format))
}

fn selftest(format: Format) -> Outcome {
    let (rows, failures) = corpus::check()?;
    let ok = failures == 0;
    let out = match format {
        Format::Text => {
            let mut s = String::new();
            for r in &rows {
                let _ = writeln!(s, "{r}");
            }
            let _ = writeln!(s, "{} checks, {failures} failed", rows.len());
            s
        }
        Format::Json => format!("{}\n", json!({ "checks": rows.len(), "failed": failures })),
    };
    if ok {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Internal(format!("{failures} selftest checks failed")))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::Stats { host, root, format } => stats(host, *root, *format),
        Command::Decompose { host, root } => decompose_cmd(host, *root),
        Command::Count(q) => count(q),
        Command::List(q) => list(q),
        Command::CountColorful { query, colors } => colorful(query, colors),
        Command::OracleCount(q) => oracle_count(q),
        Command::OracleList(q) => oracle_list(q),
        Command::Selftest { format } => selftest(*format),
    };
    match outcome {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(2)
        }
    }
}
