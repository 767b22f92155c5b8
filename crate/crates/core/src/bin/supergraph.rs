use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use supergraph::audit::{audit_store, AuditOptions};
use supergraph::engine::Engine;
use supergraph::error::{exit, Error, Result};
use supergraph::graph::{load_graph, write_graph, write_labels, Graph, NodeId};
use supergraph::partition::HierarchyPlan;
use supergraph::pipeline::{build_store, BuildOptions};
use supergraph::tree::{verify_store_checksums, SuperNodeId, DEFAULT_CACHE_LEAVES};
use supergraph::{server, synth};

#[derive(Parser)]
#[command(name = "supergraph", version, about = "Build and query hierarchical graph stores")]
struct Cli {
    /// More log output (repeat for debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Partition a graph, build the tree store and audit it.
    Build {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        levels: usize,
        #[arg(long, default_value_t = supergraph::partition::DEFAULT_EPSILON)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Stop splitting groups smaller than this (default 2k).
        #[arg(long)]
        min_leaf_size: Option<usize>,
        /// Minimize the number of cut edges rather than their total weight.
        #[arg(long)]
        unweighted: bool,
        /// Use the leaves listed in this file instead of partitioning.
        #[arg(long, conflicts_with_all = ["min_leaf_size", "unweighted"])]
        hierarchy: Option<PathBuf>,
        /// Write the hierarchy used to this file.
        #[arg(long)]
        plan_out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Re-check a store from its files.
    Audit {
        #[arg(long)]
        store: PathBuf,
        /// Also compare against the source graph.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, requires = "input")]
        labels: Option<PathBuf>,
        /// Enforce this balance tolerance on every split.
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Query a store.
    Query {
        #[command(subcommand)]
        query: QueryCommand,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        #[arg(long, default_value_t = DEFAULT_CACHE_LEAVES)]
        cache_leaves: usize,
    },
    /// Write a synthetic edge list.
    Generate {
        #[arg(value_enum)]
        kind: GraphKind,
        #[arg(long, default_value_t = 1000)]
        nodes: usize,
        #[arg(long, default_value_t = 5000)]
        edges: usize,
        /// Community count (community) or block sizes are `nodes / communities` (planted).
        #[arg(long, default_value_t = 3)]
        communities: usize,
        /// Fraction of edges inside communities (community).
        #[arg(long, default_value_t = 0.9)]
        intra: f64,
        #[arg(long, default_value_t = 0.3)]
        p_in: f64,
        #[arg(long, default_value_t = 0.02)]
        p_out: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Also write a labels file naming every node.
        #[arg(long)]
        labels_out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum QueryCommand {
    /// Graph nodes under a tree node (`root` for the root).
    Closure {
        #[arg(long)]
        store: PathBuf,
        id: String,
        #[arg(long)]
        json: bool,
    },
    /// Edges between the closures of two tree nodes.
    Conn {
        #[arg(long)]
        store: PathBuf,
        a: String,
        b: String,
        #[arg(long)]
        json: bool,
    },
    /// Neighbors of a graph node outside its leaf.
    External {
        #[arg(long)]
        store: PathBuf,
        node: String,
        #[arg(long)]
        json: bool,
    },
    /// Case-insensitive label search.
    Search {
        #[arg(long)]
        store: PathBuf,
        text: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphKind {
    Gnm,
    Community,
    Planted,
    Fixture,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let s = serde_json::to_string_pretty(value).expect("views serialize");
    println!("{s}");
    Ok(())
}

fn tree_id(engine: &Engine, raw: &str) -> Result<SuperNodeId> {
    if raw == "root" {
        return Ok(engine.tree().root());
    }
    raw.parse()
        .map_err(|_| Error::Usage(format!("tree node id must be an integer or `root`, got {raw:?}")))
}

fn node_id(raw: &str) -> Result<NodeId> {
    raw.parse()
        .map_err(|_| Error::Usage(format!("graph node id must be an integer, got {raw:?}")))
}

fn weight_suffix(w: f64) -> String {
    if w == 1.0 {
        String::new()
    } else {
        format!("\t{w}")
    }
}

fn run_build(
    input: &Path,
    labels: Option<&Path>,
    opts: BuildOptions,
    out: &Path,
    plan_out: Option<&Path>,
    json: bool,
) -> Result<()> {
    let g = load_graph(input, labels)?;
    let (_, report) = build_store(&g, &opts, out)?;
    if let Some(p) = plan_out {
        let engine = Engine::open(out, 1)?;
        let tree = engine.tree();
        let mut w = create(p)?;
        // Leaves by dotted path, rebuilt from the stored tree.
        let mut stack = vec![(tree.root(), "0".to_string())];
        let mut lines = Vec::new();
        while let Some((id, path)) = stack.pop() {
            let node = tree.node(id)?;
            if let Some(l) = node.as_leaf() {
                let ids: Vec<String> = l.members.iter().map(ToString::to_string).collect();
                lines.push(format!("leaf {path} : {}", ids.join(",")));
            }
            for (i, c) in node.children().iter().enumerate().rev() {
                stack.push((*c, format!("{path}.{i}")));
            }
        }
        for l in lines {
            writeln!(w, "{l}").map_err(|e| Error::io(p, e))?;
        }
        w.flush().map_err(|e| Error::io(p, e))?;
    }
    if json {
        print_json(&report)
    } else {
        println!(
            "built {} nodes / {} edges into {} leaves under {} supernodes",
            report.nodes, report.edges, report.leaves, report.supernodes
        );
        println!(
            "fill: {} internal + {} cross edges, residual {}",
            report.fill.internal_edges, report.fill.cross_edges, report.fill.residual_at_root
        );
        println!(
            "time: partition {:.2}s, assemble {:.2}s, fill {:.2}s, save {:.2}s, audit {:.2}s",
            report.partition_secs, report.assemble_secs, report.fill_secs, report.save_secs, report.audit_secs
        );
        print!("{}", report.audit);
        Ok(())
    }
}

fn run_query(q: QueryCommand) -> Result<()> {
    match q {
        QueryCommand::Closure { store, id, json } => {
            let engine = Engine::open(&store, 1)?;
            let view = engine.closure(tree_id(&engine, &id)?)?;
            if json {
                return print_json(&view);
            }
            let mut out = io::stdout().lock();
            for v in &view.nodes {
                writeln!(out, "{v}").map_err(|e| Error::io("stdout", e))?;
            }
        }
        QueryCommand::Conn { store, a, b, json } => {
            let engine = Engine::open(&store, 1)?;
            let view = engine.connectivity(tree_id(&engine, &a)?, tree_id(&engine, &b)?)?;
            if json {
                return print_json(&view);
            }
            println!("weight {}", view.weight);
            for e in &view.edges {
                println!("{}\t{}{}", e.source, e.target, weight_suffix(e.weight));
            }
        }
        QueryCommand::External { store, node, json } => {
            let engine = Engine::open(&store, 1)?;
            let view = engine.external(node_id(&node)?)?;
            if json {
                return print_json(&view);
            }
            println!("neighbor\tweight\tneighbor_leaf\tresolved_at");
            for e in &view.entries {
                println!("{}\t{}\t{}\t{}", e.neighbor, e.edge.weight, e.neighbor_leaf, e.resolved_at);
            }
        }
        QueryCommand::Search { store, text, json } => {
            let engine = Engine::open(&store, 1)?;
            let hits = engine.search(&text)?;
            if json {
                return print_json(&hits);
            }
            for h in &hits {
                let path: Vec<String> = h.path.iter().map(ToString::to_string).collect();
                println!("{}\t{}\t{}", h.node, h.label, path.join("/"));
            }
        }
    }
    Ok(())
}

fn generate(kind: GraphKind, cmd: &Command) -> Result<Graph> {
    let Command::Generate {
        nodes,
        edges,
        communities,
        intra,
        p_in,
        p_out,
        seed,
        ..
    } = cmd
    else {
        unreachable!()
    };
    Ok(match kind {
        GraphKind::Gnm => synth::gnm(*nodes, *edges, *seed),
        GraphKind::Community => synth::community_graph(*nodes, *edges, *communities, *intra, *seed),
        GraphKind::Planted => {
            let c = (*communities).max(1);
            let mut sizes = vec![nodes / c; c];
            sizes[0] += nodes % c;
            synth::planted_partition(&sizes, *p_in, *p_out, *seed).0
        }
        GraphKind::Fixture => Graph::from_pairs([(1, 2), (3, 4), (5, 6), (7, 8), (2, 3), (2, 4), (6, 7), (4, 5)])?,
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Build {
            input,
            labels,
            k,
            levels,
            epsilon,
            seed,
            out,
            min_leaf_size,
            unweighted,
            hierarchy,
            plan_out,
            json,
        } => {
            let mut opts = BuildOptions::new(k, levels);
            opts.epsilon = epsilon;
            opts.seed = seed;
            opts.min_leaf_size = min_leaf_size;
            opts.weighted_cut = !unweighted;
            if let Some(p) = &hierarchy {
                let f = File::open(p).map_err(|e| Error::io(p, e))?;
                opts.plan = Some(HierarchyPlan::read_leaves(BufReader::new(f))?);
            }
            run_build(&input, labels.as_deref(), opts, &out, plan_out.as_deref(), json)
        }
        Command::Audit {
            store,
            input,
            labels,
            epsilon,
            json,
        } => {
            let g = match &input {
                Some(p) => Some(load_graph(p, labels.as_deref())?),
                None => None,
            };
            let report = audit_store(&store, &AuditOptions { graph: g.as_ref(), epsilon })?;
            if json {
                print_json(&report)?;
            } else {
                print!("{report}");
            }
            if report.passed() {
                Ok(())
            } else {
                Err(Error::AuditFailed(format!("{} check(s) failed", report.details.len().max(1))))
            }
        }
        Command::Query { query } => run_query(query),
        Command::Serve {
            store,
            port,
            host,
            cache_leaves,
        } => {
            verify_store_checksums(&store)?;
            let engine = Arc::new(Engine::open(&store, cache_leaves)?);
            eprintln!(
                "serving {} ({} leaves) on http://{host}:{port}",
                store.display(),
                engine.tree().leaf_count()
            );
            let rt = tokio::runtime::Builder::new_multi_thread()
                .enable_all()
                .build()
                .map_err(|e| Error::io("tokio runtime", e))?;
            rt.block_on(server::serve(engine, SocketAddr::new(host, port)))
        }
        ref cmd @ Command::Generate {
            kind,
            ref out,
            ref labels_out,
            ..
        } => {
            let g = generate(kind, cmd)?;
            let mut w = create(out)?;
            write_graph(&g, &mut w).and_then(|_| w.flush()).map_err(|e| Error::io(out, e))?;
            if let Some(lp) = labels_out {
                let mut b = supergraph::graph::GraphBuilder::new();
                for e in g.edges() {
                    b.add_edge(e.source, e.target, e.weight)?;
                }
                for &v in g.nodes() {
                    b.set_label(v, format!("node {v}"));
                }
                let mut w = create(lp)?;
                write_labels(&b.build(), &mut w)
                    .and_then(|_| w.flush())
                    .map_err(|e| Error::io(lp, e))?;
            }
            eprintln!("wrote {} nodes / {} edges to {}", g.node_count(), g.edge_count(), out.display());
            Ok(())
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let code = match run(cli) {
        Ok(()) => exit::OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
