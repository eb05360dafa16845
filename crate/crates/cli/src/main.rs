//! `qml`: quiver mutation from the command line, plus a local HTTP service.

mod server;

use std::io::Read;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use qml_core::class::{enumerate_class, DEFAULT_MAX_CLASSES, DEFAULT_MAX_MULTIPLICITY};
use qml_core::generators::Generator;
use qml_core::verify::{report_json, run_all};
use qml_core::{random_mutation_walk, ClaimStatus, Quiver, Triangulation};
use serde_json::json;

#[derive(Parser)]
#[command(name = "qml", version, about = "Quiver mutation classes and surface triangulations")]
struct Cli {
    /// Print quivers as Graphviz DOT instead of JSON.
    #[arg(long, global = true)]
    dot: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct GenParams {
    #[arg(long)]
    g: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
}

impl GenParams {
    fn generator(self, name: &str) -> Result<Generator> {
        Ok(Generator::parse(name, self.g, self.b, self.n, self.m)?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a named quiver: markov, qg0, qgb, an, polygon, exceptional:<NAME>.
    Gen {
        name: String,
        #[command(flatten)]
        params: GenParams,
    },
    /// Mutate a quiver read from a file or `-` for stdin.
    Mutate {
        input: String,
        /// Vertex to mutate at; repeat for a sequence.
        #[arg(long = "at")]
        at: Vec<usize>,
        /// Comma-separated sequence applied after any `--at`.
        #[arg(long, value_delimiter = ',')]
        seq: Vec<usize>,
    },
    /// Enumerate the mutation class up to isomorphism.
    Class {
        input: String,
        #[arg(long, default_value_t = DEFAULT_MAX_CLASSES)]
        max_classes: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_MULTIPLICITY)]
        max_mult: u64,
    },
    /// Seeded random mutation walk.
    Walk {
        input: String,
        #[arg(long)]
        steps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Triangulation operations.
    Tri {
        #[command(subcommand)]
        op: TriOp,
    },
    /// Run the claim checks and print a verify-report-v1 document.
    Verify {
        /// Comma-separated claim families; all when omitted.
        #[arg(long, value_delimiter = ',')]
        claims: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Serve the JSON API under /api/v1.
    Serve {
        #[arg(long, env = "QML_PORT", default_value_t = 8763)]
        port: u16,
    },
}

#[derive(Subcommand)]
enum TriOp {
    /// Triangulation behind a surface generator (markov, qg0, qgb, an, polygon).
    Gen {
        name: String,
        #[command(flatten)]
        params: GenParams,
    },
    /// Flip an arc.
    Flip {
        input: String,
        #[arg(long)]
        arc: usize,
    },
    /// Quiver of a triangulation.
    Quiver { input: String },
    /// Neighborhood case of one arc, or of every arc.
    Classify {
        input: String,
        #[arg(long)]
        arc: Option<usize>,
    },
    /// Add a puncture on an arc; the new (1,1) arc is reported on stderr.
    Addp {
        input: String,
        #[arg(long)]
        arc: usize,
    },
    /// Add a boundary marked point in a triangle with one boundary side
    /// (the first such triangle when omitted).
    Addb {
        input: String,
        #[arg(long)]
        triangle: Option<usize>,
    },
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn read_quiver(path: &str) -> Result<Quiver> {
    Ok(Quiver::from_json(&read_input(path)?)?)
}

fn read_tri(path: &str) -> Result<Triangulation> {
    Ok(Triangulation::from_json(&read_input(path)?)?)
}

fn print_quiver(q: &Quiver, dot: bool) {
    if dot {
        print!("{}", q.to_dot());
    } else {
        println!("{}", q.to_json());
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen { name, params } => print_quiver(&params.generator(&name)?.quiver()?, cli.dot),
        Command::Mutate { input, at, seq } => {
            let q = read_quiver(&input)?;
            let path: Vec<usize> = at.into_iter().chain(seq).collect();
            if path.is_empty() {
                bail!("give at least one vertex with --at or --seq");
            }
            print_quiver(&q.mutate_seq(&path)?, cli.dot);
        }
        Command::Class { input, max_classes, max_mult } => {
            let report = enumerate_class(&read_quiver(&input)?, max_classes, max_mult)?;
            println!("{}", report.to_json());
        }
        Command::Walk { input, steps, seed } => {
            let report = random_mutation_walk(&read_quiver(&input)?, steps, seed)?;
            println!("{}", serde_json::to_string(&report)?);
        }
        Command::Tri { op } => run_tri(op, cli.dot)?,
        Command::Verify { claims, seed } => {
            let results = run_all(&claims, seed).map_err(|e| anyhow!(e))?;
            println!("{}", serde_json::to_string_pretty(&report_json(&results, seed))?);
            if results.iter().any(|r| r.status == ClaimStatus::Fail) {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Serve { port } => {
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(server::serve(port))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_tri(op: TriOp, dot: bool) -> Result<()> {
    match op {
        TriOp::Gen { name, params } => println!("{}", params.generator(&name)?.triangulation()?.to_json()),
        TriOp::Flip { input, arc } => println!("{}", read_tri(&input)?.flip(arc)?.to_json()),
        TriOp::Quiver { input } => print_quiver(&read_tri(&input)?.quiver()?, dot),
        TriOp::Classify { input, arc } => {
            let t = read_tri(&input)?;
            let arcs = match arc {
                Some(a) => vec![a],
                None => t.arcs(),
            };
            let q = t.quiver()?;
            let mut rows = Vec::new();
            for a in arcs {
                let v = t.arc_vertex(a)?;
                rows.push(json!({
                    "arc": a,
                    "vertex": v,
                    "case": t.classify_arc(a)?,
                    "degrees": q.degrees(v)?,
                }));
            }
            println!("{}", json!({ "arcs": rows }));
        }
        TriOp::Addp { input, arc } => {
            let (t, new_arc) = read_tri(&input)?.add_puncture_on_arc(arc)?;
            eprintln!("distinguished arc {new_arc} (vertex {})", t.arc_vertex(new_arc)?);
            println!("{}", t.to_json());
        }
        TriOp::Addb { input, triangle } => {
            let t = read_tri(&input)?;
            let tri = match triangle.or_else(|| t.has_spade_triangle()) {
                Some(tri) => tri,
                None => bail!("no triangle has exactly one boundary side"),
            };
            let (t, new_arc) = t.add_boundary_marked_point(tri)?;
            eprintln!("distinguished arc {new_arc} (vertex {})", t.arc_vertex(new_arc)?);
            println!("{}", t.to_json());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
