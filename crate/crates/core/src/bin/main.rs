use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use girthcover::baumslag::{preimage_action, psi_apply, verify_ball_injectivity, PsiMap};
use girthcover::constructors::{
    build_girth_graph, pairing_model_sample, plant_unique_short_cycle, sample_theta,
    GirthCertificate, SamplerConfig,
};
use girthcover::error::Result;
use girthcover::geometry::{
    default_rep, estimate_milnor_schwarz, load_rep, systole_upper_bound, RepConfig,
};
use girthcover::graphs::MultiGraph;
use girthcover::pipelines::{pipeline_constant_systole, pipeline_main, pipeline_xk_systole};
use girthcover::schreier::{graph_to_action, min_subgroup_length, perm_tower, SchreierAction};
use girthcover::words::SurfaceWord;
use serde_json::json;

/// Finite-index subgroups of free and surface groups from 4-regular graphs
/// of prescribed girth, with certified word-length and systole bounds.
#[derive(Parser)]
#[command(name = "girthcover", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// RNG seed for randomized stages
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON result to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Graph construction and sampling
    Graph {
        #[command(subcommand)]
        cmd: GraphCmd,
    },
    /// Coset actions and subgroup word lengths
    Schreier {
        #[command(subcommand)]
        cmd: SchreierCmd,
    },
    /// The retraction homomorphisms psi_k
    Psi {
        #[command(subcommand)]
        cmd: PsiCmd,
    },
    /// Permutation towers for the subgroups H_k
    Tower {
        #[command(subcommand)]
        cmd: TowerCmd,
    },
    /// End-to-end pipelines
    Pipeline {
        #[command(subcommand)]
        cmd: PipelineCmd,
    },
    /// Hyperbolic-geometry layer
    Geom {
        #[command(subcommand)]
        cmd: GeomCmd,
    },
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Deterministically build a 4-regular graph with exact girth
    Build {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        g: usize,
    },
    /// Sample a configuration-model 4-regular multigraph
    Sample {
        #[arg(long)]
        n: usize,
    },
    /// Rejection-sample a graph with girth exactly k and 2-girth > l
    Theta {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 100_000)]
        max_tries: u64,
    },
    /// Plant a unique short cycle into a high-girth graph
    Plant {
        /// Input graph JSON file
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        separation: usize,
    },
}

#[derive(Subcommand)]
enum SchreierCmd {
    /// Read a coset action off a connected 4-regular graph
    FromGraph {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
    },
    /// Shortest nontrivial subgroup element of an action
    MinLength {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        #[arg(long, default_value_t = 32)]
        cutoff: usize,
    },
}

#[derive(Subcommand)]
enum PsiCmd {
    /// Exhaustive injectivity sweep on an exact ball
    Verify {
        #[arg(long)]
        k: usize,
        /// Ball radius (defaults to k)
        #[arg(long)]
        radius: Option<usize>,
    },
    /// Apply psi_k to a surface-group word
    Apply {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        word: String,
    },
}

#[derive(Subcommand)]
enum TowerCmd {
    /// Build a permutation tower and report its sequences
    Build(TowerArgs),
    /// Build and exhaustively verify supports, recurrences, and relations
    Check(TowerArgs),
}

#[derive(Args)]
struct TowerArgs {
    #[arg(long)]
    k: u64,
    #[arg(long)]
    m: u64,
    #[arg(long)]
    r: u64,
}

#[derive(Subcommand)]
enum PipelineCmd {
    /// Degree-n cover pinned by a girth-a graph
    A {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: usize,
    },
    /// Constant-systole family across sizes
    B {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        /// Comma-separated cover degrees
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
    },
    /// Tower subgroup H_k pulled back to the surface group
    C {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        r: u64,
        #[arg(long, default_value_t = 3)]
        budget: usize,
    },
}

#[derive(Subcommand)]
enum GeomCmd {
    /// Certified systole upper bound for the cover given by an action
    Bound {
        /// Free-group action JSON (defaults to the trivial index-1 action)
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        cutoff: usize,
        /// Representation config JSON (defaults to the Bolza surface)
        #[arg(long, value_name = "FILE")]
        rep: Option<PathBuf>,
    },
    /// Empirical quasi-isometry constants on a ball
    MsConstants {
        #[arg(long, default_value_t = 3)]
        radius: usize,
        #[arg(long, value_name = "FILE")]
        rep: Option<PathBuf>,
    },
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn graph_with_cert(graph: &MultiGraph, cert: &GirthCertificate) -> serde_json::Value {
    json!({ "graph": graph, "certificate": cert.wire() })
}

fn load_rep_arg(path: &Option<PathBuf>) -> Result<girthcover::geometry::FuchsianRep> {
    match path {
        Some(p) => {
            let config: RepConfig = read_json(p)?;
            load_rep(&config)
        }
        None => Ok(default_rep()),
    }
}

/// Runs a command; Ok carries the JSON result and whether every assertion
/// in it passed.
fn run(cli: &Cli) -> Result<(serde_json::Value, bool)> {
    let seed = cli.seed;
    let value = match &cli.command {
        Command::Graph { cmd } => match cmd {
            GraphCmd::Build { n, g } => {
                let (graph, cert) = build_girth_graph(*n, *g)?;
                graph_with_cert(&graph, &cert)
            }
            GraphCmd::Sample { n } => {
                let graph = pairing_model_sample(&SamplerConfig::new(*n, seed));
                json!({ "graph": graph, "seed": seed })
            }
            GraphCmd::Theta { n, k, l, max_tries } => {
                let mut config = SamplerConfig::new(*n, seed);
                config.max_tries = *max_tries;
                let (graph, cert) = sample_theta(*n, *k, *l, &config)?;
                graph_with_cert(&graph, &cert)
            }
            GraphCmd::Plant {
                input,
                k,
                separation,
            } => {
                let base: MultiGraph = read_json(input)?;
                let (graph, cert) = plant_unique_short_cycle(&base, *k, *separation)?;
                graph_with_cert(&graph, &cert)
            }
        },
        Command::Schreier { cmd } => match cmd {
            SchreierCmd::FromGraph { input } => {
                let graph: MultiGraph = read_json(input)?;
                json!(graph_to_action(&graph)?)
            }
            SchreierCmd::MinLength { input, cutoff } => {
                let action: SchreierAction = read_json(input)?;
                let (length, witness) = min_subgroup_length(&action, *cutoff)?;
                json!({ "length": length, "witness": witness.to_string() })
            }
        },
        Command::Psi { cmd } => match cmd {
            PsiCmd::Verify { k, radius } => {
                let map = PsiMap::new(*k)?;
                json!(verify_ball_injectivity(&map, radius.unwrap_or(*k))?)
            }
            PsiCmd::Apply { k, word } => {
                let map = PsiMap::new(*k)?;
                let w = SurfaceWord::parse(word)?;
                let image = psi_apply(&map, &w);
                json!({ "word": word, "image": image.to_string(), "length": image.len() })
            }
        },
        Command::Tower { cmd } => match cmd {
            TowerCmd::Build(args) => {
                let tower = perm_tower(args.k, args.m, args.r)?;
                json!({
                    "k": tower.k, "m": tower.m, "r": tower.r,
                    "l_bounds": tower.l_bounds, "n_bounds": tower.n_bounds,
                    "degree": tower.degree(),
                    "closed_form_printed": tower.closed_form_printed(),
                })
            }
            TowerCmd::Check(args) => {
                let tower = perm_tower(args.k, args.m, args.r)?;
                tower.check()?;
                json!({ "degree": tower.degree(), "checked": true })
            }
        },
        Command::Pipeline { cmd } => {
            let report = match cmd {
                PipelineCmd::A { n, a } => pipeline_main(*n, *a, seed)?,
                PipelineCmd::B { k, l, sizes } => pipeline_constant_systole(*k, *l, sizes, seed)?,
                PipelineCmd::C { k, m, r, budget } => pipeline_xk_systole(*k, *m, *r, *budget)?,
            };
            let pass = report.pass;
            return Ok((json!(report), pass));
        }
        Command::Geom { cmd } => match cmd {
            GeomCmd::Bound {
                input,
                k,
                cutoff,
                rep,
            } => {
                let rep = load_rep_arg(rep)?;
                let gamma = match input {
                    Some(p) => read_json::<SchreierAction>(p)?,
                    None => SchreierAction::new(vec![0], vec![0], 0)?,
                };
                let map = PsiMap::new(*k)?;
                let action = preimage_action(&map, &gamma)?;
                json!(systole_upper_bound(&rep, &action, *cutoff)?)
            }
            GeomCmd::MsConstants { radius, rep } => {
                let rep = load_rep_arg(rep)?;
                let (q, beta) = estimate_milnor_schwarz(&rep, *radius)?;
                json!({ "q": q, "beta": beta, "radius": radius })
            }
        },
    };
    Ok((value, true))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version with success; real usage errors
            // exit 2.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok((value, pass)) => {
            let text = serde_json::to_string_pretty(&value).expect("serializable");
            match &cli.out {
                Some(path) => {
                    if std::fs::write(path, text.as_bytes()).is_err() {
                        eprintln!("error: cannot write {}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => {
                    let mut stdout = std::io::stdout();
                    let _ = writeln!(stdout, "{text}");
                }
            }
            ExitCode::from(if pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
