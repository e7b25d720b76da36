use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nct::harness::{bench, query_list, verify, QuerySet};
use nct::tree_file::generate;
use nct::{BuildParams, ColorModel, Index, NodeId, Structure, TreeFile};

#[derive(Parser)]
#[command(
    name = "nct",
    version,
    about = "Nearest colored node queries on colored trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random tree file
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        sigma: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Model::Uniform)]
        model: Model,
        /// Zipf exponent for --model zipf
        #[arg(long, default_value_t = 1.0)]
        zipf_s: f64,
        /// Output path; stdout if omitted
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build an index and print its space report
    Build {
        file: PathBuf,
        #[command(flatten)]
        build: BuildArgs,
        /// Where to write the index
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Entropy order for the report
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Answer one query against a saved index
    Query {
        index: PathBuf,
        x: usize,
        alpha: u32,
    },
    /// Compare an index against the brute-force oracle
    Verify {
        file: PathBuf,
        #[command(flatten)]
        build: BuildArgs,
        /// Check a saved index instead of building one
        #[arg(long)]
        index: Option<PathBuf>,
        /// "all" or a number of random queries
        #[arg(long, default_value = "all")]
        queries: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Time queries and report space
    Bench {
        file: PathBuf,
        #[command(flatten)]
        build: BuildArgs,
        #[arg(long, default_value_t = 10_000)]
        queries: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long, value_enum, default_value_t = StructureArg::Auto)]
    structure: StructureArg,
    /// Frequency threshold L of the large-alphabet index
    #[arg(long)]
    freq_threshold: Option<usize>,
    /// Micro-tree size L of the small-alphabet index
    #[arg(long)]
    micro: Option<usize>,
    /// Mini-tree size L' of the small-alphabet index
    #[arg(long)]
    mini: Option<usize>,
}

impl BuildArgs {
    fn structure(&self) -> Structure {
        match self.structure {
            StructureArg::Small => Structure::Small,
            StructureArg::Large => Structure::Large,
            StructureArg::Auto => Structure::Auto,
        }
    }

    fn params(&self) -> BuildParams {
        BuildParams {
            micro: self.micro,
            mini: self.mini,
            threshold: self.freq_threshold,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StructureArg {
    Small,
    Large,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Uniform,
    Zipf,
}

/// Exit status 1 is reserved for verification failures.
enum Failure {
    Verify,
    Input(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

/// Writes to stdout, treating a closed pipe as success.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            eprintln!("nct: {e}");
            std::process::exit(2);
        }
        _ => {}
    }
}

fn read_tree(path: &Path) -> Result<TreeFile, Failure> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(TreeFile::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen {
            n,
            sigma,
            seed,
            model,
            zipf_s,
            output,
        } => {
            let model = match model {
                Model::Uniform => ColorModel::Uniform,
                Model::Zipf => ColorModel::Zipf(zipf_s),
            };
            let text = generate(n, sigma, seed, model)?.to_text();
            match output {
                Some(path) => fs::write(path, text)?,
                None => emit(&text),
            }
        }
        Command::Build {
            file,
            build,
            output,
            k,
        } => {
            let f = read_tree(&file)?;
            let index = Index::build(f.tree, f.colors, build.structure(), build.params())?;
            if let Some(path) = output {
                fs::write(path, index.to_bytes())?;
            }
            emit(&index.space_report(k).to_string());
        }
        Command::Query { index, x, alpha } => {
            let index = Index::from_bytes(&fs::read(index)?)?;
            if x == 0 {
                return Err(Failure::Input("node ranks start at 1".into()));
            }
            let (u, d) = index.query(NodeId::new(x), alpha)?;
            emit(&format!("{u} {d}\n"));
        }
        Command::Verify {
            file,
            build,
            index,
            queries,
            seed,
        } => {
            let f = read_tree(&file)?;
            let index = match index {
                Some(path) => Index::from_bytes(&fs::read(path)?)?,
                None => Index::build(
                    f.tree.clone(),
                    f.colors.clone(),
                    build.structure(),
                    build.params(),
                )?,
            };
            let set = match queries.as_str() {
                "all" => QuerySet::All,
                count => QuerySet::Random {
                    count: count.parse().map_err(|_| {
                        format!("--queries must be \"all\" or a count, got {count:?}")
                    })?,
                    seed,
                },
            };
            let list = query_list(f.tree.len(), f.colors.sigma(), set);
            let report = verify(&f, &index, &list)?;
            emit(&report.to_string());
            if !report.passed() {
                return Err(Failure::Verify);
            }
        }
        Command::Bench {
            file,
            build,
            queries,
            seed,
            k,
        } => {
            let f = read_tree(&file)?;
            let report = bench(&f, build.structure(), build.params(), queries, seed, k)?;
            emit(&report.to_string());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("nct: {msg}");
            ExitCode::from(2)
        }
    }
}
