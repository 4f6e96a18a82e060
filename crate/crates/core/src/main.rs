use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fitland::evolution::{run_de, run_de_from, WalkMethod};
use fitland::generators::{generate, GeneratorConfig, Model, NkNeighborhood};
use fitland::io::{load_landscape, save_landscape_csv, write_report, CsvOptions, ReportFormat};
use fitland::perturb::{self, PerturbSpec};
use fitland::snapshot::save_snapshot;
use fitland::{analyze, Alphabet, AlphabetChoice, AnalysisOptions, Error, Landscape};

#[derive(Parser)]
#[command(name = "fitland", version, about = "Fitness landscape construction and feature analysis")]
struct Cli {
    /// Worker threads (defaults to all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a landscape from CSV and save a binary snapshot
    Build {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute landscape features
    Analyze(AnalyzeArgs),
    /// Generate a synthetic landscape
    Generate(GenerateArgs),
    /// Delete data, add noise, or draw a biased mutagenesis library
    Perturb(PerturbArgs),
    /// Run repeated adaptive walks and report endpoint percentiles
    Walk(WalkArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AlphabetArg {
    Infer,
    Binary,
    Dna,
    Rna,
    Protein,
}

#[derive(Args)]
struct InputArgs {
    /// CSV with sequence,fitness[,variance] columns, or a binary snapshot
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "infer")]
    alphabet: AlphabetArg,
    /// Separator between multi-character alleles in the sequence column
    #[arg(long)]
    delimiter: Option<String>,
}

impl InputArgs {
    fn load(&self) -> fitland::Result<Landscape> {
        load(&self.input, self.alphabet, self.delimiter.clone())
    }
}

fn load(path: &Path, alphabet: AlphabetArg, delimiter: Option<String>) -> fitland::Result<Landscape> {
    let choice = match alphabet {
        AlphabetArg::Infer => AlphabetChoice::Infer,
        AlphabetArg::Binary => AlphabetChoice::Preset(Alphabet::Binary),
        AlphabetArg::Dna => AlphabetChoice::Preset(Alphabet::Dna),
        AlphabetArg::Rna => AlphabetChoice::Preset(Alphabet::Rna),
        AlphabetArg::Protein => AlphabetChoice::Preset(Alphabet::Protein),
    };
    load_landscape(
        path,
        &choice,
        &CsvOptions {
            allele_delimiter: delimiter,
        },
    )
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long, conflicts_with = "graph", required_unless_present = "graph")]
    input: Option<PathBuf>,
    /// Binary snapshot written by `build`
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "infer")]
    alphabet: AlphabetArg,
    #[arg(long)]
    delimiter: Option<String>,
    /// `all` or a comma-separated list of feature names
    #[arg(long, default_value = "all")]
    features: String,
    #[arg(long)]
    eps_tol: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    walks: usize,
    #[arg(long)]
    walk_length: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    max_fit_nodes: usize,
    #[arg(long, default_value_t = 10_000)]
    max_optima: usize,
    /// Report path; printed to stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format; inferred from the output extension when absent
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Additive,
    Hoc,
    Rmf,
    Nk,
    Eggbox,
}

#[derive(Clone, Copy, ValueEnum)]
enum NeighborhoodArg {
    Random,
    Adjacent,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    model: ModelArg,
    /// Number of loci
    #[arg(long)]
    n: usize,
    /// Alleles per locus
    #[arg(long, default_value_t = 2)]
    alleles: usize,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum, default_value = "random")]
    neighborhood: NeighborhoodArg,
    #[arg(long, default_value_t = 0.0)]
    mu: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma_a: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma_hoc: f64,
    #[arg(long, default_value_t = 0.0)]
    base: f64,
    #[arg(long, default_value_t = 1.0)]
    amplitude: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `.csv` writes a table; any other extension writes a snapshot
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("kind").required(true).args(["missing", "noise", "biased_rate"])))]
struct PerturbArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Fraction of nodes to delete
    #[arg(long)]
    missing: Option<f64>,
    /// Allow deletion of the global optimum
    #[arg(long, requires = "missing")]
    drop_global: bool,
    /// Noise level as a multiple of the fitness standard deviation
    #[arg(long)]
    noise: Option<f64>,
    #[arg(long, requires_all = ["biased_draws", "focal"])]
    biased_rate: Option<f64>,
    #[arg(long, requires = "biased_rate")]
    biased_draws: Option<usize>,
    /// Focal sequence for biased sampling
    #[arg(long, requires = "biased_rate")]
    focal: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `.csv` writes a table; any other extension writes a snapshot
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Greedy,
    Stochastic,
}

#[derive(Args)]
struct WalkArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "greedy")]
    method: MethodArg,
    #[arg(long, default_value_t = 100)]
    runs: usize,
    /// Start sequences; replaces random starts when given
    #[arg(long = "start")]
    starts: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn save(landscape: &Landscape, out: &Path) -> fitland::Result<()> {
    if ReportFormat::from_path(out) == ReportFormat::Csv {
        save_landscape_csv(landscape, out, None)
    } else {
        save_snapshot(landscape, out)
    }
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> fitland::Result<()> {
    match out {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            serde_json::to_writer_pretty(&mut w, value)?;
            writeln!(w)?;
            w.flush()?;
        }
        None => {
            let mut w = io::stdout().lock();
            serde_json::to_writer_pretty(&mut w, value)?;
            writeln!(w)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct Summary {
    node_count: usize,
    edge_count: usize,
    completeness: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    library_size: Option<usize>,
}

fn summarize(l: &Landscape, library_size: Option<usize>) {
    let s = Summary {
        node_count: l.node_count(),
        edge_count: l.edge_count(),
        completeness: l.completeness(),
        library_size,
    };
    eprintln!("{}", serde_json::to_string(&s).expect("summary serializes"));
}

fn run(cmd: Command) -> fitland::Result<()> {
    match cmd {
        Command::Build { input, out } => {
            let l = input.load()?;
            save_snapshot(&l, &out)?;
            summarize(&l, None);
        }
        Command::Analyze(a) => {
            let l = match (&a.input, &a.graph) {
                (Some(p), _) | (None, Some(p)) => load(p, a.alphabet, a.delimiter.clone())?,
                (None, None) => unreachable!("clap requires one input"),
            };
            let opts = AnalysisOptions {
                features: a.features.parse()?,
                eps_tol: a.eps_tol,
                sigma: a.sigma,
                walks: a.walks,
                walk_length: a.walk_length,
                seed: a.seed,
                max_fit_nodes: a.max_fit_nodes,
                max_optima: a.max_optima,
            };
            let report = analyze(&l, &opts)?;
            let format = match (a.format, &a.out) {
                (Some(FormatArg::Json), _) => ReportFormat::Json,
                (Some(FormatArg::Csv), _) => ReportFormat::Csv,
                (None, Some(p)) => ReportFormat::from_path(p),
                (None, None) => ReportFormat::Json,
            };
            match &a.out {
                Some(p) => {
                    let mut w = BufWriter::new(File::create(p)?);
                    write_report(&report, &mut w, format)?;
                    w.flush()?;
                }
                None => write_report(&report, io::stdout().lock(), format)?,
            }
        }
        Command::Generate(g) => {
            let model = match g.model {
                ModelArg::Additive => Model::Additive {
                    mu_a: g.mu,
                    sigma_a: g.sigma_a,
                },
                ModelArg::Hoc => Model::Hoc {
                    sigma_hoc: g.sigma_hoc,
                },
                ModelArg::Rmf => Model::Rmf {
                    mu_a: g.mu,
                    sigma_a: g.sigma_a,
                    sigma_hoc: g.sigma_hoc,
                },
                ModelArg::Nk => Model::Nk {
                    k: g.k.ok_or_else(|| {
                        Error::InvalidParameter("the nk model needs --k".into())
                    })?,
                    neighborhood: match g.neighborhood {
                        NeighborhoodArg::Random => NkNeighborhood::Random,
                        NeighborhoodArg::Adjacent => NkNeighborhood::Adjacent,
                    },
                },
                ModelArg::Eggbox => Model::Eggbox {
                    base: g.base,
                    amplitude: g.amplitude,
                },
            };
            let config = GeneratorConfig {
                model,
                alphabet_sizes: vec![g.alleles; g.n],
                seed: g.seed,
            };
            let l = generate(&config)?;
            save(&l, &g.out)?;
            summarize(&l, None);
        }
        Command::Perturb(p) => {
            let l = p.input.load()?;
            let spec = if let Some(alpha) = p.missing {
                PerturbSpec::Missing {
                    alpha,
                    drop_global: p.drop_global,
                }
            } else if let Some(beta) = p.noise {
                PerturbSpec::Noise { beta }
            } else {
                let focal = p.focal.as_deref().expect("clap requires --focal");
                let alleles = fitland::genotype::split_sequence(focal, p.input.delimiter.as_deref());
                PerturbSpec::Biased {
                    focal: l.space().encode(&alleles)?,
                    rate: p.biased_rate.expect("clap requires --biased-rate"),
                    draws: p.biased_draws.expect("clap requires --biased-draws"),
                }
            };
            let out = perturb::apply(&l, &spec, p.seed)?;
            save(&out.landscape, &p.out)?;
            summarize(&out.landscape, out.library_size);
        }
        Command::Walk(w) => {
            let l = w.input.load()?;
            let method = match w.method {
                MethodArg::Greedy => WalkMethod::Greedy,
                MethodArg::Stochastic => WalkMethod::Stochastic,
            };
            let result = if w.starts.is_empty() {
                run_de(&l, method, w.runs, w.seed)?
            } else {
                let starts = w
                    .starts
                    .iter()
                    .map(|s| {
                        let alleles =
                            fitland::genotype::split_sequence(s, w.input.delimiter.as_deref());
                        l.space().encode(&alleles)
                    })
                    .collect::<fitland::Result<Vec<_>>>()?;
                run_de_from(&l, method, &starts, w.seed)?
            };
            emit_json(&result, w.out.as_deref())?;
        }
    }
    Ok(())
}

/// Errors in user-supplied parameters count as usage errors; everything
/// else concerns the data.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidParameter(_) | Error::InvalidK { .. } => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
