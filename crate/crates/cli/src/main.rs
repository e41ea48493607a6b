use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use transgress_cli::commands::{self, CliError, RunOptions};
use transgress_cli::document::ResultDocument;
use transgress_cli::fixtures::{self, CorpusConvention};

/// Borel transgression of G -> G/T for compact simple Lie groups.
#[derive(Parser)]
#[command(name = "transgress", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for page construction (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Ignore the Weyl group size cap.
    #[arg(long, global = true)]
    force: bool,
}

#[derive(Args)]
struct GroupArg {
    /// Group spec, e.g. `C3`, `E6:adj`, `D4:pi1=[1,0,0,0]`.
    spec: String,
}

#[derive(Subcommand)]
enum Command {
    /// Cartan matrix, center, unit lattice basis and transition matrix.
    Describe(GroupArg),
    /// The transgression matrix, optionally analysed mod a prime.
    Tau {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long = "mod", value_name = "P")]
        modulus: Option<u64>,
    },
    /// Graded ranks of the E3 page.
    E3 {
        #[command(flatten)]
        group: GroupArg,
        /// `q` for rational coefficients, or a prime.
        #[arg(long, default_value = "q")]
        coeff: String,
        #[arg(long, value_name = "D")]
        max_degree: Option<usize>,
        /// Also list ranks per bidegree.
        #[arg(long)]
        bidegrees: bool,
    },
    /// Run a fixture corpus (the bundled one by default).
    Fixtures {
        corpus: Option<PathBuf>,
        /// Build root systems from the transposed Cartan matrix.
        #[arg(long)]
        transpose_cartan: bool,
    },
}

fn emit(doc: &ResultDocument, json: bool) {
    if json {
        print!("{}", doc.to_json());
    } else {
        print!("{}", doc.render_text());
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let opts = RunOptions {
        jobs: cli.jobs,
        force: cli.force,
        ..Default::default()
    };
    let doc = match cli.command {
        Command::Describe(g) => commands::cmd_describe(&g.spec, opts)?,
        Command::Tau { group, modulus } => commands::cmd_transgression(&group.spec, modulus, opts)?,
        Command::E3 {
            group,
            coeff,
            max_degree,
            bidegrees,
        } => {
            let coefficients = commands::parse_coefficients(&coeff)?;
            commands::cmd_e3(&group.spec, coefficients, max_degree, bidegrees, opts)?
        }
        Command::Fixtures {
            corpus,
            transpose_cartan,
        } => {
            let text = match &corpus {
                Some(path) => std::fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                })?,
                None => fixtures::DEFAULT_CORPUS.to_string(),
            };
            let corpus = fixtures::parse_corpus(&text)?;
            let flip = transpose_cartan.then_some(CorpusConvention::Transposed);
            let report = fixtures::run_corpus(&corpus, flip, cli.jobs);
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            } else {
                print!("{}", report.render_text());
            }
            return Ok(if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            });
        }
    };
    emit(&doc, cli.json);
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.exit_code() == 1 {
                eprintln!("hint: --force lifts the cap");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
