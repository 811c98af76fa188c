use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hecke13::gram::{self, DetConfig, DetMode, OraclePairs};
use hecke13::io::{
    self, Artifact, BuildInfo, GramPayload, IoError, MatricesPayload, MatrixPayload, ReportPayload, GRAM_SCHEMA,
    MATRICES_SCHEMA, MATRIX_SCHEMA, REPORT_SCHEMA,
};
use hecke13::pipeline::{self, BuildConfig, BuildError};
use hecke13::rewrite::Budget;
use hecke13::verify::{self, VerifyConfig};

const SAMPLED_PAIRS: usize = 200;

#[derive(Parser, Debug)]
#[command(name = "hecke13", version, about = "Hecke algebra of G13: tables, trace, Gram matrix and checks")]
struct Cli {
    /// Output directory for all artifacts.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Seed for interpolation points and determinant evaluation points.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Determinant evaluation points per prime.
    #[arg(long, global = true, default_value_t = 20)]
    points: usize,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Probabilistic)]
    det_mode: Mode,
    /// Reducer step budget per product.
    #[arg(long, global = true, default_value_t = Budget::default().max_steps)]
    budget: u64,
    /// Compare all 9216 Gram entries with direct products instead of a sample.
    #[arg(long, global = true)]
    oracle: bool,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Probabilistic,
    Exact,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute and certify M_s, M_t, M_u, M_z and the coordinates of z^4.
    Build,
    /// Build the Gram matrix and compare it with direct products.
    Gram,
    /// Run every check and write the report.
    Verify,
    /// Write the tables and the Gram matrix as separate files.
    Export {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

enum Failure {
    Verification(String),
    Config(String),
    Budget(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<BuildError> for Failure {
    fn from(e: BuildError) -> Self {
        if e.is_budget() {
            Failure::Budget(e.to_string())
        } else {
            Failure::Verification(e.to_string())
        }
    }
}

impl Cli {
    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn det_config(&self) -> DetConfig {
        let mode = match self.det_mode {
            Mode::Probabilistic => DetMode::Probabilistic,
            Mode::Exact => DetMode::Exact,
        };
        DetConfig { mode, seed: self.seed, points: self.points }
    }

    fn oracle_pairs(&self) -> OraclePairs {
        if self.oracle {
            OraclePairs::All
        } else {
            OraclePairs::Sampled { count: SAMPLED_PAIRS, seed: self.seed }
        }
    }
}

fn cmd_build(cli: &Cli) -> Result<Artifact<MatricesPayload>, Failure> {
    let cfg = BuildConfig { seed: cli.seed, budget: Budget { max_steps: cli.budget, ..Budget::default() } };
    let built = pipeline::build(&cfg)?;
    let info = BuildInfo {
        derived_rules: built.rules.special.len(),
        degree_a: built.stats.degree_a,
        degree_c: built.stats.degree_c,
    };
    let art = Artifact::new(MATRICES_SCHEMA, io::build_input_hash(), MatricesPayload::new(info, &built.algebra));
    art.write(&cli.path("matrices.json"))?;
    io::write_file(&cli.path("rules.txt"), &built.rules.to_string())?;
    println!("wrote {} ({} derived rules)", cli.path("matrices.json").display(), built.rules.special.len());
    Ok(art)
}

/// The stored tables, building them first if absent.
fn matrices(cli: &Cli) -> Result<(Artifact<MatricesPayload>, hecke13::algebra::HeckeAlgebra), Failure> {
    let path = cli.path("matrices.json");
    let art = if path.exists() {
        let art = Artifact::<MatricesPayload>::read(&path, MATRICES_SCHEMA, "build")?;
        art.require_inputs(&path, &io::build_input_hash(), "build")?;
        art
    } else {
        cmd_build(cli)?
    };
    let alg = art.payload.algebra(&path)?;
    Ok((art, alg))
}

fn cmd_gram(cli: &Cli) -> Result<Artifact<GramPayload>, Failure> {
    let (mats, alg) = matrices(cli)?;
    let a = gram::build_gram(&alg).map_err(|e| Failure::Verification(e.to_string()))?;
    let n = gram::oracle_check(&alg, &a, cli.oracle_pairs()).map_err(|e| Failure::Verification(e.to_string()))?;
    println!("oracle: {n} Gram entries agree with direct products");
    let art = Artifact::new(GRAM_SCHEMA, mats.content_hash.clone(), GramPayload { gram: io::to_rows(&a) });
    art.write(&cli.path("gram.json"))?;
    println!("wrote {}", cli.path("gram.json").display());
    Ok(art)
}

fn gram_file(cli: &Cli, mats: &Artifact<MatricesPayload>) -> Result<Artifact<GramPayload>, Failure> {
    let path = cli.path("gram.json");
    if !path.exists() {
        return cmd_gram(cli);
    }
    let art = Artifact::<GramPayload>::read(&path, GRAM_SCHEMA, "gram")?;
    art.require_inputs(&path, &mats.content_hash, "gram")?;
    Ok(art)
}

fn cmd_verify(cli: &Cli) -> Result<(), Failure> {
    let (mats, alg) = matrices(cli)?;
    let gram_art = gram_file(cli, &mats)?;
    let group = hecke13::group::FiniteGroup::g13().map_err(|e| Failure::Verification(e.to_string()))?;
    let cfg = VerifyConfig { det: cli.det_config(), oracle: cli.oracle_pairs() };
    let report = verify::run_all(&alg, &group, &cfg);
    let stored_matches = gram::build_gram(&alg).map(|a| io::to_rows(&a) == gram_art.payload.gram).unwrap_or(false);
    let oracle_pairs = match cfg.oracle {
        OraclePairs::All => 96 * 96,
        OraclePairs::Sampled { count, .. } => count,
    };
    let payload = ReportPayload {
        det_mode: cfg.det.mode.to_string(),
        seed: cli.seed,
        points: cli.points,
        oracle_pairs,
        report: report.clone(),
    };
    let inputs = io::sha256_hex(format!("{}:{}", mats.content_hash, gram_art.content_hash).as_bytes());
    let art = Artifact::new(REPORT_SCHEMA, inputs, payload);
    art.write(&cli.path("report.json"))?;
    let text = format!("{report}\n");
    io::write_file(&cli.path("report.txt"), &text)?;
    print!("{text}");
    if !stored_matches {
        return Err(Failure::Verification("stored Gram matrix differs from the rebuilt one".into()));
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification("at least one check failed".into()))
    }
}

fn cmd_export(cli: &Cli, format: Format) -> Result<(), Failure> {
    let (mats, _) = matrices(cli)?;
    let gram_art = gram_file(cli, &mats)?;
    let p = &mats.payload;
    let tables = [
        ("lambda_s", &p.lambda_s),
        ("lambda_t", &p.lambda_t),
        ("lambda_u", &p.lambda_u),
        ("lambda_z", &p.lambda_z),
        ("gram", &gram_art.payload.gram),
    ];
    let dir = cli.path("export");
    for (name, rows) in tables {
        let path = match format {
            Format::Json => {
                let path = dir.join(format!("{name}.json"));
                let input = if name == "gram" { &gram_art.content_hash } else { &mats.content_hash };
                Artifact::new(
                    MATRIX_SCHEMA,
                    input.clone(),
                    MatrixPayload { name: name.to_string(), rows: rows.clone() },
                )
                .write(&path)?;
                path
            }
            Format::Text => {
                let path = dir.join(format!("{name}.txt"));
                io::write_file(&path, &io::text_dump(name, rows))?;
                path
            }
        };
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if cli.points == 0 {
        return Err(Failure::Config("--points must be at least 1".into()));
    }
    if cli.det_mode == Mode::Probabilistic && cli.points < 20 {
        eprintln!("warning: fewer than 20 evaluation points per prime");
    }
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Config(e.to_string()))?;
    }
    match &cli.command {
        Command::Build => cmd_build(cli).map(|_| ()),
        Command::Gram => cmd_gram(cli).map(|_| ()),
        Command::Verify => cmd_verify(cli),
        Command::Export { format } => cmd_export(cli, *format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(m)) => {
            eprintln!("verification failure: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(m)) => {
            eprintln!("reducer budget exhausted: {m}");
            ExitCode::from(3)
        }
    }
}
