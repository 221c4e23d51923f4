use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fvs_core::instances::{self, GraphFile};
use fvs_core::measure::{parse_decimal, MeasureParams};
use fvs_core::oracle::brute_force_min_fvs;
use fvs_core::reduction::Instance;
use fvs_core::solver::{
    solve_decision, solve_minimum, ChildOrder, PruneMode, SearchStats, SolverConfig, SubcubicMode,
    TieBreak,
};
use fvs_core::verifier::verify_all;
use fvs_core::Vertex;

/// Exit code of `solve --k` when no solution of that size exists.
const EXIT_NO: u8 = 20;
const EXIT_USAGE: u8 = 2;
const EXIT_AUDIT: u8 = 3;

#[derive(Parser)]
#[command(name = "fvs", version, about = "Exact feedback vertex set solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance; with --k, decide whether a solution of size <= k exists.
    Solve {
        file: PathBuf,
        #[arg(long)]
        k: Option<i64>,
        #[command(flatten)]
        solver: SolverArgs,
        /// Check the measure analysis at every search node.
        #[arg(long)]
        assert_measure: bool,
        /// Parameters used by --assert-measure.
        #[arg(long, default_value = "mc")]
        preset: String,
    },
    /// Minimum solution by exhaustive subset enumeration (small instances only).
    Oracle { file: PathBuf },
    /// Check the branching inequalities for a parameter set.
    VerifyParams {
        #[arg(long, conflicts_with = "file")]
        preset: Option<String>,
        /// Parameter file with `alpha=`, `c=` and `beta <d> <value>` lines.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Override the base c.
        #[arg(long)]
        c: Option<String>,
        /// Override alpha.
        #[arg(long)]
        alpha: Option<String>,
        /// Override one beta value, as `<degree>=<value>`; repeatable.
        #[arg(long = "beta")]
        betas: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Generate an instance file on stdout.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Solve every instance in a directory and print a CSV table.
    Bench {
        dir: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Write the table here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// `m` edges drawn uniformly with replacement over vertex pairs.
    Gnm {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// A random forest plus `k_extra` vertices wired into it.
    Planted {
        #[arg(long)]
        n_forest: u32,
        #[arg(long)]
        k_extra: u32,
        #[arg(long, default_value_t = 4)]
        extra_degree: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value = "weak")]
    prune: PruneMode,
    #[arg(long, default_value = "branch")]
    subcubic: SubcubicMode,
    #[arg(long, default_value = "delete-first")]
    order: ChildOrder,
    #[arg(long, default_value = "lowest-id")]
    tie_break: TieBreak,
}

impl SolverArgs {
    fn config(&self, audit: Option<MeasureParams>) -> SolverConfig {
        SolverConfig {
            prune: self.prune,
            subcubic: self.subcubic,
            child_order: self.order,
            tie_break: self.tie_break,
            audit,
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Solve {
            file,
            k,
            solver,
            assert_measure,
            preset,
        } => {
            let audit = if assert_measure {
                Some(MeasureParams::preset(&preset).map_err(|e| e.to_string())?)
            } else {
                None
            };
            solve(&read_graph(&file)?, k, &solver.config(audit))
        }
        Command::Oracle { file } => {
            let input = read_graph(&file)?;
            let found =
                brute_force_min_fvs(&input.graph, &input.undeletable).map_err(|e| e.to_string())?;
            let mut out = io::stdout().lock();
            match found {
                Some(solution) => print_solution(&mut out, &solution.vertices),
                None => writeln!(out, "NO"),
            }
            .map_err(|e| e.to_string())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyParams {
            preset,
            file,
            c,
            alpha,
            betas,
            json,
        } => {
            let params = load_params(preset, file, c, alpha, &betas)?;
            let report = verify_all(&params);
            if json {
                let text = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
                println!("{text}");
            } else {
                println!("{report}");
            }
            Ok(if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Gen(command) => {
            let (graph, comment) = match command {
                GenCommand::Gnm { n, m, seed } => {
                    let seed = env_seed(seed)?;
                    (
                        instances::gen_gnm(n, m, seed),
                        format!("# gnm n={n} m={m} seed={seed}"),
                    )
                }
                GenCommand::Planted {
                    n_forest,
                    k_extra,
                    extra_degree,
                    seed,
                } => {
                    let seed = env_seed(seed)?;
                    let (graph, bound) =
                        instances::gen_planted(n_forest, k_extra, extra_degree, seed);
                    let comment = format!(
                        "# planted n_forest={n_forest} k_extra={k_extra} extra_degree={extra_degree} seed={seed}\n# planted bound {bound}"
                    );
                    (graph, comment)
                }
            };
            let file = GraphFile {
                graph,
                undeletable: Default::default(),
            };
            print!("{comment}\n{}", instances::serialize(&file));
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench { dir, solver, out } => {
            let report = instances::bench(&dir, &solver.config(None)).map_err(|e| e.to_string())?;
            match out {
                Some(path) => {
                    let file = fs::File::create(&path)
                        .map_err(|e| format!("cannot create {}: {e}", path.display()))?;
                    report.write_csv(file)
                }
                None => report.write_csv(io::stdout().lock()),
            }
            .map_err(|e| e.to_string())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn read_graph(path: &Path) -> Result<GraphFile, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    instances::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn solve(input: &GraphFile, k: Option<i64>, config: &SolverConfig) -> Result<ExitCode, String> {
    let (found, stats) = match k {
        Some(k) => {
            let inst = Instance::new(input.graph.clone(), input.undeletable.clone(), k)
                .map_err(|e| e.to_string())?;
            solve_decision(inst, config)
        }
        None => {
            solve_minimum(&input.graph, &input.undeletable, config).map_err(|e| e.to_string())?
        }
    };
    let mut out = io::stdout().lock();
    let write = |out: &mut io::StdoutLock| -> io::Result<()> {
        match &found {
            Some(solution) => print_solution(out, &solution.vertices)?,
            None => writeln!(out, "NO")?,
        }
        print_stats(out, config, &stats)
    };
    write(&mut out).map_err(|e| e.to_string())?;

    let violations = stats.audit.as_ref().map_or(0, |a| a.violations());
    if violations > 0 {
        eprintln!("measure audit: {violations} violations");
        return Ok(ExitCode::from(EXIT_AUDIT));
    }
    Ok(if found.is_some() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NO)
    })
}

/// Size on the first line, then the 1-based ids one per line.
fn print_solution<'a>(
    out: &mut impl Write,
    vertices: impl IntoIterator<Item = &'a Vertex, IntoIter: ExactSizeIterator>,
) -> io::Result<()> {
    let vertices = vertices.into_iter();
    writeln!(out, "{}", vertices.len())?;
    for v in vertices {
        writeln!(out, "{}", v + 1)?;
    }
    Ok(())
}

fn print_stats(out: &mut impl Write, config: &SolverConfig, stats: &SearchStats) -> io::Result<()> {
    writeln!(out, "# stats")?;
    writeln!(out, "# config {}", config.describe())?;
    for line in stats.to_string().lines() {
        writeln!(out, "# {line}")?;
    }
    Ok(())
}

fn env_seed(default: u64) -> Result<u64, String> {
    match std::env::var("FVS_SEED") {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| format!("FVS_SEED is not an unsigned integer: {text:?}")),
        Err(_) => Ok(default),
    }
}

fn load_params(
    preset: Option<String>,
    file: Option<PathBuf>,
    c: Option<String>,
    alpha: Option<String>,
    betas: &[String],
) -> Result<MeasureParams, String> {
    let mut params = match file {
        Some(path) => {
            let text = fs::read_to_string(&path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let name = path
                .file_stem()
                .map_or("file".into(), |s| s.to_string_lossy());
            MeasureParams::parse(name, &text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => {
            MeasureParams::preset(preset.as_deref().unwrap_or("mc")).map_err(|e| e.to_string())?
        }
    };
    let mut changed = vec![];
    let decimal =
        |text: &str| parse_decimal(text).ok_or_else(|| format!("not a decimal: {text:?}"));
    if let Some(c) = c {
        params = params.with_c(decimal(&c)?).map_err(|e| e.to_string())?;
        changed.push(format!("c={c}"));
    }
    if let Some(alpha) = alpha {
        params = params
            .with_alpha(decimal(&alpha)?)
            .map_err(|e| e.to_string())?;
        changed.push(format!("alpha={alpha}"));
    }
    for beta in betas {
        let (degree, value) = beta
            .split_once('=')
            .ok_or_else(|| format!("--beta expects <degree>=<value>, got {beta:?}"))?;
        let degree: usize = degree
            .trim()
            .parse()
            .map_err(|_| format!("bad degree in --beta {beta:?}"))?;
        params = params
            .with_beta(degree, decimal(value.trim())?)
            .map_err(|e| e.to_string())?;
        changed.push(format!("beta{degree}={}", value.trim()));
    }
    if !changed.is_empty() {
        let name = format!("{} ({})", params.name(), changed.join(", "));
        params = params.with_name(name);
    }
    Ok(params)
}
