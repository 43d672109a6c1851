use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use sparsequad::model::DiffusionConfig;
use sparsequad::study::{
    compute_reference, grid_csv, indexset_stats_csv, parse_weight_file, rule_csv, run_convergence_study_with,
    run_indexset_report, sparse_estimate, write_reference, LevelSchedule, Problem, ProblemSpec, ReferenceSpec,
    StudyConfig, WeightMode,
};
use sparsequad::{build_family, Error};

#[derive(Parser)]
#[command(name = "sparsequad", version, about = "Anisotropic sparse grid quadrature experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Nodes and weights of the level-J Gauss-Legendre rule.
    Rules {
        #[arg(long)]
        level: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Index-set statistics.
    Indexset {
        #[command(subcommand)]
        command: IndexsetCommand,
    },
    /// Quasi-Monte Carlo references.
    Qmc {
        #[command(subcommand)]
        command: QmcCommand,
    },
    /// Convergence studies.
    Converge {
        #[command(subcommand)]
        command: ConvergeCommand,
    },
}

#[derive(Subcommand)]
enum IndexsetCommand {
    /// Cardinalities, bounds and costs per level.
    Stats {
        /// One weight per line.
        #[arg(long)]
        weights: PathBuf,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        q_max: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        q_step: f64,
        /// Decay rate used by the log(m)^{q/r} column.
        #[arg(long, default_value_t = 2.0)]
        r: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemKind {
    Analytic,
    Diffusion,
}

#[derive(Subcommand)]
enum QmcCommand {
    /// Halton reference vector, one value per line.
    Reference {
        #[arg(long, value_enum)]
        problem: ProblemKind,
        #[command(flatten)]
        analytic: AnalyticArgs,
        #[command(flatten)]
        diffusion: DiffusionArgs,
        #[arg(long)]
        log2_n: u32,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum ConvergeCommand {
    Analytic {
        #[command(flatten)]
        problem: AnalyticArgs,
        #[command(flatten)]
        study: StudyArgs,
    },
    Diffusion {
        #[command(flatten)]
        problem: DiffusionArgs,
        #[command(flatten)]
        study: StudyArgs,
        /// Writes the points and weights of the finest sparse grid.
        #[arg(long)]
        dump_grid: Option<PathBuf>,
    },
}

#[derive(Args)]
struct AnalyticArgs {
    #[arg(long, default_value_t = 2.0)]
    r: f64,
    #[arg(long, default_value_t = 10)]
    m: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightModeArg {
    Tensor,
    Theoretical,
}

#[derive(Args)]
struct DiffusionArgs {
    #[arg(long, default_value_t = 2.5)]
    nu: f64,
    #[arg(long, default_value_t = 0.5)]
    ell: f64,
    #[arg(long, default_value_t = 2.5)]
    mean: f64,
    /// Mesh size 2^{-h-exp}.
    #[arg(long, default_value_t = 9)]
    h_exp: u32,
    #[arg(long, default_value_t = 1e-8)]
    trace_tol: f64,
    /// Highest moment order.
    #[arg(long, default_value_t = 4)]
    moments: u32,
    #[arg(long, value_enum, default_value_t = WeightModeArg::Tensor)]
    weight_mode: WeightModeArg,
    /// Exponent δ of the theoretical weight mode.
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
}

#[derive(Args)]
struct StudyArgs {
    #[arg(long, default_value_t = 1.0)]
    q0: f64,
    #[arg(long)]
    q_max: f64,
    #[arg(long, default_value_t = 1.0)]
    q_step: f64,
    /// Self-reference level.
    #[arg(long, group = "reference_source")]
    q_ref: Option<f64>,
    /// QMC reference with 2^K samples.
    #[arg(long, group = "reference_source")]
    qmc_log2_n: Option<u32>,
    /// Reference file written by `qmc reference`.
    #[arg(long, group = "reference_source")]
    reference: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl AnalyticArgs {
    fn spec(&self) -> ProblemSpec {
        ProblemSpec::Analytic { r: self.r, m: self.m }
    }
}

impl DiffusionArgs {
    fn spec(&self) -> ProblemSpec {
        ProblemSpec::Diffusion {
            config: DiffusionConfig {
                nu: self.nu,
                ell: self.ell,
                mean: self.mean,
                grid_exponent: self.h_exp,
                trace_tol: self.trace_tol,
            },
            moments: self.moments,
            weight_mode: match self.weight_mode {
                WeightModeArg::Tensor => WeightMode::Tensor,
                WeightModeArg::Theoretical => WeightMode::Theoretical { delta: self.delta },
            },
        }
    }
}

impl StudyArgs {
    fn config(&self, problem: ProblemSpec) -> anyhow::Result<StudyConfig> {
        let reference = match (self.q_ref, self.qmc_log2_n, &self.reference) {
            (Some(q_ref), None, None) => ReferenceSpec::Sparse { q_ref },
            (None, Some(log2_n), None) => ReferenceSpec::Qmc { log2_n },
            (None, None, Some(path)) => ReferenceSpec::File(path.clone()),
            (None, None, None) => ReferenceSpec::Sparse { q_ref: self.q_max + 8.0 },
            _ => bail!(Error::InvalidArgument("give at most one reference".into())),
        };
        Ok(StudyConfig {
            problem,
            schedule: LevelSchedule {
                start: self.q0,
                stop: self.q_max,
                step: self.q_step,
            },
            reference,
        })
    }
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn converge(config: &StudyConfig, out: Option<&Path>, dump_grid: Option<&Path>) -> anyhow::Result<()> {
    let levels = config.validate()?;
    let problem = Problem::new(&config.problem)?;
    let reference = compute_reference(&problem, &config.problem, &config.reference)?;
    let report = run_convergence_study_with(&problem, &levels, &reference)?;
    if let Some(path) = dump_grid {
        let q_max = levels.last().copied().unwrap_or(0.0);
        let (quad, _) = sparse_estimate(&problem, &problem.weights()?, q_max)?;
        fs::write(path, grid_csv(&quad)).with_context(|| format!("writing {}", path.display()))?;
    }
    emit(out, &report.to_csv())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Rules { level, out } => emit(out.as_deref(), &rule_csv(&build_family(level), level)),
        Command::Indexset {
            command:
                IndexsetCommand::Stats {
                    weights,
                    q,
                    q_max,
                    q_step,
                    r,
                    out,
                },
        } => {
            let text = fs::read_to_string(&weights).map_err(|source| Error::Io {
                path: weights.clone(),
                source,
            })?;
            let w = parse_weight_file(&text)?;
            let schedule = LevelSchedule {
                start: q,
                stop: q_max.unwrap_or(q),
                step: q_step,
            };
            let rows = run_indexset_report(&w, &schedule, r, false)?;
            emit(out.as_deref(), &indexset_stats_csv(&rows))
        }
        Command::Qmc {
            command:
                QmcCommand::Reference {
                    problem,
                    analytic,
                    diffusion,
                    log2_n,
                    out,
                },
        } => {
            let spec = match problem {
                ProblemKind::Analytic => analytic.spec(),
                ProblemKind::Diffusion => diffusion.spec(),
            };
            let instance = Problem::new(&spec)?;
            let reference = compute_reference(&instance, &spec, &ReferenceSpec::Qmc { log2_n })?;
            write_reference(&out, &reference)?;
            Ok(())
        }
        Command::Converge {
            command: ConvergeCommand::Analytic { problem, study },
        } => converge(&study.config(problem.spec())?, study.out.as_deref(), None),
        Command::Converge {
            command: ConvergeCommand::Diffusion {
                problem,
                study,
                dump_grid,
            },
        } => converge(&study.config(problem.spec())?, study.out.as_deref(), dump_grid.as_deref()),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(e) if e.is_numerical_guard() => 3,
        Some(Error::InvalidArgument(_)) | Some(Error::LevelOverflow { .. }) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
