use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use equilibria::harness::{self, learning_trace, run, RunConfig, RunError, Task};
use equilibria::Error;
use serde_json::Value;

#[derive(Parser, Debug)]
#[command(name = "equilibria", version, about = "Solve games, run learning dynamics and coalition formation")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Numerical tolerance handed to solvers.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Exit with status 4 when an iterative method did not converge.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    /// Iteration trace (learning runs only).
    Csv,
}

#[derive(Args, Debug)]
struct GameArgs {
    /// Scenario name or path to a game file.
    game: String,
    /// Scenario parameters as a JSON object, e.g. '{"e": 0.3}'.
    #[arg(long)]
    params: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute a solution concept.
    Solve {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, value_enum, default_value_t = Concept::Ne)]
        concept: Concept,
        /// Status quo for bargaining, comma separated.
        #[arg(long, value_delimiter = ',')]
        status_quo: Option<Vec<f64>>,
        #[arg(long, default_value_t = 8)]
        max_support: usize,
        /// Grid points per coordinate for continuous bargaining.
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// Run a learning or adjustment procedure.
    Learn {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long, default_value_t = 1000)]
        iters: usize,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[arg(long, default_value_t = 0.0)]
        kappa: f64,
        #[arg(long, default_value_t = 0.1)]
        lambda: f64,
        /// Initial state as JSON (pure profile, real states, ...).
        #[arg(long)]
        init: Option<String>,
    },
    /// Coalition-game solution concepts.
    Coalition {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, value_enum)]
        solve: CoalitionSolve,
        /// Strong epsilon-core (relaxation scaled by coalition size).
        #[arg(long)]
        strong: bool,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Merge-and-split coalition formation.
    Formation {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, value_enum, default_value_t = Rule::Equal)]
        rule: Rule,
        #[arg(long, value_enum, default_value_t = Init::Singletons)]
        init: Init,
        /// JSON file with member lists, for `--init file`.
        #[arg(long)]
        init_file: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        max_group: usize,
        /// Shuffle merge/split candidates using the seed.
        #[arg(long)]
        shuffle: bool,
        #[arg(long, default_value_t = 10_000)]
        max_ops: usize,
    },
    /// Print a named scenario.
    Scenario {
        name: String,
        #[arg(long)]
        params: Option<String>,
    },
    /// Run a JSON list of run configurations.
    Batch {
        file: PathBuf,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        parallelism: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Concept {
    Ne,
    #[value(name = "mixed-2x2")]
    Mixed2x2,
    Support,
    ZeroSum,
    Poa,
    Ce,
    Cce,
    Nbs,
    Potential,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Algo {
    BrdSeq,
    BrdSim,
    Fp,
    Rl,
    Rm,
    Consensus,
    Repeated,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CoalitionSolve {
    Core,
    LeastCore,
    Shapley,
    ShapleyMc,
    Partition,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Rule {
    Equal,
    Shapley,
    Ntu,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Init {
    Singletons,
    Grand,
    File,
}

/// Failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Capacity { .. } => 3,
        Error::Io(_) => 2,
        e if e.is_validation() => 2,
        _ => 1,
    }
}

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        Failure { code: exit_code(&e.source), message: e.to_string() }
    }
}

fn parse_json(text: Option<&str>, what: &str) -> Result<Value, Failure> {
    match text {
        None => Ok(Value::Null),
        Some(t) => serde_json::from_str(t).map_err(|e| Failure::usage(format!("--{what}: {e}"))),
    }
}

fn base(cli: &Cli, game: &GameArgs, task: Task) -> Result<RunConfig, Failure> {
    let mut c = RunConfig::new(game.game.clone(), task);
    c.params = parse_json(game.params.as_deref(), "params")?;
    c.seed = cli.seed;
    c.tol = cli.tol;
    Ok(c)
}

fn build_config(cli: &Cli) -> Result<RunConfig, Failure> {
    Ok(match &cli.command {
        Command::Solve { game, concept, status_quo, max_support, grid } => {
            let task = match concept {
                Concept::Ne => Task::Ne,
                Concept::Mixed2x2 => Task::Mixed2x2,
                Concept::Support => Task::Support,
                Concept::ZeroSum => Task::ZeroSum,
                Concept::Poa => Task::Poa,
                Concept::Ce => Task::Ce,
                Concept::Cce => Task::Cce,
                Concept::Nbs => Task::Nbs,
                Concept::Potential => Task::Potential,
            };
            RunConfig {
                status_quo: status_quo.clone(),
                max_support: *max_support,
                grid: *grid,
                ..base(cli, game, task)?
            }
        }
        Command::Learn { game, algo, iters, eps, kappa, lambda, init } => {
            let task = match algo {
                Algo::BrdSeq => Task::BrdSeq,
                Algo::BrdSim => Task::BrdSim,
                Algo::Fp => Task::Fp,
                Algo::Rl => Task::Rl,
                Algo::Rm => Task::Rm,
                Algo::Consensus => Task::Consensus,
                Algo::Repeated => Task::Repeated,
            };
            let init = parse_json(init.as_deref(), "init")?;
            RunConfig {
                iters: *iters,
                eps: *eps,
                kappa: *kappa,
                lambda: *lambda,
                init: (!init.is_null()).then_some(init),
                ..base(cli, game, task)?
            }
        }
        Command::Coalition { game, solve, strong, samples } => {
            let task = match solve {
                CoalitionSolve::Core => Task::Core,
                CoalitionSolve::LeastCore => Task::LeastCore,
                CoalitionSolve::Shapley => Task::Shapley,
                CoalitionSolve::ShapleyMc => Task::ShapleyMc,
                CoalitionSolve::Partition => Task::Partition,
            };
            RunConfig { strong: *strong, samples: *samples, ..base(cli, game, task)? }
        }
        Command::Formation { game, rule, init, init_file, max_group, shuffle, max_ops } => {
            let init = match init {
                Init::Singletons => Value::from("singletons"),
                Init::Grand => Value::from("grand"),
                Init::File => {
                    let path = init_file.as_ref().ok_or_else(|| Failure::usage("--init file needs --init-file"))?;
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
                    parse_json(Some(&text), "init-file")?
                }
            };
            let rule = match rule {
                Rule::Equal => "equal",
                Rule::Shapley => "shapley",
                Rule::Ntu => "ntu",
            };
            RunConfig {
                rule: rule.into(),
                init: Some(init),
                max_group: *max_group,
                shuffle: *shuffle,
                iters: *max_ops,
                ..base(cli, game, Task::Formation)?
            }
        }
        Command::Scenario { name, params } => base(
            cli,
            &GameArgs { game: name.clone(), params: params.clone() },
            Task::Describe,
        )?,
        Command::Batch { .. } => unreachable!("batch is handled separately"),
    })
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure { code: 1, message: format!("{}: {e}", path.display()) }),
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(Failure { code: 1, message: format!("stdout: {e}") })
                }
                _ => Ok(()),
            }
        }
    }
}

fn execute(cli: &Cli) -> Result<bool, Failure> {
    if let Command::Batch { file, parallelism } = &cli.command {
        let text = std::fs::read_to_string(file).map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
        let configs: Vec<RunConfig> =
            serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
        let records = harness::batch(&configs, *parallelism);
        let all_converged = records.iter().all(|r| r.converged != Some(false));
        let values: Vec<Value> = records
            .iter()
            .map(|r| serde_json::to_value(r).expect("records serialize"))
            .collect();
        emit(cli, &(harness::to_canonical_string(&Value::Array(values)) + "\n"))?;
        return Ok(all_converged);
    }
    let config = build_config(cli)?;
    if cli.format == Format::Csv {
        if !matches!(config.task, Task::BrdSeq | Task::BrdSim | Task::Fp | Task::Rl | Task::Rm | Task::Consensus) {
            return Err(Failure::usage("--format csv is only available for learning runs"));
        }
        let trace = learning_trace(&config)?;
        emit(cli, &trace.to_csv())?;
        return Ok(trace.converged);
    }
    let record = run(&config)?;
    emit(cli, &(record.to_canonical_json(true) + "\n"))?;
    Ok(record.converged != Some(false))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(converged) if cli.strict && !converged => {
            eprintln!("error: did not converge");
            ExitCode::from(4)
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
