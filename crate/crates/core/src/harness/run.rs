use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::io::{load_game, scenario, LoadedGame};
use super::{canonicalize, derive_seed};
use crate::coalition::{
    core_solve, least_epsilon_core, optimal_partition, shapley, shapley_monte_carlo, EpsilonCore, NTUGame, Partition,
};
use crate::dynamics::{
    brd_sequential, brd_sequential_continuous, brd_simultaneous, brd_simultaneous_continuous, bush_mosteller, consensus,
    fictitious_play, normalize_utilities, regret_matching, repeated_game_run, LearningTrace, RepeatedStrategy,
    StepSize, TraceState, TriggerStrategy, WeightSchedule,
};
use crate::error::{Error, Result};
use crate::formation::{merge_split_run, AllocationRule, CoalitionGame, MergeSplitConfig, ScanOrder};
use crate::game::{find_exact_potential, social_optimum, FiniteGame, MixedProfile, StrategicGame};
use crate::solvers::{
    enumerate_pure_ne, mixed_ne_2x2, nash_bargaining, optimize_over_equilibrium_set, support_enumeration_2p,
    zero_sum_value, BargainingArgument, BargainingDomain, EquilibriumConcept,
};

/// Operation a run dispatches to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    /// Pure Nash equilibria.
    Ne,
    #[serde(rename = "mixed-2x2")]
    Mixed2x2,
    Support,
    ZeroSum,
    Poa,
    /// Welfare-optimal correlated equilibrium.
    Ce,
    Cce,
    Nbs,
    Potential,
    BrdSeq,
    BrdSim,
    Fp,
    Rl,
    Rm,
    Consensus,
    Repeated,
    Core,
    LeastCore,
    Shapley,
    ShapleyMc,
    Partition,
    Formation,
    /// Echo the game itself.
    Describe,
}

impl Task {
    pub fn id(self) -> String {
        serde_json::to_value(self).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default()
    }
}

fn default_iters() -> usize {
    1000
}
fn default_lambda() -> f64 {
    0.1
}
fn default_samples() -> usize {
    10_000
}
fn default_tol() -> f64 {
    1e-9
}
fn default_max_support() -> usize {
    8
}
fn default_grid() -> usize {
    64
}
fn default_rule() -> String {
    "equal".into()
}
fn default_max_group() -> usize {
    2
}

/// One run: which game, which operation, and its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Scenario name, or a path to a game file.
    pub game: String,
    /// Scenario parameter overrides.
    #[serde(default)]
    pub params: Value,
    pub task: Task,
    #[serde(default = "default_iters")]
    pub iters: usize,
    #[serde(default)]
    pub eps: f64,
    #[serde(default)]
    pub kappa: f64,
    /// Bush–Mosteller step size.
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    /// Monte-Carlo samples.
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_support")]
    pub max_support: usize,
    /// Grid points per coordinate for continuous bargaining.
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default)]
    pub status_quo: Option<Vec<f64>>,
    /// Initial state: a pure profile, real states, `"singletons"`, `"grand"`,
    /// or a list of member lists, depending on the task.
    #[serde(default)]
    pub init: Option<Value>,
    /// Allocation rule for formation: `equal`, `shapley` or `ntu`.
    #[serde(default = "default_rule")]
    pub rule: String,
    #[serde(default = "default_max_group")]
    pub max_group: usize,
    /// Shuffle merge/split candidates with a seed derived from `seed`.
    #[serde(default)]
    pub shuffle: bool,
    /// Use the strong epsilon-core (relaxation scaled by coalition size).
    #[serde(default)]
    pub strong: bool,
    /// Where to write the CSV trace of a learning run.
    #[serde(default)]
    pub trace_out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(game: impl Into<String>, task: Task) -> Self {
        RunConfig {
            game: game.into(),
            params: Value::Null,
            task,
            iters: default_iters(),
            eps: 0.0,
            kappa: 0.0,
            lambda: default_lambda(),
            samples: default_samples(),
            seed: 0,
            tol: default_tol(),
            max_support: default_max_support(),
            grid: default_grid(),
            status_quo: None,
            init: None,
            rule: default_rule(),
            max_group: default_max_group(),
            shuffle: false,
            strong: false,
            trace_out: None,
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, x) in [("eps", self.eps), ("kappa", self.kappa), ("tol", self.tol)] {
            if !(x.is_finite() && x >= 0.0) {
                return Err(Error::InvalidArgument(format!("{name} = {x} must be finite and >= 0")));
            }
        }
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return Err(Error::InvalidArgument(format!("lambda = {} must lie in (0, 1)", self.lambda)));
        }
        Ok(())
    }
}

/// Outcome of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub config: RunConfig,
    pub task: String,
    /// Task-specific results; `null` when the run failed.
    pub outputs: Value,
    pub converged: Option<bool>,
    pub wall_time_ms: f64,
    pub error: Option<String>,
}

impl ResultRecord {
    /// Canonical JSON (sorted keys, 12 significant digits). Leaving out the
    /// wall time makes records of identical runs byte-identical.
    pub fn to_canonical_json(&self, with_time: bool) -> String {
        let mut v = serde_json::to_value(self).expect("records serialize");
        if !with_time {
            v.as_object_mut().expect("record is an object").remove("wall_time_ms");
        }
        serde_json::to_string_pretty(&canonicalize(&v)).expect("values serialize")
    }
}

/// A module error tagged with the run that raised it.
#[derive(Debug, Clone, PartialEq)]
pub struct RunError {
    pub game: String,
    pub task: Task,
    pub source: Error,
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on `{}`: {}", self.task.id(), self.game, self.source)
    }
}

impl std::error::Error for RunError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.source)
    }
}

/// Resolve the config's game: an existing file path, else a scenario name.
pub fn resolve_game(config: &RunConfig) -> Result<LoadedGame> {
    let path = std::path::Path::new(&config.game);
    if path.is_file() {
        load_game(path)
    } else if config.game.ends_with(".json") {
        Err(Error::Io(format!("{}: file not found", config.game)))
    } else {
        scenario(&config.game, &config.params)
    }
}

/// Execute one configuration. Deterministic given the config.
pub fn run(config: &RunConfig) -> std::result::Result<ResultRecord, RunError> {
    let start = Instant::now();
    let wrap = |source| RunError { game: config.game.clone(), task: config.task, source };
    config.validate().map_err(wrap)?;
    let game = resolve_game(config).map_err(wrap)?;
    let (outputs, converged) = dispatch(config, &game).map_err(wrap)?;
    Ok(ResultRecord {
        config: config.clone(),
        task: config.task.id(),
        outputs,
        converged,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        error: None,
    })
}

/// Run every config, `parallelism` at a time (0 = all cores). Results come
/// back in input order; a failing config yields a record with `error` set.
pub fn batch(configs: &[RunConfig], parallelism: usize) -> Vec<ResultRecord> {
    let work = || {
        configs
            .par_iter()
            .map(|c| {
                run(c).unwrap_or_else(|e| ResultRecord {
                    config: c.clone(),
                    task: c.task.id(),
                    outputs: Value::Null,
                    converged: None,
                    wall_time_ms: 0.0,
                    error: Some(e.to_string()),
                })
            })
            .collect()
    };
    match rayon::ThreadPoolBuilder::new().num_threads(parallelism).build() {
        Ok(pool) => pool.install(work),
        Err(_) => work(),
    }
}

/// `runs` copies of `template`, run `i` seeded with `derive_seed(master, i)`.
pub fn seeded_configs(template: &RunConfig, master: u64, runs: usize) -> Vec<RunConfig> {
    (0..runs)
        .map(|i| RunConfig { seed: derive_seed(master, i as u64), ..template.clone() })
        .collect()
}

fn finite(game: &LoadedGame) -> Result<&FiniteGame> {
    match game {
        LoadedGame::Finite(g) => Ok(g),
        other => Err(Error::InvalidArgument(format!("this task needs a finite game, got a {} game", other.kind()))),
    }
}

fn mixed_json(p: &MixedProfile) -> Value {
    json!(p.strategies())
}

fn pure_init(config: &RunConfig, players: usize) -> Result<Vec<usize>> {
    match &config.init {
        None => Ok(vec![0; players]),
        Some(v) => serde_json::from_value(v.clone())
            .map_err(|e| Error::invariant("init", format!("expected a list of action indices: {e}"))),
    }
}

fn state_json(state: &TraceState) -> Value {
    match state {
        TraceState::Pure(p) => json!(p),
        TraceState::Mixed(m) | TraceState::Continuous(m) => json!(m),
        TraceState::Scalar(v) => json!(v),
    }
}

fn trace_outputs(config: &RunConfig, game: &LoadedGame, trace: &LearningTrace) -> Result<(Value, Option<bool>)> {
    if let Some(path) = &config.trace_out {
        std::fs::write(path, trace.to_csv()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }
    let mut out = json!({
        "algorithm": trace.algorithm.id(),
        "iterations": trace.iterations,
        "final_state": state_json(trace.final_state()),
        "final_utilities": trace.records.last().map(|r| r.utilities.clone()),
    });
    if let Some(p) = trace.final_profile() {
        out["final_profile"] = json!(p);
        let actions = match game {
            LoadedGame::Finite(g) => g.action_counts().iter().copied().max().unwrap_or(0),
            LoadedGame::Congestion(g) => g.action_counts().iter().copied().max().unwrap_or(0),
            _ => p.iter().copied().max().map_or(0, |a| a + 1),
        };
        let occupancy: Vec<usize> = (0..actions).map(|a| p.iter().filter(|&&x| x == a).count()).collect();
        out["occupancy"] = json!(occupancy);
    }
    if let Some(q) = &trace.empirical_joint {
        out["empirical_joint"] = json!(q.probs());
    }
    Ok((out, Some(trace.converged)))
}

fn continuous_init(config: &RunConfig, game: &crate::game::ContinuousGame) -> Result<Vec<Vec<f64>>> {
    match &config.init {
        None => Ok(game.all_bounds().iter().map(|b| b.iter().map(|&(lo, _)| lo).collect()).collect()),
        Some(v) => serde_json::from_value(v.clone())
            .map_err(|e| Error::invariant("init", format!("expected one list of coordinates per player: {e}"))),
    }
}

/// Run a learning task and hand back its full trace.
pub fn learning_trace(config: &RunConfig) -> std::result::Result<LearningTrace, RunError> {
    let wrap = |source| RunError { game: config.game.clone(), task: config.task, source };
    config.validate().map_err(wrap)?;
    let game = resolve_game(config).map_err(wrap)?;
    learning(config, &game).map_err(wrap)
}

fn learning(config: &RunConfig, game: &LoadedGame) -> Result<LearningTrace> {
    Ok(match (config.task, game) {
        (Task::BrdSeq, LoadedGame::Finite(g)) => {
            brd_sequential(g, &pure_init(config, g.num_players())?, config.iters, config.seed)?
        }
        (Task::BrdSeq, LoadedGame::Congestion(g)) => {
            brd_sequential(g, &pure_init(config, g.num_players())?, config.iters, config.seed)?
        }
        (Task::BrdSim, LoadedGame::Finite(g)) => {
            brd_simultaneous(g, &pure_init(config, g.num_players())?, config.iters, config.kappa, config.seed)?
        }
        (Task::BrdSim, LoadedGame::Congestion(g)) => {
            brd_simultaneous(g, &pure_init(config, g.num_players())?, config.iters, config.kappa, config.seed)?
        }
        (Task::BrdSeq, g) => {
            let c = g.continuous()?;
            brd_sequential_continuous(&c, &continuous_init(config, &c)?, config.eps, config.iters)?
        }
        (Task::BrdSim, g) => {
            let c = g.continuous()?;
            brd_simultaneous_continuous(&c, &continuous_init(config, &c)?, config.eps, config.iters, config.kappa)?
        }
        (Task::Fp, g) => {
            let g = finite(g)?;
            fictitious_play(g, &pure_init(config, g.num_players())?, config.iters, config.seed)?
        }
        (Task::Rl, g) => {
            let g = normalize_utilities(finite(g)?);
            let init = MixedProfile::uniform(g.action_counts());
            bush_mosteller(&g, &init, StepSize::Constant(config.lambda), config.iters, config.seed)?
        }
        (Task::Rm, g) => regret_matching(finite(g)?, config.iters, config.seed)?,
        (Task::Consensus, LoadedGame::Network(net)) => {
            let init: Vec<f64> = match &config.init {
                None => (0..net.nodes()).map(|i| i as f64).collect(),
                Some(v) => serde_json::from_value(v.clone())
                    .map_err(|e| Error::invariant("init", format!("expected one real state per node: {e}")))?,
            };
            consensus(net, &init, config.eps, config.iters)?
        }
        (task, other) => {
            return Err(Error::InvalidArgument(format!(
                "task `{}` does not apply to a {} game",
                task.id(),
                other.kind()
            )))
        }
    })
}

fn repeated(config: &RunConfig, g: &FiniteGame) -> Result<(Value, Option<bool>)> {
    let agreed = match &config.init {
        Some(_) => pure_init(config, g.num_players())?,
        None => social_optimum(g)?.0,
    };
    let punishment = enumerate_pure_ne(g)?.into_iter().next().unwrap_or_else(|| vec![0; g.num_players()]);
    let plan = TriggerStrategy { agreed, punishment };
    let strategies: Vec<&dyn RepeatedStrategy> = vec![&plan; g.num_players()];
    let out = repeated_game_run(g, &strategies, WeightSchedule::RunningAverage, config.iters)?;
    Ok((
        json!({
            "utilities": out.utilities,
            "stages": out.history.len(),
            "agreed": plan.agreed,
            "punishment": plan.punishment,
        }),
        None,
    ))
}

fn formation(config: &RunConfig, game: &LoadedGame) -> Result<(Value, Option<bool>)> {
    let rule = match config.rule.as_str() {
        "equal" => AllocationRule::EqualSplit,
        "shapley" => AllocationRule::ShapleyWithinCoalition,
        "ntu" => AllocationRule::IdentityNtu,
        other => return Err(Error::InvalidArgument(format!("unknown allocation rule `{other}`"))),
    };
    let cfg = MergeSplitConfig {
        rule,
        max_group: config.max_group,
        order: if config.shuffle { ScanOrder::Shuffled(config.seed) } else { ScanOrder::Lexicographic },
        max_ops: config.iters,
        ..MergeSplitConfig::default()
    };
    let ntu;
    let tu;
    let view: CoalitionGame<'_> = match game {
        LoadedGame::Ctd(net) => {
            let net = net.clone();
            ntu = NTUGame::symmetric(net.stations(), move |c| crate::scenarios::ctd_value(&net, c as u64))?;
            (&ntu).into()
        }
        other => {
            tu = other.tu()?;
            (&tu).into()
        }
    };
    let k = view.players();
    let init = match &config.init {
        None => Partition::singletons(k)?,
        Some(Value::String(s)) if s == "singletons" => Partition::singletons(k)?,
        Some(Value::String(s)) if s == "grand" => Partition::grand(k)?,
        Some(v) => {
            let groups: Vec<Vec<usize>> = serde_json::from_value(v.clone()).map_err(|e| {
                Error::invariant("init", format!("expected \"singletons\", \"grand\" or member lists: {e}"))
            })?;
            Partition::from_members(k, &groups)?
        }
    };
    let state = merge_split_run(view, &cfg, init)?;
    let history: Vec<Value> = state
        .history
        .iter()
        .map(|op| {
            let (kind, from, into) = match &op.kind {
                crate::formation::OperationKind::Merge { from, into } => ("merge", from.clone(), vec![*into]),
                crate::formation::OperationKind::Split { from, into } => ("split", vec![*from], into.clone()),
            };
            let lists = |cs: &[u32]| cs.iter().map(|&c| crate::coalition::members(c)).collect::<Vec<_>>();
            json!({
                "op": kind,
                "from": lists(&from),
                "into": lists(&into),
                "players": op.players,
                "before": op.before,
                "after": op.after,
            })
        })
        .collect();
    Ok((
        json!({
            "partition": state.partition.member_lists(),
            "payoffs": state.payoffs,
            "operations": state.history.len(),
            "history": history,
        }),
        Some(state.converged),
    ))
}

fn dispatch(config: &RunConfig, game: &LoadedGame) -> Result<(Value, Option<bool>)> {
    match config.task {
        Task::Ne => {
            let eqs = match game {
                LoadedGame::Congestion(g) => {
                    return Err(Error::capacity("pure profiles to enumerate", 2u128.pow(g.num_players() as u32), crate::game::MAX_PROFILES))
                }
                g => enumerate_pure_ne(finite(g)?)?,
            };
            Ok((json!({ "equilibria": eqs }), None))
        }
        Task::Mixed2x2 => {
            let eqs = mixed_ne_2x2(finite(game)?)?;
            Ok((json!({ "equilibria": eqs.iter().map(mixed_json).collect::<Vec<_>>() }), None))
        }
        Task::Support => {
            let eqs = support_enumeration_2p(finite(game)?, config.max_support)?;
            Ok((json!({ "equilibria": eqs.iter().map(mixed_json).collect::<Vec<_>>() }), None))
        }
        Task::ZeroSum => {
            let s = zero_sum_value(finite(game)?)?;
            Ok((
                json!({ "value": s.value, "strategies": mixed_json(&s.profile), "security": [s.security.0, s.security.1] }),
                None,
            ))
        }
        Task::Poa => {
            let g = finite(game)?;
            let eqs = enumerate_pure_ne(g)?;
            let poa = crate::game::price_of_anarchy(g, &eqs)?;
            let (opt, welfare) = social_optimum(g)?;
            Ok((
                json!({ "value": super::number_json(poa), "social_optimum": opt, "optimal_welfare": welfare, "equilibria": eqs }),
                None,
            ))
        }
        Task::Ce | Task::Cce => {
            let g = finite(game)?;
            let concept = if config.task == Task::Ce { EquilibriumConcept::Correlated } else { EquilibriumConcept::CoarseCorrelated };
            let w = vec![1.0; g.num_players()];
            let opt = optimize_over_equilibrium_set(g, &w, concept)?;
            Ok((json!({ "welfare": opt.welfare, "utilities": opt.utilities, "distribution": opt.q.probs() }), None))
        }
        Task::Nbs => {
            let sq = config
                .status_quo
                .clone()
                .ok_or_else(|| Error::InvalidArgument("bargaining needs a status quo".into()))?;
            let continuous;
            let domain = match game {
                LoadedGame::Finite(g) => BargainingDomain::Finite(g),
                other => {
                    continuous = other.continuous()?;
                    BargainingDomain::Continuous(&continuous)
                }
            };
            let r = nash_bargaining(domain, &sq, config.grid)?;
            let argument = match &r.argument {
                BargainingArgument::Pure(p) => json!(p),
                BargainingArgument::Point(x) => json!(x),
            };
            Ok((json!({ "argument": argument, "utilities": r.utilities, "nash_product": r.nash_product }), None))
        }
        Task::Potential => {
            let cert = find_exact_potential(finite(game)?, config.tol);
            Ok((json!({ "exact": cert.is_some(), "values": cert.map(|c| c.values().to_vec()) }), None))
        }
        Task::BrdSeq | Task::BrdSim | Task::Fp | Task::Rl | Task::Rm | Task::Consensus => {
            trace_outputs(config, game, &learning(config, game)?)
        }
        Task::Repeated => repeated(config, finite(game)?),
        Task::Core => {
            let s = core_solve(&game.tu()?)?;
            Ok((json!({ "nonempty": s.nonempty, "lp_value": s.lp_value, "allocation": s.allocation }), None))
        }
        Task::LeastCore => {
            let variant = if config.strong { EpsilonCore::Strong } else { EpsilonCore::Weak };
            let lc = least_epsilon_core(&game.tu()?, variant)?;
            Ok((json!({ "epsilon": lc.epsilon, "allocation": lc.allocation }), None))
        }
        Task::Shapley => Ok((json!({ "values": shapley(&game.tu()?)? }), None)),
        Task::ShapleyMc => {
            let est = shapley_monte_carlo(&game.tu()?, config.samples, config.seed)?;
            Ok((json!({ "values": est.values, "std_errors": est.std_errors, "samples": est.samples }), None))
        }
        Task::Partition => {
            let tu = game.tu()?;
            let (p, total) = optimal_partition(&tu)?;
            Ok((json!({ "partition": p.member_lists(), "total": total }), None))
        }
        Task::Formation => formation(config, game),
        Task::Describe => {
            let v = match game {
                LoadedGame::Finite(_) | LoadedGame::Tu(_) | LoadedGame::Channel(_) | LoadedGame::Ctd(_) => {
                    super::io::save_game(game)?
                }
                LoadedGame::Congestion(g) => json!({ "players": g.num_players(), "rates": g.rates() }),
                LoadedGame::Continuous(g) => json!({ "players": g.num_players(), "bounds": g.all_bounds() }),
                LoadedGame::Network(n) => json!({
                    "nodes": n.nodes(),
                    "edges": (0..n.nodes()).flat_map(|k| n.neighbors(k).iter().map(move |&(j, b)| json!([k, j, b]))).collect::<Vec<_>>(),
                }),
            };
            Ok((json!({ "kind": game.kind(), "game": v }), None))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poa_of_cr_dilemma() {
        let r = run(&RunConfig::new("cr-dilemma", Task::Poa)).unwrap();
        assert_eq!(r.outputs["value"], json!(3.0));
    }

    #[test]
    fn ducks_settle_with_eleven_slow() {
        let cfg = RunConfig { seed: 7, iters: 200, ..RunConfig::new("ducks", Task::BrdSeq) };
        let r = run(&cfg).unwrap();
        assert_eq!(r.converged, Some(true));
        assert_eq!(r.outputs["occupancy"], json!([22, 11]));
    }

    #[test]
    fn identical_runs_identical_records() {
        let cfg = RunConfig { iters: 300, seed: 5, ..RunConfig::new("sensor-dilemma", Task::Rm) };
        let a = run(&cfg).unwrap();
        let b = run(&cfg).unwrap();
        assert_eq!(a.to_canonical_json(false), b.to_canonical_json(false));
    }

    #[test]
    fn batch_keeps_order_and_isolates_failures() {
        let configs = vec![
            RunConfig::new("cr-dilemma", Task::Ne),
            RunConfig::new("no-such-scenario", Task::Ne),
            RunConfig::new("majority", Task::Shapley),
        ];
        let out = batch(&configs, 2);
        assert_eq!(out.len(), 3);
        assert!(out[0].error.is_none() && out[2].error.is_none());
        assert!(out[1].error.is_some());
        assert_eq!(out[2].task, "shapley");
        assert!(batch(&[], 1).is_empty());
    }

    #[test]
    fn seeds_derived_per_index() {
        let cs = seeded_configs(&RunConfig::new("cr-dilemma", Task::Rm), 42, 3);
        assert_eq!(cs[1].seed, derive_seed(42, 1));
        assert_ne!(cs[0].seed, cs[1].seed);
    }

    #[test]
    fn record_round_trips() {
        let r = run(&RunConfig::new("majority", Task::Core)).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        let back: ResultRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn task_ids() {
        assert_eq!(Task::BrdSeq.id(), "brd-seq");
        assert_eq!(Task::Mixed2x2.id(), "mixed-2x2");
    }
}
