//! Merge-and-split coalition formation under the Pareto order.
//!
//! Players start in some partition. A group of coalitions merges when the
//! merged coalition pays every member at least as much as before and some
//! member strictly more; a coalition splits under the same condition. The
//! run alternates merges and splits until neither applies.

use std::cell::RefCell;
use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coalition::{
    check_players, members, optimal_partition, Coalition, NTUGame, Partition, TUGame, MAX_LP_PLAYERS,
};
use crate::error::{Error, Result};
use crate::harness::derive_seed;

/// Margin by which at least one participant must gain.
pub const PARETO_MARGIN: f64 = 1e-12;

/// True iff `new >= old` everywhere and `new > old + PARETO_MARGIN` somewhere.
pub fn pareto_preferred(new: &[f64], old: &[f64]) -> Result<bool> {
    if new.len() != old.len() {
        return Err(Error::Shape(format!("comparing {} payoffs with {}", new.len(), old.len())));
    }
    Ok(new.iter().zip(old).all(|(a, b)| a >= b) && new.iter().zip(old).any(|(a, b)| *a > b + PARETO_MARGIN))
}

/// How a coalition's worth becomes member payoffs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AllocationRule {
    /// `v(C) / |C|` each (TU games).
    #[default]
    EqualSplit,
    /// Shapley value of the game restricted to `C` (TU games).
    ShapleyWithinCoalition,
    /// The NTU evaluator's vector; on a TU game every member receives `v(C)`.
    IdentityNtu,
}

impl AllocationRule {
    pub fn id(self) -> &'static str {
        match self {
            AllocationRule::EqualSplit => "equal",
            AllocationRule::ShapleyWithinCoalition => "shapley",
            AllocationRule::IdentityNtu => "ntu",
        }
    }
}

/// The game a formation process runs on.
#[derive(Debug, Clone, Copy)]
pub enum CoalitionGame<'a> {
    Tu(&'a TUGame),
    Ntu(&'a NTUGame),
}

impl<'a> From<&'a TUGame> for CoalitionGame<'a> {
    fn from(g: &'a TUGame) -> Self {
        CoalitionGame::Tu(g)
    }
}

impl<'a> From<&'a NTUGame> for CoalitionGame<'a> {
    fn from(g: &'a NTUGame) -> Self {
        CoalitionGame::Ntu(g)
    }
}

impl CoalitionGame<'_> {
    pub fn players(&self) -> usize {
        match self {
            CoalitionGame::Tu(g) => g.players(),
            CoalitionGame::Ntu(g) => g.players(),
        }
    }
}

fn restricted_shapley(game: &TUGame, c: Coalition) -> Vec<f64> {
    let m = members(c);
    let n = m.len();
    let weight: Vec<f64> = (0..n)
        .map(|s| {
            let mut w = 1.0 / n as f64;
            for j in 1..=s {
                w *= j as f64 / (n - s + j - 1) as f64;
            }
            w
        })
        .collect();
    let mut phi = vec![0.0; n];
    for sub in 0..1u32 << n {
        let mask: Coalition = m.iter().enumerate().filter(|&(b, _)| sub >> b & 1 == 1).fold(0, |a, (_, &i)| a | 1 << i);
        let s = sub.count_ones() as usize;
        let base = game.value(mask);
        for (b, &i) in m.iter().enumerate() {
            if sub >> b & 1 == 0 {
                phi[b] += weight[s] * (game.value(mask | 1 << i) - base);
            }
        }
    }
    phi
}

/// Member payoffs of a coalition under `rule`, in ascending member order.
pub fn coalition_payoffs(game: CoalitionGame<'_>, rule: AllocationRule, c: Coalition) -> Result<Vec<f64>> {
    match (game, rule) {
        (CoalitionGame::Tu(g), AllocationRule::EqualSplit) => {
            let n = c.count_ones() as usize;
            Ok(vec![g.value(c) / n as f64; n])
        }
        (CoalitionGame::Tu(g), AllocationRule::ShapleyWithinCoalition) => {
            check_players(c.count_ones() as usize, MAX_LP_PLAYERS)?;
            Ok(restricted_shapley(g, c))
        }
        (CoalitionGame::Tu(g), AllocationRule::IdentityNtu) => Ok(vec![g.value(c); c.count_ones() as usize]),
        (CoalitionGame::Ntu(g), AllocationRule::IdentityNtu) => g.payoffs(c),
        (CoalitionGame::Ntu(_), rule) => Err(Error::InvalidArgument(format!(
            "allocation rule `{}` needs a transferable-utility game",
            rule.id()
        ))),
    }
}

/// Order in which merge and split candidates are tried.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScanOrder {
    #[default]
    Lexicographic,
    /// Candidates shuffled before every scan, with a seed derived from this
    /// one and the number of operations applied so far.
    Shuffled(u64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MergeSplitConfig {
    pub rule: AllocationRule,
    /// Most coalitions that may merge in one operation (2 to 4).
    pub max_group: usize,
    /// Also try splitting coalitions of at most 6 players into three or more
    /// parts. Coalitions above 12 players are then rejected with a
    /// capacity error.
    pub full_split: bool,
    pub order: ScanOrder,
    /// Cap on applied operations.
    pub max_ops: usize,
}

impl Default for MergeSplitConfig {
    fn default() -> Self {
        MergeSplitConfig {
            rule: AllocationRule::EqualSplit,
            max_group: 2,
            full_split: true,
            order: ScanOrder::Lexicographic,
            max_ops: 10_000,
        }
    }
}

impl MergeSplitConfig {
    pub fn with_rule(rule: AllocationRule) -> Self {
        MergeSplitConfig { rule, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(2..=4).contains(&self.max_group) {
            return Err(Error::InvalidArgument(format!("max_group = {} must be between 2 and 4", self.max_group)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OperationKind {
    Merge { from: Vec<Coalition>, into: Coalition },
    Split { from: Coalition, into: Vec<Coalition> },
}

/// One applied (or applicable) operation with its participants' payoffs.
#[derive(Debug, Clone, PartialEq)]
pub struct Operation {
    pub kind: OperationKind,
    /// Participants, ascending.
    pub players: Vec<usize>,
    pub before: Vec<f64>,
    pub after: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormationState {
    pub partition: Partition,
    /// Payoff of every player under the current partition and rule.
    pub payoffs: Vec<f64>,
    pub history: Vec<Operation>,
    pub converged: bool,
}

impl FormationState {
    /// Every player is paid according to `rule` for its coalition in `partition`.
    pub fn new(game: CoalitionGame<'_>, rule: AllocationRule, partition: Partition) -> Result<Self> {
        if partition.players() != game.players() {
            return Err(Error::Shape(format!(
                "partition of {} players for a game of {}",
                partition.players(),
                game.players()
            )));
        }
        let mut payoffs = vec![0.0; game.players()];
        for &c in partition.coalitions() {
            for (i, x) in members(c).into_iter().zip(coalition_payoffs(game, rule, c)?) {
                payoffs[i] = x;
            }
        }
        Ok(FormationState { partition, payoffs, history: Vec::new(), converged: false })
    }

    fn apply(&mut self, op: Operation) -> Result<()> {
        let mut coalitions: Vec<Coalition> = self.partition.coalitions().to_vec();
        match &op.kind {
            OperationKind::Merge { from, into } => {
                coalitions.retain(|c| !from.contains(c));
                coalitions.push(*into);
            }
            OperationKind::Split { from, into } => {
                coalitions.retain(|c| c != from);
                coalitions.extend(into);
            }
        }
        self.partition = Partition::new(self.partition.players(), coalitions)?;
        for (&i, &x) in op.players.iter().zip(&op.after) {
            self.payoffs[i] = x;
        }
        self.history.push(op);
        Ok(())
    }
}

/// Memoized coalition payoffs for one game and rule.
struct Payoffs<'a> {
    game: CoalitionGame<'a>,
    rule: AllocationRule,
    cache: RefCell<HashMap<Coalition, Vec<f64>>>,
}

impl<'a> Payoffs<'a> {
    fn new(game: CoalitionGame<'a>, rule: AllocationRule) -> Self {
        Payoffs { game, rule, cache: RefCell::new(HashMap::new()) }
    }

    fn of(&self, c: Coalition) -> Result<Vec<f64>> {
        if let Some(x) = self.cache.borrow().get(&c) {
            return Ok(x.clone());
        }
        let x = coalition_payoffs(self.game, self.rule, c)?;
        self.cache.borrow_mut().insert(c, x.clone());
        Ok(x)
    }

    /// Payoffs of the members of `union` when split into `parts`, ordered
    /// by member index.
    fn of_parts(&self, parts: &[Coalition]) -> Result<Vec<(usize, f64)>> {
        let mut out = Vec::new();
        for &p in parts {
            out.extend(members(p).into_iter().zip(self.of(p)?));
        }
        out.sort_by_key(|&(i, _)| i);
        Ok(out)
    }

    /// The operation replacing `old` coalitions by `new` ones, if it is a
    /// Pareto improvement for the players involved.
    fn improvement(&self, state: &FormationState, old: &[Coalition], new: &[Coalition], kind: impl FnOnce() -> OperationKind) -> Result<Option<Operation>> {
        let after = self.of_parts(new)?;
        let players: Vec<usize> = after.iter().map(|&(i, _)| i).collect();
        let after: Vec<f64> = after.into_iter().map(|(_, x)| x).collect();
        let before: Vec<f64> = players.iter().map(|&i| state.payoffs[i]).collect();
        debug_assert_eq!(old.iter().fold(0, |a, c| a | c), new.iter().fold(0, |a, c| a | c));
        Ok(pareto_preferred(&after, &before)?.then(|| Operation { kind: kind(), players, before, after }))
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Partitions of `c` into at least `min_parts` parts, in generation order.
fn sub_partitions(c: Coalition, min_parts: usize) -> Vec<Vec<Coalition>> {
    fn rec(remaining: Coalition, cur: &mut Vec<Coalition>, min_parts: usize, out: &mut Vec<Vec<Coalition>>) {
        if remaining == 0 {
            if cur.len() >= min_parts {
                out.push(cur.clone());
            }
            return;
        }
        let low = remaining & remaining.wrapping_neg();
        let rest = remaining ^ low;
        let mut sub = rest;
        loop {
            let part = sub | low;
            cur.push(part);
            rec(remaining ^ part, cur, min_parts, out);
            cur.pop();
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    let mut out = Vec::new();
    rec(c, &mut Vec::new(), min_parts, &mut out);
    out
}

/// Two-part splits `{A, C \ A}` with `A` holding the lowest member,
/// increasing in `A`.
fn two_part_splits(c: Coalition) -> Vec<Vec<Coalition>> {
    let low = c & c.wrapping_neg();
    let rest = c ^ low;
    let mut out = Vec::new();
    let mut sub: Coalition = 0;
    while sub != rest {
        out.push(vec![sub | low, c ^ (sub | low)]);
        sub = (sub | !rest).wrapping_add(1) & rest;
    }
    out
}

fn scan_rng(order: ScanOrder, state: &FormationState, salt: u64) -> Option<ChaCha8Rng> {
    match order {
        ScanOrder::Lexicographic => None,
        ScanOrder::Shuffled(seed) => {
            let step = derive_seed(seed, state.history.len() as u64);
            Some(ChaCha8Rng::seed_from_u64(derive_seed(step, salt)))
        }
    }
}

fn find_merge(state: &FormationState, payoffs: &Payoffs<'_>, cfg: &MergeSplitConfig) -> Result<Option<Operation>> {
    let coalitions = state.partition.coalitions();
    let mut groups: Vec<Vec<usize>> = (2..=cfg.max_group.min(coalitions.len()))
        .flat_map(|g| combinations(coalitions.len(), g))
        .collect();
    if let Some(mut rng) = scan_rng(cfg.order, state, 0) {
        groups.shuffle(&mut rng);
    }
    for group in groups {
        let from: Vec<Coalition> = group.iter().map(|&i| coalitions[i]).collect();
        let into = from.iter().fold(0, |a, c| a | c);
        if let Some(op) = payoffs.improvement(state, &from, &[into], || OperationKind::Merge { from: from.clone(), into })? {
            return Ok(Some(op));
        }
    }
    Ok(None)
}

fn find_split(state: &FormationState, payoffs: &Payoffs<'_>, cfg: &MergeSplitConfig) -> Result<Option<Operation>> {
    let mut candidates: Vec<(Coalition, Vec<Coalition>)> = Vec::new();
    for &c in state.partition.coalitions() {
        let size = c.count_ones() as usize;
        if size < 2 {
            continue;
        }
        if cfg.full_split && size > 12 {
            return Err(Error::capacity("coalition size for full split enumeration", size, 12));
        }
        candidates.extend(two_part_splits(c).into_iter().map(|s| (c, s)));
        if cfg.full_split && size <= 6 {
            candidates.extend(sub_partitions(c, 3).into_iter().map(|s| (c, s)));
        }
    }
    if let Some(mut rng) = scan_rng(cfg.order, state, 1) {
        candidates.shuffle(&mut rng);
    }
    for (from, into) in candidates {
        if let Some(op) = payoffs.improvement(state, &[from], &into, || OperationKind::Split { from, into: into.clone() })? {
            return Ok(Some(op));
        }
    }
    Ok(None)
}

/// Apply the first Pareto-improving merge, if any. Returns whether one applied.
pub fn merge_step(state: &mut FormationState, game: CoalitionGame<'_>, cfg: &MergeSplitConfig) -> Result<bool> {
    cfg.validate()?;
    let payoffs = Payoffs::new(game, cfg.rule);
    match find_merge(state, &payoffs, cfg)? {
        Some(op) => state.apply(op).map(|_| true),
        None => Ok(false),
    }
}

/// Apply the first Pareto-improving split, if any. Returns whether one applied.
pub fn split_step(state: &mut FormationState, game: CoalitionGame<'_>, cfg: &MergeSplitConfig) -> Result<bool> {
    cfg.validate()?;
    let payoffs = Payoffs::new(game, cfg.rule);
    match find_split(state, &payoffs, cfg)? {
        Some(op) => state.apply(op).map(|_| true),
        None => Ok(false),
    }
}

/// Merge until no merge applies, then split until no split applies, and
/// repeat until a full pass changes nothing. Stops early, with
/// `converged = false`, once `cfg.max_ops` operations have been applied.
pub fn merge_split_run(game: CoalitionGame<'_>, cfg: &MergeSplitConfig, init: Partition) -> Result<FormationState> {
    cfg.validate()?;
    let payoffs = Payoffs::new(game, cfg.rule);
    let mut state = FormationState::new(game, cfg.rule, init)?;
    loop {
        let mut changed = false;
        for merging in [true, false] {
            loop {
                if state.history.len() >= cfg.max_ops {
                    return Ok(state);
                }
                let op = if merging {
                    find_merge(&state, &payoffs, cfg)?
                } else {
                    find_split(&state, &payoffs, cfg)?
                };
                match op {
                    Some(op) => {
                        state.apply(op)?;
                        changed = true;
                    }
                    None => break,
                }
            }
        }
        if !changed {
            state.converged = true;
            return Ok(state);
        }
    }
}

/// Stable iff neither a merge nor a split applies; otherwise the first
/// applicable operation in lexicographic order is returned as a witness.
pub fn is_merge_split_stable(
    partition: &Partition,
    game: CoalitionGame<'_>,
    cfg: &MergeSplitConfig,
) -> Result<(bool, Option<Operation>)> {
    cfg.validate()?;
    let cfg = MergeSplitConfig { order: ScanOrder::Lexicographic, ..cfg.clone() };
    let payoffs = Payoffs::new(game, cfg.rule);
    let state = FormationState::new(game, cfg.rule, partition.clone())?;
    if let Some(op) = find_merge(&state, &payoffs, &cfg)? {
        return Ok((false, Some(op)));
    }
    if let Some(op) = find_split(&state, &payoffs, &cfg)? {
        return Ok((false, Some(op)));
    }
    Ok((true, None))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralizedComparison {
    pub distributed: Partition,
    pub distributed_total: f64,
    pub distributed_converged: bool,
    pub centralized: Partition,
    pub centralized_total: f64,
    pub coincide: bool,
    /// No other partition pays every player at least as much and someone more.
    pub distributed_pareto_optimal: bool,
}

/// Run merge-and-split from singletons and set the result against the
/// partition maximizing total worth (at most 10 players).
pub fn compare_with_centralized(game: &TUGame, cfg: &MergeSplitConfig) -> Result<CentralizedComparison> {
    let k = game.players();
    check_players(k, 10)?;
    let state = merge_split_run(game.into(), cfg, Partition::singletons(k)?)?;
    let (centralized, centralized_total) = optimal_partition(game)?;
    let payoffs = Payoffs::new(game.into(), cfg.rule);
    let mut pareto_optimal = true;
    for parts in sub_partitions(game.grand(), 1) {
        let x: Vec<f64> = payoffs.of_parts(&parts)?.into_iter().map(|(_, x)| x).collect();
        if pareto_preferred(&x, &state.payoffs)? {
            pareto_optimal = false;
            break;
        }
    }
    let distributed_total = state.partition.total_value(game);
    Ok(CentralizedComparison {
        coincide: state.partition == centralized,
        distributed: state.partition,
        distributed_total,
        distributed_converged: state.converged,
        centralized,
        centralized_total,
        distributed_pareto_optimal: pareto_optimal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn squared(k: usize) -> TUGame {
        TUGame::from_fn(k, |c| (c.count_ones() as f64).powi(2)).unwrap()
    }

    #[test]
    fn pareto_examples() {
        assert!(!pareto_preferred(&[1.0, 1.0], &[1.0, 1.0]).unwrap());
        assert!(pareto_preferred(&[1.0, 2.0], &[1.0, 1.0]).unwrap());
        assert!(!pareto_preferred(&[2.0, 0.0], &[1.0, 1.0]).unwrap());
        assert!(pareto_preferred(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn first_pair_merges() {
        let g = squared(4);
        let mut s = FormationState::new((&g).into(), AllocationRule::EqualSplit, Partition::singletons(4).unwrap()).unwrap();
        assert!(merge_step(&mut s, (&g).into(), &MergeSplitConfig::default()).unwrap());
        assert_eq!(s.partition.coalitions(), &[0b0011, 0b0100, 0b1000]);
        assert_eq!(s.payoffs, vec![2.0, 2.0, 1.0, 1.0]);
    }

    #[test]
    fn squared_reaches_grand_coalition() {
        let g = squared(6);
        let s = merge_split_run((&g).into(), &MergeSplitConfig::default(), Partition::singletons(6).unwrap()).unwrap();
        assert!(s.converged);
        assert_eq!(s.partition, Partition::grand(6).unwrap());
        assert!(is_merge_split_stable(&s.partition, (&g).into(), &MergeSplitConfig::default()).unwrap().0);
    }

    #[test]
    fn zero_game_is_frozen() {
        let g = TUGame::from_fn(4, |_| 0.0).unwrap();
        let init = Partition::from_members(4, &[vec![0, 2], vec![1], vec![3]]).unwrap();
        let s = merge_split_run((&g).into(), &MergeSplitConfig::default(), init.clone()).unwrap();
        assert_eq!(s.partition, init);
        assert!(s.history.is_empty());
    }

    #[test]
    fn singletons_only_worth_splits_grand() {
        let g = TUGame::from_fn(4, |c| if c.count_ones() == 1 { 1.0 } else { 0.0 }).unwrap();
        let s = merge_split_run((&g).into(), &MergeSplitConfig::default(), Partition::grand(4).unwrap()).unwrap();
        assert_eq!(s.partition, Partition::singletons(4).unwrap());
    }

    #[test]
    fn singletons_unstable_under_squares() {
        let g = squared(3);
        let (stable, op) = is_merge_split_stable(&Partition::singletons(3).unwrap(), (&g).into(), &MergeSplitConfig::default()).unwrap();
        assert!(!stable);
        assert!(matches!(op.unwrap().kind, OperationKind::Merge { .. }));
    }

    #[test]
    fn ntu_rule_required_for_ntu_games() {
        let g = NTUGame::symmetric(3, |c| c.count_ones() as f64).unwrap();
        assert!(coalition_payoffs((&g).into(), AllocationRule::EqualSplit, 0b11).is_err());
        assert_eq!(coalition_payoffs((&g).into(), AllocationRule::IdentityNtu, 0b11).unwrap(), vec![2.0, 2.0]);
    }

    #[test]
    fn restricted_shapley_sums_to_worth() {
        let g = TUGame::from_fn(5, |c| (c as f64).sqrt()).unwrap();
        let x = coalition_payoffs((&g).into(), AllocationRule::ShapleyWithinCoalition, 0b10110).unwrap();
        assert!((x.iter().sum::<f64>() - g.value(0b10110)).abs() < 1e-12);
    }

    #[test]
    fn split_counts() {
        assert_eq!(two_part_splits(0b1111).len(), 7);
        // Bell(4) = 15 partitions, minus 1 with one part and 7 with two.
        assert_eq!(sub_partitions(0b1111, 3).len(), 7);
    }

    #[test]
    fn centralized_on_superadditive() {
        let r = compare_with_centralized(&squared(5), &MergeSplitConfig::default()).unwrap();
        assert!(r.coincide);
        assert_eq!(r.centralized, Partition::grand(5).unwrap());
    }

    #[test]
    fn centralized_on_zero_game() {
        let r = compare_with_centralized(&TUGame::from_fn(4, |_| 0.0).unwrap(), &MergeSplitConfig::default()).unwrap();
        assert!(r.coincide);
        assert_eq!(r.distributed, Partition::singletons(4).unwrap());
    }

    #[test]
    fn bad_group_size() {
        let g = squared(3);
        let cfg = MergeSplitConfig { max_group: 5, ..Default::default() };
        assert!(merge_split_run((&g).into(), &cfg, Partition::singletons(3).unwrap()).is_err());
    }
}
