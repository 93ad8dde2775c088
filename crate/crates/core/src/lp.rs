//! Dense linear-program kernel.
//!
//! Two-phase tableau simplex with Bland's smallest-index rule, so results are
//! reproducible bit for bit. Problems with many more constraints than
//! variables (the coalition LPs have one row per coalition) are solved
//! through their dual, which keeps the tableau `n x m` instead of `m x m`.
//! Either way the primal solution, the optimal value and the constraint
//! multipliers are returned, and the primal solution is re-checked against
//! the original constraints before it is handed back.

use crate::error::{Error, Result};

/// Largest number of general constraints accepted.
pub const MAX_CONSTRAINTS: usize = 20_000;
/// Largest number of variables accepted.
pub const MAX_VARIABLES: usize = 5_000;

/// Feasibility and optimality tolerance.
pub const LP_TOL: f64 = 1e-7;
const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// Which formulation the simplex runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpRoute {
    /// Dual when there are more constraints than variables, primal otherwise.
    Auto,
    Primal,
    Dual,
}

/// `optimize c.x` subject to `A x >= b`, `E x = f` and per-variable bounds.
/// Variables default to `x >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    sense: Sense,
    objective: Vec<f64>,
    ge_rows: Vec<(Vec<f64>, f64)>,
    eq_rows: Vec<(Vec<f64>, f64)>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub value: f64,
    /// Sensitivity of the optimal value to each `>=` right-hand side.
    pub ge_duals: Vec<f64>,
    /// Sensitivity of the optimal value to each equality right-hand side.
    pub eq_duals: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(self) -> Result<LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Ok(s),
            LpOutcome::Infeasible => Err(Error::LpStatus("infeasible")),
            LpOutcome::Unbounded => Err(Error::LpStatus("unbounded")),
        }
    }
}

impl LinearProgram {
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram {
            sense,
            objective,
            ge_rows: Vec::new(),
            eq_rows: Vec::new(),
            lower: vec![0.0; n],
            upper: vec![f64::INFINITY; n],
        }
    }

    pub fn minimize(objective: Vec<f64>) -> Self {
        LinearProgram::new(Sense::Minimize, objective)
    }

    pub fn maximize(objective: Vec<f64>) -> Self {
        LinearProgram::new(Sense::Maximize, objective)
    }

    /// Add `row . x >= rhs`.
    pub fn ge(&mut self, row: Vec<f64>, rhs: f64) -> &mut Self {
        self.ge_rows.push((row, rhs));
        self
    }

    /// Add `row . x <= rhs` (stored as a negated `>=` row).
    pub fn le(&mut self, row: Vec<f64>, rhs: f64) -> &mut Self {
        self.ge_rows.push((row.into_iter().map(|a| -a).collect(), -rhs));
        self
    }

    pub fn equal(&mut self, row: Vec<f64>, rhs: f64) -> &mut Self {
        self.eq_rows.push((row, rhs));
        self
    }

    /// Bounds for one variable; infinities allowed.
    pub fn bounds(&mut self, var: usize, lower: f64, upper: f64) -> &mut Self {
        self.lower[var] = lower;
        self.upper[var] = upper;
        self
    }

    pub fn free(&mut self, var: usize) -> &mut Self {
        self.bounds(var, f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.ge_rows.len() + self.eq_rows.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if n > MAX_VARIABLES {
            return Err(Error::capacity("LP variables", n, MAX_VARIABLES));
        }
        if self.num_constraints() > MAX_CONSTRAINTS {
            return Err(Error::capacity("LP constraints", self.num_constraints(), MAX_CONSTRAINTS));
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("LP objective has a non-finite coefficient".into()));
        }
        for (i, (row, rhs)) in self.ge_rows.iter().chain(&self.eq_rows).enumerate() {
            if row.len() != n {
                return Err(Error::Shape(format!("LP row {i} has {} coefficients, expected {n}", row.len())));
            }
            if row.iter().any(|a| !a.is_finite()) || !rhs.is_finite() {
                return Err(Error::InvalidArgument(format!("LP row {i} has a non-finite entry")));
            }
        }
        for j in 0..n {
            let (lo, hi) = (self.lower[j], self.upper[j]);
            if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
                return Err(Error::InvalidArgument(format!("variable {j} has invalid bounds [{lo}, {hi}]")));
            }
        }
        Ok(())
    }

    /// Largest constraint or bound violation of a candidate point.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let dot = |row: &[f64]| row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
        let scaled = |row: &[f64], rhs: f64, gap: f64| {
            let mag = row.iter().zip(x).map(|(a, b)| (a * b).abs()).sum::<f64>();
            gap / (1.0 + rhs.abs().max(mag))
        };
        let ge = self
            .ge_rows
            .iter()
            .map(|(r, b)| scaled(r, *b, b - dot(r)))
            .fold(0.0, f64::max);
        let eq = self
            .eq_rows
            .iter()
            .map(|(r, b)| scaled(r, *b, (b - dot(r)).abs()))
            .fold(0.0, f64::max);
        let bounds = x
            .iter()
            .enumerate()
            .map(|(j, &v)| (self.lower[j] - v).max(v - self.upper[j]) / (1.0 + v.abs()))
            .fold(0.0, f64::max);
        ge.max(eq).max(bounds)
    }
}

pub fn lp_solve(lp: &LinearProgram) -> Result<LpOutcome> {
    lp_solve_with(lp, LpRoute::Auto)
}

/// How an original variable maps onto a non-negative (or free) working variable.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    /// `x = lo + x'`
    Shift(f64),
    /// `x = hi - x'`
    Flip(f64),
    Free,
}

/// `min c.x + offset` s.t. `G x >= h`, `E x = f`; `free[j]` marks free columns,
/// all others are `>= 0`. The first `exported_ge` rows of `G` are the user's.
struct Normalized {
    c: Vec<f64>,
    offset: f64,
    g: Vec<Vec<f64>>,
    h: Vec<f64>,
    e: Vec<Vec<f64>>,
    f: Vec<f64>,
    free: Vec<bool>,
    maps: Vec<VarMap>,
    exported_ge: usize,
}

fn normalize(lp: &LinearProgram) -> Normalized {
    let n = lp.num_vars();
    let sign = if lp.sense == Sense::Maximize { -1.0 } else { 1.0 };
    let maps: Vec<VarMap> = (0..n)
        .map(|j| {
            let (lo, hi) = (lp.lower[j], lp.upper[j]);
            if lo.is_finite() {
                VarMap::Shift(lo)
            } else if hi.is_finite() {
                VarMap::Flip(hi)
            } else {
                VarMap::Free
            }
        })
        .collect();
    let transform = |row: &[f64], rhs: f64| -> (Vec<f64>, f64) {
        let mut out = Vec::with_capacity(n);
        let mut b = rhs;
        for (j, &a) in row.iter().enumerate() {
            match maps[j] {
                VarMap::Shift(lo) => {
                    b -= a * lo;
                    out.push(a);
                }
                VarMap::Flip(hi) => {
                    b -= a * hi;
                    out.push(-a);
                }
                VarMap::Free => out.push(a),
            }
        }
        (out, b)
    };
    let (c_row, neg_offset) = transform(&lp.objective.iter().map(|c| sign * c).collect::<Vec<_>>(), 0.0);
    let mut g = Vec::new();
    let mut h = Vec::new();
    for (row, rhs) in &lp.ge_rows {
        let (r, b) = transform(row, *rhs);
        g.push(r);
        h.push(b);
    }
    let exported_ge = g.len();
    for j in 0..n {
        if let VarMap::Shift(lo) = maps[j] {
            if lp.upper[j].is_finite() {
                let mut r = vec![0.0; n];
                r[j] = -1.0;
                g.push(r);
                h.push(-(lp.upper[j] - lo));
            }
        }
    }
    let mut e = Vec::new();
    let mut f = Vec::new();
    for (row, rhs) in &lp.eq_rows {
        let (r, b) = transform(row, *rhs);
        e.push(r);
        f.push(b);
    }
    Normalized {
        c: c_row,
        offset: -neg_offset,
        g,
        h,
        e,
        f,
        free: maps.iter().map(|m| matches!(m, VarMap::Free)).collect(),
        maps,
        exported_ge,
    }
}

pub fn lp_solve_with(lp: &LinearProgram, route: LpRoute) -> Result<LpOutcome> {
    lp.validate()?;
    let norm = normalize(lp);
    let n = norm.c.len();
    let split_cols = n + norm.free.iter().filter(|&&f| f).count();
    let use_dual = match route {
        LpRoute::Primal => false,
        LpRoute::Dual => true,
        LpRoute::Auto => norm.g.len() + norm.e.len() > split_cols,
    };
    let solved = if use_dual { solve_via_dual(&norm)? } else { solve_primal(&norm)? };
    let (xw, y, z) = match solved {
        Working::Optimal { x, y, z } => (x, y, z),
        Working::Infeasible => return Ok(LpOutcome::Infeasible),
        Working::Unbounded => return Ok(LpOutcome::Unbounded),
    };

    let x: Vec<f64> = xw
        .iter()
        .zip(&norm.maps)
        .map(|(&v, m)| match *m {
            VarMap::Shift(lo) => lo + v,
            VarMap::Flip(hi) => hi - v,
            VarMap::Free => v,
        })
        .collect();
    let violation = lp.max_violation(&x);
    if violation > LP_TOL {
        return Err(Error::Numerical(format!(
            "simplex solution violates a constraint by {violation:e} (relative)"
        )));
    }
    let value: f64 = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    let sign = if lp.sense == Sense::Maximize { -1.0 } else { 1.0 };
    let _ = norm.offset;
    Ok(LpOutcome::Optimal(LpSolution {
        x,
        value,
        ge_duals: y[..norm.exported_ge].iter().map(|v| sign * v).collect(),
        eq_duals: z.iter().map(|v| sign * v).collect(),
    }))
}

enum Working {
    Optimal { x: Vec<f64>, y: Vec<f64>, z: Vec<f64> },
    Infeasible,
    Unbounded,
}

fn solve_primal(p: &Normalized) -> Result<Working> {
    let n = p.c.len();
    let mut col_of = Vec::with_capacity(n);
    let mut cost = Vec::new();
    let mut next = 0;
    for j in 0..n {
        col_of.push(next);
        cost.push(p.c[j]);
        next += 1;
        if p.free[j] {
            cost.push(-p.c[j]);
            next += 1;
        }
    }
    let surplus0 = next;
    let cols = surplus0 + p.g.len();
    cost.resize(cols, 0.0);
    let mut a = Vec::with_capacity(p.g.len() + p.e.len());
    let mut b = Vec::with_capacity(p.g.len() + p.e.len());
    for (i, (row, rhs)) in p.g.iter().zip(&p.h).chain(p.e.iter().zip(&p.f)).enumerate() {
        let mut r = vec![0.0; cols];
        for j in 0..n {
            r[col_of[j]] = row[j];
            if p.free[j] {
                r[col_of[j] + 1] = -row[j];
            }
        }
        if i < p.g.len() {
            r[surplus0 + i] = -1.0;
        }
        a.push(r);
        b.push(*rhs);
    }
    Ok(match standard_simplex(&a, &b, &cost)? {
        Standard::Optimal { w, pi } => {
            let x = (0..n)
                .map(|j| if p.free[j] { w[col_of[j]] - w[col_of[j] + 1] } else { w[col_of[j]] })
                .collect();
            let y = pi[..p.g.len()].to_vec();
            let z = pi[p.g.len()..].to_vec();
            Working::Optimal { x, y, z }
        }
        Standard::Infeasible => Working::Infeasible,
        Standard::Unbounded => Working::Unbounded,
    })
}

/// Solve `max h.y + f.z` s.t. `G^T y + E^T z <= c` (equality on free
/// columns), `y >= 0`, and read the primal point off its multipliers.
fn solve_via_dual(p: &Normalized) -> Result<Working> {
    let n = p.c.len();
    let mg = p.g.len();
    let me = p.e.len();
    let slack_rows: Vec<usize> = (0..n).filter(|&j| !p.free[j]).collect();
    let cols = mg + 2 * me + slack_rows.len();
    let mut cost = vec![0.0; cols];
    for i in 0..mg {
        cost[i] = -p.h[i];
    }
    for i in 0..me {
        cost[mg + i] = -p.f[i];
        cost[mg + me + i] = p.f[i];
    }
    let mut a = vec![vec![0.0; cols]; n];
    for (i, row) in p.g.iter().enumerate() {
        for j in 0..n {
            a[j][i] = row[j];
        }
    }
    for (i, row) in p.e.iter().enumerate() {
        for j in 0..n {
            a[j][mg + i] = row[j];
            a[j][mg + me + i] = -row[j];
        }
    }
    for (s, &j) in slack_rows.iter().enumerate() {
        a[j][mg + 2 * me + s] = 1.0;
    }
    match standard_simplex(&a, &p.c, &cost)? {
        Standard::Optimal { w, pi } => {
            let x = pi.iter().map(|v| -v).collect();
            let y = w[..mg].to_vec();
            let z = (0..me).map(|i| w[mg + i] - w[mg + me + i]).collect();
            Ok(Working::Optimal { x, y, z })
        }
        Standard::Unbounded => Ok(Working::Infeasible),
        Standard::Infeasible => {
            // The dual is infeasible: the primal is unbounded if it is feasible
            // at all. Feasibility is decided by the zero-objective dual, which
            // is always feasible and is unbounded exactly when the primal is not.
            let zero = vec![0.0; n];
            match standard_simplex(&a, &zero, &cost)? {
                Standard::Optimal { .. } => Ok(Working::Unbounded),
                _ => Ok(Working::Infeasible),
            }
        }
    }
}

enum Standard {
    Optimal { w: Vec<f64>, pi: Vec<f64> },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: usize,
    width: usize,
    cells: Vec<f64>,
    reduced: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.cells[i * self.width + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.cells[i * self.width + self.width - 1]
    }

    fn pivot(&mut self, p: usize, q: usize) {
        let w = self.width;
        let inv = 1.0 / self.cells[p * w + q];
        for v in &mut self.cells[p * w..(p + 1) * w] {
            *v *= inv;
        }
        self.cells[p * w + q] = 1.0;
        let (before, rest) = self.cells.split_at_mut(p * w);
        let (prow, after) = rest.split_at_mut(w);
        for row in before.chunks_exact_mut(w).chain(after.chunks_exact_mut(w)) {
            let factor = row[q];
            if factor != 0.0 {
                for (v, pv) in row.iter_mut().zip(prow.iter()) {
                    *v -= factor * pv;
                }
                row[q] = 0.0;
            }
        }
        let factor = self.reduced[q];
        if factor != 0.0 {
            for (v, pv) in self.reduced.iter_mut().zip(prow.iter()) {
                *v -= factor * pv;
            }
            self.reduced[q] = 0.0;
        }
        self.basis[p] = q;
    }

    /// Bland's rule iterations over columns `< eligible`.
    fn run(&mut self, eligible: usize, max_pivots: &mut usize) -> Result<bool> {
        loop {
            let Some(q) = (0..eligible).find(|&j| self.reduced[j] < -COST_TOL) else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows {
                let a = self.at(i, q);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(i).max(0.0) / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((r, best)) => {
                            let tie = (ratio - best).abs() <= 1e-12 * best.abs().max(1.0);
                            if ratio < best && !tie || tie && self.basis[i] < self.basis[r] {
                                Some((i, ratio))
                            } else {
                                Some((r, best))
                            }
                        }
                    };
                }
            }
            let Some((p, _)) = leave else {
                return Ok(false);
            };
            if *max_pivots == 0 {
                return Err(Error::Numerical("simplex iteration limit reached".into()));
            }
            *max_pivots -= 1;
            self.pivot(p, q);
        }
    }
}

/// `min c.w` s.t. `A w = b`, `w >= 0`. Returns the multipliers `pi` with
/// `c - A^T pi >= 0` at the optimum.
fn standard_simplex(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Result<Standard> {
    let m = a.len();
    let n = c.len();
    let width = n + m + 1;
    let mut cells = vec![0.0; m * width];
    let mut flipped = vec![false; m];
    for i in 0..m {
        let s = if b[i] < 0.0 {
            flipped[i] = true;
            -1.0
        } else {
            1.0
        };
        let row = &mut cells[i * width..(i + 1) * width];
        for j in 0..n {
            row[j] = s * a[i][j];
        }
        row[n + i] = 1.0;
        row[width - 1] = s * b[i];
    }
    // Phase 1: minimize the sum of artificials.
    let mut reduced = vec![0.0; width];
    for i in 0..m {
        for j in 0..n {
            reduced[j] -= cells[i * width + j];
        }
        reduced[width - 1] -= cells[i * width + width - 1];
    }
    let mut t = Tableau {
        rows: m,
        width,
        cells,
        reduced,
        basis: (n..n + m).collect(),
    };
    let mut budget = 50 * (m + n) + 10_000;
    t.run(n, &mut budget)?;
    let scale = b.iter().fold(1.0_f64, |s, v| s.max(v.abs()));
    if -t.reduced[width - 1] > LP_TOL * scale {
        return Ok(Standard::Infeasible);
    }
    // Drive remaining artificials out of the basis where possible.
    for i in 0..m {
        if t.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| t.at(i, j).abs() > 1e-7) {
                t.pivot(i, j);
            }
        }
    }
    // Phase 2.
    let cost_of = |j: usize| if j < n { c[j] } else { 0.0 };
    let mut reduced = vec![0.0; width];
    for j in 0..n {
        reduced[j] = c[j];
    }
    for i in 0..m {
        let cb = cost_of(t.basis[i]);
        if cb != 0.0 {
            for j in 0..width {
                reduced[j] -= cb * t.at(i, j);
            }
        }
    }
    for i in 0..m {
        reduced[t.basis[i]] = 0.0;
    }
    t.reduced = reduced;
    if !t.run(n, &mut budget)? {
        return Ok(Standard::Unbounded);
    }
    let mut w = vec![0.0; n];
    for i in 0..m {
        if t.basis[i] < n {
            w[t.basis[i]] = t.rhs(i).max(0.0);
        }
    }
    let pi = (0..m)
        .map(|i| {
            let v = -t.reduced[n + i];
            if flipped[i] {
                -v
            } else {
                v
            }
        })
        .collect();
    Ok(Standard::Optimal { w, pi })
}
