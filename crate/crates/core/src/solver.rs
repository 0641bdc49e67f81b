//! Internal branch-and-bound search for relaxed army instances.
//!
//! Depth-first search over move multiplicities. Every node tightens the
//! integer bounds of the variables by interval propagation over the rows
//! `-b_i <= (A x)_i <= c_i - b_i` (plus an objective cutoff row once an
//! incumbent exists). When enabled, the LP relaxation of the node is solved
//! and used both to prune and to pick the branching variable; any LP failure
//! simply skips that pruning step, so completeness rests on the propagation
//! search alone.
//!
//! A mirror symmetry restricts the search to `x_j = x_mirror(j)` by merging
//! each column with its mirror image into one variable.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::board::Axis;
use crate::moves::Move;
use crate::relaxed::{IlpInstance, Objective, RelaxedSolution};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
    pub symmetry: Option<Axis>,
    pub lp_bound: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            time_limit: None,
            node_limit: None,
            symmetry: None,
            lp_bound: true,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveStats {
    pub nodes: u64,
    pub lp_solves: u64,
    pub lp_failures: u64,
    pub incumbents: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    /// A solution. `proven_optimal` is set when the objective is
    /// minimization and the search finished within budget.
    Feasible {
        solution: RelaxedSolution,
        proven_optimal: bool,
        stats: SolveStats,
    },
    /// The search finished without finding a solution: no solution exists
    /// within this board and these caps.
    Infeasible { stats: SolveStats },
    /// Budget ran out before any solution was found; nothing is known.
    BudgetExhausted { stats: SolveStats },
}

impl SolveOutcome {
    pub fn solution(&self) -> Option<&RelaxedSolution> {
        match self {
            SolveOutcome::Feasible { solution, .. } => Some(solution),
            _ => None,
        }
    }

    pub fn stats(&self) -> SolveStats {
        match self {
            SolveOutcome::Feasible { stats, .. }
            | SolveOutcome::Infeasible { stats }
            | SolveOutcome::BudgetExhausted { stats } => *stats,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("board is not closed under the {0:?} reflection")]
    AsymmetricBoard(Axis),
    #[error("move {0} has no mirror image in the move set")]
    MissingMirror(usize),
}

struct Var {
    columns: Vec<usize>,
    weight: i64,
    rows: Vec<(usize, i64)>,
}

struct Row {
    entries: Vec<(usize, i64)>,
    lo: i64,
    hi: i64,
}

/// The aggregated model the search runs on.
struct Model {
    vars: Vec<Var>,
    rows: Vec<Row>,
    cap: Vec<i64>,
}

fn div_floor(a: i64, b: i64) -> i64 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -div_floor(-a, b)
}

fn mirror_columns(ilp: &IlpInstance, axis: Axis) -> Result<Vec<usize>, SolveError> {
    let board = ilp.board();
    board.mirror_map(axis).map_err(|_| SolveError::AsymmetricBoard(axis))?;
    let index: HashMap<&Move, usize> = ilp.moves().moves().iter().enumerate().map(|(j, m)| (m, j)).collect();
    ilp.moves()
        .moves()
        .iter()
        .enumerate()
        .map(|(j, m)| {
            let image = Move::new(
                m.gains.iter().map(|p| p.reflect(axis)).collect(),
                m.loss.map(|p| p.reflect(axis)),
            );
            index.get(&image).copied().ok_or(SolveError::MissingMirror(j))
        })
        .collect()
}

impl Model {
    fn build(ilp: &IlpInstance, symmetry: Option<Axis>) -> Result<Self, SolveError> {
        let m = ilp.n_moves();
        let groups: Vec<Vec<usize>> = match symmetry {
            None => (0..m).map(|j| vec![j]).collect(),
            Some(axis) => {
                let mir = mirror_columns(ilp, axis)?;
                (0..m)
                    .filter(|&j| mir[j] >= j)
                    .map(|j| if mir[j] == j { vec![j] } else { vec![j, mir[j]] })
                    .collect()
            }
        };
        let n = ilp.n_positions();
        let mut rows: Vec<Row> = (0..n)
            .map(|i| Row {
                entries: Vec::new(),
                lo: -(ilp.b()[i] as i64),
                hi: (ilp.c()[i] - ilp.b()[i]) as i64,
            })
            .collect();
        let mut vars = Vec::with_capacity(groups.len());
        let mut cap = Vec::with_capacity(groups.len());
        for (v, cols) in groups.into_iter().enumerate() {
            let mut acc: HashMap<usize, i64> = HashMap::new();
            for &j in &cols {
                for (i, a) in ilp.moves().column(j).entries() {
                    *acc.entry(i).or_default() += a as i64;
                }
            }
            let mut entries: Vec<(usize, i64)> = acc.into_iter().filter(|&(_, a)| a != 0).collect();
            entries.sort_unstable();
            for &(i, a) in &entries {
                rows[i].entries.push((v, a));
            }
            cap.push(cols.iter().map(|&j| ilp.caps()[j] as i64).min().unwrap_or(0));
            vars.push(Var {
                weight: cols.len() as i64,
                columns: cols,
                rows: entries,
            });
        }
        Ok(Model { vars, rows, cap })
    }

    fn expand(&self, values: &[i64], m: usize) -> Vec<u32> {
        let mut x = vec![0u32; m];
        for (v, var) in self.vars.iter().enumerate() {
            for &j in &var.columns {
                x[j] = values[v] as u32;
            }
        }
        x
    }
}

/// Bounds with an undo trail.
struct Domains {
    lo: Vec<i64>,
    hi: Vec<i64>,
    trail: Vec<(usize, i64, i64)>,
}

impl Domains {
    fn set(&mut self, v: usize, lo: i64, hi: i64) {
        self.trail.push((v, self.lo[v], self.hi[v]));
        self.lo[v] = lo;
        self.hi[v] = hi;
    }

    fn mark(&self) -> usize {
        self.trail.len()
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (v, lo, hi) = self.trail.pop().unwrap();
            self.lo[v] = lo;
            self.hi[v] = hi;
        }
    }
}

const OBJ_ROW: usize = usize::MAX;

struct Search<'a> {
    ilp: &'a IlpInstance,
    model: Model,
    dom: Domains,
    minimize: bool,
    incumbent: Option<(i64, Vec<i64>)>,
    lp_bound: bool,
    stats: SolveStats,
    deadline: Option<Instant>,
    node_limit: Option<u64>,
    exhausted: bool,
    row_queued: Vec<bool>,
    obj_queued: bool,
}

enum Lp {
    Infeasible,
    Bound(f64, Vec<f64>),
    Unknown,
}

impl<'a> Search<'a> {
    fn obj_hi(&self) -> Option<i64> {
        self.incumbent.as_ref().map(|(v, _)| v - 1)
    }

    fn activity(&self, entries: &[(usize, i64)]) -> (i64, i64) {
        let (mut mn, mut mx) = (0i64, 0i64);
        for &(v, a) in entries {
            if a > 0 {
                mn += a * self.dom.lo[v];
                mx += a * self.dom.hi[v];
            } else {
                mn += a * self.dom.hi[v];
                mx += a * self.dom.lo[v];
            }
        }
        (mn, mx)
    }

    /// Tighten one row; returns false on conflict. Changed variables are
    /// appended to `changed`.
    fn tighten(&mut self, entries: &[(usize, i64)], lo: i64, hi: i64, changed: &mut Vec<usize>) -> bool {
        let (mn, mx) = self.activity(entries);
        if mn > hi || mx < lo {
            return false;
        }
        for &(v, a) in entries {
            let (vlo, vhi) = (self.dom.lo[v], self.dom.hi[v]);
            let (cmin, cmax) = if a > 0 { (a * vlo, a * vhi) } else { (a * vhi, a * vlo) };
            let rest_min = mn - cmin;
            let rest_max = mx - cmax;
            // lo - rest_max <= a x <= hi - rest_min
            let (nlo, nhi) = if a > 0 {
                (div_ceil(lo - rest_max, a), div_floor(hi - rest_min, a))
            } else {
                (div_ceil(hi - rest_min, a), div_floor(lo - rest_max, a))
            };
            let nlo = nlo.max(vlo);
            let nhi = nhi.min(vhi);
            if nlo > nhi {
                return false;
            }
            if nlo != vlo || nhi != vhi {
                self.dom.set(v, nlo, nhi);
                changed.push(v);
                // activity bounds are now stale; recompute on the next pass
                return self.tighten(entries, lo, hi, changed);
            }
        }
        true
    }

    fn propagate(&mut self, seeds: impl IntoIterator<Item = usize>) -> bool {
        let mut queue: Vec<usize> = Vec::new();
        for r in seeds {
            if r == OBJ_ROW {
                if !self.obj_queued {
                    self.obj_queued = true;
                    queue.push(r);
                }
            } else if !self.row_queued[r] {
                self.row_queued[r] = true;
                queue.push(r);
            }
        }
        let mut ok = true;
        let mut changed = Vec::new();
        while let Some(r) = queue.pop() {
            let (entries, lo, hi) = if r == OBJ_ROW {
                self.obj_queued = false;
                let Some(hi) = self.obj_hi() else { continue };
                let e: Vec<(usize, i64)> = self.model.vars.iter().enumerate().map(|(v, x)| (v, x.weight)).collect();
                (e, i64::MIN / 4, hi)
            } else {
                self.row_queued[r] = false;
                let row = &self.model.rows[r];
                (row.entries.clone(), row.lo, row.hi)
            };
            changed.clear();
            if !self.tighten(&entries, lo, hi, &mut changed) {
                ok = false;
                break;
            }
            for &v in &changed {
                for &(r2, _) in &self.model.vars[v].rows {
                    if !self.row_queued[r2] {
                        self.row_queued[r2] = true;
                        queue.push(r2);
                    }
                }
                if self.minimize && self.incumbent.is_some() && !self.obj_queued {
                    self.obj_queued = true;
                    queue.push(OBJ_ROW);
                }
            }
        }
        if !ok {
            for r in queue {
                if r == OBJ_ROW {
                    self.obj_queued = false;
                } else {
                    self.row_queued[r] = false;
                }
            }
        }
        ok
    }

    fn solve_lp(&mut self) -> Lp {
        self.stats.lp_solves += 1;
        let mut pb = Problem::new(OptimizationDirection::Minimize);
        let vars: Vec<_> = (0..self.model.vars.len())
            .map(|v| {
                let w = if self.minimize {
                    self.model.vars[v].weight as f64
                } else {
                    0.0
                };
                pb.add_var(w, (self.dom.lo[v] as f64, self.dom.hi[v] as f64))
            })
            .collect();
        for row in &self.model.rows {
            if row.entries.is_empty() {
                continue;
            }
            let expr: Vec<_> = row.entries.iter().map(|&(v, a)| (vars[v], a as f64)).collect();
            if row.lo == row.hi {
                pb.add_constraint(expr.as_slice(), ComparisonOp::Eq, row.lo as f64);
            } else {
                pb.add_constraint(expr.as_slice(), ComparisonOp::Ge, row.lo as f64);
                pb.add_constraint(expr.as_slice(), ComparisonOp::Le, row.hi as f64);
            }
        }
        match pb.solve() {
            Ok(outcome) => match outcome.into_solution() {
                Ok(sol) => {
                    let values = vars.iter().map(|&v| sol.var_value(v)).collect();
                    Lp::Bound(sol.objective(), values)
                }
                Err(_) => {
                    self.stats.lp_failures += 1;
                    Lp::Unknown
                }
            },
            Err(microlp::Error::Infeasible) => Lp::Infeasible,
            Err(_) => {
                self.stats.lp_failures += 1;
                Lp::Unknown
            }
        }
    }

    fn out_of_budget(&mut self) -> bool {
        if self.exhausted {
            return true;
        }
        if self.node_limit.is_some_and(|n| self.stats.nodes >= n) || self.deadline.is_some_and(|d| Instant::now() >= d)
        {
            self.exhausted = true;
        }
        self.exhausted
    }

    fn offer(&mut self, values: Vec<i64>) {
        let x = self.model.expand(&values, self.ilp.n_moves());
        if self.ilp.check(&x).is_err() {
            return;
        }
        let cost: i64 = values.iter().zip(&self.model.vars).map(|(v, var)| v * var.weight).sum();
        if self.incumbent.as_ref().is_none_or(|(c, _)| cost < *c) {
            self.stats.incumbents += 1;
            self.incumbent = Some((cost, values));
        }
    }

    fn done(&self) -> bool {
        !self.minimize && self.incumbent.is_some()
    }

    /// Explore the node whose bounds are in `self.dom` (already propagated).
    fn node(&mut self) {
        if self.done() || self.out_of_budget() {
            return;
        }
        self.stats.nodes += 1;
        let nv = self.model.vars.len();
        if self.minimize {
            if let Some((best, _)) = &self.incumbent {
                let lb: i64 = (0..nv).map(|v| self.dom.lo[v] * self.model.vars[v].weight).sum();
                if lb >= *best {
                    return;
                }
            }
        }
        let free: Vec<usize> = (0..nv).filter(|&v| self.dom.lo[v] < self.dom.hi[v]).collect();
        if free.is_empty() {
            self.offer(self.dom.lo.clone());
            return;
        }
        let mut branch_var = None;
        let mut lp_value = 0.0;
        if self.lp_bound {
            match self.solve_lp() {
                Lp::Infeasible => return,
                Lp::Unknown => {}
                Lp::Bound(obj, values) => {
                    if self.minimize {
                        if let Some((best, _)) = &self.incumbent {
                            if (obj - 1e-6).ceil() as i64 >= *best {
                                return;
                            }
                        }
                    }
                    let mut best_frac = 1e-6;
                    for &v in &free {
                        let f = values[v] - values[v].floor();
                        let dist = f.min(1.0 - f);
                        if dist > best_frac {
                            best_frac = dist;
                            branch_var = Some(v);
                            lp_value = values[v];
                        }
                    }
                    if branch_var.is_none() {
                        // integral relaxation: try it as a solution before branching
                        let rounded: Vec<i64> = values.iter().map(|x| x.round() as i64).collect();
                        let x = self.model.expand(&rounded, self.ilp.n_moves());
                        if rounded
                            .iter()
                            .enumerate()
                            .all(|(v, &r)| r >= self.dom.lo[v] && r <= self.dom.hi[v])
                            && self.ilp.check(&x).is_ok()
                        {
                            self.offer(rounded);
                            if self.minimize || self.done() {
                                return;
                            }
                        }
                    }
                }
            }
        }
        match branch_var {
            Some(v) => {
                let up = lp_value.ceil() as i64;
                let (lo, hi) = (self.dom.lo[v], self.dom.hi[v]);
                self.child(v, up, hi);
                self.child(v, lo, up - 1);
            }
            None => {
                // smallest domain, larger multiplicities first
                let v = *free
                    .iter()
                    .min_by_key(|&&v| (self.dom.hi[v] - self.dom.lo[v], v))
                    .unwrap();
                let (lo, hi) = (self.dom.lo[v], self.dom.hi[v]);
                for val in (lo..=hi).rev() {
                    self.child(v, val, val);
                    if self.done() || self.exhausted {
                        break;
                    }
                }
            }
        }
    }

    fn child(&mut self, v: usize, lo: i64, hi: i64) {
        if self.done() || self.exhausted || lo > hi {
            return;
        }
        let mark = self.dom.mark();
        self.dom.set(v, lo, hi);
        let mut seeds: Vec<usize> = self.model.vars[v].rows.iter().map(|&(r, _)| r).collect();
        if self.minimize && self.incumbent.is_some() {
            seeds.push(OBJ_ROW);
        }
        if self.propagate(seeds) {
            self.node();
        }
        self.dom.undo(mark);
    }
}

/// Solve a relaxed instance with the internal search.
pub fn solve_internal(ilp: &IlpInstance, options: &SolveOptions) -> Result<SolveOutcome, SolveError> {
    let model = Model::build(ilp, options.symmetry)?;
    let nv = model.vars.len();
    let dom = Domains {
        lo: vec![0; nv],
        hi: model.cap.clone(),
        trail: Vec::new(),
    };
    let n_rows = model.rows.len();
    let mut search = Search {
        ilp,
        dom,
        minimize: ilp.objective() == Objective::MinimizeTotalMoves,
        incumbent: None,
        lp_bound: options.lp_bound,
        stats: SolveStats::default(),
        deadline: options.time_limit.map(|t| Instant::now() + t),
        node_limit: options.node_limit,
        exhausted: false,
        row_queued: vec![false; n_rows],
        obj_queued: false,
        model,
    };
    if search.propagate(0..n_rows) {
        search.node();
    }
    let stats = search.stats;
    Ok(match search.incumbent.take() {
        Some((_, values)) => {
            let x = search.model.expand(&values, ilp.n_moves());
            SolveOutcome::Feasible {
                solution: RelaxedSolution::new(ilp, x).expect("incumbents are validated"),
                proven_optimal: search.minimize && !search.exhausted,
                stats,
            }
        }
        None if search.exhausted => SolveOutcome::BudgetExhausted { stats },
        None => SolveOutcome::Infeasible { stats },
    })
}
