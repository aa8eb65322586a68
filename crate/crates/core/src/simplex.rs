//! Dense two-phase primal simplex.
//!
//! The model is brought to `min c'z, Az (<=,=,>=) b, z >= 0` by shifting
//! bounded variables, negating upper-bounded ones and splitting free ones.
//! Finite upper bounds become explicit rows unless another row already
//! implies them. Every row owns an identity column (its slack or its
//! artificial), whose final reduced cost yields the row dual.
//!
//! Pricing is Dantzig's rule; after `3 * (rows + cols)` consecutive
//! degenerate pivots the phase switches to Bland's rule, which cannot cycle.

use thiserror::Error;

use crate::model::{LpModel, Relation, Sense};

#[derive(Clone, Debug, PartialEq)]
pub struct SimplexOptions {
    pub feasibility_tol: f64,
    pub optimality_tol: f64,
    pub pivot_tol: f64,
    /// Used by callers that test solutions for integrality.
    pub integrality_tol: f64,
    /// 0 picks a limit from the problem size.
    pub max_iterations: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            feasibility_tol: 1e-9,
            optimality_tol: 1e-9,
            pivot_tol: 1e-9,
            integrality_tol: 1e-6,
            max_iterations: 0,
        }
    }
}

impl SimplexOptions {
    /// Set feasibility and optimality tolerances together.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.feasibility_tol = tol;
        self.optimality_tol = tol;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective in the model's own sense; meaningful when optimal.
    pub objective: f64,
    pub primal: Vec<f64>,
    /// Shadow prices `d objective / d rhs`, one per model constraint.
    pub dual: Vec<f64>,
    pub iterations: usize,
}

impl LpSolution {
    fn without_point(status: LpStatus, model: &LpModel, iterations: usize) -> Self {
        LpSolution {
            status,
            objective: match (status, model.sense) {
                (LpStatus::Unbounded, Sense::Minimize) | (LpStatus::Infeasible, Sense::Maximize) => {
                    f64::NEG_INFINITY
                }
                _ => f64::INFINITY,
            },
            primal: vec![0.0; model.num_variables()],
            dual: vec![0.0; model.num_constraints()],
            iterations,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimplexError {
    #[error("numerical failure after {iterations} iterations: {reason}")]
    NumericalFailure { iterations: usize, reason: String },
}

pub fn solve_lp(model: &LpModel) -> Result<LpSolution, SimplexError> {
    solve_lp_with(model, &SimplexOptions::default())
}

pub fn solve_lp_with(model: &LpModel, opts: &SimplexOptions) -> Result<LpSolution, SimplexError> {
    let bounds: Vec<(f64, f64)> = model.variables.iter().map(|v| (v.lower, v.upper)).collect();
    solve_lp_bounded(model, &bounds, opts)
}

/// Solve with the variable bounds replaced by `bounds` (used by branch and
/// bound to fix variables without copying the model).
pub fn solve_lp_bounded(
    model: &LpModel,
    bounds: &[(f64, f64)],
    opts: &SimplexOptions,
) -> Result<LpSolution, SimplexError> {
    assert_eq!(bounds.len(), model.num_variables());
    if bounds.iter().any(|&(lo, hi)| lo > hi + opts.feasibility_tol) {
        return Ok(LpSolution::without_point(LpStatus::Infeasible, model, 0));
    }
    let std = StandardForm::build(model, bounds, opts);
    let mut tableau = Tableau::new(&std, opts);
    let outcome = tableau.run()?;
    if outcome != LpStatus::Optimal {
        return Ok(LpSolution::without_point(outcome, model, tableau.iterations));
    }

    let z = tableau.values();
    let primal: Vec<f64> = std
        .maps
        .iter()
        .map(|map| map.offset + map.cols.iter().map(|&(k, s)| s * z[k]).sum::<f64>())
        .collect();
    let flip = match model.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let row_duals = tableau.duals();
    let dual = (0..model.num_constraints())
        .map(|r| flip * std.row_sign[r] * row_duals[r])
        .collect();
    let violation = model_violation(model, bounds, &primal);
    let scale = 1.0 + std.rhs_scale;
    if violation > 1e-6 * scale {
        return Err(SimplexError::NumericalFailure {
            iterations: tableau.iterations,
            reason: format!("returned point violates the model by {violation:e}"),
        });
    }
    Ok(LpSolution {
        status: LpStatus::Optimal,
        objective: model.objective_value(&primal),
        primal,
        dual,
        iterations: tableau.iterations,
    })
}

fn model_violation(model: &LpModel, bounds: &[(f64, f64)], x: &[f64]) -> f64 {
    let rows = model.constraints.iter().map(|c| c.violation(x)).fold(0.0, f64::max);
    bounds
        .iter()
        .zip(x)
        .map(|(&(lo, hi), &v)| (lo - v).max(v - hi).max(0.0))
        .fold(rows, f64::max)
}

struct VarMap {
    offset: f64,
    cols: Vec<(usize, f64)>,
}

struct StdRow {
    coefs: Vec<(usize, f64)>,
    relation: Relation,
    rhs: f64,
}

/// `min cost'z` over normalized rows with nonnegative right-hand sides.
struct StandardForm {
    maps: Vec<VarMap>,
    cost: Vec<f64>,
    rows: Vec<StdRow>,
    // +1 or -1 per model row, recording the rhs normalization.
    row_sign: Vec<f64>,
    rhs_scale: f64,
}

impl StandardForm {
    fn build(model: &LpModel, bounds: &[(f64, f64)], opts: &SimplexOptions) -> Self {
        let n = model.num_variables();
        let mut rows_of = vec![Vec::new(); n];
        for (r, c) in model.constraints.iter().enumerate() {
            for &(j, a) in &c.terms {
                rows_of[j].push((r, a));
            }
        }

        let mut maps = Vec::with_capacity(n);
        let mut ncols = 0usize;
        let mut ub_rows: Vec<(usize, f64)> = Vec::new();
        for (j, &(lo, hi)) in bounds.iter().enumerate() {
            let map = if hi - lo <= opts.feasibility_tol && lo.is_finite() {
                VarMap { offset: lo, cols: vec![] }
            } else if lo.is_finite() {
                let k = ncols;
                ncols += 1;
                if hi.is_finite() && !upper_bound_implied(model, bounds, &rows_of[j], hi - lo) {
                    ub_rows.push((k, hi - lo));
                }
                VarMap { offset: lo, cols: vec![(k, 1.0)] }
            } else if hi.is_finite() {
                let k = ncols;
                ncols += 1;
                VarMap { offset: hi, cols: vec![(k, -1.0)] }
            } else {
                let k = ncols;
                ncols += 2;
                VarMap { offset: 0.0, cols: vec![(k, 1.0), (k + 1, -1.0)] }
            };
            maps.push(map);
        }

        let sign = match model.sense {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };
        let mut cost = vec![0.0; ncols];
        for &(j, c) in &model.objective {
            for &(k, s) in &maps[j].cols {
                cost[k] += sign * c * s;
            }
        }

        let mut rows = Vec::with_capacity(model.num_constraints() + ub_rows.len());
        let mut row_sign = Vec::with_capacity(model.num_constraints());
        let mut rhs_scale = 0.0f64;
        let mut dense = vec![0.0; ncols];
        let mut touched = Vec::new();
        for c in &model.constraints {
            let mut rhs = c.rhs;
            for &(j, a) in &c.terms {
                rhs -= a * maps[j].offset;
                for &(k, s) in &maps[j].cols {
                    if dense[k] == 0.0 {
                        touched.push(k);
                    }
                    dense[k] += a * s;
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let mut coefs: Vec<(usize, f64)> = touched
                .iter()
                .map(|&k| (k, std::mem::take(&mut dense[k])))
                .filter(|&(_, a)| a != 0.0)
                .collect();
            touched.clear();
            let mut relation = c.relation;
            let s = if rhs < 0.0 { -1.0 } else { 1.0 };
            if s < 0.0 {
                rhs = -rhs;
                coefs.iter_mut().for_each(|(_, a)| *a = -*a);
                relation = match relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            rhs_scale = rhs_scale.max(rhs);
            row_sign.push(s);
            rows.push(StdRow { coefs, relation, rhs });
        }
        for (k, ub) in ub_rows {
            rhs_scale = rhs_scale.max(ub);
            rows.push(StdRow {
                coefs: vec![(k, 1.0)],
                relation: Relation::Le,
                rhs: ub,
            });
        }
        StandardForm {
            maps,
            cost,
            rows,
            row_sign,
            rhs_scale,
        }
    }
}

/// `x_j - lo_j <= span` follows from some `<=`/`=` row whose coefficients
/// are all nonnegative over variables with finite lower bounds.
fn upper_bound_implied(
    model: &LpModel,
    bounds: &[(f64, f64)],
    rows: &[(usize, f64)],
    span: f64,
) -> bool {
    rows.iter().any(|&(r, a)| {
        let c = &model.constraints[r];
        if a <= 0.0 || c.relation == Relation::Ge {
            return false;
        }
        let mut residual = c.rhs;
        for &(k, b) in &c.terms {
            if b < 0.0 || !bounds[k].0.is_finite() {
                return false;
            }
            residual -= b * bounds[k].0;
        }
        residual / a <= span
    })
}

struct Tableau<'a> {
    opts: &'a SimplexOptions,
    m: usize,
    // Columns: structural, slack/surplus, artificial; then the rhs.
    width: usize,
    data: Vec<f64>,
    basis: Vec<usize>,
    cost: Vec<f64>,
    artificial: Vec<bool>,
    // Identity column of each row, used to read the duals.
    identity: Vec<usize>,
    model_rows: usize,
    d: Vec<f64>,
    iterations: usize,
    max_iterations: usize,
}

impl<'a> Tableau<'a> {
    fn new(std: &StandardForm, opts: &'a SimplexOptions) -> Self {
        let m = std.rows.len();
        let nstruct = std.cost.len();
        let nslack = std.rows.iter().filter(|r| r.relation != Relation::Eq).count();
        let nart = std.rows.iter().filter(|r| r.relation != Relation::Le).count();
        let ncols = nstruct + nslack + nart;
        let width = ncols + 1;
        let mut data = vec![0.0; m * width];
        let mut basis = vec![0; m];
        let mut identity = vec![0; m];
        let mut artificial = vec![false; ncols];
        let mut next_slack = nstruct;
        let mut next_art = nstruct + nslack;
        for (r, row) in std.rows.iter().enumerate() {
            let base = r * width;
            for &(k, a) in &row.coefs {
                data[base + k] = a;
            }
            data[base + ncols] = row.rhs;
            match row.relation {
                Relation::Le => {
                    data[base + next_slack] = 1.0;
                    basis[r] = next_slack;
                    identity[r] = next_slack;
                    next_slack += 1;
                }
                Relation::Ge => {
                    data[base + next_slack] = -1.0;
                    next_slack += 1;
                    data[base + next_art] = 1.0;
                    artificial[next_art] = true;
                    basis[r] = next_art;
                    identity[r] = next_art;
                    next_art += 1;
                }
                Relation::Eq => {
                    data[base + next_art] = 1.0;
                    artificial[next_art] = true;
                    basis[r] = next_art;
                    identity[r] = next_art;
                    next_art += 1;
                }
            }
        }
        let mut cost = std.cost.clone();
        cost.resize(ncols, 0.0);
        let max_iterations = if opts.max_iterations > 0 {
            opts.max_iterations
        } else {
            100 * (m + ncols) + 10_000
        };
        Tableau {
            opts,
            m,
            width,
            data,
            basis,
            cost,
            artificial,
            identity,
            model_rows: std.row_sign.len(),
            d: vec![0.0; width],
            iterations: 0,
            max_iterations,
        }
    }

    fn rhs_col(&self) -> usize {
        self.width - 1
    }

    fn at(&self, r: usize, k: usize) -> f64 {
        self.data[r * self.width + k]
    }

    fn price(&mut self, cost: &[f64]) {
        let w = self.width;
        self.d[..w - 1].copy_from_slice(cost);
        self.d[w - 1] = 0.0;
        for r in 0..self.m {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                let row = &self.data[r * w..(r + 1) * w];
                for (dk, &t) in self.d.iter_mut().zip(row) {
                    *dk -= cb * t;
                }
            }
        }
    }

    fn run(&mut self) -> Result<LpStatus, SimplexError> {
        let has_artificial = self.basis.iter().any(|&b| self.artificial[b]);
        if has_artificial {
            let phase1: Vec<f64> = self
                .artificial
                .iter()
                .map(|&a| if a { 1.0 } else { 0.0 })
                .collect();
            self.price(&phase1);
            self.iterate()?;
            let infeasibility: f64 = (0..self.m)
                .filter(|&r| self.artificial[self.basis[r]])
                .map(|r| self.at(r, self.rhs_col()))
                .sum();
            let scale: f64 = 1.0 + (0..self.m).map(|r| self.at(r, self.rhs_col()).abs()).sum::<f64>();
            if infeasibility > self.opts.feasibility_tol * scale.max(1.0) * 10.0 {
                return Ok(LpStatus::Infeasible);
            }
            self.drive_out_artificials();
        }
        let cost = self.cost.clone();
        self.price(&cost);
        self.iterate()
    }

    /// Pivot basic artificials (at level zero) out where possible.
    fn drive_out_artificials(&mut self) {
        let ncols = self.width - 1;
        for r in 0..self.m {
            if !self.artificial[self.basis[r]] {
                continue;
            }
            let mut best: Option<(usize, f64)> = None;
            for k in 0..ncols {
                if self.artificial[k] {
                    continue;
                }
                let a = self.at(r, k).abs();
                if a > 1e-7 && best.is_none_or(|(_, b)| a > b) {
                    best = Some((k, a));
                }
            }
            let rc = self.rhs_col();
            self.data[r * self.width + rc] = 0.0;
            if let Some((k, _)) = best {
                self.pivot(r, k);
            }
        }
    }

    fn iterate(&mut self) -> Result<LpStatus, SimplexError> {
        let ncols = self.width - 1;
        let rc = self.rhs_col();
        let degenerate_limit = 3 * (self.m + ncols);
        let mut degenerate_run = 0usize;
        let mut bland = false;
        loop {
            if self.iterations >= self.max_iterations {
                return Err(SimplexError::NumericalFailure {
                    iterations: self.iterations,
                    reason: "iteration limit reached".into(),
                });
            }
            let tol = self.opts.optimality_tol;
            let mut entering = None;
            let mut best = -tol;
            for k in 0..ncols {
                if self.artificial[k] || self.d[k] >= -tol {
                    continue;
                }
                if bland {
                    entering = Some(k);
                    break;
                }
                if self.d[k] < best {
                    best = self.d[k];
                    entering = Some(k);
                }
            }
            let Some(q) = entering else {
                return Ok(LpStatus::Optimal);
            };

            let mut leave: Option<(usize, f64, f64)> = None;
            for r in 0..self.m {
                let a = self.at(r, q);
                if a <= self.opts.pivot_tol {
                    continue;
                }
                let ratio = self.at(r, rc).max(0.0) / a;
                let better = match leave {
                    None => true,
                    Some((lr, lratio, la)) => {
                        if ratio < lratio - 1e-12 {
                            true
                        } else if ratio <= lratio + 1e-12 {
                            let art_r = self.artificial[self.basis[r]];
                            let art_l = self.artificial[self.basis[lr]];
                            if art_r != art_l {
                                art_r
                            } else if bland {
                                self.basis[r] < self.basis[lr]
                            } else {
                                a > la
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    leave = Some((r, ratio, a));
                }
            }
            let Some((r, ratio, _)) = leave else {
                return Ok(LpStatus::Unbounded);
            };
            if ratio <= self.opts.feasibility_tol {
                degenerate_run += 1;
                if degenerate_run > degenerate_limit {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
            }
            self.pivot(r, q);
            self.iterations += 1;
        }
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let w = self.width;
        let inv = 1.0 / self.data[r * w + q];
        let mut nz = Vec::new();
        for k in 0..w {
            let v = &mut self.data[r * w + k];
            if *v != 0.0 {
                *v *= inv;
                if v.abs() < 1e-14 {
                    *v = 0.0;
                } else {
                    nz.push(k);
                }
            }
        }
        self.data[r * w + q] = 1.0;
        let (before, rest) = self.data.split_at_mut(r * w);
        let (prow, after) = rest.split_at_mut(w);
        let update = |row: &mut [f64]| {
            let f = row[q];
            if f != 0.0 {
                for &k in &nz {
                    let v = row[k] - f * prow[k];
                    row[k] = if v.abs() < 1e-13 { 0.0 } else { v };
                }
                row[q] = 0.0;
            }
        };
        before.chunks_exact_mut(w).for_each(update);
        after.chunks_exact_mut(w).for_each(update);
        update(&mut self.d);
        self.basis[r] = q;
    }

    fn values(&self) -> Vec<f64> {
        let mut z = vec![0.0; self.width - 1];
        for r in 0..self.m {
            z[self.basis[r]] = self.at(r, self.rhs_col()).max(0.0);
        }
        z
    }

    fn duals(&self) -> Vec<f64> {
        (0..self.model_rows).map(|r| -self.d[self.identity[r]]).collect()
    }
}
