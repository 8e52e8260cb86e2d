//! Dense two-phase tableau simplex.
//!
//! Pivoting starts with Dantzig's rule and falls back to Bland's rule after a
//! configurable number of pivots, which rules out cycling. Every optimum is
//! checked against a dual solution recovered from the final tableau.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub sense: Sense,
    pub rhs: f64,
}

/// `lower ≤ x ≤ upper`; `lower` may be `-inf` (free variable).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    pub lower: f64,
    pub upper: Option<f64>,
}

impl Default for Bound {
    fn default() -> Self {
        Bound { lower: 0.0, upper: None }
    }
}

/// `minimize c·x` subject to the constraints and variable bounds.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<Bound>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct LpOptions {
    pub max_iterations: usize,
    /// Pivot count after which Bland's rule replaces Dantzig's.
    pub bland_after: usize,
    /// Pivots between rebuilds of the tableau from the original rows.
    pub refactor_every: usize,
    pub residual_tol: f64,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions { max_iterations: 200_000, bland_after: 20_000, refactor_every: 1000, residual_tol: 1e-7 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// One multiplier per constraint, sign convention of `c − Aᵀy ≥ 0` on the original rows.
    pub duals: Vec<f64>,
    pub iterations: usize,
    /// Largest violation among primal feasibility, dual feasibility, duality gap and
    /// complementary slackness.
    pub residual: f64,
}

const PIVOT_TOL: f64 = 1e-8;
const COST_TOL: f64 = 1e-10;
const PRIMAL_TOL: f64 = 1e-10;
const PERTURBATION: f64 = 1e-7;
/// Consecutive zero-step pivots after which Bland's rule takes over until progress resumes.
const DEGENERATE_STREAK: usize = 50;

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> Self {
        let nv = objective.len();
        LinearProgram { objective, constraints: Vec::new(), bounds: vec![Bound::default(); nv] }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add(&mut self, coeffs: Vec<f64>, sense: Sense, rhs: f64) {
        self.constraints.push(Constraint { coeffs, sense, rhs });
    }

    fn validate(&self) -> Result<()> {
        let nv = self.num_vars();
        if self.bounds.len() != nv {
            return Err(Error::usage(format!("{} bounds for {nv} variables", self.bounds.len())));
        }
        if self.objective.iter().any(|v| !v.is_finite()) {
            return Err(Error::usage("objective has a non-finite entry"));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != nv {
                return Err(Error::usage(format!("row {i} has {} coefficients, expected {nv}", c.coeffs.len())));
            }
            if !c.rhs.is_finite() || c.coeffs.iter().any(|v| !v.is_finite()) {
                return Err(Error::usage(format!("row {i} has a non-finite entry")));
            }
        }
        for (j, b) in self.bounds.iter().enumerate() {
            let bad_lower = b.lower.is_nan() || b.lower == f64::INFINITY;
            let bad_upper = b.upper.is_some_and(|u| !u.is_finite() || u < b.lower);
            if bad_lower || bad_upper {
                return Err(Error::usage(format!("variable {j} has an invalid bound")));
            }
        }
        Ok(())
    }
}

/// How each original variable maps onto nonnegative tableau columns.
enum VarMap {
    Shifted { col: usize, lower: f64 },
    Split { pos: usize, neg: usize },
}

struct Tableau {
    rows: usize,
    cols: usize,
    /// `rows` constraint rows followed by the cost row; each has `cols + 1` entries (rhs last).
    data: Vec<f64>,
    basis: Vec<usize>,
    /// The standard-form rows as first loaded, used to rebuild `data`.
    orig: Vec<f64>,
    cost: Vec<f64>,
}

impl Tableau {
    fn width(&self) -> usize {
        self.cols + 1
    }

    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.width() + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.width();
        let p = self.data[pr * w + pc];
        for v in &mut self.data[pr * w..(pr + 1) * w] {
            *v /= p;
        }
        let pivot_row: Vec<f64> = self.data[pr * w..(pr + 1) * w].to_vec();
        for r in 0..=self.rows {
            if r == pr {
                continue;
            }
            let factor = self.data[r * w + pc];
            if factor == 0.0 {
                continue;
            }
            let row = &mut self.data[r * w..(r + 1) * w];
            for (v, &q) in row.iter_mut().zip(&pivot_row) {
                *v -= factor * q;
            }
            row[pc] = 0.0;
        }
        self.basis[pr] = pc;
    }

    /// Recomputes `B^{-1}[A | b]` for the current basis from the original rows,
    /// discarding accumulated rounding error, then reloads the cost row.
    fn refactor(&mut self) -> Result<()> {
        let m = self.rows;
        let w = self.width();
        // Gauss-Jordan inversion of B with partial pivoting.
        let mut b = vec![0.0; m * m];
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            for (k, &col) in self.basis.iter().enumerate() {
                b[i * m + k] = self.orig[i * w + col];
            }
            inv[i * m + i] = 1.0;
        }
        for col in 0..m {
            let p = (col..m)
                .max_by(|&x, &y| b[x * m + col].abs().total_cmp(&b[y * m + col].abs()))
                .expect("nonempty range");
            let pv = b[p * m + col];
            if pv.abs() < 1e-12 {
                return Err(Error::Solver("basis matrix became singular".into()));
            }
            if p != col {
                for c in 0..m {
                    b.swap(p * m + c, col * m + c);
                    inv.swap(p * m + c, col * m + c);
                }
            }
            for c in 0..m {
                b[col * m + c] /= pv;
                inv[col * m + c] /= pv;
            }
            for r in 0..m {
                let f = b[r * m + col];
                if r != col && f != 0.0 {
                    for c in 0..m {
                        b[r * m + c] -= f * b[col * m + c];
                        inv[r * m + c] -= f * inv[col * m + c];
                    }
                }
            }
        }
        // Row k of B^{-1} A gives the tableau row of the k-th basic variable.
        for k in 0..m {
            let row = &mut self.data[k * w..(k + 1) * w];
            row.iter_mut().for_each(|v| *v = 0.0);
            for i in 0..m {
                let f = inv[k * m + i];
                if f != 0.0 {
                    for (v, &o) in row.iter_mut().zip(&self.orig[i * w..(i + 1) * w]) {
                        *v += f * o;
                    }
                }
            }
            for (c, &bc) in self.basis.iter().enumerate() {
                row[bc] = if c == k { 1.0 } else { 0.0 };
            }
            if row[self.cols] < 0.0 && row[self.cols] > -1e-7 {
                row[self.cols] = 0.0;
            }
        }
        let cost = std::mem::take(&mut self.cost);
        self.set_cost(&cost);
        Ok(())
    }

    /// Loads `cost` into the cost row as reduced costs for the current basis.
    fn set_cost(&mut self, cost: &[f64]) {
        self.cost = cost.to_vec();
        let w = self.width();
        let base = self.rows * w;
        for c in 0..w {
            self.data[base + c] = if c < self.cols { cost[c] } else { 0.0 };
        }
        for r in 0..self.rows {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                for c in 0..w {
                    self.data[base + c] -= cb * self.data[r * w + c];
                }
            }
        }
    }

    /// Minimum ratio with ties broken by smallest basic index.
    fn ratio_test_bland(&self, pc: usize) -> Option<usize> {
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..self.rows {
            let a = self.at(r, pc);
            if a > PIVOT_TOL {
                let ratio = self.rhs(r).max(0.0) / a;
                let better = match leave {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < lratio - 1e-12 || (ratio <= lratio + 1e-12 && self.basis[r] < self.basis[lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        leave.map(|(r, _)| r)
    }

    /// Two-pass Harris test: among rows whose ratio is within a small feasibility
    /// allowance of the minimum, pivot on the largest entry.
    fn ratio_test_harris(&self, pc: usize) -> Option<usize> {
        const SLACK: f64 = 1e-9;
        let mut bound = f64::INFINITY;
        for r in 0..self.rows {
            let a = self.at(r, pc);
            if a > PIVOT_TOL {
                bound = bound.min((self.rhs(r).max(0.0) + SLACK) / a);
            }
        }
        if bound == f64::INFINITY {
            return None;
        }
        let mut best: Option<(usize, f64)> = None;
        for r in 0..self.rows {
            let a = self.at(r, pc);
            if a > PIVOT_TOL && self.rhs(r).max(0.0) / a <= bound && best.is_none_or(|(_, ba)| a > ba) {
                best = Some((r, a));
            }
        }
        best.map(|(r, _)| r)
    }

    /// Runs simplex iterations on the current cost row over `allowed` columns.
    fn primal(&mut self, allowed: &dyn Fn(usize) -> bool, opts: &LpOptions, iterations: &mut usize) -> Result<()> {
        let mut since_refactor = 0;
        let mut degenerate_streak = 0;
        loop {
            if since_refactor >= opts.refactor_every.max(1) {
                self.refactor()?;
                since_refactor = 0;
            }
            let bland = *iterations >= opts.bland_after || degenerate_streak >= DEGENERATE_STREAK;
            let mut enter = None;
            let mut best = -COST_TOL;
            for c in 0..self.cols {
                if !allowed(c) {
                    continue;
                }
                let d = self.at(self.rows, c);
                if d < best {
                    enter = Some(c);
                    if bland {
                        break;
                    }
                    best = d;
                }
            }
            let Some(pc) = enter else {
                if since_refactor == 0 {
                    return Ok(());
                }
                // Confirm optimality on a freshly rebuilt tableau.
                self.refactor()?;
                since_refactor = 0;
                continue;
            };
            let leave = if bland { self.ratio_test_bland(pc) } else { self.ratio_test_harris(pc) };
            let Some(pr) = leave else {
                return Err(Error::Solver("problem is unbounded".into()));
            };
            if self.rhs(pr) > 1e-12 {
                degenerate_streak = 0;
            } else {
                degenerate_streak += 1;
            }
            self.pivot(pr, pc);
            since_refactor += 1;
            *iterations += 1;
            if *iterations > opts.max_iterations {
                return Err(Error::Solver(format!("iteration cap {} exhausted", opts.max_iterations)));
            }
        }
    }

    /// Dual simplex iterations from a dual-feasible basis until the primal values are
    /// nonnegative.
    fn dual(&mut self, allowed: &dyn Fn(usize) -> bool, opts: &LpOptions, iterations: &mut usize) -> Result<()> {
        let mut since_refactor = 0;
        loop {
            if since_refactor >= opts.refactor_every.max(1) {
                self.refactor()?;
                since_refactor = 0;
            }
            let leave = (0..self.rows)
                .filter(|&r| self.rhs(r) < -PRIMAL_TOL)
                .min_by(|&x, &y| self.rhs(x).total_cmp(&self.rhs(y)));
            let Some(pr) = leave else {
                if since_refactor == 0 {
                    return Ok(());
                }
                self.refactor()?;
                since_refactor = 0;
                continue;
            };
            let mut enter: Option<(usize, f64, f64)> = None;
            for c in 0..self.cols {
                let a = self.at(pr, c);
                if !allowed(c) || a >= -PIVOT_TOL {
                    continue;
                }
                let ratio = self.at(self.rows, c).max(0.0) / -a;
                let better = match enter {
                    None => true,
                    Some((_, br, ba)) => ratio < br - 1e-12 || (ratio <= br + 1e-12 && -a > ba),
                };
                if better {
                    enter = Some((c, ratio, -a));
                }
            }
            let Some((pc, _, _)) = enter else {
                return Err(Error::Solver("problem is infeasible (dual simplex found no entering column)".into()));
            };
            self.pivot(pr, pc);
            since_refactor += 1;
            *iterations += 1;
            if *iterations > opts.max_iterations {
                return Err(Error::Solver(format!("iteration cap {} exhausted", opts.max_iterations)));
            }
        }
    }

    /// Shifts every basic value up by a small deterministic amount, which makes
    /// ties in the ratio test unlikely, by moving the right-hand side to `b + Bδ`.
    fn perturb(&mut self) {
        let w = self.width();
        let mut state = 0x9e37_79b9_7f4a_7c15u64;
        for k in 0..self.rows {
            state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            z ^= z >> 31;
            let u = 0.5 + (z >> 11) as f64 / (1u64 << 54) as f64;
            let delta = PERTURBATION * u * (1.0 + self.rhs(k).abs());
            self.data[k * w + self.cols] += delta;
            let col = self.basis[k];
            for i in 0..self.rows {
                let a = self.orig[i * w + col];
                if a != 0.0 {
                    self.orig[i * w + self.cols] += delta * a;
                }
            }
        }
    }

    fn set_rhs(&mut self, b: &[f64]) {
        let w = self.width();
        for (i, &v) in b.iter().enumerate() {
            self.orig[i * w + self.cols] = v;
        }
    }

    /// Primal simplex on a perturbed right-hand side, then dual simplex on the true
    /// one to restore feasibility, then a final primal pass.
    fn optimize(&mut self, allowed: &dyn Fn(usize) -> bool, opts: &LpOptions, iterations: &mut usize) -> Result<()> {
        let w = self.width();
        let b: Vec<f64> = (0..self.rows).map(|i| self.orig[i * w + self.cols]).collect();
        self.perturb();
        let perturbed = self.primal(allowed, opts, iterations);
        self.set_rhs(&b);
        self.refactor()?;
        if let Err(e) = perturbed {
            if !matches!(&e, Error::Solver(msg) if msg.contains("unbounded")) {
                return Err(e);
            }
        }
        self.dual(allowed, opts, iterations)?;
        self.primal(allowed, opts, iterations)
    }
}

/// Solves the program to optimality, or reports infeasibility/unboundedness.
pub fn solve_lp(p: &LinearProgram) -> Result<LpSolution> {
    solve_lp_with(p, &LpOptions::default())
}

pub fn solve_lp_with(p: &LinearProgram, opts: &LpOptions) -> Result<LpSolution> {
    p.validate()?;
    let nv = p.num_vars();

    // Column layout: structural columns, then one slack/surplus per inequality row,
    // then one artificial per row that needs it.
    let mut maps = Vec::with_capacity(nv);
    let mut ncols = 0;
    for b in &p.bounds {
        if b.lower == f64::NEG_INFINITY {
            maps.push(VarMap::Split { pos: ncols, neg: ncols + 1 });
            ncols += 2;
        } else {
            maps.push(VarMap::Shifted { col: ncols, lower: b.lower });
            ncols += 1;
        }
    }
    let structural = ncols;

    // Rows in standard form: (coefficients over structural columns, sense, rhs, origin row, flipped)
    struct Row {
        coeffs: Vec<f64>,
        sense: Sense,
        rhs: f64,
        origin: Option<usize>,
        flipped: bool,
    }
    let expand = |coeffs: &[f64]| -> (Vec<f64>, f64) {
        let mut out = vec![0.0; structural];
        let mut shift = 0.0;
        for (j, m) in maps.iter().enumerate() {
            match *m {
                VarMap::Shifted { col, lower } => {
                    out[col] = coeffs[j];
                    shift += coeffs[j] * lower;
                }
                VarMap::Split { pos, neg } => {
                    out[pos] = coeffs[j];
                    out[neg] = -coeffs[j];
                }
            }
        }
        (out, shift)
    };
    let mut rows = Vec::new();
    for (i, c) in p.constraints.iter().enumerate() {
        let (coeffs, shift) = expand(&c.coeffs);
        rows.push(Row { coeffs, sense: c.sense, rhs: c.rhs - shift, origin: Some(i), flipped: false });
    }
    for (j, b) in p.bounds.iter().enumerate() {
        if let Some(u) = b.upper {
            let mut e = vec![0.0; nv];
            e[j] = 1.0;
            let (coeffs, shift) = expand(&e);
            rows.push(Row { coeffs, sense: Sense::Le, rhs: u - shift, origin: None, flipped: false });
        }
    }
    for r in rows.iter_mut() {
        if r.rhs < 0.0 {
            r.rhs = -r.rhs;
            r.coeffs.iter_mut().for_each(|v| *v = -*v);
            r.sense = match r.sense {
                Sense::Le => Sense::Ge,
                Sense::Ge => Sense::Le,
                Sense::Eq => Sense::Eq,
            };
            r.flipped = true;
        }
    }

    let m = rows.len();
    let mut slack_col = vec![None; m];
    for (i, r) in rows.iter().enumerate() {
        if r.sense != Sense::Eq {
            slack_col[i] = Some(ncols);
            ncols += 1;
        }
    }
    let first_artificial = ncols;
    let mut initial_col = vec![0; m];
    for (i, r) in rows.iter().enumerate() {
        if r.sense == Sense::Le {
            initial_col[i] = slack_col[i].unwrap();
        } else {
            initial_col[i] = ncols;
            ncols += 1;
        }
    }

    let mut t = Tableau {
        rows: m,
        cols: ncols,
        data: vec![0.0; (m + 1) * (ncols + 1)],
        basis: initial_col.clone(),
        orig: Vec::new(),
        cost: Vec::new(),
    };
    let w = ncols + 1;
    for (i, r) in rows.iter().enumerate() {
        t.data[i * w..i * w + structural].copy_from_slice(&r.coeffs);
        if let Some(s) = slack_col[i] {
            t.data[i * w + s] = if r.sense == Sense::Le { 1.0 } else { -1.0 };
        }
        t.data[i * w + initial_col[i]] = 1.0;
        t.data[i * w + ncols] = r.rhs;
    }
    t.orig = t.data[..m * w].to_vec();

    let mut iterations = 0;
    if first_artificial < ncols {
        let mut phase1 = vec![0.0; ncols];
        phase1[first_artificial..].iter_mut().for_each(|v| *v = 1.0);
        t.set_cost(&phase1);
        t.optimize(&|_| true, opts, &mut iterations)?;
        let infeasibility = -t.rhs(m);
        let scale = 1.0 + rows.iter().map(|r| r.rhs.abs()).fold(0.0, f64::max);
        if infeasibility > 1e-9 * scale {
            return Err(Error::Solver(format!("problem is infeasible (phase-1 residual {infeasibility:.3e})")));
        }
        // Drive zero-level artificials out of the basis where possible.
        for r in 0..m {
            if t.basis[r] >= first_artificial {
                if let Some(c) = (0..first_artificial).find(|&c| t.at(r, c).abs() > 1e-9) {
                    t.pivot(r, c);
                }
            }
        }
    }

    let mut cost = vec![0.0; ncols];
    for (j, mp) in maps.iter().enumerate() {
        match *mp {
            VarMap::Shifted { col, .. } => cost[col] = p.objective[j],
            VarMap::Split { pos, neg } => {
                cost[pos] = p.objective[j];
                cost[neg] = -p.objective[j];
            }
        }
    }
    t.set_cost(&cost);
    t.refactor()?;
    t.optimize(&|c| c < first_artificial, opts, &mut iterations)?;

    let mut col_value = vec![0.0; ncols];
    for r in 0..m {
        col_value[t.basis[r]] = t.rhs(r);
    }
    let x: Vec<f64> = maps
        .iter()
        .map(|mp| match *mp {
            VarMap::Shifted { col, lower } => lower + col_value[col],
            VarMap::Split { pos, neg } => col_value[pos] - col_value[neg],
        })
        .collect();
    let objective: f64 = p.objective.iter().zip(&x).map(|(c, v)| c * v).sum();

    // Standard-form duals from the reduced costs of the initial basis columns.
    let y_std: Vec<f64> = (0..m).map(|i| -t.at(m, initial_col[i])).collect();
    let mut duals = vec![0.0; p.constraints.len()];
    for (i, r) in rows.iter().enumerate() {
        if let Some(o) = r.origin {
            duals[o] = if r.flipped { -y_std[i] } else { y_std[i] };
        }
    }

    let residual = certificate_residual(&rows.iter().map(|r| (&r.coeffs[..], r.sense, r.rhs)).collect::<Vec<_>>(), &cost[..structural], &col_value[..structural], &y_std, objective);
    let scale = 1.0 + objective.abs();
    if residual > opts.residual_tol * scale {
        return Err(Error::Solver(format!("optimality certificate residual {residual:.3e} exceeds tolerance")));
    }
    Ok(LpSolution { x, objective, duals, iterations, residual })
}

/// Max violation of primal feasibility, dual feasibility, duality gap and complementary
/// slackness for the standard-form problem `min c·z, rows, z ≥ 0`.
fn certificate_residual(rows: &[(&[f64], Sense, f64)], c: &[f64], z: &[f64], y: &[f64], objective: f64) -> f64 {
    let mut worst: f64 = 0.0;
    for &v in z {
        worst = worst.max(-v);
    }
    let mut dual_obj = 0.0;
    for (i, &(a, sense, b)) in rows.iter().enumerate() {
        let lhs: f64 = a.iter().zip(z).map(|(p, q)| p * q).sum();
        let slack = lhs - b;
        match sense {
            Sense::Le => {
                worst = worst.max(slack).max(y[i]);
                worst = worst.max((y[i] * slack).abs());
            }
            Sense::Ge => {
                worst = worst.max(-slack).max(-y[i]);
                worst = worst.max((y[i] * slack).abs());
            }
            Sense::Eq => worst = worst.max(slack.abs()),
        }
        dual_obj += y[i] * b;
    }
    for j in 0..c.len() {
        let reduced = c[j] - rows.iter().zip(y).map(|(r, yi)| r.0[j] * yi).sum::<f64>();
        worst = worst.max(-reduced).max((reduced * z[j]).abs());
    }
    worst.max((objective - dual_obj).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_lower_bound() {
        let mut p = LinearProgram::new(vec![1.0]);
        p.add(vec![1.0], Sense::Ge, 3.0);
        let s = solve_lp(&p).unwrap();
        assert!((s.objective - 3.0).abs() < 1e-12);
        assert!((s.duals[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn l1_split() {
        let mut p = LinearProgram::new(vec![1.0, 1.0]);
        p.add(vec![1.0, -1.0], Sense::Eq, 1.0);
        let s = solve_lp(&p).unwrap();
        assert!((s.objective - 1.0).abs() < 1e-12);
        assert!((s.x[0] - 1.0).abs() < 1e-12 && s.x[1].abs() < 1e-12);
    }

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → 36 at (2, 6)
        let mut p = LinearProgram::new(vec![-3.0, -5.0]);
        p.add(vec![1.0, 0.0], Sense::Le, 4.0);
        p.add(vec![0.0, 2.0], Sense::Le, 12.0);
        p.add(vec![3.0, 2.0], Sense::Le, 18.0);
        let s = solve_lp(&p).unwrap();
        assert!((s.objective + 36.0).abs() < 1e-9);
        assert!((s.x[0] - 2.0).abs() < 1e-9 && (s.x[1] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn free_and_bounded_variables() {
        // min x s.t. x ≥ -2 (as a free variable with a row), y ≤ 1 upper bound, x + y ≥ -5
        let mut p = LinearProgram::new(vec![1.0, -1.0]);
        p.bounds[0] = Bound { lower: f64::NEG_INFINITY, upper: None };
        p.bounds[1] = Bound { lower: 0.0, upper: Some(1.0) };
        p.add(vec![1.0, 0.0], Sense::Ge, -2.0);
        let s = solve_lp(&p).unwrap();
        assert!((s.objective + 3.0).abs() < 1e-9);
        assert!((s.x[0] + 2.0).abs() < 1e-9 && (s.x[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut p = LinearProgram::new(vec![1.0]);
        p.add(vec![1.0], Sense::Le, -1.0);
        assert!(matches!(solve_lp(&p), Err(Error::Solver(_))));
        let mut q = LinearProgram::new(vec![-1.0]);
        q.add(vec![1.0], Sense::Ge, 0.0);
        assert!(matches!(solve_lp(&q), Err(Error::Solver(_))));
    }

    #[test]
    fn degenerate_problem_terminates_under_bland() {
        // Beale's cycling example for Dantzig's rule without anti-cycling.
        let mut p = LinearProgram::new(vec![-0.75, 150.0, -0.02, 6.0]);
        p.add(vec![0.25, -60.0, -0.04, 9.0], Sense::Le, 0.0);
        p.add(vec![0.5, -90.0, -0.02, 3.0], Sense::Le, 0.0);
        p.add(vec![0.0, 0.0, 1.0, 0.0], Sense::Le, 1.0);
        let s = solve_lp_with(&p, &LpOptions { bland_after: 0, ..LpOptions::default() }).unwrap();
        assert!((s.objective + 0.05).abs() < 1e-9);
        let s2 = solve_lp(&p).unwrap();
        assert!((s2.objective + 0.05).abs() < 1e-9);
    }
}
