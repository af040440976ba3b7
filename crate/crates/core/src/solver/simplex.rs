//! Dense bounded-variable primal simplex.
//!
//! Constraints become equalities through one slack column per row; infeasible
//! starting rows get an artificial column driven out in phase 1. The basis
//! inverse is kept explicitly and refactorized periodically. All problem
//! variables here are bounded on at least one side, so the method uses the
//! standard nonbasic-at-bound generalization with bound flips.

use crate::milp::{MilpModel, ObjSense, Sense};

const PIVOT_TOL: f64 = 1e-8;
const COST_TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-7;
const REFACTOR_EVERY: usize = 64;

/// Equality-form LP data shared by every branch-and-bound node.
pub struct StandardForm {
    pub n_struct: usize,
    pub m: usize,
    /// Column-major coefficients for structural then slack columns.
    pub cols: Vec<Vec<(usize, f64)>>,
    pub lb: Vec<f64>,
    pub ub: Vec<f64>,
    /// Minimization costs over structural + slack columns.
    pub obj: Vec<f64>,
    pub rhs: Vec<f64>,
    /// True when the model maximizes; `obj` is already negated.
    pub maximize: bool,
}

impl StandardForm {
    pub fn from_model(model: &MilpModel) -> Self {
        let n_struct = model.num_vars();
        let m = model.num_constraints();
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n_struct + m];
        let mut lb = Vec::with_capacity(n_struct + m);
        let mut ub = Vec::with_capacity(n_struct + m);
        for v in model.variables() {
            lb.push(v.lower);
            ub.push(v.upper);
        }
        let mut rhs = Vec::with_capacity(m);
        for (row, c) in model.constraints().iter().enumerate() {
            for &(id, coef) in &c.terms {
                cols[id.0].push((row, coef));
            }
            let slack = n_struct + row;
            cols[slack].push((row, 1.0));
            let (slo, shi) = match c.sense {
                Sense::Le => (0.0, f64::INFINITY),
                Sense::Ge => (f64::NEG_INFINITY, 0.0),
                Sense::Eq => (0.0, 0.0),
            };
            lb.push(slo);
            ub.push(shi);
            rhs.push(c.rhs);
        }
        let mut obj = vec![0.0; n_struct + m];
        let mut maximize = false;
        if let Some(o) = model.objective() {
            maximize = o.sense == ObjSense::Max;
            let sign = if maximize { -1.0 } else { 1.0 };
            for &(id, coef) in &o.terms {
                obj[id.0] = sign * coef;
            }
        }
        Self {
            n_struct,
            m,
            cols,
            lb,
            ub,
            obj,
            rhs,
            maximize,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterLimit,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective in minimization sense (negated for maximize models).
    pub objective: f64,
    /// Structural variable values.
    pub x: Vec<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum VStat {
    Basic,
    AtLower,
    AtUpper,
}

struct Simplex<'a> {
    sf: &'a StandardForm,
    m: usize,
    /// total columns: structural + slack + artificial
    n: usize,
    lb: Vec<f64>,
    ub: Vec<f64>,
    art_sign: Vec<f64>,
    stat: Vec<VStat>,
    basis: Vec<usize>,
    binv: Vec<f64>,
    xb: Vec<f64>,
    cost: Vec<f64>,
    deadline: Option<std::time::Instant>,
}

/// Solves the LP with structural bounds overridden (branch-and-bound nodes
/// tighten integer bounds without touching the shared `StandardForm`).
pub fn solve_lp(sf: &StandardForm, lb_over: &[f64], ub_over: &[f64]) -> LpSolution {
    solve_lp_deadline(sf, lb_over, ub_over, None)
}

/// Like [`solve_lp`] but gives up with [`LpStatus::IterLimit`] once the
/// deadline passes, so callers can honor wall-clock limits mid-solve.
pub fn solve_lp_deadline(
    sf: &StandardForm,
    lb_over: &[f64],
    ub_over: &[f64],
    deadline: Option<std::time::Instant>,
) -> LpSolution {
    let m = sf.m;
    let ns = sf.n_struct;
    let n = ns + m + m;
    let mut lb = Vec::with_capacity(n);
    let mut ub = Vec::with_capacity(n);
    lb.extend_from_slice(lb_over);
    ub.extend_from_slice(ub_over);
    lb.extend_from_slice(&sf.lb[ns..]);
    ub.extend_from_slice(&sf.ub[ns..]);
    // artificials
    lb.extend(std::iter::repeat(0.0).take(m));
    ub.extend(std::iter::repeat(f64::INFINITY).take(m));
    for j in 0..ns {
        if lb[j] > ub[j] + 1e-12 {
            return LpSolution {
                status: LpStatus::Infeasible,
                objective: 0.0,
                x: Vec::new(),
            };
        }
    }

    let mut s = Simplex {
        sf,
        m,
        n,
        lb,
        ub,
        art_sign: vec![1.0; m],
        stat: Vec::new(),
        basis: Vec::new(),
        binv: Vec::new(),
        xb: Vec::new(),
        cost: Vec::new(),
        deadline,
    };
    s.run()
}

impl<'a> Simplex<'a> {
    fn col_iter(&self, j: usize) -> ColIter<'a> {
        let ns_m = self.sf.n_struct + self.m;
        if j < ns_m {
            ColIter::Slice(self.sf.cols[j].iter())
        } else {
            ColIter::Art(Some((j - ns_m, self.art_sign[j - ns_m])))
        }
    }

    fn nonbasic_value(&self, j: usize) -> f64 {
        match self.stat[j] {
            VStat::AtLower => self.lb[j],
            VStat::AtUpper => self.ub[j],
            VStat::Basic => unreachable!(),
        }
    }

    fn run(&mut self) -> LpSolution {
        let m = self.m;
        let ns_m = self.sf.n_struct + self.m;
        // nonbasic start: every structural/slack column at its bound nearest 0
        self.stat = (0..self.n)
            .map(|j| {
                if self.lb[j].is_finite()
                    && (!self.ub[j].is_finite() || self.lb[j].abs() <= self.ub[j].abs())
                {
                    VStat::AtLower
                } else if self.ub[j].is_finite() {
                    VStat::AtUpper
                } else {
                    VStat::AtLower // unbounded both ways does not occur here
                }
            })
            .collect();
        // residuals with all columns at their bounds and slack values ignored
        let mut resid = self.sf.rhs.clone();
        for j in 0..ns_m {
            let v = self.nonbasic_value(j);
            if v != 0.0 {
                for &(row, a) in &self.sf.cols[j] {
                    resid[row] -= a * v;
                }
            }
        }
        // basis: the row's slack when the residual fits its bounds, else an
        // artificial carrying |residual|
        self.basis = Vec::with_capacity(m);
        self.binv = vec![0.0; m * m];
        self.xb = vec![0.0; m];
        let mut need_phase1 = false;
        for i in 0..m {
            let slack = self.sf.n_struct + i;
            // the slack is nonbasic at a bound; its own contribution was not
            // subtracted above because nonbasic_value(slack) == 0 for Le/Ge/Eq
            let r = resid[i];
            if r >= self.lb[slack] - FEAS_TOL && r <= self.ub[slack] + FEAS_TOL {
                self.basis.push(slack);
                self.stat[slack] = VStat::Basic;
                self.binv[i * m + i] = 1.0;
                self.xb[i] = r;
            } else {
                let art = ns_m + i;
                self.art_sign[i] = if r >= 0.0 { 1.0 } else { -1.0 };
                self.basis.push(art);
                self.stat[art] = VStat::Basic;
                self.binv[i * m + i] = self.art_sign[i];
                self.xb[i] = r.abs();
                need_phase1 = true;
            }
        }

        if need_phase1 {
            self.cost = vec![0.0; self.n];
            for j in ns_m..self.n {
                self.cost[j] = 1.0;
            }
            match self.iterate() {
                LpStatus::Optimal => {}
                other => {
                    return LpSolution {
                        status: other,
                        objective: 0.0,
                        x: Vec::new(),
                    }
                }
            }
            if self.objective_value() > 1e-6 {
                return LpSolution {
                    status: LpStatus::Infeasible,
                    objective: 0.0,
                    x: Vec::new(),
                };
            }
        }
        // artificials are pinned at zero for phase 2
        for j in ns_m..self.n {
            self.ub[j] = 0.0;
        }
        self.cost = vec![0.0; self.n];
        self.cost[..ns_m].copy_from_slice(&self.sf.obj);
        let status = self.iterate();
        if status != LpStatus::Optimal {
            return LpSolution {
                status,
                objective: 0.0,
                x: Vec::new(),
            };
        }
        let mut x = vec![0.0; self.sf.n_struct];
        for (j, xi) in x.iter_mut().enumerate() {
            *xi = match self.stat[j] {
                VStat::AtLower => self.lb[j],
                VStat::AtUpper => self.ub[j],
                VStat::Basic => {
                    let i = self.basis.iter().position(|&b| b == j).unwrap();
                    self.xb[i]
                }
            };
        }
        LpSolution {
            status: LpStatus::Optimal,
            objective: self.objective_value(),
            x,
        }
    }

    fn objective_value(&self) -> f64 {
        let mut v = 0.0;
        for j in 0..self.n {
            if self.cost[j] == 0.0 {
                continue;
            }
            let xj = match self.stat[j] {
                VStat::Basic => continue,
                _ => self.nonbasic_value(j),
            };
            v += self.cost[j] * xj;
        }
        for i in 0..self.m {
            v += self.cost[self.basis[i]] * self.xb[i];
        }
        v
    }

    fn refactor(&mut self) -> bool {
        let m = self.m;
        // Gauss-Jordan inversion of the basis matrix with partial pivoting
        let mut a = vec![0.0; m * m];
        for (i, &bj) in self.basis.iter().enumerate() {
            match self.col_iter(bj) {
                ColIter::Slice(it) => {
                    for &(row, c) in it {
                        a[row * m + i] = c;
                    }
                }
                ColIter::Art(Some((row, sgn))) => a[row * m + i] = sgn,
                ColIter::Art(None) => {}
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for col in 0..m {
            let mut piv = col;
            let mut best = a[col * m + col].abs();
            for r in col + 1..m {
                let v = a[r * m + col].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best < 1e-11 {
                return false;
            }
            if piv != col {
                for k in 0..m {
                    a.swap(col * m + k, piv * m + k);
                    inv.swap(col * m + k, piv * m + k);
                }
            }
            let d = a[col * m + col];
            for k in 0..m {
                a[col * m + k] /= d;
                inv[col * m + k] /= d;
            }
            for r in 0..m {
                if r == col {
                    continue;
                }
                let f = a[r * m + col];
                if f == 0.0 {
                    continue;
                }
                for k in 0..m {
                    a[r * m + k] -= f * a[col * m + k];
                    inv[r * m + k] -= f * inv[col * m + k];
                }
            }
        }
        self.binv = inv;
        self.recompute_xb();
        true
    }

    fn recompute_xb(&mut self) {
        let m = self.m;
        let mut r = self.sf.rhs.clone();
        for j in 0..self.n {
            if self.stat[j] == VStat::Basic {
                continue;
            }
            let v = self.nonbasic_value(j);
            if v == 0.0 {
                continue;
            }
            match self.col_iter(j) {
                ColIter::Slice(it) => {
                    for &(row, c) in it {
                        r[row] -= c * v;
                    }
                }
                ColIter::Art(Some((row, sgn))) => r[row] -= sgn * v,
                ColIter::Art(None) => {}
            }
        }
        for i in 0..m {
            let mut s = 0.0;
            for k in 0..m {
                s += self.binv[i * m + k] * r[k];
            }
            self.xb[i] = s;
        }
    }

    fn reduced_cost(&self, j: usize, y: &[f64]) -> f64 {
        let mut d = self.cost[j];
        match self.col_iter(j) {
            ColIter::Slice(it) => {
                for &(row, c) in it {
                    d -= y[row] * c;
                }
            }
            ColIter::Art(Some((row, sgn))) => d -= y[row] * sgn,
            ColIter::Art(None) => {}
        }
        d
    }

    fn iterate(&mut self) -> LpStatus {
        let m = self.m;
        let max_iters = 10_000 + 50 * (self.n + m);
        let mut since_refactor = 0usize;
        let mut bland = false;
        let mut stalled = 0usize;
        let mut y = vec![0.0; m];
        for iter in 0..max_iters {
            if iter % 64 == 0 {
                if let Some(dl) = self.deadline {
                    if std::time::Instant::now() >= dl {
                        return LpStatus::IterLimit;
                    }
                }
            }
            if since_refactor >= REFACTOR_EVERY {
                if !self.refactor() {
                    return LpStatus::IterLimit;
                }
                since_refactor = 0;
            }
            // y = c_B B^-1
            for k in 0..m {
                let mut s = 0.0;
                for i in 0..m {
                    let cb = self.cost[self.basis[i]];
                    if cb != 0.0 {
                        s += cb * self.binv[i * m + k];
                    }
                }
                y[k] = s;
            }
            // entering column
            let mut enter: Option<(usize, f64)> = None;
            for j in 0..self.n {
                if self.stat[j] == VStat::Basic || self.ub[j] - self.lb[j] < 1e-12 {
                    continue;
                }
                let d = self.reduced_cost(j, &y);
                let eligible = match self.stat[j] {
                    VStat::AtLower => d < -COST_TOL,
                    VStat::AtUpper => d > COST_TOL,
                    VStat::Basic => false,
                };
                if !eligible {
                    continue;
                }
                if bland {
                    enter = Some((j, d));
                    break;
                }
                match enter {
                    Some((_, best)) if d.abs() <= best.abs() => {}
                    _ => enter = Some((j, d)),
                }
            }
            let Some((j, _)) = enter else {
                return LpStatus::Optimal;
            };
            // alpha = B^-1 A_j
            let mut alpha = vec![0.0; m];
            match self.col_iter(j) {
                ColIter::Slice(it) => {
                    for &(row, c) in it {
                        for i in 0..m {
                            alpha[i] += self.binv[i * m + row] * c;
                        }
                    }
                }
                ColIter::Art(Some((row, sgn))) => {
                    for i in 0..m {
                        alpha[i] += self.binv[i * m + row] * sgn;
                    }
                }
                ColIter::Art(None) => {}
            }
            let dir = if self.stat[j] == VStat::AtLower { 1.0 } else { -1.0 };
            // ratio test; basic value changes by -dir*alpha*t
            let mut t = self.ub[j] - self.lb[j];
            let mut leaving: Option<(usize, VStat)> = None;
            for i in 0..m {
                let a = dir * alpha[i];
                let bj = self.basis[i];
                if a > PIVOT_TOL {
                    if self.lb[bj].is_finite() {
                        let limit = (self.xb[i] - self.lb[bj]).max(0.0) / a;
                        if limit < t - 1e-12 {
                            t = limit;
                            leaving = Some((i, VStat::AtLower));
                        }
                    }
                } else if a < -PIVOT_TOL && self.ub[bj].is_finite() {
                    let limit = (self.ub[bj] - self.xb[i]).max(0.0) / (-a);
                    if limit < t - 1e-12 {
                        t = limit;
                        leaving = Some((i, VStat::AtUpper));
                    }
                }
            }
            if !t.is_finite() {
                return LpStatus::Unbounded;
            }
            if t < 1e-11 {
                stalled += 1;
                if stalled > 200 {
                    bland = true;
                }
            } else {
                stalled = 0;
            }
            match leaving {
                None => {
                    // bound flip
                    for i in 0..m {
                        self.xb[i] -= dir * alpha[i] * t;
                    }
                    self.stat[j] = match self.stat[j] {
                        VStat::AtLower => VStat::AtUpper,
                        VStat::AtUpper => VStat::AtLower,
                        VStat::Basic => unreachable!(),
                    };
                }
                Some((r, exit_stat)) => {
                    let enter_val = self.nonbasic_value(j) + dir * t;
                    for i in 0..m {
                        self.xb[i] -= dir * alpha[i] * t;
                    }
                    let old = self.basis[r];
                    self.stat[old] = exit_stat;
                    self.basis[r] = j;
                    self.stat[j] = VStat::Basic;
                    self.xb[r] = enter_val;
                    // eta update of the inverse
                    let p = alpha[r];
                    for k in 0..m {
                        self.binv[r * m + k] /= p;
                    }
                    for i in 0..m {
                        if i == r {
                            continue;
                        }
                        let f = alpha[i];
                        if f == 0.0 {
                            continue;
                        }
                        for k in 0..m {
                            self.binv[i * m + k] -= f * self.binv[r * m + k];
                        }
                    }
                    since_refactor += 1;
                }
            }
        }
        LpStatus::IterLimit
    }
}

enum ColIter<'a> {
    Slice(std::slice::Iter<'a, (usize, f64)>),
    Art(Option<(usize, f64)>),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::{MilpModel, ObjSense, Sense, VarKind};

    fn solve(model: &MilpModel) -> LpSolution {
        let sf = StandardForm::from_model(model);
        let lb: Vec<f64> = model.variables().iter().map(|v| v.lower).collect();
        let ub: Vec<f64> = model.variables().iter().map(|v| v.upper).collect();
        solve_lp(&sf, &lb, &ub)
    }

    #[test]
    fn small_max_lp() {
        // max 3a + 2b s.t. a + b <= 4, a + 3b <= 6, a,b in [0, 10]
        let mut m = MilpModel::new();
        let a = m.add_variable("a", VarKind::Continuous, 0.0, 10.0, 0).unwrap();
        let b = m.add_variable("b", VarKind::Continuous, 0.0, 10.0, 0).unwrap();
        m.add_linear_constraint("c1", vec![(a, 1.0), (b, 1.0)], Sense::Le, 4.0)
            .unwrap();
        m.add_linear_constraint("c2", vec![(a, 1.0), (b, 3.0)], Sense::Le, 6.0)
            .unwrap();
        m.set_objective(ObjSense::Max, vec![(a, 3.0), (b, 2.0)]).unwrap();
        let sol = solve(&m);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - (-12.0)).abs() < 1e-6, "obj {}", sol.objective);
        assert!((sol.x[0] - 4.0).abs() < 1e-6);
        assert!(sol.x[1].abs() < 1e-6);
    }

    #[test]
    fn equality_and_ge_rows() {
        // min a + b s.t. a + b = 3, a - b >= 1 -> a = 2, b = 1
        let mut m = MilpModel::new();
        let a = m.add_variable("a", VarKind::Continuous, 0.0, 10.0, 0).unwrap();
        let b = m.add_variable("b", VarKind::Continuous, 0.0, 10.0, 0).unwrap();
        m.add_linear_constraint("sum", vec![(a, 1.0), (b, 1.0)], Sense::Eq, 3.0)
            .unwrap();
        m.add_linear_constraint("diff", vec![(a, 1.0), (b, -1.0)], Sense::Ge, 1.0)
            .unwrap();
        m.set_objective(ObjSense::Min, vec![(a, 1.0), (b, 1.0)]).unwrap();
        let sol = solve(&m);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - 3.0).abs() < 1e-7);
        assert!(sol.x[0] >= sol.x[1] + 1.0 - 1e-7);
    }

    #[test]
    fn infeasible_detected() {
        let mut m = MilpModel::new();
        let a = m.add_variable("a", VarKind::Continuous, 0.0, 1.0, 0).unwrap();
        m.add_linear_constraint("c", vec![(a, 1.0)], Sense::Ge, 2.0).unwrap();
        let sol = solve(&m);
        assert_eq!(sol.status, LpStatus::Infeasible);
    }

    #[test]
    fn negative_bounds() {
        // min t, t in [-5, 5], t >= -3
        let mut m = MilpModel::new();
        let t = m.add_variable("t", VarKind::Continuous, -5.0, 5.0, 0).unwrap();
        m.add_linear_constraint("c", vec![(t, 1.0)], Sense::Ge, -3.0).unwrap();
        m.set_objective(ObjSense::Min, vec![(t, 1.0)]).unwrap();
        let sol = solve(&m);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.x[0] + 3.0).abs() < 1e-7);
    }

    #[test]
    fn degenerate_rows_ok() {
        // redundant equalities around a fixed point
        let mut m = MilpModel::new();
        let a = m.add_variable("a", VarKind::Continuous, 0.0, 2.0, 0).unwrap();
        let b = m.add_variable("b", VarKind::Continuous, 0.0, 2.0, 0).unwrap();
        m.add_linear_constraint("e1", vec![(a, 1.0), (b, 1.0)], Sense::Eq, 2.0)
            .unwrap();
        m.add_linear_constraint("e2", vec![(a, 2.0), (b, 2.0)], Sense::Le, 4.0)
            .unwrap();
        m.add_linear_constraint("e3", vec![(a, 1.0)], Sense::Le, 1.0).unwrap();
        m.set_objective(ObjSense::Max, vec![(a, 1.0)]).unwrap();
        let sol = solve(&m);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.x[0] - 1.0).abs() < 1e-7);
        assert!((sol.x[1] - 1.0).abs() < 1e-7);
    }
}
