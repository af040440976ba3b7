//! Solver-agnostic representation of a mixed-integer linear program.
//!
//! A [`MilpModel`] is an ordered list of variables and constraints plus an
//! objective. Construction is deterministic: building the same model twice
//! yields identical variable order, constraint order and LP text.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

/// Index of a variable within its model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub usize);

/// Index of a constraint within its model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConstraintId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    Continuous,
}

#[derive(Debug, Clone)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lower: f64,
    pub upper: f64,
    /// Higher values branch earlier during branch-and-bound.
    pub branch_priority: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct LinearConstraint {
    pub name: String,
    /// Sorted by variable id; coefficients merged, zero terms dropped.
    pub terms: Vec<(VarId, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjSense {
    Min,
    Max,
}

#[derive(Debug, Clone)]
pub struct Objective {
    pub sense: ObjSense,
    pub terms: Vec<(VarId, f64)>,
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("duplicate variable name `{0}`")]
    DuplicateName(String),
    #[error("variable `{0}`: lower bound {1} exceeds upper bound {2}")]
    InvertedBounds(String, f64, f64),
    #[error("binary variable `{0}` must have bounds within [0, 1]")]
    BadBinaryBounds(String),
    #[error("unknown variable id {0:?}")]
    UnknownVariable(VarId),
    #[error("malformed solution line {0}: `{1}`")]
    MalformedSolutionLine(usize, String),
    #[error("solution references unknown variable `{0}`")]
    UnknownSolutionVariable(String),
}

#[derive(Debug, Clone, Default)]
pub struct MilpModel {
    variables: Vec<Variable>,
    constraints: Vec<LinearConstraint>,
    objective: Option<Objective>,
    name_index: HashMap<String, VarId>,
}

impl MilpModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_variable(
        &mut self,
        name: impl Into<String>,
        kind: VarKind,
        lower: f64,
        upper: f64,
        branch_priority: i32,
    ) -> Result<VarId, ModelError> {
        let name = name.into();
        if self.name_index.contains_key(&name) {
            return Err(ModelError::DuplicateName(name));
        }
        if lower > upper {
            return Err(ModelError::InvertedBounds(name, lower, upper));
        }
        if kind == VarKind::Binary && !(lower >= 0.0 && upper <= 1.0) {
            return Err(ModelError::BadBinaryBounds(name));
        }
        let id = VarId(self.variables.len());
        self.name_index.insert(name.clone(), id);
        self.variables.push(Variable {
            name,
            kind,
            lower,
            upper,
            branch_priority,
        });
        Ok(id)
    }

    pub fn add_linear_constraint(
        &mut self,
        name: impl Into<String>,
        terms: Vec<(VarId, f64)>,
        sense: Sense,
        rhs: f64,
    ) -> Result<ConstraintId, ModelError> {
        let terms = self.merge_terms(terms)?;
        let id = ConstraintId(self.constraints.len());
        self.constraints.push(LinearConstraint {
            name: name.into(),
            terms,
            sense,
            rhs,
        });
        Ok(id)
    }

    pub fn set_objective(
        &mut self,
        sense: ObjSense,
        terms: Vec<(VarId, f64)>,
    ) -> Result<(), ModelError> {
        let terms = self.merge_terms(terms)?;
        self.objective = Some(Objective { sense, terms });
        Ok(())
    }

    fn merge_terms(&self, terms: Vec<(VarId, f64)>) -> Result<Vec<(VarId, f64)>, ModelError> {
        let mut merged: Vec<(VarId, f64)> = Vec::with_capacity(terms.len());
        for (id, coef) in terms {
            if id.0 >= self.variables.len() {
                return Err(ModelError::UnknownVariable(id));
            }
            merged.push((id, coef));
        }
        merged.sort_by_key(|(id, _)| *id);
        let mut out: Vec<(VarId, f64)> = Vec::with_capacity(merged.len());
        for (id, coef) in merged {
            match out.last_mut() {
                Some((last, acc)) if *last == id => *acc += coef,
                _ => out.push((id, coef)),
            }
        }
        out.retain(|(_, c)| *c != 0.0);
        Ok(out)
    }

    pub fn tighten_bounds(&mut self, id: VarId, lower: f64, upper: f64) -> Result<(), ModelError> {
        let var = self
            .variables
            .get_mut(id.0)
            .ok_or(ModelError::UnknownVariable(id))?;
        let lo = var.lower.max(lower);
        let hi = var.upper.min(upper);
        if lo > hi {
            return Err(ModelError::InvertedBounds(var.name.clone(), lo, hi));
        }
        var.lower = lo;
        var.upper = hi;
        Ok(())
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    pub fn objective(&self) -> Option<&Objective> {
        self.objective.as_ref()
    }

    pub fn var(&self, id: VarId) -> &Variable {
        &self.variables[id.0]
    }

    pub fn var_by_name(&self, name: &str) -> Option<VarId> {
        self.name_index.get(name).copied()
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    /// Checks that every constraint references live variables. O(total terms).
    pub fn validate(&self) -> Result<(), ModelError> {
        for c in &self.constraints {
            for (id, _) in &c.terms {
                if id.0 >= self.variables.len() {
                    return Err(ModelError::UnknownVariable(*id));
                }
            }
        }
        Ok(())
    }

    /// Checks a full assignment against every bound, integrality
    /// requirement, and constraint; returns the first violation found.
    pub fn check_feasible(&self, x: &[f64], tol: f64) -> Result<(), String> {
        if x.len() != self.variables.len() {
            return Err(format!(
                "assignment has {} values for {} variables",
                x.len(),
                self.variables.len()
            ));
        }
        for (j, v) in self.variables.iter().enumerate() {
            if x[j] < v.lower - tol || x[j] > v.upper + tol {
                return Err(format!(
                    "{} = {} outside [{}, {}]",
                    v.name, x[j], v.lower, v.upper
                ));
            }
            if v.kind == VarKind::Binary && (x[j] - x[j].round()).abs() > tol {
                return Err(format!("{} = {} not integral", v.name, x[j]));
            }
        }
        for c in &self.constraints {
            let lhs: f64 = c.terms.iter().map(|&(id, a)| a * x[id.0]).sum();
            let ok = match c.sense {
                Sense::Le => lhs <= c.rhs + tol,
                Sense::Ge => lhs >= c.rhs - tol,
                Sense::Eq => (lhs - c.rhs).abs() <= tol,
            };
            if !ok {
                return Err(format!(
                    "constraint {} violated: lhs {} vs rhs {}",
                    c.name, lhs, c.rhs
                ));
            }
        }
        Ok(())
    }

    /// Emits the model in the CPLEX-LP text dialect.
    ///
    /// Sections: Minimize/Maximize, Subject To, Bounds, Binaries, End.
    /// Output is byte-deterministic for identical models.
    pub fn write_lp_format(&self) -> String {
        let mut out = String::new();
        let (sense, obj_terms): (&str, &[(VarId, f64)]) = match &self.objective {
            Some(o) => (
                match o.sense {
                    ObjSense::Min => "Minimize",
                    ObjSense::Max => "Maximize",
                },
                &o.terms,
            ),
            None => ("Minimize", &[]),
        };
        out.push_str(sense);
        out.push('\n');
        out.push_str(" obj:");
        if obj_terms.is_empty() {
            // constant-zero objective; keep a dummy reference so parsers accept it
            if let Some(v) = self.variables.first() {
                let _ = write!(out, " 0 {}", v.name);
            }
        } else {
            self.write_terms(&mut out, obj_terms);
        }
        out.push('\n');
        out.push_str("Subject To\n");
        for c in &self.constraints {
            let _ = write!(out, " {}:", c.name);
            self.write_terms(&mut out, &c.terms);
            let op = match c.sense {
                Sense::Le => "<=",
                Sense::Eq => "=",
                Sense::Ge => ">=",
            };
            let _ = writeln!(out, " {} {}", op, fmt_num(c.rhs));
        }
        out.push_str("Bounds\n");
        for v in &self.variables {
            if v.kind == VarKind::Binary {
                continue;
            }
            let _ = writeln!(
                out,
                " {} <= {} <= {}",
                fmt_num(v.lower),
                v.name,
                fmt_num(v.upper)
            );
        }
        let binaries: Vec<&Variable> = self
            .variables
            .iter()
            .filter(|v| v.kind == VarKind::Binary)
            .collect();
        if !binaries.is_empty() {
            out.push_str("Binaries\n");
            for v in binaries {
                let _ = writeln!(out, " {}", v.name);
            }
        }
        out.push_str("End\n");
        out
    }

    fn write_terms(&self, out: &mut String, terms: &[(VarId, f64)]) {
        for (k, (id, coef)) in terms.iter().enumerate() {
            let name = &self.variables[id.0].name;
            if k == 0 {
                let _ = write!(out, " {} {}", fmt_num(*coef), name);
            } else if *coef < 0.0 {
                let _ = write!(out, " - {} {}", fmt_num(-coef), name);
            } else {
                let _ = write!(out, " + {} {}", fmt_num(*coef), name);
            }
        }
    }

    /// Parses a plain-text assignment, one `name value` pair per line.
    /// Lines starting with `#` and blank lines are ignored. Unknown names
    /// are rejected.
    pub fn parse_solution(&self, text: &str) -> Result<HashMap<VarId, f64>, ModelError> {
        let mut out = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let (name, value) = match (it.next(), it.next(), it.next()) {
                (Some(n), Some(v), None) => (n, v),
                _ => {
                    return Err(ModelError::MalformedSolutionLine(
                        lineno + 1,
                        line.to_string(),
                    ))
                }
            };
            let id = self
                .var_by_name(name)
                .ok_or_else(|| ModelError::UnknownSolutionVariable(name.to_string()))?;
            let value: f64 = value.parse().map_err(|_| {
                ModelError::MalformedSolutionLine(lineno + 1, line.to_string())
            })?;
            out.insert(id, value);
        }
        Ok(out)
    }
}

/// Formats a coefficient with 12 significant digits; integers print exactly.
fn fmt_num(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        let s = format!("{:.11e}", v);
        // normalize "1.50000000000e-1" style exponents for readability
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_variable_basics() {
        let mut m = MilpModel::new();
        let id = m
            .add_variable("x_1_2", VarKind::Binary, 0.0, 1.0, 10)
            .unwrap();
        assert_eq!(id, VarId(0));
        let w = m
            .add_variable("w_1_2", VarKind::Continuous, 1.0, 9.0, 0)
            .unwrap();
        assert_eq!(m.var(w).lower, 1.0);
        assert_eq!(m.var(w).upper, 9.0);
        assert!(matches!(
            m.add_variable("x_1_2", VarKind::Binary, 0.0, 1.0, 0),
            Err(ModelError::DuplicateName(_))
        ));
        assert!(matches!(
            m.add_variable("bad", VarKind::Continuous, 2.0, 1.0, 0),
            Err(ModelError::InvertedBounds(..))
        ));
    }

    #[test]
    fn constraint_terms_merge() {
        let mut m = MilpModel::new();
        let v = m.add_variable("v", VarKind::Continuous, 0.0, 1.0, 0).unwrap();
        let c = m
            .add_linear_constraint("c", vec![(v, 1.0), (v, 2.0)], Sense::Le, 5.0)
            .unwrap();
        assert_eq!(m.constraints()[c.0].terms, vec![(v, 3.0)]);
        assert!(matches!(
            m.add_linear_constraint("bad", vec![(VarId(9), 1.0)], Sense::Le, 0.0),
            Err(ModelError::UnknownVariable(_))
        ));
    }

    #[test]
    fn degree_constraint_example() {
        let mut m = MilpModel::new();
        let x12 = m.add_variable("x_1_2", VarKind::Binary, 0.0, 1.0, 10).unwrap();
        let x13 = m.add_variable("x_1_3", VarKind::Binary, 0.0, 1.0, 10).unwrap();
        m.add_linear_constraint("deg_1", vec![(x12, 1.0), (x13, 1.0)], Sense::Eq, 2.0)
            .unwrap();
        assert_eq!(m.num_constraints(), 1);
    }

    #[test]
    fn objective_modes() {
        let mut m = MilpModel::new();
        let s = m.add_variable("s", VarKind::Continuous, 0.0, 9.0, 0).unwrap();
        m.set_objective(ObjSense::Min, vec![(s, 1.0)]).unwrap();
        assert_eq!(m.objective().unwrap().sense, ObjSense::Min);
        m.set_objective(ObjSense::Min, vec![]).unwrap();
        assert!(m.objective().unwrap().terms.is_empty());
        assert!(m.set_objective(ObjSense::Max, vec![(VarId(7), 1.0)]).is_err());
    }

    #[test]
    fn lp_format_sections_and_determinism() {
        let mut m = MilpModel::new();
        let x = m.add_variable("x", VarKind::Binary, 0.0, 1.0, 0).unwrap();
        m.set_objective(ObjSense::Min, vec![(x, 1.0)]).unwrap();
        let text = m.write_lp_format();
        assert!(text.contains("Minimize"));
        assert!(text.contains("Binaries"));
        assert!(text.ends_with("End\n"));
        assert_eq!(text, m.write_lp_format());
    }

    #[test]
    fn solution_parse_roundtrip() {
        let mut m = MilpModel::new();
        let x = m.add_variable("x_1_2", VarKind::Binary, 0.0, 1.0, 0).unwrap();
        let sol = m.parse_solution("# comment\nx_1_2 1\n").unwrap();
        assert_eq!(sol[&x], 1.0);
        assert!(m.parse_solution("nope 1").is_err());
        assert!(m.parse_solution("x_1_2").is_err());
    }
}
