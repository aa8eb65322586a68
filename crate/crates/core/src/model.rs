//! Solver-independent sparse linear and integer programs.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dag::Node;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("duplicate variable name {0:?}")]
    DuplicateVariable(String),
    #[error("constraint {constraint:?} references undeclared variable index {index}")]
    UndeclaredVariable { constraint: String, index: usize },
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarKind {
    Continuous,
    Binary,
    Integer,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

/// Which program a model encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Formulation {
    /// Arborescence coloring program.
    Cg,
    /// Max-weight chain LP below one DAG node.
    Lc,
    /// Dual of `Lc`.
    Dlc,
    /// Independent-set dual LP.
    Isd,
    /// Fractional coloring LP.
    Fcp,
    /// Classical assignment coloring program.
    Cl,
    /// Asymmetric representatives program.
    As,
    /// Layered arborescence program for bounded stack height.
    Cgh,
    /// Anything else, e.g. a model read back from a file.
    Custom,
}

impl Formulation {
    pub fn tag(self) -> &'static str {
        match self {
            Formulation::Cg => "cg",
            Formulation::Lc => "lc",
            Formulation::Dlc => "dlc",
            Formulation::Isd => "isd",
            Formulation::Fcp => "fcp",
            Formulation::Cl => "cl",
            Formulation::As => "as",
            Formulation::Cgh => "cgh",
            Formulation::Custom => "custom",
        }
    }
}

/// What a variable stands for, so solutions can be mapped back to arcs,
/// labels and colors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum VarRole {
    /// Arc `(from, to)` of the containment DAG.
    Arc { from: Node, to: usize },
    /// Arc `((from . layer), (to . layer + 1))` of the layered DAG; the
    /// root arcs use `from = Root, layer = 0`.
    LayeredArc { from: Node, layer: usize, to: usize },
    /// The color count `c`.
    ColorCount,
    /// Dual variable of sweep row `point` below `owner`.
    RowDual { owner: Node, point: u32 },
    /// Recursion label of a vertex.
    Label { vertex: usize },
    /// Vertex `vertex` takes color `color` (1-based).
    Assign { vertex: usize, color: usize },
    /// Color `color` is used.
    ColorUsed { color: usize },
    /// `representative` represents `vertex`'s color class.
    Represents { representative: usize, vertex: usize },
    Other,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|&(j, a)| a * x[j]).sum()
    }

    /// Amount by which `x` violates the row (0 when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs = self.activity(x);
        match self.relation {
            Relation::Le => (lhs - self.rhs).max(0.0),
            Relation::Ge => (self.rhs - lhs).max(0.0),
            Relation::Eq => (lhs - self.rhs).abs(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpModel {
    pub name: String,
    pub formulation: Formulation,
    pub sense: Sense,
    pub variables: Vec<Variable>,
    pub objective: Vec<(usize, f64)>,
    pub constraints: Vec<Constraint>,
    roles: Vec<VarRole>,
    by_name: HashMap<String, usize>,
    by_role: HashMap<VarRole, usize>,
}

impl LpModel {
    pub fn new(name: impl Into<String>, formulation: Formulation, sense: Sense) -> Self {
        LpModel {
            name: name.into(),
            formulation,
            sense,
            variables: Vec::new(),
            objective: Vec::new(),
            constraints: Vec::new(),
            roles: Vec::new(),
            by_name: HashMap::new(),
            by_role: HashMap::new(),
        }
    }

    pub fn add_variable(
        &mut self,
        name: impl Into<String>,
        kind: VarKind,
        lower: f64,
        upper: f64,
        role: VarRole,
    ) -> Result<usize, ModelError> {
        let name = name.into();
        if self.by_name.contains_key(&name) {
            return Err(ModelError::DuplicateVariable(name));
        }
        let idx = self.variables.len();
        self.by_name.insert(name.clone(), idx);
        if role != VarRole::Other {
            self.by_role.insert(role, idx);
        }
        self.variables.push(Variable {
            name,
            kind,
            lower,
            upper,
        });
        self.roles.push(role);
        Ok(idx)
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        terms: Vec<(usize, f64)>,
        relation: Relation,
        rhs: f64,
    ) {
        self.constraints.push(Constraint {
            name: name.into(),
            terms,
            relation,
            rhs,
        });
    }

    pub fn set_objective(&mut self, terms: Vec<(usize, f64)>) {
        self.objective = terms;
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn var(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn var_by_role(&self, role: &VarRole) -> Option<usize> {
        self.by_role.get(role).copied()
    }

    pub fn role(&self, idx: usize) -> VarRole {
        self.roles[idx]
    }

    /// Every constraint references declared variables and names are unique.
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.by_name.len() != self.variables.len() {
            let mut seen = HashMap::new();
            for v in &self.variables {
                if seen.insert(v.name.as_str(), ()).is_some() {
                    return Err(ModelError::DuplicateVariable(v.name.clone()));
                }
            }
        }
        let n = self.variables.len();
        for c in &self.constraints {
            if let Some(&(index, _)) = c.terms.iter().find(|&&(j, _)| j >= n) {
                return Err(ModelError::UndeclaredVariable {
                    constraint: c.name.clone(),
                    index,
                });
            }
        }
        if let Some(&(index, _)) = self.objective.iter().find(|&&(j, _)| j >= n) {
            return Err(ModelError::UndeclaredVariable {
                constraint: "objective".into(),
                index,
            });
        }
        Ok(())
    }

    /// Linear relaxation: binaries become `[0, 1]` continuous variables and
    /// integers keep their bounds.
    pub fn relaxed(&self) -> LpModel {
        let mut out = self.clone();
        for v in &mut out.variables {
            if v.kind == VarKind::Binary {
                v.lower = v.lower.max(0.0);
                v.upper = v.upper.min(1.0);
            }
            v.kind = VarKind::Continuous;
        }
        out
    }

    pub fn has_integers(&self) -> bool {
        self.variables.iter().any(|v| v.kind != VarKind::Continuous)
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().map(|&(j, c)| c * x[j]).sum()
    }

    /// Largest row or bound violation of `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let rows = self
            .constraints
            .iter()
            .map(|c| c.violation(x))
            .fold(0.0, f64::max);
        let bounds = self
            .variables
            .iter()
            .zip(x)
            .map(|(v, &val)| (v.lower - val).max(val - v.upper).max(0.0))
            .fold(0.0, f64::max);
        rows.max(bounds)
    }

    /// Integer and binary variables are integral within `tol`.
    pub fn is_integral(&self, x: &[f64], tol: f64) -> bool {
        self.variables
            .iter()
            .zip(x)
            .all(|(v, &val)| v.kind == VarKind::Continuous || (val - val.round()).abs() <= tol)
    }

    pub fn metadata(&self) -> ModelMetadata {
        ModelMetadata {
            name: self.name.clone(),
            formulation: self.formulation,
            variables: self
                .variables
                .iter()
                .zip(&self.roles)
                .enumerate()
                .map(|(index, (v, &role))| VariableInfo {
                    index,
                    name: v.name.clone(),
                    kind: v.kind,
                    role,
                })
                .collect(),
        }
    }

    /// Restore formulation and variable roles from a metadata sidecar,
    /// matching variables by name.
    pub fn apply_metadata(&mut self, meta: &ModelMetadata) -> Result<(), ModelError> {
        for info in &meta.variables {
            let j = self
                .var(&info.name)
                .ok_or_else(|| ModelError::UnknownVariable(info.name.clone()))?;
            self.roles[j] = info.role;
            if info.role != VarRole::Other {
                self.by_role.insert(info.role, j);
            }
        }
        self.formulation = meta.formulation;
        Ok(())
    }

    /// Build a dense value vector from `(name, value)` pairs; names not
    /// listed are 0.
    pub fn values_from_named<'a>(
        &self,
        named: impl IntoIterator<Item = (&'a str, f64)>,
    ) -> Result<Vec<f64>, ModelError> {
        let mut x = vec![0.0; self.variables.len()];
        for (name, value) in named {
            let j = self
                .var(name)
                .ok_or_else(|| ModelError::UnknownVariable(name.to_string()))?;
            x[j] = value;
        }
        Ok(x)
    }
}

/// JSON sidecar mapping variable names to the objects they encode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelMetadata {
    pub name: String,
    pub formulation: Formulation,
    pub variables: Vec<VariableInfo>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariableInfo {
    pub index: usize,
    pub name: String,
    pub kind: VarKind,
    pub role: VarRole,
}

impl ModelMetadata {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("metadata serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Arcs of the containment DAG whose variable is 1 (above 0.5) in a
    /// solution given by variable name.
    pub fn selected_arcs(&self, values: &HashMap<String, f64>) -> Vec<(Node, usize)> {
        self.variables
            .iter()
            .filter(|v| values.get(&v.name).copied().unwrap_or(0.0) > 0.5)
            .filter_map(|v| match v.role {
                VarRole::Arc { from, to } => Some((from, to)),
                VarRole::LayeredArc { from, to, .. } => Some((from, to)),
                _ => None,
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_names_rejected() {
        let mut m = LpModel::new("t", Formulation::Custom, Sense::Minimize);
        m.add_variable("x", VarKind::Continuous, 0.0, 1.0, VarRole::Other).unwrap();
        assert_eq!(
            m.add_variable("x", VarKind::Binary, 0.0, 1.0, VarRole::Other),
            Err(ModelError::DuplicateVariable("x".into()))
        );
    }

    #[test]
    fn validate_catches_bad_index() {
        let mut m = LpModel::new("t", Formulation::Custom, Sense::Minimize);
        m.add_variable("x", VarKind::Continuous, 0.0, 1.0, VarRole::Other).unwrap();
        m.add_constraint("r", vec![(0, 1.0), (3, 1.0)], Relation::Le, 1.0);
        assert!(matches!(m.validate(), Err(ModelError::UndeclaredVariable { index: 3, .. })));
    }

    #[test]
    fn relax_and_violation() {
        let mut m = LpModel::new("t", Formulation::Custom, Sense::Minimize);
        let x = m.add_variable("x", VarKind::Binary, 0.0, 1.0, VarRole::Other).unwrap();
        let c = m
            .add_variable("c", VarKind::Integer, 0.0, f64::INFINITY, VarRole::ColorCount)
            .unwrap();
        m.add_constraint("cap", vec![(x, 1.0), (c, -1.0)], Relation::Le, 0.0);
        let r = m.relaxed();
        assert!(!r.has_integers());
        assert_eq!(r.variables[0].upper, 1.0);
        assert_eq!(m.max_violation(&[1.0, 0.5]), 0.5);
        assert!(!m.is_integral(&[1.0, 0.5], 1e-6));
        assert_eq!(m.var_by_role(&VarRole::ColorCount), Some(1));
    }

    #[test]
    fn metadata_json_round_trip() {
        let mut m = LpModel::new("t", Formulation::Cg, Sense::Minimize);
        m.add_variable(
            "x_0_1",
            VarKind::Binary,
            0.0,
            1.0,
            VarRole::Arc { from: Node::Root, to: 0 },
        )
        .unwrap();
        let meta = m.metadata();
        let back = ModelMetadata::from_json(&meta.to_json()).unwrap();
        assert_eq!(back, meta);
        let values = HashMap::from([("x_0_1".to_string(), 1.0)]);
        assert_eq!(back.selected_arcs(&values), vec![(Node::Root, 0)]);
    }
}
