//! Solver-agnostic mixed-integer model: variables with bounds and kinds,
//! linear rows, a maximization objective, and role tags used by decoders.

mod lp;
mod solution;

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use smallvec::SmallVec;

use thiserror::Error;

pub use lp::{emit_lp, parse_lp, LpParseError};
pub use solution::{parse_solution, ParsedSolution, SolutionParseError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MipError {
    #[error("illegal name {0:?}")]
    IllegalName(String),
    #[error("duplicate variable name {0:?}")]
    DuplicateVariable(String),
    #[error("duplicate row name {0:?}")]
    DuplicateRow(String),
    #[error("row {0:?} has no terms")]
    EmptyRow(String),
    #[error("row {row:?} references undeclared variable #{var}")]
    UnknownVariable { row: String, var: usize },
    #[error("variable {name:?} has bounds [{lower}, {upper}]")]
    BadBounds { name: String, lower: f64, upper: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    Binary,
    Integer,
    Continuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowSense {
    Le,
    Ge,
    Eq,
}

impl fmt::Display for RowSense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowSense::Le => "<=",
            RowSense::Ge => ">=",
            RowSense::Eq => "=",
        })
    }
}

/// Decode hint attached to a variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    /// Arc `o -> d` driven by `truck`.
    X { truck: usize, o: usize, d: usize },
    /// Request `r` served by `truck`.
    Y { truck: usize, r: usize },
    /// Visit order of node `v`.
    U { truck: usize, v: usize },
    /// Load when departing node `v`.
    H { truck: usize, v: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub usize);

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lower: f64,
    pub upper: f64,
    pub objective: f64,
    pub role: Option<Role>,
}

/// Row coefficients; rows of up to four terms are stored inline.
pub type RowTerms = SmallVec<[(VarId, f64); 4]>;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearRow {
    pub name: String,
    pub terms: RowTerms,
    pub sense: RowSense,
    pub rhs: f64,
}

impl LinearRow {
    pub fn activity(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, c)| c * values[v.0]).sum()
    }

    /// Amount by which `values` violates this row, 0 when satisfied.
    pub fn violation(&self, values: &[f64]) -> f64 {
        let lhs = self.activity(values);
        match self.sense {
            RowSense::Le => (lhs - self.rhs).max(0.0),
            RowSense::Ge => (self.rhs - lhs).max(0.0),
            RowSense::Eq => (lhs - self.rhs).abs(),
        }
    }
}

/// `(number of variables, number of rows)`; bounds are not rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Census {
    pub num_vars: usize,
    pub num_rows: usize,
}

impl fmt::Display for Census {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vars={} rows={}", self.num_vars, self.num_rows)
    }
}

/// A maximization model.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MipModel {
    variables: Vec<Variable>,
    rows: Vec<LinearRow>,
    /// Built on first lookup.
    by_name: OnceLock<HashMap<String, VarId>>,
}

/// `indexed_name("x", &[("t", 0), ("o", 3)])` is `"x_t0_o3"`.
pub fn indexed_name(prefix: &str, parts: &[(&str, usize)]) -> String {
    let mut name = String::with_capacity(prefix.len() + 6 * parts.len());
    name.push_str(prefix);
    let mut digits = [0u8; 20];
    for &(tag, mut value) in parts {
        name.push('_');
        name.push_str(tag);
        let mut i = digits.len();
        loop {
            i -= 1;
            digits[i] = b'0' + (value % 10) as u8;
            value /= 10;
            if value == 0 {
                break;
            }
        }
        name.extend(digits[i..].iter().map(|&b| char::from(b)));
    }
    name
}

fn has_repeats(terms: &[(VarId, f64)]) -> bool {
    let mut ids: Vec<usize> = terms.iter().map(|(v, _)| v.0).collect();
    ids.sort_unstable();
    ids.windows(2).any(|w| w[0] == w[1])
}

pub fn is_legal_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl MipModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(num_vars: usize, num_rows: usize) -> Self {
        Self {
            variables: Vec::with_capacity(num_vars),
            rows: Vec::with_capacity(num_rows),
            by_name: OnceLock::new(),
        }
    }

    /// Declares a variable. Duplicate names are reported by [`MipModel::check`].
    pub fn add_var(
        &mut self,
        name: impl Into<String>,
        kind: VarKind,
        lower: f64,
        upper: f64,
        objective: f64,
    ) -> VarId {
        let name = name.into();
        let id = VarId(self.variables.len());
        self.by_name = OnceLock::new();
        self.variables.push(Variable { name, kind, lower, upper, objective, role: None });
        id
    }

    pub fn add_role_var(
        &mut self,
        name: impl Into<String>,
        kind: VarKind,
        lower: f64,
        upper: f64,
        objective: f64,
        role: Role,
    ) -> VarId {
        let id = self.add_var(name, kind, lower, upper, objective);
        self.variables[id.0].role = Some(role);
        id
    }

    /// Appends a row, merging repeated variables. Zero coefficients are kept.
    pub fn add_row(
        &mut self,
        name: impl Into<String>,
        terms: impl IntoIterator<Item = (VarId, f64)>,
        sense: RowSense,
        rhs: f64,
    ) {
        let mut terms: RowTerms = terms.into_iter().collect();
        if terms.len() <= 16 {
            let mut kept = 0;
            for i in 0..terms.len() {
                let (v, c) = terms[i];
                match terms[..kept].iter_mut().find(|(w, _)| *w == v) {
                    Some(slot) => slot.1 += c,
                    None => {
                        terms[kept] = (v, c);
                        kept += 1;
                    }
                }
            }
            terms.truncate(kept);
        } else if has_repeats(&terms) {
            let mut merged = RowTerms::with_capacity(terms.len());
            let mut slot: HashMap<VarId, usize> = HashMap::with_capacity(terms.len());
            for (v, c) in terms {
                match slot.get(&v) {
                    Some(&i) => merged[i].1 += c,
                    None => {
                        slot.insert(v, merged.len());
                        merged.push((v, c));
                    }
                }
            }
            terms = merged;
        }
        self.rows.push(LinearRow { name: name.into(), terms, sense, rhs });
    }

    pub fn set_objective(&mut self, var: VarId, coef: f64) {
        self.variables[var.0].objective = coef;
    }

    pub fn set_bounds(&mut self, var: VarId, lower: f64, upper: f64) {
        let v = &mut self.variables[var.0];
        v.lower = lower;
        v.upper = upper;
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn rows(&self) -> &[LinearRow] {
        &self.rows
    }

    pub fn var(&self, id: VarId) -> &Variable {
        &self.variables[id.0]
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.by_name
            .get_or_init(|| {
                let mut index = HashMap::with_capacity(self.variables.len());
                for (i, v) in self.variables.iter().enumerate() {
                    index.entry(v.name.clone()).or_insert(VarId(i));
                }
                index
            })
            .get(name)
            .copied()
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    /// Checks names, bounds, row terms and row-name uniqueness.
    pub fn check(&self) -> Result<(), MipError> {
        let mut names = HashMap::with_capacity(self.variables.len());
        for v in &self.variables {
            if names.insert(v.name.as_str(), ()).is_some() {
                return Err(MipError::DuplicateVariable(v.name.clone()));
            }
            if !is_legal_name(&v.name) {
                return Err(MipError::IllegalName(v.name.clone()));
            }
            let binary_ok = v.kind != VarKind::Binary || (v.lower >= 0.0 && v.upper <= 1.0);
            if v.lower.is_nan() || v.upper.is_nan() || v.lower > v.upper || !binary_ok {
                return Err(MipError::BadBounds { name: v.name.clone(), lower: v.lower, upper: v.upper });
            }
        }
        let mut seen = HashMap::new();
        for row in &self.rows {
            if !is_legal_name(&row.name) {
                return Err(MipError::IllegalName(row.name.clone()));
            }
            if seen.insert(row.name.as_str(), ()).is_some() {
                return Err(MipError::DuplicateRow(row.name.clone()));
            }
            if row.terms.is_empty() {
                return Err(MipError::EmptyRow(row.name.clone()));
            }
            if let Some(&(v, _)) = row.terms.iter().find(|(v, _)| v.0 >= self.variables.len()) {
                return Err(MipError::UnknownVariable { row: row.name.clone(), var: v.0 });
            }
        }
        Ok(())
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.variables.iter().zip(values).map(|(v, x)| v.objective * x).sum()
    }

    /// Largest row violation at `values`.
    pub fn max_row_violation(&self, values: &[f64]) -> (f64, Option<&LinearRow>) {
        let mut worst = (0.0, None);
        for row in &self.rows {
            let viol = row.violation(values);
            if viol > worst.0 {
                worst = (viol, Some(row));
            }
        }
        worst
    }

    /// Largest bound or integrality violation at `values`, with the variable.
    pub fn max_domain_violation(&self, values: &[f64]) -> (f64, Option<&Variable>) {
        let mut worst = (0.0, None);
        for (v, &x) in self.variables.iter().zip(values) {
            let mut viol = (v.lower - x).max(x - v.upper).max(0.0);
            if v.kind != VarKind::Continuous {
                viol = viol.max((x - x.round()).abs());
            }
            if viol > worst.0 {
                worst = (viol, Some(v));
            }
        }
        worst
    }
}

pub fn census(model: &MipModel) -> Census {
    Census { num_vars: model.variables.len(), num_rows: model.rows.len() }
}
