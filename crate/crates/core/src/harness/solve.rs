use super::adapter::{run_solver, SolverAdapter, SolverStatus};
use super::HarnessError;
use crate::encode::{decode_request, encode, Encoding, Formulation};
use crate::mipir::{census, Census, VarKind};
use crate::model::{xi, DeliveryRoutingSolution, Instance};
use crate::validate::{validate_solution, LoadRule, ValidationReport};

pub const DEFAULT_TIME_LIMIT_S: u64 = 600;

/// Relative tolerance for objective comparisons, scaled by `max(1, |xi|)`.
pub const OBJECTIVE_TOL: f64 = 1e-6;

const FEASIBILITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub formulation: Formulation,
    pub solver: String,
    pub status: SolverStatus,
    /// Objective reported by the solver, or the model objective at its
    /// assignment when the solver reports none.
    pub objective: Option<f64>,
    /// `xi` of the decoded solution.
    pub xi: Option<f64>,
    pub solution: Option<DeliveryRoutingSolution>,
    /// Raw request-graph node paths, request formulation only.
    pub node_paths: Option<Vec<Vec<usize>>>,
    pub wall_time_s: f64,
    pub report: ValidationReport,
    pub census: Census,
}

/// Encodes, solves externally, decodes, validates and rescores.
pub fn solve(
    instance: &Instance,
    formulation: Formulation,
    adapter: &SolverAdapter,
    time_limit_s: u64,
) -> Result<SolveOutcome, HarnessError> {
    solve_encoding(instance, &encode(instance, formulation), adapter, time_limit_s)
}

/// [`solve`] on a prebuilt (possibly modified) encoding of `instance`.
pub fn solve_encoding(
    instance: &Instance,
    encoding: &Encoding,
    adapter: &SolverAdapter,
    time_limit_s: u64,
) -> Result<SolveOutcome, HarnessError> {
    let model = encoding.model();
    let run = run_solver(model, adapter, time_limit_s)?;
    let mut outcome = SolveOutcome {
        formulation: encoding.formulation(),
        solver: adapter.name.clone(),
        status: run.status,
        objective: run.objective,
        xi: None,
        solution: None,
        node_paths: None,
        wall_time_s: run.wall_time_s,
        report: ValidationReport::default(),
        census: census(model),
    };
    let Some(mut values) = run.values.filter(|_| run.status.has_solution()) else {
        return Ok(outcome);
    };

    let (viol, var) = model.max_domain_violation(&values);
    if viol > FEASIBILITY_TOL {
        let name = var.map_or("?", |v| v.name.as_str());
        return Err(HarnessError::InvalidAssignment(format!(
            "{name} off its domain by {viol:e}"
        )));
    }
    let (viol, row) = model.max_row_violation(&values);
    if viol > FEASIBILITY_TOL {
        let name = row.map_or("?", |r| r.name.as_str());
        return Err(HarnessError::InvalidAssignment(format!("row {name} violated by {viol:e}")));
    }
    for (v, x) in model.variables().iter().zip(values.iter_mut()) {
        if v.kind != VarKind::Continuous {
            *x = x.round();
        }
    }

    let solution = match encoding {
        Encoding::Location(_) => encoding.decode(&values)?,
        Encoding::Request(enc) => {
            let decoded = decode_request(enc, &values)?;
            outcome.node_paths = Some(decoded.node_paths);
            decoded.solution
        }
    };
    let rule = match encoding.formulation() {
        Formulation::Location => LoadRule::Netted,
        Formulation::Request => LoadRule::PickupFirst,
    };
    let report = validate_solution(&solution, instance, rule);
    if !report.is_clean() {
        return Err(HarnessError::ValidatorRejected(report));
    }
    let value = xi(&solution, instance).map_err(|e| HarnessError::InvalidAssignment(e.to_string()))?;
    let claimed = run.objective.unwrap_or_else(|| model.objective_value(&values));
    if (claimed - value).abs() > OBJECTIVE_TOL * value.abs().max(1.0) {
        return Err(HarnessError::ObjectiveMismatch { solver: claimed, xi: value });
    }
    outcome.objective = Some(claimed);
    outcome.xi = Some(value);
    outcome.solution = Some(solution);
    outcome.report = report;
    Ok(outcome)
}
