//! Profit-maximizing pickup and delivery selection: instance generation,
//! location- and request-based MIP encoders, an exact oracle and a solver
//! harness.

pub mod cli;
pub mod encode;
pub mod fixtures;
pub mod format;
pub mod harness;
pub mod instgen;
pub mod mipir;
pub mod model;
pub mod validate;

pub use model::{
    load_profile, plan_value, xi, DeliveryRoutingSolution, Instance, InstanceMeta, LoadStop,
    Location, LocationGraph, ModelError, Request, Stop, StopAction, Truck, TruckPlan, DEPOT,
};
pub use validate::{
    validate_plan, validate_route, validate_schedule, validate_solution, LoadRule,
    ValidationReport, Violation,
};
