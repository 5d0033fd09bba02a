//! The two rival MIP formulations and their decoders.

mod location;
mod request;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::mipir::{Census, MipModel};
use crate::model::{DeliveryRoutingSolution, Instance};

pub use location::{decode_location, encode_location, predicted_counts_location, LocationEncoding};
pub use request::{
    decode_request, encode_request, predicted_counts_request, RequestDecoded, RequestEncoding,
    RequestGraphMap, RequestNode,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formulation {
    /// One node per physical location.
    Location,
    /// One pickup and one dropoff node per request plus two depot copies.
    Request,
}

impl Formulation {
    pub const ALL: [Formulation; 2] = [Formulation::Location, Formulation::Request];

    pub fn as_str(self) -> &'static str {
        match self {
            Formulation::Location => "location",
            Formulation::Request => "request",
        }
    }
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Formulation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "loc" | "location" => Ok(Formulation::Location),
            "req" | "request" => Ok(Formulation::Request),
            other => Err(format!("unknown formulation {other:?} (loc|req)")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecodeError {
    #[error("assignment has {got} values, model has {expected} variables")]
    Length { expected: usize, got: usize },
    #[error("variable {name} = {value} is not integral")]
    NotIntegral { name: String, value: f64 },
    #[error("truck {truck}: arcs do not form a single depot route (witness arc {o} -> {d})")]
    BrokenRoute { truck: usize, o: usize, d: usize },
    #[error("truck {truck}: request {request} is selected but its nodes are not routed")]
    Unrouted { truck: usize, request: usize },
}

pub(crate) const INTEGRALITY_TOL: f64 = 1e-6;

pub(crate) fn check_assignment(model: &MipModel, values: &[f64]) -> Result<(), DecodeError> {
    if values.len() != model.num_vars() {
        return Err(DecodeError::Length { expected: model.num_vars(), got: values.len() });
    }
    for (v, &x) in model.variables().iter().zip(values) {
        if v.kind != crate::mipir::VarKind::Continuous && (x - x.round()).abs() > INTEGRALITY_TOL {
            return Err(DecodeError::NotIntegral { name: v.name.clone(), value: x });
        }
    }
    Ok(())
}

/// Either encoding, for code that handles both formulations uniformly.
#[derive(Debug, Clone)]
pub enum Encoding {
    Location(LocationEncoding),
    Request(RequestEncoding),
}

impl Encoding {
    pub fn formulation(&self) -> Formulation {
        match self {
            Encoding::Location(_) => Formulation::Location,
            Encoding::Request(_) => Formulation::Request,
        }
    }

    pub fn model(&self) -> &MipModel {
        match self {
            Encoding::Location(e) => &e.model,
            Encoding::Request(e) => &e.model,
        }
    }

    pub fn model_mut(&mut self) -> &mut MipModel {
        match self {
            Encoding::Location(e) => &mut e.model,
            Encoding::Request(e) => &mut e.model,
        }
    }

    pub fn decode(&self, values: &[f64]) -> Result<DeliveryRoutingSolution, DecodeError> {
        match self {
            Encoding::Location(e) => decode_location(e, values),
            Encoding::Request(e) => decode_request(e, values).map(|d| d.solution),
        }
    }
}

pub fn encode(instance: &Instance, formulation: Formulation) -> Encoding {
    match formulation {
        Formulation::Location => Encoding::Location(encode_location(instance)),
        Formulation::Request => Encoding::Request(encode_request(instance)),
    }
}

pub fn predicted_counts(formulation: Formulation, num_nodes: usize, n: usize, m: usize) -> Census {
    match formulation {
        Formulation::Location => predicted_counts_location(num_nodes, n, m),
        Formulation::Request => predicted_counts_request(n, m),
    }
}
