//! Canonical text forms for instances and solutions.
//!
//! Instances are JSON with a fixed key order, one record per line, and every
//! real rendered with 17 significant digits so that parsing and
//! re-serializing is the identity. Solutions are plain serde JSON.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    DeliveryRoutingSolution, Instance, InstanceMeta, LocationGraph, ModelError, Request, Stop,
    StopAction, Truck, TruckPlan,
};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Schema { path: path.into(), message: message.into() }
}

/// 17 significant digits in scientific notation.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

pub fn serialize_instance(instance: &Instance) -> String {
    let meta = instance.meta();
    let mut out = String::from("{\n");
    let _ = writeln!(
        out,
        "  \"meta\": {{\"sample\": {}, \"k\": {}, \"m\": {}, \"n\": {}, \"seed\": {}}},",
        fmt_str(&meta.sample),
        fmt_real(meta.k),
        meta.m,
        meta.n,
        meta.seed
    );
    out.push_str("  \"locations\": [");
    for (i, loc) in instance.graph().locations().iter().enumerate() {
        out.push_str(if i == 0 { "\n" } else { ",\n" });
        let _ = write!(
            out,
            "    {{\"id\": {}, \"x\": {}, \"y\": {}}}",
            loc.id,
            fmt_real(loc.x),
            fmt_real(loc.y)
        );
    }
    out.push_str("\n  ],\n  \"requests\": [");
    for (i, r) in instance.requests().iter().enumerate() {
        out.push_str(if i == 0 { "\n" } else { ",\n" });
        let _ = write!(
            out,
            "    {{\"id\": {}, \"w\": {}, \"q\": {}, \"pickup\": {}, \"dropoff\": {}}}",
            r.id,
            fmt_real(r.payment),
            r.volume,
            r.pickup,
            r.dropoff
        );
    }
    if !instance.requests().is_empty() {
        out.push_str("\n  ");
    }
    out.push_str("],\n  \"trucks\": [");
    for (i, t) in instance.trucks().iter().enumerate() {
        out.push_str(if i == 0 { "\n" } else { ",\n" });
        let _ = write!(
            out,
            "    {{\"id\": {}, \"capacity\": {}, \"coefficient\": {}",
            t.id,
            t.capacity,
            fmt_real(t.cost_coefficient)
        );
        if let Some(matrix) = &t.cost_matrix {
            out.push_str(", \"costs\": [");
            for (o, row) in matrix.iter().enumerate() {
                if o > 0 {
                    out.push_str(", ");
                }
                let cells: Vec<String> = row.iter().map(|&c| fmt_real(c)).collect();
                let _ = write!(out, "[{}]", cells.join(", "));
            }
            out.push(']');
        }
        out.push('}');
    }
    if !instance.trucks().is_empty() {
        out.push_str("\n  ");
    }
    out.push_str("]\n}\n");
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    meta: RawMeta,
    locations: Vec<RawLocation>,
    requests: Vec<RawRequest>,
    trucks: Vec<RawTruck>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMeta {
    sample: String,
    k: f64,
    m: usize,
    n: usize,
    seed: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLocation {
    id: usize,
    x: f64,
    y: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRequest {
    id: usize,
    w: f64,
    q: u32,
    pickup: usize,
    dropoff: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTruck {
    id: usize,
    capacity: u32,
    coefficient: f64,
    #[serde(default)]
    costs: Option<Vec<Vec<f64>>>,
}

pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let raw: RawInstance = serde_json::from_str(text)?;
    if raw.locations.len() < 2 {
        return Err(schema("locations", "need the depot and at least one more location"));
    }
    for (i, loc) in raw.locations.iter().enumerate() {
        if loc.id != i {
            return Err(schema(format!("locations[{i}].id"), format!("expected {i}, got {}", loc.id)));
        }
    }
    let num_nodes = raw.locations.len();
    let mut requests = Vec::with_capacity(raw.requests.len());
    for (i, r) in raw.requests.iter().enumerate() {
        let path = |field: &str| format!("requests[{i}].{field}");
        if r.id != i {
            return Err(schema(path("id"), format!("expected {i}, got {}", r.id)));
        }
        for (field, node) in [("pickup", r.pickup), ("dropoff", r.dropoff)] {
            if node == 0 {
                return Err(schema(path(field), "the depot cannot be a request endpoint"));
            }
            if node >= num_nodes {
                return Err(schema(path(field), format!("unknown location {node}")));
            }
        }
        if r.pickup == r.dropoff {
            return Err(schema(path("dropoff"), "equals pickup"));
        }
        if r.q == 0 {
            return Err(schema(path("q"), "volume must be at least 1"));
        }
        if !(r.w.is_finite() && r.w >= 0.0) {
            return Err(schema(path("w"), "payment must be finite and non-negative"));
        }
        requests.push(Request {
            id: r.id,
            payment: r.w,
            volume: r.q,
            pickup: r.pickup,
            dropoff: r.dropoff,
        });
    }
    let mut trucks = Vec::with_capacity(raw.trucks.len());
    for (i, t) in raw.trucks.into_iter().enumerate() {
        let path = |field: &str| format!("trucks[{i}].{field}");
        if t.id != i {
            return Err(schema(path("id"), format!("expected {i}, got {}", t.id)));
        }
        if t.capacity == 0 {
            return Err(schema(path("capacity"), "must be positive"));
        }
        if !(t.coefficient.is_finite() && t.coefficient > 0.0) {
            return Err(schema(path("coefficient"), "must be finite and positive"));
        }
        if let Some(costs) = &t.costs {
            if costs.len() != num_nodes || costs.iter().any(|row| row.len() != num_nodes) {
                return Err(schema(path("costs"), format!("must be {num_nodes}x{num_nodes}")));
            }
        }
        trucks.push(Truck {
            id: t.id,
            capacity: t.capacity,
            cost_coefficient: t.coefficient,
            cost_matrix: t.costs,
        });
    }
    if raw.meta.n != requests.len() {
        return Err(schema("meta.n", format!("says {} but {} requests follow", raw.meta.n, requests.len())));
    }
    if raw.meta.m != trucks.len() {
        return Err(schema("meta.m", format!("says {} but {} trucks follow", raw.meta.m, trucks.len())));
    }
    let coords: Vec<(f64, f64)> = raw.locations.iter().map(|l| (l.x, l.y)).collect();
    let graph = LocationGraph::from_coords(&coords).map_err(|e| schema("locations", e.to_string()))?;
    let meta = InstanceMeta {
        sample: raw.meta.sample,
        k: raw.meta.k,
        m: raw.meta.m,
        n: raw.meta.n,
        seed: raw.meta.seed,
    };
    Instance::new(graph, requests, trucks, meta).map_err(|e| match e {
        ModelError::Invalid(msg) => schema("", msg),
        other => schema("", other.to_string()),
    })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolution {
    plans: Vec<RawPlan>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPlan {
    truck: usize,
    delivery: Vec<usize>,
    route: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schedule: Option<Vec<RawStop>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStop {
    location: usize,
    action: RawAction,
    request: usize,
}

#[derive(Serialize, Deserialize, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum RawAction {
    Pickup,
    Dropoff,
}

pub fn serialize_solution(solution: &DeliveryRoutingSolution) -> String {
    let raw = RawSolution {
        plans: solution
            .plans
            .iter()
            .map(|p| RawPlan {
                truck: p.truck,
                delivery: p.delivery.iter().copied().collect(),
                route: p.route.clone(),
                schedule: p.schedule.as_ref().map(|s| {
                    s.iter()
                        .map(|stop| {
                            let (action, request) = match stop.action {
                                StopAction::Pickup(r) => (RawAction::Pickup, r),
                                StopAction::Dropoff(r) => (RawAction::Dropoff, r),
                            };
                            RawStop { location: stop.location, action, request }
                        })
                        .collect()
                }),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&raw).expect("solution serializes");
    text.push('\n');
    text
}

pub fn parse_solution_file(text: &str) -> Result<DeliveryRoutingSolution, FormatError> {
    let raw: RawSolution = serde_json::from_str(text)?;
    let plans = raw
        .plans
        .into_iter()
        .map(|p| TruckPlan {
            truck: p.truck,
            delivery: p.delivery.into_iter().collect(),
            route: p.route,
            schedule: p.schedule.map(|s| {
                s.into_iter()
                    .map(|stop| Stop {
                        location: stop.location,
                        action: match stop.action {
                            RawAction::Pickup => StopAction::Pickup(stop.request),
                            RawAction::Dropoff => StopAction::Dropoff(stop.request),
                        },
                    })
                    .collect()
            }),
        })
        .collect();
    Ok(DeliveryRoutingSolution { plans })
}
