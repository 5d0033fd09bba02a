//! Location graph, requests, trucks and delivery routing solutions.
//!
//! Node ids are dense `0..|V|`; node 0 is always the depot. A truck's route
//! is stored as a closed node sequence `[0, v1, .., vk, 0]`, or left empty
//! when the truck serves nothing.

use std::collections::BTreeSet;

use thiserror::Error;

/// Id of the depot node in every [`LocationGraph`].
pub const DEPOT: usize = 0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("unknown node id {0}")]
    UnknownNode(usize),
    #[error("unknown request id {0}")]
    UnknownRequest(usize),
    #[error("unknown truck id {0}")]
    UnknownTruck(usize),
    #[error("invalid instance: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Location {
    pub id: usize,
    pub x: f64,
    pub y: f64,
}

/// Complete directed graph over physical locations with Euclidean distances.
#[derive(Debug, Clone, PartialEq)]
pub struct LocationGraph {
    locations: Vec<Location>,
}

impl LocationGraph {
    /// Builds a graph from coordinates in order; the first coordinate is the depot.
    pub fn from_coords(coords: &[(f64, f64)]) -> Result<Self, ModelError> {
        if coords.len() < 2 {
            return Err(ModelError::Invalid(format!(
                "a location graph needs the depot and at least one other node, got {}",
                coords.len()
            )));
        }
        if let Some((i, _)) = coords
            .iter()
            .enumerate()
            .find(|(_, (x, y))| !x.is_finite() || !y.is_finite())
        {
            return Err(ModelError::Invalid(format!("node {i} has a non-finite coordinate")));
        }
        let locations = coords
            .iter()
            .enumerate()
            .map(|(id, &(x, y))| Location { id, x, y })
            .collect();
        Ok(Self { locations })
    }

    pub fn len(&self) -> usize {
        self.locations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locations.is_empty()
    }

    pub fn locations(&self) -> &[Location] {
        &self.locations
    }

    pub fn contains(&self, node: usize) -> bool {
        node < self.locations.len()
    }

    pub fn distance(&self, o: usize, d: usize) -> f64 {
        let (a, b) = (&self.locations[o], &self.locations[d]);
        (a.x - b.x).hypot(a.y - b.y)
    }

    /// Mean distance over all ordered pairs of distinct nodes, depot included.
    pub fn average_distance(&self) -> f64 {
        let n = self.len();
        let mut total = 0.0;
        for o in 0..n {
            for d in 0..n {
                if o != d {
                    total += self.distance(o, d);
                }
            }
        }
        total / (n * (n - 1)) as f64
    }
}

/// A transport request `<w, q, f(r), g(r)>`.
#[derive(Debug, Clone, PartialEq)]
pub struct Request {
    pub id: usize,
    pub payment: f64,
    pub volume: u32,
    pub pickup: usize,
    pub dropoff: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Truck {
    pub id: usize,
    pub capacity: u32,
    /// Arc cost is `cost_coefficient * distance` unless `cost_matrix` is set.
    pub cost_coefficient: f64,
    /// Explicit per-arc costs indexed `[o][d]`, overriding the scaled distance.
    pub cost_matrix: Option<Vec<Vec<f64>>>,
}

impl Truck {
    pub fn arc_cost(&self, graph: &LocationGraph, o: usize, d: usize) -> f64 {
        if o == d {
            return 0.0;
        }
        match &self.cost_matrix {
            Some(matrix) => matrix[o][d],
            None => self.cost_coefficient * graph.distance(o, d),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct InstanceMeta {
    pub sample: String,
    pub k: f64,
    pub m: usize,
    pub n: usize,
    pub seed: u64,
}

/// Shared input of both encoders.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    graph: LocationGraph,
    requests: Vec<Request>,
    trucks: Vec<Truck>,
    meta: InstanceMeta,
}

impl Instance {
    /// Checks id density, request endpoints, fleet parameters and cost matrices.
    ///
    /// `meta.n` and `meta.m` are overwritten with the actual request and
    /// truck counts.
    pub fn new(
        graph: LocationGraph,
        requests: Vec<Request>,
        trucks: Vec<Truck>,
        mut meta: InstanceMeta,
    ) -> Result<Self, ModelError> {
        let nodes = graph.len();
        for (i, r) in requests.iter().enumerate() {
            if r.id != i {
                return Err(ModelError::Invalid(format!("request at position {i} has id {}", r.id)));
            }
            for node in [r.pickup, r.dropoff] {
                if node >= nodes {
                    return Err(ModelError::UnknownNode(node));
                }
                if node == DEPOT {
                    return Err(ModelError::Invalid(format!("request {i} uses the depot")));
                }
            }
            if r.pickup == r.dropoff {
                return Err(ModelError::Invalid(format!(
                    "request {i} has equal pickup and dropoff {}",
                    r.pickup
                )));
            }
            if r.volume == 0 {
                return Err(ModelError::Invalid(format!("request {i} has zero volume")));
            }
            if !r.payment.is_finite() || r.payment < 0.0 {
                return Err(ModelError::Invalid(format!("request {i} has payment {}", r.payment)));
            }
        }
        for (i, t) in trucks.iter().enumerate() {
            if t.id != i {
                return Err(ModelError::Invalid(format!("truck at position {i} has id {}", t.id)));
            }
            if t.capacity == 0 {
                return Err(ModelError::Invalid(format!("truck {i} has zero capacity")));
            }
            if !(t.cost_coefficient.is_finite() && t.cost_coefficient > 0.0) {
                return Err(ModelError::Invalid(format!(
                    "truck {i} has cost coefficient {}",
                    t.cost_coefficient
                )));
            }
            if let Some(matrix) = &t.cost_matrix {
                if matrix.len() != nodes || matrix.iter().any(|row| row.len() != nodes) {
                    return Err(ModelError::Invalid(format!(
                        "truck {i} cost matrix is not {nodes}x{nodes}"
                    )));
                }
                for (o, row) in matrix.iter().enumerate() {
                    for (d, &c) in row.iter().enumerate() {
                        if !c.is_finite() || c < 0.0 || (o == d && c != 0.0) {
                            return Err(ModelError::Invalid(format!(
                                "truck {i} cost matrix entry ({o},{d}) = {c}"
                            )));
                        }
                    }
                }
            }
        }
        meta.n = requests.len();
        meta.m = trucks.len();
        Ok(Self { graph, requests, trucks, meta })
    }

    pub fn graph(&self) -> &LocationGraph {
        &self.graph
    }

    pub fn requests(&self) -> &[Request] {
        &self.requests
    }

    pub fn trucks(&self) -> &[Truck] {
        &self.trucks
    }

    pub fn meta(&self) -> &InstanceMeta {
        &self.meta
    }

    pub fn num_nodes(&self) -> usize {
        self.graph.len()
    }

    pub fn request(&self, id: usize) -> Result<&Request, ModelError> {
        self.requests.get(id).ok_or(ModelError::UnknownRequest(id))
    }

    pub fn truck(&self, id: usize) -> Result<&Truck, ModelError> {
        self.trucks.get(id).ok_or(ModelError::UnknownTruck(id))
    }

    /// `l^t(o, d)`.
    pub fn arc_cost(&self, truck: usize, o: usize, d: usize) -> f64 {
        self.trucks[truck].arc_cost(&self.graph, o, d)
    }

    /// Cost of driving `route` with `truck`, summed over consecutive node pairs.
    pub fn route_cost(&self, truck: usize, route: &[usize]) -> Result<f64, ModelError> {
        let t = self.truck(truck)?;
        if let Some(&bad) = route.iter().find(|&&v| !self.graph.contains(v)) {
            return Err(ModelError::UnknownNode(bad));
        }
        Ok(route.windows(2).map(|w| t.arc_cost(&self.graph, w[0], w[1])).sum())
    }

    /// Non-depot nodes not touched by any request.
    pub fn uncovered_nodes(&self) -> Vec<usize> {
        let mut seen = vec![false; self.graph.len()];
        for r in &self.requests {
            seen[r.pickup] = true;
            seen[r.dropoff] = true;
        }
        (1..self.graph.len()).filter(|&v| !seen[v]).collect()
    }
}

/// What happens at one stop of an event-level schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StopAction {
    Pickup(usize),
    Dropoff(usize),
}

impl StopAction {
    pub fn request(self) -> usize {
        match self {
            StopAction::Pickup(r) | StopAction::Dropoff(r) => r,
        }
    }
}

/// A single pickup or dropoff event at a location.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Stop {
    pub location: usize,
    pub action: StopAction,
}

/// `(D_t, S_t)` for one truck.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TruckPlan {
    pub truck: usize,
    pub delivery: BTreeSet<usize>,
    pub route: Vec<usize>,
    /// Event-level schedule for request-based routes, which may revisit a
    /// location. `route` is then the schedule's location sequence with
    /// consecutive repeats collapsed.
    pub schedule: Option<Vec<Stop>>,
}

impl TruckPlan {
    pub fn idle(truck: usize) -> Self {
        Self { truck, ..Self::default() }
    }

    pub fn new(truck: usize, delivery: impl IntoIterator<Item = usize>, route: Vec<usize>) -> Self {
        Self {
            truck,
            delivery: delivery.into_iter().collect(),
            route,
            schedule: None,
        }
    }

    /// Builds a plan from an event schedule; the route is derived from it.
    pub fn from_schedule(truck: usize, schedule: Vec<Stop>) -> Self {
        let delivery = schedule
            .iter()
            .filter_map(|s| match s.action {
                StopAction::Pickup(r) => Some(r),
                StopAction::Dropoff(_) => None,
            })
            .collect();
        let route = collapse_schedule(&schedule);
        Self { truck, delivery, route, schedule: Some(schedule) }
    }

    pub fn is_idle(&self) -> bool {
        self.delivery.is_empty() && self.route.is_empty()
    }
}

/// Location route of an event schedule: depot, stop locations with
/// consecutive duplicates merged, depot. Empty schedules give an empty route.
pub fn collapse_schedule(schedule: &[Stop]) -> Vec<usize> {
    if schedule.is_empty() {
        return Vec::new();
    }
    let mut route = vec![DEPOT];
    for stop in schedule {
        if route.last() != Some(&stop.location) {
            route.push(stop.location);
        }
    }
    if route.last() != Some(&DEPOT) {
        route.push(DEPOT);
    }
    route
}

/// A delivery routing solution `DS`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DeliveryRoutingSolution {
    pub plans: Vec<TruckPlan>,
}

impl DeliveryRoutingSolution {
    pub fn new(plans: Vec<TruckPlan>) -> Self {
        Self { plans }
    }

    /// Every truck idle.
    pub fn empty(num_trucks: usize) -> Self {
        Self { plans: (0..num_trucks).map(TruckPlan::idle).collect() }
    }

    pub fn plan(&self, truck: usize) -> Option<&TruckPlan> {
        self.plans.iter().find(|p| p.truck == truck)
    }

    pub fn served_requests(&self) -> BTreeSet<usize> {
        self.plans.iter().flat_map(|p| p.delivery.iter().copied()).collect()
    }
}

/// Profit-cost value `xi(DS)`: payments of served requests minus the
/// travel cost of every route. Feasibility is not checked.
pub fn xi(solution: &DeliveryRoutingSolution, instance: &Instance) -> Result<f64, ModelError> {
    let mut total = 0.0;
    for plan in &solution.plans {
        total += plan_value(plan, instance)?;
    }
    Ok(total)
}

/// Contribution of one truck to `xi`.
pub fn plan_value(plan: &TruckPlan, instance: &Instance) -> Result<f64, ModelError> {
    let mut value = 0.0;
    for &r in &plan.delivery {
        value += instance.request(r)?.payment;
    }
    Ok(value - instance.route_cost(plan.truck, &plan.route)?)
}

/// Truck load while serving one stop of a location route.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoadStop {
    pub node: usize,
    /// Load after loading and before unloading at this node.
    pub peak: i64,
    /// Load when departing this node.
    pub after: i64,
}

/// Running load along `route` for the requests in `delivery`, one entry per
/// non-depot stop. Every delivery endpoint must lie on the route.
pub fn load_profile(
    truck: &Truck,
    delivery: &BTreeSet<usize>,
    route: &[usize],
    instance: &Instance,
) -> Result<Vec<LoadStop>, crate::validate::Violation> {
    use crate::validate::Violation;
    for &r in delivery {
        let req = instance
            .request(r)
            .map_err(|_| Violation::UnknownRequest { request: r })?;
        for node in [req.pickup, req.dropoff] {
            if !route.contains(&node) {
                return Err(Violation::MissingNode { truck: truck.id, node });
            }
        }
    }
    let mut load = 0i64;
    let mut profile = Vec::new();
    for &v in route.iter().filter(|&&v| v != DEPOT) {
        let (up, down) = node_load_change(delivery, v, instance);
        let peak = load + up;
        load = peak - down;
        profile.push(LoadStop { node: v, peak, after: load });
    }
    Ok(profile)
}

/// Volume loaded and unloaded at `node` for the requests in `delivery`.
pub(crate) fn node_load_change(
    delivery: &BTreeSet<usize>,
    node: usize,
    instance: &Instance,
) -> (i64, i64) {
    let mut up = 0;
    let mut down = 0;
    for &r in delivery {
        if let Some(req) = instance.requests().get(r) {
            if req.pickup == node {
                up += i64::from(req.volume);
            }
            if req.dropoff == node {
                down += i64::from(req.volume);
            }
        }
    }
    (up, down)
}
