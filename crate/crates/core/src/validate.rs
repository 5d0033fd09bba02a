//! MIP-independent feasibility checks for delivery routing solutions.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::model::{
    collapse_schedule, node_load_change, DeliveryRoutingSolution, Instance, Stop, StopAction,
    TruckPlan, DEPOT,
};

/// How pickups and dropoffs at the same location are combined when checking
/// capacity on a location route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum LoadRule {
    /// Everything due at a node is loaded before anything is unloaded, and
    /// the intermediate load must fit the truck.
    #[default]
    PickupFirst,
    /// Only the net change at a node matters. This is exactly the load
    /// coupling of the location-based MIP.
    Netted,
}

impl fmt::Display for LoadRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LoadRule::PickupFirst => "pickup-first",
            LoadRule::Netted => "netted",
        })
    }
}

impl std::str::FromStr for LoadRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pickup-first" => Ok(LoadRule::PickupFirst),
            "netted" => Ok(LoadRule::Netted),
            other => Err(format!("unknown load rule {other:?} (pickup-first|netted)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotCycle { truck: usize },
    RepeatedNode { truck: usize, node: usize },
    MissingNode { truck: usize, node: usize },
    PrecedenceViolated { truck: usize, request: usize },
    CapacityExceeded { truck: usize, node: usize, load: i64 },
    NegativeLoad { truck: usize, node: usize, load: i64 },
    DuplicateAssignment { request: usize },
    /// A truck drives a cycle without serving anything.
    IdleRoute { truck: usize },
    DuplicateTruck { truck: usize },
    UnknownTruck { truck: usize },
    UnknownRequest { request: usize },
    UnknownNode { truck: usize, node: usize },
    /// Schedule stop that does not belong to the plan's delivery or sits at
    /// the wrong location.
    MisplacedStop { truck: usize, request: usize },
    /// `route` disagrees with the collapsed schedule.
    ScheduleMismatch { truck: usize },
}

impl Violation {
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::NotCycle { .. } => "NotCycle",
            Violation::RepeatedNode { .. } => "RepeatedNode",
            Violation::MissingNode { .. } => "MissingNode",
            Violation::PrecedenceViolated { .. } => "PrecedenceViolated",
            Violation::CapacityExceeded { .. } => "CapacityExceeded",
            Violation::NegativeLoad { .. } => "NegativeLoad",
            Violation::DuplicateAssignment { .. } => "DuplicateAssignment",
            Violation::IdleRoute { .. } => "IdleRoute",
            Violation::DuplicateTruck { .. } => "DuplicateTruck",
            Violation::UnknownTruck { .. } => "UnknownTruck",
            Violation::UnknownRequest { .. } => "UnknownRequest",
            Violation::UnknownNode { .. } => "UnknownNode",
            Violation::MisplacedStop { .. } => "MisplacedStop",
            Violation::ScheduleMismatch { .. } => "ScheduleMismatch",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotCycle { truck } => {
                write!(f, "NotCycle: truck {truck} route is not a depot cycle")
            }
            Violation::RepeatedNode { truck, node } => {
                write!(f, "RepeatedNode: truck {truck} visits node {node} more than once")
            }
            Violation::MissingNode { truck, node } => {
                write!(f, "MissingNode: truck {truck} never visits node {node}")
            }
            Violation::PrecedenceViolated { truck, request } => write!(
                f,
                "PrecedenceViolated: truck {truck} reaches the dropoff of request {request} before its pickup"
            ),
            Violation::CapacityExceeded { truck, node, load } => {
                write!(f, "CapacityExceeded: truck {truck} carries {load} at node {node}")
            }
            Violation::NegativeLoad { truck, node, load } => {
                write!(f, "NegativeLoad: truck {truck} load {load} at node {node}")
            }
            Violation::DuplicateAssignment { request } => {
                write!(f, "DuplicateAssignment: request {request} is assigned to several trucks")
            }
            Violation::IdleRoute { truck } => {
                write!(f, "IdleRoute: truck {truck} drives a route without deliveries")
            }
            Violation::DuplicateTruck { truck } => {
                write!(f, "DuplicateTruck: truck {truck} has more than one plan")
            }
            Violation::UnknownTruck { truck } => write!(f, "UnknownTruck: {truck}"),
            Violation::UnknownRequest { request } => write!(f, "UnknownRequest: {request}"),
            Violation::UnknownNode { truck, node } => {
                write!(f, "UnknownNode: truck {truck} route uses node {node}")
            }
            Violation::MisplacedStop { truck, request } => {
                write!(f, "MisplacedStop: truck {truck} has a stray stop for request {request}")
            }
            Violation::ScheduleMismatch { truck } => {
                write!(f, "ScheduleMismatch: truck {truck} route does not follow its schedule")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    pub fn contains_kind(&self, kind: &str) -> bool {
        self.violations.iter().any(|v| v.kind() == kind)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks one truck's location route: a single depot cycle visiting each
/// node at most once and covering every delivery endpoint, pickups before
/// dropoffs, and loads within `[0, capacity]` under `rule`. Extra transit
/// nodes are accepted.
pub fn validate_route(
    truck: usize,
    delivery: &BTreeSet<usize>,
    route: &[usize],
    instance: &Instance,
    rule: LoadRule,
) -> ValidationReport {
    let mut out = Vec::new();
    let Ok(t) = instance.truck(truck) else {
        out.push(Violation::UnknownTruck { truck });
        return ValidationReport { violations: out };
    };
    for &r in delivery {
        if instance.request(r).is_err() {
            out.push(Violation::UnknownRequest { request: r });
        }
    }
    if let Some(&node) = route.iter().find(|&&v| !instance.graph().contains(v)) {
        out.push(Violation::UnknownNode { truck, node });
    }
    if !out.is_empty() {
        return ValidationReport { violations: out };
    }
    if delivery.is_empty() {
        if !route.is_empty() {
            out.push(Violation::IdleRoute { truck });
        }
        return ValidationReport { violations: out };
    }
    if route.len() < 3 || route[0] != DEPOT || route[route.len() - 1] != DEPOT {
        out.push(Violation::NotCycle { truck });
        return ValidationReport { violations: out };
    }

    let inner = &route[1..route.len() - 1];
    let mut position = HashMap::new();
    for (i, &v) in inner.iter().enumerate() {
        if v == DEPOT || position.insert(v, i).is_some() {
            out.push(Violation::RepeatedNode { truck, node: v });
        }
    }
    let mut missing = BTreeSet::new();
    for &r in delivery {
        let req = &instance.requests()[r];
        for node in [req.pickup, req.dropoff] {
            if !position.contains_key(&node) {
                missing.insert(node);
            }
        }
    }
    out.extend(missing.into_iter().map(|node| Violation::MissingNode { truck, node }));
    for &r in delivery {
        let req = &instance.requests()[r];
        if let (Some(p), Some(d)) = (position.get(&req.pickup), position.get(&req.dropoff)) {
            if p >= d {
                out.push(Violation::PrecedenceViolated { truck, request: r });
            }
        }
    }

    let capacity = i64::from(t.capacity);
    let mut load = 0i64;
    let mut seen = BTreeSet::new();
    for &v in inner {
        if !seen.insert(v) {
            continue;
        }
        let (up, down) = node_load_change(delivery, v, instance);
        match rule {
            LoadRule::PickupFirst => {
                load += up;
                if up > 0 && load > capacity {
                    out.push(Violation::CapacityExceeded { truck, node: v, load });
                }
                load -= down;
            }
            LoadRule::Netted => {
                load += up - down;
                if up > down && load > capacity {
                    out.push(Violation::CapacityExceeded { truck, node: v, load });
                }
            }
        }
        if load < 0 {
            out.push(Violation::NegativeLoad { truck, node: v, load });
        }
    }
    ValidationReport { violations: out }
}

/// Checks an event-level schedule: each served request has exactly one
/// pickup at `f(r)` followed later by one dropoff at `g(r)`, the load never
/// leaves `[0, capacity]`, and `route` is the collapsed schedule. Locations
/// may be revisited.
pub fn validate_schedule(
    truck: usize,
    delivery: &BTreeSet<usize>,
    schedule: &[Stop],
    route: &[usize],
    instance: &Instance,
) -> ValidationReport {
    let mut out = Vec::new();
    let Ok(t) = instance.truck(truck) else {
        out.push(Violation::UnknownTruck { truck });
        return ValidationReport { violations: out };
    };
    for &r in delivery {
        if instance.request(r).is_err() {
            out.push(Violation::UnknownRequest { request: r });
        }
    }
    if let Some(stop) = schedule.iter().find(|s| !instance.graph().contains(s.location)) {
        out.push(Violation::UnknownNode { truck, node: stop.location });
    }
    if !out.is_empty() {
        return ValidationReport { violations: out };
    }
    if collapse_schedule(schedule) != route {
        out.push(Violation::ScheduleMismatch { truck });
    }
    if delivery.is_empty() && !route.is_empty() {
        out.push(Violation::IdleRoute { truck });
    }

    let mut picked: HashMap<usize, usize> = HashMap::new();
    let mut dropped: HashMap<usize, usize> = HashMap::new();
    let capacity = i64::from(t.capacity);
    let mut load = 0i64;
    for (i, stop) in schedule.iter().enumerate() {
        let r = stop.action.request();
        let Ok(req) = instance.request(r) else {
            out.push(Violation::UnknownRequest { request: r });
            continue;
        };
        if !delivery.contains(&r) {
            out.push(Violation::MisplacedStop { truck, request: r });
            continue;
        }
        match stop.action {
            StopAction::Pickup(_) => {
                if stop.location != req.pickup || picked.insert(r, i).is_some() {
                    out.push(Violation::MisplacedStop { truck, request: r });
                    continue;
                }
                load += i64::from(req.volume);
            }
            StopAction::Dropoff(_) => {
                if stop.location != req.dropoff || dropped.insert(r, i).is_some() {
                    out.push(Violation::MisplacedStop { truck, request: r });
                    continue;
                }
                if !picked.contains_key(&r) {
                    out.push(Violation::PrecedenceViolated { truck, request: r });
                }
                load -= i64::from(req.volume);
            }
        }
        if matches!(stop.action, StopAction::Pickup(_)) && load > capacity {
            out.push(Violation::CapacityExceeded { truck, node: stop.location, load });
        }
        if load < 0 {
            out.push(Violation::NegativeLoad { truck, node: stop.location, load });
        }
    }
    for &r in delivery {
        let req = &instance.requests()[r];
        if !picked.contains_key(&r) {
            out.push(Violation::MissingNode { truck, node: req.pickup });
        }
        if !dropped.contains_key(&r) {
            out.push(Violation::MissingNode { truck, node: req.dropoff });
        }
    }
    ValidationReport { violations: out }
}

/// Validates one plan, choosing event-level checks when it carries a schedule.
pub fn validate_plan(plan: &TruckPlan, instance: &Instance, rule: LoadRule) -> ValidationReport {
    match &plan.schedule {
        Some(schedule) => {
            validate_schedule(plan.truck, &plan.delivery, schedule, &plan.route, instance)
        }
        None => validate_route(plan.truck, &plan.delivery, &plan.route, instance, rule),
    }
}

/// All per-truck checks plus the partition condition: no request on two
/// trucks and at most one plan per truck. Unserved requests are fine.
pub fn validate_solution(
    solution: &DeliveryRoutingSolution,
    instance: &Instance,
    rule: LoadRule,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut trucks_seen = BTreeSet::new();
    let mut owner: HashMap<usize, usize> = HashMap::new();
    let mut duplicates = BTreeSet::new();
    for plan in &solution.plans {
        if !trucks_seen.insert(plan.truck) {
            report.violations.push(Violation::DuplicateTruck { truck: plan.truck });
        }
        for &r in &plan.delivery {
            if owner.insert(r, plan.truck).is_some() {
                duplicates.insert(r);
            }
        }
        report.merge(validate_plan(plan, instance, rule));
    }
    report.violations.extend(
        duplicates
            .into_iter()
            .map(|request| Violation::DuplicateAssignment { request }),
    );
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::example1;
    use crate::model::{xi, TruckPlan};

    fn set(ids: &[usize]) -> BTreeSet<usize> {
        ids.iter().copied().collect()
    }

    #[test]
    fn example1_optimum_is_valid() {
        let inst = example1();
        let ds = DeliveryRoutingSolution::new(vec![
            TruckPlan::new(0, [0, 1], vec![0, 1, 2, 3, 0]),
            TruckPlan::new(1, [2], vec![0, 2, 3, 0]),
        ]);
        for rule in [LoadRule::PickupFirst, LoadRule::Netted] {
            assert!(validate_solution(&ds, &inst, rule).is_clean());
        }
    }

    #[test]
    fn volume_above_capacity() {
        let inst = example1();
        let report = validate_route(1, &set(&[0]), &[0, 1, 3, 0], &inst, LoadRule::PickupFirst);
        assert_eq!(
            report.violations,
            vec![Violation::CapacityExceeded { truck: 1, node: 1, load: 4 }]
        );
        let report = validate_route(1, &set(&[0]), &[0, 2, 1, 3, 0], &inst, LoadRule::Netted);
        assert!(report.contains_kind("CapacityExceeded"));
    }

    #[test]
    fn reversed_order_breaks_precedence() {
        let inst = example1();
        let report = validate_route(0, &set(&[0]), &[0, 3, 1, 0], &inst, LoadRule::PickupFirst);
        assert!(report.violations.contains(&Violation::PrecedenceViolated { truck: 0, request: 0 }));
    }

    #[test]
    fn same_request_on_two_trucks() {
        let inst = example1();
        let ds = DeliveryRoutingSolution::new(vec![
            TruckPlan::new(0, [0], vec![0, 1, 3, 0]),
            TruckPlan::new(1, [0], vec![0, 1, 3, 0]),
        ]);
        let report = validate_solution(&ds, &inst, LoadRule::Netted);
        assert!(report.violations.contains(&Violation::DuplicateAssignment { request: 0 }));
    }

    #[test]
    fn empty_solution_is_valid_and_worth_zero() {
        let inst = example1();
        let ds = DeliveryRoutingSolution::empty(2);
        assert!(validate_solution(&ds, &inst, LoadRule::PickupFirst).is_clean());
        assert_eq!(xi(&ds, &inst).unwrap(), 0.0);
    }

    #[test]
    fn load_rules_differ_on_swap_at_shared_node() {
        // All three requests on truck 0: six units leave a, and at b one
        // unit is loaded while two are unloaded.
        let inst = example1();
        let route = [0, 1, 2, 3, 0];
        let all = set(&[0, 1, 2]);
        let strict = validate_route(0, &all, &route, &inst, LoadRule::PickupFirst);
        assert_eq!(
            strict.violations,
            vec![Violation::CapacityExceeded { truck: 0, node: 2, load: 7 }]
        );
        assert!(validate_route(0, &all, &route, &inst, LoadRule::Netted).is_clean());
    }

    #[test]
    fn structural_violations() {
        let inst = example1();
        let d = set(&[1]);
        let rule = LoadRule::PickupFirst;
        assert_eq!(
            validate_route(0, &d, &[1, 2, 0], &inst, rule).violations,
            vec![Violation::NotCycle { truck: 0 }]
        );
        assert_eq!(
            validate_route(0, &d, &[], &inst, rule).violations,
            vec![Violation::NotCycle { truck: 0 }]
        );
        assert!(validate_route(0, &d, &[0, 1, 2, 1, 0], &inst, rule)
            .violations
            .contains(&Violation::RepeatedNode { truck: 0, node: 1 }));
        assert!(validate_route(0, &d, &[0, 1, 0, 2, 0], &inst, rule)
            .violations
            .contains(&Violation::RepeatedNode { truck: 0, node: 0 }));
        assert_eq!(
            validate_route(0, &d, &[0, 1, 0], &inst, rule).violations,
            vec![Violation::MissingNode { truck: 0, node: 2 }]
        );
        assert_eq!(
            validate_route(0, &BTreeSet::new(), &[0, 1, 0], &inst, rule).violations,
            vec![Violation::IdleRoute { truck: 0 }]
        );
        // transit through c is allowed
        assert!(validate_route(0, &d, &[0, 1, 3, 2, 0], &inst, rule).is_clean());
    }

    #[test]
    fn schedule_with_revisit() {
        let inst = example1();
        // r2 (a->b) then r3 (b->c) then back: a, b, c with a swap at b.
        let schedule = vec![
            Stop { location: 1, action: StopAction::Pickup(1) },
            Stop { location: 2, action: StopAction::Dropoff(1) },
            Stop { location: 2, action: StopAction::Pickup(2) },
            Stop { location: 3, action: StopAction::Dropoff(2) },
        ];
        let plan = TruckPlan::from_schedule(1, schedule.clone());
        assert_eq!(plan.route, vec![0, 1, 2, 3, 0]);
        assert!(validate_plan(&plan, &inst, LoadRule::PickupFirst).is_clean());

        let mut reversed = schedule;
        reversed.swap(0, 1);
        let plan = TruckPlan::from_schedule(1, reversed);
        let report = validate_plan(&plan, &inst, LoadRule::PickupFirst);
        assert!(report.contains_kind("PrecedenceViolated"));
        assert!(report.contains_kind("NegativeLoad"));
    }
}
