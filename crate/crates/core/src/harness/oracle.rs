//! Exhaustive search over request-to-truck assignments and per-truck
//! orderings, for instances small enough to enumerate.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{xi, DeliveryRoutingSolution, Instance, Stop, StopAction, TruckPlan, DEPOT};
use crate::validate::LoadRule;

/// Strict-improvement margin for the search.
const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Semantics {
    /// Each location visited at most once per truck.
    Location,
    /// Each pickup and dropoff is its own event; locations may repeat.
    Request,
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Semantics::Location => "location",
            Semantics::Request => "request",
        })
    }
}

impl FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "loc" | "location" => Ok(Semantics::Location),
            "req" | "request" => Ok(Semantics::Request),
            other => Err(format!("unknown semantics {other:?} (loc|req)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_requests: usize,
    pub max_trucks: usize,
    pub max_nodes: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        Self { max_requests: 5, max_trucks: 3, max_nodes: 8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OracleOptions {
    pub limits: OracleLimits,
    /// Capacity rule for location routes.
    pub load_rule: LoadRule,
    /// Also try location routes through extra transit nodes.
    pub transit_probe: bool,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error(
        "refusing to enumerate n={n}, m={m}, |V|={num_nodes} (limits n<={}, m<={}, |V|<={}); \
         about {estimate:.3e} candidate orderings",
        limits.max_requests, limits.max_trucks, limits.max_nodes
    )]
    Refused { n: usize, m: usize, num_nodes: usize, estimate: f64, limits: OracleLimits },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub solution: DeliveryRoutingSolution,
}

fn check_limits(instance: &Instance, limits: &OracleLimits) -> Result<(), OracleError> {
    let n = instance.requests().len();
    let m = instance.trucks().len();
    let nv = instance.num_nodes();
    if n <= limits.max_requests && m <= limits.max_trucks && nv <= limits.max_nodes {
        return Ok(());
    }
    let events: f64 = (1..=2 * n).map(|i| i as f64).product();
    let estimate = ((m + 1) as f64).powi(n as i32) + m as f64 * 2f64.powi(n as i32) * events;
    Err(OracleError::Refused { n, m, num_nodes: nv, estimate, limits: *limits })
}

fn mask_set(mask: usize, n: usize) -> BTreeSet<usize> {
    (0..n).filter(|r| mask >> r & 1 == 1).collect()
}

/// Best route of one truck for one request set.
#[derive(Debug, Clone)]
enum Route {
    Nodes(Vec<usize>),
    Events(Vec<Stop>),
}

impl Route {
    fn into_plan(self, truck: usize, delivery: BTreeSet<usize>) -> TruckPlan {
        match self {
            Route::Nodes(route) => TruckPlan::new(truck, delivery, route),
            Route::Events(schedule) => TruckPlan::from_schedule(truck, schedule),
        }
    }
}

struct LocationSearch<'a> {
    instance: &'a Instance,
    truck: usize,
    delivery: &'a BTreeSet<usize>,
    rule: LoadRule,
    capacity: i64,
    nodes: Vec<usize>,
    /// Keep every feasible ordering instead of the cheapest only.
    collect_all: bool,
    best: Option<(f64, Vec<usize>)>,
    all: Vec<Vec<usize>>,
}

impl LocationSearch<'_> {
    fn run(&mut self) {
        let mut used = vec![false; self.nodes.len()];
        let mut path = vec![DEPOT];
        self.dfs(&mut used, &mut path, 0.0, 0);
    }

    fn dfs(&mut self, used: &mut [bool], path: &mut Vec<usize>, cost: f64, load: i64) {
        if !self.collect_all {
            if let Some((best, _)) = &self.best {
                if cost > best - EPS {
                    return;
                }
            }
        }
        let last = *path.last().expect("path starts at the depot");
        if used.iter().all(|&u| u) {
            let total = cost + self.instance.arc_cost(self.truck, last, DEPOT);
            path.push(DEPOT);
            if self.collect_all {
                self.all.push(path.clone());
            } else if self.best.as_ref().is_none_or(|(b, _)| total < b - EPS) {
                self.best = Some((total, path.clone()));
            }
            path.pop();
            return;
        }
        for i in 0..self.nodes.len() {
            if used[i] {
                continue;
            }
            let v = self.nodes[i];
            let mut up = 0;
            let mut down = 0;
            let mut blocked = false;
            for &r in self.delivery {
                let req = &self.instance.requests()[r];
                if req.pickup == v {
                    up += i64::from(req.volume);
                }
                if req.dropoff == v {
                    down += i64::from(req.volume);
                    if !path.contains(&req.pickup) {
                        blocked = true;
                    }
                }
            }
            if blocked {
                continue;
            }
            let peak = match self.rule {
                LoadRule::PickupFirst => load + up,
                LoadRule::Netted => load + up - down,
            };
            if peak > self.capacity {
                continue;
            }
            used[i] = true;
            path.push(v);
            let step = self.instance.arc_cost(self.truck, last, v);
            self.dfs(used, path, cost + step, load + up - down);
            path.pop();
            used[i] = false;
        }
    }
}

fn endpoint_nodes(instance: &Instance, delivery: &BTreeSet<usize>) -> Vec<usize> {
    let set: BTreeSet<usize> = delivery
        .iter()
        .flat_map(|&r| {
            let req = &instance.requests()[r];
            [req.pickup, req.dropoff]
        })
        .collect();
    set.into_iter().collect()
}

fn best_location_route(
    instance: &Instance,
    truck: usize,
    delivery: &BTreeSet<usize>,
    options: &OracleOptions,
) -> Option<(f64, Route)> {
    let base = endpoint_nodes(instance, delivery);
    let extra: Vec<usize> = (1..instance.num_nodes()).filter(|v| !base.contains(v)).collect();
    let mut subsets: Vec<Vec<usize>> = vec![Vec::new()];
    if options.transit_probe {
        let mut more: Vec<Vec<usize>> = (1..1usize << extra.len())
            .map(|mask| (0..extra.len()).filter(|i| mask >> i & 1 == 1).map(|i| extra[i]).collect())
            .collect();
        more.sort_by_key(|s: &Vec<usize>| s.len());
        subsets.extend(more);
    }
    let mut best: Option<(f64, Vec<usize>)> = None;
    for transit in subsets {
        let mut nodes = base.clone();
        nodes.extend(transit);
        nodes.sort_unstable();
        let mut search = LocationSearch {
            instance,
            truck,
            delivery,
            rule: options.load_rule,
            capacity: i64::from(instance.trucks()[truck].capacity),
            nodes,
            collect_all: false,
            best: best.clone(),
            all: Vec::new(),
        };
        search.run();
        best = search.best;
    }
    best.map(|(c, r)| (c, Route::Nodes(r)))
}

struct EventSearch<'a> {
    instance: &'a Instance,
    truck: usize,
    requests: Vec<usize>,
    capacity: i64,
    best: Option<(f64, Vec<Stop>)>,
}

impl EventSearch<'_> {
    fn dfs(&mut self, state: &mut [u8], path: &mut Vec<Stop>, cost: f64, load: i64) {
        if let Some((best, _)) = &self.best {
            if cost > best - EPS {
                return;
            }
        }
        let last = path.last().map_or(DEPOT, |s| s.location);
        if state.iter().all(|&s| s == 2) {
            let total = cost + self.instance.arc_cost(self.truck, last, DEPOT);
            if self.best.as_ref().is_none_or(|(b, _)| total < b - EPS) {
                self.best = Some((total, path.clone()));
            }
            return;
        }
        // pickups before dropoffs, each by request id, mirroring StopAction's order
        for phase in 0..2u8 {
            for i in 0..self.requests.len() {
                if state[i] != phase {
                    continue;
                }
                let r = self.requests[i];
                let req = &self.instance.requests()[r];
                let (stop, next_load) = if phase == 0 {
                    let l = load + i64::from(req.volume);
                    if l > self.capacity {
                        continue;
                    }
                    (Stop { location: req.pickup, action: StopAction::Pickup(r) }, l)
                } else {
                    (Stop { location: req.dropoff, action: StopAction::Dropoff(r) }, load - i64::from(req.volume))
                };
                let step = self.instance.arc_cost(self.truck, last, stop.location);
                state[i] += 1;
                path.push(stop);
                self.dfs(state, path, cost + step, next_load);
                path.pop();
                state[i] -= 1;
            }
        }
    }
}

fn best_event_route(instance: &Instance, truck: usize, delivery: &BTreeSet<usize>) -> Option<(f64, Route)> {
    let mut search = EventSearch {
        instance,
        truck,
        requests: delivery.iter().copied().collect(),
        capacity: i64::from(instance.trucks()[truck].capacity),
        best: None,
    };
    let mut state = vec![0u8; search.requests.len()];
    search.dfs(&mut state, &mut Vec::new(), 0.0, 0);
    search.best.map(|(c, s)| (c, Route::Events(s)))
}

/// Calls `visit` on every assignment vector in lexicographic order, where
/// entry `r` is 0 for unserved or `t + 1` for truck `t`.
fn for_each_assignment(n: usize, m: usize, mut visit: impl FnMut(&[usize])) {
    let mut a = vec![0usize; n];
    loop {
        visit(&a);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if a[i] < m {
                a[i] += 1;
                a[i + 1..].iter_mut().for_each(|x| *x = 0);
                break;
            }
        }
    }
}

fn truck_masks(a: &[usize], m: usize) -> Vec<usize> {
    let mut masks = vec![0usize; m];
    for (r, &slot) in a.iter().enumerate() {
        if slot > 0 {
            masks[slot - 1] |= 1 << r;
        }
    }
    masks
}

/// Exact optimum of `instance` under `semantics`. Ties go to the
/// lexicographically smallest assignment vector, then the smallest route.
pub fn oracle(
    instance: &Instance,
    semantics: Semantics,
    options: &OracleOptions,
) -> Result<OracleResult, OracleError> {
    check_limits(instance, &options.limits)?;
    let n = instance.requests().len();
    let m = instance.trucks().len();
    let mut table: Vec<Vec<Option<(f64, Route)>>> = Vec::with_capacity(m);
    for t in 0..m {
        let mut row = Vec::with_capacity(1 << n);
        for mask in 0..1usize << n {
            let delivery = mask_set(mask, n);
            row.push(if mask == 0 {
                Some((0.0, Route::Nodes(Vec::new())))
            } else {
                match semantics {
                    Semantics::Location => best_location_route(instance, t, &delivery, options),
                    Semantics::Request => best_event_route(instance, t, &delivery),
                }
            });
        }
        table.push(row);
    }
    let payment = |mask: usize| -> f64 {
        (0..n).filter(|r| mask >> r & 1 == 1).map(|r| instance.requests()[r].payment).sum()
    };

    let mut best_value = f64::NEG_INFINITY;
    let mut best_a: Vec<usize> = vec![0; n];
    for_each_assignment(n, m, |a| {
        let masks = truck_masks(a, m);
        let mut value = 0.0;
        for (t, &mask) in masks.iter().enumerate() {
            match &table[t][mask] {
                Some((cost, _)) => value += payment(mask) - cost,
                None => return,
            }
        }
        if value > best_value + EPS {
            best_value = value;
            best_a = a.to_vec();
        }
    });

    let masks = truck_masks(&best_a, m);
    let plans = masks
        .iter()
        .enumerate()
        .map(|(t, &mask)| {
            if mask == 0 {
                return TruckPlan::idle(t);
            }
            let (_, route) = table[t][mask].clone().expect("chosen entries are feasible");
            route.into_plan(t, mask_set(mask, n))
        })
        .collect();
    let solution = DeliveryRoutingSolution::new(plans);
    let value = xi(&solution, instance).expect("oracle only uses known ids");
    Ok(OracleResult { value, solution })
}

/// Every feasible solution under location semantics without transit
/// nodes: each assignment of requests to trucks combined with every
/// precedence- and capacity-feasible visiting order of each truck's
/// locations, scored by `xi`.
pub fn enumerate_xi(
    instance: &Instance,
    rule: LoadRule,
    limits: &OracleLimits,
) -> Result<Vec<(DeliveryRoutingSolution, f64)>, OracleError> {
    check_limits(instance, limits)?;
    let n = instance.requests().len();
    let m = instance.trucks().len();
    let mut routes: Vec<Vec<Vec<Vec<usize>>>> = Vec::with_capacity(m);
    for t in 0..m {
        let mut row = Vec::with_capacity(1 << n);
        for mask in 0..1usize << n {
            if mask == 0 {
                row.push(vec![Vec::new()]);
                continue;
            }
            let delivery = mask_set(mask, n);
            let mut search = LocationSearch {
                instance,
                truck: t,
                delivery: &delivery,
                rule,
                capacity: i64::from(instance.trucks()[t].capacity),
                nodes: endpoint_nodes(instance, &delivery),
                collect_all: true,
                best: None,
                all: Vec::new(),
            };
            search.run();
            row.push(search.all);
        }
        routes.push(row);
    }

    let mut out = Vec::new();
    for_each_assignment(n, m, |a| {
        let masks = truck_masks(a, m);
        let options: Vec<&Vec<Vec<usize>>> = (0..m).map(|t| &routes[t][masks[t]]).collect();
        if options.iter().any(|o| o.is_empty()) {
            return;
        }
        let mut pick = vec![0usize; m];
        loop {
            let plans = (0..m)
                .map(|t| match masks[t] {
                    0 => TruckPlan::idle(t),
                    mask => TruckPlan::new(t, mask_set(mask, n), options[t][pick[t]].clone()),
                })
                .collect();
            let solution = DeliveryRoutingSolution::new(plans);
            let value = xi(&solution, instance).expect("known ids");
            out.push((solution, value));
            let mut t = m;
            loop {
                if t == 0 {
                    return;
                }
                t -= 1;
                if pick[t] + 1 < options[t].len() {
                    pick[t] += 1;
                    pick[t + 1..].iter_mut().for_each(|p| *p = 0);
                    break;
                }
            }
        }
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::example1;
    use crate::model::{InstanceMeta, LocationGraph, Request, Truck};
    use crate::validate::validate_solution;

    #[test]
    fn example1_optimum() {
        let inst = example1();
        let res = oracle(&inst, Semantics::Location, &OracleOptions::default()).unwrap();
        assert_eq!(res.value, 11.0);
        assert_eq!(
            res.solution,
            DeliveryRoutingSolution::new(vec![
                TruckPlan::new(0, [0, 1], vec![0, 1, 2, 3, 0]),
                TruckPlan::new(1, [2], vec![0, 2, 3, 0]),
            ])
        );
    }

    #[test]
    fn example1_netted_and_request_values() {
        let inst = example1();
        let netted = OracleOptions { load_rule: LoadRule::Netted, ..Default::default() };
        let res = oracle(&inst, Semantics::Location, &netted).unwrap();
        assert_eq!(res.value, 14.0);
        assert!(validate_solution(&res.solution, &inst, LoadRule::Netted).is_clean());
        let res = oracle(&inst, Semantics::Request, &OracleOptions::default()).unwrap();
        assert_eq!(res.value, 14.0);
        assert!(validate_solution(&res.solution, &inst, LoadRule::PickupFirst).is_clean());
    }

    #[test]
    fn example1_enumeration() {
        let all = enumerate_xi(&example1(), LoadRule::PickupFirst, &OracleLimits::default()).unwrap();
        let mut values: Vec<i64> = all.iter().map(|(_, v)| *v as i64).collect();
        values.sort_unstable();
        let mut printed = vec![0, 2, 1, 5, 2, 4, 3, 7, -1, 0, -2, 0, 10, 7, 11, 8, 7, 2, 9, 4, 1];
        printed.sort_unstable();
        assert_eq!(values, printed);
        let r2_alone = all
            .iter()
            .find(|(ds, _)| {
                ds.plans[0].delivery == [1].into() && ds.plans[1].delivery.is_empty()
            })
            .unwrap();
        assert_eq!(r2_alone.1, -1.0);
    }

    #[test]
    fn unprofitable_request_is_skipped() {
        let graph = LocationGraph::from_coords(&[(0.0, 0.0), (10.0, 0.0), (20.0, 0.0)]).unwrap();
        let req = Request { id: 0, payment: 5.0, volume: 1, pickup: 1, dropoff: 2 };
        let truck = Truck { id: 0, capacity: 5, cost_coefficient: 1.0, cost_matrix: None };
        let inst = Instance::new(graph, vec![req], vec![truck], InstanceMeta::default()).unwrap();
        for sem in [Semantics::Location, Semantics::Request] {
            let res = oracle(&inst, sem, &OracleOptions::default()).unwrap();
            assert_eq!(res.value, 0.0);
            assert_eq!(res.solution, DeliveryRoutingSolution::empty(1));
        }
    }

    #[test]
    fn empty_request_set() {
        let graph = LocationGraph::from_coords(&[(0.0, 0.0), (1.0, 0.0)]).unwrap();
        let truck = Truck { id: 0, capacity: 5, cost_coefficient: 1.0, cost_matrix: None };
        let inst = Instance::new(graph, vec![], vec![truck], InstanceMeta::default()).unwrap();
        let all = enumerate_xi(&inst, LoadRule::PickupFirst, &OracleLimits::default()).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].1, 0.0);
    }

    #[test]
    fn transit_probe_uses_cheaper_detour() {
        // a -> c costs 7 for truck 0 but a -> b -> c only 6
        let inst = example1();
        let delivery: BTreeSet<usize> = [0].into();
        let plain = best_location_route(&inst, 0, &delivery, &OracleOptions::default()).unwrap();
        let probe = OracleOptions { transit_probe: true, ..Default::default() };
        let via = best_location_route(&inst, 0, &delivery, &probe).unwrap();
        assert_eq!(plain.0, 11.0);
        assert_eq!(via.0, 10.0);
    }

    #[test]
    fn refuses_large_instances() {
        let graph = LocationGraph::from_coords(&(0..9).map(|i| (i as f64, 0.0)).collect::<Vec<_>>()).unwrap();
        let truck = Truck { id: 0, capacity: 5, cost_coefficient: 1.0, cost_matrix: None };
        let inst = Instance::new(graph, vec![], vec![truck], InstanceMeta::default()).unwrap();
        assert!(matches!(
            oracle(&inst, Semantics::Location, &OracleOptions::default()),
            Err(OracleError::Refused { num_nodes: 9, .. })
        ));
    }
}
