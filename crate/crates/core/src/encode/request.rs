use super::{check_assignment, DecodeError};
use crate::mipir::{indexed_name, Census, MipModel, Role, RowSense, VarId, VarKind};
use crate::model::{DeliveryRoutingSolution, Instance, Stop, StopAction, TruckPlan, DEPOT};

/// What a node of the request graph stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RequestNode {
    StartDepot,
    Pickup(usize),
    Dropoff(usize),
    EndDepot,
}

/// Node table of the request graph: `0` start depot, `r + 1` pickup of
/// request `r`, `n + r + 1` its dropoff, `2n + 1` end depot.
#[derive(Debug, Clone, PartialEq)]
pub struct RequestGraphMap {
    pub n: usize,
    /// Physical location of every node.
    pub location: Vec<usize>,
    /// Signed volume change at every node.
    pub volume: Vec<i64>,
}

impl RequestGraphMap {
    pub fn new(instance: &Instance) -> Self {
        let n = instance.requests().len();
        let mut location = vec![DEPOT; 2 * n + 2];
        let mut volume = vec![0i64; 2 * n + 2];
        for (r, req) in instance.requests().iter().enumerate() {
            location[r + 1] = req.pickup;
            location[n + r + 1] = req.dropoff;
            volume[r + 1] = i64::from(req.volume);
            volume[n + r + 1] = -i64::from(req.volume);
        }
        Self { n, location, volume }
    }

    pub fn len(&self) -> usize {
        2 * self.n + 2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn end_depot(&self) -> usize {
        2 * self.n + 1
    }

    pub fn pickup(&self, r: usize) -> usize {
        r + 1
    }

    pub fn dropoff(&self, r: usize) -> usize {
        self.n + r + 1
    }

    pub fn node(&self, v: usize) -> RequestNode {
        match v {
            0 => RequestNode::StartDepot,
            v if v == self.end_depot() => RequestNode::EndDepot,
            v if v <= self.n => RequestNode::Pickup(v - 1),
            v => RequestNode::Dropoff(v - self.n - 1),
        }
    }

    fn is_pickup(&self, v: usize) -> bool {
        (1..=self.n).contains(&v)
    }

    fn is_dropoff(&self, v: usize) -> bool {
        (self.n + 1..=2 * self.n).contains(&v)
    }
}

#[derive(Debug, Clone)]
pub struct RequestEncoding {
    pub model: MipModel,
    pub graph: RequestGraphMap,
    pub num_trucks: usize,
    x: Vec<VarId>,
    u: Vec<VarId>,
    h: Vec<VarId>,
}

impl RequestEncoding {
    fn nn(&self) -> usize {
        self.graph.len()
    }

    pub fn x(&self, t: usize, o: usize, d: usize) -> VarId {
        self.x[(t * self.nn() + o) * self.nn() + d]
    }

    pub fn u(&self, t: usize, v: usize) -> VarId {
        self.u[t * self.nn() + v]
    }

    pub fn h(&self, t: usize, v: usize) -> VarId {
        self.h[t * self.nn() + v]
    }

    /// Variable values realizing `solution`. Plans with a schedule follow
    /// it; plain location routes are expanded with dropoffs before pickups
    /// at each location.
    pub fn assignment_for(&self, solution: &DeliveryRoutingSolution, instance: &Instance) -> Vec<f64> {
        let g = &self.graph;
        let mut values = vec![0.0; self.model.num_vars()];
        for t in 0..self.num_trucks {
            for r in 0..g.n {
                values[self.u(t, g.dropoff(r)).0] = 1.0;
            }
            for v in 0..g.len() {
                values[self.h(t, v).0] = self.model.var(self.h(t, v)).lower;
            }
            values[self.x(t, 0, g.end_depot()).0] = 1.0;
            values[self.u(t, g.end_depot()).0] = 1.0;
        }
        for plan in &solution.plans {
            let t = plan.truck;
            let schedule = match &plan.schedule {
                Some(s) => s.clone(),
                None => schedule_from_route(&plan.route, &plan.delivery, instance),
            };
            if schedule.is_empty() {
                continue;
            }
            values[self.x(t, 0, g.end_depot()).0] = 0.0;
            let mut path = vec![0];
            path.extend(schedule.iter().map(|s| match s.action {
                StopAction::Pickup(r) => g.pickup(r),
                StopAction::Dropoff(r) => g.dropoff(r),
            }));
            path.push(g.end_depot());
            let mut load = 0i64;
            for (pos, w) in path.windows(2).enumerate() {
                values[self.x(t, w[0], w[1]).0] = 1.0;
                load += g.volume[w[1]];
                values[self.u(t, w[1]).0] = (pos + 1) as f64;
                values[self.h(t, w[1]).0] = load as f64;
            }
            values[self.u(t, 0).0] = 0.0;
            values[self.h(t, 0).0] = 0.0;
        }
        values
    }
}

fn schedule_from_route(
    route: &[usize],
    delivery: &std::collections::BTreeSet<usize>,
    instance: &Instance,
) -> Vec<Stop> {
    let mut out = Vec::new();
    for &v in route.iter().filter(|&&v| v != DEPOT) {
        for &r in delivery {
            if instance.requests()[r].dropoff == v {
                out.push(Stop { location: v, action: StopAction::Dropoff(r) });
            }
        }
        for &r in delivery {
            if instance.requests()[r].pickup == v {
                out.push(Stop { location: v, action: StopAction::Pickup(r) });
            }
        }
    }
    out
}

/// With `N = 2n + 2`: `(mN^2 + 2mN, 2m + n + 4mn + 2mN(N-1))`.
pub fn predicted_counts_request(n: usize, m: usize) -> Census {
    let big_n = 2 * n + 2;
    Census {
        num_vars: m * big_n * big_n + 2 * m * big_n,
        num_rows: 2 * m + n + 4 * m * n + 2 * m * big_n * (big_n - 1),
    }
}

pub fn encode_request(instance: &Instance) -> RequestEncoding {
    let graph = RequestGraphMap::new(instance);
    let nn = graph.len();
    let n = graph.n;
    let m = instance.trucks().len();
    let end = graph.end_depot();
    let big_n = nn as f64;
    let size = predicted_counts_request(n, m);
    let mut model = MipModel::with_capacity(size.num_vars, size.num_rows);

    let fixed_zero = |o: usize, d: usize| {
        o == d
            || (o == 0 && graph.is_dropoff(d))
            || (graph.is_pickup(o) && d == end)
            || (d == 0 && o != 0 && o != end)
            || (o == end && d != 0 && d != end)
    };

    let mut x = Vec::with_capacity(m * nn * nn);
    for t in 0..m {
        for o in 0..nn {
            let payment = match graph.node(o) {
                RequestNode::Pickup(r) => instance.requests()[r].payment,
                _ => 0.0,
            };
            for d in 0..nn {
                let cost = instance.arc_cost(t, graph.location[o], graph.location[d]);
                let upper = if fixed_zero(o, d) { 0.0 } else { 1.0 };
                x.push(model.add_role_var(
                    indexed_name("x", &[("t", t), ("o", o), ("d", d)]),
                    VarKind::Binary,
                    0.0,
                    upper,
                    payment - cost,
                    Role::X { truck: t, o, d },
                ));
            }
        }
    }
    let mut u = Vec::with_capacity(m * nn);
    for t in 0..m {
        for v in 0..nn {
            u.push(model.add_role_var(
                indexed_name("u", &[("t", t), ("v", v)]),
                VarKind::Integer,
                0.0,
                big_n - 1.0,
                0.0,
                Role::U { truck: t, v },
            ));
        }
    }
    let mut h = Vec::with_capacity(m * nn);
    for (t, truck) in instance.trucks().iter().enumerate() {
        let c = i64::from(truck.capacity);
        for v in 0..nn {
            // clamped into [0, c] so that a request heavier than the truck
            // leaves the model feasible; the load rows then keep the truck
            // out of its pickup
            let q = graph.volume[v];
            h.push(model.add_role_var(
                indexed_name("h", &[("t", t), ("v", v)]),
                VarKind::Continuous,
                q.max(0).min(c) as f64,
                c.min(c + q).max(0) as f64,
                0.0,
                Role::H { truck: t, v },
            ));
        }
    }
    let mut enc = RequestEncoding { model, graph, num_trucks: m, x, u, h };
    let mut model = std::mem::take(&mut enc.model);
    let g = &enc.graph;

    for t in 0..m {
        model.add_row(
            indexed_name("a3s", &[("t", t)]),
            (1..nn).map(|d| (enc.x(t, 0, d), 1.0)),
            RowSense::Eq,
            1.0,
        );
        model.add_row(
            indexed_name("a3e", &[("t", t)]),
            (0..end).map(|o| (enc.x(t, o, end), 1.0)),
            RowSense::Eq,
            1.0,
        );
    }
    // each pickup node entered at most once over all trucks
    for r in 0..n {
        let d = g.pickup(r);
        let terms = (0..m).flat_map(|t| (0..nn).filter(move |&o| o != d).map(move |o| (t, o)));
        model.add_row(
            indexed_name("a4", &[("v", d)]),
            terms.map(|(t, o)| (enc.x(t, o, d), 1.0)).collect::<Vec<_>>(),
            RowSense::Le,
            1.0,
        );
    }
    for t in 0..m {
        for r in 0..n {
            let (p, q) = (g.pickup(r), g.dropoff(r));
            let out_p = (0..nn).filter(|&d| d != p).map(|d| (enc.x(t, p, d), 1.0));
            let out_q = (0..nn).filter(|&d| d != q).map(|d| (enc.x(t, q, d), -1.0));
            model.add_row(indexed_name("a5", &[("t", t), ("v", p)]), out_p.chain(out_q), RowSense::Eq, 0.0);
        }
        for v in 1..end {
            let out = (0..nn).filter(|&d| d != v).map(|d| (enc.x(t, v, d), 1.0));
            let inn = (0..nn).filter(|&o| o != v).map(|o| (enc.x(t, o, v), -1.0));
            model.add_row(indexed_name("a6", &[("t", t), ("v", v)]), out.chain(inn), RowSense::Eq, 0.0);
        }
        for o in 0..nn {
            for d in (0..nn).filter(|&d| d != o) {
                model.add_row(
                    indexed_name("a7", &[("t", t), ("o", o), ("d", d)]),
                    [(enc.u(t, d), 1.0), (enc.u(t, o), -1.0), (enc.x(t, o, d), -big_n)],
                    RowSense::Ge,
                    1.0 - big_n,
                );
            }
        }
        for r in 0..n {
            model.add_row(
                indexed_name("a8", &[("t", t), ("r", r)]),
                [(enc.u(t, g.dropoff(r)), 1.0), (enc.u(t, g.pickup(r)), -1.0)],
                RowSense::Ge,
                1.0,
            );
        }
        let c = f64::from(instance.trucks()[t].capacity);
        for o in 0..nn {
            for d in (0..nn).filter(|&d| d != o) {
                model.add_row(
                    indexed_name("a9", &[("t", t), ("o", o), ("d", d)]),
                    [(enc.h(t, d), 1.0), (enc.h(t, o), -1.0), (enc.x(t, o, d), -c)],
                    RowSense::Ge,
                    g.volume[d] as f64 - c,
                );
            }
        }
    }
    enc.model = model;
    enc
}

/// Decoded request-model assignment: the solution in location vocabulary
/// plus each truck's raw node path from start to end depot.
#[derive(Debug, Clone, PartialEq)]
pub struct RequestDecoded {
    pub solution: DeliveryRoutingSolution,
    pub node_paths: Vec<Vec<usize>>,
}

pub fn decode_request(enc: &RequestEncoding, values: &[f64]) -> Result<RequestDecoded, DecodeError> {
    check_assignment(&enc.model, values)?;
    let g = &enc.graph;
    let nn = g.len();
    let end = g.end_depot();
    let on = |id: VarId| values[id.0] > 0.5;
    let mut plans = Vec::with_capacity(enc.num_trucks);
    let mut node_paths = Vec::with_capacity(enc.num_trucks);
    for t in 0..enc.num_trucks {
        let arcs: Vec<(usize, usize)> = (0..nn)
            .flat_map(|o| (0..nn).map(move |d| (o, d)))
            .filter(|&(o, d)| on(enc.x(t, o, d)))
            .collect();
        let mut used = vec![false; arcs.len()];
        let mut path = vec![0];
        let mut current = 0;
        while current != end {
            let next: Vec<usize> = (0..arcs.len()).filter(|&i| arcs[i].0 == current).collect();
            let &[i] = next.as_slice() else {
                let (o, d) = next.first().map_or(arcs.first().copied().unwrap_or((current, end)), |&i| arcs[i]);
                return Err(DecodeError::BrokenRoute { truck: t, o, d });
            };
            if used[i] {
                return Err(DecodeError::BrokenRoute { truck: t, o: arcs[i].0, d: arcs[i].1 });
            }
            used[i] = true;
            current = arcs[i].1;
            path.push(current);
        }
        if let Some(i) = used.iter().position(|&u| !u) {
            return Err(DecodeError::BrokenRoute { truck: t, o: arcs[i].0, d: arcs[i].1 });
        }
        let schedule: Vec<Stop> = path[1..path.len() - 1]
            .iter()
            .map(|&v| {
                let action = match g.node(v) {
                    RequestNode::Pickup(r) => StopAction::Pickup(r),
                    RequestNode::Dropoff(r) => StopAction::Dropoff(r),
                    _ => unreachable!("depots only at the path ends"),
                };
                Stop { location: g.location[v], action }
            })
            .collect();
        plans.push(if schedule.is_empty() {
            TruckPlan::idle(t)
        } else {
            TruckPlan::from_schedule(t, schedule)
        });
        node_paths.push(path);
    }
    Ok(RequestDecoded { solution: DeliveryRoutingSolution::new(plans), node_paths })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::example1;
    use crate::mipir::census;
    use crate::model::xi;
    use crate::validate::{validate_solution, LoadRule};

    #[test]
    fn table_cells() {
        assert_eq!(predicted_counts_request(7, 2), Census { num_vars: 576, num_rows: 1027 });
        assert_eq!(predicted_counts_request(8, 2), Census { num_vars: 720, num_rows: 1300 });
        assert_eq!(predicted_counts_request(11, 2), Census { num_vars: 1248, num_rows: 2311 });
        assert_eq!(predicted_counts_request(11, 10), Census { num_vars: 6240, num_rows: 11511 });
    }

    #[test]
    fn graph_map() {
        let g = RequestGraphMap::new(&example1());
        assert_eq!(g.len(), 8);
        assert_eq!(g.location, vec![0, 1, 1, 2, 3, 2, 3, 0]);
        assert_eq!(g.volume, vec![0, 4, 2, 1, -4, -2, -1, 0]);
        assert_eq!(g.node(5), RequestNode::Dropoff(1));
        assert_eq!(g.node(7), RequestNode::EndDepot);
    }

    #[test]
    fn example1_optimum_substitutes() {
        let inst = example1();
        let enc = encode_request(&inst);
        assert_eq!(census(&enc.model), predicted_counts_request(3, 2));
        let ds = DeliveryRoutingSolution::new(vec![
            TruckPlan::new(0, [0, 1], vec![0, 1, 2, 3, 0]),
            TruckPlan::new(1, [2], vec![0, 2, 3, 0]),
        ]);
        let values = enc.assignment_for(&ds, &inst);
        let (viol, row) = enc.model.max_row_violation(&values);
        assert!(viol < 1e-9, "{:?} violated by {viol}", row.map(|r| &r.name));
        assert_eq!(enc.model.max_domain_violation(&values).0, 0.0);
        assert_eq!(enc.model.objective_value(&values), 11.0);
        let decoded = decode_request(&enc, &values).unwrap();
        assert_eq!(decoded.node_paths[1], vec![0, 3, 6, 7]);
        assert_eq!(decoded.solution.plans[0].route, vec![0, 1, 2, 3, 0]);
        assert_eq!(xi(&decoded.solution, &inst).unwrap(), 11.0);
        assert!(validate_solution(&decoded.solution, &inst, LoadRule::PickupFirst).is_clean());
    }

    #[test]
    fn depot_to_depot_is_empty() {
        let inst = example1();
        let enc = encode_request(&inst);
        let values = enc.assignment_for(&DeliveryRoutingSolution::empty(2), &inst);
        assert!(enc.model.max_row_violation(&values).0 < 1e-9);
        assert_eq!(enc.model.objective_value(&values), 0.0);
        let decoded = decode_request(&enc, &values).unwrap();
        assert_eq!(decoded.solution, DeliveryRoutingSolution::empty(2));
        assert_eq!(decoded.node_paths, vec![vec![0, 7], vec![0, 7]]);
    }

    #[test]
    fn fixings_are_bounds() {
        let enc = encode_request(&example1());
        let upper = |o, d| enc.model.var(enc.x(0, o, d)).upper;
        assert_eq!(upper(3, 3), 0.0);
        assert_eq!(upper(0, 4), 0.0);
        assert_eq!(upper(1, 7), 0.0);
        assert_eq!(upper(5, 0), 0.0);
        assert_eq!(upper(7, 2), 0.0);
        assert_eq!(upper(0, 7), 1.0);
        assert_eq!(upper(4, 7), 1.0);
        // h bounds follow the signed volume
        let hb = |v| {
            let var = enc.model.var(enc.h(1, v));
            (var.lower, var.upper)
        };
        assert_eq!(hb(1), (3.0, 3.0));
        assert_eq!(hb(4), (0.0, 0.0));
        assert_eq!(hb(3), (1.0, 3.0));
    }
}
