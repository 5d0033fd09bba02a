use std::collections::BTreeSet;

use super::{check_assignment, DecodeError};
use crate::mipir::{indexed_name, Census, MipModel, Role, RowSense, VarId, VarKind};
use crate::model::{
    node_load_change, DeliveryRoutingSolution, Instance, TruckPlan, DEPOT,
};

/// Location-based model plus the variable index maps needed to decode it.
#[derive(Debug, Clone)]
pub struct LocationEncoding {
    pub model: MipModel,
    pub num_nodes: usize,
    pub num_requests: usize,
    pub num_trucks: usize,
    x: Vec<VarId>,
    y: Vec<VarId>,
    u: Vec<VarId>,
    h: Vec<VarId>,
}

impl LocationEncoding {
    pub fn x(&self, t: usize, o: usize, d: usize) -> VarId {
        self.x[(t * self.num_nodes + o) * self.num_nodes + d]
    }

    pub fn y(&self, t: usize, r: usize) -> VarId {
        self.y[t * self.num_requests + r]
    }

    /// Defined for non-depot `v` only.
    pub fn u(&self, t: usize, v: usize) -> VarId {
        self.u[t * (self.num_nodes - 1) + v - 1]
    }

    /// Defined for non-depot `v` only.
    pub fn h(&self, t: usize, v: usize) -> VarId {
        self.h[t * (self.num_nodes - 1) + v - 1]
    }

    /// Variable values realizing `solution`, which must be feasible under
    /// netted loads and use each truck at most once.
    pub fn assignment_for(&self, solution: &DeliveryRoutingSolution, instance: &Instance) -> Vec<f64> {
        let mut values = vec![0.0; self.model.num_vars()];
        for plan in &solution.plans {
            let t = plan.truck;
            for &r in &plan.delivery {
                values[self.y(t, r).0] = 1.0;
            }
            for w in plan.route.windows(2) {
                values[self.x(t, w[0], w[1]).0] = 1.0;
            }
            let mut load = 0i64;
            let inner = plan.route.iter().filter(|&&v| v != DEPOT);
            for (pos, &v) in inner.enumerate() {
                let (up, down) = node_load_change(&plan.delivery, v, instance);
                load += up - down;
                values[self.u(t, v).0] = pos as f64;
                values[self.h(t, v).0] = load as f64;
            }
        }
        values
    }
}

/// `(m|V|^2 + mn + 2m(|V|-1), n + 3mn + 2m|V| + 3m(|V|-1)(|V|-2))`.
pub fn predicted_counts_location(num_nodes: usize, n: usize, m: usize) -> Census {
    let v = num_nodes;
    Census {
        num_vars: m * v * v + m * n + 2 * m * (v - 1),
        num_rows: n + 3 * m * n + 2 * m * v + 3 * m * (v - 1) * (v - 2),
    }
}

pub fn encode_location(instance: &Instance) -> LocationEncoding {
    let nv = instance.num_nodes();
    let requests = instance.requests();
    let n = requests.len();
    let m = instance.trucks().len();
    let big_v = nv as f64;
    let size = predicted_counts_location(nv, n, m);
    let mut model = MipModel::with_capacity(size.num_vars, size.num_rows);

    let mut x = Vec::with_capacity(m * nv * nv);
    for t in 0..m {
        for o in 0..nv {
            for d in 0..nv {
                let upper = if o == d { 0.0 } else { 1.0 };
                x.push(model.add_role_var(
                    indexed_name("x", &[("t", t), ("o", o), ("d", d)]),
                    VarKind::Binary,
                    0.0,
                    upper,
                    -instance.arc_cost(t, o, d),
                    Role::X { truck: t, o, d },
                ));
            }
        }
    }
    let mut y = Vec::with_capacity(m * n);
    for t in 0..m {
        for r in requests {
            y.push(model.add_role_var(
                format!("y_t{t}_r{}", r.id),
                VarKind::Binary,
                0.0,
                1.0,
                r.payment,
                Role::Y { truck: t, r: r.id },
            ));
        }
    }
    let mut u = Vec::with_capacity(m * (nv - 1));
    for t in 0..m {
        for v in 1..nv {
            u.push(model.add_role_var(
                indexed_name("u", &[("t", t), ("v", v)]),
                VarKind::Integer,
                0.0,
                (nv - 2) as f64,
                0.0,
                Role::U { truck: t, v },
            ));
        }
    }
    let mut h = Vec::with_capacity(m * (nv - 1));
    for (t, truck) in instance.trucks().iter().enumerate() {
        for v in 1..nv {
            h.push(model.add_role_var(
                indexed_name("h", &[("t", t), ("v", v)]),
                VarKind::Continuous,
                0.0,
                f64::from(truck.capacity),
                0.0,
                Role::H { truck: t, v },
            ));
        }
    }
    let mut enc = LocationEncoding { model, num_nodes: nv, num_requests: n, num_trucks: m, x, y, u, h };
    let mut model = std::mem::take(&mut enc.model);

    // each request on at most one truck
    for r in 0..n {
        model.add_row(indexed_name("c3", &[("r", r)]), (0..m).map(|t| (enc.y(t, r), 1.0)), RowSense::Le, 1.0);
    }
    for t in 0..m {
        for (r, req) in requests.iter().enumerate() {
            // a served request's pickup and dropoff are entered
            for (eq, node) in [(4, req.pickup), (5, req.dropoff)] {
                let terms = std::iter::once((enc.y(t, r), 1.0))
                    .chain((0..nv).filter(|&o| o != node).map(|o| (enc.x(t, o, node), -1.0)));
                model.add_row(format!("c{eq}_t{t}_r{r}"), terms, RowSense::Le, 0.0);
            }
            // pickup strictly before dropoff
            model.add_row(
                indexed_name("c9", &[("t", t), ("r", r)]),
                [(enc.u(t, req.pickup), 1.0), (enc.u(t, req.dropoff), -1.0), (enc.y(t, r), big_v)],
                RowSense::Le,
                big_v - 1.0,
            );
        }
        for o in 0..nv {
            let inflow = (0..nv).filter(|&d| d != o).map(|d| (enc.x(t, d, o), 1.0));
            let outflow = (0..nv).filter(|&d| d != o).map(|d| (enc.x(t, o, d), -1.0));
            model.add_row(indexed_name("c6", &[("t", t), ("v", o)]), inflow.chain(outflow), RowSense::Eq, 0.0);
            model.add_row(
                indexed_name("c7", &[("t", t), ("v", o)]),
                (0..nv).filter(|&d| d != o).map(|d| (enc.x(t, o, d), 1.0)),
                RowSense::Le,
                1.0,
            );
        }
        for o in 1..nv {
            for d in (1..nv).filter(|&d| d != o) {
                model.add_row(
                    indexed_name("c8", &[("t", t), ("o", o), ("d", d)]),
                    [(enc.u(t, d), 1.0), (enc.u(t, o), -1.0), (enc.x(t, o, d), -big_v)],
                    RowSense::Ge,
                    1.0 - big_v,
                );
            }
        }
        let total_volume: f64 = requests.iter().map(|r| f64::from(r.volume)).sum();
        let big_m = f64::from(instance.trucks()[t].capacity) + total_volume;
        for o in 1..nv {
            for d in (1..nv).filter(|&d| d != o) {
                // h_d - h_o - Gamma_d within +-M unless the arc is driven
                let mut terms = vec![(enc.h(t, d), 1.0), (enc.h(t, o), -1.0)];
                for (r, req) in requests.iter().enumerate() {
                    let q = f64::from(req.volume);
                    if req.pickup == d {
                        terms.push((enc.y(t, r), -q));
                    }
                    if req.dropoff == d {
                        terms.push((enc.y(t, r), q));
                    }
                }
                let mut le = terms.clone();
                le.push((enc.x(t, o, d), big_m));
                model.add_row(indexed_name("c10a", &[("t", t), ("o", o), ("d", d)]), le, RowSense::Le, big_m);
                terms.push((enc.x(t, o, d), -big_m));
                model.add_row(indexed_name("c10b", &[("t", t), ("o", o), ("d", d)]), terms, RowSense::Ge, -big_m);
            }
        }
    }
    enc.model = model;
    enc
}

/// Rebuilds `(D_t, S_t)` for every truck by following driven arcs from the depot.
pub fn decode_location(
    enc: &LocationEncoding,
    values: &[f64],
) -> Result<DeliveryRoutingSolution, DecodeError> {
    check_assignment(&enc.model, values)?;
    let nv = enc.num_nodes;
    let on = |id: VarId| values[id.0] > 0.5;
    let mut plans = Vec::with_capacity(enc.num_trucks);
    for t in 0..enc.num_trucks {
        let delivery: BTreeSet<usize> = (0..enc.num_requests).filter(|&r| on(enc.y(t, r))).collect();
        let mut arcs: Vec<(usize, usize)> = Vec::new();
        for o in 0..nv {
            for d in 0..nv {
                if on(enc.x(t, o, d)) {
                    arcs.push((o, d));
                }
            }
        }
        if arcs.is_empty() {
            if let Some(&r) = delivery.first() {
                return Err(DecodeError::Unrouted { truck: t, request: r });
            }
            plans.push(TruckPlan::idle(t));
            continue;
        }
        let mut route = vec![DEPOT];
        let mut used = vec![false; arcs.len()];
        let mut current = DEPOT;
        loop {
            let next: Vec<usize> = (0..arcs.len()).filter(|&i| arcs[i].0 == current).collect();
            let &[i] = next.as_slice() else {
                let (o, d) = next.first().map_or(arcs[0], |&i| arcs[i]);
                return Err(DecodeError::BrokenRoute { truck: t, o, d });
            };
            if used[i] {
                return Err(DecodeError::BrokenRoute { truck: t, o: arcs[i].0, d: arcs[i].1 });
            }
            used[i] = true;
            current = arcs[i].1;
            route.push(current);
            if current == DEPOT {
                break;
            }
        }
        if let Some(i) = used.iter().position(|&u| !u) {
            return Err(DecodeError::BrokenRoute { truck: t, o: arcs[i].0, d: arcs[i].1 });
        }
        plans.push(TruckPlan::new(t, delivery, route));
    }
    Ok(DeliveryRoutingSolution::new(plans))
}
