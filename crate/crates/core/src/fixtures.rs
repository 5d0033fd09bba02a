//! Small hand-made instances used by tests, examples and the CLI.

use crate::instgen::{generate_instance, make_fleet, GenError, GenRng, GenerationParams, TsplibSample};
use crate::model::{Instance, InstanceMeta, LocationGraph, Request, Truck};

/// Two trucks, three requests and four locations (depot, a, b, c) with
/// explicit per-truck cost matrices.
///
/// Requests: r1 = (w 13, q 4, a -> c), r2 = (7, 2, a -> b), r3 = (4, 1, b -> c).
/// Truck 0 has capacity 6, truck 1 capacity 3. Ids are zero-based, so r1 is
/// request 0 and location a is node 1.
pub fn example1() -> Instance {
    let graph = LocationGraph::from_coords(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)])
        .expect("four coordinates");
    let requests = vec![
        Request { id: 0, payment: 13.0, volume: 4, pickup: 1, dropoff: 3 },
        Request { id: 1, payment: 7.0, volume: 2, pickup: 1, dropoff: 2 },
        Request { id: 2, payment: 4.0, volume: 1, pickup: 2, dropoff: 3 },
    ];
    let t1 = vec![
        vec![0.0, 2.0, 2.0, 2.0],
        vec![2.0, 0.0, 4.0, 7.0],
        vec![2.0, 4.0, 0.0, 2.0],
        vec![2.0, 7.0, 2.0, 0.0],
    ];
    let t2 = vec![
        vec![0.0, 1.0, 1.0, 1.0],
        vec![1.0, 0.0, 3.0, 5.0],
        vec![1.0, 3.0, 0.0, 1.0],
        vec![1.0, 5.0, 1.0, 0.0],
    ];
    let trucks = vec![
        Truck { id: 0, capacity: 6, cost_coefficient: 1.0, cost_matrix: Some(t1) },
        Truck { id: 1, capacity: 3, cost_coefficient: 1.0, cost_matrix: Some(t2) },
    ];
    let meta = InstanceMeta { sample: "example1".into(), k: 2.0, m: 2, n: 3, seed: 0 };
    Instance::new(graph, requests, trucks, meta).expect("example instance is valid")
}

/// Deterministic instance of any shape, for model-size checks. Request `r`
/// runs from node `1 + r mod (V-1)` to the next non-depot node.
pub fn synthetic(num_nodes: usize, n: usize, m: usize) -> Instance {
    assert!(num_nodes >= 3, "need a depot and two other locations");
    let coords: Vec<(f64, f64)> =
        (0..num_nodes).map(|i| (i as f64 * 3.0, ((i * i) % 7) as f64)).collect();
    let graph = LocationGraph::from_coords(&coords).expect("distinct coordinates");
    let others = num_nodes - 1;
    let requests = (0..n)
        .map(|r| Request {
            id: r,
            payment: 10.0,
            volume: 1 + (r % 3) as u32,
            pickup: 1 + r % others,
            dropoff: 1 + (r + 1) % others,
        })
        .collect();
    let meta = InstanceMeta { sample: format!("synthetic{num_nodes}"), k: 1.0, m, n, seed: 0 };
    Instance::new(graph, requests, make_fleet(m), meta).expect("synthetic instance is valid")
}

/// Small random instance for solver/oracle cross-checks: 5 or 6 locations
/// with integer coordinates in `[0, 100]^2`, at most four requests, two
/// trucks. Fails when the generator cannot build a pair family.
pub fn small_random(seed: u64) -> Result<Instance, GenError> {
    let mut rng = GenRng::new(seed);
    let num_nodes = 5 + rng.below(2);
    let coords = (0..num_nodes)
        .map(|_| (rng.rounded_uniform(0.0, 100.0) as f64, rng.rounded_uniform(0.0, 100.0) as f64))
        .collect();
    let k = match (num_nodes, rng.below(2)) {
        (5, 0) => 1.0,
        (5, _) => 2.0,
        (_, 0) => 1.0,
        _ => 1.5,
    };
    let sample = TsplibSample::new(format!("rand{seed}"), coords)
        .map_err(|e| GenError::Params(e.to_string()))?;
    let params = GenerationParams { k, m: 2, seed, avg_volume: 8 };
    generate_instance(&sample, &params)
}
