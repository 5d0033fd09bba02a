use thiserror::Error;

use super::pairs::{
    pair_nodes, repetition_counts, sort_pairs, PairFamily, PairingError, SortMode,
    DEFAULT_MAX_RESHUFFLES,
};
use super::rng::{round_half_up, GenRng};
use super::tsplib::TsplibSample;
use crate::model::{Instance, InstanceMeta, LocationGraph, ModelError, Request, Truck};

/// Capacity and arc-cost coefficient of the three truck types, cycled in order.
pub const TRUCK_TYPES: [(u32, f64); 3] = [(25, 1.2), (20, 1.0), (15, 0.8)];

pub const DEFAULT_AVG_VOLUME: u32 = 5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("invalid generation parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationParams {
    pub k: f64,
    pub m: usize,
    pub seed: u64,
    pub avg_volume: u32,
}

impl GenerationParams {
    pub fn new(k: f64, m: usize, seed: u64) -> Self {
        Self { k, m, seed, avg_volume: DEFAULT_AVG_VOLUME }
    }
}

/// Knobs that are not part of the published procedure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationOptions {
    pub avg_volume: u32,
    pub max_reshuffles: u64,
    pub sort_mode: SortMode,
}

impl Default for GenerationOptions {
    fn default() -> Self {
        Self {
            avg_volume: DEFAULT_AVG_VOLUME,
            max_reshuffles: DEFAULT_MAX_RESHUFFLES,
            sort_mode: SortMode::Corrected,
        }
    }
}

/// `round(k * (|V| - 1) / 2)`.
pub fn requests_for(k: f64, num_nodes: usize) -> usize {
    round_half_up(k * (num_nodes - 1) as f64 / 2.0) as usize
}

/// Draws volume and payment for the first `n` sorted pairs.
///
/// `q = round(Uniform(1, 2 * avg_volume - 1))` and
/// `w = round(2 * avg_distance * q / avg_volume)`. Pair endpoints are
/// non-depot indexes and become node ids by adding one.
pub fn make_requests(
    graph: &LocationGraph,
    sorted_pairs: &[(usize, usize)],
    n: usize,
    avg_volume: u32,
    rng: &mut GenRng,
) -> Vec<Request> {
    let avg_distance = graph.average_distance();
    let high = f64::from(2 * avg_volume - 1);
    sorted_pairs
        .iter()
        .take(n)
        .enumerate()
        .map(|(id, &(a, b))| {
            let q = rng.rounded_uniform(1.0, high);
            let w = round_half_up(2.0 * avg_distance * q as f64 / f64::from(avg_volume));
            Request { id, payment: w, volume: q as u32, pickup: a + 1, dropoff: b + 1 }
        })
        .collect()
}

pub fn make_fleet(m: usize) -> Vec<Truck> {
    (0..m)
        .map(|id| {
            let (capacity, cost_coefficient) = TRUCK_TYPES[id % TRUCK_TYPES.len()];
            Truck { id, capacity, cost_coefficient, cost_matrix: None }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedInstance {
    pub k: f64,
    pub instance: Instance,
    /// Non-depot node ids missing from this instance's requests.
    pub uncovered: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceFamily {
    pub pairs: PairFamily,
    pub members: Vec<GeneratedInstance>,
}

/// Builds one pair family at the largest `k` and derives every instance
/// from a prefix of it. Requests are drawn once for the largest `n`, so a
/// smaller `k` sees exactly the first `n(k)` requests of a larger one.
pub fn generate_family(
    sample: &TsplibSample,
    k_list: &[f64],
    m: usize,
    seed: u64,
    options: &GenerationOptions,
) -> Result<InstanceFamily, GenError> {
    if k_list.is_empty() {
        return Err(GenError::Params("empty k list".into()));
    }
    if k_list.iter().any(|k| !k.is_finite() || *k < 1.0) {
        return Err(GenError::Params(format!("every k must be >= 1, got {k_list:?}")));
    }
    if k_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(GenError::Params(format!("k list must be strictly ascending, got {k_list:?}")));
    }
    if m == 0 {
        return Err(GenError::Params("m must be at least 1".into()));
    }
    if options.avg_volume == 0 {
        return Err(GenError::Params("avg_volume must be at least 1".into()));
    }

    let graph = LocationGraph::from_coords(&sample.coords)?;
    let num_nodes = graph.len();
    let num_nondepot = num_nodes - 1;
    let k_max = *k_list.last().expect("non-empty");
    let n_max = requests_for(k_max, num_nodes);
    if n_max == 0 {
        return Err(GenError::Params(format!("k = {k_max} yields no requests")));
    }

    let mut rng = GenRng::new(seed);
    let counts = repetition_counts(num_nondepot, n_max, &mut rng)?;
    let pairs = pair_nodes(&counts, n_max, &mut rng, options.max_reshuffles)?;
    let family = sort_pairs(&counts, &pairs, options.sort_mode)?;
    let requests = make_requests(&graph, &family.sorted_pairs, n_max, options.avg_volume, &mut rng);
    let fleet = make_fleet(m);

    let mut members = Vec::with_capacity(k_list.len());
    for &k in k_list {
        let n = requests_for(k, num_nodes);
        let meta = InstanceMeta { sample: sample.name.clone(), k, m, n, seed };
        let instance = Instance::new(graph.clone(), requests[..n].to_vec(), fleet.clone(), meta)?;
        let uncovered = instance.uncovered_nodes();
        members.push(GeneratedInstance { k, instance, uncovered });
    }
    Ok(InstanceFamily { pairs: family, members })
}

/// Single-`k` convenience wrapper around [`generate_family`].
pub fn generate_instance(
    sample: &TsplibSample,
    params: &GenerationParams,
) -> Result<Instance, GenError> {
    let options = GenerationOptions { avg_volume: params.avg_volume, ..Default::default() };
    let mut family = generate_family(sample, &[params.k], params.m, params.seed, &options)?;
    Ok(family.members.remove(0).instance)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> LocationGraph {
        LocationGraph::from_coords(&[(0.0, 0.0), (10.0, 0.0), (10.0, 10.0), (0.0, 10.0)]).unwrap()
    }

    #[test]
    fn request_counts_per_k() {
        let ns: Vec<_> = [1.0, 1.5, 2.0, 2.5, 3.0].iter().map(|&k| requests_for(k, 14)).collect();
        assert_eq!(ns, vec![7, 10, 13, 16, 20]);
        let ns: Vec<_> = [1.0, 1.5, 2.0, 2.5, 3.0].iter().map(|&k| requests_for(k, 16)).collect();
        assert_eq!(ns, vec![8, 11, 15, 19, 23]);
        assert_eq!(requests_for(1.0, 22), 11);
        assert_eq!(requests_for(1.0, 4), 2);
    }

    #[test]
    fn payment_formula() {
        // average distance 10, q 5, average volume 5 -> w = 20
        let w = round_half_up(2.0 * 10.0 * 5.0 / 5.0);
        assert_eq!(w, 20.0);
        let graph = square();
        let mut rng = GenRng::new(9);
        let pairs = vec![(0, 1), (1, 2), (2, 0), (0, 2)];
        let reqs = make_requests(&graph, &pairs, 3, 5, &mut rng);
        assert_eq!(reqs.len(), 3);
        let avg = graph.average_distance();
        for (r, pair) in reqs.iter().zip(&pairs) {
            assert!((1..=9).contains(&r.volume));
            assert_eq!(r.payment, round_half_up(2.0 * avg * f64::from(r.volume) / 5.0));
            assert_eq!((r.pickup, r.dropoff), (pair.0 + 1, pair.1 + 1));
        }
    }

    #[test]
    fn fleet_cycles_types() {
        let caps: Vec<_> = make_fleet(2).iter().map(|t| t.capacity).collect();
        assert_eq!(caps, vec![25, 20]);
        let coefs: Vec<_> = make_fleet(3).iter().map(|t| t.cost_coefficient).collect();
        assert_eq!(coefs, vec![1.2, 1.0, 0.8]);
        let fleet = make_fleet(7);
        assert_eq!(fleet[3].capacity, 25);
        assert_eq!(fleet[6].capacity, 25);
        let small = &fleet[2];
        let graph = square();
        assert_eq!(small.arc_cost(&graph, 0, 1), 0.8 * 10.0);
    }

    #[test]
    fn rejects_bad_k_lists() {
        let sample = TsplibSample::new("sq", vec![(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)])
            .unwrap();
        let opts = GenerationOptions::default();
        assert!(generate_family(&sample, &[2.0, 1.0], 2, 0, &opts).is_err());
        assert!(generate_family(&sample, &[0.5], 2, 0, &opts).is_err());
        assert!(generate_family(&sample, &[], 2, 0, &opts).is_err());
        assert!(generate_family(&sample, &[1.0], 0, 0, &opts).is_err());
    }
}
