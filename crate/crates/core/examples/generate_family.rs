//! One seeded family of instances from a TSPLIB sample: request count per k,
//! request list of the smallest member, and any uncovered nodes.
//!
//! `cargo run --example generate_family [-- data/ulysses16.tsp M SEED]`

use ppdsp::instgen::{generate_family, parse_tsplib, GenerationOptions};

fn main() {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/burma14.tsp").into());
    let m: usize = args.next().map_or(2, |s| s.parse().expect("M"));
    let seed: u64 = args.next().map_or(1, |s| s.parse().expect("SEED"));

    let sample = parse_tsplib(&std::fs::read_to_string(&path).expect("read sample")).expect("parse sample");
    let ks = [1.0, 1.5, 2.0, 2.5, 3.0];
    let family = generate_family(&sample, &ks, m, seed, &GenerationOptions::default()).expect("generate");

    println!("{} |V|={} m={m} seed={seed}", sample.name, sample.num_nodes());
    for member in &family.members {
        println!("k={:<4} n={:<3} uncovered={:?}", member.k, member.instance.requests().len(), member.uncovered);
    }
    let first = &family.members[0].instance;
    for (r, req) in first.requests().iter().enumerate() {
        println!("  r{r}: {} -> {}  w={} q={}", req.pickup, req.dropoff, req.payment, req.volume);
    }
    for truck in first.trucks() {
        println!("  t{}: capacity {} cost x{}", truck.id, truck.capacity, truck.cost_coefficient);
    }
}
