//! Encode-only benchmark over the bundled samples, rendered as markdown.
//!
//! `cargo run --release --example bench_counts`

use ppdsp::encode::Formulation;
use ppdsp::harness::{bench, render_markdown, BenchConfig, ReportLabel};
use ppdsp::instgen::{parse_tsplib, GenerationOptions};

fn main() {
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data");
    let samples = ["burma14", "ulysses16", "ulysses22"]
        .iter()
        .map(|name| {
            let text = std::fs::read_to_string(format!("{data}/{name}.tsp")).expect("read sample");
            parse_tsplib(&text).expect("parse sample")
        })
        .collect();
    let config = BenchConfig {
        samples,
        k_list: vec![1.0, 1.5, 2.0, 2.5, 3.0],
        m_list: vec![2, 4, 6],
        formulations: Formulation::ALL.to_vec(),
        adapter: None,
        time_limit_s: 1,
        seed: 1,
        workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        generation: GenerationOptions::default(),
    };
    let records = bench(&config).expect("bench");
    print!("{}", render_markdown(&records, &ReportLabel::default()).expect("render"));
}
