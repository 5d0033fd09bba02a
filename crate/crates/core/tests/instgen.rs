mod common;

use std::collections::HashSet;

use common::sample;
use ppdsp::format::{parse_instance, serialize_instance};
use ppdsp::instgen::{generate_family, make_fleet, GenerationOptions, TsplibSample};
use proptest::prelude::*;

const KS: [f64; 5] = [1.0, 1.5, 2.0, 2.5, 3.0];

#[test]
fn bundled_samples() {
    let burma = sample("burma14");
    assert_eq!(burma.name, "burma14");
    assert_eq!(burma.num_nodes(), 14);
    assert_eq!(burma.coords[0], (16.47, 96.10));
    assert_eq!(sample("ulysses16").num_nodes(), 16);
    let u22 = sample("ulysses22");
    assert_eq!(u22.num_nodes(), 22);
    assert_eq!(u22.coords[..16], sample("ulysses16").coords[..]);
}

#[test]
fn requests_per_k() {
    let family = generate_family(&sample("burma14"), &KS, 2, 7, &GenerationOptions::default()).unwrap();
    let ns: Vec<usize> = family.members.iter().map(|g| g.instance.requests().len()).collect();
    assert_eq!(ns, [7, 10, 13, 16, 20]);
    let family = generate_family(&sample("ulysses22"), &[1.0], 2, 7, &GenerationOptions::default()).unwrap();
    assert_eq!(family.members[0].instance.requests().len(), 11);
}

#[test]
fn smaller_k_is_a_prefix() {
    let family = generate_family(&sample("ulysses16"), &KS, 4, 3, &GenerationOptions::default()).unwrap();
    let largest = family.members.last().unwrap().instance.requests();
    for member in &family.members {
        let reqs = member.instance.requests();
        assert_eq!(reqs, &largest[..reqs.len()]);
        assert_eq!(member.instance.trucks(), &make_fleet(4)[..]);
    }
    // requests use the sorted pairs in order
    for (r, &(a, b)) in largest.iter().zip(&family.pairs.sorted_pairs) {
        assert_eq!((r.pickup, r.dropoff), (a + 1, b + 1));
    }
}

#[test]
fn family_prefixes_past_the_head_cover_every_node() {
    for seed in 0..20 {
        let family = generate_family(&sample("burma14"), &KS, 2, seed, &GenerationOptions::default()).unwrap();
        let pairs = &family.pairs;
        for len in pairs.head_len..=pairs.sorted_pairs.len() {
            assert!(pairs.uncovered_by_prefix(len).is_empty(), "seed {seed} prefix {len}");
        }
    }
}

#[test]
fn same_inputs_same_bytes() {
    let run = || {
        generate_family(&sample("ulysses22"), &KS, 6, 99, &GenerationOptions::default())
            .unwrap()
            .members
            .iter()
            .map(|g| serialize_instance(&g.instance))
            .collect::<Vec<_>>()
    };
    assert_eq!(run(), run());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_instances_are_well_formed(seed in 0u64..1_000_000, m in 1usize..6, which in 0usize..3) {
        let name = ["burma14", "ulysses16", "ulysses22"][which];
        let s = sample(name);
        let options = GenerationOptions::default();
        let Ok(family) = generate_family(&s, &KS, m, seed, &options) else {
            return Ok(());
        };
        let inst = &family.members.last().unwrap().instance;
        let mut seen = HashSet::new();
        for r in inst.requests() {
            prop_assert!(r.pickup != r.dropoff);
            prop_assert!(r.pickup != 0 && r.dropoff != 0);
            prop_assert!(seen.insert((r.pickup, r.dropoff)), "ordered pair repeated");
            prop_assert!((1..=9).contains(&r.volume));
            let avg = inst.graph().average_distance();
            let w = (2.0 * avg * f64::from(r.volume) / 5.0 + 0.5).floor();
            prop_assert_eq!(r.payment, w);
        }
        prop_assert!(family.members.last().unwrap().uncovered.is_empty());
        let text = serialize_instance(inst);
        prop_assert_eq!(&parse_instance(&text).unwrap(), inst);
    }
}

#[test]
fn tiny_sample_gets_two_requests() {
    let s = TsplibSample::new("square", vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap();
    let family = generate_family(&s, &[1.0], 1, 5, &GenerationOptions::default()).unwrap();
    assert_eq!(family.members[0].instance.requests().len(), 2);
}
