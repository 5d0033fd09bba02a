mod common;

use common::sample;
use ppdsp::encode::{decode_request, encode, predicted_counts, Encoding, Formulation};
use ppdsp::fixtures::example1;
use ppdsp::instgen::{generate_family, requests_for, GenerationOptions};
use ppdsp::mipir::census;
use ppdsp::xi;

const KS: [f64; 5] = [1.0, 1.5, 2.0, 2.5, 3.0];

/// Published model sizes: per sample and m, for each k the request then
/// location value.
#[rustfmt::skip]
const TABLES: [(&str, usize, [usize; 10], [usize; 10]); 15] = [
    ("burma14", 2, [576, 458, 1056, 464, 1680, 470, 2448, 476, 3696, 484], [1027, 1041, 1942, 1062, 3145, 1083, 4636, 1104, 7072, 1132]),
    ("burma14", 4, [1152, 916, 2112, 928, 3360, 940, 4896, 952, 7392, 968], [2047, 2075, 3874, 2114, 6277, 2153, 9256, 2192, 14124, 2244]),
    ("burma14", 6, [1728, 1374, 3168, 1392, 5040, 1410, 7344, 1428, 11088, 1452], [3067, 3109, 5806, 3166, 9409, 3223, 13876, 3280, 21176, 3356]),
    ("burma14", 8, [2304, 1832, 4224, 1856, 6720, 1880, 9792, 1904, 14784, 1936], [4087, 4143, 7738, 4218, 12541, 4293, 18496, 4368, 28228, 4468]),
    ("burma14", 10, [2880, 2290, 5280, 2320, 8400, 2350, 12240, 2380, 18480, 2420], [5107, 5177, 9670, 5270, 15673, 5363, 23116, 5456, 35280, 5580]),
    ("ulysses16", 2, [720, 588, 1248, 594, 2176, 602, 3360, 610, 4800, 618], [1300, 1380, 2311, 1401, 4107, 1429, 6415, 1457, 9235, 1485]),
    ("ulysses16", 4, [1440, 1176, 2496, 1188, 4352, 1204, 6720, 1220, 9600, 1236], [2592, 2752, 4611, 2791, 8199, 2843, 12811, 2895, 18447, 2947]),
    ("ulysses16", 6, [2160, 1764, 3744, 1782, 6528, 1806, 10080, 1830, 14400, 1854], [3884, 4124, 6911, 4181, 12291, 4257, 19207, 4333, 27659, 4409]),
    ("ulysses16", 8, [2880, 2352, 4992, 2376, 8704, 2408, 13440, 2440, 19200, 2472], [5176, 5496, 9211, 5571, 16383, 5671, 25603, 5771, 36871, 5871]),
    ("ulysses16", 10, [3600, 2940, 6240, 2970, 10880, 3010, 16800, 3050, 24000, 3090], [6468, 6868, 11511, 6961, 20475, 7085, 31999, 7209, 46083, 7333]),
    ("ulysses22", 2, [1248, 1074, 2448, 1084, 4048, 1094, 6048, 1104, 8976, 1116], [2311, 2685, 4636, 2720, 7761, 2755, 11686, 2790, 17452, 2832]),
    ("ulysses22", 4, [2496, 2148, 4896, 2168, 8096, 2188, 12096, 2208, 17952, 2232], [4611, 5359, 9256, 5424, 15501, 5489, 23346, 5554, 34872, 5632]),
    ("ulysses22", 6, [3744, 3222, 7344, 3252, 12144, 3282, 18144, 3312, 26928, 3348], [6911, 8033, 13876, 8128, 23241, 8223, 35006, 8318, 52292, 8432]),
    ("ulysses22", 8, [4992, 4296, 9792, 4336, 16192, 4376, 24192, 4416, 35904, 4464], [9211, 10707, 18496, 10832, 30981, 10957, 46666, 11082, 69712, 11232]),
    ("ulysses22", 10, [6240, 5370, 12240, 5420, 20240, 5470, 30240, 5520, 44880, 5580], [11511, 13381, 23116, 13536, 38721, 13691, 58326, 13846, 87132, 14032]),
];

fn nodes(name: &str) -> usize {
    match name {
        "burma14" => 14,
        "ulysses16" => 16,
        _ => 22,
    }
}

fn published(j: usize, vars: &[usize; 10], rows: &[usize; 10]) -> [(Formulation, usize, usize); 2] {
    [
        (Formulation::Request, vars[2 * j], rows[2 * j]),
        (Formulation::Location, vars[2 * j + 1], rows[2 * j + 1]),
    ]
}

#[test]
fn predicted_counts_match_every_table_cell() {
    for (name, m, vars, rows) in &TABLES {
        let v = nodes(name);
        for (j, &k) in KS.iter().enumerate() {
            let n = requests_for(k, v);
            for (f, want_vars, want_rows) in published(j, vars, rows) {
                let c = predicted_counts(f, v, n, *m);
                assert_eq!((c.num_vars, c.num_rows), (want_vars, want_rows), "{name} m={m} k={k} {f}");
            }
        }
    }
}

#[test]
fn generated_instances_have_table_sizes() {
    for (name, m, vars, rows) in &TABLES {
        let family = generate_family(&sample(name), &KS, *m, 11, &GenerationOptions::default()).unwrap();
        for (j, member) in family.members.iter().enumerate() {
            for (f, want_vars, want_rows) in published(j, vars, rows) {
                let c = census(encode(&member.instance, f).model());
                assert_eq!((c.num_vars, c.num_rows), (want_vars, want_rows), "{name} m={m} k={} {f}", member.k);
            }
        }
    }
}

#[test]
fn example1_location_model_size() {
    let c = census(encode(&example1(), Formulation::Location).model());
    assert_eq!(c.num_vars, 2 * 16 + 2 * 3 + 2 * 3 + 2 * 3);
    assert_eq!(c, predicted_counts(Formulation::Location, 4, 3, 2));
}

#[test]
fn empty_assignments_decode_to_nothing() {
    let inst = example1();
    let enc = encode(&inst, Formulation::Location);
    let sol = enc.decode(&vec![0.0; enc.model().num_vars()]).unwrap();
    assert!(sol.served_requests().is_empty());
    assert_eq!(xi(&sol, &inst).unwrap(), 0.0);

    let Encoding::Request(req) = encode(&inst, Formulation::Request) else { unreachable!() };
    let mut values = vec![0.0; req.model.num_vars()];
    let end = req.graph.end_depot();
    for t in 0..2 {
        values[req.x(t, 0, end).0] = 1.0;
    }
    assert_eq!(req.model.objective_value(&values), 0.0);
    let decoded = decode_request(&req, &values).unwrap();
    assert!(decoded.solution.served_requests().is_empty());
    assert_eq!(decoded.node_paths, vec![vec![0, end]; 2]);
}
