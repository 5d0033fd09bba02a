//! Benchmark grid over samples, `k`, `m` and formulations.

use std::io::{Read, Write};

use rayon::prelude::*;

use super::adapter::SolverAdapter;
use super::solve::solve_encoding;
use super::HarnessError;
use crate::encode::{encode, predicted_counts, Formulation};
use crate::instgen::{generate_family, requests_for, GenerationOptions, TsplibSample};
use crate::mipir::census;

pub const CSV_HEADER: [&str; 11] = [
    "sample", "k", "m", "n", "formulation", "num_vars", "num_rows", "status", "objective",
    "wall_time_s", "seed",
];

/// Status written for cells that were encoded but not sent to a solver.
pub const NOT_SOLVED: &str = "NotSolved";

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub samples: Vec<TsplibSample>,
    pub k_list: Vec<f64>,
    pub m_list: Vec<usize>,
    pub formulations: Vec<Formulation>,
    /// `None` runs encode-only.
    pub adapter: Option<SolverAdapter>,
    pub time_limit_s: u64,
    pub seed: u64,
    pub workers: usize,
    pub generation: GenerationOptions,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub sample: String,
    pub k: f64,
    pub m: usize,
    pub n: usize,
    pub formulation: Formulation,
    pub num_vars: usize,
    pub num_rows: usize,
    pub status: String,
    pub objective: Option<f64>,
    pub wall_time_s: Option<f64>,
    pub seed: u64,
}

struct Cell<'a> {
    sample: &'a TsplibSample,
    k: f64,
    m: usize,
    formulation: Formulation,
    instance: Result<crate::model::Instance, String>,
}

/// Runs every cell of the grid. Per-cell failures are logged and recorded
/// with status `Error`; the remaining cells still run.
pub fn bench(config: &BenchConfig) -> Result<Vec<BenchRecord>, HarnessError> {
    if config.k_list.is_empty() || config.m_list.is_empty() || config.formulations.is_empty() {
        return Err(HarnessError::Config("k, m and formulation lists must be non-empty".into()));
    }
    if config.time_limit_s == 0 {
        return Err(HarnessError::Config("time limit must be at least 1 s".into()));
    }

    let mut cells = Vec::new();
    for sample in &config.samples {
        for &m in &config.m_list {
            let family = generate_family(sample, &config.k_list, m, config.seed, &config.generation);
            for (i, &k) in config.k_list.iter().enumerate() {
                let instance = match &family {
                    Ok(f) => Ok(f.members[i].instance.clone()),
                    Err(e) => Err(e.to_string()),
                };
                for &formulation in &config.formulations {
                    cells.push(Cell { sample, k, m, formulation, instance: instance.clone() });
                }
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .map_err(|e| HarnessError::Config(e.to_string()))?;
    let records = pool.install(|| cells.par_iter().map(|cell| run_cell(cell, config)).collect());
    Ok(records)
}

fn run_cell(cell: &Cell<'_>, config: &BenchConfig) -> BenchRecord {
    let num_nodes = cell.sample.num_nodes();
    let mut record = BenchRecord {
        sample: cell.sample.name.clone(),
        k: cell.k,
        m: cell.m,
        n: requests_for(cell.k, num_nodes),
        formulation: cell.formulation,
        num_vars: 0,
        num_rows: 0,
        status: "Error".into(),
        objective: None,
        wall_time_s: None,
        seed: config.seed,
    };
    let instance = match &cell.instance {
        Ok(inst) => inst,
        Err(e) => {
            log::error!("{} k={} m={}: generation failed: {e}", record.sample, cell.k, cell.m);
            let predicted = predicted_counts(cell.formulation, num_nodes, record.n, cell.m);
            record.num_vars = predicted.num_vars;
            record.num_rows = predicted.num_rows;
            return record;
        }
    };
    let encoding = encode(instance, cell.formulation);
    let counts = census(encoding.model());
    record.num_vars = counts.num_vars;
    record.num_rows = counts.num_rows;
    let predicted = predicted_counts(cell.formulation, num_nodes, record.n, cell.m);
    if counts != predicted {
        log::error!("{}: census {counts} differs from predicted {predicted}", record.sample);
        record.status = "CountMismatch".into();
        return record;
    }
    let Some(adapter) = &config.adapter else {
        record.status = NOT_SOLVED.into();
        return record;
    };
    match solve_encoding(instance, &encoding, adapter, config.time_limit_s) {
        Ok(outcome) => {
            record.status = outcome.status.to_string();
            record.objective = outcome.objective;
            record.wall_time_s = Some(outcome.wall_time_s);
        }
        Err(e) => {
            log::error!("{} k={} m={} {}: {e}", record.sample, cell.k, cell.m, cell.formulation);
        }
    }
    record
}

fn opt_field(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.sample.clone(),
            r.k.to_string(),
            r.m.to_string(),
            r.n.to_string(),
            r.formulation.to_string(),
            r.num_vars.to_string(),
            r.num_rows.to_string(),
            r.status.clone(),
            opt_field(r.objective),
            opt_field(r.wall_time_s),
            r.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<BenchRecord>, HarnessError> {
    let bad = |line: u64, msg: String| HarnessError::Config(format!("CSV line {line}: {msg}"));
    let mut reader = csv::Reader::from_reader(input);
    let header = reader.headers().map_err(|e| bad(1, e.to_string()))?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(bad(1, format!("expected header {}", CSV_HEADER.join(","))));
    }
    let mut out = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let line = i as u64 + 2;
        let row = row.map_err(|e| bad(line, e.to_string()))?;
        let field = |j: usize| row.get(j).unwrap_or("");
        fn num<T: std::str::FromStr>(s: &str, name: &str, line: u64) -> Result<T, HarnessError> {
            s.parse()
                .map_err(|_| HarnessError::Config(format!("CSV line {line}: bad {name} {s:?}")))
        }
        let opt = |j: usize, name: &str| -> Result<Option<f64>, HarnessError> {
            match field(j) {
                "" => Ok(None),
                s => num(s, name, line).map(Some),
            }
        };
        out.push(BenchRecord {
            sample: field(0).to_string(),
            k: num(field(1), "k", line)?,
            m: num(field(2), "m", line)?,
            n: num(field(3), "n", line)?,
            formulation: field(4).parse().map_err(|e: String| bad(line, e))?,
            num_vars: num(field(5), "num_vars", line)?,
            num_rows: num(field(6), "num_rows", line)?,
            status: field(7).to_string(),
            objective: opt(8, "objective")?,
            wall_time_s: opt(9, "wall_time_s")?,
            seed: num(field(10), "seed", line)?,
        });
    }
    Ok(out)
}
