//! Markdown tables in the shape of the per-sample comparison tables:
//! one block per `m`, rows `#Var.`, `#Con.`, `Opt.`, and for every `k` a
//! request cell on the left and a location cell on the right.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::bench::BenchRecord;
use super::HarnessError;
use crate::encode::Formulation;

/// Which solver produced the objective values, printed above every table.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReportLabel {
    pub solver: Option<String>,
    pub time_limit_s: Option<u64>,
}

impl ReportLabel {
    pub fn objective_caption(&self) -> String {
        match (&self.solver, self.time_limit_s) {
            (Some(s), Some(t)) => format!("Opt. = objective reported by {s} within a {t} s time limit"),
            (Some(s), None) => format!("Opt. = objective reported by {s} (time limit unknown)"),
            (None, _) => "Opt. = not solved (encode-only)".to_string(),
        }
    }
}

fn k_key(k: f64) -> u64 {
    k.to_bits()
}

#[derive(Clone, Copy, PartialEq)]
enum Better {
    Smaller,
    Larger,
}

fn pair(left: Option<f64>, right: Option<f64>, better: Better, blank: &str) -> (String, String) {
    let show = |x: Option<f64>| x.map_or_else(|| blank.to_string(), |v| v.to_string());
    let (l, r) = (show(left), show(right));
    match (left, right) {
        (Some(a), Some(b)) if a != b => {
            let left_wins = (a < b) == (better == Better::Smaller);
            if left_wins {
                (format!("**{l}**"), r)
            } else {
                (l, format!("**{r}**"))
            }
        }
        _ => (l, r),
    }
}

/// Renders `records` grouped by sample, then `m`. Refuses when records
/// carry objectives but `label` names no solver.
pub fn render_markdown(records: &[BenchRecord], label: &ReportLabel) -> Result<String, HarnessError> {
    if label.solver.is_none() && records.iter().any(|r| r.objective.is_some()) {
        return Err(HarnessError::Config(
            "records carry objective values; name the solver that produced them".into(),
        ));
    }
    let mut samples: Vec<&str> = Vec::new();
    for r in records {
        if !samples.contains(&r.sample.as_str()) {
            samples.push(&r.sample);
        }
    }

    let mut out = String::new();
    for sample in samples {
        let rows: Vec<&BenchRecord> = records.iter().filter(|r| r.sample == sample).collect();
        let mut ks: Vec<(f64, usize)> = Vec::new();
        for r in &rows {
            if !ks.iter().any(|(k, _)| k_key(*k) == k_key(r.k)) {
                ks.push((r.k, r.n));
            }
        }
        ks.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut ms: Vec<usize> = rows.iter().map(|r| r.m).collect();
        ms.sort_unstable();
        ms.dedup();
        let cell: BTreeMap<(usize, u64, Formulation), &BenchRecord> =
            rows.iter().map(|r| ((r.m, k_key(r.k), r.formulation), *r)).collect();

        writeln!(out, "### {sample}\n").unwrap();
        writeln!(out, "Left value: request formulation; right value: location formulation.").unwrap();
        writeln!(out, "{}.\n", label.objective_caption()).unwrap();
        write!(out, "| m | item |").unwrap();
        for (k, n) in &ks {
            write!(out, " k={k} (n={n}) req | k={k} (n={n}) loc |").unwrap();
        }
        out.push('\n');
        out.push_str("|---|---|");
        out.push_str(&"---:|".repeat(2 * ks.len()));
        out.push('\n');
        for m in ms {
            for (i, item) in ["#Var.", "#Con.", "Opt."].into_iter().enumerate() {
                write!(out, "| {} | {item} |", if i == 0 { m.to_string() } else { String::new() }).unwrap();
                for (k, _) in &ks {
                    let get = |f| cell.get(&(m, k_key(*k), f)).copied();
                    let (req, loc) = (get(Formulation::Request), get(Formulation::Location));
                    let value = |r: Option<&BenchRecord>| -> Option<f64> {
                        r.and_then(|r| match i {
                            0 => Some(r.num_vars as f64),
                            1 => Some(r.num_rows as f64),
                            _ => r.objective,
                        })
                    };
                    let blank = if i == 2 { "-" } else { "" };
                    let better = if i == 2 { Better::Larger } else { Better::Smaller };
                    let (l, r) = pair(value(req), value(loc), better, blank);
                    write!(out, " {l} | {r} |").unwrap();
                }
                out.push('\n');
            }
        }
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(f: Formulation, vars: usize, rows: usize, obj: Option<f64>) -> BenchRecord {
        BenchRecord {
            sample: "burma14".into(),
            k: 1.0,
            m: 2,
            n: 7,
            formulation: f,
            num_vars: vars,
            num_rows: rows,
            status: "Optimal".into(),
            objective: obj,
            wall_time_s: None,
            seed: 1,
        }
    }

    #[test]
    fn bolding_follows_dominance() {
        let records = vec![
            rec(Formulation::Location, 458, 1041, Some(30.0)),
            rec(Formulation::Request, 576, 1027, Some(30.0)),
        ];
        let label = ReportLabel { solver: Some("cbc".into()), time_limit_s: Some(600) };
        let md = render_markdown(&records, &label).unwrap();
        assert!(md.contains("| 2 | #Var. | 576 | **458** |"), "{md}");
        assert!(md.contains("|  | #Con. | **1027** | 1041 |"), "{md}");
        assert!(md.contains("|  | Opt. | 30 | 30 |"), "{md}");
        assert!(md.contains("cbc within a 600 s time limit"));
    }

    #[test]
    fn larger_objective_wins() {
        let records = vec![
            rec(Formulation::Location, 458, 1041, Some(40.0)),
            rec(Formulation::Request, 576, 1027, Some(42.0)),
        ];
        let label = ReportLabel { solver: Some("highs".into()), time_limit_s: Some(60) };
        let md = render_markdown(&records, &label).unwrap();
        assert!(md.contains("| Opt. | **42** | 40 |"), "{md}");
    }

    #[test]
    fn encode_only_label() {
        let records = vec![rec(Formulation::Location, 458, 1041, None)];
        let md = render_markdown(&records, &ReportLabel::default()).unwrap();
        assert!(md.contains("not solved (encode-only)"));
        assert!(md.contains("| Opt. | - | - |"), "{md}");
    }

    #[test]
    fn unlabeled_objectives_refused() {
        let records = vec![rec(Formulation::Location, 458, 1041, Some(1.0))];
        assert!(render_markdown(&records, &ReportLabel::default()).is_err());
    }
}
