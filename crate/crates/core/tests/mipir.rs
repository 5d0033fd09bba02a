mod common;

use std::process::Command;

use common::{cbc_binary, has_highspy};
use ppdsp::encode::{encode, Formulation};
use ppdsp::fixtures::example1;
use ppdsp::mipir::{census, emit_lp, parse_lp, parse_solution, MipModel, RowSense, VarKind};

#[test]
fn single_binary_fixture() {
    let mut model = MipModel::new();
    let b = model.add_var("b", VarKind::Binary, 0.0, 1.0, 1.0);
    model.add_row("c0", [(b, 1.0)], RowSense::Le, 1.0);
    let text = emit_lp(&model).unwrap();
    assert_eq!(text, "Maximize\n obj: 1 b\nSubject To\n c0: 1 b <= 1\nBounds\nGenerals\nBinaries\n b\nEnd\n");
    assert_eq!(emit_lp(&model).unwrap(), text);
}

#[test]
fn empty_model_census() {
    let c = census(&MipModel::new());
    assert_eq!((c.num_vars, c.num_rows), (0, 0));
}

#[test]
fn encoded_models_survive_the_text_round_trip() {
    for f in Formulation::ALL {
        let enc = encode(&example1(), f);
        let text = emit_lp(enc.model()).unwrap();
        let back = parse_lp(&text).unwrap();
        assert_eq!(census(&back), census(enc.model()), "{f}");
        let orig = enc.model();
        for v in orig.variables() {
            let w = back.var(back.lookup(&v.name).unwrap());
            assert_eq!((w.kind, w.lower, w.upper, w.objective), (v.kind, v.lower, v.upper, v.objective), "{}", v.name);
        }
        for (a, b) in back.rows().iter().zip(orig.rows()) {
            assert_eq!((&a.name, a.sense, a.rhs), (&b.name, b.sense, b.rhs));
            let named = |m: &MipModel, r: &ppdsp::mipir::LinearRow| -> Vec<(String, f64)> {
                r.terms.iter().map(|&(v, c)| (m.var(v).name.clone(), c)).collect()
            };
            assert_eq!(named(&back, a), named(orig, b), "{}", a.name);
        }
    }
}

#[test]
fn solution_text() {
    let enc = encode(&example1(), Formulation::Location);
    let parsed = parse_solution("x_t0_o0_d1 1\n", enc.model()).unwrap();
    assert_eq!(parsed.get(enc.model(), "x_t0_o0_d1"), Some(1.0));
    assert_eq!(parsed.values.iter().filter(|&&v| v != 0.0).count(), 1);
    let empty = parse_solution("", enc.model()).unwrap();
    assert!(empty.values.iter().all(|&v| v == 0.0));
    assert_eq!(empty.values.len(), enc.model().num_vars());
}

fn example1_lp_files(dir: &std::path::Path) -> Vec<std::path::PathBuf> {
    Formulation::ALL
        .iter()
        .map(|&f| {
            let path = dir.join(format!("{f}.lp"));
            std::fs::write(&path, emit_lp(encode(&example1(), f).model()).unwrap()).unwrap();
            path
        })
        .collect()
}

#[test]
fn cbc_reads_models_without_warnings() {
    let Some(cbc) = cbc_binary() else {
        eprintln!("cbc not available; skipped");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    for path in example1_lp_files(dir.path()) {
        let out = Command::new(&cbc).arg(&path).arg("solve").output().unwrap();
        let text = String::from_utf8_lossy(&out.stdout);
        assert!(!text.contains("###"), "{}:\n{text}", path.display());
        assert!(!text.to_lowercase().contains("warning"), "{text}");
        assert!(text.contains("Objective value:                14.0"), "{text}");
    }
}

#[test]
fn highs_reads_models_without_warnings() {
    if !has_highspy() {
        eprintln!("highspy not available; skipped");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    for path in example1_lp_files(dir.path()) {
        let script = format!(
            "import highspy\nh = highspy.Highs()\nh.setOptionValue('output_flag', True)\n\
             print(h.readModel({:?}))\n",
            path.to_str().unwrap()
        );
        let out = Command::new("python3").args(["-c", &script]).output().unwrap();
        let text = format!("{}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr));
        assert!(text.contains("HighsStatus.kOk"), "{text}");
        assert!(!text.to_lowercase().contains("warning"), "{text}");
    }
}

#[test]
fn model_with_empty_sections_is_solvable() {
    // continuous only: Generals and Binaries stay empty, Bounds too
    let mut model = MipModel::new();
    let x = model.add_var("x", VarKind::Continuous, 0.0, f64::INFINITY, 1.0);
    model.add_row("cap", [(x, 2.0)], RowSense::Le, 3.0);
    let text = emit_lp(&model).unwrap();
    assert!(text.contains("Bounds\nGenerals\nBinaries\nEnd\n"));
    for adapter in ppdsp::harness::SolverAdapter::detect_all() {
        let run = ppdsp::harness::run_solver(&model, &adapter, 10).unwrap();
        assert_eq!(run.status, ppdsp::harness::SolverStatus::Optimal, "{}", adapter.name);
        assert!((run.objective.unwrap() - 1.5).abs() < 1e-9, "{}", adapter.name);
    }
}
