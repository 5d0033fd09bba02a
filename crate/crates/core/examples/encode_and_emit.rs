//! Encodes Example 1 under both formulations, prints the census next to the
//! closed-form prediction and writes the LP files.
//!
//! `cargo run --example encode_and_emit [-- OUT_DIR]`

use ppdsp::encode::{encode, predicted_counts, Formulation};
use ppdsp::fixtures::example1;
use ppdsp::mipir::{census, emit_lp};

fn main() {
    let out = std::env::args().nth(1).unwrap_or_else(|| std::env::temp_dir().display().to_string());
    let instance = example1();
    for f in Formulation::ALL {
        let encoding = encode(&instance, f);
        let model = encoding.model();
        model.check().expect("well-formed model");
        let predicted = predicted_counts(f, instance.num_nodes(), instance.requests().len(), instance.trucks().len());
        println!("{f:<8} census {}  predicted {predicted}", census(model));
        let path = std::path::Path::new(&out).join(format!("example1_{f}.lp"));
        std::fs::write(&path, emit_lp(model).expect("emit")).expect("write LP");
        println!("         {}", path.display());
    }
}
