//! The generate / train / eval pipeline the `entangle-ssl` binary drives,
//! called as a library on a shrunken three-qubit GHZ preset.
//!
//! cargo run --release --example experiment_pipeline

use entangle_ssl::experiment::{
    evaluate, generate, reproducible_files, resolve_config, train, Method, RunOptions,
};
use entangle_ssl::Result;
use serde_json::json;

fn main() -> Result<()> {
    // the same document could be passed to the binary with --config
    let doc = json!({
        "preset": "ghz3-20",
        "name": "ghz3-demo",
        "test": 600,
        "seeds": [1, 2],
        "train": {"outer_steps": 4, "epochs_update": 50}
    });
    let cfg = resolve_config(doc, None)?;
    println!("config {} digest {}", cfg.name, cfg.digest());

    let out = std::env::temp_dir().join("entangle-ssl-pipeline-example");
    let mut opts = RunOptions::new(&out);
    opts.jobs = 2;
    opts.force = true;
    generate(&cfg, &opts)?;
    for method in Method::ALL {
        train(&cfg, method, &opts)?;
        let summary = evaluate(&cfg, method, &opts)?;
        for (name, t) in &summary.tests {
            println!(
                "{method:>3} {name:<10} accuracy {:.4} ± {:.4}  micro AUC {:.4}",
                t.accuracy.mean, t.accuracy.std, t.auc.mean
            );
        }
    }
    println!("\nseed 1 outputs under {}:", out.display());
    for p in reproducible_files(&cfg, &opts, 1)? {
        println!("  {}", p.file_name().unwrap_or_default().to_string_lossy());
    }
    Ok(())
}
