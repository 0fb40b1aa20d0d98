//! Mean AUC of every detector over seeded synthetic scenes.
//!
//! cargo run --release -p jmpt --example synthetic_benchmark -- [sigma ...]

use std::time::Instant;

use jmpt::datacube::{synth_scene, SceneConfig};
use jmpt::detectors::{run_method, Method, PipelineConfig};
use jmpt::evaluation::{auc, roc_curve};

fn main() -> Result<(), jmpt::Error> {
    let sigmas: Vec<f64> = std::env::args()
        .skip(1)
        .map(|s| s.parse().expect("sigma must be a number"))
        .collect();
    let sigmas = if sigmas.is_empty() { vec![0.1] } else { sigmas };
    let cfg = PipelineConfig::default();
    for sigma in sigmas {
        let start = Instant::now();
        let mut sums = [0.0; Method::ALL.len()];
        let seeds = 10;
        for seed in 0..seeds {
            let scene = synth_scene(&SceneConfig {
                noise_sigma: sigma,
                seed,
                ..SceneConfig::default()
            })?;
            for (i, &m) in Method::ALL.iter().enumerate() {
                let map = run_method(m, &scene.pair, &cfg)?;
                sums[i] += auc(&roc_curve(&map, &scene.mask)?);
            }
        }
        let row: Vec<String> = Method::ALL
            .iter()
            .zip(sums)
            .map(|(m, s)| format!("{m}={:.4}", s / seeds as f64))
            .collect();
        println!("sigma={sigma} {} ({:.1?})", row.join(" "), start.elapsed());
    }
    Ok(())
}
