//! Times one federated run on a synthetic table shaped like the smallest
//! reference dataset (3799 rows × 215 indicator features).

use std::time::Instant;

use fedsim_core::federation::{run_experiment, ExperimentConfig};
use fedsim_core::synthetic;

fn main() {
    let ds = synthetic::indicator_table::<f64>(2539, 1260, 215, 40, 1).unwrap();
    let cfg = ExperimentConfig {
        repeats: 1,
        ..ExperimentConfig::default()
    };
    let start = Instant::now();
    let res = run_experiment(&ds, &cfg, |_, r| {
        println!(
            "round {:>2}  acc {:.4}  {:?}",
            r.round, r.global_metrics.accuracy, r.wall_time
        )
    })
    .unwrap();
    println!("summary {:?}\ntotal {:?}", res.summary, start.elapsed());
}
