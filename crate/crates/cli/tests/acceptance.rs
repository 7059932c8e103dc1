//! Acceptance suite. Prints one `PASS` / `FAIL` / `BLOCKED` line per
//! criterion; run with `cargo test -p fedsim --test acceptance -- --nocapture`.
//!
//! Reproduction criteria read the reference CSVs from `$FEDSIM_DATA_DIR`
//! (built-in file names). Without them those criteria report `BLOCKED` and
//! do not fail the suite. `FEDSIM_ACCEPT_KRONODROID=1` adds the optional
//! Kronodroid run.

#[path = "../../core/tests/common/mod.rs"]
mod oracles;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use fedsim_cli::{execute, Grid, RunManifest};
use fedsim_core::aggregation::{
    dw_fedavg, fedavg, update_priority_index, AggregationStrategy, PriorityIndex,
};
use fedsim_core::data::{known_dataset, DatasetSource, LabelMapping};
use fedsim_core::federation::{run_experiment, ClientUpdate, ExperimentConfig, Server, Summary};
use fedsim_core::metrics::{auc_rank, confusion, MetricSet};
use fedsim_core::nn::ParamVector;
use fedsim_core::seed::rng_from;
use fedsim_core::{synthetic, write_csv, Dataset};
use oracles::{
    auc_pairwise, gradient_check, kink_free_batch, mean_oracle, random_simplex, random_small_net,
    weighted_oracle,
};
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    Blocked,
    Info,
}

struct Line {
    id: &'static str,
    status: Status,
    elapsed: Duration,
    detail: String,
}

fn check(id: &'static str, budget: Option<Duration>, f: impl FnOnce() -> (Status, String)) -> Line {
    let t = Instant::now();
    let (mut status, mut detail) = f();
    let elapsed = t.elapsed();
    if let Some(b) = budget {
        if status == Status::Pass && elapsed > b {
            status = Status::Fail;
            detail = format!("{detail}; over budget {b:?}");
        }
    }
    Line {
        id,
        status,
        elapsed,
        detail,
    }
}

fn verdict(ok: bool, detail: String) -> (Status, String) {
    (if ok { Status::Pass } else { Status::Fail }, detail)
}

fn gradients() -> (Status, String) {
    let mut rng = rng_from(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let net = random_small_net(&mut rng, &[6, 5, 4, 3]);
        let (x, y) = kink_free_batch(&mut rng, &net, 4, 1e-3);
        worst = worst.max(gradient_check(&net, &x, &y, 1e-5));
    }
    verdict(
        worst < 1e-4,
        format!("20 nets, worst relative error {worst:.2e}"),
    )
}

fn aggregation() -> (Status, String) {
    let mut rng = rng_from(77);
    let mut worst: f64 = 0.0;
    let mut bitwise = true;
    for _ in 0..100 {
        let n = rng.random_range(1..=15);
        let len = rng.random_range(1..=300);
        let models: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..len).map(|_| rng.random_range(-5.0..5.0)).collect())
            .collect();
        let pv: Vec<ParamVector<f64>> = models.iter().cloned().map(ParamVector::new).collect();
        let betas = random_simplex(&mut rng, n);
        let idx = PriorityIndex::from_parts(betas.clone(), vec![0.5; n], 0.2, 1).unwrap();

        let avg = fedavg(&pv).unwrap();
        let dw = dw_fedavg(&pv, &idx).unwrap();
        for (g, w) in avg.values.iter().zip(mean_oracle(&models)) {
            worst = worst.max((g - w).abs());
        }
        for (g, w) in dw.values.iter().zip(weighted_oracle(&models, &betas)) {
            worst = worst.max((g - w).abs());
        }
        let uniform = dw_fedavg(&pv, &PriorityIndex::new(n, 0.2).unwrap()).unwrap();
        bitwise &= uniform
            .values
            .iter()
            .zip(&avg.values)
            .all(|(a, b)| a.to_bits() == b.to_bits());
    }
    verdict(
        worst < 1e-12 && bitwise,
        format!("100 populations, max |Δ| {worst:.1e}, uniform β bit-identical: {bitwise}"),
    )
}

fn priority_index() -> (Status, String) {
    let mut idx = PriorityIndex::new(4, 0.2).unwrap();
    idx.update(&[0.8; 4]).unwrap();
    idx.update(&[0.9, 0.8, 0.8, 0.8]).unwrap();
    let want = [0.2857, 0.2381, 0.2381, 0.2381];
    let hand = idx
        .betas()
        .iter()
        .zip(want)
        .all(|(g, w)| (g - w).abs() < 5e-5);

    let mut rng = rng_from(31);
    let mut failures = 0usize;
    let level = |rng: &mut dyn rand::RngCore| f64::from(rng.random_range(0..=10u32)) / 10.0;
    for _ in 0..1000 {
        let n = rng.random_range(2..=12);
        let alpha = rng.random_range(0.01..0.99);
        let betas = random_simplex(&mut rng, n);
        let prev: Vec<f64> = (0..n).map(|_| level(&mut rng)).collect();
        let curr: Vec<f64> = (0..n).map(|_| level(&mut rng)).collect();
        let idx = PriorityIndex::from_parts(betas.clone(), prev.clone(), alpha, 2).unwrap();
        let next = update_priority_index(&idx, &curr).unwrap();

        let simplex = next.betas().iter().all(|&b| b > 0.0)
            && (next.betas().iter().sum::<f64>() - 1.0).abs() < 1e-9;

        // a lone improver gains weight
        let i = rng.random_range(0..n);
        let mut lone = prev.clone();
        lone[i] = if prev[i] < 1.0 {
            (prev[i] + 0.05).min(1.0)
        } else {
            prev[i]
        };
        let gained =
            prev[i] == 1.0 || update_priority_index(&idx, &lone).unwrap().betas()[i] > betas[i];

        // relabelling clients relabels their weights
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let permuted = PriorityIndex::from_parts(
            perm.iter().map(|&p| betas[p]).collect(),
            perm.iter().map(|&p| prev[p]).collect(),
            alpha,
            2,
        )
        .unwrap();
        let np = update_priority_index(
            &permuted,
            &perm.iter().map(|&p| curr[p]).collect::<Vec<_>>(),
        )
        .unwrap();
        let equivariant = perm
            .iter()
            .enumerate()
            .all(|(k, &p)| (np.betas()[k] - next.betas()[p]).abs() < 1e-12);

        if !(simplex && gained && equivariant) {
            failures += 1;
        }
    }
    verdict(
        hand && failures == 0,
        format!(
            "hand example {:?}; 1000 random cases, {failures} failing",
            idx.betas()
        ),
    )
}

fn metrics() -> (Status, String) {
    let mut rng = rng_from(5);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let n = rng.random_range(2..=60);
        let mut truth: Vec<u8> = (0..n).map(|_| rng.random_range(0..2u8)).collect();
        truth[0] = 0;
        truth[1] = 1;
        // coarse scores force ties
        let scores: Vec<f64> = (0..n)
            .map(|_| f64::from(rng.random_range(0..8u32)) / 8.0)
            .collect();
        worst =
            worst.max((auc_rank(&scores, &truth).unwrap() - auc_pairwise(&scores, &truth)).abs());
    }
    // tp=3 tn=4 fp=1 fn=2
    let pred = [1, 1, 1, 0, 0, 0, 0, 1, 0, 0];
    let truth = [1, 1, 1, 1, 1, 0, 0, 0, 0, 0];
    let c = confusion(&pred, &truth).unwrap();
    let hand = (c.tp, c.tn, c.fp, c.fn_) == (3, 4, 1, 2)
        && (c.accuracy() - 0.7).abs() < 1e-15
        && (c.f1() - 2.0 * 3.0 / (2.0 * 3.0 + 1.0 + 2.0)).abs() < 1e-15
        && (c.fpr() - 0.2).abs() < 1e-15;
    let probs = [0.9, 0.8, 0.4, 0.3, 0.2];
    let m = MetricSet::evaluate(&probs, &[1, 0, 1, 0, 0], 0.5).unwrap();
    // positives {0.9, 0.4} vs negatives {0.8, 0.3, 0.2}: 5 of 6 pairs ordered
    let auc_hand = (m.auc - 5.0 / 6.0).abs() < 1e-15 && (m.accuracy - 0.6).abs() < 1e-15;
    verdict(
        worst < 1e-12 && hand && auc_hand,
        format!(
            "500 AUC instances, max |Δ| {worst:.1e}; hand confusion {hand}, hand AUC {auc_hand}"
        ),
    )
}

fn data_dir() -> Option<PathBuf> {
    std::env::var_os("FEDSIM_DATA_DIR").map(PathBuf::from)
}

struct RealData {
    cache: BTreeMap<&'static str, Option<Dataset>>,
}

impl RealData {
    fn get(&mut self, name: &'static str) -> Result<&Dataset, String> {
        let entry = self.cache.entry(name).or_insert_with(|| {
            let dir = data_dir()?;
            let src: DatasetSource = known_dataset(name)?.source();
            let path = src.resolved_path(Some(&dir));
            if !path.is_file() {
                return None;
            }
            src.load::<f64>(Some(&dir)).ok().map(|(d, _)| d)
        });
        entry.as_ref().ok_or_else(|| {
            let file = known_dataset(name).map(|k| k.file_name).unwrap_or("?");
            match data_dir() {
                Some(d) => format!("{file} not found or unreadable in {}", d.display()),
                None => format!("FEDSIM_DATA_DIR unset; needs {file}"),
            }
        })
    }
}

fn reference_run(
    ds: &Dataset,
    name: &str,
    clients: usize,
    strategy: AggregationStrategy,
) -> Summary {
    let cfg = ExperimentConfig {
        dataset: name.to_string(),
        n_clients: clients,
        n_rounds: 10,
        strategy,
        repeats: 5,
        min_max_scale: known_dataset(name).is_some_and(|k| k.min_max_scale),
        ..ExperimentConfig::default()
    };
    run_experiment(ds, &cfg, |_, _| {}).unwrap().summary
}

fn reproduction(
    data: &mut RealData,
    name: &'static str,
    judge: impl FnOnce(&Summary, &Summary) -> (bool, String),
) -> (Status, String) {
    let ds = match data.get(name) {
        Ok(d) => d.clone(),
        Err(why) => return (Status::Blocked, why),
    };
    let avg = reference_run(&ds, name, 5, AggregationStrategy::FedAvg);
    let dw = reference_run(&ds, name, 5, AggregationStrategy::DwFedAvg);
    let (ok, detail) = judge(&avg, &dw);
    verdict(
        ok,
        format!(
            "fedavg acc {:.4}±{:.4}, dw acc {:.4}±{:.4}; {detail}",
            avg.accuracy.mean, avg.accuracy.std, dw.accuracy.mean, dw.accuracy.std
        ),
    )
}

/// Same workload as criterion 5 on a synthetic table of the same shape.
/// Says nothing about accuracy on the real data; it only measures runtime.
fn stand_in_runtime() -> (Status, String) {
    let ds = synthetic::indicator_table::<f64>(2539, 1260, 215, 40, 1).unwrap();
    let t = Instant::now();
    let avg = reference_run(&ds, "stand-in", 5, AggregationStrategy::FedAvg);
    let dw = reference_run(&ds, "stand-in", 5, AggregationStrategy::DwFedAvg);
    (
        Status::Info,
        format!(
            "3799×215 synthetic, 5 clients, 10 rounds, 5 repeats, both strategies in {:.1?} (acc {:.4}/{:.4})",
            t.elapsed(),
            avg.accuracy.mean,
            dw.accuracy.mean
        ),
    )
}

fn trend(data: &mut RealData) -> (Status, String) {
    let mut names = vec!["malgenome", "tuandromd", "drebin"];
    if std::env::var("FEDSIM_ACCEPT_KRONODROID").is_ok_and(|v| v == "1") {
        names.push("kronodroid");
    }
    let mut notes = Vec::new();
    let mut worst_gap = f64::NEG_INFINITY;
    for name in names {
        let ds = match data.get(name) {
            Ok(d) => d.clone(),
            Err(_) => continue,
        };
        for s in AggregationStrategy::ALL {
            let few = reference_run(&ds, name, 5, s).accuracy.mean;
            let many = reference_run(&ds, name, 15, s).accuracy.mean;
            worst_gap = worst_gap.max(many - few);
            notes.push(format!("{name}/{s}: 5c {few:.4} 15c {many:.4}"));
        }
    }
    if notes.is_empty() {
        return (Status::Blocked, "no reference dataset available".into());
    }
    verdict(
        worst_gap <= 0.01,
        format!("{}; worst 15c−5c {worst_gap:+.4}", notes.join(", ")),
    )
}

fn determinism() -> (Status, String) {
    let dir = tempfile::tempdir().unwrap();
    let ds = synthetic::indicator_table::<f64>(400, 200, 30, 8, 9).unwrap();
    write_csv(&ds, &dir.path().join("toy.csv"), "class").unwrap();
    let mut m = RunManifest::default();
    m.datasets.insert(
        "toy".into(),
        DatasetSource {
            name: "toy".into(),
            path: dir.path().join("toy.csv"),
            label_column: "class".into(),
            mapping: LabelMapping::default(),
            exclude_columns: Vec::new(),
            min_max_scale: false,
        },
    );
    m.grid = Grid {
        datasets: vec!["toy".into()],
        clients: vec![3, 5],
        rounds: vec![3],
        ..Grid::default()
    };
    m.defaults.repeats = 2;
    m.defaults.hidden = vec![16, 8];
    let mut bodies = Vec::new();
    for (sub, threads) in [("a", 1), ("b", 0)] {
        m.out_dir = dir.path().join(sub);
        m.defaults.threads = threads;
        let out = execute(&m).unwrap();
        bodies.push(std::fs::read(&out.summary_csv).unwrap());
    }
    verdict(
        bodies[0] == bodies[1],
        format!(
            "two invocations, {} summary bytes each, identical: {}",
            bodies[0].len(),
            bodies[0] == bodies[1]
        ),
    )
}

fn privacy() -> (Status, String) {
    // the only server entry point for client data takes updates, and an update
    // destructures into exactly an id, a parameter vector and a scalar
    let _: fn(&mut Server<f64>, &[ClientUpdate<f64>]) -> fedsim_core::Result<()> =
        Server::aggregate;
    let sample = ClientUpdate {
        client_id: 0,
        params: ParamVector::<f64>::zeros(3),
        local_accuracy: 0.5,
    };
    let ClientUpdate {
        client_id,
        params,
        local_accuracy,
    } = sample;
    let (_, _, _): (usize, ParamVector<f64>, f64) = (client_id, params, local_accuracy);

    let sources = [
        (
            "server.rs",
            include_str!("../../core/src/federation/server.rs"),
        ),
        (
            "aggregation.rs",
            include_str!("../../core/src/aggregation.rs"),
        ),
    ];
    let forbidden = [
        "Dataset",
        "ClientShard",
        "Matrix",
        "features",
        "labels",
        "local_test",
        "Client<",
    ];
    let leaks: Vec<String> = sources
        .iter()
        .flat_map(|(file, text)| {
            forbidden
                .iter()
                .filter(move |tok| text.contains(**tok))
                .map(move |tok| format!("{file}:{tok}"))
        })
        .collect();
    verdict(
        leaks.is_empty(),
        if leaks.is_empty() {
            "update = (usize, ParamVector, f64); server and aggregation sources name no data types"
                .into()
        } else {
            format!("server side mentions {}", leaks.join(", "))
        },
    )
}

#[test]
fn acceptance() {
    let secs = Duration::from_secs;
    let mut data = RealData {
        cache: BTreeMap::new(),
    };
    let mut lines = vec![
        check("1 gradient check", Some(secs(10)), gradients),
        check("2 aggregation oracles", Some(secs(5)), aggregation),
        check("3 priority index", Some(secs(5)), priority_index),
        check("4 metric oracles", None, metrics),
    ];
    lines.push(check("5 malgenome reproduction", Some(secs(300)), || {
        reproduction(&mut data, "malgenome", |avg, dw| {
            let ok = avg.accuracy.mean >= 0.97
                && dw.accuracy.mean >= 0.97
                && (dw.accuracy.mean - 0.9943).abs() <= 0.02
                && avg.fpr.mean <= 0.03
                && dw.fpr.mean <= 0.03;
            (ok, format!("fpr {:.4}/{:.4}", avg.fpr.mean, dw.fpr.mean))
        })
    }));
    lines.push(check(
        "5* runtime on synthetic stand-in",
        None,
        stand_in_runtime,
    ));
    lines.push(check("6 tuandromd reproduction", Some(secs(300)), || {
        reproduction(&mut data, "tuandromd", |avg, dw| {
            let ok = (avg.accuracy.mean - 0.9880).abs() <= 0.02
                && (dw.accuracy.mean - 0.9861).abs() <= 0.02
                && avg.f1.mean >= 0.97
                && dw.f1.mean >= 0.97;
            (ok, format!("f1 {:.4}/{:.4}", avg.f1.mean, dw.f1.mean))
        })
    }));
    lines.push(check("7 drebin reproduction", Some(secs(900)), || {
        reproduction(&mut data, "drebin", |avg, dw| {
            let ok = (dw.accuracy.mean - 0.9828).abs() <= 0.02 && dw.auc.mean >= 0.98;
            (ok, format!("auc {:.4}/{:.4}", avg.auc.mean, dw.auc.mean))
        })
    }));
    if std::env::var("FEDSIM_ACCEPT_KRONODROID").is_ok_and(|v| v == "1") {
        lines.push(check("7b kronodroid reproduction (optional)", None, || {
            reproduction(&mut data, "kronodroid", |_, dw| {
                (
                    (dw.accuracy.mean - 0.9596).abs() <= 0.03,
                    "target 0.9596±0.03".into(),
                )
            })
        }));
    }
    lines.push(check("8 client-count trend", None, || trend(&mut data)));
    lines.push(check("9 determinism", None, determinism));
    lines.push(check("10 privacy boundary", None, privacy));

    println!();
    for l in &lines {
        let tag = match l.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Blocked => "BLOCKED",
            Status::Info => "INFO",
        };
        println!("[{tag:<7}] {:<38} {:>9.2?}  {}", l.id, l.elapsed, l.detail);
    }
    let failed: Vec<&str> = lines
        .iter()
        .filter(|l| l.status == Status::Fail)
        .map(|l| l.id)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
