//! End-to-end acceptance checks. Runs as a plain binary (no libtest harness)
//! so that every criterion prints exactly one PASS/FAIL line.

use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use abrasion_core::dataset::{builtin_dataset, Column, FeatureSet};
use abrasion_core::evalbench::{
    export_diagnostics, fit_model, ols, run_trials, ExperimentConfig, ModelSpec,
};
use abrasion_core::grnn;
use abrasion_core::mlfn::Network;
use abrasion_core::persist::{ModelFile, StoredModel, TrainingMetadata};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Result<String, String> + 'a>);

const REFERENCE: &str = include_str!("data/reference_samples.tsv");

fn abrasion(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abrasion"))
        .args(args)
        .output()
        .expect("failed to launch abrasion")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// The 23 reference rows as printed: `[target, 8 features]`.
fn reference_rows() -> Vec<[f64; 9]> {
    REFERENCE
        .lines()
        .skip(1)
        .enumerate()
        .map(|(i, line)| {
            let cells: Vec<&str> = line.split('\t').collect();
            assert_eq!(cells.len(), 10, "reference row {}", i + 1);
            assert_eq!(cells[0].parse::<usize>().unwrap(), i + 1);
            let mut v = [0.0; 9];
            for (dst, src) in v.iter_mut().zip(&cells[1..]) {
                *dst = src.trim().parse().unwrap();
            }
            v
        })
        .collect()
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed <= limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:.2?}, limit {limit:?}"))
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dataset_fidelity() -> Result<String, String> {
    let started = Instant::now();
    let reference = reference_rows();
    let d = builtin_dataset();
    ensure(reference.len() == 23, || {
        format!("{} reference rows", reference.len())
    })?;
    ensure(d.len() == 23, || format!("builtin has {} samples", d.len()))?;
    for (i, (s, r)) in d.samples().iter().zip(&reference).enumerate() {
        for (c, (&got, &want)) in Column::ALL.iter().zip(s.values().iter().zip(r)) {
            ensure(got == want, || {
                format!("sample {} {c}: {got} != {want}", i + 1)
            })?;
        }
    }
    within(started.elapsed(), Duration::from_secs(1))?;
    Ok("207 values match".into())
}

fn data_audit() -> Result<String, String> {
    // Oracle: recompute the ratio column from the two moduli.
    let expected: Vec<String> = reference_rows()
        .iter()
        .enumerate()
        .filter(|(_, r)| (r[4] - r[3] / r[2]).abs() > 0.1)
        .map(|(i, _)| format!("sample {}", i + 1))
        .collect();
    ensure(expected == ["sample 21"], || {
        format!("oracle flags {expected:?}")
    })?;

    let text = stdout(&abrasion(&["data", "validate", "--builtin"]));
    ensure(text.contains("0 error(s), 1 warning(s)"), || text.clone())?;
    let warnings: Vec<&str> = text.lines().filter(|l| l.starts_with("warning:")).collect();
    ensure(warnings.len() == 1, || format!("{warnings:?}"))?;
    let w = warnings[0];
    ensure(
        w.contains("sample 21:") && w.contains("4.5") && w.contains("3.72"),
        || w.to_string(),
    )?;
    Ok(w.trim_start_matches("warning: ").to_string())
}

fn gradient_check() -> Result<String, String> {
    let started = Instant::now();
    let h = 1e-6;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    let pairs = 24;
    for case in 0..pairs {
        let n_in = rng.gen_range(1..=8);
        let n_hid = rng.gen_range(2..=16);
        let batch = rng.gen_range(1..=23);
        let net = Network::init(n_in, n_hid, 100 + case).unwrap();
        let xs: Vec<Vec<f64>> = (0..batch)
            .map(|_| (0..n_in).map(|_| rng.gen_range(0.0..1.0)).collect())
            .collect();
        let ys: Vec<f64> = (0..batch).map(|_| rng.gen_range(0.0..1.0)).collect();
        let analytic = net.gradient(&xs, &ys).unwrap().flatten();
        let p = net.params();
        let loss_at = |q: &[f64]| {
            let mut n = net.clone();
            n.set_params(q).unwrap();
            n.loss_and_gradient(&xs, &ys).unwrap().0
        };
        for k in 0..p.len() {
            let (mut plus, mut minus) = (p.clone(), p.clone());
            plus[k] += h;
            minus[k] -= h;
            let numeric = (loss_at(&plus) - loss_at(&minus)) / (2.0 * h);
            let scale = analytic[k].abs().max(numeric.abs()).max(1e-8);
            let rel = (analytic[k] - numeric).abs() / scale;
            worst = worst.max(rel);
            ensure(rel < 1e-4, || {
                format!(
                    "pair {case} param {k}: analytic {} numeric {numeric}",
                    analytic[k]
                )
            })?;
        }
    }
    within(started.elapsed(), Duration::from_secs(5))?;
    Ok(format!("{pairs} pairs, worst relative error {worst:.1e}"))
}

fn grnn_limits() -> Result<String, String> {
    let d = builtin_dataset();
    let features = FeatureSet::all();
    let targets = d.targets();
    let mean = targets.iter().sum::<f64>() / targets.len() as f64;

    let wide = grnn::fit(&d, &features, &[1000.0]).map_err(|e| e.to_string())?;
    for s in d.samples() {
        let p = wide.model.predict(s);
        ensure((p - mean).abs() <= 1e-3, || {
            format!("σ=1000 gives {p}, mean {mean}")
        })?;
    }

    let narrow = grnn::fit(&d, &features, &[1e-4]).map_err(|e| e.to_string())?;
    for s in d.samples() {
        let p = narrow.model.predict(s);
        ensure((p - s.target()).abs() <= 1e-9, || {
            format!("σ=1e-4 gives {p}, exemplar {}", s.target())
        })?;
    }

    let tuned = grnn::fit(&d, &features, &grnn::default_sigma_grid()).map_err(|e| e.to_string())?;
    for s in d.samples() {
        let p = tuned.model.predict(s);
        ensure((0.07..=0.35).contains(&p), || {
            format!("prediction {p} outside [0.07, 0.35]")
        })?;
    }
    Ok(format!(
        "mean {mean:.4}, selected σ = {:.4}",
        tuned.model.sigma
    ))
}

fn headline() -> Result<String, String> {
    let started = Instant::now();
    let d = builtin_dataset();
    let cfg = ExperimentConfig::default();
    let seeds: Vec<u64> = (1..=10).collect();
    let mlfn = run_trials(&d, ModelSpec::Mlfn { hidden: 3 }, &cfg, &seeds, 5)
        .map_err(|e| e.to_string())?;
    let base = run_trials(&d, ModelSpec::Mean, &cfg, &seeds, 5).map_err(|e| e.to_string())?;
    let (m, b) = (&mlfn.aggregate, &base.aggregate);
    ensure(m.trials == 10, || {
        format!("{} of 10 trials succeeded", m.trials)
    })?;
    ensure(m.mean_test_rmse <= 0.12, || {
        format!("mean test RMSE {}", m.mean_test_rmse)
    })?;
    ensure(m.mean_train_rmse <= 0.05, || {
        format!("mean train RMSE {}", m.mean_train_rmse)
    })?;
    ensure(m.mean_test_rmse <= 1.25 * b.mean_test_rmse, || {
        format!(
            "test RMSE {} vs baseline {}",
            m.mean_test_rmse, b.mean_test_rmse
        )
    })?;
    within(started.elapsed(), Duration::from_secs(120))?;
    Ok(format!(
        "MLFN-3 test {:.4}, train {:.4}, mean baseline {:.4}",
        m.mean_test_rmse, m.mean_train_rmse, b.mean_test_rmse
    ))
}

fn sweep_shape(dir: &Path) -> Result<String, String> {
    let started = Instant::now();
    let out = abrasion(&["sweep", "-o", dir.to_str().unwrap()]);
    let elapsed = started.elapsed();
    let text = stdout(&out);
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    for col in [
        "ANN model",
        "Trained samples",
        "Tested samples",
        "RMS error",
        "Running time",
    ] {
        ensure(header.contains(col), || {
            format!("table header lacks {col:?}: {header}")
        })?;
    }
    let rows: Vec<&str> = lines.take_while(|l| !l.starts_with("wrote")).collect();
    ensure(rows.len() == 16, || format!("{} table rows", rows.len()))?;
    let mut labels = vec!["GRNN".to_string()];
    labels.extend((2..=16).map(|n| format!("MLFN {n} Nodes")));
    for (row, label) in rows.iter().zip(&labels) {
        ensure(row.starts_with(label.as_str()), || {
            format!("expected {label}: {row}")
        })?;
        let cells: Vec<&str> = row[label.len()..].split_whitespace().collect();
        ensure(cells.len() == 4, || row.to_string())?;
        ensure(cells[0] == "18" && cells[1] == "5", || row.to_string())?;
        let rms: f64 = cells[2].parse().map_err(|_| row.to_string())?;
        ensure(rms.is_finite(), || row.to_string())?;
        ensure(cells[3].split(':').count() == 3, || row.to_string())?;
    }

    let csv = fs::read_to_string(dir.join("sweep.csv")).map_err(|e| e.to_string())?;
    let data: Vec<&str> = csv.lines().skip(1).collect();
    ensure(data.len() == 16, || format!("{} csv rows", data.len()))?;
    for line in &data {
        for cell in line.split(',').skip(1) {
            let v: f64 = cell.parse().map_err(|_| line.to_string())?;
            ensure(v.is_finite(), || line.to_string())?;
        }
    }
    within(elapsed, Duration::from_secs(300))?;
    Ok(format!("16 rows in {elapsed:.1?}"))
}

fn ols_baseline() -> Result<String, String> {
    let d = builtin_dataset();
    let m = ols::fit(&d, &FeatureSet::all()).map_err(|e| e.to_string())?;
    let rows: Vec<Vec<f64>> = d
        .samples()
        .iter()
        .map(|s| m.normalizer.normalize(&s.features()))
        .collect();
    let residuals: Vec<f64> = d
        .samples()
        .iter()
        .zip(&rows)
        .map(|(s, x)| m.normalizer.normalize_target(s.target()) - m.predict_scaled(x))
        .collect();
    let mut worst = residuals.iter().sum::<f64>().abs();
    for k in 0..rows[0].len() {
        let dot: f64 = rows.iter().zip(&residuals).map(|(x, r)| x[k] * r).sum();
        worst = worst.max(dot.abs());
    }
    ensure(worst < 1e-8, || format!("residual · column = {worst:e}"))?;

    // Oracle: the intercept-only fit's RMSE is the population std of the target.
    let y = d.targets();
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let std = (y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / y.len() as f64).sqrt();
    ensure((std - 0.0837).abs() < 1e-4, || format!("oracle std {std}"))?;
    let sse: f64 = d
        .samples()
        .iter()
        .map(|s| (m.predict(s) - s.target()).powi(2))
        .sum();
    let rmse = (sse / d.len() as f64).sqrt();
    ensure(rmse <= 0.0837, || format!("full-data RMSE {rmse}"))?;
    Ok(format!(
        "max |residual · column| {worst:.1e}, RMSE {rmse:.4} (bound {std:.4})"
    ))
}

fn strip_wall_time(csv: &str) -> Vec<String> {
    csv.lines()
        .map(|l| l.rsplit_once(',').unwrap().0.to_string())
        .collect()
}

fn determinism(first_sweep: &Path, scratch: &Path) -> Result<String, String> {
    let second = scratch.join("second");
    stdout(&abrasion(&["sweep", "-o", second.to_str().unwrap()]));
    let a = fs::read_to_string(first_sweep.join("sweep.csv")).map_err(|e| e.to_string())?;
    let b = fs::read_to_string(second.join("sweep.csv")).map_err(|e| e.to_string())?;
    ensure(strip_wall_time(&a) == strip_wall_time(&b), || {
        "sweep CSVs differ".into()
    })?;

    let mut diag_files = 0;
    for entry in fs::read_dir(first_sweep.join("diagnostics")).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        let other = second.join("diagnostics").join(path.file_name().unwrap());
        ensure(fs::read(&path).ok() == fs::read(&other).ok(), || {
            format!("{} differs", path.display())
        })?;
        diag_files += 1;
    }

    // Model files: in-process round trip, then CLI train/predict against the
    // same model fitted in-process.
    let d = builtin_dataset();
    let cfg = ExperimentConfig::default();
    let data_csv = scratch.join("builtin.csv");
    stdout(&abrasion(&[
        "data",
        "export",
        "--builtin",
        "-o",
        data_csv.to_str().unwrap(),
    ]));
    let mut worst: f64 = 0.0;
    for spec in [
        ModelSpec::Mlfn { hidden: 3 },
        ModelSpec::Grnn,
        ModelSpec::Ols,
    ] {
        let (model, _) = fit_model(spec, &d, &cfg, 1).map_err(|e| e.to_string())?;
        let metadata = TrainingMetadata {
            seed: 1,
            init_seed: 1,
            test_size: 0,
            features: FeatureSet::all(),
            training: None,
            sigma_grid: None,
            train_rmse: 0.0,
            test_rmse: None,
        };
        let file = ModelFile::new(StoredModel::try_from(model.clone()).unwrap(), metadata);
        let path = scratch.join(format!("{}.json", spec.slug()));
        file.save(&path).map_err(|e| e.to_string())?;
        let loaded = ModelFile::load(&path).map_err(|e| e.to_string())?;
        for s in d.samples() {
            let diff = (model.predict_features(&s.features())
                - loaded.model.predict_features(&s.features()))
            .abs();
            worst = worst.max(diff);
        }

        let cli_model = scratch.join(format!("cli-{}.json", spec.slug()));
        let spec_arg = spec.to_string();
        stdout(&abrasion(&[
            "train",
            &spec_arg,
            "--full",
            "--seed",
            "1",
            "-o",
            cli_model.to_str().unwrap(),
        ]));
        let preds = scratch.join(format!("cli-{}.csv", spec.slug()));
        stdout(&abrasion(&[
            "predict",
            cli_model.to_str().unwrap(),
            data_csv.to_str().unwrap(),
            "-o",
            preds.to_str().unwrap(),
        ]));
        let text = fs::read_to_string(&preds).map_err(|e| e.to_string())?;
        let mut lines = text.lines();
        let header: Vec<&str> = lines.next().unwrap().split(',').collect();
        let col = header
            .iter()
            .position(|h| *h == "predicted_abrasion")
            .unwrap();
        for (line, s) in lines.zip(d.samples()) {
            let p: f64 = line.split(',').nth(col).unwrap().parse().unwrap();
            worst = worst.max((p - model.predict_features(&s.features())).abs());
        }
    }
    ensure(worst <= 1e-12, || format!("prediction drift {worst:e}"))?;
    Ok(format!(
        "sweep.csv and {diag_files} diagnostics files identical; model drift {worst:.1e}"
    ))
}

fn diagnostics_fidelity(scratch: &Path) -> Result<String, String> {
    let d = builtin_dataset();
    let seeds: Vec<u64> = (1..=10).collect();
    let set = run_trials(
        &d,
        ModelSpec::Mlfn { hidden: 3 },
        &ExperimentConfig::default(),
        &seeds,
        5,
    )
    .map_err(|e| e.to_string())?;
    let dir = scratch.join("diag");
    let paths = export_diagnostics(&set.results, &dir).map_err(|e| e.to_string())?;
    ensure(paths.len() == 20, || format!("{} files", paths.len()))?;
    let mut worst: f64 = 0.0;
    for r in &set.results {
        for (part, reported) in [("train", r.train_rmse), ("test", r.test_rmse)] {
            let path = dir.join(format!("mlfn-3_seed{}_{part}.csv", r.seed));
            let text = fs::read_to_string(&path).map_err(|e| e.to_string())?;
            let sq: Vec<f64> = text
                .lines()
                .skip(1)
                .map(|l| {
                    let f: Vec<f64> = l.split(',').map(|c| c.parse().unwrap()).collect();
                    (f[1] - f[2]).powi(2)
                })
                .collect();
            let rmse = (sq.iter().sum::<f64>() / sq.len() as f64).sqrt();
            worst = worst.max((rmse - reported).abs());
        }
    }
    ensure(worst <= 1e-9, || format!("max deviation {worst:e}"))?;
    Ok(format!("20 files, max deviation {worst:.1e}"))
}

fn main() {
    let scratch = tempfile::tempdir().expect("tempdir");
    let sweep_dir = scratch.path().join("first");
    let criteria: Vec<Criterion> = vec![
        ("1 dataset fidelity", Box::new(dataset_fidelity)),
        ("2 data audit", Box::new(data_audit)),
        ("3 gradient correctness", Box::new(gradient_check)),
        ("4 GRNN limits", Box::new(grnn_limits)),
        ("5 MLFN-3 headline", Box::new(headline)),
        ("6 sweep table shape", Box::new(|| sweep_shape(&sweep_dir))),
        ("7 OLS baseline", Box::new(ols_baseline)),
        (
            "8 determinism",
            Box::new(|| determinism(&sweep_dir, scratch.path())),
        ),
        (
            "9 diagnostics fidelity",
            Box::new(|| diagnostics_fidelity(scratch.path())),
        ),
    ];

    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, check) in &criteria {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why}");
            }
        }
    }
    let _ = panic::take_hook();
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
