use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use abrasion_core::dataset::{
    builtin_dataset, load_csv, load_feature_table, validate, write_csv, Column, Dataset,
};
use abrasion_core::evalbench::{
    self, evaluate, export_diagnostics, fit_with_retry, rows_rmse, run_trial, ExperimentConfig,
    ModelSpec,
};
use abrasion_core::mlfn::TrainingConfig;
use abrasion_core::persist::{ModelFile, StoredModel, TrainingMetadata};
use anyhow::{bail, Context, Result};

use crate::{parse, HyperArgs, PredictArgs, SourceArgs, SweepArgs, TrainArgs};

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

pub fn exit_code(e: &anyhow::Error) -> u8 {
    let numerical = e
        .chain()
        .filter_map(|c| c.downcast_ref::<abrasion_core::Error>())
        .any(abrasion_core::Error::is_numerical);
    if numerical {
        EXIT_NUMERICAL
    } else {
        EXIT_USAGE
    }
}

/// Joins the error chain, skipping causes whose text the wrapping error
/// already includes.
pub fn describe(e: &anyhow::Error) -> String {
    let mut out = String::new();
    for cause in e.chain() {
        let msg = cause.to_string();
        if !out.contains(&msg) {
            if !out.is_empty() {
                out.push_str(": ");
            }
            out.push_str(&msg);
        }
    }
    out
}

fn load_source(source: &SourceArgs) -> Result<Dataset> {
    match &source.data {
        Some(path) => load_csv(path).with_context(|| format!("loading {}", path.display())),
        None => Ok(builtin_dataset()),
    }
}

fn experiment_config(hyper: &HyperArgs) -> Result<ExperimentConfig> {
    let training = TrainingConfig {
        learning_rate: hyper.lr,
        momentum: hyper.momentum,
        max_epochs: hyper.max_epochs,
        patience_epochs: hyper.patience,
        ..TrainingConfig::default()
    };
    training.validate()?;
    Ok(ExperimentConfig {
        features: parse::feature_set(hyper.exclude.as_deref())?,
        training,
        sigma_grid: parse::sigma_grid(&hyper.sigma_grid)?,
    })
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn data_validate(path: Option<PathBuf>, source: &SourceArgs) -> Result<ExitCode> {
    let source = match (path, source) {
        (Some(_), SourceArgs { builtin: true, .. })
        | (Some(_), SourceArgs { data: Some(_), .. }) => {
            bail!("give either a path or --builtin/--data, not both")
        }
        (Some(p), _) => SourceArgs {
            builtin: false,
            data: Some(p),
        },
        (None, s) => s.clone(),
    };
    let d = load_source(&source)?;
    let report = validate(&d);
    println!("{} samples from {}", d.len(), d.source());
    print!("{report}");
    Ok(if report.is_ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_USAGE)
    })
}

pub fn data_export(source: &SourceArgs, out: Option<PathBuf>) -> Result<ExitCode> {
    let d = load_source(source)?;
    write_csv(&d, output(out.as_deref())?).context("writing csv")?;
    Ok(ExitCode::SUCCESS)
}

pub fn train(args: &TrainArgs) -> Result<ExitCode> {
    let spec: ModelSpec = args.spec.parse()?;
    if spec == ModelSpec::Mean {
        bail!("the mean baseline has no model file; use it in `sweep`");
    }
    let cfg = experiment_config(&args.hyper)?;
    let d = load_source(&args.source)?;

    let (model, init_seed, train_rmse, test_rmse) = if args.full {
        let (model, _, init_seed) = fit_with_retry(spec, &d, &cfg, args.seed)?;
        let all: Vec<usize> = (0..d.len()).collect();
        let train_rmse = rows_rmse(&evaluate(&model, &d, &all))?;
        (model, init_seed, train_rmse, None)
    } else {
        let trial = run_trial(&d, spec, &cfg, args.seed, args.test_size)?;
        let r = trial.result;
        (trial.model, r.init_seed, r.train_rmse, Some(r.test_rmse))
    };

    let metadata = TrainingMetadata {
        seed: args.seed,
        init_seed,
        test_size: if args.full { 0 } else { args.test_size },
        features: cfg.features.clone(),
        training: matches!(spec, ModelSpec::Mlfn { .. }).then(|| TrainingConfig {
            rng_seed: init_seed,
            ..cfg.training.clone()
        }),
        sigma_grid: (spec == ModelSpec::Grnn).then(|| cfg.sigma_grid.clone()),
        train_rmse,
        test_rmse,
    };
    let file = ModelFile::new(StoredModel::try_from(model)?, metadata);
    file.save(&args.out)?;

    let n_train = if args.full {
        d.len()
    } else {
        d.len() - args.test_size
    };
    print!(
        "{spec} seed={} trained={n_train} train_rmse={train_rmse}",
        args.seed
    );
    match test_rmse {
        Some(t) => println!(" tested={} test_rmse={t}", args.test_size),
        None => println!(" tested=0 test_rmse=n/a"),
    }
    println!("saved {}", args.out.display());
    Ok(ExitCode::SUCCESS)
}

pub fn predict(args: &PredictArgs) -> Result<ExitCode> {
    let file = ModelFile::load(&args.model)
        .with_context(|| format!("loading model {}", args.model.display()))?;
    let table = load_feature_table(&args.input)
        .with_context(|| format!("loading {}", args.input.display()))?;
    let predictions: Vec<f64> = table
        .rows
        .iter()
        .map(|r| file.model.predict_features(r))
        .collect();

    let mut w = output(args.out.as_deref())?;
    let mut header: Vec<&str> = Vec::new();
    if table.targets.is_some() {
        header.push(Column::TARGET.name());
    }
    header.extend(Column::FEATURES.iter().map(|c| c.name()));
    header.push("predicted_abrasion");
    if table.targets.is_some() {
        header.push("residual");
    }
    writeln!(w, "{}", header.join(","))?;
    for (i, (row, p)) in table.rows.iter().zip(&predictions).enumerate() {
        let mut cells: Vec<String> = Vec::with_capacity(header.len());
        let target = table.targets.as_ref().map(|t| t[i]);
        if let Some(y) = target {
            cells.push(y.to_string());
        }
        cells.extend(row.0.iter().map(f64::to_string));
        cells.push(p.to_string());
        if let Some(y) = target {
            cells.push((y - p).to_string());
        }
        writeln!(w, "{}", cells.join(","))?;
    }
    w.flush()?;
    drop(w);

    if let Some(targets) = &table.targets {
        let r = evalbench::rmse(&predictions, targets)?;
        let line = format!("rows={} rmse={r}", predictions.len());
        if args.out.is_some() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn sweep(args: &SweepArgs) -> Result<ExitCode> {
    let specs = ModelSpec::parse_list(&args.models)?;
    let seeds = parse::seeds(&args.seeds)?;
    let cfg = experiment_config(&args.hyper)?;
    let d = load_source(&args.source)?;

    if let Some(dir) = &args.out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let report = evalbench::sweep(&d, &specs, &cfg, &seeds, args.test_size)?;
    print!("{}", report.to_table());
    for set in &report.trial_sets {
        for f in &set.failures {
            eprintln!("{} seed {} failed: {}", set.model, f.seed, f.reason);
        }
    }

    if let Some(dir) = &args.out {
        let csv = dir.join("sweep.csv");
        let file = File::create(&csv).with_context(|| format!("creating {}", csv.display()))?;
        report.write_csv(BufWriter::new(file))?;
        let diag_dir = dir.join("diagnostics");
        for set in &report.trial_sets {
            export_diagnostics(&set.results, &diag_dir)?;
        }
        println!("wrote {} and {}", csv.display(), diag_dir.display());
    }
    Ok(ExitCode::SUCCESS)
}
