use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use eigenlocus_model::{classify, train_with_options, Eigenlocus, GridSpec};
use equilibrium_laws::{full_report, model_gram, EquilibriumReport};
use gaussian_lab::{error_rate_on, sample_dataset, sample_test_set, BayesOracle};
use kernel_core::LabeledSample;
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::svg;
use crate::{Error, Result};

const SOLVER_TOL: f64 = 1e-8;
const SOLVER_MAX_ITER: usize = 100_000;

/// Everything measured for one seed. Metrics stay meaningful for flagged
/// rows: a non-converged solve still yields the solver's best iterate, and
/// its model is what the row describes.
#[derive(Debug, Clone)]
pub struct SeedOutcome {
    pub seed: u64,
    pub converged: bool,
    pub error_rate: f64,
    pub bayes_rate: f64,
    pub extreme_fraction: f64,
    pub report: EquilibriumReport,
}

/// Median and quartiles of one column, over its finite values.
#[derive(Debug, Clone, Copy)]
pub struct Stats {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
}

impl Stats {
    pub fn iqr(&self) -> f64 {
        self.q3 - self.q1
    }
}

#[derive(Debug)]
pub struct RunSummary {
    pub rows: Vec<SeedOutcome>,
    pub converged_count: usize,
    pub error: Stats,
    pub bayes: Stats,
    pub extreme: Stats,
    pub csv_path: PathBuf,
    pub out_dir: PathBuf,
}

impl RunSummary {
    pub fn all_seeds_failed(&self) -> bool {
        self.converged_count == 0
    }
}

/// Median of a sorted slice (mean of the middle pair for even lengths).
fn median_sorted(v: &[f64]) -> f64 {
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Quartiles are medians of the lower and upper halves, excluding the
/// middle element for odd lengths.
pub fn stats_of(values: impl Iterator<Item = f64>) -> Stats {
    let mut v: Vec<f64> = values.filter(|x| x.is_finite()).collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    Stats {
        median: median_sorted(&v),
        q1: median_sorted(&v[..n / 2]),
        q3: median_sorted(&v[n - n / 2..]),
    }
}

fn nan_report() -> EquilibriumReport {
    EquilibriumReport {
        dual_equilibrium: f64::NAN,
        primal_equilibrium: f64::NAN,
        eigenenergy_identity: f64::NAN,
        class1_energy: f64::NAN,
        class2_energy: f64::NAN,
        energy_split: f64::NAN,
        cosine_balance_1: f64::NAN,
        cosine_balance_2: f64::NAN,
        cosine_balance_sum: f64::NAN,
        eigen_relation: f64::NAN,
        side_norm_gap: f64::NAN,
        delta_y: f64::NAN,
        lambda1: f64::NAN,
        c1: f64::NAN,
        c2: f64::NAN,
    }
}

struct TrainedSeed {
    outcome: SeedOutcome,
    model: Option<Eigenlocus>,
    train_points: Vec<LabeledSample>,
}

fn run_seed(cfg: &ExperimentConfig, fixed: Option<&[LabeledSample]>, seed: u64) -> Result<TrainedSeed> {
    let kernel = cfg.kernel.to_spec()?;
    let (train_points, test_points, bayes_rate) = match fixed {
        Some(samples) => (samples.to_vec(), samples.to_vec(), f64::NAN),
        None => {
            let s1 = cfg.class1.as_ref().unwrap().to_spec()?;
            let s2 = cfg.class2.as_ref().unwrap().to_spec()?;
            let oracle = BayesOracle::new(&s1, &s2)?;
            let train = sample_dataset(&s1, &s2, cfg.n_train, cfg.n_train, seed)?;
            let test = sample_test_set(&s1, &s2, cfg.n_test, seed)?;
            let bayes = error_rate_on(|x| oracle.classify(x), &test.samples);
            (train.samples, test.samples, bayes)
        }
    };

    let trained = train_with_options(&train_points, kernel, cfg.c, SOLVER_TOL, SOLVER_MAX_ITER);
    let (outcome, model) = match trained {
        Ok((model, solution)) => {
            let error_rate = error_rate_on(|x| classify(&model, x), &test_points);
            let report = full_report(&model, &model_gram(&model)?);
            let outcome = SeedOutcome {
                seed,
                converged: solution.converged,
                error_rate,
                bayes_rate,
                extreme_fraction: gaussian_lab::extreme_fraction(&model, train_points.len()),
                report,
            };
            (outcome, Some(model))
        }
        Err(e) => {
            eprintln!("seed {seed}: training failed ({e}), row flagged");
            let outcome = SeedOutcome {
                seed,
                converged: false,
                error_rate: f64::NAN,
                bayes_rate,
                extreme_fraction: f64::NAN,
                report: nan_report(),
            };
            (outcome, None)
        }
    };
    Ok(TrainedSeed {
        outcome,
        model,
        train_points,
    })
}

pub const CSV_LEAD_COLUMNS: &[&str] = &[
    "seed",
    "converged",
    "error_rate",
    "bayes_rate",
    "extreme_fraction",
];

fn csv_text(rows: &[SeedOutcome]) -> String {
    let mut text = String::new();
    let mut header: Vec<&str> = CSV_LEAD_COLUMNS.to_vec();
    header.extend(rows[0].report.fields().iter().map(|(name, _)| *name));
    let _ = writeln!(text, "{}", header.join(","));

    for row in rows {
        let mut cells = vec![
            format!("{}", row.seed),
            format!("{}", u8::from(row.converged)),
            format!("{}", row.error_rate),
            format!("{}", row.bayes_rate),
            format!("{}", row.extreme_fraction),
        ];
        cells.extend(row.report.fields().iter().map(|(_, v)| format!("{v}")));
        let _ = writeln!(text, "{}", cells.join(","));
    }

    // summary rows: per-column median and interquartile range over the seeds
    for (label, pick) in [
        ("median", (|s: Stats| s.median) as fn(Stats) -> f64),
        ("iqr", |s: Stats| s.iqr()),
    ] {
        let mut cells = vec![label.to_string(), String::new()];
        for col in 0..3 + rows[0].report.fields().len() {
            let s = stats_of(rows.iter().map(|r| match col {
                0 => r.error_rate,
                1 => r.bayes_rate,
                2 => r.extreme_fraction,
                _ => r.report.fields()[col - 3].1,
            }));
            cells.push(format!("{}", pick(s)));
        }
        let _ = writeln!(text, "{}", cells.join(","));
    }
    text
}

/// Run every seed of the experiment, write `results.csv` plus one SVG per
/// seed under the output directory, and return the collected outcomes.
///
/// Seeds run in parallel; all file writes happen after the parallel section
/// from the collected results, so reruns produce byte-identical artifacts.
pub fn run_experiment(cfg: &ExperimentConfig, out_override: Option<&Path>) -> Result<RunSummary> {
    cfg.validate()?;
    let out_dir = out_override.unwrap_or(&cfg.out_dir).to_path_buf();
    std::fs::create_dir_all(&out_dir)?;

    let fixed: Option<Vec<LabeledSample>> = match &cfg.dataset {
        Some(path) => Some(gaussian_lab::read_dataset(path)?),
        None => None,
    };

    let trained: Vec<TrainedSeed> = cfg
        .seeds
        .par_iter()
        .map(|&seed| run_seed(cfg, fixed.as_deref(), seed))
        .collect::<Result<_>>()?;

    for t in &trained {
        if let Some(model) = &t.model {
            if model.dim() == 2 {
                let points: Vec<Vec<f64>> =
                    t.train_points.iter().map(|p| p.features.clone()).collect();
                let grid =
                    GridSpec::around_points(&points, cfg.grid.padding, cfg.grid.resolution);
                let traces = eigenlocus_model::trace_level_sets(model, grid)?;
                let page = svg::render_plot(&cfg.name, t.outcome.seed, &t.train_points, model, &traces, grid);
                std::fs::write(out_dir.join(format!("seed_{}.svg", t.outcome.seed)), page)?;
            }
        }
    }

    let rows: Vec<SeedOutcome> = trained.into_iter().map(|t| t.outcome).collect();
    let csv_path = out_dir.join("results.csv");
    std::fs::write(&csv_path, csv_text(&rows))?;

    let summary = RunSummary {
        converged_count: rows.iter().filter(|r| r.converged).count(),
        error: stats_of(rows.iter().map(|r| r.error_rate)),
        bayes: stats_of(rows.iter().map(|r| r.bayes_rate)),
        extreme: stats_of(rows.iter().map(|r| r.extreme_fraction)),
        rows,
        csv_path,
        out_dir,
    };
    Ok(summary)
}

/// Compute the large-sample oracle error for a generative config
/// (the pre-step behind the minimum-risk comparisons).
pub fn oracle_rate(cfg: &ExperimentConfig, n_test: usize, seed: u64) -> Result<f64> {
    let (Some(c1), Some(c2)) = (&cfg.class1, &cfg.class2) else {
        return Err(Error::Config(format!(
            "config {} has no class specs, so no oracle exists",
            cfg.name
        )));
    };
    let s1 = c1.to_spec()?;
    let s2 = c2.to_spec()?;
    let oracle = BayesOracle::new(&s1, &s2)?;
    let (rate, _) = gaussian_lab::estimate_error_rate(|x| oracle.classify(x), &s1, &s2, n_test, seed)?;
    Ok(rate)
}
