//! Support-recovery metrics and the simulation benchmark driver.
//!
//! Recovery is judged on supports, not signs (`u` is sign-ambiguous).
//! The benchmark runs each method over seeded replicates of a generator
//! configuration and aggregates TPR/TNR/FPR/FDR/ACC, the singular value,
//! and wall time. Methods parameterized by a penalty level are matched to
//! the planted cardinality by bisecting lambda.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{generate, SimConfig, SimInstance, SimKind};
use crate::solver::{
    rank_one_solve, Factor, InitStrategy, Penalty, SolveOptions, SolveReport,
};
use crate::prox::AdmmConfig;

/// Support-comparison tallies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionCounts {
    pub true_positives: usize,
    pub false_positives: usize,
    pub true_negatives: usize,
    pub false_negatives: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.true_positives + self.false_positives + self.true_negatives + self.false_negatives
    }

    pub fn positives(&self) -> usize {
        self.true_positives + self.false_negatives
    }

    pub fn negatives(&self) -> usize {
        self.true_negatives + self.false_positives
    }
}

/// Entries with `|value| > zero_tol` count as support. Vectors must have
/// equal length.
pub fn confusion(estimated: &[f64], truth: &[f64], zero_tol: f64) -> Result<ConfusionCounts> {
    if estimated.len() != truth.len() {
        return Err(Error::DimensionMismatch {
            what: "confusion inputs",
            expected: truth.len(),
            got: estimated.len(),
        });
    }
    if !(zero_tol.is_finite() && zero_tol >= 0.0) {
        return Err(Error::invalid(format!("zero_tol must be >= 0, got {zero_tol}")));
    }
    let mut counts = ConfusionCounts::default();
    for (e, t) in estimated.iter().zip(truth) {
        let e_on = e.abs() > zero_tol;
        let t_on = t.abs() > zero_tol;
        match (e_on, t_on) {
            (true, true) => counts.true_positives += 1,
            (true, false) => counts.false_positives += 1,
            (false, true) => counts.false_negatives += 1,
            (false, false) => counts.true_negatives += 1,
        }
    }
    Ok(counts)
}

/// The five rates. Degenerate denominators use fixed conventions:
/// FDR is 0 when nothing was selected, TPR is 1 when there are no
/// positives, TNR is 1 (FPR 0) when there are no negatives, and ACC of an
/// empty vector is 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rates {
    pub tpr: f64,
    pub tnr: f64,
    pub fpr: f64,
    pub fdr: f64,
    pub acc: f64,
}

pub fn rates(c: &ConfusionCounts) -> Rates {
    let p = c.positives();
    let n = c.negatives();
    let selected = c.true_positives + c.false_positives;
    let tpr = if p == 0 {
        1.0
    } else {
        c.true_positives as f64 / p as f64
    };
    let tnr = if n == 0 {
        1.0
    } else {
        c.true_negatives as f64 / n as f64
    };
    let fpr = if n == 0 {
        0.0
    } else {
        c.false_positives as f64 / n as f64
    };
    let fdr = if selected == 0 {
        0.0
    } else {
        c.false_positives as f64 / selected as f64
    };
    let acc = if c.total() == 0 {
        1.0
    } else {
        (c.true_positives + c.true_negatives) as f64 / c.total() as f64
    };
    Rates {
        tpr,
        tnr,
        fpr,
        fdr,
        acc,
    }
}

/// Default support tolerance; solver outputs are exactly zero off-support,
/// so this only guards accumulated float dust.
pub const DEFAULT_ZERO_TOL: f64 = 1e-10;

/// The six benchmarked methods. The `u` side carries the method's penalty;
/// the `v` side is unpenalized (the planted `v` is dense).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BenchMethod {
    L1,
    L0,
    Gl1,
    Gl0,
    Ogl1,
    Ogl0,
}

impl BenchMethod {
    pub const ALL: [BenchMethod; 6] = [
        BenchMethod::L1,
        BenchMethod::L0,
        BenchMethod::Gl1,
        BenchMethod::Gl0,
        BenchMethod::Ogl1,
        BenchMethod::Ogl0,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BenchMethod::L1 => "l1",
            BenchMethod::L0 => "l0",
            BenchMethod::Gl1 => "gl1",
            BenchMethod::Gl0 => "gl0",
            BenchMethod::Ogl1 => "ogl1",
            BenchMethod::Ogl0 => "ogl0",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "l1" => Ok(BenchMethod::L1),
            "l0" => Ok(BenchMethod::L0),
            "gl1" => Ok(BenchMethod::Gl1),
            "gl0" => Ok(BenchMethod::Gl0),
            "ogl1" => Ok(BenchMethod::Ogl1),
            "ogl0" => Ok(BenchMethod::Ogl0),
            other => Err(Error::invalid(format!("unknown method '{other}'"))),
        }
    }

    /// Non-overlapping group methods need the disjoint (`gr`) structure;
    /// everything else runs on either generator.
    pub fn compatible_with(&self, kind: SimKind) -> bool {
        match self {
            BenchMethod::Gl1 | BenchMethod::Gl0 => kind == SimKind::Gr,
            _ => true,
        }
    }
}

/// Aggregated result for one (method, config) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub method: String,
    pub kind: String,
    pub p: usize,
    pub group_size: usize,
    pub log_snr: f64,
    pub replicates: usize,
    /// Replicates where the lambda search missed the cardinality target.
    pub bisection_failures: usize,
    pub tpr_mean: f64,
    pub tpr_sd: f64,
    pub tnr_mean: f64,
    pub tnr_sd: f64,
    pub fpr_mean: f64,
    pub fpr_sd: f64,
    pub fdr_mean: f64,
    pub fdr_sd: f64,
    pub acc_mean: f64,
    pub acc_sd: f64,
    pub d_mean: f64,
    pub d_sd: f64,
    pub time_mean: f64,
    pub time_sd: f64,
}

impl BenchRow {
    pub const TSV_HEADER: &'static str = "method\tkind\tp\tgroup_size\tlog_snr\treplicates\tbisection_failures\ttpr_mean\ttpr_sd\ttnr_mean\ttnr_sd\tfpr_mean\tfpr_sd\tfdr_mean\tfdr_sd\tacc_mean\tacc_sd\td_mean\td_sd\ttime_mean\ttime_sd";

    pub fn to_tsv_line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}",
            self.method,
            self.kind,
            self.p,
            self.group_size,
            self.log_snr,
            self.replicates,
            self.bisection_failures,
            self.tpr_mean,
            self.tpr_sd,
            self.tnr_mean,
            self.tnr_sd,
            self.fpr_mean,
            self.fpr_sd,
            self.fdr_mean,
            self.fdr_sd,
            self.acc_mean,
            self.acc_sd,
            self.d_mean,
            self.d_sd,
            self.time_mean,
            self.time_sd,
        )
    }
}

struct RepOutcome {
    rates: Rates,
    d: f64,
    wall_time: f64,
    bisection_ok: bool,
}

/// Runs every method on every config over `replicates` seeded instances and
/// returns one row per (config, method), configs outermost. All methods see
/// the same instances of a config: replicate `i` uses the seed
/// `cfg.seed + (i + 1) * 0x9E3779B97F4A7C15` (wrapping).
///
/// Parameter policy per instance: L0 keeps the planted number of nonzero
/// entries, GL0/OGL0 keep the planted number of active groups, and the
/// lasso-type methods (L1/GL1/OGL1) bisect lambda until the support
/// cardinality matches the planted one within 1%, at most 60 solves.
/// Results are deterministic for fixed inputs; only wall times vary.
pub fn run_benchmark(
    methods: &[BenchMethod],
    cfgs: &[SimConfig],
    replicates: usize,
) -> Result<Vec<BenchRow>> {
    if replicates == 0 {
        return Err(Error::invalid("replicate count must be >= 1"));
    }
    if methods.is_empty() {
        return Err(Error::invalid("at least one method is required"));
    }
    for cfg in cfgs {
        cfg.validate()?;
        for m in methods {
            if !m.compatible_with(cfg.kind) {
                return Err(Error::invalid(format!(
                    "method {} requires non-overlapping groups and cannot run on the {} generator",
                    m.name(),
                    cfg.kind.name()
                )));
            }
        }
    }

    let mut rows = Vec::with_capacity(cfgs.len() * methods.len());
    for cfg in cfgs {
        // per-replicate outcomes for all methods at once, so instance
        // generation and initialization are shared
        let outcomes: Vec<Result<Vec<RepOutcome>>> = (0..replicates)
            .into_par_iter()
            .map(|rep| run_replicate(cfg, rep as u64, methods))
            .collect();
        let mut per_method: Vec<Vec<RepOutcome>> =
            (0..methods.len()).map(|_| Vec::with_capacity(replicates)).collect();
        for rep_result in outcomes {
            for (slot, outcome) in per_method.iter_mut().zip(rep_result?) {
                slot.push(outcome);
            }
        }
        for (method, outcomes) in methods.iter().zip(per_method) {
            rows.push(aggregate(method, cfg, &outcomes));
        }
    }
    Ok(rows)
}

pub fn replicate_seed(base: u64, replicate: u64) -> u64 {
    base.wrapping_add((replicate + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn run_replicate(
    cfg: &SimConfig,
    rep: u64,
    methods: &[BenchMethod],
) -> Result<Vec<RepOutcome>> {
    let mut inst_cfg = cfg.clone();
    inst_cfg.seed = replicate_seed(cfg.seed, rep);
    let inst = generate(&inst_cfg)?;
    let v0 = crate::solver::init_v(&inst.x, &InitStrategy::LeadingRightSingular)?;
    let opts = SolveOptions {
        init: InitStrategy::Fixed(v0),
        ..SolveOptions::default()
    };
    methods
        .iter()
        .map(|m| run_method(*m, &inst, &opts))
        .collect()
}

fn run_method(method: BenchMethod, inst: &SimInstance, opts: &SolveOptions) -> Result<RepOutcome> {
    let planted_entries = inst.support_size();
    let planted_groups = {
        let mut a = inst.config.active_groups.clone();
        a.sort_unstable();
        a.dedup();
        a.len()
    };
    let groups = Arc::new(inst.gs.clone());

    let solved: Solved = match method {
        BenchMethod::L0 => direct_solve(inst, &Penalty::L0 { k: planted_entries }, opts)?,
        BenchMethod::Gl0 => direct_solve(
            inst,
            &Penalty::Gl0 {
                k: planted_groups,
                groups,
                weighted: false,
            },
            opts,
        )?,
        BenchMethod::Ogl0 => direct_solve(
            inst,
            &Penalty::Ogl0 {
                k: planted_groups,
                groups,
            },
            opts,
        )?,
        BenchMethod::L1 => bisect_lambda(
            inst,
            opts,
            planted_entries,
            |z0| z0.iter().fold(0.0f64, |m, v| m.max(v.abs())),
            |lambda| Penalty::L1 { lambda },
        )?,
        BenchMethod::Gl1 => {
            let gs = groups.reweighted(crate::groups::WeightScheme::SqrtSize);
            let gs = Arc::new(gs);
            let hi = {
                let gs = gs.clone();
                move |z0: &[f64]| max_block_norm_over_weight(z0, &gs)
            };
            let builder = move |lambda| Penalty::Gl1 {
                lambda,
                groups: gs.clone(),
            };
            bisect_lambda(inst, opts, planted_entries, hi, builder)?
        }
        BenchMethod::Ogl1 => {
            let hi = {
                let gs = groups.clone();
                move |z0: &[f64]| max_block_norm_over_weight(z0, &gs)
            };
            let builder = move |lambda| Penalty::Ogl1 {
                groups: groups.clone(),
                // Single cold-start sweep: the first ADMM iterate thresholds
                // the groups on their block norms, which is the selection
                // the alternating solver consumes. Longer budgets on chained
                // overlaps drift toward the low-coverage boundary groups
                // (inactive neighbors constrain shared halves of u to zero),
                // corrupting the active set.
                admm: AdmmConfig {
                    lambda,
                    max_iter: 1,
                    ..AdmmConfig::default()
                },
            };
            bisect_lambda(inst, opts, planted_entries, hi, builder)?
        }
    };

    let counts = confusion(&solved.factor.u, &inst.u_true, DEFAULT_ZERO_TOL)?;
    Ok(RepOutcome {
        rates: rates(&counts),
        d: solved.factor.d,
        wall_time: solved.report.wall_time,
        bisection_ok: solved.bisection_ok,
    })
}

struct Solved {
    factor: Factor,
    report: SolveReport,
    bisection_ok: bool,
}

fn direct_solve(inst: &SimInstance, pu: &Penalty, opts: &SolveOptions) -> Result<Solved> {
    let (factor, report) = rank_one_solve(&inst.x, pu, &Penalty::None, opts)?;
    Ok(Solved {
        factor,
        report,
        bisection_ok: true,
    })
}

fn max_block_norm_over_weight(z: &[f64], gs: &crate::groups::GroupStructure) -> f64 {
    gs.groups()
        .iter()
        .zip(gs.weights())
        .map(|(g, &w)| g.iter().map(|&i| z[i] * z[i]).sum::<f64>().sqrt() / w)
        .fold(0.0f64, f64::max)
}

const MAX_BISECTION_SOLVES: usize = 60;

/// Bisects lambda until the solved u-support has `target` nonzero entries
/// (within 1%). A solve where the penalty zeroes everything counts as
/// support 0. Returns the best lambda's solution and whether the target
/// tolerance was met.
fn bisect_lambda(
    inst: &SimInstance,
    opts: &SolveOptions,
    target: usize,
    upper_bound: impl Fn(&[f64]) -> f64,
    build: impl Fn(f64) -> Penalty,
) -> Result<Solved> {
    let v0 = match &opts.init {
        InitStrategy::Fixed(v0) => v0.clone(),
        other => crate::solver::init_v(&inst.x, other)?,
    };
    let z0 = inst.x.matvec(&v0);
    let mut lo = 0.0f64;
    let mut hi = upper_bound(&z0) * 1.000001;
    if !(hi.is_finite() && hi > 0.0) {
        return Err(Error::invalid("could not bound lambda: zero or non-finite scores"));
    }
    let tolerance = target / 100;

    let mut best: Option<(usize, Solved)> = None;
    for _ in 0..MAX_BISECTION_SOLVES {
        let lambda = 0.5 * (lo + hi);
        let attempt = rank_one_solve(&inst.x, &build(lambda), &Penalty::None, opts);
        let (supp, solved) = match attempt {
            Ok((factor, report)) => (
                factor.u.iter().filter(|x| **x != 0.0).count(),
                Some(Solved {
                    factor,
                    report,
                    bisection_ok: true,
                }),
            ),
            Err(e) if e.is_degenerate() => (0, None),
            Err(e) => return Err(e),
        };
        let miss = supp.abs_diff(target);
        if let Some(s) = solved {
            if best.as_ref().map(|(m, _)| miss < *m).unwrap_or(true) {
                best = Some((miss, s));
            }
        }
        if miss <= tolerance && best.as_ref().map(|(m, _)| *m <= tolerance).unwrap_or(false) {
            break;
        }
        if supp > target {
            lo = lambda;
        } else {
            hi = lambda;
        }
        // the bracket has collapsed; further solves cannot change anything
        if hi - lo < 1e-12 * hi.max(1.0) {
            break;
        }
    }

    match best {
        Some((miss, mut solved)) => {
            solved.bisection_ok = miss <= tolerance;
            Ok(solved)
        }
        None => Err(Error::invalid(format!(
            "lambda search found no non-degenerate solution for target support {target}"
        ))),
    }
}

fn mean_sd(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = values.clone().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n as f64 - 1.0);
    (mean, var.sqrt())
}

fn aggregate(method: &BenchMethod, cfg: &SimConfig, outcomes: &[RepOutcome]) -> BenchRow {
    let (tpr_mean, tpr_sd) = mean_sd(outcomes.iter().map(|o| o.rates.tpr));
    let (tnr_mean, tnr_sd) = mean_sd(outcomes.iter().map(|o| o.rates.tnr));
    let (fpr_mean, fpr_sd) = mean_sd(outcomes.iter().map(|o| o.rates.fpr));
    let (fdr_mean, fdr_sd) = mean_sd(outcomes.iter().map(|o| o.rates.fdr));
    let (acc_mean, acc_sd) = mean_sd(outcomes.iter().map(|o| o.rates.acc));
    let (d_mean, d_sd) = mean_sd(outcomes.iter().map(|o| o.d));
    let (time_mean, time_sd) = mean_sd(outcomes.iter().map(|o| o.wall_time));
    BenchRow {
        method: method.name().to_string(),
        kind: cfg.kind.name().to_string(),
        p: cfg.p(),
        group_size: cfg.group_size_param,
        log_snr: cfg.log_snr,
        replicates: outcomes.len(),
        bisection_failures: outcomes.iter().filter(|o| !o.bisection_ok).count(),
        tpr_mean,
        tpr_sd,
        tnr_mean,
        tnr_sd,
        fpr_mean,
        fpr_sd,
        fdr_mean,
        fdr_sd,
        acc_mean,
        acc_sd,
        d_mean,
        d_sd,
        time_mean,
        time_sd,
    }
}

/// Strips wall-clock fields, for byte-identical result files.
pub fn zero_times(rows: &mut [BenchRow]) {
    for row in rows {
        row.time_mean = 0.0;
        row.time_sd = 0.0;
    }
}
