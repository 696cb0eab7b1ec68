//! `gsvd decompose`: load a matrix (and optional group files), fit `r`
//! penalized rank-one factors by deflation, and write a JSON record plus a
//! run manifest.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, ValueEnum};

use gsvd::io::{
    normalize_columns, read_edge_list, read_gmt, read_matrix, write_record,
    DecompositionRecord, FactorRecord, LabeledMatrix, MatrixFormat, Orientation,
};
use gsvd::prox::{AdmmConfig, AdmmUpdateRule};
use gsvd::solver::{deflate_solve, InitStrategy, Penalty, SolveOptions};
use gsvd::{GroupStructure, WeightScheme};

use crate::manifest::{sibling_manifest_path, RunManifest};
use crate::CliError;

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PenaltyKind {
    None,
    L1,
    L0,
    Gl1,
    Gl0,
    Ogl1,
    Ogl0,
}

impl PenaltyKind {
    fn needs_lambda(self) -> bool {
        matches!(self, PenaltyKind::L1 | PenaltyKind::Gl1 | PenaltyKind::Ogl1)
    }

    fn needs_k(self) -> bool {
        matches!(self, PenaltyKind::L0 | PenaltyKind::Gl0 | PenaltyKind::Ogl0)
    }

    fn needs_groups(self) -> bool {
        matches!(
            self,
            PenaltyKind::Gl1 | PenaltyKind::Gl0 | PenaltyKind::Ogl1 | PenaltyKind::Ogl0
        )
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum FormatArg {
    Tsv,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum OrientationArg {
    /// Rows are features (genes), columns are samples.
    FeaturesBySamples,
    /// Rows are samples; transposed on load.
    SamplesByFeatures,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum GroupFormatArg {
    /// Tab-separated gene sets: name, description, members.
    Gmt,
    /// Two name columns per line, one group per undirected edge.
    Edges,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightsArg {
    /// All group weights 1.
    Uniform,
    /// sqrt(group size), the classic group-lasso scaling.
    Sqrt,
    /// 1/sqrt(group size), the adaptive group-L0 scaling.
    Invsqrt,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum InitArg {
    /// Leading right singular vector (deterministic power iteration).
    Leading,
    /// Seeded random unit vector (see --seed).
    Random,
    /// Constant unit vector.
    Uniform,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    /// Input matrix file.
    #[arg(long)]
    pub matrix: PathBuf,

    #[arg(long, value_enum, default_value_t = FormatArg::Tsv)]
    pub format: FormatArg,

    #[arg(long, value_enum, default_value_t = OrientationArg::FeaturesBySamples)]
    pub orientation: OrientationArg,

    /// Center and scale every sample column before fitting.
    #[arg(long)]
    pub normalize: bool,

    #[arg(long, value_enum, default_value_t = PenaltyKind::None)]
    pub u_penalty: PenaltyKind,

    #[arg(long, value_enum, default_value_t = PenaltyKind::None)]
    pub v_penalty: PenaltyKind,

    /// Group file for the u (feature) axis; required by gl*/ogl* penalties.
    #[arg(long)]
    pub u_groups: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = GroupFormatArg::Gmt)]
    pub u_groups_format: GroupFormatArg,

    /// Group file for the v (sample) axis.
    #[arg(long)]
    pub v_groups: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = GroupFormatArg::Gmt)]
    pub v_groups_format: GroupFormatArg,

    /// Drop GMT groups with more than this many listed members.
    #[arg(long)]
    pub max_group_size: Option<usize>,

    /// Penalty level for an l1/gl1/ogl1 u-penalty.
    #[arg(long)]
    pub lambda_u: Option<f64>,

    /// Penalty level for an l1/gl1/ogl1 v-penalty.
    #[arg(long)]
    pub lambda_v: Option<f64>,

    /// Sparsity budget for an l0/gl0/ogl0 u-penalty (entries or groups).
    #[arg(long)]
    pub ku: Option<usize>,

    /// Sparsity budget for an l0/gl0/ogl0 v-penalty.
    #[arg(long)]
    pub kv: Option<usize>,

    /// Weight scheme applied to loaded group structures.
    #[arg(long, value_enum, default_value_t = WeightsArg::Sqrt)]
    pub weights: WeightsArg,

    /// Number of factors to extract by deflation.
    #[arg(long, default_value_t = 1)]
    pub rank: usize,

    /// Relative convergence tolerance on the singular value.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,

    #[arg(long, default_value_t = 200)]
    pub max_iter: usize,

    /// Seed for --init random; recorded in the manifest either way.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, value_enum, default_value_t = InitArg::Leading)]
    pub init: InitArg,

    /// ADMM penalty parameter for ogl1, as a multiplier on the scale of
    /// the current z = X v.
    #[arg(long, default_value_t = 1.0)]
    pub admm_rho: f64,

    /// ADMM primal-residual tolerance (ogl1 only).
    #[arg(long, default_value_t = 1e-6)]
    pub admm_tol: f64,

    #[arg(long, default_value_t = 500)]
    pub admm_max_iter: usize,

    /// Stop the inner ADMM once the selected groups are unchanged for this
    /// many sweeps (0 = only the residual test).
    #[arg(long, default_value_t = 20)]
    pub admm_stability_window: usize,

    /// Divide the ADMM u-update by per-coordinate group coverage.
    #[arg(long)]
    pub admm_coverage_scaled: bool,

    /// Output record path (JSON).
    #[arg(long)]
    pub out: PathBuf,

    /// Manifest path (default: <out>.manifest.json).
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

struct AxisPlan {
    kind: PenaltyKind,
    lambda: Option<f64>,
    k: Option<usize>,
    groups_path: Option<PathBuf>,
    groups_format: GroupFormatArg,
    label: &'static str,
}

fn check_axis(plan: &AxisPlan) -> Result<(), CliError> {
    let usage = |msg: String| Err(CliError::Usage(msg));
    let label = plan.label;
    if plan.kind.needs_lambda() {
        match plan.lambda {
            None => return usage(format!("--u-penalty/--v-penalty {label}: missing --lambda-{label}")),
            Some(l) if !(l.is_finite() && l >= 0.0) => {
                return usage(format!("--lambda-{label} must be >= 0"))
            }
            _ => {}
        }
    } else if plan.lambda.is_some() {
        return usage(format!(
            "--lambda-{label} only applies to l1/gl1/ogl1 penalties"
        ));
    }
    if plan.kind.needs_k() {
        if plan.k.is_none() {
            let flag = if label == "u" { "--ku" } else { "--kv" };
            return usage(format!("penalty on {label} needs {flag}"));
        }
    } else if plan.k.is_some() {
        let flag = if label == "u" { "--ku" } else { "--kv" };
        return usage(format!("{flag} only applies to l0/gl0/ogl0 penalties"));
    }
    if plan.kind.needs_groups() {
        if plan.groups_path.is_none() {
            return usage(format!("penalty on {label} needs --{label}-groups"));
        }
    } else if plan.groups_path.is_some() {
        return usage(format!(
            "--{label}-groups only applies to gl/ogl penalties"
        ));
    }
    Ok(())
}

/// Loaded group structure plus display names for the record.
struct LoadedGroups {
    structure: Arc<GroupStructure>,
    names: Vec<String>,
}

fn load_groups(
    plan: &AxisPlan,
    axis_names: &[String],
    weights: WeightsArg,
    max_group_size: Option<usize>,
    manifest: &mut RunManifest,
) -> Result<Option<LoadedGroups>, CliError> {
    let Some(path) = &plan.groups_path else {
        return Ok(None);
    };
    manifest.add_input(path)?;
    let (structure, names) = match plan.groups_format {
        GroupFormatArg::Gmt => {
            let gmt = read_gmt(path, axis_names, max_group_size)?;
            eprintln!(
                "loaded {} groups from {} ({} dropped, {} unmatched members)",
                gmt.structure.group_count(),
                path.display(),
                gmt.dropped_groups,
                gmt.unmatched_members
            );
            (gmt.structure, gmt.names)
        }
        GroupFormatArg::Edges => {
            let edges = read_edge_list(path, axis_names)?;
            eprintln!(
                "loaded {} edge groups from {} ({} edges dropped)",
                edges.structure.group_count(),
                path.display(),
                edges.dropped_edges
            );
            (edges.structure, edges.names)
        }
    };
    if structure.group_count() == 0 {
        return Err(CliError::Data(format!(
            "{} produced no usable groups",
            path.display()
        )));
    }
    let scheme = match weights {
        WeightsArg::Uniform => WeightScheme::Uniform,
        WeightsArg::Sqrt => WeightScheme::SqrtSize,
        WeightsArg::Invsqrt => WeightScheme::InverseSqrtSize,
    };
    Ok(Some(LoadedGroups {
        structure: Arc::new(structure.reweighted(scheme)),
        names,
    }))
}

fn build_penalty(
    plan: &AxisPlan,
    groups: Option<&LoadedGroups>,
    weights: WeightsArg,
    admm: &AdmmConfig,
) -> Result<Penalty, CliError> {
    let gs = groups.map(|g| g.structure.clone());
    Ok(match plan.kind {
        PenaltyKind::None => Penalty::None,
        PenaltyKind::L1 => Penalty::L1 {
            lambda: plan.lambda.unwrap(),
        },
        PenaltyKind::L0 => Penalty::L0 {
            k: plan.k.unwrap(),
        },
        PenaltyKind::Gl1 => Penalty::Gl1 {
            lambda: plan.lambda.unwrap(),
            groups: gs.unwrap(),
        },
        PenaltyKind::Gl0 => Penalty::Gl0 {
            k: plan.k.unwrap(),
            groups: gs.unwrap(),
            // uniform weights mean the plain (unweighted) ranking
            weighted: weights != WeightsArg::Uniform,
        },
        PenaltyKind::Ogl1 => Penalty::Ogl1 {
            groups: gs.unwrap(),
            admm: AdmmConfig {
                lambda: plan.lambda.unwrap(),
                ..admm.clone()
            },
        },
        PenaltyKind::Ogl0 => Penalty::Ogl0 {
            k: plan.k.unwrap(),
            groups: gs.unwrap(),
        },
    })
}

fn sparse_entries(vector: &[f64], names: &[String]) -> Vec<(String, f64)> {
    vector
        .iter()
        .enumerate()
        .filter(|(_, v)| **v != 0.0)
        .map(|(i, v)| (names[i].clone(), *v))
        .collect()
}

pub fn run(args: &DecomposeArgs, no_timestamp: bool) -> Result<(), CliError> {
    let u_plan = AxisPlan {
        kind: args.u_penalty,
        lambda: args.lambda_u,
        k: args.ku,
        groups_path: args.u_groups.clone(),
        groups_format: args.u_groups_format,
        label: "u",
    };
    let v_plan = AxisPlan {
        kind: args.v_penalty,
        lambda: args.lambda_v,
        k: args.kv,
        groups_path: args.v_groups.clone(),
        groups_format: args.v_groups_format,
        label: "v",
    };
    check_axis(&u_plan)?;
    check_axis(&v_plan)?;
    if args.rank == 0 {
        return Err(CliError::Usage("--rank must be >= 1".to_string()));
    }

    let mut manifest = RunManifest::new("decompose", Some(args.seed), no_timestamp);
    manifest.add_input(&args.matrix)?;

    let format = match args.format {
        FormatArg::Tsv => MatrixFormat::Tsv,
        FormatArg::Csv => MatrixFormat::Csv,
    };
    let orientation = match args.orientation {
        OrientationArg::FeaturesBySamples => Orientation::FeaturesBySamples,
        OrientationArg::SamplesByFeatures => Orientation::SamplesByFeatures,
    };
    let mut labeled: LabeledMatrix = read_matrix(&args.matrix, format, orientation)?;
    if args.normalize {
        labeled = normalize_columns(&labeled)?;
    }
    eprintln!(
        "matrix: {} features x {} samples",
        labeled.matrix.rows(),
        labeled.matrix.cols()
    );

    let u_groups = load_groups(
        &u_plan,
        &labeled.row_names,
        args.weights,
        args.max_group_size,
        &mut manifest,
    )?;
    let v_groups = load_groups(
        &v_plan,
        &labeled.col_names,
        args.weights,
        args.max_group_size,
        &mut manifest,
    )?;

    let admm = AdmmConfig {
        rho: args.admm_rho,
        lambda: 0.0,
        max_iter: args.admm_max_iter,
        tol: args.admm_tol,
        update_rule: if args.admm_coverage_scaled {
            AdmmUpdateRule::CoverageScaled
        } else {
            AdmmUpdateRule::Direct
        },
        stability_window: if args.admm_stability_window == 0 {
            None
        } else {
            Some(args.admm_stability_window)
        },
    };
    let pu = build_penalty(&u_plan, u_groups.as_ref(), args.weights, &admm)?;
    let pv = build_penalty(&v_plan, v_groups.as_ref(), args.weights, &admm)?;

    let opts = SolveOptions {
        tol: args.tol,
        max_iter: args.max_iter,
        init: match args.init {
            InitArg::Leading => InitStrategy::LeadingRightSingular,
            InitArg::Random => InitStrategy::UnitRandom(args.seed),
            InitArg::Uniform => InitStrategy::Uniform,
        },
    };

    let decomposition = deflate_solve(&labeled.matrix, &pu, &pv, args.rank, &opts)?;

    let group_names = |selected: &Option<Vec<usize>>, loaded: &Option<LoadedGroups>| {
        match (selected, loaded) {
            (Some(sel), Some(loaded)) => {
                Some(sel.iter().map(|&l| loaded.names[l].clone()).collect())
            }
            _ => None,
        }
    };

    let mut factors = Vec::with_capacity(decomposition.factors.len());
    for (i, (factor, report)) in decomposition
        .factors
        .iter()
        .zip(&decomposition.reports)
        .enumerate()
    {
        eprintln!(
            "factor {}: d = {:.6}, |supp(u)| = {}, |supp(v)| = {}, {} iterations{}",
            i + 1,
            factor.d,
            factor.u_support().len(),
            factor.v_support().len(),
            report.iterations,
            if report.converged { "" } else { " (not converged)" }
        );
        factors.push(FactorRecord {
            d: factor.d,
            variance_explained: decomposition.explained[i],
            cumulative_variance_explained: decomposition.cumulative_explained[i],
            iterations: report.iterations,
            converged: report.converged,
            wall_time: if no_timestamp { 0.0 } else { report.wall_time },
            u: sparse_entries(&factor.u, &labeled.row_names),
            v: sparse_entries(&factor.v, &labeled.col_names),
            u_groups: group_names(&factor.u_groups, &u_groups),
            v_groups: group_names(&factor.v_groups, &v_groups),
        });
    }

    let record = DecompositionRecord {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp_unix: manifest.timestamp_unix,
        seed: args.seed,
        p: labeled.matrix.rows(),
        n: labeled.matrix.cols(),
        normalized: args.normalize,
        u_penalty: pu.describe(),
        v_penalty: pv.describe(),
        tol: args.tol,
        max_iter: args.max_iter,
        factors,
    };
    write_record(&args.out, &record)?;
    let manifest_path = args
        .manifest
        .clone()
        .unwrap_or_else(|| sibling_manifest_path(&args.out));
    manifest.write(Some(&manifest_path))?;
    eprintln!(
        "wrote {} and {}",
        args.out.display(),
        manifest_path.display()
    );
    Ok(())
}
