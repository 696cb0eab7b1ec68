//! Alternating rank-one solvers and the deflation driver.
//!
//! Every penalty pair shares one skeleton: initialize a unit `v`, then
//! alternate `z_u = X v` -> penalized update of `u` -> normalize ->
//! `z_v = X^T u` -> penalized update of `v` -> normalize -> `d = z_v . v`,
//! until the change in `d` falls below tolerance. Higher ranks come from
//! deflation: subtract `d u v^T` and fit the next factor on the residual.

use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Axis, Error, Result};
use crate::groups::GroupStructure;
use crate::matrix::{dot, normalize, DenseMatrix};
use crate::prox::{
    group_l0_select, group_soft_threshold, ogl0_select, ogl1_prox_admm, soft_threshold,
    AdmmConfig,
};

/// Penalty applied to one singular vector.
#[derive(Debug, Clone)]
pub enum Penalty {
    /// No penalty: plain power-iteration half-step.
    None,
    /// Element-wise lasso at level `lambda`.
    L1 { lambda: f64 },
    /// Keep the `k` largest-magnitude coordinates.
    L0 { k: usize },
    /// Group lasso over a non-overlapping full-cover structure.
    Gl1 {
        lambda: f64,
        groups: Arc<GroupStructure>,
    },
    /// Keep the `k` groups with the largest (optionally weighted) norms.
    Gl0 {
        k: usize,
        groups: Arc<GroupStructure>,
        weighted: bool,
    },
    /// Overlapping group lasso, solved per half-step by ADMM; the active
    /// groups mask the update. `admm.lambda` is the penalty level in the
    /// units of `z = X v`. `admm.rho` is a scale-free multiplier: each
    /// half-step runs the ADMM with `rho * ||z||`, keeping the dual step
    /// size commensurate with the data whatever the matrix scale. With this
    /// scaling the first cold-start sweep activates exactly the groups with
    /// `||z_{G_l}|| > lambda w_l / rho`.
    Ogl1 {
        groups: Arc<GroupStructure>,
        admm: AdmmConfig,
    },
    /// Keep the union of the `k` overlapping groups with the largest norms.
    Ogl0 { k: usize, groups: Arc<GroupStructure> },
}

impl Penalty {
    /// Short human-readable form, e.g. `gl0(k=10)`.
    pub fn describe(&self) -> String {
        match self {
            Penalty::None => "none".to_string(),
            Penalty::L1 { lambda } => format!("l1(lambda={lambda})"),
            Penalty::L0 { k } => format!("l0(k={k})"),
            Penalty::Gl1 { lambda, .. } => format!("gl1(lambda={lambda})"),
            Penalty::Gl0 { k, weighted, .. } => format!("gl0(k={k}, weighted={weighted})"),
            Penalty::Ogl1 { admm, .. } => format!("ogl1(lambda={})", admm.lambda),
            Penalty::Ogl0 { k, .. } => format!("ogl0(k={k})"),
        }
    }

    fn validate(&self, axis: Axis, len: usize) -> Result<()> {
        let check_groups = |gs: &GroupStructure| -> Result<()> {
            if gs.dimension() != len {
                return Err(Error::DimensionMismatch {
                    what: match axis {
                        Axis::U => "u-penalty group structure",
                        Axis::V => "v-penalty group structure",
                    },
                    expected: len,
                    got: gs.dimension(),
                });
            }
            Ok(())
        };
        match self {
            Penalty::None => Ok(()),
            Penalty::L1 { lambda } => {
                if !(lambda.is_finite() && *lambda >= 0.0) {
                    return Err(Error::invalid(format!("l1 lambda must be >= 0, got {lambda}")));
                }
                Ok(())
            }
            Penalty::L0 { k } => {
                if *k == 0 || *k > len {
                    return Err(Error::invalid(format!(
                        "l0 k must be in [1, {len}], got {k}"
                    )));
                }
                Ok(())
            }
            Penalty::Gl1 { lambda, groups } => {
                if !(lambda.is_finite() && *lambda >= 0.0) {
                    return Err(Error::invalid(format!("gl1 lambda must be >= 0, got {lambda}")));
                }
                check_groups(groups)
            }
            Penalty::Gl0 { k, groups, .. } => {
                if *k == 0 || *k > groups.group_count() {
                    return Err(Error::invalid(format!(
                        "gl0 k must be in [1, {}], got {k}",
                        groups.group_count()
                    )));
                }
                check_groups(groups)
            }
            Penalty::Ogl1 { groups, admm } => {
                admm.validate()?;
                check_groups(groups)
            }
            Penalty::Ogl0 { k, groups } => {
                if *k == 0 || *k > groups.group_count() {
                    return Err(Error::invalid(format!(
                        "ogl0 k must be in [1, {}], got {k}",
                        groups.group_count()
                    )));
                }
                check_groups(groups)
            }
        }
    }
}

/// How the starting `v` is chosen.
#[derive(Debug, Clone)]
pub enum InitStrategy {
    /// Leading right singular vector via power iteration on `X^T X`
    /// (tolerance 1e-9, at most 1000 steps). Deterministic.
    LeadingRightSingular,
    /// Normalized standard-normal vector from a seeded generator.
    UnitRandom(u64),
    /// The constant unit vector `(1/sqrt(n), ..., 1/sqrt(n))`.
    Uniform,
    /// A caller-supplied vector, normalized. Lets batch drivers compute an
    /// initialization once and reuse it across solves on the same matrix.
    Fixed(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Relative tolerance on the change of `d` between outer iterations.
    pub tol: f64,
    pub max_iter: usize,
    pub init: InitStrategy,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-6,
            max_iter: 200,
            init: InitStrategy::LeadingRightSingular,
        }
    }
}

/// One `(u, v, d)` triple with the group selections that produced it.
#[derive(Debug, Clone)]
pub struct Factor {
    /// Unit left singular vector (length p).
    pub u: Vec<f64>,
    /// Unit right singular vector (length n).
    pub v: Vec<f64>,
    /// Non-negative singular value `u^T X v`.
    pub d: f64,
    /// Groups selected by the final u half-step, for group penalties.
    pub u_groups: Option<Vec<usize>>,
    /// Groups selected by the final v half-step, for group penalties.
    pub v_groups: Option<Vec<usize>>,
}

impl Factor {
    pub fn u_support(&self) -> Vec<usize> {
        support(&self.u)
    }

    pub fn v_support(&self) -> Vec<usize> {
        support(&self.v)
    }
}

pub fn support(x: &[f64]) -> Vec<usize> {
    x.iter()
        .enumerate()
        .filter(|(_, v)| **v != 0.0)
        .map(|(i, _)| i)
        .collect()
}

/// Convergence record for one rank-one solve.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub iterations: usize,
    /// `d` after each outer iteration.
    pub d_trace: Vec<f64>,
    pub converged: bool,
    /// Wall-clock seconds.
    pub wall_time: f64,
}

/// Ordered factors from a deflation run plus residual statistics.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub factors: Vec<Factor>,
    pub reports: Vec<SolveReport>,
    /// Variance explained by each factor alone (increment of the cumulative).
    pub explained: Vec<f64>,
    /// `1 - ||X - sum_{i<=r} d_i u_i v_i^T||_F^2 / ||X||_F^2` after each factor.
    pub cumulative_explained: Vec<f64>,
    pub input_frob_sq: f64,
    pub residual_frob_sq: f64,
}

/// Computes the starting `v` for a matrix with `n = x.cols()` columns.
pub fn init_v(x: &DenseMatrix, strategy: &InitStrategy) -> Result<Vec<f64>> {
    let n = x.cols();
    if n == 0 {
        return Err(Error::invalid("matrix must have at least one column"));
    }
    match strategy {
        InitStrategy::Uniform => {
            let val = 1.0 / (n as f64).sqrt();
            Ok(vec![val; n])
        }
        InitStrategy::UnitRandom(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
            if normalize(&mut v) == 0.0 {
                return Err(Error::invalid("random initialization drew a zero vector"));
            }
            Ok(v)
        }
        InitStrategy::Fixed(v0) => {
            if v0.len() != n {
                return Err(Error::DimensionMismatch {
                    what: "fixed initialization vector",
                    expected: n,
                    got: v0.len(),
                });
            }
            if v0.iter().any(|x| !x.is_finite()) {
                return Err(Error::invalid("fixed initialization vector is non-finite"));
            }
            let mut v = v0.clone();
            if normalize(&mut v) == 0.0 {
                return Err(Error::invalid("fixed initialization vector is zero"));
            }
            Ok(v)
        }
        InitStrategy::LeadingRightSingular => Ok(leading_right_singular(x)),
    }
}

/// Plain power iteration on the Gram matrix `X^T X`. Falls back to basis
/// vectors if a start is orthogonal to the range, and to the uniform vector
/// when the matrix is zero.
fn leading_right_singular(x: &DenseMatrix) -> Vec<f64> {
    let n = x.cols();
    let gram = x.gram();
    let uniform = vec![1.0 / (n as f64).sqrt(); n];

    let mut starts = vec![uniform.clone()];
    for i in 0..n.min(8) {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        starts.push(e);
    }

    for start in starts {
        let mut v = start;
        let mut ok = false;
        for _ in 0..1000 {
            let mut next = gram.matvec(&v);
            if normalize(&mut next) == 0.0 {
                break;
            }
            ok = true;
            let diff: f64 = next
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            v = next;
            if diff < 1e-9 {
                break;
            }
        }
        if ok {
            return v;
        }
    }
    uniform
}

struct HalfStep {
    vector: Vec<f64>,
    groups: Option<Vec<usize>>,
}

/// Per-axis scratch: the singleton structure backing an element-wise top-k
/// penalty, built once per solve.
#[derive(Default)]
struct AxisScratch {
    singletons: Option<GroupStructure>,
}

impl AxisScratch {
    fn for_penalty(penalty: &Penalty, len: usize) -> Result<Self> {
        let singletons = match penalty {
            Penalty::L0 { .. } => Some(GroupStructure::singletons(len)?),
            _ => None,
        };
        Ok(AxisScratch { singletons })
    }
}

fn apply_penalty(z: &[f64], penalty: &Penalty, scratch: &mut AxisScratch) -> Result<HalfStep> {
    match penalty {
        Penalty::None => Ok(HalfStep {
            vector: z.to_vec(),
            groups: None,
        }),
        Penalty::L1 { lambda } => Ok(HalfStep {
            vector: soft_threshold(z, *lambda)?,
            groups: None,
        }),
        Penalty::L0 { k } => {
            let gs = scratch
                .singletons
                .as_ref()
                .expect("singleton structure prepared for l0");
            let (vector, _) = group_l0_select(z, gs, *k, false)?;
            Ok(HalfStep {
                vector,
                groups: None,
            })
        }
        Penalty::Gl1 { lambda, groups } => {
            let vector = group_soft_threshold(z, groups, *lambda)?;
            let active = groups
                .groups()
                .iter()
                .enumerate()
                .filter(|(_, g)| g.iter().any(|&i| vector[i] != 0.0))
                .map(|(l, _)| l)
                .collect();
            Ok(HalfStep {
                vector,
                groups: Some(active),
            })
        }
        Penalty::Gl0 {
            k,
            groups,
            weighted,
        } => {
            let (vector, selected) = group_l0_select(z, groups, *k, *weighted)?;
            Ok(HalfStep {
                vector,
                groups: Some(selected),
            })
        }
        Penalty::Ogl1 { groups, admm } => {
            // rho rescaled to the magnitude of z; see the Ogl1 docs
            let scale = crate::matrix::norm2(z);
            let cfg = AdmmConfig {
                rho: admm.rho * if scale > 0.0 { scale } else { 1.0 },
                ..admm.clone()
            };
            let res = ogl1_prox_admm(z, groups, &cfg)?;
            let mut vector = vec![0.0; z.len()];
            for &l in &res.active.selected {
                for &i in groups.group(l) {
                    vector[i] = z[i];
                }
            }
            Ok(HalfStep {
                vector,
                groups: Some(res.active.selected),
            })
        }
        Penalty::Ogl0 { k, groups } => {
            let (vector, selected) = ogl0_select(z, groups, *k)?;
            Ok(HalfStep {
                vector,
                groups: Some(selected),
            })
        }
    }
}

/// Fits one penalized rank-one factor of `x`.
pub fn rank_one_solve(
    x: &DenseMatrix,
    pu: &Penalty,
    pv: &Penalty,
    opts: &SolveOptions,
) -> Result<(Factor, SolveReport)> {
    let start = Instant::now();
    let p = x.rows();
    let n = x.cols();
    if p == 0 || n == 0 {
        return Err(Error::invalid("matrix must be at least 1 x 1"));
    }
    if !x.is_finite() {
        return Err(Error::invalid("matrix contains a non-finite value"));
    }
    if !(opts.tol.is_finite() && opts.tol > 0.0) {
        return Err(Error::invalid(format!("tol must be > 0, got {}", opts.tol)));
    }
    if opts.max_iter == 0 {
        return Err(Error::invalid("max_iter must be >= 1"));
    }
    pu.validate(Axis::U, p)?;
    pv.validate(Axis::V, n)?;

    let mut scratch_u = AxisScratch::for_penalty(pu, p)?;
    let mut scratch_v = AxisScratch::for_penalty(pv, n)?;

    let mut v = init_v(x, &opts.init)?;
    let mut u = vec![0.0; p];
    let mut u_groups = None;
    let mut v_groups = None;
    let mut d_trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    for _ in 0..opts.max_iter {
        iterations += 1;

        let z_u = x.matvec(&v);
        let step = apply_penalty(&z_u, pu, &mut scratch_u)?;
        u = step.vector;
        u_groups = step.groups;
        if normalize(&mut u) == 0.0 {
            return Err(Error::Degenerate {
                axis: Axis::U,
                penalty: pu.describe(),
            });
        }

        let z_v = x.t_matvec(&u);
        let step = apply_penalty(&z_v, pv, &mut scratch_v)?;
        v = step.vector;
        v_groups = step.groups;
        if normalize(&mut v) == 0.0 {
            return Err(Error::Degenerate {
                axis: Axis::V,
                penalty: pv.describe(),
            });
        }

        let d = dot(&z_v, &v);
        if let Some(&prev) = d_trace.last() {
            d_trace.push(d);
            if (d - prev).abs() < opts.tol * prev.abs().max(1.0) {
                converged = true;
                break;
            }
        } else {
            d_trace.push(d);
        }
    }

    let mut d = *d_trace.last().expect("at least one iteration ran");
    if d < 0.0 {
        // d = u^T X v is sign-invariant under flipping both vectors; keep it
        // non-negative by flipping u.
        for ui in u.iter_mut() {
            *ui = -*ui;
        }
        d = -d;
    }

    Ok((
        Factor {
            u,
            v,
            d,
            u_groups,
            v_groups,
        },
        SolveReport {
            iterations,
            d_trace,
            converged,
            wall_time: start.elapsed().as_secs_f64(),
        },
    ))
}

/// Fits `rank` factors by repeatedly solving on the deflated residual
/// `X := X - d u v^T`.
pub fn deflate_solve(
    x: &DenseMatrix,
    pu: &Penalty,
    pv: &Penalty,
    rank: usize,
    opts: &SolveOptions,
) -> Result<Decomposition> {
    if rank == 0 {
        return Err(Error::invalid("rank must be >= 1"));
    }
    let mut residual = x.clone();
    let input_frob_sq = residual.frob_norm_sq();
    let mut factors = Vec::with_capacity(rank);
    let mut reports = Vec::with_capacity(rank);
    let mut explained = Vec::with_capacity(rank);
    let mut cumulative = Vec::with_capacity(rank);
    let mut residual_frob_sq = input_frob_sq;

    for index in 0..rank {
        let (factor, report) = rank_one_solve(&residual, pu, pv, opts).map_err(|e| {
            Error::Factor {
                index,
                source: Box::new(e),
            }
        })?;
        residual.subtract_outer(factor.d, &factor.u, &factor.v);
        residual_frob_sq = residual.frob_norm_sq();
        let cum = if input_frob_sq > 0.0 {
            1.0 - residual_frob_sq / input_frob_sq
        } else {
            0.0
        };
        let prev = cumulative.last().copied().unwrap_or(0.0);
        explained.push(cum - prev);
        cumulative.push(cum);
        factors.push(factor);
        reports.push(report);
    }

    Ok(Decomposition {
        factors,
        reports,
        explained,
        cumulative_explained: cumulative,
        input_frob_sq,
        residual_frob_sq,
    })
}
