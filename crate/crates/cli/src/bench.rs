//! `gsvd simulate-bench`: seeded synthetic recovery benchmark.
//!
//! With no `--kind`, runs the default grid: for every size in the size list,
//! the disjoint-group generator feeds l1/l0/gl1/gl0 and the overlapping
//! generator feeds ogl1/ogl0, all at the requested logSNR values.

use std::path::PathBuf;

use clap::{Args, ValueEnum};

use gsvd::metrics::{run_benchmark, zero_times, BenchMethod, BenchRow};
use gsvd::sim::{SimConfig, SimKind};

use crate::manifest::{sibling_manifest_path, RunManifest};
use crate::CliError;

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum KindArg {
    Gr,
    Ogr,
}

const DEFAULT_SIZES: [usize; 5] = [20, 40, 100, 160, 200];

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Generator kind; omit to run both over their default methods.
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,

    /// Group sizes q for the disjoint generator (p = 50q).
    #[arg(long, value_delimiter = ',')]
    pub q: Option<Vec<usize>>,

    /// Group size parameters t for the overlapping generator (p = 50t).
    #[arg(long, value_delimiter = ',')]
    pub t: Option<Vec<usize>>,

    /// Target log10 signal-to-noise ratios.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = vec![-2.8])]
    pub logsnr: Vec<f64>,

    #[arg(long, default_value_t = 50)]
    pub replicates: usize,

    /// Subset of l1,l0,gl1,gl0,ogl1,ogl0 (default: all compatible).
    #[arg(long, value_delimiter = ',')]
    pub methods: Option<Vec<String>>,

    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Write the TSV table here (default: stdout).
    #[arg(long)]
    pub out_table: Option<PathBuf>,

    /// Also write the rows as JSON.
    #[arg(long)]
    pub out_json: Option<PathBuf>,

    /// Manifest path (default: next to --out-table, or stderr).
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

fn parse_methods(raw: &Option<Vec<String>>) -> Result<Option<Vec<BenchMethod>>, CliError> {
    match raw {
        None => Ok(None),
        Some(names) => {
            let mut methods = Vec::new();
            for name in names {
                let m = BenchMethod::parse(name).map_err(|e| CliError::Usage(e.to_string()))?;
                if !methods.contains(&m) {
                    methods.push(m);
                }
            }
            if methods.is_empty() {
                return Err(CliError::Usage("--methods lists no methods".to_string()));
            }
            Ok(Some(methods))
        }
    }
}

const GR_DEFAULT_METHODS: [BenchMethod; 4] = [
    BenchMethod::L1,
    BenchMethod::L0,
    BenchMethod::Gl1,
    BenchMethod::Gl0,
];
const OGR_DEFAULT_METHODS: [BenchMethod; 2] = [BenchMethod::Ogl1, BenchMethod::Ogl0];

pub fn run(args: &BenchArgs, no_timestamp: bool) -> Result<(), CliError> {
    if args.replicates == 0 {
        return Err(CliError::Usage("--replicates must be >= 1".to_string()));
    }
    for snr in &args.logsnr {
        if !snr.is_finite() {
            return Err(CliError::Usage("--logsnr values must be finite".to_string()));
        }
    }
    let requested = parse_methods(&args.methods)?;

    // (kind, methods) lanes for this invocation
    let lanes: Vec<(SimKind, Vec<BenchMethod>)> = match args.kind {
        Some(KindArg::Gr) => {
            let methods = requested.clone().unwrap_or_else(|| GR_DEFAULT_METHODS.to_vec());
            vec![(SimKind::Gr, methods)]
        }
        Some(KindArg::Ogr) => {
            let methods = requested
                .clone()
                .unwrap_or_else(|| OGR_DEFAULT_METHODS.to_vec());
            for m in &methods {
                if !m.compatible_with(SimKind::Ogr) {
                    return Err(CliError::Usage(format!(
                        "method {} needs non-overlapping groups; use --kind gr",
                        m.name()
                    )));
                }
            }
            vec![(SimKind::Ogr, methods)]
        }
        None => {
            let gr: Vec<BenchMethod> = match &requested {
                Some(req) => req
                    .iter()
                    .copied()
                    .filter(|m| GR_DEFAULT_METHODS.contains(m))
                    .collect(),
                None => GR_DEFAULT_METHODS.to_vec(),
            };
            let ogr: Vec<BenchMethod> = match &requested {
                Some(req) => req
                    .iter()
                    .copied()
                    .filter(|m| OGR_DEFAULT_METHODS.contains(m))
                    .collect(),
                None => OGR_DEFAULT_METHODS.to_vec(),
            };
            let mut lanes = Vec::new();
            if !gr.is_empty() {
                lanes.push((SimKind::Gr, gr));
            }
            if !ogr.is_empty() {
                lanes.push((SimKind::Ogr, ogr));
            }
            if lanes.is_empty() {
                return Err(CliError::Usage(
                    "requested methods match no generator lane".to_string(),
                ));
            }
            lanes
        }
    };

    let mut rows: Vec<BenchRow> = Vec::new();
    for (kind, methods) in &lanes {
        let sizes: Vec<usize> = match kind {
            SimKind::Gr => args.q.clone().unwrap_or_else(|| DEFAULT_SIZES.to_vec()),
            SimKind::Ogr => args.t.clone().unwrap_or_else(|| DEFAULT_SIZES.to_vec()),
        };
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(CliError::Usage("sizes must be positive".to_string()));
        }
        let mut cfgs = Vec::new();
        for &size in &sizes {
            for &snr in &args.logsnr {
                cfgs.push(match kind {
                    SimKind::Gr => SimConfig::gr(size, snr, args.seed),
                    SimKind::Ogr => SimConfig::ogr(size, snr, args.seed),
                });
            }
        }
        eprintln!(
            "benchmark lane {}: {} configs x {} methods x {} replicates",
            kind.name(),
            cfgs.len(),
            methods.len(),
            args.replicates
        );
        rows.extend(run_benchmark(methods, &cfgs, args.replicates)?);
    }

    // stable presentation order: p, logSNR, then the canonical method order
    let method_rank = |name: &str| {
        ["l1", "l0", "gl1", "gl0", "ogl1", "ogl0"]
            .iter()
            .position(|m| *m == name)
            .unwrap_or(usize::MAX)
    };
    rows.sort_by(|a, b| {
        a.p.cmp(&b.p)
            .then(a.log_snr.partial_cmp(&b.log_snr).unwrap())
            .then(method_rank(&a.method).cmp(&method_rank(&b.method)))
    });
    if no_timestamp {
        zero_times(&mut rows);
    }

    let mut table = String::from(BenchRow::TSV_HEADER);
    table.push('\n');
    for row in &rows {
        table.push_str(&row.to_tsv_line());
        table.push('\n');
    }
    match &args.out_table {
        Some(path) => std::fs::write(path, &table)
            .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{table}"),
    }
    if let Some(path) = &args.out_json {
        let json = serde_json::to_string_pretty(&rows)
            .map_err(|e| CliError::Data(format!("cannot serialize rows: {e}")))?;
        std::fs::write(path, json + "\n")
            .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
    }

    let manifest = RunManifest::new("simulate-bench", Some(args.seed), no_timestamp);
    let manifest_path = args
        .manifest
        .clone()
        .or_else(|| args.out_table.as_ref().map(|p| sibling_manifest_path(p)));
    manifest.write(manifest_path.as_ref())?;
    Ok(())
}
