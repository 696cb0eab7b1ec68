//! `gsvd eval`: score a stored decomposition's u-support against a truth
//! file (one feature name per line).

use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::Args;

use gsvd::io::read_record;
use gsvd::metrics::{rates, ConfusionCounts};

use crate::manifest::RunManifest;
use crate::CliError;

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Decomposition record written by `gsvd decompose`.
    #[arg(long)]
    pub record: PathBuf,

    /// Truth support: one feature name per line.
    #[arg(long)]
    pub truth: PathBuf,

    /// Which factor of the record to score (0-based).
    #[arg(long, default_value_t = 0)]
    pub factor: usize,

    /// Also write the metric table to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Manifest path (default: stderr).
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

pub fn run(args: &EvalArgs, no_timestamp: bool) -> Result<(), CliError> {
    let mut manifest = RunManifest::new("eval", None, no_timestamp);
    manifest.add_input(&args.record)?;
    manifest.add_input(&args.truth)?;

    let record = read_record(&args.record)?;
    let factor = record.factors.get(args.factor).ok_or_else(|| {
        CliError::Data(format!(
            "record has {} factors, no factor {}",
            record.factors.len(),
            args.factor
        ))
    })?;

    let truth_text = std::fs::read_to_string(&args.truth)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", args.truth.display())))?;
    let truth: BTreeSet<String> = truth_text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect();
    let estimated: BTreeSet<String> = factor.u.iter().map(|(name, _)| name.clone()).collect();

    let union = estimated.union(&truth).count();
    if union > record.p {
        return Err(CliError::Data(format!(
            "supports name {union} distinct features but the record says p = {}",
            record.p
        )));
    }

    let tp = estimated.intersection(&truth).count();
    let counts = ConfusionCounts {
        true_positives: tp,
        false_positives: estimated.len() - tp,
        false_negatives: truth.len() - tp,
        true_negatives: record.p - union,
    };
    let r = rates(&counts);

    let mut table = String::new();
    table.push_str(&format!("tp\t{}\n", counts.true_positives));
    table.push_str(&format!("fp\t{}\n", counts.false_positives));
    table.push_str(&format!("fn\t{}\n", counts.false_negatives));
    table.push_str(&format!("tn\t{}\n", counts.true_negatives));
    table.push_str(&format!("tpr\t{:.6}\n", r.tpr));
    table.push_str(&format!("tnr\t{:.6}\n", r.tnr));
    table.push_str(&format!("fpr\t{:.6}\n", r.fpr));
    table.push_str(&format!("fdr\t{:.6}\n", r.fdr));
    table.push_str(&format!("acc\t{:.6}\n", r.acc));
    print!("{table}");
    if let Some(path) = &args.out {
        std::fs::write(path, &table)
            .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
    }
    manifest.write(args.manifest.as_ref())?;
    Ok(())
}
