//! Synthetic rank-one benchmark data with planted group-sparse signals.
//!
//! Two generators: `Gr` plants a signal on 10 of 50 disjoint groups of size
//! `q` (p = 50q); `Ogr` plants it on 6 of 49 half-overlapping groups of size
//! `2t` (p = 50t). The noisy matrix is `X = d u v^T + gamma * eps` with
//! `d = 1`, `v` standard normal, active entries of `u` drawn from {-1, +1},
//! and `gamma` chosen to hit a target log10 signal-to-noise ratio.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::groups::GroupStructure;
use crate::matrix::{norm2_sq, DenseMatrix};

pub const GR_GROUP_COUNT: usize = 50;
pub const OGR_GROUP_COUNT: usize = 49;

/// Default active groups (0-based) for the disjoint-group generator.
pub const GR_DEFAULT_ACTIVE: [usize; 10] = [2, 3, 12, 13, 14, 32, 33, 42, 43, 44];
/// Default active groups (0-based) for the overlapping-group generator.
pub const OGR_DEFAULT_ACTIVE: [usize; 6] = [2, 12, 13, 32, 42, 43];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimKind {
    /// Disjoint groups of size `q`.
    Gr,
    /// Chained groups of size `2t`, each overlapping its neighbors by `t`.
    Ogr,
}

impl SimKind {
    pub fn name(&self) -> &'static str {
        match self {
            SimKind::Gr => "gr",
            SimKind::Ogr => "ogr",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub kind: SimKind,
    /// Group size parameter: `q` for `Gr`, `t` for `Ogr`; `p = 50 * param`.
    pub group_size_param: usize,
    /// Number of samples (columns).
    pub n: usize,
    pub log_snr: f64,
    pub seed: u64,
    /// Indices of planted active groups, 0-based.
    pub active_groups: Vec<usize>,
}

impl SimConfig {
    pub fn gr(q: usize, log_snr: f64, seed: u64) -> Self {
        SimConfig {
            kind: SimKind::Gr,
            group_size_param: q,
            n: 100,
            log_snr,
            seed,
            active_groups: GR_DEFAULT_ACTIVE.to_vec(),
        }
    }

    pub fn ogr(t: usize, log_snr: f64, seed: u64) -> Self {
        SimConfig {
            kind: SimKind::Ogr,
            group_size_param: t,
            n: 100,
            log_snr,
            seed,
            active_groups: OGR_DEFAULT_ACTIVE.to_vec(),
        }
    }

    pub fn p(&self) -> usize {
        50 * self.group_size_param
    }

    pub fn group_count(&self) -> usize {
        match self.kind {
            SimKind::Gr => GR_GROUP_COUNT,
            SimKind::Ogr => OGR_GROUP_COUNT,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.group_size_param == 0 {
            return Err(Error::invalid("group size parameter must be >= 1"));
        }
        if self.n == 0 {
            return Err(Error::invalid("sample count must be >= 1"));
        }
        if !self.log_snr.is_finite() {
            return Err(Error::invalid("log_snr must be finite"));
        }
        if self.active_groups.is_empty() {
            return Err(Error::invalid("at least one active group is required"));
        }
        let count = self.group_count();
        for &g in &self.active_groups {
            if g >= count {
                return Err(Error::invalid(format!(
                    "active group {g} out of range (structure has {count} groups)"
                )));
            }
        }
        Ok(())
    }

    /// The group structure the generator plants against.
    pub fn group_structure(&self) -> GroupStructure {
        let param = self.group_size_param;
        let groups: Vec<Vec<usize>> = match self.kind {
            SimKind::Gr => (0..GR_GROUP_COUNT)
                .map(|i| (i * param..(i + 1) * param).collect())
                .collect(),
            SimKind::Ogr => (0..OGR_GROUP_COUNT)
                .map(|j| (j * param..(j + 2) * param).collect())
                .collect(),
        };
        GroupStructure::with_unit_weights(self.p(), groups)
            .expect("generated groups are valid by construction")
    }
}

/// One generated matrix with its ground truth.
#[derive(Debug, Clone)]
pub struct SimInstance {
    pub x: DenseMatrix,
    pub u_true: Vec<f64>,
    pub v_true: Vec<f64>,
    pub gs: GroupStructure,
    pub gamma: f64,
    /// Planted singular value (always 1).
    pub d: f64,
    pub config: SimConfig,
}

impl SimInstance {
    /// Number of planted nonzero entries of `u_true`.
    pub fn support_size(&self) -> usize {
        self.u_true.iter().filter(|x| **x != 0.0).count()
    }

    /// Generated feature names `f00000...` matching the matrix rows.
    pub fn row_names(&self) -> Vec<String> {
        (0..self.x.rows()).map(|i| format!("f{i:05}")).collect()
    }

    /// Generated sample names `s000...` matching the matrix columns.
    pub fn col_names(&self) -> Vec<String> {
        (0..self.x.cols()).map(|j| format!("s{j:03}")).collect()
    }

    /// The instance as a labeled matrix, for the file writers.
    pub fn to_labeled_matrix(&self) -> crate::io::LabeledMatrix {
        crate::io::LabeledMatrix::new(self.x.clone(), self.row_names(), self.col_names())
            .expect("generated names are unique and sized to the matrix")
    }

    /// Writes the matrix (TSV) and the group structure (GMT over the
    /// generated feature names) so file-based runs can consume generated
    /// instances directly.
    pub fn write_files(
        &self,
        matrix_path: impl AsRef<std::path::Path>,
        groups_path: impl AsRef<std::path::Path>,
    ) -> Result<()> {
        let labeled = self.to_labeled_matrix();
        crate::io::write_matrix(matrix_path, &labeled, crate::io::MatrixFormat::Tsv)?;
        let group_names: Vec<String> = (0..self.gs.group_count())
            .map(|l| format!("G{l:02}"))
            .collect();
        crate::io::write_gmt(groups_path, &self.gs, &labeled.row_names, &group_names)
    }
}

/// Noise scale hitting the requested log10 SNR for the given signal:
/// `gamma = sqrt(||d u v^T||_F^2 / (n p 10^log_snr))`.
pub fn gamma_from_logsnr(u: &[f64], v: &[f64], d: f64, log_snr: f64) -> Result<f64> {
    let signal = d * d * norm2_sq(u) * norm2_sq(v);
    if signal == 0.0 {
        return Err(Error::invalid("signal is zero; cannot set a noise scale"));
    }
    if !signal.is_finite() || !log_snr.is_finite() {
        return Err(Error::invalid("non-finite signal or log_snr"));
    }
    let np = (u.len() * v.len()) as f64;
    Ok((signal / (np * 10f64.powf(log_snr))).sqrt())
}

/// Generates one instance. Deterministic given the config: the seed is split
/// into three independent ChaCha8 streams (0: active-entry signs, 1: v,
/// 2: noise, drawn row-major).
pub fn generate(cfg: &SimConfig) -> Result<SimInstance> {
    cfg.validate()?;
    let p = cfg.p();
    let n = cfg.n;
    let gs = cfg.group_structure();

    let mut sign_rng = stream_rng(cfg.seed, 0);
    let mut u_true = vec![0.0f64; p];
    let mut actives = cfg.active_groups.clone();
    actives.sort_unstable();
    actives.dedup();
    for &g in &actives {
        for &i in gs.group(g) {
            u_true[i] = if sign_rng.random::<bool>() { 1.0 } else { -1.0 };
        }
    }

    let mut v_rng = stream_rng(cfg.seed, 1);
    let v_true: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut v_rng)).collect();

    let gamma = gamma_from_logsnr(&u_true, &v_true, 1.0, cfg.log_snr)?;

    let mut noise_rng = stream_rng(cfg.seed, 2);
    let x = DenseMatrix::from_fn(p, n, |i, j| {
        let eps: f64 = StandardNormal.sample(&mut noise_rng);
        u_true[i] * v_true[j] + gamma * eps
    });

    Ok(SimInstance {
        x,
        u_true,
        v_true,
        gs,
        gamma,
        d: 1.0,
        config: cfg.clone(),
    })
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

use rand::Rng;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gr_shape_and_support() {
        let inst = generate(&SimConfig::gr(20, -2.0, 11)).unwrap();
        assert_eq!(inst.x.rows(), 1000);
        assert_eq!(inst.x.cols(), 100);
        assert_eq!(inst.gs.group_count(), 50);
        assert!(inst.gs.is_partition());
        assert_eq!(inst.support_size(), 200);
        // support is exactly the union of active groups
        for &g in &inst.config.active_groups {
            for &i in inst.gs.group(g) {
                assert!(inst.u_true[i] == 1.0 || inst.u_true[i] == -1.0);
            }
        }
    }

    #[test]
    fn ogr_shape_and_support() {
        let inst = generate(&SimConfig::ogr(20, -2.0, 11)).unwrap();
        assert_eq!(inst.x.rows(), 1000);
        assert_eq!(inst.gs.group_count(), 49);
        assert!(inst.gs.overlapping());
        assert!(inst.gs.groups().iter().all(|g| g.len() == 40));
        // the six planted groups merge into runs totaling 10t entries
        assert_eq!(inst.support_size(), 200);
    }

    #[test]
    fn generation_is_deterministic() {
        let cfg = SimConfig::gr(4, -1.5, 99);
        let a = generate(&cfg).unwrap();
        let b = generate(&cfg).unwrap();
        assert_eq!(a.x, b.x);
        assert_eq!(a.u_true, b.u_true);
        assert_eq!(a.v_true, b.v_true);
        assert_eq!(a.gamma, b.gamma);

        let c = generate(&SimConfig::gr(4, -1.5, 100)).unwrap();
        assert_ne!(a.x, c.x);
    }

    #[test]
    fn gamma_identities() {
        // ||d u v^T||_F^2 = n p: log_snr 0 gives gamma 1, -2 gives gamma 10
        let u = vec![2.0, 0.0]; // norm_sq 4
        let v = vec![0.5, 0.5, 0.5, 0.5]; // norm_sq 1; signal 4, np 8
        let g0 = gamma_from_logsnr(&u, &v, (2.0f64).sqrt(), 0.0).unwrap();
        assert!((g0 - 1.0).abs() < 1e-12);
        let g2 = gamma_from_logsnr(&u, &v, (2.0f64).sqrt(), -2.0).unwrap();
        assert!((g2 - 10.0).abs() < 1e-12);
        assert!(gamma_from_logsnr(&[0.0], &[0.0], 1.0, 0.0).is_err());
    }

    #[test]
    fn logsnr_round_trips() {
        let u = vec![1.0, -2.0, 0.0, 3.0];
        let v = vec![0.1, 2.0, -1.0];
        for target in [-2.8, -1.0, 0.0, 1.3] {
            let gamma = gamma_from_logsnr(&u, &v, 0.7, target).unwrap();
            let np = (u.len() * v.len()) as f64;
            let back =
                (0.7 * 0.7 * norm2_sq(&u) * norm2_sq(&v) / (gamma * gamma * np)).log10();
            assert!((back - target).abs() < 1e-12);
        }
    }

    #[test]
    fn noise_energy_matches_gamma() {
        // ||X - u v^T||_F^2 / (gamma^2 n p) concentrates near 1
        let inst = generate(&SimConfig::gr(20, -2.0, 5)).unwrap();
        let mut noise_sq = 0.0;
        for i in 0..inst.x.rows() {
            for j in 0..inst.x.cols() {
                let e = inst.x.get(i, j) - inst.u_true[i] * inst.v_true[j];
                noise_sq += e * e;
            }
        }
        let ratio =
            noise_sq / (inst.gamma * inst.gamma * (inst.x.rows() * inst.x.cols()) as f64);
        assert!((ratio - 1.0).abs() < 0.05, "ratio {ratio}");
    }

    #[test]
    fn instances_round_trip_through_files() {
        let inst = generate(&SimConfig::ogr(3, -1.0, 4)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let mpath = dir.path().join("x.tsv");
        let gpath = dir.path().join("groups.gmt");
        inst.write_files(&mpath, &gpath).unwrap();

        let labeled = crate::io::read_matrix(
            &mpath,
            crate::io::MatrixFormat::Tsv,
            crate::io::Orientation::FeaturesBySamples,
        )
        .unwrap();
        assert_eq!(labeled.matrix, inst.x);
        let gmt = crate::io::read_gmt(&gpath, &labeled.row_names, None).unwrap();
        assert_eq!(gmt.structure.groups(), inst.gs.groups());
        assert!(gmt.structure.overlapping());
    }

    #[test]
    fn config_validation() {
        assert!(generate(&SimConfig::gr(0, -2.0, 1)).is_err());
        let mut cfg = SimConfig::gr(2, -2.0, 1);
        cfg.active_groups = vec![50];
        assert!(generate(&cfg).is_err());
        let mut cfg = SimConfig::ogr(2, -2.0, 1);
        cfg.active_groups = vec![49];
        assert!(generate(&cfg).is_err());
    }
}
