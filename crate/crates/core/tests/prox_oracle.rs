//! Oracle checks for the projection and ADMM operators: exhaustive subset
//! enumeration for the top-k group projection, and the closed-form
//! blockwise threshold for the ADMM active set on disjoint groups.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use gsvd::prox::{group_l0_select, group_soft_threshold, ogl1_prox_admm, AdmmConfig};
use gsvd::GroupStructure;

/// Random non-overlapping full-cover structure with `groups` groups over a
/// dimension drawn from the rng, plus a matching z vector.
fn random_partition_instance(
    rng: &mut ChaCha8Rng,
    max_groups: usize,
) -> (GroupStructure, Vec<f64>) {
    let group_count = rng.random_range(1..=max_groups);
    let mut groups: Vec<Vec<usize>> = Vec::with_capacity(group_count);
    let mut next = 0usize;
    for _ in 0..group_count {
        let size = rng.random_range(1..=4);
        groups.push((next..next + size).collect());
        next += size;
    }
    let dim = next;
    let mut z: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
    // occasionally inject exact ties between whole blocks to exercise the
    // lowest-index tie rule
    if group_count >= 2 && rng.random_range(0..4) == 0 {
        let a = groups[0].clone();
        let b = groups[1].clone();
        if a.len() == b.len() {
            for (i, j) in a.iter().zip(&b) {
                z[*j] = z[*i];
            }
        }
    }
    (GroupStructure::with_unit_weights(dim, groups).unwrap(), z)
}

/// Exhaustive oracle: over all size-k group subsets, maximize z . (masked z
/// normalized), which reduces to the subset block-energy; first subset in
/// lexicographic order wins ties.
fn brute_force_best_subset(z: &[f64], gs: &GroupStructure, k: usize) -> Vec<usize> {
    let l = gs.group_count();
    let energies: Vec<f64> = gs
        .groups()
        .iter()
        .map(|g| g.iter().map(|&i| z[i] * z[i]).sum())
        .collect();
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let score: f64 = subset.iter().map(|&g| energies[g]).sum();
        match &best {
            Some((s, _)) if score <= *s => {}
            _ => best = Some((score, subset.clone())),
        }
        // next combination in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return best.unwrap().1;
            }
            i -= 1;
            if subset[i] != i + l - k {
                subset[i] += 1;
                for j in i + 1..k {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[test]
fn group_l0_matches_exhaustive_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    for round in 0..300 {
        let (gs, z) = random_partition_instance(&mut rng, 12);
        let k = rng.random_range(1..=gs.group_count());
        let (out, selected) = group_l0_select(&z, &gs, k, false).unwrap();
        let oracle = brute_force_best_subset(&z, &gs, k);
        assert_eq!(selected, oracle, "round {round}: selection disagrees");
        // the output must be exactly z on the selection and zero elsewhere
        let mut expected = vec![0.0; z.len()];
        for &g in &oracle {
            for &i in gs.group(g) {
                expected[i] = z[i];
            }
        }
        assert_eq!(out, expected, "round {round}: mask disagrees");
    }
}

#[test]
fn admm_active_set_matches_closed_form_on_partitions() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xADA);
    let mut checked = 0;
    while checked < 60 {
        let (gs, z) = random_partition_instance(&mut rng, 8);
        // pick a lambda strictly between two consecutive block norms, with
        // enough separation that the active set is unambiguous at ADMM
        // precision
        let mut norms: Vec<f64> = gs
            .groups()
            .iter()
            .map(|g| g.iter().map(|&i| z[i] * z[i]).sum::<f64>().sqrt())
            .collect();
        norms.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let lambda = if norms.len() == 1 {
            0.5 * norms[0]
        } else {
            let idx = rng.random_range(0..norms.len() - 1);
            0.5 * (norms[idx] + norms[idx + 1])
        };
        let gap = norms
            .iter()
            .map(|n| (n - lambda).abs())
            .fold(f64::INFINITY, f64::min);
        if !(lambda > 0.0) || gap < 2e-2 * lambda.max(1.0) {
            continue;
        }
        checked += 1;

        // rho well below the data scale keeps the normalized iteration in
        // the basin of the thresholding fixed point
        let cfg = AdmmConfig {
            rho: 0.1 * norms.last().unwrap(),
            lambda,
            tol: 1e-10,
            max_iter: 50_000,
            ..AdmmConfig::default()
        };
        let res = ogl1_prox_admm(&z, &gs, &cfg).unwrap();

        let closed = group_soft_threshold(&z, &gs, lambda).unwrap();
        let closed_norm: f64 = closed.iter().map(|x| x * x).sum::<f64>().sqrt();
        let expected_active: Vec<usize> = gs
            .groups()
            .iter()
            .enumerate()
            .filter(|(_, g)| g.iter().any(|&i| closed[i] != 0.0))
            .map(|(l, _)| l)
            .collect();
        assert_eq!(
            res.active.selected, expected_active,
            "active set mismatch (lambda {lambda})"
        );
        if !expected_active.is_empty() {
            assert!(res.converged, "expected convergence at lambda {lambda}");
            for (l, group) in gs.groups().iter().enumerate() {
                for (pos, &i) in group.iter().enumerate() {
                    let want = closed[i] / closed_norm;
                    assert!(
                        (res.y[l][pos] - want).abs() < 1e-6,
                        "y block {l}[{pos}] = {} want {}",
                        res.y[l][pos],
                        want
                    );
                }
            }
        }
    }
}

#[test]
fn weighted_group_l0_matches_weighted_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xBEE);
    for _ in 0..200 {
        let (gs, z) = random_partition_instance(&mut rng, 9);
        let gs = gs.reweighted(gsvd::WeightScheme::InverseSqrtSize);
        let k = rng.random_range(1..=gs.group_count());
        let (_, selected) = group_l0_select(&z, &gs, k, true).unwrap();
        // oracle: rank blocks by w^2 * energy with index tie-break
        let mut scored: Vec<(f64, usize)> = gs
            .groups()
            .iter()
            .zip(gs.weights())
            .enumerate()
            .map(|(l, (g, &w))| {
                (w * w * g.iter().map(|&i| z[i] * z[i]).sum::<f64>(), l)
            })
            .collect();
        scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
        let mut expected: Vec<usize> = scored[..k].iter().map(|(_, l)| *l).collect();
        expected.sort_unstable();
        assert_eq!(selected, expected);
    }
}
