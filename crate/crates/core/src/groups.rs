//! Variable groupings over one axis of the data matrix.
//!
//! A [`GroupStructure`] is an ordered list of index groups with one positive
//! weight per group. Groups may overlap (a variable in several pathways, a
//! gene in several interaction edges). The non-overlapping solvers
//! additionally require the groups to partition the axis.

use crate::error::{Error, Result};

/// Weighting schemes for groups of unequal size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightScheme {
    /// All weights 1.
    Uniform,
    /// `w_l = sqrt(|G_l|)`, the classic group-lasso scaling.
    SqrtSize,
    /// `w_l = 1 / sqrt(|G_l|)`, the adaptive group-L0 scaling.
    InverseSqrtSize,
}

/// An ordered list of index groups over a vector of length `dimension`,
/// with per-group weights. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupStructure {
    dimension: usize,
    groups: Vec<Vec<usize>>,
    weights: Vec<f64>,
    overlapping: bool,
}

impl GroupStructure {
    /// Validates and builds a structure. Group members are sorted ascending;
    /// group order is preserved as given.
    pub fn new(dimension: usize, groups: Vec<Vec<usize>>, weights: Vec<f64>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::invalid("group structure dimension must be >= 1"));
        }
        if weights.len() != groups.len() {
            return Err(Error::DimensionMismatch {
                what: "group weights",
                expected: groups.len(),
                got: weights.len(),
            });
        }
        for (l, w) in weights.iter().enumerate() {
            if !w.is_finite() || *w <= 0.0 {
                return Err(Error::invalid(format!(
                    "weight of group {l} must be a positive finite number, got {w}"
                )));
            }
        }
        let mut sorted_groups = Vec::with_capacity(groups.len());
        for (l, mut group) in groups.into_iter().enumerate() {
            if group.is_empty() {
                return Err(Error::invalid(format!("group {l} is empty")));
            }
            group.sort_unstable();
            for pair in group.windows(2) {
                if pair[0] == pair[1] {
                    return Err(Error::invalid(format!(
                        "group {l} contains index {} twice",
                        pair[0]
                    )));
                }
            }
            let last = *group.last().unwrap();
            if last >= dimension {
                return Err(Error::invalid(format!(
                    "group {l} contains index {last}, out of range for dimension {dimension}"
                )));
            }
            sorted_groups.push(group);
        }
        let overlapping = {
            let mut seen = vec![false; dimension];
            let mut any = false;
            'outer: for group in &sorted_groups {
                for &i in group {
                    if seen[i] {
                        any = true;
                        break 'outer;
                    }
                    seen[i] = true;
                }
            }
            any
        };
        Ok(GroupStructure {
            dimension,
            groups: sorted_groups,
            weights,
            overlapping,
        })
    }

    /// Same as [`GroupStructure::new`] with all weights set to 1.
    pub fn with_unit_weights(dimension: usize, groups: Vec<Vec<usize>>) -> Result<Self> {
        let weights = vec![1.0; groups.len()];
        GroupStructure::new(dimension, groups, weights)
    }

    /// One singleton group per index, all weights 1. With these groups the
    /// group penalties reduce to their element-wise counterparts.
    pub fn singletons(dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::invalid("group structure dimension must be >= 1"));
        }
        let groups = (0..dimension).map(|i| vec![i]).collect();
        GroupStructure::with_unit_weights(dimension, groups)
    }

    /// One two-member group per unique undirected edge, default weight 1.
    /// Duplicate edges (in either orientation) collapse to one group;
    /// self-loops and out-of-range endpoints are rejected.
    pub fn from_edges(dimension: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::invalid("group structure dimension must be >= 1"));
        }
        let mut seen = std::collections::HashSet::new();
        let mut groups = Vec::new();
        for &(i, j) in edges {
            if i == j {
                return Err(Error::invalid(format!("edge ({i}, {j}) is a self-loop")));
            }
            if i >= dimension || j >= dimension {
                return Err(Error::invalid(format!(
                    "edge ({i}, {j}) is out of range for dimension {dimension}"
                )));
            }
            let key = (i.min(j), i.max(j));
            if seen.insert(key) {
                groups.push(vec![key.0, key.1]);
            }
        }
        GroupStructure::with_unit_weights(dimension, groups)
    }

    /// Returns a copy with weights recomputed under `scheme`.
    pub fn reweighted(&self, scheme: WeightScheme) -> GroupStructure {
        let weights = self
            .groups
            .iter()
            .map(|g| match scheme {
                WeightScheme::Uniform => 1.0,
                WeightScheme::SqrtSize => (g.len() as f64).sqrt(),
                WeightScheme::InverseSqrtSize => 1.0 / (g.len() as f64).sqrt(),
            })
            .collect();
        GroupStructure {
            dimension: self.dimension,
            groups: self.groups.clone(),
            weights,
            overlapping: self.overlapping,
        }
    }

    /// Returns a copy with the given explicit weights.
    pub fn with_weights(&self, weights: Vec<f64>) -> Result<GroupStructure> {
        GroupStructure::new(self.dimension, self.groups.clone(), weights)
    }

    /// Number of groups containing each index.
    pub fn coverage_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.dimension];
        for group in &self.groups {
            for &i in group {
                counts[i] += 1;
            }
        }
        counts
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    pub fn group(&self, l: usize) -> &[usize] {
        &self.groups[l]
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn weight(&self, l: usize) -> f64 {
        self.weights[l]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn overlapping(&self) -> bool {
        self.overlapping
    }

    /// True when the groups are disjoint and their union covers every index,
    /// as the non-overlapping (GL1/GL0) solvers require.
    pub fn is_partition(&self) -> bool {
        !self.overlapping && self.coverage_counts().iter().all(|&c| c == 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singletons_cover_everything() {
        let gs = GroupStructure::singletons(3).unwrap();
        assert_eq!(gs.group_count(), 3);
        assert_eq!(gs.group(1), &[1]);
        assert_eq!(gs.weights(), &[1.0, 1.0, 1.0]);
        assert!(!gs.overlapping());
        assert!(gs.is_partition());

        let gs = GroupStructure::singletons(1).unwrap();
        assert_eq!(gs.groups(), &[vec![0]]);

        let gs = GroupStructure::singletons(1000).unwrap();
        assert_eq!(gs.group_count(), 1000);
        assert!(gs.coverage_counts().iter().all(|&c| c == 1));

        assert!(GroupStructure::singletons(0).is_err());
    }

    #[test]
    fn edge_groups_follow_the_shared_node_rule() {
        let gs = GroupStructure::from_edges(4, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(gs.groups(), &[vec![0, 1], vec![1, 2]]);
        assert!(gs.overlapping());

        let gs = GroupStructure::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(!gs.overlapping());

        let gs = GroupStructure::from_edges(3, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(gs.group_count(), 1);
        assert_eq!(gs.group(0), &[0, 1]);

        let err = GroupStructure::from_edges(3, &[(0, 0)]).unwrap_err();
        assert!(err.to_string().contains("(0, 0)"));
        let err = GroupStructure::from_edges(3, &[(0, 7)]).unwrap_err();
        assert!(err.to_string().contains("(0, 7)"));
    }

    #[test]
    fn weight_schemes() {
        let gs = GroupStructure::with_unit_weights(13, vec![(0..4).collect(), (4..13).collect()])
            .unwrap();
        let sq = gs.reweighted(WeightScheme::SqrtSize);
        assert_eq!(sq.weights(), &[2.0, 3.0]);
        let inv = gs.reweighted(WeightScheme::InverseSqrtSize);
        assert!((inv.weight(0) - 0.5).abs() < 1e-15);
        assert!((inv.weight(1) - 1.0 / 3.0).abs() < 1e-15);
        let uni = sq.reweighted(WeightScheme::Uniform);
        assert_eq!(uni.weights(), &[1.0, 1.0]);
    }

    #[test]
    fn coverage_counts_examples() {
        let gs = GroupStructure::with_unit_weights(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert_eq!(gs.coverage_counts(), vec![1, 2, 1]);

        let gs = GroupStructure::singletons(3).unwrap();
        assert_eq!(gs.coverage_counts(), vec![1, 1, 1]);

        let gs = GroupStructure::with_unit_weights(3, vec![vec![0, 1]]).unwrap();
        assert_eq!(gs.coverage_counts(), vec![1, 1, 0]);
        assert!(!gs.is_partition());
    }

    #[test]
    fn validation_rejects_malformed_input() {
        // duplicate index within a group
        assert!(GroupStructure::with_unit_weights(3, vec![vec![1, 1]]).is_err());
        // out of range
        assert!(GroupStructure::with_unit_weights(3, vec![vec![3]]).is_err());
        // empty group
        assert!(GroupStructure::with_unit_weights(3, vec![vec![]]).is_err());
        // bad weights
        assert!(GroupStructure::new(3, vec![vec![0]], vec![0.0]).is_err());
        assert!(GroupStructure::new(3, vec![vec![0]], vec![f64::NAN]).is_err());
        assert!(GroupStructure::new(3, vec![vec![0]], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn members_are_sorted_but_group_order_is_kept() {
        let gs = GroupStructure::with_unit_weights(5, vec![vec![4, 2], vec![1, 0]]).unwrap();
        assert_eq!(gs.group(0), &[2, 4]);
        assert_eq!(gs.group(1), &[0, 1]);
    }

    #[test]
    fn coverage_sums_match_group_sizes() {
        let gs = GroupStructure::with_unit_weights(
            6,
            vec![vec![0, 1, 2], vec![2, 3], vec![3, 4, 5], vec![0, 5]],
        )
        .unwrap();
        let total: usize = gs.coverage_counts().iter().sum();
        let sizes: usize = gs.groups().iter().map(|g| g.len()).sum();
        assert_eq!(total, sizes);
    }
}
