//! Eigentriple grouping and series reconstruction.
//!
//! Each group's elementary matrices are summed and mapped back to a
//! series by diagonal averaging. Projection triples are handled as a
//! block: a grouping is rejected if it splits the first `q + p`
//! components, since those come from projections on subspaces as a
//! whole.

use std::collections::BTreeSet;

use crate::decomposition::Decomposition;
use crate::error::SsaError;
use crate::series::{hankelize, TimeSeries};
use crate::Result;

/// Name of the implicit group collecting triples not covered by any
/// named group.
pub const RESIDUAL_GROUP: &str = "residual";

/// Named, pairwise-disjoint sets of 1-based triple indices.
#[derive(Debug, Clone)]
pub struct Grouping {
    groups: Vec<(String, Vec<usize>)>,
}

impl Grouping {
    /// Builds a grouping, rejecting duplicate names, repeated indices and
    /// index 0. Range and projection-block checks happen against a
    /// concrete decomposition in [`Grouping::validate`].
    pub fn new(groups: Vec<(String, Vec<usize>)>) -> Result<Self> {
        let mut names = BTreeSet::new();
        let mut seen = BTreeSet::new();
        for (name, indices) in &groups {
            if !names.insert(name.clone()) {
                return Err(SsaError::DuplicateGroupName { name: name.clone() });
            }
            for &index in indices {
                if index == 0 {
                    return Err(SsaError::IndexOutOfRange { index, count: 0 });
                }
                if !seen.insert(index) {
                    return Err(SsaError::OverlappingGroups { index });
                }
            }
        }
        let groups = groups
            .into_iter()
            .map(|(name, mut indices)| {
                indices.sort_unstable();
                (name, indices)
            })
            .collect();
        Ok(Grouping { groups })
    }

    /// One singleton group per triple, named `et1`, `et2`, ...
    pub fn elementary(count: usize) -> Self {
        Grouping {
            groups: (1..=count).map(|i| (format!("et{i}"), vec![i])).collect(),
        }
    }

    pub fn groups(&self) -> &[(String, Vec<usize>)] {
        &self.groups
    }

    /// Indices not assigned to any named group, in increasing order.
    pub fn uncovered(&self, count: usize) -> Vec<usize> {
        let covered: BTreeSet<usize> = self
            .groups
            .iter()
            .flat_map(|(_, indices)| indices.iter().copied())
            .collect();
        (1..=count).filter(|i| !covered.contains(i)).collect()
    }

    /// Checks index ranges and the projection-block constraint: when the
    /// decomposition has projection triples, indices `1..=q+p` must all
    /// land in the same group (possibly the implicit residual).
    pub fn validate(&self, decomposition: &Decomposition) -> Result<()> {
        let count = decomposition.len();
        for (_, indices) in &self.groups {
            for &index in indices {
                if index > count {
                    return Err(SsaError::IndexOutOfRange { index, count });
                }
            }
        }
        let proj_count = decomposition.projection_count();
        if proj_count > 0 {
            let mut holder: Option<usize> = None; // group position; usize::MAX = residual
            for block_index in 1..=proj_count {
                let position = self
                    .groups
                    .iter()
                    .position(|(_, indices)| indices.contains(&block_index))
                    .unwrap_or(usize::MAX);
                match holder {
                    None => holder = Some(position),
                    Some(h) if h == position => {}
                    Some(_) => {
                        return Err(SsaError::SplitProjectionGroup { proj_count });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Reconstructs one series per group (plus a trailing residual group for
/// uncovered triples) by diagonal averaging of the grouped matrices.
///
/// When the groups cover every triple, the returned components sum to
/// the decomposed series.
pub fn reconstruct(
    decomposition: &Decomposition,
    grouping: &Grouping,
) -> Result<Vec<(String, TimeSeries)>> {
    grouping.validate(decomposition)?;
    let mut components = Vec::with_capacity(grouping.groups().len() + 1);
    for (name, indices) in grouping.groups() {
        let matrix = decomposition.group_matrix(indices)?;
        components.push((name.clone(), hankelize(&matrix)?));
    }
    let uncovered = grouping.uncovered(decomposition.len());
    if !uncovered.is_empty() {
        if grouping.groups().iter().any(|(n, _)| n == RESIDUAL_GROUP) {
            return Err(SsaError::DuplicateGroupName {
                name: RESIDUAL_GROUP.to_string(),
            });
        }
        let matrix = decomposition.group_matrix(&uncovered)?;
        components.push((RESIDUAL_GROUP.to_string(), hankelize(&matrix)?));
    }
    Ok(components)
}

/// Grouping with a single `trend` group holding the projection block
/// plus the given extra 1-based SVD triple indices; everything else
/// falls into the residual.
///
/// Extra indices must refer to SVD triples (index `> q + p`).
pub fn augment_trend_group(
    decomposition: &Decomposition,
    extra_svd_indices: &[usize],
) -> Result<Grouping> {
    let proj_count = decomposition.projection_count();
    let mut indices: Vec<usize> = (1..=proj_count).collect();
    for &index in extra_svd_indices {
        if index == 0 || index > decomposition.len() {
            return Err(SsaError::IndexOutOfRange {
                index,
                count: decomposition.len(),
            });
        }
        if index <= proj_count {
            return Err(SsaError::ProjectionTripleInExtras { index });
        }
        if !indices.contains(&index) {
            indices.push(index);
        }
    }
    Grouping::new(vec![("trend".to_string(), indices)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::basic_ssa;
    use crate::projection::{proj_ssa, projssa_spec};
    use crate::series::TimeSeries;
    use std::f64::consts::PI;

    fn linear_plus_sine(n: usize) -> TimeSeries {
        TimeSeries::from_fn(n, |i| {
            (i as f64 - 100.0) + (2.0 * PI * 0.05 * i as f64).sin()
        })
        .unwrap()
    }

    #[test]
    fn elementary_grouping_sums_to_original() {
        let x = TimeSeries::from_fn(60, |i| (0.4 * i as f64).sin() + 0.03 * i as f64).unwrap();
        let d = basic_ssa(&x, 20).unwrap();
        let parts = reconstruct(&d, &Grouping::elementary(d.len())).unwrap();
        assert_eq!(parts.len(), d.len());
        let mut sum = vec![0.0; x.len()];
        for (_, series) in &parts {
            for (acc, v) in sum.iter_mut().zip(series.values()) {
                *acc += v;
            }
        }
        let scale = x.values().iter().fold(1.0f64, |a, v| a.max(v.abs()));
        for (s, v) in sum.iter().zip(x.values()) {
            assert!((s - v).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn projection_group_reconstructs_exact_trend() {
        let n = 199;
        let x = linear_plus_sine(n);
        let spec = projssa_spec(1, 1, 100, 100).unwrap().unwrap();
        let d = proj_ssa(&x, 100, &spec).unwrap();
        let grouping = Grouping::new(vec![("trend".into(), vec![1, 2])]).unwrap();
        let parts = reconstruct(&d, &grouping).unwrap();
        let trend = &parts[0].1;
        for (i, v) in trend.values().iter().enumerate() {
            let expected = (i + 1) as f64 - 100.0;
            assert!((v - expected).abs() < 1e-8, "index {i}: {v} vs {expected}");
        }
        // uncovered triples land in a trailing residual group
        assert_eq!(parts.last().unwrap().0, RESIDUAL_GROUP);
    }

    #[test]
    fn splitting_the_projection_block_is_rejected() {
        let x = linear_plus_sine(199);
        let spec = projssa_spec(1, 1, 100, 100).unwrap().unwrap();
        let d = proj_ssa(&x, 100, &spec).unwrap();
        let split = Grouping::new(vec![("a".into(), vec![1]), ("b".into(), vec![2])]).unwrap();
        assert!(matches!(
            reconstruct(&d, &split),
            Err(SsaError::SplitProjectionGroup { proj_count: 2 })
        ));

        // only one projection triple named, the other implicit: also split
        let partial = Grouping::new(vec![("trend".into(), vec![1])]).unwrap();
        assert!(matches!(
            reconstruct(&d, &partial),
            Err(SsaError::SplitProjectionGroup { .. })
        ));
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(
            Grouping::new(vec![("a".into(), vec![1]), ("a".into(), vec![2])]),
            Err(SsaError::DuplicateGroupName { .. })
        ));
        assert!(matches!(
            Grouping::new(vec![("a".into(), vec![1]), ("b".into(), vec![1])]),
            Err(SsaError::OverlappingGroups { index: 1 })
        ));
        assert!(matches!(
            Grouping::new(vec![("a".into(), vec![0])]),
            Err(SsaError::IndexOutOfRange { .. })
        ));

        let x = TimeSeries::from_fn(30, |i| (i as f64).sin()).unwrap();
        let d = basic_ssa(&x, 10).unwrap();
        let out_of_range = Grouping::new(vec![("a".into(), vec![d.len() + 1])]).unwrap();
        assert!(matches!(
            reconstruct(&d, &out_of_range),
            Err(SsaError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn augment_trend_group_variants() {
        let x = linear_plus_sine(199);
        let spec = projssa_spec(1, 1, 100, 100).unwrap().unwrap();
        let d = proj_ssa(&x, 100, &spec).unwrap();

        let bare = augment_trend_group(&d, &[]).unwrap();
        assert_eq!(bare.groups()[0].1, vec![1, 2]);

        let extended = augment_trend_group(&d, &[3]).unwrap();
        assert_eq!(extended.groups()[0].1, vec![1, 2, 3]);

        assert!(matches!(
            augment_trend_group(&d, &[2]),
            Err(SsaError::ProjectionTripleInExtras { index: 2 })
        ));
        assert!(matches!(
            augment_trend_group(&d, &[d.len() + 5]),
            Err(SsaError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn augment_trend_group_with_two_svd_extras() {
        // trend + strong seasonality, in the spirit of a monthly series
        // whose trend needs SVD components 5 and 8 on top of the
        // projection pair
        let x = TimeSeries::from_fn(96, |i| {
            let t = i as f64;
            0.2 * t
                + 30.0
                + 3.0 * (2.0 * PI * t / 12.0).sin()
                + 0.002 * t * t
                + (2.0 * PI * t / 6.0).cos()
                + 0.4 * (2.0 * PI * t / 4.0).sin()
        })
        .unwrap();
        let spec = projssa_spec(1, 1, 36, 61).unwrap().unwrap();
        let d = proj_ssa(&x, 36, &spec).unwrap();
        assert!(d.len() >= 8);
        let grouping = augment_trend_group(&d, &[5, 8]).unwrap();
        assert_eq!(grouping.groups()[0].1, vec![1, 2, 5, 8]);
        let parts = reconstruct(&d, &grouping).unwrap();
        assert_eq!(parts[0].0, "trend");
    }

    #[test]
    fn group_order_does_not_change_components() {
        let x = TimeSeries::from_fn(50, |i| (0.5 * i as f64).sin() + 0.1 * i as f64).unwrap();
        let d = basic_ssa(&x, 15).unwrap();
        let ab = reconstruct(
            &d,
            &Grouping::new(vec![("a".into(), vec![1, 2]), ("b".into(), vec![3])]).unwrap(),
        )
        .unwrap();
        let ba = reconstruct(
            &d,
            &Grouping::new(vec![("b".into(), vec![3]), ("a".into(), vec![1, 2])]).unwrap(),
        )
        .unwrap();
        let a_first = ab.iter().find(|(n, _)| n == "a").unwrap();
        let a_second = ba.iter().find(|(n, _)| n == "a").unwrap();
        assert_eq!(a_first.1.values(), a_second.1.values());
    }

    #[test]
    fn user_residual_name_conflicts_with_implicit_group() {
        let x = TimeSeries::from_fn(30, |i| (i as f64 * 0.8).sin() + i as f64).unwrap();
        let d = basic_ssa(&x, 10).unwrap();
        assert!(d.len() > 1);
        let grouping = Grouping::new(vec![(RESIDUAL_GROUP.into(), vec![1])]).unwrap();
        assert!(matches!(
            reconstruct(&d, &grouping),
            Err(SsaError::DuplicateGroupName { .. })
        ));
    }
}
