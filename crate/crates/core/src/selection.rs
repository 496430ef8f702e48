//! Joint CCRN selection by exhaustive search over node subsets.

use crate::beamforming::{EffectiveThresholds, Regularization};
use crate::channel::{CVector, ChannelRealization, CovarianceBundle, C64};
use crate::design::{leakage_beamforming, Allocator, BeamformerSolution, Method, Transmission};
use crate::error::{Error, Result};
use crate::simulation::approx_sum_rate;

/// Largest node count searched exhaustively unless configured otherwise.
pub const DEFAULT_SELECTION_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult {
    /// `mask[r]` is true when CCRN `r` transmits.
    pub mask: Vec<bool>,
    pub solution: BeamformerSolution,
    /// Approximated weighted sum rate of `solution`.
    pub sum_rate: f64,
    pub evaluations: usize,
    /// Subsets whose inner design failed.
    pub infeasible: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionOptions {
    pub limit: usize,
    pub regularization: Regularization,
}

impl Default for SelectionOptions {
    fn default() -> Self {
        Self {
            limit: DEFAULT_SELECTION_LIMIT,
            regularization: Regularization::default(),
        }
    }
}

fn mask_nodes(mask: u64, l: usize) -> Vec<usize> {
    (0..l).filter(|r| mask >> r & 1 == 1).collect()
}

/// Scatters restricted directions back onto all `l` CCRNs.
fn embed(solution: BeamformerSolution, nodes: &[usize], l: usize) -> BeamformerSolution {
    let directions = solution
        .directions
        .iter()
        .map(|d| {
            let mut full = CVector::from_element(l, C64::new(0.0, 0.0));
            for (i, &r) in nodes.iter().enumerate() {
                full[r] = d[i];
            }
            full
        })
        .collect();
    let mut ccrns = vec![false; l];
    nodes.iter().for_each(|&r| ccrns[r] = true);
    BeamformerSolution {
        directions,
        ccrns,
        ..solution
    }
}

/// Runs leakage beamforming with optimal allocation on every non-empty
/// subset of CCRNs and keeps the best approximated weighted sum rate.
/// Ties go to the subset with the lowest binary mask value.
pub fn select_and_beamform(
    channels: &ChannelRealization,
    cov: &CovarianceBundle,
    caps: &EffectiveThresholds,
    weights: &[f64],
    options: SelectionOptions,
) -> Result<SelectionResult> {
    let l = channels.num_ccrns();
    if l == 0 || l > options.limit || l >= 64 {
        return Err(Error::SelectionTooLarge {
            ccrns: l,
            limit: options.limit.min(63),
        });
    }
    let mut best: Option<(u64, f64, BeamformerSolution)> = None;
    let mut infeasible = 0;
    let masks = (1u64 << l) - 1;
    for mask in 1..=masks {
        let nodes = mask_nodes(mask, l);
        let sub_ch = channels.restrict(&nodes);
        let sub_cov = cov.restrict(&nodes);
        match leakage_beamforming(
            &sub_ch,
            &sub_cov,
            caps,
            weights,
            Allocator::Optimal,
            options.regularization,
        ) {
            Ok(solution) => {
                let rate = approx_sum_rate(&sub_ch, &solution, weights);
                if best.as_ref().is_none_or(|(_, r, _)| rate > *r) {
                    best = Some((mask, rate, embed(solution, &nodes, l)));
                }
            }
            Err(_) => infeasible += 1,
        }
    }
    let evaluations = masks as usize;
    let (mask, sum_rate, mut solution) = best.ok_or(Error::NoFeasibleSubset {
        evaluated: evaluations,
    })?;
    solution.method = Method::Selection;
    Ok(SelectionResult {
        mask: (0..l).map(|r| mask >> r & 1 == 1).collect(),
        solution,
        sum_rate,
        evaluations,
        infeasible,
    })
}

/// Best single transmitting node. Node `r` broadcasts one stream heard by
/// every destination at the largest power meeting all caps,
/// `min_j caps[j] / leak_r^j`; nodes that leak nothing are unbounded and
/// skipped.
pub fn best_single_ccrn(
    channels: &ChannelRealization,
    cov: &CovarianceBundle,
    caps: &EffectiveThresholds,
    weights: &[f64],
) -> Result<SelectionResult> {
    let l = channels.num_ccrns();
    let mut best: Option<(usize, f64, BeamformerSolution)> = None;
    let mut infeasible = 0;
    for r in 0..l {
        let power = cov
            .primary
            .iter()
            .zip(&caps.caps)
            .map(|(row, cap)| {
                let leak = row.first().map_or(0.0, |m| m[(r, r)].re);
                if leak > 0.0 {
                    cap / leak
                } else {
                    f64::INFINITY
                }
            })
            .fold(f64::INFINITY, f64::min);
        if !power.is_finite() {
            infeasible += 1;
            continue;
        }
        // stay clear of the cap after rounding
        let power = power * (1.0 - 1e-14);
        let mut direction = CVector::from_element(l, C64::new(0.0, 0.0));
        direction[r] = C64::new(1.0, 0.0);
        let mut ccrns = vec![false; l];
        ccrns[r] = true;
        let solution = BeamformerSolution {
            method: Method::SingleCcrn,
            transmission: Transmission::Broadcast,
            directions: vec![direction],
            alpha: vec![power],
            active_set: Vec::new(),
            ccrns,
        };
        let rate = approx_sum_rate(channels, &solution, weights);
        if best.as_ref().is_none_or(|(_, b, _)| rate > *b) {
            best = Some((r, rate, solution));
        }
    }
    let (r, sum_rate, solution) = best.ok_or(Error::NoFeasibleSubset { evaluated: l })?;
    Ok(SelectionResult {
        mask: (0..l).map(|i| i == r).collect(),
        solution,
        sum_rate,
        evaluations: l,
        infeasible,
    })
}
