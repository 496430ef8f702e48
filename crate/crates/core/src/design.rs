//! Complete beamformer designs: directions followed by power allocation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::beamforming::{
    lbf_directions, robust_thresholds_erroneous, robust_thresholds_statistical, zfbf_directions,
    BeamDirections, EffectiveThresholds, Regularization,
};
use crate::channel::{CMatrix, CVector, ChannelRealization, CovarianceBundle};
use crate::error::{Error, Result};
use crate::power_allocation::{lcpa_allocate, opa_allocate, Allocation, AllocationProblem};

/// A transmission scheme compared by the simulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Method {
    LbfOpa,
    LbfLcpa,
    Zfbf,
    SingleCcrn,
    Selection,
    RobustErroneous,
    RobustStatistical,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::LbfOpa,
        Method::LbfLcpa,
        Method::Zfbf,
        Method::SingleCcrn,
        Method::Selection,
        Method::RobustErroneous,
        Method::RobustStatistical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::LbfOpa => "lbf-opa",
            Method::LbfLcpa => "lbf-lcpa",
            Method::Zfbf => "zfbf",
            Method::SingleCcrn => "single-ccrn",
            Method::Selection => "selection",
            Method::RobustErroneous => "rlbf-erroneous",
            Method::RobustStatistical => "rlbf-statistical",
        }
    }

    /// Whether the design reads instantaneous primary-link channels.
    pub fn needs_instantaneous_primary_csi(self) -> bool {
        self != Method::RobustStatistical
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let known: Vec<_> = Method::ALL.iter().map(|m| m.name()).collect();
                format!(
                    "unknown method {s:?} (expected one of {})",
                    known.join(", ")
                )
            })
    }
}

impl From<Method> for String {
    fn from(m: Method) -> Self {
        m.name().to_string()
    }
}

impl TryFrom<String> for Method {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// How the power of a solution reaches the destinations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transmission {
    /// One beam per destination, `g_k = sqrt(alpha_k) * direction_k`.
    Beams,
    /// A single stream on `directions[0]` at power `alpha[0]`, heard by all.
    Broadcast,
}

/// Beam directions, powers and provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamformerSolution {
    pub method: Method,
    pub transmission: Transmission,
    /// Unit directions over all `L` CCRNs (zero on unselected nodes).
    pub directions: Vec<CVector>,
    pub alpha: Vec<f64>,
    /// Interference constraints met with equality by the allocation.
    pub active_set: Vec<usize>,
    /// CCRNs that transmit.
    pub ccrns: Vec<bool>,
}

impl BeamformerSolution {
    pub fn num_streams(&self) -> usize {
        self.directions.len()
    }

    /// Weight vector of stream `k`, `sqrt(alpha_k) * direction_k`.
    pub fn weight(&self, k: usize) -> CVector {
        self.directions[k].scale(self.alpha[k].max(0.0).sqrt())
    }

    pub fn weights(&self) -> Vec<CVector> {
        (0..self.num_streams()).map(|k| self.weight(k)).collect()
    }
}

/// Which allocation scheme follows the direction phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Allocator {
    Optimal,
    LowComplexity,
}

impl Allocator {
    pub fn allocate(self, problem: &AllocationProblem) -> Result<Allocation> {
        match self {
            Allocator::Optimal => opa_allocate(problem),
            Allocator::LowComplexity => lcpa_allocate(problem),
        }
    }
}

fn from_allocation(
    method: Method,
    dirs: BeamDirections,
    allocation: Allocation,
) -> BeamformerSolution {
    let l = dirs.directions.first().map_or(0, |d| d.len());
    BeamformerSolution {
        method,
        transmission: Transmission::Beams,
        directions: dirs.directions,
        alpha: allocation.alpha,
        active_set: allocation.active_set,
        ccrns: vec![true; l],
    }
}

/// Leakage directions plus the chosen allocation under fixed caps.
pub fn leakage_beamforming(
    channels: &ChannelRealization,
    cov: &CovarianceBundle,
    caps: &EffectiveThresholds,
    weights: &[f64],
    allocator: Allocator,
    regularization: Regularization,
) -> Result<BeamformerSolution> {
    let dirs = lbf_directions(cov, channels, regularization)?;
    let problem =
        AllocationProblem::from_directions(channels, &cov.primary, &dirs, &caps.caps, weights)?;
    let allocation = allocator.allocate(&problem)?;
    let method = match allocator {
        Allocator::Optimal => Method::LbfOpa,
        Allocator::LowComplexity => Method::LbfLcpa,
    };
    Ok(from_allocation(method, dirs, allocation))
}

/// Zero-forcing directions with a fixed power per beam.
pub fn zero_forcing(channels: &ChannelRealization, beam_power: f64) -> Result<BeamformerSolution> {
    let dirs = zfbf_directions(channels)?;
    let k = dirs.directions.len();
    let l = channels.num_ccrns();
    Ok(BeamformerSolution {
        method: Method::Zfbf,
        transmission: Transmission::Beams,
        directions: dirs.directions,
        alpha: vec![beam_power; k],
        active_set: Vec::new(),
        ccrns: vec![true; l],
    })
}

/// Robust design for bounded estimation error: leakage directions on the
/// estimated covariances, and powers whose worst-case interference,
/// `(sqrt(usage) + psi * sum_k sqrt(alpha_k))^2`, stays below every threshold.
///
/// The caps depend on the powers only through the amplitude sum
/// `A = sum_k sqrt(alpha_k)`. Allocating with caps evaluated at `A` returns
/// an amplitude `F(A)` that decreases in `A`, so the coupled system has a
/// unique fixed point, bracketed and bisected here. The allocation returned
/// is the one computed at the upper end of the bracket, where `F(A) <= A`
/// and the caps are therefore conservative.
pub fn robust_erroneous(
    estimate: &ChannelRealization,
    estimated_cov: &CovarianceBundle,
    gamma: &[f64],
    psi_c: &[f64],
    weights: &[f64],
    regularization: Regularization,
) -> Result<BeamformerSolution> {
    let dirs = lbf_directions(estimated_cov, estimate, regularization)?;
    let base = AllocationProblem::from_directions(
        estimate,
        &estimated_cov.primary,
        &dirs,
        gamma,
        weights,
    )?;
    let allocate_at = |amplitude: f64| -> Result<(f64, Allocation)> {
        let k = base.num_beams() as f64;
        // caps only depend on the amplitude sum, so spread it evenly
        let powers = vec![(amplitude / k).powi(2); base.num_beams()];
        let caps = robust_thresholds_erroneous(gamma, psi_c, &powers).caps;
        let problem = AllocationProblem {
            caps,
            ..base.clone()
        };
        let allocation = opa_allocate(&problem)?;
        let produced = allocation.alpha.iter().map(|a| a.sqrt()).sum();
        Ok((produced, allocation))
    };

    let (mut hi, mut best) = allocate_at(0.0)?;
    let mut lo = 0.0;
    if hi > 0.0 {
        let (produced, allocation) = allocate_at(hi)?;
        if produced < hi {
            best = allocation;
            for _ in 0..100 {
                if hi - lo <= 1e-12 * hi {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                let (produced, allocation) = allocate_at(mid)?;
                if produced <= mid {
                    hi = mid;
                    best = allocation;
                } else {
                    lo = mid;
                }
            }
        } else {
            best = allocation;
        }
    }
    let mut solution = from_allocation(Method::RobustErroneous, dirs, best);
    enforce_robust_caps(&base, gamma, psi_c, &mut solution.alpha);
    Ok(solution)
}

/// Shrinks powers uniformly to the largest scale at which the worst-case
/// constraint holds for the final powers themselves (guards bisection
/// round-off).
fn enforce_robust_caps(
    problem: &AllocationProblem,
    gamma: &[f64],
    psi_c: &[f64],
    alpha: &mut [f64],
) {
    let original = alpha.to_vec();
    let holds = |t: f64| {
        let scaled: Vec<f64> = original.iter().map(|a| a * t).collect();
        let caps = robust_thresholds_erroneous(gamma, psi_c, &scaled).caps;
        (0..problem.num_constraints()).all(|j| problem.usage(j, &scaled) <= caps[j] * (1.0 - 1e-12))
    };
    if holds(1.0) {
        return;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    for (a, o) in alpha.iter_mut().zip(&original) {
        *a = o * lo;
    }
}

/// Robust design from channel statistics: the instantaneous primary
/// covariances are replaced by their expectations and every cap is
/// tightened to `epsilon * gamma`, bounding the violation probability by
/// `epsilon` through Markov's inequality.
pub fn robust_statistical(
    channels: &ChannelRealization,
    cov: &CovarianceBundle,
    expected_primary: Vec<Vec<CMatrix>>,
    gamma: &[f64],
    epsilon_violation: &[f64],
    weights: &[f64],
    regularization: Regularization,
) -> Result<BeamformerSolution> {
    if expected_primary.len() != gamma.len() || epsilon_violation.len() != gamma.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} expected covariance rows, {} thresholds, {} violation probabilities",
            expected_primary.len(),
            gamma.len(),
            epsilon_violation.len()
        )));
    }
    let statistical = cov.with_primary(expected_primary)?;
    let caps = robust_thresholds_statistical(gamma, epsilon_violation);
    let mut solution = leakage_beamforming(
        channels,
        &statistical,
        &caps,
        weights,
        Allocator::Optimal,
        regularization,
    )?;
    solution.method = Method::RobustStatistical;
    Ok(solution)
}
