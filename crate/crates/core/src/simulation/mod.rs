//! Monte Carlo evaluation of beamformer designs.

mod campaign;
mod oracle;
mod presets;
mod report;

pub use campaign::{
    design, run_campaign, run_campaign_with_threads, trial_seed, CampaignResult, DesignInputs,
    MethodSettings, THREADS_ENV,
};
pub use oracle::symbol_level_oracle;
pub use presets::{matched_error_radius, Figure};
pub use report::{
    paired_difference, summarize, summary_table, write_summary_csv, write_trials_csv,
    CampaignSummary, MethodSummary, PairedDifference,
};

use crate::channel::{quadratic_form, ChannelRealization, CovarianceBundle};
use crate::design::{BeamformerSolution, Method, Transmission};

fn log2_1p(x: f64) -> f64 {
    x.ln_1p() / std::f64::consts::LN_2
}

fn received_power(channels: &ChannelRealization, solution: &BeamformerSolution, k: usize) -> f64 {
    let stream = match solution.transmission {
        Transmission::Beams => k,
        Transmission::Broadcast => 0,
    };
    channels
        .destination(k)
        .dot(&solution.weight(stream))
        .norm_sqr()
}

/// Weighted sum rate ignoring the asynchronous interference between beams.
pub fn approx_sum_rate(
    channels: &ChannelRealization,
    solution: &BeamformerSolution,
    weights: &[f64],
) -> f64 {
    (0..channels.num_destinations())
        .map(|k| {
            let snr =
                channels.symbol_power * received_power(channels, solution, k) / channels.noise[k];
            weights[k] * log2_1p(snr)
        })
        .sum()
}

/// Asynchronous interference power from the other beams at destination `k`.
pub fn beam_interference(cov: &CovarianceBundle, solution: &BeamformerSolution, k: usize) -> f64 {
    match solution.transmission {
        Transmission::Broadcast => 0.0,
        Transmission::Beams => (0..solution.num_streams())
            .filter(|&i| i != k)
            .map(|i| quadratic_form(&cov.destination[k][i], &solution.weight(i)))
            .sum(),
    }
}

/// Weighted sum rate with the cross-beam asynchronous interference added to
/// the noise.
pub fn actual_sum_rate(
    channels: &ChannelRealization,
    cov: &CovarianceBundle,
    solution: &BeamformerSolution,
    weights: &[f64],
) -> f64 {
    (0..channels.num_destinations())
        .map(|k| {
            let signal = channels.symbol_power * received_power(channels, solution, k);
            let sinr = signal / (channels.noise[k] + beam_interference(cov, solution, k));
            weights[k] * log2_1p(sinr)
        })
        .sum()
}

/// Total asynchronous interference power at primary receiver `j`.
pub fn asynch_power(cov: &CovarianceBundle, solution: &BeamformerSolution, j: usize) -> f64 {
    (0..solution.num_streams())
        .map(|k| quadratic_form(&cov.primary[j][k], &solution.weight(k)))
        .sum()
}

/// Outcome of one method on one channel draw, scored on the true channels.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialMetrics {
    pub trial_id: usize,
    pub symbol_power_db: f64,
    pub method: Method,
    pub sum_rate_actual: f64,
    pub sum_rate_approx: f64,
    pub p_asynch: Vec<f64>,
    pub violated: Vec<bool>,
    pub outage: bool,
    /// Zero on outage, else the actual sum rate.
    pub credited_rate: f64,
    pub alpha: Vec<f64>,
    pub seed: u64,
    /// Solver error, when the method produced no design.
    pub failure: Option<String>,
}

/// Scores `solution` against the true channels and thresholds `gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub sum_rate_actual: f64,
    pub sum_rate_approx: f64,
    pub p_asynch: Vec<f64>,
    pub violated: Vec<bool>,
    pub outage: bool,
    pub credited_rate: f64,
}

pub fn evaluate(
    truth: &ChannelRealization,
    cov: &CovarianceBundle,
    solution: &BeamformerSolution,
    weights: &[f64],
    gamma: &[f64],
) -> Evaluation {
    let sum_rate_actual = actual_sum_rate(truth, cov, solution, weights);
    let p_asynch: Vec<f64> = (0..cov.num_primaries())
        .map(|j| asynch_power(cov, solution, j))
        .collect();
    let violated: Vec<bool> = p_asynch.iter().zip(gamma).map(|(p, g)| p > g).collect();
    let outage = violated.iter().any(|&v| v);
    Evaluation {
        sum_rate_actual,
        sum_rate_approx: approx_sum_rate(truth, solution, weights),
        p_asynch,
        violated,
        outage,
        credited_rate: if outage { 0.0 } else { sum_rate_actual },
    }
}
