use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::beamforming::{EffectiveThresholds, Regularization};
use crate::channel::{
    build_covariances, build_statistical_covariances, draw_channels_with, perturb_channels_with,
    CMatrix, ChannelRealization, CovarianceBundle, C64,
};
use crate::config::{CsiKind, ScenarioConfig};
use crate::design::{
    leakage_beamforming, robust_erroneous, robust_statistical, zero_forcing, Allocator,
    BeamformerSolution, Method,
};
use crate::error::{Error, Result};
use crate::geometry::CorrelationSet;
use crate::selection::{best_single_ccrn, select_and_beamform, SelectionOptions};

use super::report::{summarize, CampaignSummary};
use super::{evaluate, TrialMetrics};

/// Environment variable that sets the number of worker threads.
pub const THREADS_ENV: &str = "COOPBEAM_THREADS";

/// What a design is allowed to see. Built from the true channels according
/// to the CSI model; the designs never receive the true channels themselves.
#[derive(Debug, Clone)]
pub struct DesignInputs {
    pub channels: ChannelRealization,
    pub cov: CovarianceBundle,
    /// Expected primary covariances, available under statistical CSI.
    pub expected_primary: Option<Vec<Vec<CMatrix>>>,
}

impl DesignInputs {
    pub fn perfect(truth: &ChannelRealization, cov: &CovarianceBundle) -> Self {
        Self {
            channels: truth.clone(),
            cov: cov.clone(),
            expected_primary: None,
        }
    }

    pub fn estimated(estimate: ChannelRealization, corr: &CorrelationSet) -> Result<Self> {
        let cov = build_covariances(&estimate, corr)?;
        Ok(Self {
            channels: estimate,
            cov,
            expected_primary: None,
        })
    }

    /// Secondary channels plus primary-link statistics; the instantaneous
    /// primary channels are blanked.
    pub fn statistical(
        truth: &ChannelRealization,
        corr: &CorrelationSet,
        omega: &nalgebra::DMatrix<f64>,
    ) -> Result<Self> {
        let mut channels = truth.clone();
        channels.h_p.fill(C64::new(0.0, 0.0));
        let cov = build_covariances(&channels, corr)?;
        let expected = build_statistical_covariances(omega, corr)?;
        Ok(Self {
            channels,
            cov,
            expected_primary: Some(expected),
        })
    }

    fn with_symbol_power(&self, p: f64) -> Self {
        let mut out = self.clone();
        out.channels.symbol_power = p;
        out
    }
}

/// Method-independent design parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSettings {
    pub gamma: Vec<f64>,
    pub weights: Vec<f64>,
    pub psi_c: Vec<f64>,
    pub violation_probability: Vec<f64>,
    /// Power per zero-forcing beam.
    pub zfbf_beam_power: f64,
    pub regularization: Regularization,
    pub selection_limit: usize,
}

impl MethodSettings {
    pub fn from_config(config: &ScenarioConfig, symbol_power: f64) -> Self {
        Self {
            gamma: config.interference.thresholds.clone(),
            weights: config.objective.weights.clone(),
            psi_c: config.csi.psi_c.clone().unwrap_or_default(),
            violation_probability: config.csi.violation_probability.clone().unwrap_or_default(),
            zfbf_beam_power: config.zfbf_beam_power(symbol_power),
            regularization: config.regularization(),
            selection_limit: config.methods.selection_limit,
        }
    }
}

/// Runs one method on what the CSI model exposes.
pub fn design(
    method: Method,
    inputs: &DesignInputs,
    settings: &MethodSettings,
) -> Result<BeamformerSolution> {
    let caps = EffectiveThresholds::perfect(&settings.gamma);
    let (ch, cov, w) = (&inputs.channels, &inputs.cov, &settings.weights[..]);
    match method {
        Method::LbfOpa => leakage_beamforming(
            ch,
            cov,
            &caps,
            w,
            Allocator::Optimal,
            settings.regularization,
        ),
        Method::LbfLcpa => leakage_beamforming(
            ch,
            cov,
            &caps,
            w,
            Allocator::LowComplexity,
            settings.regularization,
        ),
        Method::Zfbf => zero_forcing(ch, settings.zfbf_beam_power),
        Method::SingleCcrn => best_single_ccrn(ch, cov, &caps, w).map(|s| s.solution),
        Method::Selection => {
            let options = SelectionOptions {
                limit: settings.selection_limit,
                regularization: settings.regularization,
            };
            select_and_beamform(ch, cov, &caps, w, options).map(|s| s.solution)
        }
        Method::RobustErroneous => robust_erroneous(
            ch,
            cov,
            &settings.gamma,
            &settings.psi_c,
            w,
            settings.regularization,
        ),
        Method::RobustStatistical => {
            let expected = inputs.expected_primary.clone().ok_or_else(|| {
                Error::InvalidCsiModel(
                    "the statistical design needs primary-link statistics".into(),
                )
            })?;
            robust_statistical(
                ch,
                cov,
                expected,
                &settings.gamma,
                &settings.violation_probability,
                w,
                settings.regularization,
            )
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `trial` under master seed `master`.
pub fn trial_seed(master: u64, trial: usize) -> u64 {
    splitmix64(splitmix64(master) ^ trial as u64)
}

const CHANNEL_STREAM: u64 = 0;
const ERROR_STREAM: u64 = 1;

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

struct Prepared {
    topology: crate::geometry::Topology,
    fading: crate::channel::FadingSpec,
    noise: Vec<f64>,
    corr: CorrelationSet,
    omega: nalgebra::DMatrix<f64>,
}

fn run_trial(config: &ScenarioConfig, prep: &Prepared, trial: usize) -> Result<Vec<TrialMetrics>> {
    let seed = trial_seed(config.campaign.seed, trial);
    let truth = draw_channels_with(
        &prep.topology,
        &prep.fading,
        &prep.noise,
        1.0,
        &mut rng(seed, CHANNEL_STREAM),
    )?;
    let true_cov = build_covariances(&truth, &prep.corr)?;
    let inputs = match config.csi.model {
        CsiKind::Perfect => DesignInputs::perfect(&truth, &true_cov),
        CsiKind::Erroneous => {
            let estimate = perturb_channels_with(
                &truth,
                config.csi.epsilon.unwrap_or(0.0),
                config.csi.error_sampling,
                &mut rng(seed, ERROR_STREAM),
            )?;
            DesignInputs::estimated(estimate, &prep.corr)?
        }
        CsiKind::Statistical => DesignInputs::statistical(&truth, &prep.corr, &prep.omega)?,
    };

    let mut rows = Vec::new();
    for (&p_db, p) in config
        .channel
        .symbol_power_db
        .iter()
        .zip(config.symbol_powers())
    {
        let mut truth_p = truth.clone();
        truth_p.symbol_power = p;
        let inputs_p = inputs.with_symbol_power(p);
        let settings = MethodSettings::from_config(config, p);
        for &method in &config.methods.enabled {
            let row = match design(method, &inputs_p, &settings) {
                Ok(solution) => {
                    let e = evaluate(
                        &truth_p,
                        &true_cov,
                        &solution,
                        &settings.weights,
                        &settings.gamma,
                    );
                    TrialMetrics {
                        trial_id: trial,
                        symbol_power_db: p_db,
                        method,
                        sum_rate_actual: e.sum_rate_actual,
                        sum_rate_approx: e.sum_rate_approx,
                        p_asynch: e.p_asynch,
                        violated: e.violated,
                        outage: e.outage,
                        credited_rate: e.credited_rate,
                        alpha: solution.alpha,
                        seed,
                        failure: None,
                    }
                }
                Err(err) => TrialMetrics {
                    trial_id: trial,
                    symbol_power_db: p_db,
                    method,
                    sum_rate_actual: 0.0,
                    sum_rate_approx: 0.0,
                    p_asynch: Vec::new(),
                    violated: Vec::new(),
                    outage: false,
                    credited_rate: 0.0,
                    alpha: Vec::new(),
                    seed,
                    failure: Some(err.to_string()),
                },
            };
            rows.push(row);
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone)]
pub struct CampaignResult {
    /// Ordered by trial, then symbol power, then method as configured.
    pub rows: Vec<TrialMetrics>,
    pub summary: CampaignSummary,
}

/// Runs every configured trial, using the worker count from
/// [`THREADS_ENV`] when set.
pub fn run_campaign(config: &ScenarioConfig) -> Result<CampaignResult> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| {
            Error::Campaign(format!(
                "{THREADS_ENV} must be a positive integer, got {v:?}"
            ))
        })?),
        Err(_) => None,
    };
    run_campaign_with_threads(config, threads)
}

/// Output does not depend on the worker count.
pub fn run_campaign_with_threads(
    config: &ScenarioConfig,
    threads: Option<usize>,
) -> Result<CampaignResult> {
    if config.methods.enabled.is_empty() {
        return Err(Error::Campaign("no methods enabled".into()));
    }
    let prep = Prepared {
        topology: config.topology(),
        fading: config.fading(),
        noise: config.noise_powers(),
        corr: config.correlations()?,
        omega: config.omega(),
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Campaign(e.to_string()))?;
    let trials: Vec<Result<Vec<TrialMetrics>>> = pool.install(|| {
        (0..config.campaign.trials)
            .into_par_iter()
            .map(|t| run_trial(config, &prep, t))
            .collect()
    });
    let mut rows = Vec::new();
    for t in trials {
        rows.extend(t?);
    }
    let summary = summarize(config, &rows);
    Ok(CampaignResult { rows, summary })
}
