//! Cooperative leakage beamforming for cognitive-radio broadcasting under
//! asynchronous interference.
//!
//! A cluster of cooperating cognitive radio nodes (CCRNs) forms a virtual
//! antenna array and sends one beam to each secondary destination. Because
//! the CCRNs sit at different distances from every receiver, their copies
//! of a symbol arrive misaligned, and the interference they cause at primary
//! receivers depends on pairwise symbol overlaps. The crate models that
//! interference, designs beams that respect per-primary caps, and evaluates
//! designs by Monte Carlo simulation.
//!
//! ```
//! use coopbeam::prelude::*;
//!
//! let config = coopbeam::config::reference_config();
//! let topology = config.topology();
//! let corr = config.correlations()?;
//! let truth = draw_channels(&topology, &config.fading(), &config.noise_powers(), 1.0, 7)?;
//! let cov = build_covariances(&truth, &corr)?;
//! let gamma = &config.interference.thresholds;
//! let solution = leakage_beamforming(
//!     &truth,
//!     &cov,
//!     &EffectiveThresholds::perfect(gamma),
//!     &config.objective.weights,
//!     Allocator::Optimal,
//!     Regularization::default(),
//! )?;
//! for (j, cap) in gamma.iter().enumerate() {
//!     assert!(asynch_power(&cov, &solution, j) <= cap * (1.0 + 1e-8));
//! }
//! # Ok::<(), coopbeam::Error>(())
//! ```

// `!(x > 0.0)` deliberately rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod beamforming;
pub mod channel;
pub mod config;
pub mod design;
mod error;
pub mod geometry;
pub mod power_allocation;
pub mod selection;
pub mod simulation;

pub use error::{Error, Result};

/// The names most programs need.
pub mod prelude {
    pub use crate::beamforming::{
        lbf_directions, robust_thresholds_erroneous, robust_thresholds_statistical,
        zfbf_directions, EffectiveThresholds, Regularization,
    };
    pub use crate::channel::{
        build_covariances, build_statistical_covariances, draw_channels, perturb_channels,
        ChannelRealization, CovarianceBundle, ErrorSampling, FadingSpec,
    };
    pub use crate::config::{parse_config, ScenarioConfig};
    pub use crate::design::{
        leakage_beamforming, robust_erroneous, robust_statistical, zero_forcing, Allocator,
        BeamformerSolution, Method,
    };
    pub use crate::geometry::{compute_correlations, compute_delays, CorrelationSet, Topology};
    pub use crate::power_allocation::{lcpa_allocate, opa_allocate, AllocationProblem};
    pub use crate::selection::{best_single_ccrn, select_and_beamform, SelectionOptions};
    pub use crate::simulation::{actual_sum_rate, approx_sum_rate, asynch_power, run_campaign};
    pub use crate::{Error, Result};
}
