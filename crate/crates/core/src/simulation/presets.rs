use std::fmt;
use std::str::FromStr;

use crate::channel::ErrorSampling;
use crate::config::{CsiKind, ScenarioConfig};
use crate::design::Method;

/// Ready-made experiments, each a method set and CSI setting applied on top
/// of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Interference power versus symbol power, leakage against zero forcing.
    Fig3,
    /// Sum-rate comparison of all baselines.
    Fig5,
    /// Actual versus approximated rate.
    Fig6,
    /// Bounded estimation errors on the worst-case boundary.
    Fig7,
    /// Only primary-link statistics known.
    Fig8,
    /// Gain of joint node selection.
    Fig9,
}

/// Symbol-power sweep used by [`Figure::Fig3`], in dB.
pub const FIG3_SWEEP_DB: [f64; 7] = [-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0];

/// Estimation-error radius per bound on the Cholesky-factor error:
/// `epsilon = psi^2 / L`.
pub fn matched_error_radius(psi_c: f64, ccrns: usize) -> f64 {
    psi_c * psi_c / ccrns as f64
}

const FIG7_PSI_C: f64 = 0.25e-8;
const FIG8_VIOLATION: f64 = 0.1;

impl Figure {
    pub const ALL: [Figure; 6] = [
        Figure::Fig3,
        Figure::Fig5,
        Figure::Fig6,
        Figure::Fig7,
        Figure::Fig8,
        Figure::Fig9,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig3 => "fig3",
            Figure::Fig5 => "fig5",
            Figure::Fig6 => "fig6",
            Figure::Fig7 => "fig7",
            Figure::Fig8 => "fig8",
            Figure::Fig9 => "fig9",
        }
    }

    pub fn methods(self) -> Vec<Method> {
        use Method::*;
        match self {
            Figure::Fig3 => vec![LbfOpa, Zfbf],
            Figure::Fig5 => vec![LbfOpa, LbfLcpa, Zfbf, SingleCcrn],
            Figure::Fig6 => vec![LbfOpa],
            Figure::Fig7 => vec![LbfOpa, RobustErroneous],
            Figure::Fig8 => vec![RobustStatistical],
            Figure::Fig9 => vec![LbfOpa, Selection],
        }
    }

    /// Rewrites `config` for this experiment; trial count and seed are kept.
    pub fn apply(self, config: &mut ScenarioConfig) {
        config.methods.enabled = self.methods();
        let j = config.counts.primaries;
        match self {
            Figure::Fig3 => config.channel.symbol_power_db = FIG3_SWEEP_DB.to_vec(),
            Figure::Fig7 => {
                let psi = config
                    .csi
                    .psi_c
                    .clone()
                    .filter(|_| config.csi.model == CsiKind::Erroneous)
                    .unwrap_or_else(|| vec![FIG7_PSI_C; j]);
                let smallest = psi.iter().cloned().fold(f64::INFINITY, f64::min);
                config.csi.model = CsiKind::Erroneous;
                config.csi.epsilon = Some(matched_error_radius(smallest, config.counts.ccrns));
                config.csi.psi_c = Some(psi);
                config.csi.error_sampling = ErrorSampling::Adversarial;
            }
            Figure::Fig8 => {
                if config.csi.model != CsiKind::Statistical
                    || config.csi.violation_probability.is_none()
                {
                    config.csi.violation_probability = Some(vec![FIG8_VIOLATION; j]);
                }
                config.csi.model = CsiKind::Statistical;
            }
            _ => {}
        }
        if !matches!(self, Figure::Fig7) && config.csi.model == CsiKind::Erroneous {
            config.csi.model = CsiKind::Perfect;
        }
        if !matches!(self, Figure::Fig8) && config.csi.model == CsiKind::Statistical {
            config.csi.model = CsiKind::Perfect;
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                format!("unknown figure {s:?} (expected fig3, fig5, fig6, fig7, fig8 or fig9)")
            })
    }
}
