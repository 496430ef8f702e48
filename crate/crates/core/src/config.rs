//! Scenario configuration in TOML.
//!
//! The document has flat sections; every key is listed in the guide's
//! configuration chapter. Parsing reports all violations at once, each with
//! its key path.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::beamforming::Regularization;
use crate::channel::{mean_primary_gains, CsiModel, ErrorSampling, FadingSpec};
use crate::design::Method;
use crate::geometry::{
    compute_correlations, compute_delays, CorrelationSet, Point, Topology, SPEED_OF_LIGHT,
};
use crate::selection::DEFAULT_SELECTION_LIMIT;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Every violation found in a configuration document.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigErrors(pub Vec<ConfigError>);

impl ConfigErrors {
    pub fn paths(&self) -> Vec<&str> {
        self.0.iter().map(|e| e.path.as_str()).collect()
    }
}

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} configuration error(s)", self.0.len())?;
        for e in &self.0 {
            write!(f, "\n  {e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologySection {
    pub ccrns: Vec<Point>,
    pub destinations: Vec<Point>,
    pub primaries: Vec<Point>,
    pub propagation_speed: f64,
    /// Destination at which the CCRNs align their transmissions.
    pub reference_destination: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountsSection {
    pub primaries: usize,
    pub destinations: usize,
    pub ccrns: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingSection {
    pub symbol_duration: f64,
    pub slot_duration: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSection {
    pub path_loss_exponent: f64,
    pub reference_distance: f64,
    pub reference_gain_db: f64,
    pub noise_power_db: f64,
    /// Primary-transmitter interference at each destination, in dB above
    /// the noise power.
    pub pu_interference_db: Vec<f64>,
    /// Sweep grid of the symbol power `P`.
    pub symbol_power_db: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterferenceSection {
    pub thresholds: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveSection {
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CsiKind {
    Perfect,
    Erroneous,
    Statistical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsiSection {
    pub model: CsiKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi_c: Option<Vec<f64>>,
    pub error_sampling: ErrorSampling,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation_probability: Option<Vec<f64>>,
    /// Mean primary-link power gains, `J` rows of `L`; derived from path
    /// loss when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<Vec<f64>>>,
}

/// Explicit correlation tensors replacing the geometric overlap model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSection {
    /// `[J][K][L][L]`
    pub primary: Vec<Vec<Vec<Vec<f64>>>>,
    /// `[K][K][L][L]`
    pub destination: Vec<Vec<Vec<Vec<f64>>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodsSection {
    pub enabled: Vec<Method>,
    pub zfbf_beam_power_db: f64,
    pub regularization: f64,
    pub selection_limit: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSection {
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub topology: TopologySection,
    pub counts: CountsSection,
    pub timing: TimingSection,
    pub channel: ChannelSection,
    pub interference: InterferenceSection,
    pub objective: ObjectiveSection,
    pub csi: CsiSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correlation: Option<CorrelationSection>,
    pub methods: MethodsSection,
    pub campaign: CampaignSection,
}

const SECTIONS: &[(&str, &[&str])] = &[
    (
        "topology",
        &[
            "ccrns",
            "destinations",
            "primaries",
            "propagation_speed",
            "reference_destination",
        ],
    ),
    ("counts", &["primaries", "destinations", "ccrns"]),
    ("timing", &["symbol_duration", "slot_duration"]),
    (
        "channel",
        &[
            "path_loss_exponent",
            "reference_distance",
            "reference_gain_db",
            "noise_power_db",
            "pu_interference_db",
            "symbol_power_db",
        ],
    ),
    ("interference", &["thresholds"]),
    ("objective", &["weights"]),
    (
        "csi",
        &[
            "model",
            "epsilon",
            "psi_c",
            "error_sampling",
            "violation_probability",
            "omega",
        ],
    ),
    ("correlation", &["primary", "destination"]),
    (
        "methods",
        &[
            "enabled",
            "zfbf_beam_power_db",
            "regularization",
            "selection_limit",
        ],
    ),
    ("campaign", &["trials", "seed"]),
];

struct Reader<'a> {
    root: &'a Table,
    errors: Vec<ConfigError>,
}

impl<'a> Reader<'a> {
    fn error(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.errors.push(ConfigError {
            path: path.into(),
            message: message.into(),
        });
    }

    fn lookup(&self, section: &str, key: &str) -> Option<&'a Value> {
        self.root.get(section)?.as_table()?.get(key)
    }

    fn typed<T: serde::de::DeserializeOwned>(
        &mut self,
        section: &str,
        key: &str,
        required: bool,
    ) -> Option<T> {
        let path = format!("{section}.{key}");
        match self.lookup(section, key) {
            None => {
                if required {
                    self.error(path, "missing key");
                }
                None
            }
            Some(v) => match v.clone().try_into::<T>() {
                Ok(t) => Some(t),
                Err(e) => {
                    self.error(path, format!("invalid value: {}", e.message().trim()));
                    None
                }
            },
        }
    }

    fn required<T: serde::de::DeserializeOwned>(&mut self, section: &str, key: &str) -> Option<T> {
        self.typed(section, key, true)
    }

    fn optional<T: serde::de::DeserializeOwned>(&mut self, section: &str, key: &str) -> Option<T> {
        self.typed(section, key, false)
    }

    fn check_len<T>(
        &mut self,
        path: &str,
        list: &Option<Vec<T>>,
        expected: Option<usize>,
        what: &str,
    ) {
        if let (Some(list), Some(n)) = (list, expected) {
            if list.len() != n {
                self.error(
                    path,
                    format!("dimension mismatch: {} entries for {n} {what}", list.len()),
                );
            }
        }
    }

    fn check_positive(&mut self, path: &str, value: Option<f64>) {
        if let Some(v) = value {
            if !(v > 0.0 && v.is_finite()) {
                self.error(path, format!("must be positive, got {v}"));
            }
        }
    }

    fn check_finite(&mut self, path: &str, values: &[f64]) {
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            self.error(path, format!("must be finite, got {v}"));
        }
    }
}

fn tensor_shape(t: &[Vec<Vec<Vec<f64>>>], a: usize, b: usize, l: usize) -> bool {
    t.len() == a
        && t.iter().all(|row| {
            row.len() == b
                && row
                    .iter()
                    .all(|m| m.len() == l && m.iter().all(|r| r.len() == l))
        })
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigErrors> {
    let root: Table = text.parse().map_err(|e: toml::de::Error| {
        ConfigErrors(vec![ConfigError {
            path: "<document>".into(),
            message: e.message().trim().to_string(),
        }])
    })?;
    let mut r = Reader {
        root: &root,
        errors: Vec::new(),
    };

    for (name, value) in &root {
        match SECTIONS.iter().find(|(s, _)| s == name) {
            None => r.error(name.clone(), "unknown section"),
            Some((_, keys)) => match value.as_table() {
                None => r.error(name.clone(), "expected a section"),
                Some(table) => {
                    for key in table.keys() {
                        if !keys.contains(&key.as_str()) {
                            r.error(format!("{name}.{key}"), "unknown key");
                        }
                    }
                }
            },
        }
    }

    let ccrns: Option<Vec<Point>> = r.required("topology", "ccrns");
    let destinations: Option<Vec<Point>> = r.required("topology", "destinations");
    let primaries: Option<Vec<Point>> = r.required("topology", "primaries");
    let propagation_speed = r
        .optional("topology", "propagation_speed")
        .unwrap_or(SPEED_OF_LIGHT);
    let reference_destination: usize = r.optional("topology", "reference_destination").unwrap_or(0);
    r.check_positive("topology.propagation_speed", Some(propagation_speed));

    let j: Option<usize> = r.required("counts", "primaries");
    let k: Option<usize> = r.required("counts", "destinations");
    let l: Option<usize> = r.required("counts", "ccrns");
    r.check_len(
        "topology.primaries",
        &primaries,
        j,
        "primary receivers (counts.primaries)",
    );
    r.check_len(
        "topology.destinations",
        &destinations,
        k,
        "destinations (counts.destinations)",
    );
    r.check_len("topology.ccrns", &ccrns, l, "CCRNs (counts.ccrns)");
    for (path, n) in [
        ("counts.primaries", j),
        ("counts.destinations", k),
        ("counts.ccrns", l),
    ] {
        if n == Some(0) {
            r.error(path, "must be at least 1");
        }
    }
    if let Some(k) = k {
        if reference_destination >= k {
            r.error(
                "topology.reference_destination",
                format!("index {reference_destination} out of range for {k} destinations"),
            );
        }
    }

    let symbol_duration: Option<f64> = r.required("timing", "symbol_duration");
    let slot_duration: Option<f64> = r.required("timing", "slot_duration");
    r.check_positive("timing.symbol_duration", symbol_duration);
    r.check_positive("timing.slot_duration", slot_duration);
    if let (Some(ts), Some(slot)) = (symbol_duration, slot_duration) {
        if ts > 0.0 && slot > 0.0 {
            let m = slot / ts;
            if m.round() < 1.0 || (m - m.round()).abs() > 1e-9 * m.max(1.0) {
                r.error(
                    "timing.slot_duration",
                    format!("non-integer symbols per slot: slot/symbol duration = {m}"),
                );
            }
        }
    }

    let path_loss_exponent = r.optional("channel", "path_loss_exponent").unwrap_or(4.0);
    let reference_distance = r.optional("channel", "reference_distance").unwrap_or(1.0);
    let reference_gain_db = r.optional("channel", "reference_gain_db").unwrap_or(0.0);
    let noise_power_db: Option<f64> = r.required("channel", "noise_power_db");
    let pu_interference_db: Option<Vec<f64>> = r.required("channel", "pu_interference_db");
    let symbol_power_db: Vec<f64> = r
        .optional("channel", "symbol_power_db")
        .unwrap_or_else(|| vec![0.0]);
    r.check_positive("channel.path_loss_exponent", Some(path_loss_exponent));
    r.check_positive("channel.reference_distance", Some(reference_distance));
    r.check_finite("channel.reference_gain_db", &[reference_gain_db]);
    r.check_finite(
        "channel.noise_power_db",
        &noise_power_db.into_iter().collect::<Vec<_>>(),
    );
    r.check_len(
        "channel.pu_interference_db",
        &pu_interference_db,
        k,
        "destinations",
    );
    if let Some(pu) = &pu_interference_db {
        r.check_finite("channel.pu_interference_db", pu);
    }
    if symbol_power_db.is_empty() {
        r.error("channel.symbol_power_db", "sweep grid is empty");
    }
    r.check_finite("channel.symbol_power_db", &symbol_power_db);

    let thresholds: Option<Vec<f64>> = r.required("interference", "thresholds");
    r.check_len(
        "interference.thresholds",
        &thresholds,
        j,
        "primary receivers",
    );
    if let Some(t) = &thresholds {
        for (i, g) in t.iter().enumerate() {
            if !(*g > 0.0 && g.is_finite()) {
                r.error(
                    format!("interference.thresholds[{i}]"),
                    format!("non-positive threshold {g}"),
                );
            }
        }
    }

    let weights: Option<Vec<f64>> = r.required("objective", "weights");
    r.check_len("objective.weights", &weights, k, "destinations");
    if let Some(w) = &weights {
        if w.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            r.error("objective.weights", "weights must be positive");
        }
    }

    let model: CsiKind = r.optional("csi", "model").unwrap_or(CsiKind::Perfect);
    let epsilon: Option<f64> = r.optional("csi", "epsilon");
    let psi_c: Option<Vec<f64>> = r.optional("csi", "psi_c");
    let error_sampling = r
        .optional("csi", "error_sampling")
        .unwrap_or(ErrorSampling::UniformBall);
    let violation_probability: Option<Vec<f64>> = r.optional("csi", "violation_probability");
    let omega: Option<Vec<Vec<f64>>> = r.optional("csi", "omega");
    match model {
        CsiKind::Perfect => {}
        CsiKind::Erroneous => {
            match epsilon {
                None => r.error(
                    "csi.epsilon",
                    "missing key (required by the erroneous model)",
                ),
                Some(e) if !(e >= 0.0 && e.is_finite()) => {
                    r.error("csi.epsilon", format!("must be >= 0, got {e}"))
                }
                _ => {}
            }
            if psi_c.is_none() {
                r.error("csi.psi_c", "missing key (required by the erroneous model)");
            }
        }
        CsiKind::Statistical => {
            if violation_probability.is_none() {
                r.error(
                    "csi.violation_probability",
                    "missing key (required by the statistical model)",
                );
            }
        }
    }
    r.check_len("csi.psi_c", &psi_c, j, "primary receivers");
    if psi_c
        .as_ref()
        .is_some_and(|p| p.iter().any(|p| !(*p >= 0.0 && p.is_finite())))
    {
        r.error("csi.psi_c", "entries must be >= 0");
    }
    r.check_len(
        "csi.violation_probability",
        &violation_probability,
        j,
        "primary receivers",
    );
    if violation_probability
        .as_ref()
        .is_some_and(|p| p.iter().any(|p| !(*p > 0.0 && *p <= 1.0)))
    {
        r.error("csi.violation_probability", "entries must lie in (0, 1]");
    }
    r.check_len("csi.omega", &omega, j, "primary receivers");
    if let (Some(om), Some(l)) = (&omega, l) {
        if om.iter().any(|row| row.len() != l) {
            r.error(
                "csi.omega",
                format!("dimension mismatch: every row needs {l} entries"),
            );
        } else if om.iter().flatten().any(|v| !(*v >= 0.0 && v.is_finite())) {
            r.error("csi.omega", "entries must be >= 0");
        }
    }

    let correlation = if root.contains_key("correlation") {
        let primary: Option<Vec<Vec<Vec<Vec<f64>>>>> = r.required("correlation", "primary");
        let destination: Option<Vec<Vec<Vec<Vec<f64>>>>> = r.required("correlation", "destination");
        if let (Some(j), Some(k), Some(l)) = (j, k, l) {
            if primary.as_ref().is_some_and(|t| !tensor_shape(t, j, k, l)) {
                r.error(
                    "correlation.primary",
                    format!("dimension mismatch: expected [{j}][{k}][{l}][{l}]"),
                );
            }
            if destination
                .as_ref()
                .is_some_and(|t| !tensor_shape(t, k, k, l))
            {
                r.error(
                    "correlation.destination",
                    format!("dimension mismatch: expected [{k}][{k}][{l}][{l}]"),
                );
            }
        }
        primary
            .zip(destination)
            .map(|(primary, destination)| CorrelationSection {
                primary,
                destination,
            })
    } else {
        None
    };

    let enabled: Option<Vec<Method>> = r.required("methods", "enabled");
    if enabled.as_ref().is_some_and(|e| e.is_empty()) {
        r.error("methods.enabled", "no methods enabled");
    }
    let enabled = enabled.unwrap_or_default();
    for m in &enabled {
        let needs = match m {
            Method::RobustErroneous => Some(CsiKind::Erroneous),
            Method::RobustStatistical => Some(CsiKind::Statistical),
            _ if model == CsiKind::Statistical => {
                r.error(
                    "methods.enabled",
                    format!("{m} needs instantaneous primary channels, unavailable under statistical CSI"),
                );
                None
            }
            _ => None,
        };
        if let Some(kind) = needs {
            if kind != model {
                r.error(
                    "methods.enabled",
                    format!("{m} requires csi.model = {:?}", kind_name(kind)),
                );
            }
        }
    }
    let mut sorted = enabled.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != enabled.len() {
        r.error("methods.enabled", "duplicate method");
    }
    let zfbf_beam_power_db = r.optional("methods", "zfbf_beam_power_db").unwrap_or(0.0);
    let regularization = r
        .optional("methods", "regularization")
        .unwrap_or(Regularization::default().0);
    let selection_limit = r
        .optional("methods", "selection_limit")
        .unwrap_or(DEFAULT_SELECTION_LIMIT);
    r.check_finite("methods.zfbf_beam_power_db", &[zfbf_beam_power_db]);
    if !(regularization >= 0.0 && regularization.is_finite()) {
        r.error(
            "methods.regularization",
            format!("must be >= 0, got {regularization}"),
        );
    }
    if enabled.contains(&Method::Selection) {
        if let Some(l) = l {
            if l > selection_limit {
                r.error(
                    "methods.selection_limit",
                    format!("{l} CCRNs exceed the exhaustive-search limit {selection_limit}"),
                );
            }
        }
    }

    let trials: Option<usize> = r.required("campaign", "trials");
    let seed: u64 = r.optional("campaign", "seed").unwrap_or(0);
    if trials == Some(0) {
        r.error("campaign.trials", "must be at least 1");
    }
    if seed > i64::MAX as u64 {
        r.error("campaign.seed", "must fit in a signed 64-bit integer");
    }

    // Geometry errors (coincident nodes) only surface once everything parses.
    if r.errors.is_empty() {
        let topology = Topology::new(
            ccrns.clone().unwrap_or_default(),
            destinations.clone().unwrap_or_default(),
            primaries.clone().unwrap_or_default(),
            propagation_speed,
        );
        if let Err(e) = topology {
            r.error("topology", e.to_string());
        }
    }

    if !r.errors.is_empty() {
        return Err(ConfigErrors(r.errors));
    }
    let missing = "validated above";
    Ok(ScenarioConfig {
        topology: TopologySection {
            ccrns: ccrns.expect(missing),
            destinations: destinations.expect(missing),
            primaries: primaries.expect(missing),
            propagation_speed,
            reference_destination,
        },
        counts: CountsSection {
            primaries: j.expect(missing),
            destinations: k.expect(missing),
            ccrns: l.expect(missing),
        },
        timing: TimingSection {
            symbol_duration: symbol_duration.expect(missing),
            slot_duration: slot_duration.expect(missing),
        },
        channel: ChannelSection {
            path_loss_exponent,
            reference_distance,
            reference_gain_db,
            noise_power_db: noise_power_db.expect(missing),
            pu_interference_db: pu_interference_db.expect(missing),
            symbol_power_db,
        },
        interference: InterferenceSection {
            thresholds: thresholds.expect(missing),
        },
        objective: ObjectiveSection {
            weights: weights.expect(missing),
        },
        csi: CsiSection {
            model,
            epsilon,
            psi_c,
            error_sampling,
            violation_probability,
            omega,
        },
        correlation,
        methods: MethodsSection {
            enabled,
            zfbf_beam_power_db,
            regularization,
            selection_limit,
        },
        campaign: CampaignSection {
            trials: trials.expect(missing),
            seed,
        },
    })
}

fn kind_name(kind: CsiKind) -> &'static str {
    match kind {
        CsiKind::Perfect => "perfect",
        CsiKind::Erroneous => "erroneous",
        CsiKind::Statistical => "statistical",
    }
}

fn db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

impl ScenarioConfig {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration values are always representable")
    }

    pub fn topology(&self) -> Topology {
        Topology::new(
            self.topology.ccrns.clone(),
            self.topology.destinations.clone(),
            self.topology.primaries.clone(),
            self.topology.propagation_speed,
        )
        .expect("validated topology")
    }

    /// Symbols per slot.
    pub fn symbols_per_slot(&self) -> usize {
        (self.timing.slot_duration / self.timing.symbol_duration).round() as usize
    }

    pub fn fading(&self) -> FadingSpec {
        FadingSpec {
            path_loss_exponent: self.channel.path_loss_exponent,
            reference_distance: self.channel.reference_distance,
            reference_gain: db(self.channel.reference_gain_db),
        }
    }

    /// Noise plus primary-transmitter interference power at each destination.
    pub fn noise_powers(&self) -> Vec<f64> {
        let n0 = db(self.channel.noise_power_db);
        self.channel
            .pu_interference_db
            .iter()
            .map(|&pu| n0 * (1.0 + db(pu)))
            .collect()
    }

    pub fn symbol_powers(&self) -> Vec<f64> {
        self.channel
            .symbol_power_db
            .iter()
            .map(|&p| db(p))
            .collect()
    }

    /// Power per beam of the zero-forcing baseline at symbol power `p`.
    pub fn zfbf_beam_power(&self, symbol_power: f64) -> f64 {
        symbol_power * db(self.methods.zfbf_beam_power_db)
    }

    pub fn regularization(&self) -> Regularization {
        Regularization(self.methods.regularization)
    }

    pub fn correlations(&self) -> crate::Result<CorrelationSet> {
        match &self.correlation {
            Some(c) => {
                let convert = |t: &Vec<Vec<Vec<Vec<f64>>>>| {
                    t.iter()
                        .map(|row| {
                            row.iter()
                                .map(|m| DMatrix::from_fn(m.len(), m.len(), |a, b| m[a][b]))
                                .collect()
                        })
                        .collect()
                };
                CorrelationSet::from_tensors(
                    convert(&c.primary),
                    convert(&c.destination),
                    self.timing.symbol_duration,
                )
            }
            None => compute_correlations(
                &compute_delays(&self.topology()),
                self.topology.reference_destination,
                self.timing.symbol_duration,
            ),
        }
    }

    /// Mean primary-link gains: configured, else from path loss.
    pub fn omega(&self) -> DMatrix<f64> {
        match &self.csi.omega {
            Some(rows) => DMatrix::from_fn(rows.len(), self.counts.ccrns, |j, r| rows[j][r]),
            None => mean_primary_gains(&self.topology(), &self.fading()),
        }
    }

    pub fn csi_model(&self) -> CsiModel {
        match self.csi.model {
            CsiKind::Perfect => CsiModel::Perfect,
            CsiKind::Erroneous => CsiModel::Erroneous {
                epsilon: self.csi.epsilon.unwrap_or(0.0),
                psi_c: self.csi.psi_c.clone().unwrap_or_default(),
            },
            CsiKind::Statistical => CsiModel::Statistical {
                omega: self.omega(),
                epsilon_violation: self.csi.violation_probability.clone().unwrap_or_default(),
            },
        }
    }
}

/// The reference scenario: two primary receivers, three destinations and
/// four CCRNs.
pub const REFERENCE_CONFIG: &str = include_str!("../../../configs/reference.toml");

pub fn reference_config() -> ScenarioConfig {
    parse_config(REFERENCE_CONFIG).expect("the bundled reference configuration is valid")
}
