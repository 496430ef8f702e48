//! Fading realizations, CSI models and the interference covariance matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CorrelationSet, Receiver, Topology};

pub type C64 = Complex64;
pub type CVector = DVector<C64>;
pub type CMatrix = DMatrix<C64>;

/// Log-distance path loss: mean power gain `reference_gain * (d / reference_distance)^-exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FadingSpec {
    pub path_loss_exponent: f64,
    pub reference_distance: f64,
    pub reference_gain: f64,
}

impl Default for FadingSpec {
    fn default() -> Self {
        Self {
            path_loss_exponent: 4.0,
            reference_distance: 1.0,
            reference_gain: 1.0,
        }
    }
}

impl FadingSpec {
    pub fn mean_power_gain(&self, distance: f64) -> f64 {
        self.reference_gain * (distance / self.reference_distance).powf(-self.path_loss_exponent)
    }
}

/// Channel gains from the `L` CCRNs plus the receiver-side powers.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// `K x L`; row `k` is the channel to destination `k`.
    pub h_s: CMatrix,
    /// `J x L`; row `j` is the channel to primary receiver `j`.
    pub h_p: CMatrix,
    /// Noise plus primary-transmitter interference power per destination.
    pub noise: Vec<f64>,
    /// Symbol power `P`.
    pub symbol_power: f64,
}

impl ChannelRealization {
    pub fn new(h_s: CMatrix, h_p: CMatrix, noise: Vec<f64>, symbol_power: f64) -> Result<Self> {
        if h_s.ncols() != h_p.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "secondary channels have {} CCRNs, primary channels {}",
                h_s.ncols(),
                h_p.ncols()
            )));
        }
        if noise.len() != h_s.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "{} noise powers for {} destinations",
                noise.len(),
                h_s.nrows()
            )));
        }
        if let Some(s) = noise.iter().find(|&&s| !(s > 0.0)) {
            return Err(Error::DimensionMismatch(format!(
                "noise power must be positive, got {s}"
            )));
        }
        if !(symbol_power > 0.0) {
            return Err(Error::DimensionMismatch(format!(
                "symbol power must be positive, got {symbol_power}"
            )));
        }
        Ok(Self {
            h_s,
            h_p,
            noise,
            symbol_power,
        })
    }

    pub fn num_ccrns(&self) -> usize {
        self.h_s.ncols()
    }

    pub fn num_destinations(&self) -> usize {
        self.h_s.nrows()
    }

    pub fn num_primaries(&self) -> usize {
        self.h_p.nrows()
    }

    /// Channel row to destination `k` as a column vector (not conjugated).
    pub fn destination(&self, k: usize) -> CVector {
        self.h_s.row(k).transpose()
    }

    pub fn primary(&self, j: usize) -> CVector {
        self.h_p.row(j).transpose()
    }

    /// Keeps only the CCRN columns listed in `ccrns`.
    pub fn restrict(&self, ccrns: &[usize]) -> Self {
        Self {
            h_s: self.h_s.select_columns(ccrns),
            h_p: self.h_p.select_columns(ccrns),
            noise: self.noise.clone(),
            symbol_power: self.symbol_power,
        }
    }
}

/// What the CCRNs know about the primary links.
#[derive(Debug, Clone, PartialEq)]
pub enum CsiModel {
    Perfect,
    /// Estimates within `||e_j||^2 <= epsilon`; `psi_c[j]` bounds the
    /// Cholesky-factor error at primary `j`.
    Erroneous {
        epsilon: f64,
        psi_c: Vec<f64>,
    },
    /// Only mean fading power gains `omega` (`J x L`) and per-primary
    /// violation probabilities are known.
    Statistical {
        omega: DMatrix<f64>,
        epsilon_violation: Vec<f64>,
    },
}

impl CsiModel {
    pub fn validate(&self, primaries: usize, ccrns: usize) -> Result<()> {
        match self {
            CsiModel::Perfect => Ok(()),
            CsiModel::Erroneous { epsilon, psi_c } => {
                if !(*epsilon >= 0.0) {
                    return Err(Error::InvalidCsiModel(format!(
                        "epsilon must be >= 0, got {epsilon}"
                    )));
                }
                if psi_c.len() != primaries || psi_c.iter().any(|p| !(*p >= 0.0)) {
                    return Err(Error::InvalidCsiModel(format!(
                        "need {primaries} non-negative psi_c bounds, got {psi_c:?}"
                    )));
                }
                Ok(())
            }
            CsiModel::Statistical {
                omega,
                epsilon_violation,
            } => {
                if omega.nrows() != primaries || omega.ncols() != ccrns {
                    return Err(Error::InvalidCsiModel(format!(
                        "omega is {}x{}, expected {primaries}x{ccrns}",
                        omega.nrows(),
                        omega.ncols()
                    )));
                }
                if omega.iter().any(|w| !(*w > 0.0)) {
                    return Err(Error::InvalidCsiModel(
                        "omega entries must be positive".into(),
                    ));
                }
                if epsilon_violation.len() != primaries
                    || epsilon_violation.iter().any(|e| !(*e > 0.0 && *e <= 1.0))
                {
                    return Err(Error::InvalidCsiModel(format!(
                        "need {primaries} violation probabilities in (0, 1], got {epsilon_violation:?}"
                    )));
                }
                Ok(())
            }
        }
    }
}

/// How estimation errors are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorSampling {
    /// Uniform inside the ball `||e||^2 <= epsilon`.
    UniformBall,
    /// Uniform on the sphere `||e||^2 = epsilon`.
    Sphere,
    /// On the sphere, aligned with the true channel so the estimate
    /// understates every interference term.
    Adversarial,
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Draws an `n x L` block of Rayleigh gains toward the given receivers.
pub fn draw_links<R: Rng + ?Sized>(
    topology: &Topology,
    fading: &FadingSpec,
    receivers: &[Receiver],
    rng: &mut R,
) -> Result<CMatrix> {
    let l = topology.num_ccrns();
    let mut h = CMatrix::zeros(receivers.len(), l);
    for (row, &v) in receivers.iter().enumerate() {
        for r in 0..l {
            let d = topology.distance(v, r);
            if !(d > 0.0) {
                return Err(Error::NonPositiveDistance {
                    ccrn: r,
                    receiver: v.to_string(),
                    distance: d,
                });
            }
            h[(row, r)] = complex_gaussian(rng) * fading.mean_power_gain(d).sqrt();
        }
    }
    Ok(h)
}

/// One block-fading realization of every link, deterministic in `seed`.
pub fn draw_channels(
    topology: &Topology,
    fading: &FadingSpec,
    noise: &[f64],
    symbol_power: f64,
    seed: u64,
) -> Result<ChannelRealization> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    draw_channels_with(topology, fading, noise, symbol_power, &mut rng)
}

pub fn draw_channels_with<R: Rng + ?Sized>(
    topology: &Topology,
    fading: &FadingSpec,
    noise: &[f64],
    symbol_power: f64,
    rng: &mut R,
) -> Result<ChannelRealization> {
    let destinations: Vec<_> = (0..topology.num_destinations())
        .map(Receiver::Destination)
        .collect();
    let primaries: Vec<_> = (0..topology.num_primaries())
        .map(Receiver::Primary)
        .collect();
    let h_s = draw_links(topology, fading, &destinations, rng)?;
    let h_p = draw_links(topology, fading, &primaries, rng)?;
    ChannelRealization::new(h_s, h_p, noise.to_vec(), symbol_power)
}

/// Mean fading power gain of every primary link, `J x L`.
pub fn mean_primary_gains(topology: &Topology, fading: &FadingSpec) -> DMatrix<f64> {
    DMatrix::from_fn(topology.num_primaries(), topology.num_ccrns(), |j, r| {
        fading.mean_power_gain(topology.distance(Receiver::Primary(j), r))
    })
}

/// Draws an error vector with `||e||^2 <= epsilon`.
pub fn sample_error<R: Rng + ?Sized>(
    channel: &CVector,
    epsilon: f64,
    sampling: ErrorSampling,
    rng: &mut R,
) -> CVector {
    let l = channel.len();
    let radius = epsilon.sqrt();
    if radius == 0.0 {
        return CVector::zeros(l);
    }
    let direction = match sampling {
        ErrorSampling::Adversarial => {
            let norm = channel.norm();
            if norm > 0.0 {
                return channel.map(|h| h * (radius / norm));
            }
            CVector::from_fn(l, |_, _| complex_gaussian(rng))
        }
        _ => CVector::from_fn(l, |_, _| complex_gaussian(rng)),
    };
    let direction = direction.unscale(direction.norm());
    let scale = match sampling {
        // C^L is R^{2L}: radius ~ U^{1 / 2L} for a uniform ball.
        ErrorSampling::UniformBall => radius * rng.random::<f64>().powf(1.0 / (2 * l) as f64),
        _ => radius,
    };
    direction.scale(scale)
}

/// Returns the estimate `h_hat = h - e` the CCRNs see for every primary link.
pub fn perturb_channels(
    channels: &ChannelRealization,
    epsilon: f64,
    sampling: ErrorSampling,
    seed: u64,
) -> Result<ChannelRealization> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    perturb_channels_with(channels, epsilon, sampling, &mut rng)
}

pub fn perturb_channels_with<R: Rng + ?Sized>(
    channels: &ChannelRealization,
    epsilon: f64,
    sampling: ErrorSampling,
    rng: &mut R,
) -> Result<ChannelRealization> {
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidCsiModel(format!(
            "epsilon must be >= 0, got {epsilon}"
        )));
    }
    let mut estimate = channels.clone();
    for j in 0..channels.num_primaries() {
        let h = channels.primary(j);
        let e = sample_error(&h, epsilon, sampling, rng);
        estimate.h_p.set_row(j, &(h - e).transpose());
    }
    Ok(estimate)
}

/// `L x L` matrix with entry `(r, f) = beta[(r, f)] * conj(h_r) * h_f`, so that
/// `g^H M g` is the interference power of weights `g` at a receiver with
/// channel row `h`.
pub fn asynchronous_covariance(h: &CVector, beta: &DMatrix<f64>) -> CMatrix {
    CMatrix::from_fn(h.len(), h.len(), |r, f| h[r].conj() * h[f] * beta[(r, f)])
}

/// Every covariance matrix the solvers use.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceBundle {
    /// `primary[j][k]`: interference at primary `j` from beam `k`.
    pub primary: Vec<Vec<CMatrix>>,
    /// `destination[v][k]`: interference at destination `v` from beam `k`
    /// (zero when `v == k`).
    pub destination: Vec<Vec<CMatrix>>,
    /// `sum_j primary[j][k]`, per beam.
    pub primary_total: Vec<CMatrix>,
    /// `sum_{v != k} destination[v][k]`, per beam.
    pub destination_total: Vec<CMatrix>,
}

impl CovarianceBundle {
    pub fn num_primaries(&self) -> usize {
        self.primary.len()
    }

    pub fn num_destinations(&self) -> usize {
        self.primary_total.len()
    }

    /// Leakage matrix of beam `k`: primary plus cross-destination terms.
    pub fn leakage(&self, k: usize) -> CMatrix {
        &self.primary_total[k] + &self.destination_total[k]
    }

    /// Replaces the primary-receiver matrices, e.g. with statistical ones.
    pub fn with_primary(&self, primary: Vec<Vec<CMatrix>>) -> Result<Self> {
        if primary
            .iter()
            .any(|row| row.len() != self.num_destinations())
        {
            return Err(Error::DimensionMismatch(
                "primary covariance rows must have K entries".into(),
            ));
        }
        let primary_total = aggregate_primary(&primary, self.num_destinations(), self.ccrns());
        Ok(Self {
            primary,
            primary_total,
            destination: self.destination.clone(),
            destination_total: self.destination_total.clone(),
        })
    }

    fn ccrns(&self) -> usize {
        self.primary_total.first().map_or(0, |m| m.nrows())
    }

    /// Sub-matrices over the listed CCRNs.
    pub fn restrict(&self, ccrns: &[usize]) -> Self {
        let sub = |m: &CMatrix| m.select_rows(ccrns).select_columns(ccrns);
        let nest =
            |t: &Vec<Vec<CMatrix>>| t.iter().map(|row| row.iter().map(sub).collect()).collect();
        Self {
            primary: nest(&self.primary),
            destination: nest(&self.destination),
            primary_total: self.primary_total.iter().map(sub).collect(),
            destination_total: self.destination_total.iter().map(sub).collect(),
        }
    }
}

fn aggregate_primary(primary: &[Vec<CMatrix>], beams: usize, l: usize) -> Vec<CMatrix> {
    (0..beams)
        .map(|k| {
            primary
                .iter()
                .fold(CMatrix::zeros(l, l), |acc, row| acc + &row[k])
        })
        .collect()
}

/// Assembles every primary and cross-destination covariance matrix.
pub fn build_covariances(
    channels: &ChannelRealization,
    corr: &CorrelationSet,
) -> Result<CovarianceBundle> {
    let (j_count, k_count, l) = (
        channels.num_primaries(),
        channels.num_destinations(),
        channels.num_ccrns(),
    );
    if corr.num_primaries() != j_count
        || corr.num_destinations() != k_count
        || corr.num_ccrns() != l
    {
        return Err(Error::DimensionMismatch(format!(
            "channels are J={j_count}, K={k_count}, L={l}; correlations are J={}, K={}, L={}",
            corr.num_primaries(),
            corr.num_destinations(),
            corr.num_ccrns()
        )));
    }
    let primary: Vec<Vec<CMatrix>> = (0..j_count)
        .map(|j| {
            let h = channels.primary(j);
            (0..k_count)
                .map(|k| asynchronous_covariance(&h, &corr.primary[j][k]))
                .collect()
        })
        .collect();
    let destination: Vec<Vec<CMatrix>> = (0..k_count)
        .map(|v| {
            let h = channels.destination(v);
            (0..k_count)
                .map(|k| {
                    if v == k {
                        CMatrix::zeros(l, l)
                    } else {
                        asynchronous_covariance(&h, &corr.destination[v][k])
                    }
                })
                .collect()
        })
        .collect();
    let primary_total = aggregate_primary(&primary, k_count, l);
    let destination_total = (0..k_count)
        .map(|k| {
            (0..k_count)
                .filter(|&v| v != k)
                .fold(CMatrix::zeros(l, l), |acc, v| acc + &destination[v][k])
        })
        .collect();
    Ok(CovarianceBundle {
        primary,
        destination,
        primary_total,
        destination_total,
    })
}

/// Expected primary covariances under Rayleigh fading: diagonal with entries
/// `beta[(r, r)] * omega[(j, r)]`. Cross terms vanish in expectation.
pub fn build_statistical_covariances(
    omega: &DMatrix<f64>,
    corr: &CorrelationSet,
) -> Result<Vec<Vec<CMatrix>>> {
    if omega.nrows() != corr.num_primaries() || omega.ncols() != corr.num_ccrns() {
        return Err(Error::DimensionMismatch(format!(
            "omega is {}x{}, correlations have J={} and L={}",
            omega.nrows(),
            omega.ncols(),
            corr.num_primaries(),
            corr.num_ccrns()
        )));
    }
    Ok((0..omega.nrows())
        .map(|j| {
            corr.primary[j]
                .iter()
                .map(|beta| {
                    CMatrix::from_diagonal(&DVector::from_fn(omega.ncols(), |r, _| {
                        C64::from(beta[(r, r)] * omega[(j, r)])
                    }))
                })
                .collect()
        })
        .collect())
}

/// `g^H M g`, real part (the imaginary part is round-off for Hermitian `M`).
pub fn quadratic_form(m: &CMatrix, g: &CVector) -> f64 {
    g.dotc(&(m * g)).re
}
