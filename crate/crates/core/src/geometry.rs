//! Node placement, propagation delays and asynchronous-symbol correlation.
//!
//! Every CCRN applies a timing advance so that its symbols reach one
//! *reference* secondary destination simultaneously. At any other receiver
//! the copies arrive with residual offsets, and two rectangular symbol
//! streams shifted by `d` overlap by the fraction `max(0, 1 - |d| / T_s)`.
//! That fraction is the correlation coefficient `beta` weighting each
//! entry of the interference covariance matrices.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A planar position in meters.
pub type Point = [f64; 2];

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// A receiving node: primary receiver `j` or secondary destination `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Receiver {
    Primary(usize),
    Destination(usize),
}

impl std::fmt::Display for Receiver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Receiver::Primary(j) => write!(f, "primary {j}"),
            Receiver::Destination(k) => write!(f, "destination {k}"),
        }
    }
}

/// Positions of the CCRNs, secondary destinations and primary receivers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    ccrns: Vec<Point>,
    destinations: Vec<Point>,
    primaries: Vec<Point>,
    propagation_speed: f64,
}

impl Topology {
    pub fn new(
        ccrns: Vec<Point>,
        destinations: Vec<Point>,
        primaries: Vec<Point>,
        propagation_speed: f64,
    ) -> Result<Self> {
        if ccrns.is_empty() || destinations.is_empty() || primaries.is_empty() {
            return Err(Error::InvalidTopology(format!(
                "need at least one of each node type (L = {}, K = {}, J = {})",
                ccrns.len(),
                destinations.len(),
                primaries.len()
            )));
        }
        if !(propagation_speed > 0.0 && propagation_speed.is_finite()) {
            return Err(Error::InvalidTopology(format!(
                "propagation speed must be positive, got {propagation_speed}"
            )));
        }
        let all = ccrns.iter().chain(&destinations).chain(&primaries);
        if let Some(p) = all
            .into_iter()
            .find(|p| !(p[0].is_finite() && p[1].is_finite()))
        {
            return Err(Error::InvalidTopology(format!(
                "non-finite coordinate {p:?}"
            )));
        }
        let topology = Self {
            ccrns,
            destinations,
            primaries,
            propagation_speed,
        };
        for r in 0..topology.num_ccrns() {
            for v in topology.receivers() {
                let d = topology.distance(v, r);
                if d <= 0.0 {
                    return Err(Error::InvalidTopology(format!(
                        "CCRN {r} coincides with {v}"
                    )));
                }
            }
        }
        Ok(topology)
    }

    /// Number of CCRNs, `L`.
    pub fn num_ccrns(&self) -> usize {
        self.ccrns.len()
    }

    /// Number of secondary destinations, `K`.
    pub fn num_destinations(&self) -> usize {
        self.destinations.len()
    }

    /// Number of primary receivers, `J`.
    pub fn num_primaries(&self) -> usize {
        self.primaries.len()
    }

    pub fn ccrns(&self) -> &[Point] {
        &self.ccrns
    }

    pub fn destinations(&self) -> &[Point] {
        &self.destinations
    }

    pub fn primaries(&self) -> &[Point] {
        &self.primaries
    }

    pub fn propagation_speed(&self) -> f64 {
        self.propagation_speed
    }

    /// All receivers, primaries first.
    pub fn receivers(&self) -> impl Iterator<Item = Receiver> + '_ {
        (0..self.num_primaries())
            .map(Receiver::Primary)
            .chain((0..self.num_destinations()).map(Receiver::Destination))
    }

    pub fn position(&self, receiver: Receiver) -> Point {
        match receiver {
            Receiver::Primary(j) => self.primaries[j],
            Receiver::Destination(k) => self.destinations[k],
        }
    }

    /// Euclidean distance from CCRN `ccrn` to `receiver`.
    pub fn distance(&self, receiver: Receiver, ccrn: usize) -> f64 {
        let a = self.position(receiver);
        let b = self.ccrns[ccrn];
        (a[0] - b[0]).hypot(a[1] - b[1])
    }

    /// Applies `f` to every coordinate. Used for rigid-motion checks.
    pub fn map_points(&self, f: impl Fn(Point) -> Point) -> Result<Self> {
        Self::new(
            self.ccrns.iter().copied().map(&f).collect(),
            self.destinations.iter().copied().map(&f).collect(),
            self.primaries.iter().copied().map(&f).collect(),
            self.propagation_speed,
        )
    }
}

/// Propagation delays in seconds, one row per receiver (primaries first,
/// then destinations) and one column per CCRN.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayTable {
    tau: DMatrix<f64>,
    primaries: usize,
}

impl DelayTable {
    pub fn num_ccrns(&self) -> usize {
        self.tau.ncols()
    }

    pub fn num_primaries(&self) -> usize {
        self.primaries
    }

    pub fn num_destinations(&self) -> usize {
        self.tau.nrows() - self.primaries
    }

    /// The full `(J + K) x L` table.
    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.tau
    }

    fn row(&self, receiver: Receiver) -> usize {
        match receiver {
            Receiver::Primary(j) => j,
            Receiver::Destination(k) => self.primaries + k,
        }
    }

    pub fn delay(&self, receiver: Receiver, ccrn: usize) -> f64 {
        self.tau[(self.row(receiver), ccrn)]
    }

    /// Arrival time of each CCRN's symbols at `receiver` after the timing
    /// advance that aligns them at `reference`.
    pub fn arrival_offsets(&self, receiver: Receiver, reference: usize) -> Vec<f64> {
        (0..self.num_ccrns())
            .map(|r| self.delay(receiver, r) - self.delay(Receiver::Destination(reference), r))
            .collect()
    }
}

/// Computes `tau = distance / propagation_speed` for every receiver and CCRN.
pub fn compute_delays(topology: &Topology) -> DelayTable {
    let receivers: Vec<Receiver> = topology.receivers().collect();
    let tau = DMatrix::from_fn(receivers.len(), topology.num_ccrns(), |v, r| {
        topology.distance(receivers[v], r) / topology.propagation_speed()
    });
    DelayTable {
        tau,
        primaries: topology.num_primaries(),
    }
}

/// Fraction of a rectangular symbol that overlaps a copy shifted by `offset`.
pub fn overlap_coefficient(offset: f64, symbol_duration: f64) -> f64 {
    (1.0 - offset.abs() / symbol_duration).max(0.0)
}

/// Correlation coefficients at primary receivers and secondary destinations.
///
/// `primary[j][k]` is the `L x L` matrix of `beta` at primary `j` for the
/// beam serving destination `k`. `destination[v][k]` is the matrix at
/// destination `v` for beam `k`; the diagonal blocks `v == k` are unused and
/// stored as all-ones.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSet {
    pub primary: Vec<Vec<DMatrix<f64>>>,
    pub destination: Vec<Vec<DMatrix<f64>>>,
    pub symbol_duration: f64,
}

impl CorrelationSet {
    /// Builds a set from explicit tensors, checking range, symmetry and
    /// diagonal invariants.
    pub fn from_tensors(
        primary: Vec<Vec<DMatrix<f64>>>,
        destination: Vec<Vec<DMatrix<f64>>>,
        symbol_duration: f64,
    ) -> Result<Self> {
        if !(symbol_duration > 0.0) {
            return Err(Error::NonPositiveSymbolDuration(symbol_duration));
        }
        let set = Self {
            primary,
            destination,
            symbol_duration,
        };
        set.validate()?;
        Ok(set)
    }

    /// Every coefficient equal to one: the synchronous limit.
    pub fn synchronous(primaries: usize, destinations: usize, ccrns: usize) -> Self {
        Self::filled(primaries, destinations, ccrns, |_, _| 1.0)
    }

    /// Identity coefficient matrices: fully incoherent arrivals.
    pub fn incoherent(primaries: usize, destinations: usize, ccrns: usize) -> Self {
        Self::filled(primaries, destinations, ccrns, |r, f| {
            if r == f {
                1.0
            } else {
                0.0
            }
        })
    }

    fn filled(
        primaries: usize,
        destinations: usize,
        ccrns: usize,
        entry: impl Fn(usize, usize) -> f64 + Copy,
    ) -> Self {
        let block = || DMatrix::from_fn(ccrns, ccrns, entry);
        Self {
            primary: (0..primaries)
                .map(|_| (0..destinations).map(|_| block()).collect())
                .collect(),
            destination: (0..destinations)
                .map(|_| (0..destinations).map(|_| block()).collect())
                .collect(),
            symbol_duration: 1.0,
        }
    }

    pub fn num_primaries(&self) -> usize {
        self.primary.len()
    }

    pub fn num_destinations(&self) -> usize {
        self.destination.len()
    }

    pub fn num_ccrns(&self) -> usize {
        self.primary
            .first()
            .and_then(|row| row.first())
            .map_or(0, |m| m.nrows())
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.destination.len();
        let l = self.num_ccrns();
        if self.primary.is_empty() || k == 0 || l == 0 {
            return Err(Error::InvalidCorrelation("empty tensor".into()));
        }
        let blocks = self
            .primary
            .iter()
            .enumerate()
            .flat_map(|(j, row)| {
                row.iter()
                    .enumerate()
                    .map(move |(b, m)| (Receiver::Primary(j), b, m, row.len()))
            })
            .chain(self.destination.iter().enumerate().flat_map(|(v, row)| {
                row.iter()
                    .enumerate()
                    .map(move |(b, m)| (Receiver::Destination(v), b, m, row.len()))
            }));
        for (receiver, beam, m, beams) in blocks {
            if beams != k {
                return Err(Error::InvalidCorrelation(format!(
                    "{receiver} has {beams} beams, expected {k}"
                )));
            }
            if m.nrows() != l || m.ncols() != l {
                return Err(Error::InvalidCorrelation(format!(
                    "{receiver}, beam {beam}: block is {}x{}, expected {l}x{l}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            for r in 0..l {
                if m[(r, r)] != 1.0 {
                    return Err(Error::InvalidCorrelation(format!(
                        "{receiver}, beam {beam}: diagonal entry ({r},{r}) is {}",
                        m[(r, r)]
                    )));
                }
                for f in 0..l {
                    let b = m[(r, f)];
                    if !(0.0..=1.0).contains(&b) {
                        return Err(Error::InvalidCorrelation(format!(
                            "{receiver}, beam {beam}: entry ({r},{f}) = {b} outside [0, 1]"
                        )));
                    }
                    if b != m[(f, r)] {
                        return Err(Error::InvalidCorrelation(format!(
                            "{receiver}, beam {beam}: entries ({r},{f}) and ({f},{r}) differ"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn overlap_matrix(offsets: &[f64], symbol_duration: f64) -> DMatrix<f64> {
    let l = offsets.len();
    DMatrix::from_fn(l, l, |r, f| {
        if r == f {
            1.0
        } else {
            overlap_coefficient(offsets[r] - offsets[f], symbol_duration)
        }
    })
}

/// Correlation coefficients under the rectangular-pulse overlap model, with
/// all CCRNs time-advanced to align at destination `reference`.
pub fn compute_correlations(
    delays: &DelayTable,
    reference: usize,
    symbol_duration: f64,
) -> Result<CorrelationSet> {
    if !(symbol_duration > 0.0 && symbol_duration.is_finite()) {
        return Err(Error::NonPositiveSymbolDuration(symbol_duration));
    }
    let k = delays.num_destinations();
    if reference >= k {
        return Err(Error::BadReference {
            index: reference,
            count: k,
        });
    }
    // The timing advance is common to all beams, so every beam sees the same
    // offsets at a given receiver.
    let at = |receiver| {
        overlap_matrix(
            &delays.arrival_offsets(receiver, reference),
            symbol_duration,
        )
    };
    let primary = (0..delays.num_primaries())
        .map(|j| {
            let m = at(Receiver::Primary(j));
            vec![m; k]
        })
        .collect();
    let destination = (0..k)
        .map(|v| {
            let m = at(Receiver::Destination(v));
            vec![m; k]
        })
        .collect();
    Ok(CorrelationSet {
        primary,
        destination,
        symbol_duration,
    })
}
