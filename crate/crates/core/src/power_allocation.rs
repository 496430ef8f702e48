//! Power allocation across fixed beam directions under several interference
//! caps.
//!
//! For fixed unit directions the problem is
//!
//! ```text
//! maximize   sum_k w_k log2(1 + gain_k alpha_k)
//! subject to sum_k leak[j][k] alpha_k <= cap_j   for every primary j
//!            alpha_k >= 0
//! ```
//!
//! Its KKT conditions give the cap-limited water-filling form
//! `alpha_k = max(0, w_k / sum_j lambda_j leak[j][k] - 1 / gain_k)`.
//! [`opa_allocate`] recovers the multipliers by enumerating candidate active
//! sets, smallest first; [`lcpa_allocate`] solves each constraint on its own
//! and keeps the smallest power per beam.
//!
//! Internally every problem is rescaled so that caps become 1 and powers are
//! measured in units of `1 / gain_k`, which keeps the root finding well
//! conditioned whatever the absolute power scale.

use nalgebra::{DMatrix, DVector};

use crate::beamforming::BeamDirections;
use crate::channel::{quadratic_form, CMatrix, ChannelRealization};
use crate::error::{Error, Result};

/// Equality tolerance on normalized constraint residuals inside the solver.
const SOLVE_TOLERANCE: f64 = 1e-10;
/// Slack allowed on inactive constraints when accepting an active set.
const ACCEPT_TOLERANCE: f64 = 1e-9;

/// Power allocation for fixed beam directions.
#[derive(Debug, Clone, PartialEq)]
pub struct AllocationProblem {
    /// Effective SNR per unit power, `P |h_k g_k|^2 / sigma_k^2`.
    pub gain: Vec<f64>,
    /// `J x K` leakage per unit power, `g_k^H R_k^j g_k`.
    pub leak: DMatrix<f64>,
    /// Interference cap per primary receiver.
    pub caps: Vec<f64>,
    /// Rate weight per destination.
    pub weights: Vec<f64>,
}

impl AllocationProblem {
    pub fn new(
        gain: Vec<f64>,
        leak: DMatrix<f64>,
        caps: Vec<f64>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        let k = gain.len();
        if leak.ncols() != k || weights.len() != k || leak.nrows() != caps.len() {
            return Err(Error::InvalidProblem(format!(
                "gain has {k} beams, weights {}, leak is {}x{}, caps {}",
                weights.len(),
                leak.nrows(),
                leak.ncols(),
                caps.len()
            )));
        }
        if gain.iter().any(|g| !(*g >= 0.0 && g.is_finite())) {
            return Err(Error::InvalidProblem(format!(
                "gains must be finite and >= 0: {gain:?}"
            )));
        }
        if leak.iter().any(|l| !(*l >= 0.0 && l.is_finite())) {
            return Err(Error::InvalidProblem(
                "leakage coefficients must be finite and >= 0".into(),
            ));
        }
        if caps.iter().any(|c| !(*c >= 0.0)) {
            return Err(Error::InvalidProblem(format!(
                "caps must be >= 0: {caps:?}"
            )));
        }
        if weights.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidProblem(format!(
                "weights must be positive: {weights:?}"
            )));
        }
        Ok(Self {
            gain,
            leak,
            caps,
            weights,
        })
    }

    /// Builds the problem for unit directions `dirs`, with leakage taken from
    /// the per-primary, per-beam covariance matrices `primary[j][k]`.
    pub fn from_directions(
        channels: &ChannelRealization,
        primary: &[Vec<CMatrix>],
        dirs: &BeamDirections,
        caps: &[f64],
        weights: &[f64],
    ) -> Result<Self> {
        let k = dirs.directions.len();
        if k != channels.num_destinations() || primary.len() != caps.len() {
            return Err(Error::DimensionMismatch(format!(
                "{k} directions for {} destinations; {} covariance rows for {} caps",
                channels.num_destinations(),
                primary.len(),
                caps.len()
            )));
        }
        let gain = dirs
            .directions
            .iter()
            .enumerate()
            .map(|(i, g)| {
                channels.symbol_power * channels.destination(i).dot(g).norm_sqr()
                    / channels.noise[i]
            })
            .collect();
        let leak = DMatrix::from_fn(primary.len(), k, |j, i| {
            quadratic_form(&primary[j][i], &dirs.directions[i]).max(0.0)
        });
        Self::new(gain, leak, caps.to_vec(), weights.to_vec())
    }

    pub fn num_beams(&self) -> usize {
        self.gain.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.caps.len()
    }

    /// `sum_k leak[j][k] alpha_k`.
    pub fn usage(&self, j: usize, alpha: &[f64]) -> f64 {
        self.leak.row(j).iter().zip(alpha).map(|(l, a)| l * a).sum()
    }
}

/// Result of a power allocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    pub alpha: Vec<f64>,
    /// Constraints met with equality.
    pub active_set: Vec<usize>,
    /// Lagrange multiplier per constraint, scaled so that
    /// `w_k / (alpha_k + 1 / gain_k) = sum_j lambda_j leak[j][k]` on active beams.
    pub lambdas: Vec<f64>,
    /// Size of the active set that was accepted (0 when no cap binds).
    pub level: usize,
    /// Candidate active sets examined.
    pub subsets_tried: usize,
}

/// `sum_k w_k log2(1 + gain_k alpha_k)`.
pub fn weighted_sum_rate(problem: &AllocationProblem, alpha: &[f64]) -> f64 {
    problem
        .weights
        .iter()
        .zip(&problem.gain)
        .zip(alpha)
        .map(|((w, g), a)| w * (g * a).log2_1p())
        .sum()
}

trait Log2OnePlus {
    fn log2_1p(self) -> f64;
}

impl Log2OnePlus for f64 {
    fn log2_1p(self) -> f64 {
        self.ln_1p() / std::f64::consts::LN_2
    }
}

/// Single-cap water-filling in normalized units: find `mu` with
/// `sum_k m_k max(0, w_k / (mu m_k) - 1) = 1`. Every `m_k` must be positive.
fn waterfill_unit_cap(weights: &[f64], m: &[f64]) -> (f64, Vec<f64>) {
    // Beam k is on while mu < w_k / m_k; switch beams on in decreasing order.
    let mut order: Vec<usize> = (0..m.len()).collect();
    order.sort_by(|&a, &b| (weights[b] / m[b]).total_cmp(&(weights[a] / m[a])));
    let (mut w_sum, mut m_sum) = (0.0, 0.0);
    let mut mu = 0.0;
    for (n, &k) in order.iter().enumerate() {
        w_sum += weights[k];
        m_sum += m[k];
        mu = w_sum / (1.0 + m_sum);
        let next = order.get(n + 1).map(|&i| weights[i] / m[i]);
        if next.is_none_or(|t| mu >= t) {
            break;
        }
    }
    let x = weights
        .iter()
        .zip(m)
        .map(|(w, mk)| (w / (mu * mk) - 1.0).max(0.0))
        .collect();
    (mu, x)
}

/// Normalized view of a problem restricted to beams that can carry power
/// and constraints that can bind.
struct Reduced {
    beams: Vec<usize>,
    constraints: Vec<usize>,
    /// `m[(c, b)] = leak / (gain * cap)`.
    m: DMatrix<f64>,
    weights: Vec<f64>,
}

/// Beams forced to zero by a zero cap, and the multiplier each zero cap needs
/// to keep those beams stationary.
struct Presolve {
    reduced: Reduced,
    zero_caps: Vec<(usize, f64)>,
}

fn presolve(problem: &AllocationProblem) -> Result<Presolve> {
    let (jn, kn) = (problem.num_constraints(), problem.num_beams());
    let zero_cap: Vec<usize> = (0..jn).filter(|&j| problem.caps[j] == 0.0).collect();
    let forced = |k: usize| zero_cap.iter().any(|&j| problem.leak[(j, k)] > 0.0);
    let beams: Vec<usize> = (0..kn)
        .filter(|&k| problem.gain[k] > 0.0 && !forced(k))
        .collect();
    let finite = |j: usize| problem.caps[j] > 0.0 && problem.caps[j].is_finite();
    for &k in &beams {
        if !(0..jn).any(|j| finite(j) && problem.leak[(j, k)] > 0.0) {
            return Err(Error::UnboundedBeam { beam: k });
        }
    }
    let constraints: Vec<usize> = (0..jn)
        .filter(|&j| finite(j) && beams.iter().any(|&k| problem.leak[(j, k)] > 0.0))
        .collect();
    let m = DMatrix::from_fn(constraints.len(), beams.len(), |c, b| {
        let (j, k) = (constraints[c], beams[b]);
        problem.leak[(j, k)] / (problem.gain[k] * problem.caps[j])
    });
    let zero_caps = zero_cap
        .iter()
        .map(|&j| {
            let lambda = (0..kn)
                .filter(|&k| problem.leak[(j, k)] > 0.0)
                .map(|k| problem.weights[k] * problem.gain[k] / problem.leak[(j, k)])
                .fold(0.0, f64::max);
            (j, lambda)
        })
        .collect();
    let weights = beams.iter().map(|&k| problem.weights[k]).collect();
    Ok(Presolve {
        reduced: Reduced {
            beams,
            constraints,
            m,
            weights,
        },
        zero_caps,
    })
}

/// Normalized primal response `x_b = max(0, w_b / s_b - 1)` for multipliers
/// `mu` on the listed rows.
fn response(m: &DMatrix<f64>, weights: &[f64], rows: &[usize], mu: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let s: Vec<f64> = (0..m.ncols())
        .map(|b| rows.iter().zip(mu).map(|(&c, u)| u * m[(c, b)]).sum())
        .collect();
    let x = weights
        .iter()
        .zip(&s)
        .map(|(w, sb)| {
            if *sb > 0.0 {
                (w / sb - 1.0).max(0.0)
            } else {
                f64::INFINITY
            }
        })
        .collect();
    (x, s)
}

fn usage_normalized(m: &DMatrix<f64>, c: usize, x: &[f64]) -> f64 {
    x.iter()
        .enumerate()
        .map(|(b, xb)| if m[(c, b)] > 0.0 { m[(c, b)] * xb } else { 0.0 })
        .sum()
}

/// Dual objective restricted to `rows`; its stationary points with positive
/// multipliers are exactly the solutions of the active-set equalities.
fn dual_value(m: &DMatrix<f64>, weights: &[f64], rows: &[usize], mu: &[f64]) -> f64 {
    let (x, s) = response(m, weights, rows, mu);
    let primal: f64 = x
        .iter()
        .zip(&s)
        .zip(weights)
        .map(|((xb, sb), w)| w * xb.ln_1p() - sb * xb)
        .sum();
    primal + mu.iter().sum::<f64>()
}

/// Exact minimization of the restricted dual along coordinate `i`: the
/// partial derivative `1 - usage` is continuous and nondecreasing in
/// `mu[i]`, so its root (or zero, when already nonnegative there) is
/// bracketed and bisected.
fn coordinate_step(m: &DMatrix<f64>, weights: &[f64], rows: &[usize], mu: &mut [f64], i: usize) {
    let slope = |mu: &[f64]| {
        let (x, _) = response(m, weights, rows, mu);
        1.0 - usage_normalized(m, rows[i], &x)
    };
    let mut trial = mu.to_vec();
    trial[i] = 0.0;
    if slope(&trial) >= 0.0 {
        mu[i] = 0.0;
        return;
    }
    let mut hi = mu[i].max(f64::MIN_POSITIVE.sqrt());
    loop {
        trial[i] = hi;
        if slope(&trial) >= 0.0 || !hi.is_finite() {
            break;
        }
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        trial[i] = mid;
        if slope(&trial) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    mu[i] = hi;
}

/// Minimizes the restricted dual over `mu >= 0`: projected Newton steps,
/// with exact coordinate sweeps wherever Newton makes no progress (the
/// Hessian is singular while every beam touching a row is switched off).
fn solve_active(m: &DMatrix<f64>, weights: &[f64], rows: &[usize]) -> Vec<f64> {
    let n = rows.len();
    if n == 1 {
        let row: Vec<f64> = (0..m.ncols()).map(|b| m[(rows[0], b)]).collect();
        return vec![waterfill_unit_cap(weights, &row).0];
    }
    // Start from the water level of the summed constraint.
    let summed: Vec<f64> = (0..m.ncols())
        .map(|b| rows.iter().map(|&c| m[(c, b)]).sum())
        .collect();
    let (t, _) = waterfill_unit_cap(
        weights,
        &summed.iter().map(|v| v / n as f64).collect::<Vec<_>>(),
    );
    let mut mu = vec![t / n as f64; n];
    let gradient = |mu: &[f64]| -> Vec<f64> {
        let (x, _) = response(m, weights, rows, mu);
        rows.iter()
            .map(|&c| 1.0 - usage_normalized(m, c, &x))
            .collect()
    };
    let norm = |g: &[f64]| g.iter().map(|v| v * v).sum::<f64>();

    for _ in 0..500 {
        let (x, s) = response(m, weights, rows, &mu);
        let grad = gradient(&mu);
        let pg = grad
            .iter()
            .zip(&mu)
            .map(|(g, u)| if *u > 0.0 { g.abs() } else { (-g).max(0.0) })
            .fold(0.0, f64::max);
        if pg < 1e-14 {
            break;
        }
        let free: Vec<usize> = (0..n)
            .filter(|&i| !(mu[i] <= 0.0 && grad[i] > 0.0))
            .collect();
        let mut h = DMatrix::<f64>::zeros(free.len(), free.len());
        for b in 0..m.ncols() {
            if x[b] > 0.0 {
                let c = weights[b] / (s[b] * s[b]);
                for (p, &i) in free.iter().enumerate() {
                    for (q, &jj) in free.iter().enumerate() {
                        h[(p, q)] += c * m[(rows[i], b)] * m[(rows[jj], b)];
                    }
                }
            }
        }
        let mut accepted = false;
        let singular = (0..free.len()).any(|p| h[(p, p)] <= 0.0);
        if !singular {
            let diag_mean = h.trace() / free.len() as f64;
            for p in 0..free.len() {
                h[(p, p)] += 1e-12 * diag_mean;
            }
            let rhs = DVector::from_iterator(free.len(), free.iter().map(|&i| -grad[i]));
            if let Some(chol) = h.clone().cholesky() {
                let step = chol.solve(&rhs);
                let current = dual_value(m, weights, rows, &mu);
                let grad_norm = norm(&grad);
                let mut t = 1.0;
                for _ in 0..60 {
                    let mut trial = mu.clone();
                    for (p, &i) in free.iter().enumerate() {
                        trial[i] = (mu[i] + t * step[p]).max(0.0);
                    }
                    let decrease: f64 = grad
                        .iter()
                        .zip(&trial)
                        .zip(&mu)
                        .map(|((g, a), b)| g * (a - b))
                        .sum();
                    let value = dual_value(m, weights, rows, &trial);
                    // Near the optimum the decrease drops below the rounding
                    // of the dual value; fall back to shrinking the gradient.
                    let sufficient = value <= current + 1e-4 * decrease
                        || (value <= current + 1e-12 * current.abs()
                            && norm(&gradient(&trial)) < grad_norm);
                    if value.is_finite() && sufficient {
                        accepted = trial != mu;
                        mu = trial;
                        break;
                    }
                    t *= 0.5;
                }
            }
        }
        if !accepted {
            let before = mu.clone();
            for i in 0..n {
                coordinate_step(m, weights, rows, &mut mu, i);
            }
            if mu == before {
                break;
            }
        }
    }
    mu
}

/// Optimal allocation by active-set enumeration: sets of size 1, 2, ... in
/// lexicographic order, accepting the first whose equality solution has
/// non-negative multipliers and satisfies every other cap.
pub fn opa_allocate(problem: &AllocationProblem) -> Result<Allocation> {
    let Presolve { reduced, zero_caps } = presolve(problem)?;
    let (kn, jn) = (problem.num_beams(), problem.num_constraints());
    let mut alpha = vec![0.0; kn];
    let mut lambdas = vec![0.0; jn];
    let mut active_set: Vec<usize> = zero_caps.iter().map(|&(j, _)| j).collect();
    for &(j, lambda) in &zero_caps {
        lambdas[j] = lambda;
    }
    if reduced.beams.is_empty() {
        active_set.sort_unstable();
        return Ok(Allocation {
            alpha,
            active_set,
            lambdas,
            level: 0,
            subsets_tried: 0,
        });
    }

    let cn = reduced.constraints.len();
    let mut tried = 0;
    let mut best_residual = f64::INFINITY;
    for size in 1..=cn {
        for rows in combinations(cn, size) {
            tried += 1;
            let unbounded =
                (0..reduced.beams.len()).any(|b| rows.iter().all(|&c| reduced.m[(c, b)] == 0.0));
            if unbounded {
                continue;
            }
            let mu = solve_active(&reduced.m, &reduced.weights, &rows);
            let (x, _) = response(&reduced.m, &reduced.weights, &rows, &mu);
            let mut residual = 0.0f64;
            for &c in &rows {
                residual = residual.max((usage_normalized(&reduced.m, c, &x) - 1.0).abs());
            }
            let equalities_hold = residual <= SOLVE_TOLERANCE && mu.iter().all(|&u| u > 0.0);
            for c in (0..cn).filter(|c| !rows.contains(c)) {
                residual = residual.max(usage_normalized(&reduced.m, c, &x) - 1.0);
            }
            best_residual = best_residual.min(residual);
            if !(equalities_hold && residual <= ACCEPT_TOLERANCE) {
                continue;
            }
            for (b, &k) in reduced.beams.iter().enumerate() {
                alpha[k] = x[b] / problem.gain[k];
            }
            for (&c, u) in rows.iter().zip(&mu) {
                let j = reduced.constraints[c];
                lambdas[j] = u / problem.caps[j];
                active_set.push(j);
            }
            active_set.sort_unstable();
            enforce_feasibility(problem, &mut alpha);
            return Ok(Allocation {
                alpha,
                active_set,
                lambdas,
                level: size,
                subsets_tried: tried,
            });
        }
    }
    Err(Error::AllocationInfeasible {
        residual: best_residual,
    })
}

/// Relative headroom kept below every cap, so that re-evaluating the
/// interference from beam weights (a different rounding path) never lands
/// above the cap.
const CAP_HEADROOM: f64 = 1e-14;

/// Scales powers down by the smallest amount that leaves every cap met with
/// [`CAP_HEADROOM`] to spare.
fn enforce_feasibility(problem: &AllocationProblem, alpha: &mut [f64]) {
    for _ in 0..8 {
        let worst = (0..problem.num_constraints())
            .filter(|&j| problem.caps[j].is_finite())
            .map(|j| {
                let u = problem.usage(j, alpha);
                let target = problem.caps[j] * (1.0 - CAP_HEADROOM);
                if u > target {
                    target / u
                } else {
                    1.0
                }
            })
            .fold(1.0, f64::min);
        if worst >= 1.0 {
            return;
        }
        alpha
            .iter_mut()
            .for_each(|a| *a *= worst * (1.0 - 4.0 * f64::EPSILON));
    }
}

/// Indices of every `size`-subset of `0..n` in lexicographic order.
fn combinations(n: usize, size: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = (size <= n).then(|| (0..size).collect());
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let mut next = out.clone();
        let mut i = size;
        current = loop {
            if i == 0 {
                break None;
            }
            i -= 1;
            if next[i] < n - size + i {
                next[i] += 1;
                for p in i + 1..size {
                    next[p] = next[p - 1] + 1;
                }
                break Some(next);
            }
        };
        Some(out)
    })
}

/// Low-complexity allocation: water-fill against each cap separately and
/// keep, per beam, the smallest of those powers.
pub fn lcpa_allocate(problem: &AllocationProblem) -> Result<Allocation> {
    let (kn, jn) = (problem.num_beams(), problem.num_constraints());
    let mut alpha = vec![f64::INFINITY; kn];
    let mut lambdas = vec![0.0; jn];
    for k in 0..kn {
        if problem.gain[k] == 0.0 {
            alpha[k] = 0.0;
        }
    }
    for j in 0..jn {
        let cap = problem.caps[j];
        if !cap.is_finite() {
            continue;
        }
        let beams: Vec<usize> = (0..kn)
            .filter(|&k| problem.gain[k] > 0.0 && problem.leak[(j, k)] > 0.0)
            .collect();
        if beams.is_empty() {
            continue;
        }
        if cap == 0.0 {
            for &k in &beams {
                alpha[k] = 0.0;
            }
            continue;
        }
        let m: Vec<f64> = beams
            .iter()
            .map(|&k| problem.leak[(j, k)] / (problem.gain[k] * cap))
            .collect();
        let w: Vec<f64> = beams.iter().map(|&k| problem.weights[k]).collect();
        let (mu, x) = waterfill_unit_cap(&w, &m);
        lambdas[j] = mu / cap;
        for (&k, xb) in beams.iter().zip(x) {
            alpha[k] = alpha[k].min(xb / problem.gain[k]);
        }
    }
    if let Some(beam) = alpha.iter().position(|a| a.is_infinite()) {
        return Err(Error::UnboundedBeam { beam });
    }
    enforce_feasibility(problem, &mut alpha);
    let active_set: Vec<usize> = (0..jn)
        .filter(|&j| {
            let cap = problem.caps[j];
            cap.is_finite()
                && (problem.usage(j, &alpha) - cap).abs() <= 1e-9 * cap.max(f64::MIN_POSITIVE)
        })
        .collect();
    let level = active_set.len();
    Ok(Allocation {
        alpha,
        active_set,
        lambdas,
        level,
        subsets_tried: jn,
    })
}

/// Relative residuals of the KKT system for an allocation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct KktResiduals {
    pub stationarity: f64,
    pub slackness: f64,
    pub primal: f64,
    pub dual: f64,
}

impl KktResiduals {
    pub fn max(&self) -> f64 {
        self.stationarity
            .max(self.slackness)
            .max(self.primal)
            .max(self.dual)
    }
}

/// Checks stationarity, complementary slackness, primal and dual
/// feasibility of `allocation`, each as a relative residual.
pub fn kkt_residuals(problem: &AllocationProblem, allocation: &Allocation) -> KktResiduals {
    let mut out = KktResiduals::default();
    let alpha = &allocation.alpha;
    for k in 0..problem.num_beams() {
        let g = problem.gain[k];
        if g == 0.0 {
            out.stationarity = out.stationarity.max(alpha[k].abs());
            continue;
        }
        let marginal = problem.weights[k] * g / (1.0 + g * alpha[k]);
        let price: f64 = (0..problem.num_constraints())
            .map(|j| allocation.lambdas[j] * problem.leak[(j, k)])
            .sum();
        let r = if alpha[k] > 0.0 {
            (marginal - price).abs() / marginal.max(price)
        } else {
            ((marginal - price) / marginal).max(0.0)
        };
        out.stationarity = out.stationarity.max(r);
        out.primal = out.primal.max((-alpha[k]).max(0.0));
    }
    for j in 0..problem.num_constraints() {
        let cap = problem.caps[j];
        if !cap.is_finite() {
            continue;
        }
        let usage = problem.usage(j, alpha);
        let scale = if cap > 0.0 { cap } else { 1.0 };
        out.primal = out.primal.max(((usage - cap) / scale).max(0.0));
        if allocation.lambdas[j] > 0.0 {
            out.slackness = out.slackness.max((usage - cap).abs() / scale);
        }
        out.dual = out.dual.max((-allocation.lambdas[j]).max(0.0));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn problem(gain: &[f64], leak: &[&[f64]], caps: &[f64], weights: &[f64]) -> AllocationProblem {
        let rows = leak.len();
        let cols = gain.len();
        let flat: Vec<f64> = leak.iter().flat_map(|r| r.iter().copied()).collect();
        AllocationProblem::new(
            gain.to_vec(),
            DMatrix::from_row_slice(rows, cols, &flat),
            caps.to_vec(),
            weights.to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn single_beam_single_cap() {
        let p = problem(&[1e9], &[&[2e-9]], &[1e-16], &[1.0]);
        let a = opa_allocate(&p).unwrap();
        assert!((a.alpha[0] - 1e-16 / 2e-9).abs() < 1e-12 * a.alpha[0]);
        assert_eq!(a.active_set, vec![0]);
        assert_eq!(a.level, 1);
        assert!(kkt_residuals(&p, &a).max() < 1e-9);
    }

    #[test]
    fn rate_values() {
        let p = problem(&[2.0], &[&[1.0]], &[1.0], &[1.0]);
        assert_eq!(weighted_sum_rate(&p, &[0.0]), 0.0);
        assert!((weighted_sum_rate(&p, &[0.5]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn weak_beam_is_switched_off() {
        // second beam's floor 1/gain is above the water level
        let p = problem(&[10.0, 0.01], &[&[1.0, 1.0]], &[1.0], &[1.0, 1.0]);
        let a = opa_allocate(&p).unwrap();
        assert_eq!(a.alpha[1], 0.0);
        assert!((a.alpha[0] - 1.0).abs() < 1e-12);
        assert!(kkt_residuals(&p, &a).max() < 1e-9);
    }

    #[test]
    fn two_binding_caps() {
        // beam 0 only hits cap 0, beam 1 only hits cap 1, beam 2 hits both
        let p = problem(
            &[5.0, 5.0, 50.0],
            &[&[1.0, 0.0, 1.0], &[0.0, 1.0, 1.0]],
            &[1.0, 1.0],
            &[1.0, 1.0, 1.0],
        );
        let a = opa_allocate(&p).unwrap();
        assert_eq!(a.active_set, vec![0, 1]);
        assert_eq!(a.level, 2);
        assert_eq!(a.subsets_tried, 3);
        assert!(
            kkt_residuals(&p, &a).max() < 1e-9,
            "{:?}",
            kkt_residuals(&p, &a)
        );
    }

    #[test]
    fn zero_cap_forces_zero_power() {
        let p = problem(
            &[1.0, 1.0],
            &[&[1.0, 0.0], &[1.0, 1.0]],
            &[0.0, 2.0],
            &[1.0, 1.0],
        );
        let a = opa_allocate(&p).unwrap();
        assert_eq!(a.alpha[0], 0.0);
        assert!((a.alpha[1] - 2.0).abs() < 1e-12);
        assert!(a.active_set.contains(&0) && a.active_set.contains(&1));
        assert!(kkt_residuals(&p, &a).max() < 1e-9);
    }

    #[test]
    fn zero_gain_beam_gets_nothing() {
        let p = problem(&[0.0, 3.0], &[&[1.0, 1.0]], &[1.0], &[1.0, 1.0]);
        for a in [opa_allocate(&p).unwrap(), lcpa_allocate(&p).unwrap()] {
            assert_eq!(a.alpha[0], 0.0);
            assert!((a.alpha[1] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn invisible_beam_is_unbounded() {
        let p = problem(&[1.0, 1.0], &[&[1.0, 0.0]], &[1.0], &[1.0, 1.0]);
        assert!(matches!(
            opa_allocate(&p),
            Err(Error::UnboundedBeam { beam: 1 })
        ));
        assert!(matches!(
            lcpa_allocate(&p),
            Err(Error::UnboundedBeam { beam: 1 })
        ));
        let p = problem(&[1.0], &[&[1.0]], &[f64::INFINITY], &[1.0]);
        assert!(matches!(
            opa_allocate(&p),
            Err(Error::UnboundedBeam { beam: 0 })
        ));
    }

    #[test]
    fn rejects_malformed_problems() {
        let leak = DMatrix::from_element(1, 2, 1.0);
        assert!(AllocationProblem::new(vec![1.0], leak.clone(), vec![1.0], vec![1.0]).is_err());
        assert!(
            AllocationProblem::new(vec![1.0, -1.0], leak.clone(), vec![1.0], vec![1.0, 1.0])
                .is_err()
        );
        assert!(
            AllocationProblem::new(vec![1.0, 1.0], leak.clone(), vec![-1.0], vec![1.0, 1.0])
                .is_err()
        );
        assert!(AllocationProblem::new(vec![1.0, 1.0], leak, vec![1.0], vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn lcpa_ignores_vacuous_cap_and_matches_opa_for_one_cap() {
        let p = problem(
            &[4.0, 2.0, 1.0],
            &[&[1.0, 2.0, 0.5], &[0.0, 0.0, 0.0]],
            &[3.0, 1.0],
            &[1.0, 2.0, 1.0],
        );
        let l = lcpa_allocate(&p).unwrap();
        let o = opa_allocate(&p).unwrap();
        for (a, b) in l.alpha.iter().zip(&o.alpha) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(l.lambdas[1], 0.0);
    }

    #[test]
    fn combinations_are_lexicographic() {
        let all: Vec<_> = combinations(4, 2).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(combinations(3, 3).count(), 1);
        assert_eq!(combinations(2, 3).count(), 0);
    }

    fn random_problem() -> impl Strategy<Value = AllocationProblem> {
        (1usize..5, 1usize..5).prop_flat_map(|(k, j)| {
            (
                prop::collection::vec(0.1..100.0f64, k),
                prop::collection::vec(prop_oneof![1 => Just(0.0), 4 => 0.01..10.0f64], j * k),
                prop::collection::vec(0.05..5.0f64, j),
                prop::collection::vec(0.2..3.0f64, k),
            )
                .prop_filter_map("beam invisible to every cap", move |(g, l, c, w)| {
                    let leak = DMatrix::from_row_slice(j, k, &l);
                    (0..k)
                        .all(|b| (0..j).any(|r| leak[(r, b)] > 0.0))
                        .then(|| AllocationProblem::new(g, leak, c, w).unwrap())
                })
        })
    }

    proptest! {
        #[test]
        fn opa_satisfies_kkt(p in random_problem()) {
            let a = opa_allocate(&p).unwrap();
            let r = kkt_residuals(&p, &a);
            prop_assert!(r.max() < 1e-6, "{r:?}");
            for j in 0..p.num_constraints() {
                prop_assert!(p.usage(j, &a.alpha) <= p.caps[j] * (1.0 + 1e-8));
            }
            for &j in &a.active_set {
                prop_assert!((p.usage(j, &a.alpha) - p.caps[j]).abs() <= 1e-6 * p.caps[j]);
            }
        }

        #[test]
        fn opa_dominates_lcpa(p in random_problem()) {
            let o = opa_allocate(&p).unwrap();
            let l = lcpa_allocate(&p).unwrap();
            for j in 0..p.num_constraints() {
                prop_assert!(p.usage(j, &l.alpha) <= p.caps[j] * (1.0 + 1e-12));
            }
            prop_assert!(weighted_sum_rate(&p, &o.alpha) >= weighted_sum_rate(&p, &l.alpha) * (1.0 - 1e-9));
        }

        #[test]
        fn looser_caps_never_hurt(p in random_problem(), c in 1.0..10.0f64) {
            let mut looser = p.clone();
            looser.caps.iter_mut().for_each(|x| *x *= c);
            let a = weighted_sum_rate(&p, &opa_allocate(&p).unwrap().alpha);
            let b = weighted_sum_rate(&looser, &opa_allocate(&looser).unwrap().alpha);
            prop_assert!(b >= a * (1.0 - 1e-9));
        }

        #[test]
        fn weight_scale_leaves_powers(p in random_problem(), c in 0.1..10.0f64) {
            let mut scaled = p.clone();
            scaled.weights.iter_mut().for_each(|w| *w *= c);
            let a = opa_allocate(&p).unwrap();
            let b = opa_allocate(&scaled).unwrap();
            for (x, y) in a.alpha.iter().zip(&b.alpha) {
                prop_assert!((x - y).abs() <= 1e-8 * x.abs().max(1e-300) + 1e-12 * a.alpha.iter().cloned().fold(0.0, f64::max));
            }
        }
    }
}
