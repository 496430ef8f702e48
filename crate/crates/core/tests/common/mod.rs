//! Reference computations shared by the oracle and acceptance tests. They
//! are written from the model definitions and share no solver code with the
//! library.
#![allow(dead_code)]

use coopbeam::beamforming::{leakage_direction, EffectiveThresholds, Regularization};
use coopbeam::channel::{build_covariances, draw_channels, CVector, C64};
use coopbeam::config::reference_config;
use coopbeam::design::{leakage_beamforming, Allocator};
use coopbeam::geometry::{compute_correlations, compute_delays, Topology};
use coopbeam::power_allocation::{
    kkt_residuals, opa_allocate, weighted_sum_rate, AllocationProblem,
};
use coopbeam::simulation::asynch_power;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn cn(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

// ---------------------------------------------------------------------------
// Leakage direction against random search

/// `|h^T g|^2 / g^H A g` with `A = C C^H`, written out by hand.
fn quotient(h: &[C64], c: &[Vec<C64>], g: &[C64]) -> f64 {
    let n = h.len();
    let signal: C64 = (0..n).map(|i| h[i] * g[i]).sum();
    // g^H C C^H g = |C^H g|^2
    let leak: f64 = (0..n)
        .map(|col| {
            (0..n)
                .map(|row| c[row][col].conj() * g[row])
                .sum::<C64>()
                .norm_sqr()
        })
        .sum();
    signal.norm_sqr() / leak
}

#[derive(Debug, Clone, Copy)]
pub struct DirectionReport {
    pub instances: usize,
    pub beaten: usize,
    /// Largest random-vector quotient over the LBF quotient.
    pub worst_ratio: f64,
}

/// For each of `instances` random problems with `l` antennas, compares the
/// library's leakage direction against `vectors` random complex directions.
pub fn lbf_against_random(
    instances: usize,
    vectors: usize,
    l: usize,
    seed: u64,
) -> DirectionReport {
    let mut r = rng(seed);
    let pool: Vec<Vec<C64>> = (0..vectors)
        .map(|_| (0..l).map(|_| cn(&mut r)).collect())
        .collect();
    let mut report = DirectionReport {
        instances,
        beaten: 0,
        worst_ratio: 0.0,
    };
    for _ in 0..instances {
        let h: Vec<C64> = (0..l).map(|_| cn(&mut r)).collect();
        // C is random with a loaded diagonal so A = C C^H is well conditioned
        // enough to be positive definite in floating point.
        let mut c: Vec<Vec<C64>> = (0..l)
            .map(|_| (0..l).map(|_| cn(&mut r)).collect())
            .collect();
        for (i, row) in c.iter_mut().enumerate() {
            row[i] += C64::new(0.3, 0.0);
        }
        let a = DMatrix::from_fn(l, l, |i, j| {
            (0..l).map(|m| c[i][m] * c[j][m].conj()).sum::<C64>()
        });
        let g =
            leakage_direction(&CVector::from_vec(h.clone()), &a, Regularization(0.0), 0).unwrap();
        let best = quotient(&h, &c, g.as_slice());
        let top = pool.iter().map(|v| quotient(&h, &c, v)).fold(0.0, f64::max);
        let ratio = top / best;
        report.worst_ratio = report.worst_ratio.max(ratio);
        if ratio > 1.0 + 1e-9 {
            report.beaten += 1;
        }
    }
    report
}

// ---------------------------------------------------------------------------
// Power allocation against an interior-point primal solver

/// Maximizes `sum_k w_k ln(1 + g_k alpha_k)` subject to `leak alpha <= caps`
/// and `alpha >= 0` with a log-barrier method. Returns `alpha`.
pub fn barrier_allocation(p: &AllocationProblem) -> Vec<f64> {
    let (j, k) = (p.caps.len(), p.gain.len());
    // Scale each beam by its stand-alone power limit so x lives in [0, 1].
    let s: Vec<f64> = (0..k)
        .map(|b| {
            (0..j)
                .map(|c| p.caps[c] / p.leak[(c, b)])
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let a = DMatrix::from_fn(j, k, |c, b| p.leak[(c, b)] * s[b] / p.caps[c]);
    let coef: Vec<f64> = (0..k).map(|b| p.gain[b] * s[b]).collect();
    let w = &p.weights;
    let f = |x: &[f64]| (0..k).map(|b| w[b] * (coef[b] * x[b]).ln_1p()).sum::<f64>();
    let slack = |x: &[f64]| -> Vec<f64> {
        (0..j)
            .map(|c| 1.0 - (0..k).map(|b| a[(c, b)] * x[b]).sum::<f64>())
            .collect()
    };
    let phi = |t: f64, x: &[f64]| -> f64 {
        if x.iter().any(|&v| v <= 0.0) {
            return f64::INFINITY;
        }
        let sl = slack(x);
        if sl.iter().any(|&v| v <= 0.0) {
            return f64::INFINITY;
        }
        -t * f(x) - sl.iter().map(|v| v.ln()).sum::<f64>() - x.iter().map(|v| v.ln()).sum::<f64>()
    };

    let mut x = vec![0.5 / k as f64; k];
    let m = (j + k) as f64;
    let mut t = 1.0;
    loop {
        for _ in 0..200 {
            let sl = slack(&x);
            let mut grad = DVector::<f64>::zeros(k);
            let mut hess = DMatrix::<f64>::zeros(k, k);
            for b in 0..k {
                let d = 1.0 + coef[b] * x[b];
                grad[b] = -t * w[b] * coef[b] / d - 1.0 / x[b];
                hess[(b, b)] += t * w[b] * coef[b] * coef[b] / (d * d) + 1.0 / (x[b] * x[b]);
            }
            for c in 0..j {
                for b in 0..k {
                    grad[b] += a[(c, b)] / sl[c];
                    for e in 0..k {
                        hess[(b, e)] += a[(c, b)] * a[(c, e)] / (sl[c] * sl[c]);
                    }
                }
            }
            let step = hess
                .cholesky()
                .expect("barrier Hessian is positive definite")
                .solve(&(-&grad));
            let decrement = -grad.dot(&step);
            if decrement / 2.0 < 1e-13 {
                break;
            }
            let current = phi(t, &x);
            let mut size = 1.0;
            loop {
                let trial: Vec<f64> = (0..k).map(|b| x[b] + size * step[b]).collect();
                if phi(t, &trial) <= current - 0.25 * size * decrement {
                    x = trial;
                    break;
                }
                size *= 0.5;
                if size < 1e-20 {
                    break;
                }
            }
            if size < 1e-20 {
                break;
            }
        }
        if m / t < 1e-11 * f(&x).max(1e-12) {
            break;
        }
        t *= 8.0;
    }
    (0..k).map(|b| x[b] * s[b]).collect()
}

/// Reference-scenario allocation problems followed by synthetic ones with
/// log-uniform gains, leakages and caps.
pub fn allocation_instances(count: usize, seed: u64) -> Vec<AllocationProblem> {
    let config = reference_config();
    let topology = config.topology();
    let corr = config.correlations().unwrap();
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        if i % 2 == 0 {
            let ch = draw_channels(
                &topology,
                &config.fading(),
                &config.noise_powers(),
                100.0,
                r.random(),
            )
            .unwrap();
            let cov = build_covariances(&ch, &corr).unwrap();
            let dirs =
                coopbeam::beamforming::lbf_directions(&cov, &ch, Regularization(1e-12)).unwrap();
            out.push(
                AllocationProblem::from_directions(
                    &ch,
                    &cov.primary,
                    &dirs,
                    &config.interference.thresholds,
                    &config.objective.weights,
                )
                .unwrap(),
            );
        } else {
            let e = |r: &mut ChaCha8Rng, lo: f64, hi: f64| 10f64.powf(r.random_range(lo..hi));
            let gain = (0..3).map(|_| e(&mut r, 2.0, 6.0)).collect();
            let leak = DMatrix::from_fn(2, 3, |_, _| e(&mut r, -12.0, -9.0));
            let caps = (0..2).map(|_| e(&mut r, -16.5, -15.0)).collect();
            let weights = (0..3).map(|_| r.random_range(0.5..2.0)).collect();
            out.push(AllocationProblem::new(gain, leak, caps, weights).unwrap());
        }
    }
    out
}

#[derive(Debug, Clone, Copy)]
pub struct AllocationReport {
    pub instances: usize,
    pub failures: usize,
    /// Largest `|R_opa - R_oracle| / R_oracle`.
    pub worst_gap: f64,
    pub worst_kkt: f64,
}

pub fn opa_against_barrier(instances: &[AllocationProblem]) -> AllocationReport {
    let mut report = AllocationReport {
        instances: instances.len(),
        failures: 0,
        worst_gap: 0.0,
        worst_kkt: 0.0,
    };
    for p in instances {
        let Ok(opa) = opa_allocate(p) else {
            report.failures += 1;
            continue;
        };
        let oracle = barrier_allocation(p);
        let ro = weighted_sum_rate(p, &oracle);
        let ra = weighted_sum_rate(p, &opa.alpha);
        report.worst_gap = report.worst_gap.max((ra - ro).abs() / ro);
        report.worst_kkt = report.worst_kkt.max(kkt_residuals(p, &opa).max());
    }
    report
}

// ---------------------------------------------------------------------------
// Asynchronous interference against a sampled waveform

fn qpsk(r: &mut ChaCha8Rng) -> C64 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    C64::new(
        if r.random() { h } else { -h },
        if r.random() { h } else { -h },
    )
}

/// Overlap of two unit rectangular pulses shifted by `dt`.
fn overlap(dt: f64, ts: f64) -> f64 {
    (1.0 - dt.abs() / ts).max(0.0)
}

/// Measures `E[s(t - a) conj(s(t - b))]` for an i.i.d. QPSK stream by
/// sampling `samples` uniform instants; returns the largest deviation from
/// the pulse overlap over `pairs` random offset pairs.
pub fn beta_deviation(pairs: usize, samples: usize, seed: u64) -> f64 {
    let mut r = rng(seed);
    let ts = 1.0;
    let n = 100_000;
    let s: Vec<C64> = (0..n).map(|_| qpsk(&mut r)).collect();
    let mut worst: f64 = 0.0;
    for _ in 0..pairs {
        let a = r.random_range(0.0..2.0);
        let b = r.random_range(0.0..2.0);
        let mut acc = C64::new(0.0, 0.0);
        for _ in 0..samples {
            let t = r.random_range(3.0..(n as f64 - 1.0));
            acc += s[((t - a) / ts).floor() as usize] * s[((t - b) / ts).floor() as usize].conj();
        }
        let est = acc.re / samples as f64;
        worst = worst.max((est - overlap(a - b, ts)).abs());
    }
    worst
}

pub const OVERSAMPLING: usize = 32;

/// Mean interference power at each primary receiver of a transmission with
/// per-CCRN weights `w[k][r]`, from a waveform sampled at one uniformly
/// jittered instant in each of `OVERSAMPLING` slots per symbol. Fixed
/// instants would round every pulse overlap to a multiple of the slot, which
/// a beam that cancels its own interference turns into a large bias.
fn sampled_power(
    h: &[Vec<C64>],
    w: &[Vec<C64>],
    offsets: &[Vec<f64>],
    ts: f64,
    n: usize,
    r: &mut ChaCha8Rng,
) -> Vec<f64> {
    let l = w[0].len();
    // x[r][m]: what CCRN r sends during symbol m
    let streams: Vec<Vec<C64>> = w
        .iter()
        .map(|_| (0..n).map(|_| qpsk(r)).collect())
        .collect();
    let x: Vec<Vec<C64>> = (0..l)
        .map(|c| {
            (0..n)
                .map(|m| w.iter().zip(&streams).map(|(wk, sk)| wk[c] * sk[m]).sum())
                .collect()
        })
        .collect();
    offsets
        .iter()
        .zip(h)
        .map(|(offs, hj)| {
            let first = offs.iter().cloned().fold(f64::INFINITY, f64::min);
            let start: Vec<f64> = offs.iter().map(|o| (o - first) / ts).collect();
            let lead = start.iter().cloned().fold(0.0, f64::max).ceil() as usize;
            let dt = 1.0 / OVERSAMPLING as f64;
            let mut acc = 0.0;
            let mut count = 0usize;
            for m in lead..n - 1 {
                for q in 0..OVERSAMPLING {
                    let t = m as f64 + (q as f64 + r.random::<f64>()) * dt;
                    let y: C64 = (0..l)
                        .map(|c| hj[c] * x[c][(t - start[c]).floor() as usize])
                        .sum();
                    acc += y.norm_sqr();
                    count += 1;
                }
            }
            acc / count as f64
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
pub struct WaveformReport {
    pub instances: usize,
    pub worst_relative_error: f64,
}

/// Random 4-CCRN topologies and symbol durations; LBF weights; analytic
/// interference power against the sampled waveform.
pub fn analytic_against_waveform(instances: usize, n_symbols: usize, seed: u64) -> WaveformReport {
    let config = reference_config();
    let c = 299_792_458.0;
    let mut r = rng(seed);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < instances {
        let pt = |r: &mut ChaCha8Rng, span: f64| {
            [r.random_range(-span..span), r.random_range(-span..span)]
        };
        let ccrns: Vec<[f64; 2]> = (0..4).map(|_| pt(&mut r, 60.0)).collect();
        let dests: Vec<[f64; 2]> = (0..3).map(|_| pt(&mut r, 300.0)).collect();
        let prims: Vec<[f64; 2]> = (0..2).map(|_| pt(&mut r, 300.0)).collect();
        let Ok(topology) = Topology::new(ccrns.clone(), dests.clone(), prims.clone(), c) else {
            continue;
        };
        let ts = 10f64.powf(r.random_range(-7.3..-6.0));
        let corr = compute_correlations(&compute_delays(&topology), 0, ts).unwrap();
        let ch = draw_channels(
            &topology,
            &config.fading(),
            &config.noise_powers(),
            100.0,
            r.random(),
        )
        .unwrap();
        let cov = build_covariances(&ch, &corr).unwrap();
        let Ok(sol) = leakage_beamforming(
            &ch,
            &cov,
            &EffectiveThresholds::perfect(&config.interference.thresholds),
            &config.objective.weights,
            Allocator::Optimal,
            Regularization(1e-12),
        ) else {
            continue;
        };
        if sol.alpha.iter().all(|&a| a == 0.0) {
            continue;
        }
        let dist =
            |a: [f64; 2], b: [f64; 2]| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
        // Every CCRN advances its timing so its copies align at destination 0.
        let offsets: Vec<Vec<f64>> = prims
            .iter()
            .map(|&p| {
                ccrns
                    .iter()
                    .map(|&q| (dist(p, q) - dist(dests[0], q)) / c)
                    .collect()
            })
            .collect();
        let h: Vec<Vec<C64>> = (0..2)
            .map(|j| ch.primary(j).iter().copied().collect())
            .collect();
        let w: Vec<Vec<C64>> = sol
            .weights()
            .iter()
            .map(|v| v.iter().copied().collect())
            .collect();
        let sampled = sampled_power(&h, &w, &offsets, ts, n_symbols, &mut r);
        for (j, s) in sampled.iter().enumerate() {
            let analytic = asynch_power(&cov, &sol, j);
            worst = worst.max((s - analytic).abs() / analytic);
        }
        done += 1;
    }
    WaveformReport {
        instances,
        worst_relative_error: worst,
    }
}
