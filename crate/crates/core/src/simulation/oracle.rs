use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{ChannelRealization, C64};
use crate::design::BeamformerSolution;

/// Time-domain interference power at every primary receiver.
///
/// Each stream carries i.i.d. unit-power QPSK symbols on rectangular pulses
/// of length `symbol_duration`. CCRN `r`'s copy reaches primary `j` at
/// `offsets[j][r]`. The received waveform is piecewise constant between the
/// pulse edges of all copies, so its mean power over the window in which
/// every copy is active is integrated exactly, segment by segment.
pub fn symbol_level_oracle(
    channels: &ChannelRealization,
    solution: &BeamformerSolution,
    offsets: &[Vec<f64>],
    symbol_duration: f64,
    n_symbols: usize,
    seed: u64,
) -> Vec<f64> {
    let l = channels.num_ccrns();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let qpsk = std::f64::consts::FRAC_1_SQRT_2;
    let symbols: Vec<Vec<C64>> = (0..solution.num_streams())
        .map(|_| {
            (0..n_symbols)
                .map(|_| {
                    let re = if rng.random::<bool>() { qpsk } else { -qpsk };
                    let im = if rng.random::<bool>() { qpsk } else { -qpsk };
                    C64::new(re, im)
                })
                .collect()
        })
        .collect();
    let weights = solution.weights();

    offsets
        .iter()
        .enumerate()
        .map(|(j, offs)| {
            let h = channels.primary(j);
            // coeff[r][k]: contribution of stream k through CCRN r
            let coeff: Vec<Vec<C64>> = (0..l)
                .map(|r| weights.iter().map(|g| h[r] * g[r]).collect())
                .collect();
            let first = offs.iter().cloned().fold(f64::INFINITY, f64::min);
            let start: Vec<f64> = offs.iter().map(|o| o - first).collect();
            let lo = start.iter().cloned().fold(0.0, f64::max);
            let hi = n_symbols as f64 * symbol_duration;
            assert!(lo < hi, "offsets span the whole symbol stream");

            let mut edges: Vec<f64> = start
                .iter()
                .flat_map(|&s| (0..=n_symbols).map(move |m| s + m as f64 * symbol_duration))
                .filter(|&t| t > lo && t < hi)
                .collect();
            edges.push(lo);
            edges.push(hi);
            edges.sort_by(f64::total_cmp);

            let mut energy = 0.0;
            for w in edges.windows(2) {
                let dt = w[1] - w[0];
                if dt <= 0.0 {
                    continue;
                }
                let mid = 0.5 * (w[0] + w[1]);
                let mut y = C64::new(0.0, 0.0);
                for r in 0..l {
                    let idx =
                        (((mid - start[r]) / symbol_duration).floor() as usize).min(n_symbols - 1);
                    for (k, s) in symbols.iter().enumerate() {
                        y += coeff[r][k] * s[idx];
                    }
                }
                energy += y.norm_sqr() * dt;
            }
            energy / (hi - lo)
        })
        .collect()
}
