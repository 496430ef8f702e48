//! Beam directions (leakage-based and zero-forcing) and the interference
//! caps handed to power allocation.

use nalgebra::linalg::{Cholesky, QR};
use serde::{Deserialize, Serialize};

use crate::channel::{quadratic_form, CMatrix, CVector, ChannelRealization, CovarianceBundle, C64};
use crate::error::{Error, Result};

/// How a set of beam directions was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DirectionMethod {
    Leakage,
    ZeroForcing,
}

/// Unit-norm beam direction per destination.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamDirections {
    pub directions: Vec<CVector>,
    pub method: DirectionMethod,
}

/// Tikhonov loading relative to the mean eigenvalue: the leakage matrix `A`
/// is replaced by `A + factor * trace(A) / L * I` before solving.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Regularization(pub f64);

impl Default for Regularization {
    fn default() -> Self {
        Regularization(1e-12)
    }
}

/// Rotates `v` so that its first nonzero entry is real and positive.
pub fn canonicalize_phase(v: &mut CVector) {
    if let Some(first) = v.iter().find(|x| x.norm() > 0.0).copied() {
        let rotation = first.conj() / first.norm();
        v.iter_mut().for_each(|x| *x *= rotation);
    }
}

fn unit(mut v: CVector) -> CVector {
    let n = v.norm();
    v.unscale_mut(n);
    canonicalize_phase(&mut v);
    v
}

/// `|h^T g|^2 / g^H A g`, the signal-to-leakage ratio of direction `g`.
pub fn signal_to_leakage(channel: &CVector, leakage: &CMatrix, g: &CVector) -> f64 {
    channel.dot(g).norm_sqr() / quadratic_form(leakage, g)
}

/// Maximizer of [`signal_to_leakage`]: `A^{-1} conj(h)`, normalized.
///
/// The numerator is the rank-one matrix `conj(h) h^T`, so the principal
/// generalized eigenvector has this closed form.
pub fn leakage_direction(
    channel: &CVector,
    leakage: &CMatrix,
    regularization: Regularization,
    destination: usize,
) -> Result<CVector> {
    let l = channel.len();
    let mut a = leakage.clone();
    if regularization.0 > 0.0 {
        let load = regularization.0 * a.trace().re / l as f64;
        for i in 0..l {
            a[(i, i)] += C64::from(load);
        }
    }
    let chol = Cholesky::new(a).ok_or(Error::SingularLeakage { destination })?;
    let g = chol.solve(&channel.conjugate());
    let n = g.norm();
    if !(n.is_finite() && n > 0.0) {
        return Err(Error::SingularLeakage { destination });
    }
    Ok(unit(g))
}

/// Leakage beamforming directions for every destination.
pub fn lbf_directions(
    cov: &CovarianceBundle,
    channels: &ChannelRealization,
    regularization: Regularization,
) -> Result<BeamDirections> {
    let directions = (0..channels.num_destinations())
        .map(|k| leakage_direction(&channels.destination(k), &cov.leakage(k), regularization, k))
        .collect::<Result<_>>()?;
    Ok(BeamDirections {
        directions,
        method: DirectionMethod::Leakage,
    })
}

const DEGENERATE_PROJECTION: f64 = 1e-12;

/// Zero-forcing directions: each destination's matched filter projected onto
/// the null space of the stacked primary channels.
pub fn zfbf_directions(channels: &ChannelRealization) -> Result<BeamDirections> {
    let (j, l) = (channels.num_primaries(), channels.num_ccrns());
    if l <= j {
        return Err(Error::ZeroForcingInfeasible {
            ccrns: l,
            primaries: j,
        });
    }
    // Orthonormal basis of the row space of H_p; its complement is the null space.
    let q = QR::new(channels.h_p.adjoint()).q();
    let directions = (0..channels.num_destinations())
        .map(|k| {
            let target = channels.destination(k).conjugate();
            let projected = &target - &q * (q.adjoint() * &target);
            if projected.norm() < DEGENERATE_PROJECTION * target.norm() {
                return Err(Error::DegenerateProjection { destination: k });
            }
            Ok(unit(projected))
        })
        .collect::<Result<_>>()?;
    Ok(BeamDirections {
        directions,
        method: DirectionMethod::ZeroForcing,
    })
}

/// Which guarantee the interference caps encode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThresholdRegime {
    Perfect,
    RobustErroneous,
    RobustStatistical,
}

/// Per-primary interference caps in Watts.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveThresholds {
    pub caps: Vec<f64>,
    pub regime: ThresholdRegime,
}

impl EffectiveThresholds {
    pub fn perfect(gamma: &[f64]) -> Self {
        Self {
            caps: gamma.to_vec(),
            regime: ThresholdRegime::Perfect,
        }
    }
}

/// Worst-case caps under bounded Cholesky-factor error:
/// `(max(0, sqrt(gamma) - psi * sum_k sqrt(alpha_k)))^2`.
pub fn robust_thresholds_erroneous(
    gamma: &[f64],
    psi_c: &[f64],
    powers: &[f64],
) -> EffectiveThresholds {
    let amplitude: f64 = powers.iter().map(|a| a.max(0.0).sqrt()).sum();
    let caps = gamma
        .iter()
        .zip(psi_c)
        .map(|(g, psi)| {
            let margin = psi * amplitude;
            if margin == 0.0 {
                *g
            } else {
                (g.sqrt() - margin).max(0.0).powi(2)
            }
        })
        .collect();
    EffectiveThresholds {
        caps,
        regime: ThresholdRegime::RobustErroneous,
    }
}

/// Caps on mean interference that bound the violation probability by
/// Markov's inequality: `epsilon * gamma`.
pub fn robust_thresholds_statistical(
    gamma: &[f64],
    epsilon_violation: &[f64],
) -> EffectiveThresholds {
    EffectiveThresholds {
        caps: gamma
            .iter()
            .zip(epsilon_violation)
            .map(|(g, e)| e * g)
            .collect(),
        regime: ThresholdRegime::RobustStatistical,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{build_covariances, draw_channels, FadingSpec};
    use crate::geometry::{
        compute_correlations, compute_delays, CorrelationSet, Topology, SPEED_OF_LIGHT,
    };
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cvec(values: &[(f64, f64)]) -> CVector {
        CVector::from_iterator(
            values.len(),
            values.iter().map(|&(re, im)| C64::new(re, im)),
        )
    }

    fn random_cvector(l: usize, rng: &mut impl Rng) -> CVector {
        CVector::from_fn(l, |_, _| {
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        })
    }

    fn random_hpd(l: usize, rng: &mut impl Rng) -> CMatrix {
        let b = CMatrix::from_fn(l, l + 1, |_, _| {
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        &b * b.adjoint() + CMatrix::identity(l, l) * C64::from(1e-3)
    }

    #[test]
    fn identity_leakage_gives_matched_filter() {
        let h = cvec(&[(1.0, 2.0), (-0.5, 0.3), (0.0, -1.0)]);
        let g = leakage_direction(&h, &CMatrix::identity(3, 3), Regularization(0.0), 0).unwrap();
        let mut expected = h.conjugate().unscale(h.norm());
        canonicalize_phase(&mut expected);
        assert!((g - expected).norm() < 1e-12);
    }

    #[test]
    fn direction_is_scale_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h = random_cvector(4, &mut rng);
        let a = random_hpd(4, &mut rng);
        let g1 = leakage_direction(&h, &a, Regularization(0.0), 0).unwrap();
        let g2 = leakage_direction(&h, &(&a * C64::from(37.5)), Regularization(0.0), 0).unwrap();
        assert!((g1 - g2).norm() < 1e-10);
    }

    #[test]
    fn singular_leakage_without_regularization_names_destination() {
        let h = cvec(&[(1.0, 0.0), (0.0, 1.0)]);
        let a = CMatrix::from_diagonal(&cvec(&[(1.0, 0.0), (0.0, 0.0)]));
        assert!(matches!(
            leakage_direction(&h, &a, Regularization(0.0), 4),
            Err(Error::SingularLeakage { destination: 4 })
        ));
        let g = leakage_direction(&h, &a, Regularization::default(), 4).unwrap();
        assert!((g.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phase_is_canonical() {
        let mut v = cvec(&[(0.0, 0.0), (0.0, -2.0), (1.0, 1.0)]);
        canonicalize_phase(&mut v);
        assert_eq!(v[0], C64::new(0.0, 0.0));
        assert!(v[1].im.abs() < 1e-15 && v[1].re > 0.0);
    }

    /// Random unit vectors never beat the closed-form maximizer.
    #[test]
    fn leakage_direction_beats_random_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for l in 2..=4 {
            let h = random_cvector(l, &mut rng);
            let a = random_hpd(l, &mut rng);
            let best = leakage_direction(&h, &a, Regularization(0.0), 0).unwrap();
            let q_best = signal_to_leakage(&h, &a, &best);
            for _ in 0..20_000 {
                let g = random_cvector(l, &mut rng);
                assert!(signal_to_leakage(&h, &a, &g) <= q_best * (1.0 + 1e-12));
            }
        }
    }

    fn instance(seed: u64, l: usize, j: usize) -> ChannelRealization {
        let ccrns = (0..l)
            .map(|r| [30.0 * r as f64, 25.0 * (r % 2) as f64])
            .collect();
        let primaries = (0..j).map(|p| [200.0 - 90.0 * p as f64, -150.0]).collect();
        let t = Topology::new(
            ccrns,
            vec![[0.0, 250.0], [-200.0, 100.0]],
            primaries,
            SPEED_OF_LIGHT,
        )
        .unwrap();
        draw_channels(&t, &FadingSpec::default(), &[1.0, 1.0], 1.0, seed).unwrap()
    }

    #[test]
    fn zero_forcing_needs_spare_ccrns() {
        let ch = instance(1, 2, 2);
        assert!(matches!(
            zfbf_directions(&ch),
            Err(Error::ZeroForcingInfeasible { .. })
        ));
    }

    #[test]
    fn zero_forcing_keeps_orthogonal_matched_filter() {
        let h_p = CMatrix::from_row_slice(
            1,
            3,
            &[C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
        );
        let h_s = CMatrix::from_row_slice(
            1,
            3,
            &[C64::new(0.0, 0.0), C64::new(0.0, 3.0), C64::new(4.0, 0.0)],
        );
        let ch = ChannelRealization::new(h_s, h_p, vec![1.0], 1.0).unwrap();
        let g = &zfbf_directions(&ch).unwrap().directions[0];
        let mut expected = ch.destination(0).conjugate().unscale(5.0);
        canonicalize_phase(&mut expected);
        assert!((g - expected).norm() < 1e-12);
    }

    #[test]
    fn zero_forcing_degenerate_projection() {
        let row = [C64::new(1.0, 0.5), C64::new(-0.3, 0.2), C64::new(0.0, 1.0)];
        let h_p = CMatrix::from_row_slice(1, 3, &row);
        let h_s = CMatrix::from_row_slice(1, 3, &row.map(|x| x.conj()));
        let ch = ChannelRealization::new(h_s, h_p.conjugate(), vec![1.0], 1.0).unwrap();
        assert!(matches!(
            zfbf_directions(&ch),
            Err(Error::DegenerateProjection { destination: 0 })
        ));
    }

    /// Zero-forcing nulls synchronous interference but not asynchronous.
    #[test]
    fn zero_forcing_leaks_under_asynchrony() {
        let l = 4;
        let ch = instance(7, l, 2);
        let sync = build_covariances(&ch, &CorrelationSet::synchronous(2, 2, l)).unwrap();
        let ccrns = (0..l)
            .map(|r| [30.0 * r as f64, 25.0 * (r % 2) as f64])
            .collect();
        let t = Topology::new(
            ccrns,
            vec![[0.0, 250.0], [-200.0, 100.0]],
            vec![[200.0, -150.0], [110.0, -150.0]],
            SPEED_OF_LIGHT,
        )
        .unwrap();
        let corr = compute_correlations(&compute_delays(&t), 0, 1e-7).unwrap();
        let asynch = build_covariances(&ch, &corr).unwrap();
        let dirs = zfbf_directions(&ch).unwrap();
        for (k, g) in dirs.directions.iter().enumerate() {
            for j in 0..2 {
                let scale = ch.primary(j).norm_squared();
                let leaked = quadratic_form(&sync.primary[j][k], g);
                // the expanded quadratic form cancels only to rounding level
                assert!(
                    leaked <= 1e-12 * scale,
                    "beam {k} primary {j}: {leaked:e} vs {scale:e}"
                );
                assert!(quadratic_form(&asynch.primary[j][k], g) > 1e-6 * scale);
            }
        }
    }

    #[test]
    fn robust_erroneous_caps() {
        let gamma = [0.1e-15, 0.25e-15];
        assert_eq!(
            robust_thresholds_erroneous(&gamma, &[0.0, 0.0], &[1.0, 2.0]).caps,
            gamma.to_vec()
        );
        assert_eq!(
            robust_thresholds_erroneous(&gamma, &[1.0, 1.0], &[1.0]).caps,
            vec![0.0, 0.0]
        );
        // subtrahend equal to half of sqrt(gamma) leaves a quarter of the cap
        let psi = 0.25e-8;
        let half = 0.5 * gamma[0].sqrt() / psi;
        let powers = [(0.5 * half).powi(2), (0.5 * half).powi(2)];
        let caps = robust_thresholds_erroneous(&gamma[..1], &[psi], &powers).caps;
        assert!((caps[0] - gamma[0] / 4.0).abs() < 1e-12 * gamma[0]);
    }

    #[test]
    fn statistical_caps() {
        let gamma = [0.1e-15, 0.25e-15];
        let caps = robust_thresholds_statistical(&gamma, &[1.0, 1.0]);
        assert_eq!(caps.caps, gamma.to_vec());
        let caps = robust_thresholds_statistical(&gamma, &[0.1, 0.1]);
        assert!((caps.caps[0] - 0.1e-16).abs() < 1e-30 && (caps.caps[1] - 0.25e-16).abs() < 1e-30);
        assert_eq!(caps.regime, ThresholdRegime::RobustStatistical);
    }

    proptest! {
        #[test]
        fn directions_are_unit_and_canonical(seed in any::<u64>()) {
            let ch = instance(seed, 4, 2);
            let corr = CorrelationSet::incoherent(2, 2, 4);
            let cov = build_covariances(&ch, &corr).unwrap();
            for dirs in [lbf_directions(&cov, &ch, Regularization::default()).unwrap(), zfbf_directions(&ch).unwrap()] {
                for g in &dirs.directions {
                    prop_assert!((g.norm() - 1.0).abs() < 1e-10);
                    let first = g.iter().find(|x| x.norm() > 0.0).unwrap();
                    prop_assert!(first.im.abs() < 1e-12 && first.re > 0.0);
                }
            }
        }

        #[test]
        fn zero_forcing_nulls_primaries(seed in any::<u64>()) {
            let ch = instance(seed, 4, 2);
            let dirs = zfbf_directions(&ch).unwrap();
            for g in &dirs.directions {
                for j in 0..2 {
                    let h = ch.primary(j);
                    prop_assert!(h.dot(g).norm() <= 1e-10 * h.norm());
                }
            }
        }
    }
}
