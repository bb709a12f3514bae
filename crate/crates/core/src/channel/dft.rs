use std::f64::consts::TAU;

use nalgebra::DMatrix;
use rustfft::FftPlanner;

use super::taps::DiscreteChannel;
use crate::linalg::C64;

/// `X[k] = Σₙ x[n]·exp(−j2πkn/K)` by direct summation over the non-zero
/// prefix `x` (implicitly zero-padded to `K`).
pub fn naive_dft(x: &[C64], k_points: usize) -> Vec<C64> {
    (0..k_points)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(n, &v)| v * C64::from_polar(1.0, -TAU * ((k * n) % k_points) as f64 / k_points as f64))
                .sum()
        })
        .collect()
}

/// `K`-point DFT of zero-padded `x`; fast path for power-of-two `K`.
pub fn dft(x: &[C64], k_points: usize) -> Vec<C64> {
    assert!(x.len() <= k_points, "input longer than transform");
    if !k_points.is_power_of_two() {
        return naive_dft(x, k_points);
    }
    let mut buf = vec![C64::new(0.0, 0.0); k_points];
    buf[..x.len()].copy_from_slice(x);
    FftPlanner::new().plan_fft_forward(k_points).process(&mut buf);
    buf
}

/// Populate `H[k]`, the `Nr×Nt` matrix of `K`-point DFT coefficients of each
/// pair's taps.
pub fn frequency_response(mut channel: DiscreteChannel) -> DiscreteChannel {
    let k = channel.k_samples();
    let (nt, nr) = (channel.nt(), channel.nr());
    let mut blocks = vec![DMatrix::<C64>::zeros(nr, nt); k];
    for v in 0..nr {
        for u in 0..nt {
            let taps = channel.taps(v, u);
            let spectrum = dft(taps, k);
            debug_assert!({
                let e_t: f64 = taps.iter().map(|h| h.norm_sqr()).sum();
                let e_f: f64 = spectrum.iter().map(|h| h.norm_sqr()).sum();
                (e_f - k as f64 * e_t).abs() <= 1e-9 * (k as f64 * e_t).max(f64::MIN_POSITIVE)
            });
            for (kk, h) in spectrum.into_iter().enumerate() {
                blocks[kk][(v, u)] = h;
            }
        }
    }
    channel.set_freq_blocks(blocks);
    channel
}

/// `E[H[k]·H*[k+lag]] = Σₙ gₙ·exp(j2π·lag·n/K)` for zero-mean independent
/// taps with variances `gₙ`. Dividing by `Σ gₙ = 1` gives the correlation.
pub fn analytic_frequency_correlation(gains: &[f64], k_points: usize, lag: i64) -> C64 {
    let kk = k_points as i64;
    gains
        .iter()
        .enumerate()
        .map(|(n, &g)| {
            let phase = TAU * ((lag * n as i64).rem_euclid(kk)) as f64 / k_points as f64;
            C64::from_polar(g, phase)
        })
        .sum()
}
