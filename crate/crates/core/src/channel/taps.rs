use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::scenario::{ChannelScenario, FadingFamily};

/// Power-delay profile. Any profile is renormalized to `Σ gₙ = 1`.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum GainProfile {
    #[default]
    Uniform,
    /// `gₙ ∝ exp(−n/decay)`
    Exponential {
        decay: f64,
    },
    Custom(Vec<f64>),
}

impl GainProfile {
    pub fn gains(&self, m_taps: usize) -> Result<Vec<f64>> {
        let raw: Vec<f64> = match self {
            GainProfile::Uniform => vec![1.0; m_taps],
            GainProfile::Exponential { decay } => {
                if !(decay.is_finite() && *decay > 0.0) {
                    return Err(Error::invalid("decay", format!("must be finite and > 0, got {decay}")));
                }
                (0..m_taps).map(|n| (-(n as f64) / decay).exp()).collect()
            }
            GainProfile::Custom(g) => {
                if g.len() != m_taps {
                    return Err(Error::Dimension(format!("{} gains for {m_taps} taps", g.len())));
                }
                if g.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
                    return Err(Error::invalid("gains", "must be finite and >= 0"));
                }
                g.clone()
            }
        };
        let total: f64 = raw.iter().sum();
        if !(total > 0.0) {
            return Err(Error::invalid("gains", "profile has zero total power"));
        }
        Ok(raw.into_iter().map(|g| g / total).collect())
    }
}

/// One realization of the discrete channel.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteChannel {
    k_samples: usize,
    m_taps: usize,
    nt: usize,
    nr: usize,
    /// `[v][u][n]` flattened
    taps: Vec<C64>,
    gains: Vec<f64>,
    freq_blocks: Option<Vec<DMatrix<C64>>>,
}

impl DiscreteChannel {
    /// Build from explicit taps laid out `[v][u][n]`.
    pub fn from_taps(k_samples: usize, nt: usize, nr: usize, gains: Vec<f64>, taps: Vec<C64>) -> Result<Self> {
        let m = gains.len();
        if m == 0 || k_samples == 0 || k_samples % m != 0 {
            return Err(Error::Dimension(format!(
                "K = {k_samples} is not a positive multiple of M = {m}"
            )));
        }
        if nt == 0 || nr == 0 {
            return Err(Error::invalid("antennas", "nt and nr must be >= 1"));
        }
        if taps.len() != nr * nt * m {
            return Err(Error::Dimension(format!(
                "expected {} taps, got {}",
                nr * nt * m,
                taps.len()
            )));
        }
        let total: f64 = gains.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid("gains", format!("must sum to 1, got {total}")));
        }
        Ok(DiscreteChannel {
            k_samples,
            m_taps: m,
            nt,
            nr,
            taps,
            gains,
            freq_blocks: None,
        })
    }

    pub fn k_samples(&self) -> usize {
        self.k_samples
    }

    pub fn m_taps(&self) -> usize {
        self.m_taps
    }

    /// `Lc = K/M`
    pub fn coherence_length(&self) -> usize {
        self.k_samples / self.m_taps
    }

    pub fn nt(&self) -> usize {
        self.nt
    }

    pub fn nr(&self) -> usize {
        self.nr
    }

    pub fn gains(&self) -> &[f64] {
        &self.gains
    }

    pub fn taps(&self, v: usize, u: usize) -> &[C64] {
        let start = (v * self.nt + u) * self.m_taps;
        &self.taps[start..start + self.m_taps]
    }

    pub fn all_taps(&self) -> &[C64] {
        &self.taps
    }

    /// `Nr×Nt` blocks `H[k]`, present after [`frequency_response`](super::frequency_response).
    pub fn freq_blocks(&self) -> Option<&[DMatrix<C64>]> {
        self.freq_blocks.as_deref()
    }

    pub(crate) fn set_freq_blocks(&mut self, blocks: Vec<DMatrix<C64>>) {
        self.freq_blocks = Some(blocks);
    }

    /// JSON dump: `{k_samples, m_taps, nt, nr, gains, taps}` with `taps[v][u][n] = [re, im]`.
    pub fn to_json(&self) -> String {
        let dump = ChannelDump {
            k_samples: self.k_samples,
            m_taps: self.m_taps,
            nt: self.nt,
            nr: self.nr,
            gains: self.gains.clone(),
            taps: (0..self.nr)
                .map(|v| {
                    (0..self.nt)
                        .map(|u| self.taps(v, u).iter().map(|h| [h.re, h.im]).collect())
                        .collect()
                })
                .collect(),
        };
        serde_json::to_string_pretty(&dump).expect("channel serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let d: ChannelDump = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        if d.gains.len() != d.m_taps {
            return Err(Error::Dimension(format!(
                "{} gains for m_taps = {}",
                d.gains.len(),
                d.m_taps
            )));
        }
        let mut taps = Vec::with_capacity(d.nr * d.nt * d.m_taps);
        if d.taps.len() != d.nr
            || d.taps
                .iter()
                .any(|row| row.len() != d.nt || row.iter().any(|t| t.len() != d.m_taps))
        {
            return Err(Error::Dimension("taps array does not match nr × nt × m_taps".into()));
        }
        for row in &d.taps {
            for pair in row {
                taps.extend(pair.iter().map(|[re, im]| C64::new(*re, *im)));
            }
        }
        DiscreteChannel::from_taps(d.k_samples, d.nt, d.nr, d.gains, taps)
    }
}

#[derive(Serialize, Deserialize)]
struct ChannelDump {
    k_samples: usize,
    m_taps: usize,
    nt: usize,
    nr: usize,
    gains: Vec<f64>,
    taps: Vec<Vec<Vec<[f64; 2]>>>,
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> C64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(s * re, s * im)
}

/// One coefficient with `E|h|² = gain` from the given family.
///
/// Rice uses a line-of-sight component of power `2k·g/(1+2k)` with a uniform
/// random phase plus `CN(0, g/(1+2k))`. Nakagami draws `|h|² ~ Gamma(m, g/m)`
/// with an independent uniform phase.
pub fn draw_tap<R: Rng + ?Sized>(fading: &FadingFamily, gain: f64, rng: &mut R) -> C64 {
    match *fading {
        FadingFamily::Rayleigh => complex_normal(rng, gain),
        FadingFamily::Rice { k } => {
            let los = (2.0 * k * gain / (1.0 + 2.0 * k)).sqrt();
            let phase = rng.random::<f64>() * std::f64::consts::TAU;
            C64::from_polar(los, phase) + complex_normal(rng, gain / (1.0 + 2.0 * k))
        }
        FadingFamily::Nakagami { m } => {
            let power: f64 = Gamma::new(m, gain / m).expect("validated shape").sample(rng);
            let phase = rng.random::<f64>() * std::f64::consts::TAU;
            C64::from_polar(power.sqrt(), phase)
        }
    }
}

/// Draw a channel with the uniform profile `gₙ = 1/M`.
pub fn sample_taps(scenario: &ChannelScenario, k_samples: usize, rng_seed: u64) -> Result<DiscreteChannel> {
    sample_taps_with_profile(scenario, k_samples, rng_seed, &GainProfile::Uniform)
}

/// Draw a channel with `M = K/Lc` taps per antenna pair, `Lc` the integer
/// coherence length of the scenario.
pub fn sample_taps_with_profile(
    scenario: &ChannelScenario,
    k_samples: usize,
    rng_seed: u64,
    profile: &GainProfile,
) -> Result<DiscreteChannel> {
    let lc = scenario.coherence_length();
    if k_samples == 0 || k_samples % lc != 0 {
        return Err(Error::Dimension(format!(
            "K = {k_samples} is not a positive multiple of Lc = {lc}"
        )));
    }
    let m = k_samples / lc;
    let gains = profile.gains(m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let fading = scenario.fading();
    let (nt, nr) = (scenario.nt(), scenario.nr());
    let mut taps = Vec::with_capacity(nr * nt * m);
    for _ in 0..nr * nt {
        taps.extend(gains.iter().map(|&g| draw_tap(&fading, g, &mut rng)));
    }
    DiscreteChannel::from_taps(k_samples, nt, nr, gains, taps)
}
