//! Physical parameterization shared by every other module.
//!
//! A [`ChannelScenario`] carries the power-to-noise density `P/N0` (hertz),
//! the coherence time `Tc` (seconds), the coherence bandwidth `Bc` (hertz),
//! the antenna counts and the fading family. All rates derived from it are
//! in nats/s and all logarithms are natural.
//!
//! # Scenario files
//!
//! Two encodings are accepted. The flat form is one `key = value` pair per
//! line; blank lines and `#` comments are ignored:
//!
//! ```text
//! snr_density_hz = 1e7          # or: snr_density_db_hz = 70
//! coherence_time_s = 1e-3
//! coherence_bandwidth_hz = 1e6
//! nt = 2
//! nr = 2
//! fading = rayleigh             # rayleigh | rice:<k> | nakagami:<m>
//! ```
//!
//! The JSON form is an object with the same keys, where `fading` is the same
//! string. A document whose first non-blank character is `{` is read as JSON.
//! Exactly one of `snr_density_hz` and `snr_density_db_hz` must be present;
//! the decibel form is converted as `10^(dB/10)` at the parse boundary.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fading distribution of each channel coefficient.
///
/// `Rice { k }` uses the factor convention for which the kurtosis is
/// `2 - 4k²/(1+2k)²`; the line-of-sight power over the scattered power is `2k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FadingFamily {
    Rayleigh,
    Rice { k: f64 },
    Nakagami { m: f64 },
}

impl FadingFamily {
    pub fn rice(k: f64) -> Result<Self> {
        let f = FadingFamily::Rice { k };
        f.validate()?;
        Ok(f)
    }

    pub fn nakagami(m: f64) -> Result<Self> {
        let f = FadingFamily::Nakagami { m };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FadingFamily::Rayleigh => Ok(()),
            FadingFamily::Rice { k } if k.is_finite() && k >= 0.0 => Ok(()),
            FadingFamily::Rice { k } => Err(Error::invalid(
                "fading",
                format!("rice factor must be finite and >= 0, got {k}"),
            )),
            FadingFamily::Nakagami { m } if m.is_finite() && m > 0.0 => Ok(()),
            FadingFamily::Nakagami { m } => Err(Error::invalid(
                "fading",
                format!("nakagami shape must be finite and > 0, got {m}"),
            )),
        }
    }

    /// Fourth moment over squared second moment of a coefficient.
    pub fn kurtosis(&self) -> f64 {
        match *self {
            FadingFamily::Rayleigh => 2.0,
            FadingFamily::Rice { k } => {
                let r = 2.0 * k / (1.0 + 2.0 * k);
                2.0 - r * r
            }
            FadingFamily::Nakagami { m } => 1.0 + 1.0 / m,
        }
    }

    pub fn is_rayleigh(&self) -> bool {
        matches!(self, FadingFamily::Rayleigh)
    }
}

/// Kurtosis `E|h|⁴ / (E|h|²)²` of the fading family.
pub fn kurtosis(fading: &FadingFamily) -> f64 {
    fading.kurtosis()
}

impl fmt::Display for FadingFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FadingFamily::Rayleigh => f.write_str("rayleigh"),
            FadingFamily::Rice { k } => write!(f, "rice:{k}"),
            FadingFamily::Nakagami { m } => write!(f, "nakagami:{m}"),
        }
    }
}

impl FromStr for FadingFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, param) = match s.split_once(':') {
            Some((n, p)) => (n.trim(), Some(p.trim())),
            None => (s, None),
        };
        let number = |p: Option<&str>| -> Result<f64> {
            let p =
                p.ok_or_else(|| Error::invalid("fading", format!("`{name}` needs a parameter, e.g. `{name}:1.0`")))?;
            p.parse::<f64>()
                .map_err(|e| Error::invalid("fading", format!("bad parameter `{p}`: {e}")))
        };
        match name.to_ascii_lowercase().as_str() {
            "rayleigh" if param.is_none() => Ok(FadingFamily::Rayleigh),
            "rayleigh" => Err(Error::invalid("fading", "rayleigh takes no parameter")),
            "rice" => FadingFamily::rice(number(param)?),
            "nakagami" => FadingFamily::nakagami(number(param)?),
            other => Err(Error::invalid(
                "fading",
                format!("unknown family `{other}` (expected rayleigh, rice:<k> or nakagami:<m>)"),
            )),
        }
    }
}

impl Serialize for FadingFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FadingFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Validated physical setup. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChannelScenario {
    #[serde(rename = "snr_density_hz")]
    snr_density: f64,
    #[serde(rename = "coherence_time_s")]
    coherence_time: f64,
    #[serde(rename = "coherence_bandwidth_hz")]
    coherence_bandwidth: f64,
    nt: usize,
    nr: usize,
    fading: FadingFamily,
}

impl ChannelScenario {
    pub fn new(
        snr_density: f64,
        coherence_time: f64,
        coherence_bandwidth: f64,
        nt: usize,
        nr: usize,
        fading: FadingFamily,
    ) -> Result<Self> {
        let s = ChannelScenario {
            snr_density,
            coherence_time,
            coherence_bandwidth,
            nt,
            nr,
            fading,
        };
        s.validate()?;
        Ok(s)
    }

    /// Convenience constructor that fixes `Tc = 1 s`, so `Bc` equals the
    /// coherence product exactly.
    pub fn with_coherence_product(
        snr_density: f64,
        coherence_product: f64,
        nt: usize,
        nr: usize,
        fading: FadingFamily,
    ) -> Result<Self> {
        Self::new(snr_density, 1.0, coherence_product, nt, nr, fading)
    }

    fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(name, format!("must be finite and > 0, got {v}")))
            }
        };
        positive("snr_density_hz", self.snr_density)?;
        positive("coherence_time_s", self.coherence_time)?;
        positive("coherence_bandwidth_hz", self.coherence_bandwidth)?;
        if self.nt == 0 {
            return Err(Error::invalid("nt", "must be >= 1"));
        }
        if self.nr == 0 {
            return Err(Error::invalid("nr", "must be >= 1"));
        }
        self.fading.validate()?;
        let lc = self.coherence_product();
        if !(lc > 1.0) {
            return Err(Error::domain(format!("coherence product ≤ 1 (Bc·Tc = {lc})")));
        }
        Ok(())
    }

    pub fn snr_density(&self) -> f64 {
        self.snr_density
    }

    pub fn coherence_time(&self) -> f64 {
        self.coherence_time
    }

    pub fn coherence_bandwidth(&self) -> f64 {
        self.coherence_bandwidth
    }

    pub fn nt(&self) -> usize {
        self.nt
    }

    pub fn nr(&self) -> usize {
        self.nr
    }

    pub fn fading(&self) -> FadingFamily {
        self.fading
    }

    pub fn kurtosis(&self) -> f64 {
        self.fading.kurtosis()
    }

    /// `Lc = Bc·Tc` as a real number.
    pub fn coherence_product(&self) -> f64 {
        self.coherence_bandwidth * self.coherence_time
    }

    /// Integer coherence length for the discrete model: `⌈Bc·Tc⌉`, except that
    /// products within 1e-9 relative of an integer snap to it (so `1e6 · 1e-3`
    /// gives 1000, not 1001).
    pub fn coherence_length(&self) -> usize {
        let lc = self.coherence_product();
        let nearest = lc.round();
        if (lc - nearest).abs() <= 1e-9 * lc {
            nearest as usize
        } else {
            lc.ceil() as usize
        }
    }

    /// `κ − 2 + Nt + Nr`, the peakiness-weighted antenna factor.
    pub fn antenna_factor(&self) -> f64 {
        self.kurtosis() - 2.0 + (self.nt + self.nr) as f64
    }

    pub fn with_snr_density(&self, snr_density: f64) -> Result<Self> {
        Self::new(
            snr_density,
            self.coherence_time,
            self.coherence_bandwidth,
            self.nt,
            self.nr,
            self.fading,
        )
    }

    pub fn with_coherence(&self, coherence_time: f64, coherence_bandwidth: f64) -> Result<Self> {
        Self::new(
            self.snr_density,
            coherence_time,
            coherence_bandwidth,
            self.nt,
            self.nr,
            self.fading,
        )
    }

    pub fn with_antennas(&self, nt: usize, nr: usize) -> Result<Self> {
        Self::new(
            self.snr_density,
            self.coherence_time,
            self.coherence_bandwidth,
            nt,
            nr,
            self.fading,
        )
    }

    pub fn with_fading(&self, fading: FadingFamily) -> Result<Self> {
        Self::new(
            self.snr_density,
            self.coherence_time,
            self.coherence_bandwidth,
            self.nt,
            self.nr,
            fading,
        )
    }

    /// Flat `key = value` encoding; `parse_scenario` reads it back exactly.
    pub fn to_kv_string(&self) -> String {
        format!(
            "snr_density_hz = {:e}\ncoherence_time_s = {:e}\ncoherence_bandwidth_hz = {:e}\nnt = {}\nnr = {}\nfading = {}\n",
            self.snr_density, self.coherence_time, self.coherence_bandwidth, self.nt, self.nr, self.fading
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }
}

/// SNR per degree of freedom, `(P/N0)/B`.
pub fn snr_per_dof(scenario: &ChannelScenario, bandwidth: f64) -> f64 {
    scenario.snr_density / bandwidth
}

/// A duty cycle `δ` and bandwidth `B` with their product `δB`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OccupancyPoint {
    delta: f64,
    bandwidth: f64,
    occupancy: f64,
}

impl OccupancyPoint {
    pub fn new(delta: f64, bandwidth: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::invalid(
                "delta",
                format!("duty cycle must lie in (0, 1], got {delta}"),
            ));
        }
        if !(bandwidth.is_finite() && bandwidth > 0.0) {
            return Err(Error::invalid(
                "bandwidth",
                format!("must be finite and > 0, got {bandwidth}"),
            ));
        }
        Ok(OccupancyPoint {
            delta,
            bandwidth,
            occupancy: delta * bandwidth,
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    /// `δB` in hertz.
    pub fn occupancy(&self) -> f64 {
        self.occupancy
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    snr_density_hz: Option<f64>,
    snr_density_db_hz: Option<f64>,
    coherence_time_s: Option<f64>,
    coherence_bandwidth_hz: Option<f64>,
    nt: Option<usize>,
    nr: Option<usize>,
    fading: Option<FadingFamily>,
}

impl RawScenario {
    fn build(self) -> Result<ChannelScenario> {
        let snr_density = match (self.snr_density_hz, self.snr_density_db_hz) {
            (Some(_), Some(_)) => {
                return Err(Error::invalid(
                    "snr_density_hz",
                    "give either snr_density_hz or snr_density_db_hz, not both",
                ))
            }
            (Some(v), None) => v,
            (None, Some(db)) => 10f64.powf(db / 10.0),
            (None, None) => return Err(Error::MissingField("snr_density_hz")),
        };
        ChannelScenario::new(
            snr_density,
            self.coherence_time_s.ok_or(Error::MissingField("coherence_time_s"))?,
            self.coherence_bandwidth_hz
                .ok_or(Error::MissingField("coherence_bandwidth_hz"))?,
            self.nt.ok_or(Error::MissingField("nt"))?,
            self.nr.ok_or(Error::MissingField("nr"))?,
            self.fading.ok_or(Error::MissingField("fading"))?,
        )
    }
}

/// Parse and validate a scenario document (flat or JSON form).
pub fn parse_scenario(text: &str) -> Result<ChannelScenario> {
    if text.trim_start().starts_with('{') {
        let raw: RawScenario = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        return raw.build();
    }

    let mut raw = RawScenario::default();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::Parse {
            line: lineno,
            message: format!("expected `key = value`, got `{content}`"),
        })?;
        let key = key.trim();
        let value = value.trim();
        let parse_err = |message: String| Error::Parse { line: lineno, message };
        let real = |v: &str| {
            v.parse::<f64>()
                .map_err(|e| parse_err(format!("`{key}`: cannot read `{v}` as a number: {e}")))
        };
        let count = |v: &str| {
            v.parse::<usize>()
                .map_err(|e| parse_err(format!("`{key}`: cannot read `{v}` as a positive integer: {e}")))
        };
        let duplicate = || parse_err(format!("duplicate key `{key}`"));
        match key {
            "snr_density_hz" => set_once(&mut raw.snr_density_hz, real(value)?).ok_or_else(duplicate)?,
            "snr_density_db_hz" => set_once(&mut raw.snr_density_db_hz, real(value)?).ok_or_else(duplicate)?,
            "coherence_time_s" => set_once(&mut raw.coherence_time_s, real(value)?).ok_or_else(duplicate)?,
            "coherence_bandwidth_hz" => {
                set_once(&mut raw.coherence_bandwidth_hz, real(value)?).ok_or_else(duplicate)?
            }
            "nt" => set_once(&mut raw.nt, count(value)?).ok_or_else(duplicate)?,
            "nr" => set_once(&mut raw.nr, count(value)?).ok_or_else(duplicate)?,
            "fading" => {
                let f = value.parse::<FadingFamily>().map_err(|e| parse_err(e.to_string()))?;
                set_once(&mut raw.fading, f).ok_or_else(duplicate)?
            }
            other => return Err(parse_err(format!("unknown key `{other}`"))),
        }
    }
    raw.build()
}

fn set_once<T>(slot: &mut Option<T>, value: T) -> Option<()> {
    if slot.is_some() {
        return None;
    }
    *slot = Some(value);
    Some(())
}

impl FromStr for ChannelScenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_scenario(s)
    }
}
