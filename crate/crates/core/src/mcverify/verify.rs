use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::checks::{
    bound_sandwich_sweep, coherent_quadratic_bound, coherent_term_mc, empirical_kurtosis, penalty_sandwich,
    trace_identity_check, trace_identity_target,
};
use super::{McConfig, McEstimate};
use crate::bounds::optimal_occupancy;
use crate::channel::{
    block_idft_matrix, circulant_eigenvalues, dense_gram_eigenvalues, filterbank_equivalence_check, frequency_response,
    naive_dft, precoding_identity_check, sample_taps, FilterBankCodeword, PilotCirculant,
};
use crate::error::Result;
use crate::linalg::max_abs_diff;
use crate::scenario::{ChannelScenario, FadingFamily};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub cfg: McConfig,
    /// Replace the closed-form kurtosis target (negative control).
    pub kurtosis_override: Option<f64>,
}

impl VerifyOptions {
    pub fn new(cfg: McConfig) -> Self {
        VerifyOptions {
            cfg,
            kurtosis_override: None,
        }
    }
}

/// One line of the verification report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub params: Value,
    pub estimate: f64,
    pub std_error: f64,
    pub bound_values: BTreeMap<String, f64>,
    pub pass: bool,
    /// Present for statistical checks.
    pub z_score: Option<f64>,
}

impl CheckRecord {
    fn exact(check: &str, params: Value, discrepancy: f64, tolerance: f64) -> Self {
        CheckRecord {
            check: check.into(),
            params,
            estimate: discrepancy,
            std_error: 0.0,
            bound_values: BTreeMap::from([("tolerance".into(), tolerance)]),
            pass: discrepancy < tolerance,
            z_score: None,
        }
    }

    fn failed(check: &str, params: Value, reason: String) -> Self {
        CheckRecord {
            check: check.into(),
            params: json!({ "setup": params, "error": reason }),
            estimate: f64::NAN,
            std_error: f64::NAN,
            bound_values: BTreeMap::new(),
            pass: false,
            z_score: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub scenario: ChannelScenario,
    pub trials: usize,
    pub base_seed: u64,
    pub checks: Vec<CheckRecord>,
    pub all_pass: bool,
}

impl VerificationReport {
    pub fn failing(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.check.as_str())
            .collect()
    }

    /// JSON with non-finite numbers written as `null`.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Sizes used for the discrete-model checks: `Lc = min(⌈Lc⌉, 64)`,
/// `M = min(4, 32/Nt)`, `K = M·Lc ≤ 256`.
fn desk_dims(scenario: &ChannelScenario) -> (usize, usize) {
    let lc = scenario.coherence_length().min(64);
    let m = (32 / scenario.nt()).clamp(1, 4);
    (lc, m)
}

/// Run every Monte-Carlo and discrete-model check on `scenario`.
pub fn run_verification(scenario: &ChannelScenario, opts: &VerifyOptions) -> Result<VerificationReport> {
    let cfg = opts.cfg;
    let mut checks = Vec::new();
    let star = optimal_occupancy(scenario)?.occupancy_optimal;
    let (lc_desk, m_desk) = desk_dims(scenario);
    let base = json!({ "nt": scenario.nt(), "nr": scenario.nr(), "fading": scenario.fading().to_string() });

    // kurtosis
    let fading = scenario.fading();
    let target = opts.kurtosis_override.unwrap_or_else(|| fading.kurtosis());
    let e = empirical_kurtosis(&fading, &cfg.reseeded(1))?;
    checks.push(statistical(
        "kurtosis",
        json!({ "fading": fading.to_string() }),
        e,
        target,
        "kurtosis",
    ));

    // fourth-moment trace identity
    let e = trace_identity_check(scenario, &cfg.reseeded(2))?;
    let target = trace_identity_target(scenario);
    checks.push(statistical(
        "trace_identity",
        base.clone(),
        e,
        target,
        "nt_nr_antenna_factor",
    ));

    // coherent term at the approximate optimum, one-sided
    let e = coherent_term_mc(scenario, star, &cfg.reseeded(3))?;
    let quad = coherent_quadratic_bound(scenario, star);
    checks.push(CheckRecord {
        check: "coherent_term".into(),
        params: json!({ "occupancy": star, "nt": scenario.nt(), "nr": scenario.nr() }),
        estimate: e.mean,
        std_error: e.std_error,
        bound_values: BTreeMap::from([("quadratic_lower".into(), quad)]),
        pass: e.at_least(quad),
        z_score: Some(e.z_score(quad)),
    });

    if fading.is_rayleigh() {
        let k = m_desk * lc_desk;
        let params = json!({ "occupancy": star, "k_samples": k, "coherence_length": lc_desk, "m_taps": m_desk });
        let desk = scenario.with_coherence(1.0, lc_desk as f64)?;
        match penalty_sandwich(&desk, star, k, &cfg.reseeded(4)) {
            Ok(p) => checks.push(CheckRecord {
                check: "penalty_term".into(),
                params,
                estimate: p.estimate.mean,
                std_error: p.estimate.std_error,
                bound_values: BTreeMap::from([
                    ("lower_chain".into(), p.lower_chain.mean),
                    ("upper_chain".into(), p.upper_chain),
                ]),
                pass: p.pass(),
                z_score: Some(p.estimate.z_score(p.upper_chain)),
            }),
            Err(err) => checks.push(CheckRecord::failed("penalty_term", params, err.to_string())),
        }

        let grid = [star / 10.0, star, 10.0 * star];
        for p in bound_sandwich_sweep(scenario, &grid, &cfg.reseeded(5))? {
            let mut bounds = BTreeMap::from([
                ("rate_lower".into(), p.rate_lower),
                ("upper_consistency".into(), p.upper_consistency),
                ("penalty_cap".into(), p.penalty_cap),
            ]);
            if let Some(ub) = p.rate_upper {
                bounds.insert("rate_upper".into(), ub);
            }
            checks.push(CheckRecord {
                check: "bound_sandwich".into(),
                params: json!({ "occupancy": p.occupancy }),
                estimate: p.mc_value.mean,
                std_error: p.mc_value.std_error,
                bound_values: bounds,
                pass: p.pass(),
                z_score: Some(p.mc_value.z_score(p.rate_lower)),
            });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(super::trial_seed(cfg.base_seed, u64::MAX));

    // eigenvalue formula on a square pilot, where it is exact
    let cols = m_desk * scenario.nt();
    let square = PilotCirculant::gaussian(cols, cols, &mut rng)?;
    let mut formula = circulant_eigenvalues(&square).eigenvalues;
    formula.sort_by(|a, b| a.total_cmp(b));
    let dense = dense_gram_eigenvalues(&square);
    let top = dense.last().copied().unwrap_or(1.0).max(f64::MIN_POSITIVE);
    let err = formula
        .iter()
        .zip(&dense)
        .map(|(a, b)| (a - b).abs() / top)
        .fold(0.0, f64::max);
    checks.push(CheckRecord::exact(
        "circulant_eigenvalues",
        json!({ "k_rows": cols, "cols": cols }),
        err,
        1e-9,
    ));

    // eigenvalue mean of a tall pilot
    let k = m_desk * lc_desk;
    if cols <= k {
        let tall = PilotCirculant::gaussian(k, cols, &mut rng)?;
        let mean = dense_gram_eigenvalues(&tall).iter().sum::<f64>() / (cols * k) as f64;
        checks.push(CheckRecord::exact(
            "pilot_eigenvalue_mean",
            json!({ "k_rows": k, "cols": cols }),
            (mean - 1.0).abs(),
            1e-12,
        ));
    }

    // DFT against direct summation
    let desk = scenario.with_coherence(1.0, lc_desk as f64)?;
    let ch = frequency_response(sample_taps(&desk, k, rng_seed(&mut rng))?);
    let blocks = ch.freq_blocks().expect("populated");
    let mut err = 0.0f64;
    for v in 0..ch.nr() {
        for u in 0..ch.nt() {
            for (kk, o) in naive_dft(ch.taps(v, u), k).iter().enumerate() {
                err = err.max((blocks[kk][(v, u)] - o).norm());
            }
        }
    }
    checks.push(CheckRecord::exact(
        "dft_oracle",
        json!({ "k_samples": k, "m_taps": m_desk }),
        err,
        1e-12,
    ));

    // filter-bank equivalence, SISO, M = 4, Lc = 8
    let siso = ChannelScenario::with_coherence_product(1.0, 8.0, 1, 1, FadingFamily::Rayleigh)?;
    let ch = sample_taps(&siso, 32, rng_seed(&mut rng))?;
    let cw = FilterBankCodeword::gaussian(4, 8, &mut rng);
    let fb = json!({ "m_bins": 4, "l_symbols": 8 });
    checks.push(CheckRecord::exact(
        "filterbank_equivalence",
        fb.clone(),
        filterbank_equivalence_check(&cw, &ch)?,
        1e-9,
    ));
    checks.push(CheckRecord::exact(
        "precoding_identity",
        fb.clone(),
        precoding_identity_check(&cw, &ch)?,
        1e-12,
    ));
    let phi = block_idft_matrix(8, 4);
    let unit = max_abs_diff(&(&phi * phi.adjoint()), &nalgebra::DMatrix::identity(32, 32));
    checks.push(CheckRecord::exact("block_idft_unitarity", fb, unit, 1e-12));

    let all_pass = checks.iter().all(|c| c.pass);
    Ok(VerificationReport {
        scenario: scenario.clone(),
        trials: cfg.trials,
        base_seed: cfg.base_seed,
        checks,
        all_pass,
    })
}

fn rng_seed(rng: &mut ChaCha8Rng) -> u64 {
    rand::Rng::random(rng)
}

fn statistical(check: &str, params: Value, e: McEstimate, target: f64, name: &str) -> CheckRecord {
    CheckRecord {
        check: check.into(),
        params,
        estimate: e.mean,
        std_error: e.std_error,
        bound_values: BTreeMap::from([(name.into(), target)]),
        pass: e.agrees_with(target),
        z_score: Some(e.z_score(target)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn siso() -> ChannelScenario {
        ChannelScenario::with_coherence_product(100.0, 1e3, 1, 1, FadingFamily::Rayleigh).unwrap()
    }

    #[test]
    fn default_siso_passes_and_is_deterministic() {
        let opts = VerifyOptions::new(McConfig::new(20_000, 42));
        let a = run_verification(&siso(), &opts).unwrap();
        assert!(a.all_pass, "failing: {:?}", a.failing());
        let b = run_verification(&siso(), &VerifyOptions::new(McConfig::new(20_000, 42).with_width(2))).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn corrupted_kurtosis_fails() {
        let mut opts = VerifyOptions::new(McConfig::new(20_000, 42));
        opts.kurtosis_override = Some(2.5);
        let r = run_verification(&siso(), &opts).unwrap();
        let k = r.checks.iter().find(|c| c.check == "kurtosis").unwrap();
        assert!(!k.pass);
        assert!(k.z_score.unwrap().abs() > 4.0);
        assert_eq!(r.failing(), vec!["kurtosis"]);
    }

    #[test]
    fn non_rayleigh_skips_penalty() {
        let s = siso().with_fading(FadingFamily::Nakagami { m: 2.0 }).unwrap();
        let r = run_verification(&s, &VerifyOptions::new(McConfig::new(20_000, 1))).unwrap();
        assert!(r.checks.iter().all(|c| c.check != "penalty_term"));
        assert!(r.all_pass, "failing: {:?}", r.failing());
    }
}
