//! `occupancy`: tables of the wideband rate bounds, their optimizers and the
//! Monte-Carlo verification suite.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use occupancy_core::bounds::{critical_bracket, optimal_occupancy, wideband_limit};
use occupancy_core::mcverify::{run_verification, McConfig, VerifyOptions};
use occupancy_core::tables::{alpha_rows, bounds_rows, fig6_rows, Grid, SweepAxes, SweepSpec};
use occupancy_core::{parse_scenario, ChannelScenario};

use output::{write_out, Cell, Format, Table};

#[derive(Parser)]
#[command(
    name = "occupancy",
    version,
    about = "Rate bounds of non-coherent wideband MIMO channels versus bandwidth occupancy"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Scenario file (flat `key = value` or JSON)
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,

    /// Output path (default: stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Base seed for Monte-Carlo commands
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Monte-Carlo trials per check
    #[arg(long, global = true, default_value_t = 100_000)]
    trials: usize,

    /// Unit for frequency columns (display only)
    #[arg(long, global = true, value_enum, default_value_t = Unit::Hz)]
    unit: Unit,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Unit {
    Hz,
    Mhz,
}

impl Unit {
    fn scale(self, hz: f64) -> f64 {
        match self {
            Unit::Hz => hz,
            Unit::Mhz => hz / 1e6,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Lower/upper bounds over a (δ, B) plane or an occupancy grid
    Bounds {
        /// Duty-cycle grid, e.g. `log:1e-3:1:50`
        #[arg(long, requires = "bandwidth", conflicts_with = "occupancy")]
        delta: Option<Grid>,
        /// Bandwidth grid in Hz
        #[arg(long, requires = "delta")]
        bandwidth: Option<Grid>,
        /// Occupancy (δB) grid in Hz; default spans (δB)*/1e3 .. (δB)*·1e3
        #[arg(long)]
        occupancy: Option<Grid>,
        /// Minimum-gain times pilot-eigenvalue factor of the upper bound, in (0, 1]
        #[arg(long, default_value_t = 1.0)]
        penalty_factor: f64,
        /// Require the upper bound (an error for non-Rayleigh fading)
        #[arg(long, conflicts_with = "no_upper")]
        upper: bool,
        /// Omit the upper bound
        #[arg(long)]
        no_upper: bool,
    },
    /// Optimal occupancy, its bracket and the capacity gap
    Critical,
    /// Sublinear-exponent estimates over a grid of coherence products
    Alpha {
        /// SNR per degree of freedom, in (0, 1)
        #[arg(long)]
        snr: f64,
        /// Error percentages for α_min, comma-separated
        #[arg(long, value_delimiter = ',', default_value = "1,10")]
        p: Vec<f64>,
        /// Coherence-product grid
        #[arg(long, default_value = "log:1e2:1e8:61")]
        bctc: Grid,
        /// Transmit antennas when no scenario is given
        #[arg(long, default_value_t = 1)]
        nt: usize,
        /// Receive antennas when no scenario is given
        #[arg(long, default_value_t = 1)]
        nr: usize,
    },
    /// Exact and approximate bracket ends over antenna counts
    Fig6 {
        #[arg(long, default_value_t = 8)]
        max_antennas: usize,
    },
    /// Monte-Carlo and discrete-model verification suite
    Verify {
        /// Replace the kurtosis target (negative control)
        #[arg(long, hide = true)]
        kurtosis_override: Option<f64>,
        /// Worker threads (results do not depend on it)
        #[arg(long)]
        threads: Option<usize>,
    },
}

enum Failure {
    Verification(String),
    Input(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load_scenario(path: Option<&Path>) -> Result<ChannelScenario> {
    let path = path.context("--scenario <file> is required for this command")?;
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_scenario(&text).with_context(|| format!("in {}", path.display()))
}

fn run(cli: &Cli) -> std::result::Result<(), Failure> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Bounds {
            delta,
            bandwidth,
            occupancy,
            penalty_factor,
            upper,
            no_upper,
        } => {
            let s = load_scenario(cli.scenario.as_deref())?;
            let axes = match (delta, bandwidth, occupancy) {
                (Some(d), Some(b), None) => SweepAxes::Plane {
                    delta: d.clone(),
                    bandwidth: b.clone(),
                },
                (None, None, Some(g)) => SweepAxes::Occupancy(g.clone()),
                (None, None, None) => {
                    let star = optimal_occupancy(&s).map_err(anyhow::Error::from)?.occupancy_optimal;
                    SweepAxes::Occupancy(Grid::Log {
                        min: star / 1e3,
                        max: star * 1e3,
                        n: 121,
                    })
                }
                _ => return Err(anyhow::anyhow!("give --delta with --bandwidth, or --occupancy").into()),
            };
            if *upper && !s.fading().is_rayleigh() {
                return Err(anyhow::anyhow!(
                    "the upper bound is only available for Rayleigh fading (scenario has {})",
                    s.fading()
                )
                .into());
            }
            let with_upper = !no_upper && s.fading().is_rayleigh();
            let spec = SweepSpec {
                axes,
                penalty_factor: with_upper.then_some(*penalty_factor),
            };
            let rows = bounds_rows(&s, &spec).map_err(anyhow::Error::from)?;
            let mut header = vec!["delta", "B", "deltaB", "R_LB", "R_LB_plot"];
            if with_upper {
                header.push("R_UB");
            }
            header.extend(["C_inf", "gap"]);
            let mut t = Table::new(header);
            for r in rows {
                let mut row = vec![
                    Cell::Num(r.delta),
                    Cell::Num(cli.unit.scale(r.bandwidth)),
                    Cell::Num(cli.unit.scale(r.occupancy)),
                    Cell::Num(r.rate_lower),
                    Cell::Num(r.rate_lower_plot),
                ];
                if let Some(ub) = r.rate_upper {
                    row.push(Cell::Num(ub));
                }
                row.extend([Cell::Num(r.wideband_limit), Cell::Num(r.gap)]);
                t.push(row);
            }
            write_out(out, &t.render(cli.format)?)?;
        }
        Command::Critical => {
            let s = load_scenario(cli.scenario.as_deref())?;
            let b = critical_bracket(&s).map_err(anyhow::Error::from)?;
            let cinf = wideband_limit(&s);
            let mut t = Table::new([
                "deltaB_low",
                "deltaB_low_exact",
                "deltaB_opt",
                "deltaB_opt_exact",
                "deltaB_high_exact",
                "deltaB_high",
                "R_peak",
                "C_inf",
                "gap",
            ]);
            let f = |hz: f64| Cell::Num(cli.unit.scale(hz));
            t.push(vec![
                f(b.occupancy_low),
                f(b.occupancy_low_exact),
                f(b.occupancy_optimal),
                f(b.occupancy_optimal_exact),
                f(b.occupancy_high_exact),
                f(b.occupancy_high),
                Cell::Num(b.peak_rate_lower),
                Cell::Num(cinf),
                Cell::Num(b.gap_delta),
            ]);
            write_out(out, &t.render(cli.format)?)?;
            eprintln!(
                "(δB)* ≈ {:.4} MHz in [{:.4}, {:.4}] MHz; exact maximizer {:.4} MHz; capacity gap Δ = {:.4}; rate ≥ {:.4e} nats/s of C∞ = {:.4e}",
                b.occupancy_optimal / 1e6,
                b.occupancy_low / 1e6,
                b.occupancy_high / 1e6,
                b.occupancy_optimal_exact / 1e6,
                b.gap_delta,
                b.peak_rate_lower,
                cinf
            );
        }
        Command::Alpha { snr, p, bctc, nt, nr } => {
            let (nt, nr) = match cli.scenario.as_deref() {
                Some(path) => {
                    let s = load_scenario(Some(path))?;
                    (s.nt(), s.nr())
                }
                None => (*nt, *nr),
            };
            let rows = alpha_rows(nt, nr, *snr, &bctc.values(), p).map_err(anyhow::Error::from)?;
            let mut header: Vec<String> = vec!["BcTc".into(), "alpha_max".into(), "alpha_max_over_2".into()];
            header.extend(p.iter().map(|p| format!("alpha_min_p{p}")));
            header.extend(["alpha_plus".into(), "alpha_minus".into()]);
            header.extend(["alpha_max_norm".into(), "alpha_max_over_2_norm".into()]);
            header.extend(p.iter().map(|p| format!("alpha_min_p{p}_norm")));
            header.extend([
                "alpha_plus_norm".into(),
                "alpha_minus_norm".into(),
                "clamped".into(),
                "collapsed".into(),
            ]);
            let mut t = Table::new(header);
            for r in rows {
                let raw: Vec<f64> = [r.alpha_max, r.alpha_max_over_2]
                    .into_iter()
                    .chain(r.alpha_min.iter().map(|c| c.alpha_min))
                    .chain([r.alpha_plus, r.alpha_minus])
                    .collect();
                let ln_lc = r.bctc.ln();
                let mut row = vec![Cell::Num(r.bctc)];
                row.extend(raw.iter().map(|&a| Cell::Num(a)));
                row.extend(raw.iter().map(|&a| Cell::Num(a / ln_lc)));
                row.push(Cell::Bool(r.clamped));
                row.push(Cell::Bool(r.alpha_min.iter().any(|c| c.collapsed)));
                t.push(row);
            }
            write_out(out, &t.render(cli.format)?)?;
        }
        Command::Fig6 { max_antennas } => {
            if *max_antennas == 0 {
                return Err(anyhow::anyhow!("--max-antennas must be >= 1").into());
            }
            let scale = match cli.scenario.as_deref() {
                Some(path) => {
                    let s = load_scenario(Some(path))?;
                    let lc = s.coherence_product();
                    Some(s.snr_density() * (lc / lc.ln()).sqrt())
                }
                // normalized: P/N0·√(Lc/ln Lc) = 1, dimensionless
                None => None,
            };
            let rows = fig6_rows(*max_antennas);
            if let Some(r) = rows.iter().find(|r| !r.is_contained()) {
                return Err(Failure::Verification(format!(
                    "exact bracket not inside approximate one at nt={}, nr={}",
                    r.nt, r.nr
                )));
            }
            let mut t = Table::new([
                "nt",
                "nr",
                "B_low_exact",
                "B_low_approx",
                "B_high_exact",
                "B_high_approx",
            ]);
            let f = |x: f64| Cell::Num(scale.map_or(x, |hz| cli.unit.scale(x * hz)));
            for r in rows {
                t.push(vec![
                    Cell::Int(r.nt),
                    Cell::Int(r.nr),
                    f(r.b_low_exact),
                    f(r.b_low_approx),
                    f(r.b_high_exact),
                    f(r.b_high_approx),
                ]);
            }
            write_out(out, &t.render(cli.format)?)?;
        }
        Command::Verify {
            kurtosis_override,
            threads,
        } => {
            let s = load_scenario(cli.scenario.as_deref())?;
            let mut cfg = McConfig::new(cli.trials, cli.seed);
            if let Some(w) = threads {
                cfg = cfg.with_width(*w);
            }
            let opts = VerifyOptions {
                cfg,
                kurtosis_override: *kurtosis_override,
            };
            let report = run_verification(&s, &opts).map_err(anyhow::Error::from)?;
            let bytes = match cli.format {
                Format::Json => {
                    let mut b = report.to_json().into_bytes();
                    b.push(b'\n');
                    b
                }
                Format::Csv => {
                    let mut t = Table::new(["check", "estimate", "std_error", "z_score", "pass"]);
                    for c in &report.checks {
                        t.push(vec![
                            Cell::Text(c.check.clone()),
                            Cell::Num(c.estimate),
                            Cell::Num(c.std_error),
                            Cell::Num(c.z_score.unwrap_or(f64::NAN)),
                            Cell::Bool(c.pass),
                        ]);
                    }
                    t.render(Format::Csv)?
                }
            };
            write_out(out, &bytes)?;
            if !report.all_pass {
                return Err(Failure::Verification(report.failing().join(", ")));
            }
        }
    }
    Ok(())
}
